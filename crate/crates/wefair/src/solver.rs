//! Optimal classifiers: unconstrained, group-unaware, and welfare-equalizing.
//!
//! The unconstrained optimum is a per-cell profitability threshold. The
//! WE optimum is computed two ways: the primary algorithm builds, per
//! group, the exact piecewise-linear concave curve of maximal conditional
//! revenue versus welfare and maximizes their mass-weighted sum over the
//! common welfare level; the cross-check algorithm scalarizes the single
//! equality constraint with a multiplier and bisects on the welfare gap.
//! Both reconstruct the same threshold-with-ties classifier shape.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::concepts::UtilityTable;
use crate::error::Error;
use crate::population::{Group, Population};
use crate::WELFARE_TOLERANCE;

/// Relative half-width of the knife-edge band when comparing a cell's
/// margin against its threshold value.
pub const THRESHOLD_TOLERANCE: f64 = 1e-12;

/// Absolute slack accepted outside a curve's welfare domain before
/// evaluation errors.
pub const CURVE_DOMAIN_SLACK: f64 = 1e-9;

/// Default interval tolerance for the bisection multiplier.
pub const DEFAULT_BISECTION_TOLERANCE: f64 = 1e-12;

const MAX_BRACKET_DOUBLINGS: u32 = 128;

/// A randomized classifier: per-cell approval probabilities.
///
/// Entries iterate sorted by (label, group), the order used by the CSV
/// interchange format.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    values: BTreeMap<(String, Group), f64>,
}

impl Classifier {
    /// Validates that every value lies in [0, 1].
    pub fn new(values: BTreeMap<(String, Group), f64>) -> Result<Self, Error> {
        for ((x, a), &c) in &values {
            if !(c.is_finite() && (0.0..=1.0).contains(&c)) {
                return Err(Error::ClassifierOutOfRange {
                    x: x.clone(),
                    a: *a,
                    c,
                });
            }
        }
        Ok(Classifier { values })
    }

    /// Builds a classifier from values listed in the population's cell
    /// order.
    ///
    /// # Panics
    ///
    /// Panics if the value count differs from the cell count.
    pub fn from_aligned(pop: &Population, values: Vec<f64>) -> Result<Self, Error> {
        assert_eq!(
            values.len(),
            pop.cells().len(),
            "one value per population cell"
        );
        let map = pop
            .cells()
            .iter()
            .zip(values)
            .map(|(cell, c)| ((cell.x.clone(), cell.a), c))
            .collect();
        Classifier::new(map)
    }

    /// The all-reject classifier on a population's cells.
    pub fn zero(pop: &Population) -> Self {
        Classifier::from_aligned(pop, vec![0.0; pop.cells().len()]).expect("zero lies in [0, 1]")
    }

    /// Approval probability of one cell; cells outside the domain read 0.
    pub fn get(&self, x: &str, a: Group) -> f64 {
        self.values.get(&(x.to_owned(), a)).copied().unwrap_or(0.0)
    }

    /// Entries sorted by (label, group).
    pub fn entries(&self) -> impl Iterator<Item = (&str, Group, f64)> {
        self.values.iter().map(|((x, a), &c)| (x.as_str(), *a, c))
    }

    /// Verifies the domain equals the population's cell set exactly.
    pub fn check_domain(&self, pop: &Population) -> Result<(), Error> {
        for cell in pop.cells() {
            if !self.values.contains_key(&(cell.x.clone(), cell.a)) {
                return Err(Error::DomainMismatch {
                    x: cell.x.clone(),
                    a: cell.a,
                });
            }
        }
        if self.values.len() != pop.cells().len() {
            let (x, a) = self
                .values
                .keys()
                .find(|(x, a)| pop.find(x, *a).is_none())
                .expect("an extra entry exists when sizes differ");
            return Err(Error::DomainMismatch {
                x: x.clone(),
                a: *a,
            });
        }
        Ok(())
    }

    /// Values in the population's cell order; absent cells read 0.
    pub fn aligned(&self, pop: &Population) -> Vec<f64> {
        pop.cells()
            .iter()
            .map(|cell| self.get(&cell.x, cell.a))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct ClassifierEntry {
    x: String,
    a: Group,
    c: f64,
}

impl Serialize for Classifier {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.values.iter().map(|((x, a), &c)| ClassifierEntry {
            x: x.clone(),
            a: *a,
            c,
        }))
    }
}

impl<'de> Deserialize<'de> for Classifier {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let entries = Vec::<ClassifierEntry>::deserialize(deserializer)?;
        let mut values = BTreeMap::new();
        for e in entries {
            if values.insert((e.x.clone(), e.a), e.c).is_some() {
                return Err(D::Error::custom(format!(
                    "duplicate cell ({}, {})",
                    e.x, e.a
                )));
            }
        }
        Classifier::new(values).map_err(D::Error::custom)
    }
}

/// A deterministic threshold classifier with its expected revenue.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSolution {
    pub classifier: Classifier,
    pub revenue: f64,
}

/// Revenue-maximal classifier with no fairness constraint: approve a cell
/// exactly when its margin is positive. Knife-edge cells (zero margin)
/// are rejected, the variant giving out fewer loans.
pub fn solve_unconstrained(pop: &Population) -> ThresholdSolution {
    let mut revenue = 0.0;
    let values = pop
        .cells()
        .iter()
        .map(|cell| {
            if cell.margin() > 0.0 {
                revenue += cell.mass * cell.margin();
                1.0
            } else {
                0.0
            }
        })
        .collect();
    ThresholdSolution {
        classifier: Classifier::from_aligned(pop, values).expect("thresholds are 0/1"),
        revenue,
    }
}

/// Revenue-maximal classifier that may not read the group: both cells of
/// a label share one decision, driven by the pooled repayment probability
/// P(Y = 1 | X = x). The same knife-edge rule rejects ties.
pub fn solve_unaware(pop: &Population) -> ThresholdSolution {
    let mut revenue = 0.0;
    let values = pop
        .cells()
        .iter()
        .map(|cell| {
            let pooled = pop.pooled_p(&cell.x);
            if pooled > cell.break_even() {
                revenue += cell.mass * cell.margin();
                1.0
            } else {
                0.0
            }
        })
        .collect();
    ThresholdSolution {
        classifier: Classifier::from_aligned(pop, values).expect("thresholds are 0/1"),
        revenue,
    }
}

/// One breakpoint of a welfare-revenue curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Group-conditional welfare level.
    pub w: f64,
    /// Maximal group-conditional revenue at that level.
    pub value: f64,
}

/// One linear piece of the curve: the cell consumed on it, the exact
/// revenue-per-welfare slope r/ubar, and the welfare and revenue spans.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSegment {
    pub x: String,
    pub slope: f64,
    pub welfare_step: f64,
    pub revenue_step: f64,
}

/// Maximal conditional revenue of one group as a function of the welfare
/// granted to it: piecewise linear and concave, built by approving cells
/// in decreasing revenue-per-welfare order.
///
/// Slopes are stored as the exact per-cell ratio r/ubar, so the
/// nonincreasing-slopes invariant holds bit for bit by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcaveCurve {
    group: Group,
    baseline: f64,
    points: Vec<CurvePoint>,
    segments: Vec<CurveSegment>,
}

impl ConcaveCurve {
    /// The group this curve describes.
    pub fn group(&self) -> Group {
        self.group
    }

    /// Revenue of the zero-welfare optimum: cells without welfare impact
    /// approved by plain profitability.
    pub fn baseline(&self) -> f64 {
        self.baseline
    }

    /// Breakpoints in increasing welfare order, starting at (0, baseline).
    pub fn points(&self) -> &[CurvePoint] {
        &self.points
    }

    /// Segments between consecutive breakpoints, slopes nonincreasing.
    pub fn segments(&self) -> &[CurveSegment] {
        &self.segments
    }

    /// Upper end of the welfare domain: the group's expected utility
    /// under full approval.
    pub fn w_max(&self) -> f64 {
        self.points.last().expect("curves have a first point").w
    }

    /// Curve value at `w`, which must lie in the domain up to
    /// `CURVE_DOMAIN_SLACK`.
    pub fn value_at(&self, w: f64) -> Result<f64, Error> {
        let w_max = self.w_max();
        if !w.is_finite() || w < -CURVE_DOMAIN_SLACK || w > w_max + CURVE_DOMAIN_SLACK {
            return Err(Error::WOutOfDomain {
                w,
                w_max,
                slack: CURVE_DOMAIN_SLACK,
            });
        }
        Ok(self.value_clamped(w))
    }

    /// Curve value with `w` clamped into the domain.
    pub fn value_clamped(&self, w: f64) -> f64 {
        if self.segments.is_empty() {
            return self.baseline;
        }
        let w = w.clamp(0.0, self.w_max());
        if w >= self.w_max() {
            return self.points.last().expect("nonempty").value;
        }
        // Index of the last breakpoint at or before w; evaluating at a
        // breakpoint returns its stored value exactly.
        let k = self.points.partition_point(|pt| pt.w <= w) - 1;
        let base = &self.points[k.min(self.segments.len() - 1)];
        base.value + self.segments[k.min(self.segments.len() - 1)].slope * (w - base.w)
    }

    /// Right slope at `w` (a supergradient element); at the domain's top
    /// the left slope, and 0 on a degenerate single-point curve.
    pub fn lambda_at(&self, w: f64) -> f64 {
        let Some(last) = self.segments.last() else {
            return 0.0;
        };
        let eps = THRESHOLD_TOLERANCE * (1.0 + w.abs());
        if w >= self.w_max() - eps {
            return last.slope;
        }
        let k = self.points.partition_point(|pt| pt.w <= w + eps) - 1;
        self.segments[k.min(self.segments.len() - 1)].slope
    }
}

/// Builds the exact revenue-versus-welfare curve of one group.
///
/// Cells with ubar = 0 cannot carry welfare; the profitable ones form the
/// flat baseline. Every other cell with positive conditional mass is
/// swept in decreasing r/ubar order (ties by label), accumulating
/// breakpoints; sorting by the ratio makes concavity exact on the stored
/// slopes.
pub fn welfare_curve(pop: &Population, u: &UtilityTable, a: Group) -> Result<ConcaveCurve, Error> {
    u.check_domain(pop)?;
    let mut baseline = 0.0;
    let mut sweep: Vec<CurveSegment> = Vec::new();
    for (cell, e) in pop.cells().iter().zip(u.entries()) {
        if cell.a != a {
            continue;
        }
        let r = cell.margin();
        let q = pop.conditional_mass(cell);
        // ubar is a sum of nonnegative terms: exactly 0 means no welfare
        // impact under any approval probability.
        if e.mean == 0.0 {
            if r > 0.0 {
                baseline += q * r;
            }
            continue;
        }
        let welfare_step = q * e.mean;
        if welfare_step <= 0.0 {
            // Zero-mass cell: no revenue or welfare contribution; the
            // threshold rule still classifies it at reconstruction.
            continue;
        }
        sweep.push(CurveSegment {
            x: cell.x.clone(),
            slope: r / e.mean,
            welfare_step,
            revenue_step: q * r,
        });
    }
    sweep.sort_by(|l, r| r.slope.total_cmp(&l.slope).then_with(|| l.x.cmp(&r.x)));

    let mut points = vec![CurvePoint {
        w: 0.0,
        value: baseline,
    }];
    let mut w = 0.0;
    let mut value = baseline;
    for seg in &sweep {
        w += seg.welfare_step;
        value += seg.revenue_step;
        points.push(CurvePoint { w, value });
    }
    Ok(ConcaveCurve {
        group: a,
        baseline,
        points,
        segments: sweep,
    })
}

/// Which algorithm produced a `WeSolveResult`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Curve,
    Bisection,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Curve => "curve",
            Algorithm::Bisection => "bisection",
        })
    }
}

/// A knife-edge cell (margin equal to its threshold value) and the
/// fractional approval assigned to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TieCell {
    pub x: String,
    pub a: Group,
    pub tau: f64,
}

/// Optimal welfare-equalizing classifier with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeSolveResult {
    /// Expected revenue of the classifier.
    pub revenue: f64,
    /// Common group-conditional welfare level.
    pub w_star: f64,
    /// Realized per-group welfare; the two entries agree within 1e-9.
    pub welfare: [f64; 2],
    /// Per-group threshold multipliers: cells are approved when
    /// r > lambda_a * ubar and rejected when r < lambda_a * ubar.
    pub lambda: [f64; 2],
    pub classifier: Classifier,
    /// Cells on the threshold, carrying the fractional approvals.
    pub tie_cells: Vec<TieCell>,
    pub algorithm: Algorithm,
}

/// Cells partitioned by the per-group threshold rule: strict approvals
/// at 1, strict rejections at 0, knife-edge cells listed for later
/// fractional assignment.
struct ThresholdSplit {
    values: Vec<f64>,
    ties: Vec<usize>,
    strict_welfare: [f64; 2],
    tie_capacity: [f64; 2],
}

fn split_at_thresholds(pop: &Population, u: &UtilityTable, lambda: [f64; 2]) -> ThresholdSplit {
    let mut split = ThresholdSplit {
        values: vec![0.0; pop.cells().len()],
        ties: Vec::new(),
        strict_welfare: [0.0; 2],
        tie_capacity: [0.0; 2],
    };
    for (i, (cell, e)) in pop.cells().iter().zip(u.entries()).enumerate() {
        let r = cell.margin();
        if e.mean == 0.0 {
            // No welfare impact: plain profitability decides, rejecting
            // knife-edge cells.
            if r > 0.0 {
                split.values[i] = 1.0;
            }
            continue;
        }
        let a = cell.a.index();
        let threshold = lambda[a] * e.mean;
        let d = r - threshold;
        let band = THRESHOLD_TOLERANCE * (1.0 + r.abs() + threshold.abs());
        if d > band {
            split.values[i] = 1.0;
            split.strict_welfare[a] += pop.conditional_mass(cell) * e.mean;
        } else if d >= -band {
            split.ties.push(i);
            split.tie_capacity[a] += pop.conditional_mass(cell) * e.mean;
        }
    }
    split
}

fn assemble(
    pop: &Population,
    u: &UtilityTable,
    split: ThresholdSplit,
    lambda: [f64; 2],
    w_star: f64,
    algorithm: Algorithm,
) -> WeSolveResult {
    let mut welfare = [0.0_f64; 2];
    let mut revenue = 0.0;
    for (i, (cell, e)) in pop.cells().iter().zip(u.entries()).enumerate() {
        let c = split.values[i];
        welfare[cell.a.index()] += pop.conditional_mass(cell) * e.mean * c;
        revenue += cell.mass * cell.margin() * c;
    }
    let tie_cells = split
        .ties
        .iter()
        .map(|&i| {
            let cell = &pop.cells()[i];
            TieCell {
                x: cell.x.clone(),
                a: cell.a,
                tau: split.values[i],
            }
        })
        .collect();
    let classifier =
        Classifier::from_aligned(pop, split.values).expect("threshold rule stays in [0, 1]");
    WeSolveResult {
        revenue,
        w_star,
        welfare,
        lambda,
        classifier,
        tie_cells,
        algorithm,
    }
}

/// Revenue-optimal welfare-equalizing classifier, exact curve algorithm.
///
/// Builds both groups' curves and maximizes the mass-weighted revenue
/// F(w) = P(A=0) R0(w) + P(A=1) R1(w) over the common domain. F is
/// piecewise linear and concave, so a breakpoint or endpoint attains the
/// maximum; the largest maximizer is taken, granting the most welfare
/// at no revenue cost. Per-group threshold multipliers are the right
/// slopes at w*; knife-edge cells share one fractional value per group,
/// chosen to land the group's welfare exactly on w*.
pub fn solve_we(pop: &Population, u: &UtilityTable) -> Result<WeSolveResult, Error> {
    u.check_domain(pop)?;
    let curves = [
        welfare_curve(pop, u, Group::Zero)?,
        welfare_curve(pop, u, Group::One)?,
    ];
    let w_hi = curves[0].w_max().min(curves[1].w_max());

    let mut candidates = vec![0.0, w_hi];
    for curve in &curves {
        candidates.extend(
            curve
                .points()
                .iter()
                .map(|pt| pt.w)
                .filter(|&w| w > 0.0 && w < w_hi),
        );
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let objective = |w: f64| {
        pop.group_mass(Group::Zero) * curves[0].value_clamped(w)
            + pop.group_mass(Group::One) * curves[1].value_clamped(w)
    };
    let values: Vec<f64> = candidates.iter().map(|&w| objective(w)).collect();
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let plateau = THRESHOLD_TOLERANCE * (1.0 + best.abs());
    let mut w_star = 0.0;
    for (&w, &value) in candidates.iter().zip(&values) {
        if value >= best - plateau {
            w_star = w;
        }
    }

    let lambda = [curves[0].lambda_at(w_star), curves[1].lambda_at(w_star)];
    let mut split = split_at_thresholds(pop, u, lambda);
    for a in Group::BOTH {
        let i = a.index();
        let tau = if split.tie_capacity[i] > 0.0 {
            ((w_star - split.strict_welfare[i]) / split.tie_capacity[i]).clamp(0.0, 1.0)
        } else {
            0.0
        };
        for &j in &split.ties {
            if pop.cells()[j].a == a {
                split.values[j] = tau;
            }
        }
    }
    Ok(assemble(pop, u, split, lambda, w_star, Algorithm::Curve))
}

fn positive_zero(v: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v
    }
}

/// Revenue-optimal welfare-equalizing classifier via multiplier
/// bisection, an independent cross-check of [`solve_we`].
///
/// The single equality constraint is scalarized with a multiplier mu,
/// giving per-group thresholds lambda_0 = mu / P(A=0) and
/// lambda_1 = -mu / P(A=1). The welfare gap g(mu) = W(0) - W(1) of the
/// strict threshold classifier (knife-edge cells at 0) is a nonincreasing
/// step function of mu; bisection brackets its zero or jump, the
/// multiplier snaps to the nearest per-cell jump candidate, and the
/// residual gap is spread uniformly over the short side's knife-edge
/// cells.
///
/// `tol` is the interval width at which bisection stops; the default is
/// `DEFAULT_BISECTION_TOLERANCE`.
///
/// # Panics
///
/// Panics if `tol` is not positive and finite.
pub fn solve_we_bisection(
    pop: &Population,
    u: &UtilityTable,
    tol: f64,
) -> Result<WeSolveResult, Error> {
    assert!(
        tol > 0.0 && tol.is_finite(),
        "bisection tolerance must be positive and finite"
    );
    u.check_domain(pop)?;
    let p_mass = [pop.group_mass(Group::Zero), pop.group_mass(Group::One)];

    struct Swept {
        a: usize,
        ratio: f64,
        welfare: f64,
    }
    let mut swept = Vec::new();
    for (cell, e) in pop.cells().iter().zip(u.entries()) {
        if e.mean == 0.0 {
            continue;
        }
        let welfare = pop.conditional_mass(cell) * e.mean;
        if welfare <= 0.0 {
            continue;
        }
        swept.push(Swept {
            a: cell.a.index(),
            ratio: cell.margin() / e.mean,
            welfare,
        });
    }

    let lambda_of = |mu: f64| {
        [
            positive_zero(mu / p_mass[0]),
            positive_zero(-mu / p_mass[1]),
        ]
    };
    let gap_at = |mu: f64| {
        let lambda = lambda_of(mu);
        let mut w = [0.0_f64; 2];
        for s in &swept {
            if s.ratio > lambda[s.a] {
                w[s.a] += s.welfare;
            }
        }
        w[0] - w[1]
    };
    // Welfare-scaled band inside which the gap counts as closed.
    let scale = u.expected(pop, Group::Zero) + u.expected(pop, Group::One);
    let gap_eps = 1e-13 * (1.0 + scale);

    let g0 = gap_at(0.0);
    let mut doublings = 0;
    let mu_star = 'found: {
        if g0.abs() <= gap_eps {
            break 'found 0.0;
        }
        // Expand the bracket away from 0 on the side the gap's sign
        // dictates; g is nonincreasing, so the inner endpoint keeps the
        // sign of g(0).
        let (mut lo, mut hi) = if g0 > 0.0 { (0.0, 1.0) } else { (-1.0, 0.0) };
        loop {
            let outer = if g0 > 0.0 { hi } else { lo };
            let g_outer = gap_at(outer);
            if g_outer.abs() <= gap_eps {
                break 'found outer;
            }
            if (g_outer > 0.0) != (g0 > 0.0) {
                break;
            }
            doublings += 1;
            if doublings > MAX_BRACKET_DOUBLINGS {
                return Err(Error::BracketNotFound {
                    doublings: MAX_BRACKET_DOUBLINGS,
                });
            }
            if g0 > 0.0 {
                lo = hi;
                hi *= 2.0;
            } else {
                hi = lo;
                lo *= 2.0;
            }
        }
        // Invariant: g(lo) > gap_eps and g(hi) < -gap_eps.
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            let g_mid = gap_at(mid);
            if g_mid.abs() <= gap_eps {
                break 'found mid;
            }
            if g_mid > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // The gap jumps across zero inside [lo, hi]: the jump sits at a
        // per-cell candidate multiplier. Snap to the candidate closest to
        // the bracket midpoint so the knife-edge cell is exact.
        let mid = 0.5 * (lo + hi);
        let pad = tol.max(THRESHOLD_TOLERANCE * (1.0 + lo.abs() + hi.abs()));
        let mut snapped = mid;
        let mut best = f64::INFINITY;
        for s in &swept {
            let candidate = if s.a == 0 {
                p_mass[0] * s.ratio
            } else {
                -p_mass[1] * s.ratio
            };
            if candidate < lo - pad || candidate > hi + pad {
                continue;
            }
            let distance = (candidate - mid).abs();
            if distance < best || (distance == best && candidate < snapped) {
                best = distance;
                snapped = candidate;
            }
        }
        snapped
    };

    let lambda = lambda_of(mu_star);
    let mut split = split_at_thresholds(pop, u, lambda);
    let gap = split.strict_welfare[0] - split.strict_welfare[1];
    if gap.abs() > gap_eps {
        // The short side tops up through its knife-edge cells.
        let needy = if gap < 0.0 { 0 } else { 1 };
        let need = gap.abs();
        let capacity = split.tie_capacity[needy];
        if need > capacity + WELFARE_TOLERANCE {
            return Err(Error::BracketNotFound { doublings });
        }
        let tau = if capacity > 0.0 {
            (need / capacity).clamp(0.0, 1.0)
        } else {
            0.0
        };
        for &j in &split.ties {
            if pop.cells()[j].a.index() == needy {
                split.values[j] = tau;
            }
        }
    }
    let mut result = assemble(pop, u, split, lambda, 0.0, Algorithm::Bisection);
    result.w_star = 0.5 * (result.welfare[0] + result.welfare[1]);
    Ok(result)
}

/// Scales the higher-welfare group's approvals down so both group
/// welfares agree up to roundoff. Classifiers with exactly equal
/// welfares, including c = 0, are returned unchanged.
pub fn rescale_to_exact_equality(
    c: &Classifier,
    pop: &Population,
    u: &UtilityTable,
) -> Result<Classifier, Error> {
    c.check_domain(pop)?;
    u.check_domain(pop)?;
    let values = c.aligned(pop);
    let mut welfare = [0.0_f64; 2];
    for ((cell, e), &v) in pop.cells().iter().zip(u.entries()).zip(&values) {
        welfare[cell.a.index()] += pop.conditional_mass(cell) * e.mean * v;
    }
    if welfare[0] == welfare[1] {
        return Ok(c.clone());
    }
    let higher = if welfare[0] > welfare[1] {
        Group::Zero
    } else {
        Group::One
    };
    let factor = welfare[higher.other().index()] / welfare[higher.index()];
    let rescaled = pop
        .cells()
        .iter()
        .zip(values)
        .map(|(cell, v)| if cell.a == higher { v * factor } else { v })
        .collect();
    Classifier::from_aligned(pop, rescaled)
}
