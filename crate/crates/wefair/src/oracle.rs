//! Independent brute-force optimizer over discretized classifier grids.
//!
//! The oracle shares no code with the exact solvers: it enumerates every
//! classifier whose values lie on a uniform grid and keeps the best one
//! meeting the welfare constraint within a slack band. On small
//! instances it certifies solver outputs up to the grid's resolution.

use crate::concepts::UtilityTable;
use crate::error::Error;
use crate::population::{Group, Population};
use crate::solver::{Classifier, CURVE_DOMAIN_SLACK};

/// Enumeration bound: grids over more cells than this are refused.
pub const MAX_ORACLE_CELLS: usize = 8;

/// Discretization of the classifier search space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Classifier values are restricted to {0, 1/k, ..., 1}.
    pub resolution: usize,
    /// Acceptance band for near-equal welfare; `None` derives
    /// max_cell(P(x|a) * ubar) / resolution, the coarsest welfare step a
    /// single cell can take, so the feasible set is never vacuously
    /// empty.
    pub welfare_slack: Option<f64>,
}

impl GridSpec {
    /// Grid with the given resolution and the derived default slack.
    pub fn new(resolution: usize) -> Self {
        GridSpec {
            resolution,
            welfare_slack: None,
        }
    }

    /// Grid with an explicit slack band.
    pub fn with_slack(resolution: usize, welfare_slack: f64) -> Self {
        GridSpec {
            resolution,
            welfare_slack: Some(welfare_slack),
        }
    }

    fn validate(&self) -> (usize, Option<f64>) {
        assert!(self.resolution >= 1, "grid resolution must be at least 1");
        if let Some(slack) = self.welfare_slack {
            assert!(
                slack >= 0.0 && slack.is_finite(),
                "welfare slack must be nonnegative and finite"
            );
        }
        (self.resolution, self.welfare_slack)
    }
}

/// A grid classifier and its expected revenue.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution {
    pub classifier: Classifier,
    pub revenue: f64,
}

/// Per-cell quantities the enumeration needs, in population cell order.
struct Tableau {
    /// Revenue of full approval: mass * margin.
    revenue: Vec<f64>,
    /// Welfare of full approval: P(x|a) * ubar, signed into the gap as
    /// +w for group 0 and -w for group 1.
    welfare: Vec<f64>,
    group: Vec<usize>,
    /// suffix_gain[i]: largest revenue still collectable from cells i..
    suffix_gain: Vec<f64>,
    /// suffix_up[i] / suffix_down[i]: how far the welfare gap can still
    /// move in each direction from cells i..
    suffix_up: Vec<f64>,
    suffix_down: Vec<f64>,
}

impl Tableau {
    fn build(pop: &Population, u: &UtilityTable, keep: impl Fn(Group) -> bool) -> Tableau {
        let mut revenue = Vec::new();
        let mut welfare = Vec::new();
        let mut group = Vec::new();
        for (cell, e) in pop.cells().iter().zip(u.entries()) {
            if !keep(cell.a) {
                continue;
            }
            revenue.push(cell.mass * cell.margin());
            welfare.push(pop.conditional_mass(cell) * e.mean);
            group.push(cell.a.index());
        }
        let n = revenue.len();
        let mut suffix_gain = vec![0.0; n + 1];
        let mut suffix_up = vec![0.0; n + 1];
        let mut suffix_down = vec![0.0; n + 1];
        for i in (0..n).rev() {
            suffix_gain[i] = suffix_gain[i + 1] + revenue[i].max(0.0);
            let (up, down) = if group[i] == 0 {
                (welfare[i], 0.0)
            } else {
                (0.0, welfare[i])
            };
            suffix_up[i] = suffix_up[i + 1] + up;
            suffix_down[i] = suffix_down[i + 1] + down;
        }
        Tableau {
            revenue,
            welfare,
            group,
            suffix_gain,
            suffix_up,
            suffix_down,
        }
    }

    fn len(&self) -> usize {
        self.revenue.len()
    }

    /// Largest single-cell welfare step, the basis of the default slack.
    fn max_welfare_step(&self) -> f64 {
        self.welfare.iter().copied().fold(0.0, f64::max)
    }
}

/// Depth-first enumeration state. `gap` carries W(0) - W(1) for the
/// two-group search and W(a) - target for the curve-point search.
struct Search<'t> {
    tableau: &'t Tableau,
    resolution: usize,
    slack: f64,
    values: Vec<f64>,
    best_revenue: f64,
    best_values: Option<Vec<f64>>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, revenue: f64, gap: f64) {
        let t = self.tableau;
        if i == t.len() {
            if gap.abs() <= self.slack && revenue > self.best_revenue {
                self.best_revenue = revenue;
                self.best_values = Some(self.values.clone());
            }
            return;
        }
        // No remaining assignment can strictly beat the incumbent.
        if revenue + t.suffix_gain[i] <= self.best_revenue {
            return;
        }
        // No remaining assignment can bring the gap into the band.
        if gap - t.suffix_down[i] > self.slack || gap + t.suffix_up[i] < -self.slack {
            return;
        }
        for j in 0..=self.resolution {
            let c = j as f64 / self.resolution as f64;
            self.values[i] = c;
            let signed = if t.group[i] == 0 { 1.0 } else { -1.0 };
            self.run(
                i + 1,
                revenue + t.revenue[i] * c,
                gap + signed * t.welfare[i] * c,
            );
        }
        self.values[i] = 0.0;
    }
}

/// Best grid classifier whose group welfares agree within the slack.
///
/// The true WE-optimal revenue lies within L/k of the result, where
/// L = sum of mass * |margin| and k the resolution. Enumeration visits
/// values in increasing order, so among equally good classifiers the
/// lexicographically smallest aligned value vector wins.
///
/// # Panics
///
/// Panics if the grid fields violate their invariants (resolution >= 1,
/// slack nonnegative).
pub fn brute_force_we(
    pop: &Population,
    u: &UtilityTable,
    grid: GridSpec,
) -> Result<OracleSolution, Error> {
    let (resolution, slack) = grid.validate();
    u.check_domain(pop)?;
    let cells = pop.cells().len();
    if cells > MAX_ORACLE_CELLS {
        return Err(Error::InstanceTooLarge {
            cells,
            max: MAX_ORACLE_CELLS,
        });
    }
    let tableau = Tableau::build(pop, u, |_| true);
    let slack = slack.unwrap_or(tableau.max_welfare_step() / resolution as f64);
    let mut search = Search {
        tableau: &tableau,
        resolution,
        slack,
        values: vec![0.0; tableau.len()],
        // The zero classifier is always feasible at revenue 0.
        best_revenue: 0.0,
        best_values: None,
    };
    search.run(0, 0.0, 0.0);
    let values = search
        .best_values
        .unwrap_or_else(|| vec![0.0; tableau.len()]);
    let classifier = Classifier::from_aligned(pop, values)?;
    Ok(OracleSolution {
        revenue: search.best_revenue,
        classifier,
    })
}

/// Best conditional revenue of group `a` among grid classifiers whose
/// group welfare lies within the slack of `w`.
///
/// # Panics
///
/// Panics if the grid fields violate their invariants.
pub fn brute_force_curve_point(
    pop: &Population,
    u: &UtilityTable,
    a: Group,
    w: f64,
    grid: GridSpec,
) -> Result<f64, Error> {
    let (resolution, slack) = grid.validate();
    u.check_domain(pop)?;
    let cells = pop.group_cells(a).count();
    if cells > MAX_ORACLE_CELLS {
        return Err(Error::InstanceTooLarge {
            cells,
            max: MAX_ORACLE_CELLS,
        });
    }
    let w_max = u.expected(pop, a);
    if !w.is_finite() || w < -CURVE_DOMAIN_SLACK || w > w_max + CURVE_DOMAIN_SLACK {
        return Err(Error::WOutOfDomain {
            w,
            w_max,
            slack: CURVE_DOMAIN_SLACK,
        });
    }
    let mut tableau = Tableau::build(pop, u, |g| g == a);
    // Conditional revenue: replace the joint-mass weights.
    for (value, cell) in tableau
        .revenue
        .iter_mut()
        .zip(pop.cells().iter().filter(|c| c.a == a))
    {
        *value = pop.conditional_mass(cell) * cell.margin();
    }
    let n = tableau.len();
    for i in (0..n).rev() {
        tableau.suffix_gain[i] = tableau.suffix_gain[i + 1] + tableau.revenue[i].max(0.0);
        // All cells are in one group here: welfare only moves the gap up
        // when a is group 0. Rebuild both directions group-agnostically.
        tableau.suffix_up[i] = tableau.suffix_up[i + 1] + tableau.welfare[i];
        tableau.suffix_down[i] = 0.0;
    }
    for g in &mut tableau.group {
        *g = 0;
    }
    let slack = slack.unwrap_or(tableau.max_welfare_step() / resolution as f64);
    let mut search = Search {
        tableau: &tableau,
        resolution,
        slack,
        values: vec![0.0; n],
        best_revenue: f64::NEG_INFINITY,
        best_values: None,
    };
    // The gap is W(a) - w, so it starts at -w and every approved cell
    // pushes it up.
    search.run(0, 0.0, -w);
    match search.best_values {
        Some(_) => Ok(search.best_revenue),
        None => Err(Error::WOutOfDomain { w, w_max, slack }),
    }
}
