//! Evaluation and auditing: welfare, revenue, fairness residuals,
//! disadvantaged-group identification, and the guarantees a WE optimum
//! carries for the disadvantaged group.

use serde::{Deserialize, Serialize};

use crate::concepts::{make_utility, ConceptSpec, UtilityTable};
use crate::error::Error;
use crate::population::{CellRef, Group, Population};
use crate::solver::{solve_unaware, solve_unconstrained, solve_we, Classifier};
use crate::WELFARE_TOLERANCE;

/// Absolute band inside which the two groups' unconstrained welfares
/// count as equal, leaving no disadvantaged group.
const EQUAL_WELFARE_TOLERANCE: f64 = 1e-12;

/// Expected revenue of a classifier: sum of mass * margin * approval.
pub fn revenue(pop: &Population, c: &Classifier) -> Result<f64, Error> {
    c.check_domain(pop)?;
    Ok(pop
        .cells()
        .iter()
        .zip(c.aligned(pop))
        .map(|(cell, v)| cell.mass * cell.margin() * v)
        .sum())
}

/// Group-conditional welfare: sum of P(x | A=a) * ubar(x, a) * c(x, a).
pub fn group_welfare(
    pop: &Population,
    u: &UtilityTable,
    c: &Classifier,
    a: Group,
) -> Result<f64, Error> {
    c.check_domain(pop)?;
    u.check_domain(pop)?;
    Ok(welfare_pair(pop, u, c)[a.index()])
}

/// Both groups' welfares in one pass. Domains must already match.
fn welfare_pair(pop: &Population, u: &UtilityTable, c: &Classifier) -> [f64; 2] {
    let mut welfare = [0.0_f64; 2];
    for ((cell, e), v) in pop.cells().iter().zip(u.entries()).zip(c.aligned(pop)) {
        welfare[cell.a.index()] += pop.conditional_mass(cell) * e.mean * v;
    }
    welfare
}

/// Welfare and statistical-fairness residuals of one classifier.
///
/// The conditional gaps are absent, not zero, when a conditioning event
/// has probability zero in either group; reporting 0 there would fake a
/// fair audit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    /// Expected revenue.
    pub revenue: f64,
    /// Per-group welfare under the measurement utility.
    pub group_welfare: [f64; 2],
    /// |W(0) - W(1)|.
    pub we_gap: f64,
    /// |E[c | A=0] - E[c | A=1]|: the demographic-parity residual.
    pub dp_gap: f64,
    /// |E[c | Y=1, A=0] - E[c | Y=1, A=1]|: the equal-opportunity
    /// residual; absent when a group has no good borrowers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eo_gap: Option<f64>,
    /// |E[c | Y=0, A=0] - E[c | Y=0, A=1]|: the false-positive-rate
    /// residual; absent when a group has no bad borrowers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp_gap: Option<f64>,
}

/// Audits one classifier against a measurement utility.
pub fn audit(pop: &Population, u: &UtilityTable, c: &Classifier) -> Result<AuditReport, Error> {
    c.check_domain(pop)?;
    u.check_domain(pop)?;
    let values = c.aligned(pop);
    let welfare = welfare_pair(pop, u, c);

    // Approval rates conditioned on the group alone and jointly on the
    // outcome, accumulated as (conditioning mass, approved mass).
    let mut plain = [[0.0_f64; 2]; 2];
    let mut good = [[0.0_f64; 2]; 2];
    let mut bad = [[0.0_f64; 2]; 2];
    for (cell, &v) in pop.cells().iter().zip(&values) {
        let i = cell.a.index();
        plain[i][0] += cell.mass;
        plain[i][1] += cell.mass * v;
        good[i][0] += cell.mass * cell.p;
        good[i][1] += cell.mass * cell.p * v;
        bad[i][0] += cell.mass * (1.0 - cell.p);
        bad[i][1] += cell.mass * (1.0 - cell.p) * v;
    }
    let gap = |acc: [[f64; 2]; 2]| -> Option<f64> {
        if acc[0][0] <= 0.0 || acc[1][0] <= 0.0 {
            return None;
        }
        Some((acc[0][1] / acc[0][0] - acc[1][1] / acc[1][0]).abs())
    };

    Ok(AuditReport {
        revenue: revenue(pop, c)?,
        group_welfare: welfare,
        we_gap: (welfare[0] - welfare[1]).abs(),
        dp_gap: gap(plain).expect("groups have positive mass"),
        eo_gap: gap(good),
        fp_gap: gap(bad),
    })
}

/// The group with strictly lower welfare under the unconstrained
/// optimum, or `None` when the welfares agree within 1e-12.
pub fn disadvantaged_group(pop: &Population, u: &UtilityTable) -> Result<Option<Group>, Error> {
    u.check_domain(pop)?;
    let unconstrained = solve_unconstrained(pop);
    let welfare = welfare_pair(pop, u, &unconstrained.classifier);
    Ok(lower_welfare_group(welfare))
}

fn lower_welfare_group(welfare: [f64; 2]) -> Option<Group> {
    if (welfare[0] - welfare[1]).abs() <= EQUAL_WELFARE_TOLERANCE {
        None
    } else if welfare[0] < welfare[1] {
        Some(Group::Zero)
    } else {
        Some(Group::One)
    }
}

/// Evidence that moving from the unconstrained optimum to the WE optimum
/// treats the disadvantaged group weakly better.
///
/// Both flags hold for every valid input; a false value flags a solver
/// defect, not a property of the data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactCheck {
    /// The disadvantaged group, or `None` when welfares already agree.
    pub disadvantaged: Option<Group>,
    /// Per-group welfare under the unconstrained optimum.
    pub welfare_before: [f64; 2],
    /// Per-group welfare under the WE optimum.
    pub welfare_after: [f64; 2],
    /// Disadvantaged-group welfare did not drop (tolerance 1e-9);
    /// vacuously true without a disadvantaged group.
    pub welfare_ok: bool,
    /// Every disadvantaged-group cell is approved at least as often as
    /// before (tolerance 1e-9); vacuously true without one.
    pub pointwise_ok: bool,
    /// Cells breaking the pointwise comparison; empty when it holds.
    pub violating_cells: Vec<CellRef>,
}

/// Compares the unconstrained and WE optima for one utility: the
/// disadvantaged group's welfare may not drop, and each of its cells
/// must be approved at least as often.
pub fn check_disadvantaged_impact(
    pop: &Population,
    u: &UtilityTable,
) -> Result<ImpactCheck, Error> {
    let unconstrained = solve_unconstrained(pop);
    let we = solve_we(pop, u)?;
    let welfare_before = welfare_pair(pop, u, &unconstrained.classifier);
    let welfare_after = welfare_pair(pop, u, &we.classifier);
    let disadvantaged = lower_welfare_group(welfare_before);

    let mut welfare_ok = true;
    let mut violating_cells = Vec::new();
    if let Some(d) = disadvantaged {
        welfare_ok = welfare_after[d.index()] >= welfare_before[d.index()] - WELFARE_TOLERANCE;
        let before = unconstrained.classifier.aligned(pop);
        let after = we.classifier.aligned(pop);
        for ((cell, b), a) in pop.cells().iter().zip(before).zip(after) {
            if cell.a == d && b > a + WELFARE_TOLERANCE {
                violating_cells.push(cell.key());
            }
        }
    }
    let pointwise_ok = violating_cells.is_empty();
    Ok(ImpactCheck {
        disadvantaged,
        welfare_before,
        welfare_after,
        welfare_ok,
        pointwise_ok,
        violating_cells,
    })
}

/// Result of checking the WE guarantee under a misspecified utility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RobustnessCheck {
    /// True when both utilities name the same disadvantaged group, the
    /// precondition of the guarantee; all other fields are absent or
    /// vacuous otherwise.
    pub applicable: bool,
    /// The commonly identified disadvantaged group.
    pub disadvantaged: Option<Group>,
    /// True-utility welfare of that group under the unconstrained
    /// optimum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub welfare_before: Option<f64>,
    /// True-utility welfare of that group under the WE optimum computed
    /// with the assumed utility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub welfare_after: Option<f64>,
    /// welfare_after >= welfare_before - 1e-9; vacuously true when
    /// inapplicable.
    pub ok: bool,
}

/// Solving with a wrong-but-aligned utility still protects the
/// disadvantaged group: as long as `u_true` and `u_assumed` agree on who
/// is disadvantaged, the WE optimum for `u_assumed` keeps that group's
/// true welfare from dropping.
pub fn check_proxy_robustness(
    pop: &Population,
    u_true: &UtilityTable,
    u_assumed: &UtilityTable,
) -> Result<RobustnessCheck, Error> {
    let d_true = disadvantaged_group(pop, u_true)?;
    let d_assumed = disadvantaged_group(pop, u_assumed)?;
    let disadvantaged = match (d_true, d_assumed) {
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    };
    let Some(d) = disadvantaged else {
        return Ok(RobustnessCheck {
            applicable: false,
            disadvantaged: None,
            welfare_before: None,
            welfare_after: None,
            ok: true,
        });
    };
    let unconstrained = solve_unconstrained(pop);
    let we = solve_we(pop, u_assumed)?;
    let before = welfare_pair(pop, u_true, &unconstrained.classifier)[d.index()];
    let after = welfare_pair(pop, u_true, &we.classifier)[d.index()];
    Ok(RobustnessCheck {
        applicable: true,
        disadvantaged: Some(d),
        welfare_before: Some(before),
        welfare_after: Some(after),
        ok: after >= before - WELFARE_TOLERANCE,
    })
}

/// Revenue and welfare of the unconstrained, WE, and unaware optima side
/// by side, welfares measured under one utility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FairnessPrice {
    pub unconstrained_revenue: f64,
    pub we_revenue: f64,
    pub unaware_revenue: f64,
    /// unconstrained_revenue - we_revenue.
    pub we_revenue_drop: f64,
    /// unconstrained_revenue - unaware_revenue.
    pub unaware_revenue_drop: f64,
    pub unconstrained_welfare: [f64; 2],
    pub we_welfare: [f64; 2],
    pub unaware_welfare: [f64; 2],
}

/// What imposing the WE constraint for `spec` costs in revenue, with the
/// unaware optimum as a second comparison point. Welfares are measured
/// under `u`, which may differ from the constraint utility.
pub fn price_of_fairness(
    pop: &Population,
    u: &UtilityTable,
    spec: &ConceptSpec,
) -> Result<FairnessPrice, Error> {
    u.check_domain(pop)?;
    let unconstrained = solve_unconstrained(pop);
    let unaware = solve_unaware(pop);
    let constraint = make_utility(spec, pop)?;
    let we = solve_we(pop, &constraint)?;
    Ok(FairnessPrice {
        unconstrained_revenue: unconstrained.revenue,
        we_revenue: we.revenue,
        unaware_revenue: unaware.revenue,
        we_revenue_drop: unconstrained.revenue - we.revenue,
        unaware_revenue_drop: unconstrained.revenue - unaware.revenue,
        unconstrained_welfare: welfare_pair(pop, u, &unconstrained.classifier),
        we_welfare: welfare_pair(pop, u, &we.classifier),
        unaware_welfare: welfare_pair(pop, u, &unaware.classifier),
    })
}
