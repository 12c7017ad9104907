//! Fairness concepts expressed as outcome-dependent utility tables.
//!
//! Every supported fairness notion reduces to one statement: expected
//! borrower welfare under some nonnegative utility u(x, a, y) must be
//! equal across the two groups. Demographic parity uses the constant
//! utility 1; equal opportunity puts weight only on repaying borrowers.
//! The solvers consume the reduced per-cell form `ubar(x, a) =
//! u(x, a, 1) p + u(x, a, 0) (1 - p)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::population::{Cell, Group, Population};
use crate::solver::Classifier;
use crate::WELFARE_TOLERANCE;

/// Utility of one cell under both loan outcomes, with its mean under the
/// cell's repayment probability.
#[derive(Debug, Clone, PartialEq)]
pub struct CellUtility {
    pub x: String,
    pub a: Group,
    /// u(x, a, 0): utility of an approved loan that defaults.
    pub on_default: f64,
    /// u(x, a, 1): utility of an approved loan that repays.
    pub on_repay: f64,
    /// ubar(x, a) = on_repay * p + on_default * (1 - p).
    pub mean: f64,
}

/// A nonnegative utility table aligned with a population's cell order.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityTable {
    entries: Vec<CellUtility>,
}

impl UtilityTable {
    /// Builds a table by evaluating `(on_default, on_repay)` per cell.
    /// Rejects negative values; the solvers rely on `ubar >= 0`.
    pub fn from_fn(
        pop: &Population,
        mut f: impl FnMut(&Cell) -> (f64, f64),
    ) -> Result<Self, Error> {
        let mut entries = Vec::with_capacity(pop.cells().len());
        for cell in pop.cells() {
            let (on_default, on_repay) = f(cell);
            for (y, value) in [(0u8, on_default), (1u8, on_repay)] {
                if !(value.is_finite() && value >= 0.0) {
                    return Err(Error::NegativeUtility {
                        x: cell.x.clone(),
                        a: cell.a,
                        y,
                        value,
                    });
                }
            }
            entries.push(CellUtility {
                x: cell.x.clone(),
                a: cell.a,
                on_default,
                on_repay,
                mean: on_repay * cell.p + on_default * (1.0 - cell.p),
            });
        }
        Ok(UtilityTable { entries })
    }

    /// Entries in population cell order.
    pub fn entries(&self) -> &[CellUtility] {
        &self.entries
    }

    /// Verifies that this table was built for `pop`: same cells, same order.
    pub fn check_domain(&self, pop: &Population) -> Result<(), Error> {
        let cells = pop.cells();
        for i in 0..self.entries.len().max(cells.len()) {
            let mismatch = match (self.entries.get(i), cells.get(i)) {
                (Some(e), Some(c)) if e.x == c.x && e.a == c.a => continue,
                (Some(e), _) => (e.x.clone(), e.a),
                (None, Some(c)) => (c.x.clone(), c.a),
                (None, None) => unreachable!(),
            };
            return Err(Error::UtilityDomainMismatch {
                x: mismatch.0,
                a: mismatch.1,
            });
        }
        Ok(())
    }

    /// Expected utility of full approval in group `a`:
    /// sum over the group's cells of P(X = x | A = a) * ubar(x, a).
    pub fn expected(&self, pop: &Population, a: Group) -> f64 {
        pop.cells()
            .iter()
            .zip(&self.entries)
            .filter(|(cell, _)| cell.a == a)
            .map(|(cell, e)| pop.conditional_mass(cell) * e.mean)
            .sum()
    }
}

/// A fairness concept, reducible to a utility table for a population.
#[derive(Debug, Clone, PartialEq)]
pub enum ConceptSpec {
    /// Equal approval rates: u(x, a, y) = 1.
    DemographicParity,
    /// Welfare on repaying borrowers only. Normalized puts
    /// u(x, a, 1) = 1 / P(Y = 1 | A = a), making the constraint literally
    /// "equal true positive rates"; unnormalized uses u(x, a, 1) = 1.
    EqualOpportunity { normalized: bool },
    /// u(x, a, 1) = alpha, u(x, a, 0) = beta with alpha >= beta >= 0.
    EqualizedOddsMember { alpha: f64, beta: f64 },
    /// Label-dependent loan amounts m(x) > 0, normalized per group by the
    /// expected repaid amount so full approval scores 1 in both groups.
    HeterogeneousEqualOpportunity { amounts: BTreeMap<String, f64> },
    /// Explicit per-(cell, outcome) values; omitted outcomes default to 0.
    Custom { entries: Vec<UtilityValue> },
}

/// One explicit utility value for a custom concept.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityValue {
    pub x: String,
    pub a: Group,
    /// True selects the repay outcome, false the default outcome.
    pub y: bool,
    pub value: f64,
}

/// Reduces a concept to a utility table over the given population.
pub fn make_utility(spec: &ConceptSpec, pop: &Population) -> Result<UtilityTable, Error> {
    match spec {
        ConceptSpec::DemographicParity => UtilityTable::from_fn(pop, |_| (1.0, 1.0)),
        ConceptSpec::EqualOpportunity { normalized } => {
            let mut on_repay = [1.0_f64; 2];
            if *normalized {
                for a in Group::BOTH {
                    let base = pop.base_rate(a);
                    if base <= 0.0 {
                        return Err(Error::NoGoodBorrowersInGroup { a });
                    }
                    on_repay[a.index()] = 1.0 / base;
                }
            }
            UtilityTable::from_fn(pop, |cell| (0.0, on_repay[cell.a.index()]))
        }
        ConceptSpec::EqualizedOddsMember { alpha, beta } => {
            let ordered = alpha.is_finite() && beta.is_finite() && *alpha >= *beta && *beta >= 0.0;
            if !ordered {
                return Err(Error::InvalidConcept {
                    reason: format!(
                        "equalized-odds member needs alpha >= beta >= 0, got alpha {alpha}, beta {beta}"
                    ),
                });
            }
            UtilityTable::from_fn(pop, |_| (*beta, *alpha))
        }
        ConceptSpec::HeterogeneousEqualOpportunity { amounts } => {
            for (x, &m) in amounts {
                if !(m.is_finite() && m > 0.0) {
                    return Err(Error::InvalidConcept {
                        reason: format!("loan amount for label {x} must be positive, got {m}"),
                    });
                }
            }
            for x in pop.labels() {
                if !amounts.contains_key(x) {
                    return Err(Error::InvalidConcept {
                        reason: format!("no loan amount for label {x}"),
                    });
                }
            }
            // Normalizer per group: expected repaid amount under full
            // approval. Dividing by it puts both groups on the same scale.
            let mut repaid = [0.0_f64; 2];
            for cell in pop.cells() {
                repaid[cell.a.index()] += pop.conditional_mass(cell) * amounts[&cell.x] * cell.p;
            }
            for a in Group::BOTH {
                if repaid[a.index()] <= 0.0 {
                    return Err(Error::NoGoodBorrowersInGroup { a });
                }
            }
            UtilityTable::from_fn(pop, |cell| (0.0, amounts[&cell.x] / repaid[cell.a.index()]))
        }
        ConceptSpec::Custom { entries } => {
            let mut table: BTreeMap<(&str, Group), [f64; 2]> = BTreeMap::new();
            let mut seen: BTreeSet<(&str, Group, bool)> = BTreeSet::new();
            for e in entries {
                if !(e.value.is_finite() && e.value >= 0.0) {
                    return Err(Error::NegativeUtility {
                        x: e.x.clone(),
                        a: e.a,
                        y: e.y as u8,
                        value: e.value,
                    });
                }
                if pop.find(&e.x, e.a).is_none() {
                    return Err(Error::UtilityDomainMismatch {
                        x: e.x.clone(),
                        a: e.a,
                    });
                }
                if !seen.insert((e.x.as_str(), e.a, e.y)) {
                    return Err(Error::InvalidConcept {
                        reason: format!(
                            "duplicate utility entry for cell ({}, {}) outcome y={}",
                            e.x, e.a, e.y as u8
                        ),
                    });
                }
                table.entry((e.x.as_str(), e.a)).or_insert([0.0; 2])[e.y as usize] = e.value;
            }
            UtilityTable::from_fn(pop, |cell| {
                let values = table
                    .get(&(cell.x.as_str(), cell.a))
                    .copied()
                    .unwrap_or([0.0; 2]);
                (values[0], values[1])
            })
        }
    }
}

/// Utility of one cell under both outcomes, before any shifting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomePair {
    /// Value when the borrower defaults.
    pub on_default: f64,
    /// Value when the borrower repays.
    pub on_repay: f64,
}

impl OutcomePair {
    fn mean(&self, p: f64) -> f64 {
        self.on_repay * p + self.on_default * (1.0 - p)
    }
}

/// A raw two-sided utility: what a borrower gets when the loan is granted
/// and when it is denied. Keys are (label, group).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawUtility {
    pub granted: BTreeMap<(String, Group), OutcomePair>,
    pub denied: BTreeMap<(String, Group), OutcomePair>,
}

/// Rewrites a two-sided utility into the canonical denied-means-zero form.
///
/// Welfare under (granted, denied) splits into the all-deny baseline plus
/// the welfare of the difference utility `granted - denied`. Equalizing
/// the two-sided welfare is therefore the same constraint as equalizing
/// the difference, provided the baseline itself is already equal across
/// groups; otherwise no classifier decision can repair the imbalance and
/// the rewrite is refused.
pub fn shift_to_zero_minus(raw: &RawUtility, pop: &Population) -> Result<UtilityTable, Error> {
    let mut denied_welfare = [0.0_f64; 2];
    for cell in pop.cells() {
        let key = (cell.x.clone(), cell.a);
        let denied = raw
            .denied
            .get(&key)
            .ok_or_else(|| Error::UtilityDomainMismatch {
                x: cell.x.clone(),
                a: cell.a,
            })?;
        if raw.granted.get(&key).is_none() {
            return Err(Error::UtilityDomainMismatch {
                x: cell.x.clone(),
                a: cell.a,
            });
        }
        denied_welfare[cell.a.index()] += pop.conditional_mass(cell) * denied.mean(cell.p);
    }
    let gap = denied_welfare[0] - denied_welfare[1];
    if gap.abs() > WELFARE_TOLERANCE {
        return Err(Error::ZeroClassifierNotWE { gap });
    }
    UtilityTable::from_fn(pop, |cell| {
        let key = (cell.x.clone(), cell.a);
        let granted = raw.granted[&key];
        let denied = raw.denied[&key];
        (
            granted.on_default - denied.on_default,
            granted.on_repay - denied.on_repay,
        )
    })
}

/// Outcome-conditional approval rates of a classifier, per group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EoFamilyCheck {
    /// True when both conditional rates agree across groups within
    /// `WELFARE_TOLERANCE`, i.e. the classifier is welfare-equalizing for
    /// every equalized-odds member utility at once.
    pub satisfied: bool,
    /// E[c | Y = 1, A = 0] - E[c | Y = 1, A = 1].
    pub good_rate_gap: f64,
    /// E[c | Y = 0, A = 0] - E[c | Y = 0, A = 1].
    pub bad_rate_gap: f64,
}

/// Checks whether a classifier equalizes welfare for the whole
/// equalized-odds family simultaneously.
///
/// Group welfare under the member (alpha, beta) is a fixed combination of
/// the two outcome-conditional approval rates, so matching both rates
/// across groups is sufficient for every member at once, and two members
/// with distinct (alpha, beta) ratios already force both rates to match.
pub fn is_we_for_eo_family(c: &Classifier, pop: &Population) -> Result<EoFamilyCheck, Error> {
    c.check_domain(pop)?;
    let mut rate = [[0.0_f64; 2]; 2];
    for (y, good) in [(0u8, false), (1u8, true)] {
        for a in Group::BOTH {
            let base = pop.base_rate(a);
            let mass = if good { base } else { 1.0 - base };
            if mass <= 0.0 {
                return Err(Error::UndefinedConditional { a, y });
            }
            let approved: f64 = pop
                .group_cells(a)
                .map(|cell| {
                    let weight = if good { cell.p } else { 1.0 - cell.p };
                    pop.conditional_mass(cell) * weight * c.get(&cell.x, cell.a)
                })
                .sum();
            rate[y as usize][a.index()] = approved / mass;
        }
    }
    let good_rate_gap = rate[1][0] - rate[1][1];
    let bad_rate_gap = rate[0][0] - rate[0][1];
    Ok(EoFamilyCheck {
        satisfied: good_rate_gap.abs() <= WELFARE_TOLERANCE
            && bad_rate_gap.abs() <= WELFARE_TOLERANCE,
        good_rate_gap,
        bad_rate_gap,
    })
}
