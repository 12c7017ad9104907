//! Discrete borrower populations.
//!
//! A population is a finite set of cells, one per (label, group) pair.
//! Each cell carries the joint mass P(X = x, A = a), the repayment
//! probability P(Y = 1 | X = x, A = a), and the lender's stakes for one
//! loan: `alpha_plus` earned on repayment, `alpha_minus` lost on default.
//! Stakes depend on the label only, never on the group.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A total mass within this distance of 1 is accepted and renormalized.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// One of the two protected groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum Group {
    Zero,
    One,
}

impl Group {
    /// Both groups in canonical order.
    pub const BOTH: [Group; 2] = [Group::Zero, Group::One];

    /// Array index for per-group pairs.
    pub fn index(self) -> usize {
        match self {
            Group::Zero => 0,
            Group::One => 1,
        }
    }

    /// The opposite group.
    pub fn other(self) -> Group {
        match self {
            Group::Zero => Group::One,
            Group::One => Group::Zero,
        }
    }
}

impl TryFrom<u8> for Group {
    type Error = String;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        match value {
            0 => Ok(Group::Zero),
            1 => Ok(Group::One),
            other => Err(format!("group must be 0 or 1, got {other}")),
        }
    }
}

impl From<Group> for u8 {
    fn from(a: Group) -> u8 {
        a.index() as u8
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

impl std::str::FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" => Ok(Group::Zero),
            "1" => Ok(Group::One),
            other => Err(format!("group must be 0 or 1, got {other:?}")),
        }
    }
}

/// Reference to one cell, used in reports.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellRef {
    pub x: String,
    pub a: Group,
}

impl fmt::Display for CellRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.a)
    }
}

/// One (label, group) cell of a population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    /// Observable label.
    pub x: String,
    /// Protected group.
    pub a: Group,
    /// Joint mass P(X = x, A = a).
    pub mass: f64,
    /// Repayment probability P(Y = 1 | X = x, A = a).
    pub p: f64,
    /// Lender's gain when a loan from this cell repays.
    pub alpha_plus: f64,
    /// Lender's loss when a loan from this cell defaults.
    pub alpha_minus: f64,
}

impl Cell {
    /// Break-even repayment probability. Approving the cell is profitable
    /// exactly when `p` exceeds this threshold; it lies strictly inside
    /// (0, 1) for positive stakes.
    pub fn break_even(&self) -> f64 {
        self.alpha_minus / (self.alpha_plus + self.alpha_minus)
    }

    /// Expected margin of one approved loan from this cell.
    ///
    /// Computed as (alpha_plus + alpha_minus) * (p - break_even) so the
    /// float sign agrees with `p > break_even` bit for bit.
    pub fn margin(&self) -> f64 {
        (self.alpha_plus + self.alpha_minus) * (self.p - self.break_even())
    }

    /// Reference to this cell.
    pub fn key(&self) -> CellRef {
        CellRef {
            x: self.x.clone(),
            a: self.a,
        }
    }
}

/// A validated population: canonical cell order, normalized masses, both
/// groups present, stakes consistent across groups.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    cells: Vec<Cell>,
    group_mass: [f64; 2],
}

impl Population {
    /// Validates raw cells and builds the canonical population.
    ///
    /// Cells are sorted by (group, label). The total mass must be within
    /// `MASS_TOLERANCE` of 1 and is renormalized to exactly 1; anything
    /// further off is an error, never silently rescaled.
    pub fn new(mut cells: Vec<Cell>) -> Result<Self, Error> {
        for cell in &cells {
            if !(cell.mass.is_finite() && cell.mass >= 0.0) {
                return Err(Error::NegativeMass {
                    x: cell.x.clone(),
                    a: cell.a,
                    mass: cell.mass,
                });
            }
            if !(cell.p >= 0.0 && cell.p <= 1.0) {
                return Err(Error::ProbabilityOutOfRange {
                    x: cell.x.clone(),
                    a: cell.a,
                    p: cell.p,
                });
            }
            let alphas_ok = cell.alpha_plus.is_finite()
                && cell.alpha_plus > 0.0
                && cell.alpha_minus.is_finite()
                && cell.alpha_minus > 0.0;
            if !alphas_ok {
                return Err(Error::NonPositiveAlpha {
                    x: cell.x.clone(),
                    a: cell.a,
                    alpha_plus: cell.alpha_plus,
                    alpha_minus: cell.alpha_minus,
                });
            }
        }

        cells.sort_by(|l, r| (l.a, l.x.as_str()).cmp(&(r.a, r.x.as_str())));
        for pair in cells.windows(2) {
            if pair[0].a == pair[1].a && pair[0].x == pair[1].x {
                return Err(Error::DuplicateCell {
                    x: pair[0].x.clone(),
                    a: pair[0].a,
                });
            }
        }

        let mut stakes: BTreeMap<&str, (f64, f64)> = BTreeMap::new();
        for cell in &cells {
            match stakes.entry(cell.x.as_str()) {
                Entry::Vacant(slot) => {
                    slot.insert((cell.alpha_plus, cell.alpha_minus));
                }
                Entry::Occupied(seen) => {
                    let &(plus, minus) = seen.get();
                    if plus != cell.alpha_plus || minus != cell.alpha_minus {
                        return Err(Error::InconsistentAlphaAcrossGroups { x: cell.x.clone() });
                    }
                }
            }
        }

        let total: f64 = cells.iter().map(|c| c.mass).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::MassNotNormalized {
                total,
                tolerance: MASS_TOLERANCE,
            });
        }
        if total != 1.0 {
            for cell in &mut cells {
                cell.mass /= total;
            }
        }

        let mut group_mass = [0.0_f64; 2];
        for cell in &cells {
            group_mass[cell.a.index()] += cell.mass;
        }
        for a in Group::BOTH {
            if group_mass[a.index()] <= 0.0 {
                return Err(Error::EmptyGroup { a });
            }
        }

        Ok(Population { cells, group_mass })
    }

    /// All cells, sorted by (group, label).
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// P(A = a).
    pub fn group_mass(&self, a: Group) -> f64 {
        self.group_mass[a.index()]
    }

    /// Cells of one group, in label order.
    pub fn group_cells(&self, a: Group) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.a == a)
    }

    /// P(X = x | A = a) for a cell of this population.
    pub fn conditional_mass(&self, cell: &Cell) -> f64 {
        cell.mass / self.group_mass(cell.a)
    }

    /// P(Y = 1 | A = a).
    pub fn base_rate(&self, a: Group) -> f64 {
        self.group_cells(a)
            .map(|c| self.conditional_mass(c) * c.p)
            .sum()
    }

    /// Looks up a cell by label and group.
    pub fn find(&self, x: &str, a: Group) -> Option<&Cell> {
        self.cells
            .binary_search_by(|c| (c.a, c.x.as_str()).cmp(&(a, x)))
            .ok()
            .map(|i| &self.cells[i])
    }

    /// Labels present in either group, deduplicated and sorted.
    pub fn labels(&self) -> Vec<&str> {
        let mut labels: Vec<&str> = self.cells.iter().map(|c| c.x.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        labels
    }

    /// Pooled repayment probability P(Y = 1 | X = x), marginalizing the
    /// group out. Labels with zero total mass pool to 0.
    pub fn pooled_p(&self, x: &str) -> f64 {
        let mut mass = 0.0;
        let mut good = 0.0;
        for a in Group::BOTH {
            if let Some(cell) = self.find(x, a) {
                mass += cell.mass;
                good += cell.mass * cell.p;
            }
        }
        if mass > 0.0 {
            good / mass
        } else {
            0.0
        }
    }
}

/// One labeled observation with an optional sampling weight.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub x: String,
    pub a: Group,
    /// True when the borrower repaid.
    pub y: bool,
    pub weight: f64,
}

/// Stakes for one label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub alpha_plus: f64,
    pub alpha_minus: f64,
}

/// Stake table keyed by label.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlphaTable(pub BTreeMap<String, AlphaEntry>);

/// Estimates a population from weighted samples.
///
/// Each observed (label, group) pair becomes one cell with mass equal to
/// its weight share and `p` equal to its weighted repayment rate. Pairs
/// whose total weight is zero are dropped: their repayment rate is
/// undefined and they carry no mass.
pub fn from_samples(rows: &[SampleRow], alpha: &AlphaTable) -> Result<Population, Error> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut agg: BTreeMap<(Group, &str), (f64, f64)> = BTreeMap::new();
    for row in rows {
        if !(row.weight.is_finite() && row.weight >= 0.0) {
            return Err(Error::NegativeMass {
                x: row.x.clone(),
                a: row.a,
                mass: row.weight,
            });
        }
        let slot = agg.entry((row.a, row.x.as_str())).or_insert((0.0, 0.0));
        slot.0 += row.weight;
        if row.y {
            slot.1 += row.weight;
        }
    }
    let total: f64 = agg.values().map(|&(w, _)| w).sum();
    if total <= 0.0 {
        return Err(Error::EmptyInput);
    }
    let mut cells = Vec::with_capacity(agg.len());
    for ((a, x), (weight, good)) in agg {
        if weight == 0.0 {
            continue;
        }
        let entry = alpha
            .0
            .get(x)
            .ok_or_else(|| Error::MissingAlphaEntry { x: x.to_owned() })?;
        cells.push(Cell {
            x: x.to_owned(),
            a,
            mass: weight / total,
            p: good / weight,
            alpha_plus: entry.alpha_plus,
            alpha_minus: entry.alpha_minus,
        });
    }
    Population::new(cells)
}

/// One observation with numeric features, before discretization.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericRow {
    pub features: Vec<f64>,
    pub a: Group,
    pub y: bool,
    pub weight: f64,
}

/// How numeric features are cut into bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinningScheme {
    /// Bins of equal value width over [min, max].
    EqualWidth,
    /// Weighted quantile cut points, right-closed bins.
    Quantile,
}

/// Discretizes numeric feature vectors into labeled samples.
///
/// Feature `j` is cut into `bins_per_feature[j]` bins independently; the
/// label joins the per-feature bin indices, e.g. `b1` for one feature or
/// `b1_b0` for two. Quantile cut points use the weighted distribution of
/// rows with positive weight; equal-width bounds come from the plain min
/// and max.
pub fn bin_numeric(
    rows: &[NumericRow],
    scheme: BinningScheme,
    bins_per_feature: &[usize],
) -> Result<Vec<SampleRow>, Error> {
    if bins_per_feature.iter().any(|&b| b == 0) {
        return Err(Error::ZeroBins);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let arity = bins_per_feature.len();
    for (i, row) in rows.iter().enumerate() {
        if row.features.len() != arity {
            return Err(Error::FeatureArityMismatch {
                row: i,
                expected: arity,
                got: row.features.len(),
            });
        }
        for (j, v) in row.features.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFiniteFeature { row: i, feature: j });
            }
        }
    }

    // Per feature: assign a bin index to every row.
    let mut indices = vec![vec![0usize; rows.len()]; arity];
    for feature in 0..arity {
        let bins = bins_per_feature[feature];
        match scheme {
            BinningScheme::EqualWidth => {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for row in rows {
                    lo = lo.min(row.features[feature]);
                    hi = hi.max(row.features[feature]);
                }
                let width = (hi - lo) / bins as f64;
                for (i, row) in rows.iter().enumerate() {
                    let idx = if width > 0.0 {
                        (((row.features[feature] - lo) / width) as usize).min(bins - 1)
                    } else {
                        0
                    };
                    indices[feature][i] = idx;
                }
            }
            BinningScheme::Quantile => {
                let mut weighted: Vec<(f64, f64)> = rows
                    .iter()
                    .filter(|r| r.weight > 0.0)
                    .map(|r| (r.features[feature], r.weight))
                    .collect();
                if weighted.is_empty() {
                    return Err(Error::EmptyInput);
                }
                weighted.sort_by(|l, r| l.0.total_cmp(&r.0));
                let lo = weighted.first().unwrap().0;
                let hi = weighted.last().unwrap().0;
                if bins > 1 && lo == hi {
                    return Err(Error::ConstantFeatureWithQuantiles { feature });
                }
                let total: f64 = weighted.iter().map(|&(_, w)| w).sum();
                // Cut point i is the smallest value whose cumulative weight
                // reaches (i + 1) / bins of the total; bins are right-closed.
                let mut cuts = Vec::with_capacity(bins - 1);
                let mut cursor = 0usize;
                let mut cum = 0.0;
                for i in 0..bins - 1 {
                    let target = total * (i + 1) as f64 / bins as f64;
                    while cursor < weighted.len() && cum + weighted[cursor].1 < target {
                        cum += weighted[cursor].1;
                        cursor += 1;
                    }
                    let cut = if cursor < weighted.len() {
                        weighted[cursor].0
                    } else {
                        hi
                    };
                    cuts.push(cut);
                }
                for (i, row) in rows.iter().enumerate() {
                    let v = row.features[feature];
                    let idx = cuts.iter().position(|&cut| v <= cut).unwrap_or(bins - 1);
                    indices[feature][i] = idx;
                }
            }
        }
    }

    Ok(rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let label = (0..arity)
                .map(|feature| format!("b{}", indices[feature][i]))
                .collect::<Vec<_>>()
                .join("_");
            SampleRow {
                x: label,
                a: row.a,
                y: row.y,
                weight: row.weight,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quarter_cell(x: &str, a: Group, p: f64) -> Cell {
        Cell {
            x: x.to_owned(),
            a,
            mass: 0.25,
            p,
            alpha_plus: 1.0,
            alpha_minus: 2.0,
        }
    }

    /// Two labels, two groups, uniform mass, stakes 1 against 2.
    fn two_by_two() -> Population {
        Population::new(vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("1", Group::Zero, 0.6),
            quarter_cell("0", Group::One, 0.0),
            quarter_cell("1", Group::One, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn break_even_and_margin() {
        let pop = two_by_two();
        let t = 2.0 / 3.0;
        for cell in pop.cells() {
            assert_eq!(cell.break_even(), t);
        }
        let margin = |x: &str, a| pop.find(x, a).unwrap().margin();
        assert!((margin("0", Group::Zero) + 0.8).abs() < 1e-12);
        assert!((margin("1", Group::Zero) + 0.2).abs() < 1e-12);
        assert!((margin("0", Group::One) + 2.0).abs() < 1e-12);
        assert!((margin("1", Group::One) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn margin_sign_matches_threshold() {
        let pop = two_by_two();
        for cell in pop.cells() {
            assert_eq!(cell.margin() > 0.0, cell.p > cell.break_even());
        }
    }

    #[test]
    fn cells_are_sorted_and_masses_kept() {
        let pop = two_by_two();
        let order: Vec<(Group, &str)> = pop.cells().iter().map(|c| (c.a, c.x.as_str())).collect();
        assert_eq!(
            order,
            vec![
                (Group::Zero, "0"),
                (Group::Zero, "1"),
                (Group::One, "0"),
                (Group::One, "1"),
            ]
        );
        assert_eq!(pop.group_mass(Group::Zero), 0.5);
        assert_eq!(pop.group_mass(Group::One), 0.5);
    }

    #[test]
    fn near_normalized_mass_is_rescaled() {
        let mut cells = vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("1", Group::Zero, 0.6),
            quarter_cell("0", Group::One, 0.0),
            quarter_cell("1", Group::One, 1.0),
        ];
        cells[0].mass += 3e-13;
        let pop = Population::new(cells).unwrap();
        let total: f64 = pop.cells().iter().map(|c| c.mass).sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn far_from_normalized_mass_is_rejected() {
        let cells = vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("1", Group::One, 1.0),
        ];
        match Population::new(cells) {
            Err(Error::MassNotNormalized { total, .. }) => {
                assert!((total - 0.5).abs() < 1e-15)
            }
            other => panic!("expected MassNotNormalized, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_cell_is_rejected() {
        let cells = vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("0", Group::Zero, 0.5),
            quarter_cell("0", Group::One, 0.3),
            quarter_cell("1", Group::One, 0.9),
        ];
        assert!(matches!(
            Population::new(cells),
            Err(Error::DuplicateCell { .. })
        ));
    }

    #[test]
    fn group_dependent_stakes_are_rejected() {
        let mut cells = vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("1", Group::Zero, 0.6),
            quarter_cell("0", Group::One, 0.0),
            quarter_cell("1", Group::One, 1.0),
        ];
        cells[2].alpha_minus = 3.0;
        assert!(matches!(
            Population::new(cells),
            Err(Error::InconsistentAlphaAcrossGroups { .. })
        ));
    }

    #[test]
    fn missing_group_is_rejected() {
        let cells = vec![
            Cell {
                mass: 0.5,
                ..quarter_cell("0", Group::Zero, 0.4)
            },
            Cell {
                mass: 0.5,
                ..quarter_cell("1", Group::Zero, 0.6)
            },
        ];
        assert!(matches!(
            Population::new(cells),
            Err(Error::EmptyGroup { a: Group::One })
        ));
    }

    #[test]
    fn out_of_range_probability_is_rejected() {
        let mut cells = vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("1", Group::Zero, 0.6),
            quarter_cell("0", Group::One, 0.0),
            quarter_cell("1", Group::One, 1.0),
        ];
        cells[1].p = 1.5;
        assert!(matches!(
            Population::new(cells),
            Err(Error::ProbabilityOutOfRange { .. })
        ));
    }

    #[test]
    fn zero_alpha_is_rejected() {
        let mut cells = vec![
            quarter_cell("0", Group::Zero, 0.4),
            quarter_cell("1", Group::Zero, 0.6),
            quarter_cell("0", Group::One, 0.0),
            quarter_cell("1", Group::One, 1.0),
        ];
        cells[0].alpha_plus = 0.0;
        assert!(matches!(
            Population::new(cells),
            Err(Error::NonPositiveAlpha { .. })
        ));
    }

    #[test]
    fn good_mass_identity() {
        let pop = two_by_two();
        let joint: f64 = pop.cells().iter().map(|c| c.mass * c.p).sum();
        let by_group: f64 = Group::BOTH
            .iter()
            .map(|&a| pop.group_mass(a) * pop.base_rate(a))
            .sum();
        assert!((joint - by_group).abs() <= 1e-12);
    }

    #[test]
    fn pooled_probability_weights_by_mass() {
        let pop = two_by_two();
        assert!((pop.pooled_p("0") - 0.2).abs() < 1e-12);
        assert!((pop.pooled_p("1") - 0.8).abs() < 1e-12);
        assert_eq!(pop.pooled_p("missing"), 0.0);
    }

    fn alpha_12() -> AlphaTable {
        let mut table = BTreeMap::new();
        for x in ["0", "1"] {
            table.insert(
                x.to_owned(),
                AlphaEntry {
                    alpha_plus: 1.0,
                    alpha_minus: 2.0,
                },
            );
        }
        AlphaTable(table)
    }

    fn sample(x: &str, a: Group, y: bool, weight: f64) -> SampleRow {
        SampleRow {
            x: x.to_owned(),
            a,
            y,
            weight,
        }
    }

    #[test]
    fn samples_aggregate_to_weighted_rates() {
        // Weighted rows that reproduce the 2x2 population above.
        let rows = vec![
            sample("0", Group::Zero, true, 2.0),
            sample("0", Group::Zero, false, 3.0),
            sample("1", Group::Zero, true, 3.0),
            sample("1", Group::Zero, false, 2.0),
            sample("0", Group::One, false, 5.0),
            sample("1", Group::One, true, 5.0),
        ];
        let pop = from_samples(&rows, &alpha_12()).unwrap();
        assert_eq!(pop, two_by_two());
    }

    #[test]
    fn validation_of_estimated_population_is_idempotent() {
        let rows = vec![
            sample("0", Group::Zero, true, 1.5),
            sample("1", Group::One, false, 2.5),
            sample("1", Group::One, true, 1.0),
        ];
        let pop = from_samples(&rows, &alpha_12()).unwrap();
        let again = Population::new(pop.cells().to_vec()).unwrap();
        assert_eq!(pop, again);
    }

    #[test]
    fn zero_weight_pairs_are_dropped() {
        let rows = vec![
            sample("0", Group::Zero, true, 1.0),
            sample("1", Group::Zero, true, 0.0),
            sample("1", Group::One, false, 1.0),
        ];
        let pop = from_samples(&rows, &alpha_12()).unwrap();
        assert_eq!(pop.cells().len(), 2);
        assert!(pop.find("1", Group::Zero).is_none());
    }

    #[test]
    fn empty_samples_are_rejected() {
        assert!(matches!(
            from_samples(&[], &alpha_12()),
            Err(Error::EmptyInput)
        ));
        let zero_rows = vec![sample("0", Group::Zero, true, 0.0)];
        assert!(matches!(
            from_samples(&zero_rows, &alpha_12()),
            Err(Error::EmptyInput)
        ));
    }

    #[test]
    fn missing_stakes_are_reported() {
        let rows = vec![
            sample("0", Group::Zero, true, 1.0),
            sample("z", Group::One, false, 1.0),
        ];
        match from_samples(&rows, &alpha_12()) {
            Err(Error::MissingAlphaEntry { x }) => assert_eq!(x, "z"),
            other => panic!("expected MissingAlphaEntry, got {other:?}"),
        }
    }

    fn numeric(v: f64, a: Group) -> NumericRow {
        NumericRow {
            features: vec![v],
            a,
            y: true,
            weight: 1.0,
        }
    }

    #[test]
    fn equal_width_splits_the_range() {
        let rows: Vec<NumericRow> = [0.0, 1.0, 2.0, 3.0]
            .iter()
            .map(|&v| numeric(v, Group::Zero))
            .collect();
        let binned = bin_numeric(&rows, BinningScheme::EqualWidth, &[2]).unwrap();
        let labels: Vec<&str> = binned.iter().map(|r| r.x.as_str()).collect();
        assert_eq!(labels, vec!["b0", "b0", "b1", "b1"]);
    }

    #[test]
    fn constant_feature_uses_a_single_equal_width_bin() {
        let rows: Vec<NumericRow> = (0..4).map(|_| numeric(7.0, Group::One)).collect();
        let binned = bin_numeric(&rows, BinningScheme::EqualWidth, &[3]).unwrap();
        assert!(binned.iter().all(|r| r.x == "b0"));
    }

    #[test]
    fn quantile_bins_match_a_sorting_oracle() {
        // 100 distinct values with unit weights: four bins of exactly 25.
        let values: Vec<f64> = (0..100).map(|i| (i as f64) * 0.01 + 0.005).collect();
        let rows: Vec<NumericRow> = values.iter().map(|&v| numeric(v, Group::Zero)).collect();
        let binned = bin_numeric(&rows, BinningScheme::Quantile, &[4]).unwrap();

        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let mut counts = [0usize; 4];
        for row in &binned {
            let idx: usize = row.x[1..].parse().unwrap();
            counts[idx] += 1;
        }
        assert_eq!(counts, [25, 25, 25, 25]);
        // The oracle: value rank determines the bin.
        for (row, &v) in binned.iter().zip(&values) {
            let rank = sorted.iter().position(|&s| s == v).unwrap();
            let expected = (rank / 25).min(3);
            assert_eq!(row.x, format!("b{expected}"), "value {v}");
        }
    }

    #[test]
    fn quantile_bins_reject_constant_features() {
        let rows: Vec<NumericRow> = (0..5).map(|_| numeric(1.0, Group::Zero)).collect();
        assert!(matches!(
            bin_numeric(&rows, BinningScheme::Quantile, &[4]),
            Err(Error::ConstantFeatureWithQuantiles { feature: 0 })
        ));
    }

    #[test]
    fn zero_bins_are_rejected() {
        let rows = vec![numeric(1.0, Group::Zero)];
        assert!(matches!(
            bin_numeric(&rows, BinningScheme::EqualWidth, &[0]),
            Err(Error::ZeroBins)
        ));
    }

    #[test]
    fn bin_counts_are_per_feature() {
        let rows = vec![
            NumericRow {
                features: vec![0.0, 9.0],
                a: Group::Zero,
                y: false,
                weight: 1.0,
            },
            NumericRow {
                features: vec![5.0, 1.0],
                a: Group::One,
                y: true,
                weight: 1.0,
            },
            NumericRow {
                features: vec![10.0, 5.0],
                a: Group::One,
                y: true,
                weight: 1.0,
            },
        ];
        let binned = bin_numeric(&rows, BinningScheme::EqualWidth, &[2, 3]).unwrap();
        assert_eq!(binned[0].x, "b0_b2");
        assert_eq!(binned[1].x, "b1_b0");
        assert_eq!(binned[2].x, "b1_b1");
    }

    #[test]
    fn bin_count_list_must_match_the_feature_arity() {
        let rows = vec![numeric(1.0, Group::Zero), numeric(2.0, Group::One)];
        assert!(matches!(
            bin_numeric(&rows, BinningScheme::EqualWidth, &[2, 2]),
            Err(Error::FeatureArityMismatch {
                row: 0,
                expected: 2,
                got: 1
            })
        ));
    }
}
