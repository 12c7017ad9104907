//! Seeded generators and structural assertions shared by the
//! integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wefair::concepts::{make_utility, ConceptSpec, UtilityTable, UtilityValue};
use wefair::population::{Cell, Group, Population};
use wefair::solver::{ConcaveCurve, WeSolveResult};

/// Deterministic generator; every suite derives its stream from a fixed
/// seed so failures reproduce bit for bit.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random population with 1..=max_labels labels, both groups populated
/// on every label. Draw ranges: repayment probability uniform in
/// [0.02, 0.98], stakes uniform in [0.5, 2] per label (shared across
/// groups as required), raw cell mass uniform in [0.05, 1.05] before
/// normalization.
pub fn random_population(rng: &mut ChaCha8Rng, max_labels: usize) -> Population {
    let labels = rng.random_range(1..=max_labels);
    let mut cells = Vec::new();
    for i in 0..labels {
        let alpha_plus = rng.random_range(0.5..=2.0);
        let alpha_minus = rng.random_range(0.5..=2.0);
        for a in Group::BOTH {
            cells.push(Cell {
                x: i.to_string(),
                a,
                mass: rng.random_range(0.05..=1.05),
                p: rng.random_range(0.02..=0.98),
                alpha_plus,
                alpha_minus,
            });
        }
    }
    let total: f64 = cells.iter().map(|c| c.mass).sum();
    for cell in &mut cells {
        cell.mass /= total;
    }
    Population::new(cells).expect("generated populations are valid")
}

/// Random nonnegative per-cell utility; with probability `zero_prob`
/// an entry is exactly zero, exercising the welfare-free cell paths.
pub fn random_utility(rng: &mut ChaCha8Rng, pop: &Population, zero_prob: f64) -> UtilityTable {
    let mut entries = Vec::new();
    for cell in pop.cells() {
        for y in [false, true] {
            let value = if rng.random::<f64>() < zero_prob {
                0.0
            } else {
                rng.random_range(0.0..=2.0)
            };
            entries.push(UtilityValue {
                x: cell.x.clone(),
                a: cell.a,
                y,
                value,
            });
        }
    }
    make_utility(&ConceptSpec::Custom { entries }, pop).expect("nonnegative custom utility")
}

/// The measurement utilities of the acceptance property suites: parity,
/// normalized equal opportunity, repayment utility, and a seeded random
/// nonnegative table.
pub fn measurement_suite(rng: &mut ChaCha8Rng, pop: &Population) -> Vec<UtilityTable> {
    vec![
        make_utility(&ConceptSpec::DemographicParity, pop).expect("parity"),
        make_utility(&ConceptSpec::EqualOpportunity { normalized: true }, pop)
            .expect("positive base rates by construction"),
        make_utility(&wefair::presets::outcome_concept(), pop).expect("repayment"),
        random_utility(rng, pop, 0.2),
    ]
}

/// Asserts the per-group threshold structure of a solution: strict
/// margin-versus-threshold comparisons force 0/1 decisions and interior
/// values only sit on the knife edge; the two group welfares agree.
pub fn assert_threshold_structure(
    pop: &Population,
    u: &UtilityTable,
    res: &WeSolveResult,
    tol: f64,
) {
    assert!(
        (res.welfare[0] - res.welfare[1]).abs() <= tol,
        "welfare gap {:e} above {tol:e}",
        (res.welfare[0] - res.welfare[1]).abs()
    );
    for (cell, e) in pop.cells().iter().zip(u.entries()) {
        let c = res.classifier.get(&cell.x, cell.a);
        let d = cell.margin() - res.lambda[cell.a.index()] * e.mean;
        if c > 0.0 && c < 1.0 {
            assert!(
                d.abs() <= tol,
                "interior value {c} off the threshold at ({}, {}): d = {d:e}",
                cell.x,
                cell.a
            );
        }
        if d > tol {
            assert_eq!(
                c, 1.0,
                "cell ({}, {}) above the threshold (d = {d:e}) not approved",
                cell.x, cell.a
            );
        }
        if d < -tol {
            assert_eq!(
                c, 0.0,
                "cell ({}, {}) below the threshold (d = {d:e}) not rejected",
                cell.x, cell.a
            );
        }
    }
}

/// Asserts the stored slopes are nonincreasing, bit for bit.
pub fn assert_concave(curve: &ConcaveCurve) {
    for pair in curve.segments().windows(2) {
        assert!(
            pair[1].slope <= pair[0].slope,
            "slopes increase: {} then {}",
            pair[0].slope,
            pair[1].slope
        );
    }
}
