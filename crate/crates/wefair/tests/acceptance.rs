//! Acceptance gate: ten go/no-go checks, one test and one PASS line per
//! criterion. Every numeric claim is pinned to a stated tolerance; the
//! derived example values are confirmed by the brute-force oracle before
//! the exact solver is allowed to assert them.

mod common;

use common::{
    assert_concave, assert_threshold_structure, measurement_suite, random_population,
    random_utility, rng,
};
use rand::Rng;
use wefair::analytics::{
    check_disadvantaged_impact, check_proxy_robustness, disadvantaged_group, group_welfare,
};
use wefair::concepts::{make_utility, shift_to_zero_minus, ConceptSpec, OutcomePair, RawUtility};
use wefair::oracle::{brute_force_we, GridSpec};
use wefair::population::{Group, Population};
use wefair::presets::{example_population, outcome_concept, unaware_population};
use wefair::solver::{
    solve_unaware, solve_unconstrained, solve_we, solve_we_bisection, welfare_curve, Classifier,
    DEFAULT_BISECTION_TOLERANCE,
};

const TOL: f64 = 1e-9;

fn dp_utility(pop: &Population) -> wefair::concepts::UtilityTable {
    make_utility(&ConceptSpec::DemographicParity, pop).expect("parity utility")
}

fn eo_utility(pop: &Population) -> wefair::concepts::UtilityTable {
    make_utility(&ConceptSpec::EqualOpportunity { normalized: true }, pop)
        .expect("positive base rates")
}

#[test]
fn criterion_01_unconstrained_optimum_approves_exactly_one_cell() {
    let pop = example_population("ex1").unwrap();
    let sol = solve_unconstrained(&pop);
    for (x, a, c) in sol.classifier.entries() {
        let expected = if x == "1" && a == Group::One {
            1.0
        } else {
            0.0
        };
        assert_eq!(c, expected, "cell ({x}, {a})");
    }
    println!(
        "PASS criterion 1: unconstrained optimum approves exactly cell (1, 1), nobody in group 0"
    );
}

#[test]
fn criterion_02_unawareness_pushes_both_welfares_to_zero() {
    for (alpha_plus, alpha_minus, t) in [(9.0, 11.0, 0.55), (2.0, 3.0, 0.6), (7.0, 13.0, 0.65)] {
        let pop = unaware_population(alpha_plus, alpha_minus).unwrap();
        assert!((pop.cells()[0].break_even() - t).abs() < 1e-12);
        let sol = solve_unaware(&pop);
        assert_eq!(sol.revenue, 0.0, "t = {t}");
        for (x, a, c) in sol.classifier.entries() {
            assert_eq!(c, 0.0, "t = {t}, cell ({x}, {a})");
        }
        let outcome = make_utility(&outcome_concept(), &pop).unwrap();
        for u in [dp_utility(&pop), eo_utility(&pop), outcome] {
            for a in Group::BOTH {
                assert_eq!(group_welfare(&pop, &u, &sol.classifier, a).unwrap(), 0.0);
            }
        }
    }
    println!(
        "PASS criterion 2: unaware optimum is identically zero with zero welfare for t in {{0.55, 0.6, 0.65}}"
    );
}

#[test]
fn criterion_03_parity_protects_totals_but_not_good_borrowers() {
    let pop = example_population("dp_harm").unwrap();
    let parity = solve_we(&pop, &dp_utility(&pop)).unwrap();
    let group0_total: f64 = parity
        .classifier
        .entries()
        .filter(|(_, a, _)| *a == Group::Zero)
        .map(|(_, _, c)| c)
        .sum();
    assert!((group0_total - 1.0).abs() <= TOL, "total {group0_total}");

    let eo = eo_utility(&pop);
    let unconstrained = solve_unconstrained(&pop);
    let before = group_welfare(&pop, &eo, &unconstrained.classifier, Group::Zero).unwrap();
    assert!(
        (before - 6.0 / 7.0).abs() <= TOL,
        "unconstrained rate {before}"
    );
    let after = group_welfare(&pop, &eo, &parity.classifier, Group::Zero).unwrap();
    assert!(
        after < 6.0 / 7.0,
        "good-borrower approval {after} not strictly below 6/7"
    );
    println!(
        "PASS criterion 3: parity keeps group-0 approval total at 1 while its good-borrower rate falls below 6/7"
    );
}

#[test]
fn criterion_04_equal_opportunity_lowers_group_one_welfare() {
    let pop = example_population("eo_harm").unwrap();
    let unit = dp_utility(&pop);
    let unconstrained = solve_unconstrained(&pop);
    let before = group_welfare(&pop, &unit, &unconstrained.classifier, Group::One).unwrap();
    assert!((before - 1.0 / 3.0).abs() <= TOL, "before {before}");

    let constrained = solve_we(&pop, &eo_utility(&pop)).unwrap();
    let after = group_welfare(&pop, &unit, &constrained.classifier, Group::One).unwrap();
    assert!((after - 2.0 / 7.0).abs() <= TOL, "after {after}");
    println!(
        "PASS criterion 4: equal opportunity drops group-1 welfare from 1/3 to 2/7 under the unit utility"
    );
}

#[test]
fn criterion_05_disadvantaged_group_is_protected_on_seeded_instances() {
    let mut rng = rng(0x0505_0505);
    for i in 0..200 {
        let pop = random_population(&mut rng, 5);
        for (j, u) in measurement_suite(&mut rng, &pop).into_iter().enumerate() {
            let check = check_disadvantaged_impact(&pop, &u).unwrap();
            assert!(check.welfare_ok, "instance {i} utility {j}: {check:?}");
            assert!(
                check.pointwise_ok,
                "instance {i} utility {j}: violations at {:?}",
                check.violating_cells
            );
        }
    }
    println!(
        "PASS criterion 5: welfare and pointwise protection hold on 200 seeded populations x 4 utilities at 1e-9"
    );
}

#[test]
fn criterion_06_robustness_to_misspecified_utilities() {
    let mut rng = rng(0x0606_0606);
    let mut kept = 0;
    let mut attempts = 0;
    while kept < 100 {
        attempts += 1;
        assert!(attempts < 5000, "generator starved: {kept} instances kept");
        let pop = random_population(&mut rng, 4);
        let u_true = random_utility(&mut rng, &pop, 0.15);
        let u_assumed = random_utility(&mut rng, &pop, 0.15);
        let d_true = disadvantaged_group(&pop, &u_true).unwrap();
        if d_true.is_none() || d_true != disadvantaged_group(&pop, &u_assumed).unwrap() {
            continue;
        }
        let check = check_proxy_robustness(&pop, &u_true, &u_assumed).unwrap();
        assert!(check.applicable, "instance {kept}");
        assert!(check.ok, "instance {kept}: {check:?}");
        kept += 1;
    }
    println!(
        "PASS criterion 6: proxy-utility robustness holds on 100 seeded paired instances at 1e-9"
    );
}

#[test]
fn criterion_07_curve_bisection_and_oracle_agree() {
    let mut rng = rng(0x0707_0707);
    for i in 0..100 {
        let pop = random_population(&mut rng, 2);
        let u = random_utility(&mut rng, &pop, 0.15);
        let exact = solve_we(&pop, &u).unwrap();
        let bisected = solve_we_bisection(&pop, &u, DEFAULT_BISECTION_TOLERANCE).unwrap();
        assert!(
            (exact.revenue - bisected.revenue).abs() <= TOL,
            "instance {i}: curve {} vs bisection {}",
            exact.revenue,
            bisected.revenue
        );

        let oracle = brute_force_we(&pop, &u, GridSpec::new(50)).unwrap();
        let l: f64 = pop.cells().iter().map(|c| c.mass * c.margin().abs()).sum();
        let band = 2.0 * l / 50.0 + 1e-12;
        assert!(
            (exact.revenue - oracle.revenue).abs() <= band,
            "instance {i}: curve {} vs oracle {} outside {band}",
            exact.revenue,
            oracle.revenue
        );
        assert!(
            (bisected.revenue - oracle.revenue).abs() <= band,
            "instance {i}: bisection {} vs oracle {} outside {band}",
            bisected.revenue,
            oracle.revenue
        );
    }
    println!(
        "PASS criterion 7: curve and bisection agree at 1e-9 and both sit in the oracle band on 100 seeded instances"
    );
}

#[test]
fn criterion_08_structural_invariants_of_curves_and_solutions() {
    let mut rng = rng(0x0808_0808);
    for _ in 0..200 {
        let pop = random_population(&mut rng, 5);
        for u in measurement_suite(&mut rng, &pop) {
            for a in Group::BOTH {
                assert_concave(&welfare_curve(&pop, &u, a).unwrap());
            }
            let res = solve_we(&pop, &u).unwrap();
            assert_threshold_structure(&pop, &u, &res, TOL);
        }
    }
    println!(
        "PASS criterion 8: slopes nonincreasing (exact) and threshold structure with equal welfare at 1e-9"
    );
}

fn raw_group_welfare(pop: &Population, raw: &RawUtility, c: &Classifier, a: Group) -> f64 {
    pop.group_cells(a)
        .map(|cell| {
            let key = (cell.x.clone(), cell.a);
            let mean =
                |pair: OutcomePair| pair.on_repay * cell.p + pair.on_default * (1.0 - cell.p);
            let approve = c.get(&cell.x, cell.a);
            pop.conditional_mass(cell)
                * (approve * mean(raw.granted[&key]) + (1.0 - approve) * mean(raw.denied[&key]))
        })
        .sum()
}

#[test]
fn criterion_09_denial_shift_preserves_equalization_membership() {
    let mut rng = rng(0x0909_0909);
    for i in 0..50 {
        let pop = random_population(&mut rng, 4);
        let mut raw = RawUtility::default();
        for cell in pop.cells() {
            let denied = OutcomePair {
                on_default: rng.random_range(0.0..=1.0),
                on_repay: rng.random_range(0.0..=1.0),
            };
            let granted = OutcomePair {
                on_default: denied.on_default + rng.random_range(0.0..=2.0),
                on_repay: denied.on_repay + rng.random_range(0.0..=2.0),
            };
            raw.denied.insert((cell.x.clone(), cell.a), denied);
            raw.granted.insert((cell.x.clone(), cell.a), granted);
        }
        // Balance the all-deny welfare by shifting one group-1 cell's
        // granted and denied pairs together, leaving their difference
        // (the shifted utility) untouched.
        let zero = Classifier::zero(&pop);
        let gap = raw_group_welfare(&pop, &raw, &zero, Group::Zero)
            - raw_group_welfare(&pop, &raw, &zero, Group::One);
        let first = pop.group_cells(Group::One).next().unwrap();
        let delta = gap / pop.conditional_mass(first);
        let key = (first.x.clone(), Group::One);
        for table in [&mut raw.denied, &mut raw.granted] {
            let pair = table.get_mut(&key).unwrap();
            pair.on_default += delta;
            pair.on_repay += delta;
        }

        let shifted = shift_to_zero_minus(&raw, &pop).unwrap();
        let mut classifiers: Vec<Classifier> = (0..50)
            .map(|_| {
                let values = pop
                    .cells()
                    .iter()
                    .map(|_| match rng.random_range(0..4) {
                        0 => 0.0,
                        1 => 1.0,
                        _ => rng.random::<f64>(),
                    })
                    .collect();
                Classifier::from_aligned(&pop, values).unwrap()
            })
            .collect();
        classifiers.push(zero);
        classifiers.push(solve_we(&pop, &shifted).unwrap().classifier);

        for (j, c) in classifiers.iter().enumerate() {
            let raw_gap = raw_group_welfare(&pop, &raw, c, Group::Zero)
                - raw_group_welfare(&pop, &raw, c, Group::One);
            let shifted_gap = group_welfare(&pop, &shifted, c, Group::Zero).unwrap()
                - group_welfare(&pop, &shifted, c, Group::One).unwrap();
            assert!(
                (raw_gap - shifted_gap).abs() <= 1e-12,
                "instance {i} classifier {j}: gaps {raw_gap} vs {shifted_gap}"
            );
            assert_eq!(
                raw_gap.abs() <= TOL,
                shifted_gap.abs() <= TOL,
                "instance {i} classifier {j}: membership flips ({raw_gap} vs {shifted_gap})"
            );
        }
    }
    println!(
        "PASS criterion 9: two-sided utilities and their denial shifts agree on membership for 50 x 52 checks"
    );
}

#[test]
fn criterion_10_derived_values_confirmed_by_the_oracle_first() {
    let pop = example_population("ex1").unwrap();
    let l: f64 = pop.cells().iter().map(|c| c.mass * c.margin().abs()).sum();
    let band = 2.0 * l / 50.0 + 1e-12;
    let grid = GridSpec::new(50);

    // Oracle confirmations come first: the grid search knows nothing of
    // curves or thresholds.
    let free = make_utility(
        &ConceptSpec::Custom {
            entries: Vec::new(),
        },
        &pop,
    )
    .unwrap();
    let grid_unconstrained = brute_force_we(&pop, &free, grid).unwrap();
    assert!(
        (grid_unconstrained.revenue - 0.25).abs() <= band,
        "grid unconstrained {}",
        grid_unconstrained.revenue
    );

    let dp = dp_utility(&pop);
    let grid_parity = brute_force_we(&pop, &dp, grid).unwrap();
    assert!(
        (grid_parity.revenue - 0.2).abs() <= band,
        "grid parity {}",
        grid_parity.revenue
    );

    let outcome = make_utility(&outcome_concept(), &pop).unwrap();
    let grid_repay = brute_force_we(&pop, &outcome, grid).unwrap();
    assert!(
        (grid_repay.revenue - 0.1).abs() <= band,
        "grid repayment {}",
        grid_repay.revenue
    );
    for a in Group::BOTH {
        let w = group_welfare(&pop, &outcome, &grid_repay.classifier, a).unwrap();
        assert!((w - 0.3).abs() <= 0.02, "grid repayment welfare {w}");
    }

    // Only now may the exact solver repeat the same numbers tightly.
    assert!((solve_unconstrained(&pop).revenue - 0.25).abs() <= TOL);
    let parity = solve_we(&pop, &dp).unwrap();
    assert!((parity.revenue - 0.2).abs() <= TOL);
    let repay = solve_we(&pop, &outcome).unwrap();
    assert!((repay.revenue - 0.1).abs() <= TOL);
    assert!((repay.w_star - 0.3).abs() <= TOL);
    println!(
        "PASS criterion 10: oracle brackets 0.25 / 0.2 / 0.1 and w* = 0.3 before the exact solver asserts them at 1e-9"
    );
}
