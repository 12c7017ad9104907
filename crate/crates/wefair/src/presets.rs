//! Built-in example populations used by the documentation, the test
//! suite, and the `examples` subcommand of the command line.

use crate::concepts::ConceptSpec;
use crate::error::Error;
use crate::population::{Cell, Group, Population};

/// Names accepted by [`example_population`].
pub const EXAMPLE_NAMES: [&str; 4] = ["ex1", "unaware", "dp_harm", "eo_harm"];

fn cell(x: &str, a: Group, mass: f64, p: f64, alpha_plus: f64, alpha_minus: f64) -> Cell {
    Cell {
        x: x.into(),
        a,
        mass,
        p,
        alpha_plus,
        alpha_minus,
    }
}

/// A built-in example population by name:
///
/// - `"ex1"`: binary label, four equally likely cells, stakes (1, 2) so
///   the break-even point is 2/3. The label barely separates borrowers in
///   group 0 and separates them perfectly in group 1, so the plain
///   profit-maximal classifier lends only in group 1.
/// - `"unaware"`: mirror-image groups whose pooled repayment probability
///   is 1/2 on both labels, with stakes (2, 3). Group-blind lending
///   cannot tell anyone apart and approves nobody.
/// - `"dp_harm"`: ternary label, stakes (2, 3). Equalizing approval
///   rates cuts loans to the group whose good borrowers are harder to
///   identify.
/// - `"eo_harm"`: the same repayment matrix with stakes (3, 7).
///   Equalizing good-borrower approval rates cuts loans in the group
///   with fewer good borrowers.
pub fn example_population(name: &str) -> Result<Population, Error> {
    match name {
        "ex1" => Population::new(vec![
            cell("0", Group::Zero, 0.25, 0.4, 1.0, 2.0),
            cell("1", Group::Zero, 0.25, 0.6, 1.0, 2.0),
            cell("0", Group::One, 0.25, 0.0, 1.0, 2.0),
            cell("1", Group::One, 0.25, 1.0, 1.0, 2.0),
        ]),
        "unaware" => unaware_population(2.0, 3.0),
        "dp_harm" => ternary_population(2.0, 3.0),
        "eo_harm" => ternary_population(3.0, 7.0),
        other => Err(Error::UnknownExample {
            name: other.to_owned(),
        }),
    }
}

/// The mirror-image population behind `"unaware"`, with configurable
/// stakes: p is 2/3 on each group's strong label and 1/3 on its weak
/// one, so pooling collapses both labels to 1/2.
pub fn unaware_population(alpha_plus: f64, alpha_minus: f64) -> Result<Population, Error> {
    Population::new(vec![
        cell("0", Group::Zero, 0.25, 2.0 / 3.0, alpha_plus, alpha_minus),
        cell("1", Group::Zero, 0.25, 1.0 / 3.0, alpha_plus, alpha_minus),
        cell("0", Group::One, 0.25, 1.0 / 3.0, alpha_plus, alpha_minus),
        cell("1", Group::One, 0.25, 2.0 / 3.0, alpha_plus, alpha_minus),
    ])
}

/// Ternary-label population shared by `"dp_harm"` and `"eo_harm"`:
/// group 0 holds more good borrowers overall but the label separates
/// them imperfectly; group 1 is perfectly separated.
fn ternary_population(alpha_plus: f64, alpha_minus: f64) -> Result<Population, Error> {
    let m = 1.0 / 6.0;
    Population::new(vec![
        cell("0", Group::Zero, m, 0.75, alpha_plus, alpha_minus),
        cell("1", Group::Zero, m, 0.75, alpha_plus, alpha_minus),
        cell("2", Group::Zero, m, 0.25, alpha_plus, alpha_minus),
        cell("0", Group::One, m, 1.0, alpha_plus, alpha_minus),
        cell("1", Group::One, m, 0.0, alpha_plus, alpha_minus),
        cell("2", Group::One, m, 0.0, alpha_plus, alpha_minus),
    ])
}

/// The outcome utility u(x, a, y) = y: good borrowers value approval at
/// 1, everyone else is indifferent.
pub fn outcome_concept() -> ConceptSpec {
    ConceptSpec::EqualizedOddsMember {
        alpha: 1.0,
        beta: 0.0,
    }
}
