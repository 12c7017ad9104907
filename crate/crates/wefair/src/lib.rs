//! Revenue-optimal lending classifiers under welfare-equalizing fairness.
//!
//! A lender approves loan applications described by an observable label
//! and a protected group. Each approval earns `alpha_plus` when the
//! borrower repays and loses `alpha_minus` otherwise. This crate computes
//! the revenue-maximizing randomized classifier subject to a
//! welfare-equalizing (WE) constraint: expected borrower welfare, measured
//! by a chosen utility, must be identical across the two groups.
//!
//! Demographic parity is the WE constraint for the constant utility 1;
//! equal opportunity is the WE constraint for a utility supported on
//! repaying borrowers. Arbitrary nonnegative outcome-dependent utilities
//! are supported through the same interface.
//!
//! # Modules
//!
//! - [`population`]: discrete populations, validation, sample ingestion.
//! - [`concepts`]: utility tables for standard and custom fairness notions.
//! - [`solver`]: the unconstrained, group-unaware, and WE solvers.
//! - [`analytics`]: audits, fairness gaps, welfare impact checks.
//! - [`oracle`]: brute-force grid reference solvers for verification.
//! - [`io`]: JSON and CSV readers and writers for all artifact types.
//! - [`presets`]: small built-in example populations.
//!
//! # Example
//!
//! ```
//! use wefair::concepts::{make_utility, ConceptSpec};
//! use wefair::presets::example_population;
//! use wefair::solver::solve_we;
//!
//! let pop = example_population("ex1").unwrap();
//! let u = make_utility(&ConceptSpec::DemographicParity, &pop).unwrap();
//! let sol = solve_we(&pop, &u).unwrap();
//! assert!((sol.revenue - 0.2).abs() < 1e-12);
//! assert!((sol.welfare[0] - sol.welfare[1]).abs() < 1e-9);
//! ```

pub mod analytics;
pub mod concepts;
pub mod error;
pub mod io;
pub mod oracle;
pub mod population;
pub mod presets;
pub mod solver;

pub use error::Error;

/// Welfare gaps at or below this tolerance count as equalized.
pub const WELFARE_TOLERANCE: f64 = 1e-9;
