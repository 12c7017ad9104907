//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::population::Group;

/// Everything that can go wrong while building populations, utilities,
/// classifiers, or while running the solvers and auditors.
#[derive(Debug, Error)]
pub enum Error {
    /// Cell masses must describe a probability distribution.
    #[error("cell masses sum to {total:.17}, expected 1 within {tolerance:e}")]
    MassNotNormalized { total: f64, tolerance: f64 },

    /// Masses and sample weights must be finite and nonnegative.
    #[error("cell ({x}, {a}) has negative or non-finite mass {mass}")]
    NegativeMass { x: String, a: Group, mass: f64 },

    /// Repayment probabilities live in [0, 1].
    #[error("cell ({x}, {a}) has repayment probability {p} outside [0, 1]")]
    ProbabilityOutOfRange { x: String, a: Group, p: f64 },

    /// Both stakes must be finite and strictly positive.
    #[error(
        "cell ({x}, {a}) has non-positive stakes: alpha_plus {alpha_plus}, alpha_minus {alpha_minus}"
    )]
    NonPositiveAlpha {
        x: String,
        a: Group,
        alpha_plus: f64,
        alpha_minus: f64,
    },

    /// Every group needs strictly positive total mass.
    #[error("group {a} has zero total mass")]
    EmptyGroup { a: Group },

    /// Stakes depend on the label only, never on the group.
    #[error("label {x} carries different stakes in the two groups")]
    InconsistentAlphaAcrossGroups { x: String },

    /// A (label, group) pair may appear at most once.
    #[error("duplicate cell ({x}, {a})")]
    DuplicateCell { x: String, a: Group },

    /// No rows, or no rows with positive weight.
    #[error("empty input: no samples with positive weight")]
    EmptyInput,

    /// The stake table must cover every observed label.
    #[error("no stake entry for label {x}")]
    MissingAlphaEntry { x: String },

    /// Binning needs at least one bin.
    #[error("bin count must be positive")]
    ZeroBins,

    /// Quantile cut points collapse on a constant feature; callers must
    /// pick another scheme instead of silently falling back.
    #[error("feature {feature} is constant; quantile binning cannot split it")]
    ConstantFeatureWithQuantiles { feature: usize },

    /// All rows must carry the same number of features.
    #[error("row {row} has {got} features, expected {expected}")]
    FeatureArityMismatch {
        row: usize,
        expected: usize,
        got: usize,
    },

    /// Features must be finite numbers.
    #[error("row {row} feature {feature} is not a finite number")]
    NonFiniteFeature { row: usize, feature: usize },

    /// Conditioning on repayment inside a group that never repays.
    #[error("group {a} has no good borrowers; the conditional utility is undefined")]
    NoGoodBorrowersInGroup { a: Group },

    /// Utilities are nonnegative by construction.
    #[error("utility for cell ({x}, {a}) with outcome y={y} is negative: {value}")]
    NegativeUtility {
        x: String,
        a: Group,
        y: u8,
        value: f64,
    },

    /// The denied-side utility must already be group-balanced before it
    /// can be shifted away.
    #[error(
        "the all-deny classifier is not welfare-equalizing under the raw utility: denied-side welfare gap {gap:e}"
    )]
    ZeroClassifierNotWE { gap: f64 },

    /// A conditional rate with an empty conditioning event.
    #[error("conditional rate undefined: group {a} has zero mass on outcome y={y}")]
    UndefinedConditional { a: Group, y: u8 },

    /// The concept description itself is invalid.
    #[error("invalid concept: {reason}")]
    InvalidConcept { reason: String },

    /// A utility table built for a different population.
    #[error("utility table domain does not match the population at cell ({x}, {a})")]
    UtilityDomainMismatch { x: String, a: Group },

    /// A classifier defined on a different cell set.
    #[error("classifier domain does not match the population at cell ({x}, {a})")]
    DomainMismatch { x: String, a: Group },

    /// The scalarized solver found no sign change for the welfare-gap
    /// multiplier, or the localized multiplier admits no equalizing tie
    /// split. Use the curve solver for such degenerate instances.
    #[error(
        "no sign change found for the welfare-gap multiplier after {doublings} bracket doublings"
    )]
    BracketNotFound { doublings: u32 },

    /// Brute-force enumeration is exponential; refuse oversized inputs.
    #[error("instance has {cells} cells, the enumeration bound is {max}")]
    InstanceTooLarge { cells: usize, max: usize },

    /// A target welfare outside the reachable range.
    #[error("target welfare {w} is outside the curve domain [0, {w_max}] (slack {slack:e})")]
    WOutOfDomain { w: f64, w_max: f64, slack: f64 },

    /// Classifier values are approval probabilities.
    #[error("classifier value {c} for cell ({x}, {a}) is outside [0, 1]")]
    ClassifierOutOfRange { x: String, a: Group, c: f64 },

    /// Requested a built-in example that does not exist.
    #[error("unknown example {name:?}; expected one of ex1, unaware, dp_harm, eo_harm")]
    UnknownExample { name: String },

    /// A syntactically well-formed command-line argument with an invalid
    /// value.
    #[error("invalid argument {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// Malformed input file with a known context.
    #[error("{context}: {reason}")]
    InvalidFormat { context: String, reason: String },

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of reading or decoding input bytes, as opposed to
    /// semantic validation of well-formed input. The command line maps the
    /// former to exit code 2 and the latter to exit code 1.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::InvalidFormat { .. }
        )
    }
}
