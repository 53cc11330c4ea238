//! Error types for parameter validation, numerical routines, simulation,
//! design queries, and corpus handling.

use thiserror::Error;

/// Physical-parameter validation failure.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("{name} must be finite and positive (got {value})")]
    NotPositive { name: &'static str, value: f64 },

    #[error("{name} must be finite and nonnegative (got {value})")]
    NotNonnegative { name: &'static str, value: f64 },

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// The tail cannot be mapped onto the template: the nonlinearity is
    /// large enough that the body-side inertia loses positivity somewhere
    /// in the stroke (eta must stay below sqrt((1-xi)/xi) and 1/(2 xi)).
    #[error(
        "tail outside the reducible domain: eta = {eta:.6} >= limit {limit:.6} at xi = {xi:.6}"
    )]
    TailDomain { xi: f64, eta: f64, limit: f64 },

    /// Limb phases must be all-in-phase (sum = N) or balanced anti-phase
    /// (sum = 0); anything else breaks configuration independence.
    #[error(
        "unsupported limb phasing: sum of phases {phase_sum} for {limb_count} limbs \
         (need 0 or {limb_count}); general independence criterion {}",
        if *independent { "holds" } else { "fails" }
    )]
    UnsupportedPhasing {
        phase_sum: i32,
        limb_count: usize,
        independent: bool,
    },

    /// Pivot offsets must balance (sum to zero) for the reduction to hold.
    #[error(
        "asymmetric limb pivots: offsets sum to {offset_sum:.6} m (need 0); \
         general independence criterion {}",
        if *independent { "holds" } else { "fails" }
    )]
    AsymmetricPivots { offset_sum: f64, independent: bool },

    #[error("a finite stroke is required for {context}")]
    StrokeRequired { context: &'static str },

    #[error("a concrete switch time is required for {context}")]
    SwitchTimeRequired { context: &'static str },

    #[error("sweep endpoints coincide; body rotation is zero and the relative error is undefined")]
    DegenerateSweep,
}

/// Failure in the gearing root-finding or optimization layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GearingError {
    #[error(transparent)]
    Param(#[from] ParamError),

    /// The rotation budget was not reached within the doubling bracket;
    /// cannot happen for positive omega/beta but reported rather than
    /// looping forever.
    #[error("no switch time reaches the rotation budget below t = {max} (dimensionless)")]
    BracketExhausted { max: f64 },
}

/// Failure inside a trajectory integration.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Param(#[from] ParamError),

    #[error(transparent)]
    Gearing(#[from] GearingError),

    /// The 2x2 mass matrix lost positive-definiteness; impossible inside
    /// the validated (xi, eta) domain.
    #[error("mass matrix determinant {det:.3e} not positive at tail angle {theta_r:.4} rad")]
    MassMatrixSingular { det: f64, theta_r: f64 },

    #[error("integration state became non-finite at t = {t:.6}")]
    NonFiniteState { t: f64 },
}

/// Failure in a design-space query or body-selection solve.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DesignError {
    #[error(transparent)]
    Param(#[from] ParamError),

    #[error(transparent)]
    Gearing(#[from] GearingError),

    /// The stroke budget alone rules the task out: no effectiveness < 1
    /// can rotate the body far enough.
    #[error(
        "required effectiveness {required:.4} >= 1: a {stroke_deg:.1} deg stroke cannot \
         produce the requested rotation"
    )]
    EffectivenessUnreachable { required: f64, stroke_deg: f64 },

    /// The appendage's own inertia already exceeds the pivot moment the
    /// target effectiveness allows, so no positive length works.
    #[error(
        "appendage inertia {existing:.3e} kg m^2 exceeds the required pivot moment \
         {required:.3e} kg m^2; no positive appendage length achieves the effectiveness"
    )]
    InertiaExceedsBudget { existing: f64, required: f64 },
}

/// Failure loading or interpreting the bundled morphology corpus.
#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("corpus JSON malformed: {0}")]
    Json(#[from] serde_json::Error),

    #[error("unknown robot {name:?}; run the list subcommand for available names")]
    UnknownRobot { name: String },

    #[error("record {name:?} is missing field {field} required for its kind")]
    MissingField { name: String, field: &'static str },

    #[error("record {name:?} has kind {actual}, expected {expected}")]
    WrongKind {
        name: String,
        actual: &'static str,
        expected: &'static str,
    },

    #[error(transparent)]
    Param(#[from] ParamError),
}
