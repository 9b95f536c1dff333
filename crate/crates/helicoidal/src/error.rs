//! Error types shared by the geometry kernel and the planners.

use thiserror::Error;

/// Errors raised by the geometric primitives.
///
/// The kernel fails loud: degenerate inputs (zero-norm directions, points off
/// their constraint set, mismatched curvatures) are rejected rather than
/// silently repaired.
#[derive(Debug, Clone, Error)]
pub enum GeomError {
    /// An input violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The operation is not defined for the given curvature.
    #[error("unsupported for curvature {kappa}: {what}")]
    Unsupported { kappa: i8, what: String },

    /// Two arguments live on space forms of different curvature.
    #[error("curvature mismatch: {0} vs {1}")]
    KappaMismatch(i8, i8),

    /// cot(eta) is required but eta is 0 or pi while rho*theta != 0.
    #[error("singular cotangent: eta in {{0, pi}} with rho*theta != 0")]
    SingularCotangent,

    /// A ruled surface is cylindrical at the requested parameter (V' = 0),
    /// so no standard parametrization exists there.
    #[error("cylindrical input: ||V'(t0)|| = {norm:e} below tolerance")]
    CylindricalInput { norm: f64 },

    /// Hyperbolic trigonometric argument too large for f64 (cosh overflow).
    #[error("hyperbolic argument {0} exceeds the supported range |s| <= 700")]
    HyperbolicRange(f64),
}

impl GeomError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        GeomError::InvalidInput(msg.into())
    }
}

/// Errors raised by plan construction and execution.
#[derive(Debug, Error)]
pub enum PlannerError {
    /// A planner could not produce a valid plan; carries diagnostics.
    #[error("planner failure at {stage}: {details}")]
    Failure { stage: String, details: String },

    /// Consecutive plan pieces do not chain: piece `index` does not start
    /// where the previous piece ended.
    #[error("broken plan: piece {index} starts {gap:e} away from the previous endpoint")]
    BrokenPlan { index: usize, gap: f64 },

    #[error(transparent)]
    Geom(#[from] GeomError),
}
