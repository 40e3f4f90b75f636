use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("actuator count must satisfy n >= 3, got n = {0}")]
    ActuatorCount(usize),

    #[error("{field} must be positive and finite, got {value}")]
    NonPositive { field: &'static str, value: f64 },

    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },

    #[error("expected a joint vector of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),

    #[error("arc length {arc} does not match segment length {segment}")]
    ArcLengthMismatch { arc: f64, segment: f64 },

    #[error("tendon index {index} out of range 1..={n}")]
    TendonIndex { index: usize, n: usize },

    #[error("position ({x}, {y}, {z}) is not reachable by a single constant-curvature segment")]
    Unreachable { x: f64, y: f64, z: f64 },

    #[error("cannot compose an empty list of poses")]
    EmptyChain,

    #[error(
        "segment {segment}: joint vector is infeasible (sum residual {sum_residual:e}, \
         manifold residual {manifold_residual:e}, tolerance {tol:e})"
    )]
    Infeasible {
        segment: usize,
        sum_residual: f64,
        manifold_residual: f64,
        tol: f64,
    },

    #[error("segment {segment}: operator returned non-finite Clarke coordinates ({re}, {im})")]
    OperatorOutput { segment: usize, re: f64, im: f64 },

    #[error("configuration has {found} entries but the robot has {expected} segments")]
    SegmentCount { expected: usize, found: usize },

    #[error("robot description: {0}")]
    Description(String),

    #[error("trajectory: {0}")]
    Trajectory(String),
}

impl Error {
    /// Name of the subsystem that raised the error, used as the diagnostic prefix.
    pub fn module(&self) -> &'static str {
        match self {
            Error::ActuatorCount(_)
            | Error::LengthMismatch { .. }
            | Error::Tolerance(_)
            | Error::Infeasible { .. } => "clarke_core",
            Error::ArcLengthMismatch { .. } | Error::TendonIndex { .. } => "arc_kinematics",
            Error::Unreachable { .. } | Error::EmptyChain => "pose_mapping",
            Error::NonPositive { .. } | Error::NonFinite { .. } => "geometry",
            Error::OperatorOutput { .. }
            | Error::SegmentCount { .. }
            | Error::Description(_)
            | Error::Trajectory(_) => "robot_model",
        }
    }
}

pub(crate) fn finite(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { field, value })
    }
}

pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::NonPositive { field, value })
    }
}
