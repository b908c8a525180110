use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeoError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    /// A family parameter collapses the group onto a smaller catalog entry.
    #[error("degenerate parameter for {group}: {reason}")]
    DegenerateParameter { group: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown subgroup name `{0}`")]
    UnknownGroup(String),

    #[error("geodesic endpoints must be distinct")]
    EqualEndpoints,

    #[error("singular Möbius map (ad - bc = 0)")]
    SingularMobius,

    #[error("value {value} outside the domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("fiber solver failed: residual {residual:e}")]
    SolverFailure { residual: f64 },

    #[error("not a fiber of the fibration (mismatch {mismatch:e})")]
    NotAFiber { mismatch: f64 },

    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
}
