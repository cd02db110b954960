use thiserror::Error;

/// Errors raised by the operator algebra, calculators and solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension {dim}: every factor needs at least 2 levels")]
    InvalidDimension { dim: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands live on different Hilbert spaces ({left} vs {right})")]
    SpaceMismatch { left: String, right: String },

    #[error("factor index {index} out of range for a space with {factors} factors")]
    FactorOutOfRange { index: usize, factors: usize },

    #[error("operator is not Hermitian (max |M - M^dag| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("resonance pole: E_J/hbar = {e_j:.6e} rad/s is too close to Omega_M = {omega_m:.6e} rad/s")]
    ResonancePole { e_j: f64, omega_m: f64 },

    #[error("no steady state: drift matrix has an eigenvalue with real part {max_real:.3e} >= 0")]
    NoSteadyState { max_real: f64 },

    #[error("singular linear system while solving {0}")]
    Singular(&'static str),

    #[error("integrator step size underflow at t = {t:.6e} (step {step:.3e}); the problem looks stiff")]
    StepUnderflow { t: f64, step: f64 },

    #[error("Fock truncation violated on factor `{factor}`: top-two population {population:.3e}; try dim >= {suggested_dim}")]
    Truncation {
        factor: String,
        population: f64,
        suggested_dim: usize,
    },

    #[error("unknown scenario `{name}`; valid names: {}", valid.join(", "))]
    UnknownScenario { name: String, valid: Vec<String> },

    #[error("scenario `{0}` does not describe a qubit-resonator system")]
    NotQubitScenario(String),

    #[error("unknown parameter `{name}` for scenario `{scenario}`")]
    UnknownParameter { scenario: String, name: String },

    #[error("exponential fit failed: {0}")]
    FitFailure(String),

    #[error("data table error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}
