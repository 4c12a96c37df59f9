use thiserror::Error;

/// Failures of the generic numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("step size underflow at r = {r:e} (h = {h:e}); stiff or singular right-hand side")]
    StepUnderflow { r: f64, h: f64 },
    #[error("integration aborted by guard at r = {r:e}")]
    GuardTripped { r: f64 },
    #[error("stop event required but not bracketed on [{a:e}, {b:e}]")]
    EventNotBracketed { a: f64, b: f64 },
    #[error("quadrature did not converge on [{a:e}, {b:e}] (estimated error {err:e})")]
    QuadNonConvergence { a: f64, b: f64, err: f64 },
    #[error("no sign change on bracket [{a:e}, {b:e}]: g(a) = {ga:e}, g(b) = {gb:e}")]
    NoSignChange { a: f64, b: f64, ga: f64, gb: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),
    #[error("matter does not vanish before r_max = {r_max:e}; profile is not compactly supported")]
    NoSupport { r_max: f64 },
    #[error("shooting bracket not found: {0}")]
    ShootingBracket(String),
    #[error("horizon guard tripped at r = {r:e} (1 - 2m/r = {margin:e})")]
    Horizon { r: f64, margin: f64 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable code used in scan tables.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Numerics(NumericsError::StepUnderflow { .. }) => "step_underflow",
            Error::Numerics(NumericsError::GuardTripped { .. }) => "guard",
            Error::Numerics(NumericsError::EventNotBracketed { .. }) => "event_not_bracketed",
            Error::Numerics(NumericsError::QuadNonConvergence { .. }) => "quad_nonconvergence",
            Error::Numerics(NumericsError::NoSignChange { .. }) => "no_sign_change",
            Error::Numerics(NumericsError::InvalidInput(_)) => "invalid_input",
            Error::InvalidAnsatz(_) => "invalid_ansatz",
            Error::NoSupport { .. } => "no_support",
            Error::ShootingBracket(_) => "shooting_bracket",
            Error::Horizon { .. } => "horizon",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
