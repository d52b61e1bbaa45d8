use thiserror::Error;

/// Every failure the library can report.
///
/// Validation failures that are part of a normal run (a Newton–Kantorovich
/// condition that does not hold) are also expressed with these variants and
/// carried inside a failed certificate verdict.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by an interval containing zero")]
    DivisionByZeroInterval,
    #[error("non-finite interval endpoint in {0}")]
    NonFinite(&'static str),
    #[error("domain error: {0}")]
    DomainError(&'static str),
    #[error("invalid interval: lo {lo} > hi {hi}")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("grid size {0} is not a power of two")]
    SizeNotPowerOfTwo(usize),
    #[error("conjugate symmetry violated at k = {k}")]
    SymmetryViolation { k: i64 },
    #[error("exponential overflow: {0}")]
    Overflow(String),
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("insufficient coefficient decay: {usable} usable modes")]
    InsufficientDecay { usable: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular grid point j = {0} (pivot interval contains zero)")]
    SingularGridPoint(usize),
    #[error("gamma bound {0} is not below 1")]
    GammaNotContracting(f64),
    #[error("bad strip: need 0 <= rho < rho_hat, got rho = {rho}, rho_hat = {rho_hat}")]
    BadStrip { rho: f64, rho_hat: f64 },
    #[error("grid size {0} is odd")]
    OddSize(usize),
    #[error("dimension {0} exceeds the supported maximum of 8")]
    TooManyDimensions(usize),
    #[error("non-positive error constant enclosure [{lo}, {hi}]")]
    NonPositive { lo: f64, hi: f64 },
    #[error("image enclosure leaves the map domain")]
    DomainEscape,
    #[error("Lambda is not hyperbolic: lambda_s = {lambda_s}, lambda_u = {lambda_u}")]
    NotContracting { lambda_s: f64, lambda_u: f64 },
    #[error("spectral gap closed: lambda + eps1 + eps2 = {0} >= 1")]
    GapClosed(f64),
    #[error("no valid Newton-Kantorovich radius: {0}")]
    NoValidRadius(String),
    #[error("Newton iteration did not converge at eps_map = {eps_map}: residual {residual:e}")]
    NoConvergence { eps_map: f64, residual: f64 },
    #[error("small divisor {divisor:e} at mode k = {k}")]
    SmallDivisor { k: i64, divisor: f64 },
    #[error("continuation failed at eps_map = {attempted} (last success {reached}): {source}")]
    ContinuationFailed {
        reached: f64,
        attempted: f64,
        source: Box<Error>,
    },
    #[error("residual {0:e} too large to export")]
    ResidualTooLarge(f64),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("unknown map model {0:?}")]
    UnknownModel(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag used in certificate verdicts (`failed:<tag>`).
    pub fn tag(&self) -> &'static str {
        match self {
            Error::DivisionByZeroInterval => "DivisionByZeroInterval",
            Error::NonFinite(_) => "NonFinite",
            Error::DomainError(_) => "DomainError",
            Error::InvalidInterval { .. } => "InvalidInterval",
            Error::SizeNotPowerOfTwo(_) => "SizeNotPowerOfTwo",
            Error::SymmetryViolation { .. } => "SymmetryViolation",
            Error::Overflow(_) => "Overflow",
            Error::BadSize(_) => "BadSize",
            Error::InsufficientDecay { .. } => "InsufficientDecay",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularGridPoint(_) => "SingularGridPoint",
            Error::GammaNotContracting(_) => "GammaNotContracting",
            Error::BadStrip { .. } => "BadStrip",
            Error::OddSize(_) => "OddSize",
            Error::TooManyDimensions(_) => "TooManyDimensions",
            Error::NonPositive { .. } => "NonPositive",
            Error::DomainEscape => "DomainEscape",
            Error::NotContracting { .. } => "NotContracting",
            Error::GapClosed(_) => "GapClosed",
            Error::NoValidRadius(_) => "NoValidRadius",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::SmallDivisor { .. } => "SmallDivisor",
            Error::ContinuationFailed { .. } => "ContinuationFailed",
            Error::ResidualTooLarge(_) => "ResidualTooLarge",
            Error::Parse { .. } => "ParseError",
            Error::SizeMismatch(_) => "SizeMismatch",
            Error::UnknownModel(_) => "UnknownModel",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
