use num_rational::BigRational;
use thiserror::Error;

/// Every failure the library can report.
///
/// Mathematical "conventions bug" variants (`InconsistentRatio`, `NoExpansion`,
/// `NotProportional`, ...) signal that a derived identity did not hold; they
/// are never expected on a correct build and are surfaced instead of being
/// papered over.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator has a factor with no rational root")]
    IrrationalPole,
    #[error("pole of modulus {radius} lies on the contour")]
    PoleOnContour { radius: BigRational },
    #[error("linear system has no solution")]
    NoSolution,
    #[error("linear system is underdetermined (free columns {free:?})")]
    Underdetermined { free: Vec<usize> },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shell enumeration needs {needed} explicit shells, guard is {guard}")]
    GuardExceeded { needed: i64, guard: i64 },
    #[error("shell terms from {shell} on are not a geometric progression")]
    IrregularTail { shell: i64 },
    #[error("Whittaker value at n = {n} is not a Laurent polynomial")]
    NotLaurent { n: i64 },
    #[error("Whittaker values vanish at every probe point")]
    ProbeVanishes,
    #[error("intertwined Whittaker ratio depends on the probe point (n = {n})")]
    InconsistentRatio { n: i64 },
    #[error("no two-term constant-term expansion verifies from any threshold <= 4")]
    NoExpansion,
    #[error("no polynomial solution of degree <= {0}")]
    NoSolutionUpToDegree(usize),
    #[error("recovered function is not a scalar multiple of the probe")]
    NotProportional,
    #[error("calibration probes disagree: {first} vs {second}")]
    InconsistentCalibration {
        first: Box<BigRational>,
        second: Box<BigRational>,
    },
    #[error("wave packet is not compactly supported (tail constant {tail})")]
    NotCompactlySupported { tail: BigRational },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("input parse error: {0}")]
    InputParse(String),
}

impl Error {
    /// Stable short name, used on the CLI's stderr and across the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::IrrationalPole => "IrrationalPole",
            Error::PoleOnContour { .. } => "PoleOnContour",
            Error::NoSolution => "NoSolution",
            Error::Underdetermined { .. } => "Underdetermined",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::GuardExceeded { .. } => "GuardExceeded",
            Error::IrregularTail { .. } => "IrregularTail",
            Error::NotLaurent { .. } => "NotLaurent",
            Error::ProbeVanishes => "ProbeVanishes",
            Error::InconsistentRatio { .. } => "InconsistentRatio",
            Error::NoExpansion => "NoExpansion",
            Error::NoSolutionUpToDegree(_) => "NoSolutionUpToDegree",
            Error::NotProportional => "NotProportional",
            Error::InconsistentCalibration { .. } => "InconsistentCalibration",
            Error::NotCompactlySupported { .. } => "NotCompactlySupported",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InputParse(_) => "InputParse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
