use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The error vector is (numerically) zero, so no nullspace direction exists.
    ZeroErrorVector,
    /// Vector length below the minimum of 2.
    DimensionTooSmall { len: usize },
    DimensionMismatch { expected: usize, found: usize },
    LengthMismatch { expected: usize, found: usize },
    /// No acceptable `w1` direction was found within the retry budget.
    RejectionExhausted { attempts: usize },
    /// The operation needs a different inner-norm variant.
    VariantMismatch,
    EmptyInput,
    /// An analytic Jacobian was requested from a model that has none.
    NoEvaluator,
    NonFiniteValue,
    NonFiniteObjective,
    /// Residual column lies in the column space of the model Jacobian.
    RankConditionViolated { column: usize },
    /// The decoy reproduces the model exactly in this column.
    ZeroResidual { column: usize },
    CertificateTampered { max_deviation: f64 },
    NonPositiveSupport,
    InvalidArguments(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroErrorVector => f.write_str("ZeroErrorVector: error vector is numerically zero"),
            Error::DimensionTooSmall { len } => {
                write!(f, "DimensionTooSmall: need at least 2 entries, got {len}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "DimensionMismatch: expected {expected}, found {found}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "LengthMismatch: expected {expected} items, found {found}")
            }
            Error::RejectionExhausted { attempts } => {
                write!(f, "RejectionExhausted: no valid w1 after {attempts} attempts")
            }
            Error::VariantMismatch => f.write_str("VariantMismatch: requires the one-norm variant"),
            Error::EmptyInput => f.write_str("EmptyInput: no data"),
            Error::NoEvaluator => f.write_str("NoEvaluator: model has no analytic Jacobian"),
            Error::NonFiniteValue => f.write_str("NonFiniteValue: model returned NaN or infinity"),
            Error::NonFiniteObjective => {
                f.write_str("NonFiniteObjective: objective is not finite at the start point")
            }
            Error::RankConditionViolated { column } => write!(
                f,
                "RankConditionViolated: residual column {column} lies in the Jacobian column space"
            ),
            Error::ZeroResidual { column } => {
                write!(f, "ZeroResidual: decoy fits the model exactly in column {column}")
            }
            Error::CertificateTampered { max_deviation } => write!(
                f,
                "CertificateTampered: stored residual deviates by {max_deviation:e}"
            ),
            Error::NonPositiveSupport => {
                f.write_str("NonPositiveSupport: distribution support must be positive")
            }
            Error::InvalidArguments(msg) => write!(f, "InvalidArguments: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
