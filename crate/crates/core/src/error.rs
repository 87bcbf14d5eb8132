use core::fmt;

/// Errors shared by the whole core crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DivisionByZero,
    /// A requested coefficient or a product term falls outside any window
    /// the inputs can support.
    PrecisionExceeded,
    FieldMismatch,
    EmptyPolynomial,
    ArityMismatch { expected: usize, got: usize },
    NotSeparable,
    HeightMismatch,
    PrincipalPartNotCertified,
    TargetValuationOutOfRange,
    NoLinearTerm,
    SearchSpaceTooLarge,
    NotPGroup,
    TrivialGroup,
    NotAGroup(&'static str),
    /// Malformed input to a constructor or parser.
    Invalid(&'static str),
    ParseError(alloc::string::String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::PrecisionExceeded => write!(f, "requested data falls outside the supportable precision window"),
            Error::FieldMismatch => write!(f, "operands belong to different fields"),
            Error::EmptyPolynomial => write!(f, "polynomial has no terms"),
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected}, got {got}")
            }
            Error::NotSeparable => write!(f, "p-polynomial has no nonzero monomial of degree 1"),
            Error::HeightMismatch => write!(f, "diagonal form heights are not all equal"),
            Error::PrincipalPartNotCertified => {
                write!(f, "principal part could not be certified anisotropic")
            }
            Error::TargetValuationOutOfRange => {
                write!(f, "target valuation outside the sound range for this operation")
            }
            Error::NoLinearTerm => write!(f, "no height-0 variable available"),
            Error::SearchSpaceTooLarge => write!(f, "search space exceeds the configured cap"),
            Error::NotPGroup => write!(f, "group order is not a prime power"),
            Error::TrivialGroup => write!(f, "group is trivial"),
            Error::NotAGroup(why) => write!(f, "multiplication table is not a group: {why}"),
            Error::Invalid(why) => write!(f, "invalid input: {why}"),
            Error::ParseError(why) => write!(f, "parse error: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
