use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// The variants fall into three families that the command-line front end
/// maps onto distinct exit codes: malformed or out-of-domain input,
/// enumeration caps, and internal consistency failures (two independent
/// computations of the same quantity disagreeing).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undefined input: {0}")]
    UndefinedInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid subfield: {sub_card} is not a subfield cardinality of F_{base}^{degree}")]
    InvalidSubfield { sub_card: u128, base: u128, degree: u32 },

    #[error("enumeration cap exceeded: modulus {modulus} > cap {cap}")]
    CapExceeded { modulus: u128, cap: u128 },

    #[error("incompatible endoclass: {0}")]
    IncompatibleEndoclass(String),

    #[error("not a cuspidal parameter: {0}")]
    NotACuspidalParameter(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("inconsistent query: {0}")]
    InconsistentQuery(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    /// Process exit code used by the CLI: 2 for bad input, 3 for cap, 4 for
    /// internal failures.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UndefinedInput(_) => "undefined_input",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InvalidSubfield { .. } => "invalid_subfield",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::IncompatibleEndoclass(_) => "incompatible_endoclass",
            Error::NotACuspidalParameter(_) => "not_a_cuspidal_parameter",
            Error::NotApplicable(_) => "not_applicable",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::InconsistentQuery(_) => "inconsistent_query",
            Error::Overflow(_) => "overflow",
            Error::Consistency(_) => "consistency_failure",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::Consistency(_) | Error::Overflow(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn consistency(msg: impl Into<String>) -> Error {
    Error::Consistency(msg.into())
}
