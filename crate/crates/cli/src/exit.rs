use std::fmt;

use subflow_core::Error;

pub const VALIDATION: u8 = 2;
pub const DOMAIN_OVERFLOW: u8 = 3;
pub const FIT_FAILURE: u8 = 4;

/// An error carrying the process exit code chosen at the failure site.
#[derive(Debug)]
pub struct Coded {
    pub code: u8,
    pub source: anyhow::Error,
}

impl fmt::Display for Coded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#}", self.source)
    }
}

impl std::error::Error for Coded {}

pub fn with_code(code: u8, e: impl Into<anyhow::Error>) -> anyhow::Error {
    Coded {
        code,
        source: e.into(),
    }
    .into()
}

pub fn validation(message: impl fmt::Display) -> anyhow::Error {
    with_code(VALIDATION, anyhow::anyhow!("{message}"))
}

/// Explicit codes win; otherwise library errors are classified by kind.
pub fn code(e: &anyhow::Error) -> u8 {
    if let Some(c) = e.downcast_ref::<Coded>() {
        return c.code;
    }
    match e.chain().find_map(|c| c.downcast_ref::<Error>()) {
        Some(Error::DomainOverflow { .. }) => DOMAIN_OVERFLOW,
        Some(
            Error::InvalidParameter { .. }
            | Error::Validation(_)
            | Error::Parse { .. }
            | Error::Io(_)
            | Error::DimensionMismatch(_),
        ) => VALIDATION,
        _ => 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classification() {
        assert_eq!(
            code(&Error::DomainOverflow { t: 1.0 }.into()),
            DOMAIN_OVERFLOW
        );
        assert_eq!(code(&Error::Io("gone".into()).into()), VALIDATION);
        assert_eq!(
            code(&with_code(FIT_FAILURE, Error::Io("x".into()))),
            FIT_FAILURE
        );
        assert_eq!(code(&Error::SingularPivot { row: 0 }.into()), 1);
    }
}
