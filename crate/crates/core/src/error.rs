use thiserror::Error;

/// Errors raised by the analytic engine and the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("{function}({value}) is undefined: {reason}")]
    Domain {
        function: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "{expression} needs {needed} series terms (cap {cap}); reduce L_S, m or the antenna counts"
    )]
    TermCapExceeded {
        expression: &'static str,
        needed: u128,
        cap: usize,
    },

    #[error("adaptive integration stopped after {intervals} subintervals with estimated error {error:e}")]
    NoConvergence { intervals: usize, error: f64 },

    #[error("{expression} evaluated to {raw:e}, outside [0, 1] by more than rounding allows")]
    OutOfRange { expression: &'static str, raw: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
