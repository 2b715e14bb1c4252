use thiserror::Error;

/// Errors raised by the homodyne numerics.
#[derive(Debug, Error)]
pub enum HdError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("truncation budget exhausted: need dimension {needed}, cap is {cap}")]
    BudgetExhausted { needed: usize, cap: usize },

    #[error("moment of order {order} is tail-dominated (deficit {deficit:e}, max |x| {max_abs_x})")]
    TailDominated {
        order: u32,
        deficit: f64,
        max_abs_x: f64,
    },

    #[error("quadrature grid [{lo}, {hi}] does not cover the required range [{need_lo}, {need_hi}]")]
    GridTooNarrow {
        lo: f64,
        hi: f64,
        need_lo: f64,
        need_hi: f64,
    },

    #[error("truncation dimension {dim} too small for moment order {order} (state support {support})")]
    TruncationTooSmall { dim: usize, order: u32, support: usize },

    #[error("state description: {0}")]
    StateFormat(String),

    #[error("no calibration states")]
    NoCalibrationStates,

    #[error("{context}: {source}")]
    At {
        context: String,
        #[source]
        source: Box<HdError>,
    },
}

impl HdError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        HdError::InvalidArgument(msg.into())
    }

    /// Attach the failing coordinates to an error.
    pub fn at(self, context: impl Into<String>) -> Self {
        HdError::At {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// Innermost error, with any context stripped.
    pub fn root(&self) -> &HdError {
        match self {
            HdError::At { source, .. } => source.root(),
            other => other,
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(
            self.root(),
            HdError::BudgetExhausted { .. }
                | HdError::TailDominated { .. }
                | HdError::TruncationTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, HdError>;
