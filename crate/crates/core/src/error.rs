use thiserror::Error;

/// Errors produced by model construction and the metrology routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A structural constraint of the two-mode model does not hold.
    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("singular mode geometry: denominator of xi is {denominator:e}")]
    SingularModeGeometry { denominator: f64 },

    #[error("quadrature did not converge: {integral} changed by {change:e} when doubling nodes")]
    Quadrature { integral: &'static str, change: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// `true` for errors that signal a violated physical or structural
    /// invariant rather than a numerical breakdown.
    pub fn is_constraint(&self) -> bool {
        matches!(
            self,
            Error::Constraint(_) | Error::SingularModeGeometry { .. } | Error::InvalidInput(_)
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_) | Error::Quadrature { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
