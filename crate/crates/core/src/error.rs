use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("block shapes do not match the algebra ({0})")]
    ShapeMismatch(String),

    #[error("elements live on different algebras")]
    AlgebraMismatch,

    #[error("element is not hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("element is not positive (minimal eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error(
        "element is not an invertible positive element (minimal eigenvalue {min_eigenvalue:.3e})"
    )]
    NotInvertiblePositive { min_eigenvalue: f64 },

    #[error("element is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("form is not dominated (no Radon-Nikodym operator)")]
    NotDominated,

    #[error("restricted domination fails on the subalgebra (atom {atom})")]
    NotDominatedOnR { atom: usize },

    #[error("{0} is positive only up to residual {1:.3e}")]
    PositivityViolated(&'static str, f64),

    #[error("invalid decomposition of unity: {0}")]
    InvalidDecomposition(String),

    #[error("double system target mismatch (residual {residual:.3e})")]
    TargetMismatch { residual: f64 },

    #[error("split does not reproduce the factorized element (residual {residual:.3e})")]
    SplitMismatch { residual: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("element has full support; the case analysis needs a deficient support")]
    FullSupport,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("independent computation routes disagree in {context}: {lhs:.12e} vs {rhs:.12e}")]
    RoutesDisagree {
        context: &'static str,
        lhs: f64,
        rhs: f64,
    },

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
