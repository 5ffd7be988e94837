//! Default tolerances.
//!
//! All thresholds are relative: a tolerance `t` applied to a quantity with
//! natural scale `s` means `t * (1 + s)`. The rank tolerance is the single
//! knob that determines support ranks and therefore every faithfulness and
//! domination verdict downstream; scenario files may override it.

/// Eigenvalues above `RANK_REL * (1 + ‖x‖)` count as nonzero.
pub const RANK_REL: f64 = 1e-10;

/// Invertibility floor for inversion arithmetic. Deliberately far below the
/// rank tolerance: minimizing sequences may approach the boundary of the
/// positive cone up to the condition limit before being stopped.
pub const INVERTIBLE_REL: f64 = 1e-14;

/// Eigenvalue gaps at most `CLUSTER_REL * (1 + ‖x‖)` are merged into one
/// spectral point.
pub const CLUSTER_REL: f64 = 1e-8;

/// Hermiticity residual allowed before an element is rejected.
pub const HERMITIAN_REL: f64 = 1e-9;

/// Slack allowed below zero for eigenvalues of positive elements.
pub const POSITIVE_REL: f64 = 1e-9;

/// Idempotency residual allowed for projections.
pub const PROJECTION_REL: f64 = 1e-8;

/// Agreement required between independent computation routes of one value.
pub const MATCH_REL: f64 = 1e-9;

/// Tolerance of the trace-norm orthogonality test.
pub const ORTHOGONALITY_REL: f64 = 1e-10;

/// Threshold of the kernel-ideal membership test.
pub const KERNEL_REL: f64 = 1e-10;

/// Default residual bound for the minimizing-element criterion.
pub const MINIMIZING_ELEMENT_REL: f64 = 1e-9;

/// Default gap bound for the minimizing-subalgebra verdict.
pub const MINIMIZING_ALGEBRA_REL: f64 = 1e-7;

/// Default tolerance of projectivity checks.
pub const PROJECTIVE_REL: f64 = 1e-9;

/// Norms below this count as the zero form.
pub const ZERO_FORM: f64 = 1e-14;

/// Iterates with a larger condition number stop the descent.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Overlap threshold in the atom intersection graph.
pub const ATOM_OVERLAP: f64 = 1e-8;

/// Scale-adjusted tolerance `rel * (1 + scale)`.
#[inline]
pub fn scaled(rel: f64, scale: f64) -> f64 {
    rel * (1.0 + scale)
}
