//! The set of minimizing elements of the arithmetic-mean characterization:
//! membership, existence, structure and uniqueness, plus the inverse
//! perturbation identities behind them.
//!
//! An invertible positive `x` is minimizing for `{ν, ρ}` when
//! `(ν(x) + ρ(x⁻¹))/2 = √P(ν, ρ)`; equivalently `ν(y) = ρ(x⁻¹yx⁻¹)` for all
//! hermitian `y`, which in density terms reads `D_ν = x⁻¹·D_ρ·x⁻¹`.

use serde::Serialize;

use crate::algebra::{ensure_same_algebra, Element};
use crate::error::Result;
use crate::forms::{are_orthogonal, PositiveForm};

/// Why the minimizing set is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmptyReason {
    /// Nontrivial mutually orthogonal forms; the infimum is zero and not
    /// attained.
    OrthogonalForms,
    /// Exactly one of the forms is faithful.
    FaithfulnessMismatch,
    /// Supports differ, so neither form is inner derived from the other by
    /// an invertible element.
    SupportMismatch,
}

impl std::fmt::Display for EmptyReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EmptyReason::OrthogonalForms => write!(f, "orthogonal forms"),
            EmptyReason::FaithfulnessMismatch => write!(f, "faithfulness mismatch"),
            EmptyReason::SupportMismatch => write!(f, "support mismatch"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MinSetStatus {
    Empty(EmptyReason),
    NonEmpty,
}

/// Description of the minimizing set of a pair of forms.
#[derive(Clone, Debug)]
pub struct MinSetDescription {
    pub status: MinSetStatus,
    /// A minimizing element when the set is nonempty: the Radon-Nikodym
    /// operator extended by the unit coefficient on `s(ν)⊥`.
    pub representative: Option<Element>,
    /// The set is a singleton exactly when `ν` is faithful.
    pub unique: bool,
    /// Real dimension of the hermitian directions `k` with `k·s(ν) = 0`;
    /// quantifies the non-uniqueness of minimizing elements.
    pub kernel_dimension: usize,
}

fn kernel_dimension(nu: &PositiveForm) -> usize {
    let s = nu.support();
    nu.algebra()
        .block_dims()
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            let rank: usize = s.block(b).trace().re.round() as usize;
            (n - rank) * (n - rank)
        })
        .sum()
}

/// Membership test: `‖D_ν − x⁻¹·D_ρ·x⁻¹‖ ≤ tol·(1 + ‖D_ν‖)`.
/// A passing `x` has arithmetic mean value equal to `√P`.
pub fn is_minimizing_element(
    nu: &PositiveForm,
    rho: &PositiveForm,
    x: &Element,
    tolerance: f64,
) -> Result<bool> {
    ensure_same_algebra(nu.density(), x)?;
    x.require_invertible_positive()?;
    let xi = x.inv_positive()?;
    let pulled = &(&xi * rho.density()) * &xi;
    let residual = (nu.density() - &pulled).norm_fro();
    Ok(residual <= tolerance * (1.0 + nu.density().norm_fro()))
}

/// Attempt to solve `a·D_ν·a = D_ρ` for an invertible positive `a`.
///
/// In the block decomposition along `s(ν)`, the congruence forces the
/// support corner `a₁₁` to be the Radon-Nikodym formula operator
/// `pinv(√D_ν)·(√D_ν D_ρ √D_ν)^{1/2}·pinv(√D_ν)`, the coupling to be
/// `a₁₂ = D_ν⁺·a₁₁⁺·(s·D_ρ·s⊥)`, and the far corner is free above the Schur
/// floor; the unit coefficient is used there. A solution exists exactly when
/// `rank(D_ν) = rank(D_ρ) = rank(√D_ν·D_ρ·√D_ν)`; when the supports agree
/// this collapses to the Radon-Nikodym operator extended by `𝟏` on `s(ν)⊥`.
fn invertible_congruence(nu: &PositiveForm, rho: &PositiveForm) -> Result<Option<Element>> {
    let d_nu = nu.density();
    let d_rho = rho.density();
    let sqrt_nu = d_nu.sqrt_psd()?;
    let mixed = (&(&sqrt_nu * d_rho) * &sqrt_nu).hermitize();
    let r_nu = d_nu.numerical_rank()?;
    let r_rho = d_rho.numerical_rank()?;
    let r_mixed = mixed.numerical_rank()?;
    if r_nu != r_rho || r_nu != r_mixed {
        return Ok(None);
    }
    let s = nu.support();
    let s_perp = &nu.algebra().identity() - &s;
    let pinv_sqrt = sqrt_nu.pseudo_inverse()?;
    let a11 = (&(&pinv_sqrt * &mixed.sqrt_psd()?) * &pinv_sqrt).hermitize();
    let b12 = &(&s * d_rho) * &s_perp;
    let a12 = &(&d_nu.pseudo_inverse()? * &a11.pseudo_inverse()?) * &b12;
    let a22 = &(&a12.adjoint() * &a11.pseudo_inverse()?) * &a12;
    let candidate = (&(&(&a11 + &a12) + &a12.adjoint()) + &(&a22 + &s_perp)).hermitize();
    let derived = &(&candidate * d_nu) * &candidate;
    let ok = candidate.is_invertible_positive()
        && (&derived - d_rho).norm_fro() <= 1e-7 * (1.0 + d_rho.norm_fro());
    Ok(if ok { Some(candidate) } else { None })
}

/// Decide the trichotomy for the minimizing set.
///
/// The set is nonempty exactly when `ρ = ν^a` for some invertible positive
/// `a`; existence is decided without search by the rank criterion of
/// [`invertible_congruence`] and certified by the reconstruction residual.
pub fn min_set(nu: &PositiveForm, rho: &PositiveForm) -> Result<MinSetDescription> {
    ensure_same_algebra(nu.density(), rho.density())?;
    if let Some(representative) = invertible_congruence(nu, rho)? {
        return Ok(MinSetDescription {
            status: MinSetStatus::NonEmpty,
            representative: Some(representative),
            unique: nu.is_faithful(),
            kernel_dimension: kernel_dimension(nu),
        });
    }
    let reason = if are_orthogonal(nu, rho)? && !(nu.is_zero() && rho.is_zero()) {
        EmptyReason::OrthogonalForms
    } else if nu.is_faithful() != rho.is_faithful() {
        EmptyReason::FaithfulnessMismatch
    } else {
        EmptyReason::SupportMismatch
    };
    Ok(MinSetDescription {
        status: MinSetStatus::Empty(reason),
        representative: None,
        unique: false,
        kernel_dimension: kernel_dimension(nu),
    })
}

/// Residuals of the inverse perturbation identities for invertible positive
/// `z = x + δ`.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbationResiduals {
    /// `‖z⁻¹ − (x⁻¹ − x⁻¹δx⁻¹ + Δ(z,x))‖ / (1 + ‖z⁻¹‖)`.
    pub inverse_identity: f64,
    /// Disagreement between the two closed forms of the factor `m(z,x)`.
    pub factor_forms: f64,
    /// Residual of the value identity for the arithmetic means of `ν`, `ρ`.
    pub value_identity: f64,
}

impl PerturbationResiduals {
    pub fn max(&self) -> f64 {
        self.inverse_identity
            .max(self.factor_forms)
            .max(self.value_identity)
    }
}

/// Evaluate the identity `z⁻¹ = x⁻¹ − x⁻¹δx⁻¹ + Δ(z,x)` with
/// `Δ(z,x) = m(z,x)*·m(z,x)`,
/// `m(z,x) = (x^{-1/2}δx^{-1/2})·(x^{-1/2}zx^{-1/2})^{-1/2}·x^{-1/2}`,
/// the alternative factor form
/// `m(z,x) = (x^{-1/2}zx^{-1/2})^{-1/2}·x^{-1/2}·δ·x⁻¹`, and the induced
/// value identity for the arithmetic means of the supplied forms.
pub fn inverse_perturbation_identity(
    nu: &PositiveForm,
    rho: &PositiveForm,
    z: &Element,
    x: &Element,
) -> Result<PerturbationResiduals> {
    ensure_same_algebra(z, x)?;
    ensure_same_algebra(nu.density(), z)?;
    z.require_invertible_positive()?;
    x.require_invertible_positive()?;

    let delta = z - x;
    let xi = x.inv_positive()?;
    let zi = z.inv_positive()?;
    let xs = x.inv_sqrt_positive()?;
    let core = (&(&xs * z) * &xs).hermitize();
    let core_inv_sqrt = core.inv_sqrt_positive()?;

    let m = &(&(&(&xs * &delta) * &xs) * &core_inv_sqrt) * &xs;
    let m_alt = &(&(&core_inv_sqrt * &xs) * &delta) * &xi;
    let factor_forms = (&m - &m_alt).norm_fro() / (1.0 + m.norm_fro());

    let big_delta = &m.adjoint() * &m;
    let reconstructed = &(&xi - &(&(&xi * &delta) * &xi)) + &big_delta;
    let inverse_identity = (&zi - &reconstructed).norm_fro() / (1.0 + zi.norm_fro());

    // (F(z) − F(x)) = (ν(δ) − ρ(x⁻¹δx⁻¹))/2 + ρ(Δ(z,x))/2
    let f_z = 0.5 * (nu.eval_re(z)? + rho.eval_re(&zi)?);
    let f_x = 0.5 * (nu.eval_re(x)? + rho.eval_re(&xi)?);
    let linear = 0.5 * (nu.eval_re(&delta)? - rho.eval_re(&(&(&xi * &delta) * &xi))?);
    let quadratic = 0.5 * rho.eval_re(&big_delta)?;
    let value_identity = ((f_z - f_x) - linear - quadratic).abs() / (1.0 + f_z.abs());

    Ok(PerturbationResiduals {
        inverse_identity,
        factor_forms,
        value_identity,
    })
}
