//! Ground-truth transition probability and Bures distance.
//!
//! The closed-form value `√P(ν, ρ) = ‖√D_ρ √D_ν‖₁` is treated as a derived
//! oracle: nothing is taken on faith, because [`gamma_sup`] recomputes the
//! same supremum through an explicit GNS purification on the doubled block
//! space with the commutant unit ball parametrized by contractions, and the
//! two routes are forced to agree.
//!
//! Purification convention: the representation space of a block of dimension
//! `n` is `ℂ^n ⊗ ℂ^n` with column-stacking `vec`, the representative vector
//! of a form is `vec(√D)`, `π(x) = I ⊗ x`, and the commutant acts by
//! `k ↦ kᵀ ⊗ I`, i.e. right multiplication. The supremum of `|trace(W k)|`
//! over contractions `k` is the sum of the singular values of `W`.

use nalgebra::{DMatrix, DVector, SVD};

use crate::algebra::{ensure_same_algebra, Element, C64};
use crate::error::{Error, Result};
use crate::forms::{trace_distance, PositiveForm};
use crate::tol;

/// Transition probability and Bures distance of a pair of forms.
#[derive(Clone, Debug)]
pub struct FidelityResult {
    /// `√P(ν, ρ)`, clamped into `[0, √(‖ν‖₁‖ρ‖₁)]`.
    pub sqrt_p: f64,
    /// `d_B(ν, ρ)` with `d_B² = (‖ν‖₁ − √P) + (‖ρ‖₁ − √P)`.
    pub bures_distance: f64,
    /// `(‖ν‖₁, ‖ρ‖₁)`.
    pub norms: (f64, f64),
}

impl FidelityResult {
    pub fn p(&self) -> f64 {
        self.sqrt_p * self.sqrt_p
    }

    pub fn bures_distance_sq(&self) -> f64 {
        self.bures_distance * self.bures_distance
    }
}

/// `√P` through the singular values of `√D_ρ √D_ν`, blockwise.
pub fn sqrt_p_svd_route(nu: &PositiveForm, rho: &PositiveForm) -> Result<f64> {
    let a = rho.density().sqrt_psd()?;
    let b = nu.density().sqrt_psd()?;
    Ok((&a * &b).trace_norm())
}

/// `√P` through the eigenvalues of the positive operator
/// `√D_ν D_ρ √D_ν`; an algebraically equal but numerically distinct route.
/// Eigenvalues below the rank tolerance are exact zeros of the product and
/// are dropped; their square roots would otherwise inject noise of order
/// `√ε` on rank-deficient pairs.
pub fn sqrt_p_eigen_route(nu: &PositiveForm, rho: &PositiveForm) -> Result<f64> {
    let s = nu.density().sqrt_psd()?;
    let inner = (&(&s * rho.density()) * &s).hermitize();
    let cut = tol::scaled(tol::RANK_REL, inner.norm_op());
    Ok(inner
        .hermitian_eigenvalues()?
        .iter()
        .filter(|&&l| l > cut)
        .map(|&l| l.sqrt())
        .sum())
}

/// `√P` through the GNS purification and the commutant supremum at `z = 𝟏`.
pub fn sqrt_p_gns_route(nu: &PositiveForm, rho: &PositiveForm) -> Result<f64> {
    gamma_sup_gns(nu, rho, &nu.algebra().identity())
}

/// Transition probability `P(ν, ρ)` and Bures distance.
///
/// Degenerate (zero-norm) forms short-circuit to `P = 0`. The returned value
/// uses the singular-value route; its forced agreement with the GNS route is
/// what [`crate::suites`] and the acceptance checks verify.
pub fn transition_probability(nu: &PositiveForm, rho: &PositiveForm) -> Result<FidelityResult> {
    ensure_same_algebra(nu.density(), rho.density())?;
    let norms = (nu.norm1(), rho.norm1());
    let sqrt_p = if nu.is_zero() || rho.is_zero() {
        0.0
    } else {
        sqrt_p_svd_route(nu, rho)?.clamp(0.0, (norms.0 * norms.1).sqrt())
    };
    let d_sq = (norms.0 - sqrt_p) + (norms.1 - sqrt_p);
    Ok(FidelityResult {
        sqrt_p,
        bures_distance: d_sq.max(0.0).sqrt(),
        norms,
    })
}

fn vec_of(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

/// The GNS/commutant realization of `sup_{f ∈ Γ(ν,ρ)} |f(z)|`.
///
/// Builds the doubled space per block, probes the commutant pairing on the
/// matrix-unit basis to recover the overlap operator, and sums its singular
/// values. Deliberately does not reuse the closed-form route.
pub fn gamma_sup_gns(nu: &PositiveForm, rho: &PositiveForm, z: &Element) -> Result<f64> {
    ensure_same_algebra(nu.density(), z)?;
    let sqrt_nu = nu.density().sqrt_psd()?;
    let sqrt_rho = rho.density().sqrt_psd()?;
    let mut total = 0.0;
    for (b, &n) in z.algebra().block_dims().iter().enumerate() {
        let eye = DMatrix::<C64>::identity(n, n);
        let pi_z = eye.kronecker(z.block(b));
        let phi = vec_of(sqrt_nu.block(b));
        let psi = vec_of(sqrt_rho.block(b));
        // overlap operator W with f_k(z) = trace(W k): W[j, i] = f_{E_ij}(z)
        let mut overlap = DMatrix::<C64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut unit = DMatrix::<C64>::zeros(n, n);
                unit[(i, j)] = C64::new(1.0, 0.0);
                let kappa = unit.transpose().kronecker(&eye);
                let shifted = &pi_z * (&kappa * &psi);
                // ⟨χ, η⟩ is linear in the first argument: ⟨χ, η⟩ = η^H χ
                overlap[(j, i)] = (phi.adjoint() * shifted)[(0, 0)];
            }
        }
        total += SVD::new(overlap, false, false)
            .singular_values
            .iter()
            .sum::<f64>();
    }
    Ok(total)
}

/// Closed-form route for the same supremum: `‖√D_ρ z* √D_ν‖₁`.
pub fn gamma_sup_trace_route(nu: &PositiveForm, rho: &PositiveForm, z: &Element) -> Result<f64> {
    ensure_same_algebra(nu.density(), z)?;
    let sqrt_nu = nu.density().sqrt_psd()?;
    let sqrt_rho = rho.density().sqrt_psd()?;
    Ok((&(&sqrt_rho * &z.adjoint()) * &sqrt_nu).trace_norm())
}

/// `sup_{f ∈ Γ(ν,ρ)} |f(z)|`, computed along both routes; the routes must
/// agree to [`tol::MATCH_REL`] relative or the call fails.
pub fn gamma_sup(nu: &PositiveForm, rho: &PositiveForm, z: &Element) -> Result<f64> {
    let direct = gamma_sup_trace_route(nu, rho, z)?;
    let gns = gamma_sup_gns(nu, rho, z)?;
    let scale = 1.0 + direct.abs().max(gns.abs());
    if (direct - gns).abs() > tol::MATCH_REL * scale {
        return Err(Error::RoutesDisagree {
            context: "gamma supremum",
            lhs: direct,
            rhs: gns,
        });
    }
    Ok(direct)
}

/// Value of the coupling-set member induced by the contraction `k` at `z`:
/// `f_k(z) = Σ_b trace(√D_ν z √D_ρ k)` on the block `b`.
pub fn gamma_member_value(
    nu: &PositiveForm,
    rho: &PositiveForm,
    k: &Element,
    z: &Element,
) -> Result<C64> {
    ensure_same_algebra(nu.density(), z)?;
    ensure_same_algebra(nu.density(), k)?;
    if k.norm_op() > 1.0 + tol::PROJECTION_REL {
        return Err(Error::PreconditionViolated(
            "contraction has operator norm above one".into(),
        ));
    }
    let sqrt_nu = nu.density().sqrt_psd()?;
    let sqrt_rho = rho.density().sqrt_psd()?;
    Ok((&(&(&sqrt_nu * z) * &sqrt_rho) * k).trace())
}

/// The contraction attaining the supremum at `z`, from the polar parts of
/// the blockwise overlap operators.
pub fn gamma_supremizer(nu: &PositiveForm, rho: &PositiveForm, z: &Element) -> Result<Element> {
    ensure_same_algebra(nu.density(), z)?;
    let sqrt_nu = nu.density().sqrt_psd()?;
    let sqrt_rho = rho.density().sqrt_psd()?;
    let blocks = z
        .algebra()
        .block_dims()
        .iter()
        .enumerate()
        .map(|(b, &_n)| {
            let w = sqrt_nu.block(b) * z.block(b) * sqrt_rho.block(b);
            let svd = SVD::new(w, true, true);
            let u = svd.u.expect("svd with u");
            let vt = svd.v_t.expect("svd with v_t");
            // trace(W k) is maximal at k = V U^H
            vt.adjoint() * u.adjoint()
        })
        .collect();
    Element::from_blocks(z.algebra().clone(), blocks)
}

/// Outcome of checking the inner-derivation fidelity formula
/// `√P(μ^a, μ^b) = μ(a*b)` for positive `a*b`.
#[derive(Clone, Debug)]
pub struct UhlmannVerdict {
    pub sqrt_p: f64,
    pub pairing: f64,
    pub residual: f64,
    pub pass: bool,
}

/// Check `√P(μ^a, μ^b) = μ(a*b)`, which requires `a*b ≥ 0`.
/// Pass threshold is `1e-8` per unit of the pairing value.
pub fn check_uhlmann_formula(
    mu: &PositiveForm,
    a: &Element,
    b: &Element,
) -> Result<UhlmannVerdict> {
    ensure_same_algebra(mu.density(), a)?;
    ensure_same_algebra(mu.density(), b)?;
    let ab = &a.adjoint() * b;
    let herm_res = ab.hermiticity_residual();
    let min_eig = ab.hermitize().min_eigenvalue()?;
    let scale = tol::scaled(1e-7, ab.norm_op());
    if herm_res > scale || min_eig < -scale {
        return Err(Error::PositivityViolated("a*b", herm_res.max(-min_eig)));
    }
    let derived_a = mu.inner_derive(a)?;
    let derived_b = mu.inner_derive(b)?;
    let sqrt_p = transition_probability(&derived_a, &derived_b)?.sqrt_p;
    let pairing = mu.evaluate(&ab)?.re;
    let residual = (sqrt_p - pairing).abs();
    let pass = residual <= 1e-8 * (1.0 + pairing.abs());
    Ok(UhlmannVerdict {
        sqrt_p,
        pairing,
        residual,
        pass,
    })
}

/// Slack values of the two-sided fidelity estimate and the metric
/// comparison bounds. All slacks are non-negative when the bounds hold.
#[derive(Clone, Debug)]
pub struct BoundsVerdict {
    /// `P − |f(𝟏)|²`.
    pub fidelity_lower: f64,
    /// `ν(a)·ρ(a⁻¹) − P`.
    pub fidelity_upper: f64,
    /// `d_B − c(ν,ρ)⁻¹·d₁`.
    pub metric_lower: f64,
    /// `√d₁ − d_B`.
    pub metric_upper: f64,
}

impl BoundsVerdict {
    pub fn min_slack(&self) -> f64 {
        self.fidelity_lower
            .min(self.fidelity_upper)
            .min(self.metric_lower)
            .min(self.metric_upper)
    }

    pub fn pass(&self, tolerance: f64) -> bool {
        self.min_slack() >= -tolerance
    }
}

/// Evaluate the sandwich `|f(𝟏)|² ≤ P ≤ ν(a)·ρ(a⁻¹)` for a coupling-set
/// member value `f_value = |f(𝟏)|` and an invertible positive `a`, together
/// with `c(ν,ρ)⁻¹·d₁ ≤ d_B ≤ √d₁`.
pub fn check_bounds(
    nu: &PositiveForm,
    rho: &PositiveForm,
    f_value: f64,
    a: &Element,
) -> Result<BoundsVerdict> {
    ensure_same_algebra(nu.density(), a)?;
    a.require_invertible_positive()?;
    let fid = transition_probability(nu, rho)?;
    let p = fid.p();
    let upper = nu.eval_re(a)? * rho.eval_re(&a.inv_positive()?)?;
    let d1 = trace_distance(nu, rho)?;
    let c = nu.norm1().sqrt() + rho.norm1().sqrt();
    let metric_lower = if c > 0.0 {
        fid.bures_distance - d1 / c
    } else {
        0.0
    };
    Ok(BoundsVerdict {
        fidelity_lower: p - f_value * f_value,
        fidelity_upper: upper - p,
        metric_lower,
        metric_upper: d1.sqrt() - fid.bures_distance,
    })
}
