//! Positive linear forms represented by density elements.
//!
//! A form `ν ∈ M₊*` is stored through its density `D_ν` via
//! `ν(x) = Σ_b trace(D_b x_b)`. Densities are unique, which is why they are
//! the canonical representation; GNS purification is constructed on demand in
//! the fidelity module. Forms need not be normalized; the state space is a
//! predicate, not a type.

use crate::algebra::{ensure_same_algebra, Algebra, Element, C64};
use crate::error::{Error, Result};
use crate::tol;

/// A positive linear form, stored as its positive density element.
#[derive(Clone, Debug)]
pub struct PositiveForm {
    density: Element,
}

impl PositiveForm {
    /// Build a form from its density; the density must be positive within
    /// tolerance.
    pub fn new(density: Element) -> Result<Self> {
        density.require_positive()?;
        Ok(PositiveForm { density })
    }

    /// The zero form.
    pub fn zero(algebra: &Algebra) -> Self {
        PositiveForm {
            density: algebra.zero(),
        }
    }

    /// The vector form generated by `psi`, as the rank-one density `ψψ*`.
    /// The algebra must be a single full block matching the vector length.
    pub fn vector_form(algebra: &Algebra, psi: &[C64]) -> Result<Self> {
        if algebra.num_blocks() != 1 || algebra.block_dims()[0] != psi.len() {
            return Err(Error::ShapeMismatch(format!(
                "vector of length {} on algebra of blocks {:?}",
                psi.len(),
                algebra.block_dims()
            )));
        }
        let v = nalgebra::DVector::from_column_slice(psi);
        let dens = &v * v.adjoint();
        PositiveForm::new(Element::from_blocks(algebra.clone(), vec![dens])?)
    }

    pub fn density(&self) -> &Element {
        &self.density
    }

    pub fn algebra(&self) -> &Algebra {
        self.density.algebra()
    }

    /// Functional norm `‖ν‖₁ = ν(𝟏)`, the defining property of positivity.
    pub fn norm1(&self) -> f64 {
        self.density.trace().re
    }

    pub fn is_zero(&self) -> bool {
        self.norm1() <= tol::ZERO_FORM
    }

    /// Evaluate `ν(x) = Σ_b trace(D_b x_b)`.
    pub fn evaluate(&self, x: &Element) -> Result<C64> {
        ensure_same_algebra(&self.density, x)?;
        Ok((&self.density * x).trace())
    }

    /// Real part of `ν(x)`; the right reading for hermitian arguments.
    pub fn eval_re(&self, x: &Element) -> Result<f64> {
        Ok(self.evaluate(x)?.re)
    }

    /// The inner derived form `ν^a` with density `a·D_ν·a*`, satisfying
    /// `ν^a(y) = ν(a* y a)` for all `y`.
    pub fn inner_derive(&self, a: &Element) -> Result<PositiveForm> {
        ensure_same_algebra(&self.density, a)?;
        let d = &(a * &self.density) * &a.adjoint();
        Ok(PositiveForm {
            density: d.hermitize(),
        })
    }

    /// Support projection `s(ν)` of the form.
    pub fn support(&self) -> Element {
        self.density
            .support()
            .expect("density is positive by construction")
    }

    /// A form is faithful when its kernel ideal is trivial, equivalently
    /// when `s(ν) = 𝟏`.
    pub fn is_faithful(&self) -> bool {
        self.density.numerical_rank().expect("density is positive") == self.algebra().dim()
    }

    /// Membership of `x` in the kernel left ideal `I_ν = {x : ν(x*x) = 0}`.
    pub fn kernel_ideal_member(&self, x: &Element) -> Result<bool> {
        ensure_same_algebra(&self.density, x)?;
        let value = self.eval_re(&(&x.adjoint() * x))?;
        let bound = tol::KERNEL_REL * self.norm1() * x.norm_op() * x.norm_op();
        Ok(value <= bound)
    }
}

/// Trace-norm distance `d₁(ν, ρ) = ‖ν − ρ‖₁` of two forms.
pub fn trace_distance(nu: &PositiveForm, rho: &PositiveForm) -> Result<f64> {
    ensure_same_algebra(&nu.density, &rho.density)?;
    Ok((&nu.density - &rho.density).trace_norm())
}

/// Orthogonality `ν ⊥ ρ`, meaning `‖ν − ρ‖₁ = ‖ν‖₁ + ‖ρ‖₁`; cross-checked
/// against disjointness of the supports.
pub fn are_orthogonal(nu: &PositiveForm, rho: &PositiveForm) -> Result<bool> {
    let d1 = trace_distance(nu, rho)?;
    let total = nu.norm1() + rho.norm1();
    let by_norm = (d1 - total).abs() <= tol::scaled(tol::ORTHOGONALITY_REL, total);
    let by_support = (&nu.support() * &rho.support()).norm_op() <= tol::ATOM_OVERLAP;
    Ok(by_norm && by_support)
}

/// The smallest `λ ≥ 0` with `ρ ≤ λν`, when `ρ` is dominated by `ν`
/// (equivalently, in finite dimensions, when `s(ρ) ≤ s(ν)`).
pub fn dominates(nu: &PositiveForm, rho: &PositiveForm) -> Result<Option<f64>> {
    ensure_same_algebra(&nu.density, &rho.density)?;
    if rho.is_zero() {
        return Ok(Some(0.0));
    }
    let s_nu = nu.support();
    let compressed = &(&s_nu * rho.density()) * &s_nu;
    if !compressed.approx_eq(rho.density(), tol::RANK_REL) {
        return Ok(None);
    }
    let pinv_sqrt = nu.density().sqrt_psd()?.pseudo_inverse()?;
    let ratio = (&(&pinv_sqrt * rho.density()) * &pinv_sqrt).hermitize();
    let lambda = ratio
        .hermitian_eigenvalues()?
        .last()
        .copied()
        .unwrap_or(0.0)
        .max(0.0);
    Ok(Some(lambda))
}

/// Radon-Nikodym operator `a = √(dρ/dν)`: the unique positive element with
/// `ρ = ν^a` and `s(a) ≤ s(ν)`, computed as
/// `pinv(√D_ν)·(√D_ν·D_ρ·√D_ν)^{1/2}·pinv(√D_ν)`.
pub fn radon_nikodym(nu: &PositiveForm, rho: &PositiveForm) -> Result<Element> {
    if dominates(nu, rho)?.is_none() {
        return Err(Error::NotDominated);
    }
    let sqrt_nu = nu.density().sqrt_psd()?;
    let pinv = sqrt_nu.pseudo_inverse()?;
    let inner = (&(&sqrt_nu * rho.density()) * &sqrt_nu).hermitize();
    let root = inner.sqrt_psd()?;
    let a = (&(&pinv * &root) * &pinv).hermitize();
    debug_assert!(
        nu.inner_derive(&a)
            .map(|d| d.density().approx_eq(rho.density(), 1e-8))
            .unwrap_or(false),
        "Radon-Nikodym reconstruction residual too large"
    );
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;

    fn diag_form(entries: &[f64]) -> PositiveForm {
        let alg = Algebra::full(entries.len());
        let d = Element::diagonal(&alg, entries).unwrap();
        PositiveForm::new(d).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let nu = diag_form(&[0.5, 0.5]);
        let one = nu.algebra().identity();
        assert!((nu.eval_re(&one).unwrap() - 1.0).abs() < 1e-14);

        let nu10 = diag_form(&[1.0, 0.0]);
        let x = Element::diagonal(nu10.algebra(), &[0.0, 1.0]).unwrap();
        assert!(nu10.eval_re(&x).unwrap().abs() < 1e-14);

        let x = Element::diagonal(nu.algebra(), &[2.0, 1.0]).unwrap();
        assert!((nu.eval_re(&x).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn inner_derive_examples() {
        let nu = diag_form(&[0.5, 0.5]);
        let one = nu.algebra().identity();
        assert!(nu
            .inner_derive(&one)
            .unwrap()
            .density()
            .approx_eq(nu.density(), 1e-14));

        let zero = nu.algebra().zero();
        assert!(nu.inner_derive(&zero).unwrap().is_zero());

        let a = Element::diagonal(nu.algebra(), &[2.0, 1.0]).unwrap();
        let derived = nu.inner_derive(&a).unwrap();
        let expected = Element::diagonal(nu.algebra(), &[2.0, 0.5]).unwrap();
        assert!(derived.density().approx_eq(&expected, 1e-14));
    }

    #[test]
    fn kernel_ideal_examples() {
        let faithful = diag_form(&[0.5, 0.5]);
        let x = Element::diagonal(faithful.algebra(), &[1.0, 0.0]).unwrap();
        assert!(!faithful.kernel_ideal_member(&x).unwrap());
        assert!(faithful
            .kernel_ideal_member(&faithful.algebra().zero())
            .unwrap());

        let nu = diag_form(&[1.0, 0.0]);
        let x = Element::diagonal(nu.algebra(), &[0.0, 1.0]).unwrap();
        assert!(nu.kernel_ideal_member(&x).unwrap());
    }

    #[test]
    fn kernel_ideal_is_left_ideal() {
        let nu = diag_form(&[1.0, 0.0]);
        let x = Element::diagonal(nu.algebra(), &[0.0, 1.0]).unwrap();
        let m = Element::from_real_blocks(
            nu.algebra().clone(),
            vec![vec![vec![0.3, 1.7], vec![-0.4, 0.9]]],
        )
        .unwrap();
        assert!(nu.kernel_ideal_member(&(&m * &x)).unwrap());
    }

    #[test]
    fn orthogonality_examples() {
        let nu = diag_form(&[1.0, 0.0]);
        let rho = diag_form(&[0.0, 1.0]);
        assert!(are_orthogonal(&nu, &rho).unwrap());

        let nu = diag_form(&[0.5, 0.5]);
        assert!(!are_orthogonal(&nu, &nu).unwrap());
        let rho = diag_form(&[0.75, 0.25]);
        assert!(!are_orthogonal(&nu, &rho).unwrap());
        assert!((trace_distance(&nu, &rho).unwrap() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn domination_examples() {
        let nu = diag_form(&[0.5, 0.5]);
        assert!((dominates(&nu, &nu).unwrap().unwrap() - 1.0).abs() < 1e-12);

        let nu10 = diag_form(&[1.0, 0.0]);
        let rho01 = diag_form(&[0.0, 1.0]);
        assert!(dominates(&nu10, &rho01).unwrap().is_none());

        let rho = diag_form(&[0.75, 0.25]);
        assert!((dominates(&nu, &rho).unwrap().unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn radon_nikodym_examples() {
        let nu = diag_form(&[0.5, 0.5]);
        let rho = diag_form(&[0.75, 0.25]);
        let a = radon_nikodym(&nu, &rho).unwrap();
        let expected = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        assert!(a.approx_eq(&expected, 1e-12));
        assert!(nu
            .inner_derive(&a)
            .unwrap()
            .density()
            .approx_eq(rho.density(), 1e-12));

        // ρ = ν gives the support projection
        let a = radon_nikodym(&nu, &nu).unwrap();
        assert!(a.approx_eq(&nu.support(), 1e-12));

        // ρ = 0 gives the zero operator
        let zero = PositiveForm::zero(nu.algebra());
        let a = radon_nikodym(&nu, &zero).unwrap();
        assert!(a.is_zero(1e-12));

        let nu10 = diag_form(&[1.0, 0.0]);
        let rho01 = diag_form(&[0.0, 1.0]);
        assert!(matches!(
            radon_nikodym(&nu10, &rho01),
            Err(Error::NotDominated)
        ));
    }

    #[test]
    fn faithfulness_means_full_support() {
        let nu = diag_form(&[0.5, 0.5]);
        assert!(nu.is_faithful());
        assert!(nu.support().approx_eq(&nu.algebra().identity(), 1e-12));

        let partial = diag_form(&[1.0, 0.0]);
        assert!(!partial.is_faithful());
        // kernel ideal nontrivial on a spanning set
        let nontrivial = partial
            .algebra()
            .matrix_units()
            .iter()
            .any(|u| partial.kernel_ideal_member(u).unwrap());
        assert!(nontrivial);
    }
}
