//! Variational estimators of `√P` with witness-producing minimization.
//!
//! Every estimator evaluates one of the equivalent variational expressions
//! for `√P(ν, ρ)` at a supplied witness, and therefore always returns a value
//! at or above the oracle: geometric and arithmetic means over invertible
//! positive elements, decompositions of unity into orthoprojections or
//! positive elements, and finite double systems. The infimum over all
//! witnesses is never claimed by search alone; the oracle provides the target
//! and witnesses certify attainment or approximation.

use serde::Serialize;

use crate::algebra::{ensure_same_algebra, spectral_resolution, Element};
use crate::error::{Error, Result};
use crate::fidelity::transition_probability;
use crate::forms::{dominates, radon_nikodym, PositiveForm};
use crate::tol;

/// A decomposition of the unity into mutually orthogonal projections.
#[derive(Clone, Debug)]
pub struct Decomposition {
    projections: Vec<Element>,
}

impl Decomposition {
    pub fn new(projections: Vec<Element>) -> Result<Self> {
        if projections.is_empty() {
            return Err(Error::InvalidDecomposition("no projections".into()));
        }
        let algebra = projections[0].algebra().clone();
        let mut sum = algebra.zero();
        for (i, p) in projections.iter().enumerate() {
            if p.algebra() != &algebra {
                return Err(Error::InvalidDecomposition("mixed algebras".into()));
            }
            if !p.is_projection() {
                return Err(Error::InvalidDecomposition(format!(
                    "entry {i} is not a projection"
                )));
            }
            for (j, q) in projections.iter().enumerate().skip(i + 1) {
                if (p * q).norm_op() > tol::ATOM_OVERLAP {
                    return Err(Error::InvalidDecomposition(format!(
                        "entries {i} and {j} are not orthogonal"
                    )));
                }
            }
            sum = &sum + p;
        }
        if !sum.approx_eq(&algebra.identity(), tol::PROJECTION_REL) {
            return Err(Error::InvalidDecomposition(
                "projections do not sum to the unity".into(),
            ));
        }
        Ok(Decomposition { projections })
    }

    pub fn projections(&self) -> &[Element] {
        &self.projections
    }

    pub fn len(&self) -> usize {
        self.projections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projections.is_empty()
    }

    /// The clustered spectral projections of a hermitian element.
    pub fn from_spectrum(x: &Element, cluster_tol: f64) -> Result<Self> {
        let res = spectral_resolution(x, cluster_tol)?;
        Decomposition::new(res.projections().to_vec())
    }
}

/// A finite double system `{(y_j, x_j)}` with `Σ y_j* x_j` equal to a
/// prescribed target.
#[derive(Clone, Debug)]
pub struct DoubleSystem {
    pairs: Vec<(Element, Element)>,
    target: Element,
}

impl DoubleSystem {
    pub fn new(pairs: Vec<(Element, Element)>, target: Element) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDecomposition(
                "double system needs at least one pair".into(),
            ));
        }
        let mut sum = target.algebra().zero();
        for (y, x) in &pairs {
            ensure_same_algebra(y, &target)?;
            ensure_same_algebra(x, &target)?;
            sum = &sum + &(&y.adjoint() * x);
        }
        let residual = (&sum - &target).norm_fro();
        if residual > tol::scaled(1e-10, target.norm_fro()) {
            return Err(Error::TargetMismatch { residual });
        }
        Ok(DoubleSystem { pairs, target })
    }

    pub fn pairs(&self) -> &[(Element, Element)] {
        &self.pairs
    }

    pub fn target(&self) -> &Element {
        &self.target
    }

    /// The minimal system `(√a, √a⁻¹)` of an invertible positive `a`.
    pub fn minimal_pair(a: &Element) -> Result<Self> {
        a.require_invertible_positive()?;
        let y = a.sqrt_psd()?;
        let x = a.inv_sqrt_positive()?;
        let target = a.algebra().identity();
        DoubleSystem::new(vec![(y, x)], target)
    }
}

/// `√(ν(x)·ρ(x⁻¹))` for invertible positive `x`; never below the oracle.
pub fn geometric_mean_value(nu: &PositiveForm, rho: &PositiveForm, x: &Element) -> Result<f64> {
    ensure_same_algebra(nu.density(), x)?;
    x.require_invertible_positive()?;
    let v = nu.eval_re(x)? * rho.eval_re(&x.inv_positive()?)?;
    Ok(v.max(0.0).sqrt())
}

/// `(ν(x) + ρ(x⁻¹))/2` for invertible positive `x`; never below the
/// geometric mean value at the same witness.
pub fn arithmetic_mean_value(nu: &PositiveForm, rho: &PositiveForm, x: &Element) -> Result<f64> {
    ensure_same_algebra(nu.density(), x)?;
    x.require_invertible_positive()?;
    Ok(0.5 * (nu.eval_re(x)? + rho.eval_re(&x.inv_positive()?)?))
}

/// Trace-pairing gradient of `F(x) = (ν(x) + ρ(x⁻¹))/2`:
/// `G = (D_ν − x⁻¹·D_ρ·x⁻¹)/2`, so that the directional derivative along a
/// hermitian `y` is `trace(G·y) = (ν(y) − ρ(x⁻¹yx⁻¹))/2`.
pub fn gradient(nu: &PositiveForm, rho: &PositiveForm, x: &Element) -> Result<Element> {
    ensure_same_algebra(nu.density(), x)?;
    x.require_invertible_positive()?;
    let xi = x.inv_positive()?;
    let pulled = &(&xi * rho.density()) * &xi;
    Ok((nu.density() - &pulled).scale(0.5).hermitize())
}

/// Step-size policy of the descent.
#[derive(Clone, Copy, Debug)]
pub enum StepRule {
    /// Additive step `x − η·G` with halving of `η` until the iterate stays
    /// positive definite and the value decreases.
    Backtracking { initial_step: f64 },
}

#[derive(Clone, Debug)]
pub struct DescentConfig {
    pub max_iters: usize,
    pub step_rule: StepRule,
    pub tol: f64,
}

impl Default for DescentConfig {
    fn default() -> Self {
        DescentConfig {
            max_iters: 2000,
            step_rule: StepRule::Backtracking { initial_step: 1.0 },
            tol: 1e-6,
        }
    }
}

/// Why a descent run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopReason {
    /// Gradient norm fell below the configured tolerance.
    Converged,
    /// Iterates left the well-conditioned cone; the infimum is not attained.
    InfimumNotAttained,
    MaxIterations,
    StepUnderflow,
}

/// Record of a descent run over the invertible positive cone.
#[derive(Clone, Debug)]
pub struct DescentTrace {
    /// `(value, gradient norm)` at the start and after every accepted step.
    pub iterates: Vec<(f64, f64)>,
    pub final_x: Element,
    pub converged: bool,
    pub stop: StopReason,
}

impl DescentTrace {
    pub fn final_value(&self) -> f64 {
        self.iterates.last().expect("nonempty trace").0
    }
}

/// Warm start of the descent: the regularized Radon-Nikodym candidate
/// `a + 1e-3·𝟏` when `ρ ≪ ν`, otherwise `√(‖ρ‖₁/‖ν‖₁)·𝟏` which balances the
/// two objective terms.
fn warm_start(nu: &PositiveForm, rho: &PositiveForm) -> Result<Element> {
    let algebra = nu.algebra().clone();
    if !nu.is_zero() && !rho.is_zero() {
        if dominates(nu, rho)?.is_some() {
            let a = radon_nikodym(nu, rho)?;
            return Ok(&a + &algebra.identity().scale(1e-3));
        }
        let balance = (rho.norm1() / nu.norm1()).sqrt();
        return Ok(algebra.identity().scale(balance.max(1e-6)));
    }
    Ok(algebra.identity())
}

/// Minimize the arithmetic mean `F(x) = (ν(x) + ρ(x⁻¹))/2` over the
/// invertible positive cone by gradient descent with backtracking.
///
/// The iterate values are non-increasing. When the infimum is not attained
/// (orthogonal or faithfulness-mismatched pairs) the iterates drift toward
/// the boundary; the run stops once their condition number exceeds
/// [`tol::CONDITION_LIMIT`] and reports `converged = false`.
pub fn minimize_arithmetic(
    nu: &PositiveForm,
    rho: &PositiveForm,
    config: &DescentConfig,
) -> Result<DescentTrace> {
    ensure_same_algebra(nu.density(), rho.density())?;
    if config.max_iters == 0 {
        return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
    }
    if !config.tol.is_finite() || config.tol <= 0.0 {
        return Err(Error::InvalidConfig("tol must be positive".into()));
    }
    let StepRule::Backtracking { initial_step } = config.step_rule;
    if !initial_step.is_finite() || initial_step <= 0.0 {
        return Err(Error::InvalidConfig("initial step must be positive".into()));
    }
    if nu.is_zero() && rho.is_zero() {
        return Err(Error::InvalidConfig("both forms are zero".into()));
    }

    let value_of = |x: &Element| -> Result<f64> {
        Ok(0.5 * (nu.eval_re(x)? + rho.eval_re(&x.inv_positive()?)?))
    };

    let mut x = warm_start(nu, rho)?;
    let mut fx = value_of(&x)?;
    let mut g = gradient(nu, rho, &x)?;
    let mut gn = g.norm_fro();
    let mut iterates = vec![(fx, gn)];
    let mut eta = initial_step;
    let mut stop = StopReason::MaxIterations;

    for _ in 0..config.max_iters {
        if gn <= config.tol {
            stop = StopReason::Converged;
            break;
        }
        if x.condition_number()? > tol::CONDITION_LIMIT {
            stop = StopReason::InfimumNotAttained;
            break;
        }
        let mut accepted = false;
        while eta >= 1e-18 {
            let candidate = (&x - &g.scale(eta)).hermitize();
            if candidate.is_invertible_positive() {
                let fc = value_of(&candidate)?;
                if fc < fx {
                    x = candidate;
                    fx = fc;
                    accepted = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        if !accepted {
            stop = StopReason::StepUnderflow;
            break;
        }
        g = gradient(nu, rho, &x)?;
        gn = g.norm_fro();
        iterates.push((fx, gn));
        eta = (eta * 2.0).min(initial_step);
    }
    if stop == StopReason::MaxIterations && gn <= config.tol {
        stop = StopReason::Converged;
    }

    Ok(DescentTrace {
        iterates,
        final_x: x,
        converged: stop == StopReason::Converged,
        stop,
    })
}

/// A near-minimizing invertible positive witness for the pair.
///
/// When one form dominates the other the regularized Radon-Nikodym candidate
/// `a + ε𝟏` (or its inverse, when the domination runs the other way) comes
/// within `ε·‖·‖₁/2` of the infimum even when the infimum is not attained;
/// otherwise the witness is the descent result at tolerance `1e-6`.
pub fn near_minimizer(nu: &PositiveForm, rho: &PositiveForm) -> Result<Element> {
    let identity = nu.algebra().identity();
    if let Some(rep) = crate::minimizers::min_set(nu, rho)?.representative {
        return Ok(rep);
    }
    if dominates(nu, rho)?.is_some() {
        let a = radon_nikodym(nu, rho)?;
        let eps = 1e-7 * (1.0 + a.norm_op());
        return Ok(&a + &identity.scale(eps));
    }
    if dominates(rho, nu)?.is_some() {
        let c = radon_nikodym(rho, nu)?;
        let eps = 1e-7 * (1.0 + c.norm_op());
        return (&c + &identity.scale(eps)).inv_positive();
    }
    let config = DescentConfig {
        tol: 1e-6,
        ..DescentConfig::default()
    };
    Ok(minimize_arithmetic(nu, rho, &config)?.final_x)
}

/// `Σ_j √(ν(e_j)·ρ(e_j))` over a decomposition of unity into
/// orthoprojections; never below the oracle.
pub fn projection_decomposition_value(
    nu: &PositiveForm,
    rho: &PositiveForm,
    d: &Decomposition,
) -> Result<f64> {
    let mut total = 0.0;
    for e in d.projections() {
        let a = nu.eval_re(e)?.max(0.0);
        let b = rho.eval_re(e)?.max(0.0);
        total += (a * b).sqrt();
    }
    Ok(total)
}

/// The same quadratic-mean sum over a decomposition of unity into positive
/// elements (orthogonality relaxed to positivity).
pub fn positive_decomposition_value(
    nu: &PositiveForm,
    rho: &PositiveForm,
    parts: &[Element],
) -> Result<f64> {
    if parts.is_empty() {
        return Err(Error::InvalidDecomposition("no parts".into()));
    }
    let algebra = nu.algebra();
    let mut sum = algebra.zero();
    for (i, x) in parts.iter().enumerate() {
        if !x.is_positive() {
            return Err(Error::InvalidDecomposition(format!(
                "part {i} is not positive"
            )));
        }
        sum = &sum + x;
    }
    if !sum.approx_eq(&algebra.identity(), tol::PROJECTION_REL) {
        return Err(Error::InvalidDecomposition(
            "parts do not sum to the unity".into(),
        ));
    }
    let mut total = 0.0;
    for x in parts {
        total += (nu.eval_re(x)?.max(0.0) * rho.eval_re(x)?.max(0.0)).sqrt();
    }
    Ok(total)
}

/// `(1/2)·Σ_j {ν(y_j*y_j) + ρ(x_j*x_j)}` for a double system with target 𝟏.
pub fn double_system_value(nu: &PositiveForm, rho: &PositiveForm, s: &DoubleSystem) -> Result<f64> {
    let one = nu.algebra().identity();
    let residual = (s.target() - &one).norm_fro();
    if residual > tol::scaled(1e-10, 1.0) {
        return Err(Error::TargetMismatch { residual });
    }
    let mut total = 0.0;
    for (y, x) in s.pairs() {
        total += nu.eval_re(&(&y.adjoint() * y))?;
        total += rho.eval_re(&(&x.adjoint() * x))?;
    }
    Ok(0.5 * total)
}

/// The double system `{(μ_j⁻¹ e_j, μ_j e_j)}` over a decomposition of unity,
/// with weights `μ_j = ((ν(e_j)+δ)/(ρ(e_j)+δ))^{1/4}`. Its value converges
/// to `Σ_j √(ν(e_j) ρ(e_j))` as `δ → 0`.
pub fn delta_scheme_system(
    nu: &PositiveForm,
    rho: &PositiveForm,
    d: &Decomposition,
    delta: f64,
) -> Result<DoubleSystem> {
    if !delta.is_finite() || delta <= 0.0 {
        return Err(Error::InvalidConfig("delta must be positive".into()));
    }
    let mut pairs = Vec::with_capacity(d.len());
    for e in d.projections() {
        let mu =
            ((nu.eval_re(e)?.max(0.0) + delta) / (rho.eval_re(e)?.max(0.0) + delta)).powf(0.25);
        pairs.push((e.scale(1.0 / mu), e.scale(mu)));
    }
    DoubleSystem::new(pairs, nu.algebra().identity())
}

/// Outcome of the finite-spectrum refinement scheme.
#[derive(Clone, Debug)]
pub struct EpsilonSchemeReport {
    /// Near-optimal witness after snapping its spectrum.
    pub snapped: Element,
    /// Spectral decomposition of the snapped witness.
    pub decomposition: Decomposition,
    /// `Σ_j √(ν(e_j) ρ(e_j))` over that decomposition.
    pub value: f64,
    /// `√(P + ε)`, the bound the scheme guarantees.
    pub bound: f64,
    pub ok: bool,
}

/// The refinement scheme behind the decomposition characterizations: find an
/// invertible positive `x` with `ν(x)·ρ(x⁻¹) ≤ P + ε`, snap it to a finite
/// (clustered) spectrum, and read off a projection decomposition whose value
/// is at most `√(P + ε)`.
pub fn epsilon_scheme(
    nu: &PositiveForm,
    rho: &PositiveForm,
    epsilon: f64,
) -> Result<EpsilonSchemeReport> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidConfig("epsilon must be positive".into()));
    }
    let p = transition_probability(nu, rho)?.p();
    let mut config = DescentConfig {
        tol: 1e-6,
        ..DescentConfig::default()
    };
    let mut x = minimize_arithmetic(nu, rho, &config)?.final_x;
    for _ in 0..6 {
        let gm = nu.eval_re(&x)? * rho.eval_re(&x.inv_positive()?)?;
        if gm <= p + 0.5 * epsilon {
            break;
        }
        config.tol *= 0.1;
        config.max_iters *= 2;
        x = minimize_arithmetic(nu, rho, &config)?.final_x;
    }

    // Snapping width small enough that the geometric-mean value moves by
    // far less than ε/2.
    let spread = 1.0 + x.norm_op() + x.inv_positive()?.norm_op();
    let snap_tol = (epsilon / (16.0 * spread * spread * (1.0 + nu.norm1() + rho.norm1())))
        .min(1e-4 * (1.0 + x.norm_op()));
    let res = spectral_resolution(&x, snap_tol)?;
    let snapped = res.reconstruct().hermitize();
    let decomposition = Decomposition::new(res.projections().to_vec())?;
    let value = projection_decomposition_value(nu, rho, &decomposition)?;
    let bound = (p + epsilon).sqrt();
    let gm_snapped = nu.eval_re(&snapped)? * rho.eval_re(&snapped.pseudo_inverse()?)?;
    let ok = value <= bound + 1e-12 && gm_snapped <= p + epsilon + 1e-12;
    Ok(EpsilonSchemeReport {
        snapped,
        decomposition,
        value,
        bound,
        ok,
    })
}

/// Empirical check of the equivalence between attaining the arithmetic-mean
/// infimum along a sequence and both split limits converging to `√P`.
#[derive(Clone, Debug, Serialize)]
pub struct SequenceReport {
    pub sqrt_p: f64,
    pub arithmetic_values: Vec<f64>,
    pub nu_values: Vec<f64>,
    pub rho_inv_values: Vec<f64>,
    /// Last arithmetic value within tolerance of `√P`.
    pub arithmetic_attains: bool,
    /// Both last split values within tolerance of `√P`.
    pub split_attains: bool,
    /// The two criteria agree, as the equivalence demands.
    pub consistent: bool,
}

/// Evaluate a sequence of invertible positive elements against the
/// two equivalent attainment criteria.
pub fn sequence_criterion(
    nu: &PositiveForm,
    rho: &PositiveForm,
    xs: &[Element],
    tolerance: f64,
) -> Result<SequenceReport> {
    if xs.is_empty() {
        return Err(Error::InvalidConfig("empty sequence".into()));
    }
    let sqrt_p = transition_probability(nu, rho)?.sqrt_p;
    let mut arithmetic_values = Vec::with_capacity(xs.len());
    let mut nu_values = Vec::with_capacity(xs.len());
    let mut rho_inv_values = Vec::with_capacity(xs.len());
    for x in xs {
        x.require_invertible_positive()?;
        let nv = nu.eval_re(x)?;
        let rv = rho.eval_re(&x.inv_positive()?)?;
        nu_values.push(nv);
        rho_inv_values.push(rv);
        arithmetic_values.push(0.5 * (nv + rv));
    }
    let close = |v: f64| (v - sqrt_p).abs() <= tolerance * (1.0 + sqrt_p);
    let arithmetic_attains = close(*arithmetic_values.last().unwrap());
    let split_attains = close(*nu_values.last().unwrap()) && close(*rho_inv_values.last().unwrap());
    Ok(SequenceReport {
        sqrt_p,
        arithmetic_values,
        nu_values,
        rho_inv_values,
        arithmetic_attains,
        split_attains,
        consistent: arithmetic_attains == split_attains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{default_cluster_tol, Algebra};
    use crate::sampling;

    fn qubit_pair() -> (PositiveForm, PositiveForm) {
        let alg = Algebra::full(2);
        let nu = PositiveForm::new(Element::diagonal(&alg, &[0.5, 0.5]).unwrap()).unwrap();
        let rho = PositiveForm::new(Element::diagonal(&alg, &[0.75, 0.25]).unwrap()).unwrap();
        (nu, rho)
    }

    const SQRT_P: f64 = 0.9659258262890683;

    #[test]
    fn mean_values_at_identity() {
        let (nu, rho) = qubit_pair();
        let one = nu.algebra().identity();
        let gm = geometric_mean_value(&nu, &rho, &one).unwrap();
        assert!((gm - 1.0).abs() < 1e-12); // √(‖ν‖‖ρ‖)
        let am = arithmetic_mean_value(&nu, &rho, &one).unwrap();
        assert!((am - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_values_at_radon_nikodym_witness() {
        let (nu, rho) = qubit_pair();
        let x = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let gm = geometric_mean_value(&nu, &rho, &x).unwrap();
        let am = arithmetic_mean_value(&nu, &rho, &x).unwrap();
        assert!((gm - SQRT_P).abs() < 1e-12);
        assert!((am - SQRT_P).abs() < 1e-12);
    }

    #[test]
    fn am_gm_identity_exact() {
        let mut rng = sampling::rng(11);
        let alg = Algebra::full(3);
        let nu = sampling::random_faithful_state(&mut rng, &alg);
        let rho = sampling::random_faithful_state(&mut rng, &alg);
        for _ in 0..20 {
            let x = sampling::random_invertible_positive(&mut rng, &alg);
            let am = arithmetic_mean_value(&nu, &rho, &x).unwrap();
            let gm = geometric_mean_value(&nu, &rho, &x).unwrap();
            let nv = nu.eval_re(&x).unwrap();
            let rv = rho.eval_re(&x.inv_positive().unwrap()).unwrap();
            let gap = 0.5 * (nv.sqrt() - rv.sqrt()).powi(2);
            assert!((am - gm - gap).abs() <= 1e-10 * (1.0 + am));
            assert!(am + 1e-12 >= gm);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = sampling::rng(5);
        let alg = Algebra::full(2);
        let nu = sampling::random_faithful_state(&mut rng, &alg);
        let rho = sampling::random_faithful_state(&mut rng, &alg);
        let x = sampling::random_invertible_positive(&mut rng, &alg);
        let g = gradient(&nu, &rho, &x).unwrap();
        let f = |e: &Element| -> f64 {
            0.5 * (nu.eval_re(e).unwrap() + rho.eval_re(&e.inv_positive().unwrap()).unwrap())
        };
        let t = 1e-5;
        for _ in 0..5 {
            let y = sampling::random_hermitian(&mut rng, &alg);
            let plus = f(&(&x + &y.scale(t)));
            let minus = f(&(&x - &y.scale(t)));
            let fd = (plus - minus) / (2.0 * t);
            let pred = (&g * &y).trace().re;
            assert!(
                (fd - pred).abs() <= 1e-5 * (1.0 + pred.abs()),
                "fd {fd} vs trace pairing {pred}"
            );
        }
    }

    #[test]
    fn gradient_special_values() {
        let (nu, rho) = qubit_pair();
        let one = nu.algebra().identity();
        // ν = ρ at x = 𝟏 has vanishing gradient
        let g = gradient(&nu, &nu, &one).unwrap();
        assert!(g.norm_fro() < 1e-14);
        // generic pair at x = 𝟏: G = (D_ν − D_ρ)/2
        let g = gradient(&nu, &rho, &one).unwrap();
        let expected = (nu.density() - rho.density()).scale(0.5);
        assert!(g.approx_eq(&expected, 1e-12));
        // at the minimizing witness the gradient vanishes
        let x = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let g = gradient(&nu, &rho, &x).unwrap();
        assert!(g.norm_fro() < 1e-12);
    }

    #[test]
    fn descent_on_derived_pair_converges() {
        let mut rng = sampling::rng(23);
        let alg = Algebra::full(3);
        let nu = sampling::random_faithful_state(&mut rng, &alg);
        let a = sampling::random_invertible_positive(&mut rng, &alg);
        let rho = nu.inner_derive(&a).unwrap();
        let trace = minimize_arithmetic(&nu, &rho, &DescentConfig::default()).unwrap();
        assert!(trace.converged);
        let sqrt_p = transition_probability(&nu, &rho).unwrap().sqrt_p;
        assert!((trace.final_value() - sqrt_p).abs() <= 10.0 * 1e-8 * (1.0 + sqrt_p));
        assert!(trace.final_x.approx_eq(&a, 1e-3));
        // monotone values
        for w in trace.iterates.windows(2) {
            assert!(w[1].0 <= w[0].0 + 1e-12);
        }
    }

    #[test]
    fn descent_on_identical_forms_is_immediate() {
        let (nu, _) = qubit_pair();
        let trace = minimize_arithmetic(&nu, &nu, &DescentConfig::default()).unwrap();
        assert!(trace.converged);
        assert!((trace.final_value() - nu.norm1()).abs() < 1e-6);
    }

    #[test]
    fn descent_on_orthogonal_pair_reports_divergence() {
        let alg = Algebra::full(2);
        let nu = PositiveForm::new(Element::diagonal(&alg, &[1.0, 0.0]).unwrap()).unwrap();
        let rho = PositiveForm::new(Element::diagonal(&alg, &[0.0, 1.0]).unwrap()).unwrap();
        let config = DescentConfig {
            max_iters: 20000,
            ..DescentConfig::default()
        };
        let trace = minimize_arithmetic(&nu, &rho, &config).unwrap();
        assert!(!trace.converged);
        assert_eq!(trace.stop, StopReason::InfimumNotAttained);
        // the infimum is zero and not attained: the value strictly drops
        // until the iterates hit the condition limit
        assert!(trace.final_value() < 0.5 * trace.iterates[0].0);
        assert!(trace.final_x.condition_number().unwrap() > 1e10);
        for w in trace.iterates.windows(2) {
            assert!(w[1].0 <= w[0].0 + 1e-12);
        }
    }

    #[test]
    fn decomposition_values() {
        let (nu, rho) = qubit_pair();
        let one = nu.algebra().identity();
        let whole = Decomposition::new(vec![one]).unwrap();
        let v = projection_decomposition_value(&nu, &rho, &whole).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let x = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let d = Decomposition::from_spectrum(&x, default_cluster_tol(&x)).unwrap();
        let v = projection_decomposition_value(&nu, &rho, &d).unwrap();
        assert!((v - SQRT_P).abs() < 1e-12);
    }

    #[test]
    fn convex_splitting_cannot_lower_the_positive_value() {
        let (nu, rho) = qubit_pair();
        let x = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let d = Decomposition::from_spectrum(&x, default_cluster_tol(&x)).unwrap();
        let proj_value = projection_decomposition_value(&nu, &rho, &d).unwrap();
        let mut parts = Vec::new();
        for e in d.projections() {
            parts.push(e.scale(0.3));
            parts.push(e.scale(0.7));
        }
        let pos_value = positive_decomposition_value(&nu, &rho, &parts).unwrap();
        assert!((pos_value - proj_value).abs() <= 1e-10);
    }

    #[test]
    fn double_system_values() {
        let (nu, rho) = qubit_pair();
        let one = nu.algebra().identity();
        let single = DoubleSystem::new(vec![(one.clone(), one.clone())], one.clone()).unwrap();
        let v = double_system_value(&nu, &rho, &single).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let a = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let minimal = DoubleSystem::minimal_pair(&a).unwrap();
        let v = double_system_value(&nu, &rho, &minimal).unwrap();
        assert!((v - SQRT_P).abs() < 1e-12);

        let d = Decomposition::from_spectrum(&a, default_cluster_tol(&a)).unwrap();
        let system = delta_scheme_system(&nu, &rho, &d, 1e-6).unwrap();
        let v = double_system_value(&nu, &rho, &system).unwrap();
        assert!(v >= SQRT_P - 1e-9);
        assert!(v <= SQRT_P + 1e-4);
    }

    #[test]
    fn epsilon_scheme_reaches_the_bound() {
        let (nu, rho) = qubit_pair();
        let report = epsilon_scheme(&nu, &rho, 1e-3).unwrap();
        assert!(report.ok);
        assert!(report.value <= report.bound + 1e-12);
        let sqrt_p = transition_probability(&nu, &rho).unwrap().sqrt_p;
        assert!(report.value >= sqrt_p - 1e-9);
    }

    #[test]
    fn sequence_criterion_cases() {
        let (nu, rho) = qubit_pair();
        let x = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        let constant = vec![x.clone(), x.clone(), x];
        let report = sequence_criterion(&nu, &rho, &constant, 1e-8).unwrap();
        assert!(report.arithmetic_attains && report.split_attains && report.consistent);

        // regularized family for a singular derived pair
        let alg = nu.algebra().clone();
        let a = Element::diagonal(&alg, &[1.0, 0.0]).unwrap();
        let rho2 = nu.inner_derive(&a).unwrap();
        let xs: Vec<Element> = [1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-5]
            .iter()
            .map(|&eps| &a + &alg.identity().scale(eps))
            .collect();
        let report = sequence_criterion(&nu, &rho2, &xs, 1e-4).unwrap();
        assert!(report.arithmetic_attains && report.split_attains && report.consistent);

        // diverging scalar sequence fails both criteria consistently
        let xs: Vec<Element> = (1..6).map(|n| alg.identity().scale(n as f64)).collect();
        let report = sequence_criterion(&nu, &rho, &xs, 1e-8).unwrap();
        assert!(!report.arithmetic_attains && !report.split_attains && report.consistent);
    }
}
