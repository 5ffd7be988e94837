//! Abelian subalgebra analytics.
//!
//! A unital abelian subalgebra is represented losslessly by its partition of
//! the identity into atoms (mutually orthogonal projections). Partitions make
//! the restricted transition probability a weighted quadratic-mean sum and
//! make intersections computable via connected components of the atom overlap
//! graph.
//!
//! The least-minimizing-subalgebra decision is three-valued: the proven
//! sufficient and necessary conditions decide `Exists`/`NotExists`, and
//! anything outside them reports `Undecided` rather than guessing.

use serde::Serialize;

use crate::algebra::{
    default_cluster_tol, ensure_same_algebra, point_spectrum, spectral_resolution, Algebra,
    Element, C64,
};
use crate::error::{Error, Result};
use crate::fidelity::transition_probability;
use crate::forms::{dominates, radon_nikodym, PositiveForm};
use crate::par::{map_trials, Parallelism};
use crate::tol;

/// A unital commutative subalgebra, stored as its atom partition.
#[derive(Clone, Debug)]
pub struct AbelianSubalgebra {
    algebra: Algebra,
    atoms: Vec<Element>,
}

impl AbelianSubalgebra {
    pub fn new(atoms: Vec<Element>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidPartition("no atoms".into()));
        }
        let algebra = atoms[0].algebra().clone();
        let mut sum = algebra.zero();
        for (i, p) in atoms.iter().enumerate() {
            if p.algebra() != &algebra {
                return Err(Error::InvalidPartition("mixed algebras".into()));
            }
            if !p.is_projection() {
                return Err(Error::InvalidPartition(format!(
                    "atom {i} is not a projection"
                )));
            }
            if p.norm_fro() <= tol::ATOM_OVERLAP {
                return Err(Error::InvalidPartition(format!("atom {i} vanishes")));
            }
            for (j, q) in atoms.iter().enumerate().skip(i + 1) {
                if (p * q).norm_op() > tol::ATOM_OVERLAP {
                    return Err(Error::InvalidPartition(format!(
                        "atoms {i} and {j} are not orthogonal"
                    )));
                }
            }
            sum = &sum + p;
        }
        if !sum.approx_eq(&algebra.identity(), tol::PROJECTION_REL) {
            return Err(Error::InvalidPartition(
                "atoms do not sum to the unity".into(),
            ));
        }
        Ok(AbelianSubalgebra { algebra, atoms })
    }

    /// The trivial algebra `ℂ·𝟏`.
    pub fn trivial(algebra: &Algebra) -> Self {
        AbelianSubalgebra {
            algebra: algebra.clone(),
            atoms: vec![algebra.identity()],
        }
    }

    /// The subalgebra generated by the unity and a hermitian element: atoms
    /// are the clustered spectral projections.
    pub fn generated_by(x: &Element) -> Result<Self> {
        let res = spectral_resolution(x, default_cluster_tol(x))?;
        AbelianSubalgebra::new(res.projections().to_vec())
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.atoms.len() == 1
    }

    /// Residual of projecting `x` onto the span of the atoms.
    pub fn span_residual(&self, x: &Element) -> f64 {
        let mut proj = self.algebra.zero();
        for p in &self.atoms {
            let rank = p.trace().re;
            let coeff = (p * x).trace() / C64::new(rank, 0.0);
            proj = &proj + &p.scale_c(coeff);
        }
        (x - &proj).norm_fro()
    }

    pub fn span_contains(&self, x: &Element, rel: f64) -> bool {
        self.span_residual(x) <= tol::scaled(rel, x.norm_fro())
    }

    /// Set inclusion of the spanned algebras: every atom of `self` must be a
    /// sum of atoms of `other`.
    pub fn contained_in(&self, other: &AbelianSubalgebra, rel: f64) -> bool {
        self.atoms.iter().all(|p| other.span_contains(p, rel))
    }

    pub fn equiv(&self, other: &AbelianSubalgebra, rel: f64) -> bool {
        self.len() == other.len() && self.contained_in(other, rel) && other.contained_in(self, rel)
    }
}

/// Intersection of two partition algebras: connected components of the
/// bipartite overlap graph between the two atom sets. Within one component
/// the atom sums of both sides agree and form the atoms of the intersection.
pub fn intersect(r1: &AbelianSubalgebra, r2: &AbelianSubalgebra) -> Result<AbelianSubalgebra> {
    if r1.algebra() != r2.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let n1 = r1.len();
    let n2 = r2.len();
    let total = n1 + n2;
    let mut parent: Vec<usize> = (0..total).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, p) in r1.atoms().iter().enumerate() {
        for (j, q) in r2.atoms().iter().enumerate() {
            if (p * q).norm_op() > tol::ATOM_OVERLAP {
                let a = find(&mut parent, i);
                let b = find(&mut parent, n1 + j);
                parent[a] = b;
            }
        }
    }
    let mut roots: Vec<usize> = Vec::new();
    let mut atoms: Vec<Element> = Vec::new();
    for (i, p) in r1.atoms().iter().enumerate() {
        let root = find(&mut parent, i);
        match roots.iter().position(|&r| r == root) {
            Some(k) => atoms[k] = &atoms[k] + p,
            None => {
                roots.push(root);
                atoms.push(p.clone());
            }
        }
    }
    // consistency: the same sums must arise from the second atom set
    for (j, q) in r2.atoms().iter().enumerate() {
        let root = find(&mut parent, n1 + j);
        if !roots.contains(&root) {
            return Err(Error::InvalidPartition(format!(
                "atom {j} of the second algebra overlaps nothing"
            )));
        }
        let _ = q;
    }
    AbelianSubalgebra::new(atoms)
}

/// Restricted transition probability
/// `P_R(ν|_R, ρ|_R) = (Σ_i √(ν(p_i)·ρ(p_i)))²` over the atoms of `R`.
/// Always at least `P_M(ν, ρ)`.
pub fn restricted_transition_probability(
    nu: &PositiveForm,
    rho: &PositiveForm,
    r: &AbelianSubalgebra,
) -> Result<f64> {
    if nu.algebra() != r.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    ensure_same_algebra(nu.density(), rho.density())?;
    let mut sum = 0.0;
    for p in r.atoms() {
        sum += (nu.eval_re(p)?.max(0.0) * rho.eval_re(p)?.max(0.0)).sqrt();
    }
    Ok(sum * sum)
}

/// `R` is minimizing when the restricted value attains the global one:
/// `|P_R − P_M| ≤ tol·(1 + P_M)`.
pub fn is_minimizing_subalgebra(
    nu: &PositiveForm,
    rho: &PositiveForm,
    r: &AbelianSubalgebra,
    tolerance: f64,
) -> Result<bool> {
    let p_r = restricted_transition_probability(nu, rho, r)?;
    let p_m = transition_probability(nu, rho)?.p();
    Ok((p_r - p_m).abs() <= tolerance * (1.0 + p_m))
}

/// Projectivity of `R` for the ordered pair `{ν, ρ}`:
/// `ν(s(ρ)·y·s(ρ)) = ν(y·s(ρ))` for every `y ∈ R`; checking the atoms
/// suffices by linearity.
pub fn is_projective(
    nu: &PositiveForm,
    rho: &PositiveForm,
    r: &AbelianSubalgebra,
    tolerance: f64,
) -> Result<bool> {
    if nu.algebra() != r.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let s_rho = rho.support();
    for p in r.atoms() {
        let compressed = nu.eval_re(&(&(&s_rho * p) * &s_rho))?;
        let one_sided = nu.evaluate(&(p * &s_rho))?.re;
        if (compressed - one_sided).abs() > tolerance * (1.0 + nu.norm1()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `R`-relative Radon-Nikodym operator
/// `z = Σ_i √(ρ(p_i)/ν(p_i))·p_i` over atoms with `ν(p_i) > 0`, satisfying
/// `ρ|_R = (ν|_R)^z`. Requires restricted domination: `ρ(p_i) = 0` whenever
/// `ν(p_i) = 0`.
pub fn relative_radon_nikodym(
    nu: &PositiveForm,
    rho: &PositiveForm,
    r: &AbelianSubalgebra,
) -> Result<Element> {
    if nu.algebra() != r.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let nu_cut = tol::scaled(tol::RANK_REL, nu.norm1());
    let rho_cut = tol::scaled(tol::RANK_REL, rho.norm1());
    let mut z = r.algebra().zero();
    for (i, p) in r.atoms().iter().enumerate() {
        let vn = nu.eval_re(p)?.max(0.0);
        let vr = rho.eval_re(p)?.max(0.0);
        if vn <= nu_cut {
            if vr > rho_cut {
                return Err(Error::NotDominatedOnR { atom: i });
            }
            continue;
        }
        z = &z + &p.scale((vr / vn).sqrt());
    }
    Ok(z)
}

/// Residual report of the compression identity
/// `ν(p·a·p) − ν(p⊥·a·p⊥) = ν(a)` that every minimizing subalgebra with an
/// internal relative Radon-Nikodym operator must satisfy for projections `p`
/// whose complement lies in the kernel ideal of `ρ`.
#[derive(Clone, Debug, Serialize)]
pub struct CompressionIdentityVerdict {
    pub residual: f64,
    pub pass: bool,
}

pub fn compression_identity(
    nu: &PositiveForm,
    rho: &PositiveForm,
    r: &AbelianSubalgebra,
    p: &Element,
) -> Result<CompressionIdentityVerdict> {
    if !p.is_projection() {
        return Err(Error::PreconditionViolated("p is not a projection".into()));
    }
    if !is_minimizing_subalgebra(nu, rho, r, tol::MINIMIZING_ALGEBRA_REL)? {
        return Err(Error::PreconditionViolated(
            "subalgebra is not minimizing".into(),
        ));
    }
    let a = relative_radon_nikodym(nu, rho, r).map_err(|_| {
        Error::PreconditionViolated("no relative Radon-Nikodym operator on R".into())
    })?;
    let p_perp = &nu.algebra().identity() - p;
    if !rho.kernel_ideal_member(&p_perp)? {
        return Err(Error::PreconditionViolated(
            "complement of p is not in the kernel ideal of rho".into(),
        ));
    }
    let lhs = nu.eval_re(&(&(p * &a) * p))? - nu.eval_re(&(&(&p_perp * &a) * &p_perp))?;
    let rhs = nu.eval_re(&a)?;
    let residual = (lhs - rhs).abs();
    Ok(CompressionIdentityVerdict {
        residual,
        pass: residual <= 1e-8 * (1.0 + rhs.abs()),
    })
}

/// A *-automorphism probe: unitary conjugation or a permutation of
/// equal-dimension blocks.
#[derive(Clone, Debug)]
pub enum Automorphism {
    /// `x ↦ u·x·u*` for a unitary `u`.
    Unitary(Element),
    /// Block `b` of the image is block `perm[b]` of the argument.
    BlockPermutation(Vec<usize>),
}

impl Automorphism {
    pub fn apply(&self, x: &Element) -> Result<Element> {
        match self {
            Automorphism::Unitary(u) => {
                ensure_same_algebra(u, x)?;
                let check = &(&u.adjoint() * u) - &x.algebra().identity();
                if check.norm_fro() > tol::scaled(1e-8, 1.0) {
                    return Err(Error::PreconditionViolated(
                        "probe element is not unitary".into(),
                    ));
                }
                Ok(&(u * x) * &u.adjoint())
            }
            Automorphism::BlockPermutation(perm) => {
                let dims = x.algebra().block_dims();
                if perm.len() != dims.len() {
                    return Err(Error::PreconditionViolated(
                        "permutation length mismatch".into(),
                    ));
                }
                let mut seen = vec![false; perm.len()];
                for (b, &src) in perm.iter().enumerate() {
                    if src >= dims.len() || seen[src] || dims[src] != dims[b] {
                        return Err(Error::PreconditionViolated(
                            "block permutation must map equal-dimension blocks bijectively".into(),
                        ));
                    }
                    seen[src] = true;
                }
                let blocks = perm.iter().map(|&src| x.block(src).clone()).collect();
                Element::from_blocks(x.algebra().clone(), blocks)
            }
        }
    }

    /// Fixed-point test on a hermitian generator; by the fixed-point
    /// transfer to the generated subalgebra this decides invariance of the
    /// whole algebra the generator spans.
    pub fn fixes(&self, y: &Element) -> Result<bool> {
        let image = self.apply(y)?;
        Ok((&image - y).norm_fro() <= tol::scaled(1e-8, y.norm_fro()))
    }
}

/// An automorphism probe paired with its kernel-corner witness `k`.
#[derive(Clone, Debug)]
pub struct AutomorphismProbe {
    pub map: Automorphism,
    pub k: Element,
}

/// Probe material for the least-algebra decision.
#[derive(Clone, Debug, Default)]
pub struct LeastAlgebraProbes {
    /// Positive generator `x₀` with `ρ = ν^{x₀}`, for pairs without
    /// domination where only the witness-intersection machinery applies.
    pub generator: Option<Element>,
    /// Positive elements of the kernel ideal of `ν`; each contributes the
    /// candidate algebra generated by `x + k`.
    pub kernel_elements: Vec<Element>,
    /// Automorphism probes for the invariance obstruction.
    pub automorphisms: Vec<AutomorphismProbe>,
    /// Additional shift coefficients `λ` for the probe family.
    pub extra_shifts: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum NotExistsReason {
    /// An automorphism fixes `x + k` but moves the candidate generator.
    AutomorphismObstruction,
    /// The point-spectrum cardinality condition for non-faithful base forms
    /// is violated.
    SpectrumCardinality,
    /// Minimizing subalgebras whose intersection is not minimizing.
    NonMinimizingIntersection,
}

impl std::fmt::Display for NotExistsReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotExistsReason::AutomorphismObstruction => write!(f, "automorphism obstruction"),
            NotExistsReason::SpectrumCardinality => {
                write!(f, "point-spectrum cardinality condition violated")
            }
            NotExistsReason::NonMinimizingIntersection => {
                write!(f, "minimizing subalgebras with non-minimizing intersection")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UndecidedReason {
    /// The support of the derived form is not in the centralizer of the base
    /// form; existence is open outside the proven cases.
    OutsideProvenCases,
    /// The probe intersection disagrees with the closed-form candidate.
    ProbeMismatch,
}

impl std::fmt::Display for UndecidedReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UndecidedReason::OutsideProvenCases => {
                write!(f, "outside the proven existence cases")
            }
            UndecidedReason::ProbeMismatch => {
                write!(f, "probe intersection differs from the candidate")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub enum LeastAlgebraDecision {
    Exists(AbelianSubalgebra),
    NotExists(NotExistsReason),
    Undecided(UndecidedReason),
}

/// Verdict of the least-minimizing-subalgebra decision.
#[derive(Clone, Debug)]
pub struct LeastAlgebraVerdict {
    pub decision: LeastAlgebraDecision,
    /// Largest point-spectrum value of the generator, with 0 included when
    /// the support of the base form is deficient.
    pub lambda0: f64,
    /// Whether the point-spectrum cardinality condition holds (vacuously
    /// true for faithful base forms).
    pub spectrum_cardinality_ok: bool,
    /// Intersection of the probed candidate family.
    pub r_infinity: AbelianSubalgebra,
    /// The closed-form candidate `R[x + λ₀·s(ν)⊥]`.
    pub candidate: AbelianSubalgebra,
    /// Shift coefficients actually probed.
    pub probe_shifts: Vec<f64>,
}

fn proportional_forms(nu: &PositiveForm, rho: &PositiveForm) -> bool {
    if nu.is_zero() || rho.is_zero() {
        return true;
    }
    let scaled = nu.density().scale(rho.norm1() / nu.norm1());
    scaled.approx_eq(rho.density(), 1e-9)
}

/// Decide existence of the least minimizing abelian subalgebra for a pair
/// with `ρ ≪ ν` (or, without domination, with an explicit generator probe).
///
/// Decision order: automorphism obstructions are necessary conditions and
/// run first; a faithful base form decides existence with the generated
/// algebra of the Radon-Nikodym operator; then the point-spectrum
/// cardinality condition, the minimality of the probe intersection, and the
/// centralizer criterion. Everything else is reported as undecided.
pub fn least_minimizing_algebra(
    nu: &PositiveForm,
    rho: &PositiveForm,
    probes: &LeastAlgebraProbes,
) -> Result<LeastAlgebraVerdict> {
    ensure_same_algebra(nu.density(), rho.density())?;
    let algebra = nu.algebra().clone();
    let one = algebra.identity();
    let s_nu = nu.support();
    let s_perp = &one - &s_nu;

    let dominated = dominates(nu, rho)?.is_some();
    let x = if dominated {
        radon_nikodym(nu, rho)?
    } else if let Some(x0) = &probes.generator {
        x0.require_positive()?;
        let derived = nu.inner_derive(x0)?;
        if !derived.density().approx_eq(rho.density(), 1e-8) {
            return Err(Error::PreconditionViolated(
                "generator probe does not derive the second form".into(),
            ));
        }
        x0.clone()
    } else {
        return Err(Error::NotDominated);
    };

    // kernel-element probes must be positive corner elements of s(ν)⊥
    for (i, k) in probes.kernel_elements.iter().enumerate() {
        k.require_positive()?;
        let corner = &(&s_perp * k) * &s_perp;
        if !corner.approx_eq(k, 1e-8) {
            return Err(Error::PreconditionViolated(format!(
                "kernel probe {i} is not supported in the kernel corner"
            )));
        }
    }

    let spectrum = point_spectrum(&x, default_cluster_tol(&x))?;
    let lambda0 = spectrum.iter().copied().fold(0.0_f64, f64::max);
    let candidate = AbelianSubalgebra::generated_by(&(&x + &s_perp.scale(lambda0)))?;

    // probe family of shifts: {0, λ₀, λ₀+1, one non-spectral value}
    let mut shifts = vec![0.0, lambda0, lambda0 + 1.0];
    let mut non_spectral = lambda0 + 0.618_033_988_75;
    while spectrum.iter().any(|&l| (l - non_spectral).abs() < 1e-6) {
        non_spectral += 0.1;
    }
    shifts.push(non_spectral);
    shifts.extend(probes.extra_shifts.iter().copied());
    shifts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    shifts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);

    let mut family: Vec<AbelianSubalgebra> = Vec::new();
    for &lam in &shifts {
        family.push(AbelianSubalgebra::generated_by(&(&x + &s_perp.scale(lam)))?);
    }
    for k in &probes.kernel_elements {
        family.push(AbelianSubalgebra::generated_by(&(&x + k))?);
    }
    let mut r_infinity = family[0].clone();
    for r in family.iter().skip(1) {
        r_infinity = intersect(&r_infinity, r)?;
    }

    // point-spectrum cardinality condition, vacuous for faithful ν
    let faithful = nu.is_faithful();
    let spectrum_cardinality_ok = if faithful {
        true
    } else {
        let count = spectrum.len();
        let supports_equal = rho.support().approx_eq(&s_nu, 1e-9);
        if supports_equal {
            count <= 2
        } else {
            count == 1
        }
    };

    let verdict =
        |decision: LeastAlgebraDecision, r_infinity: AbelianSubalgebra| LeastAlgebraVerdict {
            decision,
            lambda0,
            spectrum_cardinality_ok,
            r_infinity,
            candidate: candidate.clone(),
            probe_shifts: shifts.clone(),
        };

    // 1. automorphism obstruction: Φ fixing x + k must fix x + λ₀·s(ν)⊥
    let shifted_generator = &x + &s_perp.scale(lambda0);
    for probe in &probes.automorphisms {
        let fixed_arg = &x + &probe.k;
        if probe.map.fixes(&fixed_arg)? && !probe.map.fixes(&shifted_generator)? {
            return Ok(verdict(
                LeastAlgebraDecision::NotExists(NotExistsReason::AutomorphismObstruction),
                r_infinity,
            ));
        }
    }

    // 2. without domination only the witness-intersection argument applies:
    //    minimizing algebras whose intersection is not minimizing exclude a
    //    least element.
    if !dominated {
        let mut witnesses = vec![AbelianSubalgebra::generated_by(&x)?];
        for k in &probes.kernel_elements {
            witnesses.push(AbelianSubalgebra::generated_by(&(&x + k))?);
        }
        for w in &witnesses {
            if !is_minimizing_subalgebra(nu, rho, w, tol::MINIMIZING_ALGEBRA_REL)? {
                return Err(Error::PreconditionViolated(
                    "a probed witness algebra is not minimizing".into(),
                ));
            }
        }
        let mut inter = witnesses[0].clone();
        for w in witnesses.iter().skip(1) {
            inter = intersect(&inter, w)?;
        }
        let inter_minimizing =
            is_minimizing_subalgebra(nu, rho, &inter, tol::MINIMIZING_ALGEBRA_REL)?;
        if !inter_minimizing {
            return Ok(verdict(
                LeastAlgebraDecision::NotExists(NotExistsReason::NonMinimizingIntersection),
                inter,
            ));
        }
        return Ok(verdict(
            LeastAlgebraDecision::Undecided(UndecidedReason::OutsideProvenCases),
            inter,
        ));
    }

    // 3. faithful base form: the generated algebra of the Radon-Nikodym
    //    operator is the least minimizing subalgebra.
    if faithful {
        let r = AbelianSubalgebra::generated_by(&x)?;
        debug_assert!(is_minimizing_subalgebra(
            nu,
            rho,
            &r,
            tol::MINIMIZING_ALGEBRA_REL
        )?);
        return Ok(verdict(LeastAlgebraDecision::Exists(r), r_infinity));
    }

    // 4. necessary spectrum condition for non-faithful base forms
    if !spectrum_cardinality_ok {
        return Ok(verdict(
            LeastAlgebraDecision::NotExists(NotExistsReason::SpectrumCardinality),
            r_infinity,
        ));
    }

    // 5. every probed algebra is minimizing, so a least element would be
    //    contained in their intersection; a non-minimizing intersection is
    //    an obstruction.
    if !is_minimizing_subalgebra(nu, rho, &r_infinity, tol::MINIMIZING_ALGEBRA_REL)? {
        return Ok(verdict(
            LeastAlgebraDecision::NotExists(NotExistsReason::NonMinimizingIntersection),
            r_infinity,
        ));
    }

    // 6. centralizer case: existence is settled in finite dimensions when
    //    the support of ρ commutes with the density of ν.
    let s_rho = rho.support();
    let centralizer = (&(&s_rho * nu.density()) - &(nu.density() * &s_rho)).norm_fro()
        <= tol::scaled(1e-9, nu.density().norm_fro());
    if centralizer {
        if candidate.equiv(&r_infinity, 1e-8) {
            return Ok(verdict(
                LeastAlgebraDecision::Exists(candidate.clone()),
                r_infinity,
            ));
        }
        return Ok(verdict(
            LeastAlgebraDecision::Undecided(UndecidedReason::ProbeMismatch),
            r_infinity,
        ));
    }

    let _ = proportional_forms;
    Ok(verdict(
        LeastAlgebraDecision::Undecided(UndecidedReason::OutsideProvenCases),
        r_infinity,
    ))
}

/// Hereditary compression to the corner `q = s(ρ) + s(ν)⊥`.
#[derive(Clone, Debug)]
pub struct HereditaryCompression {
    pub q: Element,
    /// The compressed block algebra on the range of `q`.
    pub algebra: Algebra,
    pub nu_q: PositiveForm,
    pub rho_q: PositiveForm,
    /// Per kept block: source block index and the isometry onto the range.
    pub isometries: Vec<(usize, nalgebra::DMatrix<C64>)>,
    /// Clustered point spectrum of the Radon-Nikodym operator upstairs.
    pub spectrum: Vec<f64>,
    /// Clustered point spectrum of the compressed Radon-Nikodym operator.
    pub spectrum_q: Vec<f64>,
    /// Nonzero spectra agree and the zero memberships match the support
    /// ranks.
    pub spectrum_relation_ok: bool,
}

impl HereditaryCompression {
    /// Compress an element of the ambient algebra into the corner algebra.
    pub fn compress(&self, x: &Element) -> Result<Element> {
        let blocks = self
            .isometries
            .iter()
            .map(|(src, v)| v.adjoint() * x.block(*src) * v)
            .collect();
        Element::from_blocks(self.algebra.clone(), blocks)
    }
}

/// Build the hereditary compression of a dominated pair and verify the
/// point-spectrum relation between the Radon-Nikodym operators upstairs and
/// downstairs.
pub fn hereditary_compression(
    nu: &PositiveForm,
    rho: &PositiveForm,
) -> Result<HereditaryCompression> {
    if dominates(nu, rho)?.is_none() {
        return Err(Error::NotDominated);
    }
    let algebra = nu.algebra().clone();
    let s_nu = nu.support();
    let s_rho = rho.support();
    let q = (&(&algebra.identity() - &s_nu) + &s_rho).hermitize();
    debug_assert!(q.is_projection());

    let mut dims = Vec::new();
    let mut isometries = Vec::new();
    for (b, &n) in algebra.block_dims().iter().enumerate() {
        let se = nalgebra::SymmetricEigen::new(q.block(b).clone());
        let mut cols: Vec<usize> = (0..n).filter(|&i| se.eigenvalues[i] > 0.5).collect();
        cols.sort_unstable();
        if cols.is_empty() {
            continue;
        }
        let mut v = nalgebra::DMatrix::<C64>::zeros(n, cols.len());
        for (j, &i) in cols.iter().enumerate() {
            v.set_column(j, &se.eigenvectors.column(i));
        }
        dims.push(cols.len());
        isometries.push((b, v));
    }
    if dims.is_empty() {
        return Err(Error::PreconditionViolated(
            "compression corner is zero".into(),
        ));
    }
    let compressed_algebra = Algebra::new(dims)?;

    let compress = |x: &Element| -> Result<Element> {
        let blocks = isometries
            .iter()
            .map(|(src, v)| v.adjoint() * x.block(*src) * v)
            .collect();
        Element::from_blocks(compressed_algebra.clone(), blocks)
    };

    let nu_q = PositiveForm::new(compress(nu.density())?.hermitize())?;
    let rho_q = PositiveForm::new(compress(rho.density())?.hermitize())?;

    let x = radon_nikodym(nu, rho)?;
    let x_q = radon_nikodym(&nu_q, &rho_q)?;
    debug_assert!(compress(&x)?.approx_eq(&x_q, 1e-7));

    let spectrum = point_spectrum(&x, default_cluster_tol(&x))?;
    let spectrum_q = point_spectrum(&x_q, default_cluster_tol(&x_q))?;
    let nonzero = |s: &[f64]| s.iter().copied().filter(|&l| l > 0.0).collect::<Vec<_>>();
    let up = nonzero(&spectrum);
    let down = nonzero(&spectrum_q);
    let nonzero_match = up.len() == down.len()
        && up
            .iter()
            .zip(down.iter())
            .all(|(a, b)| (a - b).abs() <= 1e-7 * (1.0 + a.abs()));
    let zero_up = spectrum.contains(&0.0);
    let zero_down = spectrum_q.contains(&0.0);
    let rank_s_rho = s_rho.numerical_rank()?;
    let rank_s_nu = s_nu.numerical_rank()?;
    let dim = algebra.dim();
    let spectrum_relation_ok =
        nonzero_match && zero_up == (rank_s_rho < dim) && zero_down == (rank_s_nu < dim);

    Ok(HereditaryCompression {
        q,
        algebra: compressed_algebra,
        nu_q,
        rho_q,
        isometries,
        spectrum,
        spectrum_q,
        spectrum_relation_ok,
    })
}

/// Case label of the shifted-generator analysis for a positive element with
/// deficient support.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SupportCase {
    /// No nonzero point spectrum: the generated algebra itself is the
    /// intersection.
    NoNonzeroSpectrum,
    /// Exactly one nonzero spectral value `λ₀`: the intersection collapses
    /// onto the shifted generator.
    SingleNonzero { lambda0: f64 },
    /// Two or more nonzero values: the intersection is strictly smaller
    /// than every member of the family.
    MultipleNonzero,
}

#[derive(Clone, Debug)]
pub struct SupportCaseReport {
    pub case: SupportCase,
    pub r0: AbelianSubalgebra,
    pub probes: Vec<f64>,
    /// Whether the asserted relation between `R₀` and the probed family
    /// holds numerically.
    pub relation_ok: bool,
}

/// Compute `R₀(x) = ∩_λ R[x + λ·s(x)⊥]` over the probe family
/// `{0} ∪ spec_p(x)\{0} ∪ {one non-spectral value}` and label the case by
/// the nonzero point-spectrum cardinality.
pub fn support_case_analysis(x: &Element) -> Result<SupportCaseReport> {
    x.require_positive()?;
    let algebra = x.algebra().clone();
    let support = x.support()?;
    if support.numerical_rank()? == algebra.dim() {
        return Err(Error::FullSupport);
    }
    let s_perp = &algebra.identity() - &support;
    let spectrum = point_spectrum(x, default_cluster_tol(x))?;
    let nonzero: Vec<f64> = spectrum.iter().copied().filter(|&l| l > 0.0).collect();

    let mut probes = vec![0.0];
    probes.extend(nonzero.iter().copied());
    let mut extra = nonzero.iter().copied().fold(0.0_f64, f64::max) + 1.0;
    while spectrum.iter().any(|&l| (l - extra).abs() < 1e-6) {
        extra += 0.3;
    }
    probes.push(extra);

    let family: Vec<AbelianSubalgebra> = probes
        .iter()
        .map(|&lam| AbelianSubalgebra::generated_by(&(x + &s_perp.scale(lam))))
        .collect::<Result<_>>()?;
    let mut r0 = family[0].clone();
    for r in family.iter().skip(1) {
        r0 = intersect(&r0, r)?;
    }

    let (case, relation_ok) = match nonzero.len() {
        0 => {
            let rx = AbelianSubalgebra::generated_by(x)?;
            (SupportCase::NoNonzeroSpectrum, r0.equiv(&rx, 1e-8))
        }
        1 => {
            let lambda0 = nonzero[0];
            let shifted = AbelianSubalgebra::generated_by(&(x + &s_perp.scale(lambda0)))?;
            (
                SupportCase::SingleNonzero { lambda0 },
                r0.equiv(&shifted, 1e-8),
            )
        }
        _ => {
            let distinct = family.iter().all(|r| !r0.equiv(r, 1e-8));
            (SupportCase::MultipleNonzero, distinct)
        }
    };
    Ok(SupportCaseReport {
        case,
        r0,
        probes,
        relation_ok,
    })
}

/// Two-sided report of the equivalence between containing a minimizing
/// projective subalgebra and the relative Radon-Nikodym operator satisfying
/// the support-compression identity.
#[derive(Clone, Debug)]
pub struct ProjectiveEquivalenceReport {
    pub inner_projective_found: Option<AbelianSubalgebra>,
    pub lhs_exists: bool,
    pub rhs_residual: f64,
    pub rhs_holds: bool,
    pub agree: bool,
}

/// For a minimizing `R` with relative Radon-Nikodym operator `z`, check
/// `ν(s(ρ)·z·s(ρ)) = ν(z)` against the existence of a minimizing projective
/// subalgebra of `R` generated by `x + k`, with `k` drawn from a probe
/// family in the kernel corner intersected with `R`-compatibility.
pub fn projective_equivalence(
    nu: &PositiveForm,
    rho: &PositiveForm,
    r: &AbelianSubalgebra,
) -> Result<ProjectiveEquivalenceReport> {
    if dominates(nu, rho)?.is_none() {
        return Err(Error::NotDominated);
    }
    if !is_minimizing_subalgebra(nu, rho, r, tol::MINIMIZING_ALGEBRA_REL)? {
        return Err(Error::PreconditionViolated(
            "subalgebra is not minimizing".into(),
        ));
    }
    let z = relative_radon_nikodym(nu, rho, r)?;
    let x = radon_nikodym(nu, rho)?;
    let s_rho = rho.support();
    let s_perp = &nu.algebra().identity() - &nu.support();

    let lhs = nu.eval_re(&(&(&s_rho * &z) * &s_rho))?;
    let rhs = nu.eval_re(&z)?;
    let rhs_residual = (lhs - rhs).abs();
    let rhs_holds = rhs_residual <= 1e-8 * (1.0 + rhs.abs());

    // probe family for k: the canonical difference z − x when it lands in
    // the kernel corner, plus scalar corner shifts and atom compressions
    let mut ks: Vec<Element> = vec![nu.algebra().zero()];
    let diff = (&z - &x).hermitize();
    let corner_diff = &(&s_perp * &diff) * &s_perp;
    if corner_diff.approx_eq(&diff, 1e-7) && diff.hermitize().min_eigenvalue()? > -1e-9 {
        ks.push(corner_diff);
    }
    if s_perp.norm_fro() > tol::ATOM_OVERLAP {
        ks.push(s_perp.clone());
        let spectrum = point_spectrum(&x, default_cluster_tol(&x))?;
        let lambda0 = spectrum.iter().copied().fold(0.0_f64, f64::max);
        if lambda0 > 0.0 {
            ks.push(s_perp.scale(lambda0));
        }
        for p in r.atoms() {
            let corner = (&(&s_perp * p) * &s_perp).hermitize();
            if corner.norm_fro() > tol::ATOM_OVERLAP {
                ks.push(corner);
            }
        }
    }

    let mut found = None;
    for k in &ks {
        let candidate = AbelianSubalgebra::generated_by(&(&x + k).hermitize())?;
        if candidate.contained_in(r, 1e-7)
            && is_minimizing_subalgebra(nu, rho, &candidate, tol::MINIMIZING_ALGEBRA_REL)?
            && is_projective(nu, rho, &candidate, tol::PROJECTIVE_REL)?
        {
            found = Some(candidate);
            break;
        }
    }
    let lhs_exists = found.is_some();
    Ok(ProjectiveEquivalenceReport {
        inner_projective_found: found,
        lhs_exists,
        rhs_residual,
        rhs_holds,
        agree: lhs_exists == rhs_holds,
    })
}

/// Gap table of a sweep over the rank-one-projection subalgebras of a
/// two-dimensional block, parametrized on the real circle.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub p_m: f64,
    /// `P_R − P_M` per grid point.
    pub gaps: Vec<f64>,
    /// Gap of the trivial algebra.
    pub trivial_gap: f64,
    /// Grid indices attaining the minimum within the tolerance.
    pub attained: Vec<usize>,
}

/// Sweep the abelian subalgebras `R(θ) = {p(θ), p(θ)⊥}` of a full 2x2
/// algebra over `grid` angles in `[0, π/2)` and record the attainment gaps.
/// Since `R(θ) = R(θ + π/2)`, this quarter turn parametrizes each
/// real-projection subalgebra exactly once around the circle.
pub fn rank_one_sweep(
    nu: &PositiveForm,
    rho: &PositiveForm,
    grid: usize,
    tolerance: f64,
    mode: Parallelism,
) -> Result<SweepReport> {
    let algebra = nu.algebra().clone();
    if algebra.block_dims() != [2] {
        return Err(Error::PreconditionViolated(
            "sweep needs the full 2x2 algebra".into(),
        ));
    }
    let p_m = transition_probability(nu, rho)?.p();
    let gaps = map_trials(grid as u64, mode, |j| {
        let theta = std::f64::consts::FRAC_PI_2 * (j as f64) / (grid as f64);
        let (c, s) = (theta.cos(), theta.sin());
        let p = Element::from_real_blocks(
            algebra.clone(),
            vec![vec![vec![c * c, c * s], vec![c * s, s * s]]],
        )
        .expect("projection block");
        let r = AbelianSubalgebra::new(vec![p.clone(), &algebra.identity() - &p])
            .expect("rank-one partition");
        restricted_transition_probability(nu, rho, &r).expect("restricted value") - p_m
    });
    let trivial_gap =
        restricted_transition_probability(nu, rho, &AbelianSubalgebra::trivial(&algebra))? - p_m;
    let attained = gaps
        .iter()
        .enumerate()
        .filter(|(_, &g)| g.abs() <= tolerance * (1.0 + p_m))
        .map(|(i, _)| i)
        .collect();
    Ok(SweepReport {
        p_m,
        gaps,
        trivial_gap,
        attained,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;

    fn diag_form(entries: &[f64]) -> PositiveForm {
        let alg = Algebra::full(entries.len());
        PositiveForm::new(Element::diagonal(&alg, entries).unwrap()).unwrap()
    }

    fn diag_atoms(alg: &Algebra, groups: &[&[usize]]) -> AbelianSubalgebra {
        let atoms = groups
            .iter()
            .map(|idxs| {
                let mut entries = vec![0.0; alg.dim()];
                for &i in *idxs {
                    entries[i] = 1.0;
                }
                Element::diagonal(alg, &entries).unwrap()
            })
            .collect();
        AbelianSubalgebra::new(atoms).unwrap()
    }

    #[test]
    fn generated_algebra_examples() {
        let alg = Algebra::full(3);
        let x = Element::diagonal(&alg, &[1.0, 1.0, 2.0]).unwrap();
        let r = AbelianSubalgebra::generated_by(&x).unwrap();
        assert_eq!(r.len(), 2);

        let one = alg.identity();
        let r = AbelianSubalgebra::generated_by(&one).unwrap();
        assert!(r.is_trivial());

        let m2 = Algebra::full(2);
        let y = Element::from_real_blocks(m2, vec![vec![vec![2.0, 1.0], vec![1.0, 2.0]]]).unwrap();
        let r = AbelianSubalgebra::generated_by(&y).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.span_contains(&y, 1e-10));
    }

    #[test]
    fn intersection_examples() {
        let alg = Algebra::full(3);
        let fine = diag_atoms(&alg, &[&[0], &[1], &[2]]);
        let coarse = diag_atoms(&alg, &[&[0, 1], &[2]]);
        let meet = intersect(&fine, &coarse).unwrap();
        assert!(meet.equiv(&coarse, 1e-10));

        let same = intersect(&fine, &fine).unwrap();
        assert!(same.equiv(&fine, 1e-10));

        // two non-commuting rank-one partitions of a 2x2 block meet trivially
        let m2 = Algebra::full(2);
        let r1 = diag_atoms(&m2, &[&[0], &[1]]);
        let p = Element::from_real_blocks(m2.clone(), vec![vec![vec![0.5, 0.5], vec![0.5, 0.5]]])
            .unwrap();
        let r2 = AbelianSubalgebra::new(vec![p.clone(), &m2.identity() - &p]).unwrap();
        let meet = intersect(&r1, &r2).unwrap();
        assert!(meet.is_trivial());
    }

    #[test]
    fn restricted_value_examples() {
        let nu = diag_form(&[0.5, 0.5]);
        let rho = diag_form(&[0.75, 0.25]);
        let trivial = AbelianSubalgebra::trivial(nu.algebra());
        let v = restricted_transition_probability(&nu, &rho, &trivial).unwrap();
        assert!((v - 1.0).abs() < 1e-12);

        let diagonal = diag_atoms(nu.algebra(), &[&[0], &[1]]);
        let v = restricted_transition_probability(&nu, &rho, &diagonal).unwrap();
        assert!((v - 0.9330127018922192).abs() < 1e-12);
        let p_m = transition_probability(&nu, &rho).unwrap().p();
        assert!((v - p_m).abs() < 1e-12);
        assert!(is_minimizing_subalgebra(&nu, &rho, &diagonal, 1e-7).unwrap());
        assert!(!is_minimizing_subalgebra(&nu, &rho, &trivial, 1e-7).unwrap());
    }

    #[test]
    fn monotone_under_refinement() {
        let mut rng = sampling::rng(77);
        let alg = Algebra::full(4);
        let nu = sampling::random_faithful_state(&mut rng, &alg);
        let rho = sampling::random_faithful_state(&mut rng, &alg);
        let fine = sampling::random_partition(&mut rng, &alg, 4);
        let mid = sampling::coarsen_partition(&fine);
        let coarse = sampling::coarsen_partition(&mid);
        let v_fine = restricted_transition_probability(&nu, &rho, &fine).unwrap();
        let v_mid = restricted_transition_probability(&nu, &rho, &mid).unwrap();
        let v_coarse = restricted_transition_probability(&nu, &rho, &coarse).unwrap();
        let p_m = transition_probability(&nu, &rho).unwrap().p();
        assert!(v_coarse >= v_mid - 1e-9);
        assert!(v_mid >= v_fine - 1e-9);
        assert!(v_fine >= p_m - 1e-9);
    }

    #[test]
    fn projectivity_examples() {
        // s(ρ) commuting with the density makes every partition projective
        let nu = diag_form(&[0.7, 0.3]);
        let rho = diag_form(&[0.5, 0.0]);
        let alg = nu.algebra().clone();
        let p = Element::from_real_blocks(alg.clone(), vec![vec![vec![0.5, 0.5], vec![0.5, 0.5]]])
            .unwrap();
        let skew = AbelianSubalgebra::new(vec![p.clone(), &alg.identity() - &p]).unwrap();
        assert!(is_projective(&nu, &rho, &skew, tol::PROJECTIVE_REL).unwrap());

        // equal supports: projective both ways for every partition
        let rho_full = diag_form(&[0.2, 0.8]);
        assert!(is_projective(&nu, &rho_full, &skew, tol::PROJECTIVE_REL).unwrap());
        assert!(is_projective(&rho_full, &nu, &skew, tol::PROJECTIVE_REL).unwrap());

        // misaligned rank-one support fails against the diagonal partition
        let s = PositiveForm::new(p.scale(0.4)).unwrap();
        let diagonal = diag_atoms(&alg, &[&[0], &[1]]);
        assert!(!is_projective(&nu, &s, &diagonal, tol::PROJECTIVE_REL).unwrap());
    }

    #[test]
    fn relative_radon_nikodym_examples() {
        let nu = diag_form(&[0.5, 0.5]);
        let rho = diag_form(&[0.75, 0.25]);
        let trivial = AbelianSubalgebra::trivial(nu.algebra());
        let z = relative_radon_nikodym(&nu, &rho, &trivial).unwrap();
        assert!(z.approx_eq(&nu.algebra().identity(), 1e-12)); // √(‖ρ‖/‖ν‖) = 1

        let diagonal = diag_atoms(nu.algebra(), &[&[0], &[1]]);
        let z = relative_radon_nikodym(&nu, &rho, &diagonal).unwrap();
        let expected = Element::diagonal(nu.algebra(), &[1.5f64.sqrt(), 0.5f64.sqrt()]).unwrap();
        assert!(z.approx_eq(&expected, 1e-12));

        let z = relative_radon_nikodym(&nu, &nu, &diagonal).unwrap();
        assert!(z.approx_eq(&nu.algebra().identity(), 1e-12));

        // restricted domination failure
        let nu_part = diag_form(&[1.0, 0.0]);
        let rho_off = diag_form(&[0.0, 1.0]);
        assert!(matches!(
            relative_radon_nikodym(&nu_part, &rho_off, &diagonal),
            Err(Error::NotDominatedOnR { atom: 1 })
        ));
    }

    #[test]
    fn compression_identity_on_derived_scenario() {
        // ρ = ν^a with singular a, R = R[a], p = s(ρ)
        let alg = Algebra::full(3);
        let nu = diag_form(&[0.4, 0.35, 0.25]);
        let a = Element::diagonal(&alg, &[2.0, 1.0, 0.0]).unwrap();
        let rho = nu.inner_derive(&a).unwrap();
        let r = AbelianSubalgebra::generated_by(&a).unwrap();
        let p = rho.support();
        let verdict = compression_identity(&nu, &rho, &r, &p).unwrap();
        assert!(verdict.pass, "residual {}", verdict.residual);

        // p = 𝟏 reads ν(a) = ν(a)
        let one = alg.identity();
        let verdict = compression_identity(&nu, &rho, &r, &one).unwrap();
        assert!(verdict.pass);

        // a partition that is not minimizing violates the precondition
        let other = AbelianSubalgebra::generated_by(
            &Element::from_real_blocks(
                alg.clone(),
                vec![vec![
                    vec![1.0, 0.4, 0.0],
                    vec![0.4, 2.0, 0.1],
                    vec![0.0, 0.1, 3.0],
                ]],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(matches!(
            compression_identity(&nu, &rho, &other, &p),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn support_case_examples() {
        let alg = Algebra::diagonal(3);
        // x + 0.5·s(x)⊥ is scalar, so the intersection is trivial
        let x = Element::diagonal(&alg, &[0.5, 0.5, 0.0]).unwrap();
        let report = support_case_analysis(&x).unwrap();
        assert_eq!(report.case, SupportCase::SingleNonzero { lambda0: 0.5 });
        assert!(report.relation_ok);
        assert!(report.r0.is_trivial());

        let alg2 = Algebra::diagonal(2);
        let x = Element::diagonal(&alg2, &[1.0, 0.0]).unwrap();
        let report = support_case_analysis(&x).unwrap();
        assert_eq!(report.case, SupportCase::SingleNonzero { lambda0: 1.0 });
        assert!(report.r0.is_trivial());

        let x = Element::diagonal(&alg, &[2.0, 1.0, 0.0]).unwrap();
        let report = support_case_analysis(&x).unwrap();
        assert_eq!(report.case, SupportCase::MultipleNonzero);
        assert!(report.relation_ok);
        assert!(report.r0.is_trivial());

        // full support is rejected
        let x = Element::diagonal(&alg, &[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(support_case_analysis(&x), Err(Error::FullSupport)));
    }

    #[test]
    fn least_algebra_faithful_case() {
        let mut rng = sampling::rng(101);
        let alg = Algebra::full(3);
        let nu = sampling::random_faithful_state(&mut rng, &alg);
        let x = sampling::random_invertible_positive(&mut rng, &alg);
        let rho = nu.inner_derive(&x).unwrap();
        let verdict = least_minimizing_algebra(&nu, &rho, &LeastAlgebraProbes::default()).unwrap();
        match verdict.decision {
            LeastAlgebraDecision::Exists(r) => {
                let rx = AbelianSubalgebra::generated_by(&x).unwrap();
                assert!(r.equiv(&rx, 1e-7));
                assert!(is_minimizing_subalgebra(&nu, &rho, &r, 1e-7).unwrap());
            }
            other => panic!("expected existence, got {:?}", other),
        }
        assert!(verdict.spectrum_cardinality_ok);
    }

    #[test]
    fn least_algebra_needs_domination_or_generator() {
        let nu = diag_form(&[1.0, 0.0]);
        let rho = diag_form(&[0.0, 1.0]);
        assert!(matches!(
            least_minimizing_algebra(&nu, &rho, &LeastAlgebraProbes::default()),
            Err(Error::NotDominated)
        ));
    }

    #[test]
    fn least_algebra_stays_undecided_without_enough_probes() {
        // the witness-intersection argument alone cannot decide existence:
        // a single minimizing witness leaves the question open
        let alg = Algebra::full(2);
        let p = Element::from_real_blocks(alg.clone(), vec![vec![vec![0.8, 0.4], vec![0.4, 0.2]]])
            .unwrap();
        let q_perp =
            Element::from_real_blocks(alg.clone(), vec![vec![vec![0.5, -0.5], vec![-0.5, 0.5]]])
                .unwrap();
        let nu = PositiveForm::new(q_perp.scale(0.7)).unwrap();
        let x = &p + &(&alg.identity() - &p).scale(0.4);
        let rho = nu.inner_derive(&x).unwrap();
        let probes = LeastAlgebraProbes {
            generator: Some(x),
            ..LeastAlgebraProbes::default()
        };
        let verdict = least_minimizing_algebra(&nu, &rho, &probes).unwrap();
        assert!(matches!(
            verdict.decision,
            LeastAlgebraDecision::Undecided(UndecidedReason::OutsideProvenCases)
        ));
    }

    #[test]
    fn hereditary_compression_identity_case() {
        let mut rng = sampling::rng(55);
        let alg = Algebra::full(3);
        let nu = sampling::random_faithful_state(&mut rng, &alg);
        let x = sampling::random_invertible_positive(&mut rng, &alg);
        let rho = nu.inner_derive(&x).unwrap();
        let comp = hereditary_compression(&nu, &rho).unwrap();
        assert_eq!(comp.algebra.dim(), 3);
        assert!(comp.q.approx_eq(&alg.identity(), 1e-9));
        // identity compression: upstairs x is invertible, no zero anywhere
        assert!(comp.spectrum_relation_ok);
    }

    #[test]
    fn hereditary_compression_rank_arithmetic() {
        // s(ρ) < s(ν) < 𝟏: compressed dimension = rank s(ρ) + rank s(ν)⊥
        let alg = Algebra::diagonal(4);
        let nu =
            PositiveForm::new(Element::diagonal(&alg, &[0.5, 0.3, 0.2, 0.0]).unwrap()).unwrap();
        let rho =
            PositiveForm::new(Element::diagonal(&alg, &[0.8, 0.2, 0.0, 0.0]).unwrap()).unwrap();
        let comp = hereditary_compression(&nu, &rho).unwrap();
        assert_eq!(comp.algebra.dim(), 2 + 1);
        assert!(
            comp.spectrum_relation_ok,
            "up {:?} down {:?}",
            comp.spectrum, comp.spectrum_q
        );
    }

    #[test]
    fn projective_equivalence_centralizer_case() {
        // diagonal everything: s(ρ) is in the centralizer, both sides hold
        let alg = Algebra::diagonal(3);
        let nu = PositiveForm::new(Element::diagonal(&alg, &[0.5, 0.3, 0.2]).unwrap()).unwrap();
        let a = Element::diagonal(&alg, &[1.5, 0.5, 0.0]).unwrap();
        let rho = nu.inner_derive(&a).unwrap();
        let r = AbelianSubalgebra::generated_by(&a).unwrap();
        let report = projective_equivalence(&nu, &rho, &r).unwrap();
        assert!(report.rhs_holds);
        assert!(report.lhs_exists);
        assert!(report.agree);
    }

    #[test]
    fn sweep_finds_the_generated_algebra() {
        // real faithful pair with the minimizer eigenbasis on the grid
        let alg = Algebra::full(2);
        let nu = PositiveForm::new(
            Element::from_real_blocks(alg.clone(), vec![vec![vec![0.6, 0.1], vec![0.1, 0.4]]])
                .unwrap(),
        )
        .unwrap();
        let theta = 30.0 * std::f64::consts::FRAC_PI_2 / 360.0;
        let (c, s) = (theta.cos(), theta.sin());
        // x = u·diag(1.7, 0.4)·u* with u the rotation by theta
        let x = Element::from_real_blocks(
            alg.clone(),
            vec![vec![
                vec![1.7 * c * c + 0.4 * s * s, (1.7 - 0.4) * c * s],
                vec![(1.7 - 0.4) * c * s, 1.7 * s * s + 0.4 * c * c],
            ]],
        )
        .unwrap();
        let rho = nu.inner_derive(&x).unwrap();
        let report = rank_one_sweep(&nu, &rho, 360, 1e-7, Parallelism::default()).unwrap();
        assert_eq!(report.attained, vec![30]);
        assert!(report.trivial_gap > 1e-4);
    }
}
