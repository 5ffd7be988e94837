//! Finite-dimensional *-algebra arithmetic.
//!
//! An [`Algebra`] is a finite direct sum of full complex matrix blocks; every
//! finite-dimensional *-algebra is *-isomorphic to such a direct sum, and
//! commutative algebras are the all-blocks-size-one case. An [`Element`] is a
//! block-diagonal complex matrix over such an algebra. Hermitian, positive
//! and projection elements are refinements by predicate, not separate types.
//!
//! Spectral calculus (resolutions, supports, pseudo-inverses, functions of
//! hermitian elements) works blockwise through hermitian eigendecompositions;
//! eigenvalues are clustered because exact eigenvalue coincidence is not
//! available in floating point.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex<f64>;

/// A finite direct sum of full complex matrix blocks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    block_dims: Vec<usize>,
}

impl Algebra {
    pub fn new(block_dims: Vec<usize>) -> Result<Self> {
        if block_dims.is_empty() {
            return Err(Error::InvalidAlgebra("needs at least one block".into()));
        }
        if block_dims.contains(&0) {
            return Err(Error::InvalidAlgebra(
                "block dimensions must be >= 1".into(),
            ));
        }
        Ok(Algebra { block_dims })
    }

    /// The full matrix algebra on `n` dimensions (a single block).
    pub fn full(n: usize) -> Self {
        Algebra::new(vec![n]).expect("full block")
    }

    /// The commutative diagonal algebra of dimension `n`.
    pub fn diagonal(n: usize) -> Self {
        Algebra::new(vec![1; n]).expect("diagonal blocks")
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    pub fn num_blocks(&self) -> usize {
        self.block_dims.len()
    }

    /// Total dimension `N = Σ n_b` of the underlying Hilbert space.
    pub fn dim(&self) -> usize {
        self.block_dims.iter().sum()
    }

    pub fn zero(&self) -> Element {
        let blocks = self
            .block_dims
            .iter()
            .map(|&n| DMatrix::<C64>::zeros(n, n))
            .collect();
        Element {
            algebra: self.clone(),
            blocks,
        }
    }

    pub fn identity(&self) -> Element {
        let blocks = self
            .block_dims
            .iter()
            .map(|&n| DMatrix::<C64>::identity(n, n))
            .collect();
        Element {
            algebra: self.clone(),
            blocks,
        }
    }

    /// The matrix units of every block, a spanning set of the algebra.
    pub fn matrix_units(&self) -> Vec<Element> {
        let mut units = Vec::new();
        for (b, &n) in self.block_dims.iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let mut e = self.zero();
                    e.blocks[b][(i, j)] = C64::new(1.0, 0.0);
                    units.push(e);
                }
            }
        }
        units
    }
}

/// A block-diagonal element of an [`Algebra`].
#[derive(Clone, Debug)]
pub struct Element {
    algebra: Algebra,
    blocks: Vec<DMatrix<C64>>,
}

pub(crate) fn ensure_same_algebra(a: &Element, b: &Element) -> Result<()> {
    if a.algebra != b.algebra {
        return Err(Error::AlgebraMismatch);
    }
    Ok(())
}

impl Element {
    pub fn from_blocks(algebra: Algebra, blocks: Vec<DMatrix<C64>>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks supplied, algebra has {}",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        for (b, m) in blocks.iter().enumerate() {
            let n = algebra.block_dims()[b];
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {b} is {}x{}, expected {n}x{n}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        Ok(Element { algebra, blocks })
    }

    /// Convenience constructor promoting real block data to complex.
    pub fn from_real_blocks(algebra: Algebra, blocks: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let complex: Vec<Vec<Vec<(f64, f64)>>> = blocks
            .into_iter()
            .map(|rows| {
                rows.into_iter()
                    .map(|row| row.into_iter().map(|x| (x, 0.0)).collect())
                    .collect()
            })
            .collect();
        Element::from_complex_rows(algebra, complex)
    }

    /// Constructor from row-major nested data with `(re, im)` entries,
    /// the wire representation used by scenario files.
    pub fn from_complex_rows(algebra: Algebra, blocks: Vec<Vec<Vec<(f64, f64)>>>) -> Result<Self> {
        if blocks.len() != algebra.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks supplied, algebra has {}",
                blocks.len(),
                algebra.num_blocks()
            )));
        }
        let mut mats = Vec::with_capacity(blocks.len());
        for (b, rows) in blocks.iter().enumerate() {
            let n = algebra.block_dims()[b];
            if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                return Err(Error::ShapeMismatch(format!("block {b} is not {n}x{n}")));
            }
            let mut m = DMatrix::<C64>::zeros(n, n);
            for (i, row) in rows.iter().enumerate() {
                for (j, &(re, im)) in row.iter().enumerate() {
                    m[(i, j)] = C64::new(re, im);
                }
            }
            mats.push(m);
        }
        Ok(Element {
            algebra,
            blocks: mats,
        })
    }

    /// Diagonal element of a commutative or block algebra; the slice is
    /// consumed blockwise along the diagonal.
    pub fn diagonal(algebra: &Algebra, entries: &[f64]) -> Result<Self> {
        if entries.len() != algebra.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{} diagonal entries, algebra dimension {}",
                entries.len(),
                algebra.dim()
            )));
        }
        let mut el = algebra.zero();
        let mut offset = 0;
        for (b, &n) in algebra.block_dims().iter().enumerate() {
            for i in 0..n {
                el.blocks[b][(i, i)] = C64::new(entries[offset + i], 0.0);
            }
            offset += n;
        }
        Ok(el)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn block(&self, b: usize) -> &DMatrix<C64> {
        &self.blocks[b]
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.blocks
    }

    pub(crate) fn from_block_iter<I: Iterator<Item = DMatrix<C64>>>(
        algebra: Algebra,
        it: I,
    ) -> Self {
        let blocks: Vec<_> = it.collect();
        debug_assert_eq!(blocks.len(), algebra.num_blocks());
        Element { algebra, blocks }
    }

    /// Row-major nested `(re, im)` data, the inverse of
    /// [`Element::from_complex_rows`].
    pub fn to_complex_rows(&self) -> Vec<Vec<Vec<(f64, f64)>>> {
        self.blocks
            .iter()
            .map(|m| {
                (0..m.nrows())
                    .map(|i| {
                        (0..m.ncols())
                            .map(|j| (m[(i, j)].re, m[(i, j)].im))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    pub fn adjoint(&self) -> Element {
        Element::from_block_iter(
            self.algebra.clone(),
            self.blocks.iter().map(|m| m.adjoint()),
        )
    }

    pub fn scale(&self, t: f64) -> Element {
        self.scale_c(C64::new(t, 0.0))
    }

    pub fn scale_c(&self, t: C64) -> Element {
        Element::from_block_iter(
            self.algebra.clone(),
            self.blocks.iter().map(|m| m.map(|z| z * t)),
        )
    }

    pub fn trace(&self) -> C64 {
        self.blocks.iter().map(|m| m.trace()).sum()
    }

    /// Frobenius norm over all blocks.
    pub fn norm_fro(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| m.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Operator norm: the largest singular value over all blocks.
    pub fn norm_op(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| {
                SVD::new(m.clone(), false, false)
                    .singular_values
                    .iter()
                    .copied()
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Trace norm: the sum of all singular values over all blocks.
    pub fn trace_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| {
                SVD::new(m.clone(), false, false)
                    .singular_values
                    .iter()
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        self.blocks
            .iter()
            .map(|m| (m - m.adjoint()).norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= tol::scaled(tol::HERMITIAN_REL, self.norm_fro())
    }

    /// `(x + x*) / 2`; used to repair roundoff before spectral calculus.
    pub fn hermitize(&self) -> Element {
        Element::from_block_iter(
            self.algebra.clone(),
            self.blocks
                .iter()
                .map(|m| (m + m.adjoint()).map(|z| z * 0.5)),
        )
    }

    /// Eigenvalues of a hermitian element in ascending order, across blocks.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        self.require_hermitian()?;
        let mut vals = Vec::with_capacity(self.algebra.dim());
        for m in &self.blocks {
            let se = SymmetricEigen::new(hermitize_mat(m));
            vals.extend(se.eigenvalues.iter().copied());
        }
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(vals)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?[0])
    }

    fn require_hermitian(&self) -> Result<()> {
        let residual = self.hermiticity_residual();
        if residual > tol::scaled(tol::HERMITIAN_REL, self.norm_fro()) {
            return Err(Error::NonHermitian { residual });
        }
        Ok(())
    }

    pub fn is_positive(&self) -> bool {
        self.is_hermitian()
            && self
                .hermitian_eigenvalues()
                .map(|v| v[0] >= -tol::scaled(tol::POSITIVE_REL, self.norm_op()))
                .unwrap_or(false)
    }

    pub fn require_positive(&self) -> Result<()> {
        self.require_hermitian()?;
        let min = self.min_eigenvalue()?;
        if min < -tol::scaled(tol::POSITIVE_REL, self.norm_op()) {
            return Err(Error::NotPositive {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    pub fn is_projection(&self) -> bool {
        if !self.is_hermitian() {
            return false;
        }
        let sq = self * self;
        (&sq - self).norm_fro() <= tol::scaled(tol::PROJECTION_REL, self.norm_fro())
    }

    pub fn is_invertible_positive(&self) -> bool {
        self.is_hermitian()
            && self
                .hermitian_eigenvalues()
                .map(|v| v[0] > tol::scaled(tol::INVERTIBLE_REL, self.norm_op()))
                .unwrap_or(false)
    }

    pub fn require_invertible_positive(&self) -> Result<()> {
        self.require_hermitian()?;
        let min = self.min_eigenvalue()?;
        if min <= tol::scaled(tol::INVERTIBLE_REL, self.norm_op()) {
            return Err(Error::NotInvertiblePositive {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    /// Condition number of an invertible positive element.
    pub fn condition_number(&self) -> Result<f64> {
        let vals = self.hermitian_eigenvalues()?;
        let min = vals[0];
        let max = vals[vals.len() - 1];
        if min <= 0.0 {
            return Ok(f64::INFINITY);
        }
        Ok(max / min)
    }

    /// Apply a real function to the spectrum of a hermitian element.
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F) -> Result<Element> {
        self.require_hermitian()?;
        let blocks = self
            .blocks
            .iter()
            .map(|m| {
                let se = SymmetricEigen::new(hermitize_mat(m));
                let u = se.eigenvectors;
                let d = DVector::from_iterator(
                    se.eigenvalues.len(),
                    se.eigenvalues.iter().map(|&l| C64::new(f(l), 0.0)),
                );
                &u * DMatrix::from_diagonal(&d) * u.adjoint()
            })
            .collect();
        Ok(Element {
            algebra: self.algebra.clone(),
            blocks,
        })
    }

    /// Principal square root of a positive element. Eigenvalues at or below
    /// the rank tolerance are clamped to zero before the root: the square
    /// root amplifies eigenvalue noise `ε` to `√ε`, which would contaminate
    /// every trace-norm computed downstream on rank-deficient inputs.
    pub fn sqrt_psd(&self) -> Result<Element> {
        self.require_positive()?;
        let cut = tol::scaled(tol::RANK_REL, self.norm_op());
        self.map_spectrum(|l| if l > cut { l.sqrt() } else { 0.0 })
    }

    /// Inverse on the support: `x·r = r·x = s(x)`, and the true inverse on
    /// invertible positive elements.
    pub fn pseudo_inverse(&self) -> Result<Element> {
        self.require_positive()?;
        let cut = tol::scaled(tol::RANK_REL, self.norm_op());
        self.map_spectrum(|l| if l > cut { 1.0 / l } else { 0.0 })
    }

    /// Inverse of an invertible positive element.
    pub fn inv_positive(&self) -> Result<Element> {
        self.require_invertible_positive()?;
        self.map_spectrum(|l| 1.0 / l)
    }

    /// `x^{-1/2}` of an invertible positive element.
    pub fn inv_sqrt_positive(&self) -> Result<Element> {
        self.require_invertible_positive()?;
        self.map_spectrum(|l| 1.0 / l.sqrt())
    }

    /// Support projection of a positive element: the smallest projection
    /// `s(x)` with `s(x)·x = x`.
    pub fn support(&self) -> Result<Element> {
        self.require_positive()?;
        let cut = tol::scaled(tol::RANK_REL, self.norm_op());
        self.map_spectrum(|l| if l > cut { 1.0 } else { 0.0 })
    }

    /// Numerical rank of a positive element under the rank tolerance.
    pub fn numerical_rank(&self) -> Result<usize> {
        self.require_positive()?;
        let cut = tol::scaled(tol::RANK_REL, self.norm_op());
        Ok(self
            .hermitian_eigenvalues()?
            .iter()
            .filter(|&&l| l > cut)
            .count())
    }

    /// `‖a − b‖_F ≤ tol·(1 + ‖a‖_F)` equality up to scale.
    pub fn approx_eq(&self, other: &Element, rel: f64) -> bool {
        self.algebra == other.algebra
            && (self - other).norm_fro() <= tol::scaled(rel, self.norm_fro())
    }

    pub fn is_zero(&self, rel: f64) -> bool {
        self.norm_fro() <= rel
    }
}

fn hermitize_mat(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).map(|z| z * 0.5)
}

macro_rules! element_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl std::ops::$trait<&Element> for &Element {
            type Output = Element;
            fn $method(self, rhs: &Element) -> Element {
                assert_eq!(self.algebra, rhs.algebra, "algebra mismatch");
                Element::from_block_iter(
                    self.algebra.clone(),
                    self.blocks.iter().zip(rhs.blocks.iter()).map(|(a, b)| a $op b),
                )
            }
        }
        impl std::ops::$trait<Element> for Element {
            type Output = Element;
            fn $method(self, rhs: Element) -> Element {
                (&self).$method(&rhs)
            }
        }
    };
}

element_binop!(Add, add, +);
element_binop!(Sub, sub, -);
element_binop!(Mul, mul, *);

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-1.0)
    }
}

/// Spectral resolution of a hermitian element with clustered eigenvalues.
///
/// The projections are mutually orthogonal, sum to the identity, and
/// `Σ λ_i e_i` reconstructs the source up to the clustering width.
#[derive(Clone, Debug)]
pub struct SpectralResolution {
    eigenvalues: Vec<f64>,
    projections: Vec<Element>,
    source: Element,
}

impl SpectralResolution {
    /// Ascending list of distinct (clustered) eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projections(&self) -> &[Element] {
        &self.projections
    }

    pub fn source(&self) -> &Element {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// The eigenprojection at `value`, if some clustered eigenvalue matches
    /// it within `tol`.
    pub fn projection_at(&self, value: f64, tol: f64) -> Option<&Element> {
        self.eigenvalues
            .iter()
            .position(|&l| (l - value).abs() <= tol)
            .map(|i| &self.projections[i])
    }

    /// `Σ λ_i e_i`.
    pub fn reconstruct(&self) -> Element {
        let mut acc = self.source.algebra().zero();
        for (l, e) in self.eigenvalues.iter().zip(self.projections.iter()) {
            acc = &acc + &e.scale(*l);
        }
        acc
    }
}

/// Default clustering width for a hermitian element.
pub fn default_cluster_tol(x: &Element) -> f64 {
    tol::scaled(tol::CLUSTER_REL, x.norm_op())
}

/// Spectral resolution of a hermitian element.
///
/// Eigenvalues are merged greedily along the sorted list while consecutive
/// gaps stay at or below `cluster_tol`, so any two listed values differ by
/// more than `cluster_tol`.
pub fn spectral_resolution(x: &Element, cluster_tol: f64) -> Result<SpectralResolution> {
    let residual = x.hermiticity_residual();
    if residual > tol::scaled(tol::HERMITIAN_REL, x.norm_fro()) {
        return Err(Error::NonHermitian { residual });
    }

    // (eigenvalue, block, eigenvector)
    let mut pairs: Vec<(f64, usize, DVector<C64>)> = Vec::with_capacity(x.algebra.dim());
    for (b, m) in x.blocks.iter().enumerate() {
        let se = SymmetricEigen::new(hermitize_mat(m));
        for (i, &l) in se.eigenvalues.iter().enumerate() {
            pairs.push((l, b, se.eigenvectors.column(i).into_owned()));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut eigenvalues = Vec::new();
    let mut projections = Vec::new();
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= cluster_tol {
            end += 1;
        }
        let members = &pairs[start..end];
        let value = members.iter().map(|p| p.0).sum::<f64>() / members.len() as f64;
        let mut proj = x.algebra.zero();
        for (_, b, v) in members {
            let vv = v * v.adjoint();
            proj.blocks[*b] += vv;
        }
        eigenvalues.push(value);
        projections.push(proj);
        start = end;
    }

    Ok(SpectralResolution {
        eigenvalues,
        projections,
        source: x.clone(),
    })
}

/// The clustered point spectrum of a hermitian element. Zero is snapped
/// exactly when a cluster lies below the rank tolerance.
pub fn point_spectrum(x: &Element, cluster_tol: f64) -> Result<Vec<f64>> {
    let res = spectral_resolution(x, cluster_tol)?;
    let cut = tol::scaled(tol::RANK_REL, x.norm_op());
    Ok(res
        .eigenvalues()
        .iter()
        .map(|&l| if l.abs() <= cut { 0.0 } else { l })
        .collect())
}
