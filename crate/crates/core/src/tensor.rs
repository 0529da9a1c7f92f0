//! Complex linear algebra on `C^n ⊗ C^m`.
//!
//! A product vector `x ⊗ y` with `x ∈ C^n`, `y ∈ C^m` is represented by the
//! `n × m` matrix `x y*`. Its partial conjugate `x̄ ⊗ y` becomes `x̄ y*`, so
//! conjugation always acts on the first factor. Subspaces are described by an
//! orthonormal basis of their orthogonal complement in the Hilbert–Schmidt
//! geometry `⟨A, B⟩ = tr(A* B)`.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{shape_error, Error, Result};
use crate::linalg::sqrt;

pub type C64 = Complex<f64>;
/// Complex column vector.
pub type CVec = DVector<C64>;
/// Dense complex matrix.
pub type CMat = DMatrix<C64>;

/// Tolerance on `⟨P_i, P_j⟩ = δ_ij` for stored complement bases.
pub const ORTHONORMAL_TOL: f64 = 1e-12;
/// Relative cutoff below which a Gram–Schmidt residual counts as dependent.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Dimensions of the ambient space `C^n ⊗ C^m`, viewed as `n × m` matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dim {
    /// Dimension of the second factor (columns).
    pub m: usize,
    /// Dimension of the first factor (rows, the conjugated side).
    pub n: usize,
}

impl Dim {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(alloc::format!(
                "dimensions must be positive (m={m}, n={n})"
            )));
        }
        Ok(Self { m, n })
    }

    /// Ambient complex dimension `m·n`.
    pub fn mn(&self) -> usize {
        self.m * self.n
    }

    pub(crate) fn check_matrix(&self, a: &CMat) -> Result<()> {
        if a.shape() != (self.n, self.m) {
            return Err(shape_error((self.n, self.m), a.shape()));
        }
        Ok(())
    }
}

/// Hilbert–Schmidt pairing `tr(A* B)`, conjugate-linear in `a`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(shape_error(a.shape(), b.shape()));
    }
    Ok(a.iter().zip(b.iter()).map(|(u, v)| u.conj() * v).sum())
}

/// Frobenius norm, i.e. `sqrt(⟨A, A⟩)`.
pub fn hs_norm(a: &CMat) -> f64 {
    sqrt(a.iter().map(|z| z.norm_sqr()).sum())
}

pub(crate) fn vec_norm(x: &CVec) -> f64 {
    sqrt(x.iter().map(|z| z.norm_sqr()).sum())
}

fn check_nonzero(x: &CVec) -> Result<()> {
    if x.is_empty() || x.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// The matrix avatar `x y*` of the product vector `x ⊗ y`.
pub fn product_matrix(x: &CVec, y: &CVec) -> Result<CMat> {
    check_nonzero(x)?;
    check_nonzero(y)?;
    Ok(x * y.adjoint())
}

/// The matrix avatar `x̄ y*` of the partial conjugate `x̄ ⊗ y`.
pub fn partial_conjugate_matrix(x: &CVec, y: &CVec) -> Result<CMat> {
    product_matrix(&x.conjugate(), y)
}

/// Gram–Schmidt with pivoting.
///
/// At each step the remaining spanner with the largest residual norm is
/// normalized and projected out of the others (twice, for stability).
/// Spanners whose residual falls below `RANK_CUTOFF` times the largest input
/// norm are dropped, so the output length is the numerical rank of the span.
pub fn orthonormalize(spanners: &[CMat]) -> Result<Vec<CMat>> {
    let Some(first) = spanners.first() else {
        return Ok(Vec::new());
    };
    for s in spanners {
        if s.shape() != first.shape() {
            return Err(shape_error(first.shape(), s.shape()));
        }
    }
    let scale = spanners.iter().map(hs_norm).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(Vec::new());
    }
    let cutoff = RANK_CUTOFF * scale;
    let mut rest: Vec<CMat> = spanners.to_vec();
    let mut basis: Vec<CMat> = Vec::new();
    while !rest.is_empty() {
        let (pivot, norm) = rest
            .iter()
            .map(hs_norm)
            .enumerate()
            .fold((0, -1.0), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        if norm <= cutoff {
            break;
        }
        let q = rest.swap_remove(pivot) / C64::new(norm, 0.0);
        for r in rest.iter_mut() {
            for _ in 0..2 {
                let c = hs_inner(&q, r)?;
                *r -= &q * c;
            }
        }
        basis.push(q);
    }
    Ok(basis)
}

/// A linear subspace of `n × m` complex matrices, stored by an orthonormal
/// basis of its orthogonal complement.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    dim: Dim,
    complement: Vec<CMat>,
}

impl Subspace {
    /// The whole ambient space (codimension 0).
    pub fn whole(dim: Dim) -> Self {
        Self { dim, complement: Vec::new() }
    }

    /// `{spanners}^⊥`. The spanners need not be independent or normalized.
    pub fn from_complement_spanners(dim: Dim, spanners: &[CMat]) -> Result<Self> {
        for s in spanners {
            dim.check_matrix(s)?;
        }
        let complement = orthonormalize(spanners)?;
        Ok(Self { dim, complement })
    }

    /// Random subspace of the given codimension.
    ///
    /// The complement is spanned by independent standard complex Gaussian
    /// matrices, so the law is invariant under unitaries of the ambient space.
    pub fn random(dim: Dim, codim: usize, seed: u64) -> Result<Self> {
        if codim > dim.mn() {
            return Err(Error::OutOfRange(alloc::format!(
                "codimension {codim} exceeds ambient dimension {}",
                dim.mn()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut spanners: Vec<CMat> = Vec::with_capacity(codim);
        let mut complement = Vec::new();
        // A Gaussian draw is rank deficient with probability zero; keep drawing
        // until the target rank is reached anyway.
        while complement.len() < codim {
            spanners.push(gaussian_matrix(&mut rng, dim.n, dim.m));
            complement = orthonormalize(&spanners)?;
        }
        Ok(Self { dim, complement })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.complement.len()
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> &[CMat] {
        &self.complement
    }

    /// Norm of the component of `a` in the complement, i.e. the distance from
    /// `a` to the subspace.
    pub fn distance(&self, a: &CMat) -> Result<f64> {
        self.dim.check_matrix(a)?;
        let mut acc = 0.0;
        for p in &self.complement {
            acc += hs_inner(p, a)?.norm_sqr();
        }
        Ok(sqrt(acc))
    }

    /// Largest deviation of the complement Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, p) in self.complement.iter().enumerate() {
            for (j, q) in self.complement.iter().enumerate() {
                let g = hs_inner(p, q).unwrap_or(C64::new(f64::NAN, 0.0));
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// Shorthand for [`Subspace::random`].
pub fn random_subspace(dim: Dim, codim: usize, seed: u64) -> Result<Subspace> {
    Subspace::random(dim, codim, seed)
}

/// Standard complex Gaussian entry: real and imaginary parts `N(0, 1/2)`.
pub(crate) fn gaussian_c64<R: rand::Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

pub(crate) fn gaussian_matrix<R: rand::Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMat {
    // Fill row-major so the draw order matches the serialized layout.
    let mut a = CMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            a[(i, j)] = gaussian_c64(rng);
        }
    }
    a
}

/// Uniformly distributed unit vector in `C^len`.
pub fn random_unit_vector<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> CVec {
    loop {
        let v = CVec::from_fn(len, |_, _| gaussian_c64(rng));
        let nrm = vec_norm(&v);
        if nrm > 1e-300 {
            return v / C64::new(nrm, 0.0);
        }
    }
}

/// Matrix unit `e_{i,j}` (zero-based) of the given shape.
pub fn matrix_unit(rows: usize, cols: usize, i: usize, j: usize) -> CMat {
    let mut e = CMat::zeros(rows, cols);
    e[(i, j)] = C64::new(1.0, 0.0);
    e
}

/// Standard basis vector `e_i` (zero-based).
pub fn basis_vector(len: usize, i: usize) -> CVec {
    let mut e = CVec::zeros(len);
    e[i] = C64::new(1.0, 0.0);
    e
}
