//! States on `C^n ⊗ C^m`, partial transpose, PPT and edge-state tools.
//!
//! A state is an `mn × mn` Hermitian matrix in Kronecker order: row
//! `a·m + i` belongs to the basis vector `e_a ⊗ e_i` with `a < n` indexing the
//! first (conjugated) factor. The matrix is an `n × n` grid of `m × m` blocks
//! and the partial transpose swaps block `(a, b)` with block `(b, a)`, which
//! sends the projector onto `x ⊗ y` to the projector onto `x̄ ⊗ y`.
//!
//! Flattening an `n × m` matrix row by row gives the same order, so the
//! matrix `x y*` corresponds to the vector `x ⊗ ȳ`.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{shape_error, Error, Result};
use crate::obstruction::coeff;
use crate::solver::{find_pair, SolveOutcome, SolveStatus, SolverConfig};
use crate::tensor::{vec_norm, CMat, CVec, Dim, Subspace, C64};

/// Hermiticity tolerance, relative to `max(1, max |a_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Default relative eigenvalue cutoff for numerical ranks.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    dim: Dim,
    mat: CMat,
}

impl State {
    pub fn new(dim: Dim, mat: CMat) -> Result<Self> {
        let size = dim.mn();
        if mat.shape() != (size, size) {
            return Err(shape_error((size, size), mat.shape()));
        }
        let scale = mat.iter().map(|z| z.norm()).fold(1.0, f64::max);
        let dev = (&mat - mat.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if dev > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian(alloc::format!("{dev:e}")));
        }
        Ok(Self { dim, mat })
    }

    /// Rank-one projector onto the unit vector `x ⊗ y / ‖x ⊗ y‖`.
    pub fn product_projector(x: &CVec, y: &CVec) -> Result<Self> {
        let dim = Dim::new(y.len(), x.len())?;
        let v = product_vector(x, y)?;
        let v = &v / C64::new(vec_norm(&v), 0.0);
        Ok(Self { dim, mat: &v * v.adjoint() })
    }

    /// `Σ w_i |x_i ⊗ y_i⟩⟨x_i ⊗ y_i|` with nonnegative weights.
    pub fn separable_mixture(dim: Dim, terms: &[(f64, CVec, CVec)]) -> Result<Self> {
        let size = dim.mn();
        let mut mat = CMat::zeros(size, size);
        for (w, x, y) in terms {
            if *w < 0.0 {
                return Err(Error::InvalidArgument("mixture weights must be nonnegative".into()));
            }
            let p = Self::product_projector(x, y)?;
            if p.dim != dim {
                return Err(shape_error((dim.n, dim.m), (p.dim.n, p.dim.m)));
            }
            mat += p.mat * C64::new(*w, 0.0);
        }
        Ok(Self { dim, mat })
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }
}

/// `x ⊗ y` in Kronecker order.
pub fn product_vector(x: &CVec, y: &CVec) -> Result<CVec> {
    if vec_norm(x) == 0.0 || vec_norm(y) == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(x.kronecker(y))
}

/// Row-major reshape of a length-`mn` vector into an `n × m` matrix.
pub fn vector_to_matrix(v: &CVec, dim: Dim) -> Result<CMat> {
    if v.len() != dim.mn() {
        return Err(shape_error((dim.mn(), 1), (v.len(), 1)));
    }
    Ok(CMat::from_fn(dim.n, dim.m, |a, i| v[a * dim.m + i]))
}

/// Block-swapping partial transpose. An involution that preserves trace and
/// Hermiticity.
pub fn partial_transpose(state: &State) -> State {
    let Dim { m, n } = state.dim;
    let a = &state.mat;
    let mat = CMat::from_fn(m * n, m * n, |r, c| {
        let (ba, i) = (r / m, r % m);
        let (bb, j) = (c / m, c % m);
        a[(bb * m + i, ba * m + j)]
    });
    State { dim: state.dim, mat }
}

fn eigen(state: &State) -> (Vec<f64>, CMat) {
    crate::linalg::hermitian_eigen(&state.mat)
}

/// Both `A` and its partial transpose have smallest eigenvalue `≥ −tol`.
pub fn is_ppt(state: &State, tol: f64) -> bool {
    let min_eig = |s: &State| eigen(s).0.first().copied().unwrap_or(0.0);
    min_eig(state) >= -tol && min_eig(&partial_transpose(state)) >= -tol
}

/// `(rank A, rank A^τ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateType {
    pub p: usize,
    pub q: usize,
}

fn numerical_rank(values: &[f64], rank_tol: f64) -> usize {
    let top = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    values.iter().filter(|v| v.abs() > rank_tol * top).count()
}

/// Numerical ranks of `A` and `A^τ` with relative cutoff `rank_tol`.
pub fn state_type(state: &State, rank_tol: f64) -> StateType {
    StateType {
        p: numerical_rank(&eigen(state).0, rank_tol),
        q: numerical_rank(&eigen(&partial_transpose(state)).0, rank_tol),
    }
}

/// Range of a state as a [`Subspace`] of `n × m` matrices, its complement
/// spanned by the kernel eigenvectors.
pub fn range_subspace(state: &State, rank_tol: f64) -> Result<Subspace> {
    let (values, vectors) = eigen(state);
    let top = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut kernel = Vec::new();
    for (idx, v) in values.iter().enumerate() {
        if v.abs() <= rank_tol * top || top == 0.0 {
            kernel.push(vector_to_matrix(&vectors.column(idx).into_owned(), state.dim)?);
        }
    }
    Subspace::from_complement_spanners(state.dim, &kernel)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeVerdict {
    /// A product vector in the range has its partial conjugate in the range
    /// of the partial transpose.
    NotEdge,
    /// The search found no such vector. This does not prove anything.
    ConsistentWithEdge,
}

impl EdgeVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeVerdict::NotEdge => "not an edge state, witness attached",
            EdgeVerdict::ConsistentWithEdge => "consistent with edge state (heuristic)",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeReport {
    pub state_type: StateType,
    pub rank_tol: f64,
    pub outcome: SolveOutcome,
    pub verdict: EdgeVerdict,
    /// The product vector `x ⊗ ȳ ∈ R(A)` behind a matrix witness `(x, y)`.
    pub witness_vector: Option<CVec>,
}

/// Searches for a product vector in `R(A)` whose partial conjugate lies in
/// `R(A^τ)`. The input must be PPT within `ppt_tol`.
pub fn edge_heuristic_check(
    state: &State,
    config: &SolverConfig,
    rank_tol: f64,
    ppt_tol: f64,
) -> Result<EdgeReport> {
    if !is_ppt(state, ppt_tol) {
        return Err(Error::NotPpt);
    }
    let d = range_subspace(state, rank_tol)?;
    let e = range_subspace(&partial_transpose(state), rank_tol)?;
    let outcome = find_pair(&d, &e, config)?;
    let (verdict, witness_vector) = match outcome.status {
        SolveStatus::Found => {
            let v = product_vector(&outcome.best.x, &outcome.best.y.conjugate())?;
            (EdgeVerdict::NotEdge, Some(v))
        }
        SolveStatus::NotFound => (EdgeVerdict::ConsistentWithEdge, None),
    };
    Ok(EdgeReport {
        state_type: state_type(state, rank_tol),
        rank_tol,
        outcome,
        verdict,
        witness_vector,
    })
}

/// Types `(p, q)` not excluded for an `m ⊗ n` edge state by
///
/// * `p, q ≥ max(m, n) + 1` (lower ranks force separability),
/// * `p + q ≤ 2mn − m − n + 2`,
/// * on equality, `C^{k,ℓ}_{m−1} = 0` with `k = mn − p`, `ℓ = mn − q`.
///
/// No other constraint is applied.
pub fn admissible_types(m: usize, n: usize) -> Result<Vec<StateType>> {
    if m < 2 || n < 2 {
        return Err(Error::InvalidArgument(alloc::format!(
            "type tables need m, n ≥ 2 (got {m}, {n})"
        )));
    }
    let mn = m * n;
    let bound = 2 * mn + 2 - m - n;
    let low = m.max(n) + 1;
    let mut out = Vec::new();
    for p in low..=mn {
        for q in low..=mn {
            if p + q > bound {
                continue;
            }
            if p + q == bound {
                let c = coeff(mn - p, mn - q, m - 1)?;
                if c != num_bigint::BigInt::from(0) {
                    continue;
                }
            }
            out.push(StateType { p, q });
        }
    }
    Ok(out)
}

/// Edge-state types listed in the literature for `2 ⊗ 4` and `3 ⊗ 3`, closed
/// under `(p, q) ↔ (q, p)`.
pub fn published_types(m: usize, n: usize) -> Option<Vec<StateType>> {
    let half: &[(usize, usize)] = match (m.min(n), m.max(n)) {
        (2, 4) => &[(5, 5), (5, 6), (6, 6)],
        (3, 3) => &[(4, 4), (5, 5), (5, 6), (5, 7), (6, 6), (5, 8), (6, 7), (6, 8)],
        _ => return None,
    };
    let mut out: Vec<StateType> = half
        .iter()
        .flat_map(|&(p, q)| [StateType { p, q }, StateType { p: q, q: p }])
        .collect();
    out.sort();
    out.dedup();
    Some(out)
}

/// `Σ_V V X V* + Σ_W W X^T W*`.
pub fn apply_decomposable(v_list: &[CMat], w_list: &[CMat], x: &CMat) -> Result<CMat> {
    let (rows, cols) = x.shape();
    let mut out: Option<CMat> = None;
    let mut add = |term: CMat| match out.as_mut() {
        Some(acc) if acc.shape() == term.shape() => {
            *acc += term;
            Ok(())
        }
        Some(acc) => Err(shape_error(acc.shape(), term.shape())),
        None => {
            out = Some(term);
            Ok(())
        }
    };
    for v in v_list {
        if v.ncols() != rows {
            return Err(shape_error((v.nrows(), rows), v.shape()));
        }
        add(v * x * v.adjoint())?;
    }
    let xt = x.transpose();
    for w in w_list {
        if w.ncols() != cols {
            return Err(shape_error((w.nrows(), cols), w.shape()));
        }
        add(w * &xt * w.adjoint())?;
    }
    Ok(out.unwrap_or_else(|| CMat::zeros(rows, cols)))
}

/// Integer version of [`apply_decomposable`] for real integer matrices, where
/// the adjoint is the transpose.
pub fn apply_decomposable_exact(
    v_list: &[DMatrix<i64>],
    w_list: &[DMatrix<i64>],
    x: &DMatrix<i64>,
) -> Result<DMatrix<i64>> {
    let n = x.nrows();
    if x.ncols() != n {
        return Err(shape_error((n, n), x.shape()));
    }
    let mut acc = DMatrix::<i64>::zeros(n, n);
    for v in v_list {
        if v.shape() != (n, n) {
            return Err(shape_error((n, n), v.shape()));
        }
        acc += v * x * v.transpose();
    }
    let xt = x.transpose();
    for w in w_list {
        if w.shape() != (n, n) {
            return Err(shape_error((n, n), w.shape()));
        }
        acc += w * &xt * w.transpose();
    }
    Ok(acc)
}

/// `Φ(e_ij)` for all nine matrix units, where `Φ` is the decomposable map
/// built from the integer complement spanners of the 3 × 3 pair: `φ_V` for
/// `V ∈ D^⊥` and `φ^W` for `W ∈ E^⊥`.
pub fn trace_map_images() -> Vec<((usize, usize), DMatrix<i64>)> {
    let (vs, ws) = crate::constructions::pair_3x3_spanners();
    let mut out = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            let mut unit = DMatrix::<i64>::zeros(3, 3);
            unit[(i, j)] = 1;
            let image = apply_decomposable_exact(&vs, &ws, &unit).expect("3x3 shapes");
            out.push(((i, j), image));
        }
    }
    out
}

/// `true` iff `Φ(e_ij) = δ_ij I` for all nine units, i.e. `Φ(X) = tr(X) I`.
pub fn trace_map_certificate() -> bool {
    let id = DMatrix::<i64>::identity(3, 3);
    trace_map_images().iter().all(|((i, j), img)| {
        if i == j {
            *img == id
        } else {
            img.iter().all(|&v| v == 0)
        }
    })
}
