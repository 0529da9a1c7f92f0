//! Numerical search for a product vector `x ⊗ y ∈ D` with `x̄ ⊗ y ∈ E`.
//!
//! With complement bases `{P_i}` of `D^⊥` and `{Q_j}` of `E^⊥`, membership
//! reads `⟨P_i, x y*⟩ = (P_i y)* x = 0` and `⟨Q_j, x̄ y*⟩ = conj((Q_j y)^T x) = 0`.
//! For fixed `y` both families are linear in `x`, and for fixed `x` they are
//! linear in `y` (`x* P_i y = 0`, `x^T Q_j y = 0`). The search minimizes
//! `σ_min(M(y))²` over unit `y` by alternating between the two kernel
//! problems, restarting from seeded random points. Once `σ` is small a damped
//! Gauss-Newton step on the joint system in `(x, y)` takes over, interleaved
//! with sweeps during polishing.
//!
//! `NotFound` only means the search failed. It is never a proof that no
//! witness exists.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::smallest_right_singular;
use crate::tensor::{hs_inner, partial_conjugate_matrix, product_matrix, random_unit_vector, vec_norm};
use crate::tensor::{CMat, CVec, Subspace, C64};

/// Unit-norm tolerance for solver inputs.
pub const UNIT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Independent random starts.
    pub restarts: usize,
    /// Alternating sweeps per start.
    pub max_iters: usize,
    /// A pair with residual below this is reported as found.
    pub tol_residual: f64,
    /// `σ_min(M(y))` below this counts as a kernel.
    pub tol_sigma: f64,
    pub seed: u64,
    /// A start is abandoned when `σ_min` shrinks by less than `stall_ratio`
    /// over `stall_window` sweeps.
    pub stall_window: usize,
    pub stall_ratio: f64,
    /// Alternating passes after a kernel has been detected.
    pub polish_passes: usize,
    /// Residual at which polishing stops early.
    pub polish_target: f64,
    /// `σ_min` below which sweeps are followed by a joint Gauss–Newton step.
    pub newton_switch: f64,
    /// Step halvings tried before a Gauss–Newton step is rejected.
    pub max_step_halvings: usize,
    /// Keep the per-sweep `σ_min` history of every start.
    pub trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_iters: 2000,
            tol_residual: 1e-8,
            tol_sigma: 1e-6,
            seed: 0,
            stall_window: 50,
            stall_ratio: 0.999,
            polish_passes: 50,
            polish_target: 1e-14,
            newton_switch: 1e-2,
            max_step_halvings: 8,
            trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 || self.stall_window == 0 {
            return Err(Error::InvalidArgument(
                "restarts, max_iters and stall_window must be positive".into(),
            ));
        }
        if !(self.tol_residual > 0.0 && self.tol_sigma > 0.0) {
            return Err(Error::InvalidArgument("tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Candidate witness with unit `x ∈ C^n`, unit `y ∈ C^m` and its residual.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductPair {
    pub x: CVec,
    pub y: CVec,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveStatus {
    Found,
    NotFound,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveStatus::Found => "FOUND",
            SolveStatus::NotFound => "NOT_FOUND",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveStats {
    pub restarts_used: usize,
    pub iterations: usize,
    /// Final residual of each start, in start order.
    pub restart_best: Vec<f64>,
    /// Per-start `σ_min` histories; empty unless tracing.
    pub traces: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOutcome {
    pub status: SolveStatus,
    pub best: ProductPair,
    pub stats: SolveStats,
}

fn check_same_dim(d: &Subspace, e: &Subspace) -> Result<()> {
    if d.dim() != e.dim() {
        return Err(Error::Dimension {
            expected: alloc::format!("{:?}", d.dim()),
            got: alloc::format!("{:?}", e.dim()),
        });
    }
    Ok(())
}

fn check_vectors(d: &Subspace, x: &CVec, y: &CVec) -> Result<()> {
    let dim = d.dim();
    if x.len() != dim.n || y.len() != dim.m {
        return Err(Error::Dimension {
            expected: alloc::format!("x in C^{}, y in C^{}", dim.n, dim.m),
            got: alloc::format!("x in C^{}, y in C^{}", x.len(), y.len()),
        });
    }
    check_unit(x)?;
    check_unit(y)
}

fn check_y_len(d: &Subspace, y: &CVec) -> Result<()> {
    if y.len() != d.dim().m {
        return Err(Error::Dimension {
            expected: alloc::format!("y in C^{}", d.dim().m),
            got: alloc::format!("y in C^{}", y.len()),
        });
    }
    Ok(())
}

fn check_unit(v: &CVec) -> Result<()> {
    let nrm = vec_norm(v);
    if (nrm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnit(alloc::format!("{nrm}")));
    }
    Ok(())
}

/// Complex `(k + ℓ) × n` system in `x`: rows `(P_i y)*` then `(Q_j y)^T`.
fn x_system(d: &Subspace, e: &Subspace, y: &CVec) -> CMat {
    let n = d.dim().n;
    let rows = d.codim() + e.codim();
    let mut a = CMat::zeros(rows, n);
    for (r, p) in d.complement().iter().enumerate() {
        let py = p * y;
        for c in 0..n {
            a[(r, c)] = py[c].conj();
        }
    }
    for (r, q) in e.complement().iter().enumerate() {
        let qy = q * y;
        for c in 0..n {
            a[(d.codim() + r, c)] = qy[c];
        }
    }
    a
}

/// Complex `(k + ℓ) × m` system in `y`: rows `x* P_i` then `x^T Q_j`.
fn y_system(d: &Subspace, e: &Subspace, x: &CVec) -> CMat {
    let m = d.dim().m;
    let rows = d.codim() + e.codim();
    let mut a = CMat::zeros(rows, m);
    for (r, p) in d.complement().iter().enumerate() {
        let row = x.adjoint() * p;
        for c in 0..m {
            a[(r, c)] = row[c];
        }
    }
    for (r, q) in e.complement().iter().enumerate() {
        let row = x.transpose() * q;
        for c in 0..m {
            a[(d.codim() + r, c)] = row[c];
        }
    }
    a
}

/// `sqrt(Σ_i |⟨P_i, x y*⟩|² + Σ_j |⟨Q_j, x̄ y*⟩|²)`; zero iff `(x, y)` is a
/// witness. Inputs must be unit vectors.
pub fn residual(d: &Subspace, e: &Subspace, x: &CVec, y: &CVec) -> Result<f64> {
    check_same_dim(d, e)?;
    check_vectors(d, x, y)?;
    Ok(raw_residual(d, e, x, y))
}

fn raw_residual(d: &Subspace, e: &Subspace, x: &CVec, y: &CVec) -> f64 {
    (x_system(d, e, y) * x).norm()
}

/// Realification of the fixed-`y` system: a `2(k + ℓ) × 2n` real matrix `M`
/// with `M · (Re x; Im x) = 0` exactly when `(x, y)` is a witness.
///
/// Constraint `r` contributes row `2r` (real part) and row `2r + 1`
/// (imaginary part) of the complex-linear form `c_r · x`.
pub fn constraint_matrix_for_y(d: &Subspace, e: &Subspace, y: &CVec) -> Result<DMatrix<f64>> {
    check_same_dim(d, e)?;
    check_y_len(d, y)?;
    let a = x_system(d, e, y);
    let n = a.ncols();
    let mut real = DMatrix::zeros(2 * a.nrows(), 2 * n);
    for r in 0..a.nrows() {
        for c in 0..n {
            let z = a[(r, c)];
            real[(2 * r, c)] = z.re;
            real[(2 * r, n + c)] = -z.im;
            real[(2 * r + 1, c)] = z.im;
            real[(2 * r + 1, n + c)] = z.re;
        }
    }
    Ok(real)
}

fn normalized(v: CVec) -> CVec {
    let nrm = vec_norm(&v);
    v / C64::new(nrm, 0.0)
}

/// Unit `x` in the kernel of the fixed-`y` system, if `σ_min < tol_sigma`.
pub fn solve_fixed_y(d: &Subspace, e: &Subspace, y: &CVec, tol_sigma: f64) -> Result<Option<CVec>> {
    check_same_dim(d, e)?;
    check_y_len(d, y)?;
    check_unit(y)?;
    let (sigma, x) = smallest_right_singular(&x_system(d, e, y));
    Ok((sigma < tol_sigma).then(|| normalized(x)))
}

/// Unit `y` minimizing the fixed-`x` residual.
fn best_y(d: &Subspace, e: &Subspace, x: &CVec) -> CVec {
    normalized(smallest_right_singular(&y_system(d, e, x)).1)
}

fn best_x(d: &Subspace, e: &Subspace, y: &CVec) -> (f64, CVec) {
    let (sigma, x) = smallest_right_singular(&x_system(d, e, y));
    (sigma, normalized(x))
}

/// Real Jacobian of the stacked constraint values with respect to
/// `(Re x, Im x, Re y, Im y)`, together with the real residual vector.
///
/// D-rows `y* P_i* x` are linear in `x` and antilinear in `y`; E-rows
/// `x^T Q_j y` are linear in both.
fn joint_jacobian(d: &Subspace, e: &Subspace, x: &CVec, y: &CVec) -> (DMatrix<f64>, nalgebra::DVector<f64>) {
    let (n, m) = (x.len(), y.len());
    let rows = d.codim() + e.codim();
    let mut jac = DMatrix::zeros(2 * rows, 2 * (n + m));
    let mut val = nalgebra::DVector::zeros(2 * rows);
    let linear = |jac: &mut DMatrix<f64>, r: usize, offset: usize, len: usize, a: &CVec| {
        for c in 0..len {
            jac[(2 * r, offset + c)] = a[c].re;
            jac[(2 * r, offset + len + c)] = -a[c].im;
            jac[(2 * r + 1, offset + c)] = a[c].im;
            jac[(2 * r + 1, offset + len + c)] = a[c].re;
        }
    };
    for (r, p) in d.complement().iter().enumerate() {
        let a = (p * y).conjugate();
        linear(&mut jac, r, 0, n, &a);
        let b = p.adjoint() * x;
        for c in 0..m {
            jac[(2 * r, 2 * n + c)] = b[c].re;
            jac[(2 * r, 2 * n + m + c)] = b[c].im;
            jac[(2 * r + 1, 2 * n + c)] = b[c].im;
            jac[(2 * r + 1, 2 * n + m + c)] = -b[c].re;
        }
        let f = a.dot(x);
        val[2 * r] = f.re;
        val[2 * r + 1] = f.im;
    }
    for (j, q) in e.complement().iter().enumerate() {
        let r = d.codim() + j;
        let a = q * y;
        linear(&mut jac, r, 0, n, &a);
        let a_y = q.transpose() * x;
        linear(&mut jac, r, 2 * n, m, &a_y);
        let f = a.dot(x);
        val[2 * r] = f.re;
        val[2 * r + 1] = f.im;
    }
    (jac, val)
}

/// Damped minimum-norm Gauss–Newton step on the joint system, followed by
/// renormalization. Returns the improved pair, if any.
fn gauss_newton_step(
    d: &Subspace,
    e: &Subspace,
    x: &CVec,
    y: &CVec,
    current: f64,
    config: &SolverConfig,
) -> Option<(CVec, CVec, f64)> {
    let (n, m) = (x.len(), y.len());
    let (jac, val) = joint_jacobian(d, e, x, y);
    if jac.nrows() == 0 {
        return None;
    }
    let svd = jac.svd(true, true);
    let cutoff = 1e-12 * svd.singular_values.max();
    let step = svd.solve(&(-val), cutoff).ok()?;
    let mut scale = 1.0;
    for _ in 0..=config.max_step_halvings {
        let dx = CVec::from_fn(n, |c, _| C64::new(step[c], step[n + c]) * scale);
        let dy = CVec::from_fn(m, |c, _| C64::new(step[2 * n + c], step[2 * n + m + c]) * scale);
        let (xn, yn) = (x + dx, y + dy);
        if vec_norm(&xn) > 0.0 && vec_norm(&yn) > 0.0 {
            let (xn, yn) = (normalized(xn), normalized(yn));
            let r = raw_residual(d, e, &xn, &yn);
            if r < current {
                return Some((xn, yn, r));
            }
        }
        scale *= 0.5;
    }
    None
}

struct RestartResult {
    pair: ProductPair,
    iterations: usize,
    trace: Vec<f64>,
}

fn run_restart(d: &Subspace, e: &Subspace, config: &SolverConfig, index: usize) -> RestartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index as u64);
    let mut y = random_unit_vector(&mut rng, d.dim().m);
    let (mut sigma, mut x) = best_x(d, e, &y);
    let mut trace = Vec::new();
    if config.trace {
        trace.push(sigma);
    }
    let mut iterations = 0;
    let mut window_start = sigma;
    while sigma >= config.tol_sigma && iterations < config.max_iters {
        y = best_y(d, e, &x);
        (sigma, x) = best_x(d, e, &y);
        if sigma < config.newton_switch {
            if let Some((_, yn, _)) = gauss_newton_step(d, e, &x, &y, sigma, config) {
                y = yn;
                (sigma, x) = best_x(d, e, &y);
            }
        }
        iterations += 1;
        if config.trace {
            trace.push(sigma);
        }
        if iterations % config.stall_window == 0 {
            if sigma > config.stall_ratio * window_start {
                break;
            }
            window_start = sigma;
        }
    }
    let mut res = raw_residual(d, e, &x, &y);
    if sigma < config.tol_sigma {
        for _ in 0..config.polish_passes {
            if res < config.polish_target {
                break;
            }
            let y_next = best_y(d, e, &x);
            let (_, x_next) = best_x(d, e, &y_next);
            let mut next = (x_next, y_next);
            let mut r_next = raw_residual(d, e, &next.0, &next.1);
            if let Some((xn, yn, r)) = gauss_newton_step(d, e, &next.0, &next.1, r_next, config) {
                next = (xn, yn);
                r_next = r;
            }
            if r_next >= res {
                break;
            }
            ((x, y), res) = (next, r_next);
        }
    }
    RestartResult { pair: ProductPair { x, y, residual: res }, iterations, trace }
}

/// Multi-start search for a witness.
///
/// Starts run in order and the search stops at the first start whose residual
/// is below `tol_residual`. The reported pair has the smallest residual seen,
/// ties going to the earliest start. The outcome is a deterministic function
/// of `(d, e, config)`.
pub fn find_pair(d: &Subspace, e: &Subspace, config: &SolverConfig) -> Result<SolveOutcome> {
    check_same_dim(d, e)?;
    config.validate()?;
    let mut stats = SolveStats::default();
    let mut best: Option<ProductPair> = None;
    for index in 0..config.restarts {
        let run = run_restart(d, e, config, index);
        stats.restarts_used += 1;
        stats.iterations += run.iterations;
        stats.restart_best.push(run.pair.residual);
        if config.trace {
            stats.traces.push(run.trace);
        }
        if best.as_ref().map_or(true, |b| run.pair.residual < b.residual) {
            best = Some(run.pair);
        }
        if best.as_ref().is_some_and(|b| b.residual < config.tol_residual) {
            break;
        }
    }
    let best = best.expect("at least one restart");
    let status = if best.residual < config.tol_residual {
        SolveStatus::Found
    } else {
        SolveStatus::NotFound
    };
    Ok(SolveOutcome { status, best, stats })
}

/// Independent recheck of a candidate pair straight from the complement
/// spanners: `true` iff the recomputed residual is below `tol`.
pub fn verify_pair(d: &Subspace, e: &Subspace, pair: &ProductPair, tol: f64) -> bool {
    if check_same_dim(d, e).is_err() || check_vectors(d, &pair.x, &pair.y).is_err() {
        return false;
    }
    let (Ok(xy), Ok(xbar_y)) = (product_matrix(&pair.x, &pair.y), partial_conjugate_matrix(&pair.x, &pair.y))
    else {
        return false;
    };
    let mut acc = 0.0;
    for p in d.complement() {
        acc += hs_inner(p, &xy).map_or(f64::INFINITY, |z| z.norm_sqr());
    }
    for q in e.complement() {
        acc += hs_inner(q, &xbar_y).map_or(f64::INFINITY, |z| z.norm_sqr());
    }
    crate::linalg::sqrt(acc) < tol
}
