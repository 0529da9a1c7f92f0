//! Explicit subspace pairs.
//!
//! Catalogue of pairs `(D, E)` for which no product vector `x ⊗ y ∈ D` has
//! `x̄ ⊗ y ∈ E`, each carrying the two conditions that cannot hold together,
//! plus the recipe that builds a witness when `E^⊥` is spanned by a rank-one
//! matrix.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::sqrt;
use crate::solver::{residual, ProductPair};
use crate::tensor::{basis_vector, partial_conjugate_matrix, product_matrix, vec_norm};
use crate::tensor::{CMat, CVec, Dim, Subspace, C64};

/// Catalogue names accepted by [`example`].
pub const CATALOGUE: [&str; 3] = ["ex-2x2-extreme", "ex-2x2k", "ex-3x3"];

/// A quantity that vanishes exactly when one membership condition holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Defect {
    /// `|y* x|`; zero iff `x ⊥ y`.
    Orthogonality,
    /// `(Σ_{i<j} |x_i y_j − x_j y_i|²)^{1/2}`; zero iff `x ∥ y`.
    Parallelism,
    /// Distance from `x y*` to `D`.
    DMembership,
    /// Distance from `x̄ y*` to `E`.
    EMembership,
}

impl Defect {
    pub fn name(&self) -> &'static str {
        match self {
            Defect::Orthogonality => "x orthogonal to y",
            Defect::Parallelism => "x parallel to y",
            Defect::DMembership => "x y* in D",
            Defect::EMembership => "conj(x) y* in E",
        }
    }

    pub fn eval(&self, pair: &NamedPair, x: &CVec, y: &CVec) -> Result<f64> {
        match self {
            Defect::Orthogonality => Ok(y.dotc(x).norm()),
            Defect::Parallelism => {
                if x.len() != y.len() {
                    return Err(Error::Dimension {
                        expected: alloc::format!("{}", x.len()),
                        got: alloc::format!("{}", y.len()),
                    });
                }
                let mut acc = 0.0;
                for i in 0..x.len() {
                    for j in i + 1..x.len() {
                        acc += (x[i] * y[j] - x[j] * y[i]).norm_sqr();
                    }
                }
                Ok(sqrt(acc))
            }
            Defect::DMembership => pair.d.distance(&product_matrix(x, y)?),
            Defect::EMembership => pair.e.distance(&partial_conjugate_matrix(x, y)?),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// No witness exists: the two defects can never vanish together.
    NoneAnalytic(Defect, Defect),
    /// A complement spanner has rank one; [`rank_one_recipe`] builds a witness.
    Recipe,
    /// Nothing is claimed.
    Unknown,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedPair {
    pub name: String,
    pub d: Subspace,
    pub e: Subspace,
    pub certificate: Certificate,
}

impl NamedPair {
    pub fn codims(&self) -> (usize, usize) {
        (self.d.codim(), self.e.codim())
    }

    /// Normalized complement spanners of a pair with codimensions `(1, 1)`.
    fn single_spanners(&self) -> Option<(&CMat, &CMat)> {
        match (self.d.complement(), self.e.complement()) {
            ([p], [q]) => Some((p, q)),
            _ => None,
        }
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn is_real(z: C64, tol: f64) -> bool {
    z.im.abs() <= tol
}

fn rank_of(a: &CMat) -> usize {
    let s = a.clone().singular_values();
    let top = s.max();
    s.iter().filter(|&&v| v > 1e-10 * top && top > 0.0).count()
}

/// `D = P^⊥`, `E = Q^⊥` in 2 × 2 matrices with `P = diag(1, t)` and
/// `Q = [[a, b], [c, d]]`.
///
/// Certified witness-free when `a = d = 0`, `b` and `c` are real and
/// `b·c·t < 0`; then `det[Py, conj(Qy)] = c̄|y₁|² − t b̄|y₂|²` never vanishes.
pub fn pair_2x2(t: f64, a: C64, b: C64, cc: C64, d: C64) -> Result<NamedPair> {
    if t == 0.0 || !t.is_finite() {
        return Err(Error::InvalidArgument("t must be a nonzero real".into()));
    }
    let dim = Dim { m: 2, n: 2 };
    let p = CMat::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(t)]);
    let q = CMat::from_row_slice(2, 2, &[a, b, cc, d]);
    if rank_of(&q) == 0 {
        return Err(Error::InvalidArgument("Q must be nonzero".into()));
    }
    let anti_diagonal = a == c(0.0) && d == c(0.0);
    let extreme = anti_diagonal && t == 1.0 && b == c(1.0) && cc == c(-1.0);
    let certificate = if extreme {
        Certificate::NoneAnalytic(Defect::Orthogonality, Defect::Parallelism)
    } else if anti_diagonal && is_real(b, 0.0) && is_real(cc, 0.0) && b.re * cc.re * t < 0.0 {
        Certificate::NoneAnalytic(Defect::DMembership, Defect::EMembership)
    } else if rank_of(&q) == 1 {
        Certificate::Recipe
    } else {
        Certificate::Unknown
    };
    Ok(NamedPair {
        name: if extreme { "ex-2x2-extreme" } else { "ex-2x2" }.to_string(),
        d: Subspace::from_complement_spanners(dim, &[p])?,
        e: Subspace::from_complement_spanners(dim, &[q])?,
        certificate,
    })
}

/// `P = I`, `Q = e₁₂ − e₂₁`: `x y* ∈ D` iff `x ⊥ y`, `x̄ y* ∈ E` iff `x ∥ y`.
pub fn pair_2x2_extreme() -> NamedPair {
    pair_2x2(1.0, c(0.0), c(1.0), c(-1.0), c(0.0)).expect("valid parameters")
}

/// Stacks `k` certified 2 × 2 pairs into a pair on `2k × 2` matrices, the
/// `i`-th complement spanner carrying `P_i` (resp. `Q_i`) in its `i`-th block.
pub fn pair_2x2k(subpairs: &[NamedPair]) -> Result<NamedPair> {
    if subpairs.is_empty() {
        return Err(Error::InvalidArgument("need at least one 2x2 pair".into()));
    }
    let k = subpairs.len();
    let mut ps = Vec::with_capacity(k);
    let mut qs = Vec::with_capacity(k);
    for (i, sub) in subpairs.iter().enumerate() {
        let certified = matches!(sub.certificate, Certificate::NoneAnalytic(..));
        let spanners = sub.single_spanners().filter(|_| sub.d.dim() == Dim { m: 2, n: 2 });
        let (Some((p, q)), true) = (spanners, certified) else {
            return Err(Error::Uncertified(alloc::format!("{i} ({})", sub.name)));
        };
        let embed = |block: &CMat| {
            let mut big = CMat::zeros(2 * k, 2);
            big.view_mut((2 * i, 0), (2, 2)).copy_from(block);
            big
        };
        ps.push(embed(p));
        qs.push(embed(q));
    }
    let dim = Dim { m: 2, n: 2 * k };
    let certificate = if k == 1 {
        subpairs[0].certificate
    } else {
        Certificate::NoneAnalytic(Defect::DMembership, Defect::EMembership)
    };
    Ok(NamedPair {
        name: "ex-2x2k".to_string(),
        d: Subspace::from_complement_spanners(dim, &ps)?,
        e: Subspace::from_complement_spanners(dim, &qs)?,
        certificate,
    })
}

/// Integer complement spanners of the 3 × 3 pair: `D^⊥ = span{I}` and
/// `E^⊥ = span{e₁₂ − e₂₁, e₂₃ − e₃₂, e₃₁ − e₁₃}`.
pub fn pair_3x3_spanners() -> (Vec<DMatrix<i64>>, Vec<DMatrix<i64>>) {
    let unit = |i: usize, j: usize| {
        let mut e = DMatrix::<i64>::zeros(3, 3);
        e[(i, j)] = 1;
        e
    };
    let d = vec![DMatrix::<i64>::identity(3, 3)];
    let e = vec![unit(0, 1) - unit(1, 0), unit(1, 2) - unit(2, 1), unit(2, 0) - unit(0, 2)];
    (d, e)
}

/// The `(1, 3)` pair on 3 × 3 matrices.
pub fn pair_3x3() -> NamedPair {
    let (ds, es) = pair_3x3_spanners();
    let to_complex = |a: &DMatrix<i64>| a.map(|v| c(v as f64));
    let dim = Dim { m: 3, n: 3 };
    let ds: Vec<CMat> = ds.iter().map(to_complex).collect();
    let es: Vec<CMat> = es.iter().map(to_complex).collect();
    NamedPair {
        name: "ex-3x3".to_string(),
        d: Subspace::from_complement_spanners(dim, &ds).expect("3x3 spanners"),
        e: Subspace::from_complement_spanners(dim, &es).expect("3x3 spanners"),
        certificate: Certificate::NoneAnalytic(Defect::Orthogonality, Defect::Parallelism),
    }
}

/// Looks up a catalogue entry. `ex-2x2k` is the `k = 2` stack of two extreme
/// 2 × 2 pairs.
pub fn example(name: &str) -> Result<NamedPair> {
    match name {
        "ex-2x2-extreme" => Ok(pair_2x2_extreme()),
        "ex-2x2k" => pair_2x2k(&[pair_2x2_extreme(), pair_2x2_extreme()]),
        "ex-3x3" => Ok(pair_3x3()),
        other => Err(Error::InvalidArgument(alloc::format!(
            "unknown example {other:?}; expected one of {CATALOGUE:?}"
        ))),
    }
}

/// Unit vector orthogonal to every vector in `against`, taken from the
/// standard basis vector with the largest residual.
fn unit_orthogonal_to(len: usize, against: &[CVec]) -> Result<CVec> {
    let mut best: Option<(f64, CVec)> = None;
    for i in 0..len {
        let mut v = basis_vector(len, i);
        for w in against {
            let nw = vec_norm(w);
            if nw > 0.0 {
                let u = w / C64::new(nw, 0.0);
                let proj = u.dotc(&v);
                v -= u * proj;
            }
        }
        let nv = vec_norm(&v);
        if best.as_ref().map_or(true, |(b, _)| nv > *b + 1e-12) {
            best = Some((nv, v));
        }
    }
    match best {
        Some((nv, v)) if nv > 1e-10 => Ok(v / C64::new(nv, 0.0)),
        _ => Err(Error::InvalidArgument("no orthogonal direction left".into())),
    }
}

/// Witness for `D = P^⊥`, `E = (z w*)^⊥`: a unit `y ⊥ w` kills every
/// `⟨z w*, x̄ y*⟩`, then a unit `x ⊥ P y` puts `x y*` in `D`.
pub fn rank_one_recipe(p: &CMat, z: &CVec, w: &CVec) -> Result<ProductPair> {
    let (n, m) = p.shape();
    if n < 2 || m < 2 {
        return Err(Error::InvalidArgument("recipe needs both dimensions at least 2".into()));
    }
    if z.len() != n || w.len() != m {
        return Err(Error::Dimension {
            expected: alloc::format!("z in C^{n}, w in C^{m}"),
            got: alloc::format!("z in C^{}, w in C^{}", z.len(), w.len()),
        });
    }
    if vec_norm(w) == 0.0 || vec_norm(z) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let y = unit_orthogonal_to(m, core::slice::from_ref(w))?;
    let py = p * &y;
    let x = unit_orthogonal_to(n, &[py])?;
    let dim = Dim { m, n };
    let d = Subspace::from_complement_spanners(dim, core::slice::from_ref(p))?;
    let e = Subspace::from_complement_spanners(dim, &[z * w.adjoint()])?;
    let res = residual(&d, &e, &x, &y)?;
    Ok(ProductPair { x, y, residual: res })
}

/// Minimum of `|det[P y, conj(Q y)]|` over a grid of unit `y = (cos θ, e^{iφ} sin θ)`.
///
/// A value bounded away from zero suggests that the 2 × 2 pair has no witness.
/// This is a heuristic: a finite grid cannot certify nonvanishing.
pub fn min_abs_det_on_grid(pair: &NamedPair, steps: usize) -> Result<f64> {
    let Some((p, q)) = pair.single_spanners().filter(|_| pair.d.dim() == Dim { m: 2, n: 2 }) else {
        return Err(Error::InvalidArgument("grid check needs a 2x2 pair with single spanners".into()));
    };
    let steps = steps.max(2);
    let mut worst = f64::INFINITY;
    for i in 0..=steps {
        let theta = core::f64::consts::FRAC_PI_2 * i as f64 / steps as f64;
        for j in 0..(2 * steps) {
            let phi = core::f64::consts::PI * j as f64 / steps as f64;
            let y = CVec::from_vec(vec![
                c(libm::cos(theta)),
                C64::new(libm::cos(phi), libm::sin(phi)) * libm::sin(theta),
            ]);
            let u = p * &y;
            let v = (q * &y).conjugate();
            let det = u[0] * v[1] - u[1] * v[0];
            worst = worst.min(det.norm());
        }
    }
    Ok(worst)
}
