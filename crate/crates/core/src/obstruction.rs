//! Exact obstruction calculus.
//!
//! For codimensions `(k, ℓ)` the polynomial `(1 − x)^k (1 + x)^ℓ` has integer
//! coefficients `C^{k,ℓ}_t`. The coefficient at `t` stands for the monomial
//! `α^t β^{k+ℓ−t}` of `(−α + β)^k (α + β)^ℓ`, and that product survives
//! reduction modulo `(α^m, β^n)` exactly when some coefficient with
//! `t ≤ m − 1` and `k + ℓ − t ≤ n − 1` is nonzero. When it survives, every
//! subspace pair of those codimensions admits a product vector in `D` whose
//! partial conjugate lies in `E`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::RangeInclusive;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dimensions `(m, n)` and codimensions `(k, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Quadruple {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl Quadruple {
    pub fn new(m: usize, n: usize, k: usize, l: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidArgument(format!(
                "dimensions must be positive (m={m}, n={n})"
            )));
        }
        let mn = m * n;
        if k > mn || l > mn {
            return Err(Error::OutOfRange(format!(
                "codimensions ({k}, {l}) exceed m·n = {mn}"
            )));
        }
        Ok(Self { m, n, k, l })
    }

    /// `(m, n, ℓ, k)`.
    pub fn swapped(&self) -> Self {
        Self { k: self.l, l: self.k, ..*self }
    }

    /// Indices `t` whose monomial survives reduction modulo `(α^m, β^n)`.
    /// Empty when `k + ℓ > m + n − 2`.
    pub fn window(&self) -> Option<RangeInclusive<usize>> {
        let s = self.k + self.l;
        let lo = s.saturating_sub(self.n - 1);
        let hi = (self.m - 1).min(s);
        (lo <= hi).then_some(lo..=hi)
    }

    /// `k + ℓ = m + n − 2` and `C^{k,ℓ}_{m−1} = 0`.
    pub fn is_exceptional(&self) -> bool {
        self.k + self.l + 2 == self.m + self.n
            && coeff(self.k, self.l, self.m - 1).map_or(false, |c| c.is_zero())
    }
}

impl fmt::Display for Quadruple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.m, self.n, self.k, self.l)
    }
}

/// All coefficients of `(1 − x)^k (1 + x)^ℓ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub k: usize,
    pub l: usize,
    coeffs: Vec<BigInt>,
}

impl CoeffTable {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// `C^{k,ℓ}_t`, or zero outside `0..=k+ℓ`.
    pub fn get(&self, t: isize) -> BigInt {
        usize::try_from(t)
            .ok()
            .and_then(|t| self.coeffs.get(t))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> usize {
        self.k + self.l
    }
}

/// Multiplies `poly` in place by `1 + sign·x`.
fn mul_linear(poly: &mut Vec<BigInt>, sign: i8) {
    poly.push(BigInt::zero());
    for t in (1..poly.len()).rev() {
        let prev = poly[t - 1].clone();
        if sign < 0 {
            poly[t] -= prev;
        } else {
            poly[t] += prev;
        }
    }
}

/// Coefficients of `(1 − x)^k (1 + x)^ℓ` by repeated convolution.
pub fn coeff_table(k: usize, l: usize) -> CoeffTable {
    let mut coeffs = vec![BigInt::one()];
    for _ in 0..k {
        mul_linear(&mut coeffs, -1);
    }
    for _ in 0..l {
        mul_linear(&mut coeffs, 1);
    }
    CoeffTable { k, l, coeffs }
}

/// `C^{k,ℓ}_t` for `0 ≤ t ≤ k + ℓ`.
pub fn coeff(k: usize, l: usize, t: usize) -> Result<BigInt> {
    if t > k + l {
        return Err(Error::OutOfRange(format!("t = {t} exceeds k + ℓ = {}", k + l)));
    }
    Ok(coeff_table(k, l).coeffs.swap_remove(t))
}

/// Tables `(1 − x)^k (1 + x)^{s−k}` for `k = 0..=s`, walking from one to the
/// next by multiplying with `1 − x` and dividing exactly by `1 + x`.
pub fn tables_of_degree(s: usize) -> impl Iterator<Item = CoeffTable> {
    let mut current = coeff_table(0, s).coeffs;
    (0..=s).map(move |k| {
        let table = CoeffTable { k, l: s - k, coeffs: current.clone() };
        if k < s {
            mul_linear(&mut current, -1);
            // Synthetic division by (1 + x): the remainder is zero.
            let mut quotient = Vec::with_capacity(current.len() - 1);
            let mut carry = BigInt::zero();
            for c in &current[..current.len() - 1] {
                carry = c - carry;
                quotient.push(carry.clone());
            }
            debug_assert_eq!(current.last().unwrap() - &carry, BigInt::zero());
            current = quotient;
        }
        table
    })
}

/// `true` iff `(−α + β)^k (α + β)^ℓ` is nonzero modulo `(α^m, β^n)`.
pub fn reduced_is_nonzero(q: &Quadruple) -> bool {
    let Some(window) = q.window() else {
        return false;
    };
    let table = coeff_table(q.k, q.l);
    window.into_iter().any(|t| !table.coeffs[t].is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VerdictKind {
    /// Every pair of these codimensions has a witness.
    Holds,
    /// `k + ℓ > m + n − 2`: generic pairs have no witness.
    NotGuaranteed,
    /// `k + ℓ = m + n − 2` with `C^{k,ℓ}_{m−1} = 0`; undecided by the obstruction.
    Exceptional,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::Holds => "HOLDS",
            VerdictKind::NotGuaranteed => "NOT_GUARANTEED",
            VerdictKind::Exceptional => "EXCEPTIONAL",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub quadruple: Quadruple,
    pub kind: VerdictKind,
    /// Surviving index range, if nonempty.
    pub window: Option<RangeInclusive<usize>>,
    /// `C^{k,ℓ}_t` for each `t` in `window`.
    pub values: Vec<BigInt>,
}

/// Three-way verdict on whether witnesses are guaranteed for `(m, n, k, ℓ)`.
pub fn condition_c(q: &Quadruple) -> ConditionVerdict {
    let window = q.window();
    let table = coeff_table(q.k, q.l);
    let values: Vec<BigInt> = window
        .clone()
        .map(|w| w.map(|t| table.coeffs[t].clone()).collect())
        .unwrap_or_default();
    let kind = if q.k + q.l + 2 > q.m + q.n {
        VerdictKind::NotGuaranteed
    } else if values.iter().any(|c| !c.is_zero()) {
        VerdictKind::Holds
    } else {
        VerdictKind::Exceptional
    };
    ConditionVerdict { quadruple: *q, kind, window, values }
}

/// All exceptional quadruples with `m ≤ n` and `m·n ≤ max_product`, in
/// lexicographic order of `(m, n, k, ℓ)`. Both `(k, ℓ)` orders are listed.
pub fn enumerate_exceptional(max_product: usize) -> Result<Vec<Quadruple>> {
    if max_product < 4 {
        return Err(Error::InvalidArgument(format!(
            "max_product must be at least 4 (got {max_product})"
        )));
    }
    // m = 1 never qualifies: the window is {0} and C_0 = 1.
    let mut shapes: Vec<(usize, usize)> = Vec::new();
    let mut m = 2;
    while m * m <= max_product {
        for n in m..=max_product / m {
            shapes.push((m, n));
        }
        m += 1;
    }
    let max_degree = shapes.iter().map(|&(m, n)| m + n - 2).max().unwrap_or(0);
    let mut found = BTreeSet::new();
    for s in 2..=max_degree {
        let dims: Vec<(usize, usize)> =
            shapes.iter().copied().filter(|&(m, n)| m + n - 2 == s).collect();
        if dims.is_empty() {
            continue;
        }
        for table in tables_of_degree(s) {
            for &(m, n) in &dims {
                if table.coeffs[m - 1].is_zero() {
                    found.insert(Quadruple { m, n, k: table.k, l: table.l });
                }
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// Closed-form families of exceptional quadruples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `(k, k) ⊲ 2 ⊗ 2k`.
    M2,
    /// `(C(r+1,2), C(r+2,2)) ⊲ 3 ⊗ r(r+2)`.
    M3,
    /// `(k, ℓ) ⊲ n ⊗ n` with `k + ℓ = 2n − 2` and both odd.
    Square,
    /// `(k, k) ⊲ m ⊗ n` with `m + n = 2k + 2` and both even (`m ≤ n`).
    Balanced,
    /// `(2r, 6r+1) ⊲ 4r ⊗ (4r+3)`.
    FourK,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::M2, Family::M3, Family::Square, Family::Balanced, Family::FourK];

    pub fn name(&self) -> &'static str {
        match self {
            Family::M2 => "M2",
            Family::M3 => "M3",
            Family::Square => "SQUARE",
            Family::Balanced => "BALANCED",
            Family::FourK => "FOUR_K",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown family {name:?}")))
    }

    /// Members in order. `Square` is ordered by `n` then `k`, `Balanced` by
    /// `k` then `m`; both are infinite like the others.
    pub fn members(self) -> impl Iterator<Item = Quadruple> {
        let mut index = 1usize;
        let mut pending: Vec<Quadruple> = Vec::new();
        core::iter::from_fn(move || loop {
            if !pending.is_empty() {
                return Some(pending.remove(0));
            }
            let r = index;
            index += 1;
            match self {
                Family::M2 => return Some(Quadruple { m: 2, n: 2 * r, k: r, l: r }),
                Family::M3 => {
                    return Some(Quadruple {
                        m: 3,
                        n: r * (r + 2),
                        k: r * (r + 1) / 2,
                        l: (r + 1) * (r + 2) / 2,
                    })
                }
                Family::FourK => {
                    return Some(Quadruple { m: 4 * r, n: 4 * r + 3, k: 2 * r, l: 6 * r + 1 })
                }
                Family::Square => {
                    let n = r + 1;
                    pending = (1..2 * n - 2)
                        .step_by(2)
                        .map(|k| Quadruple { m: n, n, k, l: 2 * n - 2 - k })
                        .collect();
                }
                Family::Balanced => {
                    let k = r;
                    pending = (2..=k + 1)
                        .step_by(2)
                        .map(|m| (m, 2 * k + 2 - m))
                        .filter(|&(m, n)| m <= n)
                        .map(|(m, n)| Quadruple { m, n, k, l: k })
                        .collect();
                }
            }
        })
    }

    /// Members with `m·n ≤ max_product`.
    pub fn members_up_to(self, max_product: usize) -> Vec<Quadruple> {
        // Smallest m·n among members at or past the current index grows
        // without bound, so stop once a whole index level is out of range.
        let level_floor = |q: &Quadruple| match self {
            Family::Balanced => 4 * q.k,
            _ => q.m * q.n,
        };
        self.members()
            .take_while(|q| level_floor(q) <= max_product)
            .filter(|q| q.m * q.n <= max_product)
            .collect()
    }
}

/// The `r`-th member (one-based) of a family, checked against the exact
/// exceptional relation.
pub fn family_quadruple(family: Family, r: usize) -> Result<Quadruple> {
    if r == 0 {
        return Err(Error::InvalidArgument("family index starts at 1".into()));
    }
    let q = family.members().nth(r - 1).expect("families are infinite");
    if !q.is_exceptional() {
        return Err(Error::FamilyCheck(format!("{} member {q}", family.name())));
    }
    Ok(q)
}

/// Differences between the enumerator and the closed-form families.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FamilyCrossCheck {
    pub mismatches: Vec<String>,
    pub checked: usize,
}

impl FamilyCrossCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `scan` (the output of [`enumerate_exceptional`]) with the
/// families: the `m = 2`, `m = 3`, `m = n` and `k = ℓ` slices must agree
/// exactly, and every `FourK` member in range must be present.
pub fn cross_check_families(scan: &[Quadruple], max_product: usize) -> FamilyCrossCheck {
    let mut report = FamilyCrossCheck::default();
    let in_scan: BTreeSet<Quadruple> = scan.iter().copied().collect();
    let with_swaps = |qs: Vec<Quadruple>| -> BTreeSet<Quadruple> {
        qs.iter().flat_map(|q| [*q, q.swapped()]).collect()
    };
    let slices: [(Family, fn(&Quadruple) -> bool); 4] = [
        (Family::M2, |q| q.m == 2),
        (Family::M3, |q| q.m == 3),
        (Family::Square, |q| q.m == q.n),
        (Family::Balanced, |q| q.k == q.l),
    ];
    for (family, in_slice) in slices {
        let expected = with_swaps(family.members_up_to(max_product));
        let got: BTreeSet<Quadruple> = in_scan.iter().copied().filter(|q| in_slice(q)).collect();
        report.checked += expected.len();
        for q in expected.difference(&got) {
            report.mismatches.push(format!("{} member {q} missing from scan", family.name()));
        }
        for q in got.difference(&expected) {
            report.mismatches.push(format!("scan entry {q} not in {} family", family.name()));
        }
    }
    for q in with_swaps(Family::FourK.members_up_to(max_product)) {
        report.checked += 1;
        if !in_scan.contains(&q) {
            report.mismatches.push(format!("FOUR_K member {q} missing from scan"));
        }
    }
    report
}
