use num_bigint::BigInt;
use partconj_core::obstruction::{
    coeff, coeff_table, condition_c, cross_check_families, enumerate_exceptional, family_quadruple, reduced_is_nonzero,
    tables_of_degree, Family, Quadruple, VerdictKind,
};
use proptest::prelude::*;

fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `Σ_{r+s=t} (−1)^r C(k,r) C(ℓ,s)`.
fn closed_sum(k: usize, l: usize, t: usize) -> BigInt {
    let mut acc = BigInt::from(0);
    for r in 0..=t.min(k) {
        let term = binomial(k, r) * binomial(l, t - r);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn at(table: &[BigInt], t: isize) -> BigInt {
    if t < 0 {
        return BigInt::from(0);
    }
    table.get(t as usize).cloned().unwrap_or_default()
}

#[test]
fn convolution_matches_closed_sum() {
    for k in 0..=25 {
        for l in 0..=25 {
            let table = coeff_table(k, l);
            for t in 0..=k + l {
                assert_eq!(table.coeffs()[t], closed_sum(k, l, t), "C^{{{k},{l}}}_{t}");
            }
        }
    }
}

#[test]
fn recurrences_up_to_30() {
    let tables: Vec<Vec<Vec<BigInt>>> =
        (0..=30).map(|k| (0..=30).map(|l| coeff_table(k, l).coeffs().to_vec()).collect()).collect();
    for k in 0..=30usize {
        for l in 0..=30usize {
            let c = &tables[k][l];
            for t in 0..=(k + l) as isize {
                let here = at(c, t);
                if k > 0 {
                    let prev = &tables[k - 1][l];
                    assert_eq!(here, at(prev, t) - at(prev, t - 1));
                }
                if l > 0 {
                    let prev = &tables[k][l - 1];
                    assert_eq!(here, at(prev, t) + at(prev, t - 1));
                }
                let mut rhs = BigInt::from(0);
                if k > 0 {
                    rhs -= BigInt::from(k) * at(&tables[k - 1][l], t - 1);
                }
                if l > 0 {
                    rhs += BigInt::from(l) * at(&tables[k][l - 1], t - 1);
                }
                assert_eq!(BigInt::from(t) * here, rhs, "({k},{l},{t})");
            }
        }
    }
}

#[test]
fn swap_symmetry_up_to_30() {
    for k in 0..=30 {
        for l in 0..=30 {
            let a = coeff_table(k, l);
            let b = coeff_table(l, k);
            for (t, (x, y)) in a.coeffs().iter().zip(b.coeffs()).enumerate() {
                let signed = if t % 2 == 0 { x.clone() } else { -x.clone() };
                assert_eq!(*y, signed);
            }
        }
    }
}

#[test]
fn no_two_consecutive_zeros_up_to_60() {
    for s in 0..=120 {
        for table in tables_of_degree(s) {
            if table.k > 60 || table.l > 60 {
                continue;
            }
            for w in table.coeffs().windows(2) {
                assert!(!(w[0] == BigInt::from(0) && w[1] == BigInt::from(0)), "({}, {})", table.k, table.l);
            }
        }
    }
}

#[test]
fn degree_walk_matches_direct_tables() {
    for s in 0..=20 {
        let walked: Vec<_> = tables_of_degree(s).collect();
        assert_eq!(walked.len(), s + 1);
        for table in walked {
            assert_eq!(table.k + table.l, s);
            assert_eq!(table, coeff_table(table.k, table.l));
        }
    }
}

#[test]
fn below_the_bound_always_holds() {
    // One table per (k, ℓ), shared by every shape with k + ℓ < m + n − 2.
    for k in 0..=98usize {
        for l in 0..=98 - k {
            let table = coeff_table(k, l);
            for m in 1..=100usize {
                for n in 1..=100 / m {
                    if k + l + 2 >= m + n || k.max(l) > m * n {
                        continue;
                    }
                    let q = Quadruple::new(m, n, k, l).unwrap();
                    let window = q.window().unwrap();
                    assert!(window.clone().any(|t| table.coeffs()[t] != BigInt::from(0)), "{q}");
                    if m * n <= 30 {
                        assert!(reduced_is_nonzero(&q));
                        assert_eq!(condition_c(&q).kind, VerdictKind::Holds);
                    }
                }
            }
        }
    }
}

#[test]
fn spot_values() {
    assert_eq!(coeff(2, 2, 2).unwrap(), BigInt::from(-2));
    assert_eq!(coeff(1, 3, 2).unwrap(), BigInt::from(0));
    assert_eq!(coeff(0, 0, 0).unwrap(), BigInt::from(1));
    assert_eq!(coeff(2, 7, 3).unwrap(), BigInt::from(0));
    assert!(coeff(2, 2, 5).is_err());
    let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
    assert_eq!(coeff_table(2, 2).coeffs(), ints(&[1, 0, -2, 0, 1]).as_slice());
    assert_eq!(coeff_table(1, 3).coeffs(), ints(&[1, 2, 0, -2, -1]).as_slice());
    assert_eq!(coeff_table(4, 0).coeffs(), ints(&[1, -4, 6, -4, 1]).as_slice());
}

#[test]
fn scan_and_families_to_100() {
    let scan = enumerate_exceptional(100).unwrap();
    let check = cross_check_families(&scan, 100);
    assert!(check.passed(), "{:?}", check.mismatches);
    assert!(scan.contains(&Quadruple::new(4, 7, 2, 7).unwrap()));
    for r in 1..=5 {
        let q = family_quadruple(Family::FourK, r).unwrap();
        assert!(q.is_exceptional());
    }
    let small = enumerate_exceptional(9).unwrap();
    let want: Vec<_> = [(2, 2, 1, 1), (2, 4, 2, 2), (3, 3, 1, 3), (3, 3, 3, 1)]
        .iter()
        .map(|&(m, n, k, l)| Quadruple::new(m, n, k, l).unwrap())
        .collect();
    assert_eq!(small, want);
}

proptest! {
    #[test]
    fn table_endpoints_and_sum(k in 0usize..80, l in 0usize..80) {
        let table = coeff_table(k, l);
        let c = table.coeffs();
        prop_assert_eq!(c.len(), k + l + 1);
        prop_assert_eq!(c[0].clone(), BigInt::from(1));
        let last = if k % 2 == 0 { BigInt::from(1) } else { BigInt::from(-1) };
        prop_assert_eq!(c[k + l].clone(), last);
        let sum: BigInt = c.iter().sum();
        let want = if k >= 1 { BigInt::from(0) } else { BigInt::from(2).pow(l as u32) };
        prop_assert_eq!(sum, want);
    }

    #[test]
    fn verdict_trichotomy(m in 1usize..8, n in 1usize..8, k in 0usize..20, l in 0usize..20) {
        prop_assume!(k <= m * n && l <= m * n);
        let q = Quadruple::new(m, n, k, l).unwrap();
        let v = condition_c(&q);
        match v.kind {
            VerdictKind::NotGuaranteed => prop_assert!(k + l > m + n - 2),
            VerdictKind::Exceptional => {
                prop_assert_eq!(k + l, m + n - 2);
                prop_assert_eq!(coeff(k, l, m - 1).unwrap(), BigInt::from(0));
            }
            VerdictKind::Holds => prop_assert!(k + l <= m + n - 2 && reduced_is_nonzero(&q)),
        }
    }

    #[test]
    fn exceptional_is_swap_closed(m in 2usize..9, n in 2usize..9, k in 0usize..16) {
        prop_assume!(m + n - 2 >= k);
        let l = m + n - 2 - k;
        prop_assume!(k <= m * n && l <= m * n);
        let q = Quadruple::new(m, n, k, l).unwrap();
        prop_assert_eq!(q.is_exceptional(), q.swapped().is_exceptional());
    }
}
