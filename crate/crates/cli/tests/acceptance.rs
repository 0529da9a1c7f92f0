//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use partconj_core::constructions::example;
use partconj_core::edge::{is_ppt, partial_transpose, trace_map_certificate, trace_map_images, State};
use partconj_core::obstruction::{
    coeff, coeff_table, cross_check_families, enumerate_exceptional, family_quadruple, tables_of_degree, Family,
};
use partconj_core::solver::verify_pair;
use partconj_core::tensor::{random_subspace, random_unit_vector};
use partconj_core::{condition_c, find_pair, CMat, CVec, Dim, Quadruple, SolveStatus, SolverConfig, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_partconj")).args(args).output().expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn quads(list: &[(usize, usize, usize, usize)]) -> Vec<Value> {
    list.iter().map(|&(m, n, k, l)| serde_json::json!({"m": m, "n": n, "k": k, "l": l})).collect()
}

fn scan_nine() -> Verdict {
    let start = Instant::now();
    let (code, json) = cli(&["scan", "9"]);
    let elapsed = start.elapsed();
    let want = quads(&[(2, 2, 1, 1), (2, 4, 2, 2), (3, 3, 1, 3), (3, 3, 3, 1)]);
    let got = json["result"]["quadruples"].as_array().cloned().unwrap_or_default();
    let pass = code == 0 && got == want && elapsed < Duration::from_secs(1);
    verdict(pass, format!("{} quadruples, exact match {}, {:.3} s", got.len(), got == want, elapsed.as_secs_f64()))
}

fn at(table: &[BigInt], t: isize) -> BigInt {
    if t < 0 {
        return BigInt::from(0);
    }
    table.get(t as usize).cloned().unwrap_or_default()
}

fn identities() -> Verdict {
    let start = Instant::now();
    let zero = BigInt::from(0);
    let mut failures = 0usize;
    let tables: Vec<Vec<Vec<BigInt>>> =
        (0..=30).map(|k| (0..=30).map(|l| coeff_table(k, l).coeffs().to_vec()).collect()).collect();
    for k in 0..=30usize {
        for l in 0..=30usize {
            let c = &tables[k][l];
            let swapped = &tables[l][k];
            for t in 0..=(k + l) as isize {
                let here = at(c, t);
                if k > 0 && here != at(&tables[k - 1][l], t) - at(&tables[k - 1][l], t - 1) {
                    failures += 1;
                }
                if l > 0 && here != at(&tables[k][l - 1], t) + at(&tables[k][l - 1], t - 1) {
                    failures += 1;
                }
                let mut rhs = zero.clone();
                if k > 0 {
                    rhs -= BigInt::from(k) * at(&tables[k - 1][l], t - 1);
                }
                if l > 0 {
                    rhs += BigInt::from(l) * at(&tables[k][l - 1], t - 1);
                }
                if BigInt::from(t) * &here != rhs {
                    failures += 1;
                }
                let sign = if t % 2 == 0 { here.clone() } else { -here.clone() };
                if at(swapped, t) != sign {
                    failures += 1;
                }
            }
        }
    }
    let mut checked = 0usize;
    for s in 0..=120 {
        for table in tables_of_degree(s).filter(|t| t.k <= 60 && t.l <= 60) {
            checked += 1;
            if table.coeffs().windows(2).any(|w| w[0] == zero && w[1] == zero) {
                failures += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        failures == 0 && checked == 61 * 61 && elapsed < Duration::from_secs(10),
        format!("{failures} failures, {checked} tables for consecutive zeros, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn families() -> Verdict {
    let start = Instant::now();
    let scan = enumerate_exceptional(100).expect("valid bound");
    let check = cross_check_families(&scan, 100);
    let mut four_k_ok = true;
    for r in 1..=5usize {
        let Ok(q) = family_quadruple(Family::FourK, r) else {
            four_k_ok = false;
            continue;
        };
        let expected = (4 * r, 4 * r + 3, 2 * r, 6 * r + 1);
        let relation = q.k + q.l + 2 == q.m + q.n && coeff(q.k, q.l, q.m - 1).map(|c| c == BigInt::from(0)).unwrap_or(false);
        four_k_ok &= (q.m, q.n, q.k, q.l) == expected && relation;
    }
    let elapsed = start.elapsed();
    verdict(
        check.passed() && four_k_ok && elapsed < Duration::from_secs(30),
        format!(
            "{} scan entries, {} family members checked, {} mismatches, FOUR_K r<=5 {}, {:.2} s",
            scan.len(),
            check.checked,
            check.mismatches.len(),
            if four_k_ok { "ok" } else { "bad" },
            elapsed.as_secs_f64()
        ),
    )
}

fn spot_verdicts() -> Verdict {
    let cases = [
        ((3, 3, 2, 2), "HOLDS"),
        ((3, 3, 1, 3), "EXCEPTIONAL"),
        ((2, 4, 1, 3), "HOLDS"),
        ((2, 4, 2, 2), "EXCEPTIONAL"),
        ((3, 3, 3, 3), "NOT_GUARANTEED"),
    ];
    let mut wrong = Vec::new();
    for ((m, n, k, l), want) in cases {
        let got = condition_c(&Quadruple::new(m, n, k, l).expect("valid")).kind.as_str();
        if got != want {
            wrong.push(format!("({m},{n},{k},{l}) -> {got}"));
        }
    }
    verdict(wrong.is_empty(), format!("5 cases, wrong: {wrong:?}"))
}

fn completeness() -> Verdict {
    let start = Instant::now();
    let cfg = SolverConfig::default();
    let mut counts = Vec::new();
    for (idx, &(m, n, k, l)) in [(3, 3, 1, 1), (2, 4, 1, 2), (3, 4, 2, 2)].iter().enumerate() {
        let dim = Dim::new(m, n).expect("valid");
        let mut ok = 0;
        for i in 0..100u64 {
            let seed = 10_000 * (idx as u64 + 1) + 2 * i;
            let d = random_subspace(dim, k, seed).expect("valid codim");
            let e = random_subspace(dim, l, seed + 1).expect("valid codim");
            let out = find_pair(&d, &e, &cfg).expect("valid config");
            if out.status == SolveStatus::Found && verify_pair(&d, &e, &out.best, 1e-8) {
                ok += 1;
            }
        }
        counts.push(((m, n, k, l), ok));
    }
    let elapsed = start.elapsed();
    let pass = counts.iter().all(|&(_, ok)| ok >= 95) && elapsed < Duration::from_secs(120);
    let detail = counts.iter().map(|((m, n, k, l), ok)| format!("({m},{n},{k},{l}) {ok}/100")).collect::<Vec<_>>();
    verdict(pass, format!("{}, {:.2} s", detail.join(", "), elapsed.as_secs_f64()))
}

/// Raw complement spanners written out by hand. Each list is mutually
/// orthogonal, so the residual is a sum of normalized projections.
fn raw_spanners(name: &str) -> (Vec<CMat>, Vec<CMat>) {
    let unit = |rows: usize, i: usize, j: usize, cols: usize| {
        let mut e = CMat::zeros(rows, cols);
        e[(i, j)] = C64::new(1.0, 0.0);
        e
    };
    match name {
        "ex-3x3" => {
            let u = |i, j| unit(3, i, j, 3);
            (vec![CMat::identity(3, 3)], vec![u(0, 1) - u(1, 0), u(1, 2) - u(2, 1), u(2, 0) - u(0, 2)])
        }
        "ex-2x2-extreme" => (vec![CMat::identity(2, 2)], vec![unit(2, 0, 1, 2) - unit(2, 1, 0, 2)]),
        "ex-2x2k" => {
            let u = |i, j| unit(4, i, j, 2);
            (
                vec![u(0, 0) + u(1, 1), u(2, 0) + u(3, 1)],
                vec![u(0, 1) - u(1, 0), u(2, 1) - u(3, 0)],
            )
        }
        _ => unreachable!(),
    }
}

fn pairing(a: &CMat, b: &CMat) -> C64 {
    a.iter().zip(b.iter()).map(|(p, q)| p.conj() * q).sum()
}

fn oracle_residual(ds: &[CMat], es: &[CMat], x: &CVec, y: &CVec) -> f64 {
    let xy = x * y.adjoint();
    let cxy = x.conjugate() * y.adjoint();
    let mut acc = 0.0;
    for p in ds {
        acc += pairing(p, &xy).norm_sqr() / pairing(p, p).re;
    }
    for q in es {
        acc += pairing(q, &cxy).norm_sqr() / pairing(q, q).re;
    }
    acc.sqrt()
}

fn normalize(v: CVec) -> CVec {
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Minimum residual over 10^5 Haar samples, then random-direction descent
/// from the 20 best samples.
fn grid_polish_minimum(name: &str) -> f64 {
    let (ds, es) = raw_spanners(name);
    for list in [&ds, &es] {
        for (i, a) in list.iter().enumerate() {
            for b in &list[i + 1..] {
                assert!(pairing(a, b).norm() < 1e-15, "oracle spanners must be orthogonal");
            }
        }
    }
    let (n, m) = ds[0].shape();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut samples: Vec<(f64, CVec, CVec)> = (0..100_000)
        .map(|_| {
            let x = random_unit_vector(&mut rng, n);
            let y = random_unit_vector(&mut rng, m);
            (oracle_residual(&ds, &es, &x, &y), x, y)
        })
        .collect();
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = samples[0].0;
    for (mut r, mut x, mut y) in samples.into_iter().take(20) {
        let mut step = 0.1;
        for _ in 0..3000 {
            let dx = random_unit_vector(&mut rng, n) * C64::new(step * rng.random::<f64>(), 0.0);
            let dy = random_unit_vector(&mut rng, m) * C64::new(step * rng.random::<f64>(), 0.0);
            let (nx, ny) = (normalize(&x + dx), normalize(&y + dy));
            let nr = oracle_residual(&ds, &es, &nx, &ny);
            if nr < r {
                (r, x, y) = (nr, nx, ny);
            } else {
                step = (step * 0.995).max(1e-6);
            }
        }
        best = best.min(r);
    }
    best
}

fn nonexistence() -> Verdict {
    let start = Instant::now();
    let cfg = SolverConfig::default();
    let mut pass = true;
    let mut parts = Vec::new();
    for name in ["ex-3x3", "ex-2x2-extreme", "ex-2x2k"] {
        let floor = grid_polish_minimum(name);
        let pair = example(name).expect("catalogue entry");
        let out = find_pair(&pair.d, &pair.e, &cfg).expect("valid config");
        let ok = out.status == SolveStatus::NotFound && floor > 1e-2 && out.best.residual > 0.5 * floor;
        pass &= ok;
        parts.push(format!("{name}: {} best {:.4} oracle {:.4}", out.status.as_str(), out.best.residual, floor));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(120);
    verdict(pass, format!("{}, {:.2} s", parts.join("; "), elapsed.as_secs_f64()))
}

fn trace_map() -> Verdict {
    let images = trace_map_images();
    let exact = images.iter().all(|((i, j), img)| {
        (0..3).all(|a| (0..3).all(|b| img[(a, b)] == if i == j && a == b { 1 } else { 0 }))
    });
    let (code, json) = cli(&["trace-cert"]);
    let pass = exact && trace_map_certificate() && code == 0 && json["result"]["passed"] == true;
    verdict(pass, format!("9 units checked, exact {exact}, cli exit {code}"))
}

fn type_pairs(json: &Value) -> Vec<(u64, u64, bool)> {
    json["result"]["types"]
        .as_array()
        .map(|ts| {
            ts.iter()
                .map(|t| (t["p"].as_u64().unwrap_or(0), t["q"].as_u64().unwrap_or(0), t["published"] == true))
                .collect()
        })
        .unwrap_or_default()
}

fn type_tables() -> Verdict {
    let (c24, j24) = cli(&["types", "2", "4"]);
    let t24: Vec<(u64, u64)> = type_pairs(&j24).into_iter().map(|(p, q, _)| (p, q)).collect();
    let ok24 = c24 == 0 && t24 == vec![(5, 5), (5, 6), (6, 5), (6, 6)];
    let (c33, j33) = cli(&["types", "3", "3"]);
    let t33 = type_pairs(&j33);
    let has = |p, q| t33.iter().any(|&(a, b, _)| (a, b) == (p, q));
    let printed = [(4, 4), (5, 5), (5, 6), (5, 7), (6, 6), (5, 8), (6, 7), (6, 8)];
    let flagged = printed.iter().all(|&(p, q)| {
        t33.iter().any(|&(a, b, f)| (a, b) == (p, q) && f) && t33.iter().any(|&(a, b, f)| (a, b) == (q, p) && f)
    });
    let ok33 = c33 == 0 && !has(7, 7) && has(6, 8) && has(8, 6) && flagged;
    verdict(ok24 && ok33, format!("2x4 {t24:?}; 3x3 {} types, (7,7) absent {}, printed list flagged {flagged}", t33.len(), !has(7, 7)))
}

fn partial_transpose_props() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    let mut exact = true;
    for i in 0..100 {
        let (m, n) = (2 + i % 3, 2 + (i / 3) % 3);
        let x = random_unit_vector(&mut rng, n);
        let y = random_unit_vector(&mut rng, m);
        let a = State::product_projector(&x, &y).expect("nonzero");
        let b = State::product_projector(&x.conjugate(), &y).expect("nonzero");
        let pt = partial_transpose(&a);
        worst = worst.max((pt.matrix() - b.matrix()).norm());
        let size = m * n;
        let h = CMat::from_fn(size, size, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let h = State::new(Dim::new(m, n).expect("valid"), &h + h.adjoint()).expect("Hermitian");
        let ht = partial_transpose(&h);
        exact &= partial_transpose(&ht) == h && ht.matrix().adjoint() == *ht.matrix() && ht.trace() == h.trace();
    }
    let mut bell = CVec::zeros(4);
    bell[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    bell[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let entangled = State::new(Dim::new(2, 2).expect("valid"), &bell * bell.adjoint()).expect("Hermitian");
    let rejected = !is_ppt(&entangled, 1e-10);
    let elapsed = start.elapsed();
    verdict(
        worst < 1e-10 && exact && rejected && elapsed < Duration::from_secs(10),
        format!("max deviation {worst:.2e}, exact identities {exact}, entangled rejected {rejected}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("exceptional scan up to mn = 9", scan_nine),
        ("coefficient identities", identities),
        ("family cross-check", families),
        ("verdict spot checks", spot_verdicts),
        ("solver completeness", completeness),
        ("nonexistence behaviour", nonexistence),
        ("trace-map certificate", trace_map),
        ("type tables", type_tables),
        ("partial transpose", partial_transpose_props),
    ];
    let mut failed = 0;
    for (idx, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("{} {}. {name}: {}", if v.pass { "PASS" } else { "FAIL" }, idx + 1, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
