//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any
//! criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use haarwell::exactmath::RationalFunction;
use haarwell::haar_integrate::{integrate, parse_monomial, Dimension, Factor, MomentQuery};
use haarwell::montecarlo::{channel_demo, golden_set, moment_report, trace_clt_demo, RngSpec};
use haarwell::symmetric::{Partition, Permutation};
use haarwell::weingarten::{
    asymptotic_ratio, free_sign_survey, pairing_weingarten_matrix, three_path_check, uniform_bound_check,
    wg_orthogonal, wg_unitary_gram, wg_unitary_recursion_check, GroupKind, Mode, TableCache,
    THREE_PATH_SERIES_ORDER,
};

/// Seed for the golden Monte-Carlo set; query `i` uses stream `i`.
const GOLDEN_SEED: u64 = 20_240_607;
const CLT_SEED: u64 = 7;
const CHANNEL_SEED: u64 = 42;

type Outcome = Result<String, String>;

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let table = wg_unitary_gram(2, &Mode::Symbolic).map_err(err)?;
    // 2x2 Gram [[n², n], [n, n²]] inverted by its adjugate
    let n = RationalFunction::n();
    let n2 = n.mul(&n);
    let det = n2.mul(&n2).sub(&n2);
    let wg_e = n2.div(&det).map_err(err)?;
    let wg_t = n.neg().div(&det).map_err(err)?;
    let e = table.class_value(&Partition::ones(2)).ok_or("missing [1,1]")?;
    let t = table.class_value(&Partition::new(vec![2]).map_err(err)?).ok_or("missing [2]")?;
    ensure(*e == wg_e && *t == wg_t, || format!("table gives {e}, {t}"))?;
    ensure(e.to_string() == "1/(n^2-1)" && t.to_string() == "-1/(n^3-n)", || {
        format!("normal forms {e}, {t}")
    })?;
    Ok(format!("Wg(e) = {e}, Wg((12)) = {t}"))
}

fn criterion_2() -> Outcome {
    let mut series = 0;
    for k in 1..=5 {
        let r = three_path_check(k, &Mode::Symbolic, THREE_PATH_SERIES_ORDER).map_err(err)?;
        ensure(r.mismatches.is_empty(), || format!("k={k}: gram and character differ: {:?}", r.mismatches))?;
        if let Some(bad) = r.series.iter().find(|s| !s.within_bounds) {
            return Err(format!("k={k}: series outside its bound: {bad:?}"));
        }
        series += r.series.len();
    }
    Ok(format!(
        "k=1..5 gram = character on every class; {series} series truncations (order {THREE_PATH_SERIES_ORDER}, n0 = 10, 100) within bounds"
    ))
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for k in 1..=6 {
        let r = wg_unitary_recursion_check(k, &Mode::Symbolic).map_err(err)?;
        ensure(r.passed(), || format!("k={k}: violations {:?}", r.violations))?;
        checked += r.checked;
    }
    Ok(format!("{checked} permutations, zero violations"))
}

fn criterion_4() -> Outcome {
    let table = wg_orthogonal(4, &Mode::Symbolic).map_err(err)?;
    let (pairings, w) = pairing_weingarten_matrix(&table).map_err(err)?;
    let n = RationalFunction::n();
    let denom = n.mul(&n.sub(&RationalFunction::one())).mul(&n.add(&RationalFunction::from_int(2)));
    let diag = n.add(&RationalFunction::one()).div(&denom).map_err(err)?;
    let off = RationalFunction::from_int(-1).div(&denom).map_err(err)?;
    for i in 0..pairings.len() {
        for j in 0..pairings.len() {
            let want = if i == j { &diag } else { &off };
            ensure(w.get(i, j) == want, || format!("W[{i},{j}] = {}", w.get(i, j)))?;
        }
    }
    let q = parse_monomial("u[1,1] u[1,1] u[1,1] u[1,1]").map_err(err)?.with_group(GroupKind::Orthogonal);
    let v = integrate(&q).map_err(err)?;
    let want = RationalFunction::from_int(3)
        .div(&n.mul(&n.add(&RationalFunction::from_int(2))))
        .map_err(err)?;
    ensure(v == want, || format!("integral {v}"))?;
    Ok(format!("3x3 matrix matches ((n+1)I-(J-I))/(n(n-1)(n+2)); u11^4 -> {v}"))
}

fn criterion_5() -> Outcome {
    let points = [rat(2, 1), rat(5, 2), rat(3, 1), rat(10, 1)];
    let mut entries = 0;
    for k in (2..=12).step_by(2) {
        let r = free_sign_survey(k, &points).map_err(err)?;
        ensure(r.zeros.is_empty(), || format!("k={k}: zero entries {:?}", r.zeros))?;
        ensure(r.monotonicity_violations.is_empty(), || {
            format!("k={k}: |entry| increases for {:?}", r.monotonicity_violations)
        })?;
        entries += r.entries;
    }
    Ok(format!("k=2..12 at n0 in {{2, 5/2, 3, 10}}: {entries} entries, none zero, |entries| non-increasing"))
}

fn criterion_6() -> Outcome {
    let third = rat(1, 3);
    let mut classes = 0;
    let mut bound_checks = 0;
    for k in 1..=5usize {
        let n0 = 2 * (k * k) as i64;
        for class in Partition::all(k) {
            let sigma = Permutation::class_representative(&class);
            let near = asymptotic_ratio(&sigma, n0).map_err(err)? - BigRational::one();
            let far = asymptotic_ratio(&sigma, 2 * n0).map_err(err)? - BigRational::one();
            ensure(far.abs() <= &third * near.abs(), || {
                format!("k={k} {class}: |r(2n0)-1| = {far}, |r(n0)-1| = {near}")
            })?;
            classes += 1;
        }
        for n0 in k as i64..=4 * (k * k) as i64 {
            let r = uniform_bound_check(k, n0).map_err(err)?;
            if let Some(row) = r.rows.iter().find(|row| !row.lower_ok) {
                return Err(format!("lower bound fails at k={k}, n0={n0}: {row:?}"));
            }
            bound_checks += r.rows.len();
        }
    }
    Ok(format!("{classes} classes decay by >= 3x from n0 = 2k^2 to 4k^2; lower bound holds in {bound_checks} (class, n0) cases"))
}

fn criterion_7() -> Outcome {
    let cache = TableCache::in_memory();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (i, (q, n)) in golden_set().iter().enumerate() {
        let r = moment_report(&cache, q, *n, 100_000, RngSpec { seed: GOLDEN_SEED, stream: i as u64 }).map_err(err)?;
        worst = worst.max(r.z);
        if !r.passed {
            failures.push(format!("{} {} n={} z={:.2}", r.group, r.query, n, r.z));
        }
    }
    ensure(failures.is_empty(), || format!("outside 5 SE: {failures:?}"))?;
    Ok(format!("12 queries, 10^5 samples each, max z = {worst:.2}"))
}

fn criterion_8() -> Outcome {
    let r = trace_clt_demo(30, 100_000, RngSpec::new(CLT_SEED)).map_err(err)?;
    let summary: Vec<String> = r
        .moments
        .iter()
        .map(|m| format!("m{}={:.4} (z={:.2})", m.order, m.empirical, m.z))
        .collect();
    ensure(r.passed, || format!("moments {summary:?}"))?;
    Ok(summary.join(", "))
}

fn criterion_9() -> Outcome {
    let r = channel_demo(30, 2, &rat(1, 2), 1, RngSpec::new(CHANNEL_SEED)).map_err(err)?;
    let eig: Vec<String> = r.eigenvalues.iter().map(|e| format!("{e:.4}")).collect();
    ensure(r.within_tolerance, || {
        format!("eigenvalues {eig:?}, relative errors {:?}", r.relative_errors)
    })?;
    ensure(r.residual_small, || format!("residual {} vs 4th {}", r.residual, r.eigenvalues[3]))?;
    Ok(format!(
        "top eigenvalues {}, max relative error {:.3}, residual {:.1e}",
        eig.join(" "),
        r.relative_errors.iter().cloned().fold(0.0, f64::max),
        r.residual
    ))
}

/// Exact average of a monomial in one variable over `points` (equal weights).
fn discrete_average(points: &[Complex64], plain: usize, conj: usize) -> Complex64 {
    let total: Complex64 = points
        .iter()
        .map(|z| z.powu(plain as u32) * z.conj().powu(conj as u32))
        .sum();
    total / points.len() as f64
}

fn criterion_10() -> Outcome {
    // the roots of unity of order 5 integrate every z^a conj(z)^b with a+b <= 4 exactly over the circle
    let circle: Vec<Complex64> = (0..5).map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / 5.0)).collect();
    let signs = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    let mut checked = 0;
    for (group, points) in [(GroupKind::Unitary, &circle[..]), (GroupKind::Orthogonal, &signs[..])] {
        for degree in 0..=4usize {
            for plain in 0..=degree {
                let conj = degree - plain;
                let mut factors = vec![Factor { row: 1, col: 1, conjugated: false }; plain];
                factors.extend(vec![Factor { row: 1, col: 1, conjugated: true }; conj]);
                let q = MomentQuery::new(group, factors, Dimension::Integer(1));
                let exact = integrate(&q).map_err(err)?;
                let value = exact.as_constant().ok_or("non-constant result")?;
                let brute = discrete_average(points, plain, conj);
                let got = value.to_f64().ok_or("overflow")?;
                ensure((brute - Complex64::new(got, 0.0)).norm() < 1e-12, || {
                    format!("{group} {q}: integrate {value}, brute force {brute}")
                })?;
                let zero_or_one = value.is_zero() || value.is_one();
                ensure(zero_or_one, || format!("{group} {q}: {value}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} monomials of degree <= 4 on U(1) and O(1)"))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "exact k=2 unitary table", Duration::from_secs(1), criterion_1),
        (2, "three-path agreement", Duration::from_secs(120), criterion_2),
        (3, "recursion suite", Duration::from_secs(300), criterion_3),
        (4, "orthogonal closed form", Duration::from_secs(1), criterion_4),
        (5, "free engine survey", Duration::from_secs(120), criterion_5),
        (6, "asymptotics", Duration::from_secs(60), criterion_6),
        (7, "Monte-Carlo agreement", Duration::from_secs(300), criterion_7),
        (8, "trace CLT", Duration::from_secs(120), criterion_8),
        (9, "channel demo", Duration::from_secs(180), criterion_9),
        (10, "brute-force micro-oracles", Duration::from_secs(1), criterion_10),
    ];
    let only: Option<u32> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; runtime {elapsed:.2?} exceeds {limit:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {} [{name}] ({elapsed:.2?}): {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed > 0 {
        println!("acceptance: {failed} criterion(s) failed");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
