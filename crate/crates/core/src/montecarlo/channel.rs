//! Random quantum channel from a Haar isometry, and the spectrum of
//! `Φ⊗Φ̄` applied to the maximally entangled state.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::estimate::rational_to_f64;
use super::sampling::{sample_haar_unitary_with, RngSpec};
use crate::error::{check_cap, Error, Result};

/// Cap on `n·k`, the size of the sampled unitary.
pub const MAX_CHANNEL_NK: usize = 128;

const POWER_TOL: f64 = 1e-13;
const POWER_MAX_ITER: usize = 200_000;

type Vector = Vec<Complex64>;

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

fn project_out(v: &mut [Complex64], basis: &[Vector]) {
    for b in basis {
        let c = dot(b, v);
        for (x, y) in v.iter_mut().zip(b) {
            *x -= c * y;
        }
    }
}

/// Power iteration for a Hermitian positive semidefinite operator on the
/// orthogonal complement of `found` (orthonormal). Returns the Rayleigh
/// quotient and the unit vector, or `None` if the complement is trivial.
fn dominant<F>(dim: usize, found: &[Vector], apply: F) -> Option<(f64, Vector)>
where
    F: Fn(&[Complex64]) -> Vector,
{
    if found.len() >= dim {
        return None;
    }
    // deterministic start with no special alignment
    let mut v: Vector = (0..dim)
        .map(|i| Complex64::new(1.0 + (i as f64 * 0.618).sin(), (i as f64 * 1.414).cos()))
        .collect();
    project_out(&mut v, found);
    let s = norm(&v);
    if s == 0.0 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= s);
    let mut lambda = 0.0;
    for _ in 0..POWER_MAX_ITER {
        let mut w = apply(&v);
        project_out(&mut w, found);
        lambda = dot(&v, &w).re;
        let residual: f64 = w
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let s = norm(&w);
        if s == 0.0 {
            return Some((0.0, v));
        }
        w.iter_mut().for_each(|x| *x /= s);
        v = w;
        if residual <= POWER_TOL * lambda.abs().max(1e-300) || residual < 1e-300 {
            break;
        }
    }
    Some((lambda, v))
}

/// Top `count` eigenpairs by power iteration with deflation.
fn top_eigen<F>(dim: usize, count: usize, apply: F) -> Vec<(f64, Vector)>
where
    F: Fn(&[Complex64]) -> Vector,
{
    let mut found: Vec<Vector> = Vec::new();
    let mut out = Vec::new();
    for _ in 0..count {
        let Some((lambda, v)) = dominant(dim, &found, &apply) else {
            break;
        };
        found.push(v.clone());
        out.push((lambda, v));
    }
    out
}

/// The `n²×k²` factor `W` with `Φ⊗Φ̄(Bell) = W W*`.
///
/// `U` is sampled in `U(nk)` and `V` is its first `p` columns. Rows of `V`
/// are indexed `a·k + c` with `a < n` the output index and `c < k` the
/// traced environment index, so `Φ(X) = Σ_c K_c X K_c*` with
/// `K_c[a, j] = V[a·k + c, j]`. Column `(c, d)` of `W` is
/// `vec(K_c K_d*) / √p`.
fn bell_factor(v: &[Vec<Complex64>], n: usize, k: usize, p: usize) -> Vec<Vector> {
    let scale = 1.0 / (p as f64).sqrt();
    let mut cols = Vec::with_capacity(k * k);
    for c in 0..k {
        for d in 0..k {
            let mut col = vec![Complex64::new(0.0, 0.0); n * n];
            for a in 0..n {
                for b in 0..n {
                    let s: Complex64 = (0..p).map(|j| v[a * k + c][j] * v[b * k + d][j].conj()).sum();
                    col[a * n + b] = s * scale;
                }
            }
            cols.push(col);
        }
    }
    cols
}

/// Nonzero limit spectrum `(t + (1−t)/k², (1−t)/k², …)` with `k²` entries.
pub fn limit_spectrum(k: usize, t: f64) -> Vec<f64> {
    let kk = (k * k) as f64;
    let mut g = vec![(1.0 - t) / kk; k * k];
    g[0] += t;
    g
}

#[derive(Clone, Debug, Serialize)]
pub struct ChannelSample {
    pub stream: u64,
    /// Top `k²` eigenvalues, descending.
    pub eigenvalues: Vec<f64>,
    /// Next eigenvalue of `Φ⊗Φ̄(Bell)` after the top `k²`.
    pub residual: f64,
    pub trace: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChannelReport {
    pub n: usize,
    pub k: usize,
    pub t: String,
    pub p: usize,
    pub samples: usize,
    pub seed: u64,
    /// Per-index mean of the sorted top eigenvalues over samples.
    pub eigenvalues: Vec<f64>,
    pub expected: Vec<f64>,
    pub relative_errors: Vec<f64>,
    /// Largest residual eigenvalue over samples.
    pub residual: f64,
    pub within_tolerance: bool,
    pub residual_small: bool,
    pub passed: bool,
    pub per_sample: Vec<ChannelSample>,
}

/// Relative tolerance on each of the top `k²` eigenvalues.
pub const CHANNEL_TOLERANCE: f64 = 0.10;

/// `p = round(t·n·k)`, halves rounded away from zero.
pub fn corner_rank(n: usize, k: usize, t: &BigRational) -> usize {
    let x = t * BigRational::from_integer(((n * k) as i64).into());
    let r = x.round();
    r.to_integer().try_into().unwrap_or(0)
}

/// Samples `Φ` and reports the top `k²` eigenvalues of `Φ⊗Φ̄(Bell)`.
///
/// Sample `s` uses stream `rng.stream + s`. The `k²` eigenvalues come from
/// the `k²×k²` Gram matrix `W*W`; the residual is the top eigenvalue of
/// `W W*` restricted to the complement of their eigenvectors.
pub fn channel_demo(n: usize, k: usize, t: &BigRational, samples: usize, rng: RngSpec) -> Result<ChannelReport> {
    if n == 0 || k == 0 || samples == 0 {
        return Err(Error::InvalidArgument("n, k and samples must be positive".into()));
    }
    check_cap("n*k", n * k, MAX_CHANNEL_NK)?;
    if !t.is_positive() || *t > BigRational::one() {
        return Err(Error::InvalidArgument(format!("t = {t} must lie in (0, 1]")));
    }
    let p = corner_rank(n, k, t);
    if p.is_zero() {
        return Err(Error::InvalidArgument(format!("t = {t} gives an empty corner")));
    }
    let kk = k * k;
    let per_sample: Vec<ChannelSample> = (0..samples)
        .map(|s| {
            let spec = rng.with_stream(rng.stream.wrapping_add(s as u64));
            let u = sample_haar_unitary_with(n * k, &mut spec.rng());
            let v: Vec<Vec<Complex64>> = (0..n * k).map(|i| (0..p).map(|j| u[(i, j)]).collect()).collect();
            one_sample(&v, n, k, p, spec.stream)
        })
        .collect();
    let mut eigenvalues = vec![0.0; kk];
    for s in &per_sample {
        for (acc, e) in eigenvalues.iter_mut().zip(&s.eigenvalues) {
            *acc += e / samples as f64;
        }
    }
    let expected = limit_spectrum(k, rational_to_f64(t));
    let relative_errors: Vec<f64> = eigenvalues
        .iter()
        .zip(&expected)
        .map(|(e, g)| if *g > 0.0 { (e - g).abs() / g } else { e.abs() })
        .collect();
    let residual = per_sample.iter().map(|s| s.residual).fold(0.0, f64::max);
    let within_tolerance = relative_errors.iter().all(|r| *r <= CHANNEL_TOLERANCE);
    let residual_small = residual < 0.5 * eigenvalues[kk - 1];
    Ok(ChannelReport {
        n,
        k,
        t: t.to_string(),
        p,
        samples,
        seed: rng.seed,
        eigenvalues,
        expected,
        relative_errors,
        residual,
        within_tolerance,
        residual_small,
        passed: within_tolerance && residual_small,
        per_sample,
    })
}

fn one_sample(v: &[Vec<Complex64>], n: usize, k: usize, p: usize, stream: u64) -> ChannelSample {
    let kk = k * k;
    let w = bell_factor(v, n, k, p);
    let gram: Vec<Vec<Complex64>> = (0..kk).map(|i| (0..kk).map(|j| dot(&w[i], &w[j])).collect()).collect();
    let apply_gram = |x: &[Complex64]| -> Vector {
        gram.iter().map(|row| row.iter().zip(x).map(|(g, y)| g * y).sum()).collect()
    };
    let top = top_eigen(kk, kk, apply_gram);
    let trace: f64 = (0..kk).map(|i| gram[i][i].re).sum();

    // eigenvectors of W W* are W g / √λ
    let lifted: Vec<Vector> = top
        .iter()
        .filter(|(lambda, _)| *lambda > 1e-14)
        .map(|(lambda, g)| {
            let mut x = vec![Complex64::new(0.0, 0.0); n * n];
            for (col, gi) in w.iter().zip(g) {
                for (xi, ci) in x.iter_mut().zip(col) {
                    *xi += ci * gi;
                }
            }
            let s = lambda.sqrt();
            x.iter_mut().for_each(|xi| *xi /= s);
            x
        })
        .collect();
    let mut basis: Vec<Vector> = Vec::new();
    for mut x in lifted {
        project_out(&mut x, &basis);
        let s = norm(&x);
        if s > 1e-8 {
            x.iter_mut().for_each(|xi| *xi /= s);
            basis.push(x);
        }
    }
    let apply_full = |x: &[Complex64]| -> Vector {
        let coeffs: Vec<Complex64> = w.iter().map(|col| dot(col, x)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for (col, c) in w.iter().zip(&coeffs) {
            for (o, ci) in out.iter_mut().zip(col) {
                *o += ci * c;
            }
        }
        out
    };
    let residual = dominant(n * n, &basis, apply_full).map_or(0.0, |(l, _)| l.max(0.0));

    ChannelSample {
        stream,
        eigenvalues: {
            let mut e: Vec<f64> = top.iter().map(|(l, _)| *l).collect();
            e.sort_by(|a, b| b.total_cmp(a));
            e
        },
        residual,
        trace,
    }
}
