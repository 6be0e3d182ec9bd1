use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{sample_haar_orthogonal_with, sample_haar_unitary_with, ComplexMatrix, RngSpec};
use crate::error::{Error, Result};
use crate::haar_integrate::{integrate_with, Dimension, MomentQuery};
use crate::weingarten::{GroupKind, TableCache};

/// Samples per parallel chunk. Chunk `i` draws from its own ChaCha8 stream,
/// so results do not depend on the number of worker threads.
pub const CHUNK: usize = 1024;

/// Largest matrix size accepted by the samplers used in the estimators.
pub const MAX_SAMPLE_N: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentEstimate {
    pub mean: Complex64,
    /// Sample standard deviation (Bessel-corrected) over `√samples`.
    pub std_error: f64,
    pub samples: usize,
}

impl MomentEstimate {
    /// `|mean − exact| / std_error`; zero when both the error and the
    /// deviation vanish.
    pub fn z_score(&self, exact: Complex64) -> f64 {
        let d = (self.mean - exact).norm();
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn chunk_rng(spec: RngSpec, chunk: usize) -> ChaCha8Rng {
    RngSpec {
        seed: spec.seed,
        stream: (spec.stream << 32) | chunk as u64,
    }
    .rng()
}

fn pairwise_sum<T: Copy + std::ops::Add<Output = T>>(xs: &[T], zero: T) -> T {
    match xs.len() {
        0 => zero,
        1 => xs[0],
        len => {
            let (a, b) = xs.split_at(len / 2);
            pairwise_sum(a, zero) + pairwise_sum(b, zero)
        }
    }
}

/// Runs `f` on `samples` draws, chunked over rayon, and returns the per-draw
/// values in draw order.
fn parallel_draws<T, F>(samples: usize, spec: RngSpec, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let per_chunk: Vec<Vec<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(spec, c);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect()
        })
        .collect();
    per_chunk.into_iter().flatten().collect()
}

fn summarize(values: &[Complex64]) -> MomentEstimate {
    let samples = values.len();
    let zero = Complex64::new(0.0, 0.0);
    let mean = pairwise_sum(values, zero) / samples as f64;
    let dev: Vec<f64> = values.iter().map(|v| (v - mean).norm_sqr()).collect();
    let var = if samples > 1 {
        pairwise_sum(&dev, 0.0) / (samples - 1) as f64
    } else {
        0.0
    };
    MomentEstimate {
        mean,
        std_error: (var / samples as f64).sqrt(),
        samples,
    }
}

fn check_query(q: &MomentQuery, n: usize) -> Result<()> {
    if q.group == GroupKind::FreeOrthogonal {
        return Err(Error::Unsupported(
            "the free orthogonal quantum group has no matrix model to sample; use `integrate` for exact moments"
                .into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    crate::error::check_cap("n", n, MAX_SAMPLE_N)?;
    if let Some(f) = q.factors.iter().find(|f| f.row > n || f.col > n) {
        return Err(Error::InvalidArgument(format!("{f} is out of range for n = {n}")));
    }
    Ok(())
}

fn evaluate_monomial(q: &MomentQuery, u: &ComplexMatrix) -> Complex64 {
    q.factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| {
        let z = u[(f.row - 1, f.col - 1)];
        acc * if f.conjugated { z.conj() } else { z }
    })
}

fn sampler(group: GroupKind) -> fn(usize, &mut ChaCha8Rng) -> ComplexMatrix {
    match group {
        GroupKind::Orthogonal => sample_haar_orthogonal_with,
        _ => sample_haar_unitary_with,
    }
}

/// Empirical mean of the monomial `q` over `samples` Haar matrices of size
/// `n`. The dimension stored in `q` is ignored.
///
/// Draws are split into chunks of [`CHUNK`]; chunk `i` uses stream
/// `(rng.stream << 32) | i`, and sums are pairwise in draw order, so the
/// result is bit-for-bit reproducible for a given `rng`.
pub fn estimate_moment(q: &MomentQuery, n: usize, samples: usize, rng: RngSpec) -> Result<MomentEstimate> {
    check_query(q, n)?;
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive".into()));
    }
    let draw = sampler(q.group);
    let values = parallel_draws(samples, rng, |r| evaluate_monomial(q, &draw(n, r)));
    Ok(summarize(&values))
}

/// Machine-readable result of one Monte-Carlo moment check.
#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub query: String,
    pub group: GroupKind,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub stream: u64,
    pub estimate_re: f64,
    pub estimate_im: f64,
    pub se: f64,
    pub exact: String,
    pub exact_f64: f64,
    pub z: f64,
    pub passed: bool,
}

/// Accepted deviation, in standard errors.
pub const Z_TOLERANCE: f64 = 5.0;

/// Runs [`estimate_moment`] and compares with the exact integral at `n`.
pub fn moment_report(
    cache: &TableCache,
    q: &MomentQuery,
    n: usize,
    samples: usize,
    rng: RngSpec,
) -> Result<MomentReport> {
    let est = estimate_moment(q, n, samples, rng)?;
    let exact_q = q.clone().with_n(Dimension::Integer(n as i64));
    let exact = integrate_with(cache, &exact_q)?;
    let value = exact.as_constant().ok_or_else(|| {
        Error::InvalidArgument(format!("integral at n = {n} did not reduce to a number"))
    })?;
    let exact_f64 = rational_to_f64(&value);
    let z = est.z_score(Complex64::new(exact_f64, 0.0));
    Ok(MomentReport {
        query: q.monomial(),
        group: q.group,
        n,
        samples,
        seed: rng.seed,
        stream: rng.stream,
        estimate_re: est.mean.re,
        estimate_im: est.mean.im,
        se: est.std_error,
        exact: value.to_string(),
        exact_f64,
        z,
        passed: z <= Z_TOLERANCE,
    })
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Fixed agreement set: `(group, monomial, n)` spanning degrees 2 to 6.
pub const GOLDEN_SET: [(GroupKind, &str, usize); 12] = [
    (GroupKind::Unitary, "u[1,1] ~u[1,1]", 5),
    (GroupKind::Unitary, "u[1,1] u[1,1] ~u[1,1] ~u[1,1]", 10),
    (GroupKind::Unitary, "u[1,1] u[2,2] ~u[1,2] ~u[2,1]", 10),
    (GroupKind::Unitary, "u[1,2] u[2,1] ~u[1,2] ~u[2,1]", 5),
    (GroupKind::Unitary, "u[1,1] u[2,2] u[3,3] ~u[1,1] ~u[2,2] ~u[3,3]", 5),
    (GroupKind::Unitary, "u[1,1] u[1,1] u[1,1] ~u[1,1] ~u[1,1] ~u[1,1]", 20),
    (GroupKind::Orthogonal, "u[1,1] u[1,1]", 5),
    (GroupKind::Orthogonal, "u[1,1] u[1,2] u[2,2]", 20),
    (GroupKind::Orthogonal, "u[1,1] u[1,1] u[1,1] u[1,1]", 10),
    (GroupKind::Orthogonal, "u[1,1] u[2,2] u[1,2] u[2,1]", 5),
    (GroupKind::Orthogonal, "u[1,1] u[1,1] u[2,2] u[2,2] u[3,3] u[3,3]", 20),
    (GroupKind::Orthogonal, "u[1,1] u[1,1] u[1,1] u[1,1] u[1,1] u[1,1]", 10),
];

/// [`GOLDEN_SET`] as parsed queries with their matrix sizes.
pub fn golden_set() -> Vec<(MomentQuery, usize)> {
    GOLDEN_SET
        .iter()
        .map(|(g, text, n)| {
            let q = crate::haar_integrate::parse_monomial(text).expect("golden monomials parse");
            (q.with_group(*g), *n)
        })
        .collect()
}

/// Queries of degree `2k` used by the command-line MC check: three unitary
/// monomials with `k` plain and `k` conjugated factors and three
/// orthogonal monomials with `2k` factors. Indices stay below `k + 1`.
pub fn degree_queries(k: usize) -> Vec<MomentQuery> {
    let join = |parts: Vec<String>| parts.join(" ");
    let rep = |s: &str, m: usize| vec![s.to_string(); m];
    let mut texts = vec![
        (GroupKind::Unitary, join([rep("u[1,1]", k), rep("~u[1,1]", k)].concat())),
        (
            GroupKind::Unitary,
            join(
                (1..=k)
                    .map(|i| format!("u[{i},{i}]"))
                    .chain((1..=k).map(|i| format!("~u[{i},{}]", i % k + 1)))
                    .collect(),
            ),
        ),
        (
            GroupKind::Unitary,
            join([rep("u[1,1]", 1), rep("u[1,2]", k - 1), rep("~u[1,1]", 1), rep("~u[1,2]", k - 1)].concat()),
        ),
        (GroupKind::Orthogonal, join(rep("u[1,1]", 2 * k))),
        (
            GroupKind::Orthogonal,
            join((1..=k).flat_map(|i| [format!("u[{i},{i}]"), format!("u[{i},{i}]")]).collect()),
        ),
    ];
    if k >= 2 {
        texts.push((
            GroupKind::Orthogonal,
            join([rep("u[1,1]", 2 * k - 2), rep("u[1,2]", 1), rep("u[2,1]", 1)].concat()),
        ));
    }
    texts
        .into_iter()
        .map(|(g, t)| crate::haar_integrate::parse_monomial(&t).expect("generated monomials parse").with_group(g))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentRow {
    pub order: u32,
    pub empirical: f64,
    pub expected: f64,
    pub se: f64,
    pub z: f64,
}

/// Moments 1 to 4 of `Re Tr(O)` for Haar `O ∈ O(n)` against the standard
/// Gaussian moments `(0, 1, 0, 3)`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceCltReport {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub stream: u64,
    pub moments: Vec<MomentRow>,
    pub passed: bool,
}

pub fn trace_clt_demo(n: usize, samples: usize, rng: RngSpec) -> Result<TraceCltReport> {
    if n == 0 || samples < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and at least 2 samples".into()));
    }
    crate::error::check_cap("n", n, MAX_SAMPLE_N)?;
    let traces = parallel_draws(samples, rng, |r| sample_haar_orthogonal_with(n, r).trace().re);
    let expected = [0.0, 1.0, 0.0, 3.0];
    let moments: Vec<MomentRow> = (1..=4u32)
        .map(|p| {
            let powers: Vec<Complex64> = traces.iter().map(|x| Complex64::new(x.powi(p as i32), 0.0)).collect();
            let est = summarize(&powers);
            let want = expected[p as usize - 1];
            MomentRow {
                order: p,
                empirical: est.mean.re,
                expected: want,
                se: est.std_error,
                z: est.z_score(Complex64::new(want, 0.0)),
            }
        })
        .collect();
    let passed = moments.iter().all(|m| m.z <= Z_TOLERANCE);
    Ok(TraceCltReport {
        n,
        samples,
        seed: rng.seed,
        stream: rng.stream,
        moments,
        passed,
    })
}
