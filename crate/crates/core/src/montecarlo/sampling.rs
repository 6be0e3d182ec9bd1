use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Seed and stream of a ChaCha8 generator.
///
/// The same `(seed, stream)` yields the same sample sequence on every run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec { seed, stream: 0 }
    }

    pub fn with_stream(self, stream: u64) -> Self {
        RngSpec { stream, ..self }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// Standard normal deviate by the Marsaglia polar method.
///
/// Each accepted pair yields two deviates; only the first is returned so
/// that the stream position depends on nothing but the call count.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let u = 2.0 * rng.gen::<f64>() - 1.0;
        let v = 2.0 * rng.gen::<f64>() - 1.0;
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Standard complex normal: `E|z|² = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(standard_normal(rng) * s, standard_normal(rng) * s)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(i, l)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(l, j)];
                }
            }
        }
        out
    }

    /// `max |(A*A - I)_ij|`
    pub fn unitarity_error(&self) -> f64 {
        let g = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for i in 0..g.rows {
            for j in 0..g.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g[(i, j)] - target).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Is every entry real (imaginary part exactly zero)?
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format!("{:.4}", self[(i, j)])).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Householder QR of a square matrix: returns `Q` and the diagonal of `R`.
///
/// Each reflection maps the current column onto `-e^{iθ}‖x‖ e_1`, where
/// `θ` is the phase of the pivot, so the diagonal of `R` is generally not
/// positive. Real input stays real.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let n = a.rows();
    assert_eq!(n, a.cols(), "square input");
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut diag = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        let norm = (j..n).map(|i| r[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        let x0 = r[(j, j)];
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * norm;
        diag[j] = alpha;
        let mut v: Vec<Complex64> = (j..n).map(|i| r[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            diag[j] = x0;
            continue;
        }
        for z in &mut v {
            *z /= vnorm;
        }
        // R <- (I - 2 v v*) R on rows j.., columns j..
        for c in j..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * r[(j + t, c)]).sum();
            for (t, vt) in v.iter().enumerate() {
                r[(j + t, c)] -= 2.0 * vt * dot;
            }
        }
        // Q <- Q (I - 2 v v*) on columns j..
        for row in 0..n {
            let dot: Complex64 = v.iter().enumerate().map(|(t, vt)| q[(row, j + t)] * vt).sum();
            for (t, vt) in v.iter().enumerate() {
                q[(row, j + t)] -= 2.0 * dot * vt.conj();
            }
        }
    }
    (q, diag)
}

fn phase_fixed(a: &ComplexMatrix) -> ComplexMatrix {
    let (mut q, diag) = householder_qr(a);
    let n = q.rows();
    for (j, d) in diag.iter().enumerate() {
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

/// Ginibre matrix with iid standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_normal(rng))
}

/// Haar-distributed `U ∈ U(n)`: QR of a Ginibre matrix, then each column
/// of `Q` is multiplied by the phase of the matching diagonal entry of `R`
/// so that the effective `R` has a positive diagonal.
pub fn sample_haar_unitary_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    phase_fixed(&ginibre(n, rng))
}

/// Haar-distributed `O ∈ O(n)`, returned with zero imaginary parts.
pub fn sample_haar_orthogonal_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(standard_normal(rng), 0.0));
    phase_fixed(&g)
}

pub fn sample_haar_unitary(n: usize, spec: RngSpec) -> ComplexMatrix {
    sample_haar_unitary_with(n, &mut spec.rng())
}

pub fn sample_haar_orthogonal(n: usize, spec: RngSpec) -> ComplexMatrix {
    sample_haar_orthogonal_with(n, &mut spec.rng())
}

/// `Q` from the QR of a Ginibre matrix without the phase correction. Not
/// Haar distributed; exposed for testing the correction.
pub fn sample_unitary_unfixed_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    householder_qr(&ginibre(n, rng)).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism() {
        let a = sample_haar_unitary(4, RngSpec::new(7));
        let b = sample_haar_unitary(4, RngSpec::new(7));
        let c = sample_haar_unitary(4, RngSpec::new(7).with_stream(1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitarity() {
        let mut rng = RngSpec::new(1).rng();
        for n in [1, 2, 5, 20] {
            let u = sample_haar_unitary_with(n, &mut rng);
            assert!(u.unitarity_error() < 1e-10, "n={n}");
            let o = sample_haar_orthogonal_with(n, &mut rng);
            assert!(o.is_real());
            assert!(o.unitarity_error() < 1e-10);
        }
    }

    #[test]
    fn qr_reconstructs() {
        let mut rng = RngSpec::new(3).rng();
        let a = ginibre(5, &mut rng);
        let (q, d) = householder_qr(&a);
        let r = q.adjoint().mul(&a);
        for i in 0..5 {
            assert!((r[(i, i)] - d[i]).norm() < 1e-10);
            for j in 0..i {
                assert!(r[(i, j)].norm() < 1e-10, "R is not upper triangular");
            }
        }
    }

    #[test]
    fn circle_sample() {
        let z = sample_haar_unitary(1, RngSpec::new(11))[(0, 0)];
        assert!((z.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn polar_normal_moments() {
        let mut rng = RngSpec::new(5).rng();
        let xs: Vec<f64> = (0..200_000).map(|_| standard_normal(&mut rng)).collect();
        let m = xs.iter().sum::<f64>() / xs.len() as f64;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64;
        assert!(m.abs() < 0.01);
        assert!((v - 1.0).abs() < 0.02);
    }

    /// The phase correction is what makes `u11` centred: without it the
    /// first column is `-x/‖x‖` times a positive real, so `u11` is real
    /// and negative.
    #[test]
    fn phase_fix_is_required() {
        let mut rng = RngSpec::new(9).rng();
        let samples = 20_000;
        let mut fixed = Complex64::new(0.0, 0.0);
        let mut raw = Complex64::new(0.0, 0.0);
        for _ in 0..samples {
            fixed += sample_haar_unitary_with(2, &mut rng)[(0, 0)];
            raw += sample_unitary_unfixed_with(2, &mut rng)[(0, 0)];
        }
        let fixed = fixed / samples as f64;
        let raw = raw / samples as f64;
        // SE of the mean is about sqrt(1/2 / samples) = 0.005
        assert!(fixed.norm() < 0.025, "{fixed}");
        assert!(raw.norm() > 0.3, "{raw}");
    }

    /// The determinant phase of a Haar unitary is uniform on the circle:
    /// `E[det^m] = 0` for `m = 1, 2`.
    #[test]
    fn determinant_phase_uniform() {
        let mut rng = RngSpec::new(13).rng();
        let samples = 20_000;
        let (mut m1, mut m2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let (mut r1, mut r2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        let det = |u: &ComplexMatrix| u[(0, 0)] * u[(1, 1)] - u[(0, 1)] * u[(1, 0)];
        for _ in 0..samples {
            let d = det(&sample_haar_unitary_with(2, &mut rng));
            m1 += d;
            m2 += d * d;
            let d = det(&sample_unitary_unfixed_with(2, &mut rng));
            r1 += d;
            r2 += d * d;
        }
        let s = samples as f64;
        assert!((m1 / s).norm() < 0.04 && (m2 / s).norm() < 0.04);
        // two Householder reflections: the raw determinant is always 1
        assert!((r1 / s - 1.0).norm() < 1e-9 && (r2 / s - 1.0).norm() < 1e-9);
    }
}
