use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial in `n` with integer coefficients.
///
/// `coeffs[d]` is the coefficient of `n^d`. The vector never carries a
/// trailing zero, so the zero polynomial is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    /// The indeterminate `n`.
    pub fn n() -> Self {
        Self::monomial(BigInt::one(), 1)
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigInt, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c;
        IntPolynomial { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `n + c`
    pub fn linear(c: i64) -> Self {
        Self::from_i64s(&[c, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Nonnegative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            self.clone()
        } else {
            self.div_scalar_exact(&c)
        }
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for d in 0..len {
            out.push(match (self.coeffs.get(d), other.coeffs.get(d)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(len);
        for d in 0..len {
            out.push(match (self.coeffs.get(d), other.coeffs.get(d)) {
                (Some(a), Some(b)) => a - b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => -b,
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `n^shift`.
    pub fn shift(&self, shift: usize) -> Self {
        if self.is_zero() || shift == 0 {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); shift];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|x| x / c).collect(),
        }
    }

    /// Quotient `self / divisor` when the division is exact in Z[n].
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = divisor.degree().unwrap();
        if divisor.coeffs.len() == 1 {
            let c = &divisor.coeffs[0];
            return if self.coeffs.iter().all(|x| x.is_multiple_of(c)) {
                Some(self.div_scalar_exact(c))
            } else {
                None
            };
        }
        let sd = self.degree().unwrap();
        if sd < dd {
            return None;
        }
        let lc = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(Self::from_coeffs(quot))
        } else {
            None
        }
    }

    /// `lc(b)^e * self mod b` where e makes the division fraction-free.
    fn pseudo_rem(&self, b: &Self) -> Self {
        let db = b.degree().expect("pseudo_rem by zero");
        let lc = b.leading_coeff();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let top = r.leading_coeff();
            let g = top.gcd(&lc);
            let scale_r = &lc / &g;
            let scale_b = &top / &g;
            r = r.scale(&scale_r).sub(&b.shift(dr - db).scale(&scale_b));
        }
        r
    }

    /// Greatest common divisor over Q, returned primitive with positive
    /// leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part().normalize_sign();
        }
        if other.is_zero() {
            return self.primitive_part().normalize_sign();
        }
        if self.is_constant() || other.is_constant() {
            return Self::one();
        }
        // common power of n
        let low = self.low_degree().unwrap().min(other.low_degree().unwrap());
        let (mut a, mut b) = (
            IntPolynomial::from_coeffs(self.coeffs[low..].to_vec()).primitive_part(),
            IntPolynomial::from_coeffs(other.coeffs[low..].to_vec()).primitive_part(),
        );
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        if a.div_exact(&b).is_some() {
            return b.normalize_sign().shift(low);
        }
        while !b.is_zero() {
            if b.is_constant() {
                return Self::one().shift(low);
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.normalize_sign().shift(low)
    }

    /// Greatest common divisor in Z[n] (content included).
    pub fn gcd_z(&self, other: &Self) -> Self {
        let c = self.content().gcd(&other.content());
        if c.is_zero() {
            return Self::zero();
        }
        self.gcd(other).scale(&c)
    }

    fn normalize_sign(self) -> Self {
        if self.leading_coeff().is_negative() {
            self.neg()
        } else {
            self
        }
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Value at `x = p/q`, returned as the pair `(q^deg * f(x), q^deg)`.
    pub fn eval_homogeneous(&self, x: &BigRational) -> (BigInt, BigInt) {
        if self.is_zero() {
            return (BigInt::zero(), BigInt::one());
        }
        let p = x.numer();
        let q = x.denom();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        // qpow overshoots q^deg by one factor
        let denom = qpow / q;
        (acc, denom)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        if x.is_integer() {
            return BigRational::from_integer(self.eval_int(x.numer()));
        }
        let (num, den) = self.eval_homogeneous(x);
        BigRational::new(num, den)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + bigint_to_f64(c);
        }
        acc
    }

    /// Sparse serialization `c*n^d + c*n^d + ...`, ascending degree, `0`
    /// for the zero polynomial.
    pub fn to_sparse_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| format!("{c}*n^{d}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn parse_sparse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "0" {
            return Ok(Self::zero());
        }
        let mut acc = Self::zero();
        for term in text.split(" + ") {
            let term = term.trim();
            let (c, d) = term
                .split_once("*n^")
                .ok_or_else(|| Error::Parse(format!("bad polynomial term {term:?}")))?;
            let c: BigInt = c
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            let d: usize = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent {d:?}")))?;
            acc = acc.add(&Self::monomial(c, d));
        }
        Ok(acc)
    }
}

pub(crate) fn bigint_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

impl fmt::Display for IntPolynomial {
    /// Descending degree, explicit `^`, implicit multiplication:
    /// `n^3-n`, `n^2+2n`, `-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match d {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if d == 1 {
                        write!(f, "n")?;
                    } else {
                        write!(f, "n^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn display_matches_golden_forms() {
        assert_eq!(p(&[0, -1, 0, 1]).to_string(), "n^3-n");
        assert_eq!(p(&[0, 2, 1]).to_string(), "n^2+2n");
        assert_eq!(p(&[-1]).to_string(), "-1");
        assert_eq!(p(&[]).to_string(), "0");
        assert_eq!(p(&[3, 0, -2]).to_string(), "-2n^2+3");
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let a = p(&[-1, 0, 1]); // n^2 - 1
        let b = p(&[-2, 2]); // 2n - 2
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(a.gcd_z(&b), p(&[-1, 1]));
        assert_eq!(p(&[0, 0, 4]).gcd_z(&p(&[0, 6])), p(&[0, 2]));
    }

    #[test]
    fn gcd_coprime_is_one() {
        assert_eq!(p(&[1, 1]).gcd(&p(&[-1, 1])), IntPolynomial::one());
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&p(&[1, 1])), Some(p(&[-1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
        assert_eq!(p(&[2, 4]).div_exact(&p(&[2])), Some(p(&[1, 2])));
        assert_eq!(p(&[3, 4]).div_exact(&p(&[2])), None);
    }

    #[test]
    fn sparse_round_trip() {
        let a = p(&[5, 0, -3, 0, 0, 12]);
        let s = a.to_sparse_string();
        assert_eq!(s, "5*n^0 + -3*n^2 + 12*n^5");
        assert_eq!(IntPolynomial::parse_sparse(&s).unwrap(), a);
        assert!(IntPolynomial::parse_sparse("3n^2").is_err());
    }

    #[test]
    fn rational_evaluation() {
        let a = p(&[1, 0, 4]); // 4n^2 + 1 at 5/2 -> 26
        let x = BigRational::new(5.into(), 2.into());
        assert_eq!(a.eval_rational(&x), BigRational::from_integer(26.into()));
        let b = p(&[0, 1]);
        assert_eq!(b.eval_rational(&x), x);
    }
}
