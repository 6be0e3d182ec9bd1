use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Exact ratio of integer polynomials in `n`, kept in lowest terms.
///
/// Normal form: `gcd(numer, denom) = 1` over Q, the combined content of
/// numerator and denominator is 1, and `denom` has a positive leading
/// coefficient. Zero is `0 / 1`. Two equal rational functions therefore
/// have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    numer: IntPolynomial,
    denom: IntPolynomial,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            numer: IntPolynomial::zero(),
            denom: IntPolynomial::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(IntPolynomial::one())
    }

    /// The indeterminate `n`.
    pub fn n() -> Self {
        Self::from_poly(IntPolynomial::n())
    }

    pub fn n_pow(d: usize) -> Self {
        Self::from_poly(IntPolynomial::monomial(BigInt::one(), d))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(IntPolynomial::constant(c.into()))
    }

    pub fn from_poly(p: IntPolynomial) -> Self {
        RationalFunction {
            numer: p,
            denom: IntPolynomial::one(),
        }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        RationalFunction {
            numer: IntPolynomial::constant(q.numer().clone()),
            denom: IntPolynomial::constant(q.denom().clone()),
        }
    }

    /// Build `numer / denom` and reduce to normal form.
    pub fn new(numer: IntPolynomial, denom: IntPolynomial) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(numer, denom))
    }

    fn normalized(numer: IntPolynomial, denom: IntPolynomial) -> Self {
        if numer.is_zero() {
            return Self::zero();
        }
        let (mut numer, mut denom) = if denom.is_constant() {
            (numer, denom)
        } else {
            let g = numer.gcd(&denom);
            if g.is_one() {
                (numer, denom)
            } else {
                (
                    numer.div_exact(&g).expect("gcd divides numerator"),
                    denom.div_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let c = numer.content().gcd(&denom.content());
        if !c.is_one() {
            numer = numer.div_exact(&IntPolynomial::constant(c.clone())).unwrap();
            denom = denom.div_exact(&IntPolynomial::constant(c)).unwrap();
        }
        if denom.leading_coeff().is_negative() {
            numer = numer.neg();
            denom = denom.neg();
        }
        RationalFunction { numer, denom }
    }

    pub fn numer(&self) -> &IntPolynomial {
        &self.numer
    }

    pub fn denom(&self) -> &IntPolynomial {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.numer.is_one() && self.denom.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom.is_constant()
    }

    /// Constant value, if the function does not depend on `n`.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.numer.is_constant() && self.denom.is_constant() {
            Some(BigRational::new(self.numer.coeff(0), self.denom.coeff(0)))
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            numer: self.numer.neg(),
            denom: self.denom.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.denom == other.denom {
            return Self::normalized(self.numer.add(&other.numer), self.denom.clone());
        }
        let g = self.denom.gcd(&other.denom);
        // g is primitive, so it divides both denominators in Z[n]
        let b = self.denom.div_exact(&g).expect("gcd divides denominator");
        let d = other.denom.div_exact(&g).expect("gcd divides denominator");
        let numer = self.numer.mul(&d).add(&other.numer.mul(&b));
        Self::normalized(numer, b.mul(&other.denom))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        Self::normalized(
            self.numer.mul(&other.numer),
            self.denom.mul(&other.denom),
        )
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(self.denom.clone(), self.numer.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.mul(&Self::from_int(c))
    }

    /// Exact value at the rational point `x`.
    pub fn evaluate_rational(&self, x: &BigRational) -> Result<BigRational> {
        let (dn, dd) = self.denom.eval_homogeneous(x);
        if dn.is_zero() {
            return Err(Error::Pole { at: x.to_string() });
        }
        let (nn, nd) = self.numer.eval_homogeneous(x);
        Ok(BigRational::new(nn * dd, nd * dn))
    }

    /// Exact value at the integer point `n0`.
    pub fn evaluate_at(&self, n0: i64) -> Result<BigRational> {
        let x = BigInt::from(n0);
        let d = self.denom.eval_int(&x);
        if d.is_zero() {
            return Err(Error::Pole { at: n0.to_string() });
        }
        Ok(BigRational::new(self.numer.eval_int(&x), d))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.numer.eval_f64(x) / self.denom.eval_f64(x)
    }

    /// `(numer sparse) / (denom sparse)`, the cache-file encoding.
    pub fn to_sparse_string(&self) -> String {
        format!(
            "{} / {}",
            self.numer.to_sparse_string(),
            self.denom.to_sparse_string()
        )
    }

    pub fn parse_sparse(text: &str) -> Result<Self> {
        let (a, b) = text
            .split_once(" / ")
            .ok_or_else(|| Error::Parse(format!("expected 'numer / denom', got {text:?}")))?;
        Self::new(
            IntPolynomial::parse_sparse(a)?,
            IntPolynomial::parse_sparse(b)?,
        )
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<IntPolynomial> for RationalFunction {
    fn from(p: IntPolynomial) -> Self {
        Self::from_poly(p)
    }
}

fn needs_parens(p: &IntPolynomial) -> bool {
    p.term_count() > 1
}

impl fmt::Display for RationalFunction {
    /// `-1/(n^3-n)`, `1/n`, `3/(n^2+2n)`, `(n^2+n)/2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom.is_one() {
            return write!(f, "{}", self.numer);
        }
        if needs_parens(&self.numer) {
            write!(f, "({})", self.numer)?;
        } else {
            write!(f, "{}", self.numer)?;
        }
        let d = &self.denom;
        let bare = d.term_count() == 1
            && (d.is_constant() || d.leading_coeff().is_one());
        if bare {
            write!(f, "/{d}")
        } else {
            write!(f, "/({d})")
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

/// Display an exact rational the way the CLI prints numbers: `-1/24`, `0`.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
