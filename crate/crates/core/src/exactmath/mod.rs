//! Exact arithmetic: integer polynomials and rational functions in the
//! indeterminate `n`, and dense linear algebra over `Q` and `Q(n)`.
//!
//! Rationals are `num_rational::BigRational`, always in lowest terms.

mod matrix;
mod poly;
mod ratfunc;

pub use matrix::{ExactMatrix, Field, RingElem};
pub use num_rational::BigRational;
pub use poly::IntPolynomial;
pub use ratfunc::{format_rational, RationalFunction};


use crate::error::Result;

/// Binary operation selector for [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact arithmetic on two rational functions; the result is normalized.
pub fn poly_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

/// Value of `f` at the integer `n0`; errors at poles.
pub fn evaluate_at(f: &RationalFunction, n0: i64) -> Result<BigRational> {
    f.evaluate_at(n0)
}

/// Rational from a pair of machine integers.
pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(numer.into(), denom.into())
}
