use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::exactmath::format_rational;
use crate::symmetric::{Partition, Permutation};

use super::cache::TableCache;
use super::gram::MAX_FREE_K_NUMERIC;
use super::table::{catalan, GroupKind, Mode, WeingartenTable};

/// `Moeb(σ)`, the leading coefficient of `n^{k+|σ|} Wg(n, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MoebiusValue(i64);

impl MoebiusValue {
    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for MoebiusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `Moeb(σ) = Π_c (-1)^{|c|-1} Catalan(|c|-1)` over the cycles of `σ`.
pub fn moebius(sigma: &Permutation) -> MoebiusValue {
    moebius_of_class(&sigma.cycle_type())
}

pub fn moebius_of_class(class: &Partition) -> MoebiusValue {
    MoebiusValue(class.parts().iter().fold(1i64, |acc, &len| {
        let c = catalan(len - 1) as i64;
        acc * if len % 2 == 1 { c } else { -c }
    }))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn pow(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Exact `Wg(n0, σ)` from the symbolic table, refusing `n0 < k`.
pub(crate) fn wg_at(table: &WeingartenTable, sigma: &Permutation, n0: i64) -> Result<BigRational> {
    if n0 < table.k() as i64 {
        return Err(Error::Pole {
            at: format!("{n0} (symbolic values are valid for n >= {})", table.k()),
        });
    }
    table.unitary_value(sigma)?.evaluate_at(n0)
}

fn symbolic_unitary(k: usize) -> Result<std::sync::Arc<WeingartenTable>> {
    TableCache::global().get(GroupKind::Unitary, k, &Mode::Symbolic)
}

/// `n0^{k+|σ|} Wg(n0, σ) / Moeb(σ)`.
pub fn asymptotic_ratio(sigma: &Permutation, n0: i64) -> Result<BigRational> {
    let table = symbolic_unitary(sigma.degree())?;
    asymptotic_ratio_with(&table, sigma, n0)
}

pub fn asymptotic_ratio_with(
    table: &WeingartenTable,
    sigma: &Permutation,
    n0: i64,
) -> Result<BigRational> {
    let wg = wg_at(table, sigma, n0)?;
    let scale = pow(&int(n0), sigma.degree() + sigma.length());
    Ok(wg * scale / int(moebius(sigma).value()))
}

/// One class of a [`BoundReport`].
#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub class: String,
    pub ratio: String,
    pub lower: String,
    pub lower_ok: bool,
    /// Whether `n0^4 > 36 k^7`, the range where the upper bound is claimed.
    pub upper_applicable: bool,
    pub upper_ok: bool,
    /// `ratio` equals the lower bound.
    pub lower_tight: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub k: usize,
    pub n0: i64,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.lower_ok && r.upper_ok)
    }
}

/// Largest degree for [`uniform_bound_check`].
pub const MAX_BOUNDS_K: usize = 6;

/// Exact check of
/// `1/(1 - (k-1)/n²) <= n^{k+|σ|} Wg(n, σ)/Moeb(σ) <= 1/(1 - 6k^{7/2}/n²)`
/// on every class of `S_k`; the upper inequality is only tested when
/// `n > √6 k^{7/4}`.
pub fn uniform_bound_check(k: usize, n0: i64) -> Result<BoundReport> {
    check_cap("k", k, MAX_BOUNDS_K)?;
    if k == 0 || n0 < k as i64 {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= n0, got k={k}, n0={n0}")));
    }
    let table = symbolic_unitary(k)?;
    let n = int(n0);
    let n2 = &n * &n;
    let lower = (BigRational::one() - int(k as i64 - 1) / &n2).recip();
    let k7 = BigInt::from(k).pow(7);
    let upper_applicable = BigInt::from(n0).pow(4) > &k7 * 36;
    let mut rows = Vec::new();
    for class in Partition::all(k) {
        let sigma = Permutation::class_representative(&class);
        let ratio = asymptotic_ratio_with(&table, &sigma, n0)?;
        let upper_ok = !upper_applicable || below_upper(&ratio, &n2, k);
        rows.push(BoundRow {
            class: class.to_string(),
            ratio: format_rational(&ratio),
            lower: format_rational(&lower),
            lower_ok: lower <= ratio,
            upper_applicable,
            upper_ok,
            lower_tight: lower == ratio,
        });
    }
    Ok(BoundReport { k, n0, rows })
}

/// `r <= 1/(1 - 6 k^{7/2}/n²)`, assuming the right side is positive.
///
/// Equivalent to `r - 1 <= c √k` with `c = 6 r k³/n²`, which is decided by
/// comparing squares.
fn below_upper(r: &BigRational, n2: &BigRational, k: usize) -> bool {
    let a = r - BigRational::one();
    let c = int(6) * r * int((k as i64).pow(3)) / n2;
    let kq = int(k as i64);
    match (a.is_positive(), c.is_negative()) {
        (false, false) => true,
        (true, true) => false,
        (true, false) => &a * &a <= &c * &c * kq,
        (false, true) => &a * &a >= &c * &c * kq,
    }
}

/// `|Wg(σ₁ ⊔ σ₂) / (Wg(σ₁) Wg(σ₂)) - 1|` at `n0`.
pub fn multiplicativity_defect(s1: &Permutation, s2: &Permutation, n0: i64) -> Result<BigRational> {
    let joint = s1.disjoint_union(s2);
    let w = wg_at(&*symbolic_unitary(joint.degree())?, &joint, n0)?;
    let w1 = wg_at(&*symbolic_unitary(s1.degree())?, s1, n0)?;
    let w2 = wg_at(&*symbolic_unitary(s2.degree())?, s2, n0)?;
    let denom = w1 * w2;
    if denom.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok((w / denom - BigRational::one()).abs())
}

/// Per-class behaviour of `|Wg(n, σ)|` along an integer range.
#[derive(Clone, Debug, Serialize)]
pub struct MonotonicityRow {
    pub class: String,
    /// `+1` or `-1`, or `0` if the sign changes along the range.
    pub sign: i8,
    pub values: Vec<String>,
    pub abs_nonincreasing: bool,
    pub abs_nondecreasing: bool,
}

impl MonotonicityRow {
    pub fn monotone(&self) -> bool {
        self.abs_nonincreasing || self.abs_nondecreasing
    }
}

/// Evaluates every class of `S_k` at `n0 ∈ range` and reports signs and
/// monotonicity of `|Wg|`.
pub fn monotonicity_check(k: usize, range: std::ops::RangeInclusive<i64>) -> Result<Vec<MonotonicityRow>> {
    let table = symbolic_unitary(k)?;
    Partition::all(k)
        .into_iter()
        .map(|class| {
            let sigma = Permutation::class_representative(&class);
            let values: Vec<BigRational> = range
                .clone()
                .map(|n0| wg_at(&table, &sigma, n0))
                .collect::<Result<_>>()?;
            let signs: Vec<BigRational> = values.iter().map(Signed::signum).collect();
            let sign = if signs.iter().all(|s| s.is_positive()) {
                1
            } else if signs.iter().all(|s| s.is_negative()) {
                -1
            } else {
                0
            };
            let abs: Vec<BigRational> = values.iter().map(Signed::abs).collect();
            Ok(MonotonicityRow {
                class: class.to_string(),
                sign,
                values: values.iter().map(format_rational).collect(),
                abs_nonincreasing: abs.windows(2).all(|w| w[1] <= w[0]),
                abs_nondecreasing: abs.windows(2).all(|w| w[1] >= w[0]),
            })
        })
        .collect()
}

/// Result of [`free_sign_survey`].
#[derive(Clone, Debug, Serialize)]
pub struct SurveyReport {
    pub k: usize,
    pub samples: Vec<String>,
    pub entries: usize,
    /// `key @ n0` for every vanishing entry.
    pub zeros: Vec<String>,
    /// `key` for every entry whose absolute value increases between
    /// consecutive sample points.
    pub monotonicity_violations: Vec<String>,
    /// `key` for every entry whose sign changes across the samples.
    pub sign_changes: Vec<String>,
}

impl SurveyReport {
    pub fn passed(&self) -> bool {
        self.zeros.is_empty() && self.monotonicity_violations.is_empty() && self.sign_changes.is_empty()
    }
}

/// Evaluates the free orthogonal Weingarten matrix at each sample point
/// (sorted ascending) and looks for zeros, sign changes and increases of
/// `|W[π, ρ]|`.
pub fn free_sign_survey(k: usize, samples: &[BigRational]) -> Result<SurveyReport> {
    check_cap("k", k, MAX_FREE_K_NUMERIC)?;
    let two = int(2);
    if let Some(bad) = samples.iter().find(|s| **s < two) {
        return Err(Error::InvalidArgument(format!(
            "samples must be >= 2, got {}",
            format_rational(bad)
        )));
    }
    let mut pts = samples.to_vec();
    pts.sort();
    pts.dedup();
    let tables: Vec<std::sync::Arc<WeingartenTable>> = pts
        .iter()
        .map(|x| TableCache::global().get(GroupKind::FreeOrthogonal, k, &Mode::Numeric(x.clone())))
        .collect::<Result<_>>()?;
    let mut report = SurveyReport {
        k,
        samples: pts.iter().map(format_rational).collect(),
        entries: tables.first().map_or(0, |t| t.len()),
        zeros: Vec::new(),
        monotonicity_violations: Vec::new(),
        sign_changes: Vec::new(),
    };
    let Some(first) = tables.first() else {
        return Ok(report);
    };
    for key in first.entries_map().keys() {
        let vals: Vec<BigRational> = tables
            .iter()
            .map(|t| t.numeric_value(key).expect("same index set"))
            .collect();
        for (v, x) in vals.iter().zip(&pts) {
            if v.is_zero() {
                report.zeros.push(format!("{key} @ {}", format_rational(x)));
            }
        }
        if vals.windows(2).any(|w| w[1].abs() > w[0].abs()) {
            report.monotonicity_violations.push(key.to_string());
        }
        if vals.windows(2).any(|w| w[0].signum() != w[1].signum()) {
            report.sign_changes.push(key.to_string());
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn cyc(s: &str, k: usize) -> Permutation {
        Permutation::parse_cycles(s, k).unwrap()
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(&Permutation::identity(4)).value(), 1);
        assert_eq!(moebius(&cyc("(1 2)", 2)).value(), -1);
        assert_eq!(moebius(&cyc("(1 2 3)", 3)).value(), 2);
        assert_eq!(moebius(&cyc("(1 2)(3 4)", 4)).value(), 1);
        assert_eq!(moebius(&cyc("(1 2 3 4)", 4)).value(), -5);
    }

    #[test]
    fn ratio_closed_forms() {
        assert_eq!(asymptotic_ratio(&Permutation::identity(1), 17).unwrap(), rational(1, 1));
        assert_eq!(asymptotic_ratio(&cyc("(1 2)", 2), 10).unwrap(), rational(100, 99));
        assert!(matches!(asymptotic_ratio(&cyc("(1 2)", 2), 1), Err(Error::Pole { .. })));
    }

    #[test]
    fn bounds_small() {
        let r = uniform_bound_check(1, 3).unwrap();
        assert!(r.passed());
        let r = uniform_bound_check(2, 10).unwrap();
        assert!(r.passed());
        let tr = r.rows.iter().find(|row| row.class == "[2]").unwrap();
        assert!(tr.lower_tight);
        assert!(uniform_bound_check(3, 20).unwrap().passed());
    }

    #[test]
    fn upper_comparison() {
        let n2 = rational(10_000, 1);
        // 6 * 8^{1/2} * ... with k = 2: bound 1/(1 - 6*2^{3.5}/n^2) ≈ 1.00682
        assert!(below_upper(&rational(1, 1), &n2, 2));
        assert!(below_upper(&rational(1006, 1000), &n2, 2));
        assert!(!below_upper(&rational(1007, 1000), &n2, 2));
    }

    #[test]
    fn free_survey_small() {
        let s = [rational(2, 1), rational(5, 2), rational(10, 1)];
        let r = free_sign_survey(4, &s).unwrap();
        assert_eq!(r.entries, 4);
        assert!(r.passed(), "{r:?}");
        assert!(free_sign_survey(4, &[rational(3, 2)]).is_err());
    }
}
