use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{check_cap, Error, Result};
use crate::exactmath::{format_rational, RationalFunction};
use crate::symmetric::{
    all_permutations, character, count_monotone_factorizations_capped, dimension_sn, dimension_un,
    factorial, Partition, Permutation, DEFAULT_MAX_LENGTH,
};

use super::gram::wg_unitary_gram;
use super::table::{GroupKind, Mode, TableKey, WeingartenTable};

/// Largest degree for the character expansion.
pub const MAX_CHARACTER_K: usize = 8;

/// `Wg(n, σ)` from the character expansion
/// `(1/k!²) Σ_λ χ_λ(e)² χ_λ(σ) / dim V_λ(n)`.
///
/// With `n0 = Some(m)` and `m < k`, shapes with more than `m` rows are
/// dropped (their `U(m)`-representation is zero); the result then agrees
/// with the pseudo-inverse of the Gram matrix.
pub fn wg_unitary_character(sigma: &Permutation, n0: Option<i64>) -> Result<RationalFunction> {
    let k = sigma.degree();
    check_cap("k", k, MAX_CHARACTER_K)?;
    if let Some(m) = n0 {
        if m < 1 {
            return Err(Error::InvalidArgument(format!("n0 must be at least 1, got {m}")));
        }
    }
    let mu = sigma.cycle_type();
    let kf = factorial(k);
    let scale = BigRational::new(BigInt::one(), &kf * &kf);
    let mut sym = RationalFunction::zero();
    let mut num = BigRational::zero();
    for lambda in Partition::all(k) {
        let chi = character(&lambda, &mu)?;
        if chi == 0 {
            continue;
        }
        let f = dimension_sn(&lambda);
        let weight = &scale * BigRational::from_integer(&f * &f * BigInt::from(chi));
        let dim = dimension_un(&lambda);
        match n0 {
            None => sym = sym.add(&dim.recip()?.mul(&RationalFunction::from_rational(&weight))),
            Some(m) => {
                if lambda.len() > m as usize {
                    continue;
                }
                num += weight / dim.evaluate_at(m)?;
            }
        }
    }
    Ok(match n0 {
        None => sym,
        Some(_) => RationalFunction::from_rational(&num),
    })
}

/// Full unitary table from the character expansion.
pub fn wg_unitary_character_table(k: usize, mode: &Mode) -> Result<WeingartenTable> {
    check_cap("k", k, MAX_CHARACTER_K)?;
    mode.require_integer_dimension()?;
    let n0 = match mode {
        Mode::Symbolic => None,
        Mode::Numeric(_) => Some(mode.integer_point().ok_or_else(|| {
            Error::InvalidArgument("n0 does not fit in 64 bits".into())
        })?),
    };
    let entries = Partition::all(k)
        .into_iter()
        .map(|c| {
            let v = wg_unitary_character(&Permutation::class_representative(&c), n0)?;
            Ok((TableKey::Class(c), v))
        })
        .collect::<Result<_>>()?;
    Ok(WeingartenTable::new(GroupKind::Unitary, k, mode.clone(), entries))
}

/// Monotone factorization counts `#P(σ, l)` for `l = 0..=order`.
///
/// `Wg(n, σ) = n^{-k} Σ_l #P(σ, l) (-1/n)^l` for `n >= k`; the signs are
/// applied by [`series_partial_sum`].
pub fn wg_unitary_series(sigma: &Permutation, order: usize) -> Result<Vec<u64>> {
    check_cap("order", order, DEFAULT_MAX_LENGTH)?;
    (0..=order)
        .map(|l| count_monotone_factorizations_capped(sigma, l, DEFAULT_MAX_LENGTH))
        .collect()
}

/// `n0^{-k} Σ_l c_l (-1/n0)^l` over the given coefficients.
pub fn series_partial_sum(coeffs: &[u64], k: usize, n0: &BigRational) -> Result<BigRational> {
    if n0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let x = -n0.recip();
    let mut acc = BigRational::zero();
    let mut pow = BigRational::one();
    for &c in coeffs {
        acc += &pow * BigRational::from_integer(c.into());
        pow *= &x;
    }
    Ok(acc / pow_rational(n0, k))
}

fn pow_rational(x: &BigRational, e: usize) -> BigRational {
    (0..e).fold(BigRational::one(), |acc, _| acc * x)
}

/// Total number of monotone words of length `l` in `S_k`, over all
/// products: the complete homogeneous symmetric polynomial
/// `h_l(1, 2, …, k-1)`. Bounds `#P(σ, l)` for every `σ`.
pub fn monotone_word_count(k: usize, l: usize) -> BigInt {
    // h_l(1..j) = h_l(1..j-1) + j h_{l-1}(1..j)
    let mut h = vec![BigInt::zero(); l + 1];
    h[0] = BigInt::one();
    for j in 1..k {
        for d in 1..=l {
            let prev = h[d - 1].clone();
            h[d] += prev * j;
        }
    }
    h.swap_remove(l)
}

/// Rigorous bound on `n0^{-k} Σ_{l > order} #P(σ, l) n0^{-l}`, from
/// `Σ_l h_l(1..k-1) x^l = Π_{j<k} 1/(1 - jx)`. Requires `n0 > k - 1`.
pub fn series_tail_bound(k: usize, order: usize, n0: &BigRational) -> Result<BigRational> {
    let km1 = BigRational::from_integer(BigInt::from(k.saturating_sub(1)));
    if n0 <= &km1 || !n0.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "the tail bound needs n0 > {}, got {}",
            k.saturating_sub(1),
            format_rational(n0)
        )));
    }
    let x = n0.recip();
    let mut total = BigRational::one();
    for j in 1..k {
        total /= BigRational::one() - &x * BigRational::from_integer(j.into());
    }
    let mut head = BigRational::zero();
    let mut pow = BigRational::one();
    for l in 0..=order {
        head += &pow * BigRational::from_integer(monotone_word_count(k, l));
        pow *= &x;
    }
    Ok((total - head) / pow_rational(n0, k))
}

/// Agreement of one truncated series with the exact value at `n0`.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesCheck {
    pub sigma: String,
    pub order: usize,
    pub n0: String,
    pub exact: String,
    pub truncated: String,
    pub remainder: String,
    pub tail_bound: String,
    /// First `l > order` with `#P(σ, l) != 0`, and that count.
    pub next_index: usize,
    pub next_coeff: u64,
    /// `remainder · n0^{k + next_index} · (-1)^{next_index}`; tends to
    /// `next_coeff` as `n0` grows.
    pub scaled_remainder: f64,
    /// `|next term| <= |remainder| <= tail_bound` with the sign of the
    /// next term.
    pub within_bounds: bool,
}

/// Compares the order-`order` truncation against `exact` at `n0`.
pub fn series_check(
    sigma: &Permutation,
    order: usize,
    exact: &BigRational,
    n0: &BigRational,
) -> Result<SeriesCheck> {
    let k = sigma.degree();
    let coeffs = wg_unitary_series(sigma, order)?;
    let truncated = series_partial_sum(&coeffs, k, n0)?;
    let remainder = exact - &truncated;
    let bound = series_tail_bound(k, order, n0)?;
    // nonzero counts occur exactly at l ≡ |σ| (mod 2), l >= |σ|
    let parity = sigma.length() % 2;
    let mut next_index = (order + 1).max(sigma.length());
    if next_index % 2 != parity {
        next_index += 1;
    }
    let next_coeff = if k <= 1 {
        0
    } else {
        count_monotone_factorizations_capped(sigma, next_index, next_index)?
    };
    let sign = if next_index % 2 == 0 { BigRational::one() } else { -BigRational::one() };
    let next_term = &sign * BigRational::from_integer(next_coeff.into())
        / pow_rational(n0, k + next_index);
    let within_bounds = remainder.abs() <= bound
        && remainder.abs() >= next_term.abs()
        && (remainder.is_zero() || remainder.signum() == sign);
    let scaled = &remainder * pow_rational(n0, k + next_index) * &sign;
    Ok(SeriesCheck {
        sigma: sigma.to_string(),
        order,
        n0: format_rational(n0),
        exact: format_rational(exact),
        truncated: format_rational(&truncated),
        remainder: format_rational(&remainder),
        tail_bound: format_rational(&bound),
        next_index,
        next_coeff,
        scaled_remainder: num_traits::ToPrimitive::to_f64(&scaled).unwrap_or(f64::NAN),
        within_bounds,
    })
}

/// Outcome of the orthogonality recursion check.
#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub k: usize,
    pub mode: String,
    pub checked: usize,
    /// `σ` and the nonzero value of `lhs - rhs`.
    pub violations: Vec<(String, String)>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Largest degree for [`wg_unitary_recursion_check`].
pub const MAX_RECURSION_K: usize = 6;

/// Verifies, for every `σ ∈ S_k`,
/// `n Wg(σ) + Σ_{i=2..k} Wg((1 i)σ) = [σ(1) = 1] · Wg(σ without 1)`
/// with both sides taken from Gram-path tables (the `S_0` value is 1).
pub fn wg_unitary_recursion_check(k: usize, mode: &Mode) -> Result<RecursionReport> {
    check_cap("k", k, MAX_RECURSION_K)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let n = match mode {
        Mode::Symbolic => RationalFunction::n(),
        Mode::Numeric(x) => {
            if x < &BigRational::from_integer(BigInt::from(k)) {
                return Err(Error::InvalidArgument(format!(
                    "the recursion check needs n0 >= k = {k}"
                )));
            }
            RationalFunction::from_rational(x)
        }
    };
    let big = wg_unitary_gram(k, mode)?;
    let small = if k > 1 { Some(wg_unitary_gram(k - 1, mode)?) } else { None };
    let transpositions: Vec<Permutation> = (2..=k)
        .map(|i| Permutation::transposition(1, i, k))
        .collect::<Result<_>>()?;
    let mut violations = Vec::new();
    let mut checked = 0;
    for sigma in all_permutations(k) {
        let mut lhs = n.mul(big.unitary_value(&sigma)?);
        for t in &transpositions {
            lhs = lhs.add(big.unitary_value(&t.compose(&sigma)?)?);
        }
        let rhs = if sigma.apply(1) != 1 {
            RationalFunction::zero()
        } else if let Some(small) = &small {
            small.unitary_value(&sigma.remove_fixed_point(1)?)?.clone()
        } else {
            RationalFunction::one()
        };
        let diff = lhs.sub(&rhs);
        if !diff.is_zero() {
            violations.push((sigma.to_string(), diff.to_string()));
        }
        checked += 1;
    }
    Ok(RecursionReport {
        k,
        mode: mode.to_string(),
        checked,
        violations,
    })
}

/// Default truncation order of the series path in [`three_path_check`].
pub const THREE_PATH_SERIES_ORDER: usize = 6;

/// Gram path against character path on every class, plus series
/// truncations with their remainder bounds.
#[derive(Clone, Debug, Serialize)]
pub struct ThreePathReport {
    pub k: usize,
    pub mode: String,
    pub classes: usize,
    /// `(class, gram value, character value)` where the two differ.
    pub mismatches: Vec<(String, String, String)>,
    pub series: Vec<SeriesCheck>,
}

impl ThreePathReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.series.iter().all(|s| s.within_bounds)
    }
}

/// Runs the three unitary paths for degree `k`.
///
/// Symbolic mode compares the tables as rational functions and checks the
/// series at `n0 ∈ {10, 100}`; numeric mode compares values at `n0` and
/// checks the series there when `n0 > k - 1`.
pub fn three_path_check(k: usize, mode: &Mode, order: usize) -> Result<ThreePathReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let gram = wg_unitary_gram(k, mode)?;
    let chars = wg_unitary_character_table(k, mode)?;
    let mut mismatches = Vec::new();
    for (key, g) in gram.entries() {
        let c = chars
            .get(key)
            .ok_or_else(|| Error::InvalidArgument(format!("character table lacks {key}")))?;
        if g != c {
            mismatches.push((key.to_string(), g.to_string(), c.to_string()));
        }
    }
    let points: Vec<BigRational> = match mode {
        Mode::Symbolic => vec![BigRational::from_integer(10.into()), BigRational::from_integer(100.into())],
        Mode::Numeric(x) if *x > BigRational::from_integer(BigInt::from(k) - 1) => vec![x.clone()],
        Mode::Numeric(_) => Vec::new(),
    };
    let mut series = Vec::new();
    for class in Partition::all(k) {
        let sigma = Permutation::class_representative(&class);
        let value = gram.unitary_value(&sigma)?;
        for x in &points {
            let exact = value.evaluate_rational(x)?;
            series.push(series_check(&sigma, order, &exact, x)?);
        }
    }
    Ok(ThreePathReport {
        k,
        mode: mode.to_string(),
        classes: gram.len(),
        mismatches,
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    #[test]
    fn three_path_small() {
        for k in 1..=3 {
            let r = three_path_check(k, &Mode::Symbolic, 4).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        let r = three_path_check(3, &Mode::numeric_int(2), 4).unwrap();
        assert!(r.passed() && r.series.is_empty());
    }

    fn cyc(s: &str, k: usize) -> Permutation {
        Permutation::parse_cycles(s, k).unwrap()
    }

    #[test]
    fn character_small_cases() {
        assert_eq!(
            wg_unitary_character(&Permutation::identity(1), None).unwrap().to_string(),
            "1/n"
        );
        assert_eq!(
            wg_unitary_character(&Permutation::identity(2), None).unwrap().to_string(),
            "1/(n^2-1)"
        );
        assert_eq!(
            wg_unitary_character(&cyc("(1 2)", 2), None).unwrap().to_string(),
            "-1/(n^3-n)"
        );
    }

    #[test]
    fn character_matches_gram_numerically_below_k() {
        for (k, n0) in [(3, 1), (3, 2), (4, 2), (5, 3)] {
            let g = wg_unitary_gram(k, &Mode::numeric_int(n0)).unwrap();
            let c = wg_unitary_character_table(k, &Mode::numeric_int(n0)).unwrap();
            assert_eq!(g, c, "k={k} n0={n0}");
        }
    }

    #[test]
    fn series_known_values() {
        assert_eq!(wg_unitary_series(&Permutation::identity(1), 3).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(wg_unitary_series(&cyc("(1 2)", 2), 3).unwrap(), vec![0, 1, 0, 1]);
        assert_eq!(wg_unitary_series(&Permutation::identity(2), 2).unwrap()[2], 1);
    }

    #[test]
    fn word_counts() {
        assert_eq!(monotone_word_count(3, 0), BigInt::from(1));
        // h_2(1, 2) = 1 + 2 + 4
        assert_eq!(monotone_word_count(3, 2), BigInt::from(7));
        for l in 0..5 {
            let total: u64 = all_permutations(4)
                .iter()
                .map(|s| count_monotone_factorizations_capped(s, l, 12).unwrap())
                .sum();
            assert_eq!(BigInt::from(total), monotone_word_count(4, l));
        }
    }

    #[test]
    fn series_check_k2() {
        let s = cyc("(1 2)", 2);
        let exact = rational(-1, 990);
        let c = series_check(&s, 3, &exact, &rational(10, 1)).unwrap();
        assert!(c.within_bounds, "{c:?}");
        assert_eq!(c.next_index, 5);
        assert_eq!(c.next_coeff, 1);
    }

    #[test]
    fn recursion_small() {
        for k in 1..=4 {
            let r = wg_unitary_recursion_check(k, &Mode::Symbolic).unwrap();
            assert!(r.passed(), "{r:?}");
        }
        assert!(wg_unitary_recursion_check(3, &Mode::numeric_int(5)).unwrap().passed());
        assert!(wg_unitary_recursion_check(3, &Mode::numeric_int(2)).is_err());
    }
}
