//! Polynomial integrals over `U(n)`, `O(n)` and `O_n^+`.
//!
//! A monomial `u[i1,j1] u[i2,j2] … ~u[..]` is integrated by summing
//! Weingarten values over the pairs of permutations (unitary) or pairings
//! (orthogonal, free) whose Kronecker deltas against the row and column
//! indices are all satisfied. The dimension `n` enters only through the
//! Weingarten table.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::exactmath::RationalFunction;
use crate::pairings::{coset_type, delta_slice, enumerate_noncrossing, enumerate_pairings};
use crate::symmetric::{all_permutations, Permutation};
use crate::weingarten::{GroupKind, Mode, TableCache, TableKey, WeingartenTable};

/// One matrix entry `u[row, col]`, possibly conjugated. Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    pub row: usize,
    pub col: usize,
    pub conjugated: bool,
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bar = if self.conjugated { "~" } else { "" };
        write!(f, "{bar}u[{},{}]", self.row, self.col)
    }
}

/// Matrix size for an integral: the indeterminate `n` or a fixed integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    Symbolic,
    Integer(i64),
}

/// A monomial to integrate against the Haar measure (or Haar state) of a
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentQuery {
    pub group: GroupKind,
    pub factors: Vec<Factor>,
    pub n: Dimension,
}

impl MomentQuery {
    pub fn new(group: GroupKind, factors: Vec<Factor>, n: Dimension) -> Self {
        MomentQuery { group, factors, n }
    }

    pub fn with_group(mut self, group: GroupKind) -> Self {
        self.group = group;
        self
    }

    pub fn with_n(mut self, n: Dimension) -> Self {
        self.n = n;
        self
    }

    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    /// The monomial in the input grammar.
    pub fn monomial(&self) -> String {
        self.factors
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for MomentQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.monomial())
    }
}

/// Parses whitespace-separated tokens `u[i,j]` and `~u[i,j]`.
///
/// The query defaults to the unitary group with symbolic `n`; use
/// [`MomentQuery::with_group`] and [`MomentQuery::with_n`] to change that.
/// Factor order is preserved.
pub fn parse_monomial(text: &str) -> Result<MomentQuery> {
    let factors = text
        .split_whitespace()
        .map(parse_factor)
        .collect::<Result<Vec<_>>>()?;
    if factors.is_empty() {
        return Err(Error::Parse("empty monomial".into()));
    }
    Ok(MomentQuery::new(GroupKind::Unitary, factors, Dimension::Symbolic))
}

fn parse_factor(token: &str) -> Result<Factor> {
    let bad = |why: &str| Error::Parse(format!("bad factor {token:?}: {why}"));
    let (conjugated, rest) = match token.strip_prefix('~') {
        Some(r) => (true, r),
        None => (false, token),
    };
    let inner = rest
        .strip_prefix("u[")
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| bad("expected u[i,j] or ~u[i,j]"))?;
    let (i, j) = inner.split_once(',').ok_or_else(|| bad("expected two indices"))?;
    let idx = |s: &str| -> Result<usize> {
        let v: usize = s.trim().parse().map_err(|_| bad("index is not a number"))?;
        if v == 0 {
            return Err(bad("indices start at 1"));
        }
        Ok(v)
    };
    Ok(Factor {
        row: idx(i)?,
        col: idx(j)?,
        conjugated,
    })
}

/// True iff the query is unitary and has different numbers of plain and
/// conjugated factors, in which case its integral vanishes by invariance
/// under the central circle `z·I`.
pub fn unbalanced_zero(q: &MomentQuery) -> bool {
    if q.group != GroupKind::Unitary {
        return false;
    }
    let conj = q.factors.iter().filter(|f| f.conjugated).count();
    2 * conj != q.factors.len()
}

/// Exact value of the integral, as a rational function of `n` or as a
/// constant when `n` is fixed.
///
/// For integer `n >= 1` the Weingarten table at `n` is used directly, so
/// `n` below the degree is handled through the pseudo-inverse. For `n <= 0`
/// the symbolic result is evaluated, which fails at poles.
///
/// ```
/// use haarwell::haar_integrate::{integrate, parse_monomial};
/// use haarwell::weingarten::GroupKind;
///
/// let q = parse_monomial("u[1,1] u[1,1] u[1,1] u[1,1]").unwrap().with_group(GroupKind::Orthogonal);
/// assert_eq!(integrate(&q).unwrap().to_string(), "3/(n^2+2n)");
/// ```
pub fn integrate(q: &MomentQuery) -> Result<RationalFunction> {
    integrate_with(TableCache::global(), q)
}

/// [`integrate`] drawing tables from `cache`.
pub fn integrate_with(cache: &TableCache, q: &MomentQuery) -> Result<RationalFunction> {
    if let Dimension::Integer(n) = q.n {
        if n >= 1 {
            if let Some(f) = q.factors.iter().find(|f| f.row as i64 > n || f.col as i64 > n) {
                return Err(Error::InvalidArgument(format!("{f} is outside a {n}x{n} matrix")));
            }
        }
    }
    if q.factors.is_empty() {
        return Ok(RationalFunction::one());
    }
    let Some((k, counts)) = tally(q)? else {
        return Ok(RationalFunction::zero());
    };
    if counts.is_empty() {
        return Ok(RationalFunction::zero());
    }
    let mode = match q.n {
        Dimension::Integer(n) if n >= 1 => Mode::numeric_int(n),
        _ => Mode::Symbolic,
    };
    let table = cache.get(q.group, k, &mode)?;
    let total = combine(&table, &counts)?;
    match q.n {
        Dimension::Integer(n) if n < 1 => Ok(RationalFunction::from_rational(&total.evaluate_at(n)?)),
        _ => Ok(total),
    }
}

fn combine(table: &Arc<WeingartenTable>, counts: &BTreeMap<TableKey, u64>) -> Result<RationalFunction> {
    let mut total = RationalFunction::zero();
    for (key, &c) in counts {
        let w = table
            .get(key)
            .ok_or_else(|| Error::InvalidArgument(format!("no Weingarten entry for {key}")))?;
        let c = RationalFunction::from_rational(&BigRational::from_integer(BigInt::from(c)));
        total = total.add(&w.mul(&c));
    }
    Ok(total)
}

/// Table degree and the number of delta-allowed index pairs per table key,
/// or `None` when the integral vanishes for a structural reason.
fn tally(q: &MomentQuery) -> Result<Option<(usize, BTreeMap<TableKey, u64>)>> {
    let mut counts: BTreeMap<TableKey, u64> = BTreeMap::new();
    match q.group {
        GroupKind::Unitary => {
            if unbalanced_zero(q) {
                return Ok(None);
            }
            let plain: Vec<&Factor> = q.factors.iter().filter(|f| !f.conjugated).collect();
            let conj: Vec<&Factor> = q.factors.iter().filter(|f| f.conjugated).collect();
            let kp = plain.len();
            crate::error::check_cap("k", kp, crate::weingarten::MAX_UNITARY_K)?;
            let perms = all_permutations(kp);
            let matching = |key: fn(&Factor) -> usize| -> Vec<&Permutation> {
                perms
                    .iter()
                    .filter(|s| (0..kp).all(|p| key(plain[p]) == key(conj[s.apply(p + 1) - 1])))
                    .collect()
            };
            let sigmas = matching(|f| f.row);
            let taus = matching(|f| f.col);
            let mut by_class: BTreeMap<crate::symmetric::Partition, u64> = BTreeMap::new();
            for s in &sigmas {
                let sinv = s.inverse();
                for t in &taus {
                    *by_class.entry(t.compose_unchecked(&sinv).cycle_type()).or_default() += 1;
                }
            }
            counts.extend(by_class.into_iter().map(|(c, n)| (TableKey::Class(c), n)));
            Ok(Some((kp, counts)))
        }
        GroupKind::Orthogonal | GroupKind::FreeOrthogonal => {
            let k = q.factors.len();
            if k % 2 == 1 {
                return Ok(None);
            }
            let cap = match (q.group, q.n) {
                (GroupKind::Orthogonal, Dimension::Integer(n)) if n >= 1 => {
                    crate::weingarten::MAX_ORTHOGONAL_K_NUMERIC
                }
                (GroupKind::Orthogonal, _) => crate::weingarten::MAX_ORTHOGONAL_K_SYMBOLIC,
                (_, Dimension::Integer(n)) if n >= 1 => crate::weingarten::MAX_FREE_K_NUMERIC,
                _ => crate::weingarten::MAX_FREE_K_SYMBOLIC,
            };
            crate::error::check_cap("k", k, cap)?;
            let pairings = if q.group == GroupKind::Orthogonal {
                enumerate_pairings(k)?
            } else {
                enumerate_noncrossing(k)?
            };
            let rows: Vec<usize> = q.factors.iter().map(|f| f.row).collect();
            let cols: Vec<usize> = q.factors.iter().map(|f| f.col).collect();
            let pis: Vec<_> = pairings.iter().filter(|p| delta_slice(p, &rows)).collect();
            let rhos: Vec<_> = pairings.iter().filter(|p| delta_slice(p, &cols)).collect();
            for pi in &pis {
                for rho in &rhos {
                    let key = if q.group == GroupKind::Orthogonal {
                        TableKey::Class(coset_type(pi, rho)?)
                    } else {
                        TableKey::Pair((*pi).clone(), (*rho).clone())
                    };
                    *counts.entry(key).or_default() += 1;
                }
            }
            Ok(Some((k, counts)))
        }
    }
}
