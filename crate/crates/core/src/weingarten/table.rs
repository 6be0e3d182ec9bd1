use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{format_rational, RationalFunction};
use crate::pairings::{coset_type, PairPartition};
use crate::symmetric::{Partition, Permutation};

/// The compact (quantum) group whose Haar moments are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// `U(n)`
    Unitary,
    /// `O(n)`
    Orthogonal,
    /// Wang's free orthogonal quantum group `O_n^+`.
    #[serde(rename = "free")]
    FreeOrthogonal,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Unitary => "unitary",
            GroupKind::Orthogonal => "orthogonal",
            GroupKind::FreeOrthogonal => "free",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "unitary" | "u" => Ok(GroupKind::Unitary),
            "orthogonal" | "o" => Ok(GroupKind::Orthogonal),
            "free" | "free-orthogonal" | "freeorthogonal" | "o+" => Ok(GroupKind::FreeOrthogonal),
            other => Err(Error::Parse(format!("unknown group {other:?}"))),
        }
    }
}

/// Whether a table holds functions of `n` or values at a fixed `n0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Symbolic,
    Numeric(BigRational),
}

impl Mode {
    pub fn numeric_int(n0: i64) -> Self {
        Mode::Numeric(BigRational::from_integer(n0.into()))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Mode::Symbolic)
    }

    /// Positive integer `n0`, if the mode is numeric at an integer.
    pub fn integer_point(&self) -> Option<i64> {
        match self {
            Mode::Numeric(q) if q.is_integer() => num_traits::ToPrimitive::to_i64(q.numer()),
            _ => None,
        }
    }

    pub(crate) fn require_integer_dimension(&self) -> Result<()> {
        if let Mode::Numeric(q) = self {
            if !q.is_integer() || !q.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "matrix dimension must be a positive integer, got {}",
                    format_rational(q)
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn require_positive(&self) -> Result<()> {
        if let Mode::Numeric(q) = self {
            if !q.is_positive() {
                return Err(Error::InvalidArgument(format!(
                    "n must be positive, got {}",
                    format_rational(q)
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Symbolic => f.write_str("symbolic"),
            Mode::Numeric(q) => write!(f, "numeric({})", format_rational(q)),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "symbolic" {
            return Ok(Mode::Symbolic);
        }
        let inner = s
            .strip_prefix("numeric(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("bad mode {s:?}")))?;
        parse_rational(inner).map(Mode::Numeric)
    }
}

/// Parse `"5"`, `"-3"` or `"5/2"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b: num_bigint::BigInt = b.trim().parse().map_err(|_| bad())?;
            if num_traits::Zero::is_zero(&b) {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Index of one Weingarten value.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableKey {
    /// Conjugacy class of `S_k` (unitary) or coset type of a pair of
    /// pairings (orthogonal).
    Class(Partition),
    /// Ordered pair of non-crossing pairings (free orthogonal).
    Pair(PairPartition, PairPartition),
}

impl fmt::Display for TableKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableKey::Class(p) => write!(f, "{p}"),
            TableKey::Pair(a, b) => write!(f, "{a}|{b}"),
        }
    }
}

impl TableKey {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((a, b)) = s.split_once('|') {
            Ok(TableKey::Pair(PairPartition::parse(a)?, PairPartition::parse(b)?))
        } else {
            Ok(TableKey::Class(Partition::parse(s)?))
        }
    }

    /// Key of a degree-`k` table of `group` named by user text.
    ///
    /// * Unitary: a permutation in cycle notation (`"(1 2)(3)"`, `"e"`) or
    ///   a class (`"[2,1]"`).
    /// * Orthogonal: a pair of pairings `"π|ρ"`, reduced to its coset
    ///   type, or the coset type itself.
    /// * Free orthogonal: a pair of non-crossing pairings.
    pub fn resolve(group: GroupKind, k: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        match group {
            GroupKind::Unitary => {
                if text.starts_with('[') {
                    let p = Partition::parse(text)?;
                    check_degree(p.size(), k)?;
                    Ok(TableKey::Class(p))
                } else {
                    let sigma = match text {
                        "e" | "id" | "()" => Permutation::identity(k),
                        _ => Permutation::parse_cycles(text, k)?,
                    };
                    Ok(TableKey::Class(sigma.cycle_type()))
                }
            }
            GroupKind::Orthogonal => match TableKey::parse(text)? {
                TableKey::Pair(a, b) => {
                    check_degree(a.size(), k)?;
                    Ok(TableKey::Class(coset_type(&a, &b)?))
                }
                TableKey::Class(p) => {
                    check_degree(2 * p.size(), k)?;
                    Ok(TableKey::Class(p))
                }
            },
            GroupKind::FreeOrthogonal => match TableKey::parse(text)? {
                TableKey::Pair(a, b) => {
                    check_degree(a.size(), k)?;
                    if !a.is_noncrossing() || !b.is_noncrossing() {
                        return Err(Error::InvalidArgument(format!("{a}|{b} has a crossing pairing")));
                    }
                    Ok(TableKey::Pair(a, b))
                }
                TableKey::Class(_) => Err(Error::Parse(
                    "free orthogonal entries are keyed by a pair of non-crossing pairings \"π|ρ\"".into(),
                )),
            },
        }
    }
}

fn check_degree(got: usize, k: usize) -> Result<()> {
    if got != k {
        return Err(Error::SizeMismatch(format!("key has degree {got}, expected {k}")));
    }
    Ok(())
}

/// Exact Weingarten values for one `(group, k, mode)`.
///
/// * Unitary: keyed by the cycle type of `σ ∈ S_k`; `k` counts the
///   non-conjugated factors.
/// * Orthogonal: keyed by the coset type (a partition of `k/2`) of the
///   pair of pairings; `W[π, ρ]` depends on nothing else.
/// * Free orthogonal: keyed by the pair `(π, ρ)` of non-crossing pairings.
///
/// Symbolic unitary tables are valid for integer `n >= k`; their poles lie
/// in `{-k+1, …, k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeingartenTable {
    group: GroupKind,
    k: usize,
    mode: Mode,
    entries: BTreeMap<TableKey, RationalFunction>,
}

impl WeingartenTable {
    pub(crate) fn new(
        group: GroupKind,
        k: usize,
        mode: Mode,
        entries: BTreeMap<TableKey, RationalFunction>,
    ) -> Self {
        WeingartenTable {
            group,
            k,
            mode,
            entries,
        }
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&TableKey, &RationalFunction)> {
        self.entries.iter()
    }

    pub fn get(&self, key: &TableKey) -> Option<&RationalFunction> {
        self.entries.get(key)
    }

    /// Value on a conjugacy class (unitary) or coset type (orthogonal).
    pub fn class_value(&self, class: &Partition) -> Option<&RationalFunction> {
        self.entries.get(&TableKey::Class(class.clone()))
    }

    /// `Wg(n, σ)` from a unitary table.
    pub fn unitary_value(&self, sigma: &Permutation) -> Result<&RationalFunction> {
        if self.group != GroupKind::Unitary || sigma.degree() != self.k {
            return Err(Error::InvalidArgument(format!(
                "σ ∈ S_{} looked up in a {} table of degree {}",
                sigma.degree(),
                self.group,
                self.k
            )));
        }
        self.class_value(&sigma.cycle_type())
            .ok_or_else(|| Error::InvalidArgument(format!("no entry for {sigma}")))
    }

    /// Weingarten matrix entry `W[π, ρ]` (orthogonal or free tables).
    pub fn pair_value(&self, pi: &PairPartition, rho: &PairPartition) -> Result<RationalFunction> {
        if pi.size() != self.k || rho.size() != self.k {
            return Err(Error::SizeMismatch(format!(
                "pairings of {} points in a table of degree {}",
                pi.size(),
                self.k
            )));
        }
        let key = match self.group {
            GroupKind::Orthogonal => TableKey::Class(coset_type(pi, rho)?),
            GroupKind::FreeOrthogonal => TableKey::Pair(pi.clone(), rho.clone()),
            GroupKind::Unitary => {
                return Err(Error::InvalidArgument("unitary tables are keyed by permutations".into()))
            }
        };
        self.entries
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::InvalidArgument(format!("{pi}|{rho} is not in the table")))
    }

    /// Specialize a symbolic table at `x`.
    pub fn evaluate(&self, x: &BigRational) -> Result<WeingartenTable> {
        if !self.mode.is_symbolic() {
            return Err(Error::InvalidArgument("table is already numeric".into()));
        }
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| Ok((k.clone(), RationalFunction::from_rational(&v.evaluate_rational(x)?))))
            .collect::<Result<_>>()?;
        Ok(WeingartenTable::new(self.group, self.k, Mode::Numeric(x.clone()), entries))
    }

    /// For numeric tables, the value as an exact rational.
    pub fn numeric_value(&self, key: &TableKey) -> Option<BigRational> {
        self.entries.get(key).and_then(RationalFunction::as_constant)
    }

    pub(crate) fn entries_map(&self) -> &BTreeMap<TableKey, RationalFunction> {
        &self.entries
    }
}

/// Catalan number `C_m`.
pub fn catalan(m: usize) -> u64 {
    let mut c: u64 = 1;
    for i in 0..m as u64 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolve_keys() {
        let class = |s: &str| TableKey::Class(Partition::parse(s).unwrap());
        assert_eq!(TableKey::resolve(GroupKind::Unitary, 3, "(1 3)").unwrap(), class("[2,1]"));
        assert_eq!(TableKey::resolve(GroupKind::Unitary, 3, "e").unwrap(), class("[1,1,1]"));
        assert_eq!(TableKey::resolve(GroupKind::Unitary, 3, "[3]").unwrap(), class("[3]"));
        assert!(TableKey::resolve(GroupKind::Unitary, 3, "[2]").is_err());
        assert_eq!(
            TableKey::resolve(GroupKind::Orthogonal, 4, "{1,2}{3,4}|{1,3}{2,4}").unwrap(),
            class("[2]")
        );
        assert!(TableKey::resolve(GroupKind::FreeOrthogonal, 4, "{1,3}{2,4}|{1,2}{3,4}").is_err());
        assert!(TableKey::resolve(GroupKind::FreeOrthogonal, 4, "[2]").is_err());
        let key = TableKey::resolve(GroupKind::FreeOrthogonal, 4, "{1,2}{3,4}|{1,4}{2,3}").unwrap();
        assert_eq!(key.to_string(), "{1,2}{3,4}|{1,4}{2,3}");
    }

    #[test]
    fn mode_round_trip() {
        for m in [Mode::Symbolic, Mode::numeric_int(7), Mode::Numeric(parse_rational("5/2").unwrap())] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!(parse_rational("1/0").is_err());
        assert_eq!(catalan(5), 42);
    }
}
