//! Pair partitions of `{1..k}`: enumeration of all pairings, of the
//! non-crossing ones, and of the pairings that encode permutations; loop
//! counting between two pairings; Kronecker deltas against multi-indices.

use std::fmt;

use crate::error::{check_cap, Error, Result};
use crate::symmetric::{all_permutations, Partition, Permutation};

/// Largest `k` accepted by the pairing enumerators.
pub const MAX_PAIRING_SIZE: usize = 16;
/// Largest `k'` for [`unitary_pairings`].
pub const MAX_UNITARY_DEGREE: usize = 7;

/// Perfect matching of `{1..k}`.
///
/// Canonical form: blocks `(a, b)` with `a < b`, sorted by `a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairPartition {
    /// `mate[i]` is the 0-based partner of point `i`.
    mate: Vec<usize>,
}

impl PairPartition {
    /// From 1-based blocks in any order.
    pub fn new(blocks: &[(usize, usize)], k: usize) -> Result<Self> {
        if k % 2 == 1 {
            return Err(Error::InvalidArgument(format!("no pairing of an odd set ({k})")));
        }
        if blocks.len() * 2 != k {
            return Err(Error::InvalidArgument(format!(
                "{} blocks cannot cover {{1..{k}}}",
                blocks.len()
            )));
        }
        let mut mate = vec![usize::MAX; k];
        for &(a, b) in blocks {
            if a == 0 || b == 0 || a > k || b > k || a == b {
                return Err(Error::InvalidArgument(format!("bad block {{{a},{b}}}")));
            }
            if mate[a - 1] != usize::MAX || mate[b - 1] != usize::MAX {
                return Err(Error::InvalidArgument(format!("blocks overlap at {{{a},{b}}}")));
            }
            mate[a - 1] = b - 1;
            mate[b - 1] = a - 1;
        }
        Ok(PairPartition { mate })
    }

    /// Parse `"{1,2}{3,4}"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut blocks = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| Error::Parse(format!("expected '{{' in {text:?}")))?;
            let close = body
                .find('}')
                .ok_or_else(|| Error::Parse(format!("unclosed block in {text:?}")))?;
            let nums: Vec<usize> = body[..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}")))
                })
                .collect::<Result<_>>()?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("block of size {} in {text:?}", nums.len())));
            }
            blocks.push((nums[0], nums[1]));
            rest = body[close + 1..].trim_start();
        }
        Self::new(&blocks, blocks.len() * 2).map_err(|e| Error::Parse(e.to_string()))
    }

    pub(crate) fn from_mates(mate: Vec<usize>) -> Self {
        PairPartition { mate }
    }

    /// Number of points `k`.
    pub fn size(&self) -> usize {
        self.mate.len()
    }

    /// 1-based partner of `i`.
    pub fn partner(&self, i: usize) -> usize {
        self.mate[i - 1] + 1
    }

    pub(crate) fn mates(&self) -> &[usize] {
        &self.mate
    }

    /// Blocks `(a, b)`, 1-based, `a < b`, sorted by `a`.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(i, &m)| i < m)
            .map(|(i, &m)| (i + 1, m + 1))
            .collect()
    }

    /// No two blocks `{a,b}`, `{c,d}` with `a < c < b < d`.
    pub fn is_noncrossing(&self) -> bool {
        let blocks = self.blocks();
        blocks.iter().all(|&(a, b)| {
            blocks
                .iter()
                .all(|&(c, d)| !(a < c && c < b && b < d))
        })
    }

    /// Inverse of the unitary embedding: the permutation `σ` with blocks
    /// `{i, k'+σ(i)}`, if every block joins the two halves.
    pub fn as_permutation(&self) -> Option<Permutation> {
        let kp = self.size() / 2;
        let images: Option<Vec<usize>> = (0..kp)
            .map(|i| self.mate[i].checked_sub(kp).map(|j| j + 1))
            .collect();
        Permutation::from_one_line(&images?).ok()
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in self.blocks() {
            write!(f, "{{{a},{b}}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Multi-index `I = (i_1, …, i_k)` with entries in `{1..n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn enumerate(k: usize, noncrossing_only: bool) -> Result<Vec<PairPartition>> {
    check_cap("k", k, MAX_PAIRING_SIZE)?;
    let mut out = Vec::new();
    if k % 2 == 1 {
        return Ok(out);
    }
    let mut mate = vec![usize::MAX; k];
    fn rec(mate: &mut [usize], nc: bool, out: &mut Vec<PairPartition>) {
        let Some(a) = mate.iter().position(|&m| m == usize::MAX) else {
            out.push(PairPartition::from_mates(mate.to_vec()));
            return;
        };
        for b in a + 1..mate.len() {
            if mate[b] != usize::MAX {
                continue;
            }
            // all existing blocks start before a, so (a, b) crosses one of
            // them exactly when a matched point lies strictly between
            if nc && (a + 1..b).any(|x| mate[x] != usize::MAX) {
                continue;
            }
            if nc && (b - a - 1) % 2 == 1 {
                continue;
            }
            mate[a] = b;
            mate[b] = a;
            rec(mate, nc, out);
            mate[a] = usize::MAX;
            mate[b] = usize::MAX;
        }
    }
    rec(&mut mate, noncrossing_only, &mut out);
    Ok(out)
}

/// All `(k-1)!!` pairings of `{1..k}`, in the order obtained by matching
/// the smallest free point with each larger free point in turn. Empty for
/// odd `k`.
pub fn enumerate_pairings(k: usize) -> Result<Vec<PairPartition>> {
    enumerate(k, false)
}

/// The `Catalan(k/2)` non-crossing pairings, in the same relative order as
/// [`enumerate_pairings`].
pub fn enumerate_noncrossing(k: usize) -> Result<Vec<PairPartition>> {
    enumerate(k, true)
}

/// Pairings of `{1..2k'}` joining each of the first `k'` points to one of
/// the last `k'`, listed with the permutation `σ` such that the blocks are
/// `{i, k'+σ(i)}`. Ordered lexicographically in `σ`.
pub fn unitary_pairings(kp: usize) -> Result<Vec<(PairPartition, Permutation)>> {
    check_cap("k'", kp, MAX_UNITARY_DEGREE)?;
    Ok(all_permutations(kp)
        .into_iter()
        .map(|s| {
            let mut mate = vec![0; 2 * kp];
            for i in 0..kp {
                let j = kp + s.apply(i + 1) - 1;
                mate[i] = j;
                mate[j] = i;
            }
            (PairPartition::from_mates(mate), s)
        })
        .collect())
}

fn check_same_size(a: &PairPartition, b: &PairPartition) -> Result<()> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(format!(
            "pairings of {} and {} points",
            a.size(),
            b.size()
        )));
    }
    Ok(())
}

/// Component sizes (in points) of the union multigraph of two pairings.
fn components(a: &PairPartition, b: &PairPartition) -> Vec<usize> {
    let k = a.size();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in [a, b] {
        for (i, &m) in p.mates().iter().enumerate() {
            let (ri, rm) = (find(&mut parent, i), find(&mut parent, m));
            if ri != rm {
                parent[ri] = rm;
            }
        }
    }
    let mut sizes = vec![0; k];
    for i in 0..k {
        let r = find(&mut parent, i);
        sizes[r] += 1;
    }
    sizes.into_iter().filter(|&s| s > 0).collect()
}

/// Number of cycles in the union of the blocks of `a` and `b`.
pub fn loops(a: &PairPartition, b: &PairPartition) -> Result<usize> {
    check_same_size(a, b)?;
    Ok(components(a, b).len())
}

/// Coset type of `(a, b)`: the partition of `k/2` given by half the sizes
/// of the loops. Two pairs of pairings are related by a simultaneous
/// relabelling of `{1..k}` exactly when their coset types agree.
pub fn coset_type(a: &PairPartition, b: &PairPartition) -> Result<Partition> {
    check_same_size(a, b)?;
    Ok(Partition::new(components(a, b).into_iter().map(|s| s / 2).collect())
        .expect("loops have positive even size"))
}

/// 1 if every block `{a, b}` of `pi` has `I[a] = I[b]`, else 0.
pub fn delta(pi: &PairPartition, index: &MultiIndex) -> Result<u8> {
    if pi.size() != index.len() {
        return Err(Error::SizeMismatch(format!(
            "pairing of {} points against a multi-index of length {}",
            pi.size(),
            index.len()
        )));
    }
    Ok(u8::from(delta_slice(pi, &index.0)))
}

pub(crate) fn delta_slice<T: PartialEq>(pi: &PairPartition, values: &[T]) -> bool {
    pi.mates()
        .iter()
        .enumerate()
        .all(|(i, &m)| i > m || values[i] == values[m])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> PairPartition {
        PairPartition::parse(s).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(enumerate_pairings(2).unwrap().len(), 1);
        assert_eq!(enumerate_pairings(4).unwrap().len(), 3);
        assert_eq!(enumerate_pairings(6).unwrap().len(), 15);
        assert!(enumerate_pairings(5).unwrap().is_empty());
        assert!(enumerate_pairings(18).is_err());
        assert_eq!(enumerate_noncrossing(2).unwrap().len(), 1);
        assert_eq!(
            enumerate_noncrossing(4).unwrap(),
            vec![pp("{1,2}{3,4}"), pp("{1,4}{2,3}")]
        );
        assert_eq!(enumerate_noncrossing(8).unwrap().len(), 14);
    }

    #[test]
    fn unitary_embedding() {
        let u1 = unitary_pairings(1).unwrap();
        assert_eq!(u1, vec![(pp("{1,2}"), Permutation::identity(1))]);
        let u2 = unitary_pairings(2).unwrap();
        assert_eq!(u2.len(), 2);
        assert_eq!(u2[1].0, pp("{1,4}{2,3}"));
        assert_eq!(u2[1].1, Permutation::parse_cycles("(1 2)", 2).unwrap());
        assert_eq!(unitary_pairings(3).unwrap().len(), 6);
        for (p, s) in unitary_pairings(3).unwrap() {
            assert_eq!(p.as_permutation(), Some(s));
        }
        assert!(unitary_pairings(8).is_err());
    }

    #[test]
    fn loop_examples() {
        let a = pp("{1,2}{3,4}");
        assert_eq!(loops(&a, &a).unwrap(), 2);
        assert_eq!(loops(&a, &pp("{1,4}{2,3}")).unwrap(), 1);
        assert_eq!(loops(&a, &pp("{1,3}{2,4}")).unwrap(), 1);
        assert!(loops(&a, &pp("{1,2}")).is_err());
        assert_eq!(
            coset_type(&pp("{1,2}{3,4}{5,6}"), &pp("{1,4}{2,3}{5,6}")).unwrap(),
            Partition::new(vec![2, 1]).unwrap()
        );
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(&pp("{1,2}"), &MultiIndex(vec![3, 3])).unwrap(), 1);
        assert_eq!(delta(&pp("{1,2}"), &MultiIndex(vec![3, 4])).unwrap(), 0);
        assert_eq!(delta(&pp("{1,4}{2,3}"), &MultiIndex(vec![1, 2, 2, 1])).unwrap(), 1);
        assert!(delta(&pp("{1,2}"), &MultiIndex(vec![1])).is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(PairPartition::parse("{1,2}{2,3}").is_err());
        assert!(PairPartition::parse("{1,2,3}").is_err());
        assert!(PairPartition::parse("{1,3}").is_err());
        assert_eq!(pp(" {3,4} {2,1} ").to_string(), "{1,2}{3,4}");
    }
}
