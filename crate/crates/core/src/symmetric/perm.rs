use std::fmt;

use crate::error::{check_cap, Error, Result};

use super::partition::Partition;

/// Largest degree for which the whole group may be enumerated.
pub const MAX_ENUMERATION_DEGREE: usize = 8;

/// A permutation of `{1..k}`.
///
/// Stored 0-based internally; every public accessor speaks 1-based
/// one-line or cycle notation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Permutation {
            images: (0..k).collect(),
        }
    }

    /// From 1-based one-line notation `σ(1), …, σ(k)`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let k = images.len();
        let mut seen = vec![false; k];
        let mut out = Vec::with_capacity(k);
        for &v in images {
            if v == 0 || v > k || seen[v - 1] {
                return Err(Error::InvalidArgument(format!(
                    "{images:?} is not a permutation of 1..{k}"
                )));
            }
            seen[v - 1] = true;
            out.push(v - 1);
        }
        Ok(Permutation { images: out })
    }

    /// Transposition `(i j)` in `S_k`, 1-based.
    pub fn transposition(i: usize, j: usize, k: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > k || j > k || i == j {
            return Err(Error::InvalidArgument(format!("({i} {j}) is not a transposition of S_{k}")));
        }
        let mut p = Self::identity(k);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    /// Build from disjoint cycles given 1-based; points not mentioned are fixed.
    pub fn from_cycles(cycles: &[Vec<usize>], k: usize) -> Result<Self> {
        let mut images: Vec<usize> = (0..k).collect();
        let mut used = vec![false; k];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                if a == 0 || a > k {
                    return Err(Error::Parse(format!("point {a} outside 1..{k}")));
                }
                if used[a - 1] {
                    return Err(Error::Parse(format!("point {a} appears twice")));
                }
                used[a - 1] = true;
                let b = cycle[(idx + 1) % cycle.len()];
                images[a - 1] = b - 1;
            }
        }
        Ok(Permutation { images })
    }

    /// Parse cycle notation such as `"(1 3 2)(4 5)"`; `"e"` and `"()"` are
    /// the identity. Elements may be separated by spaces or commas; for
    /// `k <= 9` a cycle may also be written without separators, `"(132)"`.
    pub fn parse_cycles(text: &str, k: usize) -> Result<Self> {
        let t = text.trim();
        if t == "e" || t.is_empty() {
            return Ok(Self::identity(k));
        }
        let mut cycles = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let inner_start = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {text:?}")))?;
            let close = inner_start
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {text:?}")))?;
            let inner = inner_start[..close].trim();
            rest = inner_start[close + 1..].trim_start();
            if inner.is_empty() {
                continue;
            }
            let has_sep = inner.contains(|c: char| c.is_whitespace() || c == ',');
            let points: Vec<usize> = if has_sep || k > 9 {
                inner
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| Error::Parse(format!("bad point {s:?} in {text:?}")))
                    })
                    .collect::<Result<_>>()?
            } else {
                inner
                    .chars()
                    .map(|c| {
                        c.to_digit(10)
                            .map(|d| d as usize)
                            .ok_or_else(|| Error::Parse(format!("bad point {c:?} in {text:?}")))
                    })
                    .collect::<Result<_>>()?
            };
            cycles.push(points);
        }
        Self::from_cycles(&cycles, k)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }


    pub(crate) fn images0(&self) -> &[usize] {
        &self.images
    }

    /// 1-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::SizeMismatch(format!(
                "composing S_{} with S_{}",
                self.degree(),
                other.degree()
            )));
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Permutation {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { images: inv }
    }

    /// Disjoint cycles, 1-based, fixed points included, each cycle
    /// starting at its smallest element, cycles ordered by that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut out = Vec::new();
        for start in 0..k {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x + 1);
                x = self.images[x];
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_type(&self) -> Partition {
        Partition::from_unsorted(self.cycles().iter().map(Vec::len).collect())
    }

    /// `#σ`: number of cycles, fixed points included.
    pub fn cycle_count(&self) -> usize {
        let k = self.degree();
        let mut seen = vec![false; k];
        let mut count = 0;
        for start in 0..k {
            if seen[start] {
                continue;
            }
            count += 1;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
            }
        }
        count
    }

    /// `|σ| = k - #σ`, the minimal number of transpositions.
    pub fn length(&self) -> usize {
        self.degree() - self.cycle_count()
    }

    /// `σ ⊔ τ` acting on `{1..k+l}`, with `τ` shifted by `k`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let k = self.degree();
        let mut images = self.images.clone();
        images.extend(other.images.iter().map(|v| v + k));
        Permutation { images }
    }

    /// For `σ` fixing `point` (1-based), the permutation induced on the
    /// remaining points, relabelled to `{1..k-1}`.
    pub fn remove_fixed_point(&self, point: usize) -> Result<Self> {
        let p = point - 1;
        if self.images.get(p) != Some(&p) {
            return Err(Error::InvalidArgument(format!("{point} is not a fixed point of {self}")));
        }
        let relabel = |x: usize| if x > p { x - 1 } else { x };
        Ok(Permutation {
            images: self
                .images
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != p)
                .map(|(_, &v)| relabel(v))
                .collect(),
        })
    }

    /// Canonical representative of a cycle type: consecutive cycles
    /// `(1 2 … λ1)(λ1+1 …)…`.
    pub fn class_representative(class: &Partition) -> Self {
        let mut images = Vec::with_capacity(class.size());
        let mut start = 0;
        for &part in class.parts() {
            for j in 0..part {
                images.push(start + (j + 1) % part);
            }
            start += part;
        }
        Permutation { images }
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation without fixed points; `e` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            let body: Vec<String> = c.iter().map(ToString::to_string).collect();
            write!(f, "({})", body.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}∈S{}", self, self.degree())
    }
}

/// All `k!` permutations in lexicographic order of one-line notation.
pub fn enumerate_group(k: usize) -> Result<impl Iterator<Item = Permutation>> {
    check_cap("k", k, MAX_ENUMERATION_DEGREE)?;
    if k == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(LexPermutations {
        next: Some((0..k).collect()),
    })
}

pub(crate) fn all_permutations(k: usize) -> Vec<Permutation> {
    LexPermutations {
        next: Some((0..k).collect()),
    }
    .collect()
}

struct LexPermutations {
    next: Option<Vec<usize>>,
}

impl Iterator for LexPermutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let k = succ.len();
        if k > 1 {
            if let Some(i) = (0..k - 1).rev().find(|&i| succ[i] < succ[i + 1]) {
                let j = (i + 1..k).rev().find(|&j| succ[j] > succ[i]).unwrap();
                succ.swap(i, j);
                succ[i + 1..].reverse();
                self.next = Some(succ);
            }
        }
        Some(Permutation { images: cur })
    }
}
