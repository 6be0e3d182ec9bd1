use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactmath::{IntPolynomial, RationalFunction};

/// Integer partition `λ ⊢ k`, parts in weakly decreasing order.
///
/// Serves both as a cycle type of a permutation and as a Young diagram.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

/// Conjugacy class label of `S_k`.
pub type CycleType = Partition;
/// Shape of an irreducible representation of `S_k` (or of `U(n)`).
pub type YoungDiagram = Partition;

impl Partition {
    /// Validates positivity; parts are sorted into decreasing order.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::InvalidArgument(format!("partition {parts:?} has a zero part")));
        }
        Ok(Self::from_unsorted(parts))
    }

    pub(crate) fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// `(1, 1, …, 1)`, the class of the identity.
    pub fn ones(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    /// Parse `"[2,1]"`, `"2,1"` or `"2 1"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().trim_start_matches(['[', '(']).trim_end_matches([']', ')']);
        let parts = t
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of boxes (`k`).
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Number of parts (rows); for a cycle type this is `#σ`.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `k - len`, the minimal transposition count of the class.
    pub fn transposition_length(&self) -> usize {
        self.size() - self.len()
    }

    pub fn conjugate(&self) -> Self {
        let cols = self.parts.first().copied().unwrap_or(0);
        Partition {
            parts: (0..cols)
                .map(|j| self.parts.iter().filter(|&&p| p > j).count())
                .collect(),
        }
    }

    /// All partitions of `k`, in reverse lexicographic order:
    /// `(k), (k-1, 1), …, (1^k)`.
    pub fn all(k: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                rec(rem - p, p, cur, out);
                cur.pop();
            }
        }
        rec(k, k, &mut cur, &mut out);
        out
    }

    /// Boxes `(row, col)`, 0-based.
    pub fn boxes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p).map(move |j| (i, j)))
    }

    pub fn hook_length(&self, i: usize, j: usize) -> usize {
        let arm = self.parts[i] - j - 1;
        let leg = self.parts[i + 1..].iter().filter(|&&p| p > j).count();
        arm + leg + 1
    }

    /// `z_μ = ∏ i^{m_i} m_i!`, so that the class has `k!/z_μ` elements.
    pub fn centralizer_order(&self) -> BigInt {
        let mut z = BigInt::one();
        let mut i = 0;
        while i < self.parts.len() {
            let p = self.parts[i];
            let m = self.parts[i..].iter().take_while(|&&q| q == p).count();
            for t in 1..=m {
                z *= BigInt::from(p) * BigInt::from(t);
            }
            i += m;
        }
        z
    }

    pub fn class_size(&self) -> BigInt {
        factorial(self.size()) / self.centralizer_order()
    }

    /// Content polynomial `∏_{(i,j)∈λ} (n + j - i)`: the eigenvalue of
    /// `Σ n^{#σ} σ` on the λ-isotypic component.
    pub fn content_polynomial(&self) -> IntPolynomial {
        self.boxes().fold(IntPolynomial::one(), |acc, (i, j)| {
            acc.mul(&IntPolynomial::linear(j as i64 - i as i64))
        })
    }

    pub fn hook_product(&self) -> BigInt {
        self.boxes()
            .map(|(i, j)| BigInt::from(self.hook_length(i, j)))
            .product()
    }
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `f^λ`: dimension of the irreducible `S_k`-module, by the hook length
/// formula `k! / ∏ hooks`.
pub fn dimension_sn(lambda: &YoungDiagram) -> BigInt {
    factorial(lambda.size()) / lambda.hook_product()
}

/// `dim V_λ` for `U(n)` as a polynomial in `n`: `∏ (n + j - i) / h(i, j)`.
pub fn dimension_un(lambda: &YoungDiagram) -> RationalFunction {
    RationalFunction::new(
        lambda.content_polynomial(),
        IntPolynomial::constant(lambda.hook_product()),
    )
    .expect("hook product is positive")
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.parts.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", body.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn enumerates_partitions() {
        assert_eq!(Partition::all(4).len(), 5);
        assert_eq!(Partition::all(7).len(), 15);
        assert_eq!(Partition::all(4)[0], part(&[4]));
        assert_eq!(*Partition::all(4).last().unwrap(), Partition::ones(4));
    }

    #[test]
    fn hook_dimensions() {
        assert_eq!(dimension_sn(&part(&[3])), BigInt::from(1));
        assert_eq!(dimension_sn(&part(&[2, 1])), BigInt::from(2));
        let total: BigInt = Partition::all(4)
            .iter()
            .map(|l| {
                let f = dimension_sn(l);
                &f * &f
            })
            .sum();
        assert_eq!(total, BigInt::from(24));
    }

    #[test]
    fn unitary_dimensions() {
        assert_eq!(dimension_un(&part(&[1])), RationalFunction::n());
        assert_eq!(dimension_un(&part(&[2])).to_string(), "(n^2+n)/2");
        assert_eq!(dimension_un(&part(&[1, 1])).to_string(), "(n^2-n)/2");
    }

    #[test]
    fn class_sizes_sum_to_factorial() {
        for k in 1..=7 {
            let s: BigInt = Partition::all(k).iter().map(Partition::class_size).sum();
            assert_eq!(s, factorial(k));
        }
        assert_eq!(part(&[2, 2]).class_size(), BigInt::from(3));
    }

    #[test]
    fn parse_and_conjugate() {
        assert_eq!(Partition::parse("[2,1,1]").unwrap(), part(&[2, 1, 1]));
        assert_eq!(Partition::parse("1 2").unwrap(), part(&[2, 1]));
        assert!(Partition::parse("[2,x]").is_err());
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
    }
}
