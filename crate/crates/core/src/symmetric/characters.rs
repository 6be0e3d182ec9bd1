use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

use super::partition::{CycleType, Partition, YoungDiagram};

type MemoKey = (Vec<usize>, Vec<usize>);

fn memo() -> &'static RwLock<HashMap<MemoKey, i64>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, i64>>> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// `χ_λ(μ)`: the irreducible character of shape `λ` on the class `μ`,
/// by the Murnaghan–Nakayama rule.
///
/// Border strips are removed for the largest remaining part of `μ` first.
/// Results are memoized process-wide on `(λ, μ)`.
pub fn character(lambda: &YoungDiagram, mu: &CycleType) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch(format!(
            "shape {lambda} has {} boxes but class {mu} has degree {}",
            lambda.size(),
            mu.size()
        )));
    }
    Ok(mn(lambda.parts(), mu.parts()))
}

fn mn(lambda: &[usize], mu: &[usize]) -> i64 {
    if mu.is_empty() {
        return 1;
    }
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(&v) = memo().read().unwrap().get(&key) {
        return v;
    }
    let r = mu[0];
    let rest = &mu[1..];
    let len = lambda.len();
    // beta-set: first-column hook lengths, strictly decreasing
    let beta: Vec<usize> = lambda
        .iter()
        .enumerate()
        .map(|(i, &p)| p + len - 1 - i)
        .collect();
    let mut total = 0i64;
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let height = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let shape: Vec<usize> = moved
            .iter()
            .enumerate()
            .map(|(i, &x)| x - (len - 1 - i))
            .filter(|&p| p > 0)
            .collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn(&shape, rest);
    }
    memo().write().unwrap().insert(key, total);
    total
}

/// Full character table of `S_k`: rows indexed by shapes, columns by
/// classes, both in the order of [`Partition::all`].
pub fn character_table(k: usize) -> Vec<Vec<i64>> {
    let parts = Partition::all(k);
    parts
        .iter()
        .map(|l| parts.iter().map(|m| mn(l.parts(), m.parts())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetric::{dimension_sn, Permutation};
    use num_bigint::BigInt;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    #[test]
    fn trivial_and_sign() {
        for mu in Partition::all(5) {
            assert_eq!(character(&part(&[5]), &mu).unwrap(), 1);
            let sign = if mu.transposition_length() % 2 == 0 { 1 } else { -1 };
            assert_eq!(character(&Partition::ones(5), &mu).unwrap(), sign);
        }
        assert_eq!(character(&part(&[1, 1]), &part(&[2])).unwrap(), -1);
    }

    /// Trace of the 3-cycle in the standard representation, computed from
    /// permutation matrices: trace(P) - 1 = (#fixed points) - 1.
    #[test]
    fn standard_rep_of_three_cycle() {
        let c = Permutation::parse_cycles("(1 2 3)", 3).unwrap();
        let fixed = (1..=3).filter(|&i| c.apply(i) == i).count() as i64;
        assert_eq!(character(&part(&[2, 1]), &part(&[3])).unwrap(), fixed - 1);
        assert_eq!(character(&part(&[2, 1]), &part(&[3])).unwrap(), -1);
    }

    #[test]
    fn size_mismatch() {
        assert!(character(&part(&[2, 1]), &part(&[2])).is_err());
    }

    #[test]
    fn degree_matches_hook_formula() {
        for k in 1..=6 {
            for l in Partition::all(k) {
                assert_eq!(
                    BigInt::from(character(&l, &Partition::ones(k)).unwrap()),
                    dimension_sn(&l)
                );
            }
        }
    }

    #[test]
    fn column_orthogonality_s4() {
        let t = character_table(4);
        let classes = Partition::all(4);
        for a in 0..classes.len() {
            for b in 0..classes.len() {
                let s: i64 = (0..t.len()).map(|l| t[l][a] * t[l][b]).sum();
                let expect = if a == b {
                    i64::try_from(classes[a].centralizer_order()).unwrap()
                } else {
                    0
                };
                assert_eq!(s, expect);
            }
        }
    }
}
