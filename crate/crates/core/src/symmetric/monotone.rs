use crate::error::{check_cap, Result};

use super::perm::Permutation;

/// Default cap on the factorization length.
pub const DEFAULT_MAX_LENGTH: usize = 12;

/// `#P(σ, l)`: number of factorizations `σ = (i₁ j₁)(i₂ j₂)…(i_l j_l)` into
/// transpositions with `i_p < j_p` and `j₁ ≤ j₂ ≤ … ≤ j_l`.
pub fn count_monotone_factorizations(sigma: &Permutation, l: usize) -> Result<u64> {
    count_monotone_factorizations_capped(sigma, l, DEFAULT_MAX_LENGTH)
}

pub fn count_monotone_factorizations_capped(
    sigma: &Permutation,
    l: usize,
    max_length: usize,
) -> Result<u64> {
    check_cap("l", l, max_length)?;
    let k = sigma.degree();
    // residual = (τ₁…τ_p)^{-1} σ must be reached with the remaining steps
    let residual = sigma.images0().to_vec();
    Ok(dfs(&residual, k, l, 1))
}

/// Counts monotone words for `residual` of length `remaining` whose
/// (0-based) larger indices are all `>= min_j`.
fn dfs(residual: &[usize], k: usize, remaining: usize, min_j: usize) -> u64 {
    if remaining == 0 {
        return u64::from(residual.iter().enumerate().all(|(i, &v)| i == v));
    }
    let dist = transposition_distance(residual);
    if dist > remaining || (remaining - dist) % 2 == 1 {
        return 0;
    }
    let mut total = 0;
    let mut next = residual.to_vec();
    for j in min_j..k {
        for i in 0..j {
            // residual' = (i j) ∘ residual
            for v in next.iter_mut() {
                if *v == i {
                    *v = j;
                } else if *v == j {
                    *v = i;
                }
            }
            total += dfs(&next, k, remaining - 1, j);
            for v in next.iter_mut() {
                if *v == i {
                    *v = j;
                } else if *v == j {
                    *v = i;
                }
            }
        }
    }
    total
}

fn transposition_distance(p: &[usize]) -> usize {
    let k = p.len();
    let mut seen = vec![false; k];
    let mut cycles = 0;
    for s in 0..k {
        if seen[s] {
            continue;
        }
        cycles += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
        }
    }
    k - cycles
}
