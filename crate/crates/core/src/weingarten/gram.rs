use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{check_cap, Error, Result};
use crate::exactmath::{ExactMatrix, IntPolynomial, RationalFunction};
use crate::pairings::{coset_type, enumerate_noncrossing, enumerate_pairings, loops, PairPartition};
use crate::symmetric::{all_permutations, Partition, Permutation};

use super::table::{GroupKind, Mode, TableKey, WeingartenTable};

/// Largest unitary degree (symbolic and numeric).
pub const MAX_UNITARY_K: usize = 7;
/// Largest orthogonal degree in symbolic mode.
pub const MAX_ORTHOGONAL_K_SYMBOLIC: usize = 10;
/// Largest orthogonal degree in numeric mode.
pub const MAX_ORTHOGONAL_K_NUMERIC: usize = 12;
/// Largest free orthogonal degree in symbolic mode.
pub const MAX_FREE_K_SYMBOLIC: usize = 10;
/// Largest free orthogonal degree in numeric mode.
pub const MAX_FREE_K_NUMERIC: usize = 14;

/// Orbit-reduced Gram system.
///
/// The Weingarten values `w_ν` (one per class) are the solution of
/// `Σ_ν M[μ][ν] w_ν = δ_{μ, id}`, where `M[μ][ν]` sums the Gram row of a
/// representative of class `μ` over all members of class `ν`.
#[derive(Clone, Debug)]
pub(crate) struct ReducedGram {
    pub classes: Vec<Partition>,
    pub matrix: Vec<Vec<IntPolynomial>>,
    pub id: usize,
}

/// Accumulates `Σ n^e` as exponent counts.
fn counts_to_poly(counts: &[u64]) -> IntPolynomial {
    IntPolynomial::from_coeffs(counts.iter().map(|&c| BigInt::from(c)).collect())
}

pub(crate) fn unitary_reduced_gram(k: usize) -> Result<ReducedGram> {
    check_cap("k", k, MAX_UNITARY_K)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let classes = Partition::all(k);
    let index: HashMap<Partition, usize> =
        classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let reps_inv: Vec<Permutation> = classes
        .iter()
        .map(|c| Permutation::class_representative(c).inverse())
        .collect();
    let m = classes.len();
    let mut counts = vec![vec![vec![0u64; k + 1]; m]; m];
    for tau in all_permutations(k) {
        let nu = index[&tau.cycle_type()];
        for (mu, rinv) in reps_inv.iter().enumerate() {
            counts[mu][nu][tau.compose_unchecked(rinv).cycle_count()] += 1;
        }
    }
    Ok(ReducedGram {
        matrix: counts
            .iter()
            .map(|row| row.iter().map(|c| counts_to_poly(c)).collect())
            .collect(),
        id: index[&Partition::ones(k)],
        classes,
    })
}

/// `{1,2}{3,4}…{k-1,k}`
pub(crate) fn base_pairing(k: usize) -> PairPartition {
    let blocks: Vec<(usize, usize)> = (0..k / 2).map(|i| (2 * i + 1, 2 * i + 2)).collect();
    PairPartition::new(&blocks, k).expect("k is even")
}

pub(crate) fn orthogonal_reduced_gram(k: usize) -> Result<ReducedGram> {
    check_cap("k", k, MAX_ORTHOGONAL_K_NUMERIC)?;
    check_even(k)?;
    let pairings = enumerate_pairings(k)?;
    let base = base_pairing(k);
    let classes = Partition::all(k / 2);
    let index: HashMap<Partition, usize> =
        classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let types: Vec<usize> = pairings
        .iter()
        .map(|r| Ok(index[&coset_type(r, &base)?]))
        .collect::<Result<_>>()?;
    let mut reps: Vec<Option<&PairPartition>> = vec![None; classes.len()];
    for (r, &t) in pairings.iter().zip(&types) {
        reps[t].get_or_insert(r);
    }
    let m = classes.len();
    let mut counts = vec![vec![vec![0u64; k / 2 + 1]; m]; m];
    for (mu, rep) in reps.iter().enumerate() {
        let rep = rep.expect("every coset type occurs");
        for (r, &nu) in pairings.iter().zip(&types) {
            counts[mu][nu][loops(rep, r)?] += 1;
        }
    }
    Ok(ReducedGram {
        matrix: counts
            .iter()
            .map(|row| row.iter().map(|c| counts_to_poly(c)).collect())
            .collect(),
        id: index[&Partition::ones(k / 2)],
        classes,
    })
}

fn check_even(k: usize) -> Result<()> {
    if k == 0 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "k must be positive and even for pairings, got {k}"
        )));
    }
    Ok(())
}

impl ReducedGram {
    pub fn symbolic(&self) -> ExactMatrix<RationalFunction> {
        let m = self.classes.len();
        ExactMatrix::from_fn(m, m, |i, j| RationalFunction::from_poly(self.matrix[i][j].clone()))
    }

    pub fn numeric(&self, x: &BigRational) -> ExactMatrix<BigRational> {
        let m = self.classes.len();
        ExactMatrix::from_fn(m, m, |i, j| self.matrix[i][j].eval_rational(x))
    }

    fn unit(&self) -> usize {
        self.id
    }

    pub fn solve(&self, mode: &Mode) -> Result<Vec<RationalFunction>> {
        let m = self.classes.len();
        match mode {
            Mode::Symbolic => {
                let rhs = ExactMatrix::from_fn(m, 1, |i, _| unit_entry(i == self.unit()));
                let w = self.symbolic().exact_solve(&rhs)?;
                Ok((0..m).map(|i| w.get(i, 0).clone()).collect())
            }
            Mode::Numeric(x) => {
                let mat = self.numeric(x);
                let rhs = ExactMatrix::from_fn(m, 1, |i, _| unit_rational(i == self.unit()));
                let w = match mat.exact_solve(&rhs) {
                    Ok(w) => w,
                    Err(Error::Singular { .. }) => mat.group_inverse()?.mul(&rhs)?,
                    Err(e) => return Err(e),
                };
                Ok((0..m)
                    .map(|i| RationalFunction::from_rational(w.get(i, 0)))
                    .collect())
            }
        }
    }

    /// Checks `(M (M w))_μ = M[μ][id]`, which holds both for the inverse
    /// and for the group inverse of `M`.
    pub fn verify_row(&self, mu: usize, w: &[RationalFunction], mode: &Mode) -> Result<bool> {
        let m = self.classes.len();
        if w.len() != m || mu >= m {
            return Ok(false);
        }
        match mode {
            Mode::Symbolic => {
                let mat = self.symbolic();
                let mw = mat.mul_vec(w)?;
                let lhs = (0..m).fold(RationalFunction::zero(), |acc, j| {
                    acc.add(&mat.get(mu, j).mul(&mw[j]))
                });
                Ok(lhs == *mat.get(mu, self.id))
            }
            Mode::Numeric(x) => {
                let mat = self.numeric(x);
                let wq: Vec<BigRational> = w
                    .iter()
                    .map(|v| v.as_constant().ok_or_else(|| Error::Cache("non-constant entry".into())))
                    .collect::<Result<_>>()?;
                let mw = mat.mul_vec(&wq)?;
                let lhs: BigRational = (0..m).map(|j| mat.get(mu, j) * &mw[j]).sum();
                Ok(lhs == *mat.get(mu, self.id))
            }
        }
    }
}

fn unit_entry(one: bool) -> RationalFunction {
    if one {
        RationalFunction::one()
    } else {
        RationalFunction::zero()
    }
}

fn unit_rational(one: bool) -> BigRational {
    BigRational::from_integer(BigInt::from(u8::from(one)))
}

fn class_table(
    group: GroupKind,
    k: usize,
    mode: &Mode,
    gram: &ReducedGram,
) -> Result<WeingartenTable> {
    let values = gram.solve(mode)?;
    let entries: BTreeMap<TableKey, RationalFunction> = gram
        .classes
        .iter()
        .cloned()
        .map(TableKey::Class)
        .zip(values)
        .collect();
    Ok(WeingartenTable::new(group, k, mode.clone(), entries))
}

/// Unitary Weingarten function by inverting the Gram matrix
/// `G[σ, τ] = n^{#(τσ⁻¹)}` on `S_k`.
///
/// The Gram matrix is reduced to conjugacy classes before solving, so the
/// linear system has `p(k)` unknowns instead of `k!`. For numeric `n0 < k`
/// the Gram matrix is singular and the values returned are those of its
/// Moore-Penrose pseudo-inverse.
///
/// ```
/// use haarwell::weingarten::{wg_unitary_gram, Mode};
/// use haarwell::symmetric::Permutation;
///
/// let t = wg_unitary_gram(2, &Mode::Symbolic).unwrap();
/// let s = Permutation::parse_cycles("(1 2)", 2).unwrap();
/// assert_eq!(t.unitary_value(&s).unwrap().to_string(), "-1/(n^3-n)");
/// ```
pub fn wg_unitary_gram(k: usize, mode: &Mode) -> Result<WeingartenTable> {
    check_cap("k", k, MAX_UNITARY_K)?;
    mode.require_integer_dimension()?;
    class_table(GroupKind::Unitary, k, mode, &unitary_reduced_gram(k)?)
}

/// Orthogonal Weingarten matrix on `P₂(k)`, stored by coset type.
///
/// Symbolic values are valid for `n >= k`; numeric mode at smaller `n0`
/// returns the pseudo-inverse.
pub fn wg_orthogonal(k: usize, mode: &Mode) -> Result<WeingartenTable> {
    check_even(k)?;
    let cap = if mode.is_symbolic() {
        MAX_ORTHOGONAL_K_SYMBOLIC
    } else {
        MAX_ORTHOGONAL_K_NUMERIC
    };
    check_cap("k", k, cap)?;
    mode.require_integer_dimension()?;
    class_table(GroupKind::Orthogonal, k, mode, &orthogonal_reduced_gram(k)?)
}

/// Gram matrix `n^{loops(π, ρ)}` over the given pairings.
pub fn pairing_gram(pairings: &[PairPartition]) -> Result<ExactMatrix<RationalFunction>> {
    let m = pairings.len();
    let mut rows = Vec::with_capacity(m);
    for a in pairings {
        rows.push(
            pairings
                .iter()
                .map(|b| Ok(RationalFunction::n_pow(loops(a, b)?)))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ExactMatrix::from_rows(rows)
}

pub(crate) fn pairing_gram_at(pairings: &[PairPartition], x: &BigRational) -> Result<ExactMatrix<BigRational>> {
    let m = pairings.len();
    let max_loops = pairings.first().map_or(0, |p| p.size() / 2);
    let powers: Vec<BigRational> = (0..=max_loops)
        .scan(BigRational::from_integer(1.into()), |acc, _| {
            let cur = acc.clone();
            *acc = &*acc * x;
            Some(cur)
        })
        .collect();
    let mut data = Vec::with_capacity(m);
    for a in pairings {
        data.push(
            pairings
                .iter()
                .map(|b| Ok(powers[loops(a, b)?].clone()))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    ExactMatrix::from_rows(data)
}

/// Weingarten matrix of the free orthogonal quantum group `O_n^+`: the
/// inverse of the Gram matrix on non-crossing pairings.
///
/// Numeric mode accepts any positive rational `n0`; for `n0 >= 2` the Gram
/// matrix is invertible, below that the pseudo-inverse is used.
pub fn wg_free(k: usize, mode: &Mode) -> Result<WeingartenTable> {
    check_even(k)?;
    let cap = if mode.is_symbolic() {
        MAX_FREE_K_SYMBOLIC
    } else {
        MAX_FREE_K_NUMERIC
    };
    check_cap("k", k, cap)?;
    mode.require_positive()?;
    let nc = enumerate_noncrossing(k)?;
    let w: ExactMatrix<RationalFunction> = match mode {
        Mode::Symbolic => pairing_gram(&nc)?.exact_inverse()?,
        Mode::Numeric(x) => {
            let g = pairing_gram_at(&nc, x)?;
            let w = match g.exact_inverse() {
                Ok(w) => w,
                Err(Error::Singular { .. }) => g.exact_pseudo_inverse()?,
                Err(e) => return Err(e),
            };
            w.map(RationalFunction::from_rational)
        }
    };
    let mut entries = BTreeMap::new();
    for (i, a) in nc.iter().enumerate() {
        for (j, b) in nc.iter().enumerate() {
            entries.insert(TableKey::Pair(a.clone(), b.clone()), w.get(i, j).clone());
        }
    }
    Ok(WeingartenTable::new(GroupKind::FreeOrthogonal, k, mode.clone(), entries))
}

/// The unreduced unitary Gram matrix, indexed by `S_k` in lexicographic
/// order. Intended for cross-checks at small `k`.
pub fn unitary_raw_gram(k: usize) -> Result<(Vec<Permutation>, ExactMatrix<RationalFunction>)> {
    check_cap("k", k, 5)?;
    let perms = all_permutations(k);
    let g = ExactMatrix::from_fn(perms.len(), perms.len(), |i, j| {
        RationalFunction::n_pow(perms[j].compose_unchecked(&perms[i].inverse()).cycle_count())
    });
    Ok((perms, g))
}

/// Full Weingarten matrix of an orthogonal or free table, indexed by the
/// returned pairings.
pub fn pairing_weingarten_matrix(
    table: &WeingartenTable,
) -> Result<(Vec<PairPartition>, ExactMatrix<RationalFunction>)> {
    let pairings = match table.group() {
        GroupKind::Orthogonal => enumerate_pairings(table.k())?,
        GroupKind::FreeOrthogonal => enumerate_noncrossing(table.k())?,
        GroupKind::Unitary => {
            return Err(Error::InvalidArgument("unitary tables are indexed by permutations".into()))
        }
    };
    let m = pairings.len();
    let mut rows = Vec::with_capacity(m);
    for a in &pairings {
        rows.push(
            pairings
                .iter()
                .map(|b| table.pair_value(a, b))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((pairings, ExactMatrix::from_rows(rows)?))
}

/// Re-verifies one inverse identity of a table against a freshly built
/// Gram matrix. `row` is reduced modulo the number of rows.
pub(crate) fn verify_table_row(table: &WeingartenTable, row: usize) -> Result<bool> {
    let k = table.k();
    let mode = table.mode();
    match table.group() {
        GroupKind::Unitary | GroupKind::Orthogonal => {
            let gram = if table.group() == GroupKind::Unitary {
                unitary_reduced_gram(k)?
            } else {
                orthogonal_reduced_gram(k)?
            };
            let w: Vec<RationalFunction> = gram
                .classes
                .iter()
                .map(|c| table.class_value(c).cloned())
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Cache("table is missing a class".into()))?;
            gram.verify_row(row % gram.classes.len(), &w, mode)
        }
        GroupKind::FreeOrthogonal => {
            let nc = enumerate_noncrossing(k)?;
            let (_, w) = pairing_weingarten_matrix(table)?;
            let i = row % nc.len();
            let g = match mode {
                Mode::Symbolic => pairing_gram(&nc)?,
                Mode::Numeric(x) => pairing_gram_at(&nc, x)?.map(RationalFunction::from_rational),
            };
            // (G W G)[i, :] = G[i, :]
            let m = nc.len();
            let gw: Vec<RationalFunction> = (0..m)
                .map(|j| {
                    (0..m).fold(RationalFunction::zero(), |acc, l| {
                        acc.add(&g.get(i, l).mul(w.get(l, j)))
                    })
                })
                .collect();
            Ok((0..m).all(|j| {
                let v = (0..m).fold(RationalFunction::zero(), |acc, l| acc.add(&gw[l].mul(g.get(l, j))));
                v == *g.get(i, j)
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational;

    fn rf(s: &str) -> RationalFunction {
        RationalFunction::parse_sparse(s).unwrap()
    }

    fn cyc(s: &str, k: usize) -> Permutation {
        Permutation::parse_cycles(s, k).unwrap()
    }

    #[test]
    fn unitary_k1_k2() {
        let t1 = wg_unitary_gram(1, &Mode::Symbolic).unwrap();
        assert_eq!(t1.unitary_value(&Permutation::identity(1)).unwrap().to_string(), "1/n");
        let t2 = wg_unitary_gram(2, &Mode::Symbolic).unwrap();
        assert_eq!(t2.unitary_value(&Permutation::identity(2)).unwrap().to_string(), "1/(n^2-1)");
        assert_eq!(t2.unitary_value(&cyc("(1 2)", 2)).unwrap().to_string(), "-1/(n^3-n)");
    }

    #[test]
    fn unitary_k3_full_cycle() {
        let t = wg_unitary_gram(3, &Mode::Symbolic).unwrap();
        let v = t.unitary_value(&cyc("(1 2 3)", 3)).unwrap();
        assert_eq!(v.to_string(), "2/(n^5-5n^3+4n)");
        assert_eq!(*v, rf("2*n^0 / 4*n^1 + -5*n^3 + 1*n^5"));
    }

    #[test]
    fn unitary_matches_raw_inverse() {
        for k in 1..=4 {
            let t = wg_unitary_gram(k, &Mode::Symbolic).unwrap();
            let (perms, g) = unitary_raw_gram(k).unwrap();
            let w = g.exact_inverse().unwrap();
            for (i, s) in perms.iter().enumerate() {
                for (j, tau) in perms.iter().enumerate() {
                    let key = tau.compose(&s.inverse()).unwrap();
                    assert_eq!(w.get(i, j), t.unitary_value(&key).unwrap(), "k={k}");
                }
            }
        }
    }

    #[test]
    fn numeric_below_k_is_pseudo_inverse() {
        for (k, n0) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
            let t = wg_unitary_gram(k, &Mode::numeric_int(n0)).unwrap();
            let (perms, g) = unitary_raw_gram(k).unwrap();
            let g = g.evaluate_at(n0).unwrap();
            let w = g.exact_pseudo_inverse().unwrap();
            for (i, s) in perms.iter().enumerate() {
                for (j, tau) in perms.iter().enumerate() {
                    let key = tau.compose(&s.inverse()).unwrap();
                    let v = t.unitary_value(&key).unwrap().as_constant().unwrap();
                    assert_eq!(*w.get(i, j), v, "k={k}, n0={n0}");
                }
            }
        }
    }

    #[test]
    fn numeric_agrees_with_symbolic_at_large_n() {
        let s = wg_unitary_gram(4, &Mode::Symbolic).unwrap();
        let x = rational(7, 1);
        let n = wg_unitary_gram(4, &Mode::Numeric(x.clone())).unwrap();
        assert_eq!(s.evaluate(&x).unwrap(), n);
    }

    #[test]
    fn orthogonal_k2_k4() {
        let t = wg_orthogonal(2, &Mode::Symbolic).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.class_value(&Partition::ones(1)).unwrap().to_string(), "1/n");
        let t = wg_orthogonal(4, &Mode::Symbolic).unwrap();
        let diag = t.class_value(&Partition::ones(2)).unwrap();
        let off = t.class_value(&Partition::new(vec![2]).unwrap()).unwrap();
        assert_eq!(diag.to_string(), "(n+1)/(n^3+n^2-2n)");
        assert_eq!(off.to_string(), "-1/(n^3+n^2-2n)");
        assert!(wg_orthogonal(3, &Mode::Symbolic).is_err());
    }

    #[test]
    fn orthogonal_inverse_property() {
        for k in [2, 4, 6] {
            let t = wg_orthogonal(k, &Mode::Symbolic).unwrap();
            let (p, w) = pairing_weingarten_matrix(&t).unwrap();
            let g = pairing_gram(&p).unwrap();
            assert_eq!(g.mul(&w).unwrap(), ExactMatrix::identity(p.len()), "k={k}");
        }
    }

    #[test]
    fn free_k4() {
        let t = wg_free(4, &Mode::Symbolic).unwrap();
        let a = PairPartition::parse("{1,2}{3,4}").unwrap();
        let b = PairPartition::parse("{1,4}{2,3}").unwrap();
        assert_eq!(t.pair_value(&a, &a).unwrap().to_string(), "1/(n^2-1)");
        assert_eq!(t.pair_value(&a, &b).unwrap().to_string(), "-1/(n^3-n)");
        let t3 = wg_free(4, &Mode::numeric_int(3)).unwrap();
        assert_eq!(t3.pair_value(&a, &b).unwrap().to_string(), "-1/24");
        assert!(wg_free(5, &Mode::Symbolic).is_err());
    }

    #[test]
    fn free_rational_point() {
        let x = rational(5, 2);
        let s = wg_free(6, &Mode::Symbolic).unwrap().evaluate(&x).unwrap();
        let n = wg_free(6, &Mode::Numeric(x)).unwrap();
        assert_eq!(s, n);
    }

    #[test]
    fn table_rows_verify() {
        let t = wg_unitary_gram(4, &Mode::Symbolic).unwrap();
        for r in 0..5 {
            assert!(verify_table_row(&t, r).unwrap());
        }
        let t = wg_unitary_gram(4, &Mode::numeric_int(2)).unwrap();
        assert!(verify_table_row(&t, 3).unwrap());
        let t = wg_orthogonal(6, &Mode::numeric_int(2)).unwrap();
        assert!(verify_table_row(&t, 1).unwrap());
        let t = wg_free(6, &Mode::numeric_int(3)).unwrap();
        assert!(verify_table_row(&t, 4).unwrap());
    }

    #[test]
    fn caps() {
        assert!(matches!(wg_unitary_gram(8, &Mode::Symbolic), Err(Error::CapExceeded { .. })));
        assert!(wg_unitary_gram(2, &Mode::Numeric(rational(1, 2))).is_err());
        assert!(wg_unitary_gram(2, &Mode::numeric_int(0)).is_err());
    }
}
