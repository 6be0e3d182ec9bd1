use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use haarwell::exactmath::RationalFunction;
use haarwell::haar_integrate::{integrate, Dimension, Factor, MomentQuery};
use haarwell::pairings::{delta, enumerate_noncrossing, enumerate_pairings, loops, MultiIndex, PairPartition};
use haarwell::symmetric::{enumerate_group, Permutation};
use haarwell::weingarten::{pairing_gram, wg_unitary_gram, GroupKind, Mode};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// All multi-indices in `{1..n}^k`.
fn all_indices(n: usize, k: usize) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                (1..=n).map(move |i| {
                    let mut w = v.clone();
                    w.push(i);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex).collect()
}

#[test]
fn pairing_gram_counts_index_assignments() {
    for k in [2, 4, 6] {
        let pairings = enumerate_pairings(k).unwrap();
        let gram = pairing_gram(&pairings).unwrap();
        for n in [1usize, 2, 3] {
            let indices = all_indices(n, k);
            for (a, pa) in pairings.iter().enumerate() {
                for (b, pb) in pairings.iter().enumerate() {
                    let count: u64 = indices
                        .iter()
                        .map(|i| u64::from(delta(pa, i).unwrap() * delta(pb, i).unwrap()))
                        .sum();
                    assert_eq!(count, (n as u64).pow(loops(pa, pb).unwrap() as u32));
                    assert_eq!(gram.get(a, b).evaluate_at(n as i64).unwrap(), int(count as i64));
                }
            }
        }
    }
}

#[test]
fn pairing_counts() {
    let expected = [(2, 1, 1), (4, 3, 2), (6, 15, 5), (8, 105, 14), (10, 945, 42)];
    for (k, all, nc) in expected {
        assert_eq!(enumerate_pairings(k).unwrap().len(), all);
        let ncs = enumerate_noncrossing(k).unwrap();
        assert_eq!(ncs.len(), nc);
        assert!(ncs.iter().all(PairPartition::is_noncrossing));
    }
}

#[test]
fn unitary_table_is_a_class_function_of_the_inverse_too() {
    for k in 1..=5 {
        let table = wg_unitary_gram(k, &Mode::Symbolic).unwrap();
        for sigma in enumerate_group(k).unwrap() {
            assert_eq!(
                table.unitary_value(&sigma).unwrap(),
                table.unitary_value(&sigma.inverse()).unwrap()
            );
        }
    }
}

fn factor() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

fn unitary_query() -> impl Strategy<Value = MomentQuery> {
    (1usize..=3)
        .prop_flat_map(|k| (prop::collection::vec(factor(), k), prop::collection::vec(factor(), k)))
        .prop_map(|(plain, conj)| {
            let mut factors: Vec<Factor> =
                plain.into_iter().map(|(row, col)| Factor { row, col, conjugated: false }).collect();
            factors.extend(conj.into_iter().map(|(row, col)| Factor { row, col, conjugated: true }));
            MomentQuery::new(GroupKind::Unitary, factors, Dimension::Symbolic)
        })
}

fn orthogonal_query() -> impl Strategy<Value = MomentQuery> {
    prop::collection::vec(factor(), 1..=6).prop_map(|fs| {
        let factors = fs.into_iter().map(|(row, col)| Factor { row, col, conjugated: false }).collect();
        MomentQuery::new(GroupKind::Orthogonal, factors, Dimension::Symbolic)
    })
}

fn relabel(q: &MomentQuery, rows: &Permutation, cols: &Permutation) -> MomentQuery {
    let factors = q
        .factors
        .iter()
        .map(|f| Factor { row: rows.apply(f.row), col: cols.apply(f.col), conjugated: f.conjugated })
        .collect();
    MomentQuery::new(q.group, factors, q.n)
}

fn permutation3() -> impl Strategy<Value = Permutation> {
    (0usize..6).prop_map(|i| enumerate_group(3).unwrap().nth(i).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Left and right multiplication by permutation matrices preserves Haar
    /// measure, so relabelling rows and columns leaves integrals unchanged.
    #[test]
    fn invariance_under_relabelling(q in unitary_query(), r in permutation3(), c in permutation3()) {
        prop_assert_eq!(integrate(&q).unwrap(), integrate(&relabel(&q, &r, &c)).unwrap());
    }

    #[test]
    fn orthogonal_invariance(q in orthogonal_query(), r in permutation3(), c in permutation3()) {
        prop_assert_eq!(integrate(&q).unwrap(), integrate(&relabel(&q, &r, &c)).unwrap());
    }

    /// `U ↦ Uᵗ` preserves Haar measure.
    #[test]
    fn transpose_invariance(q in unitary_query()) {
        let t = MomentQuery::new(
            q.group,
            q.factors.iter().map(|f| Factor { row: f.col, col: f.row, conjugated: f.conjugated }).collect(),
            q.n,
        );
        prop_assert_eq!(integrate(&q).unwrap(), integrate(&t).unwrap());
    }

    /// Unitary moments are real, so conjugating every factor changes nothing.
    #[test]
    fn conjugation_symmetry(q in unitary_query()) {
        let c = MomentQuery::new(
            q.group,
            q.factors.iter().map(|f| Factor { conjugated: !f.conjugated, ..*f }).collect(),
            q.n,
        );
        prop_assert_eq!(integrate(&q).unwrap(), integrate(&c).unwrap());
    }

    /// Numeric integration at `n0 >= degree` agrees with the symbolic value.
    #[test]
    fn numeric_matches_symbolic(q in orthogonal_query(), n0 in 6i64..9) {
        let sym = integrate(&q).unwrap();
        let num = integrate(&MomentQuery::new(q.group, q.factors.clone(), Dimension::Integer(n0))).unwrap();
        prop_assert_eq!(RationalFunction::from_rational(&sym.evaluate_at(n0).unwrap()), num);
    }
}
