use haarwell::haar_integrate::{parse_monomial, MomentQuery};
use haarwell::montecarlo::{estimate_moment, sample_haar_orthogonal, sample_haar_unitary, RngSpec, Z_TOLERANCE};
use haarwell::weingarten::GroupKind;

fn query(group: GroupKind, text: &str) -> MomentQuery {
    parse_monomial(text).unwrap().with_group(group)
}

/// Left multiplication by the permutation matrix of `(1 3)` sends row 1 of
/// `U` to row 3; the empirical means of a monomial of `U` and of `PU`
/// (independent streams) agree within 5 combined standard errors.
#[test]
fn left_invariance_under_permutation_matrix() {
    let cases = [
        (GroupKind::Unitary, "u[1,1] u[2,2] ~u[1,1] ~u[2,2]", "u[3,1] u[2,2] ~u[3,1] ~u[2,2]"),
        (GroupKind::Unitary, "u[1,2] ~u[1,2]", "u[3,2] ~u[3,2]"),
        (GroupKind::Orthogonal, "u[1,1] u[1,1] u[2,2] u[2,2]", "u[3,1] u[3,1] u[2,2] u[2,2]"),
    ];
    for (i, (group, a, b)) in cases.iter().enumerate() {
        let ea = estimate_moment(&query(*group, a), 4, 40_000, RngSpec { seed: 11, stream: 2 * i as u64 }).unwrap();
        let eb = estimate_moment(&query(*group, b), 4, 40_000, RngSpec { seed: 11, stream: 2 * i as u64 + 1 }).unwrap();
        let se = (ea.std_error.powi(2) + eb.std_error.powi(2)).sqrt();
        let z = (ea.mean - eb.mean).norm() / se;
        assert!(z <= Z_TOLERANCE, "{a} vs {b}: z = {z}");
    }
}

#[test]
fn single_draws_are_reproducible_and_unitary() {
    for seed in 0..5 {
        let u = sample_haar_unitary(12, RngSpec::new(seed));
        assert_eq!(u, sample_haar_unitary(12, RngSpec::new(seed)));
        assert!(u.unitarity_error() < 1e-10);
        let o = sample_haar_orthogonal(12, RngSpec::new(seed));
        assert!(o.is_real() && o.unitarity_error() < 1e-10);
    }
}

#[test]
fn estimates_do_not_depend_on_thread_count() {
    let q = query(GroupKind::Unitary, "u[1,1] ~u[2,2]");
    let spec = RngSpec::new(5);
    let wide = estimate_moment(&q, 3, 5000, spec).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let narrow = pool.install(|| estimate_moment(&q, 3, 5000, spec).unwrap());
    assert_eq!(wide, narrow);
}
