//! Weingarten functions of `U(n)`, `O(n)` and `O_n^+`.
//!
//! Tables come from exact inversion of Gram matrices of invariant vectors.
//! For the unitary group three independent routes are available (Gram
//! inversion, the character expansion and the monotone factorization
//! series) together with the orthogonality recursion, so each can be
//! checked against the others. The asymptotic helpers compare exact values
//! with their Möbius leading order.

mod asymptotics;
mod cache;
mod gram;
mod table;
mod unitary;

pub use asymptotics::{
    asymptotic_ratio, asymptotic_ratio_with, free_sign_survey, moebius, moebius_of_class,
    monotonicity_check, multiplicativity_defect, uniform_bound_check, BoundReport, BoundRow,
    MoebiusValue, MonotonicityRow, SurveyReport, MAX_BOUNDS_K,
};
pub use cache::{build_table, table_from_json, table_to_json, TableCache, CACHE_ENV, SCHEMA_VERSION};
pub use gram::{
    pairing_gram, pairing_weingarten_matrix, unitary_raw_gram, wg_free, wg_orthogonal,
    wg_unitary_gram, MAX_FREE_K_NUMERIC, MAX_FREE_K_SYMBOLIC, MAX_ORTHOGONAL_K_NUMERIC,
    MAX_ORTHOGONAL_K_SYMBOLIC, MAX_UNITARY_K,
};
pub use table::{catalan, parse_rational, GroupKind, Mode, TableKey, WeingartenTable};
pub use unitary::{
    monotone_word_count, series_check, series_partial_sum, series_tail_bound,
    wg_unitary_character, wg_unitary_character_table, wg_unitary_recursion_check,
    wg_unitary_series, three_path_check, RecursionReport, SeriesCheck, ThreePathReport, MAX_CHARACTER_K,
    MAX_RECURSION_K, THREE_PATH_SERIES_ORDER,
};
