//! Exact finite-`k` ground truth.
//!
//! Probability is constant on type classes, so a guessing table is a list of
//! type-class blocks ranked by per-word probability. Block sizes are exact
//! integers; moments are accumulated in the log domain.

mod census;
mod naive;
mod series;
mod table;

pub use census::{
    smallest_nonempty_k, typical_set_census, typical_set_census_capped, TypicalCensus,
};
pub use naive::{
    naive_enumeration_crosscheck, naive_enumeration_crosscheck_capped, naive_moments, NaiveMoments,
    DEFAULT_MAX_WORDS, NAIVE_ALPHAS,
};
pub use series::{
    convergence_series, finite_k_exponents, gaps_strictly_decreasing, FiniteKExponents, Quantity,
    SeriesPoint, ZERO_GAP,
};
pub use table::{
    build_guess_table, build_guess_table_capped, exact_log_moment, exact_moment, ExactGuessTable,
    GuessBlock,
};
