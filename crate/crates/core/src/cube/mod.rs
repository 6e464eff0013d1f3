//! Hypercube primitives: points, truth tables, binomial arithmetic, level
//! matchings and sensitivity statistics.
//!
//! Convention used everywhere: coordinate `i` (1-based) is bit `i - 1` of the
//! packed representation, so the truth-table index of `x` is `sum x_i 2^(i-1)`.

pub mod binomial;
pub mod bits;
pub mod matching;
pub mod point;
pub mod sensitivity;
pub mod table;

pub use binomial::{binomial, binomial_u64, central_window_holds, central_window_in_range, mid_binomial_ratio};
pub use matching::{level_matching, level_matching_capped, Matching, LEVEL_MATCHING_CAP};
pub use point::{Point, MAX_DIM};
pub use sensitivity::{
    avg_sensitivity, directed_neg_sensitivity, edge_profile, upward_closure, EdgeProfile,
};
pub use table::TruthTable;
