//! Hard instances, testers and exact distance oracles for Boolean function
//! property testing on the hypercube.
//!
//! The crate is organised bottom-up:
//!
//! * [`cube`]: points, truth tables, binomial arithmetic, level matchings,
//!   sensitivity.
//! * [`talagrand`]: the random monotone DNF and its unique-term statistics.
//! * [`instances`]: yes/no hard function families (monotonicity, juntas,
//!   intersecting and union-closed families).
//! * [`distance`]: exact and certified distance oracles.
//! * [`testers`]: band truncation, the two sampling testers, the bad-event
//!   machinery and the indistinguishability harness.

pub mod cube;
pub mod distance;
pub mod error;
pub mod graph;
pub mod instances;
pub mod property;
pub mod rng;
pub mod stats;
pub mod talagrand;
pub mod testers;

pub use cube::{Matching, Point, TruthTable};
pub use distance::DistanceReport;
pub use error::{Error, Result};
pub use property::Property;
pub use talagrand::TalagrandDnf;

/// Library version recorded in every artifact.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Identifier of the rounding conventions, recorded alongside results so that
/// numbers produced under different conventions are never mixed up.
///
/// * term width `round(sqrt(m)/eps)`, at least 1;
/// * term count `round(0.1 * 2^(sqrt(m)/eps))` from the unrounded exponent, at least 1;
/// * action block size `round(sqrt(n)/eps)`, union-closed block `round(log2(1/eps))`;
/// * band endpoints are real numbers compared inclusively with integer weights.
pub const ROUNDING_POLICY: &str = "round-half-away/v1";
