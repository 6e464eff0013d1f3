//! Upper-bound testers, truncation, and the indistinguishability harness
//! for the lower-bound constructions.

mod algorithms;
mod bad;
mod band;
mod indist;

pub use algorithms::{
    intersecting_tester, tester_rounds, uc_tester, Decision, InstanceOracle, Oracle, TesterOptions, Verdict, Witness,
};
pub use bad::{
    bad_event_estimate, detect_bad, detect_bad_junta, diamond_envelope, pair_events, star_envelope, BadEventReport,
    PairEvents, PlanStrategy, QueryPlan,
};
pub use band::{truncate, Band, TruncStyle, TRUNCATE_MAX_DIM};
pub use indist::{
    best_threshold_advantage, exact_conditional_views, hand_family, indist_experiment, two_sample_chi_square,
    ConditionalViews, FamilyInstance, IndistReport, InstanceSource,
};
