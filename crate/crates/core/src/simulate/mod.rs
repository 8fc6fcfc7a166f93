//! Trajectory integration, empirical contraction rates and runtime
//! monitors.

mod initial;
mod integrate;
mod monitors;
mod rate;

pub use initial::{sample_invariant, sample_uniform, with_dale_signs};
pub use integrate::{integrate, integrate_delayed, integrate_dense, round_delay, DenseTrajectory, Trajectory, STABILITY_FACTOR};
pub use monitors::{
    check_dale, check_entrainment, check_invariance, check_skew_decay, skew_part, Component, DaleReport, DaleVerdict, EntrainmentReport,
    InvarianceReport, SkewReport, Violation, SIGN_TOLERANCE,
};
pub use rate::{composite_distance, empirical_rate, RateEstimate, DEFAULT_TRANSIENT, DISTANCE_FLOOR};
