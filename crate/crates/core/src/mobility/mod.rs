//! Mobility tracking: a base station follows `N` moving nodes, polling one per
//! slot. The tracking error of a node is the distance from its last report,
//! roughly `v_i A_i`, so each node is a source with an unknown AoI cost.
//!
//! Two motion models: Levy-style bursty walks with three speed classes, and
//! Brownian motion whose per-epoch speeds are set by an adversary reading the
//! scheduler's state.

mod adversary;
mod experiment;
mod node;
mod tracking;

pub use adversary::assign_adversarial_velocities;
pub use experiment::{
    run_tracking_cell, run_tracking_cell_observed, run_tracking_experiment, MobilityExperimentConfig, MobilityModel,
    TrackingEvent, TrackingRun, TrackingScheduler,
};
pub use node::{
    brownian_step, distance, levy_step, levy_step_with, norm, LevyParams, LevyStep, NodeState, Phase, Vec2,
};
pub use tracking::{tracking_error, BsEstimate, RawSamples, TrackingError};
