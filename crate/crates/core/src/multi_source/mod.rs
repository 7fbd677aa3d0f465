//! Multi-source scheduling: one source transmits per slot, costs are separable
//! per-source monotone functions of AoI, and the epoch cost is
//! `(1 / NM) sum_j sum_i f_i(A_i(j))`.
//!
//! Source indices are 0-based throughout.

mod interpolate;
mod learners;
mod oracle;
mod policy;
mod runner;
mod whittle;

pub use interpolate::{interpolate_cost_estimate, CostSampleSet};
pub use learners::{EpochFeedback, FdwlState, FpwlState};
pub use oracle::{all_schedule_costs, brute_force_best_schedule, schedule_at, schedule_count, DEFAULT_BUDGET};
pub use policy::{evaluate_policy_epoch, max_aoi_step, EpochTrace, SchedulePolicy};
pub use runner::{bandit_samples, run_multi_source, Feedback, MultiAlgorithm, MultiSourceRun};
pub use whittle::{whittle_index, whittle_schedule_step, WhittleIndexTable};
