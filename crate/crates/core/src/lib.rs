//! Online learning of monitoring and scheduling policies when the cost of
//! stale information (a function of Age of Information) is unknown and changes
//! over time.
//!
//! Time is split into epochs of `M` slots. Cost functions are fixed inside an
//! epoch and may change arbitrarily between epochs; a learner picks a policy
//! at the start of each epoch and sees feedback at its end.
//!
//! - [`single_source`]: threshold policies, FTPL (full feedback) and EXP3
//!   (bandit feedback).
//! - [`multi_source`]: Whittle-index scheduling, FPWL and FDWL, bandit cost
//!   interpolation, and an exhaustive schedule oracle for small instances.
//! - [`regret`]: static and dynamic regret, variation budget, the empirical
//!   Whittle gap and regret-bound checks.
//! - [`mobility`]: the mobility-tracking application with Levy and adversarial
//!   Brownian motion.
//! - [`experiment`]: config files, cost-sequence generators and runners
//!   behind the `aoi` binary.

pub mod aoi;
pub mod error;
pub mod experiment;
pub mod mobility;
pub mod multi_source;
pub mod record;
pub mod regret;
pub mod rng;
pub mod single_source;

pub use aoi::{step_aoi_multi, step_aoi_single, Aoi, AoiCostFunction, EpochConfig};
pub use error::{Error, Result};
pub use record::ExperimentRecord;
pub use rng::RngStream;
