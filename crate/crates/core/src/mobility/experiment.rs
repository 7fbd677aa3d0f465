use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aoi::Aoi;
use crate::error::{Error, Result};
use crate::multi_source::{CostSampleSet, EpochFeedback, FdwlState, FpwlState, SchedulePolicy};
use crate::record::ExperimentRecord;
use crate::regret::Provenance;
use crate::rng::RngStream;

use super::adversary::assign_adversarial_velocities;
use super::node::{brownian_step, levy_step, LevyParams, NodeState};
use super::tracking::{tracking_error, BsEstimate, RawSamples};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MobilityModel {
    Levy,
    Adversarial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrackingScheduler {
    Fpwl,
    Fdwl,
    MaxAoi,
}

impl TrackingScheduler {
    pub const ALL: [TrackingScheduler; 3] = [
        TrackingScheduler::Fpwl,
        TrackingScheduler::Fdwl,
        TrackingScheduler::MaxAoi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TrackingScheduler::Fpwl => "fpwl",
            TrackingScheduler::Fdwl => "fdwl",
            TrackingScheduler::MaxAoi => "max-aoi",
        }
    }
}

impl fmt::Display for TrackingScheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TrackingScheduler {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fpwl" => Ok(TrackingScheduler::Fpwl),
            "fdwl" => Ok(TrackingScheduler::Fdwl),
            "max-aoi" | "maxaoi" => Ok(TrackingScheduler::MaxAoi),
            other => Err(Error::validation("scheduler", format!("unknown scheduler `{other}`"))),
        }
    }
}

/// Setup of one tracking experiment. Node `i` belongs to class `i % k` where
/// `k` is the number of classes of the chosen model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MobilityExperimentConfig {
    pub model: MobilityModel,
    pub nodes: usize,
    pub slots: usize,
    pub epochs: usize,
    pub schedulers: Vec<TrackingScheduler>,
    /// Levy speed caps per class.
    pub v_max: Vec<f64>,
    pub flight_max: usize,
    pub pause_max: usize,
    /// Adversarial weights `c` per class.
    pub c: Vec<f64>,
    /// Sum of adversarial speeds; `N` when unset.
    pub v_total: Option<f64>,
    /// Cost bound handed to the interpolation step; the largest possible
    /// one-epoch error when unset.
    pub bound: Option<f64>,
    /// FPWL perturbation parameter; the default rate when unset.
    pub epsilon: Option<f64>,
}

impl Default for MobilityExperimentConfig {
    fn default() -> Self {
        MobilityExperimentConfig {
            model: MobilityModel::Levy,
            nodes: 6,
            slots: 200,
            epochs: 500,
            schedulers: TrackingScheduler::ALL.to_vec(),
            v_max: vec![0.1, 0.5, 5.0],
            flight_max: 50,
            pause_max: 30,
            c: vec![0.1, 0.4, 40.0],
            v_total: None,
            bound: None,
            epsilon: None,
        }
    }
}

impl MobilityExperimentConfig {
    pub fn levy(nodes: usize, slots: usize, epochs: usize) -> Self {
        MobilityExperimentConfig {
            nodes,
            slots,
            epochs,
            ..Self::default()
        }
    }

    pub fn adversarial(nodes: usize, slots: usize, epochs: usize) -> Self {
        MobilityExperimentConfig {
            model: MobilityModel::Adversarial,
            ..Self::levy(nodes, slots, epochs)
        }
    }

    fn classes(&self) -> usize {
        match self.model {
            MobilityModel::Levy => self.v_max.len(),
            MobilityModel::Adversarial => self.c.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 {
            return Err(Error::validation("nodes", "must be at least 1"));
        }
        if self.slots < 2 {
            return Err(Error::validation("slots", "must be at least 2"));
        }
        if self.epochs == 0 {
            return Err(Error::validation("epochs", "must be at least 1"));
        }
        if self.schedulers.is_empty() {
            return Err(Error::validation("schedulers", "must not be empty"));
        }
        let k = self.classes();
        if k == 0 {
            return Err(Error::validation("classes", "at least one class is required"));
        }
        if !self.nodes.is_multiple_of(k) {
            return Err(Error::validation(
                "nodes",
                format!("{} nodes cannot be split evenly into {k} classes", self.nodes),
            ));
        }
        if self.v_max.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::validation("v_max", "speeds must be finite and nonnegative"));
        }
        if self.c.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::validation("c", "weights must be finite and positive"));
        }
        if self.flight_max == 0 || self.pause_max == 0 {
            return Err(Error::validation(
                "flight_max",
                "flight and pause caps must be at least 1",
            ));
        }
        if let Some(v) = self.v_total {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::validation("v_total", "must be finite and nonnegative"));
            }
        }
        if let Some(d) = self.bound {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::validation("bound", "must be finite and positive"));
            }
        }
        if let Some(e) = self.epsilon {
            if e.is_nan() || e <= 0.0 {
                return Err(Error::validation("epsilon", "must be positive"));
            }
        }
        Ok(())
    }

    pub fn v_total(&self) -> f64 {
        self.v_total.unwrap_or(self.nodes as f64)
    }

    /// `D`: fastest possible speed times `M`.
    pub fn bound(&self) -> f64 {
        if let Some(d) = self.bound {
            return d;
        }
        let v = match self.model {
            MobilityModel::Levy => self.v_max.iter().copied().fold(0.0, f64::max),
            MobilityModel::Adversarial => self.v_total(),
        };
        let d = v * self.slots as f64;
        if d > 0.0 {
            d
        } else {
            1.0
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
            .unwrap_or_else(|| FpwlState::default_epsilon(self.slots, self.nodes, self.bound(), self.epochs))
    }
}

/// Per-epoch results for one scheduler and seed.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingRun {
    pub scheduler: TrackingScheduler,
    pub seed: u64,
    /// Mean over slots and nodes of the distance to the last report.
    pub errors: Vec<f64>,
    /// Mean over slots of `(1/N) sum_i v_i A_i`.
    pub surrogate: Vec<f64>,
    /// Adversarial runs: the speeds assigned in each epoch.
    pub speeds: Vec<Vec<f64>>,
    pub bound: f64,
}

impl TrackingRun {
    pub fn mean_error(&self) -> f64 {
        self.errors.iter().sum::<f64>() / self.errors.len().max(1) as f64
    }

    pub fn records(&self, experiment: &str) -> Vec<ExperimentRecord> {
        self.errors
            .iter()
            .zip(&self.surrogate)
            .enumerate()
            .map(|(k, (&err, &cost))| ExperimentRecord {
                experiment: experiment.to_string(),
                algorithm: self.scheduler.name().to_string(),
                seed: self.seed,
                epoch: k + 1,
                cost_raw: cost,
                cost_norm: cost / self.bound,
                regret_static: None,
                regret_dynamic: None,
                comparator: Provenance::None,
                tracking_error: Some(err),
            })
            .collect()
    }
}

enum Learner {
    Fpwl(FpwlState),
    Fdwl(FdwlState),
    MaxAoi,
}

impl Learner {
    fn observables(&self, nodes: usize, slots: usize) -> Vec<Vec<f64>> {
        match self {
            Learner::Fpwl(s) => s.cumulative().to_vec(),
            Learner::Fdwl(s) => s.previous().to_vec(),
            Learner::MaxAoi => vec![vec![1.0; slots]; nodes],
        }
    }

    fn select(&self, rng: &mut RngStream) -> SchedulePolicy {
        match self {
            Learner::Fpwl(s) => s.select(rng),
            Learner::Fdwl(s) => s.select(),
            Learner::MaxAoi => SchedulePolicy::MaxAoi,
        }
    }

    fn update(&mut self, feedback: &EpochFeedback) -> Result<()> {
        match self {
            Learner::Fpwl(s) => s.update(feedback),
            Learner::Fdwl(s) => s.update(feedback),
            Learner::MaxAoi => Ok(()),
        }
    }
}

/// What [`run_tracking_cell_observed`] reports while it runs.
#[derive(Debug, Clone, PartialEq)]
pub enum TrackingEvent<'a> {
    /// A node was polled. `aois` is the AoI vector the scheduler saw and
    /// `sample` the `(AoI, cost)` pair the report revealed.
    Slot {
        epoch: usize,
        slot: usize,
        scheduled: usize,
        aois: &'a [Aoi],
        sample: (usize, f64),
    },
    /// Sample sets handed to the learner at the end of an epoch.
    EpochEnd { epoch: usize, samples: &'a [CostSampleSet] },
}

/// Runs one scheduler. Node motion draws come from per-node substreams of
/// `seed`, so every scheduler faces the same Levy trajectories and the same
/// Brownian headings.
pub fn run_tracking_cell(
    config: &MobilityExperimentConfig,
    scheduler: TrackingScheduler,
    seed: u64,
) -> Result<TrackingRun> {
    run_tracking_cell_observed(config, scheduler, seed, |_| {})
}

/// [`run_tracking_cell`] with a callback on every poll and epoch end.
pub fn run_tracking_cell_observed(
    config: &MobilityExperimentConfig,
    scheduler: TrackingScheduler,
    seed: u64,
    mut observe: impl FnMut(TrackingEvent<'_>),
) -> Result<TrackingRun> {
    config.validate()?;
    let n = config.nodes;
    let m = config.slots;
    let bound = config.bound();
    let classes = config.classes();
    let master = RngStream::new(seed);
    let mut motion: Vec<RngStream> = (0..n).map(|i| master.substream("motion", i as u64)).collect();
    let mut learner_rng = master.substream("scheduler", 0);
    let levy: Vec<LevyParams> = (0..n)
        .map(|i| LevyParams {
            v_max: config.v_max.get(i % classes).copied().unwrap_or(0.0),
            flight_max: config.flight_max,
            pause_max: config.pause_max,
        })
        .collect();
    let c: Vec<f64> = (0..n)
        .map(|i| config.c.get(i % classes).copied().unwrap_or(1.0))
        .collect();

    let mut learner = match scheduler {
        TrackingScheduler::Fpwl => Learner::Fpwl(FpwlState::new(n, m, config.epsilon())),
        TrackingScheduler::Fdwl => Learner::Fdwl(FdwlState::new(n, m)),
        TrackingScheduler::MaxAoi => Learner::MaxAoi,
    };

    let mut nodes = vec![NodeState::at([0.0, 0.0]); n];
    let mut estimate = BsEstimate::from_nodes(&nodes);
    let mut run = TrackingRun {
        scheduler,
        seed,
        errors: Vec::with_capacity(config.epochs),
        surrogate: Vec::with_capacity(config.epochs),
        speeds: Vec::new(),
        bound,
    };

    for epoch in 0..config.epochs {
        let speeds = match config.model {
            MobilityModel::Adversarial => {
                let v = assign_adversarial_velocities(&c, &learner.observables(n, m), config.v_total())?;
                run.speeds.push(v.clone());
                Some(v)
            }
            MobilityModel::Levy => None,
        };
        let policy = learner.select(&mut learner_rng);
        let mut raw = vec![RawSamples::default(); n];
        let (mut err_sum, mut cost_sum) = (0.0, 0.0);
        for slot in 0..m {
            let i = policy.choose(slot, &estimate.aois);
            let speed = match &speeds {
                Some(v) => v[i],
                None => nodes[i].current_speed(),
            };
            let a = estimate.aois[i].get().min(m);
            let value = (speed * a as f64).min(bound);
            observe(TrackingEvent::Slot {
                epoch,
                slot,
                scheduled: i,
                aois: &estimate.aois,
                sample: (a, value),
            });
            raw[i].push(a, value);
            estimate.report(i, &nodes[i]);
            for (k, node) in nodes.iter_mut().enumerate() {
                match &speeds {
                    Some(v) => brownian_step(node, v[k], &mut motion[k]),
                    None => levy_step(node, &levy[k], &mut motion[k]),
                }
            }
            let e = tracking_error(&nodes, &estimate);
            err_sum += e.mean_error;
            cost_sum += e.surrogate / n as f64;
        }
        run.errors.push(err_sum / m as f64);
        run.surrogate.push(cost_sum / m as f64);
        let samples = raw.iter().map(|r| r.monotone(bound)).collect::<Result<Vec<_>>>()?;
        observe(TrackingEvent::EpochEnd {
            epoch,
            samples: &samples,
        });
        learner.update(&EpochFeedback::Bandit { samples, bound })?;
    }
    Ok(run)
}

/// Runs every configured scheduler for one seed, in the configured order.
pub fn run_tracking_experiment(config: &MobilityExperimentConfig, seed: u64) -> Result<Vec<TrackingRun>> {
    config.validate()?;
    config
        .schedulers
        .par_iter()
        .map(|&s| run_tracking_cell(config, s, seed))
        .collect()
}
