use crate::aoi::AoiCostFunction;
use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::interpolate::{interpolate_cost_estimate, CostSampleSet};
use super::policy::SchedulePolicy;

/// Per-epoch feedback handed to a multi-source learner.
#[derive(Debug, Clone, PartialEq)]
pub enum EpochFeedback {
    /// Every source's full cost function.
    Full(Vec<AoiCostFunction>),
    /// Only the costs revealed in slots where each source transmitted, plus
    /// the bound used to complete the estimate.
    Bandit { samples: Vec<CostSampleSet>, bound: f64 },
}

impl EpochFeedback {
    /// Full cost functions, interpolating bandit samples as needed.
    pub fn estimates(&self, slots: usize) -> Result<Vec<AoiCostFunction>> {
        match self {
            EpochFeedback::Full(fs) => Ok(fs.clone()),
            EpochFeedback::Bandit { samples, bound } => samples
                .iter()
                .map(|s| interpolate_cost_estimate(s, slots, *bound))
                .collect(),
        }
    }

    fn sources(&self) -> usize {
        match self {
            EpochFeedback::Full(fs) => fs.len(),
            EpochFeedback::Bandit { samples, .. } => samples.len(),
        }
    }
}

fn identity_rows(sources: usize, slots: usize) -> Vec<Vec<f64>> {
    vec![(1..=slots).map(|j| j as f64).collect(); sources]
}

fn check_feedback(feedback: &EpochFeedback, sources: usize, slots: usize) -> Result<Vec<AoiCostFunction>> {
    if feedback.sources() != sources {
        return Err(Error::LengthMismatch {
            what: "feedback sources",
            expected: sources,
            got: feedback.sources(),
        });
    }
    let fs = feedback.estimates(slots)?;
    for f in &fs {
        if f.len() != slots {
            return Err(Error::LengthMismatch {
                what: "cost function",
                expected: slots,
                got: f.len(),
            });
        }
        crate::aoi::validate_cost_values(f.values(), f.bound(), true)?;
    }
    Ok(fs)
}

/// Follow the Perturbed Whittle Leader.
///
/// Accumulates every source's cost functions, starting from `F(j) = j`. Each
/// epoch it adds a fresh random increasing perturbation (prefix sums of
/// uniforms on `[0, 1/epsilon]`) and schedules with the Whittle policy of the
/// perturbed sums.
#[derive(Debug, Clone, PartialEq)]
pub struct FpwlState {
    cumulative: Vec<Vec<f64>>,
    perturbation_scale: f64,
    epoch: usize,
}

impl FpwlState {
    /// `epsilon = f64::INFINITY` turns the perturbation off.
    pub fn new(sources: usize, slots: usize, epsilon: f64) -> Self {
        FpwlState {
            cumulative: identity_rows(sources, slots),
            perturbation_scale: if epsilon.is_infinite() { 0.0 } else { 1.0 / epsilon },
            epoch: 1,
        }
    }

    /// `epsilon = sqrt(2M / (N D^2 T))`.
    pub fn default_epsilon(slots: usize, sources: usize, bound: f64, epochs: usize) -> f64 {
        (2.0 * slots as f64 / (sources as f64 * bound * bound * epochs as f64)).sqrt()
    }

    pub fn cumulative(&self) -> &[Vec<f64>] {
        &self.cumulative
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn sources(&self) -> usize {
        self.cumulative.len()
    }

    pub fn slots(&self) -> usize {
        self.cumulative[0].len()
    }

    /// Draws one uniform increment per `(source, AoI)`.
    pub fn draw_increments(&self, rng: &mut RngStream) -> Vec<Vec<f64>> {
        self.cumulative
            .iter()
            .map(|row| {
                row.iter()
                    .map(|_| rng.uniform_in(0.0, self.perturbation_scale))
                    .collect()
            })
            .collect()
    }

    /// `F + gamma`, with `gamma(j)` the prefix sum of the increments up to `j`.
    pub fn perturbed(&self, increments: &[Vec<f64>]) -> Vec<Vec<f64>> {
        self.cumulative
            .iter()
            .zip(increments)
            .map(|(row, delta)| {
                let mut gamma = 0.0;
                row.iter()
                    .zip(delta)
                    .map(|(f, d)| {
                        gamma += d;
                        f + gamma
                    })
                    .collect()
            })
            .collect()
    }

    pub fn select(&self, rng: &mut RngStream) -> SchedulePolicy {
        let increments = self.draw_increments(rng);
        self.select_with(&increments)
    }

    pub fn select_with(&self, increments: &[Vec<f64>]) -> SchedulePolicy {
        SchedulePolicy::whittle_from_values(&self.perturbed(increments))
            .expect("monotone cumulative plus increasing perturbation")
    }

    pub fn update(&mut self, feedback: &EpochFeedback) -> Result<()> {
        let fs = check_feedback(feedback, self.sources(), self.slots())?;
        for (row, f) in self.cumulative.iter_mut().zip(&fs) {
            for (acc, v) in row.iter_mut().zip(f.values()) {
                *acc += v;
            }
        }
        self.epoch += 1;
        Ok(())
    }
}

/// Follow the Dynamic Whittle Leader: the Whittle policy of the previous
/// epoch's (estimated) cost functions, starting from `f(j) = j`.
#[derive(Debug, Clone, PartialEq)]
pub struct FdwlState {
    previous: Vec<Vec<f64>>,
    epoch: usize,
}

impl FdwlState {
    pub fn new(sources: usize, slots: usize) -> Self {
        FdwlState {
            previous: identity_rows(sources, slots),
            epoch: 1,
        }
    }

    pub fn previous(&self) -> &[Vec<f64>] {
        &self.previous
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn select(&self) -> SchedulePolicy {
        SchedulePolicy::whittle_from_values(&self.previous).expect("previous costs are monotone")
    }

    pub fn update(&mut self, feedback: &EpochFeedback) -> Result<()> {
        let fs = check_feedback(feedback, self.previous.len(), self.previous[0].len())?;
        self.previous = fs.into_iter().map(|f| f.values().to_vec()).collect();
        self.epoch += 1;
        Ok(())
    }
}
