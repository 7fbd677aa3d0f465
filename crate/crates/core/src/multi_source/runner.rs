use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aoi::{AoiCostFunction, EpochConfig};
use crate::error::{Error, Result};
use crate::record::ExperimentRecord;
use crate::regret::{Provenance, RegretAccumulator, RegretSeries};
use crate::rng::RngStream;

use super::interpolate::CostSampleSet;
use super::learners::{EpochFeedback, FdwlState, FpwlState};
use super::oracle::{all_schedule_costs, brute_force_best_schedule, schedule_count};
use super::policy::{evaluate_policy_epoch, EpochTrace, SchedulePolicy};

#[derive(Debug, Clone, PartialEq)]
pub enum MultiAlgorithm {
    Fpwl {
        epsilon: f64,
    },
    Fdwl,
    Fixed(Vec<usize>),
    MaxAoi,
    /// Exhaustive per-epoch optimum; clairvoyant comparator.
    PerEpochOptimum,
}

impl MultiAlgorithm {
    /// FPWL with `epsilon = sqrt(2M / (N D^2 T))`.
    pub fn fpwl_default(config: &EpochConfig, bound: f64) -> Self {
        MultiAlgorithm::Fpwl {
            epsilon: FpwlState::default_epsilon(config.slots, config.sources, bound, config.epochs),
        }
    }
}

impl fmt::Display for MultiAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultiAlgorithm::Fpwl { .. } => f.write_str("fpwl"),
            MultiAlgorithm::Fdwl => f.write_str("fdwl"),
            MultiAlgorithm::Fixed(seq) => {
                f.write_str("fixed-")?;
                for s in seq {
                    write!(f, "{}", s + 1)?;
                }
                Ok(())
            }
            MultiAlgorithm::MaxAoi => f.write_str("max-aoi"),
            MultiAlgorithm::PerEpochOptimum => f.write_str("per-epoch-optimum"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feedback {
    Full,
    Bandit,
}

/// Costs revealed under bandit feedback: each interior slot reveals the
/// scheduled source's cost at its current AoI, and the last slot, where every
/// source transmits, reveals all of them.
pub fn bandit_samples(trace: &EpochTrace, fs: &[AoiCostFunction]) -> Vec<CostSampleSet> {
    let mut samples = vec![CostSampleSet::new(); fs.len()];
    for (slot, &s) in trace.scheduled.iter().enumerate() {
        let a = trace.aois[slot][s].get();
        samples[s]
            .insert(a, fs[s].at(a))
            .expect("fixed cost function gives one value per AoI");
    }
    if let Some(last) = trace.aois.last() {
        for (i, a) in last.iter().enumerate() {
            samples[i]
                .insert(a.get(), fs[i].at(a.get()))
                .expect("fixed cost function gives one value per AoI");
        }
    }
    samples
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiSourceRun {
    pub algorithm: String,
    pub feedback: Feedback,
    /// Realized interior-slot schedule per epoch.
    pub schedules: Vec<Vec<usize>>,
    /// Unnormalized epoch costs.
    pub costs_raw: Vec<f64>,
    /// Normalized epoch costs.
    pub costs: Vec<f64>,
    /// Present when the schedule space fits the enumeration budget.
    pub regret: Option<RegretSeries>,
}

impl MultiSourceRun {
    /// 64-bit FNV digest of an epoch's schedule.
    pub fn schedule_digest(&self, epoch: usize) -> u64 {
        self.schedules[epoch].iter().fold(0xcbf2_9ce4_8422_2325, |h, &s| {
            (h ^ s as u64).wrapping_mul(0x0000_0100_0000_01b3)
        })
    }

    pub fn records(&self, experiment: &str, seed: u64) -> Vec<ExperimentRecord> {
        let name = match self.feedback {
            Feedback::Full => self.algorithm.clone(),
            Feedback::Bandit => format!("{}-bandit", self.algorithm),
        };
        (0..self.costs.len())
            .map(|k| ExperimentRecord {
                experiment: experiment.to_string(),
                algorithm: name.clone(),
                seed,
                epoch: k + 1,
                cost_raw: self.costs_raw[k],
                cost_norm: self.costs[k],
                regret_static: self.regret.as_ref().map(|r| r.static_cumulative[k]),
                regret_dynamic: self.regret.as_ref().map(|r| r.dynamic_cumulative[k]),
                comparator: self.regret.as_ref().map_or(Provenance::None, |r| r.provenance),
                tracking_error: None,
            })
            .collect()
    }
}

enum Learner {
    Fpwl(FpwlState),
    Fdwl(FdwlState),
    Fixed(SchedulePolicy),
    Optimum,
}

/// Runs one multi-source scheduler over `T` epochs of per-source cost
/// functions. Regret against the best fixed explicit schedule is computed
/// whenever `N^(M-1)` fits in `budget`.
pub fn run_multi_source(
    config: &EpochConfig,
    sequence: &[Vec<AoiCostFunction>],
    algorithm: &MultiAlgorithm,
    feedback: Feedback,
    budget: u64,
    rng: &mut RngStream,
) -> Result<MultiSourceRun> {
    config.validate()?;
    if sequence.len() != config.epochs {
        return Err(Error::LengthMismatch {
            what: "cost sequence",
            expected: config.epochs,
            got: sequence.len(),
        });
    }
    for fs in sequence {
        if fs.len() != config.sources {
            return Err(Error::LengthMismatch {
                what: "sources in epoch",
                expected: config.sources,
                got: fs.len(),
            });
        }
        for f in fs {
            crate::aoi::validate_cost_values(f.values(), f.bound(), true)?;
        }
    }
    let bound = sequence
        .iter()
        .flatten()
        .map(AoiCostFunction::bound)
        .fold(0.0, f64::max);
    let (n, m) = (config.sources, config.slots);

    let mut learner = match algorithm {
        MultiAlgorithm::Fpwl { epsilon } => Learner::Fpwl(FpwlState::new(n, m, *epsilon)),
        MultiAlgorithm::Fdwl => Learner::Fdwl(FdwlState::new(n, m)),
        MultiAlgorithm::Fixed(seq) => Learner::Fixed(SchedulePolicy::Explicit(seq.clone())),
        MultiAlgorithm::MaxAoi => Learner::Fixed(SchedulePolicy::MaxAoi),
        MultiAlgorithm::PerEpochOptimum => Learner::Optimum,
    };

    let comparator = schedule_count(n, m) <= u128::from(budget);
    let mut acc = comparator.then(|| RegretAccumulator::new(schedule_count(n, m) as usize, Provenance::Exact));

    let mut run = MultiSourceRun {
        algorithm: algorithm.to_string(),
        feedback,
        schedules: Vec::with_capacity(config.epochs),
        costs_raw: Vec::with_capacity(config.epochs),
        costs: Vec::with_capacity(config.epochs),
        regret: None,
    };

    for fs in sequence {
        let policy = match &learner {
            Learner::Fpwl(s) => s.select(rng),
            Learner::Fdwl(s) => s.select(),
            Learner::Fixed(p) => p.clone(),
            Learner::Optimum => SchedulePolicy::Explicit(brute_force_best_schedule(fs, m, budget)?.0),
        };
        let (cost, trace) = evaluate_policy_epoch(&policy, fs, m)?;

        let observed = match feedback {
            Feedback::Full => EpochFeedback::Full(fs.clone()),
            Feedback::Bandit => EpochFeedback::Bandit {
                samples: bandit_samples(&trace, fs),
                bound,
            },
        };
        match &mut learner {
            Learner::Fpwl(s) => s.update(&observed)?,
            Learner::Fdwl(s) => s.update(&observed)?,
            Learner::Fixed(_) | Learner::Optimum => {}
        }

        if let Some(acc) = acc.as_mut() {
            acc.push(cost, &all_schedule_costs(fs, m, budget)?);
        }
        run.schedules.push(trace.scheduled);
        run.costs_raw.push(trace.raw_cost);
        run.costs.push(cost);
    }
    run.regret = acc.map(RegretAccumulator::finish);
    Ok(run)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(scale: f64, m: usize) -> AoiCostFunction {
        AoiCostFunction::new((1..=m).map(|j| scale * j as f64 / m as f64).collect(), 1.0, true).unwrap()
    }

    #[test]
    fn constant_costs_give_constant_epoch_costs() {
        let config = EpochConfig::new(5, 12, 2, 0.0).unwrap();
        let seq = vec![vec![linear(1.0, 5), linear(1.0, 5)]; 12];
        for alg in [
            MultiAlgorithm::Fdwl,
            MultiAlgorithm::MaxAoi,
            MultiAlgorithm::PerEpochOptimum,
            MultiAlgorithm::Fixed(vec![0, 1, 0, 1]),
        ] {
            let run = run_multi_source(&config, &seq, &alg, Feedback::Full, 1000, &mut RngStream::new(1)).unwrap();
            assert!(run.costs.windows(2).all(|w| w[0] == w[1]), "{alg}");
        }
    }

    #[test]
    fn max_aoi_alternates() {
        let config = EpochConfig::new(7, 2, 2, 0.0).unwrap();
        let seq = vec![vec![linear(1.0, 7), linear(0.5, 7)]; 2];
        let run = run_multi_source(
            &config,
            &seq,
            &MultiAlgorithm::MaxAoi,
            Feedback::Full,
            1000,
            &mut RngStream::new(1),
        )
        .unwrap();
        assert_eq!(run.schedules[0], vec![0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn bandit_samples_only_cover_transmissions() {
        let fs = vec![linear(1.0, 5), linear(0.5, 5), linear(0.2, 5)];
        let (_, trace) = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![1, 1, 0, 1]), &fs, 5).unwrap();
        let samples = bandit_samples(&trace, &fs);
        // source 1 transmits at AoI 1 (slots 1 and 2) and AoI 2 (slot 4)
        assert_eq!(samples[1].iter().map(|(k, _)| k).collect::<Vec<_>>(), vec![1, 2]);
        // source 0 transmits at AoI 3 (slot 3) and reports AoI 2 in the last slot
        assert_eq!(samples[0].iter().map(|(k, _)| k).collect::<Vec<_>>(), vec![2, 3]);
        // source 2 never transmits until the final reset, at AoI 5
        assert_eq!(samples[2].iter().collect::<Vec<_>>(), vec![(5, fs[2].at(5))]);
    }

    #[test]
    fn comparator_follows_budget() {
        let config = EpochConfig::new(6, 3, 2, 0.0).unwrap();
        let seq = vec![vec![linear(1.0, 6), linear(0.3, 6)]; 3];
        let with = run_multi_source(
            &config,
            &seq,
            &MultiAlgorithm::Fdwl,
            Feedback::Full,
            32,
            &mut RngStream::new(1),
        )
        .unwrap();
        assert!(with.regret.is_some());
        let without = run_multi_source(
            &config,
            &seq,
            &MultiAlgorithm::Fdwl,
            Feedback::Full,
            31,
            &mut RngStream::new(1),
        )
        .unwrap();
        assert!(without.regret.is_none());
        assert_eq!(without.records("multi", 1)[0].comparator, Provenance::None);
        assert!(run_multi_source(
            &config,
            &seq,
            &MultiAlgorithm::PerEpochOptimum,
            Feedback::Full,
            31,
            &mut RngStream::new(1)
        )
        .is_err());
    }

    #[test]
    fn per_epoch_optimum_has_zero_dynamic_regret() {
        let config = EpochConfig::new(5, 6, 3, 0.0).unwrap();
        let mut rng = RngStream::new(2);
        let seq: Vec<Vec<AoiCostFunction>> = (0..6)
            .map(|_| (0..3).map(|_| linear(rng.uniform(), 5)).collect())
            .collect();
        let run = run_multi_source(
            &config,
            &seq,
            &MultiAlgorithm::PerEpochOptimum,
            Feedback::Full,
            1000,
            &mut rng,
        )
        .unwrap();
        let regret = run.regret.unwrap();
        assert!(regret.dynamic_cumulative.iter().all(|r| r.abs() < 1e-12));
    }
}
