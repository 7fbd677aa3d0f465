use std::fmt;

use crate::aoi::{AoiCostFunction, EpochConfig};
use crate::error::{Error, Result};
use crate::record::ExperimentRecord;
use crate::regret::{Provenance, RegretAccumulator, RegretSeries};
use crate::rng::RngStream;

use super::{argmin, epoch_cost_closed_form, Exp3State, FtplState, Threshold};

#[derive(Debug, Clone, PartialEq)]
pub enum SingleAlgorithm {
    /// Full feedback.
    Ftpl {
        eta: f64,
    },
    /// Bandit feedback.
    Exp3 {
        epsilon: f64,
    },
    Fixed(Threshold),
    /// Clairvoyant per-epoch argmin; a dynamic comparator, not a learner.
    PerEpochOptimum,
}

impl SingleAlgorithm {
    /// FTPL with `eta = sqrt(T)`.
    pub fn ftpl_default(epochs: usize) -> Self {
        SingleAlgorithm::Ftpl {
            eta: FtplState::default_eta(epochs),
        }
    }

    /// EXP3 with `epsilon = sqrt(ln M / (T M))`.
    pub fn exp3_default(thresholds: usize, epochs: usize) -> Self {
        SingleAlgorithm::Exp3 {
            epsilon: Exp3State::default_epsilon(thresholds, epochs),
        }
    }
}

impl fmt::Display for SingleAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SingleAlgorithm::Ftpl { .. } => f.write_str("ftpl"),
            SingleAlgorithm::Exp3 { .. } => f.write_str("exp3"),
            SingleAlgorithm::Fixed(x) => write!(f, "fixed-{x}"),
            SingleAlgorithm::PerEpochOptimum => f.write_str("per-epoch-optimum"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleSourceRun {
    pub algorithm: String,
    pub thresholds: Vec<Threshold>,
    /// Unnormalized epoch costs of the chosen thresholds.
    pub costs_raw: Vec<f64>,
    /// Normalized costs and regret, all in `[0, 1]` units per epoch.
    pub regret: RegretSeries,
}

impl SingleSourceRun {
    pub fn records(&self, experiment: &str, seed: u64) -> Vec<ExperimentRecord> {
        (0..self.thresholds.len())
            .map(|k| ExperimentRecord {
                experiment: experiment.to_string(),
                algorithm: self.algorithm.clone(),
                seed,
                epoch: k + 1,
                cost_raw: self.costs_raw[k],
                cost_norm: self.regret.alg_costs[k],
                regret_static: Some(self.regret.static_cumulative[k]),
                regret_dynamic: Some(self.regret.dynamic_cumulative[k]),
                comparator: self.regret.provenance,
                tracking_error: None,
            })
            .collect()
    }
}

/// Raw epoch-cost table, one row per epoch and one column per threshold.
pub fn epoch_cost_table(config: &EpochConfig, costs: &[AoiCostFunction]) -> Result<Vec<Vec<f64>>> {
    costs
        .iter()
        .map(|f| {
            (1..=config.slots)
                .map(|x| {
                    epoch_cost_closed_form(
                        f,
                        config.transmission_cost,
                        config.slots,
                        Threshold::new(x, config.slots)?,
                    )
                })
                .collect()
        })
        .collect()
}

/// `M (D + C)`, the largest possible epoch cost, with `D` the largest bound in
/// the sequence.
pub fn normalizer(config: &EpochConfig, costs: &[AoiCostFunction]) -> f64 {
    let d = costs.iter().map(AoiCostFunction::bound).fold(0.0, f64::max);
    config.slots as f64 * (d + config.transmission_cost)
}

/// Runs a learner against a normalized cost table with entries in `[0, 1]`.
pub fn run_on_cost_table(
    table: &[Vec<f64>],
    algorithm: &SingleAlgorithm,
    rng: &mut RngStream,
) -> Result<(Vec<Threshold>, RegretSeries)> {
    let width = table.first().map_or(0, Vec::len);
    let mut acc = RegretAccumulator::new(width, Provenance::Exact);
    let mut chosen = Vec::with_capacity(table.len());
    let mut ftpl = match algorithm {
        SingleAlgorithm::Ftpl { eta } => Some(FtplState::new(width, *eta)),
        _ => None,
    };
    let mut exp3 = match algorithm {
        SingleAlgorithm::Exp3 { epsilon } => Some(Exp3State::new(width, *epsilon)),
        _ => None,
    };
    for row in table {
        if row.len() != width {
            return Err(Error::LengthMismatch {
                what: "cost table row",
                expected: width,
                got: row.len(),
            });
        }
        let x = match algorithm {
            SingleAlgorithm::Ftpl { .. } => ftpl.as_ref().expect("ftpl state").select(rng),
            SingleAlgorithm::Exp3 { .. } => exp3.as_ref().expect("exp3 state").select(rng),
            SingleAlgorithm::Fixed(x) => {
                if x.get() > width {
                    return Err(Error::ThresholdOutOfRange {
                        x: x.get(),
                        slots: width,
                    });
                }
                *x
            }
            SingleAlgorithm::PerEpochOptimum => {
                Threshold::from_index(argmin(row.iter().copied()).expect("non-empty row").0)
            }
        };
        let loss = row[x.index()];
        if let Some(s) = ftpl.as_mut() {
            s.update(row)?;
        }
        if let Some(s) = exp3.as_mut() {
            s.update(x, loss)?;
        }
        acc.push(loss, row);
        chosen.push(x);
    }
    Ok((chosen, acc.finish()))
}

/// Runs one single-source learner over a sequence of per-epoch AoI cost
/// functions. Epoch costs are normalized by `M (D + C)` before the learner
/// sees them.
pub fn run_single_source(
    config: &EpochConfig,
    costs: &[AoiCostFunction],
    algorithm: &SingleAlgorithm,
    rng: &mut RngStream,
) -> Result<SingleSourceRun> {
    config.validate()?;
    if costs.len() != config.epochs {
        return Err(Error::LengthMismatch {
            what: "cost sequence",
            expected: config.epochs,
            got: costs.len(),
        });
    }
    for f in costs {
        f.validate()?;
        if f.len() != config.slots {
            return Err(Error::LengthMismatch {
                what: "cost function",
                expected: config.slots,
                got: f.len(),
            });
        }
    }
    let raw = epoch_cost_table(config, costs)?;
    let scale = normalizer(config, costs);
    let normalized: Vec<Vec<f64>> = raw
        .iter()
        .map(|row| row.iter().map(|c| if scale > 0.0 { c / scale } else { 0.0 }).collect())
        .collect();
    let (thresholds, regret) = run_on_cost_table(&normalized, algorithm, rng)?;
    let costs_raw = thresholds.iter().zip(&raw).map(|(x, row)| row[x.index()]).collect();
    Ok(SingleSourceRun {
        algorithm: algorithm.to_string(),
        thresholds,
        costs_raw,
        regret,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(slots: usize, epochs: usize) -> EpochConfig {
        EpochConfig::new(slots, epochs, 1, 1.0).unwrap()
    }

    fn constant_costs(slots: usize, epochs: usize) -> Vec<AoiCostFunction> {
        let f = AoiCostFunction::new((1..=slots).map(|j| j as f64).collect(), slots as f64, true).unwrap();
        vec![f; epochs]
    }

    #[test]
    fn one_epoch_regret_is_gap_to_best() {
        let cfg = config(5, 1);
        let costs = constant_costs(5, 1);
        let mut rng = RngStream::new(5);
        for alg in [
            SingleAlgorithm::ftpl_default(1),
            SingleAlgorithm::exp3_default(5, 1),
            SingleAlgorithm::Fixed(Threshold::new(4, 5).unwrap()),
        ] {
            let run = run_single_source(&cfg, &costs, &alg, &mut rng).unwrap();
            let row = &epoch_cost_table(&cfg, &costs).unwrap()[0];
            let best = row.iter().copied().fold(f64::INFINITY, f64::min);
            let expected = (run.costs_raw[0] - best) / normalizer(&cfg, &costs);
            assert!((run.regret.final_static() - expected).abs() < 1e-12);
            assert!(run.regret.final_static() >= 0.0);
        }
    }

    #[test]
    fn per_epoch_optimum_has_nonpositive_static_regret() {
        let cfg = config(6, 30);
        let mut rng = RngStream::new(9);
        let costs: Vec<_> = (0..30)
            .map(|_| {
                let v: Vec<f64> = (0..6).map(|_| rng.uniform_in(0.0, 4.0)).collect();
                AoiCostFunction::new(v, 4.0, false).unwrap()
            })
            .collect();
        let run = run_single_source(&cfg, &costs, &SingleAlgorithm::PerEpochOptimum, &mut rng).unwrap();
        assert!(run.regret.static_cumulative.iter().all(|&r| r <= 1e-12));
        assert!(run.regret.dynamic_cumulative.iter().all(|&r| r.abs() <= 1e-12));
    }

    #[test]
    fn rejects_wrong_sequence_length() {
        let cfg = config(5, 3);
        let mut rng = RngStream::new(0);
        assert!(run_single_source(&cfg, &constant_costs(5, 2), &SingleAlgorithm::PerEpochOptimum, &mut rng).is_err());
    }

    #[test]
    fn records_carry_every_epoch() {
        let cfg = config(4, 3);
        let mut rng = RngStream::new(1);
        let run = run_single_source(&cfg, &constant_costs(4, 3), &SingleAlgorithm::ftpl_default(3), &mut rng).unwrap();
        let rows = run.records("single", 1);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].epoch, 3);
        assert_eq!(rows[0].algorithm, "ftpl");
    }
}
