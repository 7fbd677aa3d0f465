use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::aoi::{AoiCostFunction, EpochConfig};
use crate::error::{Error, Result};
use crate::mobility::{run_tracking_cell, TrackingScheduler};
use crate::multi_source::{
    all_schedule_costs, brute_force_best_schedule, evaluate_policy_epoch, run_multi_source, schedule_count,
    MultiAlgorithm, SchedulePolicy,
};
use crate::record::{emit, format_number, sort_records, ExperimentRecord, OutputFormat};
use crate::regret::{check_theorem_bounds, consecutive_whittle_gap, variation_budget, RegretBound};
use crate::rng::RngStream;
use crate::single_source::{run_single_source, SingleAlgorithm, Threshold};

use super::config::{ExperimentKind, RunConfig};
use super::generators::generate_sequence;

/// One exhaustive-search result.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow {
    pub seed: u64,
    pub sources: usize,
    pub slots: usize,
    pub schedules: u128,
    /// Normalized cost of the best explicit schedule.
    pub cost: f64,
    pub whittle_cost: f64,
    pub gap: f64,
    /// 1-based sources for slots `1..M-1`, dash separated.
    pub schedule: String,
}

/// Observed regret against one theoretical bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub algorithm: String,
    pub regret: &'static str,
    pub bound: f64,
    pub observed: f64,
    pub worst: f64,
    pub seeds: usize,
    pub passed: bool,
    pub alpha: Option<f64>,
    pub variation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunOutput {
    Records(Vec<ExperimentRecord>),
    Oracle(Vec<OracleRow>),
    Bounds(Vec<BoundRow>),
}

fn opt(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

fn json_lines<T: Serialize>(rows: &[T]) -> Vec<u8> {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("plain data serializes"));
        out.push('\n');
    }
    out.into_bytes()
}

impl RunOutput {
    pub fn to_bytes(&self, format: OutputFormat) -> Vec<u8> {
        match (self, format) {
            (RunOutput::Records(r), f) => emit(r, f),
            (RunOutput::Oracle(rows), OutputFormat::Json) => json_lines(rows),
            (RunOutput::Bounds(rows), OutputFormat::Json) => json_lines(rows),
            (RunOutput::Oracle(rows), OutputFormat::Csv) => {
                let mut out = String::from("seed,sources,slots,schedules,cost,whittle_cost,gap,schedule\n");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        r.seed,
                        r.sources,
                        r.slots,
                        r.schedules,
                        format_number(r.cost),
                        format_number(r.whittle_cost),
                        format_number(r.gap),
                        r.schedule
                    );
                }
                out.into_bytes()
            }
            (RunOutput::Bounds(rows), OutputFormat::Csv) => {
                let mut out = String::from("algorithm,regret,bound,observed,worst,seeds,passed,alpha,variation\n");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{}",
                        r.algorithm,
                        r.regret,
                        format_number(r.bound),
                        format_number(r.observed),
                        format_number(r.worst),
                        r.seeds,
                        r.passed,
                        opt(r.alpha),
                        opt(r.variation)
                    );
                }
                out.into_bytes()
            }
        }
    }
}

pub fn parse_single_algorithm(name: &str, config: &RunConfig) -> Result<SingleAlgorithm> {
    match name {
        "ftpl" => Ok(SingleAlgorithm::Ftpl {
            eta: config.eta.unwrap_or_else(|| (config.epochs as f64).sqrt()),
        }),
        "exp3" => Ok(match config.epsilon {
            Some(epsilon) => SingleAlgorithm::Exp3 { epsilon },
            None => SingleAlgorithm::exp3_default(config.slots, config.epochs),
        }),
        "per-epoch-optimum" => Ok(SingleAlgorithm::PerEpochOptimum),
        other => match other.strip_prefix("fixed-").and_then(|x| x.parse::<usize>().ok()) {
            Some(x) => Ok(SingleAlgorithm::Fixed(Threshold::new(x, config.slots)?)),
            None => Err(Error::validation(
                "algorithms",
                format!("unknown single-source algorithm `{other}`"),
            )),
        },
    }
}

pub fn parse_multi_algorithm(name: &str, config: &RunConfig) -> Result<MultiAlgorithm> {
    match name {
        "fpwl" => Ok(match config.epsilon {
            Some(epsilon) => MultiAlgorithm::Fpwl { epsilon },
            None => MultiAlgorithm::fpwl_default(&config.epoch_config()?, config.bound),
        }),
        "fdwl" => Ok(MultiAlgorithm::Fdwl),
        "max-aoi" => Ok(MultiAlgorithm::MaxAoi),
        "per-epoch-optimum" => Ok(MultiAlgorithm::PerEpochOptimum),
        other => {
            let digits = other
                .strip_prefix("fixed-")
                .ok_or_else(|| Error::validation("algorithms", format!("unknown multi-source algorithm `{other}`")))?;
            let seq = digits
                .split(['-', ','])
                .flat_map(|part| {
                    if config.sources < 10 && part.len() > 1 {
                        part.chars().map(|c| c.to_string()).collect()
                    } else {
                        vec![part.to_string()]
                    }
                })
                .map(|s| match s.parse::<usize>() {
                    Ok(i) if (1..=config.sources).contains(&i) => Ok(i - 1),
                    _ => Err(Error::validation(
                        "algorithms",
                        format!("bad source `{s}` in `{other}`"),
                    )),
                })
                .collect::<Result<Vec<usize>>>()?;
            Ok(MultiAlgorithm::Fixed(seq))
        }
    }
}

/// Cost sequence for `seed`; independent of which algorithms run.
pub fn sequence_for_seed(config: &RunConfig, seed: u64) -> Result<Vec<Vec<AoiCostFunction>>> {
    let mut rng = RngStream::new(seed).substream("generator", 0);
    generate_sequence(
        &config.generator,
        config.slots,
        config.epochs,
        config.sources,
        config.bound,
        &mut rng,
    )
}

fn algorithm_rng(seed: u64, name: &str) -> RngStream {
    RngStream::new(seed).substream(&format!("algorithm/{name}"), 0)
}

fn sequences(config: &RunConfig) -> Result<Vec<(u64, Vec<Vec<AoiCostFunction>>)>> {
    config
        .seeds
        .par_iter()
        .map(|&seed| Ok((seed, sequence_for_seed(config, seed)?)))
        .collect()
}

fn cells<'a>(names: &'a [String], seqs: &'a [(u64, Vec<Vec<AoiCostFunction>>)]) -> Vec<(&'a str, usize)> {
    names
        .iter()
        .flat_map(|n| (0..seqs.len()).map(move |k| (n.as_str(), k)))
        .collect()
}

fn single_column(seq: &[Vec<AoiCostFunction>]) -> Vec<AoiCostFunction> {
    seq.iter().map(|fs| fs[0].clone()).collect()
}

fn run_single(config: &RunConfig, experiment: &str) -> Result<Vec<ExperimentRecord>> {
    let epoch = config.epoch_config()?;
    let names = config.algorithm_names(ExperimentKind::Single);
    let algs = names
        .iter()
        .map(|n| parse_single_algorithm(n, config))
        .collect::<Result<Vec<_>>>()?;
    let seqs = sequences(config)?;
    let rows = cells(&names, &seqs)
        .into_par_iter()
        .map(|(name, k)| {
            let alg = &algs[names.iter().position(|n| n == name).unwrap()];
            let (seed, seq) = &seqs[k];
            let run = run_single_source(&epoch, &single_column(seq), alg, &mut algorithm_rng(*seed, name))?;
            Ok(run.records(experiment, *seed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn run_multi(config: &RunConfig, experiment: &str) -> Result<Vec<ExperimentRecord>> {
    let epoch = config.epoch_config()?;
    let names = config.algorithm_names(ExperimentKind::Multi);
    let algs = names
        .iter()
        .map(|n| parse_multi_algorithm(n, config))
        .collect::<Result<Vec<_>>>()?;
    let seqs = sequences(config)?;
    let budget = config.budget();
    let rows = cells(&names, &seqs)
        .into_par_iter()
        .map(|(name, k)| {
            let alg = &algs[names.iter().position(|n| n == name).unwrap()];
            let (seed, seq) = &seqs[k];
            let run = run_multi_source(
                &epoch,
                seq,
                alg,
                config.feedback,
                budget,
                &mut algorithm_rng(*seed, name),
            )?;
            Ok(run.records(experiment, *seed))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn run_mobility(config: &RunConfig, experiment: &str) -> Result<Vec<ExperimentRecord>> {
    let mobility = config.mobility.clone().unwrap_or_default();
    let schedulers = config
        .algorithm_names(ExperimentKind::Mobility)
        .iter()
        .map(|n| n.parse::<TrackingScheduler>())
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(TrackingScheduler, u64)> = schedulers
        .iter()
        .flat_map(|&s| config.seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let rows = cells
        .into_par_iter()
        .map(|(s, seed)| Ok(run_tracking_cell(&mobility, s, seed)?.records(experiment)))
        .collect::<Result<Vec<_>>>()?;
    Ok(rows.into_iter().flatten().collect())
}

fn run_oracle(config: &RunConfig) -> Result<Vec<OracleRow>> {
    let budget = config.budget();
    let (n, m) = (config.sources, config.slots);
    let required = schedule_count(n, m);
    if required > budget as u128 {
        return Err(Error::BudgetExceeded { required, budget });
    }
    config
        .seeds
        .iter()
        .map(|&seed| {
            let first = RunConfig {
                epochs: 1,
                ..config.clone()
            };
            let fs = &sequence_for_seed(&first, seed)?[0];
            let (schedule, cost) = brute_force_best_schedule(fs, m, budget)?;
            let (whittle_cost, _) = evaluate_policy_epoch(&SchedulePolicy::whittle(fs)?, fs, m)?;
            Ok(OracleRow {
                seed,
                sources: n,
                slots: m,
                schedules: required,
                cost,
                whittle_cost,
                gap: whittle_cost - cost,
                schedule: schedule
                    .iter()
                    .map(|s| (s + 1).to_string())
                    .collect::<Vec<_>>()
                    .join("-"),
            })
        })
        .collect()
}

/// Exact variation budget of a multi-source sequence over all explicit
/// schedules.
pub fn exact_variation(seq: &[Vec<AoiCostFunction>], slots: usize, budget: u64) -> Result<f64> {
    let table = seq
        .iter()
        .map(|fs| all_schedule_costs(fs, slots, budget))
        .collect::<Result<Vec<_>>>()?;
    Ok(variation_budget(&table, false).value)
}

fn run_bounds(config: &RunConfig) -> Result<Vec<BoundRow>> {
    let epoch: EpochConfig = config.epoch_config()?;
    let names = config.algorithm_names(ExperimentKind::Bounds);
    let seqs = sequences(config)?;
    let budget = config.budget();
    let mut rows = Vec::new();
    if config.sources == 1 {
        for name in &names {
            let alg = parse_single_algorithm(name, config)?;
            let bound = match alg {
                SingleAlgorithm::Ftpl { .. } => RegretBound::Ftpl {
                    epochs: config.epochs,
                    thresholds: config.slots,
                },
                SingleAlgorithm::Exp3 { .. } => RegretBound::Exp3 {
                    epochs: config.epochs,
                    thresholds: config.slots,
                },
                _ => return Err(Error::validation("algorithms", format!("no regret bound for `{name}`"))),
            };
            let regrets = seqs
                .par_iter()
                .map(|(seed, seq)| {
                    let run = run_single_source(&epoch, &single_column(seq), &alg, &mut algorithm_rng(*seed, name))?;
                    Ok(run.regret.final_static())
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(bound_row(name, "static", &regrets, bound, None, None));
        }
        return Ok(rows);
    }

    let alphas = seqs
        .par_iter()
        .map(|(_, seq)| consecutive_whittle_gap(seq, config.slots, budget))
        .collect::<Result<Vec<f64>>>()?;
    let alpha = alphas.iter().copied().fold(0.0, f64::max);
    for name in &names {
        let alg = parse_multi_algorithm(name, config)?;
        let per_seed = seqs
            .par_iter()
            .map(|(seed, seq)| {
                let run = run_multi_source(
                    &epoch,
                    seq,
                    &alg,
                    config.feedback,
                    budget,
                    &mut algorithm_rng(*seed, name),
                )?;
                let regret = run.regret.ok_or(Error::BudgetExceeded {
                    required: schedule_count(config.sources, config.slots),
                    budget,
                })?;
                Ok(regret)
            })
            .collect::<Result<Vec<_>>>()?;
        match alg {
            MultiAlgorithm::Fpwl { .. } => {
                let bound = RegretBound::Fpwl {
                    alpha,
                    epochs: config.epochs,
                    slots: config.slots,
                    sources: config.sources,
                    bound: config.bound,
                };
                let regrets: Vec<f64> = per_seed.iter().map(|r| r.final_static()).collect();
                rows.push(bound_row(name, "static", &regrets, bound, Some(alpha), None));
            }
            MultiAlgorithm::Fdwl => {
                let variation = seqs
                    .par_iter()
                    .map(|(_, seq)| exact_variation(seq, config.slots, budget))
                    .collect::<Result<Vec<f64>>>()?
                    .into_iter()
                    .fold(0.0, f64::max);
                let bound = RegretBound::Fdwl {
                    alpha,
                    epochs: config.epochs,
                    variation,
                    bound: config.bound,
                };
                let regrets: Vec<f64> = per_seed.iter().map(|r| r.final_dynamic()).collect();
                rows.push(bound_row(
                    name,
                    "dynamic",
                    &regrets,
                    bound,
                    Some(alpha),
                    Some(variation),
                ));
            }
            _ => return Err(Error::validation("algorithms", format!("no regret bound for `{name}`"))),
        }
    }
    Ok(rows)
}

fn bound_row(
    name: &str,
    regret: &'static str,
    regrets: &[f64],
    bound: RegretBound,
    alpha: Option<f64>,
    variation: Option<f64>,
) -> BoundRow {
    let check = check_theorem_bounds(regrets, bound);
    BoundRow {
        algorithm: name.to_string(),
        regret,
        bound: check.bound,
        observed: check.observed,
        worst: regrets.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        seeds: check.seeds,
        passed: check.passed,
        alpha,
        variation,
    }
}

/// Runs an experiment of `kind`. Records come back sorted by
/// `(algorithm, seed, epoch)` whatever order the cells finished in.
pub fn run(kind: ExperimentKind, config: &RunConfig) -> Result<RunOutput> {
    let config = config.clone().resolve(kind)?;
    let experiment = config.experiment_id(kind);
    match kind {
        ExperimentKind::Single | ExperimentKind::Multi | ExperimentKind::Mobility => {
            let mut records = match kind {
                ExperimentKind::Single => run_single(&config, &experiment)?,
                ExperimentKind::Multi => run_multi(&config, &experiment)?,
                _ => run_mobility(&config, &experiment)?,
            };
            sort_records(&mut records);
            Ok(RunOutput::Records(records))
        }
        ExperimentKind::Oracle => Ok(RunOutput::Oracle(run_oracle(&config)?)),
        ExperimentKind::Bounds => Ok(RunOutput::Bounds(run_bounds(&config)?)),
    }
}
