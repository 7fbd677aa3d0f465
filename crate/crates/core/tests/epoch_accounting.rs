//! Slot-level replay of single-source runs against the per-epoch totals.

use aoi_online::aoi::step_aoi_single;
use aoi_online::experiment::{generate_sequence, GeneratorSpec};
use aoi_online::single_source::{epoch_cost_closed_form, run_single_source, SingleAlgorithm, Threshold};
use aoi_online::{Aoi, AoiCostFunction, EpochConfig, RngStream};

/// Cost of running `x_k` in epoch `k`, one slot at a time across the whole
/// horizon. AoI restarts at 1 after the mandatory last-slot update.
fn slot_replay(costs: &[AoiCostFunction], thresholds: &[Threshold], c: f64, m: usize) -> f64 {
    let mut aoi = Aoi::ONE;
    let mut total = 0.0;
    for t in 0..costs.len() * m {
        let (k, slot) = (t / m, t % m + 1);
        let transmit = aoi.get() >= thresholds[k].get() || slot == m;
        total += costs[k].at(aoi.get()) + if transmit { c } else { 0.0 };
        aoi = step_aoi_single(aoi, transmit);
    }
    total
}

fn sequence(spec: &GeneratorSpec, m: usize, t: usize, seed: u64) -> Vec<AoiCostFunction> {
    generate_sequence(spec, m, t, 1, 2.0, &mut RngStream::new(seed))
        .unwrap()
        .into_iter()
        .map(|mut fs| fs.remove(0))
        .collect()
}

#[test]
fn slot_sum_equals_epoch_sum() {
    let (m, t, c) = (12, 300, 0.7);
    let config = EpochConfig::new(m, t, 1, c).unwrap();
    for (seed, spec) in [
        GeneratorSpec::IidRandomMonotone,
        GeneratorSpec::Drifting { step: 0.05, floor: 0.1 },
        GeneratorSpec::AdversarialSwitch { period: 7 },
    ]
    .iter()
    .enumerate()
    {
        let costs = sequence(spec, m, t, seed as u64);
        for alg in [SingleAlgorithm::ftpl_default(t), SingleAlgorithm::exp3_default(m, t)] {
            let run = run_single_source(&config, &costs, &alg, &mut RngStream::new(99)).unwrap();
            let epoch_sum: f64 = run.costs_raw.iter().sum();
            let slot_sum = slot_replay(&costs, &run.thresholds, c, m);
            assert!((epoch_sum - slot_sum).abs() < 1e-9, "{alg}: {epoch_sum} vs {slot_sum}");
        }
    }
}

#[test]
fn slot_regret_equals_epoch_regret() {
    let (m, t, c) = (8, 200, 0.3);
    let config = EpochConfig::new(m, t, 1, c).unwrap();
    let costs = sequence(&GeneratorSpec::IidRandomMonotone, m, t, 4);
    let run = run_single_source(
        &config,
        &costs,
        &SingleAlgorithm::ftpl_default(t),
        &mut RngStream::new(5),
    )
    .unwrap();

    // best fixed threshold, scored slot by slot
    let best_fixed = (1..=m)
        .map(|x| {
            let fixed = vec![Threshold::new(x, m).unwrap(); t];
            slot_replay(&costs, &fixed, c, m)
        })
        .fold(f64::INFINITY, f64::min);
    let slot_regret = slot_replay(&costs, &run.thresholds, c, m) - best_fixed;
    let normalizer = m as f64 * (2.0 + c);
    let epoch_regret = run.regret.final_static() * normalizer;
    assert!(
        (slot_regret - epoch_regret).abs() < 1e-9,
        "{slot_regret} vs {epoch_regret}"
    );

    let closed: f64 = costs
        .iter()
        .zip(&run.thresholds)
        .map(|(f, &x)| epoch_cost_closed_form(f, c, m, x).unwrap())
        .sum();
    assert!((closed - run.costs_raw.iter().sum::<f64>()).abs() < 1e-9);
}
