//! Adversarial Brownian tracking: node speeds are reassigned every epoch,
//! inversely to the priority each scheduler currently gives them.
//!
//! `cargo run --release --example adversarial_tracking -- [epochs] [seeds] [nodes]`

use aoi_online::mobility::{run_tracking_experiment, MobilityExperimentConfig, TrackingScheduler};

fn main() -> aoi_online::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let epochs = args.first().copied().unwrap_or(100);
    let seeds = args.get(1).copied().unwrap_or(10) as u64;
    let nodes = args.get(2).copied().unwrap_or(6);
    let config = MobilityExperimentConfig::adversarial(nodes, 200, epochs);

    let mut totals = [0.0; 3];
    for seed in 0..seeds {
        for run in run_tracking_experiment(&config, seed)? {
            let k = TrackingScheduler::ALL.iter().position(|&s| s == run.scheduler).unwrap();
            totals[k] += run.mean_error() / seeds as f64;
        }
    }
    let base = totals[2];
    for (s, e) in TrackingScheduler::ALL.iter().zip(totals) {
        println!(
            "{:<8} mean error {:>9.4}  vs max-aoi {:+6.1}%",
            s.name(),
            e,
            100.0 * (e - base) / base
        );
    }
    Ok(())
}
