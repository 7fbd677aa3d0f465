//! How the cost bound handed to the interpolation step changes the tracking
//! results. Every unobserved AoI is pulled toward `(M, D)`, so a large `D`
//! makes all nodes look alike to FPWL and to the adversary.
//!
//! `cargo run --release --example tracking_bound_sweep -- [levy|adversarial] [epochs] [seeds]`

use aoi_online::mobility::{run_tracking_experiment, MobilityExperimentConfig, TrackingScheduler};

fn main() -> aoi_online::Result<()> {
    let mut args = std::env::args().skip(1);
    let model = args.next().unwrap_or_else(|| "levy".into());
    let epochs: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seeds: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(10);

    let base = match model.as_str() {
        "adversarial" => MobilityExperimentConfig::adversarial(6, 200, epochs),
        _ => MobilityExperimentConfig::levy(6, 200, epochs),
    };
    println!("{model}: default D = {}", base.bound());
    println!("{:>8}  {:>10}  {:>10}", "D", "fpwl", "fdwl");
    for d in [None, Some(1.0), Some(10.0), Some(50.0), Some(200.0)] {
        let config = MobilityExperimentConfig {
            bound: d,
            ..base.clone()
        };
        let mut totals = [0.0; 3];
        for seed in 0..seeds {
            for run in run_tracking_experiment(&config, seed)? {
                let k = TrackingScheduler::ALL.iter().position(|&s| s == run.scheduler).unwrap();
                totals[k] += run.mean_error();
            }
        }
        let rel = |k: usize| 100.0 * (totals[k] / totals[2] - 1.0);
        let label = d.map_or("default".to_string(), |d| d.to_string());
        println!("{label:>8}  {:>+9.1}%  {:>+9.1}%", rel(0), rel(1));
    }
    println!("(error relative to max-aoi; negative is better)");
    Ok(())
}
