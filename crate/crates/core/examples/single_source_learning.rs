//! FTPL (full feedback) and EXP3 (bandit feedback) learning a threshold
//! against i.i.d. random cost functions, with their regret bounds.
//!
//! `cargo run --release --example single_source_learning -- [epochs]`

use aoi_online::experiment::{generate_sequence, GeneratorSpec};
use aoi_online::regret::RegretBound;
use aoi_online::single_source::{run_single_source, SingleAlgorithm};
use aoi_online::{EpochConfig, RngStream};

fn main() -> aoi_online::Result<()> {
    let epochs: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5000);
    let m = 10;
    let config = EpochConfig::new(m, epochs, 1, 0.5)?;
    let costs: Vec<_> = generate_sequence(
        &GeneratorSpec::IidRandomMonotone,
        m,
        epochs,
        1,
        1.0,
        &mut RngStream::new(1),
    )?
    .into_iter()
    .map(|mut fs| fs.remove(0))
    .collect();

    let runs = [
        (
            SingleAlgorithm::ftpl_default(epochs),
            RegretBound::Ftpl { epochs, thresholds: m },
        ),
        (
            SingleAlgorithm::exp3_default(m, epochs),
            RegretBound::Exp3 { epochs, thresholds: m },
        ),
    ];
    for (alg, bound) in runs {
        let run = run_single_source(&config, &costs, &alg, &mut RngStream::new(2))?;
        let checkpoints: Vec<String> = [epochs / 10, epochs / 2, epochs]
            .iter()
            .map(|&t| format!("R({t})={:.1}", run.regret.static_at(t)))
            .collect();
        println!("{alg:<5} {}  bound {:.1}", checkpoints.join("  "), bound.value());
    }
    Ok(())
}
