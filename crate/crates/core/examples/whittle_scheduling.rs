//! Whittle indices and the greedy schedule they induce, then FPWL and FDWL
//! learning a schedule over drifting costs with full feedback.

use aoi_online::experiment::{generate_sequence, GeneratorSpec};
use aoi_online::multi_source::{
    evaluate_policy_epoch, run_multi_source, Feedback, MultiAlgorithm, SchedulePolicy, WhittleIndexTable,
    DEFAULT_BUDGET,
};
use aoi_online::{AoiCostFunction, EpochConfig, RngStream};

fn main() -> aoi_online::Result<()> {
    let m = 6;
    let fast = AoiCostFunction::monotone((1..=m).map(|j| 2.0 * j as f64).collect())?;
    let slow = AoiCostFunction::monotone((1..=m).map(|j| j as f64).collect())?;
    for (name, f) in [("2x", &fast), ("x", &slow)] {
        println!("W for f = {name}: {:?}", WhittleIndexTable::from_cost(f)?.values());
    }
    let fs = [fast, slow];
    let (cost, trace) = evaluate_policy_epoch(&SchedulePolicy::whittle(&fs)?, &fs, m)?;
    let schedule: Vec<String> = trace.scheduled.iter().map(|s| (s + 1).to_string()).collect();
    println!(
        "Whittle schedule {} with normalized cost {cost:.4}\n",
        schedule.join(" ")
    );

    let epochs = 400;
    let config = EpochConfig::new(m, epochs, 2, 0.0)?;
    let spec = GeneratorSpec::Drifting { step: 0.02, floor: 0.1 };
    let seq = generate_sequence(&spec, m, epochs, 2, 1.0, &mut RngStream::new(3))?;
    for alg in [
        MultiAlgorithm::fpwl_default(&config, 1.0),
        MultiAlgorithm::Fdwl,
        MultiAlgorithm::MaxAoi,
    ] {
        let run = run_multi_source(
            &config,
            &seq,
            &alg,
            Feedback::Full,
            DEFAULT_BUDGET,
            &mut RngStream::new(4),
        )?;
        let regret = run.regret.as_ref().expect("2^5 schedules fit the budget");
        println!(
            "{alg:<8} mean cost {:.4}  static regret {:.3}  dynamic regret {:.3}",
            run.costs.iter().sum::<f64>() / epochs as f64,
            regret.final_static(),
            regret.final_dynamic()
        );
    }
    Ok(())
}
