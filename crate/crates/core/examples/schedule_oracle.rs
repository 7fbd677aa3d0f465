//! Exhaustive search over explicit schedules, and how far the Whittle policy
//! lands from it.

use aoi_online::multi_source::{brute_force_best_schedule, evaluate_policy_epoch, schedule_count, SchedulePolicy};
use aoi_online::regret::whittle_gap;
use aoi_online::{AoiCostFunction, RngStream};

fn random_monotone(m: usize, rng: &mut RngStream) -> AoiCostFunction {
    let mut v: Vec<f64> = (0..m).map(|_| rng.uniform()).collect();
    v.sort_by(f64::total_cmp);
    AoiCostFunction::new(v, 1.0, true).unwrap()
}

fn main() -> aoi_online::Result<()> {
    let budget = 10_000_000;
    let mut rng = RngStream::new(11);
    for (n, m) in [(2, 8), (3, 8), (3, 10)] {
        let fs: Vec<_> = (0..n).map(|_| random_monotone(m, &mut rng)).collect();
        let (best, cost) = brute_force_best_schedule(&fs, m, budget)?;
        let (whittle_cost, _) = evaluate_policy_epoch(&SchedulePolicy::whittle(&fs)?, &fs, m)?;
        let shown: Vec<String> = best.iter().map(|s| (s + 1).to_string()).collect();
        println!(
            "N={n} M={m}: {} schedules, best {} cost {cost:.5}, Whittle {whittle_cost:.5}, gap {:.2e}",
            schedule_count(n, m),
            shown.join(""),
            whittle_gap(&fs, &fs, m, budget)?
        );
    }
    match brute_force_best_schedule(&vec![random_monotone(17, &mut rng); 3], 17, budget) {
        Err(e) => println!("N=3 M=17: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
