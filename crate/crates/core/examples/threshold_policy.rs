//! Single-source threshold policies: epoch cost in closed form and by slot
//! simulation, and the stationary optimal threshold.

use aoi_online::single_source::{
    epoch_cost_closed_form, epoch_cost_simulated, optimal_threshold, stationary_average_cost, OptimalThreshold,
    Threshold,
};
use aoi_online::AoiCostFunction;

fn main() -> aoi_online::Result<()> {
    let m = 12;
    let c = 5.0;
    // cost grows quadratically with staleness
    let f = AoiCostFunction::monotone((1..=m).map(|j| (j * j) as f64 / 4.0).collect())?;

    println!("threshold  closed-form  simulated  per-slot (stationary)");
    for x in 1..=m {
        let x = Threshold::new(x, m)?;
        let closed = epoch_cost_closed_form(&f, c, m, x)?;
        let (simulated, _) = epoch_cost_simulated(&f, c, m, x)?;
        println!(
            "{:>9}  {closed:>11.3}  {simulated:>9.3}  {:>8.3}",
            x.get(),
            stationary_average_cost(&f, c, x.get())
        );
    }
    match optimal_threshold(&f, c, m) {
        OptimalThreshold::Send(h) => println!("transmit when AoI reaches {h}"),
        OptimalThreshold::NeverSend => println!("never transmit"),
    }

    let (_, trajectory) = epoch_cost_simulated(&f, c, m, Threshold::new(5, m)?)?;
    let ages: Vec<String> = trajectory.iter().map(|a| a.to_string()).collect();
    println!("AoI under x=5: {}", ages.join(" "));
    Ok(())
}
