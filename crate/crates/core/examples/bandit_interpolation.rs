//! Completing a cost function from the few AoI values a bandit round reveals.

use aoi_online::multi_source::{interpolate_cost_estimate, CostSampleSet};

fn show(label: &str, samples: &CostSampleSet, m: usize, d: f64) -> aoi_online::Result<()> {
    let f = interpolate_cost_estimate(samples, m, d)?;
    let values: Vec<String> = f.values().iter().map(|v| format!("{v:.2}")).collect();
    println!("{label:<22} -> {}", values.join(" "));
    Ok(())
}

fn main() -> aoi_online::Result<()> {
    show("{2: 4}, D=10", &[(2, 4.0)].into_iter().collect(), 5, 10.0)?;
    show("{5: 7}, D=10", &[(5, 7.0)].into_iter().collect(), 5, 10.0)?;
    show("nothing seen, D=8", &CostSampleSet::new(), 4, 8.0)?;
    show(
        "{1: 1, 3: 1, 6: 2}, D=9",
        &[(1, 1.0), (3, 1.0), (6, 2.0)].into_iter().collect(),
        8,
        9.0,
    )?;

    let mut decreasing = CostSampleSet::new();
    decreasing.insert(2, 5.0)?;
    decreasing.insert(4, 1.0)?;
    if let Err(e) = interpolate_cost_estimate(&decreasing, 5, 10.0) {
        println!("rejected: {e}");
    }
    Ok(())
}
