//! Single-source monitoring in the epoch framework.
//!
//! Each epoch of `M` slots runs a threshold policy: the source transmits
//! whenever its AoI reaches the threshold `x`, and once more in the final slot
//! so the next epoch starts at AoI 1. Learners pick `x` per epoch.

mod exp3;
mod ftpl;
mod runner;

pub use exp3::Exp3State;
pub use ftpl::FtplState;
pub use runner::{run_single_source, SingleAlgorithm, SingleSourceRun};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aoi::{step_aoi_single, Aoi, AoiCostFunction};
use crate::error::{Error, Result};

/// AoI threshold in `1..=M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Threshold(usize);

impl Threshold {
    pub fn new(x: usize, slots: usize) -> Result<Self> {
        if (1..=slots).contains(&x) {
            Ok(Threshold(x))
        } else {
            Err(Error::ThresholdOutOfRange { x, slots })
        }
    }

    /// Threshold from a 0-based option index.
    pub(crate) fn from_index(i: usize) -> Self {
        Threshold(i + 1)
    }

    pub fn get(self) -> usize {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 - 1
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_threshold(f: &AoiCostFunction, slots: usize, x: Threshold) -> Result<()> {
    if x.get() > slots {
        return Err(Error::ThresholdOutOfRange { x: x.get(), slots });
    }
    if f.len() < x.get().min(slots) {
        return Err(Error::LengthMismatch {
            what: "cost function",
            expected: x.get(),
            got: f.len(),
        });
    }
    Ok(())
}

/// Total cost of running threshold `x` for one epoch of `slots` slots:
/// `floor(M/x) * (S(x) + C) + [r > 0] * (S(r) + C)` with `r = M mod x` and
/// `S(a) = f(1) + ... + f(a)`.
pub fn epoch_cost_closed_form(f: &AoiCostFunction, transmission_cost: f64, slots: usize, x: Threshold) -> Result<f64> {
    check_threshold(f, slots, x)?;
    let x = x.get();
    let full_cycles = (slots / x) as f64;
    let r = slots % x;
    let mut cost = full_cycles * (f.prefix_sum(x) + transmission_cost);
    if r > 0 {
        cost += f.prefix_sum(r) + transmission_cost;
    }
    Ok(cost)
}

/// Slot-by-slot simulation of one epoch under threshold `x`. Returns the total
/// cost and the AoI seen in each slot.
pub fn epoch_cost_simulated(
    f: &AoiCostFunction,
    transmission_cost: f64,
    slots: usize,
    x: Threshold,
) -> Result<(f64, Vec<Aoi>)> {
    check_threshold(f, slots, x)?;
    let mut aoi = Aoi::ONE;
    let mut cost = 0.0;
    let mut trajectory = Vec::with_capacity(slots);
    for slot in 1..=slots {
        let transmit = aoi.get() >= x.get() || slot == slots;
        cost += f.at(aoi.get());
        if transmit {
            cost += transmission_cost;
        }
        trajectory.push(aoi);
        aoi = step_aoi_single(aoi, transmit);
    }
    Ok((cost, trajectory))
}

/// Outcome of the stationary threshold search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimalThreshold {
    /// Transmit whenever AoI reaches this value.
    Send(usize),
    /// No threshold satisfies the optimality condition within the searched
    /// range; this says nothing about AoI values past the range.
    NeverSend,
}

/// Smallest `H` in `1..=horizon` with `f(H) <= (S(H) + C) / H <= f(H + 1)`.
///
/// `f(horizon + 1)` is read as `f(horizon)` when `f` is not long enough.
pub fn optimal_threshold(f: &AoiCostFunction, transmission_cost: f64, horizon: usize) -> OptimalThreshold {
    let horizon = horizon.min(f.len());
    let mut prefix = 0.0;
    for h in 1..=horizon {
        prefix += f.at(h);
        let average = (prefix + transmission_cost) / h as f64;
        if f.at(h) <= average && average <= f.at(h + 1) {
            return OptimalThreshold::Send(h);
        }
    }
    OptimalThreshold::NeverSend
}

/// Long-run average per-slot cost `(S(x) + C) / x` of a stationary threshold.
pub fn stationary_average_cost(f: &AoiCostFunction, transmission_cost: f64, x: usize) -> f64 {
    (f.prefix_sum(x) + transmission_cost) / x as f64
}

/// Column with the smallest total over all epochs, ties to the smallest
/// threshold. Rows are epochs, columns thresholds `1..=M`.
pub fn best_fixed_threshold(cost_table: &[Vec<f64>]) -> (Threshold, f64) {
    let width = cost_table.first().map_or(0, Vec::len);
    let totals = (0..width).map(|x| cost_table.iter().map(|row| row[x]).sum::<f64>());
    let (i, total) = argmin(totals).expect("cost table must be non-empty");
    (Threshold::from_index(i), total)
}

/// Index and value of the minimum, first index on ties.
pub(crate) fn argmin(values: impl IntoIterator<Item = f64>) -> Option<(usize, f64)> {
    values.into_iter().enumerate().fold(None, |best, (i, v)| match best {
        Some((_, b)) if v >= b => best,
        _ => Some((i, v)),
    })
}
