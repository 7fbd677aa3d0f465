//! Regret accounting: static and dynamic regret, the variation budget of a
//! cost sequence, the empirical Whittle-optimality gap, and checks against the
//! known expected-regret bounds.

use serde::{Deserialize, Serialize};

use crate::aoi::AoiCostFunction;
use crate::error::Result;
use crate::multi_source::{brute_force_best_schedule, evaluate_policy_epoch, SchedulePolicy};

/// Where comparator values came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    /// Exact minimum over the full option set.
    Exact,
    /// Minimum over a sample of options; regret against it is a lower bound.
    Estimate,
    /// No comparator was computed.
    None,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Exact => "exact",
            Provenance::Estimate => "estimate",
            Provenance::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "exact" => Some(Provenance::Exact),
            "estimate" => Some(Provenance::Estimate),
            "none" => Some(Provenance::None),
            _ => None,
        }
    }
}

/// `sum(alg_costs) - min(per_option_totals)`.
pub fn static_regret(alg_costs: &[f64], per_option_totals: &[f64]) -> f64 {
    let best = per_option_totals.iter().copied().fold(f64::INFINITY, f64::min);
    alg_costs.iter().sum::<f64>() - best
}

/// `sum_k (alg_costs[k] - per_epoch_minima[k])`.
pub fn dynamic_regret(alg_costs: &[f64], per_epoch_minima: &[f64]) -> f64 {
    assert_eq!(alg_costs.len(), per_epoch_minima.len());
    alg_costs.iter().zip(per_epoch_minima).map(|(a, m)| a - m).sum()
}

/// Per-epoch algorithm costs with cumulative static and dynamic regret at
/// every prefix of the horizon.
///
/// Static regret at epoch `t` compares against the best fixed option over
/// epochs `1..=t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegretSeries {
    pub alg_costs: Vec<f64>,
    pub per_epoch_minima: Vec<f64>,
    pub static_cumulative: Vec<f64>,
    pub dynamic_cumulative: Vec<f64>,
    pub provenance: Provenance,
}

impl RegretSeries {
    pub fn len(&self) -> usize {
        self.alg_costs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alg_costs.is_empty()
    }

    /// Cumulative static regret after `epochs` epochs.
    pub fn static_at(&self, epochs: usize) -> f64 {
        self.static_cumulative[epochs - 1]
    }

    pub fn dynamic_at(&self, epochs: usize) -> f64 {
        self.dynamic_cumulative[epochs - 1]
    }

    pub fn final_static(&self) -> f64 {
        *self.static_cumulative.last().expect("non-empty series")
    }

    pub fn final_dynamic(&self) -> f64 {
        *self.dynamic_cumulative.last().expect("non-empty series")
    }
}

/// Builds a [`RegretSeries`] one epoch at a time from each epoch's full
/// per-option cost vector.
#[derive(Debug, Clone)]
pub struct RegretAccumulator {
    option_totals: Vec<f64>,
    alg_total: f64,
    dynamic_total: f64,
    series: RegretSeries,
}

impl RegretAccumulator {
    pub fn new(options: usize, provenance: Provenance) -> Self {
        RegretAccumulator {
            option_totals: vec![0.0; options],
            alg_total: 0.0,
            dynamic_total: 0.0,
            series: RegretSeries {
                alg_costs: Vec::new(),
                per_epoch_minima: Vec::new(),
                static_cumulative: Vec::new(),
                dynamic_cumulative: Vec::new(),
                provenance,
            },
        }
    }

    pub fn push(&mut self, alg_cost: f64, option_costs: &[f64]) {
        assert_eq!(option_costs.len(), self.option_totals.len());
        let mut epoch_min = f64::INFINITY;
        for (t, c) in self.option_totals.iter_mut().zip(option_costs) {
            *t += c;
            epoch_min = epoch_min.min(*c);
        }
        self.alg_total += alg_cost;
        self.dynamic_total += alg_cost - epoch_min;
        let best = self.option_totals.iter().copied().fold(f64::INFINITY, f64::min);
        let s = &mut self.series;
        s.alg_costs.push(alg_cost);
        s.per_epoch_minima.push(epoch_min);
        s.static_cumulative.push(self.alg_total - best);
        s.dynamic_cumulative.push(self.dynamic_total);
    }

    pub fn option_totals(&self) -> &[f64] {
        &self.option_totals
    }

    pub fn finish(self) -> RegretSeries {
        self.series
    }
}

/// Total variation of a cost sequence:
/// `sum_{k>=2} max_option |C_{k-1}(option) - C_k(option)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationBudget {
    pub value: f64,
    /// Set when the max ran over a sample of options rather than all of them.
    pub lower_bound: bool,
}

/// Variation over per-epoch option-cost vectors. `sampled` marks the option
/// set as a sample of the true policy space.
pub fn variation_budget(costs: &[Vec<f64>], sampled: bool) -> VariationBudget {
    let value = costs.windows(2).map(|w| max_abs_delta(&w[0], &w[1])).sum();
    VariationBudget {
        value,
        lower_bound: sampled,
    }
}

pub(crate) fn max_abs_delta(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Empirical Whittle gap `|C_g(Whittle(f)) - C_g(Opt(f))|`, with `Opt(f)`
/// from exhaustive enumeration under `budget`.
pub fn whittle_gap(f_set: &[AoiCostFunction], g_set: &[AoiCostFunction], slots: usize, budget: u64) -> Result<f64> {
    let whittle = SchedulePolicy::whittle(f_set)?;
    let (opt, _) = brute_force_best_schedule(f_set, slots, budget)?;
    let (whittle_cost, _) = evaluate_policy_epoch(&whittle, g_set, slots)?;
    let (opt_cost, _) = evaluate_policy_epoch(&SchedulePolicy::Explicit(opt), g_set, slots)?;
    Ok((whittle_cost - opt_cost).abs())
}

/// `max_k whittle_gap(f_{k-1}, f_k)` over consecutive epochs of a sequence.
pub fn consecutive_whittle_gap(sequence: &[Vec<AoiCostFunction>], slots: usize, budget: u64) -> Result<f64> {
    let mut alpha: f64 = 0.0;
    for pair in sequence.windows(2) {
        alpha = alpha.max(whittle_gap(&pair[0], &pair[1], slots, budget)?);
    }
    Ok(alpha)
}

/// Expected-regret bound to check a run against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RegretBound {
    /// FTPL, full feedback: `2 sqrt(2 T ln M)`.
    Ftpl { epochs: usize, thresholds: usize },
    /// EXP3, bandit feedback: `2 sqrt(T M ln M)`.
    Exp3 { epochs: usize, thresholds: usize },
    /// FPWL static regret: `alpha T + 2 D sqrt(2 M N T)`.
    Fpwl {
        alpha: f64,
        epochs: usize,
        slots: usize,
        sources: usize,
        bound: f64,
    },
    /// FDWL dynamic regret: `alpha T + V_T + D`.
    Fdwl {
        alpha: f64,
        epochs: usize,
        variation: f64,
        bound: f64,
    },
}

impl RegretBound {
    pub fn value(&self) -> f64 {
        match *self {
            RegretBound::Ftpl { epochs, thresholds } => 2.0 * (2.0 * epochs as f64 * (thresholds as f64).ln()).sqrt(),
            RegretBound::Exp3 { epochs, thresholds } => {
                let m = thresholds as f64;
                2.0 * (epochs as f64 * m * m.ln()).sqrt()
            }
            RegretBound::Fpwl {
                alpha,
                epochs,
                slots,
                sources,
                bound,
            } => {
                let t = epochs as f64;
                alpha * t + 2.0 * bound * (2.0 * slots as f64 * sources as f64 * t).sqrt()
            }
            RegretBound::Fdwl {
                alpha,
                epochs,
                variation,
                bound,
            } => alpha * epochs as f64 + variation + bound,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RegretBound::Ftpl { .. } => "ftpl",
            RegretBound::Exp3 { .. } => "exp3",
            RegretBound::Fpwl { .. } => "fpwl",
            RegretBound::Fdwl { .. } => "fdwl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: f64,
    pub observed: f64,
    pub margin: f64,
    pub seeds: usize,
    pub passed: bool,
}

/// Compares the seed-averaged final regret with `bound`. The bounds hold in
/// expectation, so fewer than ten seeds is reported but not refused.
pub fn check_theorem_bounds(per_seed_regret: &[f64], bound: RegretBound) -> BoundCheck {
    let seeds = per_seed_regret.len();
    let observed = if seeds == 0 {
        0.0
    } else {
        per_seed_regret.iter().sum::<f64>() / seeds as f64
    };
    let b = bound.value();
    BoundCheck {
        bound: b,
        observed,
        margin: b - observed,
        seeds,
        passed: observed <= b,
    }
}
