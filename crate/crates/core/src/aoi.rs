//! Age-of-Information state, its per-slot dynamics, and AoI cost functions.
//!
//! Within the epoch framework the AoI of every source starts at 1 and grows by
//! at most one per slot, so it never exceeds the epoch length `M`. Cost
//! functions are therefore stored as `M`-vectors indexed by AoI `1..=M`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

/// Slots elapsed since the last delivered update. Always at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Aoi(usize);

impl Aoi {
    pub const ONE: Aoi = Aoi(1);

    /// Returns `None` for zero.
    pub fn new(value: usize) -> Option<Aoi> {
        (value >= 1).then_some(Aoi(value))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// AoI one slot later with no delivery.
    pub fn grow(self) -> Aoi {
        Aoi(self.0 + 1)
    }
}

impl fmt::Display for Aoi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One slot of single-source AoI evolution: reset to 1 on transmission,
/// otherwise grow by one.
pub fn step_aoi_single(aoi: Aoi, transmit: bool) -> Aoi {
    if transmit {
        Aoi::ONE
    } else {
        aoi.grow()
    }
}

/// One slot of multi-source AoI evolution. Sources in `scheduled` (0-based)
/// reset to 1, every other source grows by one.
///
/// The one-transmission-per-slot constraint is not enforced here, since the
/// final slot of an epoch schedules every source at once.
pub fn step_aoi_multi(aois: &[Aoi], scheduled: &BTreeSet<usize>) -> Result<Vec<Aoi>> {
    if let Some(&index) = scheduled.iter().find(|&&i| i >= aois.len()) {
        return Err(Error::SourceOutOfRange {
            index,
            sources: aois.len(),
        });
    }
    Ok(aois
        .iter()
        .enumerate()
        .map(|(i, &a)| step_aoi_single(a, scheduled.contains(&i)))
        .collect())
}

/// First broken invariant of an [`AoiCostFunction`]. Indices are 1-based AoI
/// values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CostViolation {
    #[error("cost function is empty")]
    Empty,
    #[error("bound {0} is negative or not finite")]
    InvalidBound(f64),
    #[error("cost {value} at AoI {index} is negative or not finite")]
    Negative { index: usize, value: f64 },
    #[error("cost {value} at AoI {index} exceeds bound {bound}")]
    AboveBound { index: usize, value: f64, bound: f64 },
    #[error("cost decreases at AoI {index} ({previous} -> {value})")]
    NotMonotone { index: usize, previous: f64, value: f64 },
}

/// A bounded map from AoI `1..=M` to nonnegative cost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AoiCostFunction {
    values: Vec<f64>,
    bound: f64,
    monotone_required: bool,
}

impl AoiCostFunction {
    /// Builds and validates a cost function.
    pub fn new(values: Vec<f64>, bound: f64, monotone_required: bool) -> Result<Self> {
        let f = Self::new_unchecked(values, bound, monotone_required);
        f.validate()?;
        Ok(f)
    }

    /// Monotone cost function whose bound is its largest value.
    pub fn monotone(values: Vec<f64>) -> Result<Self> {
        let bound = values.iter().copied().fold(0.0, f64::max);
        Self::new(values, bound, true)
    }

    /// `f(j) = j` for `j = 1..=slots`.
    pub fn identity(slots: usize) -> Self {
        Self::new_unchecked((1..=slots).map(|j| j as f64).collect(), slots as f64, true)
    }

    pub fn zero(slots: usize) -> Self {
        Self::new_unchecked(vec![0.0; slots], 0.0, true)
    }

    pub(crate) fn new_unchecked(values: Vec<f64>, bound: f64, monotone_required: bool) -> Self {
        AoiCostFunction {
            values,
            bound,
            monotone_required,
        }
    }

    /// Checks every invariant and reports the first violation.
    pub fn validate(&self) -> std::result::Result<(), CostViolation> {
        validate_cost_values(&self.values, self.bound, self.monotone_required)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn monotone_required(&self) -> bool {
        self.monotone_required
    }

    /// Number of AoI values covered (the epoch length `M`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Cost at AoI `a`; AoI beyond the stored range is clamped to `M`.
    pub fn at(&self, a: usize) -> f64 {
        debug_assert!(a >= 1);
        self.values[a.min(self.values.len()) - 1]
    }

    /// `sum_{j=1}^{a} f(j)`.
    pub fn prefix_sum(&self, a: usize) -> f64 {
        self.values[..a].iter().sum()
    }

    pub fn is_monotone(&self) -> bool {
        self.values.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Validates raw values against a bound and an optional monotonicity
/// requirement.
pub fn validate_cost_values(
    values: &[f64],
    bound: f64,
    monotone_required: bool,
) -> std::result::Result<(), CostViolation> {
    if values.is_empty() {
        return Err(CostViolation::Empty);
    }
    if !(bound.is_finite() && bound >= 0.0) {
        return Err(CostViolation::InvalidBound(bound));
    }
    for (i, &value) in values.iter().enumerate() {
        let index = i + 1;
        if !(value.is_finite() && value >= 0.0) {
            return Err(CostViolation::Negative { index, value });
        }
        if value > bound {
            return Err(CostViolation::AboveBound { index, value, bound });
        }
        if monotone_required && i > 0 && value < values[i - 1] {
            return Err(CostViolation::NotMonotone {
                index,
                previous: values[i - 1],
                value,
            });
        }
    }
    Ok(())
}

/// Slots per epoch, number of epochs, number of sources and the per-update
/// transmission cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpochConfig {
    pub slots: usize,
    pub epochs: usize,
    pub sources: usize,
    pub transmission_cost: f64,
}

impl EpochConfig {
    pub fn new(slots: usize, epochs: usize, sources: usize, transmission_cost: f64) -> Result<Self> {
        let config = EpochConfig {
            slots,
            epochs,
            sources,
            transmission_cost,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.slots < 2 {
            return Err(Error::validation("M", "slots per epoch must be at least 2"));
        }
        if self.epochs < 1 {
            return Err(Error::validation("T", "need at least one epoch"));
        }
        if self.sources < 1 {
            return Err(Error::validation("N", "need at least one source"));
        }
        if !(self.transmission_cost.is_finite() && self.transmission_cost >= 0.0) {
            return Err(Error::validation(
                "transmission_cost",
                "must be a nonnegative finite number",
            ));
        }
        Ok(())
    }
}
