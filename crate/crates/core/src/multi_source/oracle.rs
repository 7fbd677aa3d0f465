//! Exhaustive search over explicit schedules.
//!
//! An epoch has `N^(M-1)` explicit schedules (the relaxed last slot cannot
//! change the cost), so enumeration is only viable for small instances and
//! always runs under an explicit budget.

use crate::aoi::{Aoi, AoiCostFunction};
use crate::error::{Error, Result};

use super::policy::{check_inputs, evaluate_policy_epoch, slot_cost, SchedulePolicy};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// `N^(M-1)`, saturating.
pub fn schedule_count(sources: usize, slots: usize) -> u128 {
    let mut count: u128 = 1;
    for _ in 1..slots {
        count = count.saturating_mul(sources as u128);
    }
    count
}

fn check_budget(sources: usize, slots: usize, budget: u64) -> Result<()> {
    let required = schedule_count(sources, slots);
    if required > u128::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// Minimum-cost explicit schedule and its normalized cost. Ties go to the
/// lexicographically smallest schedule.
pub fn brute_force_best_schedule(fs: &[AoiCostFunction], slots: usize, budget: u64) -> Result<(Vec<usize>, f64)> {
    check_inputs(fs, slots)?;
    check_budget(fs.len(), slots, budget)?;

    let mut search = Search {
        fs,
        slots,
        schedule: Vec::with_capacity(slots - 1),
        best: None,
    };
    let aois = vec![Aoi::ONE; fs.len()];
    let first = slot_cost(fs, &aois);
    search.descend(&aois, first);

    let (schedule, _) = search.best.expect("at least one schedule");
    // Re-evaluate so the reported cost is bit-identical to evaluate_policy_epoch.
    let (cost, _) = evaluate_policy_epoch(&SchedulePolicy::Explicit(schedule.clone()), fs, slots)?;
    Ok((schedule, cost))
}

struct Search<'a> {
    fs: &'a [AoiCostFunction],
    slots: usize,
    schedule: Vec<usize>,
    best: Option<(Vec<usize>, f64)>,
}

impl Search<'_> {
    /// Lexicographic depth-first search. Costs are nonnegative so a partial
    /// sum that already reaches the incumbent cannot win.
    fn descend(&mut self, aois: &[Aoi], partial: f64) {
        if let Some((_, best)) = &self.best {
            if partial >= *best {
                return;
            }
        }
        if self.schedule.len() == self.slots - 1 {
            self.best = Some((self.schedule.clone(), partial));
            return;
        }
        let mut next = aois.to_vec();
        for s in 0..self.fs.len() {
            for (i, a) in next.iter_mut().enumerate() {
                *a = if i == s { Aoi::ONE } else { aois[i].grow() };
            }
            self.schedule.push(s);
            let cost = partial + slot_cost(self.fs, &next);
            self.descend(&next, cost);
            self.schedule.pop();
        }
    }
}

/// Normalized cost of every explicit schedule, in lexicographic schedule
/// order.
pub fn all_schedule_costs(fs: &[AoiCostFunction], slots: usize, budget: u64) -> Result<Vec<f64>> {
    check_inputs(fs, slots)?;
    check_budget(fs.len(), slots, budget)?;
    let n = fs.len();
    let scale = (n * slots) as f64;
    let mut out = Vec::with_capacity(schedule_count(n, slots) as usize);
    let aois = vec![Aoi::ONE; n];
    enumerate(fs, slots - 1, &aois, slot_cost(fs, &aois), &mut |total| {
        out.push(total / scale)
    });
    Ok(out)
}

fn enumerate(fs: &[AoiCostFunction], remaining: usize, aois: &[Aoi], partial: f64, visit: &mut impl FnMut(f64)) {
    if remaining == 0 {
        visit(partial);
        return;
    }
    let mut next = aois.to_vec();
    for s in 0..fs.len() {
        for (i, a) in next.iter_mut().enumerate() {
            *a = if i == s { Aoi::ONE } else { aois[i].grow() };
        }
        let cost = partial + slot_cost(fs, &next);
        enumerate(fs, remaining - 1, &next, cost, visit);
    }
}

/// Explicit schedule at lexicographic position `rank`.
pub fn schedule_at(rank: usize, sources: usize, slots: usize) -> Vec<usize> {
    let mut digits = vec![0; slots - 1];
    let mut r = rank;
    for d in digits.iter_mut().rev() {
        *d = r % sources;
        r /= sources;
    }
    digits
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(scale: f64, m: usize) -> AoiCostFunction {
        AoiCostFunction::monotone((1..=m).map(|j| scale * j as f64).collect()).unwrap()
    }

    #[test]
    fn two_source_example() {
        let fs = vec![linear(2.0, 3), linear(1.0, 3)];
        let (schedule, cost) = brute_force_best_schedule(&fs, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(schedule, vec![0, 0]);
        assert_eq!(cost, 2.0);
        let all = all_schedule_costs(&fs, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(all, vec![2.0, 2.0, 2.0, 2.5]);
    }

    #[test]
    fn single_source_cost_is_first_value() {
        let f = AoiCostFunction::monotone(vec![0.5, 1.0, 4.0, 9.0]).unwrap();
        let (schedule, cost) = brute_force_best_schedule(&[f], 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(schedule, vec![0, 0, 0]);
        assert_eq!(cost, 0.5);
    }

    #[test]
    fn zero_costs_pick_all_first_source() {
        let fs = vec![AoiCostFunction::zero(5); 3];
        let (schedule, cost) = brute_force_best_schedule(&fs, 5, DEFAULT_BUDGET).unwrap();
        assert_eq!(schedule, vec![0; 4]);
        assert_eq!(cost, 0.0);
    }

    #[test]
    fn budget() {
        assert_eq!(schedule_count(3, 10), 19_683);
        assert_eq!(schedule_count(3, 17), 43_046_721);
        let small = vec![linear(1.0, 10); 3];
        assert!(brute_force_best_schedule(&small, 10, DEFAULT_BUDGET).is_ok());
        let big = vec![linear(1.0, 17); 3];
        match brute_force_best_schedule(&big, 17, DEFAULT_BUDGET) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 43_046_721);
                assert_eq!(budget, DEFAULT_BUDGET);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn ranks_match_enumeration_order() {
        let fs = vec![linear(1.0, 5), linear(3.0, 5), linear(0.5, 5)];
        let all = all_schedule_costs(&fs, 5, DEFAULT_BUDGET).unwrap();
        for (rank, &c) in all.iter().enumerate() {
            let seq = schedule_at(rank, 3, 5);
            let (e, _) = evaluate_policy_epoch(&SchedulePolicy::Explicit(seq), &fs, 5).unwrap();
            assert!((e - c).abs() < 1e-12);
        }
    }
}
