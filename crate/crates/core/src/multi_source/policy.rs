use crate::aoi::{Aoi, AoiCostFunction};
use crate::error::{Error, Result};

use super::whittle::{whittle_schedule_step, WhittleIndexTable};

/// A within-epoch scheduling rule.
#[derive(Debug, Clone, PartialEq)]
pub enum SchedulePolicy {
    /// Source (0-based) for slots `1..M-1`. A trailing entry for slot `M` is
    /// accepted and ignored, since every source transmits in the last slot.
    Explicit(Vec<usize>),
    /// Greedy Whittle rule, re-evaluated against the live AoI vector.
    Indexed(Vec<WhittleIndexTable>),
    /// Largest current AoI, ties to the smallest source.
    MaxAoi,
}

impl SchedulePolicy {
    /// Whittle policy for a set of monotone cost functions.
    pub fn whittle(fs: &[AoiCostFunction]) -> Result<Self> {
        fs.iter()
            .map(WhittleIndexTable::from_cost)
            .collect::<Result<_>>()
            .map(SchedulePolicy::Indexed)
    }

    /// Whittle policy for raw monotone value vectors.
    pub fn whittle_from_values(values: &[Vec<f64>]) -> Result<Self> {
        values
            .iter()
            .map(|v| WhittleIndexTable::from_values(v))
            .collect::<Result<_>>()
            .map(SchedulePolicy::Indexed)
    }

    /// Source to schedule in 0-based interior slot `slot`.
    pub fn choose(&self, slot: usize, aois: &[Aoi]) -> usize {
        match self {
            SchedulePolicy::Explicit(seq) => seq[slot],
            SchedulePolicy::Indexed(tables) => whittle_schedule_step(tables, aois),
            SchedulePolicy::MaxAoi => max_aoi_step(aois),
        }
    }
}

pub fn max_aoi_step(aois: &[Aoi]) -> usize {
    let mut best = 0;
    for (i, a) in aois.iter().enumerate() {
        if *a > aois[best] {
            best = i;
        }
    }
    best
}

/// What happened inside one evaluated epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochTrace {
    /// AoI vector seen in each slot `1..=M`.
    pub aois: Vec<Vec<Aoi>>,
    /// Source scheduled in each interior slot `1..M-1`.
    pub scheduled: Vec<usize>,
    /// `sum_j sum_i f_i(A_i(j))` before normalization.
    pub raw_cost: f64,
}

/// Simulates one epoch from the all-ones AoI vector and returns the
/// normalized cost `(1 / NM) sum_j sum_i f_i(A_i(j))` with its trace.
pub fn evaluate_policy_epoch(
    policy: &SchedulePolicy,
    fs: &[AoiCostFunction],
    slots: usize,
) -> Result<(f64, EpochTrace)> {
    let n = fs.len();
    check_inputs(fs, slots)?;
    match policy {
        SchedulePolicy::Explicit(seq) => {
            if seq.len() != slots - 1 && seq.len() != slots {
                return Err(Error::LengthMismatch {
                    what: "explicit schedule",
                    expected: slots - 1,
                    got: seq.len(),
                });
            }
            if let Some(&index) = seq.iter().find(|&&s| s >= n) {
                return Err(Error::SourceOutOfRange { index, sources: n });
            }
        }
        SchedulePolicy::Indexed(tables) => {
            if tables.len() != n {
                return Err(Error::LengthMismatch {
                    what: "index tables",
                    expected: n,
                    got: tables.len(),
                });
            }
        }
        SchedulePolicy::MaxAoi => {}
    }

    let mut aois = vec![Aoi::ONE; n];
    let mut trace = EpochTrace {
        aois: Vec::with_capacity(slots),
        scheduled: Vec::with_capacity(slots - 1),
        raw_cost: 0.0,
    };
    let mut total = 0.0;
    for slot in 0..slots {
        total += slot_cost(fs, &aois);
        trace.aois.push(aois.clone());
        if slot + 1 < slots {
            let s = policy.choose(slot, &aois);
            trace.scheduled.push(s);
            for (i, a) in aois.iter_mut().enumerate() {
                *a = if i == s { Aoi::ONE } else { a.grow() };
            }
        }
    }
    trace.raw_cost = total;
    Ok((total / (n * slots) as f64, trace))
}

pub(crate) fn slot_cost(fs: &[AoiCostFunction], aois: &[Aoi]) -> f64 {
    fs.iter().zip(aois).map(|(f, a)| f.at(a.get())).sum()
}

pub(crate) fn check_inputs(fs: &[AoiCostFunction], slots: usize) -> Result<()> {
    if fs.is_empty() {
        return Err(Error::validation("N", "need at least one source"));
    }
    if slots < 2 {
        return Err(Error::validation("M", "slots per epoch must be at least 2"));
    }
    if let Some(f) = fs.iter().find(|f| f.len() != slots) {
        return Err(Error::LengthMismatch {
            what: "cost function",
            expected: slots,
            got: f.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity(m: usize) -> AoiCostFunction {
        AoiCostFunction::identity(m)
    }

    #[test]
    fn two_source_two_slot_example() {
        let fs = vec![identity(2), identity(2)];
        for s in 0..2 {
            let (cost, trace) = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![s]), &fs, 2).unwrap();
            assert_eq!(cost, 1.25);
            assert_eq!(trace.raw_cost, 5.0);
        }
    }

    #[test]
    fn zero_costs() {
        let fs = vec![AoiCostFunction::zero(5); 3];
        let (cost, _) = evaluate_policy_epoch(&SchedulePolicy::MaxAoi, &fs, 5).unwrap();
        assert_eq!(cost, 0.0);
    }

    #[test]
    fn swapping_roles_is_symmetric() {
        let fs = vec![identity(6), identity(6)];
        let a = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![0, 0, 1, 0, 1]), &fs, 6)
            .unwrap()
            .0;
        let b = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![1, 1, 0, 1, 0]), &fs, 6)
            .unwrap()
            .0;
        assert_eq!(a, b);
    }

    #[test]
    fn last_slot_entry_is_ignored() {
        let fs = vec![
            identity(4),
            AoiCostFunction::monotone(vec![0.0, 2.0, 5.0, 9.0]).unwrap(),
        ];
        let short = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![1, 0, 1]), &fs, 4)
            .unwrap()
            .0;
        let long0 = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![1, 0, 1, 0]), &fs, 4)
            .unwrap()
            .0;
        let long1 = evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![1, 0, 1, 1]), &fs, 4)
            .unwrap()
            .0;
        assert_eq!(short, long0);
        assert_eq!(short, long1);
    }

    #[test]
    fn rejects_bad_explicit_schedules() {
        let fs = vec![identity(4), identity(4)];
        assert!(matches!(
            evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![0, 1]), &fs, 4),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            evaluate_policy_epoch(&SchedulePolicy::Explicit(vec![0, 2, 1]), &fs, 4),
            Err(Error::SourceOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn max_aoi_alternates_for_two_sources() {
        let fs = vec![identity(8), identity(8)];
        let (_, trace) = evaluate_policy_epoch(&SchedulePolicy::MaxAoi, &fs, 8).unwrap();
        assert_eq!(trace.scheduled, vec![0, 1, 0, 1, 0, 1, 0]);
        for (slot, s) in trace.scheduled.iter().enumerate() {
            let a = &trace.aois[slot];
            assert!(a.iter().all(|x| a[*s] >= *x));
        }
    }
}
