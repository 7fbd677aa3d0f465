use std::collections::BTreeMap;

use crate::aoi::AoiCostFunction;
use crate::error::{Error, Result};

/// Costs revealed for one source during one epoch, keyed by AoI.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostSampleSet {
    samples: BTreeMap<usize, f64>,
}

impl CostSampleSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `f(key) = value`. The cost function is fixed within an epoch,
    /// so a second, different value for the same AoI is rejected.
    pub fn insert(&mut self, key: usize, value: f64) -> Result<()> {
        match self.samples.get(&key) {
            Some(&existing) if existing != value => Err(Error::validation(
                "samples",
                format!("AoI {key} observed with costs {existing} and {value}"),
            )),
            _ => {
                self.samples.insert(key, value);
                Ok(())
            }
        }
    }

    pub fn get(&self, key: usize) -> Option<f64> {
        self.samples.get(&key).copied()
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.samples.iter().map(|(&k, &v)| (k, v))
    }
}

impl FromIterator<(usize, f64)> for CostSampleSet {
    /// Later pairs overwrite earlier ones for the same key.
    fn from_iter<I: IntoIterator<Item = (usize, f64)>>(iter: I) -> Self {
        CostSampleSet {
            samples: iter.into_iter().collect(),
        }
    }
}

/// Builds a full monotone cost estimate from sparse samples.
///
/// The point `(0, 0)` is added, and `(M, D)` too when `M` was not observed.
/// Every AoI between two known points is read off the straight line joining
/// them. The result matches the samples exactly and never exceeds `D`.
pub fn interpolate_cost_estimate(samples: &CostSampleSet, slots: usize, bound: f64) -> Result<AoiCostFunction> {
    let mut prev: Option<(usize, f64)> = None;
    for (key, value) in samples.iter() {
        if !(1..=slots).contains(&key) {
            return Err(Error::SampleKeyOutOfRange { key, slots });
        }
        if !(value.is_finite() && value >= 0.0) || value > bound {
            return Err(Error::SampleAboveBound { key, value, bound });
        }
        if let Some((k, v)) = prev {
            if value < v {
                return Err(Error::NonMonotoneSamples { lower: k, upper: key });
            }
        }
        prev = Some((key, value));
    }

    let mut known: Vec<(usize, f64)> = Vec::with_capacity(samples.len() + 2);
    known.push((0, 0.0));
    known.extend(samples.iter());
    if samples.get(slots).is_none() {
        known.push((slots, bound));
    }

    let mut values = Vec::with_capacity(slots);
    for segment in known.windows(2) {
        let (x0, y0) = segment[0];
        let (x1, y1) = segment[1];
        let slope = (y1 - y0) / (x1 - x0) as f64;
        for h in x0 + 1..x1 {
            let y = y0 + (h - x0) as f64 * slope;
            values.push(y.clamp(y0, y1));
        }
        values.push(y1);
    }
    debug_assert_eq!(values.len(), slots);
    AoiCostFunction::new(values, bound, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(pairs: &[(usize, f64)]) -> CostSampleSet {
        pairs.iter().copied().collect()
    }

    #[test]
    fn single_interior_sample() {
        let f = interpolate_cost_estimate(&set(&[(2, 4.0)]), 5, 10.0).unwrap();
        assert_eq!(f.values(), &[2.0, 4.0, 6.0, 8.0, 10.0]);
    }

    #[test]
    fn sample_at_last_slot() {
        let f = interpolate_cost_estimate(&set(&[(5, 7.0)]), 5, 10.0).unwrap();
        let expected = [1.4, 2.8, 4.2, 5.6, 7.0];
        for (a, b) in f.values().iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_is_line_to_bound() {
        let f = interpolate_cost_estimate(&CostSampleSet::new(), 4, 8.0).unwrap();
        assert_eq!(f.values(), &[2.0, 4.0, 6.0, 8.0]);
    }

    #[test]
    fn complete_samples_are_returned_verbatim() {
        let obs = [0.5, 0.5, 1.0, 3.0];
        let s: CostSampleSet = obs.iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
        let f = interpolate_cost_estimate(&s, 4, 3.0).unwrap();
        assert_eq!(f.values(), &obs);
    }

    #[test]
    fn rejections() {
        assert!(matches!(
            interpolate_cost_estimate(&set(&[(2, 11.0)]), 5, 10.0),
            Err(Error::SampleAboveBound { key: 2, .. })
        ));
        assert!(matches!(
            interpolate_cost_estimate(&set(&[(2, 5.0), (4, 3.0)]), 5, 10.0),
            Err(Error::NonMonotoneSamples { lower: 2, upper: 4 })
        ));
        assert!(matches!(
            interpolate_cost_estimate(&set(&[(6, 1.0)]), 5, 10.0),
            Err(Error::SampleKeyOutOfRange { key: 6, slots: 5 })
        ));
        let mut s = CostSampleSet::new();
        s.insert(3, 1.0).unwrap();
        s.insert(3, 1.0).unwrap();
        assert!(s.insert(3, 2.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn samples() -> impl Strategy<Value = (usize, f64, CostSampleSet)> {
            (2usize..60, 0.5f64..100.0).prop_flat_map(|(m, d)| {
                proptest::collection::btree_map(1..=m, 0.0..=d, 0..m).prop_map(move |raw| {
                    let mut vals: Vec<f64> = raw.values().copied().collect();
                    vals.sort_by(f64::total_cmp);
                    let s = raw.keys().copied().zip(vals).collect();
                    (m, d, s)
                })
            })
        }

        proptest! {
            #[test]
            fn contract((m, d, s) in samples()) {
                let f = interpolate_cost_estimate(&s, m, d).unwrap();
                prop_assert_eq!(f.len(), m);
                prop_assert!(f.is_monotone());
                prop_assert!(f.values().iter().all(|&v| (0.0..=d).contains(&v)));
                for (k, v) in s.iter() {
                    prop_assert_eq!(f.at(k), v);
                }
                prop_assert_eq!(interpolate_cost_estimate(&s, m, d).unwrap(), f);
            }
        }
    }
}
