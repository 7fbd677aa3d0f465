use std::collections::BTreeMap;

use crate::aoi::Aoi;
use crate::error::Result;
use crate::multi_source::CostSampleSet;

use super::node::{distance, NodeState, Vec2};

/// What the base station holds for each node: the last report and its age.
#[derive(Debug, Clone, PartialEq)]
pub struct BsEstimate {
    pub positions: Vec<Vec2>,
    pub velocities: Vec<Vec2>,
    pub aois: Vec<Aoi>,
}

impl BsEstimate {
    /// Estimates taken from the nodes' current states, all with AoI 1.
    pub fn from_nodes(nodes: &[NodeState]) -> Self {
        BsEstimate {
            positions: nodes.iter().map(|n| n.position).collect(),
            velocities: nodes.iter().map(|n| n.last_velocity).collect(),
            aois: vec![Aoi::ONE; nodes.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Node `i` reports; every other node's AoI grows by one.
    pub fn report(&mut self, i: usize, node: &NodeState) {
        self.positions[i] = node.position;
        self.velocities[i] = node.last_velocity;
        for (k, a) in self.aois.iter_mut().enumerate() {
            *a = if k == i { Aoi::ONE } else { a.grow() };
        }
    }

    /// Dead-reckoned position of node `i` from its last report.
    pub fn extrapolated(&self, i: usize) -> Vec2 {
        let a = (self.aois[i].get() - 1) as f64;
        [
            self.positions[i][0] + a * self.velocities[i][0],
            self.positions[i][1] + a * self.velocities[i][1],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackingError {
    /// Mean distance between true and last reported positions.
    pub mean_error: f64,
    /// `sum_i v_i A_i` with `v_i` the node's latest per-slot speed.
    pub surrogate: f64,
}

pub fn tracking_error(nodes: &[NodeState], estimates: &BsEstimate) -> TrackingError {
    debug_assert_eq!(nodes.len(), estimates.len());
    let n = nodes.len().max(1) as f64;
    let total: f64 = nodes
        .iter()
        .zip(&estimates.positions)
        .map(|(node, &p)| distance(node.position, p))
        .sum();
    let surrogate = nodes
        .iter()
        .zip(&estimates.aois)
        .map(|(node, a)| node.current_speed() * a.get() as f64)
        .sum();
    TrackingError {
        mean_error: total / n,
        surrogate,
    }
}

/// Raw `(AoI, cost)` pairs seen for one node in one epoch.
///
/// Mobility costs are only approximately fixed within an epoch: speeds change
/// mid-epoch and one AoI can be observed twice. Repeated keys are averaged,
/// the result is projected onto nondecreasing sequences (pool adjacent
/// violators) and clipped to `[0, bound]`, giving a sample set that meets
/// the interpolation contract.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawSamples {
    sums: BTreeMap<usize, (f64, usize)>,
}

impl RawSamples {
    pub fn push(&mut self, key: usize, value: f64) {
        let e = self.sums.entry(key).or_insert((0.0, 0));
        e.0 += value;
        e.1 += 1;
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    pub fn monotone(&self, bound: f64) -> Result<CostSampleSet> {
        // blocks of (value, weight, keys)
        let mut blocks: Vec<(f64, f64, Vec<usize>)> = Vec::new();
        for (&k, &(sum, count)) in &self.sums {
            let w = count as f64;
            blocks.push((sum / w, w, vec![k]));
            while blocks.len() > 1 && blocks[blocks.len() - 2].0 > blocks[blocks.len() - 1].0 {
                let (v2, w2, k2) = blocks.pop().unwrap();
                let last = blocks.last_mut().unwrap();
                last.0 = (last.0 * last.1 + v2 * w2) / (last.1 + w2);
                last.1 += w2;
                last.2.extend(k2);
            }
        }
        let mut set = CostSampleSet::new();
        for (v, _, keys) in blocks {
            for k in keys {
                set.insert(k, v.clamp(0.0, bound))?;
            }
        }
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node_at(p: Vec2) -> NodeState {
        NodeState::at(p)
    }

    #[test]
    fn distance_to_last_report() {
        let est = BsEstimate::from_nodes(&[node_at([0.0, 0.0])]);
        let err = tracking_error(&[node_at([3.0, 4.0])], &est);
        assert_eq!(err.mean_error, 5.0);
    }

    #[test]
    fn fresh_report_zero_error() {
        let n = node_at([7.0, -2.0]);
        let mut est = BsEstimate::from_nodes(&[node_at([0.0, 0.0]), node_at([0.0, 0.0])]);
        est.report(0, &n);
        let err = tracking_error(&[n, node_at([0.0, 0.0])], &est);
        assert_eq!(err.mean_error, 0.0);
        assert_eq!(est.aois[0], Aoi::ONE);
        assert_eq!(est.aois[1].get(), 2);
    }

    #[test]
    fn straight_line_error_is_v_times_a() {
        let mut node = node_at([0.0, 0.0]);
        node.speed = 2.0;
        node.phase = super::super::node::Phase::Flying {
            remaining: 100,
            pause: 1,
        };
        let mut est = BsEstimate::from_nodes(&[node.clone(), node_at([0.0, 0.0])]);
        for _ in 0..3 {
            super::super::node::levy_step_with(&mut node, || unreachable!());
            est.report(1, &node_at([0.0, 0.0]));
        }
        let err = tracking_error(&[node.clone(), node_at([0.0, 0.0])], &est);
        assert!((err.mean_error * 2.0 - 6.0).abs() < 1e-12);
        assert_eq!(est.aois[0].get(), 4);
        // extrapolation from a report with velocity recovers the true position
        let mut est2 = BsEstimate::from_nodes(&[node.clone()]);
        let reported = node.position;
        for _ in 0..3 {
            super::super::node::levy_step_with(&mut node, || unreachable!());
            est2.aois[0] = est2.aois[0].grow();
        }
        let guess = est2.extrapolated(0);
        assert!((guess[0] - node.position[0]).abs() < 1e-12);
        assert_eq!(reported[0] + 6.0, node.position[0]);
    }

    #[test]
    fn raw_samples_projection() {
        let mut raw = RawSamples::default();
        raw.push(2, 4.0);
        raw.push(2, 2.0);
        raw.push(3, 1.0);
        raw.push(5, 50.0);
        let set = raw.monotone(10.0).unwrap();
        // (2 -> 3 with weight 2) pooled with (3 -> 1): (6 + 1) / 3
        assert!((set.get(2).unwrap() - 7.0 / 3.0).abs() < 1e-12);
        assert_eq!(set.get(2), set.get(3));
        assert_eq!(set.get(5), Some(10.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn projection_is_monotone_and_bounded(
                pairs in proptest::collection::vec((1usize..50, 0.0f64..200.0), 0..60),
                bound in 1.0f64..150.0,
            ) {
                let mut raw = RawSamples::default();
                for &(k, v) in &pairs {
                    raw.push(k, v);
                }
                let set = raw.monotone(bound).unwrap();
                let vals: Vec<(usize, f64)> = set.iter().collect();
                prop_assert_eq!(vals.len(), raw.len());
                for w in vals.windows(2) {
                    prop_assert!(w[1].1 >= w[0].1);
                }
                prop_assert!(vals.iter().all(|&(_, v)| (0.0..=bound).contains(&v)));
            }
        }
    }
}
