use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::rng::RngStream;

pub type Vec2 = [f64; 2];

pub fn norm(v: Vec2) -> f64 {
    v[0].hypot(v[1])
}

pub fn distance(a: Vec2, b: Vec2) -> f64 {
    norm([a[0] - b[0], a[1] - b[1]])
}

/// Where a node is inside its current Levy step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Phase {
    Flying { remaining: usize, pause: usize },
    Paused { remaining: usize },
}

impl Phase {
    fn exhausted(&self) -> bool {
        matches!(self, Phase::Paused { remaining: 0 })
    }
}

/// A mobile node on the unbounded plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeState {
    pub position: Vec2,
    /// Speed of the current step (distance per slot).
    pub speed: f64,
    /// Heading in radians, `[0, 2 pi)`.
    pub heading: f64,
    pub phase: Phase,
    /// Displacement applied in the most recent slot.
    pub last_velocity: Vec2,
}

impl NodeState {
    /// Stationary node at `position`; the next Levy step is drawn on the first
    /// slot.
    pub fn at(position: Vec2) -> Self {
        NodeState {
            position,
            speed: 0.0,
            heading: 0.0,
            phase: Phase::Paused { remaining: 0 },
            last_velocity: [0.0, 0.0],
        }
    }

    /// Magnitude of the most recent per-slot displacement.
    pub fn current_speed(&self) -> f64 {
        norm(self.last_velocity)
    }

    fn displace(&mut self, speed: f64, heading: f64) {
        let v = [speed * heading.cos(), speed * heading.sin()];
        self.position[0] += v[0];
        self.position[1] += v[1];
        self.last_velocity = v;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyParams {
    pub v_max: f64,
    pub flight_max: usize,
    pub pause_max: usize,
}

impl LevyParams {
    pub fn new(v_max: f64) -> Self {
        LevyParams {
            v_max,
            flight_max: 50,
            pause_max: 30,
        }
    }
}

/// One Levy step `(v, theta, t_f, t_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyStep {
    pub speed: f64,
    pub heading: f64,
    pub flight: usize,
    pub pause: usize,
}

impl LevyStep {
    /// `v ~ U[0, v_max]`, `theta ~ U[0, 2 pi)`, `t_f ~ U{1..Tf_max}`,
    /// `t_p ~ U{1..Tp_max}`.
    pub fn draw(params: &LevyParams, rng: &mut RngStream) -> Self {
        LevyStep {
            speed: rng.uniform_in(0.0, params.v_max),
            heading: rng.uniform_in(0.0, TAU),
            flight: rng.uniform_int(1, params.flight_max),
            pause: rng.uniform_int(1, params.pause_max),
        }
    }
}

/// Advances a Levy node by one slot, drawing a new step when the previous
/// one (flight then pause) has run out.
pub fn levy_step(node: &mut NodeState, params: &LevyParams, rng: &mut RngStream) {
    levy_step_with(node, || LevyStep::draw(params, rng));
}

/// [`levy_step`] with the step source supplied by the caller.
pub fn levy_step_with(node: &mut NodeState, mut next_step: impl FnMut() -> LevyStep) {
    if node.phase.exhausted() {
        let step = next_step();
        node.speed = step.speed;
        node.heading = step.heading;
        node.phase = Phase::Flying {
            remaining: step.flight,
            pause: step.pause,
        };
    }
    match node.phase {
        Phase::Flying { remaining, pause } => {
            node.displace(node.speed, node.heading);
            node.phase = if remaining > 1 {
                Phase::Flying {
                    remaining: remaining - 1,
                    pause,
                }
            } else {
                Phase::Paused { remaining: pause }
            };
        }
        Phase::Paused { remaining } => {
            node.last_velocity = [0.0, 0.0];
            node.phase = Phase::Paused {
                remaining: remaining.saturating_sub(1),
            };
        }
    }
}

/// Moves `speed` in a fresh uniformly random direction.
pub fn brownian_step(node: &mut NodeState, speed: f64, rng: &mut RngStream) {
    let heading = rng.uniform_in(0.0, TAU);
    node.speed = speed;
    node.heading = heading;
    node.displace(speed, heading);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pinned_levy_trace() {
        let mut node = NodeState::at([0.0, 0.0]);
        let mut draws = vec![
            LevyStep {
                speed: 1.0,
                heading: 0.0,
                flight: 2,
                pause: 1,
            },
            LevyStep {
                speed: 0.5,
                heading: std::f64::consts::FRAC_PI_2,
                flight: 1,
                pause: 1,
            },
        ]
        .into_iter();
        let mut xs = Vec::new();
        for _ in 0..4 {
            levy_step_with(&mut node, || draws.next().unwrap());
            xs.push(node.position);
        }
        assert_eq!(xs[0], [1.0, 0.0]);
        assert_eq!(xs[1], [2.0, 0.0]);
        assert_eq!(xs[2], [2.0, 0.0]);
        assert!((xs[3][0] - 2.0).abs() < 1e-12 && (xs[3][1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn paused_node_holds() {
        let mut node = NodeState::at([3.0, 4.0]);
        node.phase = Phase::Paused { remaining: 5 };
        levy_step_with(&mut node, || unreachable!());
        assert_eq!(node.position, [3.0, 4.0]);
        assert_eq!(node.current_speed(), 0.0);
    }

    #[test]
    fn zero_v_max_never_moves() {
        let params = LevyParams::new(0.0);
        let mut rng = RngStream::new(3);
        let mut node = NodeState::at([0.0, 0.0]);
        for _ in 0..500 {
            levy_step(&mut node, &params, &mut rng);
        }
        assert_eq!(node.position, [0.0, 0.0]);
    }

    #[test]
    fn levy_displacement_bounded_by_v_max() {
        let params = LevyParams::new(0.1);
        let mut rng = RngStream::new(5);
        let mut node = NodeState::at([0.0, 0.0]);
        for _ in 0..5000 {
            let before = node.position;
            levy_step(&mut node, &params, &mut rng);
            assert!(distance(before, node.position) <= 0.1 + 1e-12);
            assert!(distance(before, node.position) <= node.speed + 1e-12);
        }
    }

    #[test]
    fn brownian_moves_exactly_speed() {
        let mut rng = RngStream::new(6);
        let mut node = NodeState::at([0.0, 0.0]);
        for _ in 0..100 {
            let before = node.position;
            brownian_step(&mut node, 2.5, &mut rng);
            assert!((distance(before, node.position) - 2.5).abs() < 1e-12);
        }
        let mut still = NodeState::at([1.0, 1.0]);
        brownian_step(&mut still, 0.0, &mut rng);
        assert_eq!(still.position, [1.0, 1.0]);
    }

    #[test]
    fn brownian_is_isotropic() {
        let mut rng = RngStream::new(12);
        let mut node = NodeState::at([0.0, 0.0]);
        let n = 10_000;
        let mut sum = [0.0, 0.0];
        for _ in 0..n {
            brownian_step(&mut node, 1.0, &mut rng);
            sum[0] += node.last_velocity[0];
            sum[1] += node.last_velocity[1];
        }
        // each component has variance 1/2 per step
        let se = (0.5 / n as f64).sqrt();
        assert!((sum[0] / n as f64).abs() < 3.0 * se);
        assert!((sum[1] / n as f64).abs() < 3.0 * se);
    }
}
