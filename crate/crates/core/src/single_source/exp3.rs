use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::Threshold;

/// EXP3 over thresholds, bandit feedback.
///
/// Weights are kept as log-weights and the distribution is recomputed with a
/// max shift after each update, so long horizons cannot underflow.
#[derive(Debug, Clone, PartialEq)]
pub struct Exp3State {
    log_weights: Vec<f64>,
    p: Vec<f64>,
    epsilon: f64,
    epoch: usize,
}

impl Exp3State {
    /// Uniform start over `thresholds` options.
    pub fn new(thresholds: usize, epsilon: f64) -> Self {
        let uniform = 1.0 / thresholds as f64;
        Exp3State {
            log_weights: vec![0.0; thresholds],
            p: vec![uniform; thresholds],
            epsilon,
            epoch: 1,
        }
    }

    /// `epsilon = sqrt(ln M / (T M))`.
    pub fn default_epsilon(thresholds: usize, epochs: usize) -> f64 {
        let m = thresholds as f64;
        (m.ln() / (epochs as f64 * m)).sqrt()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn select(&self, rng: &mut RngStream) -> Threshold {
        self.select_with(rng.uniform())
    }

    /// Inverse-CDF sampling: the first threshold whose cumulative probability
    /// exceeds `u`.
    pub fn select_with(&self, u: f64) -> Threshold {
        let mut cumulative = 0.0;
        for (i, &p) in self.p.iter().enumerate() {
            cumulative += p;
            if u < cumulative {
                return Threshold::from_index(i);
            }
        }
        // u landed in the rounding gap above the final cumulative sum
        let last = self.p.iter().rposition(|&p| p > 0.0).unwrap_or(self.p.len() - 1);
        Threshold::from_index(last)
    }

    /// Importance-weighted cost estimate for one observed loss: `loss / p(x)`
    /// at the chosen threshold, zero elsewhere.
    pub fn importance_estimate(&self, chosen: Threshold, loss: f64) -> Result<Vec<f64>> {
        let i = chosen.index();
        if i >= self.p.len() {
            return Err(Error::ThresholdOutOfRange {
                x: chosen.get(),
                slots: self.p.len(),
            });
        }
        if self.p[i] <= 0.0 {
            return Err(Error::ZeroProbability { index: chosen.get() });
        }
        let mut estimate = vec![0.0; self.p.len()];
        estimate[i] = loss / self.p[i];
        Ok(estimate)
    }

    /// Exponential-weights step on the importance estimate.
    pub fn update(&mut self, chosen: Threshold, loss: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&loss) {
            return Err(Error::LossOutOfRange(loss));
        }
        let estimate = self.importance_estimate(chosen, loss)?;
        for (w, c) in self.log_weights.iter_mut().zip(&estimate) {
            *w -= self.epsilon * c;
        }
        self.renormalize();
        self.epoch += 1;
        Ok(())
    }

    fn renormalize(&mut self) {
        let max = self.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for (p, w) in self.p.iter_mut().zip(&self.log_weights) {
            *p = (w - max).exp();
        }
        let total: f64 = self.p.iter().sum();
        for p in &mut self.p {
            *p /= total;
        }
    }
}
