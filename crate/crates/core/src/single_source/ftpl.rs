use crate::error::{Error, Result};
use crate::rng::RngStream;

use super::{argmin, Threshold};

/// Follow the Perturbed Leader over thresholds, full feedback.
///
/// Keeps the elementwise sum of every observed cost vector and each epoch picks
/// the argmin of that sum plus `eta` times a fresh standard normal vector.
#[derive(Debug, Clone, PartialEq)]
pub struct FtplState {
    theta: Vec<f64>,
    eta: f64,
    epoch: usize,
}

impl FtplState {
    pub fn new(thresholds: usize, eta: f64) -> Self {
        FtplState {
            theta: vec![0.0; thresholds],
            eta,
            epoch: 1,
        }
    }

    /// Default scale for a horizon of `epochs`: `eta = sqrt(T)`.
    pub fn default_eta(epochs: usize) -> f64 {
        (epochs as f64).sqrt()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    /// Draws `M` standard normals and picks the perturbed leader.
    pub fn select(&self, rng: &mut RngStream) -> Threshold {
        let gamma = rng.standard_normals(self.theta.len());
        self.select_with(&gamma)
    }

    /// Perturbed leader for a given perturbation vector; ties go to the
    /// smallest threshold.
    pub fn select_with(&self, gamma: &[f64]) -> Threshold {
        debug_assert_eq!(gamma.len(), self.theta.len());
        let perturbed = self.theta.iter().zip(gamma).map(|(t, g)| t + self.eta * g);
        let (i, _) = argmin(perturbed).expect("at least one threshold");
        Threshold::from_index(i)
    }

    /// Adds a full-feedback cost vector to the history.
    pub fn update(&mut self, observed: &[f64]) -> Result<()> {
        if observed.len() != self.theta.len() {
            return Err(Error::LengthMismatch {
                what: "cost vector",
                expected: self.theta.len(),
                got: observed.len(),
            });
        }
        for (t, c) in self.theta.iter_mut().zip(observed) {
            *t += c;
        }
        self.epoch += 1;
        Ok(())
    }
}
