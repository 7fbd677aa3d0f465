use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::aoi::AoiCostFunction;
use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Named cost-sequence generators. Every generator yields monotone functions
/// bounded by `D`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// One random monotone function per source, repeated every epoch.
    Constant,
    /// A fresh random monotone function per source and epoch: sorted
    /// uniforms on `[0, D]`.
    #[default]
    IidRandomMonotone,
    /// A fixed random shape per source scaled by a weight in `[floor, 1]`
    /// that moves by at most `step` per epoch, so each function moves by at
    /// most `step * D` in sup norm.
    Drifting {
        #[serde(default = "default_step")]
        step: f64,
        #[serde(default = "default_floor")]
        floor: f64,
    },
    /// Alternates a convex and a concave shape every `period` epochs; with
    /// several sources, neighbours are out of phase, so the expensive source
    /// keeps switching.
    AdversarialSwitch {
        #[serde(default = "default_period")]
        period: usize,
    },
    /// JSON array indexed `[epoch][source][AoI - 1]`.
    File { path: PathBuf },
}

fn default_step() -> f64 {
    0.02
}

fn default_floor() -> f64 {
    0.1
}

fn default_period() -> usize {
    50
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            GeneratorSpec::Drifting { step, floor } => {
                if !(0.0..=1.0).contains(&step) {
                    return Err(Error::validation("generator.step", "must lie in [0, 1]"));
                }
                if !(0.0..=1.0).contains(&floor) {
                    return Err(Error::validation("generator.floor", "must lie in [0, 1]"));
                }
            }
            GeneratorSpec::AdversarialSwitch { period: 0 } => {
                return Err(Error::validation("generator.period", "must be at least 1"));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Constant => "constant",
            GeneratorSpec::IidRandomMonotone => "iid-random-monotone",
            GeneratorSpec::Drifting { .. } => "drifting",
            GeneratorSpec::AdversarialSwitch { .. } => "adversarial-switch",
            GeneratorSpec::File { .. } => "file",
        }
    }
}

/// Sorted uniforms on `[0, 1]`.
fn random_shape(slots: usize, rng: &mut RngStream) -> Vec<f64> {
    let mut v: Vec<f64> = (0..slots).map(|_| rng.uniform()).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn scaled(shape: &[f64], scale: f64, bound: f64) -> AoiCostFunction {
    let values = shape.iter().map(|s| (s * scale).min(bound)).collect();
    AoiCostFunction::new(values, bound, true).expect("scaled monotone shape")
}

/// `T` epochs of `N` cost functions on `1..=M`.
pub fn generate_sequence(
    spec: &GeneratorSpec,
    slots: usize,
    epochs: usize,
    sources: usize,
    bound: f64,
    rng: &mut RngStream,
) -> Result<Vec<Vec<AoiCostFunction>>> {
    spec.validate()?;
    if !(bound.is_finite() && bound > 0.0) {
        return Err(Error::validation("bound", "must be finite and positive"));
    }
    match spec {
        GeneratorSpec::Constant => {
            let fs: Vec<AoiCostFunction> = (0..sources)
                .map(|_| scaled(&random_shape(slots, rng), bound, bound))
                .collect();
            Ok(vec![fs; epochs])
        }
        GeneratorSpec::IidRandomMonotone => Ok((0..epochs)
            .map(|_| {
                (0..sources)
                    .map(|_| scaled(&random_shape(slots, rng), bound, bound))
                    .collect()
            })
            .collect()),
        &GeneratorSpec::Drifting { step, floor } => {
            let shapes: Vec<Vec<f64>> = (0..sources).map(|_| random_shape(slots, rng)).collect();
            let mut weights: Vec<f64> = (0..sources).map(|_| rng.uniform_in(floor, 1.0)).collect();
            let mut out = Vec::with_capacity(epochs);
            for t in 0..epochs {
                if t > 0 {
                    for w in &mut weights {
                        let mut next = *w + rng.uniform_in(-step, step);
                        if next > 1.0 {
                            next = 2.0 - next;
                        }
                        if next < floor {
                            next = 2.0 * floor - next;
                        }
                        *w = next.clamp(floor, 1.0);
                    }
                }
                out.push(
                    shapes
                        .iter()
                        .zip(&weights)
                        .map(|(s, w)| scaled(s, bound * w, bound))
                        .collect(),
                );
            }
            Ok(out)
        }
        &GeneratorSpec::AdversarialSwitch { period } => {
            let m = slots as f64;
            let convex: Vec<f64> = (1..=slots).map(|j| (j as f64 / m).powi(3)).collect();
            let concave: Vec<f64> = (1..=slots).map(|j| (j as f64 / m).cbrt()).collect();
            Ok((0..epochs)
                .map(|t| {
                    (0..sources)
                        .map(|i| {
                            let shape = if (t / period + i) % 2 == 0 { &convex } else { &concave };
                            scaled(shape, bound, bound)
                        })
                        .collect()
                })
                .collect())
        }
        GeneratorSpec::File { path } => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let raw: Vec<Vec<Vec<f64>>> =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if raw.len() != epochs {
                return Err(Error::LengthMismatch {
                    what: "epochs in cost file",
                    expected: epochs,
                    got: raw.len(),
                });
            }
            raw.into_iter()
                .map(|epoch| {
                    if epoch.len() != sources {
                        return Err(Error::LengthMismatch {
                            what: "sources in cost file",
                            expected: sources,
                            got: epoch.len(),
                        });
                    }
                    epoch
                        .into_iter()
                        .map(|values| {
                            if values.len() != slots {
                                return Err(Error::LengthMismatch {
                                    what: "cost function in file",
                                    expected: slots,
                                    got: values.len(),
                                });
                            }
                            AoiCostFunction::new(values, bound, true)
                        })
                        .collect()
                })
                .collect()
        }
    }
}
