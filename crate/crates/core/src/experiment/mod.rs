//! Config files, cost-sequence generators and the runners behind the `aoi`
//! binary.
//!
//! Every cell `(algorithm, seed)` draws from its own substream of the seed,
//! so results do not depend on which other cells run or in what order.

mod config;
mod generators;
mod run;

pub use config::{load_config, parse_config, ExperimentKind, OutputSpec, RunConfig};
pub use generators::{generate_sequence, GeneratorSpec};
pub use run::{
    exact_variation, parse_multi_algorithm, parse_single_algorithm, run, sequence_for_seed, BoundRow, OracleRow,
    RunOutput,
};
