//! Observed regret against the theoretical bounds, through the same config
//! path the `aoi bounds` command uses.

use aoi_online::experiment::{parse_config, run, ExperimentKind};
use aoi_online::record::OutputFormat;

const SINGLE: &str = r#"
slots = 10
epochs = 4000
transmission_cost = 0.5
seeds = [1, 2, 3, 4, 5]

[generator]
name = "iid-random-monotone"
"#;

const MULTI: &str = r#"
sources = 2
slots = 6
epochs = 500
seeds = [1, 2, 3, 4, 5]

[generator]
name = "drifting"
step = 0.02
"#;

fn main() -> aoi_online::Result<()> {
    for text in [SINGLE, MULTI] {
        let config = parse_config(text, ExperimentKind::Bounds)?;
        let out = run(ExperimentKind::Bounds, &config)?;
        print!("{}", String::from_utf8_lossy(&out.to_bytes(OutputFormat::Csv)));
    }
    Ok(())
}
