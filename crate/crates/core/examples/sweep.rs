//! A parameter sweep from an inline JSON spec; prints the sweep CSV.

use std::path::Path;

use radial_ld::sweep::{rows_to_csv, run_sweep, SweepSpec};

const SPEC: &str = r#"{
  "axes": {
    "v0": [0.01, 0.1, 0.5],
    "r0": { "min": 2, "max": 200, "count": 3, "spacing": "log" }
  },
  "fixed": { "Q2": 1.0, "r1": 0.5 }
}"#;

fn main() -> Result<(), radial_ld::Error> {
    let spec = SweepSpec::from_json(SPEC)?;
    let rows = run_sweep(&spec, Path::new("."))?;
    print!("{}", rows_to_csv(&rows));
    Ok(())
}
