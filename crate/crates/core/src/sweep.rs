//! Cartesian parameter sweeps over `v0`, `r0`, `Q2` and `r1`.
//!
//! A sweep is described by a JSON document:
//!
//! ```json
//! {
//!   "axes":  { "v0": [0.01, 0.1], "r0": { "min": 5, "max": 50, "count": 2, "spacing": "log" } },
//!   "fixed": { "Q2": 1.0, "r1": 0.5 },
//!   "output_dir": "sweep_out"
//! }
//! ```
//!
//! Cases run in parallel but rows are emitted in lexicographic case order
//! (first axis varies slowest), so output is byte-identical across runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::Deserialize;

use crate::bounds::{check_bounds_on_worldline, BoundQuery};
use crate::error::{Error, Result};
use crate::field::{FieldModel, Profile};
use crate::format::sci;
use crate::integrator::{integrate, EventKind, SimConfig};

pub const PARAMETERS: [&str; 4] = ["v0", "r0", "Q2", "r1"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Values(Vec<f64>),
    Range {
        min: f64,
        max: f64,
        count: usize,
        #[serde(default = "default_spacing")]
        spacing: Spacing,
    },
}

fn default_spacing() -> Spacing {
    Spacing::Linear
}

impl Axis {
    pub fn values(&self) -> Result<Vec<f64>> {
        match *self {
            Axis::Values(ref v) => {
                if v.is_empty() {
                    return Err(Error::config("axis has no values"));
                }
                Ok(v.clone())
            }
            Axis::Range { min, max, count, spacing } => {
                if count == 0 {
                    return Err(Error::config("axis count must be >= 1"));
                }
                if !(min.is_finite() && max.is_finite()) {
                    return Err(Error::config("axis bounds must be finite"));
                }
                if count == 1 {
                    return Ok(vec![min]);
                }
                let n = (count - 1) as f64;
                match spacing {
                    Spacing::Linear => {
                        Ok((0..count).map(|i| min + (max - min) * i as f64 / n).collect())
                    }
                    Spacing::Log => {
                        if !(min > 0.0 && max > 0.0) {
                            return Err(Error::config("log spacing needs positive bounds"));
                        }
                        let (a, b) = (min.ln(), max.ln());
                        Ok((0..count).map(|i| (a + (b - a) * i as f64 / n).exp()).collect())
                    }
                }
            }
        }
    }
}

/// Optional integration settings shared by every case.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSettings {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub tau_max: Option<f64>,
    pub post_exit_tau: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axes: IndexMap<String, Axis>,
    #[serde(default)]
    pub fixed: IndexMap<String, f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Tabulated profile file; replaces the Coulomb field and supplies `r0`.
    #[serde(default)]
    pub profile: Option<PathBuf>,
    #[serde(default)]
    pub settings: SweepSettings,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from(".")
}

/// One point of the sweep, with every parameter resolved.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCase {
    pub v0: f64,
    pub r0: f64,
    pub q2: f64,
    pub r1: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub case: SweepCase,
    pub outcome: Option<&'static str>,
    pub x_turn: Option<f64>,
    pub tau_turn: Option<f64>,
    pub t_turn: Option<f64>,
    pub v_turn: Option<f64>,
    pub runaway_rate: Option<f64>,
    pub min_bound_slack: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    pub fn succeeded(&self) -> bool {
        self.outcome.is_some()
    }
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("sweep spec: {e}")))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    fn required(&self) -> Vec<&'static str> {
        if self.profile.is_some() {
            vec!["v0", "Q2", "r1"]
        } else {
            PARAMETERS.to_vec()
        }
    }

    /// Checks the parameter coverage and expands the axes.
    pub fn validate(&self) -> Result<Vec<(String, Vec<f64>)>> {
        if self.axes.is_empty() {
            return Err(Error::config("sweep needs at least one axis"));
        }
        let required = self.required();
        for name in self.axes.keys().chain(self.fixed.keys()) {
            if !PARAMETERS.contains(&name.as_str()) {
                return Err(Error::config(format!("unknown parameter '{name}'")));
            }
            if !required.contains(&name.as_str()) {
                return Err(Error::config(format!(
                    "parameter '{name}' is taken from the profile file"
                )));
            }
        }
        for name in &required {
            let n = self.axes.contains_key(*name) as u8 + self.fixed.contains_key(*name) as u8;
            if n != 1 {
                return Err(Error::config(format!(
                    "parameter '{name}' must appear exactly once (as axis or fixed), found {n}"
                )));
            }
        }
        self.axes
            .iter()
            .map(|(k, a)| Ok((k.clone(), a.values()?)))
            .collect()
    }

    /// Every case in lexicographic axis order.
    pub fn cases(&self, profile_r0: Option<f64>) -> Result<Vec<SweepCase>> {
        let axes = self.validate()?;
        let total: usize = axes.iter().map(|(_, v)| v.len()).product();
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut vals: IndexMap<&str, f64> = IndexMap::new();
            for (name, values) in axes.iter().rev() {
                vals.insert(name.as_str(), values[rem % values.len()]);
                rem /= values.len();
            }
            let get = |name: &str| -> f64 {
                vals.get(name).copied().or_else(|| self.fixed.get(name).copied()).unwrap_or(f64::NAN)
            };
            out.push(SweepCase {
                v0: get("v0"),
                r0: profile_r0.unwrap_or_else(|| get("r0")),
                q2: get("Q2"),
                r1: get("r1"),
            });
        }
        Ok(out)
    }
}

fn base_profile(spec: &SweepSpec, base_dir: &Path) -> Result<Option<Profile>> {
    match &spec.profile {
        None => Ok(None),
        Some(p) => {
            let path = if p.is_absolute() { p.clone() } else { base_dir.join(p) };
            Profile::from_file(path).map(Some)
        }
    }
}

fn run_case(case: SweepCase, profile: Option<&Profile>, settings: &SweepSettings) -> SweepRow {
    let mut row = SweepRow {
        case,
        outcome: None,
        x_turn: None,
        tau_turn: None,
        t_turn: None,
        v_turn: None,
        runaway_rate: None,
        min_bound_slack: None,
        error: None,
    };
    let result = (|| -> Result<()> {
        let field = match profile {
            Some(p) => FieldModel::Tabulated(p.scaled(case.q2)?),
            None => FieldModel::cutoff_coulomb(case.q2, case.r0)?,
        };
        let mut cfg = SimConfig::new(field.clone(), case.v0)?.with_r1(case.r1);
        if let Some(v) = settings.rel_tol {
            cfg.rel_tol = v;
        }
        if let Some(v) = settings.abs_tol {
            cfg.abs_tol = v;
        }
        if let Some(v) = settings.tau_max {
            cfg.tau_max = v;
        }
        if let Some(v) = settings.post_exit_tau {
            cfg.post_exit_tau = v;
        }
        cfg.validate()?;
        let wl = integrate(&cfg)?;
        row.outcome = Some(wl.outcome().name());
        if let Some(turn) = wl.event(EventKind::Turn) {
            row.x_turn = Some(turn.state.x);
            row.tau_turn = Some(turn.state.tau);
            row.t_turn = Some(turn.state.t);
            row.v_turn = Some(turn.state.v());
        }
        row.runaway_rate = wl.fit_runaway_rate().ok();
        row.min_bound_slack = BoundQuery::crossing_checkpoint(&field, &wl, case.v0, Some(case.r1))
            .and_then(|q| check_bounds_on_worldline(&wl, &field, &q))
            .ok()
            .and_then(|reps| reps.iter().map(|r| r.slack).reduce(f64::min));
        Ok(())
    })();
    if let Err(e) = result {
        row.error = Some(e.to_string());
    }
    row
}

/// Runs every case; `base_dir` resolves a relative profile path.
pub fn run_sweep(spec: &SweepSpec, base_dir: &Path) -> Result<Vec<SweepRow>> {
    let profile = base_profile(spec, base_dir)?;
    let cases = spec.cases(profile.as_ref().map(Profile::cutoff))?;
    Ok(cases
        .into_par_iter()
        .map(|c| run_case(c, profile.as_ref(), &spec.settings))
        .collect())
}

fn opt(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

/// `sweep.csv` contents.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "v0,r0,Q2,r1,outcome,x_turn,tau_turn,t_turn,v_turn,runaway_rate,min_bound_slack,error\n",
    );
    for r in rows {
        let error = r.error.as_deref().unwrap_or("").replace([',', '\n'], ";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            sci(r.case.v0),
            sci(r.case.r0),
            sci(r.case.q2),
            sci(r.case.r1),
            r.outcome.unwrap_or("Failed"),
            opt(r.x_turn),
            opt(r.tau_turn),
            opt(r.t_turn),
            opt(r.v_turn),
            opt(r.runaway_rate),
            opt(r.min_bound_slack),
            error
        );
    }
    out
}
