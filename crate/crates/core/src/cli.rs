//! Command-line front end: `simulate`, `sweep`, `bounds` and `verify`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bounds::{
    lemma2_coord_bound, lemma2_proper_bound, lemma3_pointwise_bound, theorem1_max_velocity,
    theorem2_min_cutoff,
};
use crate::error::Error;
use crate::field::{FieldModel, Profile};
use crate::format::sci;
use crate::integrator::{integrate, EventKind, SimConfig};
use crate::sweep::{rows_to_csv, run_sweep, SweepSpec};
use crate::verify::run_verification;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "radial-ld", version, about = "Radial Lorentz-Dirac worldlines in a cutoff field")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one worldline and write worldline.csv and events.json.
    Simulate(SimulateArgs),
    /// Run a parameter sweep described by a JSON spec file.
    Sweep(SweepArgs),
    /// Print analytic thresholds and bounds.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
    /// Run the verification grid and write verify.json.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, default_value_t = 1.0)]
    q2: f64,
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    v0: f64,
    #[arg(long)]
    r1: Option<f64>,
    #[arg(long, default_value_t = SimConfig::DEFAULT_REL_TOL)]
    rel_tol: f64,
    #[arg(long, default_value_t = SimConfig::DEFAULT_TAU_MAX)]
    tau_max: f64,
    #[arg(long, default_value_t = SimConfig::DEFAULT_POST_EXIT_TAU)]
    post_exit_tau: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Tabulated `r magnitude` profile; replaces the Coulomb field.
    #[arg(long)]
    profile: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    spec: PathBuf,
    /// Overrides the spec's output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Subcommand)]
enum BoundsCommand {
    /// Largest entry speed that guarantees a turn before -r1.
    Theorem1 {
        #[arg(long, default_value_t = 1.0)]
        q2: f64,
        #[arg(long)]
        r0: Option<f64>,
        #[arg(long)]
        r1: f64,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest Coulomb cutoff that guarantees a turn before -r1.
    Theorem2 {
        #[arg(long)]
        v0: f64,
        #[arg(long)]
        r1: f64,
        #[arg(long, default_value_t = 1.0)]
        q2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Acceleration bounds at a checkpoint with impulse K.
    Lemma2 {
        #[arg(long)]
        v0: f64,
        #[arg(long)]
        k: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pointwise coordinate-acceleration bound at position x.
    Lemma3 {
        #[arg(long)]
        v0: f64,
        #[arg(long)]
        r0: f64,
        /// Position in `[-r0, 0)`.
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        q2: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() || matches!(err, Error::Io { .. }) {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn field_from(q2: f64, r0: Option<f64>, profile: Option<&Path>) -> Result<FieldModel, Error> {
    match (profile, r0) {
        (Some(p), None) => Ok(FieldModel::Tabulated(Profile::from_file(p)?)),
        (Some(_), Some(_)) => Err(Error::config("--r0 comes from the profile; do not pass both")),
        (None, Some(r0)) => FieldModel::cutoff_coulomb(q2, r0),
        (None, None) => Err(Error::config("--r0 (or --profile) is required")),
    }
}

fn simulate(args: &SimulateArgs) -> Result<i32, Error> {
    let field = field_from(args.q2, args.r0, args.profile.as_deref())?;
    let mut cfg = SimConfig::new(field.clone(), args.v0)?;
    cfg.rel_tol = args.rel_tol;
    cfg.tau_max = args.tau_max;
    cfg.post_exit_tau = args.post_exit_tau;
    cfg.r1 = args.r1;
    cfg.validate()?;

    let wl = integrate(&cfg)?;
    write_file(&args.out.join("worldline.csv"), &wl.to_csv(&field))?;
    write_file(&args.out.join("events.json"), &(wl.events_json() + "\n"))?;

    let turn = wl.event(EventKind::Turn);
    let rate = wl.fit_runaway_rate().ok();
    println!(
        "outcome={} x_turn={} v_turn={} runaway_rate={}",
        wl.outcome().name(),
        turn.map_or("none".into(), |e| sci(e.state.x)),
        turn.map_or("none".into(), |e| sci(e.state.v())),
        rate.map_or("none".into(), sci),
    );
    Ok(EXIT_OK)
}

fn sweep(args: &SweepArgs) -> Result<i32, Error> {
    let mut spec = SweepSpec::from_file(&args.spec)?;
    if let Some(out) = &args.out {
        spec.output_dir = out.clone();
    }
    let base = args.spec.parent().unwrap_or(Path::new("."));
    let rows = run_sweep(&spec, base)?;
    write_file(&spec.output_dir.join("sweep.csv"), &rows_to_csv(&rows))?;
    let ok = rows.iter().filter(|r| r.succeeded()).count();
    println!("{} cases, {} integrated, {} failed", rows.len(), ok, rows.len() - ok);
    Ok(if ok > 0 { EXIT_OK } else { EXIT_NUMERICAL })
}

fn table(rows: &[(&str, f64)]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<20} {:>25}", "quantity", "value");
    for (name, v) in rows {
        let _ = writeln!(s, "{:<20} {:>25}", name, sci(*v));
    }
    s
}

fn bounds(which: &BoundsCommand) -> Result<i32, Error> {
    let (rows, out): (Vec<(&str, f64)>, &Option<PathBuf>) = match which {
        BoundsCommand::Theorem1 { q2, r0, r1, profile, out } => {
            let field = field_from(*q2, *r0, profile.as_deref())?;
            let t = theorem1_max_velocity(&field, *r1)?;
            (vec![("v0_max", t.v0_max), ("r2", t.r2)], out)
        }
        BoundsCommand::Theorem2 { v0, r1, q2, out } => {
            (vec![("r0_min", theorem2_min_cutoff(*v0, *r1, *q2)?)], out)
        }
        BoundsCommand::Lemma2 { v0, k, out } => (
            vec![
                ("lemma2_proper", lemma2_proper_bound(*v0, *k)?),
                ("lemma2_coord", lemma2_coord_bound(*v0, *k)?),
            ],
            out,
        ),
        BoundsCommand::Lemma3 { v0, r0, x, q2, out } => {
            (vec![("lemma3_pointwise", lemma3_pointwise_bound(*v0, *r0, *x, *q2)?)], out)
        }
    };
    print!("{}", table(&rows));
    if let Some(path) = out {
        let mut csv = String::from("quantity,value\n");
        for (name, v) in &rows {
            let _ = writeln!(csv, "{},{}", name, sci(*v));
        }
        write_file(path, &csv)?;
    }
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs) -> Result<i32, Error> {
    let report = run_verification(args.quick);
    write_file(&args.out.join("verify.json"), &report.to_json())?;
    for c in report.cases.iter().filter(|c| !c.passed) {
        let failed: Vec<&str> =
            c.predicates.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
        eprintln!(
            "FAIL {} {:?}: {}",
            c.group,
            c.parameters,
            c.error.clone().unwrap_or_else(|| failed.join(", "))
        );
    }
    println!("{} cases, {} failures", report.summary.cases, report.summary.failures);
    Ok(if report.has_numerical_failure() {
        EXIT_NUMERICAL
    } else if report.summary.failures > 0 {
        EXIT_VERIFY_FAILED
    } else {
        EXIT_OK
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Bounds { which } => bounds(which),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
