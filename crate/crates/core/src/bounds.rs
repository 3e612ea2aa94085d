//! Analytic lower bounds on the deceleration and the turn-around thresholds
//! derived from them, plus a harness that measures their slack on
//! simulated worldlines.
//!
//! All impulses use the `Ē` convention: `K = ∫ |Ē| dx`, which for the
//! cutoff Coulomb field is `Q²(1/r2 - 1/r0)`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldModel;
use crate::format::sci;
use crate::integrator::{EventKind, Worldline};
use crate::kinematics::gamma_of;

fn check_v0(v0: f64) -> Result<()> {
    if v0 > 0.0 && v0 < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("v0 = {v0} must lie in (0, 1)")))
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("K = {k} must be finite and >= 0")))
    }
}

/// Lower bound `K / (v0 γ(v0))` on `|A|` when the particle first reaches `-r2`.
pub fn lemma2_proper_bound(v0: f64, k: f64) -> Result<f64> {
    check_v0(v0)?;
    check_k(k)?;
    Ok(k / (v0 * gamma_of(v0)?))
}

/// Lower bound `(1 - v0²)² K / v0` on `|A_c|` at the same crossing.
pub fn lemma2_coord_bound(v0: f64, k: f64) -> Result<f64> {
    check_v0(v0)?;
    check_k(k)?;
    let s = 1.0 - v0 * v0;
    Ok(s * s * k / v0)
}

/// The entry speed solving `v0²/(1 - v0²) = K (r2 - r1)`.
///
/// Entry speeds below it cannot reach `-r1` having passed `-r2`.
pub fn contra_threshold(k: f64, r1: f64, r2: f64) -> Result<f64> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("K = {k} must be positive")));
    }
    if !(r1 > 0.0 && r2 > r1) {
        return Err(Error::domain(format!("need 0 < r1 < r2, got r1 = {r1}, r2 = {r2}")));
    }
    let c = k * (r2 - r1);
    Ok((c / (1.0 + c)).sqrt())
}

/// Best turn-before-`r1` speed threshold for `field` and its checkpoint radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Threshold {
    pub v0_max: f64,
    pub r2: f64,
}

/// Maximizes [`contra_threshold`] over the checkpoint `r2 ∈ (r1, r0)`.
///
/// A coarse scan picks the best bracket, then golden-section search refines
/// the argmax to `1e-10` in `r2`.
pub fn theorem1_max_velocity(field: &FieldModel, r1: f64) -> Result<Theorem1Threshold> {
    let r0 = field.r0();
    if !(r1 > 0.0 && r1 < r0) {
        return Err(Error::domain(format!("r1 = {r1} must lie in (0, r0 = {r0})")));
    }
    let objective = |r2: f64| -> f64 {
        field.field_impulse(-r0, -r2).map(|k| k * (r2 - r1)).unwrap_or(0.0)
    };

    const SCAN: usize = 256;
    let width = r0 - r1;
    let grid: Vec<f64> = (0..=SCAN).map(|i| r1 + width * i as f64 / SCAN as f64).collect();
    let (best, best_val) = grid
        .iter()
        .enumerate()
        .map(|(i, &r)| (i, objective(r)))
        .fold((0, f64::NEG_INFINITY), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
    if !(best_val > 0.0) {
        return Err(Error::DegenerateField(
            "field impulse vanishes on every checkpoint interval".into(),
        ));
    }
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(SCAN)];
    let r2 = golden_section_max(objective, lo, hi, 1e-10);
    let (r2, c) = if objective(r2) >= best_val { (r2, objective(r2)) } else { (grid[best], best_val) };
    Ok(Theorem1Threshold { v0_max: (c / (1.0 + c)).sqrt(), r2 })
}

/// Maximizer of a unimodal `f` on `[a, b]`, to an interval width of `tol`.
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Pointwise lower bound `((1 - v0²)²/v0) Q² (-1/x - 1/r0)` on `|A_c|` at position `x`
/// in a cutoff Coulomb field.
pub fn lemma3_pointwise_bound(v0: f64, r0: f64, x: f64, q2: f64) -> Result<f64> {
    check_v0(v0)?;
    if !(r0 > 0.0) || !(q2 > 0.0) {
        return Err(Error::domain("r0 and Q2 must be positive"));
    }
    if !(x >= -r0 && x < 0.0) {
        return Err(Error::domain(format!("x = {x} must lie in [-r0, 0)")));
    }
    let s = 1.0 - v0 * v0;
    Ok(s * s / v0 * q2 * (-1.0 / x - 1.0 / r0).max(0.0))
}

/// The lower bound on the speed lost between `-r0` and `-r1` in a cutoff
/// Coulomb field: `((1 - v0²)²/v0²) Q² [ln(r0/r1) - (r0 - r1)/r0]`.
pub fn theorem2_guarantee(v0: f64, r1: f64, r0: f64, q2: f64) -> Result<f64> {
    check_v0(v0)?;
    if !(r1 > 0.0 && r0 >= r1 && q2 > 0.0) {
        return Err(Error::domain("need 0 < r1 <= r0 and Q2 > 0"));
    }
    let s = 1.0 - v0 * v0;
    Ok(s * s / (v0 * v0) * q2 * ((r0 / r1).ln() - (r0 - r1) / r0))
}

/// Smallest cutoff `r0 > r1` for which [`theorem2_guarantee`] reaches `v0`,
/// to `1e-10` relative.
pub fn theorem2_min_cutoff(v0: f64, r1: f64, q2: f64) -> Result<f64> {
    check_v0(v0)?;
    if !(r1 > 0.0 && r1.is_finite()) || !(q2 > 0.0 && q2.is_finite()) {
        return Err(Error::domain("r1 and Q2 must be positive"));
    }
    let ok = |r0: f64| theorem2_guarantee(v0, r1, r0, q2).map(|g| g >= v0);
    let mut lo = r1;
    let mut hi = 2.0 * r1;
    while !ok(hi)? {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::domain("no finite cutoff satisfies the guarantee"));
        }
    }
    while hi - lo > 1e-10 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Checkpoint geometry for the bound checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundQuery {
    pub v0: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
    /// `∫_{-r0}^{-r2} |Ē| dx`.
    pub k: f64,
}

impl BoundQuery {
    pub fn new(v0: f64, r0: f64, r1: f64, r2: f64, k: f64) -> Result<Self> {
        check_v0(v0)?;
        check_k(k)?;
        if !(0.0 < r1 && r1 < r2 && r2 < r0) {
            return Err(Error::domain(format!(
                "need 0 < r1 < r2 < r0, got r1 = {r1}, r2 = {r2}, r0 = {r0}"
            )));
        }
        Ok(BoundQuery { v0, r0, r1, r2, k })
    }

    /// Query with `K` computed from `field`.
    pub fn for_field(field: &FieldModel, v0: f64, r1: f64, r2: f64) -> Result<Self> {
        let r0 = field.r0();
        let k = field.field_impulse(-r0, -r2)?;
        Self::new(v0, r0, r1, r2, k)
    }

    /// Checkpoint that a run is guaranteed to cross: `r1` is raised to the
    /// closest approach if the run turned outside it, and `r2` is the
    /// midpoint of `[r1, r0]`.
    pub fn crossing_checkpoint(field: &FieldModel, wl: &Worldline, v0: f64, r1: Option<f64>) -> Result<Self> {
        let r0 = field.r0();
        let closest = closest_approach(wl);
        let r1 = r1.unwrap_or(0.0).max(closest);
        if !(r1 < r0) {
            return Err(Error::domain("run never moved inside the cutoff"));
        }
        Self::for_field(field, v0, r1, 0.5 * (r0 + r1))
    }
}

/// Smallest distance to the origin reached by the run.
pub fn closest_approach(wl: &Worldline) -> f64 {
    wl.samples().iter().map(|s| -s.x).fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundKind {
    Lemma2Proper,
    Lemma2Coord,
    Lemma3Pointwise,
    ContraThreshold,
    Theorem2Cutoff,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Lemma2Proper => "Lemma2Proper",
            BoundKind::Lemma2Coord => "Lemma2Coord",
            BoundKind::Lemma3Pointwise => "Lemma3Pointwise",
            BoundKind::ContraThreshold => "ContraThreshold",
            BoundKind::Theorem2Cutoff => "Theorem2Cutoff",
        }
    }
}

/// One analytic bound compared with a measurement; `slack >= 0` means the
/// bound held.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound_kind: BoundKind,
    pub analytic_value: f64,
    pub measured_value: f64,
    pub slack: f64,
}

impl BoundReport {
    fn new(kind: BoundKind, analytic: f64, measured: f64) -> Self {
        BoundReport {
            bound_kind: kind,
            analytic_value: analytic,
            measured_value: measured,
            slack: measured - analytic,
        }
    }
}

/// CSV with header `bound_kind,analytic,measured,slack`.
pub fn reports_to_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("bound_kind,analytic,measured,slack\n");
    for r in reports {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.bound_kind.name(),
            sci(r.analytic_value),
            sci(r.measured_value),
            sci(r.slack)
        );
    }
    out
}

/// Measures every applicable bound on `wl`.
///
/// * `Lemma2Proper` / `Lemma2Coord`: `|A|`, `|A_c|` at the first `-r2` crossing.
/// * `Lemma3Pointwise` (Coulomb only): the smallest `|A_c| - bound(x)` over
///   pre-turn samples.
/// * `ContraThreshold` / `Theorem2Cutoff`: when `v0` lies inside the
///   guaranteed regime, the closest approach compared with `r1`.
pub fn check_bounds_on_worldline(
    wl: &Worldline,
    field: &FieldModel,
    query: &BoundQuery,
) -> Result<Vec<BoundReport>> {
    if (field.r0() - query.r0).abs() > 1e-12 * query.r0 {
        return Err(Error::config(format!(
            "query r0 = {} does not match the field cutoff {}",
            query.r0,
            field.r0()
        )));
    }
    let turn_tau = wl.event(EventKind::Turn).map_or(f64::INFINITY, |e| e.state.tau);
    let crossing = wl
        .first_crossing(-query.r2)
        .filter(|s| s.tau <= turn_tau)
        .ok_or_else(|| Error::domain(format!("worldline never reaches x = {}", -query.r2)))?;

    let mut out = Vec::with_capacity(5);
    out.push(BoundReport::new(
        BoundKind::Lemma2Proper,
        lemma2_proper_bound(query.v0, query.k)?,
        crossing.a.abs(),
    ));
    out.push(BoundReport::new(
        BoundKind::Lemma2Coord,
        lemma2_coord_bound(query.v0, query.k)?,
        crossing.coord_accel().abs(),
    ));

    if let Some(q2) = field.q2() {
        let mut worst: Option<BoundReport> = None;
        for s in wl.pre_turn() {
            let bound = lemma3_pointwise_bound(query.v0, query.r0, s.x.max(-query.r0), q2)?;
            let rep = BoundReport::new(BoundKind::Lemma3Pointwise, bound, s.coord_accel().abs());
            if worst.is_none_or(|w| rep.slack < w.slack) {
                worst = Some(rep);
            }
        }
        out.extend(worst);
    }

    let closest = closest_approach(wl);
    if query.k > 0.0 && query.v0 < contra_threshold(query.k, query.r1, query.r2)? {
        out.push(BoundReport::new(BoundKind::ContraThreshold, query.r1, closest));
    }
    if let Some(q2) = field.q2() {
        if theorem2_guarantee(query.v0, query.r1, query.r0, q2)? >= query.v0 {
            out.push(BoundReport::new(BoundKind::Theorem2Cutoff, query.r1, closest));
        }
    }
    Ok(out)
}
