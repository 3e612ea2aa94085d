use std::fmt::Write as _;

use serde::Serialize;

use super::{Event, EventKind, Outcome, SimState};
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::format::sci;

/// Samples of one integrated worldline plus the events detected on it.
#[derive(Debug, Clone)]
pub struct Worldline {
    samples: Vec<SimState>,
    /// `Ē` driving the segment that ends at / starts from each sample. The
    /// two differ only at the exit sample, where the field switches off.
    drive: Vec<(f64, f64)>,
    events: Vec<Event>,
    outcome: Outcome,
}

#[derive(Serialize)]
struct EventRecord {
    kind: &'static str,
    tau: f64,
    t: f64,
    x: f64,
    v: f64,
    #[serde(rename = "A")]
    a: f64,
}

impl Worldline {
    pub(super) fn start(entry: SimState, ebar: f64) -> Self {
        Worldline {
            samples: vec![entry],
            drive: vec![(ebar, ebar)],
            events: vec![Event { kind: EventKind::Entry, state: entry }],
            outcome: Outcome::HorizonCap,
        }
    }

    pub(super) fn push_sample(&mut self, s: SimState, ebar_in: f64, ebar_out: f64) {
        self.samples.push(s);
        self.drive.push((ebar_in, ebar_out));
    }

    pub(super) fn push_event(&mut self, kind: EventKind) {
        let state = *self.samples.last().expect("worldline always has an entry sample");
        self.events.push(Event { kind, state });
    }

    pub(super) fn finish(&mut self) {
        self.outcome = if self.event(EventKind::CollisionGuard).is_some() {
            Outcome::CollisionGuard
        } else if self.event(EventKind::Exit).is_some() {
            Outcome::TurnedAndEscaped
        } else {
            Outcome::HorizonCap
        };
    }

    pub fn samples(&self) -> &[SimState] {
        &self.samples
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn outcome(&self) -> Outcome {
        self.outcome
    }

    pub fn event(&self, kind: EventKind) -> Option<&Event> {
        self.events.iter().find(|e| e.kind == kind)
    }

    /// Index of the sample recorded for `kind`, if the event happened.
    pub fn event_index(&self, kind: EventKind) -> Option<usize> {
        let ev = self.event(kind)?;
        self.samples.iter().position(|s| s.tau == ev.state.tau)
    }

    /// Samples up to and including the turning point (all samples if no turn).
    pub fn pre_turn(&self) -> &[SimState] {
        match self.event_index(EventKind::Turn) {
            Some(i) => &self.samples[..=i],
            None => &self.samples,
        }
    }

    /// Samples from entry to the exit event, inclusive (all samples if no exit).
    pub fn in_field(&self) -> &[SimState] {
        match self.event_index(EventKind::Exit) {
            Some(i) => &self.samples[..=i],
            None => &self.samples,
        }
    }

    pub fn tau_range(&self) -> (f64, f64) {
        (self.samples[0].tau, self.samples[self.samples.len() - 1].tau)
    }

    /// Segment index `i` with `tau` in `[tau_i, tau_{i+1}]`.
    pub(crate) fn segment(&self, tau: f64) -> Result<usize> {
        let (lo, hi) = self.tau_range();
        if !(tau >= lo && tau <= hi) {
            return Err(Error::domain(format!(
                "tau = {tau} outside the sampled range [{lo}, {hi}]"
            )));
        }
        let n = self.samples.len();
        if n < 2 {
            return Ok(0);
        }
        let idx = self.samples.partition_point(|s| s.tau <= tau);
        Ok(idx.saturating_sub(1).min(n - 2))
    }

    /// Hermite interpolation between stored samples: quintic for `t`, `x`
    /// and `θ` (whose first two derivatives follow from the state), cubic for `A`.
    pub fn state_at(&self, tau: f64) -> Result<SimState> {
        let i = self.segment(tau)?;
        if self.samples.len() < 2 {
            return Ok(self.samples[0]);
        }
        Ok(self.interpolate(i, tau))
    }

    pub(crate) fn interpolate(&self, i: usize, tau: f64) -> SimState {
        let (p, q) = (&self.samples[i], &self.samples[i + 1]);
        let h = q.tau - p.tau;
        if h <= 0.0 {
            return *q;
        }
        let s = ((tau - p.tau) / h).clamp(0.0, 1.0);
        let e0 = self.drive[i].1;
        let e1 = self.drive[i + 1].0;

        let (s2, s3) = (s * s, s * s * s);
        let (s4, s5) = (s3 * s, s3 * s2);
        let b0 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
        let b1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
        let b2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
        let b3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
        let b4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
        let b5 = 0.5 * s3 - s4 + 0.5 * s5;
        let quintic = |v0: f64, d0: f64, dd0: f64, v1: f64, d1: f64, dd1: f64| {
            b0 * v0 + b1 * h * d0 + b2 * h * h * dd0 + b3 * v1 + b4 * h * d1 + b5 * h * h * dd1
        };

        let (ch0, sh0) = (p.theta.cosh(), p.theta.sinh());
        let (ch1, sh1) = (q.theta.cosh(), q.theta.sinh());
        let (da0, da1) = (p.a + e0, q.a + e1);

        let t = quintic(p.t, ch0, p.a * sh0, q.t, ch1, q.a * sh1);
        let x = quintic(p.x, sh0, p.a * ch0, q.x, sh1, q.a * ch1);
        let theta = quintic(p.theta, p.a, da0, q.theta, q.a, da1);

        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let a = h00 * p.a + h10 * h * da0 + h01 * q.a + h11 * h * da1;

        SimState { tau, t, x, theta, a }
    }

    /// First time the worldline reaches `x_target` moving rightward,
    /// located on the interpolant to `1e-13` in `τ`.
    pub fn first_crossing(&self, x_target: f64) -> Option<SimState> {
        let i = self
            .samples
            .windows(2)
            .position(|w| w[0].x < x_target && w[1].x >= x_target)?;
        let (mut lo, mut hi) = (self.samples[i].tau, self.samples[i + 1].tau);
        if self.samples[i + 1].x == x_target {
            return Some(self.samples[i + 1]);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.interpolate(i, mid).x < x_target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * hi.max(1.0) {
                break;
            }
        }
        Some(self.interpolate(i, hi))
    }

    /// Least-squares slope of `ln|A|` against `τ` over post-exit samples.
    ///
    /// In vacuum `dA/dτ = A`, so the exact value is 1.
    pub fn fit_runaway_rate(&self) -> Result<f64> {
        let exit = self.event_index(EventKind::Exit).ok_or(Error::MissingEvent("Exit"))?;
        let post = &self.samples[exit..];
        if post.len() < 11 {
            return Err(Error::InsufficientSamples(format!(
                "{} post-exit samples, need at least 10",
                post.len() - 1
            )));
        }
        let n = post.len() as f64;
        let mean_tau = post.iter().map(|s| s.tau).sum::<f64>() / n;
        let mean_ln = post.iter().map(|s| s.a.abs().ln()).sum::<f64>() / n;
        let (mut sxy, mut sxx) = (0.0, 0.0);
        for s in post {
            let dx = s.tau - mean_tau;
            sxy += dx * (s.a.abs().ln() - mean_ln);
            sxx += dx * dx;
        }
        Ok(sxy / sxx)
    }

    /// `A(τ_exit + Δ) / A(τ_exit)` from the interpolant.
    pub fn post_exit_ratio(&self, delta: f64) -> Result<f64> {
        let exit = self.event(EventKind::Exit).ok_or(Error::MissingEvent("Exit"))?;
        let later = self.state_at(exit.state.tau + delta)?;
        Ok(later.a / exit.state.a)
    }

    /// CSV with header `tau,t,x,v,theta,A,Ac,Ebar`, one row per sample.
    pub fn to_csv(&self, field: &impl ScalarField) -> String {
        let mut out = String::from("tau,t,x,v,theta,A,Ac,Ebar\n");
        for s in &self.samples {
            let ebar = field.scalar_field(s.x).unwrap_or(f64::NAN);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                sci(s.tau),
                sci(s.t),
                sci(s.x),
                sci(s.v()),
                sci(s.theta),
                sci(s.a),
                sci(s.coord_accel()),
                sci(ebar)
            );
        }
        out
    }

    /// Events as a JSON list of `{kind, tau, t, x, v, A}`.
    pub fn events_json(&self) -> String {
        let records: Vec<EventRecord> = self
            .events
            .iter()
            .map(|e| EventRecord {
                kind: e.kind.name(),
                tau: e.state.tau,
                t: e.state.t,
                x: e.state.x,
                v: e.state.v(),
                a: e.state.a,
            })
            .collect();
        serde_json::to_string_pretty(&records).expect("event records serialize")
    }
}
