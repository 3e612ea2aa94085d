//! Forward integration of the scalar Lorentz-Dirac system in proper time.
//!
//! The state is `(t, x, θ, A)` with
//!
//! ```text
//! dt/dτ = cosh θ,   dx/dτ = sinh θ,   dθ/dτ = A,   dA/dτ = A + Ē(x)
//! ```
//!
//! starting from `τ = t = 0`, `x = -r0`, `θ = atanh v0`, `A = 0`. The last
//! equation has the growing mode `e^τ`, so every solution eventually runs
//! away; the integrator follows it past the exit from the field and then
//! stops at a cap.

mod dopri;
mod volterra;
mod worldline;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldModel, ScalarField};
use crate::kinematics;
use dopri::Vec4;

pub use volterra::{volterra_accel, volterra_profile};
pub use worldline::Worldline;

/// One sample of a worldline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimState {
    pub tau: f64,
    pub t: f64,
    pub x: f64,
    pub theta: f64,
    #[serde(rename = "A")]
    pub a: f64,
}

impl SimState {
    fn from_vec(tau: f64, y: &Vec4) -> Self {
        SimState { tau, t: y[0], x: y[1], theta: y[2], a: y[3] }
    }

    fn to_vec(self) -> Vec4 {
        [self.t, self.x, self.theta, self.a]
    }

    pub fn v(&self) -> f64 {
        kinematics::velocity_from_rapidity(self.theta)
    }

    pub fn gamma(&self) -> f64 {
        self.theta.cosh()
    }

    /// Coordinate acceleration `dv/dt`.
    pub fn coord_accel(&self) -> f64 {
        kinematics::coord_accel_from_rapidity(self.a, self.theta)
    }
}

/// Integration settings. The initial state is fixed by `field` and `v0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub field: FieldModel,
    pub v0: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub tau_max: f64,
    /// Stop once `|A|` exceeds this.
    pub a_max: f64,
    /// Stop once `|θ|` exceeds this; `cosh θ` overflows f64 near 710.
    pub theta_max: f64,
    /// Guard radius as a fraction of `r0`.
    pub collision_eps: f64,
    /// Proper time to keep following the runaway after leaving the field.
    pub post_exit_tau: f64,
    /// Optional radius whose first crossing is recorded as a `ReachR1` event.
    pub r1: Option<f64>,
    pub max_steps: usize,
}

impl SimConfig {
    pub const DEFAULT_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_ABS_TOL: f64 = 1e-12;
    pub const DEFAULT_TAU_MAX: f64 = 50.0;
    pub const DEFAULT_A_MAX: f64 = 1e12;
    pub const DEFAULT_THETA_MAX: f64 = 200.0;
    pub const DEFAULT_COLLISION_EPS: f64 = 1e-6;
    pub const DEFAULT_POST_EXIT_TAU: f64 = 10.0;

    pub fn new(field: FieldModel, v0: f64) -> Result<Self> {
        let cfg = SimConfig {
            field,
            v0,
            rel_tol: Self::DEFAULT_REL_TOL,
            abs_tol: Self::DEFAULT_ABS_TOL,
            tau_max: Self::DEFAULT_TAU_MAX,
            a_max: Self::DEFAULT_A_MAX,
            theta_max: Self::DEFAULT_THETA_MAX,
            collision_eps: Self::DEFAULT_COLLISION_EPS,
            post_exit_tau: Self::DEFAULT_POST_EXIT_TAU,
            r1: None,
            max_steps: 5_000_000,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_r1(mut self, r1: f64) -> Self {
        self.r1 = Some(r1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.v0 > 0.0 && self.v0 < 1.0) {
            return Err(Error::config(format!("v0 = {} must lie in (0, 1)", self.v0)));
        }
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("tau_max", self.tau_max),
            ("a_max", self.a_max),
            ("theta_max", self.theta_max),
            ("collision_eps", self.collision_eps),
            ("post_exit_tau", self.post_exit_tau),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::config(format!("{name} = {value} must be positive")));
            }
        }
        if self.collision_eps >= 1.0 {
            return Err(Error::config("collision_eps must be below 1"));
        }
        if let Some(r1) = self.r1 {
            if !(r1 > 0.0 && r1 < self.field.r0()) {
                return Err(Error::config(format!(
                    "r1 = {r1} must lie in (0, r0 = {})",
                    self.field.r0()
                )));
            }
        }
        if self.max_steps == 0 {
            return Err(Error::config("max_steps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EventKind {
    Entry,
    Turn,
    ReachR1,
    Exit,
    CollisionGuard,
    RunawayCap,
    HorizonCap,
}

impl EventKind {
    pub fn name(self) -> &'static str {
        match self {
            EventKind::Entry => "Entry",
            EventKind::Turn => "Turn",
            EventKind::ReachR1 => "ReachR1",
            EventKind::Exit => "Exit",
            EventKind::CollisionGuard => "CollisionGuard",
            EventKind::RunawayCap => "RunawayCap",
            EventKind::HorizonCap => "HorizonCap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Event {
    pub kind: EventKind,
    pub state: SimState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    TurnedAndEscaped,
    CollisionGuard,
    HorizonCap,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::TurnedAndEscaped => "TurnedAndEscaped",
            Outcome::CollisionGuard => "CollisionGuard",
            Outcome::HorizonCap => "HorizonCap",
        }
    }
}

/// Which right-hand side is active: inside the field or after leaving it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    Inside,
    Vacuum,
}

/// Right-hand side of the system for a state with the given field value.
fn rates(y: &Vec4, ebar: f64) -> Vec4 {
    [y[2].cosh(), y[2].sinh(), y[3], y[3] + ebar]
}

/// `(dt/dτ, dx/dτ, dθ/dτ, dA/dτ)` at `state`, using the piecewise field.
pub fn derivative(state: &SimState, field: &impl ScalarField) -> Result<[f64; 4]> {
    let ebar = field.scalar_field(state.x)?;
    Ok(rates(&state.to_vec(), ebar))
}

struct Rhs<'a, F> {
    field: &'a F,
    phase: Phase,
}

impl<F: ScalarField> Rhs<'_, F> {
    fn ebar(&self, x: f64) -> Result<f64> {
        match self.phase {
            Phase::Inside => self.field.interior_field(x),
            Phase::Vacuum => Ok(0.0),
        }
    }

    fn eval(&self, y: &Vec4) -> Result<Vec4> {
        if !y.iter().all(|c| c.is_finite()) {
            return Err(Error::domain("non-finite state"));
        }
        Ok(rates(y, self.ebar(y[1])?))
    }
}

/// A sign-change detector for a crossing event.
#[derive(Debug, Clone, Copy)]
struct Crossing {
    kind: EventKind,
}

struct Detectors {
    r0: f64,
    r1: Option<f64>,
    guard: f64,
    turned: bool,
    reached: bool,
    exited: bool,
}

impl Detectors {
    /// Event function for `kind`; the event fires when it goes from negative to `>= 0`.
    fn g(&self, kind: EventKind, y: &Vec4) -> f64 {
        match kind {
            EventKind::Turn => -y[2],
            EventKind::ReachR1 => y[1] + self.r1.unwrap_or(f64::INFINITY),
            EventKind::Exit => -(y[1] + self.r0),
            EventKind::CollisionGuard => y[1] + self.guard,
            _ => f64::NAN,
        }
    }

    fn armed(&self, phase: Phase) -> Vec<Crossing> {
        let mut out = Vec::with_capacity(4);
        if !self.turned {
            out.push(Crossing { kind: EventKind::Turn });
        }
        if self.r1.is_some() && !self.reached {
            out.push(Crossing { kind: EventKind::ReachR1 });
        }
        if self.turned && !self.exited && phase == Phase::Inside {
            out.push(Crossing { kind: EventKind::Exit });
        }
        out.push(Crossing { kind: EventKind::CollisionGuard });
        out
    }
}

const EVENT_TOL: f64 = 1e-10;
const EVENT_TAU_TOL: f64 = 1e-12;

/// Integrates the worldline for `config.field`.
pub fn integrate(config: &SimConfig) -> Result<Worldline> {
    integrate_in(&config.field, config)
}

/// Integrates with the settings of `config` against an arbitrary field.
///
/// `config.field` only supplies the cutoff radius check in `validate`; the
/// dynamics use `field`.
pub fn integrate_in<F: ScalarField>(field: &F, config: &SimConfig) -> Result<Worldline> {
    config.validate()?;
    let r0 = field.cutoff_radius();
    let theta0 = kinematics::rapidity_from_velocity(config.v0)?;

    let mut rhs = Rhs { field, phase: Phase::Inside };
    let mut det = Detectors {
        r0,
        r1: config.r1,
        guard: config.collision_eps * r0,
        turned: false,
        reached: false,
        exited: false,
    };

    let mut tau = 0.0;
    let mut y: Vec4 = [0.0, -r0, theta0, 0.0];
    let mut dy = rhs.eval(&y)?;

    let mut wl = Worldline::start(SimState::from_vec(tau, &y), dy[3] - y[3]);

    let mut h = 1e-3;
    let mut exit_tau = f64::INFINITY;
    let mut steps = 0usize;

    loop {
        let stop_tau = config.tau_max.min(exit_tau + config.post_exit_tau);
        if tau >= stop_tau {
            if stop_tau >= config.tau_max {
                wl.push_event(EventKind::HorizonCap);
            }
            break;
        }
        steps += 1;
        if steps > config.max_steps {
            return Err(Error::TooManySteps {
                last: SimState::from_vec(tau, &y),
                limit: config.max_steps,
            });
        }

        let remaining = stop_tau - tau;
        let clipped = h >= remaining;
        let h_try = if clipped { remaining } else { h };
        if h_try < 1e-14 * tau.abs().max(1.0) && !clipped {
            return Err(Error::StepUnderflow { last: SimState::from_vec(tau, &y), step: h_try });
        }

        let f = |z: &Vec4| rhs.eval(z);
        let step = match dopri::step(&f, &y, &dy, h_try) {
            Ok(s) => s,
            Err(Error::Domain(_)) => {
                // A stage left the domain (x >= 0 or overflow): retry smaller.
                h = h_try * 0.25;
                continue;
            }
            Err(e) => return Err(e),
        };
        let err = dopri::error_norm(&step.err, &y, &step.y, config.rel_tol, config.abs_tol);
        if !err.is_finite() || err > 1.0 {
            let factor = if err.is_finite() { (0.9 * err.powf(-0.2)).max(0.2) } else { 0.25 };
            h = h_try * factor;
            continue;
        }

        // Accepted. Look for crossings inside the step.
        let mut first: Option<(f64, Vec4, Vec4, EventKind)> = None;
        for c in det.armed(rhs.phase) {
            let g0 = det.g(c.kind, &y);
            let g1 = det.g(c.kind, &step.y);
            if g0 < 0.0 && g1 >= 0.0 {
                let (s, ys, dys) = refine(&rhs, &det, c.kind, &y, &dy, h_try, &step.y, &step.dy)?;
                if first.as_ref().is_none_or(|f| s < f.0) {
                    first = Some((s, ys, dys, c.kind));
                }
            }
        }

        let grow = if err > 0.0 { (0.9 * err.powf(-0.2)).min(5.0) } else { 5.0 };

        if let Some((s, ys, dys, kind)) = first {
            tau += s;
            y = ys;
            dy = dys;
            match kind {
                EventKind::Turn => det.turned = true,
                EventKind::ReachR1 => det.reached = true,
                EventKind::Exit => det.exited = true,
                _ => {}
            }
            let ebar_in = dy[3] - y[3];
            if kind == EventKind::Exit {
                rhs.phase = Phase::Vacuum;
                exit_tau = tau;
                dy = rhs.eval(&y)?;
            }
            let ebar_out = dy[3] - y[3];
            wl.push_sample(SimState::from_vec(tau, &y), ebar_in, ebar_out);
            wl.push_event(kind);
            if kind == EventKind::CollisionGuard {
                break;
            }
            // Keep the step size; the remainder of the step is retried from the event.
        } else {
            tau = if clipped { stop_tau } else { tau + h_try };
            y = step.y;
            dy = step.dy;
            let ebar = dy[3] - y[3];
            wl.push_sample(SimState::from_vec(tau, &y), ebar, ebar);
            h = h_try * grow;
            if clipped {
                // Do not let the clipped step shrink the controller's estimate.
                h = h.max(remaining);
            }
        }

        if y[3].abs() > config.a_max || y[2].abs() > config.theta_max {
            wl.push_event(EventKind::RunawayCap);
            break;
        }
    }

    wl.finish();
    Ok(wl)
}

/// Locates the crossing of event `kind` inside a step of size `h` from `y`
/// by re-stepping from `y`. Returns the step length, state and derivative on
/// the crossed side with `|g| < EVENT_TOL`.
#[allow(clippy::too_many_arguments)]
fn refine<F: ScalarField>(
    rhs: &Rhs<'_, F>,
    det: &Detectors,
    kind: EventKind,
    y: &Vec4,
    dy: &Vec4,
    h: f64,
    y_end: &Vec4,
    dy_end: &Vec4,
) -> Result<(f64, Vec4, Vec4)> {
    let f = |z: &Vec4| rhs.eval(z);
    let eval = |s: f64| -> Result<(Vec4, Vec4)> {
        let st = dopri::step(&f, y, dy, s)?;
        Ok((st.y, st.dy))
    };

    let (mut lo, mut g_lo) = (0.0, det.g(kind, y));
    let (mut hi, mut g_hi) = (h, det.g(kind, y_end));
    let mut best = (h, *y_end, *dy_end);
    if g_hi.abs() < EVENT_TOL {
        return Ok(best);
    }
    // Illinois false position, with a bisection every third iteration.
    let mut side = 0i8;
    for iter in 0..200 {
        let mut s = if iter % 3 == 2 {
            0.5 * (lo + hi)
        } else {
            (lo * g_hi - hi * g_lo) / (g_hi - g_lo)
        };
        if !(s > lo && s < hi) {
            s = 0.5 * (lo + hi);
        }
        let (ys, dys) = eval(s)?;
        let gs = det.g(kind, &ys);
        if gs >= 0.0 {
            hi = s;
            g_hi = gs;
            best = (s, ys, dys);
            if side == 1 {
                g_lo *= 0.5;
            }
            side = 1;
            if gs < EVENT_TOL {
                break;
            }
        } else {
            lo = s;
            g_lo = gs;
            if side == -1 {
                g_hi *= 0.5;
            }
            side = -1;
        }
        if hi - lo <= EVENT_TAU_TOL {
            break;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn derivative_examples() {
        let zero = FieldModel::tabulated(vec![(1.0, 0.0), (50.0, 0.0)]).unwrap();
        let s = SimState { tau: 0.0, t: 0.0, x: -3.0, theta: 0.0, a: 0.0 };
        assert_eq!(derivative(&s, &zero).unwrap(), [1.0, 0.0, 0.0, 0.0]);

        let coulomb = FieldModel::cutoff_coulomb(1.0, 10.0).unwrap();
        let s = SimState { x: -1.0, ..s };
        let d = derivative(&s, &coulomb).unwrap();
        assert_eq!(d[0], 1.0);
        assert_eq!(d[1], 0.0);
        assert_eq!(d[2], 0.0);
        assert_relative_eq!(d[3], -1.0, max_relative = 1e-15);

        let s = SimState { theta: 0.6f64.atanh(), x: -3.0, ..s };
        let d = derivative(&s, &zero).unwrap();
        assert_relative_eq!(d[0], 1.25, max_relative = 1e-14);
        assert_relative_eq!(d[1], 0.75, max_relative = 1e-14);
        assert_eq!(d[2], 0.0);
        assert_eq!(d[3], 0.0);

        assert!(derivative(&SimState { x: 0.5, ..s }, &coulomb).is_err());
    }

    #[test]
    fn config_validation() {
        let f = FieldModel::cutoff_coulomb(1.0, 10.0).unwrap();
        assert!(SimConfig::new(f.clone(), 1.5).is_err());
        assert!(SimConfig::new(f.clone(), 0.0).is_err());
        let mut c = SimConfig::new(f.clone(), 0.1).unwrap();
        c.collision_eps = 1.0;
        assert!(c.validate().is_err());
        let c = SimConfig::new(f, 0.1).unwrap().with_r1(11.0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn coulomb_run_turns_and_escapes() {
        let f = FieldModel::cutoff_coulomb(1.0, 10.0).unwrap();
        let wl = integrate(&SimConfig::new(f, 0.05).unwrap()).unwrap();
        assert_eq!(wl.outcome(), Outcome::TurnedAndEscaped);
        let turn = wl.event(EventKind::Turn).unwrap();
        assert!(turn.state.x > -10.0 && turn.state.x < 0.0);
        assert!(turn.state.theta.abs() < EVENT_TOL);
        let exit = wl.event(EventKind::Exit).unwrap();
        assert!((exit.state.x + 10.0).abs() < EVENT_TOL);
        assert!(exit.state.tau > turn.state.tau);
        assert_eq!(wl.events()[0].kind, EventKind::Entry);
    }

    #[test]
    fn free_motion_in_zero_field() {
        let v0 = 0.3;
        let f = FieldModel::tabulated(vec![(1.0, 0.0), (100.0, 0.0)]).unwrap();
        let wl = integrate(&SimConfig::new(f, v0).unwrap()).unwrap();
        assert_eq!(wl.outcome(), Outcome::HorizonCap);
        assert!(wl.event(EventKind::Turn).is_none());
        let speed = v0 * kinematics::gamma_of(v0).unwrap();
        for s in wl.samples() {
            assert_eq!(s.a, 0.0);
            assert!((s.x - (-100.0 + speed * s.tau)).abs() < 1e-9);
        }
        assert_eq!(wl.samples().last().unwrap().tau, SimConfig::DEFAULT_TAU_MAX);
    }

    #[test]
    fn reach_r1_is_recorded() {
        let f = FieldModel::cutoff_coulomb(0.5, 10.0).unwrap();
        let cfg = SimConfig::new(f, 0.5).unwrap().with_r1(9.5);
        let wl = integrate(&cfg).unwrap();
        let ev = wl.event(EventKind::ReachR1).unwrap();
        assert!((ev.state.x + 9.5).abs() < EVENT_TOL);
    }
}
