//! The verification grid: every guarantee that can be checked on simulated
//! worldlines, evaluated as named predicates per case.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    check_bounds_on_worldline, theorem1_max_velocity, theorem2_min_cutoff, BoundKind, BoundQuery,
};
use crate::error::Result;
use crate::field::{FieldModel, ScalarField};
use crate::integrator::{integrate_in, volterra_profile, EventKind, Outcome, SimConfig, Worldline};

pub const BOUND_TOL: f64 = 1e-8;
pub const ORACLE_TOL: f64 = 1e-6;
pub const RATE_TOL: f64 = 1e-6;
pub const MONOTONE_TOL: f64 = 1e-12;

pub const GRID_Q2: [f64; 3] = [0.5, 1.0, 2.0];
pub const GRID_R0: [f64; 3] = [2.0, 10.0, 100.0];
pub const GRID_V0: [f64; 4] = [0.01, 0.1, 0.5, 0.9];
pub const THEOREM2_V0: [f64; 3] = [0.05, 0.1, 0.3];
pub const THEOREM2_R1: [f64; 2] = [0.5, 1.0];
pub const THEOREM1_SEED: u64 = 0x1d_5eed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaseParameters {
    #[serde(rename = "Q2")]
    pub q2: f64,
    pub r0: f64,
    pub v0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRecord {
    pub group: &'static str,
    pub parameters: CaseParameters,
    pub outcome: Option<&'static str>,
    pub x_turn: Option<f64>,
    pub runaway_rate: Option<f64>,
    pub bound_slacks: IndexMap<&'static str, f64>,
    pub predicates: IndexMap<&'static str, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub numerical_failure: bool,
    pub passed: bool,
}

impl CaseRecord {
    fn new(group: &'static str, parameters: CaseParameters) -> Self {
        CaseRecord {
            group,
            parameters,
            outcome: None,
            x_turn: None,
            runaway_rate: None,
            bound_slacks: IndexMap::new(),
            predicates: IndexMap::new(),
            error: None,
            numerical_failure: false,
            passed: false,
        }
    }

    fn fail_with(mut self, err: crate::Error) -> Self {
        self.numerical_failure = err.is_numerical();
        self.error = Some(err.to_string());
        self.passed = false;
        self
    }

    fn seal(mut self) -> Self {
        self.passed = self.error.is_none()
            && !self.predicates.is_empty()
            && self.predicates.values().all(|&ok| ok);
        self
    }

    fn fill_run(&mut self, wl: &Worldline) {
        self.outcome = Some(wl.outcome().name());
        self.x_turn = wl.event(EventKind::Turn).map(|e| e.state.x);
        self.runaway_rate = wl.fit_runaway_rate().ok();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub cases: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub cases: Vec<CaseRecord>,
    pub summary: Summary,
}

impl VerifyReport {
    fn from_cases(cases: Vec<CaseRecord>) -> Self {
        let failures = cases.iter().filter(|c| !c.passed).count();
        VerifyReport { summary: Summary { cases: cases.len(), failures }, cases }
    }

    pub fn has_numerical_failure(&self) -> bool {
        self.cases.iter().any(|c| c.numerical_failure)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// `|A|` never shrinks by more than `MONOTONE_TOL` relative between samples.
pub fn accel_monotone(wl: &Worldline) -> bool {
    wl.samples().windows(2).all(|w| w[1].a.abs() >= w[0].a.abs() * (1.0 - MONOTONE_TOL))
}

/// `A < 0` on every sample after entry.
pub fn accel_negative(wl: &Worldline) -> bool {
    wl.samples()[1..].iter().all(|s| s.a < 0.0)
}

/// Largest relative gap between the ODE acceleration and the integral form
/// over the in-field samples.
pub fn oracle_gap(wl: &Worldline, field: &impl ScalarField) -> Result<f64> {
    let prof = volterra_profile(wl, field)?;
    let n = wl.in_field().len();
    Ok(wl.samples()[..n]
        .iter()
        .zip(&prof)
        .map(|(s, &v)| (s.a - v).abs() / v.abs().max(1e-12))
        .fold(0.0, f64::max))
}

/// Runs one grid case with `dynamics` driving the motion and `model`
/// supplying the analytic side (bounds, oracle).
pub fn grid_case(model: &FieldModel, dynamics: &impl ScalarField, v0: f64) -> CaseRecord {
    let params = CaseParameters { q2: model.q2().unwrap_or(f64::NAN), r0: model.r0(), v0, r1: None };
    let rec = CaseRecord::new("grid", params);
    let wl = match SimConfig::new(model.clone(), v0).and_then(|c| integrate_in(dynamics, &c)) {
        Ok(wl) => wl,
        Err(e) => return rec.fail_with(e),
    };
    let mut rec = rec;
    rec.fill_run(&wl);
    let r0 = model.r0();

    let p = &mut rec.predicates;
    p.insert("accel_negative", accel_negative(&wl));
    p.insert("accel_monotone", accel_monotone(&wl));
    p.insert(
        "turned_and_escaped",
        wl.outcome() == Outcome::TurnedAndEscaped
            && rec.x_turn.is_some_and(|x| x > -r0 && x < 0.0),
    );
    p.insert(
        "pre_turn_deceleration",
        wl.pre_turn().windows(2).all(|w| w[1].theta < w[0].theta),
    );

    let reports = BoundQuery::crossing_checkpoint(model, &wl, v0, None)
        .and_then(|q| check_bounds_on_worldline(&wl, model, &q));
    let slack = |kind: BoundKind| {
        reports
            .as_ref()
            .ok()
            .and_then(|r| r.iter().find(|b| b.bound_kind == kind))
            .map(|b| b.slack)
    };
    let slack_ok = |name: &'static str, kind: BoundKind, rec_slacks: &mut IndexMap<&'static str, f64>| {
        let s = slack(kind);
        if let Some(s) = s {
            rec_slacks.insert(name, s);
        }
        s.is_some_and(|s| s >= -BOUND_TOL)
    };
    let l2p = slack_ok("lemma2_proper", BoundKind::Lemma2Proper, &mut rec.bound_slacks);
    let l2c = slack_ok("lemma2_coord", BoundKind::Lemma2Coord, &mut rec.bound_slacks);
    let l3 = slack_ok("lemma3_pointwise", BoundKind::Lemma3Pointwise, &mut rec.bound_slacks);
    let p = &mut rec.predicates;
    p.insert("lemma2_bounds", l2p && l2c);
    p.insert("lemma3_bound", l3);

    p.insert(
        "oracle_equivalence",
        oracle_gap(&wl, model).is_ok_and(|g| g <= ORACLE_TOL),
    );
    p.insert(
        "runaway_rate",
        rec.runaway_rate.is_some_and(|r| (r - 1.0).abs() <= RATE_TOL),
    );
    p.insert(
        "post_exit_ratio",
        wl.post_exit_ratio(1.0).is_ok_and(|r| (r - 1f64.exp()).abs() <= RATE_TOL),
    );
    rec.seal()
}

fn guarantee_case(group: &'static str, model: &FieldModel, v0: f64, r1: f64) -> CaseRecord {
    let params = CaseParameters { q2: model.q2().unwrap_or(f64::NAN), r0: model.r0(), v0, r1: Some(r1) };
    let rec = CaseRecord::new(group, params);
    let wl = match SimConfig::new(model.clone(), v0).map(|c| c.with_r1(r1)).and_then(|c| integrate_in(model, &c)) {
        Ok(wl) => wl,
        Err(e) => return rec.fail_with(e),
    };
    let mut rec = rec;
    rec.fill_run(&wl);
    rec.predicates.insert(
        "turned_before_r1",
        rec.x_turn.is_some_and(|x| x < -r1) && wl.event(EventKind::ReachR1).is_none(),
    );
    rec.predicates.insert("turned_and_escaped", wl.outcome() == Outcome::TurnedAndEscaped);
    rec.seal()
}

/// Simulates at `0.9 v0*` with `v0*` from [`theorem1_max_velocity`].
pub fn theorem1_case(q2: f64, r0: f64, r1: f64) -> CaseRecord {
    let model = match FieldModel::cutoff_coulomb(q2, r0) {
        Ok(m) => m,
        Err(e) => {
            return CaseRecord::new("theorem1", CaseParameters { q2, r0, v0: f64::NAN, r1: Some(r1) })
                .fail_with(e)
        }
    };
    match theorem1_max_velocity(&model, r1) {
        Ok(t) => guarantee_case("theorem1", &model, 0.9 * t.v0_max, r1),
        Err(e) => CaseRecord::new("theorem1", CaseParameters { q2, r0, v0: f64::NAN, r1: Some(r1) })
            .fail_with(e),
    }
}

/// Simulates with the cutoff from [`theorem2_min_cutoff`].
pub fn theorem2_case(q2: f64, v0: f64, r1: f64) -> CaseRecord {
    match theorem2_min_cutoff(v0, r1, q2).and_then(|r0| FieldModel::cutoff_coulomb(q2, r0)) {
        Ok(model) => guarantee_case("theorem2", &model, v0, r1),
        Err(e) => CaseRecord::new("theorem2", CaseParameters { q2, r0: f64::NAN, v0, r1: Some(r1) })
            .fail_with(e),
    }
}

/// Deterministic `(Q², r0, r1)` triples for the small-speed guarantee.
pub fn theorem1_triples(n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(THEOREM1_SEED);
    (0..n)
        .map(|_| {
            let q2 = rng.gen_range(0.5..2.0);
            let r0 = 10f64.powf(rng.gen_range(2f64.log10()..2.0));
            let r1 = r0 * rng.gen_range(0.05..0.9);
            (q2, r0, r1)
        })
        .collect()
}

enum Job {
    Grid(f64, f64, f64),
    Theorem1(f64, f64, f64),
    Theorem2(f64, f64, f64),
}

fn jobs(quick: bool) -> Vec<Job> {
    let mut out = Vec::new();
    let (q2s, r0s, v0s): (&[f64], &[f64], &[f64]) = if quick {
        (&[1.0], &[2.0, 10.0], &[0.1, 0.5])
    } else {
        (&GRID_Q2, &GRID_R0, &GRID_V0)
    };
    for &q2 in q2s {
        for &r0 in r0s {
            for &v0 in v0s {
                out.push(Job::Grid(q2, r0, v0));
            }
        }
    }
    let n1 = if quick { 3 } else { 10 };
    out.extend(theorem1_triples(n1).into_iter().map(|(q2, r0, r1)| Job::Theorem1(q2, r0, r1)));
    let v0s: &[f64] = if quick { &[0.1] } else { &THEOREM2_V0 };
    for &v0 in v0s {
        for &r1 in &THEOREM2_R1 {
            out.push(Job::Theorem2(1.0, v0, r1));
        }
    }
    out
}

/// Runs the canonical grid (or its quick subset). Case order is fixed.
pub fn run_verification(quick: bool) -> VerifyReport {
    let cases = jobs(quick)
        .into_par_iter()
        .map(|job| match job {
            Job::Grid(q2, r0, v0) => match FieldModel::cutoff_coulomb(q2, r0) {
                Ok(m) => grid_case(&m, &m, v0),
                Err(e) => CaseRecord::new("grid", CaseParameters { q2, r0, v0, r1: None }).fail_with(e),
            },
            Job::Theorem1(q2, r0, r1) => theorem1_case(q2, r0, r1),
            Job::Theorem2(q2, v0, r1) => theorem2_case(q2, v0, r1),
        })
        .collect();
    VerifyReport::from_cases(cases)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A field pointing the wrong way: `Ē > 0`.
    struct Negated(FieldModel);

    impl ScalarField for Negated {
        fn cutoff_radius(&self) -> f64 {
            self.0.cutoff_radius()
        }
        fn scalar_field(&self, x: f64) -> Result<f64> {
            Ok(-self.0.scalar_field(x)?)
        }
        fn interior_field(&self, x: f64) -> Result<f64> {
            Ok(-self.0.interior_field(x)?)
        }
    }

    #[test]
    fn grid_case_passes_for_coulomb() {
        let m = FieldModel::cutoff_coulomb(1.0, 10.0).unwrap();
        let rec = grid_case(&m, &m, 0.1);
        assert!(rec.passed, "{rec:?}");
        assert_eq!(rec.predicates.len(), 9);
    }

    #[test]
    fn negated_field_breaks_predicates() {
        let m = FieldModel::cutoff_coulomb(1.0, 10.0).unwrap();
        let rec = grid_case(&m, &Negated(m.clone()), 0.1);
        assert!(!rec.passed);
        assert_eq!(rec.predicates.get("accel_negative"), Some(&false));
        assert_eq!(rec.predicates.get("turned_and_escaped"), Some(&false));
        let report = VerifyReport::from_cases(vec![rec, grid_case(&m, &m, 0.5)]);
        assert_eq!(report.summary, Summary { cases: 2, failures: 1 });
    }

    #[test]
    fn triples_are_deterministic_and_in_range() {
        let a = theorem1_triples(10);
        assert_eq!(a, theorem1_triples(10));
        for (q2, r0, r1) in a {
            assert!((0.5..2.0).contains(&q2));
            assert!((2.0..=100.0).contains(&r0));
            assert!(r1 > 0.0 && r1 < r0);
        }
    }
}
