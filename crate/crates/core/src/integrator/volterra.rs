//! Integral form of the acceleration, used as an oracle for the ODE path.
//!
//! With `A(0) = 0` the acceleration equation integrates to
//! `A(τ) = e^τ ∫_0^τ e^{-τ'} Ē(x(τ')) dτ'`. Only the stored positions enter
//! here; the stored accelerations are never read.

use super::Worldline;
use crate::error::Result;
use crate::field::ScalarField;

// 8-point Gauss-Legendre on [-1, 1].
const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `x` at `tau` on segment `i`, by quintic Hermite interpolation of position.
fn position(wl: &Worldline, i: usize, tau: f64) -> f64 {
    wl.interpolate(i, tau).x
}

/// `∫ e^{-τ'} Ē(x(τ')) dτ'` over `[a, b]` inside segment `i`.
fn segment_integral(wl: &Worldline, field: &impl ScalarField, i: usize, a: f64, b: f64) -> Result<f64> {
    if b <= a {
        return Ok(0.0);
    }
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (node, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let tau = mid + half * node;
        let ebar = field.scalar_field(position(wl, i, tau))?;
        sum += w * (-tau).exp() * ebar;
    }
    Ok(half * sum)
}

/// Evaluates the integral form at a single proper time.
pub fn volterra_accel(wl: &Worldline, field: &impl ScalarField, tau: f64) -> Result<f64> {
    let seg = wl.segment(tau)?;
    let samples = wl.samples();
    if samples.len() < 2 {
        return Ok(0.0);
    }
    let mut integral = 0.0;
    for i in 0..seg {
        integral += segment_integral(wl, field, i, samples[i].tau, samples[i + 1].tau)?;
    }
    integral += segment_integral(wl, field, seg, samples[seg].tau, tau)?;
    Ok(tau.exp() * integral)
}

/// The integral form evaluated at every stored sample, in one pass.
pub fn volterra_profile(wl: &Worldline, field: &impl ScalarField) -> Result<Vec<f64>> {
    let samples = wl.samples();
    let mut out = Vec::with_capacity(samples.len());
    let mut integral = 0.0;
    out.push(0.0);
    for i in 0..samples.len().saturating_sub(1) {
        integral += segment_integral(wl, field, i, samples[i].tau, samples[i + 1].tau)?;
        out.push(samples[i + 1].tau.exp() * integral);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldModel;
    use crate::integrator::{integrate, SimConfig};

    #[test]
    fn zero_at_entry_and_in_zero_field() {
        let zero = FieldModel::tabulated(vec![(1.0, 0.0), (100.0, 0.0)]).unwrap();
        let wl = integrate(&SimConfig::new(zero.clone(), 0.2).unwrap()).unwrap();
        assert_eq!(volterra_accel(&wl, &zero, 0.0).unwrap(), 0.0);
        for tau in [0.5, 3.0, 20.0] {
            assert_eq!(volterra_accel(&wl, &zero, tau).unwrap(), 0.0);
        }
    }

    #[test]
    fn strictly_negative_in_coulomb_field() {
        let f = FieldModel::cutoff_coulomb(1.0, 10.0).unwrap();
        let wl = integrate(&SimConfig::new(f.clone(), 0.05).unwrap()).unwrap();
        let (_, end) = wl.tau_range();
        for k in 1..20 {
            let tau = end * k as f64 / 20.0;
            assert!(volterra_accel(&wl, &f, tau).unwrap() < 0.0);
        }
        assert!(volterra_accel(&wl, &f, end + 1.0).is_err());
    }

    #[test]
    fn profile_matches_pointwise() {
        let f = FieldModel::cutoff_coulomb(2.0, 2.0).unwrap();
        let wl = integrate(&SimConfig::new(f.clone(), 0.3).unwrap()).unwrap();
        let prof = volterra_profile(&wl, &f).unwrap();
        for i in [1, wl.samples().len() / 2, wl.samples().len() - 1] {
            let tau = wl.samples()[i].tau;
            let point = volterra_accel(&wl, &f, tau).unwrap();
            assert!((prof[i] - point).abs() <= 1e-12 * point.abs());
        }
    }
}
