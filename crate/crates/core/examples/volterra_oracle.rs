//! Cross-checks the integrated acceleration against the integral form
//! A(τ) = e^τ ∫ e^{-τ'} Ē(x(τ')) dτ', which only uses the positions.

use radial_ld::integrator::volterra_profile;
use radial_ld::{integrate, FieldModel, SimConfig};

fn main() -> Result<(), radial_ld::Error> {
    for (q2, r0, v0) in [(1.0, 10.0, 0.1), (0.5, 2.0, 0.01), (2.0, 100.0, 0.5)] {
        let field = FieldModel::cutoff_coulomb(q2, r0)?;
        let wl = integrate(&SimConfig::new(field.clone(), v0)?)?;
        let oracle = volterra_profile(&wl, &field)?;
        let inside = wl.in_field();
        let worst = inside
            .iter()
            .zip(&oracle)
            .skip(1)
            .map(|(s, a)| (s.a - a).abs() / a.abs())
            .fold(0.0, f64::max);
        println!("Q2={q2:<4} r0={r0:<6} v0={v0:<5} {} in-field samples, max relative gap {worst:.2e}", inside.len());
    }
    Ok(())
}
