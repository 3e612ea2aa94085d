//! Compute a guaranteed configuration, then simulate it and see the turn
//! happen before the electron reaches -r1.

use radial_ld::bounds::{theorem1_max_velocity, theorem2_min_cutoff};
use radial_ld::{integrate, EventKind, FieldModel, SimConfig};

fn turn_x(field: FieldModel, v0: f64, r1: f64) -> Result<f64, radial_ld::Error> {
    let wl = integrate(&SimConfig::new(field, v0)?.with_r1(r1))?;
    assert!(wl.event(EventKind::ReachR1).is_none());
    Ok(wl.event(EventKind::Turn).expect("turns").state.x)
}

fn main() -> Result<(), radial_ld::Error> {
    let (q2, r0, r1) = (1.0, 20.0, 4.0);
    let field = FieldModel::cutoff_coulomb(q2, r0)?;
    let v0 = 0.9 * theorem1_max_velocity(&field, r1)?.v0_max;
    println!("r0 = {r0}, r1 = {r1}: entering at v0 = {v0:.6} turns at x = {:.6}", turn_x(field, v0, r1)?);

    let (v0, r1) = (0.1, 1.0);
    let r0 = theorem2_min_cutoff(v0, r1, q2)?;
    let field = FieldModel::cutoff_coulomb(q2, r0)?;
    println!("v0 = {v0}, r1 = {r1}: cutoff r0 = {r0:.6} turns at x = {:.6}", turn_x(field, v0, r1)?);
    Ok(())
}
