//! Rapidity, four-velocity and the proper/coordinate acceleration relation.

use radial_ld::kinematics::{
    coord_accel_from_proper, proper_accel_from_coord, rapidity_from_velocity, KinematicState,
};

fn main() -> Result<(), radial_ld::Error> {
    println!("{:>6} {:>12} {:>12} {:>10} {:>10} {:>10}", "v", "theta", "gamma", "u.u", "w.w", "u.w");
    for v in [0.0, 0.1, 0.5, 0.9, 0.999] {
        let s = KinematicState::from_velocity(v)?;
        println!(
            "{:>6} {:>12.8} {:>12.6} {:>10.2e} {:>10.2e} {:>10.2e}",
            v,
            rapidity_from_velocity(v)?,
            s.gamma,
            s.u.dot(s.u) - 1.0,
            s.w.dot(s.w) + 1.0,
            s.u.dot(s.w)
        );
    }

    let (a, v) = (2.0, 0.6);
    let ac = coord_accel_from_proper(a, v)?;
    println!("A = {a} at v = {v}: A_c = {ac} (back: {})", proper_accel_from_coord(ac, v)?);
    Ok(())
}
