//! A tabulated (piecewise-linear) field profile instead of Coulomb.

use radial_ld::bounds::theorem1_max_velocity;
use radial_ld::{integrate, EventKind, FieldModel, Profile, SimConfig};

const PROFILE: &str = "\
# r   magnitude
0.5   4.0
1.0   2.0
2.0   0.8
4.0   0.3
8.0   0.1
";

fn main() -> Result<(), radial_ld::Error> {
    let field = FieldModel::Tabulated(Profile::parse(PROFILE)?);
    let check = field.validate_theorem1_hypotheses();
    println!("cutoff r0 = {}, hypotheses hold: {}", field.r0(), check.satisfied);
    if !check.diagnostic.is_empty() {
        println!("  {}", check.diagnostic);
    }
    println!("impulse over the whole field: {:.6}", field.field_impulse(-field.r0(), -0.5)?);

    let t = theorem1_max_velocity(&field, 1.0)?;
    println!("guaranteed to turn outside r1 = 1 for v0 < {:.6}", t.v0_max);

    let wl = integrate(&SimConfig::new(field, 0.5 * t.v0_max)?)?;
    let turn = wl.event(EventKind::Turn).expect("turns").state;
    println!("v0 = {:.6}: {} with turn at x = {:.6}", 0.5 * t.v0_max, wl.outcome().name(), turn.x);
    Ok(())
}
