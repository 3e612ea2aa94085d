//! After the electron leaves the field its acceleration grows like e^τ.

use radial_ld::{integrate, EventKind, FieldModel, SimConfig};

fn main() -> Result<(), radial_ld::Error> {
    let field = FieldModel::cutoff_coulomb(1.0, 2.0)?;
    let wl = integrate(&SimConfig::new(field, 0.3)?)?;
    let exit = wl.event(EventKind::Exit).expect("run leaves the field").state;
    let last = wl.samples().last().unwrap();

    println!("exit at tau = {:.6}, A = {:.6e}", exit.tau, exit.a);
    println!("stopped at tau = {:.6} by {:?}, A = {:.6e}", last.tau, wl.events().last().map(|e| e.kind), last.a);
    println!("fitted d ln|A| / dtau = {:.12}", wl.fit_runaway_rate()?);
    println!("A(tau + 1) / A(tau)   = {:.12} (e = {:.12})", wl.post_exit_ratio(1.0)?, std::f64::consts::E);
    Ok(())
}
