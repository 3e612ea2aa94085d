//! One worldline in a cutoff Coulomb field: events, turning point, CSV.
//!
//!     cargo run --example simulate_coulomb -- [v0] [r0] [Q2]

use radial_ld::{integrate, FieldModel, SimConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let v0 = args.first().copied().unwrap_or(0.1);
    let r0 = args.get(1).copied().unwrap_or(10.0);
    let q2 = args.get(2).copied().unwrap_or(1.0);

    let field = FieldModel::cutoff_coulomb(q2, r0)?;
    let wl = integrate(&SimConfig::new(field.clone(), v0)?)?;

    println!("outcome: {}", wl.outcome().name());
    println!("{:<16} {:>12} {:>14} {:>14} {:>14}", "event", "tau", "t", "x", "A");
    for e in wl.events() {
        let s = e.state;
        println!("{:<16} {:>12.6} {:>14.6e} {:>14.6e} {:>14.6e}", e.kind.name(), s.tau, s.t, s.x, s.a);
    }
    println!("{} samples", wl.samples().len());

    let path = std::env::temp_dir().join("simulate_coulomb.csv");
    std::fs::write(&path, wl.to_csv(&field))?;
    println!("worldline written to {}", path.display());
    Ok(())
}
