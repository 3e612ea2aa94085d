//! Analytic thresholds: the largest guaranteed entry speed for a given r1,
//! the smallest guaranteed cutoff for a given speed, and the acceleration
//! lower bounds at a checkpoint.

use radial_ld::bounds::{
    lemma2_coord_bound, lemma2_proper_bound, lemma3_pointwise_bound, theorem1_max_velocity,
    theorem2_min_cutoff,
};
use radial_ld::FieldModel;

fn main() -> Result<(), radial_ld::Error> {
    println!("largest guaranteed entry speed (Q2 = 1)");
    println!("{:>8} {:>8} {:>14} {:>12}", "r0", "r1", "v0_max", "r2*");
    for r0 in [2.0, 10.0, 100.0] {
        let field = FieldModel::cutoff_coulomb(1.0, r0)?;
        for frac in [0.1, 0.25, 0.5] {
            let t = theorem1_max_velocity(&field, frac * r0)?;
            println!("{:>8} {:>8} {:>14.10} {:>12.6}", r0, frac * r0, t.v0_max, t.r2);
        }
    }

    println!("\nsmallest guaranteed cutoff (Q2 = 1)");
    println!("{:>8} {:>8} {:>14}", "v0", "r1", "r0_min");
    for v0 in [0.05, 0.1, 0.3] {
        for r1 in [0.5, 1.0] {
            println!("{:>8} {:>8} {:>14.10}", v0, r1, theorem2_min_cutoff(v0, r1, 1.0)?);
        }
    }

    println!("\ncheckpoint bounds for K = 0.5");
    for v0 in [0.1, 0.5, 0.9] {
        println!(
            "v0 = {v0}: |A| >= {:.6e}, |A_c| >= {:.6e}, |A_c(x = -1)| >= {:.6e} (r0 = 10)",
            lemma2_proper_bound(v0, 0.5)?,
            lemma2_coord_bound(v0, 0.5)?,
            lemma3_pointwise_bound(v0, 10.0, -1.0, 1.0)?,
        );
    }
    Ok(())
}
