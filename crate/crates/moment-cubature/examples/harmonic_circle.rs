//! Harmonic-exact cubature: even when no Gaussian-type rule exists, dilating
//! the compressed multiplier to a unitary produces nodes on a circle that
//! reproduce s00 and every pure moment up to the requested degree. For the
//! arclength measure the construction lands on the uniform rule at the ninth
//! roots of unity.

use moment_cubature::cubature::{verify_exactness, Contract, DEFAULT_WEIGHT_TOL};
use moment_cubature::dilation::harmonic_cubature;
use moment_cubature::fixtures::circle_arclength;

fn main() {
    let d = 2;
    let table = circle_arclength(2 * d + 2);
    let cub = harmonic_cubature(&table, d, DEFAULT_WEIGHT_TOL)
        .expect("circle moments dilate cleanly");

    let radius = match cub.contract {
        Contract::Harmonic { radius, .. } => radius,
        _ => unreachable!(),
    };
    println!("{} nodes on the circle of radius {radius}:", cub.len());
    for (z, w) in cub.nodes.iter().zip(&cub.weights) {
        println!(
            "  angle {:7.2} deg   weight {:.6}",
            z.arg().to_degrees(),
            w,
        );
    }
    println!("total mass: {:.15} (s00 = {})", cub.total_mass(), table.s00());

    let ex = verify_exactness(&cub, &table, 1e-7).expect("grid fits the table");
    println!(
        "pure-moment residual through degree {d}: {:.3e} (pass: {})",
        ex.max_residual, ex.pass,
    );
}
