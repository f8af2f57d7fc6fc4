//! Power dilation: any contraction embeds as the corner of a unitary whose
//! first N powers compress back to the powers of the contraction. The
//! example dilates a rotation damped to norm 0.9 and checks the window
//! entry by entry.

use nalgebra::DMatrix;
use num_complex::Complex64;

use moment_cubature::dilation::{unitarity_residual, unitary_power_dilation};

fn main() {
    let n = 3;
    let steps = 4;
    let angle = 0.7f64;
    let t = DMatrix::from_fn(n, n, |i, j| {
        let rot = match (i, j) {
            (0, 0) | (1, 1) => angle.cos(),
            (0, 1) => -angle.sin(),
            (1, 0) => angle.sin(),
            (2, 2) => 1.0,
            _ => 0.0,
        };
        Complex64::new(0.9 * rot, 0.0)
    });

    let dil = unitary_power_dilation(&t, steps).expect("norm 0.9 is a contraction");
    println!(
        "dilated a {n}x{n} contraction to a {}x{} unitary ({} block steps)",
        dil.unitary.nrows(),
        dil.unitary.ncols(),
        steps,
    );
    println!("unitarity residual: {:.3e}", unitarity_residual(&dil.unitary));

    let big = dil.unitary.nrows();
    let mut u_pow = DMatrix::<Complex64>::identity(big, big);
    let mut t_pow = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=steps {
        u_pow = &u_pow * &dil.unitary;
        t_pow = &t_pow * &t;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((u_pow[(i, j)] - t_pow[(i, j)]).norm());
            }
        }
        println!("power {k}: corner matches T^{k} to {worst:.3e}");
    }
    // One power past the window the corner picks up defect terms and the
    // match is gone.
    u_pow = &u_pow * &dil.unitary;
    t_pow = &t_pow * &t;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((u_pow[(i, j)] - t_pow[(i, j)]).norm());
        }
    }
    println!("power {}: corner differs by {worst:.3e}", steps + 1);
}
