//! The arclength measure on the unit circle is the classic measure whose
//! compressed multiplier is a pure shift: every orthonormal polynomial is a
//! monomial, multiplication by z bumps the degree, and the truncation cuts
//! off exactly one unit of mass. This example builds that compression and
//! prints the certificate that correctly refuses it.

use moment_cubature::fixtures::circle_arclength;
use moment_cubature::hessenberg::{build_hessenberg, self_commutator, DEFAULT_NORMAL_TOL};
use moment_cubature::ortho::{orthonormalize, DEFAULT_RANK_TOL};

fn main() {
    let d = 4;
    let table = circle_arclength(2 * d + 2);

    let basis = orthonormalize(&table, d, DEFAULT_RANK_TOL)
        .expect("circle moments are strictly positive definite")
        .into_basis()
        .expect("no degeneracy at any degree");

    let h = build_hessenberg(&table, &basis, d).expect("table holds enough moments");

    println!("compressed multiplier at degree {d}:");
    for i in 0..=d {
        let row: Vec<String> = (0..=d).map(|j| format!("{:5.2}", h.matrix[(i, j)].re)).collect();
        println!("  [{}]", row.join(" "));
    }
    println!("defect (mass pushed past degree {d}): {:.3e}", h.defect);

    let rep = self_commutator(&h, DEFAULT_NORMAL_TOL);
    println!("\nself-commutator diagonal:");
    let diag: Vec<String> = (0..=d).map(|j| format!("{:5.2}", rep.commutator[(j, j)].re)).collect();
    println!("  [{}]", diag.join(" "));
    println!("smallest eigenvalue: {:.6}", rep.lambda_minus);
    println!("theoretical floor (-defect^2): {:.6}", rep.defect_sq_bound);
    println!(
        "certificate: {}",
        if rep.is_normal { "normal, Gaussian-type rule exists" } else { "not normal at this degree" },
    );
}
