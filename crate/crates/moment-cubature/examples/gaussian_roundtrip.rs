//! Round trip for a finitely supported functional: sample atoms in the unit
//! disk, keep only their moments, and reconstruct nodes and weights from the
//! moments alone. When the certificate passes, the recovered rule is the
//! original measure.

use moment_cubature::cubature::{
    match_atoms, normal_quadrature, verify_exactness, DEFAULT_WEIGHT_TOL,
};
use moment_cubature::fixtures::random_atoms;
use moment_cubature::hessenberg::{build_hessenberg, self_commutator, DEFAULT_NORMAL_TOL};
use moment_cubature::moments::moments_from_atoms;
use moment_cubature::ortho::{orthonormalize, DEFAULT_RANK_TOL};

fn main() {
    let d = 3;
    let measure = random_atoms(d + 1, 42, 1.0).expect("atoms fit in the disk");
    let table = moments_from_atoms(&measure, 2 * d + 2);

    let basis = orthonormalize(&table, d, DEFAULT_RANK_TOL)
        .expect("gram assembled")
        .into_basis()
        .expect("d + 1 atoms support a degree-d basis");
    let h = build_hessenberg(&table, &basis, d).expect("hessenberg built");
    let rep = self_commutator(&h, DEFAULT_NORMAL_TOL);
    println!(
        "defect {:.3e}, lambda_minus {:.3e}: certificate {}",
        h.defect,
        rep.lambda_minus,
        if rep.is_normal { "passes" } else { "fails" },
    );

    let cub = normal_quadrature(&h, &basis, &table, DEFAULT_NORMAL_TOL, DEFAULT_WEIGHT_TOL)
        .expect("certified functional yields a rule");

    println!("\n   original atom            weight   recovered node           weight");
    let mut atoms: Vec<_> = measure.atoms().to_vec();
    atoms.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
    let mut nodes: Vec<_> = cub.nodes.iter().copied().zip(cub.weights.iter().copied()).collect();
    nodes.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap());
    for ((za, wa), (zn, wn)) in atoms.iter().zip(&nodes) {
        println!(
            "  {:+.4}{:+.4}i  {:.4}   {:+.4}{:+.4}i  {:.4}",
            za.re, za.im, wa, zn.re, zn.im, wn,
        );
    }

    println!("\nworst node/weight discrepancy: {:.3e}", match_atoms(&cub, &measure));
    let ex = verify_exactness(&cub, &table, 1e-7).expect("grid fits the table");
    println!(
        "moment residual over the verification grid: {:.3e} (threshold {:.3e})",
        ex.max_residual, ex.threshold,
    );
}
