//! Compression to a hand-picked span: the uniform measure on a segment of
//! the imaginary axis multiplies like a skew-symmetric operator on suitable
//! real-coefficient spans, so every compressed eigenvalue is purely
//! imaginary and the induced quadrature stays on the axis.

use moment_cubature::cubature::{subspace_quadrature, DEFAULT_WEIGHT_TOL};
use moment_cubature::fixtures::{dirichlet_even_span, dirichlet_interval, dirichlet_odd_span};
use moment_cubature::hessenberg::compress_to_subspace;
use moment_cubature::linalg::{normal_eig, operator_norm};
use moment_cubature::ortho::DEFAULT_RANK_TOL;

fn main() {
    let a = 1.0;
    let table = dirichlet_interval(a, 24).expect("interval moments");

    for (parity, span) in [
        ("even", dirichlet_even_span(a, 4)),
        ("odd", dirichlet_odd_span(a, 4)),
    ] {
        let comp = compress_to_subspace(&table, &span, DEFAULT_RANK_TOL)
            .expect("span rows are independent");
        println!("{parity} span of {} polynomials:", span.len());
        println!("  skew residual |M + M*|: {:.3e}", comp.skew_residual);

        let scale = operator_norm(&comp.matrix).max(1.0);
        let (lambda, _) = normal_eig(&comp.matrix, scale);
        let worst_re = lambda.iter().map(|l| l.re.abs()).fold(0.0f64, f64::max);
        println!("  largest |Re| over eigenvalues: {worst_re:.3e}");

        let quad = subspace_quadrature(&comp, DEFAULT_WEIGHT_TOL)
            .expect("skew compression is normal");
        println!("  induced quadrature ({} nodes):", quad.nodes.len());
        for (z, w) in quad.nodes.iter().zip(&quad.weights) {
            println!("    {:+.6}{:+.6}i  weight {:.6}", z.re, z.im, w);
        }
    }
}
