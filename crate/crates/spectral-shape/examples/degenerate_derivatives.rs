//! One-sided derivatives at a degenerate eigenvalue.
//!
//!     cargo run --release --example degenerate_derivatives
//!
//! On the unit disk λ2 = λ3 is a double eigenvalue, so λ_k(ε) is not
//! differentiable: perturbing the boundary along v = cos 2θ splits the pair,
//! and the two analytic branches through the crossing have the slopes given
//! by the eigenvalues of the perturbation form
//!
//!     Q_ab = −∮ v (∂φ_a/∂ν)(∂φ_b/∂ν) ds
//!
//! on the eigenspace. Sorting the branches turns their slopes into one-sided
//! derivatives: λ2 (the lower of the pair) follows the smallest slope to the
//! right and the largest to the left — the derivatives differ in sign, which
//! is exactly the criticality of the disk. Difference quotients of the
//! sorted eigenvalues reproduce both slopes.

use spectral_shape::deriv::{finite_difference_check, one_sided_derivatives, qform_matrix};
use spectral_shape::domain::{BoundaryShape, NormalVelocity, DEFAULT_QUADRATURE_NODES};
use spectral_shape::eig::{solve_spectrum, EigOptions};
use spectral_shape::fem::assemble;
use spectral_shape::mesh::disk_mesh;

fn main() -> spectral_shape::Result<()> {
    let shape = BoundaryShape::disk(1.0);
    let refine = 16;
    let v = NormalVelocity::from_series(DEFAULT_QUADRATURE_NODES, 0.0, &[0.0, 1.0], &[]);

    let pack = solve_spectrum(assemble(disk_mesh(&shape, refine)?)?, &EigOptions::new(4))?;
    let cluster = pack.cluster_of(1).to_vec();
    println!(
        "disk spectrum: λ2 = {:.6}, λ3 = {:.6} (cluster {:?}, gap {:.1e})",
        pack.eigenvalues[1],
        pack.eigenvalues[2],
        cluster,
        (pack.eigenvalues[2] - pack.eigenvalues[1]).abs() / pack.eigenvalues[1],
    );

    let q = qform_matrix(&pack, &cluster, &v.project_zero_mean(&shape));
    println!("\nperturbation form under v = cos 2θ:");
    for row in &q {
        println!("    [{:+.6}, {:+.6}]", row[0], row[1]);
    }
    println!("    trace = {:+.2e} (zero-mean v on the disk ⇒ traceless)", q[0][0] + q[1][1]);

    for k in [1usize, 2] {
        let osd = one_sided_derivatives(&pack, k, &v);
        println!(
            "\nλ{} one-sided derivatives: right = {:+.6}, left = {:+.6} (product {:+.3e} ≤ 0)",
            k + 1,
            osd.right,
            osd.left,
            osd.right * osd.left,
        );

        let check = finite_difference_check(
            &shape,
            &v,
            k,
            refine,
            &[1e-2, 1e-3],
            &EigOptions::new(4),
        )?;
        println!("    {:>8} {:>14} {:>14}", "eps", "fwd quotient", "bwd quotient");
        for s in &check.samples {
            println!("    {:>8.0e} {:>14.6} {:>14.6}", s.eps, s.forward, s.backward);
        }
        println!(
            "    (forward tracks {:+.6}, backward tracks {:+.6})",
            check.predicted_right, check.predicted_left
        );
    }
    Ok(())
}
