//! Solve the Dirichlet spectrum of the unit disk and compare it against the
//! exact eigenvalues, the squared Bessel zeros `j_{m,n}²`.
//!
//!     cargo run --release --example disk_spectrum
//!
//! The table shows the discrete eigenvalues, their cluster structure (the
//! disk's eigenvalues with angular order m ≥ 1 come in pairs), and the
//! relative error at two refinement levels to make the O(h²) convergence
//! visible.

use spectral_shape::analytic::disk_eigenvalues;
use spectral_shape::domain::BoundaryShape;
use spectral_shape::eig::{solve_spectrum, EigOptions};
use spectral_shape::fem::assemble;
use spectral_shape::mesh::disk_mesh;

fn main() -> spectral_shape::Result<()> {
    let shape = BoundaryShape::disk(1.0);
    let k = 10;
    let exact = disk_eigenvalues(1.0, k);

    let mut packs = Vec::new();
    for &n in &[16u32, 32] {
        let mesh = disk_mesh(&shape, n)?;
        let stats = mesh.statistics();
        println!(
            "refinement n = {n}: {} nodes, {} triangles, h_max = {:.4}, min angle = {:.1}°",
            mesh.node_count(),
            mesh.triangles.len(),
            stats.h_max,
            stats.min_angle_deg
        );
        packs.push(solve_spectrum(assemble(mesh)?, &EigOptions::new(k))?);
    }

    println!();
    println!("{:>3} {:>14} {:>14} {:>14} {:>10} {:>10} {:>8}", "k", "exact", "λ (n=16)", "λ (n=32)", "err n=16", "err n=32", "cluster");
    for i in 0..k {
        let cluster16 = packs[0].cluster_of(i);
        println!(
            "{:>3} {:>14.8} {:>14.8} {:>14.8} {:>10.2e} {:>10.2e} {:>8}",
            i + 1,
            exact[i],
            packs[0].eigenvalues[i],
            packs[1].eigenvalues[i],
            (packs[0].eigenvalues[i] - exact[i]).abs() / exact[i],
            (packs[1].eigenvalues[i] - exact[i]).abs() / exact[i],
            format!("{:?}", cluster16),
        );
    }

    let err16 = (packs[0].eigenvalues[0] - exact[0]).abs() / exact[0];
    let err32 = (packs[1].eigenvalues[0] - exact[0]).abs() / exact[0];
    println!();
    println!(
        "λ1 error ratio between levels: {:.2} (4.0 would be exactly O(h²))",
        err16 / err32
    );
    Ok(())
}
