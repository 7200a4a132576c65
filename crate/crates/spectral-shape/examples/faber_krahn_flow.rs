//! Gradient descent of λ1 at fixed area, starting from an oval.
//!
//!     cargo run --release --example faber_krahn_flow
//!
//! The descent velocity is the zero-mean part of the squared boundary flux,
//! the steepest-descent direction under the area constraint. The eigenvalue
//! decreases monotonically and the shape rounds out toward the disk of the
//! same area — the Faber-Krahn minimizer. The run prints the trajectory,
//! checks the terminal value against the disk bound, and certifies the final
//! shape with the criticality and curvature reports.

use std::f64::consts::PI;

use spectral_shape::analytic::disk_eigenvalues;
use spectral_shape::deriv::criticality_simple;
use spectral_shape::domain::BoundaryShape;
use spectral_shape::eig::{solve_spectrum, EigOptions};
use spectral_shape::fem::assemble;
use spectral_shape::flow::{run_flow, FlowOptions};
use spectral_shape::heat::mean_curvature_report;
use spectral_shape::mesh::disk_mesh;

fn main() -> spectral_shape::Result<()> {
    let shape = BoundaryShape::disk(1.0).with_cos(2, 0.2);
    let mut opts = FlowOptions::new(0);
    opts.refine = 16;
    opts.max_steps = 120;

    println!("minimizing λ1 from r(θ) = 1 + 0.2 cos 2θ at refinement n = {} …\n", opts.refine);
    let run = run_flow(&shape, &opts)?;

    println!("{:>4} {:>12} {:>12} {:>12} {:>10}", "step", "λ1", "perimeter", "grad norm", "step size");
    let stride = (run.states.len() / 12).max(1);
    for s in run.states.iter().step_by(stride) {
        println!(
            "{:>4} {:>12.7} {:>12.7} {:>12.3e} {:>10.1e}",
            s.step, s.lambda, s.perimeter, s.grad_norm, s.step_size
        );
    }
    let last = run.final_state();
    if last.step % stride != 0 {
        println!(
            "{:>4} {:>12.7} {:>12.7} {:>12.3e} {:>10.1e}",
            last.step, last.lambda, last.perimeter, last.grad_norm, last.step_size
        );
    }

    let target = disk_eigenvalues((last.area / PI).sqrt(), 1)[0];
    println!("\nstopped: {:?} after {} accepted steps", run.stop, run.states.len() - 1);
    println!("final λ1 = {:.7}, disk of equal area = {target:.7} (ratio {:.5})", last.lambda, last.lambda / target);

    // certify the terminal shape: constant flux and constant curvature
    let pack = solve_spectrum(assemble(disk_mesh(&last.shape, opts.refine)?)?, &EigOptions::new(1))?;
    let crit = criticality_simple(&pack, 0, 1e-2)?;
    println!(
        "criticality: flux spread = {:.2e} → {}",
        crit.spread,
        if crit.critical { "critical" } else { "not critical" }
    );
    let curv = mean_curvature_report(&last.shape, 512)?;
    println!(
        "curvature: mean = {:.6}, spread = {:.2e} (a perfect disk of this area: {:.6})",
        curv.mean,
        curv.spread,
        (PI / last.area).sqrt()
    );
    println!("final shape: {}", last.shape.to_json().trim());
    Ok(())
}
