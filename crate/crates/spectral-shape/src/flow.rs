//! Area-preserving gradient descent of a Dirichlet eigenvalue.
//!
//! The negative shape gradient of `λ_k` under the area constraint is the
//! zero-mean part of the squared boundary flux:
//!
//! ```text
//! v = (∂φ_k/∂ν)² − mean,      dλ_k/dε = −∮ v (∂φ_k/∂ν)² ds = −Var(flux²) ≤ 0,
//! ```
//!
//! with equality exactly at critical shapes (constant flux magnitude). Each
//! step deforms the boundary along `v`, rescales back to the target area
//! (the deformation is only first-order volume preserving), and accepts the
//! candidate if the eigenvalue actually dropped — otherwise the step is
//! halved, down to a floor. Shapes live in a fixed Fourier band: the descent
//! velocity is truncated to `max_modes`, so the flow is a projected gradient
//! method on finitely many coefficients, and a hard cap on the coefficient
//! amplitudes keeps every iterate safely star-shaped.
//!
//! Flowing `λ_1` recovers the classical isoperimetric behavior: the
//! eigenvalue decreases toward the value of the disk of the same area, which
//! is its global minimum, and the terminal shape is round.

use crate::domain::{
    deform, BoundaryShape, NormalVelocity, DEFAULT_FIT_TOL, DEFAULT_QUADRATURE_NODES,
};
use crate::eig::{solve_spectrum, EigOptions, SpectralPack};
use crate::fem::assemble;
use crate::mesh::disk_mesh;
use crate::{Error, Result};

/// Parameters of the descent loop; `new(k)` fills in workable defaults.
#[derive(Clone, Debug)]
pub struct FlowOptions {
    /// Index of the eigenvalue being minimized (0-based).
    pub k: usize,
    /// Mesh refinement used for every solve along the flow.
    pub refine: u32,
    pub max_steps: usize,
    /// First trial step; also the ceiling for later trials.
    pub initial_step: f64,
    /// Floor for the backtracking line search.
    pub min_step: f64,
    /// Stop once the gradient norm `‖v‖_{L²(∂Ω)}` falls below this.
    pub grad_tol: f64,
    /// Fourier band of the flow: descent velocities are truncated to this
    /// many modes and shapes are padded to match.
    pub max_modes: usize,
    /// Reject candidates whose coefficients exceed this fraction of `r0`.
    pub max_amplitude_ratio: f64,
    /// Tolerance handed to the deformation refit.
    pub fit_tol: f64,
    /// Eigensolver settings (the pair count is managed by the flow).
    pub eig: EigOptions,
}

impl FlowOptions {
    pub fn new(k: usize) -> Self {
        FlowOptions {
            k,
            refine: 16,
            max_steps: 200,
            initial_step: 0.05,
            min_step: 1e-9,
            grad_tol: 1e-3,
            max_modes: 16,
            max_amplitude_ratio: 0.5,
            fit_tol: DEFAULT_FIT_TOL,
            eig: EigOptions::new(k + 2),
        }
    }

    fn eig_options(&self) -> EigOptions {
        let mut o = self.eig.clone();
        o.k = self.k + 2; // cluster completion handles the rest
        o
    }
}

/// One accepted point of the flow trajectory.
#[derive(Clone, Debug)]
pub struct FlowState {
    pub step: usize,
    pub shape: BoundaryShape,
    pub lambda: f64,
    pub area: f64,
    pub perimeter: f64,
    /// `‖v‖_{L²(∂Ω)}` of the descent direction at this shape.
    pub grad_norm: f64,
    /// Step size that produced this state (0 for the initial state).
    pub step_size: f64,
}

/// Why the flow stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// Gradient norm fell below `grad_tol`.
    Converged,
    /// Ran out of steps.
    MaxSteps,
    /// Backtracking hit the step floor: the eigenvalue cannot be decreased
    /// further at this refinement, which is the generic terminal condition
    /// at a discrete minimizer.
    StepFloor,
}

/// A completed run: the trajectory (initial state first) plus stop reason.
#[derive(Clone, Debug)]
pub struct FlowRun {
    pub states: Vec<FlowState>,
    pub stop: StopReason,
}

impl FlowRun {
    pub fn final_state(&self) -> &FlowState {
        self.states.last().expect("trajectory is never empty")
    }
}

/// The (negative) area-constrained shape gradient of `λ_k` as a normal
/// velocity: squared boundary flux, averaged over the cluster of `k`,
/// truncated to `max_modes`, and projected to zero boundary mean.
///
/// Averaging over the cluster makes the direction independent of the
/// arbitrary eigenbasis inside a degenerate group; for a simple eigenvalue
/// it is just `(∂φ_k/∂ν)² − mean`.
pub fn descent_direction(
    pack: &SpectralPack,
    shape: &BoundaryShape,
    k: usize,
    max_modes: usize,
) -> NormalVelocity {
    let cluster = pack.cluster_of(k);
    let nb = pack.system.boundary_weights.len();
    let mut raw = vec![0.0; nb];
    for &a in cluster {
        let f = &pack.normal_derivatives[a];
        for j in 0..nb {
            raw[j] += f[j] * f[j] / cluster.len() as f64;
        }
    }
    // mesh boundary nodes sit on a uniform angle grid, so the samples define
    // a trig interpolant that we can truncate and resample
    let poly = NormalVelocity::from_uniform_values(raw).interpolant();
    let m = max_modes.min(poly.cos_coeffs.len());
    let v = NormalVelocity::from_series(
        DEFAULT_QUADRATURE_NODES,
        poly.a0,
        &poly.cos_coeffs[..m],
        &poly.sin_coeffs[..m],
    );
    v.project_zero_mean(shape)
}

fn amplitudes_within(shape: &BoundaryShape, ratio: f64) -> bool {
    let cap = ratio * shape.r0;
    shape
        .cos_coeffs
        .iter()
        .chain(&shape.sin_coeffs)
        .all(|c| c.abs() <= cap)
}

/// Armijo constant: a trial step must realize at least this fraction of its
/// first-order predicted decrease. Guards against accepting rounding noise.
const SUFFICIENT_DECREASE: f64 = 0.1;

/// One backtracking descent step from `shape` (whose spectrum is `pack`).
///
/// Returns the accepted candidate's shape, spectrum, and the step size that
/// produced it. Candidates must stay star-shaped, respect the amplitude cap,
/// and realize a sufficient fraction of the predicted first-order decrease
/// `step · ‖v‖²` — otherwise the step is halved. [`Error::StepTooSmall`]
/// reports a line search that hit the floor (`at_step` is the trajectory
/// index handed in by the caller).
pub fn flow_step(
    shape: &BoundaryShape,
    pack: &SpectralPack,
    opts: &FlowOptions,
    target_area: f64,
    trial_step: f64,
    at_step: usize,
) -> Result<(BoundaryShape, SpectralPack, f64)> {
    let shape = shape.clone().padded_to(opts.max_modes);
    let v = descent_direction(pack, &shape, opts.k, opts.max_modes);
    // first-order decrease per unit step: −dλ = ∮ v f² ds = ‖v‖² + 0·mean
    let rate = v.l2_norm(&shape).powi(2);
    let lambda_now = pack.eigenvalues[opts.k];
    let mut step = trial_step;
    loop {
        let candidate = deform(&shape, &v, step, opts.fit_tol)
            .and_then(|d| d.shape.rescaled_to_area(target_area, DEFAULT_QUADRATURE_NODES));
        if let Ok(next) = candidate {
            if amplitudes_within(&next, opts.max_amplitude_ratio) {
                let sys = assemble(disk_mesh(&next, opts.refine)?)?;
                let next_pack = solve_spectrum(sys, &opts.eig_options())?;
                if next_pack.eigenvalues[opts.k]
                    <= lambda_now - SUFFICIENT_DECREASE * step * rate
                {
                    return Ok((next, next_pack, step));
                }
            }
        }
        step *= 0.5;
        if step < opts.min_step {
            return Err(Error::StepTooSmall { step, floor: opts.min_step, at_step });
        }
    }
}

/// Run the descent from `shape0` until convergence, the step floor, or the
/// step budget. The first trajectory state is the initial shape; every later
/// state is an accepted strict decrease of `λ_k` at the same area.
pub fn run_flow(shape0: &BoundaryShape, opts: &FlowOptions) -> Result<FlowRun> {
    let shape0 = shape0.clone().padded_to(opts.max_modes);
    let report = shape0.geometry_report(DEFAULT_QUADRATURE_NODES)?;
    let target_area = report.area;

    let mut shape = shape0;
    let mut pack = solve_spectrum(assemble(disk_mesh(&shape, opts.refine)?)?, &opts.eig_options())?;
    let state_of = |i: usize, shape: &BoundaryShape, pack: &SpectralPack, used: f64| -> Result<FlowState> {
        let g = shape.geometry_report(DEFAULT_QUADRATURE_NODES)?;
        let v = descent_direction(pack, shape, opts.k, opts.max_modes);
        Ok(FlowState {
            step: i,
            shape: shape.clone(),
            lambda: pack.eigenvalues[opts.k],
            area: g.area,
            perimeter: g.perimeter,
            grad_norm: v.l2_norm(shape),
            step_size: used,
        })
    };

    let mut states = vec![state_of(0, &shape, &pack, 0.0)?];
    let mut trial = opts.initial_step;
    for i in 1..=opts.max_steps {
        if states.last().unwrap().grad_norm <= opts.grad_tol {
            return Ok(FlowRun { states, stop: StopReason::Converged });
        }
        match flow_step(&shape, &pack, opts, target_area, trial, i) {
            Ok((next, next_pack, used)) => {
                shape = next;
                pack = next_pack;
                states.push(state_of(i, &shape, &pack, used)?);
                trial = (used * 2.0).min(opts.initial_step);
            }
            Err(Error::StepTooSmall { .. }) => {
                return Ok(FlowRun { states, stop: StopReason::StepFloor });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(FlowRun { states, stop: StopReason::MaxSteps })
}
