//! Heat trace `Y(t) = Σ_k e^{−λ_k t}`, its shape derivative, and the
//! short-time expansion driven by boundary geometry.
//!
//! For a planar Dirichlet domain with smooth boundary,
//!
//! ```text
//! Y(t) ≈ (4πt)⁻¹ (a0 + a1 √t + a2 t + a3 t^{3/2}),
//! a0 = |Ω|,  a1 = −(√π/2)|∂Ω|,  a2 = (1/3)∮κ ds,  a3 = (√π/64)∮κ² ds,
//! ```
//!
//! where `κ` is the boundary curvature. `∮κ ds = 2π` for any simple closed
//! curve, so `a2 = 2π/3` is a topological invariant — a sharp internal
//! consistency check for the quadrature. Differentiating the trace along a
//! boundary flow with normal speed `v` and using the eigenvalue derivatives
//! of [`crate::deriv`]:
//!
//! ```text
//! dY/dε (t) = Σ_k (−t e^{−λ_k t}) dλ_k/dε = t Σ_k e^{−λ_k t} ∮ v (∂φ_k/∂ν)² ds.
//! ```
//!
//! At a degenerate eigenvalue the individual `dλ_k` are only one-sidedly
//! defined, but their *sum* over a cluster — the trace of the perturbation
//! matrix — is an honest two-sided derivative. The implementation therefore
//! works cluster by cluster, weighting each cluster's trace with a single
//! factor `−t e^{−λ̄_c t}` built from the cluster mean `λ̄_c`. That makes the
//! result exactly independent of the arbitrary eigenbasis inside each
//! cluster, not just up to the cluster width.

use std::f64::consts::PI;

use crate::deriv::qform_matrix;
use crate::domain::{BoundaryShape, NormalVelocity};
use crate::eig::SpectralPack;
use crate::trig::uniform_angles;
use crate::{Error, Result};

/// One evaluation of the truncated spectral heat trace.
#[derive(Clone, Copy, Debug)]
pub struct HeatTraceSample {
    pub t: f64,
    /// `Σ_{k<N} e^{−λ_k t}` over the pack's `N` eigenvalues.
    pub value: f64,
    /// Weyl-calibrated estimate of the dropped tail `Σ_{k≥N} e^{−λ_k t}`:
    /// `(A/(4πt)) e^{−4πNt/A}` with `A` the mesh area. Exponentially small
    /// once `N` well exceeds the Weyl count `Aλ/(4π)` at the scale `λ ~ 1/t`.
    pub tail_bound: f64,
}

/// Evaluate the heat trace at each `t`, failing with [`Error::TailTooLarge`]
/// whenever the tail estimate exceeds `tail_rel_tol` relative to the value —
/// the signal to request more eigenvalues or larger times.
pub fn heat_trace(
    pack: &SpectralPack,
    ts: &[f64],
    tail_rel_tol: f64,
) -> Result<Vec<HeatTraceSample>> {
    let area = pack.system.mesh.statistics().total_area;
    let n = pack.len() as f64;
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        assert!(t > 0.0, "the heat trace needs t > 0");
        let value: f64 = pack.eigenvalues.iter().map(|&l| (-l * t).exp()).sum();
        let tail_bound = area / (4.0 * PI * t) * (-4.0 * PI * n * t / area).exp();
        if tail_bound > tail_rel_tol * value {
            return Err(Error::TailTooLarge { t, bound: tail_bound, tol: tail_rel_tol });
        }
        out.push(HeatTraceSample { t, value, tail_bound });
    }
    Ok(out)
}

/// Derivative of the truncated heat trace along the normal velocity `v`,
/// evaluated at each `t` (see module docs for the cluster-mean weighting).
pub fn heat_trace_derivative(pack: &SpectralPack, v: &NormalVelocity, ts: &[f64]) -> Vec<f64> {
    // per-cluster data: mean eigenvalue and trace of the perturbation matrix
    let cluster_data: Vec<(f64, f64)> = pack
        .clusters
        .iter()
        .map(|cluster| {
            let mean = cluster.iter().map(|&i| pack.eigenvalues[i]).sum::<f64>()
                / cluster.len() as f64;
            let q = qform_matrix(pack, cluster, v);
            let trace = (0..cluster.len()).map(|a| q[a][a]).sum::<f64>();
            (mean, trace)
        })
        .collect();
    ts.iter()
        .map(|&t| {
            cluster_data
                .iter()
                .map(|&(mean, trace)| -t * (-mean * t).exp() * trace)
                .sum()
        })
        .collect()
}

/// Coefficients of the short-time expansion
/// `Y(t) ≈ (4πt)⁻¹ (a0 + a1 √t + a2 t + a3 t^{3/2})`.
#[derive(Clone, Copy, Debug)]
pub struct HeatCoefficients {
    /// Domain area.
    pub a0: f64,
    /// `−(√π/2) · perimeter`.
    pub a1: f64,
    /// `(1/3) ∮ κ ds`; always `2π/3` for a simple smooth boundary.
    pub a2: f64,
    /// `(√π/64) ∮ κ² ds`.
    pub a3: f64,
}

impl HeatCoefficients {
    /// Evaluate the truncated expansion at time `t`.
    pub fn eval(&self, t: f64) -> f64 {
        (self.a0 + self.a1 * t.sqrt() + self.a2 * t + self.a3 * t.powf(1.5)) / (4.0 * PI * t)
    }
}

/// Geometric expansion coefficients of a shape, using its `q`-node
/// trapezoidal boundary quadrature (spectrally accurate for these closed
/// smooth integrands).
pub fn asymptotic_coeffs(shape: &BoundaryShape, q: usize) -> Result<HeatCoefficients> {
    let report = shape.geometry_report(q)?;
    let mut total_kappa = 0.0;
    let mut total_kappa_sq = 0.0;
    for &theta in &report.node_angles {
        let ds = shape.speed(theta);
        let k = shape.curvature(theta);
        total_kappa += k * ds;
        total_kappa_sq += k * k * ds;
    }
    let h = std::f64::consts::TAU / q as f64;
    total_kappa *= h;
    total_kappa_sq *= h;
    Ok(HeatCoefficients {
        a0: report.area,
        a1: -0.5 * PI.sqrt() * report.perimeter,
        a2: total_kappa / 3.0,
        a3: PI.sqrt() / 64.0 * total_kappa_sq,
    })
}

/// Boundary curvature summary: the flow driver uses this to certify that a
/// terminal shape is round (constant curvature) rather than merely critical.
#[derive(Clone, Copy, Debug)]
pub struct MeanCurvatureReport {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `(max − min) / mean`, the scale-free roundness defect.
    pub spread: f64,
    /// `∮ κ ds` (should be `2π`).
    pub total: f64,
    /// `∮ κ² ds`.
    pub total_sq: f64,
}

pub fn mean_curvature_report(shape: &BoundaryShape, q: usize) -> Result<MeanCurvatureReport> {
    shape.validate(q)?;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut total = 0.0;
    let mut total_sq = 0.0;
    let mut length = 0.0;
    for &theta in &uniform_angles(q) {
        let k = shape.curvature(theta);
        let ds = shape.speed(theta);
        min = min.min(k);
        max = max.max(k);
        total += k * ds;
        total_sq += k * k * ds;
        length += ds;
    }
    let h = std::f64::consts::TAU / q as f64;
    total *= h;
    total_sq *= h;
    length *= h;
    let mean = total / length;
    Ok(MeanCurvatureReport {
        mean,
        min,
        max,
        spread: (max - min) / mean,
        total,
        total_sq,
    })
}
