//! Plot-ready output files: CSV tables with fixed headers and JSON reports.
//!
//! Every float is printed with [`fmt_float`] — scientific notation, `.`
//! decimal separator, 17 significant digits — so values round-trip exactly
//! and reruns of the same config produce byte-identical files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::deriv::FdCheck;
use crate::eig::SpectralPack;
use crate::flow::{FlowRun, StopReason};
use crate::heat::HeatTraceSample;
use crate::{Error, Result};

/// 17 significant digits: enough to reproduce any `f64` bit pattern.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Write a whole file in one call, tagging I/O failures with the path.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Serialize a JSON report (pretty, trailing newline).
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

/// Spectrum dump: `index,eigenvalue,cluster,residual`, one row per computed
/// eigenvalue (truncated to `rows` — the solver may append cluster mates).
pub fn spectrum_csv(pack: &SpectralPack, rows: usize) -> String {
    let mut out = String::from("index,eigenvalue,cluster,residual\n");
    let n = rows.min(pack.len());
    for i in 0..n {
        let cluster = pack
            .clusters
            .iter()
            .position(|c| c.contains(&i))
            .expect("every index lies in a cluster");
        out.push_str(&format!(
            "{i},{},{cluster},{}\n",
            fmt_float(pack.eigenvalues[i]),
            fmt_float(pack.residuals[i]),
        ));
    }
    out
}

/// Difference-quotient table: `eps,fwd,bwd,pred_right,pred_left`. The
/// predicted columns repeat the one-sided derivatives on every row so each
/// row is a self-contained comparison.
pub fn fd_csv(check: &FdCheck) -> String {
    let mut out = String::from("eps,fwd,bwd,pred_right,pred_left\n");
    for s in &check.samples {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(s.eps),
            fmt_float(s.forward),
            fmt_float(s.backward),
            fmt_float(check.predicted_right),
            fmt_float(check.predicted_left),
        ));
    }
    out
}

/// Heat-trace sweep: `t,Y_spec,tail_bound,Y_asym,rel_gap` with
/// `rel_gap = |Y_spec − Y_asym| / Y_spec`.
pub fn trace_csv(samples: &[HeatTraceSample], asymptotic: &[f64]) -> String {
    assert_eq!(samples.len(), asymptotic.len());
    let mut out = String::from("t,Y_spec,tail_bound,Y_asym,rel_gap\n");
    for (s, &ya) in samples.iter().zip(asymptotic) {
        let gap = (s.value - ya).abs() / s.value;
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(s.t),
            fmt_float(s.value),
            fmt_float(s.tail_bound),
            fmt_float(ya),
            fmt_float(gap),
        ));
    }
    out
}

/// Flow trajectory: `step,lambda_k,area,perimeter,grad_norm,step_size`.
pub fn trajectory_csv(run: &FlowRun) -> String {
    let mut out = String::from("step,lambda_k,area,perimeter,grad_norm,step_size\n");
    for s in &run.states {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.step,
            fmt_float(s.lambda),
            fmt_float(s.area),
            fmt_float(s.perimeter),
            fmt_float(s.grad_norm),
            fmt_float(s.step_size),
        ));
    }
    out
}

/// JSON report of a predicted shape derivative at one eigenvalue.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivativeReport {
    /// Target eigenvalue (0-based).
    pub eigen_index: usize,
    /// Its value on the undeformed domain.
    pub lambda: f64,
    /// Indices of the cluster containing the target.
    pub cluster: Vec<usize>,
    /// Position of the target inside its cluster.
    pub position: usize,
    /// Derivatives of the analytic eigenvalue branches through the cluster.
    pub qform_eigenvalues: Vec<f64>,
    pub predicted_right: f64,
    pub predicted_left: f64,
}

/// Verdict for one cluster in a criticality report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterVerdict {
    pub indices: Vec<usize>,
    /// Mean eigenvalue of the cluster.
    pub eigenvalue: f64,
    /// Relative flux spread (simple eigenvalues only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spread: Option<f64>,
    /// Distance of the best gram matrix from a multiple of the identity
    /// (clusters of size ≥ 2 only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identity_residual: Option<f64>,
    pub critical: bool,
}

/// JSON report of the criticality tests over all computed clusters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub tol: f64,
    pub clusters: Vec<ClusterVerdict>,
}

/// Stop reason in a serializable form.
impl StopReason {
    pub fn name(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxSteps => "max_steps",
            StopReason::StepFloor => "step_floor",
        }
    }
}
