//! Batch front end: load a [`RunConfig`], run one command, write artifacts.
//!
//! Every run creates the output directory, echoes the fully resolved config
//! as `config.json`, and then emits the command's files next to it:
//!
//! | command    | artifacts                             |
//! |------------|---------------------------------------|
//! | `eigs`     | `spectrum.csv`                        |
//! | `deriv`    | `fd_table.csv`, `derivative.json`     |
//! | `critical` | `criticality.json`                    |
//! | `heat`     | `trace.csv`                           |
//! | `flow`     | `trajectory.csv`, `final_shape.json`  |
//!
//! Outputs are deterministic: identical resolved config and build produce
//! byte-identical files. Process exit codes (used by the binary wrapper):
//! 0 success, 1 numerical failure, 2 configuration or I/O failure.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{Command, RunConfig};
use crate::deriv::{criticality_cluster, criticality_simple, finite_difference_check, one_sided_derivatives};
use crate::eig::{solve_spectrum, SpectralPack};
use crate::fem::assemble;
use crate::flow::run_flow;
use crate::heat::{asymptotic_coeffs, heat_trace};
use crate::mesh::disk_mesh;
use crate::report::{
    fd_csv, spectrum_csv, trace_csv, trajectory_csv, write_json, write_text, ClusterVerdict,
    CriticalityReport, DerivativeReport,
};
use crate::{Error, Result};

/// Load the config at `config_path`, apply command-line overrides, run the
/// selected command, and return the output directory. The caller decides the
/// process exit code from the error via [`Error::exit_code`].
pub fn run(
    config_path: &Path,
    out: Option<&Path>,
    refine: Option<u32>,
    seed: Option<u64>,
) -> Result<PathBuf> {
    let mut cfg = RunConfig::load(config_path)?;
    if let Some(r) = refine {
        cfg.refine = r;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(dir) = out {
        cfg.out = Some(dir.to_path_buf());
    }
    let config_dir = config_path.parent().unwrap_or_else(|| Path::new("."));
    let cfg = cfg.resolved(config_dir)?;

    let out_dir = cfg
        .out
        .clone()
        .ok_or_else(|| Error::InvalidConfig("no output directory: set `out` or pass --out".into()))?;
    fs::create_dir_all(&out_dir).map_err(|source| Error::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    write_text(&out_dir.join("config.json"), &cfg.to_json())?;

    match cfg.command {
        Command::Eigs => cmd_eigs(&cfg, &out_dir)?,
        Command::Deriv => cmd_deriv(&cfg, &out_dir)?,
        Command::Critical => cmd_critical(&cfg, &out_dir)?,
        Command::Heat => cmd_heat(&cfg, &out_dir)?,
        Command::Flow => cmd_flow(&cfg, &out_dir)?,
    }
    Ok(out_dir)
}

fn solve(cfg: &RunConfig, k: usize) -> Result<SpectralPack> {
    let mut opts = cfg.eig_options();
    opts.k = k;
    solve_spectrum(assemble(disk_mesh(cfg.shape(), cfg.refine)?)?, &opts)
}

fn cmd_eigs(cfg: &RunConfig, out: &Path) -> Result<()> {
    let pack = solve(cfg, cfg.k)?;
    write_text(&out.join("spectrum.csv"), &spectrum_csv(&pack, cfg.k))?;
    log::info!("eigs: λ_1 = {}, {} rows", pack.eigenvalues[0], cfg.k);
    Ok(())
}

fn cmd_deriv(cfg: &RunConfig, out: &Path) -> Result<()> {
    let shape = cfg.shape();
    let v = cfg.velocity.as_ref().unwrap().build(cfg.quadrature);
    let k = cfg.eigen_index;
    let eps = cfg.epsilons.as_ref().unwrap();

    let check = finite_difference_check(shape, &v, k, cfg.refine, eps, &cfg.eig_options())?;
    write_text(&out.join("fd_table.csv"), &fd_csv(&check))?;

    // cluster-level detail for the JSON report; same solver inputs as the
    // base solve inside the check, so the numbers agree bitwise
    let v0 = v.project_zero_mean(shape);
    let pack = solve(cfg, k + 5)?;
    let osd = one_sided_derivatives(&pack, k, &v0);
    write_json(
        &out.join("derivative.json"),
        &DerivativeReport {
            eigen_index: k,
            lambda: check.lambda0,
            cluster: osd.cluster,
            position: osd.position,
            qform_eigenvalues: osd.qform_eigenvalues,
            predicted_right: check.predicted_right,
            predicted_left: check.predicted_left,
        },
    )?;
    log::info!(
        "deriv: λ_{k} = {}, one-sided derivatives [{}, {}]",
        check.lambda0,
        check.predicted_left,
        check.predicted_right
    );
    Ok(())
}

fn cmd_critical(cfg: &RunConfig, out: &Path) -> Result<()> {
    let tol = cfg.critical_tol.unwrap();
    let pack = solve(cfg, cfg.k)?;
    let mut clusters = Vec::new();
    for cluster in &pack.clusters {
        if cluster[0] >= cfg.k {
            break; // completion mates beyond the requested count
        }
        let mean =
            cluster.iter().map(|&i| pack.eigenvalues[i]).sum::<f64>() / cluster.len() as f64;
        let verdict = if cluster.len() == 1 {
            let s = criticality_simple(&pack, cluster[0], tol)?;
            ClusterVerdict {
                indices: cluster.clone(),
                eigenvalue: mean,
                spread: Some(s.spread),
                identity_residual: None,
                critical: s.critical,
            }
        } else {
            let c = criticality_cluster(&pack, cluster[0], tol);
            ClusterVerdict {
                indices: cluster.clone(),
                eigenvalue: mean,
                spread: None,
                identity_residual: Some(c.identity_residual),
                critical: c.critical,
            }
        };
        clusters.push(verdict);
    }
    let n_critical = clusters.iter().filter(|c| c.critical).count();
    log::info!("critical: {n_critical}/{} clusters pass at tol {tol}", clusters.len());
    write_json(&out.join("criticality.json"), &CriticalityReport { tol, clusters })
}

fn cmd_heat(cfg: &RunConfig, out: &Path) -> Result<()> {
    let ts = cfg.times.as_ref().unwrap();
    let pack = solve(cfg, cfg.k)?;
    let samples = heat_trace(&pack, ts, cfg.tail_rel_tol.unwrap())?;
    let coeffs = asymptotic_coeffs(cfg.shape(), cfg.quadrature)?;
    let asym: Vec<f64> = ts.iter().map(|&t| coeffs.eval(t)).collect();
    write_text(&out.join("trace.csv"), &trace_csv(&samples, &asym))?;
    log::info!("heat: {} times, {} eigenvalues in the sum", ts.len(), pack.len());
    Ok(())
}

fn cmd_flow(cfg: &RunConfig, out: &Path) -> Result<()> {
    let run = run_flow(cfg.shape(), &cfg.flow_options())?;
    write_text(&out.join("trajectory.csv"), &trajectory_csv(&run))?;
    write_json(&out.join("final_shape.json"), &run.final_state().shape)?;
    log::info!(
        "flow: {} accepted steps, stop = {}, λ = {}",
        run.states.len() - 1,
        run.stop.name(),
        run.final_state().lambda
    );
    Ok(())
}
