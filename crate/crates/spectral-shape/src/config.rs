//! Run configuration for the batch front end.
//!
//! A run is described by a single strict-schema JSON file: unknown keys are
//! rejected, every omitted field takes a documented default, and the fully
//! resolved configuration is echoed next to the outputs so a run can be
//! reproduced byte for byte. The `command` field selects the operation; the
//! command-specific blocks (`velocity`, `epsilons`, `times`, `flow`) must be
//! present exactly when the command uses them.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::domain::{BoundaryShape, NormalVelocity, DEFAULT_QUADRATURE_NODES};
use crate::eig::{EigOptions, DEFAULT_CLUSTER_TOL, DEFAULT_SEED};
use crate::flow::FlowOptions;
use crate::{Error, Result};

/// Operation selected by a config file.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Solve the spectrum and dump it as CSV.
    Eigs,
    /// Finite-difference check of the predicted shape derivative.
    Deriv,
    /// Criticality report for every computed cluster.
    Critical,
    /// Heat-trace sweep against the small-time expansion.
    Heat,
    /// Area-constrained gradient descent of an eigenvalue.
    Flow,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Eigs => "eigs",
            Command::Deriv => "deriv",
            Command::Critical => "critical",
            Command::Heat => "heat",
            Command::Flow => "flow",
        }
    }
}

/// A normal velocity given by its Fourier modes, `a0 + Σ cos[m−1]·cos mθ +
/// sin[m−1]·sin mθ`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VelocitySpec {
    #[serde(default)]
    pub a0: f64,
    #[serde(default)]
    pub cos: Vec<f64>,
    #[serde(default)]
    pub sin: Vec<f64>,
}

impl VelocitySpec {
    /// Sample the series on the quadrature grid.
    pub fn build(&self, quadrature: usize) -> NormalVelocity {
        NormalVelocity::from_series(quadrature, self.a0, &self.cos, &self.sin)
    }
}

/// Descent-loop parameters; defaults mirror [`FlowOptions::new`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    #[serde(default = "defaults::max_steps")]
    pub max_steps: usize,
    #[serde(default = "defaults::initial_step")]
    pub initial_step: f64,
    #[serde(default = "defaults::min_step")]
    pub min_step: f64,
    #[serde(default = "defaults::grad_tol")]
    pub grad_tol: f64,
    #[serde(default = "defaults::max_modes")]
    pub max_modes: usize,
    #[serde(default = "defaults::max_amplitude_ratio")]
    pub max_amplitude_ratio: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            max_steps: defaults::max_steps(),
            initial_step: defaults::initial_step(),
            min_step: defaults::min_step(),
            grad_tol: defaults::grad_tol(),
            max_modes: defaults::max_modes(),
            max_amplitude_ratio: defaults::max_amplitude_ratio(),
        }
    }
}

mod defaults {
    use crate::flow::FlowOptions;

    pub fn refine() -> u32 {
        16
    }
    pub fn k() -> usize {
        6
    }
    pub fn cluster_tol() -> f64 {
        super::DEFAULT_CLUSTER_TOL
    }
    pub fn quadrature() -> usize {
        super::DEFAULT_QUADRATURE_NODES
    }
    pub fn seed() -> u64 {
        super::DEFAULT_SEED
    }
    pub fn critical_tol() -> f64 {
        1e-2
    }
    pub fn tail_rel_tol() -> f64 {
        1e-4
    }

    pub fn max_steps() -> usize {
        FlowOptions::new(0).max_steps
    }
    pub fn initial_step() -> f64 {
        FlowOptions::new(0).initial_step
    }
    pub fn min_step() -> f64 {
        FlowOptions::new(0).min_step
    }
    pub fn grad_tol() -> f64 {
        FlowOptions::new(0).grad_tol
    }
    pub fn max_modes() -> usize {
        FlowOptions::new(0).max_modes
    }
    pub fn max_amplitude_ratio() -> f64 {
        FlowOptions::new(0).max_amplitude_ratio
    }
}

/// One batch run: which operation, on which shape, with which parameters.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,

    /// Boundary shape, inline. Exactly one of `shape` / `shape_path`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<BoundaryShape>,
    /// Boundary shape loaded from a JSON file (resolved into `shape`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape_path: Option<PathBuf>,

    /// Mesh refinement (rings of the disk mesh).
    #[serde(default = "defaults::refine")]
    pub refine: u32,
    /// How many eigenvalues to compute.
    #[serde(default = "defaults::k")]
    pub k: usize,
    /// Which eigenvalue `deriv`/`flow` target (0-based).
    #[serde(default)]
    pub eigen_index: usize,
    /// Relative gap below which neighboring eigenvalues form a cluster.
    #[serde(default = "defaults::cluster_tol")]
    pub cluster_tol: f64,
    /// Boundary quadrature nodes for geometric integrals.
    #[serde(default = "defaults::quadrature")]
    pub quadrature: usize,
    /// Seed for the eigensolver start block.
    #[serde(default = "defaults::seed")]
    pub seed: u64,
    /// Output directory; may instead be supplied on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    /// `deriv`: the normal velocity of the deformation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity: Option<VelocitySpec>,
    /// `deriv`: step sizes for the difference quotients.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilons: Option<Vec<f64>>,
    /// `critical`: spread / residual threshold for the verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub critical_tol: Option<f64>,
    /// `heat`: evaluation times of the trace sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    /// `heat`: reject times whose spectral tail exceeds this relative bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_rel_tol: Option<f64>,
    /// `flow`: descent-loop parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowConfig>,
}

impl RunConfig {
    /// Parse a config file (strict schema).
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Resolve `shape_path` into an inline shape, check that every field the
    /// command needs is present and plausible, and reject blocks the command
    /// does not use. Returns the fully resolved config that gets echoed.
    pub fn resolved(mut self, config_dir: &Path) -> Result<RunConfig> {
        match (&self.shape, &self.shape_path) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidConfig(
                    "give either `shape` or `shape_path`, not both".into(),
                ))
            }
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "one of `shape` or `shape_path` is required".into(),
                ))
            }
            (None, Some(p)) => {
                let path = if p.is_relative() { config_dir.join(p) } else { p.clone() };
                let text = fs::read_to_string(&path).map_err(|source| Error::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                self.shape = Some(BoundaryShape::from_json(&text)?);
                self.shape_path = None;
            }
            (Some(_), None) => {}
        }

        if self.refine == 0 {
            return Err(Error::InvalidConfig("`refine` must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("`k` must be at least 1".into()));
        }
        if self.quadrature < 16 {
            return Err(Error::InvalidConfig("`quadrature` must be at least 16".into()));
        }
        if !(self.cluster_tol > 0.0 && self.cluster_tol < 1.0) {
            return Err(Error::InvalidConfig("`cluster_tol` must lie in (0, 1)".into()));
        }

        let require = |present: bool, name: &str, cmd: Command| -> Result<()> {
            if present {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "`{name}` is required for command \"{}\"",
                    cmd.name()
                )))
            }
        };
        let forbid = |absent: bool, name: &str, cmd: Command| -> Result<()> {
            if absent {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!(
                    "`{name}` is not used by command \"{}\"",
                    cmd.name()
                )))
            }
        };

        let cmd = self.command;
        match cmd {
            Command::Eigs | Command::Critical => {
                forbid(self.velocity.is_none(), "velocity", cmd)?;
                forbid(self.epsilons.is_none(), "epsilons", cmd)?;
                forbid(self.times.is_none(), "times", cmd)?;
                forbid(self.flow.is_none(), "flow", cmd)?;
                if cmd == Command::Eigs {
                    forbid(self.critical_tol.is_none(), "critical_tol", cmd)?;
                } else if self.critical_tol.is_none() {
                    self.critical_tol = Some(defaults::critical_tol());
                }
            }
            Command::Deriv => {
                require(self.velocity.is_some(), "velocity", cmd)?;
                require(self.epsilons.is_some(), "epsilons", cmd)?;
                forbid(self.times.is_none(), "times", cmd)?;
                forbid(self.flow.is_none(), "flow", cmd)?;
                forbid(self.critical_tol.is_none(), "critical_tol", cmd)?;
                let eps = self.epsilons.as_ref().unwrap();
                if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0)) {
                    return Err(Error::InvalidConfig(
                        "`epsilons` must be a nonempty list of positive steps".into(),
                    ));
                }
            }
            Command::Heat => {
                require(self.times.is_some(), "times", cmd)?;
                forbid(self.velocity.is_none(), "velocity", cmd)?;
                forbid(self.epsilons.is_none(), "epsilons", cmd)?;
                forbid(self.flow.is_none(), "flow", cmd)?;
                forbid(self.critical_tol.is_none(), "critical_tol", cmd)?;
                let ts = self.times.as_ref().unwrap();
                if ts.is_empty() || ts.iter().any(|&t| !(t > 0.0)) {
                    return Err(Error::InvalidConfig(
                        "`times` must be a nonempty list of positive times".into(),
                    ));
                }
                if self.tail_rel_tol.is_none() {
                    self.tail_rel_tol = Some(defaults::tail_rel_tol());
                }
            }
            Command::Flow => {
                forbid(self.velocity.is_none(), "velocity", cmd)?;
                forbid(self.epsilons.is_none(), "epsilons", cmd)?;
                forbid(self.times.is_none(), "times", cmd)?;
                forbid(self.critical_tol.is_none(), "critical_tol", cmd)?;
                if self.flow.is_none() {
                    self.flow = Some(FlowConfig::default());
                }
            }
        }
        if self.tail_rel_tol.is_some() && cmd != Command::Heat {
            return Err(Error::InvalidConfig(format!(
                "`tail_rel_tol` is not used by command \"{}\"",
                cmd.name()
            )));
        }

        self.shape.as_ref().unwrap().validate(self.quadrature)?;
        Ok(self)
    }

    /// The resolved shape (only valid after [`RunConfig::resolved`]).
    pub fn shape(&self) -> &BoundaryShape {
        self.shape.as_ref().expect("config was resolved")
    }

    /// Eigensolver options implied by this config.
    pub fn eig_options(&self) -> EigOptions {
        EigOptions::new(self.k)
            .with_seed(self.seed)
            .with_cluster_tol(self.cluster_tol)
    }

    /// Flow options implied by this config (command `flow`).
    pub fn flow_options(&self) -> FlowOptions {
        let f = self.flow.clone().unwrap_or_default();
        let mut o = FlowOptions::new(self.eigen_index);
        o.refine = self.refine;
        o.max_steps = f.max_steps;
        o.initial_step = f.initial_step;
        o.min_step = f.min_step;
        o.grad_tol = f.grad_tol;
        o.max_modes = f.max_modes;
        o.max_amplitude_ratio = f.max_amplitude_ratio;
        o.eig = o.eig.with_seed(self.seed).with_cluster_tol(self.cluster_tol);
        o
    }

    /// Pretty JSON echo (trailing newline included).
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}
