//! Shape calculus for Dirichlet Laplacian eigenvalues on star-shaped planar
//! domains.
//!
//! A domain is described by a truncated Fourier radial function
//! `r(θ) = r0 + Σ_m (a_m cos mθ + b_m sin mθ)` and discretized by a
//! fixed-topology triangulation of the unit disk mapped radially onto the
//! shape, so spectra vary smoothly under boundary deformations (no remeshing
//! noise). On top of the P1 finite element spectrum the crate computes:
//!
//! - first-order eigenvalue derivatives under volume-preserving normal
//!   velocities (Hadamard boundary integrals of the eigenfunction flux),
//! - one-sided derivatives at degenerate eigenvalues via the quadratic form
//!   `q_v(φ_i, φ_j) = -∫ v (∂φ_i/∂ν)(∂φ_j/∂ν) ds` restricted to the
//!   eigenspace, whose eigenvalues are the derivatives of the analytic
//!   eigenvalue branches,
//! - criticality certificates: constant flux for simple eigenvalues, and the
//!   positive-semidefinite combination `Σ G_ij (∂φ_i/∂ν)(∂φ_j/∂ν) ≡ const`
//!   for clusters,
//! - the heat trace `Y(t) = Σ_k exp(-λ_k t)`, its shape derivative, and the
//!   small-time asymptotic coefficients (area, perimeter, curvature
//!   integrals),
//! - a gradient flow that decreases `λ_1` at fixed area and converges to the
//!   disk (Faber-Krahn).
//!
//! The discrete boundary flux `∂φ/∂ν` is recovered variationally from the
//! unconstrained stiffness/mass residual, which keeps every boundary integral
//! consistent with the discrete eigenpair it came from.
//!
//! # Example
//!
//! ```
//! use spectral_shape::domain::BoundaryShape;
//! use spectral_shape::mesh::disk_mesh;
//! use spectral_shape::fem::assemble;
//! use spectral_shape::eig::{solve_spectrum, EigOptions};
//!
//! let shape = BoundaryShape::disk(1.0);
//! let mesh = disk_mesh(&shape, 8).unwrap();
//! let system = assemble(mesh).unwrap();
//! let pack = solve_spectrum(system, &EigOptions::new(1)).unwrap();
//! // first Dirichlet eigenvalue of the unit disk is j_{0,1}^2 ≈ 5.7832
//! assert!((pack.eigenvalues[0] - 5.7832).abs() < 0.05);
//! ```
//!
//! The `examples/` directory walks through each capability end to end
//! (spectra, derivative checks, degenerate derivatives, criticality, heat
//! trace, descent flow, batch runs). For scripted pipelines the
//! `spectral-shape` binary runs JSON-configured batch jobs ([`config`],
//! [`cli`]) and writes deterministic CSV/JSON artifacts ([`report`]).

pub mod analytic;
pub mod cli;
pub mod config;
pub mod deriv;
pub mod domain;
pub mod eig;
pub mod error;
pub mod fem;
pub mod flow;
pub mod heat;
pub mod mesh;
pub mod report;
pub(crate) mod trig;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
