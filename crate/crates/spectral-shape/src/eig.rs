//! Generalized symmetric eigensolver for the Dirichlet pencil `K u = λ M u`.
//!
//! Two paths share one Rayleigh–Ritz core:
//!
//! - **dense** (small systems, or many requested pairs): reduce with the mass
//!   Cholesky `M = LLᵀ` to a standard self-adjoint problem `L⁻¹KL⁻ᵀ` and take
//!   the lowest eigenpairs of the full decomposition;
//! - **sparse shift-invert** (large systems, few pairs): factor `K` once with
//!   a sparse Cholesky and run blocked inverse subspace iteration
//!   `X ← K⁻¹(MX)` with a generalized Rayleigh–Ritz rotation per sweep. The
//!   block is `k + 4` columns so a trailing eigenvalue cluster of the usual
//!   multiplicities cannot straddle the block boundary (convergence of pair
//!   `i` is geometric with ratio `λ_i/λ_{block+1}`).
//!
//! Everything is seeded and sequential, so a given mesh and option set always
//! reproduces bitwise identical spectra.
//!
//! The boundary flux `∂φ/∂ν` of an eigenfunction is recovered variationally:
//! testing the eigenequation with a boundary hat `ψ_j` gives
//! `(K_full φ − λ M_full φ)_j ≈ ∮ (∂φ/∂ν) ψ_j ds = (∂φ/∂ν)(x_j)·w_j`, so
//! dividing the unconstrained residual row by the lumped boundary mass `w_j`
//! yields the flux at boundary node `j` — consistent, by construction, with
//! the discrete eigenpair and the matrices that produced it.

use std::sync::Arc;

use faer::linalg::triangular_solve::{
    solve_lower_triangular_in_place, solve_upper_triangular_in_place,
};
use faer::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fem::{DirichletSystem, SparseSymMatrix};
use crate::{Error, Result};

/// Relative gap under which adjacent eigenvalues are treated as one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-4;
/// Relative eigenpair residual the solver must reach.
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
/// Interior size below which the dense path is used unconditionally.
pub const DEFAULT_DENSE_THRESHOLD: usize = 2000;
/// Beyond this many requested pairs the subspace iteration stops paying off
/// and the solver falls back to the dense path.
pub const SPARSE_K_LIMIT: usize = 20;
/// Default RNG seed for the subspace iteration start block.
pub const DEFAULT_SEED: u64 = 0x00c0ffee;

/// Solver options; `new(k)` fills in the defaults above.
#[derive(Clone, Debug)]
pub struct EigOptions {
    /// Number of (lowest) eigenpairs to return. The solver may return a few
    /// more: when `λ_{k-1}` sits inside a cluster, the pack is extended until
    /// the cluster is complete, so downstream consumers never see a
    /// degenerate group cut in half by the truncation.
    pub k: usize,
    pub cluster_tol: f64,
    pub residual_tol: f64,
    pub dense_threshold: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl EigOptions {
    pub fn new(k: usize) -> Self {
        EigOptions {
            k,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            residual_tol: DEFAULT_RESIDUAL_TOL,
            dense_threshold: DEFAULT_DENSE_THRESHOLD,
            max_iterations: 400,
            seed: DEFAULT_SEED,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_cluster_tol(mut self, tol: f64) -> Self {
        self.cluster_tol = tol;
        self
    }
}

/// The lowest part of a discrete Dirichlet spectrum with everything the
/// shape calculus needs: M-orthonormal eigenvectors, per-pair residuals, the
/// cluster partition, and the recovered boundary fluxes.
#[derive(Clone, Debug)]
pub struct SpectralPack {
    pub system: Arc<DirichletSystem>,
    /// Ascending eigenvalues `λ_0 ≤ … ≤ λ_{k-1}` (0-based indexing).
    pub eigenvalues: Vec<f64>,
    /// Interior-node coordinates of the eigenvectors, M-orthonormal, sign
    /// fixed so the entry of largest magnitude is positive.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Relative residuals `‖Ku − λMu‖ / (λ‖Mu‖)`.
    pub residuals: Vec<f64>,
    /// Partition of `0..k` into maximal groups with relative gaps below
    /// `cluster_tol`.
    pub clusters: Vec<Vec<usize>>,
    /// `∂φ_i/∂ν` at the boundary nodes (mesh boundary order), one row per
    /// eigenfunction; equals [`normal_derivative_trace`] of each pair.
    pub normal_derivatives: Vec<Vec<f64>>,
    pub cluster_tol: f64,
}

impl SpectralPack {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// The cluster containing eigenvalue index `k`.
    pub fn cluster_of(&self, k: usize) -> &[usize] {
        self.clusters
            .iter()
            .find(|c| c.contains(&k))
            .expect("index out of range")
    }

    /// Is `λ_k` simple at the pack's cluster tolerance?
    pub fn is_simple(&self, k: usize) -> bool {
        self.cluster_of(k).len() == 1
    }

    /// Eigenvector over all mesh nodes (zero on the boundary).
    pub fn eigenvector_full(&self, k: usize) -> Vec<f64> {
        self.system.extend_with_zeros(&self.eigenvectors[k])
    }
}

/// Group ascending eigenvalues into maximal runs of relative gap ≤ `tol`.
pub fn cluster_partition(eigenvalues: &[f64], tol: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for i in 0..eigenvalues.len() {
        let joins = i > 0 && {
            let gap = eigenvalues[i] - eigenvalues[i - 1];
            gap <= tol * eigenvalues[i].abs().max(f64::MIN_POSITIVE)
        };
        if joins {
            clusters.last_mut().unwrap().push(i);
        } else {
            clusters.push(vec![i]);
        }
    }
    clusters
}

/// Variational boundary flux of an eigenpair (see module docs): the
/// unconstrained residual `(K_full − λM_full)φ` at each boundary node divided
/// by its lumped boundary mass, in `mesh.boundary` order.
pub fn normal_derivative_trace(
    system: &DirichletSystem,
    lambda: f64,
    u_interior: &[f64],
) -> Vec<f64> {
    let u_full = system.extend_with_zeros(u_interior);
    let ku = system.k_full.matvec_alloc(&u_full);
    let mu = system.m_full.matvec_alloc(&u_full);
    system
        .mesh
        .boundary
        .iter()
        .zip(&system.boundary_weights)
        .map(|(b, &w)| (ku[b.node as usize] - lambda * mu[b.node as usize]) / w)
        .collect()
}

/// Compute the lowest `opts.k` eigenpairs of the Dirichlet pencil (possibly
/// a few more — the pack is never truncated in the middle of a cluster).
pub fn solve_spectrum(
    system: impl Into<Arc<DirichletSystem>>,
    opts: &EigOptions,
) -> Result<SpectralPack> {
    let system: Arc<DirichletSystem> = system.into();
    let n = system.interior_dim();
    if opts.k == 0 || opts.k > n {
        return Err(Error::InvalidConfig(format!(
            "requested {} eigenpairs from a system with {} interior nodes",
            opts.k, n
        )));
    }
    faer::set_global_parallelism(faer::Par::Seq); // bitwise reproducibility

    let (lambdas, mut vectors) = if n <= opts.dense_threshold || opts.k > SPARSE_K_LIMIT {
        dense_lowest(&system.k_int, &system.m_int, opts.k, opts.cluster_tol)?
    } else {
        shift_invert_lowest(&system.k_int, &system.m_int, opts)?
    };
    let count = lambdas.len();

    // deterministic sign: entry of largest magnitude positive
    for u in vectors.iter_mut() {
        let mut best = 0usize;
        for (i, v) in u.iter().enumerate() {
            if v.abs() > u[best].abs() {
                best = i;
            }
        }
        if u[best] < 0.0 {
            for v in u.iter_mut() {
                *v = -*v;
            }
        }
    }

    // residuals of the reduced pencil
    let mut residuals = Vec::with_capacity(count);
    for (lam, u) in lambdas.iter().zip(&vectors) {
        let ku = system.k_int.matvec_alloc(u);
        let mu = system.m_int.matvec_alloc(u);
        let num: f64 = ku
            .iter()
            .zip(&mu)
            .map(|(a, b)| (a - lam * b) * (a - lam * b))
            .sum::<f64>()
            .sqrt();
        let den = lam * mu.iter().map(|b| b * b).sum::<f64>().sqrt();
        residuals.push(num / den);
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    if worst > opts.residual_tol {
        return Err(Error::NotConverged {
            iterations: opts.max_iterations,
            residual: worst,
            tol: opts.residual_tol,
        });
    }

    let normal_derivatives = lambdas
        .iter()
        .zip(&vectors)
        .map(|(&lam, u)| normal_derivative_trace(&system, lam, u))
        .collect();

    Ok(SpectralPack {
        clusters: cluster_partition(&lambdas, opts.cluster_tol),
        eigenvalues: lambdas,
        eigenvectors: vectors,
        residuals,
        normal_derivatives,
        cluster_tol: opts.cluster_tol,
        system,
    })
}

/// Lowest `take` eigenpairs of the dense pencil `(K, M)`, M-orthonormal
/// vectors, via the mass Cholesky reduction `L⁻¹KL⁻ᵀ`.
///
/// When `extend_tol > 0`, `take` grows past a cluster boundary: extra pairs
/// are included while the relative gap stays below the tolerance.
fn generalized_lowest(
    k_dense: Mat<f64>,
    m_dense: Mat<f64>,
    take: usize,
    extend_tol: f64,
) -> Result<(Vec<f64>, Mat<f64>)> {
    let llt = m_dense
        .llt(faer::Side::Lower)
        .map_err(|_| Error::InvalidConfig("mass/Gram matrix is not positive definite".into()))?;
    let l = llt.L();

    // C = L⁻¹ K L⁻ᵀ, built via two triangular solves (C is symmetric, so the
    // second solve can act on the transpose of the first result)
    let mut b = k_dense;
    solve_lower_triangular_in_place(l.as_ref(), b.as_mut(), Par::Seq);
    let mut c = b.transpose().to_owned();
    solve_lower_triangular_in_place(l.as_ref(), c.as_mut(), Par::Seq);

    let evd = c
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|_| Error::NotConverged { iterations: 0, residual: f64::NAN, tol: 0.0 })?;
    let s = evd.S();
    let u = evd.U();

    let n = u.nrows();
    let mut take = take;
    while take < n && s[take] - s[take - 1] <= extend_tol * s[take].abs().max(f64::MIN_POSITIVE) {
        take += 1;
    }

    // back-substitute the requested columns: u = L⁻ᵀ y
    let mut x = Mat::from_fn(n, take, |i, j| u[(i, j)]);
    solve_upper_triangular_in_place(l.transpose(), x.as_mut(), Par::Seq);
    let lambdas = (0..take).map(|i| s[i]).collect();
    Ok((lambdas, x))
}

fn mat_to_columns(m: &Mat<f64>) -> Vec<Vec<f64>> {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)]).collect())
        .collect()
}

fn dense_lowest(
    k_int: &SparseSymMatrix,
    m_int: &SparseSymMatrix,
    take: usize,
    cluster_tol: f64,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let (lambdas, x) = generalized_lowest(k_int.to_dense(), m_int.to_dense(), take, cluster_tol)?;
    Ok((lambdas, mat_to_columns(&x)))
}

/// Sparse column matvec helper: `Y = A·X` column by column.
fn spmm(a: &SparseSymMatrix, x: &Mat<f64>) -> Mat<f64> {
    let mut y = Mat::zeros(x.nrows(), x.ncols());
    let mut xcol = vec![0.0; x.nrows()];
    let mut ycol = vec![0.0; x.nrows()];
    for j in 0..x.ncols() {
        for i in 0..x.nrows() {
            xcol[i] = x[(i, j)];
        }
        a.matvec(&xcol, &mut ycol);
        for i in 0..x.nrows() {
            y[(i, j)] = ycol[i];
        }
    }
    y
}

/// Blocked inverse subspace iteration with generalized Rayleigh–Ritz.
fn shift_invert_lowest(
    k_int: &SparseSymMatrix,
    m_int: &SparseSymMatrix,
    opts: &EigOptions,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = k_int.dim();
    let block = (opts.k + 4).min(n);

    // factor K once; K is SPD after the Dirichlet reduction
    let triplets = k_int.lower_triplets();
    let sp = faer::sparse::SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .expect("CSR data is consistent");
    let llt = sp
        .sp_cholesky(faer::Side::Lower)
        .map_err(|_| Error::InvalidConfig("stiffness matrix is not positive definite".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x = Mat::from_fn(n, block, |_, _| rng.random::<f64>() - 0.5);

    // the two trailing block columns are convergence guards and are never
    // returned; cluster extension may claim columns up to that margin
    let lead = block - 2.min(block - opts.k);
    let mut worst = f64::INFINITY;
    for _iter in 1..=opts.max_iterations {
        // power step on K⁻¹M, then Ritz rotation in the (K, M) metric
        x = llt.solve(&spmm(m_int, &x));
        let kx = spmm(k_int, &x);
        let mx = spmm(m_int, &x);
        let gk = x.transpose() * &kx;
        let gm = x.transpose() * &mx;
        let (_theta, s) = generalized_lowest(gk, gm, block, 0.0)?;
        x = &x * &s;

        // Rayleigh quotients and residuals of the leading Ritz pairs
        let kx = spmm(k_int, &x);
        let mx = spmm(m_int, &x);
        let mut theta = vec![0.0; lead];
        let mut res = vec![0.0; lead];
        for i in 0..lead {
            let mut num = 0.0;
            let mut xmx = 0.0;
            let mut mnorm = 0.0;
            for r in 0..n {
                xmx += x[(r, i)] * mx[(r, i)];
                mnorm += mx[(r, i)] * mx[(r, i)];
            }
            let lam: f64 = (0..n).map(|r| x[(r, i)] * kx[(r, i)]).sum::<f64>() / xmx;
            for r in 0..n {
                let d = kx[(r, i)] - lam * mx[(r, i)];
                num += d * d;
            }
            theta[i] = lam;
            res[i] = num.sqrt() / (lam * mnorm.sqrt());
        }

        // complete the final cluster inside the guard margin
        let mut count = opts.k;
        while count < lead
            && theta[count] - theta[count - 1]
                <= opts.cluster_tol * theta[count].abs().max(f64::MIN_POSITIVE)
        {
            count += 1;
        }
        worst = res[..count].iter().cloned().fold(0.0, f64::max);
        if worst <= opts.residual_tol {
            let cols = mat_to_columns(&x);
            theta.truncate(count);
            return Ok((theta, cols.into_iter().take(count).collect()));
        }
    }
    Err(Error::NotConverged {
        iterations: opts.max_iterations,
        residual: worst,
        tol: opts.residual_tol,
    })
}
