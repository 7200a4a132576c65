//! P1 finite element assembly for the Dirichlet Laplacian.
//!
//! Element matrices are closed-form: with CCW vertices `p1 p2 p3`, area `A`
//! and barycentric gradients `∇ψ_i = rot90(e_i)/(2A)` (`e_i` the edge opposite
//! vertex `i`), the stiffness block is `K_ij = A ∇ψ_i·∇ψ_j` and the mass block
//! `M_ij = A(1+δ_ij)/12`. Assembly is node-indexed and deterministic: triplets
//! are accumulated in triangle order and summed in sorted order, so the same
//! mesh always produces bitwise identical matrices.
//!
//! Two matrix pairs are kept: the unconstrained `(K_full, M_full)` over all
//! nodes — whose boundary rows encode the variational normal derivative used
//! by the shape calculus — and the Dirichlet-reduced `(K_int, M_int)` over
//! interior nodes, which define the discrete eigenproblem `K u = λ M u`.

use std::sync::Arc;

use crate::mesh::TriangleMesh;
use crate::Result;

/// Symmetric sparse matrix in CSR form (both triangles stored).
#[derive(Clone, Debug)]
pub struct SparseSymMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl SparseSymMatrix {
    /// Build from (row, col, value) triplets; duplicates are summed in
    /// `(row, col)` order, independent of input order.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(u32, u32, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut rows: Vec<u32> = Vec::new();
        let mut col_idx: Vec<u32> = Vec::new();
        let mut values: Vec<f64> = Vec::new();
        for (r, c, v) in triplets {
            debug_assert!((r as usize) < dim && (c as usize) < dim);
            if rows.last() == Some(&r) && col_idx.last() == Some(&c) {
                *values.last_mut().unwrap() += v;
            } else {
                rows.push(r);
                col_idx.push(c);
                values.push(v);
            }
        }
        let mut row_ptr = vec![0usize; dim + 1];
        for &r in &rows {
            row_ptr[r as usize + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseSymMatrix { dim, row_ptr, col_idx, values }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `y = A·x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        for r in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k] as usize];
            }
            y[r] = acc;
        }
    }

    pub fn matvec_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        y
    }

    /// `xᵀ·A·y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let ay = self.matvec_alloc(y);
        x.iter().zip(&ay).map(|(a, b)| a * b).sum()
    }

    /// Dense copy (small systems / tests).
    pub fn to_dense(&self) -> faer::Mat<f64> {
        let mut m = faer::Mat::zeros(self.dim, self.dim);
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                m[(r, self.col_idx[k] as usize)] = self.values[k];
            }
        }
        m
    }

    /// Lower-triangle triplets (for sparse Cholesky).
    pub fn lower_triplets(&self) -> Vec<faer::sparse::Triplet<usize, usize, f64>> {
        let mut t = Vec::new();
        for r in 0..self.dim {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k] as usize;
                if c <= r {
                    t.push(faer::sparse::Triplet::new(r, c, self.values[k]));
                }
            }
        }
        t
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        (self.row_ptr[r]..self.row_ptr[r + 1]).map(|k| self.values[k]).sum()
    }
}

/// Assembled stiffness/mass pairs plus the interior index maps.
#[derive(Clone, Debug)]
pub struct DirichletSystem {
    pub mesh: Arc<TriangleMesh>,
    /// Unconstrained matrices over all nodes.
    pub k_full: SparseSymMatrix,
    pub m_full: SparseSymMatrix,
    /// Dirichlet-reduced matrices over interior nodes.
    pub k_int: SparseSymMatrix,
    pub m_int: SparseSymMatrix,
    /// Interior node ids, ascending; position = reduced index.
    pub interior_nodes: Vec<u32>,
    /// node id → reduced index (None on the boundary).
    pub interior_index: Vec<Option<u32>>,
    /// Lumped boundary masses `∫ψ_j ds`, in `mesh.boundary` order.
    pub boundary_weights: Vec<f64>,
}

impl DirichletSystem {
    pub fn interior_dim(&self) -> usize {
        self.interior_nodes.len()
    }

    /// Scatter a reduced (interior) vector to all nodes, zero on the boundary.
    pub fn extend_with_zeros(&self, u_int: &[f64]) -> Vec<f64> {
        assert_eq!(u_int.len(), self.interior_dim());
        let mut full = vec![0.0; self.mesh.node_count()];
        for (pos, &node) in self.interior_nodes.iter().enumerate() {
            full[node as usize] = u_int[pos];
        }
        full
    }
}

/// Assemble the P1 system on a mesh.
pub fn assemble(mesh: impl Into<Arc<TriangleMesh>>) -> Result<DirichletSystem> {
    let mesh: Arc<TriangleMesh> = mesh.into();
    let n = mesh.node_count();

    let mut on_boundary = vec![false; n];
    for b in &mesh.boundary {
        on_boundary[b.node as usize] = true;
    }
    let mut interior_nodes = Vec::with_capacity(n - mesh.boundary.len());
    let mut interior_index: Vec<Option<u32>> = vec![None; n];
    for v in 0..n as u32 {
        if !on_boundary[v as usize] {
            interior_index[v as usize] = Some(interior_nodes.len() as u32);
            interior_nodes.push(v);
        }
    }

    let mut k_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut m_trip = Vec::with_capacity(9 * mesh.triangles.len());
    let mut k_int_trip = Vec::new();
    let mut m_int_trip = Vec::new();

    for tri in &mesh.triangles {
        let p = [
            mesh.nodes[tri[0] as usize],
            mesh.nodes[tri[1] as usize],
            mesh.nodes[tri[2] as usize],
        ];
        // 2A·∇ψ_i = opposite edge rotated by +90°
        let g = [
            [p[1][1] - p[2][1], p[2][0] - p[1][0]],
            [p[2][1] - p[0][1], p[0][0] - p[2][0]],
            [p[0][1] - p[1][1], p[1][0] - p[0][0]],
        ];
        // 2A from the cross product of two edges; positive by mesh validation
        let area2 = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1])
            - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]);
        debug_assert!(area2 > 0.0);
        for i in 0..3 {
            for j in 0..3 {
                // K_ij = A ∇ψ_i·∇ψ_j = (2A∇ψ_i)·(2A∇ψ_j)/(4A) = g_i·g_j/(2·2A)
                let kij = (g[i][0] * g[j][0] + g[i][1] * g[j][1]) / (2.0 * area2);
                let mij = area2 / 24.0 * if i == j { 2.0 } else { 1.0 };
                let (gi, gj) = (tri[i], tri[j]);
                k_trip.push((gi, gj, kij));
                m_trip.push((gi, gj, mij));
                if let (Some(ri), Some(rj)) =
                    (interior_index[gi as usize], interior_index[gj as usize])
                {
                    k_int_trip.push((ri, rj, kij));
                    m_int_trip.push((ri, rj, mij));
                }
            }
        }
    }

    let boundary_weights = mesh.boundary_lumped_weights();
    Ok(DirichletSystem {
        k_full: SparseSymMatrix::from_triplets(n, k_trip),
        m_full: SparseSymMatrix::from_triplets(n, m_trip),
        k_int: SparseSymMatrix::from_triplets(interior_nodes.len(), k_int_trip),
        m_int: SparseSymMatrix::from_triplets(interior_nodes.len(), m_int_trip),
        interior_nodes,
        interior_index,
        boundary_weights,
        mesh,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::BoundaryShape;
    use crate::mesh::{disk_mesh, rectangle_mesh, TriangleMesh};
    use rand::{Rng, SeedableRng};

    fn unit_right_triangle() -> TriangleMesh {
        TriangleMesh::from_parts(
            vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]],
            vec![[0, 1, 2]],
            1,
            [0.25, 0.25],
        )
        .unwrap()
    }

    #[test]
    fn element_matrices_on_the_unit_right_triangle() {
        let sys = assemble(unit_right_triangle()).unwrap();
        let k = sys.k_full.to_dense();
        let m = sys.m_full.to_dense();
        let k_exact = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        let m_exact = [
            [2.0 / 24.0, 1.0 / 24.0, 1.0 / 24.0],
            [1.0 / 24.0, 2.0 / 24.0, 1.0 / 24.0],
            [1.0 / 24.0, 1.0 / 24.0, 2.0 / 24.0],
        ];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[(i, j)] - k_exact[i][j]).abs() < 1e-15, "K[{i}{j}] = {}", k[(i, j)]);
                assert!((m[(i, j)] - m_exact[i][j]).abs() < 1e-15, "M[{i}{j}] = {}", m[(i, j)]);
            }
        }
    }

    #[test]
    fn stiffness_annihilates_constants() {
        let shape = BoundaryShape::disk(1.0).with_cos(2, 0.15);
        let sys = assemble(disk_mesh(&shape, 8).unwrap()).unwrap();
        for r in 0..sys.k_full.dim() {
            assert!(sys.k_full.row_sum(r).abs() < 1e-12, "row {r}");
        }
    }

    #[test]
    fn mass_reproduces_the_mesh_area() {
        let shape = BoundaryShape::disk(1.0).with_cos(2, 0.15);
        let mesh = disk_mesh(&shape, 8).unwrap();
        let area = mesh.statistics().total_area;
        let sys = assemble(mesh).unwrap();
        let ones = vec![1.0; sys.m_full.dim()];
        assert!((sys.m_full.bilinear(&ones, &ones) - area).abs() < 1e-12);
    }

    #[test]
    fn interior_count_excludes_exactly_the_boundary() {
        let mesh = disk_mesh(&BoundaryShape::disk(1.0), 5).unwrap();
        let sys = assemble(mesh).unwrap();
        assert_eq!(sys.interior_dim(), 1 + 3 * 5 * 6 - 30);
        assert_eq!(sys.k_int.dim(), sys.interior_dim());
        // interior matrices match the submatrix of the full ones
        let kf = sys.k_full.to_dense();
        let ki = sys.k_int.to_dense();
        for (a, &na) in sys.interior_nodes.iter().enumerate() {
            for (b, &nb) in sys.interior_nodes.iter().enumerate() {
                assert!((ki[(a, b)] - kf[(na as usize, nb as usize)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matrices_are_symmetric_and_matvec_matches_dense() {
        let sys = assemble(rectangle_mesh(1.0, 2.0, 4, 6)).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let x: Vec<f64> = (0..sys.k_full.dim()).map(|_| rng.random::<f64>() - 0.5).collect();
        for m in [&sys.k_full, &sys.m_full] {
            let d = m.to_dense();
            for i in 0..m.dim() {
                for j in 0..m.dim() {
                    assert!((d[(i, j)] - d[(j, i)]).abs() < 1e-15);
                }
            }
            let y = m.matvec_alloc(&x);
            for i in 0..m.dim() {
                let mut acc = 0.0;
                for j in 0..m.dim() {
                    acc += d[(i, j)] * x[j];
                }
                assert!((y[i] - acc).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triplet_order_does_not_change_the_matrix() {
        let trips = vec![(0u32, 1u32, 0.5), (1, 0, 0.5), (0, 0, 1.0), (0, 1, 0.25), (1, 1, 2.0)];
        let mut rev = trips.clone();
        rev.reverse();
        let a = SparseSymMatrix::from_triplets(2, trips).to_dense();
        let b = SparseSymMatrix::from_triplets(2, rev).to_dense();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a[(i, j)].to_bits(), b[(i, j)].to_bits());
            }
        }
        assert_eq!(a[(0, 1)], 0.75);
    }
}
