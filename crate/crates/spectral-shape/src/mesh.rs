//! Fixed-topology triangulations of star-shaped domains.
//!
//! The reference mesh triangulates the unit disk with concentric rings:
//! ring `i` of `n` carries `6i` nodes (`max(1, 6i)` counting the center), so a
//! mesh of refinement `n` has `1 + 3n(n+1)` nodes and `6n²` triangles. Nodes
//! are mapped onto a shape by `(s, θ) ↦ s·r(θ)·(cos θ, sin θ)` with `s = i/n`.
//! Because the topology never changes and the map is smooth in the Fourier
//! coefficients, discrete eigenvalues vary smoothly under boundary
//! deformations — finite differencing across shapes sees no remeshing noise.
//!
//! Structured rectangle meshes are provided for validation against separable
//! spectra; any externally built mesh can be wrapped with
//! [`TriangleMesh::from_parts`].

use std::f64::consts::TAU;

use crate::domain::BoundaryShape;
use crate::{Error, Result};

/// A boundary node together with its angular coordinate.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryNode {
    pub node: u32,
    /// Polar angle in `[0, 2π)` about the star center (shapes) or the
    /// centroid (rectangles); strictly increasing along the boundary walk.
    pub theta: f64,
}

/// Immutable triangulation with a positively oriented boundary walk.
#[derive(Clone, Debug)]
pub struct TriangleMesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counter-clockwise vertex triples.
    pub triangles: Vec<[u32; 3]>,
    /// Boundary nodes ordered by increasing `theta`, traversing ∂Ω once.
    pub boundary: Vec<BoundaryNode>,
    /// Ring count of the disk template (or grid resolution for rectangles).
    pub refinement: u32,
}

/// Global mesh quality numbers.
#[derive(Clone, Copy, Debug)]
pub struct MeshStatistics {
    /// Longest edge length.
    pub h_max: f64,
    /// Smallest interior angle over all triangles, in degrees.
    pub min_angle_deg: f64,
    /// Sum of (positive) triangle areas.
    pub total_area: f64,
}

impl TriangleMesh {
    /// Wrap raw arrays, validating orientation and extracting the boundary.
    ///
    /// Every triangle must be counter-clockwise with area above
    /// `1e-14·scale²`; the boundary (edges used by exactly one triangle) must
    /// form a single cycle. `angle_center` is the point about which boundary
    /// angles are measured — it must lie strictly inside.
    pub fn from_parts(
        nodes: Vec<[f64; 2]>,
        triangles: Vec<[u32; 3]>,
        refinement: u32,
        angle_center: [f64; 2],
    ) -> Result<Self> {
        // degeneracy threshold scales with the mesh extent
        let mut scale2 = 0.0_f64;
        for p in &nodes {
            scale2 = scale2.max(p[0] * p[0] + p[1] * p[1]);
        }
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                assert!((v as usize) < nodes.len(), "triangle {t} references missing node {v}");
            }
            let area = signed_area(&nodes, tri);
            if area <= 1e-14 * scale2 {
                return Err(Error::DegenerateTriangle { triangle: t, area });
            }
        }

        // boundary edges appear in exactly one triangle; directed (a→b) as in
        // the CCW triangle, the domain lies to the left
        use std::collections::HashMap;
        let mut count: HashMap<(u32, u32), u32> = HashMap::new();
        for tri in &triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                *count.entry(key).or_insert(0) += 1;
            }
        }
        let mut next: HashMap<u32, u32> = HashMap::new();
        for tri in &triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                if count[&(a.min(b), a.max(b))] == 1 {
                    let prev = next.insert(a, b);
                    assert!(prev.is_none(), "boundary is not a simple cycle at node {a}");
                }
            }
        }
        assert!(!next.is_empty(), "mesh has no boundary");

        // walk the cycle once
        let start = *next.keys().min().unwrap();
        let mut walk = vec![start];
        let mut cur = next[&start];
        while cur != start {
            walk.push(cur);
            cur = next[&cur];
            assert!(walk.len() <= next.len(), "boundary walk does not close");
        }
        assert_eq!(walk.len(), next.len(), "boundary has more than one cycle");

        // angles about the center, rotated to start at the smallest angle
        let angle = |v: u32| -> f64 {
            let p = nodes[v as usize];
            let mut t = (p[1] - angle_center[1]).atan2(p[0] - angle_center[0]);
            if t < 0.0 {
                t += TAU;
            }
            // snap values within rounding of 2π back to 0
            if TAU - t < 1e-12 {
                t = 0.0;
            }
            t
        };
        let first = (0..walk.len())
            .min_by(|&a, &b| angle(walk[a]).partial_cmp(&angle(walk[b])).unwrap())
            .unwrap();
        walk.rotate_left(first);
        let boundary: Vec<BoundaryNode> =
            walk.iter().map(|&v| BoundaryNode { node: v, theta: angle(v) }).collect();
        for w in boundary.windows(2) {
            assert!(
                w[1].theta > w[0].theta,
                "boundary angles not monotone: {} then {}",
                w[0].theta,
                w[1].theta
            );
        }

        Ok(TriangleMesh { nodes, triangles, boundary, refinement })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Longest edge, smallest angle, total area.
    pub fn statistics(&self) -> MeshStatistics {
        let mut h_max = 0.0_f64;
        let mut min_angle = f64::INFINITY;
        let mut total_area = 0.0;
        for tri in &self.triangles {
            let p = [
                self.nodes[tri[0] as usize],
                self.nodes[tri[1] as usize],
                self.nodes[tri[2] as usize],
            ];
            total_area += signed_area(&self.nodes, tri);
            for v in 0..3 {
                let a = p[v];
                let b = p[(v + 1) % 3];
                let c = p[(v + 2) % 3];
                let ab = [b[0] - a[0], b[1] - a[1]];
                let ac = [c[0] - a[0], c[1] - a[1]];
                let lab = (ab[0] * ab[0] + ab[1] * ab[1]).sqrt();
                let lac = (ac[0] * ac[0] + ac[1] * ac[1]).sqrt();
                h_max = h_max.max(lab);
                let cosang = ((ab[0] * ac[0] + ab[1] * ac[1]) / (lab * lac)).clamp(-1.0, 1.0);
                min_angle = min_angle.min(cosang.acos());
            }
        }
        MeshStatistics { h_max, min_angle_deg: min_angle.to_degrees(), total_area }
    }

    /// Boundary node angles, ordered as `self.boundary`.
    pub fn boundary_angles(&self) -> Vec<f64> {
        self.boundary.iter().map(|b| b.theta).collect()
    }

    /// Lumped boundary masses `w_j = ∫_∂Ω ψ_j ds`: half the length of the two
    /// boundary edges adjacent to node `j` (P1 hat functions).
    pub fn boundary_lumped_weights(&self) -> Vec<f64> {
        let nb = self.boundary.len();
        let mut edge_len = vec![0.0; nb];
        for j in 0..nb {
            let a = self.nodes[self.boundary[j].node as usize];
            let b = self.nodes[self.boundary[(j + 1) % nb].node as usize];
            edge_len[j] = ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt();
        }
        (0..nb).map(|j| 0.5 * (edge_len[j] + edge_len[(j + nb - 1) % nb])).collect()
    }
}

fn signed_area(nodes: &[[f64; 2]], tri: &[u32; 3]) -> f64 {
    let a = nodes[tri[0] as usize];
    let b = nodes[tri[1] as usize];
    let c = nodes[tri[2] as usize];
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

/// Triangulate a star-shaped domain with `n` concentric rings.
///
/// Node `(i, j)` of ring `i` sits at `(i/n)·r(θ_{ij})·(cos θ_{ij}, sin θ_{ij})`
/// with `θ_{ij} = 2πj/(6i)`; the boundary consists of ring `n`'s `6n` nodes at
/// uniform angles. Fails with [`Error::NonStarShaped`] for invalid shapes and
/// [`Error::DegenerateTriangle`] if the radial map folds a triangle over.
pub fn disk_mesh(shape: &BoundaryShape, n: u32) -> Result<TriangleMesh> {
    assert!(n >= 1, "refinement must be at least 1");
    shape.validate(crate::domain::DEFAULT_QUADRATURE_NODES.max(6 * n as usize))?;

    let n = n as usize;
    let ring_offset = |i: usize| -> usize {
        // 1 + Σ_{l<i} 6l
        if i == 0 {
            0
        } else {
            1 + 3 * i * (i - 1)
        }
    };

    let mut nodes = Vec::with_capacity(1 + 3 * n * (n + 1));
    nodes.push([0.0, 0.0]);
    for i in 1..=n {
        let s = i as f64 / n as f64;
        for j in 0..6 * i {
            let theta = TAU * j as f64 / (6 * i) as f64;
            let r = shape.radius(theta);
            let (sin, cos) = theta.sin_cos();
            nodes.push([s * r * cos, s * r * sin]);
        }
    }

    let mut triangles = Vec::with_capacity(6 * n * n);
    // center fan
    for j in 0..6 {
        triangles.push([1 + j as u32, 1 + ((j + 1) % 6) as u32, 0]);
    }
    // ring i → ring i+1, six sectors of a zigzag strip
    for i in 1..n {
        let off_in = ring_offset(i);
        let off_out = ring_offset(i + 1);
        let len_in = 6 * i;
        let len_out = 6 * (i + 1);
        for s in 0..6 {
            let a = |k: usize| (off_in + (s * i + k) % len_in) as u32;
            let b = |k: usize| (off_out + (s * (i + 1) + k) % len_out) as u32;
            for k in 0..=i {
                triangles.push([b(k), b(k + 1), a(k)]);
            }
            for k in 0..i {
                triangles.push([a(k), b(k + 1), a(k + 1)]);
            }
        }
    }

    TriangleMesh::from_parts(nodes, triangles, n as u32, [0.0, 0.0])
}

/// Structured triangulation of the rectangle `(0, a) × (0, b)` with
/// `nx × ny` cells, each split into four triangles around the cell center.
///
/// The crisscross split keeps the mesh of a square invariant under the full
/// symmetry group of the square (reflections *and* 90° rotations). That
/// matters for spectra: eigenvalue pairs such as `sin 2x sin y` /
/// `sin x sin 2y` are degenerate because the rotation exchanges them, and on
/// a rotation-invariant mesh the discrete pair stays exactly degenerate
/// instead of splitting at `O(h²)`.
pub fn rectangle_mesh(a: f64, b: f64, nx: usize, ny: usize) -> TriangleMesh {
    assert!(a > 0.0 && b > 0.0 && nx >= 1 && ny >= 1);
    let idx = |i: usize, j: usize| (j * (nx + 1) + i) as u32;
    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1) + nx * ny);
    for j in 0..=ny {
        for i in 0..=nx {
            nodes.push([a * i as f64 / nx as f64, b * j as f64 / ny as f64]);
        }
    }
    let center = |i: usize, j: usize| ((nx + 1) * (ny + 1) + j * nx + i) as u32;
    for j in 0..ny {
        for i in 0..nx {
            nodes.push([
                a * (i as f64 + 0.5) / nx as f64,
                b * (j as f64 + 0.5) / ny as f64,
            ]);
        }
    }
    let mut triangles = Vec::with_capacity(4 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let c = center(i, j);
            triangles.push([idx(i, j), idx(i + 1, j), c]);
            triangles.push([idx(i + 1, j), idx(i + 1, j + 1), c]);
            triangles.push([idx(i + 1, j + 1), idx(i, j + 1), c]);
            triangles.push([idx(i, j + 1), idx(i, j), c]);
        }
    }
    TriangleMesh::from_parts(nodes, triangles, nx.max(ny) as u32, [0.5 * a, 0.5 * b])
        .expect("structured rectangle mesh is always valid")
}
