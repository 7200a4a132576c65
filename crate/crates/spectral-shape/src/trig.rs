//! Real trigonometric polynomials on uniform periodic grids.
//!
//! Boundary data lives on two different uniform angle grids: the shape's
//! quadrature nodes and the mesh boundary nodes. Both are equispaced in θ, so
//! resampling between them is exact (for band-limited data) via the discrete
//! Fourier interpolant. Grid sizes stay in the hundreds, so the O(Q²) direct
//! transforms below are cheap and keep the code free of FFT plumbing.

use std::f64::consts::TAU;

/// `f(θ) = a0 + Σ_{m≥1} (cos_coeffs[m-1]·cos mθ + sin_coeffs[m-1]·sin mθ)`.
#[derive(Clone, Debug)]
pub struct TrigPoly {
    pub a0: f64,
    pub cos_coeffs: Vec<f64>,
    pub sin_coeffs: Vec<f64>,
}

impl TrigPoly {
    /// Interpolate samples taken at the uniform angles `θ_j = 2πj/Q`.
    ///
    /// The result reproduces the samples exactly and is the unique trig
    /// polynomial of minimal bandwidth through them. For even `Q` the Nyquist
    /// mode `Q/2` appears as a pure cosine with the conventional halved
    /// weight.
    pub fn interpolate(samples: &[f64]) -> Self {
        let q = samples.len();
        assert!(q >= 1, "need at least one sample");
        let mut a0 = 0.0;
        for &f in samples {
            a0 += f;
        }
        a0 /= q as f64;

        let m_max = q / 2;
        let mut cos_coeffs = vec![0.0; m_max];
        let mut sin_coeffs = vec![0.0; m_max];
        for m in 1..=m_max {
            let mut ac = 0.0;
            let mut as_ = 0.0;
            for (j, &f) in samples.iter().enumerate() {
                let ang = TAU * (m * j % q) as f64 / q as f64;
                ac += f * ang.cos();
                as_ += f * ang.sin();
            }
            // Nyquist mode of an even grid: cos(mθ_j) = ±1 carries all the
            // information, the sine component vanishes identically.
            let scale = if 2 * m == q { 1.0 } else { 2.0 };
            cos_coeffs[m - 1] = scale * ac / q as f64;
            sin_coeffs[m - 1] = if 2 * m == q { 0.0 } else { scale * as_ / q as f64 };
        }
        TrigPoly { a0, cos_coeffs, sin_coeffs }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut f = self.a0;
        for m in 1..=self.cos_coeffs.len() {
            let (s, c) = (m as f64 * theta).sin_cos();
            f += self.cos_coeffs[m - 1] * c + self.sin_coeffs[m - 1] * s;
        }
        f
    }

    pub fn eval_many(&self, angles: &[f64]) -> Vec<f64> {
        angles.iter().map(|&t| self.eval(t)).collect()
    }

    /// Highest mode index whose amplitude exceeds `rel_tol` times the largest
    /// amplitude (0 if the polynomial is essentially constant). Useful for
    /// trimming interpolants of numerically band-limited data before fitting.
    pub fn significant_modes(&self, rel_tol: f64) -> usize {
        let amp = |m: usize| self.cos_coeffs[m - 1].hypot(self.sin_coeffs[m - 1]);
        let mut peak = self.a0.abs();
        for m in 1..=self.cos_coeffs.len() {
            peak = peak.max(amp(m));
        }
        if peak == 0.0 {
            return 0;
        }
        (1..=self.cos_coeffs.len())
            .rev()
            .find(|&m| amp(m) > rel_tol * peak)
            .unwrap_or(0)
    }
}

/// The uniform angle grid `θ_j = 2πj/Q`, `j = 0..Q`.
pub fn uniform_angles(q: usize) -> Vec<f64> {
    (0..q).map(|j| TAU * j as f64 / q as f64).collect()
}
