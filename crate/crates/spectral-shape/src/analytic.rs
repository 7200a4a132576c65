//! Closed-form Dirichlet spectra for disks and rectangles.
//!
//! These values come from classical special-function identities, not from the
//! finite element pipeline, so they serve as independent references when
//! validating discrete spectra. Disk eigenvalues are squared zeros of Bessel
//! functions, `λ = (j_{m,s}/R)²` with multiplicity two for `m ≥ 1`;
//! rectangle eigenvalues are `π²(m²/a² + n²/b²)`.
//!
//! `J_m` is evaluated with Miller's backward recurrence (accurate to near
//! machine precision for the argument range used here, `x ≲ 60`), and zeros
//! are isolated by a sign scan plus bisection — no tables.

/// Bessel function of the first kind `J_nu(x)` for integer order `nu ≥ 0`.
pub fn bessel_j(nu: usize, x: f64) -> f64 {
    bessel_j_upto(nu, x)[nu]
}

/// `J_0 .. J_{n_max}` at `x` by backward (Miller) recurrence, normalized with
/// `J_0 + 2 Σ_{k≥1} J_{2k} = 1`.
fn bessel_j_upto(n_max: usize, x: f64) -> Vec<f64> {
    assert!(x >= 0.0, "negative argument");
    if x < 1e-12 {
        let mut out = vec![0.0; n_max + 1];
        out[0] = 1.0;
        return out;
    }
    // start the downward recurrence well above both the order and the
    // argument; 1.2x + 36 keeps the truncation error below 1e-15 for x ≤ 60
    let start = ((1.2 * x) as usize).max(n_max) + 36;
    let mut jp1 = 0.0_f64;
    let mut j = 1e-300_f64;
    let mut vals = vec![0.0; n_max + 1];
    let mut norm = 0.0; // accumulates J_0 + 2 Σ J_{2k}
    for k in (0..=start).rev() {
        let jm1 = (2.0 * (k as f64 + 1.0) / x) * j - jp1;
        jp1 = j;
        j = jm1;
        if k <= n_max {
            vals[k] = j;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j } else { 2.0 * j };
        }
        // rescale before overflow; recurrence is linear so this is harmless
        if j.abs() > 1e250 {
            jp1 /= 1e250;
            j /= 1e250;
            norm /= 1e250;
            for v in vals.iter_mut() {
                *v /= 1e250;
            }
        }
    }
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals
}

/// The `s`-th positive zero `j_{nu,s}` of `J_nu` (`s ≥ 1`), to ~1e-13.
pub fn bessel_j_zero(nu: usize, s: usize) -> f64 {
    assert!(s >= 1, "zeros are indexed from 1");
    // zeros of J_nu lie above nu; successive zeros are at least ~π/2 apart in
    // the range of interest, so a 0.1 scan cannot skip a pair
    let mut x = nu as f64 + 1e-3;
    let step = 0.1;
    let mut f_prev = bessel_j(nu, x);
    let mut found = 0;
    loop {
        let x_next = x + step;
        let f_next = bessel_j(nu, x_next);
        if f_prev == 0.0 {
            found += 1;
            if found == s {
                return x;
            }
        } else if f_prev.signum() != f_next.signum() {
            found += 1;
            if found == s {
                // bisect to machine-level accuracy
                let (mut lo, mut hi) = (x, x_next);
                let mut f_lo = f_prev;
                for _ in 0..80 {
                    let mid = 0.5 * (lo + hi);
                    let f_mid = bessel_j(nu, mid);
                    if f_mid == 0.0 {
                        return mid;
                    }
                    if f_lo.signum() != f_mid.signum() {
                        hi = mid;
                    } else {
                        lo = mid;
                        f_lo = f_mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
        }
        x = x_next;
        f_prev = f_next;
        assert!(x < nu as f64 + 20.0 + 4.0 * s as f64, "zero scan ran away");
    }
}

/// First `count` Dirichlet eigenvalues of the disk of radius `radius`,
/// ascending, with the natural multiplicities (angular modes `m ≥ 1` are
/// double).
pub fn disk_eigenvalues(radius: f64, count: usize) -> Vec<f64> {
    assert!(radius > 0.0 && count > 0);
    // Weyl count on the unit disk: N(λ) ≈ λ/4, so zeros up to
    // x ≈ 2√count (+ margin) suffice
    let x_max = 2.0 * (count as f64).sqrt() + 10.0;
    let mut lams = Vec::new();
    let mut m = 0;
    while (m as f64) < x_max {
        let mut s = 1;
        loop {
            let z = bessel_j_zero(m, s);
            if z > x_max {
                break;
            }
            let lam = (z / radius) * (z / radius);
            lams.push(lam);
            if m >= 1 {
                lams.push(lam);
            }
            s += 1;
        }
        m += 1;
    }
    lams.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert!(lams.len() >= count, "zero cutoff too small for requested count");
    lams.truncate(count);
    lams
}

/// First `count` Dirichlet eigenvalues of the rectangle `(0,a) × (0,b)`,
/// ascending with multiplicity: `λ_{m,n} = π²(m²/a² + n²/b²)`.
pub fn rectangle_eigenvalues(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(a > 0.0 && b > 0.0 && count > 0);
    use std::f64::consts::PI;
    // λ grows like π² m²/a², so m_max = ceil(a·sqrt(λ_max))/π with a safe λ_max
    let lam_max = 4.0 * PI * (count as f64 + 1.0) / (a * b) + 8.0 * PI * PI * (1.0 / (a * a) + 1.0 / (b * b));
    let m_max = (a * lam_max.sqrt() / PI).ceil() as usize + 1;
    let n_max = (b * lam_max.sqrt() / PI).ceil() as usize + 1;
    let mut lams = Vec::new();
    for m in 1..=m_max {
        for n in 1..=n_max {
            lams.push(PI * PI * ((m * m) as f64 / (a * a) + (n * n) as f64 / (b * b)));
        }
    }
    lams.sort_by(|x, y| x.partial_cmp(y).unwrap());
    assert!(lams.len() >= count);
    lams.truncate(count);
    lams
}
