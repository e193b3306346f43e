//! Quadrature rules: Gauss–Legendre nodes by Newton iteration on the
//! Legendre recurrence, and the product rule on the unit disk used by the
//! coherent-state integrals.
//!
//! The disk measure is smooth in `t = |zeta|^2` and every matrix entry is a
//! pure Fourier mode in the angle, so the natural rule is Gauss–Legendre in
//! `t` on `[0, r_max^2]` times a uniform angular grid. The angular rule is
//! exact for mode numbers below the node count; summation order is fixed so
//! results are bit-reproducible.

use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::types::CoreError;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
///
/// Newton iteration on P_n with the usual cosine initial guesses; accurate
/// to close to machine precision for the node counts used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        x.iter().map(|&xi| mid + half * xi).collect(),
        w.iter().map(|&wi| half * wi).collect(),
    )
}

/// Product quadrature on the disk `|zeta| <= r_max`, approximating
/// `\int f(zeta) d^2 zeta` as `sum w_i f(zeta_i)`.
///
/// Radial Gauss–Legendre in `t = |zeta|^2`, uniform angles: with `A` angular
/// nodes the rule integrates angular modes `e^{i m theta}` exactly for
/// `0 < |m| < A`.
#[derive(Debug, Clone)]
pub struct DiskQuadrature {
    /// Radial nodes in the variable `t = |zeta|^2`.
    pub t_nodes: Vec<f64>,
    /// Radial weights including the `dt/2` Jacobian of `d^2 zeta = (dt/2) dtheta`.
    pub t_weights: Vec<f64>,
    /// Uniform angles on `[0, 2 pi)`.
    pub angles: Vec<f64>,
    /// Cutoff radius, strictly inside the disk.
    pub r_max: f64,
}

impl DiskQuadrature {
    pub fn new(radial: usize, angular: usize, r_max: f64) -> crate::Result<Self> {
        if !(r_max > 0.0 && r_max < 1.0) {
            return Err(CoreError::InvalidParameter(alloc::format!(
                "r_max must lie in (0, 1), got {r_max}"
            )));
        }
        if radial == 0 || angular == 0 {
            return Err(CoreError::InvalidParameter(
                "node counts must be positive".into(),
            ));
        }
        let (t_nodes, mut t_weights) = gauss_legendre_on(radial, 0.0, r_max * r_max);
        // d^2 zeta = r dr dtheta = (dt/2) dtheta in t = r^2.
        for w in &mut t_weights {
            *w *= 0.5;
        }
        let angles = (0..angular)
            .map(|j| 2.0 * core::f64::consts::PI * j as f64 / angular as f64)
            .collect();
        Ok(DiskQuadrature {
            t_nodes,
            t_weights,
            angles,
            r_max,
        })
    }

    /// Same cutoff with both node counts doubled; the refinement step used
    /// by convergence checks.
    pub fn refined(&self) -> Self {
        DiskQuadrature::new(
            2 * self.t_nodes.len(),
            2 * self.angles.len(),
            self.r_max,
        )
        .expect("refinement of a valid rule is valid")
    }

    pub fn radial_count(&self) -> usize {
        self.t_nodes.len()
    }

    pub fn angular_count(&self) -> usize {
        self.angles.len()
    }

    /// Integrate `f(zeta) d^2 zeta` over the truncated disk in a fixed
    /// deterministic order (radial outer, angular inner).
    pub fn integrate(&self, mut f: impl FnMut(Complex64) -> Complex64) -> Complex64 {
        let dtheta = 2.0 * core::f64::consts::PI / self.angles.len() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&t, &wt) in self.t_nodes.iter().zip(&self.t_weights) {
            let r = t.sqrt();
            let mut ring = Complex64::new(0.0, 0.0);
            for &theta in &self.angles {
                let zeta = Complex64::from_polar(r, theta);
                ring += f(zeta);
            }
            acc += ring * Complex64::new(wt * dtheta, 0.0);
        }
        acc
    }
}
