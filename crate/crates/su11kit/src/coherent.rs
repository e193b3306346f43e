//! Coherent states on the unit disk and upper half-plane.
//!
//! For lowest weight `lambda` and `|zeta| < 1` the coherent state has number
//! coefficients
//!
//! ```text
//! c_n = (1 - |zeta|^2)^{lambda/2} sqrt(Gamma(lambda+n) / (n! Gamma(lambda))) zeta^n,
//! ```
//!
//! is a unit vector, and satisfies `a |zeta⟩ = zeta |zeta⟩`. Half-plane
//! states are the same family relabeled through the Cayley map
//! `zeta = (eta - i)/(eta + i)`, and are eigenvectors of `A` with eigenvalue
//! `eta`. The group acts on labels by Möbius transformations
//! `zeta ↦ (mu* zeta + nu)/(nu* zeta + mu)` and on vectors by displacement
//! unitaries `U(xi) = exp(xi L+ + xi* L-)`.
//!
//! Gamma-function ratios are always evaluated through log-gamma differences
//! so truncations beyond a few hundred levels do not overflow.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::linalg;
use crate::quad::{gauss_legendre_on, DiskQuadrature};
use crate::rep;
use crate::types::{
    BasisTag, CoreError, LowestWeight, StateVector, ToleranceProfile, TruncatedOperator,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A measurement-outcome coordinate strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(zeta: Complex64) -> crate::Result<Self> {
        let r = zeta.norm();
        if !(r < 1.0) {
            return Err(CoreError::OutsideDisk(r));
        }
        Ok(DiskPoint(zeta))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// A coordinate strictly in the open upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint(Complex64);

impl HalfPlanePoint {
    pub fn new(eta: Complex64) -> crate::Result<Self> {
        if !(eta.im > 0.0) || !eta.re.is_finite() || !eta.im.is_finite() {
            return Err(CoreError::OutsideHalfPlane(eta.im));
        }
        Ok(HalfPlanePoint(eta))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Cayley map from the upper half-plane to the disk, `(eta - i)/(eta + i)`.
pub fn halfplane_to_disk(eta: HalfPlanePoint) -> DiskPoint {
    let e = eta.value();
    DiskPoint::new((e - I) / (e + I)).expect("Cayley maps the upper half-plane into the disk")
}

/// Inverse Cayley map, `i (1 + zeta)/(1 - zeta)`.
pub fn disk_to_halfplane(zeta: DiskPoint) -> HalfPlanePoint {
    let z = zeta.value();
    HalfPlanePoint::new(I * (c(1.0) + z) / (c(1.0) - z))
        .expect("the inverse Cayley map lands in the upper half-plane")
}

/// A group element written through the pair `(mu, nu)` with
/// `|mu|^2 - |nu|^2 = 1`, acting on the disk by
/// `zeta ↦ (mu* zeta + nu)/(nu* zeta + mu)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Su11Element {
    mu: Complex64,
    nu: Complex64,
}

impl Su11Element {
    pub fn new(mu: Complex64, nu: Complex64, tol: &ToleranceProfile) -> crate::Result<Self> {
        let defect = (mu.norm_sqr() - nu.norm_sqr() - 1.0).abs();
        // The constraint is quadratic in the entries; allow rounding at the
        // scale of the entries themselves.
        let scale = 1.0 + mu.norm_sqr() + nu.norm_sqr();
        if defect > tol.algebraic * scale * 10.0 {
            return Err(CoreError::NotInGroup(defect));
        }
        Ok(Su11Element { mu, nu })
    }

    pub fn identity() -> Self {
        Su11Element {
            mu: c(1.0),
            nu: c(0.0),
        }
    }

    /// The element implemented by the displacement unitary `U(xi)`:
    /// `mu = cosh |xi|`, `nu = e^{i arg xi} sinh |xi|`.
    pub fn from_displacement(xi: Complex64) -> Self {
        let r = xi.norm();
        let phase = if r > 0.0 { xi / c(r) } else { c(1.0) };
        Su11Element {
            mu: c(r.cosh()),
            nu: phase * c(r.sinh()),
        }
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    /// Group composition; `self.compose(&g)` acts like `g` first, then `self`.
    pub fn compose(&self, first: &Su11Element) -> Su11Element {
        // 2x2 matrix product of [[mu*, nu], [nu*, mu]] factors.
        let tl = self.mu.conj() * first.mu.conj() + self.nu * first.nu.conj();
        let tr = self.mu.conj() * first.nu + self.nu * first.mu;
        Su11Element {
            mu: tl.conj(),
            nu: tr,
        }
    }

    /// Factor `g = displacement(xi) ∘ rotation(phase)`: the rotation is the
    /// diagonal element with `mu = e^{i phase}`, acting on labels as
    /// `zeta ↦ e^{-2 i phase} zeta`. Only the displacement factor is
    /// exercised on state vectors; the rotation contributes a diagonal
    /// phase in the number basis.
    pub fn factor(&self) -> (Complex64, f64) {
        let phase = self.mu.arg();
        let ratio = self.nu.norm() / self.mu.norm();
        if ratio == 0.0 {
            return (c(0.0), phase);
        }
        let xi_arg = self.nu.arg() - phase;
        let xi_mag = ratio.atanh();
        (Complex64::from_polar(xi_mag, xi_arg), phase)
    }

    /// The diagonal (rotation) element `mu = e^{i phase}`, `nu = 0`.
    pub fn rotation(phase: f64) -> Self {
        Su11Element {
            mu: Complex64::from_polar(1.0, phase),
            nu: c(0.0),
        }
    }
}

/// Möbius action of a group element on an outcome label.
pub fn mobius_act(g: &Su11Element, zeta: DiskPoint) -> DiskPoint {
    let z = zeta.value();
    let w = (g.mu.conj() * z + g.nu) / (g.nu.conj() * z + g.mu);
    DiskPoint::new(w).expect("the Möbius action preserves the open disk")
}

/// `sqrt(Gamma(lambda+n) / (n! Gamma(lambda)))` for `n = 0..dim`, via
/// log-gamma differences.
pub(crate) fn sqrt_gamma_ratios(lambda: f64, dim: usize) -> Vec<f64> {
    let lg_lam = linalg::ln_gamma(lambda);
    (0..dim)
        .map(|n| {
            let nf = n as f64;
            (0.5 * (linalg::ln_gamma(lambda + nf) - linalg::ln_gamma(nf + 1.0) - lg_lam)).exp()
        })
        .collect()
}

/// Size of the first neglected coefficient,
/// `|zeta|^D sqrt(Gamma(lambda+D)/(D! Gamma(lambda)))`.
pub fn tail_bound(lambda: LowestWeight, radius: f64, dim: usize) -> f64 {
    if radius == 0.0 {
        return 0.0;
    }
    let lam = lambda.value();
    let d = dim as f64;
    (d * radius.ln()
        + 0.5 * (linalg::ln_gamma(lam + d) - linalg::ln_gamma(d + 1.0) - linalg::ln_gamma(lam)))
    .exp()
}

pub(crate) fn coefficients_unchecked(
    lambda: f64,
    zeta: Complex64,
    dim: usize,
) -> DVector<Complex64> {
    let t = zeta.norm_sqr();
    let prefactor = (1.0 - t).powf(0.5 * lambda);
    let ratios = sqrt_gamma_ratios(lambda, dim);
    let mut coeffs = DVector::zeros(dim);
    let mut zpow = c(1.0);
    for n in 0..dim {
        coeffs[n] = c(prefactor * ratios[n]) * zpow;
        zpow *= zeta;
    }
    coeffs
}

/// The coherent state at `zeta`, truncated to `dim` coefficients.
///
/// Rejects the request when the first neglected coefficient exceeds the
/// quadrature tolerance, so truncated states always carry essentially all
/// their mass.
pub fn coherent_state(
    lambda: LowestWeight,
    zeta: DiskPoint,
    dim: usize,
    tol: &ToleranceProfile,
) -> crate::Result<StateVector> {
    if dim < 2 {
        return Err(CoreError::DimensionTooSmall(dim));
    }
    let tail = tail_bound(lambda, zeta.value().norm(), dim);
    if tail > tol.quadrature {
        return Err(CoreError::TailBound {
            tail,
            tol: tol.quadrature,
        });
    }
    StateVector::new(
        coefficients_unchecked(lambda.value(), zeta.value(), dim),
        BasisTag::Su11Number,
    )
}

/// The half-plane coherent state, i.e. the disk state at the Cayley image.
pub fn halfplane_state(
    lambda: LowestWeight,
    eta: HalfPlanePoint,
    dim: usize,
    tol: &ToleranceProfile,
) -> crate::Result<StateVector> {
    coherent_state(lambda, halfplane_to_disk(eta), dim, tol)
}

/// Displacement parameter reaching `zeta` from the lowest state:
/// `xi = (1/2) e^{i arg zeta} ln((1+|zeta|)/(1-|zeta|))`.
pub fn displacement_parameter(zeta: DiskPoint) -> Complex64 {
    let z = zeta.value();
    let r = z.norm();
    if r == 0.0 {
        return c(0.0);
    }
    let phase = z / c(r);
    phase * c(0.5 * ((1.0 + r) / (1.0 - r)).ln())
}

/// The displacement unitary `U(xi) = exp(xi L+ + xi* L-)` as a truncated
/// matrix. The truncated generator is exactly skew-Hermitian, so the result
/// is unitary to rounding at every truncation.
pub fn displacement_unitary(
    xi: Complex64,
    lambda: LowestWeight,
    dim: usize,
    tol: &ToleranceProfile,
) -> crate::Result<TruncatedOperator> {
    let ladder = rep::build_ladder(lambda, dim)?;
    // The image of the lowest state is the coherent state at
    // e^{i arg xi} tanh |xi|; enforce its tail bound.
    let reach = xi.norm().tanh();
    let tail = tail_bound(lambda, reach, dim);
    if tail > tol.quadrature {
        return Err(CoreError::TailBound {
            tail,
            tol: tol.quadrature,
        });
    }
    let gen = ladder.l_plus.matrix() * xi + ladder.l_minus.matrix() * xi.conj();
    TruncatedOperator::new(linalg::expm(&gen), BasisTag::Su11Number)
}

/// Residual `||X v - ev v||` over the interior coefficients.
///
/// The trailing tenth of the coefficients is excluded: for banded and
/// triangular operators that is where the truncated band dumps its error.
pub fn eigen_residual(
    x: &TruncatedOperator,
    v: &StateVector,
    ev: Complex64,
) -> crate::Result<f64> {
    let image = x.apply(v)?;
    let diff = image.sub(&v.scaled(ev))?;
    let dim = diff.dim();
    let keep = dim - dim.div_ceil(10);
    let mut acc = 0.0;
    for n in 0..keep {
        acc += diff.coeffs()[n].norm_sqr();
    }
    Ok(acc.sqrt())
}

/// Quadrature realization of the coherent-state resolution of identity.
#[derive(Debug, Clone)]
pub struct ResolutionOfIdentity {
    /// `(lambda-1) ∮ |zeta⟩⟨zeta| d^2 zeta / (pi (1-|zeta|^2)^2)` over `|zeta| <= r_max`.
    pub op: TruncatedOperator,
    /// Exact mass lost to the cutoff per basis index; the diagonal should
    /// come out at `1 - analytic_defect[n]`.
    pub analytic_defect: Vec<f64>,
}

/// Exact cutoff loss `(lambda-1) g_n ∫_{r_max^2}^{1} t^n (1-t)^{lambda-2} dt`
/// with `g_n = Gamma(lambda+n)/(n! Gamma(lambda))`, evaluated through the
/// substitution `s = (1-t)^{lambda-1}` which makes the integrand smooth.
pub fn resolution_cutoff_defect(lambda: f64, n: usize, r_max: f64) -> f64 {
    let t0 = r_max * r_max;
    let s0 = (1.0 - t0).powf(lambda - 1.0);
    let (nodes, weights) = gauss_legendre_on(64, 0.0, s0);
    let mut acc = 0.0;
    for (&s, &w) in nodes.iter().zip(&weights) {
        acc += w * (1.0 - s.powf(1.0 / (lambda - 1.0))).powi(n as i32);
    }
    let lg = linalg::ln_gamma(lambda + n as f64)
        - linalg::ln_gamma(n as f64 + 1.0)
        - linalg::ln_gamma(lambda);
    acc * lg.exp()
}

pub fn resolution_of_identity(
    lambda: LowestWeight,
    dim: usize,
    radial: usize,
    angular: usize,
    r_max: f64,
) -> crate::Result<ResolutionOfIdentity> {
    let lam = lambda.value();
    if lam <= 1.0 {
        return Err(CoreError::DivergentResolution(lam));
    }
    if dim < 2 {
        return Err(CoreError::DimensionTooSmall(dim));
    }
    let quad = DiskQuadrature::new(radial, angular, r_max)?;
    let dtheta = 2.0 * core::f64::consts::PI / angular as f64;
    let ratios = sqrt_gamma_ratios(lam, dim);
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    let mut coeff = DVector::<Complex64>::zeros(dim);
    for (&t, &wt) in quad.t_nodes.iter().zip(&quad.t_weights) {
        let r = t.sqrt();
        let density = (lam - 1.0) / (core::f64::consts::PI * (1.0 - t) * (1.0 - t));
        let prefactor = (1.0 - t).powf(0.5 * lam);
        for &theta in &quad.angles {
            let zeta = Complex64::from_polar(r, theta);
            let mut zpow = c(1.0);
            for n in 0..dim {
                coeff[n] = c(prefactor * ratios[n]) * zpow;
                zpow *= zeta;
            }
            let w = wt * dtheta * density;
            // acc += w |c⟩⟨c|, accumulated in a fixed order.
            for j in 0..dim {
                let cj = coeff[j].conj() * c(w);
                for i in 0..dim {
                    acc[(i, j)] += coeff[i] * cj;
                }
            }
        }
    }
    let analytic_defect = (0..dim)
        .map(|n| resolution_cutoff_defect(lam, n, r_max))
        .collect();
    Ok(ResolutionOfIdentity {
        op: TruncatedOperator::new(acc, BasisTag::Su11Number)?,
        analytic_defect,
    })
}
