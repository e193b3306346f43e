//! The measurement layer: outcome densities of the creation operator `a*`
//! and the half-plane generator `A*`, their first and second moments,
//! outcome sampling, hyponormality certificates, and finite Naimark
//! dilations.
//!
//! # Outcome-label conventions
//!
//! The effect family on the disk is `(lambda-1) |zeta*⟩⟨zeta*| mu(d zeta)`
//! with `mu(d zeta) = d^2 zeta / (pi (1-|zeta|^2)^2)`: the bra carries the
//! conjugated label while the reported outcome is `zeta` itself. With this
//! pairing the first moment reproduces `⟨psi, a* psi⟩` and the second
//! reproduces `||a* psi||^2`.
//!
//! On the half-plane the same family is parameterized by `eta` in the upper
//! half-plane through `zeta = (eta - i)/(eta + i)`, with density
//! `(lambda-1) |⟨zeta(eta)*, psi⟩|^2 / (4 pi (Im eta)^2)` per `d^2 eta`. The
//! complex value carried by the measurement of `A*` is `-eta` (lower
//! half-plane), which is what makes the moment identities close:
//! `E[-eta] = ⟨psi, A* psi⟩` and `E[|eta|^2] = ||A* psi||^2`. The second
//! moment diverges for lowest weight `<= 2` unless the coefficient sum
//! `sum_n sqrt(g_n) psi_n` vanishes; [`halfplane_moments`] detects and flags
//! that case instead of reporting a cutoff-dependent number.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DMatrix;
#[cfg(test)]
use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::Float;
use rand_core::{Rng, SeedableRng};

use crate::coherent::{sqrt_gamma_ratios, DiskPoint, HalfPlanePoint};
use crate::linalg;
use crate::quad::{gauss_legendre_on, DiskQuadrature};
use crate::rep;
use crate::types::{
    BasisTag, CoreError, LowestWeight, StateVector, ToleranceProfile, TruncatedOperator,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Outcome density of the `a*` measurement on the unit disk for a fixed
/// unit state.
#[derive(Debug, Clone)]
pub struct DiskDensity {
    lambda: f64,
    /// Cached `sqrt(g_n) psi_n`; the amplitude is `S(zeta) = sum_n amp_n zeta^n`.
    amp: Vec<Complex64>,
}

impl DiskDensity {
    pub fn new(lambda: LowestWeight, psi: &StateVector) -> crate::Result<Self> {
        let lam = lambda.value();
        if lam <= 1.0 {
            return Err(CoreError::DivergentPovm(lam));
        }
        if psi.basis() != BasisTag::Su11Number {
            return Err(CoreError::BasisMismatch {
                left: psi.basis(),
                right: BasisTag::Su11Number,
            });
        }
        let norm = psi.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(CoreError::NotNormalized(norm));
        }
        let ratios = sqrt_gamma_ratios(lam, psi.dim());
        let amp = psi
            .coeffs()
            .iter()
            .zip(&ratios)
            .map(|(p, &r)| p * c(r))
            .collect();
        Ok(DiskDensity { lambda: lam, amp })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `S(zeta) = sum_n sqrt(g_n) psi_n zeta^n`.
    pub fn amplitude(&self, zeta: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut zpow = c(1.0);
        for a in &self.amp {
            acc += a * zpow;
            zpow *= zeta;
        }
        acc
    }

    /// `p(zeta) = (lambda-1) (1-|zeta|^2)^{lambda-2} |S(zeta)|^2 / pi` per `d^2 zeta`.
    pub fn density(&self, zeta: DiskPoint) -> f64 {
        let z = zeta.value();
        let t = z.norm_sqr();
        (self.lambda - 1.0) * (1.0 - t).powf(self.lambda - 2.0) * self.amplitude(z).norm_sqr()
            / core::f64::consts::PI
    }

    /// Largest basis index carrying amplitude; drives cutoff bounds.
    fn support(&self) -> usize {
        self.amp
            .iter()
            .rposition(|a| a.norm() > 1e-15)
            .unwrap_or(0)
    }

    /// `sum_{n <= support} g_n`, the Cauchy-Schwarz envelope of `|S|^2`.
    fn amplitude_envelope(&self) -> f64 {
        let ratios = sqrt_gamma_ratios(self.lambda, self.support() + 1);
        ratios.iter().map(|r| r * r).sum()
    }

    /// Rigorous bound on the probability mass beyond `|zeta| = r_max`:
    /// `envelope * (1 - r_max^2)^{lambda-1}`.
    pub fn cutoff_mass_bound(&self, r_max: f64) -> f64 {
        self.amplitude_envelope() * (1.0 - r_max * r_max).powf(self.lambda - 1.0)
    }
}

/// The same density pushed to the upper half-plane.
#[derive(Debug, Clone)]
pub struct HalfPlaneDensity {
    disk: DiskDensity,
}

impl HalfPlaneDensity {
    pub fn new(lambda: LowestWeight, psi: &StateVector) -> crate::Result<Self> {
        Ok(HalfPlaneDensity {
            disk: DiskDensity::new(lambda, psi)?,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.disk.lambda
    }

    pub fn disk(&self) -> &DiskDensity {
        &self.disk
    }

    /// `q(eta) = (lambda-1) |S(zeta(eta))|^2 (1-|zeta|^2)^lambda / (4 pi (Im eta)^2)`
    /// per `d^2 eta`; equals the disk density times the Cayley Jacobian.
    pub fn density(&self, eta: HalfPlanePoint) -> f64 {
        let e = eta.value();
        let zeta = (e - Complex64::new(0.0, 1.0)) / (e + Complex64::new(0.0, 1.0));
        let t = zeta.norm_sqr();
        let lam = self.disk.lambda;
        (lam - 1.0) * (1.0 - t).powf(lam) * self.disk.amplitude(zeta).norm_sqr()
            / (4.0 * core::f64::consts::PI * e.im * e.im)
    }
}

/// First and second moments of a disk density with the analytic bound on
/// the mass lost beyond the quadrature cutoff.
#[derive(Debug, Clone, Copy)]
pub struct MomentEstimate {
    pub mean: Complex64,
    pub second: f64,
    /// Upper bound on cutoff loss: `envelope * (1 - r_max^2)^{lambda-1}`.
    pub cutoff_bound: f64,
}

/// Disk moments `E[zeta]` and `E[|zeta|^2]` by product quadrature.
///
/// The angular rule is exact here because the integrands carry finitely
/// many Fourier modes; choose the angular count above twice the state's
/// support.
pub fn disk_moments(density: &DiskDensity, quad: &DiskQuadrature) -> MomentEstimate {
    let dtheta = 2.0 * core::f64::consts::PI / quad.angular_count() as f64;
    let mut mean = Complex64::new(0.0, 0.0);
    let mut second = 0.0;
    for (&t, &wt) in quad.t_nodes.iter().zip(&quad.t_weights) {
        let r = t.sqrt();
        let radial = (density.lambda - 1.0) * (1.0 - t).powf(density.lambda - 2.0)
            / core::f64::consts::PI;
        for &theta in &quad.angles {
            let zeta = Complex64::from_polar(r, theta);
            let p = radial * density.amplitude(zeta).norm_sqr();
            let w = wt * dtheta * p;
            mean += zeta * c(w);
            second += t * w;
        }
    }
    let t0 = quad.r_max * quad.r_max;
    let cutoff_bound = density.amplitude_envelope() * (1.0 - t0).powf(density.lambda - 1.0);
    MomentEstimate {
        mean,
        second,
        cutoff_bound,
    }
}

/// Moments of the half-plane measurement.
#[derive(Debug, Clone, Copy)]
pub struct HalfPlaneMoments {
    /// `E[-eta]`, the complex value carried by the `A*` measurement.
    pub mean: Complex64,
    /// `E[|eta|^2]`; meaningful only when `second_converges` holds.
    pub second: f64,
    /// False when the second moment diverges (lowest weight `<= 2` with a
    /// non-vanishing boundary amplitude); `second` is then the value
    /// regularized at the cutoff, not an estimate of anything finite.
    pub second_converges: bool,
    pub cutoff_bound: f64,
}

/// Half-plane moments via exact angular reduction and radial quadrature.
///
/// Writing `S(zeta) = sum A_n zeta^n` and expanding the Cayley factors in
/// geometric series, the angular integrals collapse to
///
/// ```text
/// E[eta]     = i (lambda-1) ∫ (1-t)^{lambda-2} [ sum_n |A_n|^2 t^n + 2 sum_{m>n} A_n A_m* t^m ] dt
/// E[|eta|^2] =   (lambda-1) ∫ (1-t)^{lambda-2} sum_{n,m} A_n A_m* t^{(n+m)/2} h_{m-n}(t) dt
/// h_d(t)     = [ (1+t) t^{|d|/2} + sqrt(t) (t^{|d-1|/2} + t^{|d+1|/2}) ] / (1-t)
/// ```
///
/// which avoids the angular aliasing a plain product rule suffers from the
/// `1/(1 - zeta)` pole near the cutoff circle.
pub fn halfplane_moments(
    density: &HalfPlaneDensity,
    radial: usize,
    r_max: f64,
) -> crate::Result<HalfPlaneMoments> {
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(CoreError::InvalidParameter(alloc::format!(
            "r_max must lie in (0, 1), got {r_max}"
        )));
    }
    let lam = density.disk.lambda;
    let amp = &density.disk.amp;
    let n_amp = amp.len();
    let t0 = r_max * r_max;
    let (nodes, weights) = gauss_legendre_on(radial, 0.0, t0);

    let boundary_amp: Complex64 = amp.iter().sum();
    let second_converges = lam > 2.0 || boundary_amp.norm() < 1e-10;

    let mut mean_eta = Complex64::new(0.0, 0.0);
    let mut second = 0.0;
    for (&t, &w) in nodes.iter().zip(&weights) {
        let radial_factor = (lam - 1.0) * (1.0 - t).powf(lam - 2.0) * w;
        // E[eta] integrand.
        let mut b = Complex64::new(0.0, 0.0);
        for n in 0..n_amp {
            b += c(amp[n].norm_sqr() * t.powi(n as i32));
        }
        for n in 0..n_amp {
            for m in (n + 1)..n_amp {
                b += c(2.0) * amp[n] * amp[m].conj() * c(t.powi(m as i32));
            }
        }
        mean_eta += Complex64::new(0.0, 1.0) * b * c(radial_factor);
        // E[|eta|^2] integrand.
        let st = t.sqrt();
        let mut s2 = Complex64::new(0.0, 0.0);
        for n in 0..n_amp {
            for m in 0..n_amp {
                let d = m as i32 - n as i32;
                let h = ((1.0 + t) * st.powi(d.abs())
                    + st * (st.powi((d - 1).abs()) + st.powi((d + 1).abs())))
                    / (1.0 - t);
                s2 += amp[n] * amp[m].conj() * c(st.powi((n + m) as i32) * h);
            }
        }
        second += (s2 * c(radial_factor)).re;
    }

    let envelope: f64 = amp.iter().map(|a| a.norm()).sum::<f64>().powi(2);
    let cutoff_bound = envelope * (1.0 - t0).powf(lam - 1.0);
    Ok(HalfPlaneMoments {
        mean: -mean_eta,
        second,
        second_converges,
        cutoff_bound,
    })
}

/// Reproducible batch of measurement outcomes.
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub outcomes: Vec<Complex64>,
    pub seed: u64,
    pub acceptance_rate: f64,
}

/// Radial outcome CDF of the lowest-state density, restricted to
/// `|zeta| <= r_max`: `F(r) = (1 - (1-r^2)^{lambda-1}) / (1 - (1-r_max^2)^{lambda-1})`.
pub fn vacuum_radial_cdf(lambda: LowestWeight, r: f64, r_max: f64) -> f64 {
    let lam = lambda.value();
    let z = 1.0 - (1.0 - r_max * r_max).powf(lam - 1.0);
    ((1.0 - (1.0 - (r * r).min(r_max * r_max)).powf(lam - 1.0)) / z).clamp(0.0, 1.0)
}

fn unit_f64(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// I.i.d. draws from the disk density by rejection sampling.
///
/// Proposal: uniform angle times the radial law of the lowest state,
/// `2 (lambda-1) r (1-r^2)^{lambda-2}` truncated at `r_max` and inverted in
/// closed form. The accept ratio is then `|S(zeta)|^2 / max |S|^2`, and the
/// maximum modulus of the analytic amplitude sits on the cutoff circle, so
/// the bound comes from a dense boundary scan.
///
/// Each draw consumes its own counter-indexed stream of the keyed generator,
/// so batches are byte-identical for a fixed seed regardless of chunking.
pub fn sample(
    density: &DiskDensity,
    n: usize,
    seed: u64,
    r_max: f64,
) -> crate::Result<SampleBatch> {
    if n == 0 {
        return Err(CoreError::InvalidParameter("need at least one draw".into()));
    }
    if !(r_max > 0.0 && r_max < 1.0) {
        return Err(CoreError::InvalidParameter(alloc::format!(
            "r_max must lie in (0, 1), got {r_max}"
        )));
    }
    let lam = density.lambda;
    let t0 = r_max * r_max;
    let z_norm = 1.0 - (1.0 - t0).powf(lam - 1.0);

    // Bound |S|^2 on the boundary circle with a small safety factor.
    let scan = 8192;
    let mut s_max_sq = 0.0f64;
    for j in 0..scan {
        let theta = 2.0 * core::f64::consts::PI * j as f64 / scan as f64;
        let s = density
            .amplitude(Complex64::from_polar(r_max, theta))
            .norm_sqr();
        s_max_sq = s_max_sq.max(s);
    }
    let bound = s_max_sq * 1.02;

    let mut outcomes = Vec::with_capacity(n);
    let mut attempts: u64 = 0;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for draw in 0..n {
        rng.set_stream(draw as u64 + 1);
        rng.set_word_pos(0);
        loop {
            attempts += 1;
            let u_t = unit_f64(&mut rng);
            let u_theta = unit_f64(&mut rng);
            let u_accept = unit_f64(&mut rng);
            let t = 1.0 - (1.0 - u_t * z_norm).powf(1.0 / (lam - 1.0));
            let theta = 2.0 * core::f64::consts::PI * u_theta;
            let zeta = Complex64::from_polar(t.sqrt(), theta);
            let ratio = density.amplitude(zeta).norm_sqr() / bound;
            if u_accept < ratio {
                outcomes.push(zeta);
                break;
            }
            if attempts >= 1000 && (outcomes.len() as f64) < 0.01 * attempts as f64 {
                return Err(CoreError::LowAcceptance {
                    rate: outcomes.len() as f64 / attempts as f64,
                    bound,
                });
            }
        }
    }
    Ok(SampleBatch {
        outcomes,
        seed,
        acceptance_rate: n as f64 / attempts as f64,
    })
}

/// Smallest eigenvalue of the interior block of `S†S - SS†`.
///
/// Non-negative within rounding certifies the necessary (hyponormality)
/// condition for subnormality at this truncation; a clearly negative value
/// certifies that the operator cannot be subnormal. This is a certificate
/// about the truncated matrix, not a proof about the infinite operator.
pub fn hyponormality_gap(s: &TruncatedOperator, margin: usize) -> crate::Result<f64> {
    let m = s.matrix();
    let comm = m.adjoint() * m - m * m.adjoint();
    let dim = s.dim();
    if 2 * margin >= dim {
        return Err(CoreError::MarginTooLarge { margin, dim });
    }
    Ok(linalg::hermitian_smallest_eigenvalue(
        &linalg::leading_block(&comm, margin),
    ))
}

/// A finite list of positive effects summing to the identity.
#[derive(Debug, Clone)]
pub struct FinitePOVM {
    effects: Vec<TruncatedOperator>,
}

impl FinitePOVM {
    pub fn new(effects: Vec<TruncatedOperator>, tol: &ToleranceProfile) -> crate::Result<Self> {
        let first = effects
            .first()
            .ok_or_else(|| CoreError::InvalidParameter("need at least one effect".into()))?;
        let dim = first.dim();
        let basis = first.basis();
        let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
        for (index, e) in effects.iter().enumerate() {
            if e.dim() != dim {
                return Err(CoreError::DimensionMismatch {
                    left: e.dim(),
                    right: dim,
                });
            }
            if e.basis() != basis {
                return Err(CoreError::BasisMismatch {
                    left: e.basis(),
                    right: basis,
                });
            }
            let min_eig = linalg::hermitian_smallest_eigenvalue(e.matrix());
            if min_eig < -tol.algebraic {
                return Err(CoreError::NotPositiveSemidefinite { index, min_eig });
            }
            sum += e.matrix();
        }
        let defect = linalg::max_abs(&(sum - DMatrix::<Complex64>::identity(dim, dim)));
        if defect > tol.algebraic {
            return Err(CoreError::EffectSumDefect(defect));
        }
        Ok(FinitePOVM { effects })
    }

    pub fn effects(&self) -> &[TruncatedOperator] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }
}

/// A finite POVM realized as a projective measurement on a stacked space.
#[derive(Debug, Clone)]
pub struct NaimarkDilation {
    /// `(K D) x D` isometry with block rows `sqrt(M_i)`.
    pub isometry: DMatrix<Complex64>,
    /// Block-selector projections on the stacked space.
    pub projective: FinitePOVM,
    /// `max_i max|V† E_i V - M_i|`.
    pub reconstruction_error: f64,
    /// `max |V† V - I|`.
    pub isometry_defect: f64,
}

/// Dilate a finite POVM to block-selector projections: stack the Hermitian
/// square roots of the effects into an isometry `V`; then `V† E_i V = M_i`
/// with `E_i` the `i`-th block projection.
pub fn naimark_dilate(povm: &FinitePOVM, tol: &ToleranceProfile) -> crate::Result<NaimarkDilation> {
    let d = povm.dim();
    let k = povm.len();
    let basis = povm.effects()[0].basis();
    let mut isometry = DMatrix::<Complex64>::zeros(k * d, d);
    for (i, effect) in povm.effects().iter().enumerate() {
        let root = linalg::psd_sqrt(effect.matrix(), tol.algebraic).map_err(|e| match e {
            CoreError::NotPositiveSemidefinite { min_eig, .. } => {
                CoreError::NotPositiveSemidefinite { index: i, min_eig }
            }
            other => other,
        })?;
        isometry.view_mut((i * d, 0), (d, d)).copy_from(&root);
    }
    let gram = isometry.adjoint() * &isometry;
    let isometry_defect = linalg::max_abs(&(gram - DMatrix::<Complex64>::identity(d, d)));

    let mut projective = Vec::with_capacity(k);
    let mut reconstruction_error = 0.0f64;
    for i in 0..k {
        let mut block = DMatrix::<Complex64>::zeros(k * d, k * d);
        for j in 0..d {
            block[(i * d + j, i * d + j)] = c(1.0);
        }
        let reconstructed = isometry.adjoint() * &block * &isometry;
        reconstruction_error = reconstruction_error
            .max(linalg::max_abs(&(reconstructed - povm.effects()[i].matrix())));
        projective.push(TruncatedOperator::new(block, basis)?);
    }
    Ok(NaimarkDilation {
        isometry,
        projective: FinitePOVM::new(projective, tol)?,
        reconstruction_error,
        isometry_defect,
    })
}

/// Deterministic random POVM: seeded positive matrices normalized through
/// the inverse square root of their sum.
pub fn random_finite_povm(
    dim: usize,
    effects: usize,
    seed: u64,
    tol: &ToleranceProfile,
) -> crate::Result<FinitePOVM> {
    if effects == 0 {
        return Err(CoreError::InvalidParameter("need at least one effect".into()));
    }
    let mut gs = Vec::with_capacity(effects);
    let mut total = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..effects {
        let mut x = DMatrix::<Complex64>::zeros(dim, dim);
        for col in 0..dim {
            let v = linalg::pseudo_random_vector(
                dim,
                seed ^ ((i * dim + col) as u64).wrapping_mul(0x9e3779b97f4a7c15),
            );
            x.set_column(col, &v);
        }
        let g = &x * x.adjoint() + DMatrix::<Complex64>::identity(dim, dim) * c(1e-3);
        total += &g;
        gs.push(g);
    }
    // total^{-1/2} through its Hermitian eigensystem.
    let se = ((&total + total.adjoint()) * c(0.5)).symmetric_eigen();
    let mut inv_root = DMatrix::<Complex64>::zeros(dim, dim);
    for i in 0..dim {
        inv_root[(i, i)] = c(1.0 / se.eigenvalues[i].sqrt());
    }
    let w = &se.eigenvectors * inv_root * se.eigenvectors.adjoint();
    let effects = gs
        .into_iter()
        .map(|g| TruncatedOperator::new(&w * g * &w, BasisTag::Su11Number))
        .collect::<crate::Result<Vec<_>>>()?;
    FinitePOVM::new(effects, tol)
}

/// `||A* psi||^2` evaluated from the closed-form entries of the half-plane
/// generator, summed past the truncation with its exact telescoping tail.
///
/// `A` is upper triangular with `A_{nn} = i` and, for `m > n`,
/// `A_{nm} = 2i sqrt(Gamma(m+1) Gamma(n+lambda) / (Gamma(n+1) Gamma(m+lambda)))`.
/// Beyond the state's support the adjoint image collapses to a single
/// weighted sum `W`, and the remaining series
/// `4|W|^2 sum_{m >= M} Gamma(m+1)/Gamma(m+lambda)` telescopes to
/// `4|W|^2 Gamma(M+1) / ((lambda-2) Gamma(M+lambda-1))`.
///
/// Returns `None` when the series diverges (`lambda <= 2` with
/// non-vanishing `W`).
pub fn cayley_adjoint_norm_sq(lambda: LowestWeight, psi: &StateVector) -> Option<f64> {
    let lam = lambda.value();
    let d = psi.dim();
    let weight =
        |n: f64| (0.5 * (linalg::ln_gamma(n + lam) - linalg::ln_gamma(n + 1.0))).exp();
    let w_sum: Complex64 = (0..d)
        .map(|n| psi.coeffs()[n] * c(weight(n as f64)))
        .sum();
    if lam <= 2.0 && w_sum.norm() > 1e-10 {
        return None;
    }
    let m_max = 4 * d + 4096;
    let mut acc = 0.0;
    for m in 0..m_max {
        let mf = m as f64;
        let col = (0.5 * (linalg::ln_gamma(mf + 1.0) - linalg::ln_gamma(mf + lam))).exp();
        let mut entry = Complex64::new(0.0, 0.0);
        for n in 0..d.min(m + 1) {
            let a_nm = if n == m {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, 2.0 * col * weight(n as f64))
            };
            entry += a_nm.conj() * psi.coeffs()[n];
        }
        acc += entry.norm_sqr();
    }
    if lam > 2.0 {
        let mf = m_max as f64;
        let tail = 4.0
            * w_sum.norm_sqr()
            * (linalg::ln_gamma(mf + 1.0) - linalg::ln_gamma(mf + lam - 1.0)).exp()
            / (lam - 2.0);
        acc += tail;
    }
    Some(acc)
}

/// One row of the moment-consistency table.
#[derive(Debug, Clone)]
pub struct ConsistencyRow {
    pub label: String,
    /// `|E[zeta] - ⟨psi, a* psi⟩|`.
    pub disk_mean_defect: f64,
    /// `|E[|zeta|^2] - ||a* psi||^2|`.
    pub disk_second_defect: f64,
    /// `|E[-eta] - ⟨psi, A* psi⟩|`.
    pub halfplane_mean_defect: f64,
    /// `|E[|eta|^2] - ||A* psi||^2|`, absent when the moment diverges.
    pub halfplane_second_defect: Option<f64>,
    pub cutoff_bound: f64,
}

/// Check that the eigenvector-system POVMs reproduce the operator moments
/// for every supplied state, for `a*` and `A*` simultaneously.
pub fn eigenvector_povm_consistency(
    lambda: LowestWeight,
    states: &[StateVector],
    quad: &DiskQuadrature,
    tol: &ToleranceProfile,
) -> crate::Result<Vec<ConsistencyRow>> {
    let mut rows = Vec::with_capacity(states.len());
    for (idx, psi) in states.iter().enumerate() {
        let dim = psi.dim();
        let pair = rep::build_annihilation_pair(lambda, dim)?;
        let cayley = rep::cayley_transform(lambda, dim, tol)?;

        let density = DiskDensity::new(lambda, psi)?;
        let est = disk_moments(&density, quad);
        let creation_psi = pair.creation.apply(psi)?;
        let mean_ref = psi.overlap(&creation_psi)?;
        let second_ref = creation_psi.norm().powi(2);
        let disk_mean_defect = (est.mean - mean_ref).norm();
        let disk_second_defect = (est.second - second_ref).abs();

        let hp = HalfPlaneDensity::new(lambda, psi)?;
        let hp_moments = halfplane_moments(&hp, quad.radial_count(), quad.r_max)?;
        let a_star_psi = cayley.op.adjoint().apply(psi)?;
        let hp_mean_ref = psi.overlap(&a_star_psi)?;
        let halfplane_mean_defect = (hp_moments.mean - hp_mean_ref).norm();
        // The truncated matrix norm converges like 1/D here; compare against
        // the closed-form series instead.
        let halfplane_second_defect = match (
            hp_moments.second_converges,
            cayley_adjoint_norm_sq(lambda, psi),
        ) {
            (true, Some(reference)) => Some((hp_moments.second - reference).abs()),
            _ => None,
        };

        rows.push(ConsistencyRow {
            label: alloc::format!("state_{idx}"),
            disk_mean_defect,
            disk_second_defect,
            halfplane_mean_defect,
            halfplane_second_defect,
            cutoff_bound: est.cutoff_bound,
        });
    }
    Ok(rows)
}
