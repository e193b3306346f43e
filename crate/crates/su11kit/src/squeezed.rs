//! Boson-space realization: squeezed vacua as disk coherent states.
//!
//! On the truncated boson space, `L0 = n_b + 1/2`, `L+ = -(a_b†)^2 / 2`,
//! `L- = a_b^2 / 2` close the lowest-weight algebra, reducibly: the even
//! parity sector carries lowest weight `1/2` under the embedding
//! `|n⟩_N = (-1)^n |2n⟩_b`, the odd sector carries `3/2` with
//! `|n⟩_N = (-1)^n |2n+1⟩_b`, and the Casimir scalar is `-3/4` on both.
//!
//! The squeezed vacuum `|0; mu, nu⟩` (kernel of `b = mu a_b + nu a_b†`,
//! `|mu|^2 - |nu|^2 = 1`) is exactly the even-sector disk coherent state at
//! `zeta = nu/mu`, and satisfies the eigenvalue relations
//! `Q^{-1} P -> i (mu+nu)/(mu-nu)` and `-(a_b†)^{-1} a_b -> nu/mu`, which
//! are checked here with least-squares applications of the inverses.
//!
//! For `n` particles the radial reduction lands on the half-line family at
//! `k = n/4 - 1/2`, i.e. lowest weight `n/2`; the adjoint pair becomes
//! subnormal exactly from two particles up.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::coherent;
#[cfg(test)]
use crate::rep;
use crate::types::{
    BasisTag, CoreError, LowestWeight, StateVector, ToleranceProfile, TruncatedOperator,
};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Truncated boson Fock space with its standard operator set.
#[derive(Debug, Clone)]
pub struct BosonSpace {
    pub annihilation: TruncatedOperator,
    pub creation: TruncatedOperator,
    pub position: TruncatedOperator,
    pub momentum: TruncatedOperator,
    pub number: TruncatedOperator,
}

impl BosonSpace {
    pub fn dim(&self) -> usize {
        self.annihilation.dim()
    }
}

/// Standard ladder matrices at even truncation `d_b >= 4`.
pub fn boson_space(d_b: usize) -> crate::Result<BosonSpace> {
    if d_b < 4 || d_b % 2 != 0 {
        return Err(CoreError::InvalidBosonDim(d_b));
    }
    let annihilation = TruncatedOperator::from_fn(d_b, BasisTag::BosonNumber, |i, j| {
        if i + 1 == j {
            c((j as f64).sqrt())
        } else {
            c(0.0)
        }
    })?;
    let creation = annihilation.adjoint();
    let inv_sqrt2 = c(core::f64::consts::FRAC_1_SQRT_2);
    let position = (&annihilation + &creation).scaled(inv_sqrt2);
    let momentum = (&annihilation - &creation).scaled(-I * inv_sqrt2);
    let number = TruncatedOperator::from_fn(d_b, BasisTag::BosonNumber, |i, j| {
        if i == j {
            c(i as f64)
        } else {
            c(0.0)
        }
    })?;
    Ok(BosonSpace {
        annihilation,
        creation,
        position,
        momentum,
        number,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// Lowest weight carried by the sector.
    pub fn lambda(&self) -> LowestWeight {
        let v = match self {
            Parity::Even => 0.5,
            Parity::Odd => 1.5,
        };
        LowestWeight::new(v).expect("sector weights are positive")
    }

    fn boson_index(&self, n: usize) -> usize {
        match self {
            Parity::Even => 2 * n,
            Parity::Odd => 2 * n + 1,
        }
    }
}

/// Isometry sending the sector number basis into the boson space,
/// column `n` = `(-1)^n |2n (+1)⟩_b`.
pub fn embedding_isometry(parity: Parity, d_b: usize) -> crate::Result<DMatrix<Complex64>> {
    if d_b < 4 || d_b % 2 != 0 {
        return Err(CoreError::InvalidBosonDim(d_b));
    }
    let half = d_b / 2;
    let mut iso = DMatrix::<Complex64>::zeros(d_b, half);
    for n in 0..half {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        iso[(parity.boson_index(n), n)] = c(sign);
    }
    Ok(iso)
}

/// Embed a sector state into the boson basis.
pub fn embed_sector(state: &StateVector, parity: Parity, d_b: usize) -> crate::Result<StateVector> {
    if state.basis() != BasisTag::Su11Number {
        return Err(CoreError::BasisMismatch {
            left: state.basis(),
            right: BasisTag::Su11Number,
        });
    }
    if state.dim() != d_b / 2 {
        return Err(CoreError::DimensionMismatch {
            left: state.dim(),
            right: d_b / 2,
        });
    }
    let iso = embedding_isometry(parity, d_b)?;
    StateVector::new(&iso * state.coeffs(), BasisTag::BosonNumber)
}

/// The sector ladder triplet, obtained by conjugating
/// `L0 = n_b + 1/2`, `L+ = -(a_b†)^2/2`, `L- = a_b^2/2` with the embedding.
#[derive(Debug, Clone)]
pub struct SectorLadder {
    pub l0: TruncatedOperator,
    pub l_plus: TruncatedOperator,
    pub l_minus: TruncatedOperator,
    pub parity: Parity,
}

pub fn su11_from_boson(space: &BosonSpace, parity: Parity) -> crate::Result<SectorLadder> {
    let d_b = space.dim();
    let iso = embedding_isometry(parity, d_b)?;
    let half = c(0.5);
    let l0_full = space.number.matrix() + DMatrix::<Complex64>::identity(d_b, d_b) * half;
    let lp_full = (space.creation.matrix() * space.creation.matrix()) * (-half);
    let lm_full = (space.annihilation.matrix() * space.annihilation.matrix()) * half;
    let restrict = |m: &DMatrix<Complex64>| iso.adjoint() * m * &iso;
    Ok(SectorLadder {
        l0: TruncatedOperator::new(restrict(&l0_full), BasisTag::Su11Number)?,
        l_plus: TruncatedOperator::new(restrict(&lp_full), BasisTag::Su11Number)?,
        l_minus: TruncatedOperator::new(restrict(&lm_full), BasisTag::Su11Number)?,
        parity,
    })
}

/// Solve `a_b† z = w` by forward substitution; the first component of `w`
/// has no preimage and is returned as the solve defect.
fn creation_solve(w: &DVector<Complex64>) -> (DVector<Complex64>, f64) {
    let d = w.len();
    let mut z = DVector::<Complex64>::zeros(d);
    for m in 1..d {
        z[m - 1] = w[m] / c((m as f64).sqrt());
    }
    (z, w[0].norm())
}

/// The sector restriction of `a = -(a_b†)^{-1} a_b` (even) or
/// `a = -a_b (a_b†)^{-1}` (odd), computed column-by-column through the
/// triangular solve.
pub fn sector_annihilation(
    space: &BosonSpace,
    parity: Parity,
) -> crate::Result<TruncatedOperator> {
    let d_b = space.dim();
    let half = d_b / 2;
    let iso = embedding_isometry(parity, d_b)?;
    let mut out = DMatrix::<Complex64>::zeros(half, half);
    for n in 0..half {
        let col = iso.column(n).into_owned();
        let image = match parity {
            Parity::Even => {
                // -(a†)^{-1} (a col)
                let w = space.annihilation.matrix() * col;
                let (z, _defect) = creation_solve(&w);
                -z
            }
            Parity::Odd => {
                // -a ((a†)^{-1} col)
                let (z, _defect) = creation_solve(&col);
                -(space.annihilation.matrix() * z)
            }
        };
        let projected = iso.adjoint() * image;
        out.set_column(n, &projected);
    }
    TruncatedOperator::new(out, BasisTag::Su11Number)
}

/// Squeeze parameters `(mu, nu)` with `|mu|^2 - |nu|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParams {
    mu: Complex64,
    nu: Complex64,
}

impl SqueezeParams {
    pub fn new(mu: Complex64, nu: Complex64, tol: &ToleranceProfile) -> crate::Result<Self> {
        let defect = (mu.norm_sqr() - nu.norm_sqr() - 1.0).abs();
        let scale = 1.0 + mu.norm_sqr() + nu.norm_sqr();
        if defect > tol.algebraic * scale * 10.0 {
            return Err(CoreError::NotInGroup(defect));
        }
        Ok(SqueezeParams { mu, nu })
    }

    pub fn from_squeeze(r: f64, theta: f64) -> Self {
        SqueezeParams {
            mu: c(r.cosh()),
            nu: Complex64::from_polar(r.sinh(), theta),
        }
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn nu(&self) -> Complex64 {
        self.nu
    }

    /// Disk label of the squeezed vacuum, `zeta = nu / mu`.
    pub fn disk_label(&self) -> Complex64 {
        self.nu / self.mu
    }

    /// Squeeze parameter in exponential form:
    /// `xi = (1/2) e^{i arg(nu/mu)} ln((|mu|+|nu|)/(|mu|-|nu|))`.
    pub fn caves_parameter(&self) -> Complex64 {
        let ratio = self.nu / self.mu;
        let r = ratio.norm();
        if r == 0.0 {
            return c(0.0);
        }
        let phase = ratio / c(r);
        let mag =
            0.5 * ((self.mu.norm() + self.nu.norm()) / (self.mu.norm() - self.nu.norm())).ln();
        phase * c(mag)
    }
}

/// The squeezed vacuum in the boson basis: the even-sector disk coherent
/// state at `zeta = nu/mu`, embedded with the alternating signs.
pub fn squeezed_vacuum(
    params: &SqueezeParams,
    d_b: usize,
    tol: &ToleranceProfile,
) -> crate::Result<StateVector> {
    if d_b < 4 || d_b % 2 != 0 {
        return Err(CoreError::InvalidBosonDim(d_b));
    }
    let zeta = params.disk_label();
    let lam = Parity::Even.lambda();
    let tail = coherent::tail_bound(lam, zeta.norm(), d_b / 2);
    if tail > tol.quadrature {
        return Err(CoreError::TailBound {
            tail,
            tol: tol.quadrature,
        });
    }
    let disk = StateVector::new(
        coherent::coefficients_unchecked(lam.value(), zeta, d_b / 2),
        BasisTag::Su11Number,
    )?;
    embed_sector(&disk, Parity::Even, d_b)
}

/// Residuals of the two squeezed-vacuum eigenvalue relations.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicReport {
    /// `i (mu + nu) / (mu - nu)`.
    pub position_momentum_eigenvalue: Complex64,
    /// `|| Q^{-1} P s - ev s ||` with `Q^{-1}` applied in least squares.
    pub position_momentum_residual: f64,
    /// Condition number of the truncated `Q`.
    pub position_condition: f64,
    /// `nu / mu`.
    pub ladder_eigenvalue: Complex64,
    /// `|| -(a†)^{-1} a s - ev s ||` with the triangular solve.
    pub ladder_residual: f64,
    /// Unsolvable first component of the triangular system.
    pub ladder_solve_defect: f64,
}

pub fn characteristic_equations_check(
    params: &SqueezeParams,
    d_b: usize,
    tol: &ToleranceProfile,
) -> crate::Result<CharacteristicReport> {
    let state = squeezed_vacuum(params, d_b, tol)?;
    let space = boson_space(d_b)?;

    // Q^{-1} P s = i (mu+nu)/(mu-nu) s, solved as Q y = P s.
    let ps = space.momentum.matrix() * state.coeffs();
    let (y, _resid, cond) = crate::linalg::lstsq(
        space.position.matrix(),
        &DMatrix::from_column_slice(d_b, 1, ps.as_slice()),
        1e-13,
    )?;
    let ev_qp = I * (params.mu + params.nu) / (params.mu - params.nu);
    let qp_resid = (DVector::from_column_slice(y.as_slice()) - state.coeffs() * ev_qp).norm();

    // -(a†)^{-1} a s = (nu/mu) s via forward substitution.
    let w = space.annihilation.matrix() * state.coeffs();
    let (z, ladder_defect) = creation_solve(&w);
    let ev_ladder = params.nu / params.mu;
    let ladder_resid = (-z - state.coeffs() * ev_ladder).norm();

    Ok(CharacteristicReport {
        position_momentum_eigenvalue: ev_qp,
        position_momentum_residual: qp_resid,
        position_condition: cond,
        ladder_eigenvalue: ev_ladder,
        ladder_residual: ladder_resid,
        ladder_solve_defect: ladder_defect,
    })
}

/// One row of the multi-particle reduction table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionRow {
    pub particles: usize,
    /// Half-line parameter `k = n/4 - 1/2`.
    pub k: f64,
    /// Lowest weight `n/2`.
    pub lambda: f64,
    /// The adjoint pair is subnormal iff `lambda >= 1`, i.e. two or more
    /// particles.
    pub subnormal: bool,
}

/// Radial reduction of the `n`-particle representation.
pub fn multiparticle_reduction(particles: usize) -> crate::Result<ReductionRow> {
    if particles == 0 {
        return Err(CoreError::InvalidParameter(
            "need at least one particle".into(),
        ));
    }
    let k = particles as f64 / 4.0 - 0.5;
    let lambda = 2.0 * k + 1.0;
    Ok(ReductionRow {
        particles,
        k,
        lambda,
        subnormal: lambda >= 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn tol() -> ToleranceProfile {
        ToleranceProfile::default()
    }

    #[test]
    fn boson_space_basics() {
        assert!(boson_space(5).is_err());
        assert!(boson_space(2).is_err());
        let b = boson_space(8).unwrap();
        // a |1> = |0>.
        let one = StateVector::basis_state(8, 1, BasisTag::BosonNumber).unwrap();
        let img = b.annihilation.apply(&one).unwrap();
        assert_eq!(img.coeffs()[0], c(1.0));
        // canonical commutator on the interior.
        let comm = b.annihilation.commutator(&b.creation).interior(1).unwrap();
        let id = TruncatedOperator::identity(7, BasisTag::BosonNumber).unwrap();
        assert!((&comm - &id).max_abs() < 1e-14);
        // [Q, P] = i on the interior.
        let qp = b.position.commutator(&b.momentum).interior(1).unwrap();
        let defect = (&qp - &id.scaled(I)).max_abs();
        assert!(defect < 1e-14, "canonical pair defect {defect}");
        // a_b = (Q + i P)/sqrt(2) entrywise.
        let rebuilt = (&b.position + &b.momentum.scaled(I))
            .scaled(c(core::f64::consts::FRAC_1_SQRT_2));
        assert!((&rebuilt - &b.annihilation).max_abs() < 1e-15);
    }

    #[test]
    fn number_operator_from_quadratures() {
        // (Q^2 + P^2 - 1)/2 = n_b on the interior.
        let b = boson_space(16).unwrap();
        let q2 = b.position.matrix() * b.position.matrix();
        let p2 = b.momentum.matrix() * b.momentum.matrix();
        let lhs = (q2 + p2 - DMatrix::<Complex64>::identity(16, 16)) * c(0.5);
        let lhs_interior = linalg::leading_block(&lhs, 2);
        let rhs = linalg::leading_block(b.number.matrix(), 2);
        assert!(linalg::max_abs(&(lhs_interior - rhs)) < 1e-13);
    }

    #[test]
    fn sectors_carry_the_expected_weights() {
        let b = boson_space(32).unwrap();
        for (parity, lam) in [(Parity::Even, 0.5), (Parity::Odd, 1.5)] {
            let sector = su11_from_boson(&b, parity).unwrap();
            let reference = rep::build_ladder(LowestWeight::new(lam).unwrap(), 16).unwrap();
            // Entrywise match on the interior block.
            let d0 =
                (&sector.l0.interior(1).unwrap() - &reference.l0.interior(1).unwrap()).max_abs();
            let dp = (&sector.l_plus.interior(1).unwrap()
                - &reference.l_plus.interior(1).unwrap())
                .max_abs();
            let dm = (&sector.l_minus.interior(1).unwrap()
                - &reference.l_minus.interior(1).unwrap())
                .max_abs();
            assert!(
                d0 < 1e-12 && dp < 1e-12 && dm < 1e-12,
                "{parity:?}: {d0} {dp} {dm}"
            );
        }
    }

    #[test]
    fn sector_casimir_is_minus_three_quarters() {
        let b = boson_space(24).unwrap();
        for parity in [Parity::Even, Parity::Odd] {
            let s = su11_from_boson(&b, parity).unwrap();
            let l0sq = &s.l0 * &s.l0;
            let cas = &(&l0sq - &s.l0.scaled(c(2.0))) + &(&s.l_plus * &s.l_minus).scaled(c(4.0));
            let interior = cas.interior(1).unwrap();
            for i in 0..interior.dim() {
                for j in 0..interior.dim() {
                    let want = if i == j { c(-0.75) } else { c(0.0) };
                    assert!(
                        (interior.entry(i, j) - want).norm() < 1e-12,
                        "{parity:?} ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn sector_annihilation_matches_the_abstract_operator() {
        let b = boson_space(32).unwrap();
        for (parity, lam) in [(Parity::Even, 0.5), (Parity::Odd, 1.5)] {
            let got = sector_annihilation(&b, parity).unwrap();
            let want = rep::build_annihilation_pair(LowestWeight::new(lam).unwrap(), 16)
                .unwrap()
                .annihilation;
            let defect = (&got.interior(1).unwrap() - &want.interior(1).unwrap()).max_abs();
            assert!(defect < 1e-12, "{parity:?} defect {defect}");
        }
    }

    #[test]
    fn squeeze_params_guard_and_caves_parameter() {
        assert!(SqueezeParams::new(c(1.0), c(0.5), &tol()).is_err());
        let p = SqueezeParams::from_squeeze(1.0, 0.7);
        let xi = p.caves_parameter();
        assert!((xi.norm() - 1.0).abs() < 1e-12);
        assert!((xi.arg() - 0.7).abs() < 1e-12);
        // zeta = tanh(1) e^{i 0.7}.
        let zeta = p.disk_label();
        assert!((zeta.norm() - 1.0f64.tanh()).abs() < 1e-12);
    }

    #[test]
    fn squeezed_vacuum_reduces_to_the_boson_vacuum() {
        let p = SqueezeParams::new(c(1.0), c(0.0), &tol()).unwrap();
        let s = squeezed_vacuum(&p, 8, &tol()).unwrap();
        assert_eq!(s.coeffs()[0], c(1.0));
        for n in 1..8 {
            assert_eq!(s.coeffs()[n], c(0.0));
        }
    }

    #[test]
    fn squeezed_vacuum_is_killed_by_the_bogoliubov_mode() {
        let p = SqueezeParams::from_squeeze(1.0, 0.0);
        let d_b = 512;
        let s = squeezed_vacuum(&p, d_b, &tol()).unwrap();
        // Support on even levels only.
        for n in (1..d_b).step_by(2) {
            assert_eq!(s.coeffs()[n], c(0.0));
        }
        let b = boson_space(d_b).unwrap();
        let bogoliubov = &b.annihilation.scaled(p.mu()) + &b.creation.scaled(p.nu());
        let resid = bogoliubov.apply(&s).unwrap().norm();
        assert!(resid < 1e-8, "residual {resid}");
    }

    #[test]
    fn squeezed_vacuum_tail_guard() {
        // |nu/mu| too close to 1 for a tiny truncation.
        let p = SqueezeParams::from_squeeze(3.0, 0.0);
        assert!(matches!(
            squeezed_vacuum(&p, 16, &tol()),
            Err(CoreError::TailBound { .. })
        ));
    }

    #[test]
    fn characteristic_equations_hold() {
        let p = SqueezeParams::from_squeeze(1.0, 0.0);
        let report = characteristic_equations_check(&p, 256, &tol()).unwrap();
        // mu = cosh 1, nu = sinh 1: i (mu+nu)/(mu-nu) = i e^2.
        let want = I * c((2.0f64).exp());
        assert!(
            (report.position_momentum_eigenvalue - want).norm() < 1e-12,
            "eigenvalue {:?}",
            report.position_momentum_eigenvalue
        );
        assert!(
            report.position_momentum_residual < 1e-6,
            "qp residual {}",
            report.position_momentum_residual
        );
        assert!(
            (report.ladder_eigenvalue - c(1.0f64.tanh())).norm() < 1e-14,
            "ladder ev {:?}",
            report.ladder_eigenvalue
        );
        assert!(
            report.ladder_residual < 1e-8,
            "ladder residual {}",
            report.ladder_residual
        );

        // Trivial case: no squeezing.
        let p0 = SqueezeParams::new(c(1.0), c(0.0), &tol()).unwrap();
        let r0 = characteristic_equations_check(&p0, 64, &tol()).unwrap();
        assert_eq!(r0.ladder_eigenvalue, c(0.0));
        assert!(r0.ladder_residual < 1e-14);
    }

    #[test]
    fn caves_exponential_reaches_the_same_ray() {
        // exp(-(xi/2)(a†)^2 + (xi*/2) a^2) |0> equals the squeezed vacuum up
        // to a phase; equality of rays only is asserted.
        let p = SqueezeParams::from_squeeze(0.6, 1.1);
        let d_b = 128;
        let s = squeezed_vacuum(&p, d_b, &tol()).unwrap();
        let b = boson_space(d_b).unwrap();
        let xi = p.caves_parameter();
        let gen = b.creation.matrix() * b.creation.matrix() * (-xi * c(0.5))
            + b.annihilation.matrix() * b.annihilation.matrix() * (xi.conj() * c(0.5));
        let u = linalg::expm(&gen);
        let vac = StateVector::basis_state(d_b, 0, BasisTag::BosonNumber).unwrap();
        let displaced = StateVector::new(&u * vac.coeffs(), BasisTag::BosonNumber).unwrap();
        let overlap = s.overlap(&displaced).unwrap().norm();
        assert!((overlap - 1.0).abs() < 1e-8, "ray overlap {overlap}");
    }

    #[test]
    fn reduction_table_thresholds() {
        assert!(multiparticle_reduction(0).is_err());
        let r1 = multiparticle_reduction(1).unwrap();
        assert!((r1.lambda - 0.5).abs() < 1e-15 && !r1.subnormal);
        let r2 = multiparticle_reduction(2).unwrap();
        assert!((r2.lambda - 1.0).abs() < 1e-15 && r2.k.abs() < 1e-15 && r2.subnormal);
        let r4 = multiparticle_reduction(4).unwrap();
        assert!((r4.lambda - 2.0).abs() < 1e-15 && (r4.k - 0.5).abs() < 1e-15 && r4.subnormal);
    }
}
