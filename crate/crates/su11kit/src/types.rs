//! Core domain types: basis-tagged operators and states, the lowest
//! weight, and the tolerance profile shared by all suites.

use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Errors produced by the numerical layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoreError {
    #[error("lowest weight must be a positive finite real, got {0}")]
    InvalidWeight(f64),
    #[error("truncation dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("operator entries must be finite")]
    NonFiniteEntries,
    #[error("basis mismatch: {left:?} vs {right:?}")]
    BasisMismatch { left: BasisTag, right: BasisTag },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("interior margin {margin} too large for dimension {dim}")]
    MarginTooLarge { margin: usize, dim: usize },
    #[error("point must lie strictly inside the unit disk, got modulus {0}")]
    OutsideDisk(f64),
    #[error("point must lie strictly in the upper half-plane, got Im {0}")]
    OutsideHalfPlane(f64),
    #[error("group element violates |mu|^2 - |nu|^2 = 1 (defect {0:.3e})")]
    NotInGroup(f64),
    #[error("truncation tail {tail:.3e} exceeds tolerance {tol:.3e}; increase the dimension")]
    TailBound { tail: f64, tol: f64 },
    #[error("coherent-state resolution of identity diverges for lowest weight <= 1 (got {0})")]
    DivergentResolution(f64),
    #[error("outcome density requires lowest weight > 1 (got {0}); the effect family is not normalizable")]
    DivergentPovm(f64),
    #[error("state must have unit norm, got {0}")]
    NotNormalized(f64),
    #[error("effect {index} is not positive semidefinite (min eigenvalue {min_eig:.3e})")]
    NotPositiveSemidefinite { index: usize, min_eig: f64 },
    #[error("effects do not sum to the identity (defect {0:.3e})")]
    EffectSumDefect(f64),
    #[error("rejection sampling acceptance rate {rate:.4} below 1%; proposal bound {bound:.3e} is too loose for this state")]
    LowAcceptance { rate: f64, bound: f64 },
    #[error("operator is not isometric on the interior block (defect {0:.3e})")]
    NotIsometric(f64),
    #[error("linear solve residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    SolveResidual { residual: f64, tol: f64 },
    #[error("grid nodes must be positive and strictly increasing")]
    InvalidGrid,
    #[error("grids do not match (different nodes or schemes)")]
    GridMismatch,
    #[error("grid does not resolve the requested weight function (moment defect {defect:.3e} > {tol:.3e})")]
    GridUnresolved { defect: f64, tol: f64 },
    #[error("oscillation under-resolved: {0}")]
    UnderResolved(String),
    #[error("boson truncation must be even and at least 4, got {0}")]
    InvalidBosonDim(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Basis in which a matrix or coefficient vector is expressed.
///
/// Mixing bases in a binary operation is an error, never a silent cast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisTag {
    /// su(1,1) number basis `|n⟩_N`.
    Su11Number,
    /// Boson Fock basis `|n⟩_b`.
    BosonNumber,
    /// Sampled values on a half-line grid.
    Grid,
}

impl BasisTag {
    /// Stable lowercase name used in file formats.
    pub fn name(&self) -> &'static str {
        match self {
            BasisTag::Su11Number => "su11_number",
            BasisTag::BosonNumber => "boson_number",
            BasisTag::Grid => "grid",
        }
    }
}

/// Lowest eigenvalue of `L0`; labels the irreducible representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowestWeight(f64);

impl LowestWeight {
    pub fn new(lambda: f64) -> crate::Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(CoreError::InvalidWeight(lambda));
        }
        Ok(LowestWeight(lambda))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// Tolerances used by the verification suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceProfile {
    /// Identities that hold exactly at truncation, up to rounding.
    pub algebraic: f64,
    /// Quadrature and truncated-tail comparisons.
    pub quadrature: f64,
    /// Finite-difference comparisons on half-line grids.
    pub grid: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            algebraic: 1e-12,
            quadrature: 1e-6,
            grid: 1e-3,
        }
    }
}

impl ToleranceProfile {
    pub fn validate(&self) -> crate::Result<()> {
        for (name, v) in [
            ("algebraic", self.algebraic),
            ("quadrature", self.quadrature),
            ("grid", self.grid),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(CoreError::InvalidParameter(alloc::format!(
                    "tolerance {name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Dense complex square matrix in a declared basis.
///
/// Binary arithmetic (`+`, `-`, `*`) panics on basis or dimension mismatch;
/// the fallible entry points of each module validate their inputs before any
/// arithmetic happens.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    basis: BasisTag,
    mat: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(mat: DMatrix<Complex64>, basis: BasisTag) -> crate::Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(CoreError::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        if mat.nrows() < 2 {
            return Err(CoreError::DimensionTooSmall(mat.nrows()));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::NonFiniteEntries);
        }
        Ok(TruncatedOperator { basis, mat })
    }

    pub fn identity(dim: usize, basis: BasisTag) -> crate::Result<Self> {
        Self::new(DMatrix::identity(dim, dim), basis)
    }

    pub fn zeros(dim: usize, basis: BasisTag) -> crate::Result<Self> {
        Self::new(DMatrix::zeros(dim, dim), basis)
    }

    pub fn from_fn(
        dim: usize,
        basis: BasisTag,
        f: impl FnMut(usize, usize) -> Complex64,
    ) -> crate::Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, f), basis)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Conjugate transpose in the same basis.
    pub fn adjoint(&self) -> Self {
        TruncatedOperator {
            basis: self.basis,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        TruncatedOperator {
            basis: self.basis,
            mat: &self.mat * c,
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert!(
            self.basis == other.basis,
            "basis mismatch in operator arithmetic: {:?} vs {:?}",
            self.basis,
            other.basis
        );
        assert!(
            self.dim() == other.dim(),
            "dimension mismatch in operator arithmetic: {} vs {}",
            self.dim(),
            other.dim()
        );
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.check_compatible(other);
        TruncatedOperator {
            basis: self.basis,
            mat: &self.mat * &other.mat - &other.mat * &self.mat,
        }
    }

    /// Leading `(dim - margin) x (dim - margin)` block; the last rows and
    /// columns of banded-operator products carry truncation artifacts.
    pub fn interior(&self, margin: usize) -> crate::Result<Self> {
        let dim = self.dim();
        if 2 * margin >= dim {
            return Err(CoreError::MarginTooLarge { margin, dim });
        }
        let keep = dim - margin;
        Ok(TruncatedOperator {
            basis: self.basis,
            mat: self.mat.view((0, 0), (keep, keep)).into_owned(),
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.mat.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `max |self - self†|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        let adj = self.mat.adjoint();
        (&self.mat - adj).iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn apply(&self, v: &StateVector) -> crate::Result<StateVector> {
        if self.basis != v.basis {
            return Err(CoreError::BasisMismatch {
                left: self.basis,
                right: v.basis,
            });
        }
        if self.dim() != v.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: v.dim(),
            });
        }
        Ok(StateVector {
            basis: v.basis,
            coeffs: &self.mat * &v.coeffs,
        })
    }

    /// Row-major `[re, im]` pairs, the table layout used by the exporters.
    pub fn entries_row_major(&self) -> Vec<[f64; 2]> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let z = self.mat[(i, j)];
                out.push([z.re, z.im]);
            }
        }
        out
    }
}

impl core::ops::Add for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn add(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.check_compatible(rhs);
        TruncatedOperator {
            basis: self.basis,
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl core::ops::Sub for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn sub(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.check_compatible(rhs);
        TruncatedOperator {
            basis: self.basis,
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl core::ops::Mul for &TruncatedOperator {
    type Output = TruncatedOperator;
    fn mul(self, rhs: &TruncatedOperator) -> TruncatedOperator {
        self.check_compatible(rhs);
        TruncatedOperator {
            basis: self.basis,
            mat: &self.mat * &rhs.mat,
        }
    }
}

/// Complex coefficient vector in a declared basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    basis: BasisTag,
    coeffs: DVector<Complex64>,
}

impl StateVector {
    pub fn new(coeffs: DVector<Complex64>, basis: BasisTag) -> crate::Result<Self> {
        if coeffs.is_empty() {
            return Err(CoreError::DimensionTooSmall(0));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::NonFiniteEntries);
        }
        Ok(StateVector { basis, coeffs })
    }

    pub fn from_slice(coeffs: &[Complex64], basis: BasisTag) -> crate::Result<Self> {
        Self::new(DVector::from_column_slice(coeffs), basis)
    }

    /// The `n`-th basis vector at truncation `dim`.
    pub fn basis_state(dim: usize, n: usize, basis: BasisTag) -> crate::Result<Self> {
        if n >= dim {
            return Err(CoreError::DimensionMismatch { left: n, right: dim });
        }
        let mut v = DVector::zeros(dim);
        v[n] = Complex64::new(1.0, 0.0);
        Self::new(v, basis)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn normalized(&self) -> crate::Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(CoreError::NotNormalized(0.0));
        }
        Ok(StateVector {
            basis: self.basis,
            coeffs: &self.coeffs / Complex64::new(n, 0.0),
        })
    }

    /// Probability mass carried by the trailing tenth of the coefficients;
    /// the standard truncation diagnostic.
    pub fn tail_mass(&self) -> f64 {
        let d = self.dim();
        let tail = d.div_ceil(10);
        self.coeffs
            .iter()
            .skip(d - tail)
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Inner product, conjugate-linear in `self`.
    pub fn overlap(&self, other: &Self) -> crate::Result<Complex64> {
        if self.basis != other.basis {
            return Err(CoreError::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.coeffs.dotc(&other.coeffs))
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        StateVector {
            basis: self.basis,
            coeffs: &self.coeffs * c,
        }
    }

    pub fn sub(&self, other: &Self) -> crate::Result<Self> {
        if self.basis != other.basis {
            return Err(CoreError::BasisMismatch {
                left: self.basis,
                right: other.basis,
            });
        }
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(StateVector {
            basis: self.basis,
            coeffs: &self.coeffs - &other.coeffs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_rejects_nonpositive() {
        assert!(LowestWeight::new(0.0).is_err());
        assert!(LowestWeight::new(-1.0).is_err());
        assert!(LowestWeight::new(f64::NAN).is_err());
        assert_eq!(LowestWeight::new(1.5).unwrap().value(), 1.5);
    }

    #[test]
    fn operator_rejects_small_or_nonfinite() {
        let m = DMatrix::<Complex64>::identity(1, 1);
        assert!(matches!(
            TruncatedOperator::new(m, BasisTag::Su11Number),
            Err(CoreError::DimensionTooSmall(1))
        ));
        let mut m = DMatrix::<Complex64>::identity(2, 2);
        m[(0, 0)] = Complex64::new(f64::INFINITY, 0.0);
        assert!(matches!(
            TruncatedOperator::new(m, BasisTag::Su11Number),
            Err(CoreError::NonFiniteEntries)
        ));
    }

    #[test]
    fn interior_block_dimensions() {
        let op = TruncatedOperator::identity(10, BasisTag::Su11Number).unwrap();
        assert_eq!(op.interior(2).unwrap().dim(), 8);
        assert_eq!(op.interior(0).unwrap(), op);
        assert!(matches!(
            op.interior(5),
            Err(CoreError::MarginTooLarge { margin: 5, dim: 10 })
        ));
    }

    #[test]
    #[should_panic(expected = "basis mismatch")]
    fn arithmetic_panics_on_basis_mix() {
        let a = TruncatedOperator::identity(3, BasisTag::Su11Number).unwrap();
        let b = TruncatedOperator::identity(3, BasisTag::BosonNumber).unwrap();
        let _ = &a * &b;
    }

    #[test]
    fn overlap_is_conjugate_linear_in_first_argument() {
        let i = Complex64::new(0.0, 1.0);
        let f = StateVector::from_slice(&[i, Complex64::new(1.0, 0.0)], BasisTag::Su11Number)
            .unwrap();
        let g = StateVector::from_slice(
            &[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            BasisTag::Su11Number,
        )
        .unwrap();
        // ⟨i e0, e0⟩ = -i
        assert_eq!(f.overlap(&g).unwrap(), -i);
        let ff = f.overlap(&f).unwrap();
        assert!(ff.im.abs() < 1e-15 && ff.re >= 0.0);
    }

    #[test]
    fn tail_mass_counts_last_tenth() {
        let mut c = alloc::vec![Complex64::new(0.0, 0.0); 20];
        c[19] = Complex64::new(0.5, 0.0);
        c[17] = Complex64::new(1.0, 0.0); // outside the last two slots
        let v = StateVector::from_slice(&c, BasisTag::Su11Number).unwrap();
        assert!((v.tail_mass() - 0.25).abs() < 1e-15);
    }
}
