//! Truncated matrix realizations of the lowest-weight representation.
//!
//! In the number basis `|n⟩_N`, `n = 0..D-1`:
//!
//! ```text
//! L0 |n⟩ = (lambda + 2n) |n⟩
//! L+ |n⟩ = sqrt((n+1)(lambda+n)) |n+1⟩
//! L- |n⟩ = -sqrt(n(lambda+n-1)) |n-1⟩
//! ```
//!
//! so `L0` is Hermitian and `L+† = -L-` holds exactly entrywise, even at
//! truncation. The skew-adjoint triplet is `E0 = L+ + L-`,
//! `E± = ±(i/2)(L0 ∓ L+ ± L-)`; the Casimir scalar of the representation is
//! `lambda (lambda - 2)`.
//!
//! Products of these banded matrices are exact except in the trailing rows
//! and columns, where the truncation cuts off the band; identities are
//! therefore asserted on [`TruncatedOperator::interior`] blocks with margin
//! equal to one per banded factor beyond the first.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::linalg;
use crate::types::{BasisTag, CoreError, LowestWeight, ToleranceProfile, TruncatedOperator};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The triplet `L0, L+, L-` at a fixed weight and truncation.
#[derive(Debug, Clone)]
pub struct Ladder {
    pub l0: TruncatedOperator,
    pub l_plus: TruncatedOperator,
    pub l_minus: TruncatedOperator,
    lambda: LowestWeight,
}

impl Ladder {
    pub fn lambda(&self) -> f64 {
        self.lambda.value()
    }

    pub fn dim(&self) -> usize {
        self.l0.dim()
    }
}

/// Build the ladder triplet at truncation `dim`.
pub fn build_ladder(lambda: LowestWeight, dim: usize) -> crate::Result<Ladder> {
    if dim < 2 {
        return Err(CoreError::DimensionTooSmall(dim));
    }
    let lam = lambda.value();
    let l0 = TruncatedOperator::from_fn(dim, BasisTag::Su11Number, |i, j| {
        if i == j {
            c(lam + 2.0 * i as f64)
        } else {
            c(0.0)
        }
    })?;
    let l_plus = TruncatedOperator::from_fn(dim, BasisTag::Su11Number, |i, j| {
        if i == j + 1 {
            let n = j as f64;
            c(((n + 1.0) * (lam + n)).sqrt())
        } else {
            c(0.0)
        }
    })?;
    let l_minus = TruncatedOperator::from_fn(dim, BasisTag::Su11Number, |i, j| {
        if i + 1 == j {
            let n = j as f64;
            c(-(n * (lam + n - 1.0)).sqrt())
        } else {
            c(0.0)
        }
    })?;
    Ok(Ladder {
        l0,
        l_plus,
        l_minus,
        lambda,
    })
}

/// The skew-adjoint triplet `E0, E+, E-` derived from a ladder.
///
/// All three are exactly skew-Hermitian at truncation because the
/// adjointness relations of the ladder hold entrywise.
#[derive(Debug, Clone)]
pub struct SkewTriplet {
    pub e0: TruncatedOperator,
    pub e_plus: TruncatedOperator,
    pub e_minus: TruncatedOperator,
}

pub fn build_skew_triplet(ladder: &Ladder) -> SkewTriplet {
    let e0 = &ladder.l_plus + &ladder.l_minus;
    // E+ = (i/2)(L0 - L+ + L-), E- = -(i/2)(L0 + L+ - L-)
    let diff = &ladder.l_minus - &ladder.l_plus;
    let e_plus = (&ladder.l0 + &diff).scaled(I * c(0.5));
    let e_minus = (&ladder.l0 - &diff).scaled(-I * c(0.5));
    SkewTriplet {
        e0,
        e_plus,
        e_minus,
    }
}

/// Both matrix forms of the Casimir operator and their agreement.
#[derive(Debug, Clone)]
pub struct CasimirForms {
    /// `L0^2 - 2 L0 + 4 L+ L-`; exact at truncation on every entry.
    pub normal_ordered: TruncatedOperator,
    /// `E0^2 + 2 (E+ E- + E- E+)`; exact on the interior with margin 1.
    pub symmetric: TruncatedOperator,
    /// The scalar value `lambda (lambda - 2)` of the irreducible representation.
    pub scalar: f64,
    /// Max entrywise deviation of the two forms on the interior (margin 1).
    pub form_deviation: f64,
}

pub fn casimir(lambda: LowestWeight, dim: usize) -> crate::Result<CasimirForms> {
    let ladder = build_ladder(lambda, dim)?;
    let skew = build_skew_triplet(&ladder);
    let l0sq = &ladder.l0 * &ladder.l0;
    let normal_ordered =
        &(&l0sq - &ladder.l0.scaled(c(2.0))) + &(&ladder.l_plus * &ladder.l_minus).scaled(c(4.0));
    let anti = &(&skew.e_plus * &skew.e_minus) + &(&skew.e_minus * &skew.e_plus);
    let symmetric = &(&skew.e0 * &skew.e0) + &anti.scaled(c(2.0));
    let form_deviation = (&normal_ordered.interior(1)? - &symmetric.interior(1)?).max_abs();
    let lam = lambda.value();
    Ok(CasimirForms {
        normal_ordered,
        symmetric,
        scalar: lam * (lam - 2.0),
        form_deviation,
    })
}

/// The bounded annihilation operator and its adjoint:
///
/// ```text
/// a  |n⟩ = sqrt(n / (n + lambda - 1)) |n-1⟩      (a|0⟩ = 0)
/// a* |n⟩ = sqrt((n+1) / (n + lambda)) |n+1⟩
/// ```
///
/// The `lambda = 1, n = 0` coefficient is taken as zero by convention.
#[derive(Debug, Clone)]
pub struct AnnihilationPair {
    pub annihilation: TruncatedOperator,
    pub creation: TruncatedOperator,
}

pub fn build_annihilation_pair(
    lambda: LowestWeight,
    dim: usize,
) -> crate::Result<AnnihilationPair> {
    if dim < 2 {
        return Err(CoreError::DimensionTooSmall(dim));
    }
    let lam = lambda.value();
    let annihilation = TruncatedOperator::from_fn(dim, BasisTag::Su11Number, |i, j| {
        if i + 1 == j {
            let n = j as f64;
            c((n / (n + lam - 1.0)).sqrt())
        } else {
            c(0.0)
        }
    })?;
    let creation = annihilation.adjoint();
    Ok(AnnihilationPair {
        annihilation,
        creation,
    })
}

/// `N = (L0 - lambda)/2 = diag(0, 1, ..., D-1)`.
pub fn number_operator(lambda: LowestWeight, dim: usize) -> crate::Result<TruncatedOperator> {
    let _ = lambda;
    TruncatedOperator::from_fn(dim, BasisTag::Su11Number, |i, j| {
        if i == j {
            c(i as f64)
        } else {
            c(0.0)
        }
    })
}

/// The half-plane generator `A = -i (a + 1)(a - 1)^{-1}`, upper triangular
/// with diagonal `i`, together with the cross-check against the second form
/// `A = E+^{-1} (E0 - lambda)/2` solved in least squares.
#[derive(Debug, Clone)]
pub struct CayleyTransform {
    pub op: TruncatedOperator,
    /// Max entrywise deviation between the two forms on the interior (margin 1).
    pub alt_form_deviation: f64,
    /// Relative least-squares residual of the `E+`-form on the interior rows.
    pub solve_residual: f64,
    /// Condition number of `(a - 1)`.
    pub condition: f64,
}

pub fn cayley_transform(
    lambda: LowestWeight,
    dim: usize,
    tol: &ToleranceProfile,
) -> crate::Result<CayleyTransform> {
    tol.validate()?;
    let pair = build_annihilation_pair(lambda, dim)?;
    let id = TruncatedOperator::identity(dim, BasisTag::Su11Number)?;
    let a_minus = &pair.annihilation - &id;
    let a_plus = &pair.annihilation + &id;

    // a is strictly upper triangular, so (a - 1) is invertible with
    // determinant (-1)^D at every truncation.
    let inv = a_minus
        .matrix()
        .clone()
        .lu()
        .try_inverse()
        .ok_or(CoreError::NonFiniteEntries)?;
    let op = TruncatedOperator::new(a_plus.matrix() * inv * (-I), BasisTag::Su11Number)?;

    let svd = a_minus.matrix().clone().svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };

    // Second form: solve E+ X = (E0 - lambda)/2 in least squares. The last
    // row of the right-hand side is polluted by the truncated band, so the
    // residual is judged on the leading rows only.
    let ladder = build_ladder(lambda, dim)?;
    let skew = build_skew_triplet(&ladder);
    let lam_id = DMatrix::<Complex64>::identity(dim, dim) * c(lambda.value());
    let rhs = (skew.e0.matrix() - lam_id) * c(0.5);
    let (x, _full_resid, _cond_e) = linalg::lstsq(skew.e_plus.matrix(), &rhs, 1e-14)?;
    let resid_mat = skew.e_plus.matrix() * &x - &rhs;
    let interior_resid = linalg::max_abs(&resid_mat.view((0, 0), (dim - 1, dim)).into_owned());
    let scale = linalg::max_abs(&rhs).max(1.0);
    let solve_residual = interior_resid / scale;
    if solve_residual > tol.algebraic {
        return Err(CoreError::SolveResidual {
            residual: solve_residual,
            tol: tol.algebraic,
        });
    }
    let alt = TruncatedOperator::new(x, BasisTag::Su11Number)?;
    let alt_form_deviation = (&op.interior(1)? - &alt.interior(1)?).max_abs();

    Ok(CayleyTransform {
        op,
        alt_form_deviation,
        solve_residual,
        condition,
    })
}
