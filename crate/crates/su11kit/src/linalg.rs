//! Dense linear-algebra helpers shared by the representation and
//! measurement layers: a scaling-and-squaring matrix exponential,
//! Hermitian/general eigenvalue wrappers, and SVD-based least squares.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::types::CoreError;

/// Padé order-13 theta bound from the standard scaling-and-squaring
/// analysis; below it no scaling is needed.
const THETA_13: f64 = 4.25;

const PADE_13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn one_norm(m: &DMatrix<Complex64>) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = m.column(j).iter().map(|z| z.norm()).sum();
        best = best.max(s);
    }
    best
}

/// Matrix exponential via the [13/13] Padé approximant with scaling and
/// squaring. Adequate for the banded generators used here, whose norms stay
/// within a few hundred at the truncations of interest.
pub fn expm(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scale = Complex64::new((0.5f64).powi(s as i32), 0.0);
    let a = a * scale;

    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let id = DMatrix::<Complex64>::identity(n, n);
    let c = |k: usize| Complex64::new(PADE_13[k], 0.0);

    // u = A (A6 (c13 A6 + c11 A4 + c9 A2) + c7 A6 + c5 A4 + c3 A2 + c1 I)
    let w1 = &a6 * c(13) + &a4 * c(11) + &a2 * c(9);
    let w2 = &a6 * c(7) + &a4 * c(5) + &a2 * c(3) + &id * c(1);
    let u = &a * (&a6 * &w1 + w2);
    // v = A6 (c12 A6 + c10 A4 + c8 A2) + c6 A6 + c4 A4 + c2 A2 + c0 I
    let z1 = &a6 * c(12) + &a4 * c(10) + &a2 * c(8);
    let v = &a6 * &z1 + &a6 * c(6) + &a4 * c(4) + &a2 * c(2) + &id * c(0);

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .expect("Padé denominator is singular; matrix norm out of range");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// Eigenvalues of `(m + m†)/2`, ascending. The symmetrization guards
/// against rounding-level asymmetry in products that are Hermitian in
/// exact arithmetic.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eigs: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().cloned().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

pub fn hermitian_smallest_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Eigenvalues of a general complex matrix via the Schur form.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    m.clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().cloned().collect())
        .unwrap_or_else(|| {
            // Fall back to diagonal entries for already-triangular input.
            (0..m.nrows()).map(|i| m[(i, i)]).collect()
        })
}

/// SVD least-squares solve of `a x = b` for each column of `b`.
///
/// Returns the solution, the residual `max_col ||a x - b||`, and the
/// condition number `sigma_max / sigma_min`.
pub fn lstsq(
    a: &DMatrix<Complex64>,
    b: &DMatrix<Complex64>,
    eps: f64,
) -> crate::Result<(DMatrix<Complex64>, f64, f64)> {
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let x = svd
        .solve(b, eps * smax.max(1.0))
        .map_err(|_| CoreError::NonFiniteEntries)?;
    let resid_mat = a * &x - b;
    let mut resid = 0.0f64;
    for j in 0..resid_mat.ncols() {
        resid = resid.max(resid_mat.column(j).norm());
    }
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    Ok((x, resid, cond))
}

/// Hermitian square root of a PSD matrix; eigenvalues below `-tol` are
/// rejected, small negative rounding noise is clamped to zero.
pub fn psd_sqrt(m: &DMatrix<Complex64>, tol: f64) -> crate::Result<DMatrix<Complex64>> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let se = h.symmetric_eigen();
    let mut min_eig = f64::INFINITY;
    for &e in se.eigenvalues.iter() {
        min_eig = min_eig.min(e);
    }
    if min_eig < -tol {
        return Err(CoreError::NotPositiveSemidefinite {
            index: 0,
            min_eig,
        });
    }
    let n = m.nrows();
    let mut d = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        d[(i, i)] = Complex64::new(se.eigenvalues[i].max(0.0).sqrt(), 0.0);
    }
    let q = se.eigenvectors;
    Ok(&q * d * q.adjoint())
}

/// Kronecker product, row-major convention: index `(i1 * n2 + i2)`.
pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Largest entry modulus.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Leading `(n-margin) x (n-margin)` block of a bare matrix.
pub fn leading_block(m: &DMatrix<Complex64>, margin: usize) -> DMatrix<Complex64> {
    let keep = m.nrows() - margin;
    m.view((0, 0), (keep, keep)).into_owned()
}

/// `log Γ(x)` for positive arguments; ratios of Gamma values are always
/// combined in log space to avoid overflow at large truncations.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Deterministic unit vector stream for randomized checks, keyed by a seed.
pub fn pseudo_random_vector(dim: usize, seed: u64) -> DVector<Complex64> {
    use rand_core::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        // 53-bit uniform in [0, 1), mapped to [-1, 1)
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    };
    let v = DVector::from_fn(dim, |_, _| Complex64::new(draw(), draw()));
    let n = v.norm();
    v / Complex64::new(n, 0.0)
}

/// Deterministic Haar-like random unitary from a QR factorization of a
/// seeded complex Gaussian-ish matrix.
pub fn pseudo_random_unitary(dim: usize, seed: u64) -> DMatrix<Complex64> {
    use rand_core::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    };
    let m = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(draw(), draw()));
    let qr = m.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix column phases so the factorization is unique and q stays unitary.
    for j in 0..dim {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / Complex64::new(d.norm(), 0.0);
            for i in 0..dim {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}
