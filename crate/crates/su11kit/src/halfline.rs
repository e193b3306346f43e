//! Concrete realization on the positive half-line.
//!
//! The affine-group generators act on `L^2(R+)` as `E0 = i(PQ + QP)`,
//! `E+ = iQ`, and the lowest-weight family is completed by
//! `E- = -i(PQP + k^2 Q^{-1})` with `k > -1/2`; the lowest weight is
//! `lambda = 2k + 1` and the Casimir scalar `4k^2 - 1`. The number basis is
//!
//! ```text
//! |n⟩^k (x) = sqrt(2^{2k+1} n! / Gamma(n+2k+1)) e^{-x} x^k S_n^{2k}(2x)
//! ```
//!
//! with `S_n^l` the Sonine (associated Laguerre) polynomial, and the affine
//! coherent state is `sqrt((2 Im eta)^{2k+1} / Gamma(2k+1)) x^k e^{i eta x}`,
//! an eigenvector of `A = P + i k Q^{-1}`.
//!
//! Functions are sampled on a half-line grid; the default is log-spaced with
//! trapezoid weights in the log coordinate, which resolves both the `x^k`
//! behaviour at the origin and the exponential decay. Derivatives use
//! fourth-order central differences in the log coordinate with one-sided
//! closures at the ends.
//!
//! The adjoint `A* = P - i k Q^{-1}` is applied as that formula; it is the
//! formal adjoint on functions vanishing at the origin. The exact adjoint of
//! the discretized `A` in the weighted inner product is also available
//! ([`HalfLineOps::cayley_weighted_adjoint`]) for constructions that must be
//! Hermitian at the matrix level.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;

use crate::linalg;
use crate::types::{CoreError, LowestWeight, ToleranceProfile};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Weight-function parameter of the half-line family; `lambda = 2k + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineParams {
    k: f64,
}

impl AffineParams {
    pub fn new(k: f64) -> crate::Result<Self> {
        if !(k > -0.5) || !k.is_finite() {
            return Err(CoreError::InvalidParameter(alloc::format!(
                "affine parameter k must exceed -1/2, got {k}"
            )));
        }
        Ok(AffineParams { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn lambda(&self) -> LowestWeight {
        LowestWeight::new(2.0 * self.k + 1.0).expect("k > -1/2 gives a positive weight")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScheme {
    Uniform,
    Log,
}

impl GridScheme {
    pub fn name(&self) -> &'static str {
        match self {
            GridScheme::Uniform => "uniform",
            GridScheme::Log => "log",
        }
    }
}

/// Half-line quadrature grid: strictly increasing positive nodes with
/// weights reproducing `∫_0^∞ f(x) dx` for the function families in play.
#[derive(Debug, Clone)]
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scheme: GridScheme,
    fingerprint: u64,
}

fn fnv1a_bits(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

impl Grid {
    /// Log-spaced grid with trapezoid weights in the log coordinate.
    pub fn log(x_min: f64, x_max: f64, count: usize) -> crate::Result<Self> {
        if !(x_min > 0.0 && x_max > x_min) || count < 16 {
            return Err(CoreError::InvalidGrid);
        }
        let du = (x_max / x_min).ln() / (count - 1) as f64;
        let nodes: Vec<f64> = (0..count).map(|j| x_min * (du * j as f64).exp()).collect();
        // Trapezoid in u: dx = x du. The strip [0, x_min) is not covered,
        // so integrands finite at the origin carry an O(x_min) bias; push
        // x_min down when that matters.
        let weights: Vec<f64> = nodes
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let tw = if j == 0 || j == count - 1 { 0.5 } else { 1.0 };
                tw * du * x
            })
            .collect();
        let fingerprint = fnv1a_bits(&nodes);
        Ok(Grid {
            nodes,
            weights,
            scheme: GridScheme::Log,
            fingerprint,
        })
    }

    /// Uniformly spaced grid on `[a, b]` with trapezoid weights.
    pub fn uniform(a: f64, b: f64, count: usize) -> crate::Result<Self> {
        if !(a > 0.0 && b > a) || count < 16 {
            return Err(CoreError::InvalidGrid);
        }
        let dx = (b - a) / (count - 1) as f64;
        let nodes: Vec<f64> = (0..count).map(|j| a + dx * j as f64).collect();
        let weights: Vec<f64> = (0..count)
            .map(|j| {
                let tw = if j == 0 || j == count - 1 { 0.5 } else { 1.0 };
                tw * dx
            })
            .collect();
        let fingerprint = fnv1a_bits(&nodes);
        Ok(Grid {
            nodes,
            weights,
            scheme: GridScheme::Uniform,
            fingerprint,
        })
    }

    /// The default working grid: log-spaced on `[1e-6, 60]` with 2048 nodes.
    pub fn log_default() -> Self {
        Grid::log(1e-6, 60.0, 2048).expect("default parameters are valid")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scheme(&self) -> GridScheme {
        self.scheme
    }

    /// Relative defect of `∫ e^{-x} x^{p} dx = Gamma(p+1)` on this grid.
    pub fn moment_defect(&self, p: f64) -> f64 {
        let got: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * (-x).exp() * x.powf(p))
            .sum();
        let want = linalg::ln_gamma(p + 1.0).exp();
        (got - want).abs() / want
    }

    /// Sample a function into a grid vector.
    pub fn sample(&self, mut f: impl FnMut(f64) -> Complex64) -> GridFunction {
        GridFunction {
            values: DVector::from_iterator(self.len(), self.nodes.iter().map(|&x| f(x))),
            fingerprint: self.fingerprint,
        }
    }

    pub(crate) fn check(&self, f: &GridFunction) -> crate::Result<()> {
        if f.fingerprint != self.fingerprint || f.values.len() != self.len() {
            return Err(CoreError::GridMismatch);
        }
        Ok(())
    }

    /// Weighted inner product, conjugate-linear in the first argument.
    pub fn overlap(&self, f: &GridFunction, g: &GridFunction) -> crate::Result<Complex64> {
        self.check(f)?;
        self.check(g)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..self.len() {
            acc += f.values[j].conj() * g.values[j] * c(self.weights[j]);
        }
        Ok(acc)
    }

    pub fn norm(&self, f: &GridFunction) -> crate::Result<f64> {
        Ok(self.overlap(f, f)?.re.max(0.0).sqrt())
    }
}

/// Complex-valued samples on a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: DVector<Complex64>,
    fingerprint: u64,
}

impl GridFunction {
    pub fn values(&self) -> &DVector<Complex64> {
        &self.values
    }

    pub(crate) fn from_values(values: DVector<Complex64>, grid: &Grid) -> Self {
        GridFunction {
            values,
            fingerprint: grid.fingerprint,
        }
    }

    pub fn scaled(&self, z: Complex64) -> GridFunction {
        GridFunction {
            values: &self.values * z,
            fingerprint: self.fingerprint,
        }
    }

    pub fn sub(&self, other: &GridFunction) -> crate::Result<GridFunction> {
        if self.fingerprint != other.fingerprint {
            return Err(CoreError::GridMismatch);
        }
        Ok(GridFunction {
            values: &self.values - &other.values,
            fingerprint: self.fingerprint,
        })
    }

    pub fn add(&self, other: &GridFunction) -> crate::Result<GridFunction> {
        if self.fingerprint != other.fingerprint {
            return Err(CoreError::GridMismatch);
        }
        Ok(GridFunction {
            values: &self.values + &other.values,
            fingerprint: self.fingerprint,
        })
    }
}

/// Sonine polynomial `S_n^l` by the three-term recurrence
/// `(n+1) S_{n+1} = (2n + l + 1 - x) S_n - (n + l) S_{n-1}`.
pub fn sonine(n: usize, l: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = l + 1.0 - x;
    for m in 1..n {
        let mf = m as f64;
        let next = ((2.0 * mf + l + 1.0 - x) * cur - (mf + l) * prev) / (mf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Definitional sum for `S_n^l`, used as a cross-check of the recurrence at
/// small degree.
pub fn sonine_reference_sum(n: usize, l: f64, x: f64) -> f64 {
    let mut acc = 0.0;
    for m in 0..=n {
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let log_mag = linalg::ln_gamma(n as f64 + l + 1.0)
            - linalg::ln_gamma((n - m) as f64 + 1.0)
            - linalg::ln_gamma(m as f64 + l + 1.0)
            - linalg::ln_gamma(m as f64 + 1.0);
        acc += sign * log_mag.exp() * x.powi(m as i32);
    }
    acc
}

/// The `n`-th half-line number-basis function.
pub fn basis_fn(
    n: usize,
    params: AffineParams,
    grid: &Grid,
    tol: &ToleranceProfile,
) -> crate::Result<GridFunction> {
    let k = params.k();
    // The norm integral is ∫ e^{-2x} x^{2k} (poly)^2; insist the grid
    // reproduces the underlying moment before trusting anything built on it.
    let defect = grid.moment_defect(2.0 * k);
    if defect > tol.grid {
        return Err(CoreError::GridUnresolved {
            defect,
            tol: tol.grid,
        });
    }
    let log_norm = 0.5
        * ((2.0 * k + 1.0) * core::f64::consts::LN_2 + linalg::ln_gamma(n as f64 + 1.0)
            - linalg::ln_gamma(n as f64 + 2.0 * k + 1.0));
    let norm = log_norm.exp();
    Ok(grid.sample(|x| c(norm * (-x).exp() * x.powf(k) * sonine(n, 2.0 * k, 2.0 * x))))
}

/// The affine coherent state at `eta` (Im `eta` > 0).
///
/// Rejects labels whose oscillation `Re eta` the grid cannot resolve: the
/// phase advance per node is checked where the envelope still carries mass.
pub fn affine_coherent(
    eta: crate::coherent::HalfPlanePoint,
    params: AffineParams,
    grid: &Grid,
    tol: &ToleranceProfile,
) -> crate::Result<GridFunction> {
    let k = params.k();
    let e = eta.value();
    let defect = grid.moment_defect(2.0 * k);
    if defect > tol.grid {
        return Err(CoreError::GridUnresolved {
            defect,
            tol: tol.grid,
        });
    }
    // Envelope x^k e^{-Im eta x} is negligible beyond x_eff; require less
    // than ~0.8 rad of phase advance per node up to there.
    let x_eff = ((k + 20.0) / e.im).min(*grid.nodes().last().unwrap());
    let mut worst = 0.0f64;
    for j in 1..grid.len() {
        let x = grid.nodes()[j];
        if x > x_eff {
            break;
        }
        let dx = x - grid.nodes()[j - 1];
        worst = worst.max(e.re.abs() * dx);
    }
    if worst > 0.8 {
        return Err(CoreError::UnderResolved(alloc::format!(
            "phase advance {worst:.2} rad per node at Re eta = {}",
            e.re
        )));
    }
    let log_norm = 0.5 * ((2.0 * k + 1.0) * (2.0 * e.im).ln() - linalg::ln_gamma(2.0 * k + 1.0));
    let norm = log_norm.exp();
    Ok(grid.sample(|x| c(norm * x.powf(k)) * (I * e * c(x)).exp()))
}

/// Finite-difference realization of the generators at a fixed `k`.
///
/// Derivatives are taken in the log coordinate on log grids (chain rule
/// applied) and directly on uniform grids.
#[derive(Debug, Clone)]
pub struct HalfLineOps {
    k: f64,
    /// First-derivative stencil rows in the differencing coordinate.
    d1_rows: Vec<(usize, Vec<f64>)>,
    /// Second-derivative stencil rows in the differencing coordinate.
    d2_rows: Vec<(usize, Vec<f64>)>,
}

fn first_derivative_rows(n: usize, h: f64) -> Vec<(usize, Vec<f64>)> {
    let mut rows = Vec::with_capacity(n);
    let s = 1.0 / (12.0 * h);
    for j in 0..n {
        if j < 2 {
            let coeffs = if j == 0 {
                alloc::vec![-25.0 * s, 48.0 * s, -36.0 * s, 16.0 * s, -3.0 * s]
            } else {
                alloc::vec![-3.0 * s, -10.0 * s, 18.0 * s, -6.0 * s, 1.0 * s]
            };
            rows.push((0, coeffs));
        } else if j >= n - 2 {
            let coeffs = if j == n - 1 {
                alloc::vec![3.0 * s, -16.0 * s, 36.0 * s, -48.0 * s, 25.0 * s]
            } else {
                alloc::vec![-1.0 * s, 6.0 * s, -18.0 * s, 10.0 * s, 3.0 * s]
            };
            rows.push((n - 5, coeffs));
        } else {
            rows.push((j - 2, alloc::vec![s, -8.0 * s, 0.0, 8.0 * s, -s]));
        }
    }
    rows
}

fn second_derivative_rows(n: usize, h: f64) -> Vec<(usize, Vec<f64>)> {
    let mut rows = Vec::with_capacity(n);
    let s = 1.0 / (12.0 * h * h);
    for j in 0..n {
        if j < 2 {
            let coeffs = if j == 0 {
                alloc::vec![45.0 * s, -154.0 * s, 214.0 * s, -156.0 * s, 61.0 * s, -10.0 * s]
            } else {
                alloc::vec![10.0 * s, -15.0 * s, -4.0 * s, 14.0 * s, -6.0 * s, 1.0 * s]
            };
            rows.push((0, coeffs));
        } else if j >= n - 2 {
            let coeffs = if j == n - 1 {
                alloc::vec![-10.0 * s, 61.0 * s, -156.0 * s, 214.0 * s, -154.0 * s, 45.0 * s]
            } else {
                alloc::vec![1.0 * s, -6.0 * s, 14.0 * s, -4.0 * s, -15.0 * s, 10.0 * s]
            };
            rows.push((n - 6, coeffs));
        } else {
            rows.push((j - 2, alloc::vec![-s, 16.0 * s, -30.0 * s, 16.0 * s, -s]));
        }
    }
    rows
}

fn apply_rows(rows: &[(usize, Vec<f64>)], v: &DVector<Complex64>) -> DVector<Complex64> {
    let mut out = DVector::zeros(v.len());
    for (j, (start, coeffs)) in rows.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (o, &w) in coeffs.iter().enumerate() {
            acc += c(w) * v[start + o];
        }
        out[j] = acc;
    }
    out
}

fn apply_rows_transposed(rows: &[(usize, Vec<f64>)], v: &DVector<Complex64>) -> DVector<Complex64> {
    let mut out = DVector::zeros(v.len());
    for (j, (start, coeffs)) in rows.iter().enumerate() {
        for (o, &w) in coeffs.iter().enumerate() {
            out[start + o] += c(w) * v[j];
        }
    }
    out
}

impl HalfLineOps {
    pub fn new(params: AffineParams, grid: &Grid) -> crate::Result<Self> {
        let n = grid.len();
        if n < 16 {
            return Err(CoreError::InvalidGrid);
        }
        // Stencil stability: the differencing coordinate must be uniform,
        // and log steps must stay small enough that the e^{±u} factors vary
        // slowly across the stencil footprint.
        let h = match grid.scheme() {
            GridScheme::Log => {
                let u: Vec<f64> = grid.nodes().iter().map(|&x| x.ln()).collect();
                let h = (u[n - 1] - u[0]) / (n - 1) as f64;
                for j in 1..n {
                    if ((u[j] - u[j - 1]) / h - 1.0).abs() > 1e-8 {
                        return Err(CoreError::InvalidGrid);
                    }
                }
                if h > 0.25 {
                    return Err(CoreError::UnderResolved(alloc::format!(
                        "log step {h:.3} too coarse for stable differencing"
                    )));
                }
                h
            }
            GridScheme::Uniform => {
                let h = (grid.nodes()[n - 1] - grid.nodes()[0]) / (n - 1) as f64;
                for j in 1..n {
                    if ((grid.nodes()[j] - grid.nodes()[j - 1]) / h - 1.0).abs() > 1e-8 {
                        return Err(CoreError::InvalidGrid);
                    }
                }
                h
            }
        };
        Ok(HalfLineOps {
            k: params.k(),
            d1_rows: first_derivative_rows(n, h),
            d2_rows: second_derivative_rows(n, h),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// `f'` in the x coordinate.
    fn dx(&self, grid: &Grid, f: &GridFunction) -> DVector<Complex64> {
        let d = apply_rows(&self.d1_rows, f.values());
        match grid.scheme() {
            GridScheme::Uniform => d,
            GridScheme::Log => DVector::from_fn(d.len(), |j, _| d[j] / c(grid.nodes()[j])),
        }
    }

    /// `f''` in the x coordinate.
    fn dxx(&self, grid: &Grid, f: &GridFunction) -> DVector<Complex64> {
        match grid.scheme() {
            GridScheme::Uniform => apply_rows(&self.d2_rows, f.values()),
            GridScheme::Log => {
                // f'' = e^{-2u} (D^2 f - D f).
                let d1 = apply_rows(&self.d1_rows, f.values());
                let d2 = apply_rows(&self.d2_rows, f.values());
                DVector::from_fn(d1.len(), |j, _| {
                    let x = grid.nodes()[j];
                    (d2[j] - d1[j]) / c(x * x)
                })
            }
        }
    }

    fn wrap(&self, grid: &Grid, values: DVector<Complex64>) -> GridFunction {
        GridFunction::from_values(values, grid)
    }

    /// `P f = -i f'`.
    pub fn momentum(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d = self.dx(grid, f);
        Ok(self.wrap(grid, d.map(|z| -I * z)))
    }

    /// `L0 f = -f' - x f'' + k^2 f / x + x f`.
    pub fn l0(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let d2 = self.dxx(grid, f);
        let k2 = self.k * self.k;
        let out = DVector::from_fn(grid.len(), |j, _| {
            let x = grid.nodes()[j];
            -d1[j] - c(x) * d2[j] + c(k2 / x) * f.values()[j] + c(x) * f.values()[j]
        });
        Ok(self.wrap(grid, out))
    }

    /// `L+ f = (f + 2x f' - x f - f' - x f'' + k^2 f / x) / 2`.
    pub fn l_plus(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let d2 = self.dxx(grid, f);
        let k2 = self.k * self.k;
        let out = DVector::from_fn(grid.len(), |j, _| {
            let x = grid.nodes()[j];
            let fv = f.values()[j];
            (fv + c(2.0 * x) * d1[j] - c(x) * fv - d1[j] - c(x) * d2[j] + c(k2 / x) * fv) * c(0.5)
        });
        Ok(self.wrap(grid, out))
    }

    /// `L- f = (f + 2x f' + x f + f' + x f'' - k^2 f / x) / 2`.
    pub fn l_minus(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let d2 = self.dxx(grid, f);
        let k2 = self.k * self.k;
        let out = DVector::from_fn(grid.len(), |j, _| {
            let x = grid.nodes()[j];
            let fv = f.values()[j];
            (fv + c(2.0 * x) * d1[j] + c(x) * fv + d1[j] + c(x) * d2[j] - c(k2 / x) * fv) * c(0.5)
        });
        Ok(self.wrap(grid, out))
    }

    /// `i (PQ + QP) f = f + 2x f'`.
    pub fn e0(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let out =
            DVector::from_fn(grid.len(), |j, _| f.values()[j] + c(2.0 * grid.nodes()[j]) * d1[j]);
        Ok(self.wrap(grid, out))
    }

    /// `E+ f = i x f`.
    pub fn e_plus(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let out = DVector::from_fn(grid.len(), |j, _| I * c(grid.nodes()[j]) * f.values()[j]);
        Ok(self.wrap(grid, out))
    }

    /// `E- f = i (f' + x f'' - k^2 f / x)`.
    pub fn e_minus(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let d2 = self.dxx(grid, f);
        let k2 = self.k * self.k;
        let out = DVector::from_fn(grid.len(), |j, _| {
            let x = grid.nodes()[j];
            I * (d1[j] + c(x) * d2[j] - c(k2 / x) * f.values()[j])
        });
        Ok(self.wrap(grid, out))
    }

    /// `A f = -i (f' - k f / x)`.
    pub fn cayley(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let out = DVector::from_fn(grid.len(), |j, _| {
            -I * (d1[j] - c(self.k / grid.nodes()[j]) * f.values()[j])
        });
        Ok(self.wrap(grid, out))
    }

    /// `A* f = -i (f' + k f / x)`, the formal adjoint on functions vanishing
    /// at the origin.
    pub fn cayley_adjoint(&self, grid: &Grid, f: &GridFunction) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let d1 = self.dx(grid, f);
        let out = DVector::from_fn(grid.len(), |j, _| {
            -I * (d1[j] + c(self.k / grid.nodes()[j]) * f.values()[j])
        });
        Ok(self.wrap(grid, out))
    }

    /// The exact adjoint of the discretized `A` in the weighted inner
    /// product: `W^{-1} A^H W`. Agrees with [`Self::cayley_adjoint`] away
    /// from the boundary rows; its boundary rows carry the discrete
    /// integration-by-parts flux, so it pairs exactly but cannot act as
    /// the formal adjoint pointwise near the ends.
    pub fn cayley_weighted_adjoint(
        &self,
        grid: &Grid,
        f: &GridFunction,
    ) -> crate::Result<GridFunction> {
        grid.check(f)?;
        let n = grid.len();
        let weighted = DVector::from_fn(n, |j, _| f.values()[j] * c(grid.weights()[j]));
        // (dx)^H W f: undo the per-row 1/x chain-rule scaling before the
        // transposed stencil on log grids.
        let scaled = match grid.scheme() {
            GridScheme::Log => DVector::from_fn(n, |j, _| weighted[j] / c(grid.nodes()[j])),
            GridScheme::Uniform => weighted.clone(),
        };
        let dt = apply_rows_transposed(&self.d1_rows, &scaled);
        // A = -i dx + i k/x, so A^H = i dx^H - i k/x.
        let out = DVector::from_fn(n, |j, _| {
            let x = grid.nodes()[j];
            let y = I * dt[j] - I * c(self.k / x) * weighted[j];
            y / c(grid.weights()[j])
        });
        Ok(self.wrap(grid, out))
    }
}

/// Matrix elements `⟨basis_i, Op basis_j⟩` of a grid operator in a finite
/// family of grid functions.
pub fn matrix_elements(
    grid: &Grid,
    basis: &[GridFunction],
    mut op: impl FnMut(&GridFunction) -> crate::Result<GridFunction>,
) -> crate::Result<DMatrix<Complex64>> {
    let n = basis.len();
    let mut out = DMatrix::zeros(n, n);
    for j in 0..n {
        let image = op(&basis[j])?;
        for i in 0..n {
            out[(i, j)] = grid.overlap(&basis[i], &image)?;
        }
    }
    Ok(out)
}
