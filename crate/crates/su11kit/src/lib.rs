//! Numerical realizations of lowest-weight su(1,1) representations and the
//! measurement theory attached to them.
//!
//! Everything here works at finite truncation: operators are dense complex
//! matrices in a declared basis, states are coefficient vectors, and the
//! analytic identities of the continuous theory are checked on interior
//! blocks with explicit tolerances.
//!
//! The crate is split by subject:
//!
//! - [`rep`] — truncated ladder matrices `L0, L+, L-`, the skew-adjoint
//!   triplet `E0, E+, E-`, the Casimir scalar, the annihilation/creation
//!   pair `a, a*`, and the Cayley transform `A`.
//! - [`coherent`] — coherent states on the unit disk and upper half-plane,
//!   displacement unitaries, the Möbius group action, and the
//!   resolution-of-identity quadrature.
//! - [`povm`] — outcome densities of the subnormal operators `a*` and `A*`,
//!   moment checks, rejection sampling, hyponormality certificates, and
//!   finite Naimark dilations.
//! - [`halfline`] — the concrete affine-group realization on `L²(ℝ⁺)`:
//!   log grids, Sonine/Laguerre bases, affine coherent states, and
//!   finite-difference realizations of the generators.
//! - [`squeezed`] — the boson-space realization: squeezed vacua as
//!   su(1,1) coherent states, parity sectors, and the multi-particle
//!   reduction table.
//! - [`extension`] — compound-system-type normal extensions: heterodyne,
//!   the qubit-ancilla symmetric extension, the isometric extension, and
//!   the tensor-grid extension for lowest weight above one.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats, and the CLI
//! live in the companion `su11kit-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coherent;
pub mod extension;
pub mod halfline;
pub mod linalg;
pub mod povm;
pub mod quad;
pub mod rep;
pub mod squeezed;
mod types;

pub use types::{
    BasisTag, CoreError, LowestWeight, StateVector, ToleranceProfile, TruncatedOperator,
};

/// Convenient result alias used across the crate.
pub type Result<T> = core::result::Result<T, CoreError>;
