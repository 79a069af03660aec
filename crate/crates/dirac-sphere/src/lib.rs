//! Exact spectral analysis of the massless Dirac operator on round and
//! generalized Berger 3-spheres.
//!
//! The sphere is the unit sphere in ambient coordinates `x1..x4`; spinor
//! eigenproblems reduce degree by degree to finite matrices over harmonic
//! homogeneous polynomials. All algebra up to the final floating-point
//! eigensolve is exact rational, so operator identities and closed-form
//! characteristic polynomials can be checked with zero tolerance.
//!
//! Module map:
//! - [`polyfield`]: polynomials in `x1..x4`, exact sphere integration,
//!   harmonic decomposition, the Laplacian pseudoinverse, harmonic bases.
//! - [`killing`]: the two Killing frames as differential operators, the
//!   orthogonal matrix `O` of quadratic harmonics, frame conversion.
//! - [`dirac`]: degree-block assembly of the Dirac operator, float spectra,
//!   exact characteristic polynomials, operator identities.
//! - [`perturb`]: first- and second-order eigenvalue coefficients for a
//!   polynomial metric perturbation given in frame components.
//! - [`berger`]: closed-form Berger quantities, the degree ≤ 4
//!   characteristic-polynomial formulas, curve expansions, ε-sweeps.
//! - [`verify`]: the exact identity suites behind `verify` in the CLI.

pub mod berger;
pub mod cmat;
pub mod dirac;
pub mod exact;
pub mod killing;
pub mod perturb;
pub mod polyfield;
pub mod series;
pub mod upoly;
pub mod verify;

mod modpoly;

/// Crate-wide error type. `InvalidInput` marks caller mistakes, `Solver`
/// marks numerical eigensolver trouble, `Identity` marks a violated exact
/// identity (a bug or a genuinely failing formula, never rounding).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("degree cap exceeded: product degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: u32, cap: u32 },
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("exact identity violated: {0}")]
    Identity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
