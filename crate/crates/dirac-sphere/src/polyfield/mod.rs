//! Polynomial scalar fields on the 3-sphere with exact arithmetic.
//!
//! A polynomial in the ambient coordinates `x1..x4`, restricted to the unit
//! sphere, is determined by a finite list of harmonic homogeneous
//! polynomials (one per degree). This module provides the polynomial
//! algebra, exact monomial moments over the sphere, the harmonic
//! decomposition that produces the canonical representation, the inverse of
//! `-Δ` on mean-zero fields, and per-degree harmonic bases with their exact
//! Gram matrices.

mod basis;
mod field;
mod moments;
mod poly;

pub use basis::{harmonic_basis, HarmonicBasis};
pub use field::{
    field_multiply, harmonic_decompose, inner_product, pseudo_inverse_laplacian, SphericalField,
    DEFAULT_DEGREE_CAP,
};
pub use moments::{monomial_sphere_integral, SphereIntegral};
pub use poly::{Exponents, Poly4};

use crate::exact::Rat;

/// Ambient Laplacian `Σ ∂²/∂xᵢ²` of a polynomial.
pub fn laplacian4(p: &Poly4) -> Poly4 {
    p.laplacian()
}

/// `x1² + x2² + x3² + x4²` — the squared ambient radius.
pub fn radius_squared() -> Poly4 {
    let mut p = Poly4::zero();
    for i in 1..=4 {
        p = &p + &(&Poly4::var(i) * &Poly4::var(i));
    }
    p
}

/// Dimension of the harmonic homogeneous polynomials of degree `n` in four
/// variables: `(n+1)²`.
pub fn harmonic_dimension(n: u32) -> usize {
    ((n + 1) * (n + 1)) as usize
}

/// Exact integral of a polynomial over the unit sphere, as a multiple of
/// `2π²`.
pub fn integrate_poly(p: &Poly4) -> Rat {
    p.terms()
        .map(|(e, c)| c * monomial_sphere_integral(*e).coefficient())
        .sum()
}
