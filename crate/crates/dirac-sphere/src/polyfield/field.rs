//! Scalar fields on the sphere in canonical harmonic form.
//!
//! A [`SphericalField`] is a finite sum `Σ_n f_n` of harmonic homogeneous
//! polynomials `f_n` of degree `n`, the unique such representation of a
//! polynomial restricted to the unit sphere. Products re-decompose through
//! the ambient radius; `-Δ` acts diagonally with eigenvalue `n(n+2)`, which
//! makes its pseudoinverse a per-degree division.

use std::collections::BTreeMap;
use std::str::FromStr;

use num::Zero;

use crate::exact::Rat;
use crate::polyfield::{integrate_poly, radius_squared, Poly4, SphereIntegral};
use crate::{Error, Result};

/// Hard cap on the ambient degree of products; exceeding it is an error
/// rather than a silent truncation.
pub const DEFAULT_DEGREE_CAP: u32 = 12;

/// A polynomial scalar field on the unit sphere, stored as its harmonic
/// components keyed by degree. Invariant: every stored component is a
/// non-zero harmonic homogeneous polynomial of its key's degree.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct SphericalField {
    components: BTreeMap<u32, Poly4>,
}

impl SphericalField {
    pub fn zero() -> Self {
        SphericalField::default()
    }

    pub fn constant(c: Rat) -> Self {
        SphericalField::from_poly(&Poly4::constant(c))
    }

    /// Canonical form of an arbitrary ambient polynomial: its harmonic
    /// decomposition on the sphere.
    pub fn from_poly(p: &Poly4) -> Self {
        harmonic_decompose(p)
    }

    /// Builds directly from parts already known to be harmonic and
    /// homogeneous of the keyed degree (checked in debug builds).
    pub(crate) fn from_harmonic_parts(parts: impl IntoIterator<Item = (u32, Poly4)>) -> Self {
        let mut components = BTreeMap::new();
        for (n, p) in parts {
            if p.is_zero() {
                continue;
            }
            debug_assert_eq!(p.homogeneous_degree(), Some(n));
            debug_assert!(p.laplacian().is_zero());
            components.insert(n, p);
        }
        SphericalField { components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// Harmonic component of degree `n`, if present.
    pub fn component(&self, n: u32) -> Option<&Poly4> {
        self.components.get(&n)
    }

    pub fn components(&self) -> impl Iterator<Item = (u32, &Poly4)> {
        self.components.iter().map(|(n, p)| (*n, p))
    }

    /// Highest degree carrying a non-zero component.
    pub fn max_degree(&self) -> Option<u32> {
        self.components.keys().max().copied()
    }

    /// Mean over the sphere: the degree-0 component.
    pub fn mean(&self) -> Rat {
        self.components
            .get(&0)
            .map(|p| p.coeff(&crate::polyfield::Exponents([0; 4])))
            .unwrap_or_else(Rat::zero)
    }

    /// The sum of the harmonic components as one ambient polynomial. It
    /// agrees with the field on the unit sphere.
    pub fn representative(&self) -> Poly4 {
        let mut acc = Poly4::zero();
        for p in self.components.values() {
            acc = &acc + p;
        }
        acc
    }

    pub fn add(&self, other: &SphericalField) -> SphericalField {
        let mut out = self.clone();
        for (n, p) in &other.components {
            let merged = match out.components.remove(n) {
                Some(q) => &q + p,
                None => p.clone(),
            };
            if !merged.is_zero() {
                out.components.insert(*n, merged);
            }
        }
        out
    }

    pub fn sub(&self, other: &SphericalField) -> SphericalField {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SphericalField {
        SphericalField {
            components: self.components.iter().map(|(n, p)| (*n, -p)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> SphericalField {
        if c.is_zero() {
            return SphericalField::zero();
        }
        SphericalField {
            components: self.components.iter().map(|(n, p)| (*n, p.scale(c))).collect(),
        }
    }

    /// Pointwise product, re-decomposed into harmonics. Fails with
    /// [`Error::DegreeCap`] when the ambient product degree exceeds `cap`.
    pub fn multiply_capped(&self, other: &SphericalField, cap: u32) -> Result<SphericalField> {
        let da = self.max_degree().unwrap_or(0);
        let db = other.max_degree().unwrap_or(0);
        let degree = da + db;
        if degree > cap {
            return Err(Error::DegreeCap { degree, cap });
        }
        let prod = &self.representative() * &other.representative();
        Ok(harmonic_decompose(&prod))
    }

    /// Pointwise product under [`DEFAULT_DEGREE_CAP`].
    pub fn multiply(&self, other: &SphericalField) -> Result<SphericalField> {
        self.multiply_capped(other, DEFAULT_DEGREE_CAP)
    }

    /// `-Δ` on the sphere: multiplies each degree-`n` component by `n(n+2)`.
    pub fn minus_laplacian(&self) -> SphericalField {
        SphericalField {
            components: self
                .components
                .iter()
                .filter(|(n, _)| **n > 0)
                .map(|(n, p)| (*n, p.scale(&crate::exact::int((*n * (*n + 2)) as i64))))
                .collect(),
        }
    }

    /// Inverse of `-Δ` on mean-zero fields: divides each degree-`n`
    /// component by `n(n+2)` and kills the constant part.
    pub fn pseudo_inverse_laplacian(&self) -> SphericalField {
        SphericalField {
            components: self
                .components
                .iter()
                .filter(|(n, _)| **n > 0)
                .map(|(n, p)| {
                    let inv = crate::exact::rat(1, (*n * (*n + 2)) as i64);
                    (*n, p.scale(&inv))
                })
                .collect(),
        }
    }

    /// Exact integral of the product of two fields over the sphere.
    pub fn inner_product(&self, other: &SphericalField) -> SphereIntegral {
        let prod = &self.representative() * &other.representative();
        SphereIntegral::from_coefficient(integrate_poly(&prod))
    }

    /// Exact integral of the field over the sphere.
    pub fn integral(&self) -> SphereIntegral {
        SphereIntegral::from_coefficient(integrate_poly(&self.representative()))
    }
}

impl FromStr for SphericalField {
    type Err = Error;

    /// Parses polynomial text (see [`Poly4`]) and decomposes it.
    fn from_str(s: &str) -> Result<SphericalField> {
        Ok(harmonic_decompose(&s.parse::<Poly4>()?))
    }
}

/// Decomposes a polynomial into its harmonic components on the unit sphere.
///
/// For homogeneous `q` of degree `m` the splitting `q = h_m + r²·q̃` with
/// `h_m` harmonic is computed exactly from the recursion on `Δq`: if
/// `Δq = Σ r^{2i} k_{m-2-2i}` with `k_d` harmonic, then
/// `q̃ = Σ r^{2i} k_{m-2-2i} / (4(i+1)(m-i))`, using
/// `Δ(r^{2a} h_b) = 2a(2a + 2b + 2) r^{2a-2} h_b` in four variables. On the
/// sphere `r = 1`, so the components of `q̃` join the output directly.
pub fn harmonic_decompose(p: &Poly4) -> SphericalField {
    let mut out: BTreeMap<u32, Poly4> = BTreeMap::new();
    for (m, q) in p.homogeneous_parts() {
        decompose_homogeneous(&q, m, &mut out);
    }
    out.retain(|_, p| !p.is_zero());
    SphericalField { components: out }
}

fn decompose_homogeneous(q: &Poly4, m: u32, out: &mut BTreeMap<u32, Poly4>) {
    if q.is_zero() {
        return;
    }
    let g = q.laplacian();
    if g.is_zero() {
        merge(out, m, q.clone());
        return;
    }
    // Harmonic parts of Δq, a homogeneous polynomial of degree m-2.
    let mut sub: BTreeMap<u32, Poly4> = BTreeMap::new();
    decompose_homogeneous(&g, m - 2, &mut sub);
    let r2 = radius_squared();
    let mut r2q = Poly4::zero();
    for (d, k) in &sub {
        let i = (m - 2 - d) / 2;
        let c = crate::exact::rat(1, (4 * (i + 1) * (m - i)) as i64);
        let scaled = k.scale(&c);
        // r^{2i}·k_d / (4(i+1)(m-i)) is a component of q̃; on the sphere it
        // contributes the degree-d harmonic directly.
        let mut lifted = scaled.clone();
        for _ in 0..=i {
            lifted = &lifted * &r2;
        }
        r2q = &r2q + &lifted;
        merge(out, *d, scaled);
    }
    let h = q - &r2q;
    debug_assert!(h.laplacian().is_zero());
    merge(out, m, h);
}

fn merge(out: &mut BTreeMap<u32, Poly4>, n: u32, p: Poly4) {
    if p.is_zero() {
        return;
    }
    match out.remove(&n) {
        Some(q) => {
            let s = &q + &p;
            if !s.is_zero() {
                out.insert(n, s);
            }
        }
        None => {
            out.insert(n, p);
        }
    }
}

/// Free-function form of [`SphericalField::multiply`].
pub fn field_multiply(f: &SphericalField, g: &SphericalField) -> Result<SphericalField> {
    f.multiply(g)
}

/// Free-function form of [`SphericalField::inner_product`].
pub fn inner_product(f: &SphericalField, g: &SphericalField) -> SphereIntegral {
    f.inner_product(g)
}

/// Free-function form of [`SphericalField::pseudo_inverse_laplacian`].
pub fn pseudo_inverse_laplacian(f: &SphericalField) -> SphericalField {
    f.pseudo_inverse_laplacian()
}
