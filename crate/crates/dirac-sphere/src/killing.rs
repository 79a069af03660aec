//! The two invariant Killing frames of the 3-sphere as first-order
//! operators on polynomials.
//!
//! Viewing `S³` as the unit quaternions, left and right translations give
//! two orthonormal frames of linear vector fields. The "plus" frame
//! generates right translations (it commutes with left ones) and the
//! "minus" frame the reverse. Both act on polynomials by directional
//! derivative; each preserves degree and harmonicity, satisfies
//! `[L₊ⱼ, L₊ₖ] = -2ε_{jkl} L₊ₗ`, `[L₋ⱼ, L₋ₖ] = +2ε_{jkl} L₋ₗ`, and the two
//! frames commute with each other. The quadratic matrix [`o_matrix`]
//! intertwines them and converts frame components of symmetric tensors.

use std::fmt;
use std::str::FromStr;

use crate::exact::Rat;
use crate::perturb::PerturbationTensor;
use crate::polyfield::{Poly4, SphericalField};
use crate::{Error, Result};

/// Which invariant frame an operator or tensor component refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FrameSign {
    Plus,
    Minus,
}

impl fmt::Display for FrameSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameSign::Plus => "+",
            FrameSign::Minus => "-",
        })
    }
}

impl FromStr for FrameSign {
    type Err = Error;
    fn from_str(s: &str) -> Result<FrameSign> {
        match s {
            "+" | "plus" => Ok(FrameSign::Plus),
            "-" | "minus" => Ok(FrameSign::Minus),
            other => Err(Error::InvalidInput(format!(
                "frame must be \"+\" or \"-\", got {other:?}"
            ))),
        }
    }
}

/// Coefficient tables of the frame vector fields: entry `[a][b]` is the
/// coefficient of `x_{b+1}` in component `a+1` of `K_j`.
const K_PLUS: [[[i8; 4]; 4]; 3] = [
    [[0, 0, 0, -1], [0, 0, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]],
    [[0, 0, 1, 0], [0, 0, 0, -1], [-1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
];

const K_MINUS: [[[i8; 4]; 4]; 3] = [
    [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]],
];

/// Totally antisymmetric symbol `ε_{ijk}` on 1-based indices.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (1, 2, 3) | (2, 3, 1) | (3, 1, 2) => 1,
        (3, 2, 1) | (1, 3, 2) | (2, 1, 3) => -1,
        _ => 0,
    }
}

fn table(sign: FrameSign, j: usize) -> &'static [[i8; 4]; 4] {
    assert!((1..=3).contains(&j), "frame index {j} out of range");
    match sign {
        FrameSign::Plus => &K_PLUS[j - 1],
        FrameSign::Minus => &K_MINUS[j - 1],
    }
}

/// The frame vector `K_j` evaluated at an ambient point.
pub fn k_vector(sign: FrameSign, j: usize, x: &[Rat; 4]) -> [Rat; 4] {
    let t = table(sign, j);
    std::array::from_fn(|a| {
        let mut acc = Rat::from_integer(0.into());
        for b in 0..4 {
            match t[a][b] {
                0 => {}
                1 => acc += &x[b],
                -1 => acc -= &x[b],
                _ => unreachable!(),
            }
        }
        acc
    })
}

/// Directional derivative of a polynomial along the frame field `K_j`.
/// Preserves total degree and harmonicity.
pub fn apply_l_poly(sign: FrameSign, j: usize, p: &Poly4) -> Poly4 {
    let t = table(sign, j);
    let mut out = Poly4::zero();
    for a in 0..4 {
        let d = p.partial(a + 1);
        if d.is_zero() {
            continue;
        }
        for b in 0..4 {
            match t[a][b] {
                0 => {}
                1 => out = &out + &(&d * &Poly4::var(b + 1)),
                -1 => out = &out - &(&d * &Poly4::var(b + 1)),
                _ => unreachable!(),
            }
        }
    }
    out
}

/// The frame operator `L_j` on a spherical field, acting per harmonic
/// component.
pub fn apply_l(sign: FrameSign, j: usize, f: &SphericalField) -> SphericalField {
    SphericalField::from_harmonic_parts(
        f.components()
            .map(|(n, p)| (n, apply_l_poly(sign, j, p))),
    )
}

/// `L_j L_k f - L_k L_j f` within one frame.
pub fn commutator(sign: FrameSign, j: usize, k: usize, f: &SphericalField) -> SphericalField {
    let jk = apply_l(sign, j, &apply_l(sign, k, f));
    let kj = apply_l(sign, k, &apply_l(sign, j, f));
    jk.sub(&kj)
}

/// The 3×3 matrix of quadratic harmonics relating the two frames:
/// `K₋ᵢ = Σⱼ Oᵢⱼ K₊ⱼ` on the sphere. As polynomials `O·Oᵀ = r⁴·I`, so `O`
/// is orthogonal on the unit sphere, and `L₋ᵢ O_{jk} = 2 ε_{ijl} O_{lk}`.
pub struct OMatrix {
    entries: [[SphericalField; 3]; 3],
}

impl OMatrix {
    /// Entry `O_{jk}` with 1-based indices.
    pub fn entry(&self, j: usize, k: usize) -> &SphericalField {
        assert!((1..=3).contains(&j) && (1..=3).contains(&k));
        &self.entries[j - 1][k - 1]
    }

    /// Entry as an ambient polynomial (homogeneous quadratic).
    pub fn entry_poly(&self, j: usize, k: usize) -> Poly4 {
        self.entry(j, k).representative()
    }
}

/// Builds the frame-relating matrix `O`; every entry is a degree-2
/// harmonic.
pub fn o_matrix() -> OMatrix {
    let texts = [
        ["x1^2 - x2^2 - x3^2 + x4^2", "2*x1*x2 - 2*x3*x4", "2*x1*x3 + 2*x2*x4"],
        ["2*x1*x2 + 2*x3*x4", "-x1^2 + x2^2 - x3^2 + x4^2", "2*x2*x3 - 2*x1*x4"],
        ["2*x1*x3 - 2*x2*x4", "2*x1*x4 + 2*x2*x3", "-x1^2 - x2^2 + x3^2 + x4^2"],
    ];
    let entries = texts.map(|row| {
        row.map(|t| {
            t.parse::<SphericalField>()
                .expect("frame matrix entries are fixed text")
        })
    });
    OMatrix { entries }
}

/// Converts the plus-frame components of a symmetric tensor to minus-frame
/// components: `h₋ = O · h₊ · Oᵀ` pointwise on the sphere. Raises each
/// component degree by up to four, so the product degree cap applies.
pub fn convert_h_plus_to_minus(h: &PerturbationTensor) -> Result<PerturbationTensor> {
    if h.frame() != FrameSign::Plus {
        return Err(Error::InvalidInput(
            "tensor is already in minus-frame components".into(),
        ));
    }
    let o = o_matrix();
    let mut out: Vec<Vec<SphericalField>> = vec![vec![SphericalField::zero(); 3]; 3];
    for i in 1..=3 {
        for l in i..=3 {
            let mut acc = SphericalField::zero();
            for j in 1..=3 {
                for k in 1..=3 {
                    let hjk = h.entry(j, k);
                    if hjk.is_zero() {
                        continue;
                    }
                    let t = o.entry(i, j).multiply(hjk)?.multiply(o.entry(l, k))?;
                    acc = acc.add(&t);
                }
            }
            out[i - 1][l - 1] = acc.clone();
            out[l - 1][i - 1] = acc;
        }
    }
    PerturbationTensor::new(FrameSign::Minus, out)
}
