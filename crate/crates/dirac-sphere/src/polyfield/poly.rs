//! Multivariate polynomials in the four ambient coordinates.
//!
//! Terms live in a `BTreeMap` keyed by exponent 4-tuples under graded
//! lexicographic order, so iteration, printing and pivot selection are
//! deterministic. Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::exact::{parse_rat, Rat};
use crate::{Error, Result};

/// Exponent 4-tuple of a monomial `x1^e1·x2^e2·x3^e3·x4^e4`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(pub [u32; 4]);

impl Exponents {
    /// Total degree `e1+e2+e3+e4`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Bit `i` set iff the exponent of `x_{i+1}` is odd. The sphere moment
    /// of a monomial vanishes unless the mask is zero, and multiplication
    /// adds masks mod 2; bases grouped by mask give a sparse Gram matrix.
    pub fn parity_mask(&self) -> u8 {
        let mut m = 0u8;
        for (i, e) in self.0.iter().enumerate() {
            m |= ((e & 1) as u8) << i;
        }
        m
    }

    fn checked_add(&self, other: &Exponents) -> Exponents {
        let mut e = [0u32; 4];
        for i in 0..4 {
            e[i] = self.0[i] + other.0[i];
        }
        Exponents(e)
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `x1..x4` with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly4 {
    terms: BTreeMap<Exponents, Rat>,
}

impl Poly4 {
    pub fn zero() -> Self {
        Poly4::default()
    }

    pub fn one() -> Self {
        Poly4::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly4::monomial(Exponents([0; 4]), c)
    }

    /// The coordinate `x_i` for `i` in `1..=4`.
    pub fn var(i: usize) -> Self {
        assert!((1..=4).contains(&i), "coordinate index {i} out of range");
        let mut e = [0u32; 4];
        e[i - 1] = 1;
        Poly4::monomial(Exponents(e), Rat::one())
    }

    pub fn monomial(e: Exponents, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly4 { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Exponents, Rat)>) -> Self {
        let mut p = Poly4::zero();
        for (e, c) in iter {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponents::degree).max()
    }

    /// Coefficient at a monomial (zero when absent).
    pub fn coeff(&self, e: &Exponents) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly4 {
        if c.is_zero() {
            return Poly4::zero();
        }
        Poly4 {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Partial derivative with respect to `x_i`, `i` in `1..=4`.
    pub fn partial(&self, i: usize) -> Poly4 {
        assert!((1..=4).contains(&i), "coordinate index {i} out of range");
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            let k = e.0[i - 1];
            if k == 0 {
                continue;
            }
            let mut d = e.0;
            d[i - 1] -= 1;
            out.add_term(Exponents(d), c * Rat::from_integer(k.into()));
        }
        out
    }

    /// Ambient Laplacian `Σ ∂²/∂xᵢ²`.
    pub fn laplacian(&self) -> Poly4 {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            for i in 0..4 {
                let k = e.0[i];
                if k < 2 {
                    continue;
                }
                let mut d = e.0;
                d[i] -= 2;
                out.add_term(Exponents(d), c * Rat::from_integer((k * (k - 1)).into()));
            }
        }
        out
    }

    /// Splits into homogeneous parts keyed by total degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, Poly4> {
        let mut parts: BTreeMap<u32, Poly4> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts
                .entry(e.degree())
                .or_insert_with(Poly4::zero)
                .add_term(*e, c.clone());
        }
        parts
    }

    /// `Some(degree)` when every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            match deg {
                None => deg = Some(e.degree()),
                Some(d) if d == e.degree() => {}
                Some(_) => return None,
            }
        }
        deg
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &[Rat; 4]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..4 {
                for _ in 0..e.0[i] {
                    t *= &x[i];
                }
            }
            acc += t;
        }
        acc
    }
}

impl Add for &Poly4 {
    type Output = Poly4;
    fn add(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly4 {
    type Output = Poly4;
    fn sub(self, rhs: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Poly4 {
    type Output = Poly4;
    fn neg(self) -> Poly4 {
        Poly4 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly4 {
    type Output = Poly4;
    fn mul(self, rhs: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.checked_add(eb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly4 {
    /// Writes terms from highest monomial to lowest, e.g.
    /// `3/2*x1^2*x4 - x2*x3`. The zero polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.degree() == 0 {
                factors.push(mag.to_string());
            }
            for i in 0..4 {
                match e.0[i] {
                    0 => {}
                    1 => factors.push(format!("x{}", i + 1)),
                    p => factors.push(format!("x{}^{}", i + 1, p)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for Poly4 {
    type Err = Error;

    /// Parses the same syntax `Display` emits: terms joined by `+`/`-`,
    /// factors joined by `*`, variables `x1..x4` with optional `^k`, and
    /// rational or decimal coefficients. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Poly4> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::InvalidInput("empty polynomial text".into()));
        }
        let bytes = compact.as_bytes();
        let mut out = Poly4::zero();
        let mut i = 0usize;
        while i < bytes.len() {
            let mut sign = Rat::one();
            while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                if bytes[i] == b'-' {
                    sign = -sign;
                }
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &compact[start..i];
            if term.is_empty() {
                return Err(Error::InvalidInput(format!(
                    "dangling sign in polynomial {s:?}"
                )));
            }
            let (e, c) = parse_term(term, s)?;
            out.add_term(e, sign * c);
        }
        Ok(out)
    }
}

fn parse_term(term: &str, whole: &str) -> Result<(Exponents, Rat)> {
    let mut coeff = Rat::one();
    let mut expo = [0u32; 4];
    for factor in term.split('*') {
        if factor.is_empty() {
            return Err(Error::InvalidInput(format!(
                "empty factor in polynomial {whole:?}"
            )));
        }
        if let Some(rest) = factor.strip_prefix('x') {
            let (var, pow) = match rest.split_once('^') {
                Some((v, p)) => (v, p),
                None => (rest, "1"),
            };
            let vi: usize = var
                .parse()
                .ok()
                .filter(|v| (1..=4).contains(v))
                .ok_or_else(|| {
                    Error::InvalidInput(format!("unknown variable x{var} in {whole:?}"))
                })?;
            let p: u32 = pow.parse().map_err(|_| {
                Error::InvalidInput(format!("bad exponent {pow:?} in {whole:?}"))
            })?;
            expo[vi - 1] += p;
        } else {
            coeff *= parse_rat(factor)?;
        }
    }
    Ok((Exponents(expo), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn p(s: &str) -> Poly4 {
        s.parse().unwrap()
    }

    #[test]
    fn graded_lex_orders_by_degree_first() {
        let lo = Exponents([0, 0, 0, 2]);
        let hi = Exponents([1, 1, 1, 0]);
        assert!(lo < hi);
        let a = Exponents([1, 0, 1, 0]);
        let b = Exponents([0, 2, 0, 0]);
        assert!(b < a);
    }

    #[test]
    fn parse_display_roundtrip() {
        for s in [
            "3/2*x1^2*x4 - x2*x3",
            "x1^4 + 2*x1*x2*x3*x4 - 1/3",
            "-x4",
            "0",
            "7",
        ] {
            let q = p(s);
            assert_eq!(p(&q.to_string()), q, "roundtrip failed for {s}");
        }
    }

    #[test]
    fn parser_accepts_decimals_and_whitespace() {
        assert_eq!(p(" 0.5 * x1 "), p("1/2*x1"));
        assert_eq!(p("x1 - - x1"), p("2*x1"));
        assert_eq!(p("x2^0"), Poly4::one());
    }

    #[test]
    fn parser_rejects_garbage() {
        for s in ["", "x5", "x1^", "1/2/", "y1", "x1**2", "3 x1", "x1^-2"] {
            assert!(s.parse::<Poly4>().is_err(), "should reject {s:?}");
        }
    }

    #[test]
    fn laplacian_of_quadratic_harmonics_vanishes() {
        assert!(p("x1*x2").laplacian().is_zero());
        assert!(p("x1^2 - x2^2").laplacian().is_zero());
        assert_eq!(p("x1^2 + x2^2 + x3^2 + x4^2").laplacian(), p("8"));
    }

    #[test]
    fn product_and_partials() {
        let q = &p("x1 + x2") * &p("x1 - x2");
        assert_eq!(q, p("x1^2 - x2^2"));
        assert_eq!(q.partial(1), p("2*x1"));
        assert_eq!(q.partial(3), Poly4::zero());
    }

    #[test]
    fn evaluation_is_exact() {
        let q = p("3/2*x1^2*x4 - x2*x3");
        let x = [rat(1, 2), rat(1, 3), int(1), int(-2)];
        assert_eq!(q.eval(&x), rat(-3, 4) - rat(1, 3));
    }

    #[test]
    fn homogeneous_structure() {
        let q = p("x1^2 + x3 - 4");
        let parts = q.homogeneous_parts();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[&2], p("x1^2"));
        assert!(q.homogeneous_degree().is_none());
        assert_eq!(p("x1*x4 + x2^2").homogeneous_degree(), Some(2));
    }
}
