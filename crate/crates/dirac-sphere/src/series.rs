//! Truncated formal power series in one small parameter.
//!
//! Berger parameter curves `a_j(ε)` are handled as exact rational series
//! truncated at a fixed order; composition of the closed-form eigenvalue
//! branches with a curve then needs only ring operations and reciprocals.
//! A tiny expression grammar (`+ - * / ^`, parentheses, the variable `e`,
//! integer and decimal literals) parses CLI curve strings.

use num::{One, Zero};

use crate::exact::{parse_rat, Rat};
use crate::{Error, Result};

/// Series `Σ c_k ε^k` truncated after `ε^order`, coefficients exact.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PowerSeries {
    coeffs: Vec<Rat>, // length order+1
}

impl PowerSeries {
    /// The zero series truncated at `order`.
    pub fn zero(order: usize) -> Self {
        PowerSeries {
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The variable ε.
    pub fn var(order: usize) -> Self {
        let mut s = PowerSeries::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rat::one();
        }
        s
    }

    /// Truncation order (highest retained power).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `ε^k` (zero beyond the truncation order).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &PowerSeries, f: impl Fn(&Rat, &Rat) -> Rat) -> PowerSeries {
        assert_eq!(self.order(), other.order(), "mixed truncation orders");
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        assert_eq!(self.order(), other.order(), "mixed truncation orders");
        let n = self.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires a non-zero constant term.
    pub fn recip(&self) -> Result<PowerSeries> {
        if self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput(
                "series reciprocal needs a non-zero constant term".into(),
            ));
        }
        let n = self.coeffs.len();
        let mut out = vec![Rat::zero(); n];
        let c0inv = Rat::one() / &self.coeffs[0];
        out[0] = c0inv.clone();
        for k in 1..n {
            // c₀·out_k = -Σ_{i=1..k} c_i·out_{k-i}
            let mut acc = Rat::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[k - i];
                }
            }
            out[k] = -acc * &c0inv;
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &PowerSeries) -> Result<PowerSeries> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, k: i64) -> Result<PowerSeries> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let mut acc = PowerSeries::constant(Rat::one(), self.order());
        for _ in 0..k.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    /// Exact evaluation of the truncated polynomial at a rational point.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Parses an expression in the curve grammar into a series truncated at
/// `order`. Grammar: `expr := term (('+'|'-') term)*`,
/// `term := unary (('*'|'/') unary | '(' …)*` (a parenthesis right after a
/// factor is an implicit product), `unary := ['+'|'-'] factor`,
/// `factor := primary ['^' int]`, `primary := '(' expr ')' | number | 'e'`.
pub fn parse_series(text: &str, order: usize) -> Result<PowerSeries> {
    let src: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    if src.is_empty() {
        return Err(Error::InvalidInput("empty curve expression".into()));
    }
    let mut p = Parser {
        src,
        pos: 0,
        order,
        text: text.to_string(),
    };
    let s = p.expr()?;
    if p.pos != p.src.len() {
        return Err(p.fail("trailing characters"));
    }
    Ok(s)
}

struct Parser {
    src: Vec<char>,
    pos: usize,
    order: usize,
    text: String,
}

impl Parser {
    fn fail(&self, what: &str) -> Error {
        Error::InvalidInput(format!(
            "curve expression error at position {} in {:?}: {}",
            self.pos, self.text, what
        ))
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<PowerSeries> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PowerSeries> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                Some('(') => {
                    // Implicit product, e.g. "(1+e)(1-e)".
                    acc = acc.mul(&self.unary()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PowerSeries> {
        match self.peek() {
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<PowerSeries> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let mut sign = 1i64;
            if self.peek() == Some('-') {
                sign = -1;
                self.pos += 1;
            }
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.fail("exponent digits expected after '^'"));
            }
            let digits: String = self.src[start..self.pos].iter().collect();
            let k: i64 = digits
                .parse()
                .map_err(|_| self.fail("exponent out of range"))?;
            return base.powi(sign * k);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<PowerSeries> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let s = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.fail("expected ')'"));
                }
                self.pos += 1;
                Ok(s)
            }
            Some('e') => {
                self.pos += 1;
                Ok(PowerSeries::var(self.order))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|c| c.is_ascii_digit() || c == '.')
                {
                    self.pos += 1;
                }
                let token: String = self.src[start..self.pos].iter().collect();
                let v = parse_rat(&token)?;
                Ok(PowerSeries::constant(v, self.order))
            }
            _ => Err(self.fail("expected '(', number, or 'e'")),
        }
    }
}
