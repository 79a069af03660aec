//! Per-degree bases of harmonic homogeneous polynomials.
//!
//! The degree-`n` basis is the canonical kernel basis of the Laplacian
//! constraint matrix in reduced row echelon form over the rationals: each
//! basis polynomial has coefficient 1 at its own "free" monomial and 0 at
//! every other free monomial, so coordinates in this basis can be read off
//! a polynomial's coefficients without solving anything. Bases are cached
//! per degree; Gram matrices and frame operator matrices are computed once
//! on first use.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::{One, Zero};

use crate::exact::{common_denominator, Rat};
use crate::killing::{apply_l_poly, FrameSign};
use crate::polyfield::{harmonic_dimension, Exponents, Poly4};
use crate::{Error, Result};

/// Basis of the harmonic homogeneous polynomials of one degree, with exact
/// coordinates, Gram matrix and Killing-operator matrices.
pub struct HarmonicBasis {
    n: u32,
    polys: Vec<Poly4>,
    free_monomials: Vec<Exponents>,
    free_index: BTreeMap<Exponents, usize>,
    gram: OnceLock<Vec<Vec<Rat>>>,
    plus_ops: OnceLock<[Vec<Vec<Rat>>; 3]>,
}

/// Returns the degree-`n` harmonic basis polynomials together with their
/// exact Gram matrix of sphere inner products (in units of `2π²`).
pub fn harmonic_basis(n: u32) -> (Vec<Poly4>, Vec<Vec<Rat>>) {
    let b = HarmonicBasis::get(n);
    (b.polys().to_vec(), b.gram().to_vec())
}

impl HarmonicBasis {
    /// Cached basis for degree `n`.
    pub fn get(n: u32) -> Arc<HarmonicBasis> {
        static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<HarmonicBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
        let mut guard = cache.lock().expect("basis cache poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(HarmonicBasis::build(n)))
            .clone()
    }

    fn build(n: u32) -> HarmonicBasis {
        let monomials = monomials_of_degree(n);
        let (polys, free_monomials) = if n < 2 {
            // Every monomial of degree 0 or 1 is harmonic.
            (
                monomials
                    .iter()
                    .map(|e| Poly4::monomial(*e, Rat::one()))
                    .collect::<Vec<_>>(),
                monomials.clone(),
            )
        } else {
            kernel_basis(n, &monomials)
        };
        assert_eq!(polys.len(), harmonic_dimension(n), "harmonic dimension");
        let free_index = free_monomials
            .iter()
            .enumerate()
            .map(|(i, e)| (*e, i))
            .collect();
        HarmonicBasis {
            n,
            polys,
            free_monomials,
            free_index,
            gram: OnceLock::new(),
            plus_ops: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[Poly4] {
        &self.polys
    }

    /// The monomial at which basis polynomial `i` has coefficient 1 while
    /// all other basis polynomials have 0.
    pub fn free_monomials(&self) -> &[Exponents] {
        &self.free_monomials
    }

    /// Exact coordinates of a degree-`n` harmonic polynomial in this basis:
    /// its coefficients at the free monomials. Debug builds verify the
    /// reconstruction `Σ cᵢ bᵢ == p` term by term.
    pub fn coords(&self, p: &Poly4) -> Result<Vec<Rat>> {
        if !p.is_zero() && p.homogeneous_degree() != Some(self.n) {
            return Err(Error::InvalidInput(format!(
                "polynomial is not homogeneous of degree {}",
                self.n
            )));
        }
        let mut c = vec![Rat::zero(); self.dim()];
        for (e, v) in p.terms() {
            if let Some(&i) = self.free_index.get(e) {
                c[i] = v.clone();
            }
        }
        #[cfg(debug_assertions)]
        {
            let mut recon = Poly4::zero();
            for (ci, b) in c.iter().zip(&self.polys) {
                recon = &recon + &b.scale(ci);
            }
            if &recon != p {
                return Err(Error::InvalidInput(
                    "polynomial is outside the harmonic subspace".into(),
                ));
            }
        }
        Ok(c)
    }

    /// Reassembles a polynomial from coordinates.
    pub fn from_coords(&self, c: &[Rat]) -> Poly4 {
        let mut p = Poly4::zero();
        for (ci, b) in c.iter().zip(&self.polys) {
            p = &p + &b.scale(ci);
        }
        p
    }

    /// Exact Gram matrix `G_{ij} = ∫ bᵢ bⱼ dS / (2π²)`, symmetric positive
    /// definite.
    pub fn gram(&self) -> &Vec<Vec<Rat>> {
        self.gram.get_or_init(|| self.compute_gram())
    }

    /// Matrix of the Killing operator `L_j` of the given frame in this
    /// basis (columns are coordinates of `L_j bᵢ`). Plus-frame matrices are
    /// cached because Dirac block assembly reuses them for every parameter
    /// triple.
    pub fn operator_matrix(&self, sign: FrameSign, j: usize) -> Vec<Vec<Rat>> {
        assert!((1..=3).contains(&j), "frame index {j} out of range");
        if sign == FrameSign::Plus {
            return self.plus_ops.get_or_init(|| {
                [
                    self.compute_operator(FrameSign::Plus, 1),
                    self.compute_operator(FrameSign::Plus, 2),
                    self.compute_operator(FrameSign::Plus, 3),
                ]
            })[j - 1]
                .clone();
        }
        self.compute_operator(sign, j)
    }

    fn compute_operator(&self, sign: FrameSign, j: usize) -> Vec<Vec<Rat>> {
        let m = self.dim();
        let mut mat = vec![vec![Rat::zero(); m]; m];
        for (col, b) in self.polys.iter().enumerate() {
            let image = apply_l_poly(sign, j, b);
            let c = self
                .coords(&image)
                .expect("Killing operators preserve harmonic degree spaces");
            for (row, v) in c.into_iter().enumerate() {
                mat[row][col] = v;
            }
        }
        mat
    }

    /// Integer-accelerated Gram computation. Each basis polynomial touches
    /// a single coordinate-parity class (the Laplacian preserves parity and
    /// each kernel vector pivots on one free monomial), so entries between
    /// different classes vanish; within a class all bookkeeping is BigInt.
    fn compute_gram(&self) -> Vec<Vec<Rat>> {
        let m = self.dim();
        let big_l = moment_scale(self.n);
        let mut scaled: Vec<(BigInt, Vec<(Exponents, BigInt)>, u8)> = Vec::with_capacity(m);
        for p in &self.polys {
            let den = common_denominator(p.terms().map(|(_, c)| c));
            let ints: Vec<(Exponents, BigInt)> = p
                .terms()
                .map(|(e, c)| {
                    let v = c * Rat::from_integer(den.clone());
                    debug_assert!(v.is_integer());
                    (*e, v.to_integer())
                })
                .collect();
            let mask = ints[0].0.parity_mask();
            debug_assert!(ints.iter().all(|(e, _)| e.parity_mask() == mask));
            scaled.push((den, ints, mask));
        }
        let mut moments: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        let mut gram = vec![vec![Rat::zero(); m]; m];
        for i in 0..m {
            for j in i..m {
                if scaled[i].2 != scaled[j].2 {
                    continue;
                }
                let mut acc = BigInt::zero();
                for (ea, ca) in &scaled[i].1 {
                    for (eb, cb) in &scaled[j].1 {
                        let e = Exponents([
                            ea.0[0] + eb.0[0],
                            ea.0[1] + eb.0[1],
                            ea.0[2] + eb.0[2],
                            ea.0[3] + eb.0[3],
                        ]);
                        let w = moments.entry(e).or_insert_with(|| {
                            let c = crate::polyfield::monomial_sphere_integral(e);
                            let v = c.coefficient() * Rat::from_integer(big_l.clone());
                            debug_assert!(v.is_integer());
                            v.to_integer()
                        });
                        if !w.is_zero() {
                            acc += ca * cb * &*w;
                        }
                    }
                }
                let entry = Rat::new(acc, &big_l * &scaled[i].0 * &scaled[j].0);
                gram[i][j] = entry.clone();
                gram[j][i] = entry;
            }
        }
        gram
    }
}

/// All degree-`n` monomials in ascending graded-lex order.
fn monomials_of_degree(n: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for e1 in 0..=n {
        for e2 in 0..=n - e1 {
            for e3 in 0..=n - e1 - e2 {
                out.push(Exponents([e1, e2, e3, n - e1 - e2 - e3]));
            }
        }
    }
    out.sort();
    out
}

/// Common integer denominator of all degree-`2n` sphere moments:
/// `(n+1)!·4^n`.
fn moment_scale(n: u32) -> BigInt {
    let mut f = BigInt::one();
    for k in 2..=(n + 1) {
        f *= BigInt::from(k);
    }
    f << (2 * n)
}

/// Kernel basis of the Laplacian constraint matrix for degree `n ≥ 2`.
fn kernel_basis(n: u32, monomials: &[Exponents]) -> (Vec<Poly4>, Vec<Exponents>) {
    let col_of: BTreeMap<Exponents, usize> =
        monomials.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    let targets = monomials_of_degree(n - 2);
    let cols = monomials.len();
    // Row per degree-(n-2) monomial: the coefficient of that monomial in Δp.
    let mut rows: Vec<Vec<Rat>> = Vec::with_capacity(targets.len());
    for d in &targets {
        let mut row = vec![Rat::zero(); cols];
        for i in 0..4 {
            let mut e = d.0;
            e[i] += 2;
            let c = &col_of[&Exponents(e)];
            row[*c] = crate::exact::int(((d.0[i] + 2) * (d.0[i] + 1)) as i64);
        }
        rows.push(row);
    }
    let (rref, pivots) = reduced_row_echelon(rows, cols);
    let pivot_of_col: BTreeMap<usize, usize> =
        pivots.iter().enumerate().map(|(r, c)| (*c, r)).collect();
    let mut polys = Vec::new();
    let mut frees = Vec::new();
    for f in 0..cols {
        if pivot_of_col.contains_key(&f) {
            continue;
        }
        let mut p = Poly4::monomial(monomials[f], Rat::one());
        for (pc, pr) in &pivot_of_col {
            let v = &rref[*pr][f];
            if !v.is_zero() {
                p.add_term(monomials[*pc], -v.clone());
            }
        }
        debug_assert!(p.laplacian().is_zero());
        polys.push(p);
        frees.push(monomials[f]);
    }
    (polys, frees)
}

/// In-place reduced row echelon form over the rationals; returns the matrix
/// and the pivot column of each non-zero row.
fn reduced_row_echelon(mut rows: Vec<Vec<Rat>>, cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &inv;
            }
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..cols {
                    let sub = &rows[r][j] * &f;
                    if !sub.is_zero() {
                        let v = &rows[i][j] - &sub;
                        rows[i][j] = v;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (rows, pivots)
}
