//! Exact characteristic polynomials of Gaussian-rational matrices.
//!
//! Denominators are cleared, the integer matrix is reduced modulo many
//! 62-bit primes `p ≡ 1 (mod 4)` (so the imaginary unit has a residue),
//! and the characteristic polynomial is computed per prime by Hessenberg
//! reduction plus the leading-minor recurrence. Coefficients are then
//! recovered by the Chinese remainder theorem with a Hadamard-style bound
//! picking the prime count. A fraction-free Bareiss determinant over the
//! Gaussian integers independently checks the result at `mu = 1`.

use num::bigint::{BigInt, Sign};
use num::{Integer, One, Zero};

use crate::cmat::CMat;
use crate::exact::{common_denominator, Rat};
use crate::upoly::UPoly;
use crate::{Error, Result};

/// Exact characteristic polynomial `det(mu·I - A)` of a square matrix with
/// Gaussian-rational entries and real spectrum. Fails with
/// [`Error::Identity`] if the reconstructed coefficients do not match the
/// independent determinant check (which would signal a dishonest modular
/// reconstruction, never rounding).
pub fn charpoly_exact(a: &CMat) -> Result<UPoly> {
    assert!(a.is_square(), "characteristic polynomial needs a square matrix");
    let n = a.nrows();
    if n == 0 {
        return Ok(UPoly::one());
    }
    // Clear denominators: Z = d·A is a Gaussian-integer matrix.
    let mut dens: Vec<Rat> = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            dens.push(a[(i, j)].re.clone());
            dens.push(a[(i, j)].im.clone());
        }
    }
    let d = common_denominator(dens.iter());
    let df = Rat::from_integer(d.clone());
    let z: Vec<(BigInt, BigInt)> = (0..n * n)
        .map(|k| {
            let e = &a[(k / n, k % n)];
            let re = &e.re * &df;
            let im = &e.im * &df;
            debug_assert!(re.is_integer() && im.is_integer());
            (re.to_integer(), im.to_integer())
        })
        .collect();

    let zc = charpoly_gaussian_integer(&z, n)?;

    // Eigenvalues of Z are d·(eigenvalues of A), so the coefficient of
    // mu^j in charpoly(A) is the Z coefficient divided by d^(n-j).
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut dpow = BigInt::one();
    for j in (0..=n).rev() {
        coeffs.push((j, Rat::new(zc[j].clone(), dpow.clone())));
        if j > 0 {
            dpow *= &d;
        }
    }
    coeffs.sort_by_key(|(j, _)| *j);
    Ok(UPoly::from_coeffs(coeffs.into_iter().map(|(_, c)| c).collect()))
}

/// Characteristic polynomial of a Gaussian-integer matrix with real
/// (integer) coefficients, ascending order, via CRT over primes
/// `p ≡ 1 (mod 4)`.
fn charpoly_gaussian_integer(z: &[(BigInt, BigInt)], n: usize) -> Result<Vec<BigInt>> {
    // |c_k| ≤ C(n,k)·(max row 2-norm)^k ≤ 2^n·max(1,norm)^n.
    let mut norm_bits = 0u64;
    for i in 0..n {
        let mut s = BigInt::zero();
        for j in 0..n {
            let (re, im) = &z[i * n + j];
            s += re * re + im * im;
        }
        norm_bits += (s.bits() + 1) / 2 + 1;
    }
    let need_bits = n as u64 + norm_bits + 8;

    let mut residues: Vec<Vec<u64>> = Vec::new();
    let mut primes: Vec<u64> = Vec::new();
    let mut have_bits = 0u64;
    let mut candidate: u64 = (1u64 << 62) + 1; // ≡ 1 (mod 4)
    while have_bits < need_bits {
        while !is_prime_u64(candidate) {
            candidate += 4;
        }
        let p = candidate;
        candidate += 4;
        let r = sqrt_minus_one(p);
        let zp: Vec<u64> = z
            .iter()
            .map(|(re, im)| {
                let rp = mod_big(re, p);
                let ip = mod_big(im, p);
                addm(rp, mulm(r, ip, p), p)
            })
            .collect();
        residues.push(hessenberg_charpoly(zp, n, p));
        primes.push(p);
        have_bits += 62;
    }

    // Incremental CRT with symmetric lift at the end.
    let mut modulus = BigInt::one();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    for (res, &p) in residues.iter().zip(&primes) {
        let pb = BigInt::from(p);
        let m_mod_p = mod_big(&modulus, p);
        let m_inv = invm(m_mod_p, p);
        for (c, &r) in coeffs.iter_mut().zip(res) {
            let c_mod_p = mod_big(c, p);
            let t = mulm(subm(r, c_mod_p, p), m_inv, p);
            *c += &modulus * BigInt::from(t);
        }
        modulus *= pb;
    }
    let half = &modulus >> 1;
    for c in coeffs.iter_mut() {
        if *c > half {
            *c -= &modulus;
        }
    }

    // Independent check: a fraction-free determinant of I - Z over the
    // Gaussian integers must equal the coefficient sum (value at mu = 1).
    let probe: Vec<Vec<(BigInt, BigInt)>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (re, im) = &z[i * n + j];
                    let d = if i == j { BigInt::one() } else { BigInt::zero() };
                    (d - re, -im)
                })
                .collect()
        })
        .collect();
    let (det_re, det_im) = bareiss_det_gaussian(probe);
    let at_one: BigInt = coeffs.iter().sum();
    if det_im != BigInt::zero() || det_re != at_one {
        return Err(Error::Identity(
            "characteristic polynomial failed its determinant cross-check".into(),
        ));
    }
    Ok(coeffs)
}

// ---- arithmetic mod a 62-bit prime ----

fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b; // both < p < 2^62, no overflow
    if s >= p {
        s - p
    } else {
        s
    }
}

fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn mod_big(x: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut r = x.mod_floor(&pb);
    if r.sign() == Sign::Minus {
        r += &pb;
    }
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Deterministic Miller-Rabin for `u64`.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A square root of `-1` modulo a prime `p ≡ 1 (mod 4)`: `g^((p-1)/4)` for
/// the smallest quadratic non-residue `g`.
fn sqrt_minus_one(p: u64) -> u64 {
    debug_assert_eq!(p % 4, 1);
    let mut g = 2u64;
    while powm(g, (p - 1) / 2, p) != p - 1 {
        g += 1;
    }
    let r = powm(g, (p - 1) / 4, p);
    debug_assert_eq!(mulm(r, r, p), p - 1);
    r
}

/// Characteristic polynomial (ascending, monic) of an `n×n` matrix over
/// `F_p`: similarity reduction to upper Hessenberg form, then the
/// leading-principal-minor recurrence.
fn hessenberg_charpoly(mut a: Vec<u64>, n: usize, p: u64) -> Vec<u64> {
    let idx = |i: usize, j: usize| i * n + j;
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = ((k + 1)..n).find(|&i| a[idx(i, k)] != 0) else {
            continue;
        };
        if piv != k + 1 {
            for j in 0..n {
                a.swap(idx(k + 1, j), idx(piv, j));
            }
            for i in 0..n {
                a.swap(idx(i, k + 1), idx(i, piv));
            }
        }
        let inv = invm(a[idx(k + 1, k)], p);
        for i in (k + 2)..n {
            let f = mulm(a[idx(i, k)], inv, p);
            if f == 0 {
                continue;
            }
            // Row op R_i -= f·R_{k+1}, compensated by column op
            // C_{k+1} += f·C_i to keep a similarity transform.
            for j in 0..n {
                let t = mulm(f, a[idx(k + 1, j)], p);
                a[idx(i, j)] = subm(a[idx(i, j)], t, p);
            }
            for r in 0..n {
                let t = mulm(f, a[idx(r, i)], p);
                a[idx(r, k + 1)] = addm(a[idx(r, k + 1)], t, p);
            }
        }
    }

    // p_0 = 1; p_i = (mu - h_{ii})·p_{i-1} - Σ_k h_{k,i}·(Π_j h_{j+1,j})·p_{k-1}.
    let mut polys: Vec<Vec<u64>> = vec![vec![1u64]];
    for i in 1..=n {
        let hii = a[idx(i - 1, i - 1)];
        let prev = &polys[i - 1];
        let mut cur = vec![0u64; i + 1];
        for (d, &c) in prev.iter().enumerate() {
            cur[d + 1] = addm(cur[d + 1], c, p);
            cur[d] = subm(cur[d], mulm(hii, c, p), p);
        }
        let mut subprod = 1u64;
        for k in (1..i).rev() {
            subprod = mulm(subprod, a[idx(k, k - 1)], p);
            if subprod == 0 {
                break;
            }
            let hki = a[idx(k - 1, i - 1)];
            if hki == 0 {
                continue;
            }
            let f = mulm(hki, subprod, p);
            for (d, &c) in polys[k - 1].iter().enumerate() {
                cur[d] = subm(cur[d], mulm(f, c, p), p);
            }
        }
        polys.push(cur);
    }
    polys.pop().expect("polynomial for the full matrix")
}

/// Fraction-free determinant of a Gaussian-integer matrix (entries as
/// `(re, im)` pairs) by single-step Bareiss elimination with row pivoting.
pub fn bareiss_det_gaussian(mut m: Vec<Vec<(BigInt, BigInt)>>) -> (BigInt, BigInt) {
    let n = m.len();
    if n == 0 {
        return (BigInt::one(), BigInt::zero());
    }
    let zero = (BigInt::zero(), BigInt::zero());
    let mut sign = false;
    let mut prev = (BigInt::one(), BigInt::zero());
    for k in 0..n - 1 {
        if m[k][k] == zero {
            let Some(piv) = ((k + 1)..n).find(|&i| m[i][k] != zero) else {
                return (BigInt::zero(), BigInt::zero());
            };
            m.swap(k, piv);
            sign = !sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let t1 = gmul(&m[i][j], &m[k][k]);
                let t2 = gmul(&m[i][k], &m[k][j]);
                let num = (t1.0 - t2.0, t1.1 - t2.1);
                m[i][j] = gdiv_exact(&num, &prev);
            }
            m[i][k] = zero.clone();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        (-det.0, -det.1)
    } else {
        det
    }
}

fn gmul(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    (&a.0 * &b.0 - &a.1 * &b.1, &a.0 * &b.1 + &a.1 * &b.0)
}

/// Exact Gaussian-integer division `a/b` (the quotient is known integral in
/// Bareiss elimination).
fn gdiv_exact(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    let nb = &b.0 * &b.0 + &b.1 * &b.1;
    let re = &a.0 * &b.0 + &a.1 * &b.1;
    let im = &a.1 * &b.0 - &a.0 * &b.1;
    let (qr, rr) = re.div_rem(&nb);
    let (qi, ri) = im.div_rem(&nb);
    debug_assert!(rr.is_zero() && ri.is_zero(), "non-exact division in Bareiss step");
    (qr, qi)
}
