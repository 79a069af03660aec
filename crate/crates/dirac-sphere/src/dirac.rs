//! Degree-block assembly and spectra of the Dirac operator on generalized
//! Berger spheres.
//!
//! The operator preserves the space of spinors whose two components are
//! degree-`n` harmonic polynomials, so its spectrum splits into blocks of
//! dimension `2(n+1)²`. With metric parameters `(a₁,a₂,a₃)` the shifted
//! operator `W̃ = W - νI` acts on a block as
//! `A = -i Σ_j (1/a_j) s^j ⊗ M_j`, where `s^j` are the Pauli matrices and
//! `M_j` the plus-frame Killing matrices on scalar harmonics. `A` is exact
//! and `G`-self-adjoint for the block Gram matrix `G`; floating point
//! enters only in [`block_spectrum`], everything else is rational.

use std::fmt::Write as _;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use num::{One, Signed, Zero};

use crate::cmat::CMat;
use crate::exact::{cre, int, rat, rat_to_f64, CRat, Rat};
use crate::killing::FrameSign;
use crate::polyfield::HarmonicBasis;
use crate::upoly::UPoly;
use crate::{Error, Result};

/// Metric parameters of a generalized Berger sphere; all strictly positive.
/// The round sphere is `(1,1,1)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BergerParams {
    a: [Rat; 3],
}

impl BergerParams {
    pub fn new(a1: Rat, a2: Rat, a3: Rat) -> Result<Self> {
        let a = [a1, a2, a3];
        if a.iter().any(|v| !v.is_positive()) {
            return Err(Error::InvalidInput(format!(
                "Berger parameters must be strictly positive, got ({}, {}, {})",
                a[0], a[1], a[2]
            )));
        }
        Ok(BergerParams { a })
    }

    pub fn from_triple(a: [Rat; 3]) -> Result<Self> {
        let [a1, a2, a3] = a;
        BergerParams::new(a1, a2, a3)
    }

    /// The round sphere `(1,1,1)`.
    pub fn unit() -> Self {
        BergerParams {
            a: [Rat::one(), Rat::one(), Rat::one()],
        }
    }

    /// Parameter `a_j`, 1-based.
    pub fn a(&self, j: usize) -> &Rat {
        assert!((1..=3).contains(&j), "parameter index {j} out of range");
        &self.a[j - 1]
    }

    /// `1/a_j`, 1-based.
    pub fn inv_a(&self, j: usize) -> Rat {
        Rat::one() / self.a(j)
    }

    /// The constant eigenvalue shift `ν = (a₁²+a₂²+a₃²)/(2a₁a₂a₃)`; also
    /// the eigenvalue of `W` on constant spinors.
    pub fn nu(&self) -> Rat {
        let sum_sq: Rat = self.a.iter().map(|v| v * v).sum();
        let prod: Rat = self.a.iter().product();
        sum_sq / (rat(2, 1) * prod)
    }

    /// `a₁a₂a₃` — the Berger volume in units of `2π²`.
    pub fn volume_coefficient(&self) -> Rat {
        self.a.iter().product()
    }

    pub fn is_unit(&self) -> bool {
        self.a.iter().all(One::is_one)
    }
}

impl std::fmt::Display for BergerParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a[0], self.a[1], self.a[2])
    }
}

/// The Dirac operator restricted to degree-`n` harmonic spinors: the exact
/// matrix `A` of `W̃ = W - νI` (spinor basis: component index ⊗ scalar
/// harmonic basis) together with the scalar Gram matrix. The block Gram is
/// `I₂ ⊗ G` and `A` satisfies `Aᴴ(I₂⊗G) = (I₂⊗G)A` exactly.
pub struct DegreeBlock {
    degree: u32,
    params: BergerParams,
    a: CMat,
    gram: Vec<Vec<Rat>>,
}

impl DegreeBlock {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn params(&self) -> &BergerParams {
        &self.params
    }

    /// Block dimension `2(n+1)²`.
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Exact matrix of `W̃` in the spinor basis.
    pub fn matrix(&self) -> &CMat {
        &self.a
    }

    /// Gram matrix of the scalar harmonic basis (one spinor component).
    pub fn scalar_gram(&self) -> &[Vec<Rat>] {
        &self.gram
    }

    /// Full block Gram `I₂ ⊗ G` as an exact complex matrix.
    pub fn gram_full(&self) -> CMat {
        let m = self.gram.len();
        CMat::from_fn(2 * m, 2 * m, |i, j| {
            if i / m == j / m {
                cre(self.gram[i % m][j % m].clone())
            } else {
                CRat::zero()
            }
        })
    }
}

/// One clustered eigenvalue of a spectrum, tagged with the degree block it
/// came from.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumEntry {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub degree: u32,
}

/// Eigenvalue–multiplicity list, ascending. Every multiplicity is even
/// (spectra of `W` and `W̃` are invariant under an antilinear symmetry that
/// pairs eigenspinors).
#[derive(Clone, Debug, Default)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
    certified_radius: Option<f64>,
}

impl Spectrum {
    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    /// Radius within which the spectrum list is certified complete: every
    /// true eigenvalue with `|λ|` strictly below it appears. `None` for
    /// single-block spectra where completeness is not the question.
    pub fn certified_radius(&self) -> Option<f64> {
        self.certified_radius
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// The entry whose eigenvalue is closest to `target`. Returns the
    /// runner-up distance too, so callers can detect ambiguous tracking.
    pub fn nearest(&self, target: f64) -> Option<(&SpectrumEntry, f64, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut second = f64::INFINITY;
        for (i, e) in self.entries.iter().enumerate() {
            let d = (e.eigenvalue - target).abs();
            match best {
                None => best = Some((i, d)),
                Some((_, bd)) if d < bd => {
                    second = bd;
                    best = Some((i, d));
                }
                Some(_) => {
                    if d < second {
                        second = d;
                    }
                }
            }
        }
        best.map(|(i, d)| (&self.entries[i], d, second))
    }

    /// JSON array of `{"eigenvalue", "multiplicity", "degree"}` objects.
    pub fn to_json_entries(&self) -> String {
        let mut s = String::from("[");
        for (k, e) in self.entries.iter().enumerate() {
            if k > 0 {
                s.push_str(", ");
            }
            let _ = write!(
                s,
                "{{\"eigenvalue\": \"{}\", \"multiplicity\": {}, \"degree\": {}}}",
                e.eigenvalue, e.multiplicity, e.degree
            );
        }
        s.push(']');
        s
    }

    /// CSV with header `eigenvalue,multiplicity,degree`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("eigenvalue,multiplicity,degree\n");
        for e in &self.entries {
            let _ = writeln!(s, "{},{},{}", e.eigenvalue, e.multiplicity, e.degree);
        }
        s
    }
}

/// Assembles the exact degree-`n` block of `W̃ = W - νI`.
pub fn assemble_block(params: &BergerParams, n: u32) -> Result<DegreeBlock> {
    let basis = HarmonicBasis::get(n);
    let m = basis.dim();
    let b = [params.inv_a(1), params.inv_a(2), params.inv_a(3)];
    let m1 = basis.operator_matrix(FrameSign::Plus, 1);
    let m2 = basis.operator_matrix(FrameSign::Plus, 2);
    let m3 = basis.operator_matrix(FrameSign::Plus, 3);
    // -i(b₁ s¹⊗M₁ + b₂ s²⊗M₂ + b₃ s³⊗M₃) in 2×2 block form.
    let mut a = CMat::zeros(2 * m, 2 * m);
    for r in 0..m {
        for c in 0..m {
            let v1 = &b[0] * &m1[r][c];
            let v2 = &b[1] * &m2[r][c];
            let v3 = &b[2] * &m3[r][c];
            if !v3.is_zero() {
                a[(r, c)] = CRat::new(Rat::zero(), -v3.clone());
                a[(m + r, m + c)] = CRat::new(Rat::zero(), v3);
            }
            if !v1.is_zero() || !v2.is_zero() {
                a[(r, m + c)] = CRat::new(-v2.clone(), -v1.clone());
                a[(m + r, c)] = CRat::new(v2, -v1);
            }
        }
    }
    Ok(DegreeBlock {
        degree: n,
        params: params.clone(),
        a,
        gram: basis.gram().clone(),
    })
}

/// Eigenvalues of `W̃` on one block: the symmetric-definite pencil
/// `(GA, G)` reduced by the real Cholesky factor `G = LLᵀ` to the complex
/// Hermitian matrix `LᵀAL⁻ᵀ`, then clustered into multiplicities by
/// relative gap. Callers add ν for eigenvalues of `W`.
pub fn block_spectrum(block: &DegreeBlock, cluster_tol: f64) -> Result<Spectrum> {
    if !(cluster_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "cluster tolerance must be positive, got {cluster_tol}"
        )));
    }
    let m = block.gram.len();
    let g = DMatrix::<f64>::from_fn(m, m, |i, j| rat_to_f64(&block.gram[i][j]));
    let chol = g
        .cholesky()
        .ok_or_else(|| Error::Solver("Gram matrix Cholesky factorization failed".into()))?;
    let l = chol.l().map(|v| Complex::new(v, 0.0));
    let dim = block.dim();
    let a = block.a.to_complex_f64();
    // Ã = (I₂⊗L)ᵀ A (I₂⊗L)⁻ᵀ, assembled per m×m sub-block.
    let mut tilde = DMatrix::<Complex<f64>>::zeros(dim, dim);
    for bi in 0..2 {
        for bj in 0..2 {
            let sub = a.view((bi * m, bj * m), (m, m)).into_owned();
            let left = l.transpose() * sub;
            // X·Lᵀ = left  ⇔  L·Xᵀ = leftᵀ.
            let xt = l
                .solve_lower_triangular(&left.transpose())
                .ok_or_else(|| Error::Solver("triangular solve failed".into()))?;
            tilde.view_mut((bi * m, bj * m), (m, m)).copy_from(&xt.transpose());
        }
    }
    // Symmetrize away rounding asymmetry before the Hermitian eigensolver.
    let tilde = (tilde.clone() + tilde.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(tilde);
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    if vals.iter().any(|v| v.is_nan()) {
        return Err(Error::Solver("eigensolver produced NaN".into()));
    }
    vals.sort_by(|x, y| x.partial_cmp(y).expect("no NaN after check"));

    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut start = 0usize;
    for k in 1..=vals.len() {
        let split = if k == vals.len() {
            true
        } else {
            let gap = vals[k] - vals[k - 1];
            let scale = 1.0_f64.max(vals[k - 1].abs()).max(vals[k].abs());
            gap > cluster_tol * scale
        };
        if split {
            let cluster = &vals[start..k];
            let mean = cluster.iter().sum::<f64>() / cluster.len() as f64;
            if cluster.len() % 2 != 0 {
                return Err(Error::Solver(format!(
                    "odd multiplicity {} at eigenvalue {:.12}; adjust cluster tolerance",
                    cluster.len(),
                    mean
                )));
            }
            entries.push(SpectrumEntry {
                eigenvalue: mean,
                multiplicity: cluster.len(),
                degree: block.degree,
            });
            start = k;
        }
    }
    debug_assert_eq!(
        entries.iter().map(|e| e.multiplicity).sum::<usize>(),
        dim
    );
    Ok(Spectrum {
        entries,
        certified_radius: None,
    })
}

/// Exact monic characteristic polynomial of the degree-`n` block in the
/// spectral variable `mu` (eigenvalues of `W̃`). The Gram factor of the
/// pencil cancels exactly: `det(μG - GA)/det(G) = det(μI - A)`. Restricted
/// to `n ≤ 4`; higher degrees should use [`block_spectrum`].
pub fn block_charpoly(params: &BergerParams, n: u32) -> Result<UPoly> {
    if n > 4 {
        return Err(Error::InvalidInput(format!(
            "exact characteristic polynomials are limited to degree ≤ 4, got {n}"
        )));
    }
    let block = assemble_block(params, n)?;
    let chi = crate::modpoly::charpoly_exact(&block.a)?;
    debug_assert!(chi.is_monic());
    debug_assert_eq!(chi.degree(), Some(block.dim()));
    Ok(chi)
}

/// Checks the exact matrix identity `(A + I)² = (n(n+2)+1)·I` on the
/// degree-`n` block at unit parameters (the square of the round-sphere
/// operator shifted by half).
pub fn verify_square_identity(n: u32) -> bool {
    let block = match assemble_block(&BergerParams::unit(), n) {
        Ok(b) => b,
        Err(_) => return false,
    };
    let ap1 = block.a.add_scalar_diag(&CRat::one());
    let square = ap1.mul(&ap1);
    let want = CMat::identity(block.dim()).scale(&cre(int((n * (n + 2) + 1) as i64)));
    square == want
}

/// The resolvent-style matrix `Q = (-Δ)⁻¹(W⁽⁰⁾ + ½I) = (A + 2I)/(n(n+2))`
/// on the degree-`n` block at unit parameters. Verifies exactly that `Q`
/// is a two-sided inverse of `A = W⁽⁰⁾ - (3/2)I` there: for `n ≥ 1` the
/// `3/2`-eigenspace of `W⁽⁰⁾` (the kernel of `A`) does not meet the block,
/// so the spectral pseudoinverse is the plain inverse.
pub fn resolvent_q(n: u32) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "the resolvent identity needs degree ≥ 1 (the inverse Laplacian kills constants)"
                .into(),
        ));
    }
    let block = assemble_block(&BergerParams::unit(), n)?;
    let q = block
        .a
        .add_scalar_diag(&cre(int(2)))
        .scale(&cre(rat(1, (n * (n + 2)) as i64)));
    let id = CMat::identity(block.dim());
    if q.mul(&block.a) != id || block.a.mul(&q) != id {
        return Err(Error::Identity(format!(
            "resolvent identity failed on the degree-{n} block"
        )));
    }
    Ok(q)
}

/// Merged, ν-shifted spectra of all blocks `n ≤ n_max`, sorted ascending,
/// with a certified completeness radius: every eigenvalue of `W` with
/// modulus strictly below the radius is guaranteed to be in the list.
pub fn full_spectrum(params: &BergerParams, n_max: u32, cluster_tol: f64) -> Result<Spectrum> {
    let nu = params.nu();
    let nu_f = rat_to_f64(&nu);
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    for n in 0..=n_max {
        let block = assemble_block(params, n)?;
        let spec = block_spectrum(&block, cluster_tol)?;
        for e in spec.entries {
            entries.push(SpectrumEntry {
                eigenvalue: e.eigenvalue + nu_f,
                ..e
            });
        }
    }
    entries.sort_by(|x, y| {
        x.eigenvalue
            .partial_cmp(&y.eigenvalue)
            .expect("finite eigenvalues")
            .then(x.degree.cmp(&y.degree))
    });
    let radius = completeness_radius(params, n_max);
    Ok(Spectrum {
        entries,
        certified_radius: Some(rat_to_f64(&radius).max(0.0)),
    })
}

/// Smallest possible eigenvalue modulus over all omitted blocks `n > n_max`.
///
/// On a block, `W̃` at parameters `a` differs from the round `W̃` by
/// `-iΣ(1/a_j - 1)s^j⊗M_j`, whose `G`-operator norm is at most `n·s` with
/// `s = Σ|1/a_j - 1|` (each `M_j` is `G`-normal with spectrum in
/// `i·[-n, n]`). The round block spectrum is `{n, -(n+2)}`, so after the ν
/// shift every omitted eigenvalue has modulus at least
/// `min(|n+ν| - ns, |ν-(n+2)| - ns)`.
fn completeness_radius(params: &BergerParams, n_max: u32) -> Rat {
    let nu = params.nu();
    let s: Rat = (1..=3).map(|j| (params.inv_a(j) - Rat::one()).abs()).sum();
    if s >= Rat::one() {
        return Rat::zero();
    }
    let mut best: Option<Rat> = None;
    let mut n = n_max + 1;
    loop {
        let nf = int(n as i64);
        let width = &nf * &s;
        let plus = (&nf + &nu).abs() - &width;
        let minus = (&nu - (&nf + int(2))).abs() - &width;
        let local = plus.min(minus).max(Rat::zero());
        best = Some(match best {
            None => local,
            Some(b) => b.min(local),
        });
        // Both branch distances exceed n(1-s) - ν - 2, which increases
        // without bound; stop once it clears the current minimum.
        let floor = &nf * (Rat::one() - &s) - &nu - int(2);
        if floor > *best.as_ref().expect("just set") {
            break;
        }
        n += 1;
    }
    best.unwrap_or_else(Rat::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::format_rat;

    fn params(a1: (i64, i64), a2: (i64, i64), a3: (i64, i64)) -> BergerParams {
        BergerParams::new(rat(a1.0, a1.1), rat(a2.0, a2.1), rat(a3.0, a3.1)).unwrap()
    }

    #[test]
    fn rejects_non_positive_params() {
        assert!(BergerParams::new(int(1), int(0), int(1)).is_err());
        assert!(BergerParams::new(int(1), int(-2), int(1)).is_err());
    }

    #[test]
    fn nu_values() {
        assert_eq!(BergerParams::unit().nu(), rat(3, 2));
        assert_eq!(params((2, 1), (1, 1), (1, 1)).nu(), rat(3, 2));
        assert_eq!(params((1, 1), (1, 1), (2, 1)).nu(), rat(3, 2));
    }

    #[test]
    fn degree_zero_block_is_zero() {
        let b = assemble_block(&params((2, 3), (5, 7), (1, 4)), 0).unwrap();
        assert_eq!(b.dim(), 2);
        assert!(b.matrix().is_zero());
    }

    #[test]
    fn blocks_are_gram_self_adjoint() {
        for (p, n) in [
            (BergerParams::unit(), 2u32),
            (params((1, 2), (2, 1), (5, 3)), 1),
            (params((3, 2), (4, 5), (7, 4)), 3),
        ] {
            let b = assemble_block(&p, n).unwrap();
            let g = b.gram_full();
            assert_eq!(b.matrix().adjoint().mul(&g), g.mul(b.matrix()));
        }
    }

    #[test]
    fn unit_degree_one_spectrum() {
        let b = assemble_block(&BergerParams::unit(), 1).unwrap();
        assert_eq!(b.dim(), 8);
        let s = block_spectrum(&b, 1e-8).unwrap();
        let e = s.entries();
        assert_eq!(e.len(), 2);
        assert!((e[0].eigenvalue + 3.0).abs() < 1e-12);
        assert_eq!(e[0].multiplicity, 2);
        assert!((e[1].eigenvalue - 1.0).abs() < 1e-12);
        assert_eq!(e[1].multiplicity, 6);
    }

    #[test]
    fn unit_degree_two_spectrum() {
        let b = assemble_block(&BergerParams::unit(), 2).unwrap();
        assert_eq!(b.dim(), 18);
        let s = block_spectrum(&b, 1e-8).unwrap();
        let e = s.entries();
        assert_eq!(e.len(), 2);
        assert!((e[0].eigenvalue + 4.0).abs() < 1e-12);
        assert_eq!(e[0].multiplicity, 6);
        assert!((e[1].eigenvalue - 2.0).abs() < 1e-12);
        assert_eq!(e[1].multiplicity, 12);
    }

    #[test]
    fn unit_degree_one_charpoly() {
        let chi = block_charpoly(&BergerParams::unit(), 1).unwrap();
        let want = &UPoly::from_roots(&[int(-3)]).pow(2) * &UPoly::from_roots(&[int(1)]).pow(6);
        assert_eq!(chi, want);
    }

    #[test]
    fn charpoly_degree_cap() {
        match block_charpoly(&BergerParams::unit(), 5) {
            Err(Error::InvalidInput(_)) => {}
            other => panic!("expected invalid-input error, got {other:?}"),
        }
    }

    #[test]
    fn charpoly_trace_is_zero() {
        let p = params((5, 4), (2, 3), (7, 5));
        for n in 0..=2 {
            let block = assemble_block(&p, n).unwrap();
            assert!(block.matrix().trace().is_zero());
            let chi = block_charpoly(&p, n).unwrap();
            let dim = block.dim();
            assert!(chi.coeff(dim - 1).is_zero(), "root sum must vanish at n={n}");
        }
    }

    #[test]
    fn square_identity_low_degrees() {
        for n in 0..=3 {
            assert!(verify_square_identity(n), "square identity at n={n}");
        }
    }

    #[test]
    fn resolvent_examples() {
        assert!(matches!(resolvent_q(0), Err(Error::InvalidInput(_))));
        for n in 1..=2 {
            let q = resolvent_q(n).unwrap();
            assert_eq!(q.nrows(), 2 * ((n as usize + 1) * (n as usize + 1)));
        }
        // Eigenvalues of Q at n=1: (μ+2)/3 for μ ∈ {-3, 1} → {-1/3, 1}.
        let q = resolvent_q(1).unwrap();
        let chi = crate::modpoly::charpoly_exact(&q).unwrap();
        let want = &UPoly::from_roots(&[rat(-1, 3)]).pow(2) * &UPoly::from_roots(&[int(1)]).pow(6);
        assert_eq!(chi, want);
    }

    #[test]
    fn round_sphere_pattern_through_degree_two() {
        let s = full_spectrum(&BergerParams::unit(), 2, 1e-8).unwrap();
        let got: Vec<(f64, usize)> = s
            .entries()
            .iter()
            .map(|e| (e.eigenvalue, e.multiplicity))
            .collect();
        let want = [(-2.5, 6), (-1.5, 2), (1.5, 2), (2.5, 6), (3.5, 12)];
        assert_eq!(got.len(), want.len());
        for ((v, m), (wv, wm)) in got.iter().zip(want) {
            assert!((v - wv).abs() < 1e-12, "eigenvalue {v} vs {wv}");
            assert_eq!(*m, wm);
        }
        // Completeness: omitted degree-3 branches start at |λ| = 7/2.
        assert!((s.certified_radius().unwrap() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn squashed_sphere_keeps_nu_eigenvalue() {
        let p = params((2, 1), (1, 1), (1, 1));
        let s = full_spectrum(&p, 1, 1e-8).unwrap();
        let (e, d, _) = s.nearest(1.5).unwrap();
        assert!(d < 1e-12, "ν = 3/2 must be present");
        assert!(e.multiplicity >= 2);
    }

    #[test]
    fn spectrum_serialization_shapes() {
        let s = full_spectrum(&BergerParams::unit(), 1, 1e-8).unwrap();
        let json = s.to_json_entries();
        assert!(json.starts_with('[') && json.ends_with(']'));
        assert!(json.contains("\"multiplicity\": 6"));
        let csv = s.to_csv();
        assert_eq!(csv.lines().next().unwrap(), "eigenvalue,multiplicity,degree");
        assert_eq!(csv.lines().count(), 1 + s.entries().len());
    }

    #[test]
    fn cluster_tolerance_validation() {
        let b = assemble_block(&BergerParams::unit(), 1).unwrap();
        assert!(matches!(
            block_spectrum(&b, 0.0),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            block_spectrum(&b, -1.0),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn format_helpers_exist() {
        // format_rat is the JSON "p/q" form used by the CLI layer.
        assert_eq!(format_rat(&rat(10, 4)), "5/2");
    }
}
