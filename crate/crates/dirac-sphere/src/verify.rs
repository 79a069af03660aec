//! Runtime verification suites.
//!
//! Two suites back the `verify` command. The identity suite exercises the
//! exact operator identities the whole construction rests on: commutation
//! relations of the invariant derivations, self-adjointness of the block
//! matrices in the harmonic inner product, the square and resolvent
//! identities, frame-conversion rules, volume determinants, and the
//! perturbation-engine invariants. The characteristic-polynomial suite
//! compares the closed-form tables for degrees ≤ 4 against the exact block
//! computation and reports, rather than hides, the documented degree-3
//! disagreement of the printed reading.
//!
//! Randomized parameters are drawn from a seeded generator so every report
//! is reproducible from its seed.

use std::fmt;

use num::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::berger::{
    charpoly_formula, closed_low_eigs, curve_expansion, metric_determinant, BergerCurve,
    Convention,
};
use crate::dirac::{
    assemble_block, block_charpoly, resolvent_q, verify_square_identity, BergerParams,
};
use crate::exact::{int, rat, Rat};
use crate::killing::{
    apply_l, apply_l_poly, convert_h_plus_to_minus, levi_civita, o_matrix, FrameSign,
};
use crate::perturb::{berger_perturbation, lambda1, volume_increment};
use crate::polyfield::{
    harmonic_dimension, inner_product, radius_squared, Exponents, HarmonicBasis, Poly4,
    SphericalField,
};
use crate::series::PowerSeries;
use crate::upoly::UPoly;
use crate::{Error, Result};

/// Outcome of one named check.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    /// The identity holds (or the formula agrees) as expected.
    Pass,
    /// An expectation was violated.
    Fail,
    /// A documented discrepancy was observed, exactly as documented.
    DisagreementReported,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::Pass => write!(f, "pass"),
            CheckStatus::Fail => write!(f, "fail"),
            CheckStatus::DisagreementReported => write!(f, "disagreement-reported"),
        }
    }
}

/// One named verification with its status and a short human-readable note.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
}

impl CheckOutcome {
    fn from_bool(name: &str, ok: bool, detail: &str) -> Self {
        CheckOutcome {
            name: name.to_string(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            detail: detail.to_string(),
        }
    }
}

/// A full suite run: which suite, the seed the random draws used, and every
/// check outcome.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    /// `"fail"` if any check failed; otherwise `"disagreement-reported"` if
    /// any documented discrepancy fired; otherwise `"pass"`.
    pub fn verdict(&self) -> &'static str {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            "fail"
        } else if self
            .checks
            .iter()
            .any(|c| c.status == CheckStatus::DisagreementReported)
        {
            "disagreement-reported"
        } else {
            "pass"
        }
    }

    /// First failing check, if any — named so callers can surface it.
    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "checks": self.checks.iter().map(|c| json!({
                "name": c.name,
                "status": c.status.to_string(),
                "detail": c.detail,
            })).collect::<Vec<_>>(),
            "verdict": self.verdict(),
        })
    }

    /// CSV rendering: one `suite,check,status` row per check.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,check,status\n");
        for c in &self.checks {
            out.push_str(&format!("{},{},{}\n", self.suite, c.name, c.status));
        }
        out
    }
}

/// A random rational in [1/2, 2] with a small denominator.
fn random_param(rng: &mut ChaCha8Rng) -> Rat {
    let den = rng.gen_range(2..=8i64);
    let num = rng.gen_range((den + 1) / 2..=2 * den);
    rat(num, den)
}

fn random_params(rng: &mut ChaCha8Rng) -> BergerParams {
    BergerParams::new(random_param(rng), random_param(rng), random_param(rng))
        .expect("positive by construction")
}

/// A random rational in [−2, 2] \ {0} with a small denominator.
fn random_coeff(rng: &mut ChaCha8Rng) -> Rat {
    let den = rng.gen_range(1..=6i64);
    let mut num = 0;
    while num == 0 {
        num = rng.gen_range(-2 * den..=2 * den);
    }
    rat(num, den)
}

/// A random polynomial with a handful of monomials up to the given degree.
fn random_poly(rng: &mut ChaCha8Rng, max_degree: u32) -> Poly4 {
    let mut p = Poly4::zero();
    for _ in 0..6 {
        let mut e = [0u32; 4];
        let d = rng.gen_range(0..=max_degree);
        for _ in 0..d {
            e[rng.gen_range(0..4usize)] += 1;
        }
        p = &p + &Poly4::monomial(Exponents(e), random_coeff(rng));
    }
    p
}

/// Exact positive-definiteness of a symmetric rational matrix by pivoted
/// elimination (all leading pivots positive).
fn positive_definite(g: &[Vec<Rat>]) -> bool {
    let n = g.len();
    let mut m: Vec<Vec<Rat>> = g.to_vec();
    for k in 0..n {
        if !m[k][k].is_positive() {
            return false;
        }
        for i in (k + 1)..n {
            let f = &m[i][k] / &m[k][k];
            for j in k..n {
                let delta = &f * &m[k][j];
                m[i][j] -= delta;
            }
        }
    }
    true
}

/// Runs the exact operator-identity suite. Randomized inputs are drawn from
/// the given seed; everything asserted is an exact identity, so a failure
/// is a genuine defect, never roundoff.
pub fn identities_suite(seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // Commutation relations [L_j, L_k] = ∓2 ε_{jkl} L_l on harmonic bases
    // through degree 5, both frames.
    {
        let mut ok = true;
        for sign in [FrameSign::Plus, FrameSign::Minus] {
            let orientation = match sign {
                FrameSign::Plus => int(-2),
                FrameSign::Minus => int(2),
            };
            for n in 1..=5u32 {
                let basis = HarmonicBasis::get(n);
                for p in basis.polys() {
                    for (j, k, l) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)] {
                        let lhs = &apply_l_poly(sign, j, &apply_l_poly(sign, k, p))
                            - &apply_l_poly(sign, k, &apply_l_poly(sign, j, p));
                        let rhs = apply_l_poly(sign, l, p).scale(&orientation);
                        if lhs != rhs {
                            ok = false;
                        }
                    }
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "commutator-relations",
            ok,
            "[L_j, L_k] = -/+ 2 eps_{jkl} L_l on harmonic bases through degree 5, both frames",
        ));
    }

    // Frames commute with each other.
    {
        let mut ok = true;
        for _ in 0..4 {
            let p = random_poly(&mut rng, 4);
            for j in 1..=3 {
                for k in 1..=3 {
                    let pm = apply_l_poly(FrameSign::Plus, j, &apply_l_poly(FrameSign::Minus, k, &p));
                    let mp = apply_l_poly(FrameSign::Minus, k, &apply_l_poly(FrameSign::Plus, j, &p));
                    if pm != mp {
                        ok = false;
                    }
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "frame-commutation",
            ok,
            "every L+ derivation commutes with every L- derivation on random polynomials",
        ));
    }

    // Square identity on blocks through degree 4.
    {
        let ok = (0..=4).all(verify_square_identity);
        checks.push(CheckOutcome::from_bool(
            "square-identity",
            ok,
            "(A + I)^2 = (n(n+2) + 1) I on round blocks for n = 0..4",
        ));
    }

    // Resolvent identity on degrees 1..3.
    {
        let mut ok = true;
        for n in 1..=3 {
            if resolvent_q(n).is_err() {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "resolvent-identity",
            ok,
            "(A + 2I)/(n(n+2)) inverts the round block exactly for n = 1..3",
        ));
    }

    // Rotation rule for the conversion matrix entries.
    {
        let o = o_matrix();
        let mut ok = true;
        for i in 1..=3 {
            for j in 1..=3 {
                for k in 1..=3 {
                    let lhs = apply_l(FrameSign::Minus, i, o.entry(j, k));
                    let mut rhs = SphericalField::zero();
                    for l in 1..=3 {
                        let e = levi_civita(i, j, l);
                        if e != 0 {
                            rhs = rhs.add(&o.entry(l, k).scale(&int(2 * e)));
                        }
                    }
                    if !lhs.sub(&rhs).is_zero() {
                        ok = false;
                    }
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "frame-rotation-rule",
            ok,
            "L-_i O_{jk} = 2 eps_{ijl} O_{lk} for all entries of the conversion matrix",
        ));
    }

    // Orthogonality of the conversion matrix as a polynomial identity.
    {
        let o = o_matrix();
        let r2 = radius_squared();
        let r4 = &r2 * &r2;
        let mut ok = true;
        for j in 1..=3 {
            for l in 1..=3 {
                let mut acc = Poly4::zero();
                for k in 1..=3 {
                    acc = &acc + &(&o.entry_poly(j, k) * &o.entry_poly(l, k));
                }
                let expected = if j == l { r4.clone() } else { Poly4::zero() };
                if acc != expected {
                    ok = false;
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "frame-orthogonality",
            ok,
            "O O^T = r^4 I as an ambient polynomial identity",
        ));
    }

    // Anti-self-adjointness and mean-zero property of the derivations.
    {
        let mut ok = true;
        for _ in 0..4 {
            let f = SphericalField::from_poly(&random_poly(&mut rng, 4));
            let g = SphericalField::from_poly(&random_poly(&mut rng, 4));
            for sign in [FrameSign::Plus, FrameSign::Minus] {
                for j in 1..=3 {
                    let lf = apply_l(sign, j, &f);
                    let lg = apply_l(sign, j, &g);
                    if !lf.mean().is_zero() {
                        ok = false;
                    }
                    let lhs = inner_product(&lf, &g);
                    let rhs = inner_product(&f, &lg);
                    if (lhs.coefficient() + rhs.coefficient()) != Rat::zero() {
                        ok = false;
                    }
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "derivation-skew-symmetry",
            ok,
            "<L f, g> = -<f, L g> and mean(L f) = 0 on random fields, both frames",
        ));
    }

    // Pseudo-inverse of the Laplacian: roundtrip and commutation with L.
    {
        let mut ok = true;
        for _ in 0..4 {
            let f = SphericalField::from_poly(&random_poly(&mut rng, 4));
            let mean = SphericalField::constant(f.mean());
            let roundtrip = f.minus_laplacian().pseudo_inverse_laplacian();
            if !roundtrip.sub(&f.sub(&mean)).is_zero() {
                ok = false;
            }
            for j in 1..=3 {
                let a = apply_l(FrameSign::Minus, j, &f.pseudo_inverse_laplacian());
                let b = apply_l(FrameSign::Minus, j, &f).pseudo_inverse_laplacian();
                if !a.sub(&b).is_zero() {
                    ok = false;
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "laplacian-pseudoinverse",
            ok,
            "(-Delta)^+ (-Delta) f = f - mean(f) and (-Delta)^+ commutes with the derivations",
        ));
    }

    // Self-adjointness of the assembled blocks in the harmonic inner product.
    {
        let mut ok = true;
        for _ in 0..3 {
            let params = random_params(&mut rng);
            for n in 0..=3 {
                let block = assemble_block(&params, n)?;
                let g = block.gram_full();
                let lhs = block.matrix().adjoint().mul(&g);
                let rhs = g.mul(block.matrix());
                if !lhs.sub(&rhs).is_zero() {
                    ok = false;
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "block-self-adjointness",
            ok,
            "A^H G = G A exactly on blocks through degree 3 at random parameters",
        ));
    }

    // The degree-0 block is exactly zero, so its spectrum is exactly nu.
    {
        let mut ok = true;
        for _ in 0..20 {
            let params = random_params(&mut rng);
            let block = assemble_block(&params, 0)?;
            if !block.matrix().is_zero() {
                ok = false;
            }
            let chi = block_charpoly(&params, 0)?;
            if chi != UPoly::from_coeffs(vec![Rat::zero(), Rat::zero(), Rat::one()]) {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "nu-presence",
            ok,
            "the degree-0 block vanishes for 20 random parameter triples, so nu is always an eigenvalue of multiplicity 2",
        ));
    }

    // Degree-1 closed forms are the exact roots of the degree-1 block.
    {
        let mut ok = true;
        for _ in 0..10 {
            let params = random_params(&mut rng);
            let nu = params.nu();
            let eigs = closed_low_eigs(&params);
            let mut expected = UPoly::one();
            for e in &eigs {
                let factor = UPoly::from_roots(&[e - &nu]);
                expected = &expected * &factor.pow(2);
            }
            if block_charpoly(&params, 1)? != expected {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "degree-one-closed-forms",
            ok,
            "the four closed-form degree-1 eigenvalues are the shifted roots of the degree-1 block, 10 random triples",
        ));
    }

    // Gram matrices are exactly positive definite through degree 6.
    {
        let mut ok = true;
        for n in 0..=6u32 {
            let basis = HarmonicBasis::get(n);
            let g = basis.gram();
            if g.len() != harmonic_dimension(n) || !positive_definite(g) {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "gram-positive-definite",
            ok,
            "harmonic Gram matrices are symmetric positive definite through degree 6",
        ));
    }

    // Metric determinant at random points equals the squared volume factor.
    {
        let mut ok = true;
        for _ in 0..10 {
            let params = random_params(&mut rng);
            let t = [
                random_coeff(&mut rng),
                random_coeff(&mut rng),
                random_coeff(&mut rng),
            ];
            let vol = params.volume_coefficient();
            if metric_determinant(&params, &t) != &vol * &vol {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "volume-determinant",
            ok,
            "det of the frame metric equals (a1 a2 a3)^2 at 10 random points and parameters",
        ));
    }

    // Frame conversion preserves the squared Frobenius norm in the mean.
    {
        let mut ok = true;
        for _ in 0..3 {
            let mut entries = vec![vec![SphericalField::zero(); 3]; 3];
            for j in 0..3 {
                for k in j..3 {
                    let c = SphericalField::constant(random_coeff(&mut rng));
                    entries[j][k] = c.clone();
                    entries[k][j] = c;
                }
            }
            let h_plus =
                crate::perturb::PerturbationTensor::new(FrameSign::Plus, entries)?;
            let h_minus = convert_h_plus_to_minus(&h_plus)?;
            let a = h_plus.frobenius_square()?.mean();
            let b = h_minus.frobenius_square()?.mean();
            if a != b {
                ok = false;
            }
            let va = volume_increment(&h_plus);
            let vb = volume_increment(&h_minus);
            if va.coefficient() != vb.coefficient() {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "frame-conversion-invariants",
            ok,
            "frame conversion preserves the mean squared Frobenius norm and the volume increment",
        ));
    }

    // For converted constant shear tensors the double divergence vanishes.
    {
        let mut ok = true;
        for _ in 0..3 {
            let a1 = random_coeff(&mut rng);
            let a2 = random_coeff(&mut rng);
            let a3 = -(&a1 + &a2);
            let h_minus = convert_h_plus_to_minus(&berger_perturbation(&[a1, a2, a3]))?;
            for k in 1..=3 {
                let mut div = SphericalField::zero();
                for j in 1..=3 {
                    div = div.add(&apply_l(FrameSign::Minus, j, h_minus.entry(j, k)));
                }
                for s in 1..=3 {
                    if !apply_l(FrameSign::Minus, s, &div).is_zero() {
                        ok = false;
                    }
                }
            }
        }
        checks.push(CheckOutcome::from_bool(
            "shear-double-divergence",
            ok,
            "L-_s L-_j (h-)_{jk} = 0 identically for converted constant shear tensors",
        ));
    }

    // First-order expansion coefficients of the two branches are opposite,
    // and match the volume-increment formula.
    {
        let mut ok = true;
        for _ in 0..5 {
            let c = [
                random_coeff(&mut rng),
                random_coeff(&mut rng),
                random_coeff(&mut rng),
            ];
            let series: Vec<PowerSeries> = c
                .iter()
                .map(|cj| {
                    PowerSeries::constant(Rat::one(), crate::berger::CURVE_ORDER)
                        .add(&PowerSeries::var(crate::berger::CURVE_ORDER).scale(cj))
                })
                .collect();
            let curve = BergerCurve::new([
                series[0].clone(),
                series[1].clone(),
                series[2].clone(),
            ])?;
            let exp = curve_expansion(&curve);
            if exp.order1.0 != -exp.order1.1.clone() {
                ok = false;
            }
            let (l1p, l1m) = lambda1(&berger_perturbation(&c));
            if exp.order1 != (l1p, l1m) {
                ok = false;
            }
        }
        checks.push(CheckOutcome::from_bool(
            "expansion-antisymmetry",
            ok,
            "order-1 branch coefficients are opposite and equal the first-order engine output, 5 random curves",
        ));
    }

    Ok(VerifyReport {
        suite: "identities".to_string(),
        seed,
        checks,
    })
}

/// Compares the closed-form characteristic polynomials with the exact block
/// computation. `degree` restricts the comparison to one degree; degrees
/// above 4 have no closed form and are rejected. The degree-3 printed
/// reading is expected to disagree — when it does, that is reported as a
/// documented discrepancy, not a failure; both degree-3 readings are always
/// included so the report states both outcomes.
pub fn charpoly_suite(seed: u64, degree: Option<u32>) -> Result<VerifyReport> {
    if let Some(d) = degree {
        if d > 4 {
            return Err(Error::InvalidInput(format!(
                "no closed-form characteristic polynomial for degree {d}: only degrees 0..=4 are available"
            )));
        }
    }
    let degrees: Vec<u32> = match degree {
        Some(d) => vec![d],
        None => (0..=4).collect(),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    for n in degrees {
        // Unit parameters plus two random triples per degree.
        let mut params = vec![BergerParams::unit()];
        for _ in 0..2 {
            params.push(random_params(&mut rng));
        }
        let oracles: Vec<UPoly> = params
            .iter()
            .map(|p| block_charpoly(p, n))
            .collect::<Result<_>>()?;

        let conventions: &[Convention] = if n == 3 {
            &[Convention::Printed, Convention::Corrected]
        } else {
            &[Convention::Printed]
        };
        for &conv in conventions {
            let mut agreements = 0usize;
            for (p, oracle) in params.iter().zip(&oracles) {
                if &charpoly_formula(n, p, conv)? == oracle {
                    agreements += 1;
                }
            }
            let all = params.len();
            let name = if n == 3 {
                format!("charpoly-degree-3-{conv}")
            } else {
                format!("charpoly-degree-{n}")
            };
            let outcome = if n == 3 && conv == Convention::Printed {
                // Documented discrepancy: the printed linear coefficient is
                // half the one the exact blocks force.
                if agreements == 0 {
                    CheckOutcome {
                        name,
                        status: CheckStatus::DisagreementReported,
                        detail: format!(
                            "printed degree-3 reading disagrees with the exact block polynomial at all {all} sampled parameter triples, as documented; the corrected reading (doubled linear coefficient) agrees"
                        ),
                    }
                } else {
                    CheckOutcome {
                        name,
                        status: CheckStatus::Fail,
                        detail: format!(
                            "printed degree-3 reading unexpectedly agreed with the exact block polynomial at {agreements}/{all} triples"
                        ),
                    }
                }
            } else if agreements == all {
                CheckOutcome {
                    name,
                    status: CheckStatus::Pass,
                    detail: format!(
                        "matches the exact block polynomial at all {all} sampled parameter triples ({conv} reading)"
                    ),
                }
            } else {
                CheckOutcome {
                    name,
                    status: CheckStatus::Fail,
                    detail: format!(
                        "agrees at only {agreements}/{all} sampled parameter triples ({conv} reading)"
                    ),
                }
            };
            checks.push(outcome);
        }
    }

    Ok(VerifyReport {
        suite: "charpoly".to_string(),
        seed,
        checks,
    })
}
