//! Closed-form spectral quantities for the one-parameter metric family.
//!
//! This module collects everything that is known in closed form for the
//! deformed metrics with coefficients `a = (a₁, a₂, a₃)`: the constant
//! eigenvalue ν of the degree-0 block, the four degree-1 eigenvalues, and
//! the factored characteristic polynomials for degrees n ≤ 4. The degree-3
//! table admits two readings ([`Convention`]); both are kept available so
//! that discrepancies against the exact matrix computation can be reported
//! rather than silently patched.
//!
//! On top of the closed forms sit two validation harnesses: exact power
//! series expansion of the two low eigenvalue branches along a parameter
//! curve `a(ε)` ([`curve_expansion`]), and a finite-difference sweep
//! ([`fd_sweep`]) that recomputes full spectra at sampled ε and fits the
//! first- and second-order coefficients by Richardson extrapolation.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use serde_json::json;

use crate::dirac::{full_spectrum, BergerParams};
use crate::exact::{format_rat, int, rat, rat_abs, rat_to_f64, Rat};
use crate::killing::{k_vector, FrameSign};
use crate::series::{parse_series, PowerSeries};
use crate::upoly::UPoly;
use crate::{Error, Result};

/// The four sign triples `(s₁, s₂, s₃) ∈ {±1}³` with `s₁s₂s₃ = +1`, in the
/// order used to identify the degree-1 eigenvalue branches.
pub const SIGN_TRIPLES: [[i64; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];

/// Truncation order for curve series; order 2 suffices for the expansion
/// coefficients, the headroom keeps volume diagnostics informative.
pub const CURVE_ORDER: usize = 8;

/// Pinned pass tolerance for fitted first-order sweep coefficients.
pub const ORDER1_TOL: f64 = 1e-6;

/// Pinned pass tolerance for fitted second-order sweep coefficients.
pub const ORDER2_TOL: f64 = 1e-4;

/// The constant eigenvalue of the degree-0 block,
/// ν = (a₁² + a₂² + a₃²) / (2a₁a₂a₃).
pub fn nu(params: &BergerParams) -> Rat {
    params.nu()
}

/// The four degree-1 eigenvalues ν − Σⱼ sⱼ/aⱼ, one per entry of
/// [`SIGN_TRIPLES`] and in that order. At `a = (1,1,1)` they are
/// {−3/2, 5/2, 5/2, 5/2}; near the unit parameters the first entry is the
/// minimum-modulus negative eigenvalue of the full operator.
pub fn closed_low_eigs(params: &BergerParams) -> [Rat; 4] {
    let nu = params.nu();
    SIGN_TRIPLES.map(|s| {
        let mut acc = nu.clone();
        for j in 1..=3 {
            acc -= params.inv_a(j) * int(s[j - 1]);
        }
        acc
    })
}

/// Reading of the degree-3 closed-form characteristic polynomial.
///
/// The degree-3 table as printed (linear coefficient Σ sⱼ/aⱼ in each
/// quadratic factor) does not reproduce the exact block spectrum; doubling
/// that coefficient does. Both readings stay available so the disagreement
/// can be reported faithfully. Degrees other than 3 are identical under
/// either convention; the degree-4 double sum over distinct index pairs is
/// always read over ordered pairs, which matches the exact computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Convention {
    /// The tables exactly as printed.
    Printed,
    /// The degree-3 linear coefficient doubled to 2·Σ sⱼ/aⱼ.
    Corrected,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convention::Printed => write!(f, "printed"),
            Convention::Corrected => write!(f, "corrected"),
        }
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Convention::Printed),
            "corrected" => Ok(Convention::Corrected),
            other => Err(Error::InvalidInput(format!(
                "unknown convention {other:?}: expected \"printed\" or \"corrected\""
            ))),
        }
    }
}

/// A closed-form characteristic polynomial of one degree block, prior to
/// evaluation: the degree n ≤ 4 together with the reading convention. The
/// coefficients are rational functions of the metric parameters; they are
/// materialized by [`CharpolyFormula::eval`].
#[derive(Clone, Copy, Debug)]
pub struct CharpolyFormula {
    degree: u32,
    convention: Convention,
}

impl CharpolyFormula {
    /// Selects the formula for one degree. Degrees n ≥ 5 have no known
    /// closed form and are rejected.
    pub fn new(degree: u32, convention: Convention) -> Result<Self> {
        if degree > 4 {
            return Err(Error::InvalidInput(format!(
                "no closed-form characteristic polynomial for degree {degree}: only degrees 0..=4 are available"
            )));
        }
        Ok(CharpolyFormula { degree, convention })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Evaluates the closed form at concrete parameters. The result is a
    /// monic polynomial in μ of degree 2(n+1)², the eigenvalue variable
    /// being that of the ν-shifted operator.
    pub fn eval(&self, params: &BergerParams) -> UPoly {
        let b = [params.inv_a(1), params.inv_a(2), params.inv_a(3)];
        let sum_b2: Rat = b.iter().map(|x| x * x).sum();
        let prod_b: Rat = b.iter().product();
        let chi = match self.degree {
            0 => UPoly::from_coeffs(vec![Rat::zero(), Rat::zero(), Rat::one()]),
            1 => {
                let mut acc = UPoly::one();
                for s in SIGN_TRIPLES {
                    let shift: Rat = (0..3).map(|j| &b[j] * int(s[j])).sum();
                    let factor = UPoly::from_coeffs(vec![shift, Rat::one()]);
                    acc = &acc * &factor.pow(2);
                }
                acc
            }
            2 => UPoly::from_coeffs(vec![
                int(16) * &prod_b,
                int(-4) * &sum_b2,
                Rat::zero(),
                Rat::one(),
            ])
            .pow(6),
            3 => {
                let double_linear = matches!(self.convention, Convention::Corrected);
                let mut acc = UPoly::one();
                for s in SIGN_TRIPLES {
                    let linear: Rat = (0..3).map(|j| &b[j] * int(s[j])).sum();
                    let linear = if double_linear { linear * int(2) } else { linear };
                    // Sum over ordered pairs j ≠ k of sⱼsₖ/(aⱼaₖ).
                    let pair_sum = int(2)
                        * (int(s[0] * s[1]) * &b[0] * &b[1]
                            + int(s[0] * s[2]) * &b[0] * &b[2]
                            + int(s[1] * s[2]) * &b[1] * &b[2]);
                    let constant = int(-3) * (&sum_b2 - pair_sum);
                    let quad = UPoly::from_coeffs(vec![constant, -linear, Rat::one()]);
                    acc = &acc * &quad.pow(4);
                }
                acc
            }
            4 => {
                let sum_b4: Rat = b.iter().map(|x| x * x * x * x).sum();
                // Sum over ordered pairs j ≠ k of 1/(aⱼaₖ)².
                let pair_sum = int(2)
                    * (&b[0] * &b[0] * &b[1] * &b[1]
                        + &b[0] * &b[0] * &b[2] * &b[2]
                        + &b[1] * &b[1] * &b[2] * &b[2]);
                UPoly::from_coeffs(vec![
                    int(-768) * &sum_b2 * &prod_b,
                    int(64) * (sum_b4 + int(2) * pair_sum),
                    int(80) * &prod_b,
                    int(-20) * &sum_b2,
                    Rat::zero(),
                    Rat::one(),
                ])
                .pow(10)
            }
            _ => unreachable!("degree bounded by constructor"),
        };
        debug_assert_eq!(
            chi.degree(),
            Some(2 * ((self.degree as usize + 1) * (self.degree as usize + 1))),
            "closed form must have the block dimension as total degree"
        );
        debug_assert!(chi.is_monic());
        chi
    }
}

/// Evaluates the degree-n closed-form characteristic polynomial at the
/// given parameters under the given reading convention.
pub fn charpoly_formula(degree: u32, params: &BergerParams, convention: Convention) -> Result<UPoly> {
    Ok(CharpolyFormula::new(degree, convention)?.eval(params))
}

/// A parameter curve ε ↦ a(ε) through the unit parameters, stored as three
/// exact truncated power series with `aⱼ(0) = 1`.
#[derive(Clone, Debug)]
pub struct BergerCurve {
    a: [PowerSeries; 3],
}

impl BergerCurve {
    /// Builds a curve from three series, enforcing `aⱼ(0) = 1`.
    pub fn new(a: [PowerSeries; 3]) -> Result<Self> {
        for (j, s) in a.iter().enumerate() {
            if !s.coeff(0).is_one() {
                return Err(Error::InvalidInput(format!(
                    "curve component {} has a(0) = {}, expected exactly 1",
                    j + 1,
                    format_rat(&s.coeff(0))
                )));
            }
        }
        Ok(BergerCurve { a })
    }

    /// Parses a comma-separated triple of curve expressions in the variable
    /// `e`, such as `"1+e,1-e,1/((1+e)(1-e))"`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(',').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!(
                "expected three comma-separated curve expressions, got {}",
                parts.len()
            )));
        }
        let series = [
            parse_series(parts[0], CURVE_ORDER)?,
            parse_series(parts[1], CURVE_ORDER)?,
            parse_series(parts[2], CURVE_ORDER)?,
        ];
        BergerCurve::new(series)
    }

    /// The series of component `j ∈ 1..=3`.
    pub fn component(&self, j: usize) -> &PowerSeries {
        &self.a[j - 1]
    }

    /// First-order coefficients `(a₁'(0), a₂'(0), a₃'(0))`.
    pub fn initial_derivative(&self) -> [Rat; 3] {
        [self.a[0].coeff(1), self.a[1].coeff(1), self.a[2].coeff(1)]
    }

    /// Evaluates the truncated series at a rational ε and validates
    /// positivity of the resulting parameters.
    pub fn params_at(&self, eps: &Rat) -> Result<BergerParams> {
        BergerParams::new(self.a[0].eval(eps), self.a[1].eval(eps), self.a[2].eval(eps))
    }
}

/// Exact series coefficients of the two tracked eigenvalue branches along a
/// curve: λ₊(ε) = ν(a(ε)) and λ₋(ε) = ν(a(ε)) − Σⱼ 1/aⱼ(ε).
#[derive(Clone, Debug)]
pub struct CurveExpansion {
    /// First-order coefficients (λ₊⁽¹⁾, λ₋⁽¹⁾); always available.
    pub order1: (Rat, Rat),
    /// Second-order coefficients (λ₊⁽²⁾, λ₋⁽²⁾); only meaningful — and only
    /// produced — when the curve preserves volume through ε², i.e.
    /// a₁a₂a₃ = 1 + O(ε³).
    pub order2: Option<(Rat, Rat)>,
    /// Diagnostic when the second order is refused.
    pub volume_note: Option<String>,
}

/// Expands the two low eigenvalue branches along the curve by formal power
/// series composition of the closed forms.
pub fn curve_expansion(curve: &BergerCurve) -> CurveExpansion {
    let a1 = curve.component(1);
    let a2 = curve.component(2);
    let a3 = curve.component(3);
    let volume = a1.mul(a2).mul(&a3.clone());
    let sum_sq = a1.mul(a1).add(&a2.mul(a2)).add(&a3.mul(a3));
    // Constant terms are 1, so every reciprocal below exists.
    let nu_series = sum_sq.mul(&volume.scale(&int(2)).recip().expect("unit constant term"));
    let inv_sum = a1
        .recip()
        .and_then(|i1| Ok(i1.add(&a2.recip()?).add(&a3.recip()?)))
        .expect("unit constant term");
    let lambda_minus = nu_series.sub(&inv_sum);

    let order1 = (nu_series.coeff(1), lambda_minus.coeff(1));
    let defect1 = volume.coeff(1);
    let defect2 = volume.coeff(2);
    if defect1.is_zero() && defect2.is_zero() {
        CurveExpansion {
            order1,
            order2: Some((nu_series.coeff(2), lambda_minus.coeff(2))),
            volume_note: None,
        }
    } else {
        CurveExpansion {
            order1,
            order2: None,
            volume_note: Some(format!(
                "second-order coefficients unavailable: the curve does not preserve volume through second order (a1*a2*a3 = 1 + ({})*e + ({})*e^2 + ...)",
                format_rat(&defect1),
                format_rat(&defect2)
            )),
        }
    }
}

/// One sampled point of a sweep: ε and the two tracked eigenvalues.
#[derive(Clone, Debug)]
pub struct SweepRow {
    pub eps: Rat,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

/// One fitted coefficient of a sweep: which branch, which expansion order,
/// the Richardson-extrapolated value, and the comparison against the exact
/// series coefficient when the latter is available.
#[derive(Clone, Debug)]
pub struct SweepFit {
    /// `"plus"` or `"minus"`.
    pub branch: &'static str,
    /// Expansion order fitted: 1 or 2.
    pub order: u32,
    pub fitted: f64,
    pub analytic: Option<Rat>,
    pub residual: Option<f64>,
    /// Pass/fail against the pinned tolerance; `None` when no analytic
    /// value is available to compare with.
    pub pass: Option<bool>,
    pub tolerance: f64,
}

/// Result of [`fd_sweep`]: the sampled eigenvalue rows in ascending ε
/// order and the four fitted coefficients.
#[derive(Clone, Debug)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub fits: Vec<SweepFit>,
    /// Diagnostic carried over from the series expansion (e.g. volume not
    /// preserved, so no analytic second order).
    pub note: Option<String>,
}

impl SweepReport {
    /// Overall verdict: `"pass"` if every comparable fit is within its
    /// tolerance, `"fitted-only"` if nothing failed but some fits had no
    /// analytic value, `"fail"` otherwise.
    pub fn verdict(&self) -> &'static str {
        if self.fits.iter().any(|f| f.pass == Some(false)) {
            "fail"
        } else if self.fits.iter().any(|f| f.pass.is_none()) {
            "fitted-only"
        } else {
            "pass"
        }
    }

    /// CSV rendering: data rows (eps, lambda_plus, lambda_minus) followed by
    /// fit rows labelled `fit-plus` / `fit-minus` in the eps column, the
    /// fitted value under its branch column, and the fitted order, analytic
    /// value, and residual in the remaining columns. Decimals only.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("eps,lambda_plus,lambda_minus,fitted_order,analytic,residual\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},,,\n",
                rat_to_f64(&row.eps),
                row.lambda_plus,
                row.lambda_minus
            ));
        }
        for fit in &self.fits {
            let (plus_cell, minus_cell) = if fit.branch == "plus" {
                (format!("{}", fit.fitted), String::new())
            } else {
                (String::new(), format!("{}", fit.fitted))
            };
            let analytic = fit
                .analytic
                .as_ref()
                .map(|v| format!("{}", rat_to_f64(v)))
                .unwrap_or_default();
            let residual = fit.residual.map(|r| format!("{r}")).unwrap_or_default();
            out.push_str(&format!(
                "fit-{},{},{},{},{},{}\n",
                fit.branch, plus_cell, minus_cell, fit.order, analytic, residual
            ));
        }
        out
    }

    /// JSON rendering with exact rationals alongside decimals and a verdict
    /// block.
    pub fn to_json_value(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "eps": { "exact": format_rat(&r.eps), "decimal": rat_to_f64(&r.eps) },
                    "lambda_plus": r.lambda_plus,
                    "lambda_minus": r.lambda_minus,
                })
            })
            .collect();
        let fits: Vec<serde_json::Value> = self
            .fits
            .iter()
            .map(|f| {
                json!({
                    "branch": f.branch,
                    "order": f.order,
                    "fitted": f.fitted,
                    "analytic": f.analytic.as_ref().map(|v| json!({
                        "exact": format_rat(v),
                        "decimal": rat_to_f64(v),
                    })),
                    "residual": f.residual,
                    "tolerance": f.tolerance,
                    "pass": f.pass,
                })
            })
            .collect();
        json!({
            "rows": rows,
            "fits": fits,
            "verdict": self.verdict(),
            "note": self.note,
        })
    }
}

/// Samples the spectrum along the curve at the given ε values and fits the
/// first- and second-order coefficients of the two eigenvalue branches.
///
/// The ε list must come in symmetric ± pairs (central differences), with
/// |ε| ≤ 1/10 — beyond that the identification of the tracked branches is
/// not certified — and small enough that all aⱼ(ε) > 0. Eigenvalue tracking
/// walks outward from ε = 0, following the nearest eigenvalue to the
/// previous one on each side; a tie between two candidates is an error, not
/// a choice. The ε = 0 row is exact: (3/2, −3/2).
pub fn fd_sweep(
    curve: &BergerCurve,
    eps_list: &[Rat],
    n_max: u32,
    cluster_tol: f64,
) -> Result<SweepReport> {
    if n_max < 1 {
        return Err(Error::InvalidInput(
            "sweep needs n_max >= 1: the negative branch lives in the degree-1 block".into(),
        ));
    }
    let bound = rat(1, 10);
    let mut levels: Vec<Rat> = Vec::new();
    for eps in eps_list {
        if eps.is_zero() {
            continue;
        }
        if rat_abs(eps) > bound {
            return Err(Error::InvalidInput(format!(
                "|eps| = {} exceeds 1/10: branch tracking is only certified near the unit parameters",
                format_rat(&rat_abs(eps))
            )));
        }
        let h = rat_abs(eps);
        if !levels.contains(&h) {
            levels.push(h);
        }
    }
    if levels.is_empty() {
        return Err(Error::InvalidInput("empty eps list".into()));
    }
    for h in &levels {
        let (pos, neg) = (
            eps_list.iter().any(|e| e == h),
            eps_list.iter().any(|e| &-e.clone() == h),
        );
        if !(pos && neg) {
            return Err(Error::InvalidInput(format!(
                "eps list must contain symmetric pairs: missing one of +-{}",
                format_rat(h)
            )));
        }
    }
    levels.sort();

    // Walk outward from 0 on each side, tracking both branches.
    let mut samples: Vec<(Rat, f64, f64)> = Vec::new();
    for sign in [1i64, -1i64] {
        let mut ref_plus = 1.5f64;
        let mut ref_minus = -1.5f64;
        for h in &levels {
            let eps = h * int(sign);
            let params = curve.params_at(&eps)?;
            let spectrum = full_spectrum(&params, n_max, cluster_tol)?;
            let track = |target: f64| -> Result<f64> {
                let (entry, best, runner_up) = spectrum
                    .nearest(target)
                    .ok_or_else(|| Error::Solver("empty spectrum in sweep".into()))?;
                if runner_up - best <= 1e-9 * (1.0 + target.abs()) {
                    return Err(Error::Solver(format!(
                        "eigenvalue tracking ambiguity at eps = {}: two eigenvalues are equidistant from the tracked branch value {}",
                        format_rat(&eps), target
                    )));
                }
                if entry.multiplicity % 2 != 0 {
                    return Err(Error::Solver(format!(
                        "tracked eigenvalue {} at eps = {} has odd multiplicity {}",
                        entry.eigenvalue,
                        format_rat(&eps),
                        entry.multiplicity
                    )));
                }
                Ok(entry.eigenvalue)
            };
            ref_plus = track(ref_plus)?;
            ref_minus = track(ref_minus)?;
            samples.push((eps, ref_plus, ref_minus));
        }
    }
    samples.push((Rat::zero(), 1.5, -1.5));
    samples.sort_by(|a, b| a.0.cmp(&b.0));
    let rows: Vec<SweepRow> = samples
        .iter()
        .map(|(eps, lp, lm)| SweepRow {
            eps: eps.clone(),
            lambda_plus: *lp,
            lambda_minus: *lm,
        })
        .collect();

    let expansion = curve_expansion(curve);
    let value_at = |eps: &Rat| -> (f64, f64) {
        let s = samples.iter().find(|(e, _, _)| e == eps).expect("sampled");
        (s.1, s.2)
    };
    let mut fits = Vec::new();
    for branch in ["plus", "minus"] {
        let pick = |pair: (f64, f64)| if branch == "plus" { pair.0 } else { pair.1 };
        let lambda0 = if branch == "plus" { 1.5 } else { -1.5 };
        let mut d1 = Vec::new();
        let mut d2 = Vec::new();
        let mut nodes = Vec::new();
        for h in &levels {
            let hf = rat_to_f64(h);
            let up = pick(value_at(h));
            let down = pick(value_at(&-h.clone()));
            d1.push((up - down) / (2.0 * hf));
            d2.push((up + down - 2.0 * lambda0) / (2.0 * hf * hf));
            nodes.push(hf * hf);
        }
        let fitted1 = extrapolate_to_zero(&nodes, &d1);
        let fitted2 = extrapolate_to_zero(&nodes, &d2);
        let analytic1 = Some(if branch == "plus" {
            expansion.order1.0.clone()
        } else {
            expansion.order1.1.clone()
        });
        let analytic2 = expansion
            .order2
            .as_ref()
            .map(|(p, m)| if branch == "plus" { p.clone() } else { m.clone() });
        for (order, fitted, analytic, tol) in [
            (1u32, fitted1, analytic1, ORDER1_TOL),
            (2u32, fitted2, analytic2, ORDER2_TOL),
        ] {
            let residual = analytic.as_ref().map(|a| (fitted - rat_to_f64(a)).abs());
            fits.push(SweepFit {
                branch,
                order,
                fitted,
                analytic,
                residual,
                pass: residual.map(|r| r <= tol),
                tolerance: tol,
            });
        }
    }

    Ok(SweepReport {
        rows,
        fits,
        note: expansion.volume_note,
    })
}

/// Neville extrapolation of `(x_i, v_i)` samples to x = 0. Here x = h², so
/// successive columns cancel the h², h⁴, … error terms of the central
/// difference quotients.
fn extrapolate_to_zero(xs: &[f64], vs: &[f64]) -> f64 {
    let m = xs.len();
    let mut t = vs.to_vec();
    for j in 1..m {
        for i in (j..m).rev() {
            t[i] = (xs[i] * t[i - 1] - xs[i - j] * t[i]) / (xs[i] - xs[i - j]);
        }
    }
    t[m - 1]
}

/// Maps a rational point t ∈ ℝ³ onto the unit 3-sphere,
/// x = (2t, 1 − |t|²) / (1 + |t|²). Every image coordinate is rational, so
/// downstream checks stay exact.
pub fn stereographic_point(t: &[Rat; 3]) -> [Rat; 4] {
    let norm2: Rat = t.iter().map(|v| v * v).sum();
    let denom = Rat::one() + &norm2;
    [
        int(2) * &t[0] / &denom,
        int(2) * &t[1] / &denom,
        int(2) * &t[2] / &denom,
        (Rat::one() - &norm2) / &denom,
    ]
}

/// Determinant of the deformed metric in the right-invariant tangent frame
/// at the image of `t` under [`stereographic_point`].
///
/// The metric assigns length aᵢ to the i-th left-invariant frame vector, so
/// expressing the right-invariant frame through the left-invariant one by
/// exact dot products gives the Gram matrix of the metric at that point.
/// Its determinant equals (a₁a₂a₃)² everywhere — the volume check.
pub fn metric_determinant(params: &BergerParams, t: &[Rat; 3]) -> Rat {
    let x = stereographic_point(t);
    let dot = |u: &[Rat; 4], v: &[Rat; 4]| -> Rat { (0..4).map(|i| &u[i] * &v[i]).sum() };
    let plus: Vec<[Rat; 4]> = (1..=3).map(|i| k_vector(FrameSign::Plus, i, &x)).collect();
    let minus: Vec<[Rat; 4]> = (1..=3).map(|k| k_vector(FrameSign::Minus, k, &x)).collect();
    // c[i][k] = ⟨(K₊)ᵢ, (K₋)ₖ⟩; both frames are orthonormal on the sphere.
    let mut m = vec![vec![Rat::zero(); 3]; 3];
    for k in 0..3 {
        for l in 0..3 {
            let mut acc = Rat::zero();
            for i in 0..3 {
                let a2 = params.a(i + 1) * params.a(i + 1);
                acc += a2 * dot(&plus[i], &minus[k]) * dot(&plus[i], &minus[l]);
            }
            m[k][l] = acc;
        }
    }
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}
