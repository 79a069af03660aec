//! First- and second-order coefficients of the two lowest Dirac
//! eigenvalues under a polynomial metric perturbation.
//!
//! The perturbation enters as the symmetric tensor of frame scalars
//! `(h±)_{jk}` (the metric increment contracted with an invariant
//! orthonormal frame). The first-order coefficients are `∓V⁽¹⁾/(4π²)` with
//! `V⁽¹⁾` the volume increment; the second-order ones exist under the
//! shear (traceless) condition and are sphere means of the quartic field
//! `P±` built from the tensor, the matching frame operators and the
//! Laplacian pseudoinverse. Everything here is exact.

use serde::Deserialize;

use crate::exact::{format_rat, int, rat, rat_to_f64, Rat};
use crate::killing::{apply_l, convert_h_plus_to_minus, levi_civita, FrameSign};
use crate::polyfield::{SphereIntegral, SphericalField};
use crate::{Error, Result};

/// Symmetric 3×3 tensor of scalar fields, tagged with the frame its
/// components refer to.
#[derive(Clone, PartialEq, Debug)]
pub struct PerturbationTensor {
    sign: FrameSign,
    entries: [[SphericalField; 3]; 3],
}

impl PerturbationTensor {
    /// Validates shape (3×3) and exact symmetry.
    pub fn new(sign: FrameSign, entries: Vec<Vec<SphericalField>>) -> Result<Self> {
        if entries.len() != 3 || entries.iter().any(|r| r.len() != 3) {
            return Err(Error::InvalidInput(
                "perturbation tensor must be a 3×3 matrix of fields".into(),
            ));
        }
        for j in 0..3 {
            for k in (j + 1)..3 {
                if entries[j][k] != entries[k][j] {
                    return Err(Error::InvalidInput(format!(
                        "perturbation tensor is not symmetric at ({}, {})",
                        j + 1,
                        k + 1
                    )));
                }
            }
        }
        let mut it = entries.into_iter();
        let row = |it: &mut std::vec::IntoIter<Vec<SphericalField>>| {
            let mut r = it.next().expect("length checked").into_iter();
            [
                r.next().expect("length checked"),
                r.next().expect("length checked"),
                r.next().expect("length checked"),
            ]
        };
        Ok(PerturbationTensor {
            sign,
            entries: [row(&mut it), row(&mut it), row(&mut it)],
        })
    }

    pub fn zero(sign: FrameSign) -> Self {
        PerturbationTensor {
            sign,
            entries: Default::default(),
        }
    }

    /// Diagonal tensor from three fields.
    pub fn from_diagonal(sign: FrameSign, diag: [SphericalField; 3]) -> Self {
        let mut t = PerturbationTensor::zero(sign);
        for (j, d) in diag.into_iter().enumerate() {
            t.entries[j][j] = d;
        }
        t
    }

    pub fn frame(&self) -> FrameSign {
        self.sign
    }

    /// Entry `h_{jk}`, 1-based.
    pub fn entry(&self, j: usize, k: usize) -> &SphericalField {
        assert!((1..=3).contains(&j) && (1..=3).contains(&k));
        &self.entries[j - 1][k - 1]
    }

    /// Frame trace `h_{jj}`; equals the metric contraction because the
    /// frames are orthonormal.
    pub fn trace(&self) -> SphericalField {
        let mut t = SphericalField::zero();
        for j in 0..3 {
            t = t.add(&self.entries[j][j]);
        }
        t
    }

    /// Pointwise Frobenius square `Σ_{jk} h_{jk}²` as a field.
    pub fn frobenius_square(&self) -> Result<SphericalField> {
        let mut t = SphericalField::zero();
        for j in 1..=3 {
            for k in 1..=3 {
                t = t.add(&self.entry(j, k).multiply(self.entry(j, k))?);
            }
        }
        Ok(t)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(SphericalField::is_zero)
    }

    /// Loads the JSON interchange form
    /// `{"frame": "+"|"-", "entries": [[poly text; 3]; 3]}` and validates
    /// symmetry.
    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            frame: String,
            entries: Vec<Vec<String>>,
        }
        let raw: Raw = serde_json::from_str(s)
            .map_err(|e| Error::InvalidInput(format!("malformed perturbation file: {e}")))?;
        let sign: FrameSign = raw.frame.parse()?;
        let mut fields = Vec::with_capacity(3);
        for row in &raw.entries {
            let mut frow = Vec::with_capacity(3);
            for text in row {
                frow.push(text.parse::<SphericalField>()?);
            }
            fields.push(frow);
        }
        PerturbationTensor::new(sign, fields)
    }
}

/// Volume increment `V⁽¹⁾ = ½∫ tr(h) dS`, exact.
pub fn volume_increment(h: &PerturbationTensor) -> SphereIntegral {
    SphereIntegral::from_coefficient(h.trace().integral().coefficient() * rat(1, 2))
}

/// First-order coefficients `(λ₊⁽¹⁾, λ₋⁽¹⁾) = (∓V⁽¹⁾/(4π²))`: the two
/// lowest eigenvalues move opposite ways, proportionally to the volume
/// increment.
pub fn lambda1(h: &PerturbationTensor) -> (Rat, Rat) {
    // V⁽¹⁾ = c·2π² gives λ₊⁽¹⁾ = -c/2.
    let c = volume_increment(h).coefficient() * rat(-1, 2);
    (c.clone(), -c)
}

/// True iff the frame trace vanishes identically (density-preserving
/// perturbation) — the hypothesis of the second-order formula.
pub fn shear_check(h: &PerturbationTensor) -> bool {
    h.trace().is_zero()
}

/// The quartic field behind the second-order coefficient, for the frame
/// selected by `h`:
///
/// `P± = ±¼ h_{jk}h_{jk} − (1/16) ε_{qks} h_{jq} L_s h_{jk}`
/// `     ± ⅛ h_{ks} (−Δ)⁻¹ L_s L_j h_{jk} − (1/16) ε_{qks} h_{rq} (−Δ)⁻¹ L_r L_s L_j h_{jk}`
///
/// with `L = L±` matching the frame and upper signs for the plus frame.
pub fn p_field(h: &PerturbationTensor) -> Result<SphericalField> {
    if !shear_check(h) {
        return Err(Error::InvalidInput(
            "non-shear tensor: the second-order formula requires a traceless frame perturbation"
                .into(),
        ));
    }
    let sign = h.frame();
    let branch = match sign {
        FrameSign::Plus => int(1),
        FrameSign::Minus => int(-1),
    };
    let l = |s: usize, f: &SphericalField| apply_l(sign, s, f);

    // Shared divergence fields: div_k = Σ_j L_j h_{jk}.
    let div: Vec<SphericalField> = (1..=3)
        .map(|k| {
            let mut d = SphericalField::zero();
            for j in 1..=3 {
                d = d.add(&l(j, h.entry(j, k)));
            }
            d
        })
        .collect();

    let mut term1 = SphericalField::zero();
    for j in 1..=3 {
        for k in 1..=3 {
            term1 = term1.add(&h.entry(j, k).multiply(h.entry(j, k))?);
        }
    }
    term1 = term1.scale(&(rat(1, 4) * &branch));

    let mut term2 = SphericalField::zero();
    let mut term4 = SphericalField::zero();
    for q in 1..=3 {
        for k in 1..=3 {
            for s in 1..=3 {
                let e = levi_civita(q, k, s);
                if e == 0 {
                    continue;
                }
                let ef = int(e);
                for j in 1..=3 {
                    let t = h.entry(j, q).multiply(&l(s, h.entry(j, k)))?;
                    term2 = term2.add(&t.scale(&ef));
                }
                let lsd = l(s, &div[k - 1]);
                for r in 1..=3 {
                    let inner = l(r, &lsd).pseudo_inverse_laplacian();
                    let t = h.entry(r, q).multiply(&inner)?;
                    term4 = term4.add(&t.scale(&ef));
                }
            }
        }
    }
    term2 = term2.scale(&rat(-1, 16));
    term4 = term4.scale(&rat(-1, 16));

    let mut term3 = SphericalField::zero();
    for k in 1..=3 {
        for s in 1..=3 {
            let inner = l(s, &div[k - 1]).pseudo_inverse_laplacian();
            term3 = term3.add(&h.entry(k, s).multiply(&inner)?);
        }
    }
    term3 = term3.scale(&(rat(1, 8) * &branch));

    Ok(term1.add(&term2).add(&term3).add(&term4))
}

/// Second-order coefficient for the branch selected by the tensor's frame:
/// the sphere mean of [`p_field`]. Requires the shear condition.
pub fn lambda2(h: &PerturbationTensor) -> Result<Rat> {
    Ok(p_field(h)?.mean())
}

/// The constant plus-frame tensor `2·diag(a₁′, a₂′, a₃′)` induced by a
/// Berger parameter curve with derivatives `a′` at the round sphere.
pub fn berger_perturbation(a_prime: &[Rat; 3]) -> PerturbationTensor {
    PerturbationTensor::from_diagonal(
        FrameSign::Plus,
        std::array::from_fn(|j| SphericalField::constant(&a_prime[j] * int(2))),
    )
}

/// The note attached when second-order output is unavailable because the
/// tensor is not trace-free.
pub const NON_SHEAR_NOTE: &str = "non-shear: second order unavailable (Theorem 2 hypothesis)";

/// The note attached when a minus-frame input restricts second-order
/// output to the minus branch.
pub const MINUS_FRAME_NOTE: &str =
    "minus-frame input: plus-branch second order requires the plus-frame tensor";

/// First- and (when defined) second-order coefficients of the `±3/2`
/// eigenvalue branches for one perturbation.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenCoefficients {
    pub lambda1_plus: Rat,
    pub lambda1_minus: Rat,
    pub lambda2_plus: Option<Rat>,
    pub lambda2_minus: Option<Rat>,
    pub note: Option<String>,
}

impl EigenCoefficients {
    /// Computes all available coefficients. A plus-frame shear tensor
    /// yields both second-order branches (the minus branch via internal
    /// O-matrix conversion); a minus-frame shear tensor yields only the
    /// minus branch; a non-shear tensor yields first order only.
    pub fn compute(h: &PerturbationTensor) -> Result<Self> {
        let (l1p, l1m) = lambda1(h);
        let mut out = EigenCoefficients {
            lambda1_plus: l1p,
            lambda1_minus: l1m,
            lambda2_plus: None,
            lambda2_minus: None,
            note: None,
        };
        if !shear_check(h) {
            out.note = Some(NON_SHEAR_NOTE.into());
            return Ok(out);
        }
        match h.frame() {
            FrameSign::Plus => {
                out.lambda2_plus = Some(lambda2(h)?);
                let hm = convert_h_plus_to_minus(h)?;
                out.lambda2_minus = Some(lambda2(&hm)?);
            }
            FrameSign::Minus => {
                out.lambda2_minus = Some(lambda2(h)?);
                out.note = Some(MINUS_FRAME_NOTE.into());
            }
        }
        Ok(out)
    }

    /// JSON form with exact `p/q` strings alongside decimals.
    pub fn to_json(&self) -> String {
        fn val(x: &Rat) -> String {
            format!(
                "{{\"exact\": \"{}\", \"decimal\": {}}}",
                format_rat(x),
                rat_to_f64(x)
            )
        }
        let mut s = String::from("{\n");
        s.push_str(&format!(
            "  \"lambda1\": {{\"plus\": {}, \"minus\": {}}},\n",
            val(&self.lambda1_plus),
            val(&self.lambda1_minus)
        ));
        match (&self.lambda2_plus, &self.lambda2_minus) {
            (None, None) => s.push_str("  \"lambda2\": null,\n"),
            (p, m) => {
                let part = |o: &Option<Rat>| o.as_ref().map_or("null".to_string(), val);
                s.push_str(&format!(
                    "  \"lambda2\": {{\"plus\": {}, \"minus\": {}}},\n",
                    part(p),
                    part(m)
                ));
            }
        }
        match &self.note {
            Some(n) => s.push_str(&format!("  \"note\": \"{n}\"\n")),
            None => s.push_str("  \"note\": null\n"),
        }
        s.push('}');
        s
    }

    /// CSV form `quantity,exact,decimal`; absent values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("quantity,exact,decimal\n");
        let mut row = |name: &str, v: &Option<Rat>| match v {
            Some(x) => s.push_str(&format!("{},{},{}\n", name, format_rat(x), rat_to_f64(x))),
            None => s.push_str(&format!("{name},,\n")),
        };
        row("lambda1_plus", &Some(self.lambda1_plus.clone()));
        row("lambda1_minus", &Some(self.lambda1_minus.clone()));
        row("lambda2_plus", &self.lambda2_plus);
        row("lambda2_minus", &self.lambda2_minus);
        s
    }
}
