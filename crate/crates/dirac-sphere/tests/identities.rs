//! Property tests for the structural invariants the library promises.
//!
//! Where the unit tests pin specific frozen values, these generate inputs
//! and check the shape of the guarantees: exact-arithmetic laws, conserved
//! quantities of the frame conversion, even multiplicity of float spectra,
//! antisymmetry of first-order coefficients, and input validation.

use dirac_sphere::berger::{curve_expansion, fd_sweep, metric_determinant, BergerCurve, CURVE_ORDER};
use dirac_sphere::dirac::{full_spectrum, BergerParams};
use dirac_sphere::exact::{format_rat, int, parse_rat, rat, Rat};
use dirac_sphere::killing::{convert_h_plus_to_minus, FrameSign};
use dirac_sphere::perturb::{lambda1, volume_increment, PerturbationTensor};
use dirac_sphere::polyfield::SphericalField;
use dirac_sphere::series::PowerSeries;
use dirac_sphere::upoly::UPoly;
use proptest::prelude::*;

/// Small exact rationals with bounded numerator and denominator.
fn small_rat() -> impl Strategy<Value = Rat> {
    (-24i64..=24, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

/// Berger parameters in [1/2, 2]³.
fn berger_params() -> impl Strategy<Value = BergerParams> {
    let side = (2i64..=8).prop_flat_map(|den| (((den + 1) / 2)..=(2 * den)).prop_map(move |num| rat(num, den)));
    [side.clone(), side.clone(), side].prop_map(|a| BergerParams::from_triple(a).expect("positive"))
}

/// Power series `Σ cᵢ εⁱ` at the standard curve order.
fn series_from(coeffs: &[Rat]) -> PowerSeries {
    let x = PowerSeries::var(CURVE_ORDER);
    let mut f = PowerSeries::zero(CURVE_ORDER);
    let mut xp = PowerSeries::constant(int(1), CURVE_ORDER);
    for c in coeffs {
        f = f.add(&xp.scale(c));
        xp = xp.mul(&x);
    }
    f
}

proptest! {
    /// Formatting and reparsing an exact rational is the identity.
    #[test]
    fn rational_text_roundtrip(x in small_rat()) {
        prop_assert_eq!(parse_rat(&format_rat(&x)).unwrap(), x);
    }

    /// `p/q` text parses to the exact quotient for positive denominators.
    #[test]
    fn rational_fraction_text_parses(n in -1000i64..=1000, d in 1i64..=1000) {
        prop_assert_eq!(parse_rat(&format!("{n}/{d}")).unwrap(), rat(n, d));
    }

    /// A power series with nonzero constant term times its reciprocal is 1.
    #[test]
    fn series_reciprocal_is_inverse(c0 in 1i64..=9, coeffs in prop::collection::vec(-9i64..=9, CURVE_ORDER)) {
        let mut c: Vec<Rat> = vec![int(c0)];
        c.extend(coeffs.iter().map(|&v| int(v)));
        let f = series_from(&c);
        let one = PowerSeries::constant(int(1), CURVE_ORDER);
        prop_assert_eq!(f.mul(&f.recip().unwrap()), one);
    }

    /// Series multiplication is commutative and evaluation is a ring map
    /// in the truncation-safe direction: eval(f·g) at small x equals
    /// eval(f)·eval(g) up to the truncation order — checked exactly on
    /// polynomials short enough that no truncation occurs.
    #[test]
    fn series_multiplication_commutes(
        a in prop::collection::vec(-9i64..=9, 4),
        b in prop::collection::vec(-9i64..=9, 4),
    ) {
        let pad = |v: &[i64]| series_from(&v.iter().map(|&x| int(x)).collect::<Vec<_>>());
        let (f, g) = (pad(&a), pad(&b));
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        // Degrees 3 + 3 ≤ 8, so the product is exact and evaluation splits.
        let x = rat(1, 3);
        prop_assert_eq!(f.mul(&g).eval(&x), f.eval(&x) * g.eval(&x));
    }

    /// `from_roots` builds a monic polynomial vanishing at every root.
    #[test]
    fn polynomial_from_roots_vanishes_there(roots in prop::collection::vec(small_rat(), 1..=5)) {
        let p = UPoly::from_roots(&roots);
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), Some(roots.len()));
        for r in &roots {
            prop_assert_eq!(p.eval(r), int(0));
        }
    }

    /// First-order coefficients of the two eigenvalue branches are exact
    /// opposites, and equal ∓¼ tr(h) for constant diagonal tensors.
    #[test]
    fn first_order_branches_are_opposite(c in prop::collection::vec(small_rat(), 3)) {
        let h = PerturbationTensor::from_diagonal(
            FrameSign::Plus,
            [
                SphericalField::constant(c[0].clone()),
                SphericalField::constant(c[1].clone()),
                SphericalField::constant(c[2].clone()),
            ],
        );
        let (plus, minus) = lambda1(&h);
        prop_assert_eq!(&plus + &minus, int(0));
        let trace = &(&c[0] + &c[1]) + &c[2];
        prop_assert_eq!(plus, trace * rat(-1, 4));
    }

    /// Frame conversion preserves the mean squared Frobenius norm and the
    /// volume increment exactly, for arbitrary constant symmetric tensors.
    #[test]
    fn frame_conversion_conserves_invariants(
        diag in prop::collection::vec(-6i64..=6, 3),
        off in prop::collection::vec(-6i64..=6, 3),
    ) {
        let c = |v: i64| SphericalField::constant(int(v));
        let entries = vec![
            vec![c(diag[0]), c(off[0]), c(off[1])],
            vec![c(off[0]), c(diag[1]), c(off[2])],
            vec![c(off[1]), c(off[2]), c(diag[2])],
        ];
        let h_plus = PerturbationTensor::new(FrameSign::Plus, entries).unwrap();
        let h_minus = convert_h_plus_to_minus(&h_plus).unwrap();
        prop_assert_eq!(
            h_plus.frobenius_square().unwrap().mean(),
            h_minus.frobenius_square().unwrap().mean()
        );
        prop_assert_eq!(
            volume_increment(&h_plus).coefficient().clone(),
            volume_increment(&h_minus).coefficient().clone()
        );
    }

    /// The frame metric determinant in stereographic coordinates is the
    /// squared volume coefficient, independent of the chart point.
    #[test]
    fn metric_determinant_is_chart_independent(
        params in berger_params(),
        t in prop::collection::vec((-12i64..=12, 1i64..=6), 3),
    ) {
        let point = [rat(t[0].0, t[0].1), rat(t[1].0, t[1].1), rat(t[2].0, t[2].1)];
        let vol = params.volume_coefficient();
        prop_assert_eq!(metric_determinant(&params, &point), &vol * &vol);
    }

    /// First-order expansion coefficients of any admissible parameter curve
    /// are opposite.
    #[test]
    fn curve_first_order_is_antisymmetric(c in prop::collection::vec(-9i64..=9, 3)) {
        let curve = BergerCurve::parse(&format!("1+{}*e,1+{}*e,1+{}*e", c[0], c[1], c[2])).unwrap();
        let exp = curve_expansion(&curve);
        prop_assert_eq!(exp.order1.0 + exp.order1.1, int(0));
    }

    /// A sweep grid missing the mirror of any ε is always rejected.
    #[test]
    fn sweep_rejects_asymmetric_grids(k in 1i64..=9, j in 1i64..=9) {
        prop_assume!(k != j);
        let curve = BergerCurve::parse("1+e,1-e,1/((1+e)(1-e))").unwrap();
        let eps = [rat(k, 100), rat(-j, 100)];
        prop_assert!(fd_sweep(&curve, &eps, 1, 1e-8).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Every float spectrum over random Berger parameters clusters into
    /// even multiplicities (the quaternionic pairing survives the solver).
    #[test]
    fn float_spectra_have_even_multiplicities(params in berger_params()) {
        let spectrum = full_spectrum(&params, 2, 1e-8).unwrap();
        prop_assert!(spectrum.total_multiplicity() > 0);
        for entry in spectrum.entries() {
            prop_assert_eq!(entry.multiplicity % 2, 0);
        }
    }
}
