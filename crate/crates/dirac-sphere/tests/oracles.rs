//! Independent oracles for the exact kernels.
//!
//! Everything the library computes symbolically is re-derived here by a
//! different route — hand-frozen constants, the Gaussian-reduction
//! recurrence for sphere moments, Monte Carlo integration, and the closed
//! trigonometric solution of a cubic — so that a systematic error in the
//! symbolic side cannot silently agree with itself.

use dirac_sphere::dirac::{assemble_block, block_spectrum, BergerParams};
use dirac_sphere::exact::{int, rat, rat_to_f64, Rat};
use dirac_sphere::polyfield::{monomial_sphere_integral, Exponents};
use rand::Rng;
use rand_chacha::{rand_core::SeedableRng, ChaCha8Rng};

/// All exponent tuples with every entry even and total degree ≤ `max`.
fn even_tuples(max: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for a in (0..=max).step_by(2) {
        for b in (0..=max - a).step_by(2) {
            for c in (0..=max - a - b).step_by(2) {
                for d in (0..=max - a - b - c).step_by(2) {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// Mean of `x^e` over the unit 3-sphere by the classical reduction to
/// one-dimensional Gaussian integrals: `Π (eᵢ-1)!! / Π_{k<M} (4 + 2k)`
/// where `M = Σ eᵢ / 2`. Derived independently of the library's
/// factorial form.
fn double_factorial_moment(e: [u32; 4]) -> Rat {
    let mut numer = int(1);
    for &ei in &e {
        let mut k = ei as i64 - 1;
        while k >= 2 {
            numer *= int(k);
            k -= 2;
        }
    }
    let m: u32 = e.iter().sum::<u32>() / 2;
    let mut denom = int(1);
    for k in 0..m {
        denom *= int(4 + 2 * k as i64);
    }
    numer / denom
}

/// A handful of moments frozen from a by-hand computation.
#[test]
fn moments_match_hand_computed_constants() {
    let cases: [([u32; 4], Rat); 7] = [
        ([0, 0, 0, 0], int(1)),
        ([2, 0, 0, 0], rat(1, 4)),
        ([4, 0, 0, 0], rat(1, 8)),
        ([2, 2, 0, 0], rat(1, 24)),
        ([6, 0, 0, 0], rat(5, 64)),
        ([2, 2, 2, 0], rat(1, 192)),
        ([2, 2, 2, 2], rat(1, 1920)),
    ];
    for (e, want) in cases {
        let got = monomial_sphere_integral(Exponents(e)).coefficient().clone();
        assert_eq!(got, want, "mean of x^{e:?} over the sphere");
    }
    // Odd exponents integrate to zero by symmetry.
    for e in [[1, 0, 0, 0], [1, 2, 0, 1], [3, 2, 2, 0], [2, 2, 2, 1]] {
        assert!(
            monomial_sphere_integral(Exponents(e)).is_zero(),
            "odd moment x^{e:?} must vanish"
        );
    }
}

/// Every even moment of total degree ≤ 12 agrees with the
/// Gaussian-reduction double-factorial form.
#[test]
fn moments_match_gaussian_reduction_rule() {
    let mut checked = 0usize;
    for e in even_tuples(12) {
        let got = monomial_sphere_integral(Exponents(e)).coefficient().clone();
        assert_eq!(got, double_factorial_moment(e), "moment of x^{e:?}");
        checked += 1;
    }
    assert!(checked > 100, "enumeration covered {checked} tuples");
}

/// The raising recurrence `I(e + 2δᵢ)/I(e) = (eᵢ + 1)/(Σe + 4)` that any
/// sphere moment must satisfy, across all even tuples of degree ≤ 10.
#[test]
fn moments_satisfy_raising_recurrence() {
    for e in even_tuples(10) {
        let base = monomial_sphere_integral(Exponents(e)).coefficient().clone();
        let total: u32 = e.iter().sum();
        for i in 0..4 {
            let mut raised = e;
            raised[i] += 2;
            let got = monomial_sphere_integral(Exponents(raised)).coefficient().clone();
            let ratio = rat(e[i] as i64 + 1, total as i64 + 4);
            assert_eq!(got, &base * &ratio, "raising x^{e:?} in slot {i}");
        }
    }
}

/// Monte Carlo cross-check: 20 random even monomials of degree ≤ 8,
/// sampled at 200 000 uniform points of S³; each exact mean must sit
/// within 4 standard errors of the sample mean. The generator seed is
/// fixed, so the test is deterministic.
#[test]
fn moments_match_monte_carlo_estimates() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ACE);
    // Pick the monomials first so they do not depend on the sample stream.
    let pool: Vec<[u32; 4]> = even_tuples(8).into_iter().filter(|e| e.iter().sum::<u32>() > 0).collect();
    let mut picks: Vec<[u32; 4]> = Vec::new();
    while picks.len() < 20 {
        let e = pool[rng.gen_range(0..pool.len())];
        if !picks.contains(&e) {
            picks.push(e);
        }
    }

    let n_samples = 200_000usize;
    let mut sums = vec![0.0f64; picks.len()];
    let mut sq_sums = vec![0.0f64; picks.len()];
    let gauss = |rng: &mut ChaCha8Rng| -> (f64, f64) {
        let u: f64 = 1.0 - rng.gen::<f64>();
        let v: f64 = rng.gen();
        let r = (-2.0 * u.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * v;
        (r * t.cos(), r * t.sin())
    };
    for _ in 0..n_samples {
        let (z1, z2) = gauss(&mut rng);
        let (z3, z4) = gauss(&mut rng);
        let norm = (z1 * z1 + z2 * z2 + z3 * z3 + z4 * z4).sqrt();
        let x = [z1 / norm, z2 / norm, z3 / norm, z4 / norm];
        for (idx, e) in picks.iter().enumerate() {
            let mut v = 1.0f64;
            for (xi, &ei) in x.iter().zip(e) {
                v *= xi.powi(ei as i32);
            }
            sums[idx] += v;
            sq_sums[idx] += v * v;
        }
    }
    for (idx, e) in picks.iter().enumerate() {
        let mean = sums[idx] / n_samples as f64;
        let var = (sq_sums[idx] / n_samples as f64 - mean * mean).max(0.0);
        let stderr = (var / n_samples as f64).sqrt();
        let exact = rat_to_f64(monomial_sphere_integral(Exponents(*e)).coefficient());
        let dev = (mean - exact).abs();
        assert!(
            dev <= 4.0 * stderr + 1e-12,
            "moment of x^{e:?}: exact {exact:.3e} vs MC {mean:.3e} (dev {dev:.3e}, 4σ = {:.3e})",
            4.0 * stderr
        );
    }
}

/// Closed-form roots of the depressed cubic `μ³ + pμ + q` in the
/// all-real-roots regime, by the trigonometric method.
fn cubic_roots(p: f64, q: f64) -> [f64; 3] {
    assert!(p < 0.0, "trigonometric form needs p < 0");
    let amp = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
    let theta = arg.acos();
    let mut roots = [0.0f64; 3];
    for (k, r) in roots.iter_mut().enumerate() {
        *r = amp * (theta / 3.0 - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos();
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// The degree-2 block spectrum has exactly three eigenvalues, each of
/// multiplicity six, equal to the roots of `μ³ - 4Σbⱼ² μ + 16 b₁b₂b₃`
/// (b = 1/a) solved here in closed form — a float oracle for the whole
/// assembly/Cholesky/eigensolver pipeline at arbitrary anisotropy.
#[test]
fn degree_two_spectrum_matches_trigonometric_cubic() {
    let triples = [
        [rat(3, 2), rat(1, 2), int(2)],
        [rat(5, 4), rat(7, 8), rat(6, 5)],
        [int(1), rat(1, 2), rat(3, 4)],
    ];
    for a in triples {
        let params = BergerParams::from_triple(a.clone()).unwrap();
        let b: Vec<f64> = (1..=3).map(|j| rat_to_f64(&params.inv_a(j))).collect();
        let p = -4.0 * (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
        let q = 16.0 * b[0] * b[1] * b[2];
        let expected = cubic_roots(p, q);

        let block = assemble_block(&params, 2).unwrap();
        let spectrum = block_spectrum(&block, 1e-8).unwrap();
        let entries = spectrum.entries();
        assert_eq!(entries.len(), 3, "three clusters at a = {a:?}");
        for (entry, want) in entries.iter().zip(&expected) {
            assert!(
                (entry.eigenvalue - want).abs() < 1e-9,
                "eigenvalue {} vs cubic root {want} at a = {a:?}",
                entry.eigenvalue
            );
            assert_eq!(entry.multiplicity, 6, "multiplicity at a = {a:?}");
        }
    }
}
