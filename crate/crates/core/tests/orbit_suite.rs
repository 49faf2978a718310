//! Orbit engine oracles: compiled-versus-direct agreement on random specs,
//! exact big-integer reduction oracles for polynomial scalars, an
//! arbitrary-precision replay of the reduction at coordinate magnitudes up
//! to 1e18, bitwise determinism, and the progression partition.

use astro_float::{BigFloat, Consts, RoundingMode};
use nilsampler_core::hardy::{parse_expr, HardyExpr};
use nilsampler_core::nilgroup::{upper_len, GroupElement};
use nilsampler_core::normal_form::WScheme;
use nilsampler_core::orbit::*;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn p(s: &str) -> HardyExpr {
    parse_expr(s).unwrap()
}

fn random_element(rng: &mut StdRng, dim: usize, scale: f64) -> GroupElement {
    let entries: Vec<f64> = (0..upper_len(dim))
        .map(|_| rng.random_range(-scale..scale))
        .collect();
    GroupElement::from_f64_entries(dim, &entries)
}

#[test]
fn compiled_matches_direct_on_random_specs() {
    let mut rng = StdRng::seed_from_u64(0x0B17);
    // Exponents stay at degree <= 2 so that even the dim-4 top corner
    // (degree 3 in the scalars) respects the magnitude budget.
    let exponents = ["t^{3/2}", "t^2", "t*log(t)", "t^{1/2}", "t"];
    for _ in 0..50 {
        let dim = rng.random_range(2..=4);
        // powers of a single random element always commute
        let a = random_element(&mut rng, dim, 2.0);
        let curve = nilsampler_core::nilgroup::one_parameter_curve(&a);
        let b = curve.eval(nilsampler_core::Dd::from_f64(rng.random_range(0.2..1.7)));
        let f1 = exponents[rng.random_range(0..exponents.len())];
        let mut f2 = exponents[rng.random_range(0..exponents.len())];
        while f2 == f1 {
            f2 = exponents[rng.random_range(0..exponents.len())];
        }
        let spec = OrbitSpec {
            dim,
            generators: vec![(a, p(f1)), (b, p(f2))],
            poly_parts: vec![],
            range: (2, 1000),
            progression: (1, 0),
            scheme: WScheme::Identity,
        };
        let co = compile(&spec).expect("powers of one element commute");
        for _ in 0..20 {
            let n = rng.random_range(2..=1000u64);
            let a = co.point(n).unwrap();
            let b = direct_point(&spec, n).unwrap();
            for (x, y) in a.coords.iter().zip(&b.coords) {
                let d = (x - y).abs();
                assert!(d < 1e-9 || (1.0 - d) < 1e-9, "dim={dim} n={n}: {x} vs {y}");
            }
        }
    }
}

fn frac_big(num: &BigInt, den: &BigInt) -> f64 {
    let m = ((num % den) + den) % den;
    m.to_f64().unwrap() / den.to_f64().unwrap()
}

/// Shear orbit H(1,1,0)^n: z before reduction is (n^2 - n)/2, around 5e11
/// at n = 1e6. Replayed exactly in BigInt including the reduction sweep's
/// z-correction `z - floor(y) * frac(x)` (here frac(x) = 0).
#[test]
fn big_integer_oracle_for_shear_orbit() {
    let spec = OrbitSpec {
        dim: 3,
        generators: vec![(GroupElement::heisenberg(1.0, 1.0, 0.0), p("t"))],
        poly_parts: vec![],
        range: (2, 1_000_000),
        progression: (1, 0),
        scheme: WScheme::Identity,
    };
    let co = compile(&spec).unwrap();
    for &n in &[
        2u64, 999, 5_000, 77_777, 250_000, 500_001, 750_000, 999_999, 1_000_000, 123_456,
    ] {
        let pt = co.point(n).unwrap();
        let s = BigInt::from(n);
        let z = (&s * &s - &s) / BigInt::from(2); // exact integer
        assert!(z.is_positive() || z.is_zero());
        // all three coordinates are integers here, so they reduce to 0
        for c in &pt.coords {
            assert!(c.abs() < 1e-9, "n={n}: {c}");
        }
        let _ = frac_big(&z, &BigInt::from(1));
    }
}

/// Fractional generator H(1, 1/2, 0) with f = t: coordinates are exact
/// dyadic rationals; the compiled z-polynomial is replayed in BigInt and
/// the sweep correction applied exactly.
#[test]
fn big_rational_oracle_with_fractional_coordinates() {
    let spec = OrbitSpec {
        dim: 3,
        generators: vec![(GroupElement::heisenberg(1.0, 0.5, 0.0), p("t"))],
        poly_parts: vec![],
        range: (2, 1_000_000),
        progression: (1, 0),
        scheme: WScheme::Identity,
    };
    let co = compile(&spec).unwrap();
    let zpoly = &co.coord_polys()[2];
    let denom = BigInt::from(1u64 << 20);
    let coeffs: Vec<(u8, BigInt)> = zpoly
        .terms()
        .map(|(exps, c)| {
            let scaled = c.to_f64() * (1u64 << 20) as f64;
            assert!(
                (scaled - scaled.round()).abs() < 1e-6,
                "coefficient not dyadic: {}",
                c.to_f64()
            );
            (exps[0], BigInt::from(scaled.round() as i64))
        })
        .collect();
    for &n in &[2u64, 999, 5_000, 77_777, 250_000, 999_999, 1_000_000] {
        let s = BigInt::from(n);
        let mut z_num = BigInt::zero();
        for (e, c) in &coeffs {
            z_num += c * s.pow(*e as u32);
        }
        // x = frac(n) = 0, y raw = n/2: floor(y) = n div 2; correction
        // floor(y)*frac(x) = 0. z reduces to frac(z_num / 2^20).
        let z_exact = frac_big(&z_num, &denom);
        let y_exact = frac_big(&s, &BigInt::from(2));
        let pt = co.point(n).unwrap();
        assert!((pt.coords[1] - y_exact).abs() < 1e-9, "y at n={n}");
        let dz = (pt.coords[2] - z_exact).abs();
        assert!(
            dz < 1e-9 || (1.0 - dz) < 1e-9,
            "z at n={n}: {} vs {z_exact}",
            pt.coords[2]
        );
    }
}

const PREC: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

fn bf(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

fn bf_to_f64(b: &BigFloat) -> f64 {
    format!("{}", b).parse().unwrap()
}

fn bf_frac(x: &BigFloat) -> BigFloat {
    // remainder mod 1, shifted into [0, 1)
    let mut f = x.rem(&bf(1.0));
    if f.is_negative() {
        f = f.add(&bf(1.0), PREC, RM);
    }
    f
}

fn bf_floor(x: &BigFloat) -> BigFloat {
    x.sub(&bf_frac(x), PREC, RM)
}

/// Arbitrary-precision replay of the full pipeline for H(1,1,0) with
/// f = t^{3/2}: the raw z = (f^2 - f)/2 is t^3-type and reaches 5e17 at
/// n = 1e6, and the reduced coordinates must still agree to 1e-9.
#[test]
fn precision_at_magnitude_1e18() {
    let mut cc = Consts::new().unwrap();
    let spec = OrbitSpec {
        dim: 3,
        generators: vec![(GroupElement::heisenberg(1.0, 1.0, 0.0), p("t^{3/2}"))],
        poly_parts: vec![],
        range: (2, 1_000_000),
        progression: (1, 0),
        scheme: WScheme::Identity,
    };
    let co = compile(&spec).unwrap();
    let half = bf(0.5);
    for &n in &[
        2u64, 1_000, 31_623, 100_000, 316_227, 500_000, 750_000, 900_000, 999_999, 1_000_000,
    ] {
        let pt = co.point(n).unwrap();
        // f = n^{3/2} in 320-bit precision
        let f = bf(n as f64)
            .ln(PREC, RM, &mut cc)
            .mul(&bf(1.5), PREC, RM)
            .exp(PREC, RM, &mut cc);
        // raw coordinates (f, f, (f^2 - f)/2); reduction sweep:
        // x -> frac(f); y -> frac(f) with my = floor(f) subtracted, and the
        // elementary at (1,2) changes z by -my * x_reduced; then z -> frac.
        let x_red = bf_frac(&f);
        let my = bf_floor(&f);
        let z_raw = f
            .mul(&f, PREC, RM)
            .sub(&f, PREC, RM)
            .mul(&half, PREC, RM);
        let z_shift = z_raw.sub(&my.mul(&x_red, PREC, RM), PREC, RM);
        let z_red = bf_frac(&z_shift);
        let xe = bf_to_f64(&x_red);
        let ze = bf_to_f64(&z_red);
        let dx = (pt.coords[0] - xe).abs();
        let dz = (pt.coords[2] - ze).abs();
        assert!(dx < 1e-9 || (1.0 - dx) < 1e-9, "x at n={n}: {} vs {xe}", pt.coords[0]);
        assert!(dz < 1e-9 || (1.0 - dz) < 1e-9, "z at n={n}: {} vs {ze}", pt.coords[2]);
    }
}

#[test]
fn generate_streams_are_bit_identical() {
    let spec = OrbitSpec {
        dim: 3,
        generators: vec![(
            GroupElement::heisenberg(1.0, core::f64::consts::SQRT_2, 0.0),
            p("t^{3/2}"),
        )],
        poly_parts: vec![],
        range: (2, 50_000),
        progression: (1, 0),
        scheme: WScheme::Log,
    };
    let co = compile(&spec).unwrap();
    let mut run = || {
        let mut all: Vec<u64> = Vec::new();
        generate(&co, spec.range, spec.progression, DEFAULT_MAX_N, |pts| {
            for p in pts {
                for c in &p.coords {
                    all.push(c.to_bits());
                }
                all.push(p.weight.to_bits());
            }
        })
        .unwrap();
        all
    };
    assert_eq!(run(), run());
}

#[test]
fn progression_classes_partition_the_range() {
    let spec = OrbitSpec {
        dim: 2,
        generators: vec![(
            GroupElement::from_f64_entries(2, &[0.7548776662466927]),
            p("t"),
        )],
        poly_parts: vec![],
        range: (2, 5000),
        progression: (1, 0),
        scheme: WScheme::Identity,
    };
    let co = compile(&spec).unwrap();
    let mut full: Vec<u64> = Vec::new();
    generate(&co, spec.range, (1, 0), DEFAULT_MAX_N, |pts| {
        full.extend(pts.iter().map(|p| p.n))
    })
    .unwrap();
    let q = 4u64;
    let mut split: Vec<u64> = Vec::new();
    for r in 0..q {
        generate(&co, spec.range, (q, r), DEFAULT_MAX_N, |pts| {
            split.extend(pts.iter().map(|p| p.n))
        })
        .unwrap();
    }
    split.sort_unstable();
    assert_eq!(full, split);
}

#[test]
fn range_errors() {
    let spec = OrbitSpec {
        dim: 2,
        generators: vec![(GroupElement::from_f64_entries(2, &[0.5]), p("t"))],
        poly_parts: vec![],
        range: (2, 10),
        progression: (1, 0),
        scheme: WScheme::Identity,
    };
    let co = compile(&spec).unwrap();
    assert!(matches!(
        generate(&co, (1, 10), (1, 0), DEFAULT_MAX_N, |_| {}),
        Err(OrbitError::RangeError(_))
    ));
    assert!(matches!(
        generate(&co, (2, DEFAULT_MAX_N + 1), (1, 0), DEFAULT_MAX_N, |_| {}),
        Err(OrbitError::RangeError(_))
    ));
    // loglog scheme needs n >= 3
    assert!(matches!(
        check_range((2, 10), &WScheme::LogLog, DEFAULT_MAX_N),
        Err(OrbitError::RangeError(_))
    ));
}

#[test]
fn budget_violation_is_loud() {
    // dim-4 top corner is cubic in the scalar: t^{5/2} blows past 1e20
    // well inside the range.
    let a = GroupElement::from_f64_entries(4, &[1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
    let spec = OrbitSpec {
        dim: 4,
        generators: vec![(a, p("t^{5/2}"))],
        poly_parts: vec![],
        range: (2, DEFAULT_MAX_N),
        progression: (1, 0),
        scheme: WScheme::Identity,
    };
    let co = compile(&spec).unwrap();
    assert!(matches!(
        co.point(500_000),
        Err(OrbitError::NumericBudget(_))
    ));
}
