//! Oracle and property tests for the symbolic layer: extended-precision
//! evaluation against an arbitrary-precision reference, the total-preorder
//! structure of growth comparison, differentiation linearity, the
//! degree characterization, and the two-sided derivative growth bounds.

use astro_float::{BigFloat, Consts, RoundingMode};
use nilsampler_core::hardy::{parse_expr, GrowthRelation, HardyExpr, Precision};
use nilsampler_core::scalar::Scalar;
use nilsampler_core::Dd;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const PREC: usize = 320;
const RM: RoundingMode = RoundingMode::ToEven;

fn big_from_f64(x: f64) -> BigFloat {
    BigFloat::from_f64(x, PREC)
}

fn big_from_dd(x: Dd) -> BigFloat {
    big_from_f64(x.hi).add(&big_from_f64(x.lo), PREC, RM)
}

/// Term-by-term arbitrary-precision evaluation of an expression.
fn oracle_eval(f: &HardyExpr, t: f64, cc: &mut Consts) -> BigFloat {
    let tb = big_from_f64(t);
    let ln_t = tb.ln(PREC, RM, cc);
    let mut acc = BigFloat::from_f64(0.0, PREC);
    for term in f.terms() {
        let alpha = big_from_dd(term.alpha.to_dd());
        let coeff = big_from_dd(term.coeff.to_dd());
        // t^alpha = exp(alpha ln t)
        let mut v = alpha.mul(&ln_t, PREC, RM).exp(PREC, RM, cc).mul(&coeff, PREC, RM);
        let b = term.beta;
        if b != 0 {
            let lp = ln_t.powi(b.unsigned_abs() as usize, PREC, RM);
            v = if b > 0 {
                v.mul(&lp, PREC, RM)
            } else {
                v.div(&lp, PREC, RM)
            };
        }
        acc = acc.add(&v, PREC, RM);
    }
    acc
}

fn to_f64(b: &BigFloat) -> f64 {
    // astro-float has no direct to-f64; round-trip through formatted parse
    // would lose bits, so extract via two subtractions.
    let hi: f64 = format!("{}", b.clone()).parse().unwrap_or(f64::NAN);
    hi
}

fn rel_err_bits(value: Dd, oracle: &BigFloat) -> f64 {
    let v = big_from_dd(value);
    let diff = v.sub(oracle, PREC, RM).abs();
    let denom = oracle.clone().abs();
    if denom.is_zero() {
        return if diff.is_zero() { f64::INFINITY } else { 0.0 };
    }
    let ratio = diff.div(&denom, PREC, RM);
    let r = to_f64(&ratio);
    if r == 0.0 {
        f64::INFINITY
    } else {
        -r.log2()
    }
}

fn random_expr(rng: &mut StdRng) -> HardyExpr {
    let nterms = rng.random_range(1..=4);
    let mut acc = HardyExpr::zero();
    for _ in 0..nterms {
        let coeff = if rng.random_bool(0.5) {
            Scalar::from_ratio(rng.random_range(-9i64..=9).max(1), rng.random_range(1..=4))
        } else {
            Scalar::from_f64(rng.random_range(-3.0..3.0))
        };
        if coeff.is_zero() {
            continue;
        }
        let alpha = if rng.random_bool(0.6) {
            Scalar::from_ratio(rng.random_range(-4i64..=7), rng.random_range(1..=4))
        } else {
            Scalar::from_f64(rng.random_range(-2.0..3.5))
        };
        let beta = rng.random_range(0..=2);
        acc = acc.add(&HardyExpr::monomial(coeff, alpha, beta));
    }
    acc
}

#[test]
fn extended_evaluation_matches_arbitrary_precision() {
    let mut cc = Consts::new().unwrap();
    let mut rng = StdRng::seed_from_u64(0x48415244);
    let mut checked = 0;
    while checked < 100 {
        let f = random_expr(&mut rng);
        if f.is_zero() {
            continue;
        }
        let t = rng.random_range(2.0..1.0e7);
        let value = f.evaluate_dd(Dd::from_f64(t)).unwrap();
        let oracle = oracle_eval(&f, t, &mut cc);
        if to_f64(&oracle.clone().abs()) < 1e-280 {
            continue; // fully cancelled value, relative error meaningless
        }
        let bits = rel_err_bits(value, &oracle);
        assert!(bits >= 90.0, "only {bits:.1} correct bits for {f} at t={t}");
        checked += 1;
    }
}

#[test]
fn extended_evaluation_hits_exact_power() {
    // f = t^{3/2} at t = 10^6 is exactly 10^9.
    let f = parse_expr("t^{3/2}").unwrap();
    let v = f.evaluate_dd(Dd::from_f64(1.0e6)).unwrap();
    let err = ((v - Dd::from_f64(1.0e9)) / Dd::from_f64(1.0e9)).abs().to_f64();
    assert!(err <= 7.9e-31, "relative error {err:e}"); // 2^-100
    // Standard precision is good to ~1e-15 only.
    let s = f.evaluate(1.0e6, Precision::Standard).unwrap();
    assert!((s - 1.0e9).abs() / 1.0e9 < 1e-12);
}

/// Two-sided derivative growth: c f(t)/(t log^2 t) <= |f'(t)| <= C f(t)/t
/// sampled over [1e3, 1e9]. (The strict one-sided forms fail already for
/// f = t^{3/2}, whose f'/(f/t) is the constant 3/2.)
#[test]
fn derivative_growth_two_sided_bounds() {
    let corpus = [
        "t^{3/2}",
        "t^2",
        "t*log(t)",
        "log(t)",
        "t^{5/2} + t",
        "t^{1/2}*log(t)",
        "t^3*log(t)^2",
    ];
    for s in corpus {
        let f = parse_expr(s).unwrap();
        let fp = f.differentiate();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for &t in &[1.0e3, 3.16e4, 1.0e6, 3.16e7, 1.0e9] {
            let fv = f.evaluate(t, Precision::Extended).unwrap().abs();
            let dv = fp.evaluate(t, Precision::Extended).unwrap().abs();
            let lt = t.ln();
            lo = lo.min(dv / (fv / (t * lt * lt)));
            hi = hi.max(dv / (fv / t));
        }
        assert!(lo > 1e-3, "{s}: lower ratio {lo}");
        assert!(hi < 1e3, "{s}: upper ratio {hi}");
        assert!(lo > 0.0 && hi.is_finite());
    }
}

#[test]
fn degree_characterizes_growth() {
    let mut rng = StdRng::seed_from_u64(0xDE6);
    let mut done = 0;
    while done < 50 {
        let f = random_expr(&mut rng);
        if f.is_zero() || f.is_bounded() {
            continue;
        }
        let d = f.degree();
        let td = HardyExpr::t_pow(Scalar::from_int(d as i64));
        // f <<= t^d
        assert!(matches!(
            f.compare(&td).unwrap(),
            GrowthRelation::StrictlySlower | GrowthRelation::SameOrder(_) | GrowthRelation::Equal
        ));
        if d >= 1 {
            let tdm = HardyExpr::t_pow(Scalar::from_int(d as i64 - 1));
            assert!(
                matches!(f.compare(&tdm).unwrap(), GrowthRelation::StrictlyFaster),
                "{f} vs t^{}",
                d - 1
            );
        }
        done += 1;
    }
}

fn relation_class(r: GrowthRelation) -> i8 {
    match r {
        GrowthRelation::StrictlySlower => -1,
        GrowthRelation::StrictlyFaster => 1,
        _ => 0,
    }
}

#[test]
fn compare_is_a_total_preorder() {
    let mut rng = StdRng::seed_from_u64(0x9E0);
    let exprs: Vec<HardyExpr> = core::iter::from_fn(|| Some(random_expr(&mut rng)))
        .filter(|f| !f.is_zero())
        .take(50)
        .collect();
    for a in &exprs {
        for b in &exprs {
            let ab = relation_class(a.compare(b).unwrap());
            let ba = relation_class(b.compare(a).unwrap());
            assert_eq!(ab, -ba, "antisymmetry: {a} vs {b}");
            for c in &exprs {
                let bc = relation_class(b.compare(c).unwrap());
                let ac = relation_class(a.compare(c).unwrap());
                if ab < 0 && bc < 0 {
                    assert!(ac < 0, "transitivity: {a}, {b}, {c}");
                }
                if ab == 0 && bc == 0 {
                    assert_eq!(ac, 0, "same-order transitivity: {a}, {b}, {c}");
                }
            }
        }
    }
}

fn arb_scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![
        (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Scalar::from_ratio(n, d)),
        (-3.0f64..3.0).prop_map(Scalar::from_f64),
    ]
}

fn arb_expr() -> impl Strategy<Value = HardyExpr> {
    proptest::collection::vec((arb_scalar(), -4i64..=7, 0i32..=2), 0..4).prop_map(|terms| {
        let mut acc = HardyExpr::zero();
        for (c, a2, b) in terms {
            acc = acc.add(&HardyExpr::monomial(c, Scalar::from_ratio(a2, 2), b));
        }
        acc
    })
}

proptest! {
    #[test]
    fn differentiation_is_linear(f in arb_expr(), g in arb_expr()) {
        let left = f.add(&g).differentiate();
        let right = f.differentiate().add(&g.differentiate());
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn add_keeps_normal_form(f in arb_expr(), g in arb_expr()) {
        let s = f.add(&g);
        // strictly decreasing growth keys, nonzero coefficients
        for w in s.terms().windows(2) {
            let cmp = (w[0].alpha.cmp_scalar(w[1].alpha), w[0].beta.cmp(&w[1].beta));
            prop_assert!(
                cmp.0 == core::cmp::Ordering::Greater
                    || (cmp.0 == core::cmp::Ordering::Equal && cmp.1 == core::cmp::Ordering::Greater)
            );
        }
        for t in s.terms() {
            prop_assert!(!t.coeff.is_zero());
        }
    }

    #[test]
    fn differentiate_after_integrate_is_identity(f in arb_expr()) {
        if let Some(big) = f.integrate() {
            let back = big.differentiate();
            prop_assert!(back.sub(&f).is_zero(), "{} != {}", back, f);
        }
    }
}
