//! Seeded randomized property checks runnable from the command line.

use anyhow::{bail, Result};
use nilsampler_core::dd::Dd;
use nilsampler_core::hardy::{HardyExpr, Precision};
use nilsampler_core::nilgroup::{
    one_parameter_curve, reduce_mod_lattice, upper_len, GroupElement, LatticeElement,
};
use nilsampler_core::scalar::Scalar;

/// Small deterministic PRNG (xorshift*), so the self test needs no
/// dependencies and honors --seed.
struct Rng(u64);

impl Rng {
    fn new(seed: u64) -> Self {
        Rng(seed.wrapping_mul(0x9E3779B97F4A7C15) | 1)
    }

    fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + u * (hi - lo)
    }

    fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.next_u64() % (hi - lo + 1)
    }
}

pub fn run(seed: u64) -> Result<()> {
    let mut rng = Rng::new(seed ^ 0xABCDEF);
    let mut failures = 0usize;

    // exp/log round trips on random unitriangular elements
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let dim = rng.range(2, 4) as usize;
        let entries: Vec<f64> = (0..upper_len(dim)).map(|_| rng.uniform(-4.0, 4.0)).collect();
        let g = GroupElement::from_f64_entries(dim, &entries);
        let back = g.log_nilpotent().exp_nilpotent();
        worst = worst.max(back.distance(&g));
    }
    report("exp/log round trip < 2^-80", worst < 8.3e-25, &mut failures);

    // reduction is a coset map
    let mut ok = true;
    for _ in 0..200 {
        let dim = rng.range(2, 4) as usize;
        let entries: Vec<f64> = (0..upper_len(dim)).map(|_| rng.uniform(-20.0, 20.0)).collect();
        let g = GroupElement::from_f64_entries(dim, &entries);
        let mut gamma = LatticeElement::identity(dim);
        for k in 1..dim {
            for i in 0..dim - k {
                gamma = gamma
                    .mul(&LatticeElement::elementary(
                        dim,
                        i,
                        i + k,
                        rng.range(0, 8) as i128 - 4,
                    ))
                    .unwrap();
            }
        }
        let (c1, _) = reduce_mod_lattice(&g).unwrap();
        let (c2, _) = reduce_mod_lattice(&g.mul(&gamma.to_group()).unwrap()).unwrap();
        for (a, b) in c1.coords.iter().zip(&c2.coords) {
            let d = (a - b).abs();
            if d > 1e-9 && (1.0 - d) > 1e-9 {
                ok = false;
            }
        }
    }
    report("fundamental-domain reduction is coset-invariant", ok, &mut failures);

    // one-parameter curves are homomorphisms
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let dim = rng.range(2, 4) as usize;
        let entries: Vec<f64> = (0..upper_len(dim)).map(|_| rng.uniform(-2.0, 2.0)).collect();
        let a = GroupElement::from_f64_entries(dim, &entries);
        let c = one_parameter_curve(&a);
        let s = rng.uniform(-2.0, 2.0);
        let u = rng.uniform(-2.0, 2.0);
        let lhs = c.eval(Dd::from_f64(s + u));
        let rhs = c.eval(Dd::from_f64(s)).mul(&c.eval(Dd::from_f64(u))).unwrap();
        worst = worst.max(lhs.distance(&rhs));
    }
    report("one-parameter curves are homomorphisms", worst < 1e-20, &mut failures);

    // symbolic round trip: d/dt then zero-constant antiderivative
    let mut ok = true;
    for _ in 0..200 {
        let mut f = HardyExpr::zero();
        for _ in 0..rng.range(1, 3) {
            let c = Scalar::from_f64(rng.uniform(-3.0, 3.0));
            let a = Scalar::from_ratio(rng.range(0, 10) as i64 - 3, rng.range(1, 3) as i64);
            let b = rng.range(0, 2) as i32;
            f = f.add(&HardyExpr::monomial(c, a, b));
        }
        if let Some(big) = f.integrate() {
            if !big.differentiate().sub(&f).is_zero() {
                ok = false;
            }
        }
        if !f.is_zero() {
            let x = rng.uniform(2.0, 1e6);
            let hi = f.evaluate(x, Precision::Extended).unwrap();
            let lo = f.evaluate(x, Precision::Standard).unwrap();
            if (hi - lo).abs() > 1e-6 * (1.0 + hi.abs()) {
                ok = false;
            }
        }
    }
    report("symbolic calculus round trips", ok, &mut failures);

    if failures > 0 {
        bail!("{failures} self-test group(s) failed");
    }
    println!("selftest: all groups passed (seed {seed})");
    Ok(())
}

fn report(name: &str, ok: bool, failures: &mut usize) {
    if ok {
        println!("selftest: {name}: pass");
    } else {
        println!("selftest: {name}: FAIL");
        *failures += 1;
    }
}
