//! Double-double ("value + compensation limb") arithmetic.
//!
//! A [`Dd`] stores an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand. All kernels are the classical
//! error-free transformations (Knuth two-sum, Dekker split product), so the
//! results are bit-identical across platforms; no FMA contraction is used.
//!
//! The transcendental kernels (`exp`, `ln`, `pow`, `sqrt`) follow the QD
//! library recipes: argument reduction plus a short Taylor tail for `exp`,
//! and Newton refinement of the `f64` seed for `ln` and `sqrt`. Accuracy is
//! a few ulps at 2^-106, which leaves comfortable room for the 2^-100
//! budgets used by the callers.

use core::cmp::Ordering;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Double-double number: `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

/// ln(2) to double-double precision.
pub const LN2: Dd = Dd {
    hi: 6.931471805599453e-01,
    lo: 2.3190468138462996e-17,
};

/// 2*pi to double-double precision.
pub const TWO_PI: Dd = Dd {
    hi: 6.283185307179586e+00,
    lo: 2.4492935982947064e-16,
};

/// 1/k! for k = 3..=17, double-double.
const INV_FACT: [Dd; 15] = [
    Dd { hi: 1.66666666666666657e-01, lo: 9.25185853854297066e-18 },
    Dd { hi: 4.16666666666666644e-02, lo: 2.31296463463574266e-18 },
    Dd { hi: 8.33333333333333322e-03, lo: 1.15648231731787138e-19 },
    Dd { hi: 1.38888888888888894e-03, lo: -5.30054395437357706e-20 },
    Dd { hi: 1.98412698412698413e-04, lo: 1.72095582934207053e-22 },
    Dd { hi: 2.48015873015873016e-05, lo: 2.15119478667758816e-23 },
    Dd { hi: 2.75573192239858925e-06, lo: -1.85839327404647208e-22 },
    Dd { hi: 2.75573192239858883e-07, lo: 2.37677146222502973e-23 },
    Dd { hi: 2.50521083854417202e-08, lo: -1.44881407093591197e-24 },
    Dd { hi: 2.08767569878681002e-09, lo: -1.20734505911325997e-25 },
    Dd { hi: 1.60590438368216133e-10, lo: 1.25852945887520981e-26 },
    Dd { hi: 1.14707455977297245e-11, lo: 2.06555127528307454e-28 },
    Dd { hi: 7.64716373181981641e-13, lo: 7.03872877733453001e-30 },
    Dd { hi: 4.77947733238738525e-14, lo: 4.39920548583408126e-31 },
    Dd { hi: 2.81145725434552060e-15, lo: 1.65088427308614326e-31 },
];

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    // Dekker split at 27 bits; the scaling guards against overflow.
    const SPLITTER: f64 = 134217729.0; // 2^27 + 1
    const THRESH: f64 = 6.69692879491417e+299;
    if a > THRESH || a < -THRESH {
        let a2 = a * 3.7252902984619140625e-09; // 2^-28
        let t = SPLITTER * a2;
        let hi = t - (t - a2);
        let lo = a2 - hi;
        (hi * 268435456.0, lo * 268435456.0) // 2^28
    } else {
        let t = SPLITTER * a;
        let hi = t - (t - a);
        (hi, a - hi)
    }
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ahi, alo) = split(a);
    let (bhi, blo) = split(b);
    let e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
    (p, e)
}

impl Dd {
    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion; every i64 is representable as hi + lo.
    #[inline]
    pub fn from_i64(x: i64) -> Self {
        let hi = x as f64;
        let lo = (x - hi as i64) as f64;
        let (s, e) = quick_two_sum(hi, lo);
        Dd::new(s, e)
    }

    pub fn from_i128(x: i128) -> Self {
        let hi = x as f64;
        let rem = x - hi as i128;
        let lo = rem as f64;
        let (s, e) = two_sum(hi, lo);
        Dd::new(s, e)
    }

    /// Correctly-rounded-to-dd quotient of two integers.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Dd::from_i64(num) / Dd::from_i64(den)
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    #[inline]
    pub fn is_negative(self) -> bool {
        self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, b);
        let (r, e) = quick_two_sum(s1, s2 + self.lo);
        Dd::new(r, e)
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, b);
        let (r, e) = quick_two_sum(p1, p2 + self.lo * b);
        Dd::new(r, e)
    }

    /// Multiply by an exact power of two.
    #[inline]
    pub fn mul_pwr2(self, b: f64) -> Self {
        Dd::new(self.hi * b, self.lo * b)
    }

    pub fn recip(self) -> Self {
        ONE / self
    }

    /// Largest integer not exceeding the value, exact.
    pub fn floor(self) -> Self {
        let fhi = libm::floor(self.hi);
        if fhi == self.hi {
            // hi is integral; the fractional information sits in lo.
            let flo = libm::floor(self.lo);
            let (s, e) = quick_two_sum(fhi, flo);
            Dd::new(s, e)
        } else {
            Dd::new(fhi, 0.0)
        }
    }

    /// Fractional part in [0, 1).
    pub fn fract(self) -> Self {
        let f = self - self.floor();
        // Guard against rounding producing exactly 1.0.
        if f.hi >= 1.0 {
            f - ONE
        } else if f.is_negative() {
            f + ONE
        } else {
            f
        }
    }

    pub fn round(self) -> Self {
        (self.add_f64(0.5)).floor()
    }

    pub fn sqr(self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, self.hi);
        p2 += 2.0 * self.hi * self.lo;
        p2 += self.lo * self.lo;
        let (r, e) = quick_two_sum(p1, p2);
        Dd::new(r, e)
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return ZERO;
        }
        debug_assert!(!self.is_negative());
        // One dd Newton step on the f64 seed: s' = (s + a/s)/2.
        let s0 = Dd::from_f64(libm::sqrt(self.hi));
        let s1 = (s0 + self / s0).mul_pwr2(0.5);
        (s1 + self / s1).mul_pwr2(0.5)
    }

    /// Integer power by binary exponentiation.
    pub fn powi(self, n: i64) -> Self {
        if n == 0 {
            return ONE;
        }
        let mut base = if n < 0 { self.recip() } else { self };
        let mut e = n.unsigned_abs();
        let mut acc = ONE;
        loop {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.sqr();
        }
        acc
    }

    /// exp with argument reduction `x = m ln2 + r`, `r` further scaled by
    /// 2^-9, a 10-term Taylor tail, and 9 re-squarings.
    pub fn exp(self) -> Self {
        const K: f64 = 512.0;
        const INV_K: f64 = 1.0 / 512.0;
        if self.hi <= -709.0 {
            return ZERO;
        }
        if self.hi >= 709.0 {
            return Dd::new(f64::INFINITY, 0.0);
        }
        if self.is_zero() {
            return ONE;
        }
        let m = libm::floor(self.hi / LN2.hi + 0.5);
        let r = (self - LN2.mul_f64(m)).mul_pwr2(INV_K);
        // Taylor series of exp(r) - 1; |r| <= ln(2)/1024 so it converges fast.
        let eps = 1.0e-35 * K;
        let mut sum = r + r.sqr().mul_pwr2(0.5);
        let mut power = r.sqr() * r;
        let mut i = 0usize;
        loop {
            let term = power * INV_FACT[i];
            sum = sum + term;
            if libm::fabs(term.hi) <= eps || i + 1 >= INV_FACT.len() {
                break;
            }
            power = power * r;
            i += 1;
        }
        let mut v = sum;
        // (1+v)^(2^9) - 1, keeping everything shifted by -1 for accuracy.
        for _ in 0..9 {
            v = v.mul_pwr2(2.0) + v.sqr();
        }
        let result = v + ONE;
        // Scale by 2^m.
        let scale = libm::exp2(m);
        Dd::new(result.hi * scale, result.lo * scale)
    }

    /// Natural logarithm by Newton refinement of the f64 seed.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let mut y = Dd::from_f64(libm::log(self.hi));
        // y <- y + x*exp(-y) - 1, each step doubles the correct bits.
        for _ in 0..2 {
            y = y + self * (-y).exp() - ONE;
        }
        y
    }

    /// Real power `self^a` for positive base.
    pub fn powf(self, a: Dd) -> Self {
        if a.is_zero() {
            return ONE;
        }
        debug_assert!(self.hi > 0.0);
        (a * self.ln()).exp()
    }

    pub fn cmp_dd(self, other: Dd) -> Ordering {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo).unwrap_or(Ordering::Equal),
            Some(o) => o,
            None => Ordering::Equal,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    #[inline]
    fn add(self, b: Dd) -> Dd {
        // Accurate (IEEE-style) dd + dd.
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (r1, mut r2) = quick_two_sum(s1, s2 + t1);
        r2 += t2;
        let (h, l) = quick_two_sum(r1, r2);
        Dd::new(h, l)
    }
}

impl Sub for Dd {
    type Output = Dd;
    #[inline]
    fn sub(self, b: Dd) -> Dd {
        self + (-b)
    }
}

impl Neg for Dd {
    type Output = Dd;
    #[inline]
    fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }
}

impl Mul for Dd {
    type Output = Dd;
    #[inline]
    fn mul(self, b: Dd) -> Dd {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (h, l) = quick_two_sum(p1, p2);
        Dd::new(h, l)
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, b: Dd) -> Dd {
        // Long division with three f64 quotient digits.
        let q1 = self.hi / b.hi;
        let mut r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::new(s, e).add_f64(q3)
    }
}

/// Neumaier compensated accumulator over f64.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Kahan::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Merge is exact over the (sum, c) pairs, so folding partial
    /// accumulators in a fixed order is deterministic.
    pub fn merge(&mut self, other: Kahan) {
        self.add(other.sum);
        self.add(other.c);
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}
