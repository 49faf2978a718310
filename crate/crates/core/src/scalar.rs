//! Real scalars that stay exact as long as they stay rational.
//!
//! Exponents and coefficients constructed from integer or rational literals
//! are kept as `Ratio<i64>` and only fall back to double-double reals when
//! an operation overflows or an irrational value enters. This is what makes
//! symbolic cancellation (`t^{3/2} - t^{3/2}`) and growth comparison exact
//! for the inputs that matter, while still admitting entries like sqrt(2).

use crate::dd::Dd;
use core::cmp::Ordering;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

/// Relative tolerance below which an inexact sum is treated as exact zero.
pub const CANCEL_EPS: f64 = 8.077935669463161e-28; // 2^-90

#[derive(Clone, Copy, Debug)]
pub enum Scalar {
    /// Exact rational value.
    Rat(Ratio<i64>),
    /// Inexact real, double-double.
    Real(Dd),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(Ratio::zero())
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::Rat(Ratio::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::Rat(Ratio::new(num, den))
    }

    pub fn from_f64(x: f64) -> Self {
        Scalar::Real(Dd::from_f64(x))
    }

    pub fn from_dd(x: Dd) -> Self {
        Scalar::Real(x)
    }

    pub fn to_dd(self) -> Dd {
        match self {
            Scalar::Rat(r) => Dd::from_i64(*r.numer()) / Dd::from_i64(*r.denom()),
            Scalar::Real(d) => d,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Scalar::Rat(r) => *r.numer() as f64 / *r.denom() as f64,
            Scalar::Real(d) => d.to_f64(),
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Real(d) => d.is_zero(),
        }
    }

    pub fn is_negative(self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Real(d) => d.is_negative(),
        }
    }

    /// Exact integer value if this scalar is one.
    pub fn as_integer(self) -> Option<i64> {
        match self {
            Scalar::Rat(r) if r.is_integer() => Some(r.to_integer()),
            Scalar::Rat(_) => None,
            Scalar::Real(d) => {
                let f = d.floor();
                if (d - f).is_zero() && libm::fabs(f.hi) < 9.0e15 {
                    Some(f.to_f64() as i64)
                } else {
                    None
                }
            }
        }
    }

    pub fn neg(self) -> Self {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Real(d) => Scalar::Real(-d),
        }
    }

    pub fn add(self, other: Scalar) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => match checked_add(a, b) {
                Some(r) => Scalar::Rat(r),
                None => Scalar::Real(self.to_dd() + other.to_dd()),
            },
            _ => {
                let s = self.to_dd() + other.to_dd();
                // Inexact near-cancellation is rounded to exact zero so that
                // growth comparisons are not flipped by residual noise.
                let scale = libm::fabs(self.to_f64()).max(libm::fabs(other.to_f64()));
                if libm::fabs(s.to_f64()) <= CANCEL_EPS * scale {
                    Scalar::zero()
                } else {
                    Scalar::Real(s)
                }
            }
        }
    }

    pub fn sub(self, other: Scalar) -> Self {
        self.add(other.neg())
    }

    pub fn mul(self, other: Scalar) -> Self {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => match checked_mul(a, b) {
                Some(r) => Scalar::Rat(r),
                None => Scalar::Real(self.to_dd() * other.to_dd()),
            },
            _ => Scalar::Real(self.to_dd() * other.to_dd()),
        }
    }

    pub fn div(self, other: Scalar) -> Self {
        debug_assert!(!other.is_zero());
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => {
                match checked_mul(a, Ratio::new(*b.denom(), *b.numer())) {
                    Some(r) => Scalar::Rat(r),
                    None => Scalar::Real(self.to_dd() / other.to_dd()),
                }
            }
            _ => Scalar::Real(self.to_dd() / other.to_dd()),
        }
    }

    /// Total order; exact when both sides are rational.
    pub fn cmp_scalar(self, other: Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(&b),
            _ => self.to_dd().cmp_dd(other.to_dd()),
        }
    }

    /// Equality for structural purposes (term keys, ratio-1 tests).
    pub fn eq_scalar(self, other: Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            _ => {
                let d = (self.to_dd() - other.to_dd()).abs().to_f64();
                let scale = libm::fabs(self.to_f64())
                    .max(libm::fabs(other.to_f64()))
                    .max(1.0);
                d <= CANCEL_EPS * scale
            }
        }
    }
}

fn checked_add(a: Ratio<i64>, b: Ratio<i64>) -> Option<Ratio<i64>> {
    a.checked_add(&b)
}

fn checked_mul(a: Ratio<i64>, b: Ratio<i64>) -> Option<Ratio<i64>> {
    a.checked_mul(&b)
}

// Keep CheckedSub in scope for Ratio (used by callers via sub/neg).
#[allow(dead_code)]
fn checked_sub(a: Ratio<i64>, b: Ratio<i64>) -> Option<Ratio<i64>> {
    a.checked_sub(&b)
}
