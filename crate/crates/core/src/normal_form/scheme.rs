//! Summation schemes `W` with weight `w(n) = W(n+1) - W(n)`.
//!
//! The catalogue holds the four shapes used by the scheme chooser:
//! `W(t) = t` (Cesàro), `W(t) = exp((log t)^gamma)` for `0 < gamma <= 1`,
//! `W(t) = log t`, and `W(t) = log log t`. `exp((log t)^1) = t`, so a
//! power-log scheme with `gamma = 1` normalizes to the identity shape on
//! construction (this also keeps the `w(n) -> 0` invariant meaningful for
//! every non-identity shape).
//!
//! `log W` is exposed as a comparable growth object so that the chooser and
//! the property checkers can decide `log W ≺ f` symbolically even though
//! fractional log powers and iterated logs live outside the term class.

use crate::dd::Dd;
use crate::hardy::HardyExpr;
use crate::scalar::Scalar;
use alloc::format;
use alloc::string::{String, ToString};
use core::cmp::Ordering;
use core::fmt;

/// A summation scheme from the catalogue.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WScheme {
    /// W(t) = t, w = 1: ordinary Cesàro averages.
    Identity,
    /// W(t) = exp((log t)^gamma), 0 < gamma < 1.
    PowerLog(f64),
    /// W(t) = log t: logarithmic averages.
    Log,
    /// W(t) = log log t: double-logarithmic averages.
    LogLog,
}

/// `log W(t)` as a growth-comparison object.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogWGrowth {
    /// (log t)^gamma with 0 < gamma <= 1.
    LogPower(f64),
    /// log log t.
    LogLog,
    /// log log log t.
    LogLogLog,
}

impl WScheme {
    /// Power-log scheme; `gamma = 1` collapses to the identity shape.
    pub fn power_log(gamma: f64) -> Result<WScheme, String> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(format!("powlog exponent must lie in (0, 1], got {gamma}"));
        }
        if gamma == 1.0 {
            Ok(WScheme::Identity)
        } else {
            Ok(WScheme::PowerLog(gamma))
        }
    }

    /// Parses the CLI/config names: `cesaro`, `powlog:G`, `log`, `loglog`.
    pub fn parse(name: &str) -> Result<WScheme, String> {
        match name {
            "cesaro" | "identity" => Ok(WScheme::Identity),
            "log" => Ok(WScheme::Log),
            "loglog" => Ok(WScheme::LogLog),
            _ => {
                if let Some(g) = name.strip_prefix("powlog:") {
                    let gamma: f64 = g
                        .parse()
                        .map_err(|_| format!("bad powlog exponent: {g}"))?;
                    WScheme::power_log(gamma)
                } else {
                    Err(format!("unknown scheme: {name}"))
                }
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            WScheme::Identity => "cesaro".to_string(),
            WScheme::PowerLog(g) => format!("powlog:{g}"),
            WScheme::Log => "log".to_string(),
            WScheme::LogLog => "loglog".to_string(),
        }
    }

    /// Smallest index the scheme is defined on (`log log` needs `t > e`).
    pub fn domain_start(&self) -> u64 {
        match self {
            WScheme::LogLog => 3,
            _ => 2,
        }
    }

    /// W(t).
    pub fn big_w(&self, t: f64) -> f64 {
        match self {
            WScheme::Identity => t,
            WScheme::PowerLog(g) => libm::exp(libm::pow(libm::log(t), *g)),
            WScheme::Log => libm::log(t),
            WScheme::LogLog => libm::log(libm::log(t)),
        }
    }

    fn big_w_dd(&self, t: Dd) -> Dd {
        match self {
            WScheme::Identity => t,
            WScheme::PowerLog(g) => t.ln().powf(Dd::from_f64(*g)).exp(),
            WScheme::Log => t.ln(),
            WScheme::LogLog => t.ln().ln(),
        }
    }

    /// Discrete weight `w(n) = W(n+1) - W(n)`, computed in double-double so
    /// the cancellation at large `n` does not destroy the value.
    pub fn weight(&self, n: u64) -> f64 {
        match self {
            WScheme::Identity => 1.0,
            _ => {
                let a = self.big_w_dd(Dd::from_i64(n as i64));
                let b = self.big_w_dd(Dd::from_i64(n as i64 + 1));
                (b - a).to_f64()
            }
        }
    }

    /// The growth object for `log W(t)`.
    pub fn log_w(&self) -> LogWGrowth {
        match self {
            WScheme::Identity => LogWGrowth::LogPower(1.0),
            WScheme::PowerLog(g) => LogWGrowth::LogPower(*g),
            WScheme::Log => LogWGrowth::LogLog,
            WScheme::LogLog => LogWGrowth::LogLogLog,
        }
    }
}

impl fmt::Display for WScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl LogWGrowth {
    /// Compares this growth object against a nonzero expression from the
    /// term class: `Less` means `log W ≺ f`.
    ///
    /// In-class nonzero monomials are `t^a log^b`; any unbounded one
    /// dominates every iterated log, and dominates `(log t)^gamma` unless it
    /// is exactly `c·log t` with `gamma = 1`.
    pub fn compare_expr(&self, f: &HardyExpr) -> Option<Ordering> {
        let d = f.dominant()?;
        let alpha = d.alpha.cmp_scalar(Scalar::zero());
        let unbounded = alpha == Ordering::Greater || (alpha == Ordering::Equal && d.beta > 0);
        if !unbounded {
            // bounded expressions sit below every unbounded log W
            return Some(Ordering::Greater);
        }
        match self {
            LogWGrowth::LogPower(g) => {
                if alpha == Ordering::Greater {
                    Some(Ordering::Less)
                } else {
                    // dominant is log^beta with beta >= 1
                    let beta = d.beta as f64;
                    if beta > *g {
                        Some(Ordering::Less)
                    } else if beta == *g {
                        Some(Ordering::Equal)
                    } else {
                        Some(Ordering::Greater)
                    }
                }
            }
            // Iterated logs grow slower than every unbounded class member.
            LogWGrowth::LogLog | LogWGrowth::LogLogLog => Some(Ordering::Less),
        }
    }

    /// True iff `log W ≺ f` strictly.
    pub fn strictly_slower_than(&self, f: &HardyExpr) -> bool {
        self.compare_expr(f) == Some(Ordering::Less)
    }

    pub fn describe(&self) -> String {
        match self {
            LogWGrowth::LogPower(g) if *g == 1.0 => "log(t)".to_string(),
            LogWGrowth::LogPower(g) => format!("log(t)^{g}"),
            LogWGrowth::LogLog => "log(log(t))".to_string(),
            LogWGrowth::LogLogLog => "log(log(log(t)))".to_string(),
        }
    }
}
