//! Exact calculus on the logarithmico-exponential term class
//! `span{ t^a (log t)^b : a real, b integer }`.
//!
//! Every expression is a normalized list of terms, sorted strictly
//! decreasing in growth (lexicographic on `(a, b)`), with no two terms
//! sharing an `(a, b)` key and no zero coefficients. The empty list is the
//! zero function. The class is closed under addition, scalar multiples and
//! differentiation. Zero-constant antidifferentiation is closed on the
//! `b >= 0` subclass; terms with negative log powers (such as `t/log(t)`)
//! compare, differentiate and evaluate fine but have no antiderivative
//! inside the class, which [`HardyExpr::integrate`] reports as `None`.
//!
//! All representatives are taken on the half-line `[2, inf)`.

pub mod parse;

use crate::dd::Dd;
use crate::scalar::Scalar;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

pub use parse::parse_expr;

/// Left end of the half-line of definition for every expression.
pub const T_MIN: f64 = 2.0;

/// One monomial `coeff * t^alpha * (log t)^beta`.
#[derive(Clone, Copy, Debug)]
pub struct HardyTerm {
    pub coeff: Scalar,
    pub alpha: Scalar,
    pub beta: i32,
}

impl HardyTerm {
    pub fn new(coeff: Scalar, alpha: Scalar, beta: i32) -> Self {
        HardyTerm { coeff, alpha, beta }
    }

    /// Growth-order key comparison: lexicographic on `(alpha, beta)`.
    fn cmp_growth(&self, other: &HardyTerm) -> Ordering {
        match self.alpha.cmp_scalar(other.alpha) {
            Ordering::Equal => self.beta.cmp(&other.beta),
            o => o,
        }
    }

    fn same_key(&self, other: &HardyTerm) -> bool {
        self.beta == other.beta && self.alpha.eq_scalar(other.alpha)
    }

    /// A term is "polynomial" when it is `c * t^d` with integer `d >= 0`.
    fn is_polynomial(&self) -> bool {
        self.beta == 0 && matches!(self.alpha.as_integer(), Some(d) if d >= 0)
    }

    /// True iff the monomial tends to infinity in absolute value.
    fn is_unbounded(&self) -> bool {
        let a = self.alpha.cmp_scalar(Scalar::zero());
        a == Ordering::Greater || (a == Ordering::Equal && self.beta > 0)
    }
}

/// Errors from the symbolic layer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HardyError {
    /// `compare`/`limit_ratio` received a zero expression.
    ZeroComparand,
    /// Evaluation point below the half-line of definition.
    DomainError,
    /// Text input did not parse.
    Parse(String),
}

impl fmt::Display for HardyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HardyError::ZeroComparand => write!(f, "comparison with the zero expression"),
            HardyError::DomainError => write!(f, "evaluation point below t = 2"),
            HardyError::Parse(m) => write!(f, "parse error: {m}"),
        }
    }
}

impl core::error::Error for HardyError {}

/// Result of an exact growth comparison of two nonzero expressions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GrowthRelation {
    /// f(t) ≺ g(t): g/f -> infinity.
    StrictlySlower,
    /// g(t) ≺ f(t).
    StrictlyFaster,
    /// f/g tends to the given finite nonzero limit.
    SameOrder(f64),
    /// Identical expressions.
    Equal,
}

/// Evaluation precision selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    /// Plain f64 arithmetic.
    Standard,
    /// Double-double arithmetic, relative error around 2^-100.
    Extended,
}

/// Normalized finite sum of [`HardyTerm`]s; empty means the zero function.
#[derive(Clone, Debug, Default)]
pub struct HardyExpr {
    terms: Vec<HardyTerm>,
}

impl HardyExpr {
    pub fn zero() -> Self {
        HardyExpr { terms: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        HardyExpr::from_terms(vec![HardyTerm::new(c, Scalar::zero(), 0)])
    }

    /// `t^alpha`.
    pub fn t_pow(alpha: Scalar) -> Self {
        HardyExpr::from_terms(vec![HardyTerm::new(Scalar::one(), alpha, 0)])
    }

    /// `t`.
    pub fn t() -> Self {
        HardyExpr::t_pow(Scalar::one())
    }

    /// `(log t)^beta`.
    pub fn log_pow(beta: i32) -> Self {
        HardyExpr::from_terms(vec![HardyTerm::new(Scalar::one(), Scalar::zero(), beta)])
    }

    pub fn monomial(coeff: Scalar, alpha: Scalar, beta: i32) -> Self {
        HardyExpr::from_terms(vec![HardyTerm::new(coeff, alpha, beta)])
    }

    /// Normalizes an arbitrary term list: sorts by decreasing growth, merges
    /// equal `(alpha, beta)` keys, drops coefficients that cancel.
    pub fn from_terms(mut terms: Vec<HardyTerm>) -> Self {
        terms.sort_by(|a, b| b.cmp_growth(a));
        let mut out: Vec<HardyTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if t.coeff.is_zero() {
                continue;
            }
            match out.last_mut() {
                Some(last) if last.same_key(&t) => {
                    last.coeff = last.coeff.add(t.coeff);
                    if last.coeff.is_zero() {
                        out.pop();
                    }
                }
                _ => out.push(t),
            }
        }
        HardyExpr { terms: out }
    }

    pub fn terms(&self) -> &[HardyTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Fastest-growing term, if any.
    pub fn dominant(&self) -> Option<&HardyTerm> {
        self.terms.first()
    }

    pub fn neg(&self) -> Self {
        HardyExpr {
            terms: self
                .terms
                .iter()
                .map(|t| HardyTerm::new(t.coeff.neg(), t.alpha, t.beta))
                .collect(),
        }
    }

    pub fn scale(&self, c: Scalar) -> Self {
        if c.is_zero() {
            return HardyExpr::zero();
        }
        HardyExpr {
            terms: self
                .terms
                .iter()
                .map(|t| HardyTerm::new(t.coeff.mul(c), t.alpha, t.beta))
                .collect(),
        }
    }

    pub fn add(&self, other: &HardyExpr) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().copied());
        HardyExpr::from_terms(terms)
    }

    pub fn sub(&self, other: &HardyExpr) -> Self {
        self.add(&other.neg())
    }

    /// Exact derivative:
    /// `d/dt [t^a log^b t] = a t^(a-1) log^b t + b t^(a-1) log^(b-1) t`.
    pub fn differentiate(&self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * 2);
        for t in &self.terms {
            if !t.alpha.is_zero() {
                terms.push(HardyTerm::new(
                    t.coeff.mul(t.alpha),
                    t.alpha.sub(Scalar::one()),
                    t.beta,
                ));
            }
            if t.beta != 0 {
                terms.push(HardyTerm::new(
                    t.coeff.mul(Scalar::from_int(t.beta as i64)),
                    t.alpha.sub(Scalar::one()),
                    t.beta - 1,
                ));
            }
        }
        HardyExpr::from_terms(terms)
    }

    /// Zero-constant antiderivative, exact within the class. `None` when any
    /// term carries a negative log power: integrating those leaves the class
    /// (the antiderivative of `1/log t` is a li-type function).
    pub fn integrate(&self) -> Option<Self> {
        let mut terms: Vec<HardyTerm> = Vec::new();
        for t in &self.terms {
            if t.beta < 0 {
                return None;
            }
            let minus_one = Scalar::from_int(-1);
            if t.alpha.eq_scalar(minus_one) {
                terms.push(HardyTerm::new(
                    t.coeff.div(Scalar::from_int(t.beta as i64 + 1)),
                    Scalar::zero(),
                    t.beta + 1,
                ));
            } else {
                // int t^a log^b = t^(a+1)/(a+1) log^b - b/(a+1) int t^a log^(b-1)
                let a1 = t.alpha.add(Scalar::one());
                let mut c = t.coeff.div(a1);
                let mut b = t.beta;
                loop {
                    terms.push(HardyTerm::new(c, a1, b));
                    if b == 0 {
                        break;
                    }
                    c = c.mul(Scalar::from_int(b as i64)).div(a1).neg();
                    b -= 1;
                }
            }
        }
        Some(HardyExpr::from_terms(terms))
    }

    /// `f / t^k`, exact (shifts every exponent by `-k`).
    pub fn div_t_pow(&self, k: i64) -> HardyExpr {
        HardyExpr {
            terms: self
                .terms
                .iter()
                .map(|t| HardyTerm::new(t.coeff, t.alpha.sub(Scalar::from_int(k)), t.beta))
                .collect(),
        }
    }

    /// Splits `f = p + r` with `p` the terms `c t^d`, integer `d >= 0`.
    pub fn polynomial_part(&self) -> (HardyExpr, HardyExpr) {
        let (p, r): (Vec<HardyTerm>, Vec<HardyTerm>) =
            self.terms.iter().partition(|t| t.is_polynomial());
        (HardyExpr { terms: p }, HardyExpr { terms: r })
    }

    /// True iff the function stays bounded on `[2, inf)`; in this class that
    /// is a condition on the dominant key: `(alpha, beta) <= (0, 0)`.
    pub fn is_bounded(&self) -> bool {
        match self.dominant() {
            None => true,
            Some(d) => !d.is_unbounded(),
        }
    }

    /// True iff the function tends to zero.
    pub fn vanishes_at_infinity(&self) -> bool {
        match self.dominant() {
            None => true,
            Some(d) => {
                d.alpha.is_negative() || (d.alpha.is_zero() && d.beta < 0)
            }
        }
    }

    /// Limit at infinity when the function is bounded.
    pub fn limit(&self) -> Option<f64> {
        if !self.is_bounded() {
            return None;
        }
        // The constant term is the limit; everything else decays.
        Some(self.constant_term().to_f64())
    }

    /// Constant term coefficient (exact).
    pub fn constant_term(&self) -> Scalar {
        self.terms
            .iter()
            .find(|t| t.beta == 0 && t.alpha.is_zero())
            .map(|t| t.coeff)
            .unwrap_or_else(Scalar::zero)
    }

    /// Exact growth comparison. Errors when either side is zero.
    pub fn compare(&self, other: &HardyExpr) -> Result<GrowthRelation, HardyError> {
        let fd = self.dominant().ok_or(HardyError::ZeroComparand)?;
        let gd = other.dominant().ok_or(HardyError::ZeroComparand)?;
        match fd.cmp_growth(gd) {
            Ordering::Less => Ok(GrowthRelation::StrictlySlower),
            Ordering::Greater => Ok(GrowthRelation::StrictlyFaster),
            Ordering::Equal => {
                let ratio = fd.coeff.div(gd.coeff);
                if ratio.eq_scalar(Scalar::one()) && self.sub(other).is_zero() {
                    Ok(GrowthRelation::Equal)
                } else {
                    Ok(GrowthRelation::SameOrder(ratio.to_f64()))
                }
            }
        }
    }

    /// Exact limit of `self/other`, as a scalar when finite; `None` encodes
    /// divergence. Zero numerators give zero.
    pub(crate) fn limit_ratio_scalar(
        &self,
        other: &HardyExpr,
    ) -> Result<Option<Scalar>, HardyError> {
        let gd = other.dominant().ok_or(HardyError::ZeroComparand)?;
        let fd = match self.dominant() {
            None => return Ok(Some(Scalar::zero())),
            Some(d) => d,
        };
        Ok(match fd.cmp_growth(gd) {
            Ordering::Less => Some(Scalar::zero()),
            Ordering::Greater => None,
            Ordering::Equal => Some(fd.coeff.div(gd.coeff)),
        })
    }

    /// Limit of `self/other` at infinity: finite value, or +/- infinity.
    pub fn limit_ratio(&self, other: &HardyExpr) -> Result<f64, HardyError> {
        if self.is_zero() {
            other.dominant().ok_or(HardyError::ZeroComparand)?;
            return Ok(0.0);
        }
        match self.limit_ratio_scalar(other)? {
            Some(s) => Ok(s.to_f64()),
            None => {
                let sf = self.dominant().unwrap().coeff.is_negative();
                let sg = other.dominant().unwrap().coeff.is_negative();
                Ok(if sf == sg {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                })
            }
        }
    }

    /// Smallest `d` in N with `|f(t)| <<= t^d`; bounded expressions get 0.
    pub fn degree(&self) -> u32 {
        match self.dominant() {
            None => 0,
            Some(t) if !t.is_unbounded() => 0,
            Some(t) => match t.alpha.as_integer() {
                Some(a) if t.beta > 0 => (a + 1).max(1) as u32,
                Some(a) => a.max(0) as u32,
                None => {
                    let f = t.alpha.to_dd().floor().to_f64();
                    ((f as i64) + 1).max(1) as u32
                }
            },
        }
    }

    /// Numeric evaluation on `[2, inf)`.
    pub fn evaluate(&self, t: f64, precision: Precision) -> Result<f64, HardyError> {
        if !(t >= T_MIN) {
            return Err(HardyError::DomainError);
        }
        match precision {
            Precision::Standard => {
                let lt = libm::log(t);
                let mut acc = 0.0;
                for term in &self.terms {
                    let mut v = term.coeff.to_f64() * libm::pow(t, term.alpha.to_f64());
                    if term.beta != 0 {
                        v *= libm::pow(lt, term.beta as f64);
                    }
                    acc += v;
                }
                Ok(acc)
            }
            Precision::Extended => Ok(self.evaluate_dd(Dd::from_f64(t))?.to_f64()),
        }
    }

    /// Double-double evaluation; the workhorse for the orbit engine.
    pub fn evaluate_dd(&self, t: Dd) -> Result<Dd, HardyError> {
        if !(t.hi >= T_MIN) {
            return Err(HardyError::DomainError);
        }
        let needs_log = self.terms.iter().any(|x| x.beta != 0);
        let lt = if needs_log { t.ln() } else { crate::dd::ZERO };
        let mut acc = crate::dd::ZERO;
        for term in &self.terms {
            let p = match term.alpha.as_integer() {
                Some(k) => t.powi(k),
                None => t.powf(term.alpha.to_dd()),
            };
            let mut v = term.coeff.to_dd() * p;
            if term.beta != 0 {
                v = v * lt.powi(term.beta as i64);
            }
            acc = acc + v;
        }
        Ok(acc)
    }
}

impl fmt::Display for HardyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = t.coeff.to_f64();
            if i == 0 {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else if c < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let ac = libm::fabs(c);
            let mut parts: Vec<String> = Vec::new();
            if libm::fabs(ac - 1.0) > 1e-15 || (t.alpha.is_zero() && t.beta == 0) {
                parts.push(format_num(ac));
            }
            if !t.alpha.is_zero() {
                if t.alpha.eq_scalar(Scalar::one()) {
                    parts.push("t".into());
                } else {
                    parts.push(format!("t^{}", format_exp(t.alpha)));
                }
            }
            if t.beta == 1 {
                parts.push("log(t)".into());
            } else if t.beta != 0 {
                parts.push(format!("log(t)^{}", t.beta));
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

fn format_num(x: f64) -> String {
    if x == libm::floor(x) && libm::fabs(x) < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn format_exp(a: Scalar) -> String {
    match a {
        Scalar::Rat(r) if !r.is_integer() => format!("{{{}/{}}}", r.numer(), r.denom()),
        _ => format_num(a.to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> HardyExpr {
        parse_expr(s).unwrap()
    }

    #[test]
    fn add_cancels_exactly() {
        let f = p("t^{3/2}");
        assert!(f.add(&f.neg()).is_zero());
        assert_eq!(p("2*t").add(&p("3*t")).to_string(), "5*t");
    }

    #[test]
    fn add_orders_by_growth() {
        let s = p("t").add(&p("t*log(t)"));
        let keys: Vec<(f64, i32)> = s
            .terms()
            .iter()
            .map(|t| (t.alpha.to_f64(), t.beta))
            .collect();
        assert_eq!(keys, vec![(1.0, 1), (1.0, 0)]);
    }

    #[test]
    fn differentiate_examples() {
        let d = p("t^{3/2}").differentiate();
        assert!(d.sub(&p("1.5*t^{1/2}")).is_zero());
        // t log t -> log t + 1
        let d = p("t*log(t)").differentiate();
        assert!(d.sub(&p("log(t) + 1")).is_zero());
        // log t -> 1/t
        assert!(p("log(t)").differentiate().sub(&p("t^-1")).is_zero());
        // t/log t -> 1/log - 1/log^2
        let d = p("t/log(t)").differentiate();
        assert!(d.sub(&p("log(t)^-1 - log(t)^-2")).is_zero());
    }

    #[test]
    fn integrate_inverts_differentiate() {
        for s in ["t^{3/2}", "t*log(t)", "log(t)^3", "t^2 + 5*t", "t^{-1/2}"] {
            let f = p(s);
            let back = f.differentiate().integrate().unwrap();
            // They agree up to the constant term of f.
            let diff = f.sub(&back);
            assert!(
                diff.is_zero() || (diff.terms().len() == 1 && diff.terms()[0].alpha.is_zero()),
                "{s}: diff = {diff}"
            );
        }
        assert!(p("t/log(t)").integrate().is_none());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            p("t/log(t)").compare(&p("t")).unwrap(),
            GrowthRelation::StrictlySlower
        );
        assert_eq!(
            p("t^{3/2}").compare(&p("t^{3/2}")).unwrap(),
            GrowthRelation::Equal
        );
        assert_eq!(
            p("t*log(t)").compare(&p("t^1.01")).unwrap(),
            GrowthRelation::StrictlySlower
        );
        assert_eq!(
            p("3*t^2").compare(&p("t^2")).unwrap(),
            GrowthRelation::SameOrder(3.0)
        );
        assert!(matches!(
            HardyExpr::zero().compare(&p("t")),
            Err(HardyError::ZeroComparand)
        ));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(p("t^{3/2}").degree(), 2);
        assert_eq!(p("5*t^2 + t").degree(), 2);
        assert_eq!(p("log(t)").degree(), 1);
        assert_eq!(p("t^{-1/2}").degree(), 0);
        assert_eq!(p("t^2*log(t)").degree(), 3);
        assert_eq!(p("t/log(t)").degree(), 1);
        assert_eq!(p("7").degree(), 0);
    }

    #[test]
    fn polynomial_part_examples() {
        let (pp, r) = p("t^{3/2} + 2*t + 1").polynomial_part();
        assert!(pp.sub(&p("2*t + 1")).is_zero());
        assert!(r.sub(&p("t^{3/2}")).is_zero());
        let (pp, r) = p("t^2").polynomial_part();
        assert!(r.is_zero());
        assert!(pp.sub(&p("t^2")).is_zero());
        let (pp, r) = p("log(t)").polynomial_part();
        assert!(pp.is_zero());
        assert!(r.sub(&p("log(t)")).is_zero());
    }

    #[test]
    fn bounded_and_ratio() {
        assert!(p("t^{-1/2}").is_bounded());
        assert!(!p("log(t)").is_bounded());
        assert!(p("1/log(t)").is_bounded());
        assert!(p("1/log(t)").vanishes_at_infinity());
        assert_eq!(p("3*t^2").limit_ratio(&p("t^2")).unwrap(), 3.0);
        assert_eq!(p("t").limit_ratio(&p("t^2")).unwrap(), 0.0);
        assert_eq!(p("t^2").limit_ratio(&p("t")).unwrap(), f64::INFINITY);
    }

    #[test]
    fn evaluate_standard_points() {
        let f = p("t^2");
        assert_eq!(f.evaluate(10.0, Precision::Standard).unwrap(), 100.0);
        let g = p("log(t)");
        let e2 = core::f64::consts::E * core::f64::consts::E;
        assert!(libm::fabs(g.evaluate(e2, Precision::Extended).unwrap() - 2.0) < 1e-14);
        assert!(matches!(
            f.evaluate(1.5, Precision::Extended),
            Err(HardyError::DomainError)
        ));
    }
}
