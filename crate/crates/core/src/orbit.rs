//! Orbit engine: compiles `v(n) = a_1^(f_1(n)) ... b_m^(p_m(n))` into
//! per-coordinate closed forms and streams reduced fundamental-domain
//! points along an arithmetic progression.
//!
//! Compilation multiplies the one-parameter curves of the generators
//! symbolically, once, giving each matrix position a polynomial in the
//! scalar values `f_i(n)`, `p_j(n)`. Evaluation computes the scalars in
//! double-double, substitutes with compensated Horner-style products,
//! reduces mod the lattice and emits coordinates plus the scheme weight.
//! Everything is pure and deterministic; consumers may partition the index
//! range into the fixed-size chunks exposed here and merge in chunk order
//! to keep parallel runs bit-identical to sequential ones.

use crate::dd::{self, Dd};
use crate::hardy::{GrowthRelation, HardyError, HardyExpr, Precision};
use crate::nilgroup::{
    check_commuting, degree_upper_bound, nilpotency_step, one_parameter_curve,
    reduce_mod_lattice, GroupElement, GroupError, MalcevCoords, OneParameterCurve,
};
use crate::normal_form::{check_property_p_w, LogWGrowth, WScheme};
use crate::scalar::Scalar;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Hard cap on index magnitudes unless overridden by the caller.
pub const DEFAULT_MAX_N: u64 = 100_000_000;

/// Loud-failure bound on scalar and coordinate magnitudes: beyond this the
/// double-double budget can no longer guarantee 1e-10 absolute error on the
/// reduced coordinates.
pub const MAGNITUDE_BUDGET: f64 = 1.0e20;

/// Fixed chunk length for deterministic parallel accumulation.
pub const CHUNK_LEN: usize = 1 << 16;

#[derive(Clone, Debug)]
pub enum OrbitError {
    /// Generators do not commute; the product would be order-dependent.
    NonCommuting,
    RangeError(String),
    /// A scalar or coordinate exceeded the double-double budget.
    NumericBudget(String),
    Group(GroupError),
    Hardy(HardyError),
}

impl fmt::Display for OrbitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitError::NonCommuting => write!(f, "generators do not commute"),
            OrbitError::RangeError(m) => write!(f, "range error: {m}"),
            OrbitError::NumericBudget(m) => write!(f, "numeric budget exceeded: {m}"),
            OrbitError::Group(e) => write!(f, "group error: {e}"),
            OrbitError::Hardy(e) => write!(f, "expression error: {e}"),
        }
    }
}

impl core::error::Error for OrbitError {}

impl From<GroupError> for OrbitError {
    fn from(e: GroupError) -> Self {
        OrbitError::Group(e)
    }
}

impl From<HardyError> for OrbitError {
    fn from(e: HardyError) -> Self {
        OrbitError::Hardy(e)
    }
}

/// Full description of an orbit experiment.
#[derive(Clone, Debug)]
pub struct OrbitSpec {
    pub dim: usize,
    /// `a_i^(f_i(n))` factors.
    pub generators: Vec<(GroupElement, HardyExpr)>,
    /// `b_j^(p_j(n))` factors with integer-valued polynomial exponents.
    pub poly_parts: Vec<(GroupElement, HardyExpr)>,
    /// Inclusive index range `[n_start, n_end]`.
    pub range: (u64, u64),
    /// Arithmetic progression `(q, r)`: indices `n ≡ r (mod q)`.
    pub progression: (u64, u64),
    pub scheme: WScheme,
}

/// One validation finding; the engine runs non-conforming specs anyway so
/// failures of the criteria can be observed.
#[derive(Clone, Debug)]
pub struct Diagnostic {
    pub code: &'static str,
    pub ok: bool,
    pub detail: String,
}

impl Diagnostic {
    fn new(code: &'static str, ok: bool, detail: String) -> Self {
        Diagnostic { code, ok, detail }
    }
}

impl OrbitSpec {
    fn all_elements(&self) -> Vec<GroupElement> {
        self.generators
            .iter()
            .chain(self.poly_parts.iter())
            .map(|(g, _)| g.clone())
            .collect()
    }

    fn exponents(&self) -> Vec<HardyExpr> {
        self.generators.iter().map(|(_, f)| f.clone()).collect()
    }

    /// Advisory hypothesis checks: commutativity, integer-valued polynomial
    /// parts, growth ordering, window condition against the scheme,
    /// derivative closure, and the growth property of the exponent family.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();

        let commuting = check_commuting(&self.all_elements());
        out.push(Diagnostic::new(
            "commuting",
            commuting,
            if commuting {
                "all generators pairwise commute".to_string()
            } else {
                "some pair of generators fails to commute".to_string()
            },
        ));

        for (j, (_, p)) in self.poly_parts.iter().enumerate() {
            let (ok, detail) = integer_valued(p);
            out.push(Diagnostic::new(
                "poly_integer_valued",
                ok,
                format!("p_{j} = {p}: {detail}"),
            ));
        }

        // The reduction machinery adjoins derivatives automatically, so the
        // ordering and window hypotheses are judged on the derivative
        // closure of the family, and missing derivatives are informational.
        let fs = self.exponents();
        let mut closure: Vec<HardyExpr> = Vec::new();
        let mut adjoined: Vec<String> = Vec::new();
        for (i, f) in fs.iter().enumerate() {
            let mut cur = f.clone();
            let mut order = 0;
            while !cur.is_bounded() {
                if order > 0 && !fs.iter().any(|g| g.sub(&cur).is_zero()) {
                    adjoined.push(format!("f_{i}^({order}) = {cur}"));
                }
                closure.push(cur.clone());
                cur = cur.differentiate();
                order += 1;
            }
        }
        out.push(Diagnostic::new(
            "derivative_closure",
            true,
            if adjoined.is_empty() {
                "family is derivative-closed".to_string()
            } else {
                format!("closure adjoins: {}", adjoined.join(", "))
            },
        ));

        if closure.len() > 1 {
            let mut sorted = closure.clone();
            sorted.sort_by(|a, b| match a.compare(b) {
                Ok(GrowthRelation::StrictlySlower) => core::cmp::Ordering::Less,
                Ok(GrowthRelation::StrictlyFaster) => core::cmp::Ordering::Greater,
                _ => core::cmp::Ordering::Equal,
            });
            let mut collision = None;
            for w in sorted.windows(2) {
                if let Ok(GrowthRelation::SameOrder(_)) = w[0].compare(&w[1]) {
                    if !w[0].sub(&w[1]).is_zero() {
                        collision = Some(format!("{} and {}", w[0], w[1]));
                    }
                }
            }
            out.push(Diagnostic::new(
                "growth_ordering",
                collision.is_none(),
                match collision {
                    None => "closure orders strictly: f_1 ≺ ... ≺ f_k".to_string(),
                    Some(pair) => format!("same-growth pair in the closure: {pair}"),
                },
            ));
        }

        let logw = self.scheme.log_w();
        for (i, f) in closure.iter().enumerate() {
            let (ok, detail) = window_condition(f, logw);
            out.push(Diagnostic::new(
                "window_condition",
                ok,
                format!("closure element {i} = {f}: {detail}"),
            ));
        }

        if !fs.is_empty() {
            let rep = check_property_p_w(&fs, &self.scheme);
            let label = if self.scheme == WScheme::Identity {
                "property_p"
            } else {
                "property_p_w"
            };
            out.push(Diagnostic::new(
                label,
                rep.holds,
                match &rep.witness {
                    None => "holds for the exponent family".to_string(),
                    Some(w) => format!(
                        "fails; witness combination {} ({})",
                        w.combination, w.classification
                    ),
                },
            ));
        }

        let start_ok = self.range.0 >= self.scheme.domain_start().max(2)
            && self.range.1 >= self.range.0
            && self.progression.0 >= 1
            && self.progression.1 < self.progression.0;
        out.push(Diagnostic::new(
            "range",
            start_ok,
            format!(
                "range [{}, {}], progression ({}, {}), scheme domain start {}",
                self.range.0,
                self.range.1,
                self.progression.0,
                self.progression.1,
                self.scheme.domain_start()
            ),
        ));

        let s = nilpotency_step(self.dim);
        let m = self
            .generators
            .iter()
            .map(|(_, f)| f.degree())
            .chain(self.poly_parts.iter().map(|(_, p)| p.degree() + 1))
            .max()
            .unwrap_or(1)
            .max(1);
        out.push(Diagnostic::new(
            "degree_bound",
            true,
            format!(
                "nilpotency step s = {s}, exponent degree bound M = {m}, orbit degree <= (s+1)(M+1) = {}",
                degree_upper_bound(s, m)
            ),
        ));

        out
    }
}

/// True with explanation iff `p` is a polynomial with `p(Z) ⊂ Z`, decided
/// by the integrality of its binomial-basis coefficients (the finite
/// differences at 0) plus a direct check on sample integers.
fn integer_valued(p: &HardyExpr) -> (bool, String) {
    let (_, nonpoly) = p.polynomial_part();
    if !nonpoly.is_zero() {
        return (false, "not a polynomial".to_string());
    }
    let deg = p.degree() as i64;
    let mut values: Vec<Scalar> = (0..=deg + 3)
        .map(|m| poly_value_at_int(p, m))
        .collect();
    // Finite differences at 0: binomial-basis coefficients.
    for j in 0..=deg as usize {
        if !near_integer(values[0]) {
            return (
                false,
                format!("binomial coefficient Delta^{j} p(0) is not an integer"),
            );
        }
        for i in 0..values.len() - 1 {
            values[i] = values[i + 1].sub(values[i]);
        }
        values.pop();
    }
    // Direct sample check.
    for m in [2i64, 3, 5, 7, 11] {
        if !near_integer(poly_value_at_int(p, m)) {
            return (false, format!("p({m}) is not an integer"));
        }
    }
    (true, "integer-valued on the integers".to_string())
}

fn poly_value_at_int(p: &HardyExpr, m: i64) -> Scalar {
    let mut acc = Scalar::zero();
    for t in p.terms() {
        let a = t.alpha.as_integer().unwrap_or(0).max(0) as u32;
        let mut pw = Scalar::one();
        for _ in 0..a {
            pw = pw.mul(Scalar::from_int(m));
        }
        acc = acc.add(t.coeff.mul(pw));
    }
    acc
}

fn near_integer(s: Scalar) -> bool {
    match s {
        Scalar::Rat(r) => r.is_integer(),
        Scalar::Real(d) => (d - d.round()).abs().to_f64() < 1.0e-9,
    }
}

/// Window condition `t^(l-1) log W(t) ≺ f(t) ≺ t^l` for `l = deg f`.
fn window_condition(f: &HardyExpr, logw: LogWGrowth) -> (bool, String) {
    if f.is_zero() {
        return (false, "zero exponent".to_string());
    }
    let ell = f.degree();
    if ell == 0 {
        return (false, "bounded exponent".to_string());
    }
    let upper = HardyExpr::t_pow(Scalar::from_int(ell as i64));
    if !matches!(f.compare(&upper), Ok(GrowthRelation::StrictlySlower)) {
        return (
            false,
            format!("f is not strictly below t^{ell} (polynomial-type growth)"),
        );
    }
    let quotient = f.div_t_pow(ell as i64 - 1);
    if logw.strictly_slower_than(&quotient) {
        (true, format!("t^{} log W ≺ f ≺ t^{ell}", ell - 1))
    } else {
        (
            false,
            format!(
                "f / t^{} does not dominate log W = {}",
                ell - 1,
                logw.describe()
            ),
        )
    }
}

/// Multivariate polynomial in the generator scalars, exponent-vector keyed
/// (deterministic order), double-double coefficients.
#[derive(Clone, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Vec<u8>, Dd>,
}

impl MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }

    fn var(v: usize, nvars: usize, coeff: Dd, power: u8) -> Self {
        let mut exps = vec![0u8; nvars];
        exps[v] = power;
        let mut terms = BTreeMap::new();
        terms.insert(exps, coeff);
        MultiPoly { terms }
    }

    fn add_assign(&mut self, other: &MultiPoly) {
        for (e, c) in &other.terms {
            let cur = self.terms.get(e).copied().unwrap_or(dd::ZERO) + *c;
            if cur.is_zero() {
                self.terms.remove(e);
            } else {
                self.terms.insert(e.clone(), cur);
            }
        }
    }

    fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let key: Vec<u8> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let cur = out.terms.get(&key).copied().unwrap_or(dd::ZERO) + *ca * *cb;
                if cur.is_zero() {
                    out.terms.remove(&key);
                } else {
                    out.terms.insert(key, cur);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u8>, &Dd)> {
        self.terms.iter()
    }

    /// Evaluates given per-variable power tables `powers[v][e] = s_v^e`.
    fn eval(&self, powers: &[Vec<Dd>]) -> Dd {
        let mut acc = dd::ZERO;
        for (exps, c) in &self.terms {
            let mut term = *c;
            for (v, &e) in exps.iter().enumerate() {
                if e > 0 {
                    term = term * powers[v][e as usize];
                }
            }
            acc = acc + term;
        }
        acc
    }

    fn max_degree_of(&self, v: usize) -> u8 {
        self.terms.keys().map(|e| e[v]).max().unwrap_or(0)
    }
}

/// Orbit compiled to per-position closed forms.
#[derive(Clone, Debug)]
pub struct CompiledOrbit {
    dim: usize,
    /// One polynomial per strictly-upper position (superdiagonal-major).
    coord_polys: Vec<MultiPoly>,
    /// Scalar expressions, generator order: Hardy exponents then
    /// polynomial parts.
    scalars: Vec<HardyExpr>,
    scheme: WScheme,
    max_var_degree: Vec<u8>,
}

/// One emitted orbit point.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub n: u64,
    /// Fundamental-domain coordinates, superdiagonal-major, in [0, 1).
    pub coords: Vec<f64>,
    /// Scheme weight w(n).
    pub weight: f64,
}

impl OrbitPoint {
    pub fn torus(&self, dim: usize) -> &[f64] {
        &self.coords[..dim - 1]
    }
}

/// Expands the product of one-parameter curves symbolically. Fails loudly
/// when the generators do not commute: the expansion would then depend on
/// factor order.
pub fn compile(spec: &OrbitSpec) -> Result<CompiledOrbit, OrbitError> {
    if !check_commuting(&spec.all_elements()) {
        return Err(OrbitError::NonCommuting);
    }
    let n = spec.dim;
    let factors: Vec<(GroupElement, HardyExpr)> = spec
        .generators
        .iter()
        .chain(spec.poly_parts.iter())
        .cloned()
        .collect();
    let nvars = factors.len();
    let scalars: Vec<HardyExpr> = factors.iter().map(|(_, f)| f.clone()).collect();

    // Matrix of polynomials for the running product; identity to start.
    let len = crate::nilgroup::upper_len(n);
    let mut prod: Vec<MultiPoly> = vec![MultiPoly::zero(); len];
    for (v, (a, _)) in factors.iter().enumerate() {
        let curve: OneParameterCurve = one_parameter_curve(a);
        // Factor matrix entries as polynomials in variable v.
        let fac: Vec<MultiPoly> = (0..len)
            .map(|p| {
                let mut mp = MultiPoly::zero();
                for (k, c) in curve.coeffs(p).iter().enumerate() {
                    if !c.is_zero() {
                        mp.add_assign(&MultiPoly::var(v, nvars, *c, (k + 1) as u8));
                    }
                }
                mp
            })
            .collect();
        prod = matrix_poly_mul(n, &prod, &fac);
    }
    let max_var_degree = (0..nvars)
        .map(|v| prod.iter().map(|p| p.max_degree_of(v)).max().unwrap_or(0))
        .collect();
    Ok(CompiledOrbit {
        dim: n,
        coord_polys: prod,
        scalars,
        scheme: spec.scheme,
        max_var_degree,
    })
}

/// Product of unitriangular matrices with polynomial entries: both inputs
/// are "identity plus strictly-upper", as is the result.
fn matrix_poly_mul(dim: usize, a: &[MultiPoly], b: &[MultiPoly]) -> Vec<MultiPoly> {
    let idx = |i: usize, j: usize| -> usize {
        let k = j - i;
        let mut off = 0;
        for kk in 1..k {
            off += dim - kk;
        }
        off + i
    };
    let mut out = vec![MultiPoly::zero(); a.len()];
    for i in 0..dim {
        for j in i + 1..dim {
            let mut acc = a[idx(i, j)].clone();
            acc.add_assign(&b[idx(i, j)]);
            for l in i + 1..j {
                acc.add_assign(&a[idx(i, l)].mul(&b[idx(l, j)]));
            }
            out[idx(i, j)] = acc;
        }
    }
    out
}

impl CompiledOrbit {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn scheme(&self) -> WScheme {
        self.scheme
    }

    pub fn scalars(&self) -> &[HardyExpr] {
        &self.scalars
    }

    pub fn coord_polys(&self) -> &[MultiPoly] {
        &self.coord_polys
    }

    /// Evaluates one index: scalars in double-double, substitution,
    /// reduction, weight.
    pub fn point(&self, n: u64) -> Result<OrbitPoint, OrbitError> {
        self.point_at(n, Precision::Extended)
    }

    /// Same with selectable scalar precision; `Standard` evaluates the
    /// scalars in plain f64 (fractional parts of large values degrade).
    pub fn point_at(&self, n: u64, precision: Precision) -> Result<OrbitPoint, OrbitError> {
        let t = Dd::from_i64(n as i64);
        let nvars = self.scalars.len();
        let mut powers: Vec<Vec<Dd>> = Vec::with_capacity(nvars);
        for (v, f) in self.scalars.iter().enumerate() {
            let s = match precision {
                Precision::Extended => f.evaluate_dd(t)?,
                Precision::Standard => Dd::from_f64(f.evaluate(t.to_f64(), Precision::Standard)?),
            };
            if !(libm::fabs(s.to_f64()) <= MAGNITUDE_BUDGET) {
                return Err(OrbitError::NumericBudget(format!(
                    "scalar {v} at n = {n} has magnitude {:.3e}",
                    s.to_f64()
                )));
            }
            let maxd = self.max_var_degree[v] as usize;
            let mut tab = Vec::with_capacity(maxd + 1);
            tab.push(dd::ONE);
            for e in 1..=maxd {
                tab.push(tab[e - 1] * s);
            }
            powers.push(tab);
        }
        let entries: Vec<Dd> = self
            .coord_polys
            .iter()
            .map(|p| p.eval(&powers))
            .collect();
        for e in &entries {
            if !(libm::fabs(e.to_f64()) <= MAGNITUDE_BUDGET) {
                return Err(OrbitError::NumericBudget(format!(
                    "coordinate at n = {n} has magnitude {:.3e}",
                    e.to_f64()
                )));
            }
        }
        let g = GroupElement::from_entries(self.dim, entries);
        let (coords, _) = reduce_mod_lattice(&g)?;
        Ok(OrbitPoint {
            n,
            coords: coords.coords,
            weight: self.scheme.weight(n),
        })
    }

    /// Evaluates a batch of indices in order.
    pub fn points(&self, ns: &[u64]) -> Result<Vec<OrbitPoint>, OrbitError> {
        ns.iter().map(|&n| self.point(n)).collect()
    }

    /// Batch evaluation with selectable scalar precision.
    pub fn points_at(
        &self,
        ns: &[u64],
        precision: Precision,
    ) -> Result<Vec<OrbitPoint>, OrbitError> {
        ns.iter().map(|&n| self.point_at(n, precision)).collect()
    }

    /// Unreduced matrix at one index (oracle/debugging path).
    pub fn raw_element(&self, n: u64) -> Result<GroupElement, OrbitError> {
        let t = Dd::from_i64(n as i64);
        let nvars = self.scalars.len();
        let mut powers: Vec<Vec<Dd>> = Vec::with_capacity(nvars);
        for (v, f) in self.scalars.iter().enumerate() {
            let s = f.evaluate_dd(t)?;
            let maxd = self.max_var_degree[v] as usize;
            let mut tab = Vec::with_capacity(maxd + 1);
            tab.push(dd::ONE);
            for e in 1..=maxd {
                tab.push(tab[e - 1] * s);
            }
            powers.push(tab);
        }
        let entries = self.coord_polys.iter().map(|p| p.eval(&powers)).collect();
        Ok(GroupElement::from_entries(self.dim, entries))
    }
}

/// Direct (uncompiled) evaluation: powers each generator through its
/// one-parameter curve and multiplies the matrices at this single index.
/// Serves as the independent route for compiled-versus-direct checks.
pub fn direct_point(spec: &OrbitSpec, n: u64) -> Result<MalcevCoords, OrbitError> {
    let t = Dd::from_i64(n as i64);
    let mut acc = GroupElement::identity(spec.dim);
    for (a, f) in spec.generators.iter().chain(spec.poly_parts.iter()) {
        let s = f.evaluate_dd(t)?;
        let g = one_parameter_curve(a).eval(s);
        acc = acc.mul(&g)?;
    }
    let (coords, _) = reduce_mod_lattice(&acc)?;
    Ok(coords)
}

/// Iterator over progression indices `n ≡ r (mod q)` within the range.
pub fn progression_indices(
    range: (u64, u64),
    progression: (u64, u64),
) -> impl Iterator<Item = u64> + Clone {
    let (start, end) = range;
    let (q, r) = progression;
    let q = q.max(1);
    let rem = start % q;
    let delta = (r + q - rem) % q;
    let first = start.saturating_add(delta);
    (0..)
        .map(move |k| first + k * q)
        .take_while(move |&n| n <= end)
}

/// Validates a range request against the scheme domain and the cap.
pub fn check_range(
    range: (u64, u64),
    scheme: &WScheme,
    max_n: u64,
) -> Result<(), OrbitError> {
    let min = scheme.domain_start().max(2);
    if range.0 < min {
        return Err(OrbitError::RangeError(format!(
            "n_start = {} below the domain start {min}",
            range.0
        )));
    }
    if range.1 < range.0 {
        return Err(OrbitError::RangeError(format!(
            "empty range [{}, {}]",
            range.0, range.1
        )));
    }
    if range.1 > max_n {
        return Err(OrbitError::RangeError(format!(
            "n_end = {} exceeds the cap {max_n}",
            range.1
        )));
    }
    Ok(())
}

/// Splits the progression into the fixed-size chunks used for
/// deterministic parallel accumulation.
pub fn chunk_indices(range: (u64, u64), progression: (u64, u64)) -> Vec<Vec<u64>> {
    let mut chunks = Vec::new();
    let mut cur = Vec::with_capacity(CHUNK_LEN);
    for n in progression_indices(range, progression) {
        cur.push(n);
        if cur.len() == CHUNK_LEN {
            chunks.push(core::mem::take(&mut cur));
            cur.reserve(CHUNK_LEN);
        }
    }
    if !cur.is_empty() {
        chunks.push(cur);
    }
    chunks
}

/// Sequentially streams chunks of points to a consumer.
pub fn generate<F>(
    co: &CompiledOrbit,
    range: (u64, u64),
    progression: (u64, u64),
    max_n: u64,
    mut consume: F,
) -> Result<u64, OrbitError>
where
    F: FnMut(&[OrbitPoint]),
{
    check_range(range, &co.scheme(), max_n)?;
    let mut total = 0u64;
    for chunk in chunk_indices(range, progression) {
        let pts = co.points(&chunk)?;
        total += pts.len() as u64;
        consume(&pts);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::parse_expr;

    fn p(s: &str) -> HardyExpr {
        parse_expr(s).unwrap()
    }

    fn heis_spec(a: GroupElement, f: &str, scheme: WScheme, range: (u64, u64)) -> OrbitSpec {
        OrbitSpec {
            dim: 3,
            generators: vec![(a, p(f))],
            poly_parts: vec![],
            range,
            progression: (1, 0),
            scheme,
        }
    }

    #[test]
    fn compile_single_translation() {
        let spec = heis_spec(
            GroupElement::heisenberg(1.0, 0.0, 0.0),
            "t^{3/2}",
            WScheme::Identity,
            (2, 100),
        );
        let co = compile(&spec).unwrap();
        // coordinate forms (f(n), 0, 0)
        let pt = co.point(16).unwrap();
        assert!((pt.coords[0] - 0.0).abs() < 1e-12); // 16^1.5 = 64 integral
        assert_eq!(pt.coords[1], 0.0);
        assert_eq!(pt.coords[2], 0.0);
    }

    #[test]
    fn compile_shear_matches_curve_form() {
        let spec = heis_spec(
            GroupElement::heisenberg(1.0, 1.0, 0.0),
            "t^2",
            WScheme::Identity,
            (2, 2000),
        );
        let co = compile(&spec).unwrap();
        // coordinates (f, f, (f^2 - f)/2) before reduction
        let raw = co.raw_element(7).unwrap();
        assert!((raw.get(0, 1).to_f64() - 49.0).abs() < 1e-20);
        assert!((raw.get(1, 2).to_f64() - 49.0).abs() < 1e-20);
        assert!((raw.get(0, 2).to_f64() - (49.0f64 * 49.0 - 49.0) / 2.0).abs() < 1e-18);
    }

    #[test]
    fn compiled_equals_direct() {
        let spec = heis_spec(
            GroupElement::heisenberg(1.0, core::f64::consts::SQRT_2, 0.25),
            "t^{3/2}",
            WScheme::Identity,
            (2, 100),
        );
        let co = compile(&spec).unwrap();
        for n in [2u64, 5, 17, 63, 99] {
            let a = co.point(n).unwrap();
            let b = direct_point(&spec, n).unwrap();
            for (x, y) in a.coords.iter().zip(&b.coords) {
                assert!((x - y).abs() < 1e-9, "n={n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn noncommuting_is_refused() {
        let spec = OrbitSpec {
            dim: 3,
            generators: vec![
                (GroupElement::heisenberg(1.0, 0.0, 0.0), p("t")),
                (GroupElement::heisenberg(0.0, 1.0, 0.0), p("t^2")),
            ],
            poly_parts: vec![],
            range: (2, 10),
            progression: (1, 0),
            scheme: WScheme::Identity,
        };
        assert!(matches!(compile(&spec), Err(OrbitError::NonCommuting)));
        // validate still reports instead of failing
        let diags = spec.validate();
        let c = diags.iter().find(|d| d.code == "commuting").unwrap();
        assert!(!c.ok);
    }

    #[test]
    fn progression_arithmetic() {
        let ns: Vec<u64> = progression_indices((2, 10), (2, 1)).collect();
        assert_eq!(ns, vec![3, 5, 7, 9]);
        let ns: Vec<u64> = progression_indices((2, 10), (1, 0)).collect();
        assert_eq!(ns.len(), 9);
        // partition property
        let mut all: Vec<u64> = Vec::new();
        for r in 0..3 {
            all.extend(progression_indices((2, 20), (3, r)));
        }
        all.sort_unstable();
        let full: Vec<u64> = progression_indices((2, 20), (1, 0)).collect();
        assert_eq!(all, full);
    }

    #[test]
    fn golden_rotation_coordinates() {
        // circle group: single entry alpha, f = t -> frac(n * alpha)
        let alpha = 0.6180339887498949;
        let spec = OrbitSpec {
            dim: 2,
            generators: vec![(GroupElement::from_f64_entries(2, &[alpha]), p("t"))],
            poly_parts: vec![],
            range: (2, 6),
            progression: (1, 0),
            scheme: WScheme::Identity,
        };
        let co = compile(&spec).unwrap();
        let expected = [0.2360679774997898, 0.8541019662496847, 0.4721359549995796, 0.09016994374947451, 0.7082039324993694];
        for (i, n) in (2u64..=6).enumerate() {
            let pt = co.point(n).unwrap();
            assert!((pt.coords[0] - expected[i]).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn budget_violation_is_loud() {
        let spec = heis_spec(
            GroupElement::heisenberg(1.0, 1.0, 0.0),
            "t^{12}",
            WScheme::Identity,
            (2, DEFAULT_MAX_N),
        );
        let co = compile(&spec).unwrap();
        assert!(matches!(
            co.point(1_000_000),
            Err(OrbitError::NumericBudget(_))
        ));
    }

    #[test]
    fn validate_flags_window_failure_for_log() {
        let spec = OrbitSpec {
            dim: 2,
            generators: vec![(GroupElement::from_f64_entries(2, &[1.0]), p("log(t)"))],
            poly_parts: vec![],
            range: (2, 100),
            progression: (1, 0),
            scheme: WScheme::Identity,
        };
        let d = spec.validate();
        let w = d.iter().find(|x| x.code == "window_condition").unwrap();
        assert!(!w.ok);
        // with logarithmic averages the window holds
        let spec2 = OrbitSpec {
            scheme: WScheme::Log,
            ..spec
        };
        let d2 = spec2.validate();
        let w2 = d2.iter().find(|x| x.code == "window_condition").unwrap();
        assert!(w2.ok, "{}", w2.detail);
    }

    #[test]
    fn validate_integer_polys() {
        // (t^2 + t)/2 is integer-valued
        let spec = OrbitSpec {
            dim: 3,
            generators: vec![],
            poly_parts: vec![(
                GroupElement::heisenberg(0.0, 0.0, 1.0),
                p("t^2/2 + t/2"),
            )],
            range: (2, 100),
            progression: (1, 0),
            scheme: WScheme::Identity,
        };
        let d = spec.validate();
        let w = d.iter().find(|x| x.code == "poly_integer_valued").unwrap();
        assert!(w.ok, "{}", w.detail);
        let spec2 = OrbitSpec {
            poly_parts: vec![(GroupElement::heisenberg(0.0, 0.0, 1.0), p("t/3"))],
            ..spec
        };
        let d2 = spec2.validate();
        let w2 = d2.iter().find(|x| x.code == "poly_integer_valued").unwrap();
        assert!(!w2.ok);
    }
}
