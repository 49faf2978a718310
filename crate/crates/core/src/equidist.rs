//! Statistics engine: weighted Weyl sums, star and L2 discrepancy, shifted
//! correlation diagnostics, and the torus-versus-full-space criterion
//! checker.
//!
//! All accumulators are mergeable: a run is split into the orbit engine's
//! fixed-size chunks, each chunk accumulates independently, and partials
//! are merged in chunk order. Sequential and parallel drivers therefore
//! produce bit-identical results.
//!
//! Discrepancy modes: the 1-D star discrepancy uses the exact sorted-points
//! formula at any size. The multi-dimensional L2 star discrepancy uses the
//! exact O(N^2) pairwise formula up to 1e5 points; past that a binned
//! estimator snaps points to cell lower corners on a regular grid and
//! computes the exact L2 discrepancy of the snapped multiset via prefix
//! sums. Snapping moves every point by less than one cell per axis, so the
//! estimate carries a bias bounded by the empirical mass within one cell
//! width of the box boundaries, roughly `d / bins` for well-spread sets.

use crate::dd::Kahan;
use crate::hardy::HardyExpr;
use crate::normal_form::WScheme;
use crate::orbit::{self, CompiledOrbit, OrbitError, OrbitPoint, OrbitSpec};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64;

/// Largest point count for the exact O(N^2) L2 formula.
pub const EXACT_L2_MAX: usize = 100_000;

/// Bins per axis for the binned L2 estimator, by dimension. Theільк d = 3
/// table is 2^24 cells; 2^10 per axis would need gigabytes.
pub fn bins_for_dim(d: usize) -> usize {
    match d {
        1 => 1 << 10,
        2 => 1 << 10,
        _ => 1 << 8,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatError {
    EmptyInput,
    InsufficientLength { needed: usize, got: usize },
    DimensionTooLarge { dim: usize },
    /// Exact pairwise discrepancy requested beyond its size limit.
    TooManyPoints { n: usize },
    BadFrequency,
}

impl fmt::Display for StatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StatError::EmptyInput => write!(f, "empty input"),
            StatError::InsufficientLength { needed, got } => {
                write!(f, "sequence too short: need {needed}, got {got}")
            }
            StatError::DimensionTooLarge { dim } => write!(f, "dimension {dim} too large"),
            StatError::TooManyPoints { n } => {
                write!(f, "{n} points exceed the exact pairwise limit")
            }
            StatError::BadFrequency => write!(f, "frequency vector must be nonzero"),
        }
    }
}

impl core::error::Error for StatError {}

/// Integer frequency vector, not all zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frequency(Vec<i32>);

impl Frequency {
    pub fn new(k: Vec<i32>) -> Result<Self, StatError> {
        if k.is_empty() || k.iter().all(|&x| x == 0) {
            return Err(StatError::BadFrequency);
        }
        Ok(Frequency(k))
    }

    pub fn components(&self) -> &[i32] {
        &self.0
    }
}

/// All frequency vectors `0 < |k|_inf <= k_max` in dimension `d`,
/// deterministic order.
pub fn frequency_box(d: usize, k_max: i32) -> Vec<Frequency> {
    let mut out = Vec::new();
    let mut cur = vec![-k_max; d];
    loop {
        if cur.iter().any(|&x| x != 0) {
            out.push(Frequency(cur.clone()));
        }
        let mut pos = d;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] <= k_max {
                break;
            }
            cur[pos] = -k_max;
        }
    }
}

/// Scheme weights over an inclusive index range plus the telescoped
/// normalizer `sum w(n)` (the exact finite-sum value, not the analytic
/// `W(N)`, which differs by `W(n_start)`).
pub fn w_weights(scheme: &WScheme, n_start: u64, n_end: u64) -> (Vec<f64>, f64) {
    let mut ws = Vec::with_capacity((n_end + 1 - n_start) as usize);
    let mut total = Kahan::new();
    for n in n_start..=n_end {
        let w = scheme.weight(n);
        ws.push(w);
        total.add(w);
    }
    (ws, total.value())
}

/// Compensated accumulator for one weighted Weyl sum
/// `(1/sum w) * sum w(n) e(k . x_n)`.
#[derive(Clone, Debug)]
pub struct WeylAccumulator {
    k: Frequency,
    re: Kahan,
    im: Kahan,
    wsum: Kahan,
}

impl WeylAccumulator {
    pub fn new(k: Frequency) -> Self {
        WeylAccumulator {
            k,
            re: Kahan::new(),
            im: Kahan::new(),
            wsum: Kahan::new(),
        }
    }

    #[inline]
    pub fn push(&mut self, coords: &[f64], weight: f64) {
        let mut phase = 0.0f64;
        for (k, x) in self.k.components().iter().zip(coords) {
            phase += *k as f64 * *x;
        }
        let angle = core::f64::consts::TAU * phase;
        self.re.add(weight * libm::cos(angle));
        self.im.add(weight * libm::sin(angle));
        self.wsum.add(weight);
    }

    pub fn merge(&mut self, other: &WeylAccumulator) {
        self.re.merge(other.re);
        self.im.merge(other.im);
        self.wsum.merge(other.wsum);
    }

    pub fn frequency(&self) -> &Frequency {
        &self.k
    }

    pub fn value(&self) -> Complex64 {
        let w = self.wsum.value();
        if w == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(self.re.value() / w, self.im.value() / w)
        }
    }
}

/// Weighted Weyl sum over flattened `dim`-dimensional points.
pub fn weyl_sum(
    points: &[f64],
    dim: usize,
    weights: &[f64],
    k: &Frequency,
) -> Result<Complex64, StatError> {
    if points.is_empty() || dim == 0 {
        return Err(StatError::EmptyInput);
    }
    debug_assert_eq!(points.len() % dim, 0);
    debug_assert_eq!(points.len() / dim, weights.len());
    let mut acc = WeylAccumulator::new(k.clone());
    for (chunk, w) in points.chunks_exact(dim).zip(weights) {
        acc.push(chunk, *w);
    }
    Ok(acc.value())
}

/// Exact star discrepancy of 1-D points via the sorted-points formula
/// `max_i max(i/N - x_(i), x_(i) - (i-1)/N)`.
pub fn star_discrepancy_1d(points: &[f64]) -> Result<f64, StatError> {
    if points.is_empty() {
        return Err(StatError::EmptyInput);
    }
    let mut xs: Vec<f64> = points.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d = 0.0f64;
    for (i, x) in xs.iter().enumerate() {
        let up = (i as f64 + 1.0) / n - x;
        let down = x - i as f64 / n;
        if up > d {
            d = up;
        }
        if down > d {
            d = down;
        }
    }
    Ok(d)
}

/// How a discrepancy value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiscMethod {
    /// Exact sorted-points star discrepancy (1-D).
    StarExact,
    /// Exact O(N^2) pairwise L2 formula.
    L2Exact,
    /// Binned L2 estimator with this many cells per axis.
    L2Binned(usize),
}

impl DiscMethod {
    pub fn name(&self) -> String {
        match self {
            DiscMethod::StarExact => "star-exact".to_string(),
            DiscMethod::L2Exact => "l2-exact".to_string(),
            DiscMethod::L2Binned(b) => format!("l2-binned:{b}"),
        }
    }
}

/// Exact L2 star discrepancy (Warnock's formula) for small point sets, the
/// binned estimator for large ones (d <= 3 only).
pub fn l2_discrepancy(points: &[f64], dim: usize) -> Result<(f64, DiscMethod), StatError> {
    if points.is_empty() || dim == 0 {
        return Err(StatError::EmptyInput);
    }
    if dim > 6 {
        return Err(StatError::DimensionTooLarge { dim });
    }
    let n = points.len() / dim;
    if n <= EXACT_L2_MAX {
        Ok((l2_exact(points, dim), DiscMethod::L2Exact))
    } else if dim <= 3 {
        let bins = bins_for_dim(dim);
        let mut hist = BinnedHistogram::new(dim, bins);
        for p in points.chunks_exact(dim) {
            hist.push(p);
        }
        Ok((hist.l2_of_snapped(), DiscMethod::L2Binned(bins)))
    } else {
        Err(StatError::TooManyPoints { n })
    }
}

fn l2_exact(points: &[f64], dim: usize) -> f64 {
    let n = points.len() / dim;
    let nf = n as f64;
    let mut term2 = Kahan::new();
    for p in points.chunks_exact(dim) {
        let mut prod = 1.0;
        for &x in p {
            prod *= 1.0 - x * x;
        }
        term2.add(prod);
    }
    let mut term3 = Kahan::new();
    for i in 0..n {
        let pi = &points[i * dim..(i + 1) * dim];
        // diagonal k = i
        let mut prod = 1.0;
        for &x in pi {
            prod *= 1.0 - x;
        }
        term3.add(prod);
        for k in i + 1..n {
            let pk = &points[k * dim..(k + 1) * dim];
            let mut prod = 1.0;
            for (a, b) in pi.iter().zip(pk) {
                prod *= 1.0 - a.max(*b);
            }
            term3.add(2.0 * prod);
        }
    }
    let d2 = libm::pow(3.0, -(dim as f64)) - libm::exp2(1.0 - dim as f64) / nf * term2.value()
        + term3.value() / (nf * nf);
    libm::sqrt(d2.max(0.0))
}

/// Histogram over a regular grid; counts are mergeable and the exact L2
/// discrepancy of the corner-snapped multiset comes out of prefix sums.
#[derive(Clone, Debug)]
pub struct BinnedHistogram {
    dim: usize,
    bins: usize,
    counts: Vec<u32>,
    total: u64,
}

impl BinnedHistogram {
    pub fn new(dim: usize, bins: usize) -> Self {
        assert!(dim >= 1 && dim <= 3);
        BinnedHistogram {
            dim,
            bins,
            counts: vec![0u32; bins.pow(dim as u32)],
            total: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, coords: &[f64]) {
        let b = self.bins;
        let mut idx = 0usize;
        for &x in coords {
            let c = ((x * b as f64) as usize).min(b - 1);
            idx = idx * b + c;
        }
        self.counts[idx] += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &BinnedHistogram) {
        debug_assert_eq!(self.counts.len(), other.counts.len());
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += *b;
        }
        self.total += other.total;
    }

    /// Exact L2 star discrepancy of the multiset with every point snapped
    /// to its cell's lower corner.
    pub fn l2_of_snapped(&self) -> f64 {
        let b = self.bins;
        let d = self.dim;
        let nf = self.total as f64;
        // In-place prefix sums along each axis.
        let mut prefix = self.counts.clone();
        let size = prefix.len();
        for axis in 0..d {
            // stride pattern for row-major [b; d]
            let stride = b.pow((d - 1 - axis) as u32);
            let block = stride * b;
            for start in 0..size / block {
                let base = start * block;
                for inner in 0..stride {
                    let mut run = 0u32;
                    for c in 0..b {
                        let i = base + c * stride + inner;
                        run += prefix[i];
                        prefix[i] = run;
                    }
                }
            }
        }
        // I1 per axis value: integral of x over the cell, times B.
        let bf = b as f64;
        let mut term1 = Kahan::new();
        let mut term2 = Kahan::new();
        let inv_cells = libm::pow(bf, -(d as f64));
        let mut coords = vec![0usize; d];
        for (i, &pc) in prefix.iter().enumerate() {
            if pc == 0 {
                // zero prefix contributes nothing to terms 1 and 2
                // (but continue decoding for coords bookkeeping)
            }
            let p = pc as f64 / nf;
            // decode cell coordinates
            let mut rem = i;
            for a in (0..d).rev() {
                coords[a] = rem % b;
                rem /= b;
            }
            if pc != 0 {
                term1.add(p * p * inv_cells);
                let mut i1 = 1.0;
                for &c in &coords {
                    i1 *= (2 * c + 1) as f64 / (2.0 * bf * bf);
                }
                term2.add(p * i1);
            }
        }
        let d2 = term1.value() - 2.0 * term2.value() + libm::pow(3.0, -(d as f64));
        libm::sqrt(d2.max(0.0))
    }
}

/// Shifted self-correlations `A(h)` of a unimodular sequence under a
/// summation scheme, with the finite-N van der Corput bound check.
#[derive(Clone, Debug)]
pub struct CorrelationTable {
    pub h_max: usize,
    /// A(h) for h = 1..=h_max.
    pub a: Vec<Complex64>,
    /// A(0) (real for unimodular input).
    pub a0: f64,
    /// Weighted average of the sequence itself.
    pub weighted_avg: Complex64,
    pub p_total: f64,
    pub p_last: f64,
    /// p_n / P_n at the quarter points of the range (monotone tail stat).
    pub tail_ratios: Vec<f64>,
    /// |avg|^2 and the triangle-weighted correlation average with slack.
    pub bound_lhs: f64,
    pub bound_rhs: f64,
    pub bound_slack: f64,
    pub bound_ok: bool,
}

/// Computes the correlation table with `p_n = w(n)` from the scheme,
/// aligned so `values[i]` is the sequence member at index `n_start + i`.
pub fn vdc_correlations(
    values: &[Complex64],
    scheme: &WScheme,
    n_start: u64,
    h_max: usize,
) -> Result<CorrelationTable, StatError> {
    if h_max < 1 {
        return Err(StatError::InsufficientLength { needed: 1, got: 0 });
    }
    let n = values.len();
    if n < 10 * h_max {
        return Err(StatError::InsufficientLength {
            needed: 10 * h_max,
            got: n,
        });
    }
    let (ws, p_total) = w_weights(scheme, n_start, n_start + n as u64 - 1);
    let mut avg_re = Kahan::new();
    let mut avg_im = Kahan::new();
    let mut a0 = Kahan::new();
    for (v, &w) in values.iter().zip(&ws) {
        avg_re.add(w * v.re);
        avg_im.add(w * v.im);
        a0.add(w * v.norm_sqr());
    }
    let weighted_avg = Complex64::new(avg_re.value() / p_total, avg_im.value() / p_total);
    let a0 = a0.value() / p_total;
    let mut a = Vec::with_capacity(h_max);
    for h in 1..=h_max {
        let mut re = Kahan::new();
        let mut im = Kahan::new();
        for i in 0..n - h {
            let z = values[i + h] * values[i].conj();
            re.add(ws[i] * z.re);
            im.add(ws[i] * z.im);
        }
        a.push(Complex64::new(re.value() / p_total, im.value() / p_total));
    }
    // Triangle-weighted average over |h| <= H plus the slack carried by the
    // finite-N error terms.
    let hf = h_max as f64;
    let mut rhs = a0 / hf;
    for (h, ah) in a.iter().enumerate() {
        let h = h + 1;
        rhs += 2.0 * ((hf - h as f64) / hf) * ah.re / hf;
    }
    let p_last = *ws.last().unwrap();
    let slack = 10.0 * (p_last / p_total + hf / n as f64);
    let lhs = weighted_avg.norm_sqr();
    let mut tail_ratios = Vec::new();
    let mut run = Kahan::new();
    let quarters = [n / 4, n / 2, 3 * n / 4, n];
    let mut qi = 0;
    for (i, &w) in ws.iter().enumerate() {
        run.add(w);
        if qi < quarters.len() && i + 1 == quarters[qi].max(1) {
            tail_ratios.push(w / run.value());
            qi += 1;
        }
    }
    Ok(CorrelationTable {
        h_max,
        a,
        a0,
        weighted_avg,
        p_total,
        p_last,
        tail_ratios,
        bound_lhs: lhs,
        bound_rhs: rhs,
        bound_slack: slack,
        bound_ok: lhs <= rhs + slack + 1.0e-6,
    })
}

/// Verdict thresholds; defaults are the calibrated desk-scale values and
/// every report carries the numbers it used.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Thresholds {
    pub weyl: f64,
    pub discrepancy: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            weyl: 0.02,
            discrepancy: 0.02,
        }
    }
}

/// One Weyl sum line of the report.
#[derive(Clone, Debug)]
pub struct WeylEntry {
    pub k: Vec<i32>,
    pub value: Complex64,
}

/// Result of the torus-versus-full-space criterion check.
#[derive(Clone, Debug)]
pub struct EquidistReport {
    pub weyl: Vec<WeylEntry>,
    pub torus_discrepancy: f64,
    pub torus_method: DiscMethod,
    pub full_discrepancy: f64,
    pub full_method: DiscMethod,
    pub torus_equidistributed: bool,
    pub full_equidistributed: bool,
    pub criterion_consistent: bool,
    pub scheme: WScheme,
    pub n_points: u64,
    pub weight_total: f64,
    pub thresholds: Thresholds,
    pub max_weyl_abs: f64,
}

/// Point collector for one coordinate block (torus or full).
#[derive(Clone, Debug)]
enum DiscCollector {
    /// Keep the raw values (exact methods downstream).
    Values { dim: usize, data: Vec<f64> },
    Binned(BinnedHistogram),
}

impl DiscCollector {
    fn for_run(dim: usize, expected: u64) -> Result<Self, StatError> {
        if dim == 1 || expected as usize <= EXACT_L2_MAX {
            Ok(DiscCollector::Values {
                dim,
                data: Vec::new(),
            })
        } else if dim <= 3 {
            Ok(DiscCollector::Binned(BinnedHistogram::new(
                dim,
                bins_for_dim(dim),
            )))
        } else {
            Err(StatError::DimensionTooLarge { dim })
        }
    }

    fn push(&mut self, coords: &[f64]) {
        match self {
            DiscCollector::Values { data, .. } => data.extend_from_slice(coords),
            DiscCollector::Binned(h) => h.push(coords),
        }
    }

    fn merge(&mut self, other: &DiscCollector) {
        match (self, other) {
            (DiscCollector::Values { data, .. }, DiscCollector::Values { data: b, .. }) => {
                data.extend_from_slice(b)
            }
            (DiscCollector::Binned(a), DiscCollector::Binned(b)) => a.merge(b),
            _ => unreachable!("collector modes fixed at construction"),
        }
    }

    fn finalize(&self) -> Result<(f64, DiscMethod), StatError> {
        match self {
            DiscCollector::Values { dim, data } => {
                if *dim == 1 {
                    Ok((star_discrepancy_1d(data)?, DiscMethod::StarExact))
                } else {
                    l2_discrepancy(data, *dim)
                }
            }
            DiscCollector::Binned(h) => {
                Ok((h.l2_of_snapped(), DiscMethod::L2Binned(h.bins)))
            }
        }
    }
}

/// Mergeable bundle of every statistic the criterion check needs.
#[derive(Clone, Debug)]
pub struct EquidistAccumulator {
    dim: usize,
    weyl: Vec<WeylAccumulator>,
    torus: DiscCollector,
    full: DiscCollector,
    weight: Kahan,
    count: u64,
}

impl EquidistAccumulator {
    pub fn for_run(dim: usize, k_max: i32, expected: u64) -> Result<Self, StatError> {
        let torus_dim = dim - 1;
        let full_dim = dim * (dim - 1) / 2;
        Ok(EquidistAccumulator {
            dim,
            weyl: frequency_box(torus_dim, k_max)
                .into_iter()
                .map(WeylAccumulator::new)
                .collect(),
            torus: DiscCollector::for_run(torus_dim, expected)?,
            full: DiscCollector::for_run(full_dim, expected)?,
            weight: Kahan::new(),
            count: 0,
        })
    }

    pub fn absorb(&mut self, points: &[OrbitPoint]) {
        for p in points {
            let torus = p.torus(self.dim);
            for acc in &mut self.weyl {
                acc.push(torus, p.weight);
            }
            self.torus.push(torus);
            self.full.push(&p.coords);
            self.weight.add(p.weight);
            self.count += 1;
        }
    }

    pub fn merge(&mut self, other: &EquidistAccumulator) {
        for (a, b) in self.weyl.iter_mut().zip(&other.weyl) {
            a.merge(b);
        }
        self.torus.merge(&other.torus);
        self.full.merge(&other.full);
        self.weight.merge(other.weight);
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Running Weyl sums (for series taps mid-run).
    pub fn running_weyl(&self) -> Vec<WeylEntry> {
        self.weyl
            .iter()
            .map(|a| WeylEntry {
                k: a.frequency().components().to_vec(),
                value: a.value(),
            })
            .collect()
    }

    pub fn finalize(
        &self,
        scheme: WScheme,
        thresholds: Thresholds,
    ) -> Result<EquidistReport, StatError> {
        if self.count == 0 {
            return Err(StatError::EmptyInput);
        }
        let weyl: Vec<WeylEntry> = self
            .weyl
            .iter()
            .map(|a| WeylEntry {
                k: a.frequency().components().to_vec(),
                value: a.value(),
            })
            .collect();
        let max_weyl_abs = weyl.iter().map(|e| e.value.norm()).fold(0.0, f64::max);
        let (torus_disc, torus_method) = self.torus.finalize()?;
        let (full_disc, full_method) = self.full.finalize()?;
        let torus_ok = max_weyl_abs < thresholds.weyl && torus_disc < thresholds.discrepancy;
        let full_ok = full_disc < thresholds.discrepancy;
        Ok(EquidistReport {
            weyl,
            torus_discrepancy: torus_disc,
            torus_method,
            full_discrepancy: full_disc,
            full_method,
            torus_equidistributed: torus_ok,
            full_equidistributed: full_ok,
            criterion_consistent: torus_ok == full_ok,
            scheme,
            n_points: self.count,
            weight_total: self.weight.value(),
            thresholds,
            max_weyl_abs,
        })
    }
}

/// Errors from the criterion pipeline.
#[derive(Clone, Debug)]
pub enum EquidistError {
    Orbit(OrbitError),
    Stat(StatError),
}

impl fmt::Display for EquidistError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EquidistError::Orbit(e) => write!(f, "{e}"),
            EquidistError::Stat(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for EquidistError {}

impl From<OrbitError> for EquidistError {
    fn from(e: OrbitError) -> Self {
        EquidistError::Orbit(e)
    }
}

impl From<StatError> for EquidistError {
    fn from(e: StatError) -> Self {
        EquidistError::Stat(e)
    }
}

/// Runs the orbit and checks the equidistribution criterion: the torus
/// verdict from W-averaged Weyl sums over all frequencies
/// `0 < |k|_inf <= k_max` plus torus discrepancy, the full-space verdict
/// from full-coordinate discrepancy, and their consistency.
pub fn criterion_check(
    spec: &OrbitSpec,
    k_max: i32,
    thresholds: Thresholds,
    max_n: u64,
) -> Result<EquidistReport, EquidistError> {
    let co = orbit::compile(spec)?;
    run_criterion(&co, spec.range, spec.progression, k_max, thresholds, max_n)
}

/// Same, driving an already-compiled orbit (sequential chunk fold).
pub fn run_criterion(
    co: &CompiledOrbit,
    range: (u64, u64),
    progression: (u64, u64),
    k_max: i32,
    thresholds: Thresholds,
    max_n: u64,
) -> Result<EquidistReport, EquidistError> {
    orbit::check_range(range, &co.scheme(), max_n)?;
    let expected = orbit::progression_indices(range, progression).count() as u64;
    let mut total = EquidistAccumulator::for_run(co.dim(), k_max, expected)?;
    // Absorption happens strictly in chunk order; a parallel driver may
    // evaluate the chunks concurrently but must feed them in this order to
    // stay bit-identical.
    for chunk in orbit::chunk_indices(range, progression) {
        let pts = co.points(&chunk)?;
        total.absorb(&pts);
    }
    total
        .finalize(co.scheme(), thresholds)
        .map_err(EquidistError::from)
}

/// Unimodular character sequence `e(k . torus(n))` of an orbit, for the
/// correlation diagnostics.
pub fn character_sequence(
    co: &CompiledOrbit,
    range: (u64, u64),
    progression: (u64, u64),
    k: &Frequency,
    max_n: u64,
) -> Result<Vec<Complex64>, EquidistError> {
    orbit::check_range(range, &co.scheme(), max_n)?;
    let mut out = Vec::new();
    for chunk in orbit::chunk_indices(range, progression) {
        for p in co.points(&chunk).map_err(EquidistError::from)? {
            let mut phase = 0.0;
            for (kc, x) in k.components().iter().zip(p.torus(co.dim())) {
                phase += *kc as f64 * *x;
            }
            let angle = core::f64::consts::TAU * phase;
            out.push(Complex64::new(libm::cos(angle), libm::sin(angle)));
        }
    }
    Ok(out)
}

/// Convenience: 1-D fractional parts of a Hardy expression along a range
/// (the abelian / circle case without the group machinery).
pub fn fractional_parts(
    f: &HardyExpr,
    n_start: u64,
    n_end: u64,
) -> Result<Vec<f64>, EquidistError> {
    let mut out = Vec::with_capacity((n_end + 1 - n_start) as usize);
    for n in n_start..=n_end {
        let v = f
            .evaluate_dd(crate::dd::Dd::from_i64(n as i64))
            .map_err(|e| EquidistError::Orbit(OrbitError::Hardy(e)))?;
        out.push(v.fract().to_f64());
    }
    Ok(out)
}
