//! Exhaustive point counting on projective schemes over finite fields.
//!
//! Points of `Proj` are split into charts: chart `j` has `x_0 = ... =
//! x_{j-1} = 0`, `x_j = 1` and the later coordinates free. Within a chart,
//! free coordinates that no equation mentions contribute a factor `Q`, one
//! used coordinate (the innermost) is solved by root counting, and the
//! remaining ones are enumerated. The evaluation budget counts enumerated
//! assignments of those outer coordinates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::arith::checked_pow;
use crate::ffield::{extend, FieldDesc, FieldError};
use crate::polysys::HomIdeal;

mod zech;

pub use zech::{Code, ZechField, MAX_TABLE_FIELD, ZERO};

/// Default cap on enumerated outer assignments per `count_points` call.
pub const DEFAULT_BUDGET: u64 = 1 << 34;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("enumeration needs {needed} assignments, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("field of size {0} is too large for log tables")]
    FieldTooLarge(u64),
    #[error("point count overflows 64 bits")]
    Overflow,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("cache: {0}")]
    Cache(String),
    #[error("counts are inconsistent: {0}")]
    Inconsistent(String),
}

/// How the innermost coordinate is solved for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum InnerMethod {
    /// Evaluation for tiny fields, root counting otherwise.
    #[default]
    Auto,
    RootCount,
    Evaluate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub inner: InnerMethod,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { budget: DEFAULT_BUDGET, inner: InnerMethod::Auto }
    }
}

#[derive(Clone, Debug)]
struct Term {
    coeff: Code,
    /// `(outer position, exponent)` with positive exponents.
    outer: Vec<(usize, u32)>,
    inner_exp: u32,
}

#[derive(Clone, Debug)]
struct Chart {
    /// Free coordinates not mentioned by any equation.
    unused: u32,
    outer_count: usize,
    has_inner: bool,
    inner_degree: usize,
    /// Equations after substitution; empty when the chart is all of `A^free`.
    polys: Vec<Vec<Term>>,
    /// Some equation became a nonzero constant.
    empty: bool,
}

/// A contiguous range of the first outer coordinate of one chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkItem {
    pub chart: usize,
    pub lo: u64,
    pub hi: u64,
}

/// Compiled form of one `count_points` call: the field tables and the
/// per-chart equations.
#[derive(Clone, Debug)]
pub struct CountPlan {
    q_ext: u64,
    field: Option<ZechField>,
    charts: Vec<Chart>,
    inner: InnerMethod,
}

/// Compile the charts of `ideal` over the degree-`n` extension of its field.
pub fn plan(ideal: &HomIdeal<FieldDesc>, n: u32, opts: &CountOptions) -> Result<CountPlan, CountError> {
    let base = &ideal.ring().field;
    let q_ext = checked_pow(base.size(), n as u64).ok_or(CountError::Overflow)?;
    let nvars = ideal.ring().nvars;
    let gens = ideal.generators();
    let needs_field = !gens.is_empty();
    let (ext, field) = if needs_field {
        let ext = extend(base, n)?;
        let zf = ZechField::new(&ext.field).ok_or(CountError::FieldTooLarge(q_ext))?;
        (Some(ext), Some(zf))
    } else {
        (None, None)
    };

    let mut charts = Vec::with_capacity(nvars);
    for j in 0..nvars {
        let free: Vec<usize> = (j + 1..nvars).collect();
        // substitute and collect coefficients per remaining monomial
        let mut polys: Vec<BTreeMap<Vec<u32>, Code>> = Vec::new();
        let mut empty = false;
        if let (Some(ext), Some(zf)) = (&ext, &field) {
            for g in gens {
                let mut acc: BTreeMap<Vec<u32>, Code> = BTreeMap::new();
                for (m, c) in g.terms() {
                    if m[..j].iter().any(|&e| e > 0) {
                        continue;
                    }
                    let code = zf.encode(&ext.embed(c));
                    let key = m[j + 1..].to_vec();
                    let slot = acc.entry(key).or_insert(ZERO);
                    *slot = zf.add(*slot, code);
                }
                acc.retain(|_, c| *c != ZERO);
                if acc.is_empty() {
                    continue;
                }
                if acc.len() == 1 && acc.keys().next().unwrap().iter().all(|&e| e == 0) {
                    empty = true;
                }
                polys.push(acc);
            }
        }
        let mut used = vec![false; free.len()];
        for p in &polys {
            for m in p.keys() {
                for (i, &e) in m.iter().enumerate() {
                    if e > 0 {
                        used[i] = true;
                    }
                }
            }
        }
        let used_idx: Vec<usize> = (0..free.len()).filter(|&i| used[i]).collect();
        let unused = (free.len() - used_idx.len()) as u32;
        // innermost: the used coordinate of least maximal degree, last on ties
        let inner = used_idx
            .iter()
            .copied()
            .min_by_key(|&i| {
                let deg = polys.iter().flat_map(|p| p.keys()).map(|m| m[i]).max().unwrap_or(0);
                (deg, core::cmp::Reverse(i))
            });
        let outer: Vec<usize> = used_idx.iter().copied().filter(|&i| Some(i) != inner).collect();
        let mut inner_degree = 0;
        let compiled: Vec<Vec<Term>> = polys
            .iter()
            .map(|p| {
                p.iter()
                    .map(|(m, &c)| {
                        let inner_exp = inner.map_or(0, |i| m[i]);
                        inner_degree = inner_degree.max(inner_exp as usize);
                        Term {
                            coeff: c,
                            outer: outer
                                .iter()
                                .enumerate()
                                .filter(|(_, &v)| m[v] > 0)
                                .map(|(pos, &v)| (pos, m[v]))
                                .collect(),
                            inner_exp,
                        }
                    })
                    .collect()
            })
            .collect();
        charts.push(Chart {
            unused,
            outer_count: outer.len(),
            has_inner: inner.is_some(),
            inner_degree,
            polys: compiled,
            empty,
        });
    }
    let plan = CountPlan { q_ext, field, charts, inner: opts.inner };
    let needed = plan.outer_assignments();
    if needed > opts.budget as u128 {
        return Err(CountError::BudgetExceeded { needed, budget: opts.budget });
    }
    Ok(plan)
}

impl CountPlan {
    /// Size `Q` of the field being counted over.
    pub fn field_size(&self) -> u64 {
        self.q_ext
    }

    /// Total number of enumerated outer assignments, saturating.
    pub fn outer_assignments(&self) -> u128 {
        let q = self.q_ext as u128;
        self.charts
            .iter()
            .filter(|c| !c.empty && c.has_inner)
            .map(|c| (0..c.outer_count).fold(1u128, |a, _| a.saturating_mul(q)))
            .fold(0u128, |a, b| a.saturating_add(b))
    }

    /// Split every chart into about `chunks` ranges of its first outer coordinate.
    pub fn work_items(&self, chunks: u64) -> Vec<WorkItem> {
        let chunks = chunks.max(1);
        let mut out = Vec::new();
        for (j, c) in self.charts.iter().enumerate() {
            if c.outer_count == 0 || c.empty {
                out.push(WorkItem { chart: j, lo: 0, hi: 1 });
                continue;
            }
            let q = self.q_ext;
            let step = q.div_ceil(chunks.min(q));
            let mut lo = 0;
            while lo < q {
                let hi = (lo + step).min(q);
                out.push(WorkItem { chart: j, lo, hi });
                lo = hi;
            }
        }
        out
    }

    fn use_evaluation(&self, chart: &Chart) -> bool {
        match self.inner {
            InnerMethod::Evaluate => true,
            InnerMethod::RootCount => false,
            InnerMethod::Auto => {
                let d = chart.inner_degree as u64;
                self.q_ext <= 8 || self.q_ext <= d * d * 2
            }
        }
    }

    /// Points contributed by one work item.
    pub fn run_item(&self, item: &WorkItem) -> Result<u64, CountError> {
        let chart = &self.charts[item.chart];
        if chart.empty {
            return Ok(0);
        }
        let q = self.q_ext;
        let factor = checked_pow(q, chart.unused as u64).ok_or(CountError::Overflow)?;
        if !chart.has_inner {
            // no equation survives on this chart
            return Ok(if item.lo == 0 { factor } else { 0 });
        }
        let zf = self.field.as_ref().expect("charts with equations have a field");
        let evaluate = self.use_evaluation(chart);
        let k = chart.outer_count;
        let mut idx = vec![0u64; k];
        let mut vals = vec![ZERO; k];
        if k > 0 {
            idx[0] = item.lo;
            vals[0] = zf.nth(item.lo);
        }
        let mut coeffs: Vec<Vec<Code>> = chart.polys.iter().map(|_| vec![ZERO; chart.inner_degree + 1]).collect();
        let mut total: u64 = 0;
        loop {
            // specialize the outer coordinates
            for (p, out) in chart.polys.iter().zip(coeffs.iter_mut()) {
                out.iter_mut().for_each(|c| *c = ZERO);
                for t in p {
                    let mut v = t.coeff;
                    for &(pos, e) in &t.outer {
                        v = zf.mul(v, zf.pow(vals[pos], e));
                        if v == ZERO {
                            break;
                        }
                    }
                    let slot = &mut out[t.inner_exp as usize];
                    *slot = zf.add(*slot, v);
                }
            }
            let roots = if evaluate {
                count_by_evaluation(zf, &coeffs)
            } else {
                count_by_roots(zf, &coeffs)
            };
            total = total.checked_add(roots).ok_or(CountError::Overflow)?;

            // advance the odometer, last coordinate fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    return total.checked_mul(factor).ok_or(CountError::Overflow);
                }
                pos -= 1;
                idx[pos] += 1;
                let limit = if pos == 0 { item.hi } else { q };
                if idx[pos] < limit {
                    vals[pos] = zf.nth(idx[pos]);
                    break;
                }
                if pos == 0 {
                    return total.checked_mul(factor).ok_or(CountError::Overflow);
                }
                idx[pos] = 0;
                vals[pos] = ZERO;
            }
        }
    }

    /// Sequential sum over all work items.
    pub fn run(&self) -> Result<u64, CountError> {
        let mut total: u64 = 0;
        for item in self.work_items(1) {
            total = total.checked_add(self.run_item(&item)?).ok_or(CountError::Overflow)?;
        }
        Ok(total)
    }
}

fn count_by_evaluation(zf: &ZechField, coeffs: &[Vec<Code>]) -> u64 {
    let q = zf.size();
    let mut n = 0;
    'outer: for i in 0..q {
        let y = zf.nth(i);
        for c in coeffs {
            if zf.poly_eval(c, y) != ZERO {
                continue 'outer;
            }
        }
        n += 1;
    }
    n
}

fn count_by_roots(zf: &ZechField, coeffs: &[Vec<Code>]) -> u64 {
    let mut g: Vec<Code> = Vec::new();
    for c in coeffs {
        g = zf.poly_gcd(&g, c);
        if g.len() == 1 {
            return 0;
        }
    }
    if g.is_empty() {
        zf.size()
    } else {
        zf.count_roots(&g)
    }
}

/// `#X(F_{q^n})` for `X = Proj(S/I)`.
pub fn count_points(ideal: &HomIdeal<FieldDesc>, n: u32, opts: &CountOptions) -> Result<u64, CountError> {
    plan(ideal, n, opts)?.run()
}

/// `#P^m(F_Q)`.
pub fn projective_space_count(m: u32, q: u64) -> Option<u64> {
    let mut total: u64 = 0;
    for i in 0..=m {
        total = total.checked_add(checked_pow(q, i as u64)?)?;
    }
    Some(total)
}

/// Counts `N_1..N_m` of one variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSeries {
    pub q: u64,
    pub counts: Vec<u64>,
    pub variety_hash: String,
}

fn mobius(n: u64) -> i64 {
    let f = crate::arith::prime_factors(n);
    let mut m = n;
    for &p in &f {
        m /= p;
        if m % p == 0 {
            return 0;
        }
    }
    if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

impl CountSeries {
    /// Number of closed points of degree `d` for each `d <= counts.len()`,
    /// by Möbius inversion of `N_n = sum_{d | n} d a_d`. Only meaningful
    /// after [`CountSeries::validate`] succeeds.
    pub fn closed_points(&self) -> Vec<i128> {
        let m = self.counts.len() as u64;
        (1..=m)
            .map(|d| {
                let s: i128 = (1..=d)
                    .filter(|k| d % k == 0)
                    .map(|k| mobius(d / k) as i128 * self.counts[(k - 1) as usize] as i128)
                    .sum();
                s / d as i128
            })
            .collect()
    }

    /// Sanity checks that the counts come from a scheme in `P^ambient_dim`.
    pub fn validate(&self, ambient_dim: u32) -> Result<(), CountError> {
        for (i, &c) in self.counts.iter().enumerate() {
            let n = i as u64 + 1;
            if let Some(qn) = checked_pow(self.q, n) {
                if let Some(bound) = projective_space_count(ambient_dim, qn) {
                    if c > bound {
                        return Err(CountError::Inconsistent(format!("N_{n} = {c} exceeds #P^{ambient_dim}")));
                    }
                }
            }
        }
        let m = self.counts.len() as u64;
        for d in 1..=m {
            let s: i128 = (1..=d)
                .filter(|k| d % k == 0)
                .map(|k| mobius(d / k) as i128 * self.counts[(k - 1) as usize] as i128)
                .sum();
            if s < 0 || s % d as i128 != 0 {
                return Err(CountError::Inconsistent(format!("degree-{d} closed points: {s}/{d}")));
            }
        }
        Ok(())
    }
}

/// Persistent store of counts keyed by variety hash and extension degree.
pub trait CountCache {
    fn get(&self, hash: &str, n: u32) -> Option<u64>;
    fn put(&mut self, hash: &str, n: u32, count: u64) -> Result<(), CountError>;
}

/// In-memory cache, also the reference for cache transparency tests.
#[derive(Clone, Debug, Default)]
pub struct MemoryCache {
    pub entries: BTreeMap<(String, u32), u64>,
}

impl CountCache for MemoryCache {
    fn get(&self, hash: &str, n: u32) -> Option<u64> {
        self.entries.get(&(String::from(hash), n)).copied()
    }
    fn put(&mut self, hash: &str, n: u32, count: u64) -> Result<(), CountError> {
        self.entries.insert((String::from(hash), n), count);
        Ok(())
    }
}

/// Runs the work items of a plan; the std crate supplies a parallel one.
pub trait Executor {
    fn execute(&self, plan: &CountPlan) -> Result<u64, CountError>;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn execute(&self, plan: &CountPlan) -> Result<u64, CountError> {
        plan.run()
    }
}

/// Failure part way up a tower: the counts that did complete, and why.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("counting stopped after n = {}: {source}", completed.len())]
pub struct TowerError {
    pub completed: Vec<u64>,
    pub source: CountError,
}

/// `N_1..N_{n_max}`, reading and filling `cache` under `hash`.
pub fn count_tower(
    ideal: &HomIdeal<FieldDesc>,
    n_max: u32,
    hash: &str,
    cache: Option<&mut dyn CountCache>,
    opts: &CountOptions,
    exec: &dyn Executor,
) -> Result<CountSeries, TowerError> {
    let mut cache = cache;
    let mut counts = Vec::new();
    for n in 1..=n_max {
        if let Some(c) = cache.as_ref().and_then(|c| c.get(hash, n)) {
            counts.push(c);
            continue;
        }
        let res = plan(ideal, n, opts).and_then(|p| exec.execute(&p));
        match res {
            Ok(c) => {
                if let Some(cache) = cache.as_mut() {
                    cache.put(hash, n, c).map_err(|e| TowerError { completed: counts.clone(), source: e })?;
                }
                counts.push(c);
            }
            Err(e) => return Err(TowerError { completed: counts, source: e }),
        }
    }
    Ok(CountSeries { q: ideal.ring().field.size(), counts, variety_hash: String::from(hash) })
}

/// Deterministic text describing the field and the reduced Gröbner basis;
/// the std crate hashes it into the cache key.
pub fn canonical_description(ideal: &HomIdeal<FieldDesc>) -> String {
    let ring = ideal.ring();
    let f = &ring.field;
    let mut s = format!("p={};e={};modulus={:?};nvars={};", f.p(), f.e(), f.modulus(), ring.nvars);
    let basis = ideal.with_order(crate::polysys::TermOrder::DegRevLex).groebner_basis();
    let grevlex = ring.with_order(crate::polysys::TermOrder::DegRevLex);
    for g in &basis {
        s.push_str(&grevlex.format(g));
        s.push(';');
    }
    s
}
