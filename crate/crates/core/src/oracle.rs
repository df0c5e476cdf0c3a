//! Exhaustive ground-truth engine for solutions of an equation inside a
//! finite set.
//!
//! Three enumeration routes are provided and must agree exactly:
//! depth-first search with partial-sum interval pruning, a meet-in-the-middle
//! join over a prefix/suffix split of the variables, and naive full
//! enumeration. Every route reports the lexicographically smallest accepted
//! assignment (positions in canonical equation order, values ascending), so
//! the first witness is independent of the route and of the thread count.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::equation::{is_trivial, Equation, SolutionClass, SolutionKind};
use crate::error::{Error, Result};

/// Default enumeration budget, in search-tree nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest right-half table the automatic strategy will build.
const MITM_TABLE_LIMIT: u128 = 1 << 22;

/// Which assignments count as solutions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Every non-trivial solution.
    #[default]
    All,
    /// Only solutions whose values are pairwise distinct.
    Distinct,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::All => "all",
            Mode::Distinct => "distinct",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Auto,
    Dfs,
    MeetInMiddle,
    Naive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionQuery {
    equation: Equation,
    ground_set: Vec<i64>,
    mode: Mode,
    budget: u64,
    strategy: Strategy,
    parallel: bool,
}

impl SolutionQuery {
    /// Sorts the ground set; duplicates, an empty set and values large enough
    /// to overflow `sum |c_i| * max |x|` in 64 bits are rejected.
    pub fn new(equation: Equation, ground_set: impl Into<Vec<i64>>) -> Result<Self> {
        let mut set: Vec<i64> = ground_set.into();
        if set.is_empty() {
            return Err(Error::InvalidSet("ground set is empty".into()));
        }
        set.sort_unstable();
        if let Some(w) = set.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidSet(format!("duplicate value {}", w[0])));
        }
        check_magnitude(equation.coeffs(), &set)?;
        Ok(SolutionQuery {
            equation,
            ground_set: set,
            mode: Mode::All,
            budget: DEFAULT_BUDGET,
            strategy: Strategy::Auto,
            parallel: false,
        })
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_distinct_variables(self, distinct: bool) -> Self {
        self.with_mode(if distinct { Mode::Distinct } else { Mode::All })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget.max(1);
        self
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Split the first variable's range across the rayon pool.
    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn equation(&self) -> &Equation {
        &self.equation
    }

    pub fn ground_set(&self) -> &[i64] {
        &self.ground_set
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn distinct_variables(&self) -> bool {
        self.mode == Mode::Distinct
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    fn problem(&self) -> Problem<'_> {
        Problem {
            coeffs: self.equation.coeffs(),
            set: &self.ground_set,
            accept: match self.mode {
                Mode::All => Accept::NonTrivial,
                Mode::Distinct => Accept::Distinct,
            },
            extra: Extra::default(),
            budget: self.budget,
        }
    }
}

fn check_magnitude(coeffs: &[i64], set: &[i64]) -> Result<()> {
    let max_abs = set
        .iter()
        .map(|v| v.unsigned_abs() as u128)
        .max()
        .unwrap_or(0);
    let bound = coeffs
        .iter()
        .try_fold(0u128, |acc, &c| {
            (c.unsigned_abs() as u128)
                .checked_mul(max_abs)
                .and_then(|t| acc.checked_add(t))
        })
        .ok_or_else(|| Error::Overflow("coefficient times element".into()))?;
    if bound > i64::MAX as u128 {
        return Err(Error::Overflow(format!(
            "sum |c_i| * max|x| = {bound} exceeds 64-bit range"
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Accept {
    NonTrivial,
    Distinct,
    Any,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Extra {
    /// Accepted assignments must use this value somewhere.
    pub must_use: Option<i64>,
    /// Accepted assignments must differ at these two positions.
    pub differ: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Problem<'a> {
    pub coeffs: &'a [i64],
    pub set: &'a [i64],
    pub accept: Accept,
    pub extra: Extra,
    pub budget: u64,
}

impl Problem<'_> {
    fn accepts(&self, x: &[i64]) -> bool {
        if let Some(v) = self.extra.must_use {
            if !x.contains(&v) {
                return false;
            }
        }
        if let Some((p, q)) = self.extra.differ {
            if x[p] == x[q] {
                return false;
            }
        }
        match self.accept {
            Accept::NonTrivial => !is_trivial(self.coeffs, x),
            Accept::Distinct => all_distinct(x),
            Accept::Any => true,
        }
    }

    /// Values nondecreasing inside every run of equal coefficients.
    fn is_canonical(&self, x: &[i64]) -> bool {
        (1..x.len()).all(|i| self.coeffs[i] != self.coeffs[i - 1] || x[i - 1] <= x[i])
    }

    fn distinct(&self) -> bool {
        self.accept == Accept::Distinct
    }
}

fn all_distinct(x: &[i64]) -> bool {
    (0..x.len()).all(|i| !x[..i].contains(&x[i]))
}

/// Ordered and canonical solution counts.
///
/// `canonical` counts assignments up to permutation of positions that carry
/// equal coefficients (values nondecreasing inside each such run).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionCount {
    pub ordered: u128,
    pub canonical: u128,
}

impl std::ops::Add for SolutionCount {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        SolutionCount {
            ordered: self.ordered + o.ordered,
            canonical: self.canonical + o.canonical,
        }
    }
}

struct Meter<'a> {
    local: u64,
    pending: u64,
    shared: Option<&'a AtomicU64>,
    budget: u64,
}

impl<'a> Meter<'a> {
    fn sequential(budget: u64) -> Self {
        Meter {
            local: 0,
            pending: 0,
            shared: None,
            budget,
        }
    }

    fn shared(budget: u64, shared: &'a AtomicU64) -> Self {
        Meter {
            local: 0,
            pending: 0,
            shared: Some(shared),
            budget,
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.local += 1;
        match self.shared {
            None => {
                if self.local > self.budget {
                    return Err(Error::BudgetExhausted {
                        budget: self.budget,
                    });
                }
            }
            Some(shared) => {
                self.pending += 1;
                if self.pending == 1024 {
                    self.pending = 0;
                    let total = shared.fetch_add(1024, Ordering::Relaxed) + 1024;
                    if total > self.budget {
                        return Err(Error::BudgetExhausted {
                            budget: self.budget,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<()> {
        if let Some(shared) = self.shared {
            let total = shared.fetch_add(self.pending, Ordering::Relaxed) + self.pending;
            self.pending = 0;
            if total > self.budget {
                return Err(Error::BudgetExhausted {
                    budget: self.budget,
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    First,
    Count,
}

struct Sink {
    goal: Goal,
    found: Option<Vec<i64>>,
    count: SolutionCount,
}

impl Sink {
    fn new(goal: Goal) -> Self {
        Sink {
            goal,
            found: None,
            count: SolutionCount::default(),
        }
    }

    /// Records an accepted leaf; true means stop.
    fn leaf(&mut self, p: &Problem<'_>, x: &[i64]) -> bool {
        if !p.accepts(x) {
            return false;
        }
        match self.goal {
            Goal::First => {
                self.found = Some(x.to_vec());
                true
            }
            Goal::Count => {
                self.count.ordered += 1;
                if p.is_canonical(x) {
                    self.count.canonical += 1;
                }
                false
            }
        }
    }
}

// ---------------------------------------------------------------- DFS

struct Dfs<'p> {
    p: Problem<'p>,
    sufmin: Vec<i128>,
    sufmax: Vec<i128>,
    x: Vec<i64>,
}

impl<'p> Dfs<'p> {
    fn new(p: Problem<'p>) -> Self {
        let m = p.coeffs.len();
        let lo = *p.set.first().unwrap() as i128;
        let hi = *p.set.last().unwrap() as i128;
        let mut sufmin = vec![0i128; m + 1];
        let mut sufmax = vec![0i128; m + 1];
        for i in (0..m).rev() {
            let c = p.coeffs[i] as i128;
            sufmin[i] = sufmin[i + 1] + (c * lo).min(c * hi);
            sufmax[i] = sufmax[i + 1] + (c * lo).max(c * hi);
        }
        Dfs {
            p,
            sufmin,
            sufmax,
            x: vec![0; m],
        }
    }

    fn rec(&mut self, pos: usize, partial: i128, meter: &mut Meter, sink: &mut Sink) -> Result<bool> {
        let m = self.p.coeffs.len();
        let c = self.p.coeffs[pos] as i128;
        if pos + 1 == m {
            let need = -partial;
            if need % c != 0 {
                return Ok(false);
            }
            let v = need / c;
            if v < self.p.set[0] as i128 || v > *self.p.set.last().unwrap() as i128 {
                return Ok(false);
            }
            let v = v as i64;
            if self.p.set.binary_search(&v).is_err() {
                return Ok(false);
            }
            if self.p.distinct() && self.x[..pos].contains(&v) {
                return Ok(false);
            }
            meter.tick()?;
            self.x[pos] = v;
            return Ok(sink.leaf(&self.p, &self.x));
        }
        let (smin, smax) = (self.sufmin[pos + 1], self.sufmax[pos + 1]);
        for &v in self.p.set {
            if self.p.distinct() && self.x[..pos].contains(&v) {
                continue;
            }
            meter.tick()?;
            let np = partial + c * v as i128;
            if np + smin > 0 {
                // c*v only grows with v when c > 0
                if c > 0 {
                    break;
                }
                continue;
            }
            if np + smax < 0 {
                if c < 0 {
                    break;
                }
                continue;
            }
            self.x[pos] = v;
            if self.rec(pos + 1, np, meter, sink)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Runs the subtree with position 0 fixed to `v`.
    fn branch(&mut self, v: i64, meter: &mut Meter, sink: &mut Sink) -> Result<()> {
        meter.tick()?;
        let c = self.p.coeffs[0] as i128;
        let np = c * v as i128;
        if np + self.sufmin[1] > 0 || np + self.sufmax[1] < 0 {
            return Ok(());
        }
        self.x[0] = v;
        self.rec(1, np, meter, sink)?;
        Ok(())
    }
}

// ---------------------------------------------------------------- MITM

struct RightTable {
    width: usize,
    values: Vec<i64>,
    by_sum: HashMap<i64, Vec<u32>>,
}

fn for_each_tuple(set: &[i64], width: usize, mut f: impl FnMut(&[i64]) -> Result<bool>) -> Result<()> {
    let n = set.len();
    let mut idx = vec![0usize; width];
    let mut tuple: Vec<i64> = vec![set[0]; width];
    loop {
        if f(&tuple)? {
            return Ok(());
        }
        let mut i = width;
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < n {
                tuple[i] = set[idx[i]];
                break;
            }
            idx[i] = 0;
            tuple[i] = set[0];
        }
    }
}

impl RightTable {
    fn build(p: &Problem<'_>, split: usize, meter: &mut Meter) -> Result<Self> {
        let coeffs = &p.coeffs[split..];
        let width = coeffs.len();
        let mut values = Vec::new();
        let mut by_sum: HashMap<i64, Vec<u32>> = HashMap::new();
        let mut row = 0u32;
        for_each_tuple(p.set, width, |t| {
            meter.tick()?;
            if p.distinct() && !all_distinct(t) {
                return Ok(false);
            }
            let s: i64 = coeffs.iter().zip(t).map(|(&c, &v)| c * v).sum();
            values.extend_from_slice(t);
            by_sum.entry(s).or_default().push(row);
            row += 1;
            Ok(false)
        })?;
        Ok(RightTable {
            width,
            values,
            by_sum,
        })
    }

    fn row(&self, r: u32) -> &[i64] {
        let start = r as usize * self.width;
        &self.values[start..start + self.width]
    }
}

fn mitm_split(m: usize) -> usize {
    m.div_ceil(2)
}

/// Streams left-half tuples whose first value is `first` (or all of them when
/// `first` is None) and joins them against the table.
fn mitm_stream(
    p: &Problem<'_>,
    table: &RightTable,
    split: usize,
    first: Option<i64>,
    meter: &mut Meter,
    sink: &mut Sink,
) -> Result<()> {
    let left = &p.coeffs[..split];
    let mut x = vec![0i64; p.coeffs.len()];
    let (fixed, width) = match first {
        Some(v) => (Some(v), split - 1),
        None => (None, split),
    };
    let mut handle = |tail: &[i64], x: &mut Vec<i64>, meter: &mut Meter| -> Result<bool> {
        meter.tick()?;
        match fixed {
            Some(v) => {
                x[0] = v;
                x[1..split].copy_from_slice(tail);
            }
            None => x[..split].copy_from_slice(tail),
        }
        let lx = &x[..split];
        if p.distinct() && !all_distinct(lx) {
            return Ok(false);
        }
        let s: i64 = left.iter().zip(lx).map(|(&c, &v)| c * v).sum();
        if let Some(rows) = table.by_sum.get(&-s) {
            for &r in rows {
                meter.tick()?;
                let rv = table.row(r);
                if p.distinct() && rv.iter().any(|v| x[..split].contains(v)) {
                    continue;
                }
                x[split..].copy_from_slice(rv);
                if sink.leaf(p, x) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };
    if width == 0 {
        handle(&[], &mut x, meter)?;
    } else {
        for_each_tuple(p.set, width, |t| handle(t, &mut x, meter))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- naive

fn naive(p: &Problem<'_>, meter: &mut Meter, sink: &mut Sink) -> Result<()> {
    for_each_tuple(p.set, p.coeffs.len(), |x| {
        meter.tick()?;
        let s: i128 = p.coeffs.iter().zip(x).map(|(&c, &v)| c as i128 * v as i128).sum();
        Ok(s == 0 && sink.leaf(p, x))
    })
}

// ---------------------------------------------------------------- driver

fn resolve(strategy: Strategy, p: &Problem<'_>) -> Strategy {
    if strategy != Strategy::Auto {
        return strategy;
    }
    let m = p.coeffs.len() as u32;
    let n = p.set.len() as u128;
    let right = n.checked_pow(m - mitm_split(m as usize) as u32);
    match right {
        Some(r) if m >= 4 && n >= 5 && r <= MITM_TABLE_LIMIT && r <= p.budget as u128 => {
            Strategy::MeetInMiddle
        }
        _ => Strategy::Dfs,
    }
}

pub(crate) struct RunResult {
    pub found: Option<Vec<i64>>,
    pub count: SolutionCount,
    pub nodes: u64,
    pub strategy: Strategy,
}

fn run(p: Problem<'_>, goal: Goal, strategy: Strategy, parallel: bool) -> Result<RunResult> {
    let strategy = resolve(strategy, &p);
    if parallel && strategy != Strategy::Naive {
        return run_parallel(p, goal, strategy);
    }
    let mut meter = Meter::sequential(p.budget);
    let mut sink = Sink::new(goal);
    match strategy {
        Strategy::Dfs | Strategy::Auto => {
            let mut dfs = Dfs::new(p);
            for &v in p.set {
                dfs.branch(v, &mut meter, &mut sink)?;
                if sink.found.is_some() {
                    break;
                }
            }
        }
        Strategy::MeetInMiddle => {
            let split = mitm_split(p.coeffs.len());
            let table = RightTable::build(&p, split, &mut meter)?;
            mitm_stream(&p, &table, split, None, &mut meter, &mut sink)?;
        }
        Strategy::Naive => naive(&p, &mut meter, &mut sink)?,
    }
    Ok(RunResult {
        found: sink.found,
        count: sink.count,
        nodes: meter.local,
        strategy,
    })
}

fn run_parallel(p: Problem<'_>, goal: Goal, strategy: Strategy) -> Result<RunResult> {
    let used = AtomicU64::new(0);
    let table = match strategy {
        Strategy::MeetInMiddle => {
            let mut meter = Meter::shared(p.budget, &used);
            let t = RightTable::build(&p, mitm_split(p.coeffs.len()), &mut meter)?;
            meter.finish()?;
            Some(t)
        }
        _ => None,
    };
    let branch = |v: i64| -> Result<Sink> {
        let mut meter = Meter::shared(p.budget, &used);
        let mut sink = Sink::new(goal);
        match &table {
            Some(t) => mitm_stream(&p, t, mitm_split(p.coeffs.len()), Some(v), &mut meter, &mut sink)?,
            None => Dfs::new(p).branch(v, &mut meter, &mut sink)?,
        }
        meter.finish()?;
        Ok(sink)
    };
    let result = match goal {
        Goal::First => {
            let hit = p
                .set
                .par_iter()
                .map(|&v| branch(v))
                .find_first(|r| !matches!(r, Ok(s) if s.found.is_none()));
            let found = match hit {
                Some(r) => r?.found,
                None => None,
            };
            RunResult {
                found,
                count: SolutionCount::default(),
                nodes: used.load(Ordering::Relaxed),
                strategy,
            }
        }
        Goal::Count => {
            let count = p
                .set
                .par_iter()
                .map(|&v| branch(v).map(|s| s.count))
                .try_reduce(SolutionCount::default, |a, b| Ok(a + b))?;
            RunResult {
                found: None,
                count,
                nodes: used.load(Ordering::Relaxed),
                strategy,
            }
        }
    };
    Ok(result)
}

pub(crate) fn first_solution(p: Problem<'_>, strategy: Strategy) -> Result<RunResult> {
    run(p, Goal::First, strategy, false)
}

/// Result of a find query along with the work it took.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<SolutionClass>,
    pub nodes: u64,
    pub strategy: Strategy,
}

pub fn find_with_stats(q: &SolutionQuery) -> Result<SearchOutcome> {
    let r = run(q.problem(), Goal::First, q.strategy, q.parallel)?;
    Ok(SearchOutcome {
        witness: r.found.map(|assignment| SolutionClass {
            assignment,
            kind: SolutionKind::NonTrivial,
        }),
        nodes: r.nodes,
        strategy: r.strategy,
    })
}

/// Lexicographically first non-trivial (or distinct-variable) solution, or
/// `None` when the whole space was exhausted without one.
pub fn find_nontrivial_solution(q: &SolutionQuery) -> Result<Option<SolutionClass>> {
    find_with_stats(q).map(|o| o.witness)
}

pub fn count_nontrivial_solutions(q: &SolutionQuery) -> Result<SolutionCount> {
    run(q.problem(), Goal::Count, q.strategy, q.parallel).map(|r| r.count)
}

/// True iff every solution of `eq` inside `set` has equal values at
/// positions `p` and `q`.
pub fn forces_equal(eq: &Equation, set: &[i64], p: usize, q: usize, budget: u64) -> Result<bool> {
    let query = SolutionQuery::new(eq.clone(), set.to_vec())?;
    if p >= eq.m() || q >= eq.m() {
        return Err(Error::precondition("position out of range"));
    }
    let problem = Problem {
        coeffs: eq.coeffs(),
        set: query.ground_set(),
        accept: Accept::Any,
        extra: Extra {
            must_use: None,
            differ: Some((p, q)),
        },
        budget,
    };
    Ok(first_solution(problem, Strategy::Auto)?.found.is_none())
}

/// A pair of positions pinned equal by every solution inside `set`, if any.
///
/// When such a pair exists, a base-L lift of `set` cannot contain a solution
/// with pairwise distinct values: each digit slice repeats the pin.
pub fn distinct_lift_pin(eq: &Equation, set: &[i64], budget: u64) -> Result<Option<(usize, usize)>> {
    let c = eq.coeffs();
    let m = eq.m();
    // try opposite-sign pairs with matching magnitude first (x_i, x_i')
    let mut pairs: Vec<(usize, usize)> = (0..m)
        .flat_map(|p| (p + 1..m).map(move |q| (p, q)))
        .collect();
    pairs.sort_by_key(|&(p, q)| c[p] != -c[q]);
    for (p, q) in pairs {
        if forces_equal(eq, set, p, q, budget)? {
            return Ok(Some((p, q)));
        }
    }
    Ok(None)
}

/// Injectivity of `(i_1..i_k) -> sum i_j a_j` on `[1, B]^k`, decided through
/// the difference formulation: the map is injective iff no nonzero
/// `d in [-(B-1), B-1]^k` has `sum d_j a_j = 0`.
pub fn is_injective_map(a: &[i64], b: u64, budget: u64) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::precondition("empty coefficient vector"));
    }
    if let Some(&bad) = a.iter().find(|&&v| v < 1) {
        return Err(Error::NonPositiveGenerator(bad));
    }
    if b <= 1 {
        return Ok(true);
    }
    let mut a: Vec<i128> = a.iter().map(|&v| v as i128).collect();
    a.sort_unstable_by(|x, y| y.cmp(x));
    let r = (b - 1) as i128;
    let k = a.len();
    let mut reach = vec![0i128; k + 1];
    for i in (0..k).rev() {
        reach[i] = reach[i + 1]
            .checked_add(a[i].checked_mul(r).ok_or_else(|| Error::Overflow("a * B".into()))?)
            .ok_or_else(|| Error::Overflow("sum a * B".into()))?;
    }
    let mut meter = Meter::sequential(budget.max(1));

    fn rec(a: &[i128], reach: &[i128], r: i128, pos: usize, partial: i128, nonzero: bool, meter: &mut Meter) -> Result<bool> {
        let k = a.len();
        if pos + 1 == k {
            let need = -partial;
            if need % a[pos] != 0 {
                return Ok(false);
            }
            let d = need / a[pos];
            let lo = if nonzero { -r } else { 1 };
            meter.tick()?;
            return Ok(d >= lo && d <= r && (d != 0 || nonzero));
        }
        // first nonzero coordinate is taken positive
        let lo = if nonzero { -r } else { 0 };
        for d in lo..=r {
            meter.tick()?;
            let np = partial + a[pos] * d;
            if np.abs() > reach[pos + 1] {
                continue;
            }
            if rec(a, reach, r, pos + 1, np, nonzero || d != 0, meter)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    Ok(!rec(&a, &reach, r, 0, 0, false, &mut meter)?)
}

/// Re-validates a certificate: the no-carry inequality and an exhaustive
/// oracle pass over its digit set in the certificate's mode.
pub fn verify_certificate(cert: &Certificate) -> Result<bool> {
    verify_certificate_with_budget(cert, DEFAULT_BUDGET)
}

pub fn verify_certificate_with_budget(cert: &Certificate, budget: u64) -> Result<bool> {
    let ds = cert.digit_set();
    if ds.digits().is_empty() {
        return Err(Error::precondition("certificate has no digits"));
    }
    if !ds.no_carry_holds() {
        return Ok(false);
    }
    let q = SolutionQuery::new(ds.equation().clone(), ds.digits().to_vec())?
        .with_mode(cert.mode())
        .with_budget(budget);
    if find_nontrivial_solution(&q)?.is_some() {
        return Ok(false);
    }
    if cert.mode() == Mode::Distinct {
        return Ok(distinct_lift_pin(ds.equation(), ds.digits(), budget)?.is_some());
    }
    Ok(true)
}
