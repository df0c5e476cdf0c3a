//! Searches that discover digit sets: exact branch-and-bound for maximum
//! solution-free digit sets, the greedy baseline, and small integer
//! dependencies among three coefficients.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, DigitSet, Recipe};
use crate::equation::{is_primitive, Equation};
use crate::error::{Error, Result};
use crate::oracle::{first_solution, Accept, Extra, Mode, Problem, Strategy, DEFAULT_BUDGET};

/// Relation-table size above which the difference kernel is not built.
const RELATION_NODE_LIMIT: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Branch-and-bound to completion (or budget).
    #[default]
    Exact,
    /// Smallest-first greedy only.
    Greedy,
    /// Greedy incumbent, then branch-and-bound until the budget runs out.
    Anytime,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    #[default]
    LexSmallest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub budget: u64,
    pub mode: SearchMode,
    pub tie_break: TieBreak,
    /// Emit a progress event every this many nodes (0 disables).
    pub report_interval: u64,
    /// `Distinct` searches for sets that lift in distinct-variable mode:
    /// some pair of positions is equal in every solution.
    pub solution_mode: Mode,
    pub parallel: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_BUDGET,
            mode: SearchMode::Exact,
            tie_break: TieBreak::LexSmallest,
            report_interval: 0,
            solution_mode: Mode::All,
            parallel: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProgressEvent {
    pub best_size: usize,
    pub nodes: u64,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitSearchResult {
    pub digits: Vec<i64>,
    /// True only when the search space was exhausted (proven maximum).
    pub exhausted: bool,
    pub nodes: u64,
    pub kernel: KernelKind,
    /// Distinct mode: the position pair every solution keeps equal.
    pub pin: Option<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// Precomputed relation vectors matched against the difference set.
    Difference,
    /// Incremental oracle calls.
    Oracle,
}

// ------------------------------------------------------------------ kernels

/// Incremental legality test: can `z` join the current set?
trait Kernel: Clone + Send + Sync {
    fn push(&mut self, z: i64);
    fn pop(&mut self);
    fn legal(&mut self, z: i64) -> Result<bool>;
}

/// For symmetric equations with dissociated generators, a set has a
/// non-trivial solution iff some nonzero relation `sum a_t d_t = 0` has every
/// `|d_t|` in its difference set (or zero). Relations are enumerated once up
/// to the largest possible difference and indexed by coordinate value.
#[derive(Clone)]
struct DifferenceKernel {
    width: usize,
    coords: std::sync::Arc<Vec<u32>>,
    by_value: std::sync::Arc<Vec<Vec<u32>>>,
    cnt: Vec<u32>,
    mark: Vec<u32>,
    stamp: u32,
    set: Vec<i64>,
    fresh: Vec<u32>,
}

impl DifferenceKernel {
    /// `None` when the relation table would be too expensive. With
    /// `pinned = Some(t)` only relations moving coordinate `t` are kept:
    /// the set then has no solution with `x_t != x_t'`.
    fn build(gens: &[i64], max_diff: u64, pinned: Option<usize>) -> Option<Self> {
        let k = gens.len();
        let m = max_diff as i64;
        let cost = (2 * max_diff as u128 + 1).checked_pow(k.saturating_sub(1) as u32)?;
        if cost > RELATION_NODE_LIMIT as u128 || max_diff > u32::MAX as u64 / 2 {
            return None;
        }
        let a: Vec<i128> = gens.iter().map(|&g| g as i128).collect();
        let mut reach = vec![0i128; k + 1];
        for i in (0..k).rev() {
            reach[i] = reach[i + 1] + a[i] * m as i128;
        }
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let mut d = vec![0i64; k];

        #[allow(clippy::too_many_arguments)]
        fn rec(a: &[i128], reach: &[i128], m: i64, pos: usize, partial: i128, nonzero: bool, d: &mut [i64], seen: &mut HashSet<Vec<u32>>) {
            let k = a.len();
            if pos + 1 == k {
                if (-partial) % a[pos] != 0 {
                    return;
                }
                let v = -partial / a[pos];
                if v.abs() > m as i128 || (v == 0 && !nonzero) {
                    return;
                }
                d[pos] = v as i64;
                seen.insert(d.iter().map(|x| x.unsigned_abs() as u32).collect());
                return;
            }
            let lo = if nonzero { -m } else { 0 };
            for v in lo..=m {
                let np = partial + a[pos] * v as i128;
                if np.abs() > reach[pos + 1] {
                    continue;
                }
                d[pos] = v;
                rec(a, reach, m, pos + 1, np, nonzero || v != 0, d, seen);
            }
        }

        if k == 1 {
            // a x = a x': only trivial solutions
        } else {
            rec(&a, &reach, m, 0, 0, false, &mut d, &mut seen);
        }
        let mut rels: Vec<Vec<u32>> = seen.into_iter().filter(|r| pinned.is_none_or(|t| r[t] != 0)).collect();
        rels.sort_unstable();
        let mut coords = Vec::with_capacity(rels.len() * k);
        let mut by_value: Vec<Vec<u32>> = vec![Vec::new(); max_diff as usize + 1];
        for (id, r) in rels.iter().enumerate() {
            coords.extend_from_slice(r);
            let mut vals: Vec<u32> = r.iter().copied().filter(|&c| c > 0).collect();
            vals.sort_unstable();
            vals.dedup();
            for v in vals {
                by_value[v as usize].push(id as u32);
            }
        }
        Some(DifferenceKernel {
            width: k,
            coords: std::sync::Arc::new(coords),
            by_value: std::sync::Arc::new(by_value),
            cnt: vec![0; max_diff as usize + 1],
            mark: vec![0; max_diff as usize + 1],
            stamp: 0,
            set: Vec::new(),
            fresh: Vec::new(),
        })
    }
}

impl Kernel for DifferenceKernel {
    fn push(&mut self, z: i64) {
        for &d in &self.set {
            self.cnt[(z - d).unsigned_abs() as usize] += 1;
        }
        self.set.push(z);
    }

    fn pop(&mut self) {
        let z = self.set.pop().expect("pop on empty kernel");
        for &d in &self.set {
            self.cnt[(z - d).unsigned_abs() as usize] -= 1;
        }
    }

    fn legal(&mut self, z: i64) -> Result<bool> {
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.mark.iter_mut().for_each(|m| *m = 0);
            self.stamp = 1;
        }
        self.fresh.clear();
        for &d in &self.set {
            let delta = (z - d).unsigned_abs() as usize;
            if delta == 0 {
                return Ok(false);
            }
            if self.cnt[delta] == 0 && self.mark[delta] != self.stamp {
                self.mark[delta] = self.stamp;
                self.fresh.push(delta as u32);
            }
        }
        for &delta in &self.fresh {
            for &r in &self.by_value[delta as usize] {
                let row = &self.coords[r as usize * self.width..(r as usize + 1) * self.width];
                if row
                    .iter()
                    .all(|&c| c == 0 || self.cnt[c as usize] > 0 || self.mark[c as usize] == self.stamp)
                {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Falls back on the exhaustive oracle, restricted to solutions using `z`.
#[derive(Clone)]
struct OracleKernel {
    eq: Equation,
    accept: Accept,
    differ: Option<(usize, usize)>,
    set: Vec<i64>,
    budget: u64,
}

impl OracleKernel {
    fn new(eq: &Equation, mode: Mode, budget: u64) -> Self {
        OracleKernel {
            eq: eq.clone(),
            accept: match mode {
                Mode::All => Accept::NonTrivial,
                Mode::Distinct => Accept::Distinct,
            },
            differ: None,
            set: Vec::new(),
            budget,
        }
    }

    /// Rejects any solution, trivial or not, with `x_p != x_q`.
    fn pinned(eq: &Equation, pin: (usize, usize), budget: u64) -> Self {
        OracleKernel {
            accept: Accept::Any,
            differ: Some(pin),
            ..Self::new(eq, Mode::All, budget)
        }
    }
}

impl Kernel for OracleKernel {
    fn push(&mut self, z: i64) {
        self.set.push(z);
    }

    fn pop(&mut self) {
        self.set.pop();
    }

    fn legal(&mut self, z: i64) -> Result<bool> {
        if self.set.contains(&z) {
            return Ok(false);
        }
        let mut ground = self.set.clone();
        ground.push(z);
        ground.sort_unstable();
        let p = Problem {
            coeffs: self.eq.coeffs(),
            set: &ground,
            accept: self.accept,
            extra: Extra {
                must_use: Some(z),
                differ: self.differ,
            },
            budget: self.budget,
        };
        Ok(first_solution(p, Strategy::Auto)?.found.is_none())
    }
}

#[derive(Clone)]
enum AnyKernel {
    Difference(DifferenceKernel),
    Oracle(OracleKernel),
}

impl AnyKernel {
    fn new(eq: &Equation, mode: Mode, max_diff: u64, oracle_budget: u64) -> Result<Self> {
        if mode == Mode::All {
            if let Some(gens) = eq.symmetric_gen() {
                if is_primitive(eq)? {
                    if let Some(k) = DifferenceKernel::build(gens, max_diff, None) {
                        return Ok(AnyKernel::Difference(k));
                    }
                }
            }
        }
        Ok(AnyKernel::Oracle(OracleKernel::new(eq, mode, oracle_budget)))
    }

    /// Kernel for sets on which every solution has `x_p = x_q`.
    fn pinned(eq: &Equation, pin: (usize, usize), max_diff: u64, oracle_budget: u64) -> Result<Self> {
        let c = eq.coeffs();
        if let Some(gens) = eq.symmetric_gen() {
            let mut uniq = gens.to_vec();
            uniq.sort_unstable();
            uniq.dedup();
            // (x_t, x_t') with distinct generators: a solution moving the
            // pair is a relation with d_t != 0.
            if uniq.len() == gens.len() && c[pin.0] == -c[pin.1] {
                let t = gens.iter().position(|&g| g == c[pin.0].abs());
                if let Some(k) = t.and_then(|t| DifferenceKernel::build(gens, max_diff, Some(t))) {
                    return Ok(AnyKernel::Difference(k));
                }
            }
        }
        Ok(AnyKernel::Oracle(OracleKernel::pinned(eq, pin, oracle_budget)))
    }

    fn kind(&self) -> KernelKind {
        match self {
            AnyKernel::Difference(_) => KernelKind::Difference,
            AnyKernel::Oracle(_) => KernelKind::Oracle,
        }
    }
}

impl Kernel for AnyKernel {
    fn push(&mut self, z: i64) {
        match self {
            AnyKernel::Difference(k) => k.push(z),
            AnyKernel::Oracle(k) => k.push(z),
        }
    }

    fn pop(&mut self) {
        match self {
            AnyKernel::Difference(k) => k.pop(),
            AnyKernel::Oracle(k) => k.pop(),
        }
    }

    fn legal(&mut self, z: i64) -> Result<bool> {
        match self {
            AnyKernel::Difference(k) => k.legal(z),
            AnyKernel::Oracle(k) => k.legal(z),
        }
    }
}

// ----------------------------------------------------------- branch & bound

struct NodeMeter {
    used: AtomicU64,
    budget: u64,
}

impl NodeMeter {
    fn tick(&self) -> bool {
        self.used.fetch_add(1, Ordering::Relaxed) < self.budget
    }

    fn used(&self) -> u64 {
        self.used.load(Ordering::Relaxed).min(self.budget)
    }
}

/// Depth-first search for the lexicographically first solution-free set of
/// a given size, pruned with `f[w]`: the largest solution-free set inside a
/// window of width `w` (known for every smaller window by translation
/// invariance).
struct Seek<'a, K: Kernel> {
    kernel: K,
    /// Elements fixed before the search (`0`, and the anchor when it is
    /// part of the set).
    fixed: Vec<i64>,
    /// Elements chosen by the search, increasing.
    mid: Vec<i64>,
    f: &'a [usize],
    /// Every element lies in `[0, anchor]`.
    anchor: i64,
    /// 1 when `anchor` itself is in `fixed`.
    anchored: usize,
    meter: &'a NodeMeter,
    out_of_budget: bool,
}

impl<K: Kernel> Seek<'_, K> {
    fn size(&self) -> usize {
        self.fixed.len() + self.mid.len()
    }

    /// Upper bound on how many of `cands[idx..]` can still be added: every
    /// window `[p, anchor]` holds at most `f[anchor - p]` elements.
    fn room(&self, cands: &[i64], idx: usize) -> usize {
        if idx >= cands.len() {
            return 0;
        }
        let c = cands[idx];
        let mut r = (cands.len() - idx).min(self.f[(self.anchor - c) as usize] - self.anchored);
        for (j, &p) in self.mid.iter().enumerate() {
            let w = (self.anchor - p) as usize;
            if w < self.f.len() {
                r = r.min(self.f[w].saturating_sub(self.mid.len() - j + self.anchored));
            }
        }
        r
    }

    fn run(&mut self, cands: &[i64], target: usize) -> Result<Option<Vec<i64>>> {
        if !self.meter.tick() {
            self.out_of_budget = true;
            return Ok(None);
        }
        if self.size() >= target {
            let mut s = self.fixed.clone();
            s.extend_from_slice(&self.mid);
            s.sort_unstable();
            return Ok(Some(s));
        }
        for idx in 0..cands.len() {
            if self.size() + self.room(cands, idx) < target {
                return Ok(None);
            }
            let y = cands[idx];
            self.mid.push(y);
            // The bound only shrinks under filtering; check it first.
            if self.size() + self.room(cands, idx + 1) < target {
                self.mid.pop();
                continue;
            }
            self.kernel.push(y);
            let mut next = Vec::with_capacity(cands.len() - idx - 1);
            for &z in &cands[idx + 1..] {
                if self.kernel.legal(z)? {
                    next.push(z);
                }
            }
            let hit = self.run(&next, target)?;
            self.mid.pop();
            self.kernel.pop();
            if hit.is_some() {
                return Ok(hit);
            }
            if self.out_of_budget {
                return Ok(None);
            }
        }
        Ok(None)
    }
}

enum Found {
    Set(Vec<i64>),
    Absent,
    OutOfBudget,
}

/// Searches for a set of size `target` that extends `fixed` by elements of
/// `cands`, all inside `[0, anchor]`. In parallel mode the first level is
/// split across the pool and the lowest successful branch wins.
#[allow(clippy::too_many_arguments)]
fn seek<K: Kernel>(
    kernel: K,
    fixed: Vec<i64>,
    cands: &[i64],
    target: usize,
    anchor: i64,
    f: &[usize],
    meter: &NodeMeter,
    parallel: bool,
) -> Result<Found> {
    let anchored = usize::from(fixed.contains(&anchor) && anchor != 0);
    let fresh = |kernel: K| Seek {
        kernel,
        fixed: fixed.clone(),
        mid: Vec::new(),
        f,
        anchor,
        anchored,
        meter,
        out_of_budget: false,
    };
    let finish = |hit: Option<Vec<i64>>, oob: bool| match hit {
        Some(v) => Found::Set(v),
        None if oob => Found::OutOfBudget,
        None => Found::Absent,
    };
    if !parallel || cands.len() < 2 || fixed.len() >= target {
        let mut s = fresh(kernel);
        let hit = s.run(cands, target)?;
        return Ok(finish(hit, s.out_of_budget));
    }
    let hit = (0..cands.len())
        .into_par_iter()
        .map(|idx| -> Result<Found> {
            let mut s = fresh(kernel.clone());
            if s.size() + s.room(cands, idx) < target {
                return Ok(Found::Absent);
            }
            let y = cands[idx];
            s.kernel.push(y);
            s.mid.push(y);
            let mut next = Vec::new();
            for &z in &cands[idx + 1..] {
                if s.kernel.legal(z)? {
                    next.push(z);
                }
            }
            let hit = s.run(&next, target)?;
            Ok(finish(hit, s.out_of_budget))
        })
        .find_first(|r| !matches!(r, Ok(Found::Absent)));
    match hit {
        None => Ok(Found::Absent),
        Some(r) => r,
    }
}

fn greedy_digits<K: Kernel>(kernel: &mut K, cands: &[i64]) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for &z in cands {
        if kernel.legal(z)? {
            kernel.push(z);
            out.push(z);
        }
    }
    for _ in 0..out.len() {
        kernel.pop();
    }
    Ok(out)
}

/// Largest digit bound that keeps `s * max < L`.
pub fn digit_bound(eq: &Equation, l: u64) -> u64 {
    l.saturating_sub(1) / eq.side_sum()
}

/// Maximum (or best-found) solution-free subset of `{0..floor((L-1)/s)}`.
///
/// `0` is always included (the property is translation invariant). The
/// optimum for every window `{0..w}` is established in turn, each one
/// bounding the next, and a final pass returns the lexicographically
/// smallest maximum set.
///
/// In distinct mode each candidate pin (opposite coefficients first) gets
/// its own search under the shared budget; the largest set wins, ties going
/// to the lexicographically smaller set and then the earlier pin.
pub fn max_digit_set(
    eq: &Equation,
    l: u64,
    cfg: &SearchConfig,
    mut progress: Option<&mut dyn FnMut(&ProgressEvent)>,
) -> Result<DigitSearchResult> {
    if cfg.budget == 0 {
        return Err(Error::precondition("budget must be at least 1"));
    }
    if l < 2 {
        return Err(Error::precondition("L must be at least 2"));
    }
    let top = digit_bound(eq, l) as i64;
    let meter = NodeMeter {
        used: AtomicU64::new(0),
        budget: cfg.budget,
    };
    if cfg.solution_mode == Mode::All {
        let kernel = AnyKernel::new(eq, Mode::All, top as u64, DEFAULT_BUDGET)?;
        let kind = kernel.kind();
        let (digits, exhausted) = run_kernel(kernel, top, cfg, &meter, &mut progress)?;
        return Ok(DigitSearchResult {
            digits,
            exhausted,
            nodes: meter.used(),
            kernel: kind,
            pin: None,
        });
    }
    let pins = pin_candidates(eq);
    let mut best: Option<DigitSearchResult> = None;
    let mut consider = |digits: Vec<i64>, kernel: KernelKind, pin: (usize, usize)| {
        let better = best
            .as_ref()
            .is_none_or(|b| digits.len() > b.digits.len() || (digits.len() == b.digits.len() && digits < b.digits));
        if better {
            best = Some(DigitSearchResult {
                digits,
                exhausted: false,
                nodes: 0,
                kernel,
                pin: Some(pin),
            });
        }
    };
    if cfg.mode == SearchMode::Anytime {
        // Greedy incumbents cost no nodes; take them for every pin before
        // the budget goes to branch-and-bound.
        let greedy = SearchConfig {
            mode: SearchMode::Greedy,
            ..cfg.clone()
        };
        for &pin in &pins {
            let kernel = AnyKernel::pinned(eq, pin, top as u64, DEFAULT_BUDGET)?;
            let kind = kernel.kind();
            let (digits, _) = run_kernel(kernel, top, &greedy, &meter, &mut None)?;
            consider(digits, kind, pin);
        }
    }
    let mut exhausted = true;
    for &pin in &pins {
        if meter.used() >= cfg.budget {
            exhausted = false;
            break;
        }
        let kernel = AnyKernel::pinned(eq, pin, top as u64, DEFAULT_BUDGET)?;
        let kind = kernel.kind();
        let (digits, done) = run_kernel(kernel, top, cfg, &meter, &mut progress)?;
        exhausted &= done;
        consider(digits, kind, pin);
    }
    let mut best = best.ok_or_else(|| Error::precondition("equation has fewer than two positions"))?;
    best.exhausted = exhausted;
    best.nodes = meter.used();
    Ok(best)
}

/// Position pairs that may be pinned: opposite coefficients `(c, -c)`
/// first, then the rest.
fn pin_candidates(eq: &Equation) -> Vec<(usize, usize)> {
    let c = eq.coeffs();
    let m = c.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|p| (p + 1..m).map(move |q| (p, q))).collect();
    let opposite: Vec<(usize, usize)> = pairs.iter().copied().filter(|&(p, q)| c[p] == -c[q]).collect();
    if opposite.is_empty() {
        pairs
    } else {
        opposite
    }
}

/// One Russian-doll search with a fixed kernel. Returns the best digits and
/// whether the search space was exhausted.
fn run_kernel(
    base: AnyKernel,
    top: i64,
    cfg: &SearchConfig,
    meter: &NodeMeter,
    progress: &mut Option<&mut dyn FnMut(&ProgressEvent)>,
) -> Result<(Vec<i64>, bool)> {
    let mut root = base;
    root.push(0);
    let mut cands = Vec::new();
    for z in 1..=top {
        if root.legal(z)? {
            cands.push(z);
        }
    }
    let mut best = vec![0];
    if cfg.mode != SearchMode::Exact {
        best.extend(greedy_digits(&mut root, &cands)?);
    }
    if cfg.mode == SearchMode::Greedy {
        let complete = best.len() as i64 == top + 1;
        return Ok((best, complete));
    }
    let mut emit = |best: usize, depth: usize| {
        if let Some(cb) = progress.as_mut() {
            cb(&ProgressEvent {
                best_size: best,
                nodes: meter.used(),
                depth,
            });
        }
    };

    let mut f = vec![1usize];
    for w in 1..=top {
        let prev = f[w as usize - 1];
        if !cands.contains(&w) {
            f.push(prev);
            continue;
        }
        let mut k = root.clone();
        k.push(w);
        let mut next = Vec::new();
        for &z in cands.iter().take_while(|&&z| z < w) {
            if k.legal(z)? {
                next.push(z);
            }
        }
        match seek(k, vec![0, w], &next, prev + 1, w, &f, meter, cfg.parallel)? {
            Found::Set(s) => {
                f.push(prev + 1);
                if s.len() > best.len() {
                    best = s;
                    emit(best.len(), w as usize);
                }
            }
            Found::Absent => f.push(prev),
            Found::OutOfBudget => return Ok((best, false)),
        }
        if cfg.report_interval > 0 && (w as u64).is_multiple_of(cfg.report_interval) {
            emit(best.len(), w as usize);
        }
    }
    let target = f[top as usize];
    match seek(root, vec![0], &cands, target, top, &f, meter, cfg.parallel)? {
        Found::Set(s) => {
            emit(s.len(), top as usize);
            Ok((s, true))
        }
        Found::Absent => Err(Error::Uncertified("window optimum not reproduced".into())),
        Found::OutOfBudget => Ok((best, false)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyResult {
    pub set: Vec<i64>,
    /// False when a legality check ran out of budget and the scan stopped.
    pub complete: bool,
}

/// Scans `1..=N` and keeps every value that creates no solution with the
/// values kept so far.
pub fn greedy_set(eq: &Equation, n: u64, budget: u64) -> Result<GreedyResult> {
    if n == 0 {
        return Err(Error::precondition("N must be positive"));
    }
    let mut kernel = AnyKernel::new(eq, Mode::All, n - 1, budget.max(1))?;
    let mut set = Vec::new();
    for x in 1..=n as i64 {
        match kernel.legal(x - 1) {
            Ok(true) => {
                kernel.push(x - 1);
                set.push(x);
            }
            Ok(false) => {}
            Err(Error::BudgetExhausted { .. }) => return Ok(GreedyResult { set, complete: false }),
            Err(e) => return Err(e),
        }
    }
    Ok(GreedyResult { set, complete: true })
}

// ------------------------------------------------------------- dependencies

/// A primitive relation `i a + j b + k c = 0`, first nonzero entry positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dependency {
    pub i: i64,
    pub j: i64,
    pub k: i64,
}

impl Dependency {
    pub fn new(i: i64, j: i64, k: i64) -> Result<Self> {
        if i == 0 && j == 0 && k == 0 {
            return Err(Error::precondition("dependency is zero"));
        }
        let g = i.unsigned_abs().gcd(&j.unsigned_abs()).gcd(&k.unsigned_abs());
        if g != 1 {
            return Err(Error::precondition(format!("gcd of ({i},{j},{k}) is {g}")));
        }
        let sign = [i, j, k].into_iter().find(|&v| v != 0).unwrap().signum();
        Ok(Dependency {
            i: i * sign,
            j: j * sign,
            k: k * sign,
        })
    }

    pub fn as_array(&self) -> [i64; 3] {
        [self.i, self.j, self.k]
    }

    pub fn magnitude(&self) -> u64 {
        self.as_array().iter().map(|v| v.unsigned_abs()).max().unwrap()
    }

    pub fn holds_for(&self, a: i64, b: i64, c: i64) -> bool {
        self.i as i128 * a as i128 + self.j as i128 * b as i128 + self.k as i128 * c as i128 == 0
    }

    /// True when `(x, y, z)` is not a rational multiple of this relation.
    pub fn independent_of(&self, v: [i64; 3]) -> bool {
        let d = self.as_array().map(|x| x as i128);
        let v = v.map(|x| x as i128);
        d[1] * v[2] != d[2] * v[1] || d[0] * v[2] != d[2] * v[0] || d[0] * v[1] != d[1] * v[0]
    }
}

/// Smallest primitive relation with all magnitudes at most `m`, ordered by
/// magnitude and then lexicographically.
pub fn small_dependency_search(a: i64, b: i64, c: i64, m: u64) -> Result<Option<Dependency>> {
    if a < 1 || b < 1 || c < 1 {
        return Err(Error::precondition("coefficients must be positive"));
    }
    if m == 0 {
        return Err(Error::precondition("M must be at least 1"));
    }
    let m = m.min(i64::MAX as u64 / 4) as i64;
    let (a, b, c) = (a as i128, b as i128, c as i128);
    let mut best: Option<(u64, [i64; 3])> = None;
    for i in -m..=m {
        for j in -m..=m {
            let s = a * i as i128 + b * j as i128;
            if s % c != 0 {
                continue;
            }
            let k = -s / c;
            if k.abs() > m as i128 {
                continue;
            }
            let k = k as i64;
            if i == 0 && j == 0 && k == 0 {
                continue;
            }
            let Ok(d) = Dependency::new(i, j, k) else { continue };
            if d.as_array() != [i, j, k] {
                continue;
            }
            let key = (d.magnitude(), d.as_array());
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
    }
    Ok(best.map(|(_, v)| Dependency {
        i: v[0],
        j: v[1],
        k: v[2],
    }))
}

// ------------------------------------------------------------------- grids

/// `s * M + 1` for `M` in the standard grid, or up to 512 when extended.
pub fn auto_grid(eq: &Equation, extended: bool) -> Vec<u64> {
    let top = if extended { 512 } else { 128 };
    let s = eq.side_sum();
    let mut m = 4u64;
    let mut out = Vec::new();
    while m <= top {
        out.push(s * m + 1);
        m *= 2;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub l: u64,
    pub size: usize,
    pub digits: Vec<i64>,
    /// Smallest base satisfying the no-carry bound for these digits.
    pub base: u64,
    pub rate: f64,
    pub exhausted: bool,
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub rows: Vec<GridRow>,
    /// Certificate for the best-rate row when the equation allows lifting.
    pub best: Option<Certificate>,
}

impl GridReport {
    pub fn all_exhausted(&self) -> bool {
        self.rows.iter().all(|r| r.exhausted)
    }

    pub fn best_row(&self) -> Option<&GridRow> {
        self.rows
            .iter()
            .fold(None, |acc: Option<&GridRow>, r| match acc {
                Some(b) if b.rate >= r.rate => Some(b),
                _ => Some(r),
            })
    }
}

/// Runs [`max_digit_set`] at every grid base and certifies the best rate.
/// `cfg.budget` is shared by the whole grid; rows reached after it runs out
/// get a single node (the greedy incumbent in anytime mode).
pub fn grid_search(
    eq: &Equation,
    grid: &[u64],
    cfg: &SearchConfig,
    mut progress: Option<&mut dyn FnMut(u64, &ProgressEvent)>,
) -> Result<GridReport> {
    if grid.is_empty() {
        return Err(Error::precondition("empty L grid"));
    }
    let mut rows = Vec::new();
    let mut used = 0u64;
    for &l in grid {
        let row_cfg = SearchConfig {
            budget: cfg.budget.saturating_sub(used).max(1),
            ..cfg.clone()
        };
        let r = match progress.as_mut() {
            Some(cb) => {
                let mut f = |e: &ProgressEvent| cb(l, e);
                max_digit_set(eq, l, &row_cfg, Some(&mut f))?
            }
            None => max_digit_set(eq, l, &row_cfg, None)?,
        };
        used = used.saturating_add(r.nodes);
        let ds = DigitSet::with_minimal_base(eq.clone(), r.digits.clone())?;
        rows.push(GridRow {
            l,
            size: r.digits.len(),
            base: ds.base(),
            rate: ds.rate().decimal(),
            digits: r.digits,
            exhausted: r.exhausted,
            nodes: r.nodes,
        });
    }
    let mut report = GridReport { rows, best: None };
    let liftable = cfg.solution_mode == Mode::Distinct || is_primitive(eq)?;
    if let (Some(row), true) = (report.best_row().cloned(), liftable) {
        let ds = DigitSet::with_minimal_base(eq.clone(), row.digits.clone())?;
        let cert = Certificate::certify(ds, cfg.solution_mode, DEFAULT_BUDGET)?.with_recipe(Recipe::Search {
            grid_base: row.l,
            exhausted: row.exhausted,
            nodes: row.nodes,
        });
        report.best = Some(cert);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equation::make_symmetric;

    fn exact() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn tiny_searches() {
        let eq = make_symmetric(&[1, 2]).unwrap();
        let r = max_digit_set(&eq, 4, &exact(), None).unwrap();
        assert_eq!(r.digits, vec![0, 1]);
        assert!(r.exhausted);
        let eq = make_symmetric(&[10, 11, 31]).unwrap();
        let r = max_digit_set(&eq, 261, &exact(), None).unwrap();
        assert!(r.digits.len() >= 4);
        assert_eq!(r.kernel, KernelKind::Difference);
    }

    #[test]
    fn kernels_agree() {
        let eq = make_symmetric(&[1, 3, 7]).unwrap();
        let mut d = AnyKernel::new(&eq, Mode::All, 40, DEFAULT_BUDGET).unwrap();
        let mut o = AnyKernel::Oracle(OracleKernel::new(&eq, Mode::All, DEFAULT_BUDGET));
        assert_eq!(d.kind(), KernelKind::Difference);
        for z in 0..=40 {
            let a = d.legal(z).unwrap();
            assert_eq!(a, o.legal(z).unwrap(), "z={z}");
            if a {
                d.push(z);
                o.push(z);
            }
        }
    }

    #[test]
    fn greedy_sidon() {
        let eq = make_symmetric(&[1, 1]).unwrap();
        assert_eq!(greedy_set(&eq, 30, DEFAULT_BUDGET).unwrap().set, vec![1, 2, 4, 8, 13, 21]);
        assert_eq!(greedy_set(&eq, 1, DEFAULT_BUDGET).unwrap().set, vec![1]);
    }

    #[test]
    fn dependency_examples() {
        assert_eq!(
            small_dependency_search(10, 11, 31, 3).unwrap(),
            Some(Dependency { i: 2, j: 1, k: -1 })
        );
        assert_eq!(small_dependency_search(1, 2, 4, 1).unwrap(), None);
        assert_eq!(
            small_dependency_search(1, 2, 3, 1).unwrap(),
            Some(Dependency { i: 1, j: 1, k: -1 })
        );
    }

    #[test]
    fn auto_grid_shape() {
        let eq = make_symmetric(&[43, 69, 70]).unwrap();
        assert_eq!(auto_grid(&eq, false), vec![729, 1457, 2913, 5825, 11649, 23297]);
        assert_eq!(auto_grid(&eq, true).len(), 8);
    }
}
