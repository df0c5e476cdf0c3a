use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::lift::nth_admissible;
use crate::certificate::{Certificate, DigitSet, Recipe};
use crate::equation::{is_dissociated, make_symmetric, Equation};
use crate::error::{Error, Result};
use crate::oracle::{Mode, DEFAULT_BUDGET};
use crate::search::{small_dependency_search, Dependency};

/// A coordinate pair of a dependency and the reduced two-variable equation
/// it leads to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct PairChoice {
    u: u64,
    v: u64,
}

impl PairChoice {
    fn base(&self) -> u64 {
        (self.u + self.v) * (self.v - 1) + 1
    }

    fn rate(&self) -> f64 {
        (self.v as f64).ln() / (self.base() as f64).ln()
    }

    fn digits(&self) -> Vec<u64> {
        (0..self.v).collect()
    }

    /// Increasing members of the base lift, at most `limit` of them and none
    /// above `cap`.
    fn sequence(&self, limit: usize, cap: u64) -> Vec<i64> {
        let base = self.base();
        let d = self.digits();
        (0u64..)
            .map(|t| nth_admissible(t, base, &d))
            .take_while(|y| matches!(y, Some(y) if *y <= cap))
            .take(limit)
            .map(|y| y.unwrap() as i64)
            .collect()
    }
}

/// Pairs of nonzero coordinates with distinct magnitudes, reduced by their
/// gcd and ordered `u < v`.
fn pair_choices(dep: &Dependency) -> Vec<PairChoice> {
    let d = dep.as_array();
    let mut out = Vec::new();
    for (p, q) in [(0, 1), (0, 2), (1, 2)] {
        let (x, y) = (d[p].unsigned_abs(), d[q].unsigned_abs());
        if x == 0 || y == 0 || x == y {
            continue;
        }
        let g = x.gcd(&y);
        let (u, v) = ((x / g).min(y / g), (x / g).max(y / g));
        out.push(PairChoice { u, v });
    }
    out
}

/// Digits in `[0, L)` whose difference set never holds both `t*i1` and
/// `t*j1` for the chosen coordinate pair, from the two-variable lift of the
/// reduced pair. The pair with the best two-variable rate is used.
pub fn avoid_one_dependency_digits(dep: &Dependency, l: u64) -> Result<Vec<i64>> {
    if l < 2 {
        return Err(Error::precondition("L must be at least 2"));
    }
    let choice = pair_choices(dep)
        .into_iter()
        .fold(None, |acc: Option<PairChoice>, c| match acc {
            Some(b) if b.rate() >= c.rate() => Some(b),
            _ => Some(c),
        })
        .ok_or_else(|| Error::precondition("no coordinate pair with distinct magnitudes"))?;
    Ok(choice.sequence(usize::MAX, l - 1))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub holds: bool,
    pub alpha2: f64,
    /// `b^(1 - alpha2) / 2`.
    pub threshold: f64,
    /// Independent relation of least magnitude inside the bound.
    pub smallest_independent: Option<[i64; 3]>,
    pub checked: u64,
}

/// Every relation with magnitudes at most `bound` that is not a multiple of
/// `dep` has a coordinate of size at least `b^(1-alpha2)/2`, with `alpha2`
/// the least exponent covering `dep`.
pub fn dependency_gap_check(a: i64, b: i64, c: i64, dep: &Dependency, bound: u64) -> Result<bool> {
    Ok(dependency_gap_report(a, b, c, dep, bound, None, DEFAULT_BUDGET)?.holds)
}

pub fn dependency_gap_report(
    a: i64,
    b: i64,
    c: i64,
    dep: &Dependency,
    bound: u64,
    alpha2: Option<f64>,
    budget: u64,
) -> Result<GapReport> {
    if a < 1 || b < 2 || c < 1 {
        return Err(Error::precondition("need positive a, c and b >= 2"));
    }
    if b.gcd(&c) != 1 {
        return Err(Error::precondition(format!("gcd({b}, {c}) != 1")));
    }
    if !dep.holds_for(a, b, c) {
        return Err(Error::precondition("dependency does not hold"));
    }
    let bf = b as f64;
    let minimal = (dep.magnitude() as f64).ln() / bf.ln();
    let alpha2 = alpha2.unwrap_or(minimal);
    if dep.magnitude() as f64 > bf.powf(alpha2) * (1.0 + 1e-12) {
        return Err(Error::precondition(format!(
            "dependency magnitude {} exceeds b^{alpha2}",
            dep.magnitude()
        )));
    }
    let threshold = bf.powf(1.0 - alpha2) / 2.0;
    let bound = bound.min(i64::MAX as u64 / 4) as i64;
    let per_i = (2 * bound as u128) / c as u128 + 1;
    let cost = (2 * bound as u128 + 1) * per_i;
    if cost > budget as u128 {
        return Err(Error::BudgetExhausted { budget });
    }
    let (ai, bi, ci) = (a as i128, b as i128, c as i128);
    let binv = {
        let e = bi.rem_euclid(ci).extended_gcd(&ci);
        e.x.rem_euclid(ci)
    };
    let mut smallest: Option<(u64, [i64; 3])> = None;
    let mut checked = 0u64;
    for i in -bound..=bound {
        let rhs = -(i as i128) * ai;
        let j0 = (rhs.rem_euclid(ci) * binv).rem_euclid(ci);
        let lo = -(bound as i128);
        let mut j = lo + (j0 - lo).rem_euclid(ci);
        while j <= bound as i128 {
            checked += 1;
            let k = (rhs - j * bi) / ci;
            if k.abs() <= bound as i128 && (i != 0 || j != 0 || k != 0) {
                let v = [i, j as i64, k as i64];
                if dep.independent_of(v) {
                    let key = (v.iter().map(|x| x.unsigned_abs()).max().unwrap(), v);
                    if smallest.is_none_or(|s| key < s) {
                        smallest = Some(key);
                    }
                }
            }
            j += ci;
        }
    }
    let holds = smallest.is_none_or(|(mag, _)| mag as f64 >= threshold * (1.0 - 1e-12));
    Ok(GapReport {
        holds,
        alpha2,
        threshold,
        smallest_independent: smallest.map(|s| s.1),
        checked,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThreeVarCase {
    /// `c > b^3`: the two-variable set for `(a, b)` in a short window.
    LargeC,
    /// No relation with magnitudes below `b^alpha`.
    NoDependency,
    /// A relation whose largest entry exceeds the largeness threshold.
    LargeDependency,
    /// A relation with all entries below the threshold.
    SmallDependency,
}

impl ThreeVarCase {
    pub fn as_str(self) -> &'static str {
        match self {
            ThreeVarCase::LargeC => "large_c",
            ThreeVarCase::NoDependency => "no_dependency",
            ThreeVarCase::LargeDependency => "large_dependency",
            ThreeVarCase::SmallDependency => "small_dependency",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeVarConfig {
    /// Natural log of the magnitude separating large from small dependencies.
    pub large_threshold_ln: f64,
    /// Floor for the small-dependency window exponent.
    pub small_alpha2: f64,
    /// Longest digit prefix tried when extending past the guaranteed window.
    pub max_digits: usize,
    pub budget: u64,
}

impl Default for ThreeVarConfig {
    fn default() -> Self {
        ThreeVarConfig {
            large_threshold_ln: 1000f64.ln(),
            small_alpha2: 0.1,
            max_digits: 128,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl ThreeVarConfig {
    /// The astronomically large constants from the original argument; every
    /// dependency counts as small at computable sizes.
    pub fn literal() -> Self {
        ThreeVarConfig {
            large_threshold_ln: 1e6,
            ..Self::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeVarResult {
    pub certificate: Certificate,
    pub case: ThreeVarCase,
    pub dependency: Option<Dependency>,
    pub alpha2: Option<f64>,
    /// Digits up to this value are covered by the argument itself; anything
    /// beyond was accepted on the oracle's word.
    pub guaranteed_window: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeVarPlan {
    pub case: ThreeVarCase,
    pub dependency: Option<Dependency>,
    pub digits: Vec<i64>,
    pub base: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ThreeVarOutcome {
    Certified(ThreeVarResult),
    /// The oracle ran out of budget; the digits are a plan, not a certificate.
    Unverified(ThreeVarPlan),
}

impl ThreeVarOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            ThreeVarOutcome::Certified(r) => Some(&r.certificate),
            ThreeVarOutcome::Unverified(_) => None,
        }
    }
}

enum Check {
    Free(Certificate),
    Witness,
    Budget,
}

fn check(eq: &Equation, digits: &[i64], budget: u64) -> Result<Check> {
    let ds = DigitSet::with_minimal_base(eq.clone(), digits.to_vec())?;
    match Certificate::certify(ds, Mode::All, budget) {
        Ok(c) => Ok(Check::Free(c)),
        Err(Error::Uncertified(_)) => Ok(Check::Witness),
        Err(Error::BudgetExhausted { .. }) => Ok(Check::Budget),
        Err(e) => Err(e),
    }
}

fn prefix_rate(eq: &Equation, seq: &[i64], n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let base = eq.side_sum() as f64 * seq[n - 1] as f64 + 1.0;
    (n as f64).ln() / base.ln()
}

enum Extended {
    Done(Certificate),
    Unverified(Vec<i64>, String),
}

/// Certifies the guaranteed prefix, then extends it as far as the oracle
/// allows (solution-freeness is inherited by prefixes, so a binary search
/// is sound) and keeps the prefix of best rate.
fn extend_prefix(eq: &Equation, seq: &[i64], guaranteed: usize, budget: u64) -> Result<Extended> {
    let guaranteed = guaranteed.clamp(1, seq.len());
    match check(eq, &seq[..guaranteed], budget)? {
        Check::Free(_) => {}
        Check::Budget => {
            return Ok(Extended::Unverified(
                seq[..guaranteed].to_vec(),
                "oracle budget exhausted on the guaranteed window".into(),
            ))
        }
        Check::Witness => {
            return Err(Error::Uncertified(format!(
                "guaranteed window {:?} has a solution",
                &seq[..guaranteed]
            )))
        }
    }
    let (mut lo, mut hi) = (guaranteed, seq.len());
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        match check(eq, &seq[..mid], budget)? {
            Check::Free(_) => lo = mid,
            Check::Witness | Check::Budget => hi = mid - 1,
        }
    }
    let best = (1..=lo)
        .max_by(|&x, &y| prefix_rate(eq, seq, x).total_cmp(&prefix_rate(eq, seq, y)).then(y.cmp(&x)))
        .unwrap();
    match check(eq, &seq[..best], budget)? {
        Check::Free(c) => Ok(Extended::Done(c)),
        _ => Err(Error::Uncertified("prefix of a verified set failed".into())),
    }
}

fn largest_below(x: f64) -> u64 {
    // largest integer strictly below x
    let c = x.ceil();
    if c <= 0.0 {
        0
    } else {
        c as u64 - 1
    }
}

/// Three-coefficient construction for `ax + by + cz = ax' + by' + cz'`.
///
/// Looks for a relation `ia + jb + kc = 0` with entries up to `b^alpha`.
/// Without one, `{0..T}` works for every `T` below the least relation
/// magnitude. With one, a short window is free of every other relation, and
/// inside it only multiples of the found relation must be avoided, which a
/// two-variable lift does. Each emitted digit set is oracle-certified; the
/// window is extended past the guaranteed range while the oracle agrees.
pub fn theorem_three_pipeline(a: i64, b: i64, c: i64, alpha: f64, cfg: &ThreeVarConfig) -> Result<ThreeVarOutcome> {
    if !(a >= 1 && a <= b && b <= c) {
        return Err(Error::precondition("need 1 <= a <= b <= c"));
    }
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::precondition(format!("alpha {alpha} outside (0, 1/2)")));
    }
    if b.gcd(&c) != 1 {
        return Err(Error::precondition(format!("gcd({b}, {c}) != 1")));
    }
    if c == a + b {
        return Err(Error::precondition("c = a + b"));
    }
    if !is_dissociated(&[a, b, c])? {
        return Err(Error::precondition("generators are not dissociated; equation not primitive"));
    }
    let eq = make_symmetric(&[a, b, c])?;
    let limit = cfg.max_digits.max(2);
    let bf = b as f64;

    let finish = |ext: Extended, case, dep: Option<Dependency>, alpha2, window: u64| -> ThreeVarOutcome {
        match ext {
            Extended::Done(cert) => {
                let cert = cert.with_recipe(Recipe::ThreeVar {
                    a,
                    b,
                    c,
                    alpha,
                    case: ThreeVarCase::as_str(case).into(),
                    dependency: dep.map(|d| d.as_array()),
                    window,
                });
                ThreeVarOutcome::Certified(ThreeVarResult {
                    certificate: cert,
                    case,
                    dependency: dep,
                    alpha2,
                    guaranteed_window: window,
                })
            }
            Extended::Unverified(digits, reason) => {
                let base = eq.side_sum() * *digits.last().unwrap() as u64 + 1;
                ThreeVarOutcome::Unverified(ThreeVarPlan {
                    case,
                    dependency: dep,
                    digits,
                    base,
                    reason,
                })
            }
        }
    };

    if (c as f64) > bf.powi(3) {
        let g = a.gcd(&b);
        let pair = PairChoice {
            u: (a / g) as u64,
            v: (b / g) as u64,
        };
        let window = ((c as f64).powf(2.0 / 3.0) / 2.0).floor() as u64;
        let seq = pair.sequence(limit, u64::MAX / 2);
        let guaranteed = seq.iter().take_while(|&&y| y as u64 <= window).count();
        let ext = extend_prefix(&eq, &seq, guaranteed, cfg.budget)?;
        return Ok(finish(ext, ThreeVarCase::LargeC, None, None, window));
    }

    let m1 = (bf.powf(alpha).floor() as u64).max(1);
    match small_dependency_search(a, b, c, m1)? {
        None => {
            let cap = (limit as u64).min(c as u64);
            let t = match small_dependency_search(a, b, c, cap)? {
                Some(d) => d.magnitude() - 1,
                None => cap - 1,
            }
            .max(m1);
            let seq: Vec<i64> = (0..=t as i64).collect();
            let ext = extend_prefix(&eq, &seq, m1 as usize + 1, cfg.budget)?;
            Ok(finish(ext, ThreeVarCase::NoDependency, None, None, m1))
        }
        Some(dep) => {
            let large = (dep.magnitude() as f64).ln() > cfg.large_threshold_ln;
            let (case, alpha2) = if large {
                (ThreeVarCase::LargeDependency, alpha)
            } else {
                let least = (dep.magnitude() as f64).ln() / bf.ln();
                (ThreeVarCase::SmallDependency, cfg.small_alpha2.max(least))
            };
            let window = largest_below(bf.powf(1.0 - alpha2) / 2.0);
            let choices = pair_choices(&dep);
            if choices.is_empty() {
                return Err(Error::precondition("dependency has no coordinate pair with distinct magnitudes"));
            }
            let mut best: Option<(f64, ThreeVarOutcome)> = None;
            for pair in choices {
                let seq = pair.sequence(limit, u64::MAX / 2);
                let guaranteed = seq.iter().take_while(|&&y| y as u64 <= window).count();
                let ext = extend_prefix(&eq, &seq, guaranteed, cfg.budget)?;
                let out = finish(ext, case, Some(dep), Some(alpha2), window);
                let score = out.certificate().map_or(-1.0, |c| c.rate().decimal());
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    best = Some((score, out));
                }
            }
            Ok(best.unwrap().1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::verify_certificate;

    #[test]
    fn avoid_examples() {
        let dep = Dependency::new(2, 1, -1).unwrap();
        let d = avoid_one_dependency_digits(&dep, 52).unwrap();
        assert_eq!(&d[..4], &[0, 1, 4, 5]);
        assert!(d.iter().all(|&x| x < 52));
        let dep = Dependency::new(1, 2, -1).unwrap();
        assert_eq!(avoid_one_dependency_digits(&dep, 4).unwrap(), vec![0, 1]);
        let dep = Dependency::new(1, -1, 1).unwrap();
        assert!(avoid_one_dependency_digits(&dep, 10).is_err());
    }

    #[test]
    fn avoid_output_has_no_scaled_pair() {
        let dep = Dependency::new(2, 1, -1).unwrap();
        let d = avoid_one_dependency_digits(&dep, 400).unwrap();
        let diffs: std::collections::HashSet<i64> =
            d.iter().flat_map(|x| d.iter().map(move |y| (x - y).abs())).collect();
        for t in 1..400 {
            assert!(!(diffs.contains(&(2 * t)) && diffs.contains(&t)), "t={t}");
        }
    }

    #[test]
    fn gap_examples() {
        let dep = Dependency::new(2, 1, -1).unwrap();
        assert!(dependency_gap_check(10, 11, 31, &dep, 40).unwrap());
        let dep = Dependency::new(1, 1, -1).unwrap();
        let r = dependency_gap_report(1, 2, 3, &dep, 10, None, DEFAULT_BUDGET).unwrap();
        assert!(r.smallest_independent.is_some());
    }

    #[test]
    fn pipeline_ten_eleven_thirty_one() {
        let out = theorem_three_pipeline(10, 11, 31, 0.3, &ThreeVarConfig::default()).unwrap();
        let ThreeVarOutcome::Certified(r) = out else { panic!("unverified") };
        assert_eq!(r.case, ThreeVarCase::SmallDependency);
        assert_eq!(r.dependency, Some(Dependency { i: 2, j: 1, k: -1 }));
        assert!(r.certificate.rate().decimal() >= 1.0 / 4.1);
        assert!(verify_certificate(&r.certificate).unwrap());
    }

    #[test]
    fn pipeline_no_dependency_and_large_c() {
        let out = theorem_three_pipeline(2, 17, 167, 0.3, &ThreeVarConfig::default()).unwrap();
        let ThreeVarOutcome::Certified(r) = out else { panic!("unverified") };
        assert_eq!(r.case, ThreeVarCase::NoDependency);
        let out = theorem_three_pipeline(2, 3, 100, 0.3, &ThreeVarConfig::default()).unwrap();
        let ThreeVarOutcome::Certified(r) = out else { panic!("unverified") };
        assert_eq!(r.case, ThreeVarCase::LargeC);
        assert!(verify_certificate(&r.certificate).unwrap());
    }

    #[test]
    fn pipeline_rejects_bad_input() {
        let cfg = ThreeVarConfig::default();
        assert!(theorem_three_pipeline(1, 2, 3, 0.3, &cfg).is_err());
        assert!(theorem_three_pipeline(2, 4, 6, 0.3, &cfg).is_err());
        assert!(theorem_three_pipeline(10, 11, 31, 0.7, &cfg).is_err());
    }

    #[test]
    fn tiny_budget_gives_plan() {
        let cfg = ThreeVarConfig {
            budget: 3,
            ..ThreeVarConfig::default()
        };
        let out = theorem_three_pipeline(10, 11, 31, 0.3, &cfg).unwrap();
        assert!(matches!(out, ThreeVarOutcome::Unverified(_)));
    }
}
