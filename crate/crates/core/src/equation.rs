//! Invariant linear equations and their structural predicates.
//!
//! An equation is stored as a coefficient vector `c` with `sum(c) = 0`,
//! read as `c_1 x_1 + ... + c_m x_m = 0`. Coefficients are kept in a
//! canonical order (descending absolute value, positive before negative on
//! ties); every position-indexed API (assignments, witnesses) refers to
//! that order.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};

/// Largest variable count accepted by [`genus`].
pub const GENUS_MAX_VARS: usize = 16;
/// Largest variable count accepted by [`is_primitive`].
pub const PRIMITIVE_MAX_VARS: usize = 24;
/// Largest generator count accepted by [`is_dissociated`].
pub const DISSOCIATED_MAX_LEN: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawEquation", into = "RawEquation")]
pub struct Equation {
    coeffs: Vec<i64>,
    symmetric_gen: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct RawEquation {
    #[serde(with = "decimal::vec")]
    coeffs: Vec<i64>,
    #[serde(with = "decimal::opt_vec", default)]
    symmetric_gen: Option<Vec<i64>>,
}

impl TryFrom<RawEquation> for Equation {
    type Error = Error;

    fn try_from(raw: RawEquation) -> Result<Self> {
        let eq = Equation::new(raw.coeffs)?;
        if let Some(mut gen) = raw.symmetric_gen {
            gen.sort_unstable();
            if eq.symmetric_gen.as_deref() != Some(&gen[..]) {
                return Err(Error::Parse(
                    "symmetric_gen does not match the coefficients".into(),
                ));
            }
        }
        Ok(eq)
    }
}

impl From<Equation> for RawEquation {
    fn from(eq: Equation) -> Self {
        RawEquation {
            coeffs: eq.coeffs,
            symmetric_gen: eq.symmetric_gen,
        }
    }
}

impl Equation {
    /// Builds an invariant equation from raw coefficients.
    ///
    /// Zero coefficients are dropped. The symmetric tag is set whenever the
    /// positive coefficients and the negated negative ones agree as multisets.
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        let mut coeffs: Vec<i64> = coeffs.into_iter().filter(|&c| c != 0).collect();
        if coeffs.is_empty() {
            return Err(Error::EmptyEquation);
        }
        if coeffs.contains(&i64::MIN) {
            return Err(Error::Overflow("coefficient i64::MIN".into()));
        }
        let total: i128 = coeffs.iter().map(|&c| c as i128).sum();
        if total != 0 {
            return Err(Error::NotInvariant(total));
        }
        coeffs.sort_by_key(|&c| (std::cmp::Reverse(c.unsigned_abs()), c < 0));

        let mut pos: Vec<i64> = coeffs.iter().copied().filter(|&c| c > 0).collect();
        let mut neg: Vec<i64> = coeffs.iter().filter(|&&c| c < 0).map(|&c| -c).collect();
        pos.sort_unstable();
        neg.sort_unstable();
        let symmetric_gen = (pos == neg).then_some(pos);
        Ok(Equation {
            coeffs,
            symmetric_gen,
        })
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Generators `a_1..a_k` (ascending) when the equation is symmetric.
    pub fn symmetric_gen(&self) -> Option<&[i64]> {
        self.symmetric_gen.as_deref()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric_gen.is_some()
    }

    /// Number of variables.
    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// Sum of the positive coefficients (equal to the absolute sum of the
    /// negative ones). For a symmetric equation this is `a_1 + ... + a_k`.
    pub fn side_sum(&self) -> u64 {
        self.coeffs
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| c as u64)
            .sum()
    }

    /// Evaluates `sum c_i x_i` exactly.
    pub fn evaluate(&self, x: &[i64]) -> Result<i128> {
        if x.len() != self.m() {
            return Err(Error::ArityMismatch {
                expected: self.m(),
                got: x.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(x)
            .map(|(&c, &v)| c as i128 * v as i128)
            .sum())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.unsigned_abs();
            if a != 1 {
                write!(f, "{a}")?;
            }
            write!(f, "x{}", i + 1)?;
        }
        write!(f, " = 0")
    }
}

/// Symmetric equation `a_1 x_1 + .. + a_k x_k = a_1 x_1' + .. + a_k x_k'`.
pub fn make_symmetric(a: &[i64]) -> Result<Equation> {
    if a.is_empty() {
        return Err(Error::EmptyEquation);
    }
    if let Some(&bad) = a.iter().find(|&&v| v < 1) {
        return Err(Error::NonPositiveGenerator(bad));
    }
    let coeffs = a.iter().copied().chain(a.iter().map(|&v| -v)).collect();
    Equation::new(coeffs)
}

/// Sign normalization for raw symmetric generators: a negative `a_i` is
/// handled by swapping `x_i` and `x_i'`, a zero one by dropping the term.
pub fn normalize_generators(a: &[i64]) -> Vec<i64> {
    a.iter()
        .filter(|&&v| v != 0)
        .map(|&v| v.unsigned_abs() as i64)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolutionKind {
    Trivial,
    NonTrivial,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SolutionClass {
    pub assignment: Vec<i64>,
    pub kind: SolutionKind,
}

/// A solution is trivial when, for every value it takes, the coefficients at
/// the positions holding that value sum to zero.
pub(crate) fn is_trivial(coeffs: &[i64], x: &[i64]) -> bool {
    let m = x.len();
    let mut seen = [false; 64];
    if m > 64 {
        let mut classes: HashMap<i64, i128> = HashMap::new();
        for (&c, &v) in coeffs.iter().zip(x) {
            *classes.entry(v).or_default() += c as i128;
        }
        return classes.values().all(|&s| s == 0);
    }
    for i in 0..m {
        if seen[i] {
            continue;
        }
        let mut sum = 0i128;
        for j in i..m {
            if x[j] == x[i] {
                seen[j] = true;
                sum += coeffs[j] as i128;
            }
        }
        if sum != 0 {
            return false;
        }
    }
    true
}

pub fn classify_solution(eq: &Equation, x: &[i64]) -> Result<SolutionClass> {
    if eq.evaluate(x)? != 0 {
        return Err(Error::NotASolution);
    }
    let kind = if is_trivial(eq.coeffs(), x) {
        SolutionKind::Trivial
    } else {
        SolutionKind::NonTrivial
    };
    Ok(SolutionClass {
        assignment: x.to_vec(),
        kind,
    })
}

fn subset_sums(coeffs: &[i64]) -> Vec<i128> {
    let m = coeffs.len();
    let mut sums = vec![0i128; 1 << m];
    for mask in 1usize..(1 << m) {
        let low = mask.trailing_zeros() as usize;
        sums[mask] = sums[mask & (mask - 1)] + coeffs[low] as i128;
    }
    sums
}

/// Largest number of disjoint zero-sum blocks partitioning the variables.
pub fn genus(eq: &Equation) -> Result<usize> {
    let m = eq.m();
    if m > GENUS_MAX_VARS {
        return Err(Error::TooLarge {
            what: "genus",
            limit: GENUS_MAX_VARS,
            got: m,
        });
    }
    let sums = subset_sums(eq.coeffs());
    let full = (1usize << m) - 1;
    // best[s] = max blocks in a zero-sum partition of s; 0 marks "unset" for s != 0
    let mut best = vec![0u8; 1 << m];
    for s in 1..=full {
        if sums[s] != 0 {
            continue;
        }
        let low = s & s.wrapping_neg();
        let rest = s ^ low;
        // enumerate submasks t of s that contain the lowest bit
        let mut sub = rest;
        loop {
            let t = sub | low;
            if sums[t] == 0 {
                let r = s ^ t;
                let cand = if r == 0 {
                    1
                } else if best[r] > 0 {
                    best[r] + 1
                } else {
                    0
                };
                best[s] = best[s].max(cand);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    match best[full] {
        0 => Err(Error::precondition("no zero-sum partition exists")),
        g => Ok(g as usize),
    }
}

/// Finest partition of the variables that no zero-sum subset splits.
///
/// Two positions land in the same block iff every zero-sum subset contains
/// both or neither of them.
fn inseparable_blocks(coeffs: &[i64]) -> Vec<u32> {
    let m = coeffs.len();
    let mut blocks: Vec<u32> = vec![((1u64 << m) - 1) as u32];
    let mut mask: u32 = 0;
    let mut sum: i128 = 0;
    for i in 1u64..(1u64 << m) {
        let bit = i.trailing_zeros() as usize;
        mask ^= 1 << bit;
        if mask & (1 << bit) != 0 {
            sum += coeffs[bit] as i128;
        } else {
            sum -= coeffs[bit] as i128;
        }
        if sum != 0 {
            continue;
        }
        let mut next = Vec::with_capacity(blocks.len() + 1);
        for &b in &blocks {
            let inside = b & mask;
            let outside = b & !mask;
            if inside != 0 {
                next.push(inside);
            }
            if outside != 0 {
                next.push(outside);
            }
        }
        blocks = next;
        if blocks.len() == m {
            break;
        }
    }
    blocks.sort_unstable_by_key(|b| b.trailing_zeros());
    blocks
}

/// Zero-sum blocks of a primitive equation, as position bitmasks, or `None`
/// when the equation is not primitive.
pub fn primitive_blocks(eq: &Equation) -> Result<Option<Vec<u32>>> {
    let m = eq.m();
    if m > PRIMITIVE_MAX_VARS {
        return Err(Error::TooLarge {
            what: "primitivity",
            limit: PRIMITIVE_MAX_VARS,
            got: m,
        });
    }
    let coeffs = eq.coeffs();
    let blocks = inseparable_blocks(coeffs);
    let zero_sum = |b: u32| -> bool {
        (0..m)
            .filter(|i| b & (1 << i) != 0)
            .map(|i| coeffs[i] as i128)
            .sum::<i128>()
            == 0
    };
    Ok(blocks.iter().all(|&b| zero_sum(b)).then_some(blocks))
}

/// An equation is primitive when its minimal zero-sum subsets are pairwise
/// disjoint, cover every variable, and generate every zero-sum subset by
/// unions. Equivalently: the inseparable blocks are themselves zero-sum.
pub fn is_primitive(eq: &Equation) -> Result<bool> {
    primitive_blocks(eq).map(|b| b.is_some())
}

fn signed_sums(a: &[i64]) -> Vec<(i128, bool)> {
    let mut out = vec![(0i128, false)];
    for &v in a {
        let mut next = Vec::with_capacity(out.len() * 3);
        for &(s, nz) in &out {
            next.push((s, nz));
            next.push((s + v as i128, true));
            next.push((s - v as i128, true));
        }
        out = next;
    }
    out
}

/// True iff all `2^k` subset sums of `a` are distinct.
pub fn is_dissociated(a: &[i64]) -> Result<bool> {
    let k = a.len();
    if k > DISSOCIATED_MAX_LEN {
        return Err(Error::TooLarge {
            what: "dissociativity",
            limit: DISSOCIATED_MAX_LEN,
            got: k,
        });
    }
    if let Some(&bad) = a.iter().find(|&&v| v < 1) {
        return Err(Error::NonPositiveGenerator(bad));
    }
    // Distinct subset sums <=> no nonzero vector in {-1,0,1}^k annihilates a.
    let (left, right) = a.split_at(k / 2);
    let mut reach: HashMap<i128, bool> = HashMap::new();
    for (s, nz) in signed_sums(left) {
        let e = reach.entry(s).or_insert(false);
        *e |= nz;
    }
    for (s, nz) in signed_sums(right) {
        match reach.get(&-s) {
            Some(&left_nz) if nz || left_nz => return Ok(false),
            _ => {}
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(a: &[i64]) -> Equation {
        make_symmetric(a).unwrap()
    }

    #[test]
    fn make_symmetric_expands_generators() {
        let eq = sym(&[1, 2]);
        assert_eq!(eq.coeffs(), &[2, -2, 1, -1]);
        assert_eq!(eq.symmetric_gen(), Some(&[1, 2][..]));
        assert_eq!(eq.m(), 4);

        let eq = sym(&[10, 11, 31]);
        let mut c = eq.coeffs().to_vec();
        c.sort_unstable();
        assert_eq!(c, vec![-31, -11, -10, 10, 11, 31]);
        assert_eq!(sym(&[43, 69, 70]).m(), 6);
    }

    #[test]
    fn make_symmetric_rejects_bad_input() {
        assert_eq!(make_symmetric(&[]), Err(Error::EmptyEquation));
        assert_eq!(make_symmetric(&[1, 0]), Err(Error::NonPositiveGenerator(0)));
        assert_eq!(make_symmetric(&[-3]), Err(Error::NonPositiveGenerator(-3)));
        assert_eq!(normalize_generators(&[-3, 0, 2]), vec![3, 2]);
    }

    #[test]
    fn new_strips_zeros_and_checks_invariance() {
        let eq = Equation::new(vec![1, 0, 1, -2]).unwrap();
        assert_eq!(eq.coeffs(), &[-2, 1, 1]);
        assert!(!eq.is_symmetric());
        assert_eq!(Equation::new(vec![1, 1]), Err(Error::NotInvariant(2)));
        assert_eq!(Equation::new(vec![0, 0]), Err(Error::EmptyEquation));
    }

    #[test]
    fn canonical_order_puts_positive_first() {
        let eq = Equation::new(vec![-1, 1, 2, -2]).unwrap();
        assert_eq!(eq.coeffs(), &[2, -2, 1, -1]);
        assert!(eq.is_symmetric());
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus(&sym(&[1, 2])).unwrap(), 2);
        assert_eq!(genus(&sym(&[1, 2, 4, 8])).unwrap(), 4);
        assert_eq!(genus(&Equation::new(vec![1, 1, -2]).unwrap()).unwrap(), 1);
        // x + y + z = x' + y' + z' has genus 3
        assert_eq!(genus(&sym(&[1, 1, 1])).unwrap(), 3);
        let big = Equation::new([1i64; 9].iter().copied().chain([-1i64; 9]).collect()).unwrap();
        assert!(matches!(genus(&big), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn classify_examples() {
        let eq = sym(&[1, 1]);
        let c = classify_solution(&eq, &[3, 5, 5, 3]).unwrap();
        assert_eq!(c.kind, SolutionKind::Trivial);
        let c = classify_solution(&eq, &[1, 4, 2, 3]).unwrap();
        assert_eq!(c.kind, SolutionKind::NonTrivial);
        let eq = sym(&[1, 2]);
        for c in [-3, 0, 7] {
            let cl = classify_solution(&eq, &[c; 4]).unwrap();
            assert_eq!(cl.kind, SolutionKind::Trivial);
        }
        assert_eq!(
            classify_solution(&eq, &[1, 0, 0, 0]),
            Err(Error::NotASolution)
        );
        assert!(matches!(
            classify_solution(&eq, &[1, 0]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn primitivity_examples() {
        assert!(!is_primitive(&sym(&[1, 2, 3])).unwrap());
        assert!(is_primitive(&sym(&[1, 2, 4])).unwrap());
        assert!(is_primitive(&sym(&[10, 11, 31])).unwrap());
        // brute-force listing of the zero-sum subsets of (1,2,3,-1,-2,-3)
        // shows {1,2,-3} which splits the pair {3,-3}
        let eq = sym(&[1, 2, 3]);
        let c = eq.coeffs();
        let splitting = (1u32..1 << 6).any(|mask| {
            let s: i64 = (0..6).filter(|i| mask & (1 << i) != 0).map(|i| c[i]).sum();
            let has3 = (0..6).any(|i| mask & (1 << i) != 0 && c[i] == 3);
            let hasm3 = (0..6).any(|i| mask & (1 << i) != 0 && c[i] == -3);
            s == 0 && has3 != hasm3
        });
        assert!(splitting);
    }

    #[test]
    fn primitive_blocks_of_section_five_equation() {
        let eq = Equation::new(vec![1, 1, 5, 5, -2, -10]).unwrap();
        let blocks = primitive_blocks(&eq).unwrap().unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(!is_primitive(&Equation::new(vec![1, 1, 1, 1, -2, -2]).unwrap()).unwrap());
    }

    #[test]
    fn dissociated_examples() {
        assert!(is_dissociated(&[1, 2, 4]).unwrap());
        assert!(!is_dissociated(&[1, 2, 3]).unwrap());
        assert!(is_dissociated(&[10, 11, 31]).unwrap());
        assert!(!is_dissociated(&[5, 5]).unwrap());
        assert!(is_dissociated(&[7]).unwrap());
        assert!(matches!(
            is_dissociated(&[1; 25]),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn dissociated_matches_subset_sum_enumeration() {
        // independent route: sort all 2^k subset sums
        let cases: [&[i64]; 5] = [&[3, 5, 6, 7], &[1, 3, 9, 27], &[2, 17, 167], &[6, 9, 11, 12, 13], &[1, 4, 5]];
        for a in cases {
            let mut sums: Vec<i64> = (0u32..1 << a.len())
                .map(|m| (0..a.len()).filter(|i| m & (1 << i) != 0).map(|i| a[i]).sum())
                .collect();
            sums.sort_unstable();
            let distinct = sums.windows(2).all(|w| w[0] != w[1]);
            assert_eq!(is_dissociated(a).unwrap(), distinct, "{a:?}");
        }
    }

    #[test]
    fn json_uses_decimal_strings() {
        let eq = sym(&[1, 2]);
        let js = serde_json::to_string(&eq).unwrap();
        assert_eq!(js, r#"{"coeffs":["2","-2","1","-1"],"symmetric_gen":["1","2"]}"#);
        let back: Equation = serde_json::from_str(&js).unwrap();
        assert_eq!(back, eq);
        let plain: Equation =
            serde_json::from_str(r#"{"coeffs":["2","2","-3","-1"],"symmetric_gen":null}"#).unwrap();
        assert_eq!(plain.coeffs(), &[-3, 2, 2, -1]);
        assert!(serde_json::from_str::<Equation>(r#"{"coeffs":["1","1"]}"#).is_err());
        assert!(serde_json::from_str::<Equation>(
            r#"{"coeffs":["1","-1"],"symmetric_gen":["2"]}"#
        )
        .is_err());
    }

    #[test]
    fn display_reads_naturally() {
        let eq = Equation::new(vec![2, 2, -3, -1]).unwrap();
        assert_eq!(eq.to_string(), "-3x1 + 2x2 + 2x3 - x4 = 0");
    }
}
