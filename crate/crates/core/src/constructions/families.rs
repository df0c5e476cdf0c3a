use num_integer::Integer;

use super::behrend::behrend_set;
use super::certify_closed_form;
use crate::certificate::{Certificate, DigitSet, Recipe};
use crate::equation::{make_symmetric, Equation};
use crate::error::{Error, Result};
use crate::oracle::{Mode, DEFAULT_BUDGET};

fn range_digits(n: u64) -> Vec<i64> {
    (0..n as i64).collect()
}

fn checked_base(side: u64, max_digit: u64) -> Result<u64> {
    side.checked_mul(max_digit)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::Overflow("base".into()))
}

/// Digits `{0..b-1}` for `ax + by = ax' + by'` in base `(a+b)(b-1)+1`.
pub fn two_var_digits(a: i64, b: i64) -> Result<Certificate> {
    if a <= 0 || a >= b {
        return Err(Error::precondition(format!("need 0 < a < b, got a={a}, b={b}")));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::precondition(format!("gcd({a}, {b}) != 1")));
    }
    let eq = make_symmetric(&[a, b])?;
    let base = checked_base((a + b) as u64, (b - 1) as u64)?;
    let ds = DigitSet::new(eq, base, range_digits(b as u64))?;
    Ok(certify_closed_form(ds)?.with_recipe(Recipe::TwoVar { a, b }))
}

/// Digits `{0..m-1}` in base `m^k` for generators `1, m, ..., m^(k-1)`.
pub fn geometric_digits(m: u64, k: u32) -> Result<Certificate> {
    if m < 2 || k < 2 {
        return Err(Error::precondition("need m >= 2 and k >= 2"));
    }
    let base = m
        .checked_pow(k)
        .filter(|&v| v <= i64::MAX as u64)
        .ok_or_else(|| Error::Overflow(format!("{m}^{k}")))?;
    let gens: Vec<i64> = (0..k).map(|i| m.pow(i) as i64).collect();
    let ds = DigitSet::new(make_symmetric(&gens)?, base, range_digits(m))?;
    Ok(certify_closed_form(ds)?.with_recipe(Recipe::Geometric { m, k }))
}

/// Digits `{0..b-1}` for generators `a, b, b^2, ..., b^(k-1)`.
pub fn coprime_power_digits(a: i64, b: i64, k: u32) -> Result<Certificate> {
    if a < 1 || b < 2 || k < 2 {
        return Err(Error::precondition("need a >= 1, b >= 2, k >= 2"));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::precondition(format!("gcd({a}, {b}) != 1")));
    }
    let top = b
        .checked_pow(k - 1)
        .ok_or_else(|| Error::Overflow(format!("{b}^{}", k - 1)))?;
    if a > top {
        return Err(Error::precondition(format!("a={a} exceeds b^(k-1)={top}")));
    }
    let mut gens = vec![a];
    gens.extend((1..k).map(|i| b.pow(i)));
    let eq = make_symmetric(&gens)?;
    let base = checked_base(eq.side_sum(), (b - 1) as u64)?;
    let ds = DigitSet::new(eq, base, range_digits(b as u64))?;
    Ok(certify_closed_form(ds)?.with_recipe(Recipe::CoprimePower { a, b, k }))
}

/// Digits `{0..s-1}` for generators with `s * a_i <= a_(i+1)`.
pub fn spaced_digits(a: &[i64], s: u64) -> Result<Certificate> {
    if a.is_empty() || s < 2 {
        return Err(Error::precondition("need a nonempty generator list and s >= 2"));
    }
    if let Some(&bad) = a.iter().find(|&&v| v < 1) {
        return Err(Error::NonPositiveGenerator(bad));
    }
    for w in a.windows(2) {
        if (s as i128) * (w[0] as i128) > w[1] as i128 {
            return Err(Error::precondition(format!(
                "spacing violated: {s} * {} > {}",
                w[0], w[1]
            )));
        }
    }
    let eq = make_symmetric(a)?;
    let base = checked_base(eq.side_sum(), s - 1)?;
    let ds = DigitSet::new(eq, base, range_digits(s))?;
    Ok(certify_closed_form(ds)?.with_recipe(Recipe::Spaced { a: a.to_vec(), s }))
}

/// Digits `{0..m-2}` for generators `(m, 2m-2, 3m-3)`, certified for
/// solutions with pairwise distinct values.
pub fn distinct_var_digits(m: u64) -> Result<Certificate> {
    if m < 3 {
        return Err(Error::precondition(format!("need m >= 3, got {m}")));
    }
    let mi = i64::try_from(m).map_err(|_| Error::Overflow("m".into()))?;
    let eq = make_symmetric(&[mi, 2 * mi - 2, 3 * mi - 3])?;
    let ds = DigitSet::with_minimal_base(eq, range_digits(m - 1))?;
    Ok(Certificate::certify(ds, Mode::Distinct, DEFAULT_BUDGET)?.with_recipe(Recipe::DistinctVar { m }))
}

/// `x1 + x2 + d x3 + d x4 = 2 y1 + 2d y2`.
pub fn section5_equation(d: i64) -> Result<Equation> {
    if d < 1 {
        return Err(Error::precondition(format!("need d >= 1, got {d}")));
    }
    Equation::new(vec![1, 1, d, d, -2, -2 * d])
}

/// 3AP-free digits from [`behrend_set`] for the two-block equation above.
///
/// For `d <= 2` the digit bound is zero and the singleton `{0}` is returned
/// (rate 0, degenerate).
pub fn section5_digits(d: i64) -> Result<Certificate> {
    let eq = section5_equation(d)?;
    let m = ((d - 1) / 2) as u64;
    let digits = if m == 0 { vec![0] } else { behrend_set(m) };
    let max = *digits.last().unwrap() as u64;
    let paper_base = (4 * m + 3) * m + 1;
    let base = paper_base.max(checked_base(eq.side_sum(), max)?).max(2);
    let ds = DigitSet::new(eq, base, digits)?;
    Ok(Certificate::certify(ds, Mode::All, DEFAULT_BUDGET)?.with_recipe(Recipe::Behrend { d: d as u64, m }))
}
