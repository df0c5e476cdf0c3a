use serde::Serialize;

use crate::certificate::{Certificate, DigitSet, Rate};
use crate::equation::is_primitive;
use crate::error::{Error, Result};

/// Integers `x` in `[1, N]` whose shifted value `x - 1` has every base-`L`
/// digit in the digit set.
///
/// The shift by one keeps the count law exact: with `0` in the digit set,
/// `[1, L^d]` holds exactly `|A|^d` members. Materialisation is lazy; the
/// membership predicate and the count never enumerate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftedSet {
    n: u64,
    base: u64,
    digits: Vec<u64>,
}

/// `y` is admissible when all of its base-`base` digits are in `digits`.
fn admissible(mut y: u64, base: u64, digits: &[u64]) -> bool {
    loop {
        if digits.binary_search(&(y % base)).is_err() {
            return false;
        }
        y /= base;
        if y == 0 {
            return true;
        }
    }
}

/// The `t`-th admissible integer (0-based, increasing order).
pub(crate) fn nth_admissible(mut t: u64, base: u64, digits: &[u64]) -> Option<u64> {
    let k = digits.len() as u64;
    let mut y: u128 = 0;
    let mut place: u128 = 1;
    loop {
        y += digits[(t % k) as usize] as u128 * place;
        t /= k;
        if t == 0 {
            break;
        }
        place = place.checked_mul(base as u128)?;
    }
    u64::try_from(y).ok()
}

impl LiftedSet {
    /// Lower-level constructor; no certification is implied. `0` must be a
    /// digit.
    pub fn from_digits(base: u64, digits: &[i64], n: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidSet("base must be at least 2".into()));
        }
        let mut d: Vec<u64> = Vec::with_capacity(digits.len());
        for &x in digits {
            if x < 0 || x as u64 >= base {
                return Err(Error::InvalidSet(format!("digit {x} outside [0, {base})")));
            }
            d.push(x as u64);
        }
        d.sort_unstable();
        d.dedup();
        if d.first() != Some(&0) {
            return Err(Error::precondition("digit set must contain 0"));
        }
        Ok(LiftedSet { n, base, digits: d })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= 1 && x as u64 <= self.n && admissible(x as u64 - 1, self.base, &self.digits)
    }

    /// Number of members, by a digit recursion over `N`.
    pub fn count(&self) -> u64 {
        // admissible y in [0, n)
        let mut place: Vec<u64> = Vec::new();
        let mut v = self.n;
        while v > 0 {
            place.push(v % self.base);
            v /= self.base;
        }
        let k = self.digits.len() as u128;
        let mut total: u128 = 0;
        for i in (0..place.len()).rev() {
            let d = place[i];
            let below = self.digits.partition_point(|&a| a < d) as u128;
            total += below * k.pow(i as u32);
            if self.digits.binary_search(&d).is_err() {
                return total as u64;
            }
        }
        total as u64
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        (0u64..)
            .map(move |t| nth_admissible(t, self.base, &self.digits))
            .take_while(move |y| matches!(y, Some(y) if *y < self.n))
            .map(|y| y.unwrap() as i64 + 1)
    }

    pub fn to_vec(&self) -> Vec<i64> {
        self.iter().collect()
    }
}

/// Lifts a certified digit set to `[1, N]`.
///
/// Requires a verified certificate, a primitive equation and `0` among the
/// digits.
pub fn lift(cert: &Certificate, n: u64) -> Result<LiftedSet> {
    if !cert.verified() {
        return Err(Error::Uncertified("certificate is not verified".into()));
    }
    if !is_primitive(cert.equation())? {
        return Err(Error::NotPrimitive);
    }
    if n == 0 {
        return Err(Error::precondition("N must be positive"));
    }
    LiftedSet::from_digits(cert.base(), cert.digits(), n)
}

/// `log |A| / log L`; a single digit gives a degenerate zero rate.
pub fn lift_rate(ds: &DigitSet) -> Rate {
    ds.rate()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_four_example() {
        let s = LiftedSet::from_digits(4, &[0, 1], 16).unwrap();
        assert_eq!(s.to_vec(), vec![1, 2, 5, 6]);
        assert_eq!(s.count(), 4);
        assert!(s.contains(6) && !s.contains(4) && !s.contains(17));
    }

    #[test]
    fn count_matches_iteration() {
        for (base, digits) in [(4u64, vec![0i64, 1]), (10, vec![0, 3, 7]), (7, vec![0, 1, 2, 3])] {
            for n in 1..=600u64 {
                let s = LiftedSet::from_digits(base, &digits, n).unwrap();
                let v = s.to_vec();
                assert_eq!(v.len() as u64, s.count(), "base {base} n {n}");
                let brute: Vec<i64> = (1..=n as i64).filter(|&x| s.contains(x)).collect();
                assert_eq!(v, brute);
            }
        }
    }

    #[test]
    fn needs_zero_digit() {
        assert!(LiftedSet::from_digits(4, &[1, 2], 10).is_err());
    }

    #[test]
    fn nth_is_increasing() {
        let d = [0u64, 2, 5];
        let v: Vec<u64> = (0..200).map(|t| nth_admissible(t, 9, &d).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
