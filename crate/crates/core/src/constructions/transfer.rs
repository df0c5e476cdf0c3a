use crate::certificate::{Certificate, DigitSet, Recipe};
use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::oracle::{Mode, DEFAULT_BUDGET};

/// Result of moving a symmetric certificate to shifted coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftTransfer {
    pub certificate: Certificate,
    /// `log |A| / (log L + log s)` with `s = sum(i) + sum(j)`.
    pub approx_rate: f64,
}

/// Replaces generator `a_t` by `i_t L + a_t` on the left and `j_t L + a_t`
/// on the right. Any solution of the new equation is a solution of the old
/// one modulo `L`, so the digits stay solution-free; they are re-verified
/// anyway. The new base is the smallest multiple of `L` above
/// `s' * max(A)`.
pub fn shift_transfer(cert: &Certificate, i: &[i64], j: &[i64]) -> Result<ShiftTransfer> {
    let gens = cert
        .equation()
        .symmetric_gen()
        .ok_or_else(|| Error::precondition("certificate equation is not symmetric"))?;
    if !cert.verified() {
        return Err(Error::Uncertified("source certificate is not verified".into()));
    }
    if i.len() != gens.len() || j.len() != gens.len() {
        return Err(Error::ArityMismatch {
            expected: gens.len(),
            got: i.len().min(j.len()),
        });
    }
    let l = cert.base() as i64;
    let shifted = |t: &[i64]| -> Result<Vec<i64>> {
        t.iter()
            .zip(gens)
            .map(|(&s, &a)| {
                let c = s
                    .checked_mul(l)
                    .and_then(|v| v.checked_add(a))
                    .ok_or_else(|| Error::Overflow("shifted coefficient".into()))?;
                if c <= 0 {
                    return Err(Error::NonPositiveGenerator(c));
                }
                Ok(c)
            })
            .collect()
    };
    let left = shifted(i)?;
    let right = shifted(j)?;
    if i.iter().sum::<i64>() != j.iter().sum::<i64>() {
        return Err(Error::precondition("sum(i) != sum(j): shifted equation is not invariant"));
    }
    let mut coeffs = left.clone();
    coeffs.extend(right.iter().map(|c| -c));
    let eq = Equation::new(coeffs)?;
    let need = (eq.side_sum() as u128) * (cert.digit_set().max_digit() as u128);
    let lu = l as u128;
    let m = (need / lu + 1) * lu;
    let base = u64::try_from(m).map_err(|_| Error::Overflow("shifted base".into()))?;
    let ds = DigitSet::new(eq, base, cert.digits().to_vec())?;
    let out = Certificate::certify(ds, Mode::All, DEFAULT_BUDGET)?.with_recipe(Recipe::Shift {
        i: i.to_vec(),
        j: j.to_vec(),
        source_base: cert.base(),
    });
    let s: i64 = i.iter().sum::<i64>() + j.iter().sum::<i64>();
    let n = cert.digits().len() as f64;
    let approx_rate = if s <= 0 {
        n.ln() / (l as f64).ln()
    } else {
        n.ln() / ((l as f64).ln() + (s as f64).ln())
    };
    Ok(ShiftTransfer {
        certificate: out,
        approx_rate,
    })
}

/// Turns a solution-free set into a liftable digit set: the translate window
/// of width `floor(L / s)` holding the most elements (leftmost on ties) is
/// shifted to start at 0 and certified in base `L`.
pub fn window_extract(set: &[i64], l: u64, eq: &Equation) -> Result<Certificate> {
    let s = eq.side_sum();
    if l < 2 * s {
        return Err(Error::precondition(format!("need L >= 2s = {}", 2 * s)));
    }
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.is_empty() {
        return Err(Error::InvalidSet("empty set".into()));
    }
    let width = (l / s) as i64;
    let (mut best, mut best_start) = (0usize, 0usize);
    let mut hi = 0usize;
    for lo in 0..v.len() {
        hi = hi.max(lo);
        while hi < v.len() && v[hi] - v[lo] < width {
            hi += 1;
        }
        if hi - lo > best {
            best = hi - lo;
            best_start = lo;
        }
    }
    let offset = v[best_start];
    let digits: Vec<i64> = v[best_start..best_start + best].iter().map(|x| x - offset).collect();
    let ds = DigitSet::new(eq.clone(), l, digits)?;
    Ok(Certificate::certify(ds, Mode::All, DEFAULT_BUDGET)?.with_recipe(Recipe::Window {
        source_base: l,
        offset,
        width: width as u64,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::two_var_digits;
    use crate::equation::make_symmetric;

    #[test]
    fn identity_and_basic_shift() {
        let c = two_var_digits(1, 2).unwrap();
        let t = shift_transfer(&c, &[0, 0], &[0, 0]).unwrap();
        assert_eq!(t.certificate.base(), c.base());
        let t = shift_transfer(&c, &[1, 0], &[0, 1]).unwrap();
        assert_eq!(t.certificate.equation().coeffs(), &[-6, 5, 2, -1]);
        assert_eq!(t.certificate.base(), 8);
        assert!(t.certificate.verified());
        assert!(shift_transfer(&c, &[-1, 0], &[0, -1]).is_err());
        assert!(shift_transfer(&c, &[1, 0], &[0, 0]).is_err());
    }

    #[test]
    fn window_examples() {
        let eq = make_symmetric(&[1, 1]).unwrap();
        let c = window_extract(&[1, 2, 5, 11], 24, &eq).unwrap();
        assert_eq!(c.digits(), &[0, 1, 4, 10]);
        let c = window_extract(&[0, 1], 8, &eq).unwrap();
        assert_eq!(c.digits(), &[0, 1]);
        assert!(window_extract(&[1, 2, 3], 24, &eq).is_err());
    }
}
