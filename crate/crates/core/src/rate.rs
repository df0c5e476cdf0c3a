//! Rates, the exponent optimisation for three coefficients, the thresholds
//! of the random-coefficient theorem and its empirical sweep.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Recipe};
use crate::error::{Error, Result};
use crate::oracle::is_injective_map;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaParams {
    pub q: f64,
    pub beta: f64,
    pub alpha: f64,
    /// `alpha / (beta + alpha)`.
    pub rate: f64,
    /// `|alpha(1 + beta - alpha) - q(1 - alpha)(beta + alpha)|`.
    pub residual: f64,
}

impl AlphaParams {
    /// `1 / rate`, the form in which the exponent is usually quoted.
    pub fn inverse_rate(&self) -> f64 {
        1.0 / self.rate
    }
}

/// Root in `(0, 1)` of `alpha(1 + beta - alpha) = q(1 - alpha)(beta + alpha)`.
pub fn alpha_optimal(beta: f64, q: f64) -> Result<AlphaParams> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::precondition(format!("beta {beta} must be >= 0")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::precondition(format!("q {q} outside (0, 1)")));
    }
    let disc = 4.0 * (q - 1.0) * q * beta + (1.0 + q * (beta - 1.0) + beta).powi(2);
    if disc < 0.0 {
        return Err(Error::precondition("negative discriminant"));
    }
    let alpha = (-1.0 + q - beta - q * beta + disc.sqrt()) / (2.0 * (q - 1.0));
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::precondition(format!("root {alpha} not in (0, 1)")));
    }
    let residual = (alpha * (1.0 + beta - alpha) - q * (1.0 - alpha) * (beta + alpha)).abs();
    Ok(AlphaParams {
        q,
        beta,
        alpha,
        rate: alpha / (beta + alpha),
        residual,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CEpsilon {
    pub k: u32,
    pub epsilon: f64,
    /// Epsilon after clamping to `1/k`.
    pub epsilon_used: f64,
    pub clamped: bool,
    /// `(2^k / eps)^(1/(eps k))`.
    pub lemma: f64,
    /// `(k 2^k / eps)^(1/(eps k))`.
    pub theorem: f64,
}

pub fn c_epsilon(k: u32, epsilon: f64) -> Result<CEpsilon> {
    if k < 2 {
        return Err(Error::precondition("k must be at least 2"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::precondition(format!("epsilon {epsilon} must be positive")));
    }
    let cap = 1.0 / k as f64;
    let eps = epsilon.min(cap);
    let two_k = 2f64.powi(k as i32);
    let e = 1.0 / (eps * k as f64);
    Ok(CEpsilon {
        k,
        epsilon,
        epsilon_used: eps,
        clamped: epsilon > cap,
        lemma: (two_k / eps).powf(e),
        theorem: (k as f64 * two_k / eps).powf(e),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    MonteCarlo { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub k: u32,
    pub c: u64,
    pub epsilon: f64,
    pub b: u64,
    pub sampling: Sampling,
    /// Tuples examined (all of `[1, C]^k`, or the sample count).
    pub total: u64,
    pub bad: u64,
    /// Bad count scaled to the full tuple space (equal to `bad` when
    /// exhaustive).
    pub bad_estimate: f64,
    /// `2^k C^(k - eps k)`.
    pub lemma_bound: f64,
    /// `bad_estimate <= lemma_bound`.
    pub bound_ok: bool,
    /// `bad_estimate <= eps C^k`.
    pub fraction_ok: bool,
    /// `C >= C_eps` (lemma form), where the lemma bound implies the fraction.
    pub above_threshold: bool,
}

/// `floor(C^(1/k - eps))`, nudged so exact powers are not lost to rounding.
fn tuple_range(k: u32, c: u64, eps: f64) -> u64 {
    let e = 1.0 / k as f64 - eps;
    if e <= 0.0 {
        return 1;
    }
    let mut b = ((c as f64).powf(e) + 1e-9).floor() as u64;
    while b > 1 && (b as f64).ln() > e * (c as f64).ln() + 1e-12 {
        b -= 1;
    }
    b.max(1)
}

fn tuple_at(mut idx: u64, k: u32, c: u64) -> Vec<i64> {
    let mut t = vec![0i64; k as usize];
    for slot in t.iter_mut().rev() {
        *slot = (idx % c) as i64 + 1;
        idx /= c;
    }
    t
}

/// Counts coefficient tuples in `[1, C]^k` for which
/// `(i_1..i_k) -> sum i_j a_j` is not injective on `[1, B]^k`.
pub fn random_tuple_sweep(k: u32, c: u64, epsilon: f64, sampling: Sampling, budget: u64) -> Result<SweepReport> {
    if k < 1 || c < 1 {
        return Err(Error::precondition("need k >= 1 and C >= 1"));
    }
    if !(epsilon > 0.0) {
        return Err(Error::precondition("epsilon must be positive"));
    }
    let b = tuple_range(k, c, epsilon);
    let space = (c as u128)
        .checked_pow(k)
        .ok_or_else(|| Error::Overflow("C^k".into()))?;
    let per_tuple = (2 * b as u128 - 1).pow(k);
    let bad_of = |t: &[i64]| -> Result<bool> { Ok(!is_injective_map(t, b, budget)?) };
    let (total, bad) = match sampling {
        Sampling::Exhaustive => {
            if space.saturating_mul(per_tuple) > budget as u128 {
                return Err(Error::BudgetExhausted { budget });
            }
            let total = space as u64;
            let bad = (0..c)
                .into_par_iter()
                .map(|lead| -> Result<u64> {
                    let inner = total / c;
                    let mut n = 0;
                    for r in 0..inner {
                        if bad_of(&tuple_at(lead * inner + r, k, c))? {
                            n += 1;
                        }
                    }
                    Ok(n)
                })
                .try_reduce(|| 0, |x, y| Ok(x + y))?;
            (total, bad)
        }
        Sampling::MonteCarlo { samples, seed } => {
            if samples == 0 {
                return Err(Error::precondition("need at least one sample"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut bad = 0;
            for _ in 0..samples {
                let t: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=c as i64)).collect();
                if bad_of(&t)? {
                    bad += 1;
                }
            }
            (samples, bad)
        }
    };
    let bad_estimate = bad as f64 * space as f64 / total as f64;
    let cf = c as f64;
    let kf = k as f64;
    let lemma_bound = 2f64.powi(k as i32) * cf.powf(kf - epsilon * kf);
    let above_threshold = k >= 2 && c_epsilon(k, epsilon).is_ok_and(|t| cf >= t.lemma);
    Ok(SweepReport {
        k,
        c,
        epsilon,
        b,
        sampling,
        total,
        bad,
        bad_estimate,
        lemma_bound,
        bound_ok: bad_estimate <= lemma_bound,
        fraction_ok: bad_estimate <= epsilon * cf.powf(kf),
        above_threshold,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binding {
    /// Achieved rate equals the guarantee.
    Tight,
    /// Achieved rate is strictly above the guarantee.
    Exceeds,
    /// Achieved rate is below the guarantee.
    Below,
    /// No closed-form guarantee for this recipe.
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub rate: f64,
    pub num_log: u64,
    pub den_log: u64,
    pub analytic_bound: Option<f64>,
    pub bound_source: String,
    pub binding: Binding,
}

/// Decimal rate of a certificate next to the closed-form guarantee of the
/// recipe that produced it.
pub fn rate_report(cert: &Certificate) -> Result<RateReport> {
    if !cert.verified() {
        return Err(Error::Uncertified("certificate is not verified".into()));
    }
    let r = cert.rate();
    let rate = r.decimal();
    let (bound, source): (Option<f64>, String) = match cert.recipe() {
        Some(Recipe::Geometric { k, .. }) => (Some(1.0 / *k as f64), "1/k".into()),
        Some(Recipe::TwoVar { b, .. }) => (Some(0.5 - 1.0 / (*b as f64).ln()), "1/2 - 1/log b".into()),
        Some(Recipe::CoprimePower { b, k, .. }) => (
            Some(1.0 / *k as f64 - 1.0 / (*b as f64).ln()),
            "1/k - 1/log b".into(),
        ),
        Some(Recipe::Spaced { a, s }) => {
            let sum: i64 = a.iter().sum();
            let sf = *s as f64;
            (Some(sf.ln() / (sf.ln() + (sum as f64).ln())), "log s / (log s + log sum a)".into())
        }
        Some(Recipe::DistinctVar { m }) => {
            let mf = *m as f64;
            let base = (6.0 * mf - 5.0) * (mf - 2.0) + 1.0;
            (Some((mf - 1.0).ln() / base.ln()), "log(m-1) / log((6m-5)(m-2)+1)".into())
        }
        _ => (None, "none".into()),
    };
    let binding = match bound {
        None => Binding::None,
        Some(b) if (rate - b).abs() <= 1e-12 => Binding::Tight,
        Some(b) if rate > b => Binding::Exceeds,
        Some(_) => Binding::Below,
    };
    Ok(RateReport {
        rate,
        num_log: r.num_log,
        den_log: r.den_log,
        analytic_bound: bound,
        bound_source: source,
        binding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{geometric_digits, spaced_digits, two_var_digits};

    #[test]
    fn alpha_constants() {
        for (beta, inv) in [(1.0, 4.74), (1.01, 4.77), (1.1, 5.03)] {
            let p = alpha_optimal(beta, 0.499).unwrap();
            assert!((p.inverse_rate() - inv).abs() < 0.005, "{beta}: {}", p.inverse_rate());
            assert!(p.residual <= 1e-12);
        }
        assert!(alpha_optimal(1.0, 1.0).is_err());
        assert!(alpha_optimal(-1.0, 0.5).is_err());
    }

    #[test]
    fn c_epsilon_examples() {
        let t = c_epsilon(2, 0.25).unwrap();
        assert!((t.theorem - 1024.0).abs() < 1e-6);
        assert!(t.lemma <= t.theorem);
        let t = c_epsilon(2, 1.0).unwrap();
        assert!(t.clamped && t.epsilon_used == 0.5);
        assert!(c_epsilon(2, 0.0).is_err());
    }

    #[test]
    fn sweep_small() {
        let r = random_tuple_sweep(2, 100, 0.3, Sampling::Exhaustive, u64::MAX).unwrap();
        assert_eq!(r.b, 2);
        assert!(r.bound_ok);
        let r = random_tuple_sweep(2, 10, 0.5, Sampling::Exhaustive, u64::MAX).unwrap();
        assert_eq!((r.b, r.bad), (1, 0));
        let s = Sampling::MonteCarlo { samples: 500, seed: 7 };
        assert_eq!(
            random_tuple_sweep(2, 100, 0.2, s, u64::MAX).unwrap(),
            random_tuple_sweep(2, 100, 0.2, s, u64::MAX).unwrap()
        );
    }

    #[test]
    fn tuple_range_exact_powers() {
        assert_eq!(tuple_range(2, 32, 0.3), 2);
        assert_eq!(tuple_range(1, 100, 0.5), 10);
    }

    #[test]
    fn reports() {
        let r = rate_report(&geometric_digits(2, 3).unwrap()).unwrap();
        assert_eq!(r.binding, Binding::Tight);
        let r = rate_report(&two_var_digits(5, 6).unwrap()).unwrap();
        assert!((r.rate - 0.4455).abs() < 1e-3);
        let r = rate_report(&spaced_digits(&[2, 17, 167], 8).unwrap()).unwrap();
        assert!(r.rate >= 1.0 / 3.52 && r.binding == Binding::Exceeds);
    }
}
