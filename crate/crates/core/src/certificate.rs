//! Digit sets, rates and certificates.

use serde::{Deserialize, Serialize};

use crate::equation::Equation;
use crate::error::{Error, Result};
use crate::oracle::{self, distinct_lift_pin, Mode, SolutionQuery};

/// Candidate digit set `A ⊆ [0, L)` for base-`L` lifting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitSet {
    equation: Equation,
    base: u64,
    digits: Vec<i64>,
}

impl DigitSet {
    /// Digits must be strictly increasing and lie in `[0, base)`.
    pub fn new(equation: Equation, base: u64, digits: Vec<i64>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidSet(format!("base {base} is below 2")));
        }
        if digits.is_empty() {
            return Err(Error::InvalidSet("digit set is empty".into()));
        }
        if digits.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSet("digits must be strictly increasing".into()));
        }
        if digits[0] < 0 || *digits.last().unwrap() as u64 >= base {
            return Err(Error::InvalidSet(format!("digits must lie in [0, {base})")));
        }
        Ok(DigitSet {
            equation,
            base,
            digits,
        })
    }

    /// Smallest base for which `digits` satisfies the no-carry inequality.
    pub fn with_minimal_base(equation: Equation, digits: Vec<i64>) -> Result<Self> {
        let max = digits.iter().copied().max().unwrap_or(0).max(0) as u64;
        let base = equation
            .side_sum()
            .checked_mul(max)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::Overflow("s * max digit".into()))?
            .max(2);
        DigitSet::new(equation, base, digits)
    }

    pub fn equation(&self) -> &Equation {
        &self.equation
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn max_digit(&self) -> u64 {
        *self.digits.last().unwrap() as u64
    }

    /// `s * max(A) < L`, with `s` the positive side sum.
    pub fn no_carry_holds(&self) -> bool {
        (self.equation.side_sum() as u128) * (self.max_digit() as u128) < self.base as u128
    }

    pub fn rate(&self) -> Rate {
        Rate::new(self.digits.len() as u64, self.base)
    }

    fn carry_error(&self) -> Error {
        Error::Carry {
            s: self.equation.side_sum(),
            max_digit: self.max_digit(),
            base: self.base,
        }
    }
}

/// Exponent `log(num_log) / log(den_log)`, kept exactly as the two integers.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "RawRate", into = "RawRate")]
pub struct Rate {
    pub num_log: u64,
    pub den_log: u64,
}

#[derive(Serialize, Deserialize)]
struct RawRate {
    num_log: u64,
    den_log: u64,
    #[serde(default)]
    decimal: f64,
}

impl From<RawRate> for Rate {
    fn from(r: RawRate) -> Self {
        Rate::new(r.num_log, r.den_log)
    }
}

impl From<Rate> for RawRate {
    fn from(r: Rate) -> Self {
        RawRate {
            num_log: r.num_log,
            den_log: r.den_log,
            decimal: r.decimal(),
        }
    }
}

impl Rate {
    pub fn new(num_log: u64, den_log: u64) -> Self {
        Rate { num_log, den_log }
    }

    pub fn decimal(&self) -> f64 {
        if self.num_log <= 1 || self.den_log <= 1 {
            return 0.0;
        }
        (self.num_log as f64).ln() / (self.den_log as f64).ln()
    }

    /// A single digit lifts to a single element: exponent 0.
    pub fn is_degenerate(&self) -> bool {
        self.num_log <= 1
    }
}

impl std::fmt::Display for Rate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "log {} / log {} = {:.6}", self.num_log, self.den_log, self.decimal())
    }
}

/// How a digit set came to be.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Recipe {
    Geometric { m: u64, k: u32 },
    TwoVar { a: i64, b: i64 },
    CoprimePower { a: i64, b: i64, k: u32 },
    Spaced { a: Vec<i64>, s: u64 },
    ThreeVar {
        a: i64,
        b: i64,
        c: i64,
        alpha: f64,
        case: String,
        dependency: Option<[i64; 3]>,
        window: u64,
    },
    Behrend { d: u64, m: u64 },
    DistinctVar { m: u64 },
    Shift { i: Vec<i64>, j: Vec<i64>, source_base: u64 },
    Window { source_base: u64, offset: i64, width: u64 },
    Search { grid_base: u64, exhausted: bool, nodes: u64 },
    Manual,
}

/// How the solution-freeness of the digits was established.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Exhaustive oracle pass.
    #[default]
    Exhaustive,
    /// Closed-form argument; too large to enumerate.
    Analytic,
}

/// A digit set together with the evidence that it is solution-free.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCertificate", into = "RawCertificate")]
pub struct Certificate {
    digit_set: DigitSet,
    verified: bool,
    oracle_nodes: u64,
    mode: Mode,
    method: Method,
    pin: Option<(usize, usize)>,
    recipe: Option<Recipe>,
}

pub const CERTIFICATE_SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize)]
struct RawCertificate {
    schema: u32,
    equation: Equation,
    base: u64,
    digits: Vec<i64>,
    rate: Rate,
    verified: bool,
    oracle_nodes: u64,
    mode: Mode,
    #[serde(default)]
    method: Method,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pin: Option<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    recipe: Option<Recipe>,
}

impl TryFrom<RawCertificate> for Certificate {
    type Error = Error;

    fn try_from(r: RawCertificate) -> Result<Self> {
        if r.schema != CERTIFICATE_SCHEMA {
            return Err(Error::Parse(format!("unsupported schema {}", r.schema)));
        }
        let ds = DigitSet::new(r.equation, r.base, r.digits)?;
        if ds.rate() != r.rate {
            return Err(Error::Parse("rate does not match digits and base".into()));
        }
        Ok(Certificate {
            digit_set: ds,
            verified: r.verified,
            oracle_nodes: r.oracle_nodes,
            mode: r.mode,
            method: r.method,
            pin: r.pin,
            recipe: r.recipe,
        })
    }
}

impl From<Certificate> for RawCertificate {
    fn from(c: Certificate) -> Self {
        let rate = c.digit_set.rate();
        RawCertificate {
            schema: CERTIFICATE_SCHEMA,
            equation: c.digit_set.equation,
            base: c.digit_set.base,
            digits: c.digit_set.digits,
            rate,
            verified: c.verified,
            oracle_nodes: c.oracle_nodes,
            mode: c.mode,
            method: c.method,
            pin: c.pin,
            recipe: c.recipe,
        }
    }
}

impl Certificate {
    /// Runs the oracle over the digits; any witness or a carry is an error.
    pub fn certify(ds: DigitSet, mode: Mode, budget: u64) -> Result<Self> {
        if !ds.no_carry_holds() {
            return Err(ds.carry_error());
        }
        let q = SolutionQuery::new(ds.equation.clone(), ds.digits.clone())?
            .with_mode(mode)
            .with_budget(budget);
        let out = oracle::find_with_stats(&q)?;
        if let Some(w) = out.witness {
            return Err(Error::Uncertified(format!("solution {:?}", w.assignment)));
        }
        let pin = match mode {
            Mode::All => None,
            Mode::Distinct => Some(distinct_lift_pin(&ds.equation, &ds.digits, budget)?.ok_or_else(
                || Error::Uncertified("no position pair is forced equal; distinct lift unsound".into()),
            )?),
        };
        Ok(Certificate {
            digit_set: ds,
            verified: true,
            oracle_nodes: out.nodes,
            mode,
            method: Method::Exhaustive,
            pin,
            recipe: None,
        })
    }

    /// Certificate backed by a closed-form argument instead of enumeration.
    pub(crate) fn analytic(ds: DigitSet) -> Result<Self> {
        if !ds.no_carry_holds() {
            return Err(ds.carry_error());
        }
        Ok(Certificate {
            digit_set: ds,
            verified: true,
            oracle_nodes: 0,
            mode: Mode::All,
            method: Method::Analytic,
            pin: None,
            recipe: None,
        })
    }

    pub fn with_recipe(mut self, recipe: Recipe) -> Self {
        self.recipe = Some(recipe);
        self
    }

    pub fn digit_set(&self) -> &DigitSet {
        &self.digit_set
    }

    pub fn equation(&self) -> &Equation {
        &self.digit_set.equation
    }

    pub fn base(&self) -> u64 {
        self.digit_set.base
    }

    pub fn digits(&self) -> &[i64] {
        &self.digit_set.digits
    }

    pub fn rate(&self) -> Rate {
        self.digit_set.rate()
    }

    pub fn verified(&self) -> bool {
        self.verified
    }

    pub fn oracle_nodes(&self) -> u64 {
        self.oracle_nodes
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn pin(&self) -> Option<(usize, usize)> {
        self.pin
    }

    pub fn recipe(&self) -> Option<&Recipe> {
        self.recipe.as_ref()
    }

    pub fn is_degenerate(&self) -> bool {
        self.rate().is_degenerate()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}
