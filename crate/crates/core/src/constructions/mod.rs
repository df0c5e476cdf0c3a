//! Explicit constructions of solution-free digit sets and the base-`L` lift.

mod behrend;
mod families;
mod lift;
mod three_var;
mod transfer;

pub use behrend::{behrend_dimension, behrend_set, is_3ap_free};
pub use families::{
    coprime_power_digits, distinct_var_digits, geometric_digits, section5_digits, section5_equation,
    spaced_digits, two_var_digits,
};
pub use lift::{lift, lift_rate, LiftedSet};
pub use three_var::{
    avoid_one_dependency_digits, dependency_gap_check, dependency_gap_report, theorem_three_pipeline, GapReport,
    ThreeVarCase, ThreeVarConfig, ThreeVarOutcome, ThreeVarPlan, ThreeVarResult,
};
pub use transfer::{shift_transfer, window_extract, ShiftTransfer};

use crate::certificate::{Certificate, DigitSet};
use crate::error::Result;
use crate::oracle::{Mode, DEFAULT_BUDGET};

/// Rough oracle work for `n` digits and `m` variables (meet-in-the-middle).
fn oracle_cost(m: usize, n: usize) -> u128 {
    let n = n as u128;
    let half = |e: usize| n.checked_pow(e as u32).unwrap_or(u128::MAX);
    half(m.div_ceil(2)).saturating_add(half(m / 2))
}

/// Families with a closed-form proof: enumerate when affordable, otherwise
/// rely on the argument.
fn certify_closed_form(ds: DigitSet) -> Result<Certificate> {
    if oracle_cost(ds.equation().m(), ds.len()) <= DEFAULT_BUDGET as u128 / 4 {
        Certificate::certify(ds, Mode::All, DEFAULT_BUDGET)
    } else {
        Certificate::analytic(ds)
    }
}
