//! Solution-free sets for invariant linear equations.
//!
//! The crate builds finite digit sets that contain no non-trivial solution of
//! a given equation, certifies them by exhaustive enumeration, and lifts them
//! to arbitrarily large sets through base-`L` digit expansions.

pub mod certificate;
pub mod constructions;
mod decimal;
pub mod equation;
pub mod error;
pub mod oracle;
pub mod rate;
pub mod search;

pub use certificate::{Certificate, DigitSet, Method, Rate, Recipe};
pub use equation::{
    classify_solution, genus, is_dissociated, is_primitive, make_symmetric, Equation,
    SolutionClass, SolutionKind,
};
pub use error::{Error, Result};
pub use oracle::{
    count_nontrivial_solutions, find_nontrivial_solution, is_injective_map, verify_certificate,
    Mode, SolutionCount, SolutionQuery, Strategy, DEFAULT_BUDGET,
};
