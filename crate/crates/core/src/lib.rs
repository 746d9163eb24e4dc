//! Exact enumeration and counting of k-vacillating parking functions.
//!
//! Under the k-vacillating rule, car `i` with preference `a_i` parks in
//! `a_i` if free, otherwise in `a_i - k` if that spot exists and is free,
//! otherwise in `a_i + k` if that spot exists and is free, and otherwise
//! fails. The crate counts such lists in several independent ways:
//!
//! - [`enumerate`]: exhaustive, pruned, parallel scans of `[n]^n`;
//! - [`recurrence`]: the subset recurrences, the monotone recurrences and
//!   the residue-class product formula;
//! - [`closed_form`]: exact `Z[√2]` powers, √2 convergents, a generating
//!   function and a floating-point closed form;
//!
//! and [`validation`] checks all of them against each other.

pub mod cache;
pub mod closed_form;
pub mod enumerate;
pub mod error;
pub mod recurrence;
pub mod rule;
pub mod validation;

pub use enumerate::{EnumFilter, Enumerator, InvariantScan, Limits, SubsetTally};
pub use error::{Error, Result};
pub use recurrence::{CountFamily, CountTable};
pub use rule::{
    is_parking_function, outcome_statistics, simulate, LastSpot, Outcome, PreferenceList, RuleKind,
};
pub use validation::{verify_suite, SuiteParams, VerificationReport};
