//! Verification suites producing [`CheckRecord`]s.

mod algebra;
mod module;
mod virasoro;

pub use algebra::{
    definition_self_test, jacobi_suite, kernel_suite, rho_suite, structure_suite, threepoint_jacobi,
    witt_jacobi,
};
pub use module::{module_suite, restrictedness_suite, ModuleSuiteConfig};
pub use virasoro::{virasoro_suite, VirasoroSuiteConfig};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::CheckRecord;
use crate::Result;

/// How many failing cases are listed in a record's notes.
const LISTED_FAILURES: usize = 5;

/// Inclusive integer range, written `lo..hi` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(crate::Error::InvalidArgument(format!("empty range {lo}..{hi}")));
        }
        Ok(IntRange { lo, hi })
    }

    pub fn symmetric(r: i64) -> Self {
        IntRange { lo: -r, hi: r }
    }

    pub fn iter(self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn pairs(self) -> Vec<(i64, i64)> {
        self.iter().flat_map(|m| self.iter().map(move |n| (m, n))).collect()
    }

    pub fn to_json(self) -> Value {
        json!([self.lo, self.hi])
    }
}

impl std::fmt::Display for IntRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl std::str::FromStr for IntRange {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || crate::Error::InvalidArgument(format!("expected lo..hi, got {s:?}"));
        let (a, b) = s.split_once("..").ok_or_else(bad)?;
        let lo = a.trim().parse().map_err(|_| bad())?;
        let hi = b.trim().parse().map_err(|_| bad())?;
        IntRange::new(lo, hi)
    }
}

/// Evaluate `eval` on every case in parallel. `Ok(None)` means the case holds,
/// `Ok(Some(defect))` is a failure, and errors count as failures too.
/// The record lists failures in case order.
pub(crate) fn grid<T, L, F>(name: &str, parameters: Value, cases: &[T], label: L, eval: F) -> CheckRecord
where
    T: Sync,
    L: Fn(&T) -> String + Sync,
    F: Fn(&T) -> Result<Option<Value>> + Sync,
{
    let outcomes: Vec<Option<Value>> = cases
        .par_iter()
        .map(|c| eval(c).unwrap_or_else(|e| Some(error_value(&e))))
        .collect();
    record(name, parameters, cases, &label, outcomes)
}

/// Like [`grid`] for several checks sharing the work of each case; `eval`
/// returns one outcome per entry of `checks`.
pub(crate) fn grid_multi<T, L, F>(checks: Vec<(&str, Value, L)>, cases: &[T], eval: F) -> Vec<CheckRecord>
where
    T: Sync,
    L: Fn(&T) -> String,
    F: Fn(&T) -> Result<Vec<Option<Value>>> + Sync,
{
    let k = checks.len();
    let outcomes: Vec<Vec<Option<Value>>> = cases
        .par_iter()
        .map(|c| eval(c).unwrap_or_else(|e| vec![Some(error_value(&e)); k]))
        .collect();
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, params, label))| {
            let col = outcomes.iter().map(|o| o[i].clone()).collect();
            record(name, params, cases, &label, col)
        })
        .collect()
}

fn error_value(e: &crate::Error) -> Value {
    json!({ "error": e.to_string() })
}

fn record<T, L: Fn(&T) -> String>(
    name: &str,
    mut parameters: Value,
    cases: &[T],
    label: &L,
    outcomes: Vec<Option<Value>>,
) -> CheckRecord {
    if let Value::Object(map) = &mut parameters {
        map.insert("cases".into(), json!(cases.len()));
    }
    let failures: Vec<(usize, Value)> = outcomes
        .into_iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|d| (i, d)))
        .collect();
    if failures.is_empty() {
        return CheckRecord::pass(name, parameters);
    }
    let (first, defect) = &failures[0];
    let mut rec = CheckRecord::fail(
        name,
        parameters,
        json!({ "case": label(&cases[*first]), "value": defect }),
    )
    .with_note(format!("{} of {} cases fail", failures.len(), cases.len()));
    for (i, _) in failures.iter().skip(1).take(LISTED_FAILURES) {
        rec = rec.with_note(format!("also fails at {}", label(&cases[*i])));
    }
    rec
}
