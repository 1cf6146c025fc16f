//! Truncated Laurent series with exact coefficients.
//!
//! A series expanded at the zero puncture is a Laurent series in `t` whose
//! coefficients are authoritative for every exponent `<= valid_to`; one
//! expanded at infinity is authoritative for every exponent `>= valid_to`.
//! `valid_to = None` marks an exact (finite) expansion. Reading a coefficient
//! outside the window is an error.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::{lambda_over_4pow, lambda_times_4pow};
use crate::scalar::{accumulate, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Puncture {
    #[serde(rename = "at-zero")]
    Zero,
    #[serde(rename = "at-infinity")]
    Infinity,
}

impl Puncture {
    /// The tighter of two window bounds in this direction.
    fn tighter(self, a: i64, b: i64) -> i64 {
        match self {
            Puncture::Zero => a.min(b),
            Puncture::Infinity => a.max(b),
        }
    }

    fn contains(self, valid_to: Option<i64>, exponent: i64) -> bool {
        match (self, valid_to) {
            (_, None) => true,
            (Puncture::Zero, Some(v)) => exponent <= v,
            (Puncture::Infinity, Some(v)) => exponent >= v,
        }
    }
}

/// Combine two optional bounds, keeping the tighter one.
pub(crate) fn tighter_bound(dir: Puncture, a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(a), Some(b)) => Some(dir.tighter(a, b)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncSeries {
    direction: Puncture,
    #[serde(with = "terms_serde")]
    terms: BTreeMap<i64, Scalar>,
    valid_to: Option<i64>,
}

mod terms_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        terms: &BTreeMap<i64, Scalar>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(terms.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<i64, Scalar>, D::Error> {
        let pairs: Vec<(i64, Scalar)> = Vec::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in pairs {
            accumulate(&mut out, k, v);
        }
        Ok(out)
    }
}

impl TruncSeries {
    pub fn exact<I: IntoIterator<Item = (i64, Scalar)>>(direction: Puncture, terms: I) -> Self {
        Self::build(direction, terms, None)
    }

    /// Terms outside the window are discarded.
    pub fn truncated<I: IntoIterator<Item = (i64, Scalar)>>(
        direction: Puncture,
        terms: I,
        valid_to: i64,
    ) -> Self {
        Self::build(direction, terms, Some(valid_to))
    }

    pub fn build<I: IntoIterator<Item = (i64, Scalar)>>(
        direction: Puncture,
        terms: I,
        valid_to: Option<i64>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (k, v) in terms {
            if direction.contains(valid_to, k) {
                accumulate(&mut map, k, v);
            }
        }
        TruncSeries {
            direction,
            terms: map,
            valid_to,
        }
    }

    pub fn zero(direction: Puncture) -> Self {
        Self::exact(direction, [])
    }

    pub fn one(direction: Puncture) -> Self {
        Self::exact(direction, [(0, Scalar::one())])
    }

    pub fn monomial(direction: Puncture, exponent: i64, coeff: Scalar) -> Self {
        Self::exact(direction, [(exponent, coeff)])
    }

    pub fn direction(&self) -> Puncture {
        self.direction
    }

    pub fn valid_to(&self) -> Option<i64> {
        self.valid_to
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.terms
    }

    pub fn is_exact(&self) -> bool {
        self.valid_to.is_none()
    }

    /// No known nonzero coefficient (the series may still carry a window).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn covers(&self, exponent: i64) -> bool {
        self.direction.contains(self.valid_to, exponent)
    }

    pub fn coeff(&self, exponent: i64) -> Result<Scalar> {
        if !self.covers(exponent) {
            return Err(Error::OutsideWindow {
                exponent,
                valid_to: self.valid_to.unwrap_or_default(),
                direction: self.direction,
            });
        }
        Ok(self.terms.get(&exponent).cloned().unwrap_or_default())
    }

    /// Leading exponent in the expansion direction: the lowest exponent at the
    /// zero puncture, the highest at infinity. An empty windowed series leads
    /// just past its window; an exact zero has no leading exponent.
    pub fn leading_exponent(&self) -> Option<i64> {
        match self.direction {
            Puncture::Zero => self
                .terms
                .keys()
                .next()
                .copied()
                .or(self.valid_to.map(|v| v + 1)),
            Puncture::Infinity => self
                .terms
                .keys()
                .next_back()
                .copied()
                .or(self.valid_to.map(|v| v - 1)),
        }
    }

    fn check_direction(&self, other: &TruncSeries) -> Result<()> {
        if self.direction != other.direction {
            return Err(Error::DirectionMismatch(self.direction, other.direction));
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_direction(other)?;
        let valid_to = tighter_bound(self.direction, self.valid_to, other.valid_to);
        let terms = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|(k, v)| (*k, v.clone()));
        Ok(Self::build(self.direction, terms, valid_to))
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> TruncSeries {
        Self::build(
            self.direction,
            self.terms.iter().map(|(k, v)| (*k, v * c)),
            self.valid_to,
        )
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> TruncSeries {
        Self::build(
            self.direction,
            self.terms.iter().map(|(e, v)| (e + k, v.clone())),
            self.valid_to.map(|v| v + k),
        )
    }

    /// Exact product with the tightest window: the unknown tail of each factor
    /// starts one step past its window and is multiplied by the leading term of
    /// the other factor.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_direction(other)?;
        let dir = self.direction;
        let (Some(a_lead), Some(b_lead)) = (self.leading_exponent(), other.leading_exponent())
        else {
            // one factor is an exact zero
            return Ok(Self::zero(dir));
        };
        let valid_to = tighter_bound(
            dir,
            self.valid_to.map(|a| a + b_lead),
            other.valid_to.map(|b| b + a_lead),
        );
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if dir.contains(valid_to, e) {
                    accumulate(&mut terms, e, ca * cb);
                }
            }
        }
        Ok(TruncSeries {
            direction: dir,
            terms,
            valid_to,
        })
    }

    /// `t^k -> k t^{k-1}`; the window shrinks by one step.
    pub fn derivative(&self) -> TruncSeries {
        Self::build(
            self.direction,
            self.terms
                .iter()
                .map(|(k, v)| (k - 1, v * Scalar::from_int(*k))),
            self.valid_to.map(|v| v - 1),
        )
    }

    /// Coefficient of `t^{-1}`.
    pub fn residue(&self) -> Result<Scalar> {
        if !self.covers(-1) {
            return Err(Error::ResidueOutsideWindow {
                valid_to: self.valid_to.unwrap_or_default(),
            });
        }
        Ok(self.terms.get(&-1).cloned().unwrap_or_default())
    }

    /// Compare two series on their common window.
    pub fn agrees_with(&self, other: &TruncSeries) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    pub fn format_with(&self, var: &str) -> String {
        let mut out = String::new();
        let ordered: Vec<_> = match self.direction {
            Puncture::Zero => self.terms.iter().collect(),
            Puncture::Infinity => self.terms.iter().rev().collect(),
        };
        for (k, c) in ordered {
            let mono = match *k {
                0 => String::new(),
                1 => var.to_string(),
                k => format!("{var}^{k}"),
            };
            push_term(&mut out, c, &mono);
        }
        if let Some(v) = self.valid_to {
            let next = match self.direction {
                Puncture::Zero => v + 1,
                Puncture::Infinity => v - 1,
            };
            let tail = format!("O({var}^{next})");
            if out.is_empty() {
                out = tail;
            } else {
                out.push_str(" + ");
                out.push_str(&tail);
            }
        } else if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Append `c*mono` to a sum, rendering unit coefficients and signs compactly.
pub(crate) fn push_term(out: &mut String, c: &Scalar, mono: &str) {
    let neg = c.is_negative();
    let mag = c.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        out.push_str(&mag.to_string());
    } else if mag.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&format!("{mag}*{mono}"));
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with("t"))
    }
}

/// Expansion of `sqrt(p(t))` with `order` binomial terms.
///
/// At zero the result is written in `s = t^{1/2}`, so `2 s sum λ_n / 4^n s^{2n}`
/// squares to `s^4 + 4 s^2`. At infinity it is `t sum λ_n 4^n t^{-n}`, which
/// squares to `t^2 + 4t`.
pub fn sqrt_p_expansion(direction: Puncture, order: usize) -> Result<TruncSeries> {
    if order == 0 {
        return Err(Error::InvalidArgument("expansion order must be >= 1".into()));
    }
    let n = order as i64;
    Ok(match direction {
        Puncture::Zero => TruncSeries::truncated(
            direction,
            (0..n).map(|i| (2 * i + 1, Scalar::from_int(2) * lambda_over_4pow(i))),
            2 * n,
        ),
        Puncture::Infinity => TruncSeries::truncated(
            direction,
            (0..n).map(|i| (1 - i, lambda_times_4pow(i))),
            2 - n,
        ),
    })
}
