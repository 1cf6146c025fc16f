//! The binomial coefficients `λ_n = binom(1/2, n)` and the fixed polynomial
//! `p(t) = t^2 + 4t` defining the three-point ring.

use std::sync::{OnceLock, RwLock};

use crate::scalar::Scalar;
use crate::series::{Puncture, TruncSeries};

/// Append-only cache of `λ_n`, shared across threads.
#[derive(Debug)]
pub struct LambdaTable {
    cache: RwLock<Vec<Scalar>>,
}

impl LambdaTable {
    pub fn new() -> Self {
        LambdaTable {
            cache: RwLock::new(vec![Scalar::one()]),
        }
    }

    /// The process-wide table.
    pub fn global() -> &'static LambdaTable {
        static TABLE: OnceLock<LambdaTable> = OnceLock::new();
        TABLE.get_or_init(LambdaTable::new)
    }

    /// `λ_n`, extended by zero for `n < 0`.
    pub fn get(&self, n: i64) -> Scalar {
        if n < 0 {
            return Scalar::zero();
        }
        let n = n as usize;
        {
            let cache = self.cache.read().expect("lambda cache poisoned");
            if let Some(v) = cache.get(n) {
                return v.clone();
            }
        }
        let mut cache = self.cache.write().expect("lambda cache poisoned");
        while cache.len() <= n {
            let k = cache.len() as i64;
            // λ_k = λ_{k-1} (3 - 2k) / (2k)
            let next = &cache[cache.len() - 1] * Scalar::ratio(3 - 2 * k, 2 * k);
            cache.push(next);
        }
        cache[n].clone()
    }

    pub fn len(&self) -> usize {
        self.cache.read().expect("lambda cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for LambdaTable {
    fn default() -> Self {
        Self::new()
    }
}

/// `λ_n` from the global table; zero for negative `n`.
pub fn lambda_coeff(n: i64) -> Scalar {
    LambdaTable::global().get(n)
}

/// `λ_n 4^n`, the coefficients of `sqrt(1 + 4/t)`.
pub fn lambda_times_4pow(n: i64) -> Scalar {
    if n < 0 {
        return Scalar::zero();
    }
    lambda_coeff(n) * Scalar::from_int(4).pow(n as i32)
}

/// `λ_n / 4^n`, the coefficients of `sqrt(1 + t/4)`.
pub fn lambda_over_4pow(n: i64) -> Scalar {
    if n < 0 {
        return Scalar::zero();
    }
    lambda_coeff(n) / Scalar::from_int(4).pow(n as i32)
}

/// The polynomial `p(t) = t^2 + 4t` and its derivatives.
#[derive(Debug, Clone, Copy, Default)]
pub struct PPoly;

impl PPoly {
    /// Coefficients of `p^{(k)}` in ascending order.
    pub fn coefficients(derivative: u32) -> Vec<i64> {
        match derivative {
            0 => vec![0, 4, 1],
            1 => vec![4, 2],
            2 => vec![2],
            _ => vec![],
        }
    }

    /// `p^{(k)}` as an exact polynomial series in the given variable direction.
    pub fn series(derivative: u32) -> TruncSeries {
        TruncSeries::exact(
            Puncture::Zero,
            Self::coefficients(derivative)
                .into_iter()
                .enumerate()
                .map(|(i, c)| (i as i64, Scalar::from_int(c))),
        )
    }

    pub fn p() -> TruncSeries {
        Self::series(0)
    }

    pub fn dp() -> TruncSeries {
        Self::series(1)
    }

    pub fn ddp() -> TruncSeries {
        Self::series(2)
    }

    pub fn dddp() -> TruncSeries {
        Self::series(3)
    }

    pub fn eval(derivative: u32, t: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in Self::coefficients(derivative).into_iter().rev() {
            acc = acc * t + Scalar::from_int(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        assert_eq!(lambda_coeff(0), Scalar::one());
        assert_eq!(lambda_coeff(-3), Scalar::zero());
        assert_eq!(lambda_coeff(1), Scalar::ratio(1, 2));
        assert_eq!(lambda_coeff(2), Scalar::ratio(-1, 8));
        assert_eq!(lambda_coeff(3), Scalar::ratio(1, 16));
        assert_eq!(lambda_coeff(4), Scalar::ratio(-5, 128));
    }

    #[test]
    fn recurrence_matches_product_formula() {
        // (1/2)(1/2 - 1)...(1/2 - (n-1)) / n!
        let half = Scalar::ratio(1, 2);
        let mut num = Scalar::one();
        let mut fact = Scalar::one();
        for n in 0..=200i64 {
            if n > 0 {
                num = num * (&half - Scalar::from_int(n - 1));
                fact = fact * Scalar::from_int(n);
            }
            assert_eq!(lambda_coeff(n), &num / &fact, "n = {n}");
        }
    }

    #[test]
    fn local_table_grows_on_demand() {
        let t = LambdaTable::new();
        assert_eq!(t.len(), 1);
        assert_eq!(t.get(5), Scalar::ratio(7, 256));
        assert_eq!(t.len(), 6);
    }

    #[test]
    fn third_derivative_vanishes() {
        assert!(PPoly::dddp().is_zero());
        assert_eq!(PPoly::eval(0, &Scalar::from_int(3)), Scalar::from_int(21));
        assert_eq!(PPoly::eval(1, &Scalar::from_int(3)), Scalar::from_int(10));
        assert_eq!(PPoly::eval(2, &Scalar::from_int(3)), Scalar::from_int(2));
    }
}
