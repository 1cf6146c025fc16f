//! The fields `H`, `H1`, `D`, `E` acting on the level-1/2 Heisenberg Fock space.
//!
//! `H(m) = h(2m)`, `H1(m) = 2 Σ_i λ_i/4^i h(2m+2i+1)`, and with
//! `H(z) = Σ H(n) z^{-n-1}`, `D(z) = Σ D_n z^{-n-2}`:
//!
//! `D_n = 1/2 [Σ_{i+j=n} :H1(i)H1(j): + Σ_{i+j=n+2} :H(i)H(j): + 4 Σ_{i+j=n+1} :H(i)H(j):]`,
//! `E_n = Σ_{i+j=n} :H1(i)H(j):`.

use std::collections::BTreeMap;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use super::ope::{FieldName, ModeCombination};
use crate::error::Result;
use crate::fock::{Direction, FockModule, FockVector, ModuleSpec};
use crate::lambda::lambda_over_4pow;
use crate::scalar::{accumulate, Scalar};

/// `(left, right) -> coeff` for `Σ coeff h(left) h(right)`, already normal ordered.
type Quadratic = BTreeMap<(i64, i64), Scalar>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModeOperator {
    pub field: FieldName,
    pub index: i64,
}

impl ModeOperator {
    pub fn new(field: FieldName, index: i64) -> Self {
        ModeOperator { field, index }
    }
}

impl std::fmt::Display for ModeOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}({})", self.field, self.index)
    }
}

/// `2 λ_a / 4^a` for the odd h-modes `2m + 2a + 1 <= bound` making up `H1(m)`.
fn h1_expansion(m: i64, bound: i64) -> Vec<(i64, Scalar)> {
    let mut out = Vec::new();
    let mut a = 0;
    while 2 * m + 2 * a + 1 <= bound {
        out.push((2 * m + 2 * a + 1, Scalar::from_int(2) * lambda_over_4pow(a)));
        a += 1;
    }
    out
}

fn h_expansion(m: i64, bound: i64) -> Vec<(i64, Scalar)> {
    if 2 * m <= bound {
        vec![(2 * m, Scalar::one())]
    } else {
        Vec::new()
    }
}

fn expansion(field: FieldName, m: i64, bound: i64) -> Vec<(i64, Scalar)> {
    match field {
        FieldName::H => h_expansion(m, bound),
        FieldName::H1 => h1_expansion(m, bound),
        _ => unreachable!("only H-type fields expand linearly"),
    }
}

fn push_ordered(table: &mut Quadratic, r: i64, s: i64, c: Scalar) {
    let key = if r < 0 { (r, s) } else { (s, r) };
    accumulate(table, key, c);
}

/// All h-level pairs of `Σ_{i+j=total} :X(i)Y(j):` with both modes `<= bound`.
fn add_pairs(
    table: &mut Quadratic,
    x: FieldName,
    y: FieldName,
    total: i64,
    weight: &Scalar,
    bound: i64,
) {
    // each factor's lowest h-mode is at least 2i (resp. 2j), so both i, j <= bound/2
    let hi = bound.div_euclid(2);
    for i in (total - hi)..=hi {
        let j = total - i;
        for (r, cr) in expansion(x, i, bound) {
            for (s, cs) in expansion(y, j, bound) {
                push_ordered(table, r, s, weight * &cr * &cs);
            }
        }
    }
}

/// `Σ_{i+j=n} :H1(i)H1(j):` with the ordering taken on the `H1` indices,
/// expanded into literal (unreordered) h-level products.
fn add_field_ordered_h1h1(table: &mut Quadratic, n: i64, weight: &Scalar, bound: i64) {
    // the factor acting first has index <= (bound-1)/2
    let top = (bound - 1).div_euclid(2);
    let mut pairs = Vec::new();
    for i in 0..=top {
        pairs.push((n - i, i));
    }
    for i in (n - top)..0 {
        pairs.push((i, n - i));
    }
    for (left, right) in pairs {
        for (s, cs) in h1_expansion(right, bound) {
            // h(s) with s < 0 creates y_{-s}, which the left factor may remove
            let reach = bound.max(-s);
            for (r, cr) in h1_expansion(left, reach) {
                accumulate(table, (r, s), weight * &cr * &cs);
            }
        }
    }
}

fn quadratic_table(field: FieldName, n: i64, bound: i64, ordering: NormalOrdering) -> Quadratic {
    let mut t = Quadratic::new();
    let half = Scalar::ratio(1, 2);
    match field {
        FieldName::D => {
            match ordering {
                NormalOrdering::HMode => {
                    add_pairs(&mut t, FieldName::H1, FieldName::H1, n, &half, bound)
                }
                NormalOrdering::FieldMode => add_field_ordered_h1h1(&mut t, n, &half, bound),
            }
            add_pairs(&mut t, FieldName::H, FieldName::H, n + 2, &half, bound);
            add_pairs(&mut t, FieldName::H, FieldName::H, n + 1, &Scalar::from_int(2), bound);
        }
        FieldName::E => {
            add_pairs(&mut t, FieldName::H1, FieldName::H, n, &Scalar::one(), bound);
        }
        _ => unreachable!("only D and E are quadratic"),
    }
    t
}

/// Where `:H1(i)H1(j):` is ordered. `HMode` expands `H1` first and reorders
/// each `h(r)h(s)` (so `h(r)` with `r >= 0` moves right); `FieldMode`
/// applies the same index rule to the `H1` modes themselves. `H` and `E`
/// terms are identical under both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalOrdering {
    #[default]
    HMode,
    FieldMode,
}

/// Level-1/2 Fock module in `E+` with the `D`/`E` operator tables memoized
/// per (field, index, bound).
pub struct VirasoroModule {
    fock: FockModule,
    ordering: NormalOrdering,
    tables: DashMap<(FieldName, i64, i64), Arc<Quadratic>>,
}

impl Default for VirasoroModule {
    fn default() -> Self {
        Self::new()
    }
}

impl VirasoroModule {
    pub fn new() -> Self {
        Self::with_ordering(NormalOrdering::HMode)
    }

    pub fn with_ordering(ordering: NormalOrdering) -> Self {
        VirasoroModule {
            fock: FockModule::new(ModuleSpec::heisenberg(Scalar::ratio(1, 2), Direction::Plus)),
            ordering,
            tables: DashMap::new(),
        }
    }

    pub fn ordering(&self) -> NormalOrdering {
        self.ordering
    }

    pub fn fock(&self) -> &FockModule {
        &self.fock
    }

    fn h(&self, r: i64, v: &FockVector) -> Result<FockVector> {
        self.fock.heis_act(r, v)
    }

    /// `H(m)` or `H1(m)`.
    pub fn hbar_mode(&self, field: FieldName, m: i64, v: &FockVector) -> Result<FockVector> {
        let bound = self.fock.vanishing_bound(v);
        let mut out = FockVector::zero();
        for (r, c) in expansion(field, m, bound) {
            out.add_assign_scaled(&self.h(r, v)?, &c);
        }
        Ok(out)
    }

    fn table(&self, field: FieldName, n: i64, bound: i64) -> Arc<Quadratic> {
        let key = (field, n, bound);
        if let Some(t) = self.tables.get(&key) {
            return t.clone();
        }
        let t = Arc::new(quadratic_table(field, n, bound, self.ordering));
        self.tables.insert(key, t.clone());
        t
    }

    /// `D_n` or `E_n`.
    pub fn normal_ordered_mode(
        &self,
        field: FieldName,
        n: i64,
        v: &FockVector,
    ) -> Result<FockVector> {
        let bound = self.fock.vanishing_bound(v);
        let table = self.table(field, n, bound);
        let mut out = FockVector::zero();
        let mut right_cache: BTreeMap<i64, FockVector> = BTreeMap::new();
        for ((l, r), c) in table.iter() {
            if !right_cache.contains_key(r) {
                right_cache.insert(*r, self.h(*r, v)?);
            }
            let w = &right_cache[r];
            if w.is_zero() {
                continue;
            }
            out.add_assign_scaled(&self.h(*l, w)?, c);
        }
        Ok(out)
    }

    pub fn apply(&self, op: ModeOperator, v: &FockVector) -> Result<FockVector> {
        match op.field {
            FieldName::H | FieldName::H1 => self.hbar_mode(op.field, op.index, v),
            FieldName::D | FieldName::E => self.normal_ordered_mode(op.field, op.index, v),
        }
    }

    /// Evaluate a mode combination with the central element acting by `c_value`.
    pub fn apply_combination(
        &self,
        expr: &ModeCombination,
        c_value: &Scalar,
        v: &FockVector,
    ) -> Result<FockVector> {
        let mut out = v.scale(&(&expr.central * c_value));
        for ((f, n), c) in &expr.terms {
            out.add_assign_scaled(&self.apply(ModeOperator::new(*f, *n), v)?, c);
        }
        Ok(out)
    }

    /// `(X Y - Y X - expected) v`.
    pub fn commutator_defect(
        &self,
        x: ModeOperator,
        y: ModeOperator,
        expected: &ModeCombination,
        c_value: &Scalar,
        v: &FockVector,
    ) -> Result<FockVector> {
        let xy = self.apply(x, &self.apply(y, v)?)?;
        let yx = self.apply(y, &self.apply(x, v)?)?;
        let rhs = self.apply_combination(expected, c_value, v)?;
        Ok(xy.sub(&yx).sub(&rhs))
    }

    /// The commutator alone.
    pub fn commutator(
        &self,
        x: ModeOperator,
        y: ModeOperator,
        v: &FockVector,
    ) -> Result<FockVector> {
        let xy = self.apply(x, &self.apply(y, v)?)?;
        let yx = self.apply(y, &self.apply(x, v)?)?;
        Ok(xy.sub(&yx))
    }
}
