//! Restricted modules on Fock spaces: the Heisenberg module `P = C[y_1, y_2, ...]`
//! at any level, and the lattice module `V_Q = P ⊗ C[Q]` for `Q = Zα`,
//! `<α,α> = 2`, with its vertex operators.

mod module;
mod vertex;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{accumulate, Scalar};
use crate::series::push_term;

pub use module::{
    heis_act, induce_threepoint_act, relation_defect, vanishing_bound, vertex_mode, FockModule,
};

/// Exponent vector of a monomial in the `y_m`: entry `m - 1` is the power of
/// `y_m`. Never has trailing zeros.
pub(crate) type Exps = Vec<u32>;

pub(crate) fn exps_mul(a: &[u32], b: &[u32]) -> Exps {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (i, e) in short.iter().enumerate() {
        out[i] += e;
    }
    out
}

fn trim(mut e: Exps) -> Exps {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockMonomial {
    exps: Exps,
    charge: Option<i64>,
}

impl FockMonomial {
    pub fn vacuum(charge: Option<i64>) -> Self {
        FockMonomial {
            exps: Vec::new(),
            charge,
        }
    }

    /// Monomial `prod y_i` over the multiset `parts` (each part `>= 1`).
    pub fn from_parts(parts: &[u32], charge: Option<i64>) -> Result<Self> {
        let mut exps = Vec::new();
        for &p in parts {
            if p == 0 {
                return Err(Error::InvalidArgument("partition parts must be positive".into()));
            }
            let i = p as usize - 1;
            if exps.len() <= i {
                exps.resize(i + 1, 0);
            }
            exps[i] += 1;
        }
        Ok(FockMonomial { exps, charge })
    }

    pub(crate) fn from_exps(exps: Exps, charge: Option<i64>) -> Self {
        FockMonomial {
            exps: trim(exps),
            charge,
        }
    }

    pub(crate) fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// Parts in decreasing order.
    pub fn parts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, e) in self.exps.iter().enumerate().rev() {
            out.extend(std::iter::repeat(i as u32 + 1).take(*e as usize));
        }
        out
    }

    pub fn charge(&self) -> Option<i64> {
        self.charge
    }

    pub fn exponent(&self, m: usize) -> u32 {
        m.checked_sub(1)
            .and_then(|i| self.exps.get(i))
            .copied()
            .unwrap_or(0)
    }

    /// Sum of parts.
    pub fn weight(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(i, e)| (i as u64 + 1) * *e as u64)
            .sum()
    }

    /// Sum of parts plus `charge^2`.
    pub fn degree(&self) -> u64 {
        let c = self.charge.unwrap_or(0).unsigned_abs();
        self.weight() + c * c
    }

    pub fn max_part(&self) -> u32 {
        self.exps.len() as u32
    }

    pub(crate) fn times_y(&self, m: usize) -> FockMonomial {
        let mut exps = self.exps.clone();
        if exps.len() < m {
            exps.resize(m, 0);
        }
        exps[m - 1] += 1;
        FockMonomial {
            exps,
            charge: self.charge,
        }
    }

    /// `∂/∂y_m` as (multiplicity, monomial), or `None` if `y_m` is absent.
    pub(crate) fn d_y(&self, m: usize) -> Option<(u32, FockMonomial)> {
        let e = self.exponent(m);
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[m - 1] -= 1;
        Some((e, FockMonomial::from_exps(exps, self.charge)))
    }

    fn render(&self) -> String {
        let mut factors = Vec::new();
        for (i, e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(format!("y{}", i + 1)),
                e => factors.push(format!("y{}^{e}", i + 1)),
            }
        }
        let poly = if factors.is_empty() {
            "1".to_string()
        } else {
            factors.join("*")
        };
        match self.charge {
            None => poly,
            Some(k) => format!("{poly}⊗e{k}"),
        }
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<FockMonomial, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(m: FockMonomial) -> Self {
        Self::from_terms([(m, Scalar::one())])
    }

    pub fn vacuum(charge: Option<i64>) -> Self {
        Self::monomial(FockMonomial::vacuum(charge))
    }

    pub fn from_terms<I: IntoIterator<Item = (FockMonomial, Scalar)>>(terms: I) -> Self {
        let mut map = BTreeMap::new();
        for (m, c) in terms {
            accumulate(&mut map, m, c);
        }
        FockVector { terms: map }
    }

    pub fn terms(&self) -> &BTreeMap<FockMonomial, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &FockMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub(crate) fn push(&mut self, m: FockMonomial, c: Scalar) {
        accumulate(&mut self.terms, m, c);
    }

    pub fn add_assign_scaled(&mut self, other: &FockVector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (m, v) in &other.terms {
            let add = if unit { v.clone() } else { v * c };
            match self.terms.get_mut(m) {
                Some(slot) => {
                    *slot += add;
                    if slot.is_zero() {
                        self.terms.remove(m);
                    }
                }
                None => {
                    self.terms.insert(m.clone(), add);
                }
            }
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_assign_scaled(other, &-Scalar::one());
        out
    }

    pub fn scale(&self, c: &Scalar) -> FockVector {
        let mut out = FockVector::zero();
        out.add_assign_scaled(self, c);
        out
    }

    pub fn max_part(&self) -> u32 {
        self.terms.keys().map(|m| m.max_part()).max().unwrap_or(0)
    }

    /// Largest monomial degree, or `None` for the zero vector.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|m| m.degree()).max()
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (m, c) in &self.terms {
            let mono = m.render();
            if mono == "1" {
                push_term(&mut out, c, "");
            } else {
                push_term(&mut out, c, &mono);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRepr {
    parts: Vec<u32>,
    charge: Option<i64>,
    coeff: Scalar,
}

impl Serialize for FockVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(m, c)| TermRepr {
            parts: m.parts(),
            charge: m.charge,
            coeff: c.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for FockVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let reprs: Vec<TermRepr> = Vec::deserialize(d)?;
        let mut out = FockVector::zero();
        for r in reprs {
            let m = FockMonomial::from_parts(&r.parts, r.charge).map_err(serde::de::Error::custom)?;
            out.push(m, r.coeff);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModuleKind {
    #[serde(rename = "heisenberg")]
    Heisenberg,
    #[serde(rename = "lattice-highest")]
    LatticeHighest,
    #[serde(rename = "lattice-lowest")]
    LatticeLowest,
}

impl ModuleKind {
    pub fn is_lattice(self) -> bool {
        !matches!(self, ModuleKind::Heisenberg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "E+")]
    Plus,
    #[serde(rename = "E-")]
    Minus,
}

/// Sign convention for the exponentials in `X(±α, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `exp(∓Σ α(-n)/n z^n) exp(-Σ α(n)/n z^-n)` as displayed.
    #[default]
    Paper,
    /// `exp(±Σ α(-n)/n z^n) exp(∓Σ α(n)/n z^-n)`.
    Standard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    kind: ModuleKind,
    level: Scalar,
    h_zero_eigenvalue: Option<Scalar>,
    direction: Direction,
    vertex_sign_convention: Convention,
}

impl ModuleSpec {
    pub fn new(
        kind: ModuleKind,
        level: Scalar,
        h_zero_eigenvalue: Option<Scalar>,
        direction: Direction,
        vertex_sign_convention: Convention,
    ) -> Result<Self> {
        match kind {
            ModuleKind::LatticeHighest if !(level.is_one() && direction == Direction::Plus) => {
                return Err(Error::InvalidModule(
                    "lattice-highest has level 1 and direction E+".into(),
                ))
            }
            ModuleKind::LatticeLowest
                if !(level == -Scalar::one() && direction == Direction::Minus) =>
            {
                return Err(Error::InvalidModule(
                    "lattice-lowest has level -1 and direction E-".into(),
                ))
            }
            _ => {}
        }
        Ok(ModuleSpec {
            kind,
            level,
            h_zero_eigenvalue,
            direction,
            vertex_sign_convention,
        })
    }

    pub fn heisenberg(level: Scalar, direction: Direction) -> Self {
        Self::new(
            ModuleKind::Heisenberg,
            level,
            Some(Scalar::zero()),
            direction,
            Convention::Paper,
        )
        .expect("heisenberg spec is unconstrained")
    }

    pub fn lattice_highest(convention: Convention) -> Self {
        Self::new(
            ModuleKind::LatticeHighest,
            Scalar::one(),
            None,
            Direction::Plus,
            convention,
        )
        .expect("valid lattice-highest spec")
    }

    pub fn lattice_lowest(convention: Convention) -> Self {
        Self::new(
            ModuleKind::LatticeLowest,
            -Scalar::one(),
            None,
            Direction::Minus,
            convention,
        )
        .expect("valid lattice-lowest spec")
    }

    pub fn with_h_zero(mut self, eigenvalue: Option<Scalar>) -> Self {
        self.h_zero_eigenvalue = eigenvalue;
        self
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn level(&self) -> &Scalar {
        &self.level
    }

    pub fn h_zero_eigenvalue(&self) -> Option<&Scalar> {
        self.h_zero_eigenvalue.as_ref()
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn convention(&self) -> Convention {
        self.vertex_sign_convention
    }
}

/// Partitions of every integer `0..=n`, each with parts in decreasing order.
pub fn partitions_up_to(n: u32) -> Vec<Vec<u32>> {
    fn rec(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for p in (1..=max.min(rem)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All monomials of degree at most `max_degree`; lattice modules use charges
/// with `|k| <= 2`.
pub fn spanning_monomials(kind: ModuleKind, max_degree: u32) -> Vec<FockMonomial> {
    let charges: Vec<Option<i64>> = if kind.is_lattice() {
        (-2..=2).map(Some).collect()
    } else {
        vec![None]
    };
    let mut out = Vec::new();
    for charge in charges {
        let c2 = charge.map_or(0, |k| (k * k) as u32);
        if c2 > max_degree {
            continue;
        }
        for parts in partitions_up_to(max_degree - c2) {
            out.push(FockMonomial::from_parts(&parts, charge).expect("positive parts"));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_counts() {
        // 1 + 1 + 2 + 3 + 5 + 7 + 11
        assert_eq!(partitions_up_to(6).len(), 30);
        assert_eq!(spanning_monomials(ModuleKind::Heisenberg, 6).len(), 30);
        assert_eq!(spanning_monomials(ModuleKind::LatticeHighest, 6).len(), 30 + 2 * 19 + 2 * 4);
    }

    #[test]
    fn monomial_roundtrip() {
        let m = FockMonomial::from_parts(&[1, 3, 1], Some(-1)).unwrap();
        assert_eq!(m.parts(), vec![3, 1, 1]);
        assert_eq!(m.weight(), 5);
        assert_eq!(m.degree(), 6);
        assert_eq!(m.to_string(), "y1^2*y3⊗e-1");
        let (k, d) = m.d_y(1).unwrap();
        assert_eq!(k, 2);
        assert_eq!(d.parts(), vec![3, 1]);
        assert!(m.d_y(2).is_none());
        assert_eq!(m.d_y(3).unwrap().1.max_part(), 1);
    }

    #[test]
    fn vector_serde_shape() {
        let v = FockVector::from_terms([
            (FockMonomial::from_parts(&[2], Some(0)).unwrap(), Scalar::ratio(-1, 2)),
        ]);
        let j = serde_json::to_string(&v).unwrap();
        assert_eq!(j, r#"[{"parts":[2],"charge":0,"coeff":"-1/2"}]"#);
        let back: FockVector = serde_json::from_str(&j).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn spec_invariants() {
        let bad = ModuleSpec::new(
            ModuleKind::LatticeHighest,
            Scalar::from_int(2),
            None,
            Direction::Plus,
            Convention::Paper,
        );
        assert!(matches!(bad, Err(Error::InvalidModule(_))));
        let bad = ModuleSpec::new(
            ModuleKind::LatticeLowest,
            -Scalar::one(),
            None,
            Direction::Plus,
            Convention::Paper,
        );
        assert!(bad.is_err());
    }
}
