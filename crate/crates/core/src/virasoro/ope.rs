//! Singular parts of operator products and the mode brackets they determine.
//!
//! A field `X(z) = Σ X_m z^{-m-h_X}`. Pole data `Z^j(w)` multiplies
//! `(∂_w)^j z^{-1} δ(w/z)` (explicit partials) or `(1/j!) (∂_w)^j z^{-1} δ(w/z)`
//! (factorial-normalized), where `z^{-1} δ(w/z) = Σ_k w^k z^{-k-1}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lambda::PPoly;
use crate::scalar::{accumulate, factorial, falling_factorial, Scalar};
use crate::series::{push_term, TruncSeries};
use crate::threepoint::{WittElement, WittSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldName {
    D,
    E,
    H,
    H1,
}

impl FieldName {
    pub fn weight(self) -> i64 {
        match self {
            FieldName::D | FieldName::E => 2,
            FieldName::H | FieldName::H1 => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FieldName::D => "D",
            FieldName::E => "E",
            FieldName::H => "H",
            FieldName::H1 => "H1",
        }
    }
}

impl fmt::Display for FieldName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// `coeff * w^power * F^{(derivative)}(w)`, or `coeff * w^power` (times the
/// central element) when `field` is `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpeTerm {
    pub power: i64,
    pub field: Option<FieldName>,
    pub derivative: u32,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    ExplicitPartials,
    FactorialNormalized,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpeData {
    pub x: FieldName,
    pub y: FieldName,
    /// `(j, Z^j)` with distinct `j`.
    pub poles: Vec<(u32, Vec<OpeTerm>)>,
}

/// Linear combination of field modes plus a central coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ModeCombination {
    #[serde(with = "crate::serde_util::pairs")]
    pub terms: BTreeMap<(FieldName, i64), Scalar>,
    pub central: Scalar,
}

impl ModeCombination {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn non_central(&self) -> ModeCombination {
        ModeCombination {
            terms: self.terms.clone(),
            central: Scalar::zero(),
        }
    }

    /// `d`/`e` reading; `None` if an `H`-type mode occurs.
    pub fn to_witt(&self) -> Option<WittElement> {
        let mut terms = Vec::new();
        for ((f, n), c) in &self.terms {
            let s = match f {
                FieldName::D => WittSymbol::d(*n),
                FieldName::E => WittSymbol::e(*n),
                _ => return None,
            };
            terms.push((s, c.clone()));
        }
        Some(WittElement::from_terms(terms, self.central.clone()))
    }
}

impl fmt::Display for ModeCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for ((field, n), c) in &self.terms {
            push_term(&mut out, c, &format!("{field}({n})"));
        }
        if !self.central.is_zero() {
            push_term(&mut out, &self.central, "c");
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// Closed-form `(m, n) -> [X_m, Y_n]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeBracket {
    pub data: OpeData,
    pub normalization: Normalization,
}

impl ModeBracket {
    pub fn eval(&self, m: i64, n: i64) -> ModeCombination {
        let hx = self.data.x.weight();
        let hy = self.data.y.weight();
        let k = m + hx - 1;
        let mut out = ModeCombination::default();
        for (j, terms) in &self.data.poles {
            let j = *j;
            let norm = match self.normalization {
                Normalization::ExplicitPartials => Scalar::one(),
                Normalization::FactorialNormalized => factorial(j).recip().expect("nonzero"),
            };
            let kj = falling_factorial(k, j);
            if kj.is_zero() {
                continue;
            }
            let base = &norm * &kj;
            for t in terms {
                // ∂^j δ contributes w^{k-j}; total w-power a + k - j
                let a = t.power + k - j as i64;
                match t.field {
                    None => {
                        if a == -n - hy {
                            out.central += &base * &t.coeff;
                        }
                    }
                    Some(f) => {
                        let hf = f.weight();
                        let r = t.derivative;
                        let q = a - hf - r as i64 + n + hy;
                        let c = &base * &t.coeff * falling_factorial(-q - hf, r);
                        accumulate(&mut out.terms, (f, q), c);
                    }
                }
            }
        }
        out
    }
}

pub fn mode_bracket_from_ope(data: OpeData, normalization: Normalization) -> ModeBracket {
    ModeBracket {
        data,
        normalization,
    }
}

/// Polynomial coefficients of `c * poly` times a field derivative.
fn poly_terms(poly: &TruncSeries, c: Scalar, field: Option<FieldName>, derivative: u32) -> Vec<OpeTerm> {
    poly.terms()
        .iter()
        .map(|(e, v)| OpeTerm {
            power: *e,
            field,
            derivative,
            coeff: v * &c,
        })
        .filter(|t| !t.coeff.is_zero())
        .collect()
}

fn prod(a: &TruncSeries, b: &TruncSeries) -> TruncSeries {
    a.mul(b).expect("exact polynomials")
}

fn one() -> TruncSeries {
    TruncSeries::one(crate::series::Puncture::Zero)
}

fn q(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    DD,
    DE,
    EE,
    DH,
    DH1,
    EH,
    EH1,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::DD,
        Family::DE,
        Family::EE,
        Family::DH,
        Family::DH1,
        Family::EH,
        Family::EH1,
    ];

    pub fn fields(self) -> (FieldName, FieldName) {
        use FieldName::*;
        match self {
            Family::DD => (D, D),
            Family::DE => (D, E),
            Family::EE => (E, E),
            Family::DH => (D, H),
            Family::DH1 => (D, H1),
            Family::EH => (E, H),
            Family::EH1 => (E, H1),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Family::DD => "dd",
            Family::DE => "de",
            Family::EE => "ee",
            Family::DH => "dh",
            Family::DH1 => "dh1",
            Family::EH => "eh",
            Family::EH1 => "eh1",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.label() == s)
    }
}

/// Generating-function brackets of `L_p` as printed, with explicit partials.
/// Only the three `d`/`e` families exist there.
pub fn definition_data(family: Family) -> Option<OpeData> {
    let (p, dp, ddp) = (PPoly::p(), PPoly::dp(), PPoly::ddp());
    let (x, y) = family.fields();
    use FieldName::*;
    let poles = match family {
        Family::DD => vec![
            (0, [poly_terms(&dp, q(1, 1), Some(D), 0), poly_terms(&p, q(1, 1), Some(D), 1)].concat()),
            (
                1,
                [
                    poly_terms(&p, q(2, 1), Some(D), 0),
                    poly_terms(&prod(&p, &ddp), q(1, 8), None, 0),
                    poly_terms(&prod(&dp, &dp), q(1, 16), None, 0),
                ]
                .concat(),
            ),
            (2, poly_terms(&prod(&p, &dp), q(1, 4), None, 0)),
            (3, poly_terms(&prod(&p, &p), q(1, 12), None, 0)),
        ],
        Family::EE => vec![
            (0, poly_terms(&one(), q(1, 1), Some(D), 1)),
            (1, poly_terms(&one(), q(2, 1), Some(D), 0)),
            (2, poly_terms(&dp, q(3, 2), None, 0)),
            (3, poly_terms(&p, q(1, 1), None, 0)),
        ],
        Family::DE => vec![
            (
                0,
                [poly_terms(&dp, q(3, 2), Some(E), 0), poly_terms(&p, q(1, 1), Some(E), 1)].concat(),
            ),
            (1, poly_terms(&p, q(2, 1), Some(E), 0)),
        ],
        _ => return None,
    };
    Some(OpeData { x, y, poles })
}

/// Contractions from Wick's theorem on the level-1/2 Fock space, with
/// central terms given per unit of the central element (the contraction
/// scalar is twice these at central charge 2).
pub fn wick_data(family: Family) -> OpeData {
    let (p, dp, ddp, dddp) = (PPoly::p(), PPoly::dp(), PPoly::ddp(), PPoly::dddp());
    let (x, y) = family.fields();
    use FieldName::*;
    let poles = match family {
        Family::DD => vec![
            (
                0,
                [
                    poly_terms(&dp, q(1, 1), Some(D), 0),
                    poly_terms(&p, q(1, 1), Some(D), 1),
                    poly_terms(&prod(&p, &dddp), q(1, 24), None, 0),
                ]
                .concat(),
            ),
            (
                1,
                [
                    poly_terms(&p, q(2, 1), Some(D), 0),
                    poly_terms(&prod(&p, &ddp), q(1, 8), None, 0),
                    poly_terms(&prod(&dp, &dp), q(1, 16), None, 0),
                ]
                .concat(),
            ),
            (2, poly_terms(&prod(&p, &dp), q(1, 2), None, 0)),
            (3, poly_terms(&prod(&p, &p), q(1, 2), None, 0)),
        ],
        Family::DE => vec![
            (
                0,
                [poly_terms(&dp, q(3, 2), Some(E), 0), poly_terms(&p, q(1, 1), Some(E), 1)].concat(),
            ),
            (1, poly_terms(&p, q(2, 1), Some(E), 0)),
        ],
        Family::EE => vec![
            (0, poly_terms(&one(), q(1, 1), Some(D), 1)),
            (1, poly_terms(&one(), q(2, 1), Some(D), 0)),
            (2, poly_terms(&dp, q(1, 4), None, 0)),
            (3, poly_terms(&p, q(1, 2), None, 0)),
        ],
        Family::DH => vec![
            (0, [poly_terms(&dp, q(1, 1), Some(H), 0), poly_terms(&p, q(1, 1), Some(H), 1)].concat()),
            (1, poly_terms(&p, q(1, 1), Some(H), 0)),
        ],
        Family::DH1 => vec![
            (
                0,
                [poly_terms(&p, q(1, 1), Some(H1), 1), poly_terms(&dp, q(1, 2), Some(H1), 0)].concat(),
            ),
            (1, poly_terms(&p, q(1, 1), Some(H1), 0)),
        ],
        Family::EH => vec![
            (0, poly_terms(&one(), q(1, 1), Some(H1), 1)),
            (1, poly_terms(&one(), q(1, 1), Some(H1), 0)),
        ],
        Family::EH1 => vec![
            (
                0,
                [poly_terms(&p, q(1, 1), Some(H), 1), poly_terms(&dp, q(1, 2), Some(H), 0)].concat(),
            ),
            (1, poly_terms(&p, q(1, 1), Some(H), 0)),
        ],
    };
    OpeData { x, y, poles }
}

pub fn wick_bracket(family: Family) -> ModeBracket {
    mode_bracket_from_ope(wick_data(family), Normalization::FactorialNormalized)
}

pub fn definition_bracket(family: Family) -> Option<ModeBracket> {
    definition_data(family).map(|d| mode_bracket_from_ope(d, Normalization::ExplicitPartials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::threepoint::witt_bracket_symbols;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn delta(a: i64) -> i64 {
        (a == 0) as i64
    }

    #[test]
    fn definition_reproduces_witt() {
        let pairs = [
            (Family::DD, WittSymbol::d as fn(i64) -> WittSymbol, WittSymbol::d as fn(i64) -> WittSymbol),
            (Family::DE, WittSymbol::d, WittSymbol::e),
            (Family::EE, WittSymbol::e, WittSymbol::e),
        ];
        for (fam, fx, fy) in pairs {
            let b = definition_bracket(fam).unwrap();
            for m in -6..=6 {
                for n in -6..=6 {
                    let got = b.eval(m, n).to_witt().unwrap().without_central();
                    assert_eq!(got, witt_bracket_symbols(fx(m), fy(n)), "{fam:?} {m} {n}");
                }
            }
        }
    }

    #[test]
    fn ee_central_terms() {
        let paper = definition_bracket(Family::EE).unwrap();
        let wick = wick_bracket(Family::EE);
        for m in -5..=5 {
            for n in -5..=5 {
                let expected = (m + 1) * m * (m + 2) * delta(m + n + 2)
                    + 2 * m * (m + 1) * (2 * m + 1) * delta(m + n + 1);
                assert_eq!(paper.eval(m, n).central, s(expected));
                assert_eq!(wick.eval(m, n).central * s(12), s(expected));
                assert_eq!(paper.eval(m, n).non_central(), wick.eval(m, n).non_central());
            }
        }
    }

    #[test]
    fn dd_central_terms_agree() {
        let paper = definition_bracket(Family::DD).unwrap();
        let wick = wick_bracket(Family::DD);
        for m in -5..=5 {
            for n in -5..=5 {
                assert_eq!(paper.eval(m, n), wick.eval(m, n));
            }
        }
    }

    #[test]
    fn quoted_example() {
        let b = wick_bracket(Family::EE).eval(1, -3);
        assert_eq!(b.to_string(), "4*D(-2) + 1/2*c");
        assert_eq!(b.to_witt().unwrap().to_string(), "4*d(-2) + 1/2*c");
    }
}
