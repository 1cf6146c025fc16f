//! Loop algebras `g ⊗ C((t))` and `g ⊗ C((t^{-1}))` with the central
//! extension `Res_t(f'g) k`, and the embeddings `rho_plus`, `rho_minus` of
//! `g_p` into them.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::{lambda_over_4pow, lambda_times_4pow};
use crate::lie::StructureConstants;
use crate::scalar::{accumulate, Scalar};
use crate::series::{push_term, tighter_bound, Puncture, TruncSeries};
use crate::threepoint::{gp_bracket, GpElement, GpSymbol, Kind};

/// Truncated element `sum a_i ⊗ f_i + c k`. All components share one window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopElement {
    direction: Puncture,
    #[serde(with = "crate::serde_util::pairs")]
    terms: BTreeMap<(usize, i64), Scalar>,
    central: Scalar,
    valid_to: Option<i64>,
}

fn in_window(dir: Puncture, valid_to: Option<i64>, e: i64) -> bool {
    match (dir, valid_to) {
        (_, None) => true,
        (Puncture::Zero, Some(v)) => e <= v,
        (Puncture::Infinity, Some(v)) => e >= v,
    }
}

impl LoopElement {
    pub fn zero(direction: Puncture) -> Self {
        LoopElement {
            direction,
            terms: BTreeMap::new(),
            central: Scalar::zero(),
            valid_to: None,
        }
    }

    pub fn new<I: IntoIterator<Item = ((usize, i64), Scalar)>>(
        direction: Puncture,
        terms: I,
        central: Scalar,
        valid_to: Option<i64>,
    ) -> Self {
        let mut map = BTreeMap::new();
        for ((i, e), c) in terms {
            if in_window(direction, valid_to, e) {
                accumulate(&mut map, (i, e), c);
            }
        }
        LoopElement {
            direction,
            terms: map,
            central,
            valid_to,
        }
    }

    /// `a_i ⊗ f` for a series `f`.
    pub fn tensor(base: usize, f: &TruncSeries) -> Self {
        Self::new(
            f.direction(),
            f.terms().iter().map(|(e, c)| ((base, *e), c.clone())),
            Scalar::zero(),
            f.valid_to(),
        )
    }

    pub fn central_element(direction: Puncture, c: Scalar) -> Self {
        Self::new(direction, [], c, None)
    }

    pub fn direction(&self) -> Puncture {
        self.direction
    }

    pub fn terms(&self) -> &BTreeMap<(usize, i64), Scalar> {
        &self.terms
    }

    pub fn central(&self) -> &Scalar {
        &self.central
    }

    pub fn valid_to(&self) -> Option<i64> {
        self.valid_to
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn coeff(&self, base: usize, exponent: i64) -> Result<Scalar> {
        if !in_window(self.direction, self.valid_to, exponent) {
            return Err(Error::OutsideWindow {
                exponent,
                valid_to: self.valid_to.unwrap_or_default(),
                direction: self.direction,
            });
        }
        Ok(self.terms.get(&(base, exponent)).cloned().unwrap_or_default())
    }

    /// The coefficient series of `a_base`, carrying the element's window.
    pub fn component(&self, base: usize) -> TruncSeries {
        TruncSeries::build(
            self.direction,
            self.terms
                .range((base, i64::MIN)..=(base, i64::MAX))
                .map(|((_, e), c)| (*e, c.clone())),
            self.valid_to,
        )
    }

    /// Leading exponent over all components, as in [`TruncSeries::leading_exponent`].
    pub fn leading_exponent(&self) -> Option<i64> {
        let exps = self.terms.keys().map(|(_, e)| *e);
        let lead = match self.direction {
            Puncture::Zero => exps.min(),
            Puncture::Infinity => exps.max(),
        };
        lead.or(match self.direction {
            Puncture::Zero => self.valid_to.map(|v| v + 1),
            Puncture::Infinity => self.valid_to.map(|v| v - 1),
        })
    }

    fn check_direction(&self, other: &LoopElement) -> Result<()> {
        if self.direction != other.direction {
            return Err(Error::DirectionMismatch(self.direction, other.direction));
        }
        Ok(())
    }

    pub fn add(&self, other: &LoopElement) -> Result<LoopElement> {
        self.check_direction(other)?;
        Ok(Self::new(
            self.direction,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(k, v)| (*k, v.clone())),
            &self.central + &other.central,
            tighter_bound(self.direction, self.valid_to, other.valid_to),
        ))
    }

    pub fn sub(&self, other: &LoopElement) -> Result<LoopElement> {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> LoopElement {
        Self::new(
            self.direction,
            self.terms.iter().map(|(k, v)| (*k, v * c)),
            &self.central * c,
            self.valid_to,
        )
    }

    pub fn display(&self, alg: &StructureConstants) -> String {
        let mut out = String::new();
        let ordered: Vec<_> = match self.direction {
            Puncture::Zero => {
                let mut v: Vec<_> = self.terms.iter().collect();
                v.sort_by_key(|((i, e), _)| (*e, *i));
                v
            }
            Puncture::Infinity => {
                let mut v: Vec<_> = self.terms.iter().collect();
                v.sort_by_key(|((i, e), _)| (-*e, *i));
                v
            }
        };
        for ((i, e), c) in ordered {
            let mono = match *e {
                0 => alg.name(*i).to_string(),
                1 => format!("{}*t", alg.name(*i)),
                e => format!("{}*t^{e}", alg.name(*i)),
            };
            push_term(&mut out, c, &mono);
        }
        if !self.central.is_zero() {
            push_term(&mut out, &self.central, "k");
        }
        if let Some(v) = self.valid_to {
            let next = match self.direction {
                Puncture::Zero => v + 1,
                Puncture::Infinity => v - 1,
            };
            if !out.is_empty() {
                out.push_str(" + ");
            }
            out.push_str(&format!("O(t^{next})"));
        } else if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for LoopElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for ((i, e), c) in &self.terms {
            push_term(&mut out, c, &format!("a{i}*t^{e}"));
        }
        if !self.central.is_zero() {
            push_term(&mut out, &self.central, "k");
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

/// `[a⊗f, b⊗g] = [a,b]⊗fg + <a,b> Res(f'g) k`, bilinearly.
pub fn loop_bracket(
    x: &LoopElement,
    y: &LoopElement,
    alg: &StructureConstants,
) -> Result<LoopElement> {
    x.check_direction(y)?;
    let dir = x.direction;
    let mut out = LoopElement::zero(dir);
    let xs: Vec<TruncSeries> = (0..alg.dim()).map(|i| x.component(i)).collect();
    let ys: Vec<TruncSeries> = (0..alg.dim()).map(|j| y.component(j)).collect();
    for (i, f) in xs.iter().enumerate() {
        for (j, g) in ys.iter().enumerate() {
            let bracket = alg.bracket_basis(i, j);
            let form = alg.form_basis(i, j);
            if bracket.is_empty() && form.is_zero() {
                continue;
            }
            if !bracket.is_empty() {
                let fg = f.mul(g)?;
                for (k, c) in bracket {
                    let term = LoopElement::tensor(*k, &fg.scale(c));
                    out = out.add(&term)?;
                }
            }
            if !form.is_zero() {
                let res = f.derivative().mul(g)?.residue()?;
                out.central += form * res;
            }
        }
    }
    Ok(out)
}

fn rho_symbol(map: Puncture, s: &GpSymbol, order: usize) -> LoopElement {
    let n = s.degree;
    let len = order as i64;
    match (map, s.kind) {
        (Puncture::Zero, Kind::Plain) => LoopElement::tensor(
            s.base,
            &TruncSeries::monomial(map, 2 * n, Scalar::one()),
        ),
        (Puncture::Infinity, Kind::Plain) => {
            LoopElement::tensor(s.base, &TruncSeries::monomial(map, n, Scalar::one()))
        }
        (Puncture::Zero, Kind::Bar) => LoopElement::new(
            map,
            (0..len).map(|i| {
                (
                    (s.base, 2 * n + 2 * i + 1),
                    Scalar::from_int(2) * lambda_over_4pow(i),
                )
            }),
            Scalar::zero(),
            Some(2 * n + 2 * len),
        ),
        (Puncture::Infinity, Kind::Bar) => LoopElement::new(
            map,
            (0..len).map(|i| ((s.base, n - i + 1), lambda_times_4pow(i))),
            Scalar::zero(),
            Some(n - len + 2),
        ),
    }
}

/// Image under `rho_plus` (direction at zero) or `rho_minus` (at infinity).
/// `order` is the number of binomial terms kept in each bar image.
pub fn rho(map: Puncture, x: &GpElement, order: usize) -> Result<LoopElement> {
    if order == 0 {
        return Err(Error::InvalidArgument("expansion order must be >= 1".into()));
    }
    let central = match map {
        Puncture::Zero => Scalar::from_int(2) * x.c_plus(),
        Puncture::Infinity => x.c_minus().clone(),
    };
    let mut out = LoopElement::central_element(map, central);
    for (s, c) in x.terms() {
        out = out.add(&rho_symbol(map, s, order).scale(c))?;
    }
    Ok(out)
}

pub fn rho_plus(x: &GpElement, order: usize) -> Result<LoopElement> {
    rho(Puncture::Zero, x, order)
}

pub fn rho_minus(x: &GpElement, order: usize) -> Result<LoopElement> {
    rho(Puncture::Infinity, x, order)
}

/// `rho([x,y]) - [rho(x), rho(y)]` on the common window, which is carried as
/// the result's `valid_to`.
pub fn hom_defect(
    map: Puncture,
    x: &GpElement,
    y: &GpElement,
    order: usize,
    alg: &StructureConstants,
) -> Result<LoopElement> {
    let rx = rho(map, x, order)?;
    let ry = rho(map, y, order)?;
    let image = rho(map, &gp_bracket(x, y, alg), order)?;
    let bracket = loop_bracket(&rx, &ry, alg)?;
    let defect = image.sub(&bracket)?;
    if let (Some(w), Some(a), Some(b)) = (
        defect.valid_to,
        rx.leading_exponent(),
        ry.leading_exponent(),
    ) {
        let lead = a + b;
        let empty = match map {
            Puncture::Zero => w < lead,
            Puncture::Infinity => w > lead,
        };
        if empty {
            return Err(Error::EmptyWindow {
                valid_to: w,
                leading: lead,
            });
        }
    }
    Ok(defect)
}

#[cfg(test)]
mod tests {
    use super::*;

    const XP: usize = 0;
    const XM: usize = 1;
    const H: usize = 2;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn mono(dir: Puncture, base: usize, e: i64) -> LoopElement {
        LoopElement::tensor(base, &TruncSeries::monomial(dir, e, Scalar::one()))
    }

    #[test]
    fn loop_bracket_examples() {
        let g = StructureConstants::sl2();
        let z = Puncture::Zero;
        let b = loop_bracket(&mono(z, H, 1), &mono(z, H, -1), &g).unwrap();
        assert_eq!(b, LoopElement::central_element(z, s(2)));
        let b = loop_bracket(&mono(z, XP, 0), &mono(z, XM, 0), &g).unwrap();
        assert_eq!(b, mono(z, H, 0));
        assert!(loop_bracket(&mono(z, H, 2), &mono(z, H, -1), &g)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn loop_bracket_rejects_mixed_directions() {
        let g = StructureConstants::sl2();
        let r = loop_bracket(
            &mono(Puncture::Zero, H, 1),
            &mono(Puncture::Infinity, H, -1),
            &g,
        );
        assert!(matches!(r, Err(Error::DirectionMismatch(..))));
    }

    #[test]
    fn residue_outside_window_errors() {
        let g = StructureConstants::sl2();
        let f = LoopElement::new(Puncture::Zero, [((H, 2), s(1))], s(0), Some(3));
        let r = loop_bracket(&f, &mono(Puncture::Zero, H, -10), &g);
        assert!(matches!(r, Err(Error::ResidueOutsideWindow { .. })));
    }

    #[test]
    fn rho_examples() {
        let g = StructureConstants::sl2();
        let h3 = GpElement::symbol(GpSymbol::plain(H, 3));
        assert_eq!(rho_plus(&h3, 5).unwrap(), mono(Puncture::Zero, H, 6));
        assert_eq!(rho_minus(&h3, 5).unwrap(), mono(Puncture::Infinity, H, 3));
        assert_eq!(
            rho_plus(&GpElement::k_plus(), 5).unwrap(),
            LoopElement::central_element(Puncture::Zero, s(2))
        );
        assert!(rho_plus(&GpElement::k_minus(), 5).unwrap().is_zero());
        assert!(rho_minus(&GpElement::k_plus(), 5).unwrap().is_zero());
        let hb = GpElement::symbol(GpSymbol::bar(H, 0));
        assert_eq!(
            rho_plus(&hb, 3).unwrap().display(&g),
            "2*h*t + 1/4*h*t^3 - 1/64*h*t^5 + O(t^7)"
        );
        assert_eq!(
            rho_minus(&hb, 4).unwrap().display(&g),
            "h*t + 2*h - 2*h*t^-1 + 4*h*t^-2 + O(t^-3)"
        );
    }

    #[test]
    fn bar_images_match_sqrt_p() {
        for n in -3..=3 {
            let hb = GpElement::symbol(GpSymbol::bar(H, n));
            let minus = rho_minus(&hb, 12).unwrap().component(H);
            let expected = sqrt_p(Puncture::Infinity, 12).shift(n);
            assert_eq!(minus, expected);
            // (rho_plus image)^2 = p(t^2) t^{4n}
            let plus = rho_plus(&hb, 12).unwrap().component(H);
            let sq = plus.mul(&plus).unwrap();
            let target = TruncSeries::exact(Puncture::Zero, [(4 * n + 2, s(4)), (4 * n + 4, s(1))]);
            assert!(sq.agrees_with(&target).unwrap());
            assert!(sq.valid_to().unwrap() >= 4 * n + 20);
        }
    }

    fn sqrt_p(dir: Puncture, order: usize) -> TruncSeries {
        crate::series::sqrt_p_expansion(dir, order).unwrap()
    }

    #[test]
    fn hom_defect_examples() {
        let g = StructureConstants::sl2();
        let x = GpElement::symbol(GpSymbol::plain(H, 2));
        let y = GpElement::symbol(GpSymbol::bar(H, -3));
        for map in [Puncture::Zero, Puncture::Infinity] {
            assert!(hom_defect(map, &x, &y, 40, &g).unwrap().is_zero());
        }
        let rx = rho_minus(&x, 40).unwrap();
        let ry = rho_minus(&y, 40).unwrap();
        assert_eq!(loop_bracket(&rx, &ry, &g).unwrap().central(), &s(4));
        let xb = GpElement::symbol(GpSymbol::bar(XP, 0));
        let yb = GpElement::symbol(GpSymbol::bar(XM, 0));
        assert!(hom_defect(Puncture::Infinity, &xb, &yb, 40, &g)
            .unwrap()
            .is_zero());
        let rb = loop_bracket(&rho_minus(&xb, 40).unwrap(), &rho_minus(&yb, 40).unwrap(), &g)
            .unwrap();
        assert_eq!(rb.coeff(H, 1).unwrap(), s(4));
        assert_eq!(rb.coeff(H, 2).unwrap(), s(1));
        assert_eq!(rb.coeff(H, 0).unwrap(), s(0));
        assert_eq!(rb.coeff(H, -30).unwrap(), s(0));
    }

    #[test]
    fn hom_defect_grid() {
        let g = StructureConstants::sl2();
        let syms = crate::threepoint::gp_basis_symbols(&g, -4, 4);
        for map in [Puncture::Zero, Puncture::Infinity] {
            for a in &syms {
                for b in &syms {
                    let d = hom_defect(
                        map,
                        &GpElement::symbol(*a),
                        &GpElement::symbol(*b),
                        40,
                        &g,
                    )
                    .unwrap();
                    assert!(d.is_zero(), "{map:?} {a:?} {b:?}: {d}");
                }
            }
        }
    }

    #[test]
    fn defect_reports_common_window() {
        let g = StructureConstants::sl2();
        let x = GpElement::symbol(GpSymbol::bar(H, 0));
        let y = GpElement::symbol(GpSymbol::plain(H, -6));
        let d = hom_defect(Puncture::Infinity, &x, &y, 1, &g).unwrap();
        assert_eq!(d.valid_to(), Some(-5));
        let r = hom_defect(Puncture::Zero, &x, &y, 3, &g);
        assert!(matches!(r, Err(Error::ResidueOutsideWindow { .. })));
        let d = hom_defect(Puncture::Zero, &x, &y, 8, &g).unwrap();
        assert_eq!(d.valid_to(), Some(4));
        assert!(d.is_zero());
    }
}
