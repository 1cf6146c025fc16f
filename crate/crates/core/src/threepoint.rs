//! Bracket engines for the three-point current algebra `g_p` and the
//! three-point Witt algebra `W_p`.
//!
//! `g_p` has basis `a(n) = a ⊗ t^n`, `a1(n) = a^1 ⊗ t^n` for `a` in a basis of
//! `g`, plus two central elements `k+`, `k-`. `W_p` has basis `d_n`, `e_n`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lambda::lambda_times_4pow;
use crate::lie::StructureConstants;
use crate::scalar::{accumulate, Scalar};
use crate::series::push_term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Plain,
    Bar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GpSymbol {
    pub kind: Kind,
    pub base: usize,
    pub degree: i64,
}

impl GpSymbol {
    pub fn plain(base: usize, degree: i64) -> Self {
        GpSymbol {
            kind: Kind::Plain,
            base,
            degree,
        }
    }

    pub fn bar(base: usize, degree: i64) -> Self {
        GpSymbol {
            kind: Kind::Bar,
            base,
            degree,
        }
    }

    pub fn display(&self, alg: &StructureConstants) -> String {
        let tag = match self.kind {
            Kind::Plain => "a",
            Kind::Bar => "a1",
        };
        format!("{tag}[{}]({})", alg.name(self.base), self.degree)
    }
}

/// Finite linear combination of `g_p` basis symbols plus central coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GpElement {
    #[serde(with = "crate::serde_util::pairs")]
    terms: BTreeMap<GpSymbol, Scalar>,
    c_plus: Scalar,
    c_minus: Scalar,
}

impl GpElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: GpSymbol) -> Self {
        Self::from_terms([(s, Scalar::one())], Scalar::zero(), Scalar::zero())
    }

    pub fn k_plus() -> Self {
        Self::from_terms([], Scalar::one(), Scalar::zero())
    }

    pub fn k_minus() -> Self {
        Self::from_terms([], Scalar::zero(), Scalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (GpSymbol, Scalar)>>(
        terms: I,
        c_plus: Scalar,
        c_minus: Scalar,
    ) -> Self {
        let mut map = BTreeMap::new();
        for (s, c) in terms {
            accumulate(&mut map, s, c);
        }
        GpElement {
            terms: map,
            c_plus,
            c_minus,
        }
    }

    pub fn terms(&self) -> &BTreeMap<GpSymbol, Scalar> {
        &self.terms
    }

    pub fn c_plus(&self) -> &Scalar {
        &self.c_plus
    }

    pub fn c_minus(&self) -> &Scalar {
        &self.c_minus
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c_plus.is_zero() && self.c_minus.is_zero()
    }

    pub fn is_central(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, s: &GpSymbol) -> Scalar {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &Scalar) -> GpElement {
        GpElement::from_terms(
            self.terms.iter().map(|(s, v)| (*s, v * c)),
            &self.c_plus * c,
            &self.c_minus * c,
        )
    }

    fn add_symbol(&mut self, s: GpSymbol, c: Scalar) {
        accumulate(&mut self.terms, s, c);
    }

    /// Non-central part only.
    pub fn without_centrals(&self) -> GpElement {
        GpElement::from_terms(
            self.terms.iter().map(|(s, c)| (*s, c.clone())),
            Scalar::zero(),
            Scalar::zero(),
        )
    }

    pub fn display(&self, alg: &StructureConstants) -> String {
        let mut out = String::new();
        for (s, c) in &self.terms {
            push_term(&mut out, c, &s.display(alg));
        }
        if !self.c_plus.is_zero() {
            push_term(&mut out, &self.c_plus, "k+");
        }
        if !self.c_minus.is_zero() {
            push_term(&mut out, &self.c_minus, "k-");
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl Add for &GpElement {
    type Output = GpElement;
    fn add(self, rhs: &GpElement) -> GpElement {
        let mut out = self.clone();
        for (s, c) in &rhs.terms {
            out.add_symbol(*s, c.clone());
        }
        out.c_plus += &rhs.c_plus;
        out.c_minus += &rhs.c_minus;
        out
    }
}

impl Sub for &GpElement {
    type Output = GpElement;
    fn sub(self, rhs: &GpElement) -> GpElement {
        self + &(-rhs)
    }
}

impl Neg for &GpElement {
    type Output = GpElement;
    fn neg(self) -> GpElement {
        self.scale(&-Scalar::one())
    }
}

fn delta(a: i64, b: i64) -> bool {
    a == b
}

/// Bracket of two basis symbols of `g_p`.
pub fn gp_bracket_symbols(x: GpSymbol, y: GpSymbol, alg: &StructureConstants) -> GpElement {
    let (i, j, m, n) = (x.base, y.base, x.degree, y.degree);
    let mut out = GpElement::zero();
    let form = alg.form_basis(i, j);
    match (x.kind, y.kind) {
        (Kind::Plain, Kind::Plain) => {
            // [a(m), b(n)] = [a,b](m+n) + m <a,b> δ_{m+n,0} (k+ + k-)
            for (k, c) in alg.bracket_basis(i, j) {
                out.add_symbol(GpSymbol::plain(*k, m + n), c.clone());
            }
            if delta(m + n, 0) && !form.is_zero() {
                let c = Scalar::from_int(m) * form;
                out.c_plus = c.clone();
                out.c_minus = c;
            }
        }
        (Kind::Plain, Kind::Bar) => {
            // [a(m), b1(n)] = [a,b]1(m+n) + m <a,b> λ_{m+n+1} 4^{m+n+1} k-
            for (k, c) in alg.bracket_basis(i, j) {
                out.add_symbol(GpSymbol::bar(*k, m + n), c.clone());
            }
            if !form.is_zero() {
                out.c_minus = Scalar::from_int(m) * form * lambda_times_4pow(m + n + 1);
            }
        }
        (Kind::Bar, Kind::Plain) => {
            // fixed by antisymmetry from the plain-bar family
            out = -&gp_bracket_symbols(y, x, alg);
        }
        (Kind::Bar, Kind::Bar) => {
            // [a1(m), b1(n)] = 4[a,b](m+n+1) + [a,b](m+n+2)
            //   + ((4m+2) δ_{m+n+1,0} + (m+1) δ_{m+n+2,0}) <a,b> (k+ + k-)
            for (k, c) in alg.bracket_basis(i, j) {
                out.add_symbol(GpSymbol::plain(*k, m + n + 1), c * Scalar::from_int(4));
                out.add_symbol(GpSymbol::plain(*k, m + n + 2), c.clone());
            }
            let mut central = 0;
            if delta(m + n + 1, 0) {
                central += 4 * m + 2;
            }
            if delta(m + n + 2, 0) {
                central += m + 1;
            }
            if central != 0 && !form.is_zero() {
                let c = Scalar::from_int(central) * form;
                out.c_plus = c.clone();
                out.c_minus = c;
            }
        }
    }
    out
}

/// Bilinear extension of [`gp_bracket_symbols`]; central coordinates bracket to zero.
pub fn gp_bracket(x: &GpElement, y: &GpElement, alg: &StructureConstants) -> GpElement {
    let mut out = GpElement::zero();
    for (sx, cx) in &x.terms {
        for (sy, cy) in &y.terms {
            let b = gp_bracket_symbols(*sx, *sy, alg);
            out = &out + &b.scale(&(cx * cy));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WittFamily {
    D,
    E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WittSymbol {
    pub family: WittFamily,
    pub degree: i64,
}

impl WittSymbol {
    pub fn d(degree: i64) -> Self {
        WittSymbol {
            family: WittFamily::D,
            degree,
        }
    }

    pub fn e(degree: i64) -> Self {
        WittSymbol {
            family: WittFamily::E,
            degree,
        }
    }
}

impl fmt::Display for WittSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            WittFamily::D => write!(f, "d({})", self.degree),
            WittFamily::E => write!(f, "e({})", self.degree),
        }
    }
}

/// Linear combination of `d_n`, `e_n` with a coordinate `c` on the central
/// element of `L_p` (zero for elements of `W_p`).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WittElement {
    #[serde(with = "crate::serde_util::pairs")]
    terms: BTreeMap<WittSymbol, Scalar>,
    c: Scalar,
}

impl WittElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn symbol(s: WittSymbol) -> Self {
        Self::from_terms([(s, Scalar::one())], Scalar::zero())
    }

    pub fn from_terms<I: IntoIterator<Item = (WittSymbol, Scalar)>>(terms: I, c: Scalar) -> Self {
        let mut map = BTreeMap::new();
        for (s, v) in terms {
            accumulate(&mut map, s, v);
        }
        WittElement { terms: map, c }
    }

    pub fn terms(&self) -> &BTreeMap<WittSymbol, Scalar> {
        &self.terms
    }

    pub fn central(&self) -> &Scalar {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.c.is_zero()
    }

    pub fn scale(&self, k: &Scalar) -> WittElement {
        WittElement::from_terms(self.terms.iter().map(|(s, v)| (*s, v * k)), &self.c * k)
    }

    pub fn without_central(&self) -> WittElement {
        WittElement::from_terms(self.terms.iter().map(|(s, v)| (*s, v.clone())), Scalar::zero())
    }
}

impl Add for &WittElement {
    type Output = WittElement;
    fn add(self, rhs: &WittElement) -> WittElement {
        WittElement::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(s, v)| (*s, v.clone())),
            &self.c + &rhs.c,
        )
    }
}

impl Sub for &WittElement {
    type Output = WittElement;
    fn sub(self, rhs: &WittElement) -> WittElement {
        self + &rhs.scale(&-Scalar::one())
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (s, v) in &self.terms {
            push_term(&mut out, v, &s.to_string());
        }
        if !self.c.is_zero() {
            push_term(&mut out, &self.c, "c");
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

pub fn witt_bracket_symbols(x: WittSymbol, y: WittSymbol) -> WittElement {
    let (m, n) = (x.degree, y.degree);
    let s = Scalar::from_int;
    match (x.family, y.family) {
        (WittFamily::D, WittFamily::D) => WittElement::from_terms(
            [
                (WittSymbol::d(m + n + 1), s(4 * (m - n))),
                (WittSymbol::d(m + n + 2), s(m - n)),
            ],
            Scalar::zero(),
        ),
        (WittFamily::D, WittFamily::E) => WittElement::from_terms(
            [
                (WittSymbol::e(m + n + 1), s(4 * m - 4 * n + 2)),
                (WittSymbol::e(m + n + 2), s(m - n + 1)),
            ],
            Scalar::zero(),
        ),
        (WittFamily::E, WittFamily::D) => witt_bracket_symbols(y, x).scale(&s(-1)),
        (WittFamily::E, WittFamily::E) => {
            WittElement::from_terms([(WittSymbol::d(m + n), s(m - n))], Scalar::zero())
        }
    }
}

/// Bracket on `W_p`. Elements carrying a central coordinate are rejected: the
/// central extension is only available through mode brackets.
pub fn witt_bracket(x: &WittElement, y: &WittElement) -> Result<WittElement> {
    if !x.c.is_zero() || !y.c.is_zero() {
        return Err(Error::CentralInWitt);
    }
    let mut out = WittElement::zero();
    for (sx, cx) in &x.terms {
        for (sy, cy) in &y.terms {
            out = &out + &witt_bracket_symbols(*sx, *sy).scale(&(cx * cy));
        }
    }
    Ok(out)
}

/// `[x,[y,z]] + [y,[z,x]] + [z,[x,y]]` for any bracket.
pub fn jacobi_defect<E, F>(x: &E, y: &E, z: &E, bracket: F) -> Result<E>
where
    F: Fn(&E, &E) -> Result<E>,
    for<'a> &'a E: Add<&'a E, Output = E>,
{
    let a = bracket(x, &bracket(y, z)?)?;
    let b = bracket(y, &bracket(z, x)?)?;
    let c = bracket(z, &bracket(x, y)?)?;
    Ok(&(&a + &b) + &c)
}

pub fn gp_jacobi_defect(
    x: &GpElement,
    y: &GpElement,
    z: &GpElement,
    alg: &StructureConstants,
) -> GpElement {
    jacobi_defect(x, y, z, |a, b| Ok(gp_bracket(a, b, alg))).expect("g_p bracket is total")
}

pub fn witt_jacobi_defect(x: &WittElement, y: &WittElement, z: &WittElement) -> Result<WittElement> {
    jacobi_defect(x, y, z, witt_bracket)
}

/// All `g_p` basis symbols over `alg` with degrees in `range`.
pub fn gp_basis_symbols(alg: &StructureConstants, lo: i64, hi: i64) -> Vec<GpSymbol> {
    let mut out = Vec::new();
    for kind in [Kind::Plain, Kind::Bar] {
        for base in 0..alg.dim() {
            for degree in lo..=hi {
                out.push(GpSymbol { kind, base, degree });
            }
        }
    }
    out
}

pub fn witt_basis_symbols(lo: i64, hi: i64) -> Vec<WittSymbol> {
    (lo..=hi)
        .flat_map(|n| [WittSymbol::d(n), WittSymbol::e(n)])
        .collect()
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

    fn sym(x: GpSymbol) -> GpElement {
        GpElement::symbol(x)
    }

    #[test]
    fn plain_central_term() {
        let g = StructureConstants::sl2();
        let b = gp_bracket(&sym(GpSymbol::plain(H, 1)), &sym(GpSymbol::plain(H, -1)), &g);
        assert_eq!(b, GpElement::from_terms([], s(2), s(2)));
    }

    #[test]
    fn plain_bar_lambda_term() {
        let g = StructureConstants::sl2();
        let b = gp_bracket(&sym(GpSymbol::plain(H, 2)), &sym(GpSymbol::bar(H, -3)), &g);
        assert_eq!(b, GpElement::k_minus().scale(&s(4)));
        assert_eq!(b.display(&g), "4*k-");
    }

    #[test]
    fn bar_bar_examples() {
        let g = StructureConstants::sl2();
        let b = gp_bracket(&sym(GpSymbol::bar(H, 0)), &sym(GpSymbol::bar(H, -1)), &g);
        assert_eq!(b, GpElement::from_terms([], s(4), s(4)));
        let b = gp_bracket(&sym(GpSymbol::bar(XP, 0)), &sym(GpSymbol::bar(XM, 0)), &g);
        let expected = GpElement::from_terms(
            [(GpSymbol::plain(H, 1), s(4)), (GpSymbol::plain(H, 2), s(1))],
            s(0),
            s(0),
        );
        assert_eq!(b, expected);
        assert_eq!(b.display(&g), "4*a[h](1) + a[h](2)");
    }

    #[test]
    fn bar_plain_is_antisymmetric() {
        let g = StructureConstants::sl2();
        for m in -3..=3 {
            for n in -3..=3 {
                let a = gp_bracket_symbols(GpSymbol::bar(H, m), GpSymbol::plain(H, n), &g);
                let b = gp_bracket_symbols(GpSymbol::plain(H, n), GpSymbol::bar(H, m), &g);
                assert!((&a + &b).is_zero());
            }
        }
    }

    #[test]
    fn witt_examples() {
        let d = |n| WittElement::symbol(WittSymbol::d(n));
        let e = |n| WittElement::symbol(WittSymbol::e(n));
        let b = witt_bracket(&d(0), &d(1)).unwrap();
        assert_eq!(b.to_string(), "-4*d(2) - d(3)");
        assert_eq!(witt_bracket(&e(1), &e(-1)).unwrap().to_string(), "2*d(0)");
        assert_eq!(witt_bracket(&d(0), &e(0)).unwrap().to_string(), "2*e(1) + e(2)");
        let with_c = WittElement::from_terms([], s(1));
        assert_eq!(witt_bracket(&with_c, &d(0)), Err(Error::CentralInWitt));
    }

    #[test]
    fn jacobi_examples() {
        let g = StructureConstants::sl2();
        let j = gp_jacobi_defect(
            &sym(GpSymbol::plain(H, 1)),
            &sym(GpSymbol::plain(H, -1)),
            &sym(GpSymbol::plain(H, 0)),
            &g,
        );
        assert!(j.is_zero());
        let j = gp_jacobi_defect(
            &sym(GpSymbol::plain(XP, 2)),
            &sym(GpSymbol::bar(XM, -1)),
            &sym(GpSymbol::bar(H, 0)),
            &g,
        );
        assert!(j.is_zero());
        let d = |n| WittElement::symbol(WittSymbol::d(n));
        let e = |n| WittElement::symbol(WittSymbol::e(n));
        assert!(witt_jacobi_defect(&d(1), &d(0), &e(-2)).unwrap().is_zero());
    }

    #[test]
    fn central_elements_are_central() {
        let g = StructureConstants::sl2();
        let x = sym(GpSymbol::bar(XP, 3));
        assert!(gp_bracket(&x, &GpElement::k_plus(), &g).is_zero());
        assert!(gp_bracket(&GpElement::k_minus(), &x, &g).is_zero());
    }

    #[test]
    fn loop_specialization() {
        // the non-central plain-plain part is the loop bracket [a,b] ⊗ t^{m+n}
        let g = StructureConstants::sl2();
        for (i, j) in [(XP, XM), (H, XP), (H, XM), (XM, H)] {
            for m in -3..=3 {
                for n in -3..=3 {
                    let b = gp_bracket_symbols(GpSymbol::plain(i, m), GpSymbol::plain(j, n), &g);
                    let expected = GpElement::from_terms(
                        g.bracket_basis(i, j)
                            .iter()
                            .map(|(k, c)| (GpSymbol::plain(*k, m + n), c.clone())),
                        s(0),
                        s(0),
                    );
                    assert_eq!(b.without_centrals(), expected);
                }
            }
        }
    }
}
