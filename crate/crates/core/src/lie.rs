//! Finite-dimensional Lie algebras given by structure constants and an
//! invariant symmetric bilinear form.
//!
//! Built-ins: `sl2` in the Chevalley basis `x+, x-, h` with `<h,h> = 2`,
//! `<x+,x-> = 1`, and `heisenberg1`, the one-dimensional abelian algebra with
//! `<h,h> = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{accumulate, Scalar};

/// `[e_i, e_j] = sum_k c_k e_k`, stored densely by `(i, j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    dim: usize,
    basis_names: Vec<String>,
    bracket: Vec<Vec<Vec<(usize, Scalar)>>>,
    form: Vec<Vec<Scalar>>,
}

impl StructureConstants {
    /// Build from sparse tables. Entries are taken verbatim: antisymmetry and
    /// symmetry of the form are checked by [`validate_structure`], not imposed.
    pub fn new(
        basis_names: Vec<String>,
        bracket: BTreeMap<(usize, usize), Vec<(usize, Scalar)>>,
        form: BTreeMap<(usize, usize), Scalar>,
    ) -> Result<Self> {
        let dim = basis_names.len();
        if dim == 0 {
            return Err(Error::Algebra("dimension must be positive".into()));
        }
        let check = |i: usize| {
            if i >= dim {
                Err(Error::IndexOutOfRange { index: i, dim })
            } else {
                Ok(())
            }
        };
        let mut dense = vec![vec![Vec::new(); dim]; dim];
        for ((i, j), terms) in bracket {
            check(i)?;
            check(j)?;
            let mut acc = BTreeMap::new();
            for (k, c) in terms {
                check(k)?;
                accumulate(&mut acc, k, c);
            }
            dense[i][j] = acc.into_iter().collect();
        }
        let mut g = vec![vec![Scalar::zero(); dim]; dim];
        for ((i, j), c) in form {
            check(i)?;
            check(j)?;
            g[i][j] = c;
        }
        Ok(StructureConstants {
            dim,
            basis_names,
            bracket: dense,
            form: g,
        })
    }

    pub fn sl2() -> Self {
        let (xp, xm, h) = (0, 1, 2);
        let s = Scalar::from_int;
        let mut bracket = BTreeMap::new();
        bracket.insert((h, xp), vec![(xp, s(2))]);
        bracket.insert((xp, h), vec![(xp, s(-2))]);
        bracket.insert((h, xm), vec![(xm, s(-2))]);
        bracket.insert((xm, h), vec![(xm, s(2))]);
        bracket.insert((xp, xm), vec![(h, s(1))]);
        bracket.insert((xm, xp), vec![(h, s(-1))]);
        let mut form = BTreeMap::new();
        form.insert((h, h), s(2));
        form.insert((xp, xm), s(1));
        form.insert((xm, xp), s(1));
        Self::new(
            vec!["x+".into(), "x-".into(), "h".into()],
            bracket,
            form,
        )
        .expect("built-in sl2 is well formed")
    }

    pub fn heisenberg1() -> Self {
        let mut form = BTreeMap::new();
        form.insert((0, 0), Scalar::one());
        Self::new(vec!["h".into()], BTreeMap::new(), form).expect("built-in heisenberg1")
    }

    /// `sl2`, `heisenberg1`, or a path to an algebra file.
    pub fn from_source(source: &str) -> Result<Self> {
        match source {
            "sl2" => Ok(Self::sl2()),
            "heisenberg1" => Ok(Self::heisenberg1()),
            path => Self::from_path(path),
        }
    }

    pub fn from_path<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref()).map_err(|e| {
            Error::Algebra(format!("cannot read {}: {e}", path.as_ref().display()))
        })?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: AlgebraFile =
            serde_json::from_str(text).map_err(|e| Error::Algebra(e.to_string()))?;
        file.into_structure()
    }

    pub fn to_file(&self) -> AlgebraFile {
        let mut bracket = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !self.bracket[i][j].is_empty() {
                    bracket.push(BracketEntry {
                        i,
                        j,
                        terms: self.bracket[i][j]
                            .iter()
                            .map(|(k, c)| TermEntry { k: *k, coeff: c.clone() })
                            .collect(),
                    });
                }
            }
        }
        let mut form = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !self.form[i][j].is_zero() {
                    form.push(FormEntry {
                        i,
                        j,
                        coeff: self.form[i][j].clone(),
                    });
                }
            }
        }
        AlgebraFile {
            dim: self.dim,
            basis: self.basis_names.clone(),
            bracket,
            form,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis_names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis_names.iter().position(|n| n == name)
    }

    /// `[e_i, e_j]` as sparse `(k, c)` pairs. Indices must be in range.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.bracket[i][j]
    }

    pub fn form_basis(&self, i: usize, j: usize) -> &Scalar {
        &self.form[i][j]
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.dim {
            Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim,
            })
        } else {
            Ok(())
        }
    }

    /// Sets `c^k_{ij}` (used by tests that perturb a valid table).
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let mut acc: BTreeMap<usize, Scalar> = self.bracket[i][j].iter().cloned().collect();
        acc.remove(&k);
        accumulate(&mut acc, k, c);
        self.bracket[i][j] = acc.into_iter().collect();
    }

    pub fn set_form(&mut self, i: usize, j: usize, c: Scalar) {
        self.form[i][j] = c;
    }
}

/// On-disk algebra description (JSON). Indices are 0-based; entries are taken
/// verbatim, so an antisymmetric table must list both `(i, j)` and `(j, i)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub bracket: Vec<BracketEntry>,
    #[serde(default)]
    pub form: Vec<FormEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub k: usize,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormEntry {
    pub i: usize,
    pub j: usize,
    pub coeff: Scalar,
}

impl AlgebraFile {
    pub fn into_structure(self) -> Result<StructureConstants> {
        if self.basis.len() != self.dim {
            return Err(Error::Algebra(format!(
                "dim = {} but {} basis names given",
                self.dim,
                self.basis.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &self.basis {
            if !seen.insert(name) {
                return Err(Error::Algebra(format!("duplicate basis name {name:?}")));
            }
        }
        let mut bracket = BTreeMap::new();
        for entry in self.bracket {
            let terms = entry.terms.into_iter().map(|t| (t.k, t.coeff)).collect();
            if bracket.insert((entry.i, entry.j), terms).is_some() {
                return Err(Error::Algebra(format!(
                    "duplicate bracket entry ({}, {})",
                    entry.i, entry.j
                )));
            }
        }
        let mut form = BTreeMap::new();
        for entry in self.form {
            if form.insert((entry.i, entry.j), entry.coeff).is_some() {
                return Err(Error::Algebra(format!(
                    "duplicate form entry ({}, {})",
                    entry.i, entry.j
                )));
            }
        }
        StructureConstants::new(self.basis, bracket, form)
    }
}

/// Element of the finite-dimensional algebra.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FdElement {
    coords: BTreeMap<usize, Scalar>,
}

impl FdElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::from_coords([(i, Scalar::one())])
    }

    pub fn from_coords<I: IntoIterator<Item = (usize, Scalar)>>(coords: I) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in coords {
            accumulate(&mut map, i, c);
        }
        FdElement { coords: map }
    }

    pub fn coords(&self) -> &BTreeMap<usize, Scalar> {
        &self.coords
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coords.get(&i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add(&self, other: &FdElement) -> FdElement {
        Self::from_coords(
            self.coords
                .iter()
                .chain(other.coords.iter())
                .map(|(i, c)| (*i, c.clone())),
        )
    }

    pub fn scale(&self, c: &Scalar) -> FdElement {
        Self::from_coords(self.coords.iter().map(|(i, v)| (*i, v * c)))
    }

    pub fn display(&self, alg: &StructureConstants) -> String {
        let mut out = String::new();
        for (i, c) in &self.coords {
            crate::series::push_term(&mut out, c, alg.name(*i));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub fn fd_bracket(x: &FdElement, y: &FdElement, alg: &StructureConstants) -> Result<FdElement> {
    let mut acc = BTreeMap::new();
    for (i, a) in &x.coords {
        alg.check_index(*i)?;
        for (j, b) in &y.coords {
            alg.check_index(*j)?;
            let ab = a * b;
            for (k, c) in alg.bracket_basis(*i, *j) {
                accumulate(&mut acc, *k, &ab * c);
            }
        }
    }
    Ok(FdElement { coords: acc })
}

pub fn form_pair(x: &FdElement, y: &FdElement, alg: &StructureConstants) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (i, a) in &x.coords {
        alg.check_index(*i)?;
        for (j, b) in &y.coords {
            alg.check_index(*j)?;
            let g = alg.form_basis(*i, *j);
            if !g.is_zero() {
                acc += a * b * g;
            }
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Antisymmetry { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
    Invariance { i: usize, j: usize, k: usize },
    FormAsymmetry { i: usize, j: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { i, j } => write!(f, "antisymmetry fails at ({i},{j})"),
            Violation::Jacobi { i, j, k } => write!(f, "Jacobi fails at ({i},{j},{k})"),
            Violation::Invariance { i, j, k } => {
                write!(f, "form invariance fails at ({i},{j},{k})")
            }
            Violation::FormAsymmetry { i, j } => write!(f, "form not symmetric at ({i},{j})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub form_determinant: Scalar,
    pub nondegenerate: bool,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_structure(alg: &StructureConstants) -> ValidationReport {
    let n = alg.dim();
    let mut violations = Vec::new();
    let e = FdElement::basis;
    let br = |x: &FdElement, y: &FdElement| fd_bracket(x, y, alg).expect("indices in range");
    let pair = |x: &FdElement, y: &FdElement| form_pair(x, y, alg).expect("indices in range");

    for i in 0..n {
        for j in i..n {
            let ij = br(&e(i), &e(j));
            let ji = br(&e(j), &e(i));
            if !ij.add(&ji).is_zero() {
                violations.push(Violation::Antisymmetry { i, j });
            }
            if alg.form_basis(i, j) != alg.form_basis(j, i) {
                violations.push(Violation::FormAsymmetry { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let ij = br(&e(i), &e(j));
            for k in 0..n {
                if i <= j && j <= k {
                    let jk = br(&e(j), &e(k));
                    let ki = br(&e(k), &e(i));
                    let sum = br(&e(i), &jk)
                        .add(&br(&e(j), &ki))
                        .add(&br(&e(k), &ij));
                    if !sum.is_zero() {
                        violations.push(Violation::Jacobi { i, j, k });
                    }
                }
                let lhs = pair(&ij, &e(k));
                let rhs = pair(&e(i), &br(&e(j), &e(k)));
                if lhs != rhs {
                    violations.push(Violation::Invariance { i, j, k });
                }
            }
        }
    }
    let gram: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| alg.form_basis(i, j).clone()).collect())
        .collect();
    let det = determinant(gram);
    ValidationReport {
        nondegenerate: !det.is_zero(),
        form_determinant: det,
        violations,
    }
}

/// Exact determinant by Gaussian elimination over the rationals.
pub fn determinant(mut m: Vec<Vec<Scalar>>) -> Scalar {
    let n = m.len();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det = det * &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let delta = &factor * &m[col][c];
                m[r][c] -= &delta;
            }
        }
    }
    det
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

    #[test]
    fn sl2_brackets() {
        let g = StructureConstants::sl2();
        let b = |i, j| fd_bracket(&FdElement::basis(i), &FdElement::basis(j), &g).unwrap();
        assert_eq!(b(H, XP), FdElement::from_coords([(XP, s(2))]));
        assert_eq!(b(XP, XM), FdElement::basis(H));
        assert!(b(H, H).is_zero());
    }

    #[test]
    fn sl2_form() {
        let g = StructureConstants::sl2();
        let f = |i, j| form_pair(&FdElement::basis(i), &FdElement::basis(j), &g).unwrap();
        assert_eq!(f(H, H), s(2));
        assert_eq!(f(XP, XM), s(1));
        assert_eq!(f(H, XP), s(0));
    }

    #[test]
    fn invariance_forces_x_pairing() {
        // <[h,x+],x-> = <h,[x+,x-]> gives 2<x+,x-> = <h,h>
        let g = StructureConstants::sl2();
        let hx = fd_bracket(&FdElement::basis(H), &FdElement::basis(XP), &g).unwrap();
        let lhs = form_pair(&hx, &FdElement::basis(XM), &g).unwrap();
        let xx = fd_bracket(&FdElement::basis(XP), &FdElement::basis(XM), &g).unwrap();
        let rhs = form_pair(&FdElement::basis(H), &xx, &g).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, s(2));
    }

    #[test]
    fn builtins_validate() {
        let r = validate_structure(&StructureConstants::sl2());
        assert!(r.is_valid(), "{:?}", r.violations);
        assert!(r.nondegenerate);
        assert_eq!(r.form_determinant, s(-2));
        let r = validate_structure(&StructureConstants::heisenberg1());
        assert!(r.is_valid());
        assert_eq!(r.form_determinant, s(1));
    }

    #[test]
    fn broken_antisymmetry_is_reported_once() {
        let mut g = StructureConstants::sl2();
        g.set_structure_constant(XM, H, XM, s(3));
        let r = validate_structure(&g);
        let anti: Vec<_> = r
            .violations
            .iter()
            .filter(|v| matches!(v, Violation::Antisymmetry { .. }))
            .collect();
        assert_eq!(anti, vec![&Violation::Antisymmetry { i: XM, j: H }]);
    }

    #[test]
    fn degenerate_form_is_allowed_but_reported() {
        let mut g = StructureConstants::heisenberg1();
        g.set_form(0, 0, s(0));
        let r = validate_structure(&g);
        assert!(r.is_valid());
        assert!(!r.nondegenerate);
    }

    #[test]
    fn out_of_range() {
        let g = StructureConstants::sl2();
        let err = fd_bracket(&FdElement::basis(5), &FdElement::basis(0), &g).unwrap_err();
        assert_eq!(err, Error::IndexOutOfRange { index: 5, dim: 3 });
    }

    #[test]
    fn file_round_trip_and_strictness() {
        let g = StructureConstants::sl2();
        let text = serde_json::to_string(&g.to_file()).unwrap();
        assert_eq!(StructureConstants::from_json(&text).unwrap(), g);
        let bad = r#"{"dim":1,"basis":["h"],"form":[],"extra":1}"#;
        assert!(StructureConstants::from_json(bad).is_err());
        let mismatch = r#"{"dim":2,"basis":["h"]}"#;
        assert!(StructureConstants::from_json(mismatch).is_err());
        let oob = r#"{"dim":1,"basis":["h"],"bracket":[{"i":0,"j":0,"terms":[{"k":3,"coeff":"1"}]}]}"#;
        assert!(matches!(
            StructureConstants::from_json(oob),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn determinant_small() {
        let m = vec![vec![s(2), s(1)], vec![s(1), s(1)]];
        assert_eq!(determinant(m), s(1));
        let m = vec![vec![s(0), s(1)], vec![s(1), s(0)]];
        assert_eq!(determinant(m), s(-1));
    }
}
