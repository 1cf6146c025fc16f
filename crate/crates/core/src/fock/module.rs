use dashmap::DashMap;

use super::vertex::vertex_on_monomial;
use super::{Direction, FockMonomial, FockVector, ModuleKind, ModuleSpec};
use crate::error::{Error, Result};
use crate::lambda::{lambda_over_4pow, lambda_times_4pow};
use crate::lie::StructureConstants;
use crate::scalar::Scalar;
use crate::threepoint::{gp_bracket_symbols, GpElement, GpSymbol, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum BasicOp {
    Heis(i64),
    Vertex(i64, i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Role {
    XPlus,
    XMinus,
    H,
}

/// A Fock module with a memo of generator actions on monomials. Safe to share
/// across threads.
pub struct FockModule {
    spec: ModuleSpec,
    cache: DashMap<(BasicOp, FockMonomial), FockVector>,
    induced: DashMap<(Kind, Role, i64, FockMonomial), FockVector>,
}

impl FockModule {
    pub fn new(spec: ModuleSpec) -> Self {
        FockModule {
            spec,
            cache: DashMap::new(),
            induced: DashMap::new(),
        }
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
        self.induced.clear();
    }

    fn check_monomial(&self, m: &FockMonomial) -> Result<()> {
        match (self.spec.kind().is_lattice(), m.charge()) {
            (true, None) => Err(Error::KindMismatch(
                "lattice module needs charged monomials".into(),
            )),
            (false, Some(_)) => Err(Error::KindMismatch(
                "heisenberg module has no lattice charge".into(),
            )),
            _ => Ok(()),
        }
    }

    fn heis_on_monomial(&self, n: i64, m: &FockMonomial) -> Result<FockVector> {
        let spec = &self.spec;
        if n == 0 {
            let ev = match m.charge() {
                Some(k) => Scalar::from_int(2 * k),
                None => spec.h_zero_eigenvalue().cloned().ok_or(Error::UnsetZeroMode)?,
            };
            return Ok(FockVector::from_terms([(m.clone(), ev)]));
        }
        let (create, mode, factor) = match (spec.kind(), spec.direction()) {
            (ModuleKind::Heisenberg, Direction::Minus) => {
                (n > 0, n.unsigned_abs(), Scalar::from_int(n) * spec.level())
            }
            (ModuleKind::Heisenberg, Direction::Plus) => {
                (n < 0, n.unsigned_abs(), Scalar::from_int(n) * spec.level())
            }
            _ => (n < 0, n.unsigned_abs(), Scalar::from_int(2 * n)),
        };
        let mode = mode as usize;
        if create {
            return Ok(FockVector::monomial(m.times_y(mode)));
        }
        Ok(match m.d_y(mode) {
            None => FockVector::zero(),
            Some((e, d)) => FockVector::from_terms([(d, factor * Scalar::from_int(e as i64))]),
        })
    }

    fn basic_on_monomial(&self, op: BasicOp, m: &FockMonomial) -> Result<FockVector> {
        let key = (op, m.clone());
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit.clone());
        }
        let out = match op {
            BasicOp::Heis(n) => self.heis_on_monomial(n, m)?,
            BasicOp::Vertex(sigma, n) => {
                vertex_on_monomial(sigma, n, m, self.spec.convention())
            }
        };
        self.cache.insert(key, out.clone());
        Ok(out)
    }

    fn basic(&self, op: BasicOp, v: &FockVector) -> Result<FockVector> {
        let mut out = FockVector::zero();
        for (m, c) in v.terms() {
            self.check_monomial(m)?;
            out.add_assign_scaled(&self.basic_on_monomial(op, m)?, c);
        }
        Ok(out)
    }

    /// `h(n)` on the heisenberg module, `α(n)` on the lattice modules.
    pub fn heis_act(&self, n: i64, v: &FockVector) -> Result<FockVector> {
        self.basic(BasicOp::Heis(n), v)
    }

    /// Mode `X(sign·α)_n` with `sign = ±1`.
    pub fn vertex_mode(&self, sign: i64, n: i64, v: &FockVector) -> Result<FockVector> {
        if !self.spec.kind().is_lattice() {
            return Err(Error::KindMismatch(
                "vertex operators need a lattice module".into(),
            ));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidArgument("vertex sign must be +1 or -1".into()));
        }
        self.basic(BasicOp::Vertex(sign, n), v)
    }

    /// `B` such that every generator mode beyond `B` (above `B` for E+, below
    /// `-B` for E-) kills `v`.
    pub fn vanishing_bound(&self, v: &FockVector) -> i64 {
        v.terms()
            .keys()
            .map(|m| {
                let part = m.max_part() as i64;
                match m.charge() {
                    None => part,
                    Some(k) => part.max(m.weight() as i64 - 1 + 2 * k.abs()).max(0),
                }
            })
            .max()
            .unwrap_or(0)
    }

    fn role(&self, alg: &StructureConstants, base: usize) -> Result<Role> {
        alg.check_index(base)?;
        if !self.spec.kind().is_lattice() {
            if alg.dim() != 1 {
                return Err(Error::KindMismatch(
                    "heisenberg module realizes a 1-dimensional algebra".into(),
                ));
            }
            return Ok(Role::H);
        }
        let idx = |name: &str| alg.index_of(name);
        match (idx("x+"), idx("x-"), idx("h")) {
            (Some(p), Some(q), Some(h)) if alg.dim() == 3 => Ok(if base == p {
                Role::XPlus
            } else if base == q {
                Role::XMinus
            } else {
                debug_assert_eq!(base, h);
                Role::H
            }),
            _ => Err(Error::KindMismatch(
                "lattice modules realize sl2 with basis x+, x-, h".into(),
            )),
        }
    }

    /// Action of the affine generator `a(n)` (basis element `base` of `alg`).
    pub fn affine_act(
        &self,
        alg: &StructureConstants,
        base: usize,
        n: i64,
        v: &FockVector,
    ) -> Result<FockVector> {
        let role = self.role(alg, base)?;
        self.role_act(role, n, v)
    }

    fn role_act(&self, role: Role, n: i64, v: &FockVector) -> Result<FockVector> {
        match (self.spec.kind(), role) {
            (_, Role::H) if self.spec.kind() != ModuleKind::LatticeLowest => self.heis_act(n, v),
            (ModuleKind::LatticeHighest, Role::XPlus) => self.vertex_mode(1, n, v),
            (ModuleKind::LatticeHighest, Role::XMinus) => self.vertex_mode(-1, n, v),
            (ModuleKind::LatticeLowest, Role::XPlus) => self.vertex_mode(-1, -n, v),
            (ModuleKind::LatticeLowest, Role::XMinus) => self.vertex_mode(1, -n, v),
            (ModuleKind::LatticeLowest, Role::H) => {
                Ok(self.heis_act(-n, v)?.scale(&-Scalar::one()))
            }
            _ => unreachable!("roles are resolved per kind"),
        }
    }

    /// Images of `k+` and `k-`.
    pub fn central_character(&self) -> (Scalar, Scalar) {
        let l = self.spec.level().clone();
        match self.spec.direction() {
            Direction::Plus => (Scalar::from_int(2) * l, Scalar::zero()),
            Direction::Minus => (Scalar::zero(), l),
        }
    }

    /// A single symbol on a single monomial; the bar sums stop at the
    /// monomial's own vanishing bound.
    fn symbol_on_monomial(&self, kind: Kind, role: Role, n: i64, m: &FockMonomial) -> Result<FockVector> {
        let key = (kind, role, n, m.clone());
        if let Some(hit) = self.induced.get(&key) {
            return Ok(hit.clone());
        }
        let v = FockVector::monomial(m.clone());
        let bound = self.vanishing_bound(&v);
        let out = match (self.spec.direction(), kind) {
            (Direction::Plus, Kind::Plain) => self.role_act(role, 2 * n, &v)?,
            (Direction::Minus, Kind::Plain) => self.role_act(role, n, &v)?,
            (Direction::Plus, Kind::Bar) => {
                let mut out = FockVector::zero();
                let mut i = 0i64;
                while 2 * n + 2 * i + 1 <= bound {
                    let c = Scalar::from_int(2) * lambda_over_4pow(i);
                    out.add_assign_scaled(&self.role_act(role, 2 * n + 2 * i + 1, &v)?, &c);
                    i += 1;
                }
                out
            }
            (Direction::Minus, Kind::Bar) => {
                let mut out = FockVector::zero();
                let mut i = 0i64;
                while n - i + 1 >= -bound {
                    let c = lambda_times_4pow(i);
                    out.add_assign_scaled(&self.role_act(role, n - i + 1, &v)?, &c);
                    i += 1;
                }
                out
            }
        };
        self.induced.insert(key, out.clone());
        Ok(out)
    }

    /// Action of `x` in `g_p` through the functor matching the module's direction.
    pub fn induce(
        &self,
        x: &GpElement,
        v: &FockVector,
        alg: &StructureConstants,
    ) -> Result<FockVector> {
        let (kp, km) = self.central_character();
        let central = x.c_plus() * &kp + x.c_minus() * &km;
        let mut out = v.scale(&central);
        if x.terms().is_empty() || v.is_zero() {
            return Ok(out);
        }
        for (s, c) in x.terms() {
            let role = self.role(alg, s.base)?;
            for (m, cm) in v.terms() {
                self.check_monomial(m)?;
                let w = self.symbol_on_monomial(s.kind, role, s.degree, m)?;
                out.add_assign_scaled(&w, &(c * cm));
            }
        }
        Ok(out)
    }

    /// `(x y - y x - [x,y]) v` with the central character substituted.
    pub fn relation_defect(
        &self,
        x: GpSymbol,
        y: GpSymbol,
        v: &FockVector,
        alg: &StructureConstants,
    ) -> Result<FockVector> {
        let ex = GpElement::symbol(x);
        let ey = GpElement::symbol(y);
        let xy = self.induce(&ex, &self.induce(&ey, v, alg)?, alg)?;
        let yx = self.induce(&ey, &self.induce(&ex, v, alg)?, alg)?;
        let br = self.induce(&gp_bracket_symbols(x, y, alg), v, alg)?;
        Ok(xy.sub(&yx).sub(&br))
    }
}

pub fn heis_act(n: i64, v: &FockVector, spec: &ModuleSpec) -> Result<FockVector> {
    FockModule::new(spec.clone()).heis_act(n, v)
}

pub fn vertex_mode(sign: i64, n: i64, v: &FockVector, spec: &ModuleSpec) -> Result<FockVector> {
    FockModule::new(spec.clone()).vertex_mode(sign, n, v)
}

pub fn vanishing_bound(v: &FockVector, spec: &ModuleSpec) -> i64 {
    FockModule::new(spec.clone()).vanishing_bound(v)
}

pub fn induce_threepoint_act(
    x: &GpElement,
    v: &FockVector,
    spec: &ModuleSpec,
    alg: &StructureConstants,
) -> Result<FockVector> {
    FockModule::new(spec.clone()).induce(x, v, alg)
}

pub fn relation_defect(
    x: GpSymbol,
    y: GpSymbol,
    v: &FockVector,
    spec: &ModuleSpec,
    alg: &StructureConstants,
) -> Result<FockVector> {
    FockModule::new(spec.clone()).relation_defect(x, y, v, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{spanning_monomials, Convention};

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn mono(parts: &[u32], charge: Option<i64>) -> FockVector {
        FockVector::monomial(FockMonomial::from_parts(parts, charge).unwrap())
    }

    #[test]
    fn lattice_heisenberg_examples() {
        let spec = ModuleSpec::lattice_highest(Convention::Paper);
        let vac = FockVector::vacuum(Some(0));
        let y2 = mono(&[2], Some(0));
        assert_eq!(heis_act(-2, &vac, &spec).unwrap(), y2);
        assert_eq!(heis_act(2, &y2, &spec).unwrap(), vac.scale(&s(4)));
        assert_eq!(
            heis_act(0, &FockVector::vacuum(Some(-2)), &spec).unwrap(),
            FockVector::vacuum(Some(-2)).scale(&s(-4))
        );
    }

    #[test]
    fn heisenberg_half_level_normalization() {
        let spec = ModuleSpec::heisenberg(Scalar::ratio(1, 2), Direction::Plus);
        let m = FockModule::new(spec);
        let vac = FockVector::vacuum(None);
        let a = m.heis_act(1, &m.heis_act(-1, &vac).unwrap()).unwrap();
        let b = m.heis_act(-1, &m.heis_act(1, &vac).unwrap()).unwrap();
        assert_eq!(a.sub(&b), vac.scale(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn unset_zero_mode_errors() {
        let spec = ModuleSpec::heisenberg(s(1), Direction::Plus).with_h_zero(None);
        let r = heis_act(0, &FockVector::vacuum(None), &spec);
        assert_eq!(r, Err(Error::UnsetZeroMode));
    }

    #[test]
    fn vertex_needs_lattice() {
        let spec = ModuleSpec::heisenberg(s(1), Direction::Plus);
        let r = vertex_mode(1, 0, &FockVector::vacuum(None), &spec);
        assert!(matches!(r, Err(Error::KindMismatch(_))));
    }

    #[test]
    fn heisenberg_relations_both_directions() {
        for dir in [Direction::Plus, Direction::Minus] {
            for level in [s(1), Scalar::ratio(1, 2), s(-1), Scalar::ratio(3, 7)] {
                let m = FockModule::new(ModuleSpec::heisenberg(level.clone(), dir));
                for mono in spanning_monomials(ModuleKind::Heisenberg, 4) {
                    let v = FockVector::monomial(mono);
                    for a in -5..=5 {
                        for b in -5..=5 {
                            let x = m.heis_act(a, &m.heis_act(b, &v).unwrap()).unwrap();
                            let y = m.heis_act(b, &m.heis_act(a, &v).unwrap()).unwrap();
                            let expect = if a + b == 0 {
                                v.scale(&(Scalar::from_int(a) * &level))
                            } else {
                                FockVector::zero()
                            };
                            assert_eq!(x.sub(&y), expect, "{dir:?} {level} {a} {b} {v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn vanishing_bound_examples() {
        let heis = ModuleSpec::heisenberg(s(1), Direction::Plus);
        assert_eq!(vanishing_bound(&FockVector::vacuum(None), &heis), 0);
        assert_eq!(vanishing_bound(&mono(&[3, 1], None), &heis), 3);
    }

    #[test]
    fn lattice_bound_is_sharp_enough() {
        for conv in [Convention::Paper, Convention::Standard] {
            let m = FockModule::new(ModuleSpec::lattice_highest(conv));
            for mono in spanning_monomials(ModuleKind::LatticeHighest, 5) {
                let v = FockVector::monomial(mono);
                let b = m.vanishing_bound(&v);
                for n in b + 1..=b + 10 {
                    assert!(m.vertex_mode(1, n, &v).unwrap().is_zero());
                    assert!(m.vertex_mode(-1, n, &v).unwrap().is_zero());
                    assert!(m.heis_act(n, &v).unwrap().is_zero());
                }
            }
        }
    }

    /// Level-1 affine sl2 relations on `V_Q` for a convention.
    fn level_one_failures(conv: Convention, range: i64, degree: u32) -> usize {
        let alg = StructureConstants::sl2();
        let m = FockModule::new(ModuleSpec::lattice_highest(conv));
        let mut failures = 0;
        for mono in spanning_monomials(ModuleKind::LatticeHighest, degree) {
            let v = FockVector::monomial(mono);
            for a in -range..=range {
                for b in -range..=range {
                    let xp = |n, w: &FockVector| m.affine_act(&alg, 0, n, w).unwrap();
                    let xm = |n, w: &FockVector| m.affine_act(&alg, 1, n, w).unwrap();
                    let h = |n, w: &FockVector| m.affine_act(&alg, 2, n, w).unwrap();
                    let lhs = xp(a, &xm(b, &v)).sub(&xm(b, &xp(a, &v)));
                    let mut rhs = h(a + b, &v);
                    if a + b == 0 {
                        rhs = rhs.add(&v.scale(&Scalar::from_int(a)));
                    }
                    if lhs != rhs {
                        failures += 1;
                    }
                    let lhs = h(a, &xp(b, &v)).sub(&xp(b, &h(a, &v)));
                    if lhs != xp(a + b, &v).scale(&s(2)) {
                        failures += 1;
                    }
                }
            }
        }
        failures
    }

    #[test]
    fn standard_convention_satisfies_level_one() {
        assert_eq!(level_one_failures(Convention::Standard, 2, 3), 0);
    }

    #[test]
    fn paper_convention_breaks_level_one() {
        assert!(level_one_failures(Convention::Paper, 2, 3) > 0);
    }

    #[test]
    fn induced_examples() {
        let alg = StructureConstants::sl2();
        let hi = ModuleSpec::lattice_highest(Convention::Standard);
        let v = mono(&[2, 1], Some(1));
        assert_eq!(
            induce_threepoint_act(&GpElement::k_plus(), &v, &hi, &alg).unwrap(),
            v.scale(&s(2))
        );
        let lo = ModuleSpec::lattice_lowest(Convention::Standard);
        assert_eq!(
            induce_threepoint_act(&GpElement::k_minus(), &v, &lo, &alg).unwrap(),
            v.scale(&s(-1))
        );
        let h1 = StructureConstants::heisenberg1();
        let half = ModuleSpec::heisenberg(Scalar::ratio(1, 2), Direction::Plus);
        let x = GpElement::symbol(GpSymbol::bar(0, -1));
        assert_eq!(
            induce_threepoint_act(&x, &FockVector::vacuum(None), &half, &h1).unwrap(),
            mono(&[1], None).scale(&s(2))
        );
    }

    #[test]
    fn relation_defect_examples() {
        let alg = StructureConstants::sl2();
        let hi = FockModule::new(ModuleSpec::lattice_highest(Convention::Standard));
        let vac = FockVector::vacuum(Some(0));
        let d = hi
            .relation_defect(GpSymbol::plain(2, 1), GpSymbol::plain(2, -1), &vac, &alg)
            .unwrap();
        assert!(d.is_zero());
        let h1 = StructureConstants::heisenberg1();
        for level in [s(1), Scalar::ratio(1, 2)] {
            let m = FockModule::new(ModuleSpec::heisenberg(level.clone(), Direction::Minus));
            let vac = FockVector::vacuum(None);
            let d = m
                .relation_defect(GpSymbol::plain(0, 2), GpSymbol::bar(0, -3), &vac, &h1)
                .unwrap();
            assert!(d.is_zero());
            let br = gp_bracket_symbols(GpSymbol::plain(0, 2), GpSymbol::bar(0, -3), &h1);
            assert_eq!(m.induce(&br, &vac, &h1).unwrap(), vac.scale(&(s(2) * &level)));
        }
    }

    #[test]
    fn three_point_relations_small_grid() {
        let alg = StructureConstants::sl2();
        for spec in [
            ModuleSpec::lattice_highest(Convention::Standard),
            ModuleSpec::lattice_lowest(Convention::Standard),
        ] {
            let m = FockModule::new(spec);
            let syms = crate::threepoint::gp_basis_symbols(&alg, -1, 1);
            for mono in spanning_monomials(ModuleKind::LatticeHighest, 2) {
                let v = FockVector::monomial(mono);
                for x in &syms {
                    for y in &syms {
                        let d = m.relation_defect(*x, *y, &v, &alg).unwrap();
                        assert!(d.is_zero(), "{x:?} {y:?} {v}: {d}");
                    }
                }
            }
        }
    }
}
