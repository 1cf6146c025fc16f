//! Modes of the lattice vertex operators `X(±α, z)` on `V_Q`.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use super::{exps_mul, Convention, Exps, FockMonomial, FockVector};
use crate::scalar::{accumulate, binomial, Scalar};

type Poly = BTreeMap<Exps, Scalar>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            accumulate(&mut out, exps_mul(ea, eb), ca * cb);
        }
    }
    out
}

/// Coefficients `S_j` of `exp(s Σ_{n>=1} y_n z^n / n)`, grown on demand with
/// `j S_j = s Σ_{n=1}^j y_n S_{j-n}`.
struct CreationTable {
    sign: i64,
    rows: RwLock<Vec<Poly>>,
}

impl CreationTable {
    fn new(sign: i64) -> Self {
        let mut one = Poly::new();
        one.insert(Vec::new(), Scalar::one());
        CreationTable {
            sign,
            rows: RwLock::new(vec![one]),
        }
    }

    fn get(&self, j: usize) -> Poly {
        if let Some(p) = self.rows.read().expect("creation table lock").get(j) {
            return p.clone();
        }
        let mut rows = self.rows.write().expect("creation table lock");
        while rows.len() <= j {
            let k = rows.len();
            let mut next = Poly::new();
            for n in 1..=k {
                let mut y = vec![0u32; n];
                y[n - 1] = 1;
                for (e, c) in &rows[k - n] {
                    accumulate(&mut next, exps_mul(e, &y), c.clone());
                }
            }
            let f = Scalar::ratio(self.sign, k as i64);
            for c in next.values_mut() {
                *c = &*c * &f;
            }
            rows.push(next);
        }
        rows[j].clone()
    }
}

fn creation(sign: i64, j: usize) -> Poly {
    static PLUS: OnceLock<CreationTable> = OnceLock::new();
    static MINUS: OnceLock<CreationTable> = OnceLock::new();
    let table = if sign > 0 {
        PLUS.get_or_init(|| CreationTable::new(1))
    } else {
        MINUS.get_or_init(|| CreationTable::new(-1))
    };
    table.get(j)
}

/// `f(y_m + c z^{-m})` as a list of polynomials indexed by the power of `z^{-1}`.
fn taylor_shift(exps: &[u32], c: i64) -> Vec<Poly> {
    let mut acc: Vec<Poly> = vec![BTreeMap::from([(Vec::new(), Scalar::one())])];
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let m = i + 1;
        let mut next: Vec<Poly> = vec![Poly::new(); acc.len() + m * e as usize];
        for r in 0..=e {
            let coeff = binomial(e, r) * Scalar::from_int(c).pow(r as i32);
            let mut y = vec![0u32; m];
            y[m - 1] = e - r;
            let factor = Poly::from([(super::trim(y), coeff)]);
            let shift = m * r as usize;
            for (l, p) in acc.iter().enumerate() {
                for (ep, cp) in poly_mul(p, &factor) {
                    accumulate(&mut next[l + shift], ep, cp);
                }
            }
        }
        acc = next;
    }
    acc
}

/// `X(σα)_n (f ⊗ e_k)`: the coefficient of `z^{-n}` in
/// `E^-(z) E^+(z) e_{σα} z^{2σk+1} (f ⊗ e_k)`.
pub(super) fn vertex_on_monomial(
    sigma: i64,
    n: i64,
    mono: &FockMonomial,
    convention: Convention,
) -> FockVector {
    let k = mono.charge().expect("lattice monomial carries a charge");
    let (s, c) = match convention {
        Convention::Paper => (-sigma, -2),
        Convention::Standard => (sigma, -2 * sigma),
    };
    let mut out = FockVector::zero();
    let shifted = taylor_shift(mono.exps(), c);
    for (l, a_l) in shifted.iter().enumerate() {
        let j = l as i64 - n - 1 - 2 * sigma * k;
        if j < 0 || a_l.is_empty() {
            continue;
        }
        let s_j = creation(s, j as usize);
        for (e, coeff) in poly_mul(&s_j, a_l) {
            out.push(FockMonomial::from_exps(e, Some(k + sigma)), coeff);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn creation_coefficients() {
        // exp(y1 z + y2 z^2/2) up to z^2: 1 + y1 z + (y1^2/2 + y2/2) z^2
        let s2 = creation(1, 2);
        assert_eq!(s2.get(&vec![2]), Some(&Scalar::ratio(1, 2)));
        assert_eq!(s2.get(&vec![0, 1]), Some(&Scalar::ratio(1, 2)));
        let m1 = creation(-1, 1);
        assert_eq!(m1.get(&vec![1]), Some(&s(-1)));
    }

    #[test]
    fn taylor_shift_of_square() {
        // (y1 + c z^-1)^2 with c = -2
        let t = taylor_shift(&[2], -2);
        assert_eq!(t.len(), 3);
        assert_eq!(t[0].get(&vec![2]), Some(&s(1)));
        assert_eq!(t[1].get(&vec![1]), Some(&s(-4)));
        assert_eq!(t[2].get(&Vec::new()), Some(&s(4)));
    }

    #[test]
    fn vacuum_modes() {
        let vac = FockMonomial::vacuum(Some(0));
        let e1 = FockVector::vacuum(Some(1));
        assert_eq!(vertex_on_monomial(1, -1, &vac, Convention::Paper), e1);
        assert!(vertex_on_monomial(1, 0, &vac, Convention::Paper).is_zero());
        let y1 = FockVector::monomial(FockMonomial::from_parts(&[1], Some(1)).unwrap());
        assert_eq!(
            vertex_on_monomial(1, -2, &vac, Convention::Paper),
            y1.scale(&s(-1))
        );
        assert_eq!(vertex_on_monomial(1, -2, &vac, Convention::Standard), y1);
    }
}
