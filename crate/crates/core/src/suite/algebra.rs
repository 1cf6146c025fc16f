use serde_json::{json, Value};

use crate::lambda::{lambda_coeff, LambdaTable};
use crate::lie::{validate_structure, StructureConstants};
use crate::loops::{hom_defect, loop_bracket, rho};
use crate::report::CheckRecord;
use crate::series::sqrt_p_expansion;
use crate::threepoint::{
    gp_basis_symbols, gp_bracket, gp_bracket_symbols, gp_jacobi_defect, witt_basis_symbols,
    witt_bracket_symbols, witt_jacobi_defect, GpElement, GpSymbol, Kind, WittElement,
};
use crate::virasoro::{definition_bracket, Family};
use crate::{Puncture, Scalar, TruncSeries};

use super::{grid, IntRange};

fn lambda_product(n: i64) -> Scalar {
    let half = Scalar::ratio(1, 2);
    let mut num = Scalar::one();
    for k in 0..n {
        num = num * (&half - Scalar::from_int(k));
    }
    num * crate::scalar::factorial(n as u32).recip().expect("nonzero")
}

/// λ table and √p expansions up to `order`.
pub fn kernel_suite(order: usize) -> Vec<CheckRecord> {
    let order = order.max(1);
    let orders: Vec<usize> = (1..=order).collect();
    let params = json!({ "order": order });
    let mut out = Vec::new();

    out.push(grid(
        "kernel.lambda-square",
        params.clone(),
        &orders,
        |n| format!("N={n}"),
        |&n| {
            let n = n as i64;
            let s = TruncSeries::truncated(Puncture::Zero, (0..=n).map(|i| (i, lambda_coeff(i))), n);
            let sq = s.mul(&s)?;
            let target = TruncSeries::exact(Puncture::Zero, [(0, Scalar::one()), (1, Scalar::one())]);
            let d = sq.sub(&target)?;
            Ok((!d.is_zero()).then(|| json!(d.format_with("x"))))
        },
    ));

    let table = LambdaTable::new();
    let upto: Vec<i64> = (0..=200).collect();
    out.push(grid(
        "kernel.lambda-recurrence",
        json!({ "max_n": 200 }),
        &upto,
        |n| format!("n={n}"),
        |&n| {
            let a = table.get(n);
            let b = lambda_product(n);
            Ok((a != b).then(|| json!({ "recurrence": a.to_string(), "product": b.to_string() })))
        },
    ));

    for dir in [Puncture::Zero, Puncture::Infinity] {
        // at zero the expansion is in s = t^{1/2}
        let p = match dir {
            Puncture::Zero => TruncSeries::exact(dir, [(4, Scalar::one()), (2, Scalar::from_int(4))]),
            Puncture::Infinity => {
                TruncSeries::exact(dir, [(2, Scalar::one()), (1, Scalar::from_int(4))])
            }
        };
        out.push(grid(
            "kernel.sqrt-p-square",
            json!({ "direction": dir, "order": order }),
            &orders,
            |n| format!("N={n}"),
            |&n| {
                let s = sqrt_p_expansion(dir, n)?;
                let d = s.mul(&s)?.sub(&p)?;
                Ok((!d.is_zero()).then(|| json!(d.to_string())))
            },
        ));
    }
    out
}

/// Validity of the structure constants and the basic bracket laws of `g_p`.
pub fn structure_suite(alg: &StructureConstants, range: IntRange) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let v = validate_structure(alg);
    let mut rec = CheckRecord::from_bool(
        "structure.validate",
        json!({ "dim": alg.dim(), "basis": alg.basis_names() }),
        v.is_valid(),
        json!(v.violations.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
    )
    .with_note(format!("form determinant {}", v.form_determinant));
    if !v.nondegenerate {
        rec = rec.with_note("form is degenerate");
    }
    out.push(rec);

    let syms = gp_basis_symbols(alg, range.lo, range.hi);
    let pairs: Vec<(GpSymbol, GpSymbol)> = syms
        .iter()
        .flat_map(|a| syms.iter().map(move |b| (*a, *b)))
        .collect();
    let label = |(a, b): &(GpSymbol, GpSymbol)| format!("[{}, {}]", a.display(alg), b.display(alg));
    let params = json!({ "range": range.to_json() });

    out.push(grid("structure.antisymmetry", params.clone(), &pairs, label, |(a, b)| {
        let s = &gp_bracket_symbols(*a, *b, alg) + &gp_bracket_symbols(*b, *a, alg);
        Ok((!s.is_zero()).then(|| json!(s.display(alg))))
    }));

    out.push(grid(
        "structure.centrality",
        params.clone(),
        &syms,
        |s| s.display(alg),
        |s| {
            let x = GpElement::symbol(*s);
            let mut bad = GpElement::zero();
            for k in [GpElement::k_plus(), GpElement::k_minus()] {
                bad = &(&bad + &gp_bracket(&x, &k, alg)) + &gp_bracket(&k, &x, alg);
            }
            Ok((!bad.is_zero()).then(|| json!(bad.display(alg))))
        },
    ));

    let plain: Vec<_> = pairs
        .iter()
        .filter(|(a, b)| a.kind == Kind::Plain && b.kind == Kind::Plain)
        .copied()
        .collect();
    out.push(grid("structure.loop-specialization", params, &plain, label, |(a, b)| {
        let got = gp_bracket_symbols(*a, *b, alg).without_centrals();
        let want = GpElement::from_terms(
            alg.bracket_basis(a.base, b.base)
                .iter()
                .map(|(k, c)| (GpSymbol::plain(*k, a.degree + b.degree), c.clone())),
            Scalar::zero(),
            Scalar::zero(),
        );
        let d = &got - &want;
        Ok((!d.is_zero()).then(|| json!(d.display(alg))))
    }));
    out
}

/// Jacobi identities of `g_p` and `W_p`, and the mode-extraction self-test.
pub fn jacobi_suite(alg: &StructureConstants, range: IntRange) -> Vec<CheckRecord> {
    vec![
        threepoint_jacobi(alg, range),
        witt_jacobi(range),
        definition_self_test(IntRange::symmetric(6)),
    ]
}

pub fn threepoint_jacobi(alg: &StructureConstants, range: IntRange) -> CheckRecord {
    let syms = gp_basis_symbols(alg, range.lo, range.hi);
    grid(
        "jacobi.threepoint",
        json!({ "range": range.to_json(), "basis": alg.basis_names() }),
        &cube(&syms),
        |(a, b, c)| format!("({}, {}, {})", a.display(alg), b.display(alg), c.display(alg)),
        |(a, b, c)| {
            let d = gp_jacobi_defect(
                &GpElement::symbol(*a),
                &GpElement::symbol(*b),
                &GpElement::symbol(*c),
                alg,
            );
            Ok((!d.is_zero()).then(|| json!(d.display(alg))))
        },
    )
}

pub fn witt_jacobi(range: IntRange) -> CheckRecord {
    let ws = witt_basis_symbols(range.lo, range.hi);
    grid(
        "jacobi.witt",
        json!({ "range": range.to_json() }),
        &cube(&ws),
        |(a, b, c)| format!("({a}, {b}, {c})"),
        |(a, b, c)| {
            let e = |s| WittElement::symbol(s);
            let d = witt_jacobi_defect(&e(*a), &e(*b), &e(*c))?;
            Ok((!d.is_zero()).then(|| json!(d.to_string())))
        },
    )
}

/// Non-central mode extraction from the generating-function brackets
/// reproduces the `W_p` brackets.
pub fn definition_self_test(range: IntRange) -> CheckRecord {
    let cases: Vec<(Family, i64, i64)> = [Family::DD, Family::DE, Family::EE]
        .into_iter()
        .flat_map(|f| range.pairs().into_iter().map(move |(m, n)| (f, m, n)))
        .collect();
    grid(
        "witt.definition-self-test",
        json!({ "range": range.to_json() }),
        &cases,
        |(f, m, n)| format!("{} m={m} n={n}", f.label()),
        |&(f, m, n)| {
            let b = definition_bracket(f).expect("d/e family");
            let got = b.eval(m, n).non_central().to_witt();
            let (x, y) = f.fields();
            let sym = |fld, k| match fld {
                crate::virasoro::FieldName::D => crate::threepoint::WittSymbol::d(k),
                _ => crate::threepoint::WittSymbol::e(k),
            };
            let want = witt_bracket_symbols(sym(x, m), sym(y, n));
            Ok((got.as_ref() != Some(&want)).then(|| {
                json!({ "extracted": got.map(|g| g.to_string()), "expected": want.to_string() })
            }))
        },
    )
}

fn cube<T: Copy>(xs: &[T]) -> Vec<(T, T, T)> {
    let mut out = Vec::with_capacity(xs.len().pow(3));
    for &a in xs {
        for &b in xs {
            for &c in xs {
                out.push((a, b, c));
            }
        }
    }
    out
}

fn map_name(map: Puncture) -> &'static str {
    match map {
        Puncture::Zero => "plus",
        Puncture::Infinity => "minus",
    }
}

/// Homomorphism defects of `rho_plus` / `rho_minus` on all symbol pairs.
pub fn rho_suite(
    alg: &StructureConstants,
    maps: &[Puncture],
    range: IntRange,
    order: usize,
) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let syms = gp_basis_symbols(alg, range.lo, range.hi);
    let pairs: Vec<(GpSymbol, GpSymbol)> = syms
        .iter()
        .flat_map(|a| syms.iter().map(move |b| (*a, *b)))
        .collect();
    for &map in maps {
        let params = json!({ "map": map_name(map), "range": range.to_json(), "order": order });
        let windows: Vec<Option<i64>> = pairs
            .iter()
            .map(|(a, b)| {
                hom_defect(map, &GpElement::symbol(*a), &GpElement::symbol(*b), order, alg)
                    .ok()
                    .and_then(|d| d.valid_to())
            })
            .collect();
        let mut rec = grid(
            "rho.homomorphism",
            params.clone(),
            &pairs,
            |(a, b)| format!("[{}, {}]", a.display(alg), b.display(alg)),
            |(a, b)| {
                let d = hom_defect(map, &GpElement::symbol(*a), &GpElement::symbol(*b), order, alg)?;
                Ok((!d.is_zero()).then(|| json!(d.display(alg))))
            },
        );
        let ws: Vec<i64> = windows.into_iter().flatten().collect();
        if let (Some(lo), Some(hi)) = (ws.iter().min(), ws.iter().max()) {
            let tight = match map {
                Puncture::Zero => lo,
                Puncture::Infinity => hi,
            };
            rec = rec.with_note(format!("narrowest defect window ends at t^{tight}"));
        }
        out.push(rec);
        if let Some(r) = bar_bar_central(alg, map, range, order) {
            out.push(r);
        }
    }
    if let Some(r) = central_example(alg, order) {
        out.push(r);
    }
    out
}

/// The residue fixes the delta in the bar-bar central term at `m+n+1`.
fn bar_bar_central(
    alg: &StructureConstants,
    map: Puncture,
    range: IntRange,
    order: usize,
) -> Option<CheckRecord> {
    let a = (0..alg.dim()).find(|&i| !alg.form_basis(i, i).is_zero())?;
    let form = alg.form_basis(a, a).clone();
    let scale = match map {
        Puncture::Zero => Scalar::from_int(2),
        Puncture::Infinity => Scalar::one(),
    };
    let d = |k: i64| Scalar::from_int((k == 0) as i64);
    let pairs = range.pairs();
    let residue = |m: i64, n: i64| -> crate::Result<Scalar> {
        let x = rho(map, &GpElement::symbol(GpSymbol::bar(a, m)), order)?;
        let y = rho(map, &GpElement::symbol(GpSymbol::bar(a, n)), order)?;
        Ok(loop_bracket(&x, &y, alg)?.central().clone())
    };
    let alt_mismatch = pairs
        .iter()
        .filter(|&&(m, n)| {
            let alt = &scale * &form * Scalar::from_int(5 * m + 3) * d(m + n + 2);
            residue(m, n).map(|r| r != alt).unwrap_or(true)
        })
        .count();
    let name = alg.name(a).to_string();
    let rec = grid(
        "rho.bar-bar-central",
        json!({ "map": map_name(map), "range": range.to_json(), "order": order, "basis": name }),
        &pairs,
        |(m, n)| format!("[{name}1({m}), {name}1({n})]"),
        |&(m, n)| {
            let r = residue(m, n)?;
            let want = &scale
                * &form
                * (Scalar::from_int(4 * m + 2) * d(m + n + 1) + Scalar::from_int(m + 1) * d(m + n + 2));
            Ok((r != want).then(|| json!({ "residue": r.to_string(), "expected": want.to_string() })))
        },
    );
    Some(rec.with_note(format!(
        "reading both deltas at m+n+2 disagrees with the residue at {alt_mismatch} of {} pairs",
        pairs.len()
    )))
}

/// `[h(2), h1(-3)]` carries central `4 k-`, which survives only under `rho_minus`.
fn central_example(alg: &StructureConstants, order: usize) -> Option<CheckRecord> {
    let h = alg.index_of("h")?;
    let x = GpElement::symbol(GpSymbol::plain(h, 2));
    let y = GpElement::symbol(GpSymbol::bar(h, -3));
    let br = gp_bracket(&x, &y, alg);
    let mut centrals: Vec<Value> = Vec::new();
    let mut ok = br.is_central()
        && br.c_plus().is_zero()
        && *br.c_minus() == Scalar::from_int(2) * alg.form_basis(h, h);
    for map in [Puncture::Zero, Puncture::Infinity] {
        let got = rho(map, &x, order)
            .and_then(|rx| loop_bracket(&rx, &rho(map, &y, order)?, alg))
            .map(|l| l.central().clone());
        let want = match map {
            Puncture::Zero => Scalar::zero(),
            Puncture::Infinity => br.c_minus().clone(),
        };
        match got {
            Ok(c) => {
                ok &= c == want;
                centrals.push(json!({ "map": map_name(map), "central": c.to_string() }));
            }
            Err(e) => {
                ok = false;
                centrals.push(json!({ "map": map_name(map), "error": e.to_string() }));
            }
        }
    }
    Some(
        CheckRecord::from_bool(
            "rho.central-example",
            json!({ "x": "h(2)", "y": "a1[h](-3)", "order": order }),
            ok,
            json!(centrals),
        )
        .with_note(format!("bracket {}", br.display(alg))),
    )
}
