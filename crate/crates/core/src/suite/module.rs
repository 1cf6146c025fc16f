use serde_json::json;

use crate::fock::{
    spanning_monomials, Convention, Direction, FockModule, FockVector, ModuleKind, ModuleSpec,
};
use crate::lie::StructureConstants;
use crate::report::{CheckRecord, Status};
use crate::threepoint::{gp_bracket_symbols, GpElement, GpSymbol, Kind};
use crate::Scalar;

use super::{grid, grid_multi, IntRange};

#[derive(Debug, Clone)]
pub struct ModuleSuiteConfig {
    pub kind: ModuleKind,
    /// Heisenberg level; lattice modules have fixed levels.
    pub level: Scalar,
    /// Heisenberg functor directions; lattice modules have fixed directions.
    pub directions: Vec<Direction>,
    /// `None` probes both vertex conventions and keeps the one satisfying
    /// the affine relations.
    pub convention: Option<Convention>,
    pub range: IntRange,
    pub max_degree: u32,
    /// Modes probed past each vanishing bound.
    pub probe: i64,
}

impl ModuleSuiteConfig {
    pub fn new(kind: ModuleKind) -> Self {
        ModuleSuiteConfig {
            kind,
            level: Scalar::ratio(1, 2),
            directions: vec![Direction::Plus, Direction::Minus],
            convention: None,
            range: IntRange::symmetric(3),
            max_degree: 6,
            probe: 10,
        }
    }
}

fn kind_name(k: ModuleKind) -> &'static str {
    match k {
        ModuleKind::Heisenberg => "heisenberg",
        ModuleKind::LatticeHighest => "lattice-highest",
        ModuleKind::LatticeLowest => "lattice-lowest",
    }
}

fn dir_name(d: Direction) -> &'static str {
    match d {
        Direction::Plus => "E+",
        Direction::Minus => "E-",
    }
}

fn conv_name(c: Convention) -> &'static str {
    match c {
        Convention::Paper => "paper",
        Convention::Standard => "standard",
    }
}

fn fv_json(v: &FockVector) -> serde_json::Value {
    serde_json::to_value(v).expect("fock vectors serialize")
}

fn spec_for(cfg: &ModuleSuiteConfig, dir: Direction, conv: Convention) -> ModuleSpec {
    match cfg.kind {
        ModuleKind::Heisenberg => ModuleSpec::heisenberg(cfg.level.clone(), dir),
        ModuleKind::LatticeHighest => ModuleSpec::lattice_highest(conv),
        ModuleKind::LatticeLowest => ModuleSpec::lattice_lowest(conv),
    }
}

fn base_params(spec: &ModuleSpec, cfg: &ModuleSuiteConfig) -> serde_json::Value {
    let mut p = json!({
        "module": kind_name(spec.kind()),
        "level": spec.level().to_string(),
        "direction": dir_name(spec.direction()),
        "range": cfg.range.to_json(),
        "max_degree": cfg.max_degree,
    });
    if spec.kind().is_lattice() {
        p["convention"] = json!(conv_name(spec.convention()));
    }
    p
}

/// `[a(m), b(n)] = [a,b](m+n) + m <a,b> δ_{m+n,0} ℓ` on the spanning set.
fn affine_relations(
    module: &FockModule,
    alg: &StructureConstants,
    vectors: &[FockVector],
    cfg: &ModuleSuiteConfig,
) -> CheckRecord {
    let level = module.spec().level().clone();
    let d = alg.dim();
    let mut cases = Vec::new();
    for a in 0..d {
        for b in 0..d {
            for (m, n) in cfg.range.pairs() {
                for v in 0..vectors.len() {
                    cases.push((a, b, m, n, v));
                }
            }
        }
    }
    grid(
        "module.affine-relations",
        base_params(module.spec(), cfg),
        &cases,
        |&(a, b, m, n, v)| format!("[{}({m}), {}({n})] on {}", alg.name(a), alg.name(b), vectors[v]),
        |&(a, b, m, n, vi)| {
            let v = &vectors[vi];
            let ab = module.affine_act(alg, a, m, &module.affine_act(alg, b, n, v)?)?;
            let ba = module.affine_act(alg, b, n, &module.affine_act(alg, a, m, v)?)?;
            let mut want = FockVector::zero();
            for (k, c) in alg.bracket_basis(a, b) {
                want.add_assign_scaled(&module.affine_act(alg, *k, m + n, v)?, c);
            }
            if m + n == 0 {
                let c = Scalar::from_int(m) * alg.form_basis(a, b) * &level;
                want.add_assign_scaled(v, &c);
            }
            let defect = ab.sub(&ba).sub(&want);
            Ok((!defect.is_zero()).then(|| fv_json(&defect)))
        },
    )
}

/// Both orders of a generator pair share the products `x(y v)` and `y(x v)`;
/// each order still subtracts its own bracket.
fn three_point_relations(
    module: &FockModule,
    alg: &StructureConstants,
    vectors: &[FockVector],
    cfg: &ModuleSuiteConfig,
) -> Vec<CheckRecord> {
    let gens: Vec<(Kind, usize)> = [Kind::Plain, Kind::Bar]
        .into_iter()
        .flat_map(|k| (0..alg.dim()).map(move |b| (k, b)))
        .collect();
    let gen_name = |(k, b): (Kind, usize)| match k {
        Kind::Plain => format!("a[{}]", alg.name(b)),
        Kind::Bar => format!("a1[{}]", alg.name(b)),
    };
    let sym = |(k, b): (Kind, usize), n: i64| GpSymbol { kind: k, base: b, degree: n };
    let mut cases = Vec::new();
    for (m, n) in cfg.range.pairs() {
        for v in 0..vectors.len() {
            cases.push((m, n, v));
        }
    }
    let mut out = Vec::new();
    for (i, &x) in gens.iter().enumerate() {
        for &y in &gens[i..] {
            let params = |a: (Kind, usize), b: (Kind, usize)| {
                let mut p = base_params(module.spec(), cfg);
                p["x"] = json!(gen_name(a));
                p["y"] = json!(gen_name(b));
                p
            };
            let lab = move |a: (Kind, usize), b: (Kind, usize), swap: bool| {
                move |&(m, n, v): &(i64, i64, usize)| {
                    let (m, n) = if swap { (n, m) } else { (m, n) };
                    format!("[{}, {}] on {}", sym(a, m).display(alg), sym(b, n).display(alg), vectors[v])
                }
            };
            let mut checks = vec![("module.three-point-relations", params(x, y), lab(x, y, false))];
            if x != y {
                // case (m, n) of the swapped pair is [y(n), x(m)]
                checks.push(("module.three-point-relations", params(y, x), lab(y, x, true)));
            }
            let swapped = x != y;
            out.extend(grid_multi(checks, &cases, |&(m, n, vi)| {
                let v = &vectors[vi];
                let (ex, ey) = (GpElement::symbol(sym(x, m)), GpElement::symbol(sym(y, n)));
                let xy = module.induce(&ex, &module.induce(&ey, v, alg)?, alg)?;
                let yx = module.induce(&ey, &module.induce(&ex, v, alg)?, alg)?;
                let fwd = xy
                    .sub(&yx)
                    .sub(&module.induce(&gp_bracket_symbols(sym(x, m), sym(y, n), alg), v, alg)?);
                let mut res = vec![(!fwd.is_zero()).then(|| fv_json(&fwd))];
                if swapped {
                    let back = yx
                        .sub(&xy)
                        .sub(&module.induce(&gp_bracket_symbols(sym(y, n), sym(x, m), alg), v, alg)?);
                    res.push((!back.is_zero()).then(|| fv_json(&back)));
                }
                Ok(res)
            }));
        }
    }
    out
}

/// Every affine generator mode past the vanishing bound kills `v`.
fn restrictedness(
    module: &FockModule,
    alg: &StructureConstants,
    vectors: &[FockVector],
    cfg: &ModuleSuiteConfig,
) -> CheckRecord {
    let dir = module.spec().direction();
    let mut cases = Vec::new();
    for vi in 0..vectors.len() {
        let b = module.vanishing_bound(&vectors[vi]);
        for base in 0..alg.dim() {
            for k in 1..=cfg.probe {
                let n = match dir {
                    Direction::Plus => b + k,
                    Direction::Minus => -b - k,
                };
                cases.push((vi, base, n));
            }
        }
    }
    let mut params = base_params(module.spec(), cfg);
    params["probe"] = json!(cfg.probe);
    grid(
        "module.restrictedness",
        params,
        &cases,
        |&(v, base, n)| format!("{}({n}) on {}", alg.name(base), vectors[v]),
        |&(v, base, n)| {
            let w = module.affine_act(alg, base, n, &vectors[v])?;
            Ok((!w.is_zero()).then(|| fv_json(&w)))
        },
    )
}

/// `h(n)` moves weight by `-n` in E+ and by `+n` in E-.
fn grading(module: &FockModule, vectors: &[FockVector], cfg: &ModuleSuiteConfig) -> CheckRecord {
    let sign = match module.spec().direction() {
        Direction::Plus => -1,
        Direction::Minus => 1,
    };
    let mut cases = Vec::new();
    for v in 0..vectors.len() {
        for n in cfg.range.iter() {
            cases.push((v, n));
        }
    }
    grid(
        "module.grading",
        base_params(module.spec(), cfg),
        &cases,
        |&(v, n)| format!("h({n}) on {}", vectors[v]),
        |&(vi, n)| {
            let v = &vectors[vi];
            let w = module.heis_act(n, v)?;
            let want = v.degree().map(|d| d as i64 + sign * n);
            let bad = w.terms().keys().any(|m| Some(m.degree() as i64) != want);
            Ok(bad.then(|| fv_json(&w)))
        },
    )
}

fn central_character(module: &FockModule, alg: &StructureConstants, cfg: &ModuleSuiteConfig) -> CheckRecord {
    let spec = module.spec();
    let vac = FockVector::vacuum(spec.kind().is_lattice().then_some(0));
    let (kp, km) = module.central_character();
    let got = |x: &GpElement| module.induce(x, &vac, alg);
    let ok = matches!(got(&GpElement::k_plus()), Ok(w) if w == vac.scale(&kp))
        && matches!(got(&GpElement::k_minus()), Ok(w) if w == vac.scale(&km));
    CheckRecord::from_bool(
        "module.central-character",
        base_params(spec, cfg),
        ok,
        json!({ "k+": kp.to_string(), "k-": km.to_string() }),
    )
    .with_note(format!("k+ acts by {kp}, k- by {km}"))
}

/// Relation grids, restrictedness and grading for one module family.
pub fn module_suite(cfg: &ModuleSuiteConfig) -> Vec<CheckRecord> {
    let alg = match cfg.kind {
        ModuleKind::Heisenberg => StructureConstants::heisenberg1(),
        _ => StructureConstants::sl2(),
    };
    let vectors: Vec<FockVector> = spanning_monomials(cfg.kind, cfg.max_degree)
        .into_iter()
        .map(FockVector::monomial)
        .collect();
    let mut out = Vec::new();

    if cfg.kind == ModuleKind::Heisenberg {
        for &dir in &cfg.directions {
            let module = FockModule::new(spec_for(cfg, dir, Convention::Paper));
            out.push(affine_relations(&module, &alg, &vectors, cfg));
            out.push(restrictedness(&module, &alg, &vectors, cfg));
            out.push(grading(&module, &vectors, cfg));
            out.push(central_character(&module, &alg, cfg));
            out.extend(three_point_relations(&module, &alg, &vectors, cfg));
        }
        return out;
    }

    let dir = match cfg.kind {
        ModuleKind::LatticeHighest => Direction::Plus,
        _ => Direction::Minus,
    };
    let convention = match cfg.convention {
        Some(c) => c,
        None => {
            let (sel, rec) = select_convention(cfg, &alg, &vectors, dir);
            out.push(rec);
            sel
        }
    };
    let module = FockModule::new(spec_for(cfg, dir, convention));
    if cfg.convention.is_some() {
        out.push(affine_relations(&module, &alg, &vectors, cfg));
    }
    out.push(restrictedness(&module, &alg, &vectors, cfg));
    out.push(central_character(&module, &alg, cfg));
    out.extend(three_point_relations(&module, &alg, &vectors, cfg));
    out
}

/// Only the restrictedness probes, for every module instance in `cfg`.
pub fn restrictedness_suite(cfg: &ModuleSuiteConfig) -> Vec<CheckRecord> {
    let alg = match cfg.kind {
        ModuleKind::Heisenberg => StructureConstants::heisenberg1(),
        _ => StructureConstants::sl2(),
    };
    let vectors: Vec<FockVector> = spanning_monomials(cfg.kind, cfg.max_degree)
        .into_iter()
        .map(FockVector::monomial)
        .collect();
    let dirs = match cfg.kind {
        ModuleKind::Heisenberg => cfg.directions.clone(),
        ModuleKind::LatticeHighest => vec![Direction::Plus],
        ModuleKind::LatticeLowest => vec![Direction::Minus],
    };
    let convs = match (cfg.kind, cfg.convention) {
        (ModuleKind::Heisenberg, _) => vec![Convention::Paper],
        (_, Some(c)) => vec![c],
        (_, None) => vec![Convention::Paper, Convention::Standard],
    };
    let mut out = Vec::new();
    for &d in &dirs {
        for &c in &convs {
            let module = FockModule::new(spec_for(cfg, d, c));
            out.push(restrictedness(&module, &alg, &vectors, cfg));
        }
    }
    out
}

fn select_convention(
    cfg: &ModuleSuiteConfig,
    alg: &StructureConstants,
    vectors: &[FockVector],
    dir: Direction,
) -> (Convention, CheckRecord) {
    let mut passing = Vec::new();
    let mut notes = Vec::new();
    let mut first_defect = None;
    for conv in [Convention::Paper, Convention::Standard] {
        let module = FockModule::new(spec_for(cfg, dir, conv));
        let r = affine_relations(&module, alg, vectors, cfg);
        if r.status == Status::Pass {
            passing.push(conv);
            notes.push(format!("{}: affine relations hold", conv_name(conv)));
        } else {
            notes.push(format!(
                "{}: affine relations fail ({})",
                conv_name(conv),
                r.notes.first().cloned().unwrap_or_default()
            ));
            first_defect.get_or_insert(r.defect);
        }
    }
    let selected = passing.first().copied().unwrap_or_default();
    let spec = spec_for(cfg, dir, selected);
    let mut params = base_params(&spec, cfg);
    params.as_object_mut().expect("object").remove("convention");
    let mut rec = if passing.len() == 1 {
        CheckRecord::pass("module.vertex-convention", params)
    } else {
        CheckRecord::fail(
            "module.vertex-convention",
            params,
            first_defect.unwrap_or_else(|| json!("both conventions pass")),
        )
    };
    rec.notes = notes;
    rec = rec.with_note(format!("selected convention: {}", conv_name(selected)));
    (selected, rec)
}
