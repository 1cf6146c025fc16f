use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use threepoint::expr::{parse_gp, parse_witt};
use threepoint::fock::{Convention, Direction, ModuleKind};
use threepoint::lambda::lambda_coeff;
use threepoint::lie::StructureConstants;
use threepoint::report::{CheckRecord, Report, Status};
use threepoint::series::sqrt_p_expansion;
use threepoint::suite::{
    jacobi_suite, module_suite, rho_suite, structure_suite, virasoro_suite, IntRange,
    ModuleSuiteConfig, VirasoroSuiteConfig,
};
use threepoint::threepoint::{gp_bracket, witt_bracket};
use threepoint::virasoro::{definition_bracket, wick_bracket, Family, NormalOrdering};
use threepoint::{Error, Puncture, Scalar};

const REPORT_DIR_VAR: &str = "THREEPOINT_REPORT_DIR";

#[derive(Parser)]
#[command(name = "threepoint", version)]
#[command(about = "Exact verification of three-point current algebras and their Fock realizations")]
struct Cli {
    /// Worker threads; 0 uses every core
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Report path; relative paths resolve against $THREEPOINT_REPORT_DIR
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Record wall time in the report (makes it run-dependent)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the binomial coefficient binom(1/2, n)
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Print the truncated expansion of sqrt(t^2 + 4t)
    Series {
        #[arg(long, value_enum, default_value_t = Place::AtInfinity)]
        direction: Place,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Bracket of two elements of g_p, or of the Witt-type algebra for d/e input
    Bracket {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Structure constants, antisymmetry, centrality
    VerifyStructure {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value = "-6..6", allow_hyphen_values = true)]
        range: IntRange,
    },
    /// Jacobi identities and the mode-extraction self-test
    VerifyJacobi {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        range: IntRange,
    },
    /// Homomorphism property of the loop embeddings
    VerifyRho {
        #[arg(long, value_enum, default_value_t = MapChoice::Both)]
        map: MapChoice,
        #[arg(long, default_value = "-4..4", allow_hyphen_values = true)]
        range: IntRange,
        #[arg(long, default_value_t = 40)]
        order: usize,
        #[arg(long, default_value = "sl2")]
        algebra: String,
    },
    /// Relation grids on Fock and lattice modules
    VerifyModule(ModuleArgs),
    /// Mode algebra of the level-1/2 Fock fields
    VerifyVirasoro {
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        range: IntRange,
        #[arg(long, default_value_t = 8)]
        max_degree: u32,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        c: Scalar,
        #[arg(long, value_enum, default_value_t = OrderingChoice::HMode)]
        ordering: OrderingChoice,
    },
    /// Print a closed-form mode bracket
    ModeBracket {
        #[arg(long)]
        family: String,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value_t = NormChoice::Wick)]
        normalization: NormChoice,
    },
}

#[derive(Args)]
struct ModuleArgs {
    #[arg(long, value_enum)]
    module: KindChoice,
    /// Heisenberg level
    #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
    level: Scalar,
    /// Heisenberg functor direction
    #[arg(long, value_enum, default_value_t = DirChoice::Both)]
    direction: DirChoice,
    #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
    range: IntRange,
    #[arg(long, default_value_t = 6)]
    max_degree: u32,
    #[arg(long, value_enum, default_value_t = ConvChoice::Auto)]
    convention: ConvChoice,
    /// Modes probed past each vanishing bound
    #[arg(long, default_value_t = 10)]
    probe: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Place {
    AtZero,
    AtInfinity,
}

#[derive(Clone, Copy, ValueEnum)]
enum MapChoice {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindChoice {
    Heisenberg,
    LatticeHighest,
    LatticeLowest,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirChoice {
    Plus,
    Minus,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvChoice {
    Auto,
    Paper,
    Standard,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingChoice {
    HMode,
    FieldMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormChoice {
    Wick,
    Paper,
}

fn enum_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

enum Outcome {
    /// Printed value, no verification
    Printed,
    Report(Report),
}

fn place(p: Place) -> Puncture {
    match p {
        Place::AtZero => Puncture::Zero,
        Place::AtInfinity => Puncture::Infinity,
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    let verify = |name: &str, config: Value, checks: Vec<CheckRecord>| {
        Ok(Outcome::Report(Report::new(name, config, checks)))
    };
    match &cli.command {
        Command::Lambda { n } => {
            println!("{}", lambda_coeff(*n));
            Ok(Outcome::Printed)
        }
        Command::Series { direction, order } => {
            let dir = place(*direction);
            let s = sqrt_p_expansion(dir, *order)?;
            let var = match dir {
                Puncture::Zero => "s",
                Puncture::Infinity => "t",
            };
            println!("{}", s.format_with(var));
            let sq = s.mul(&s)?;
            println!("squared: {}", sq.format_with(var));
            let p = match dir {
                Puncture::Zero => threepoint::TruncSeries::exact(
                    dir,
                    [(4, Scalar::one()), (2, Scalar::from_int(4))],
                ),
                Puncture::Infinity => threepoint::TruncSeries::exact(
                    dir,
                    [(2, Scalar::one()), (1, Scalar::from_int(4))],
                ),
            };
            let d = sq.sub(&p)?;
            let rec = CheckRecord::from_bool(
                "series.square",
                json!({ "direction": dir, "order": order }),
                d.is_zero(),
                json!(d.format_with(var)),
            );
            verify("series", json!({ "direction": dir, "order": order }), vec![rec])
        }
        Command::Bracket { algebra, x, y } => {
            if let (Ok(a), Ok(b)) = (parse_witt(x), parse_witt(y)) {
                println!("{}", witt_bracket(&a, &b)?);
            } else {
                let alg = StructureConstants::from_source(algebra)?;
                let a = parse_gp(x, &alg)?;
                let b = parse_gp(y, &alg)?;
                println!("{}", gp_bracket(&a, &b, &alg).display(&alg));
            }
            Ok(Outcome::Printed)
        }
        Command::VerifyStructure { algebra, range } => {
            let alg = StructureConstants::from_source(algebra)?;
            verify(
                "verify-structure",
                json!({ "algebra": algebra, "range": range.to_json() }),
                structure_suite(&alg, *range),
            )
        }
        Command::VerifyJacobi { algebra, range } => {
            let alg = StructureConstants::from_source(algebra)?;
            verify(
                "verify-jacobi",
                json!({ "algebra": algebra, "range": range.to_json() }),
                jacobi_suite(&alg, *range),
            )
        }
        Command::VerifyRho { map, range, order, algebra } => {
            if *order == 0 {
                return Err(Error::InvalidArgument("order must be >= 1".into()));
            }
            let alg = StructureConstants::from_source(algebra)?;
            let maps = match map {
                MapChoice::Plus => vec![Puncture::Zero],
                MapChoice::Minus => vec![Puncture::Infinity],
                MapChoice::Both => vec![Puncture::Zero, Puncture::Infinity],
            };
            verify(
                "verify-rho",
                json!({
                    "algebra": algebra,
                    "map": enum_name(*map),
                    "range": range.to_json(),
                    "order": order,
                }),
                rho_suite(&alg, &maps, *range, *order),
            )
        }
        Command::VerifyModule(a) => {
            let kind = match a.module {
                KindChoice::Heisenberg => ModuleKind::Heisenberg,
                KindChoice::LatticeHighest => ModuleKind::LatticeHighest,
                KindChoice::LatticeLowest => ModuleKind::LatticeLowest,
            };
            let mut cfg = ModuleSuiteConfig::new(kind);
            cfg.level = a.level.clone();
            cfg.directions = match a.direction {
                DirChoice::Plus => vec![Direction::Plus],
                DirChoice::Minus => vec![Direction::Minus],
                DirChoice::Both => vec![Direction::Plus, Direction::Minus],
            };
            cfg.convention = match a.convention {
                ConvChoice::Auto => None,
                ConvChoice::Paper => Some(Convention::Paper),
                ConvChoice::Standard => Some(Convention::Standard),
            };
            cfg.range = a.range;
            cfg.max_degree = a.max_degree;
            cfg.probe = a.probe;
            let mut config = json!({
                "module": enum_name(a.module),
                "range": a.range.to_json(),
                "max_degree": a.max_degree,
                "convention": enum_name(a.convention),
                "probe": a.probe,
            });
            if kind == ModuleKind::Heisenberg {
                config["level"] = json!(a.level.to_string());
                config["direction"] = json!(enum_name(a.direction));
            }
            verify("verify-module", config, module_suite(&cfg))
        }
        Command::VerifyVirasoro { range, max_degree, c, ordering } => {
            let cfg = VirasoroSuiteConfig {
                range: *range,
                max_degree: *max_degree,
                c_value: c.clone(),
                ordering: match ordering {
                    OrderingChoice::HMode => NormalOrdering::HMode,
                    OrderingChoice::FieldMode => NormalOrdering::FieldMode,
                },
            };
            verify(
                "verify-virasoro",
                json!({
                    "range": range.to_json(),
                    "max_degree": max_degree,
                    "c": c.to_string(),
                    "ordering": enum_name(*ordering),
                }),
                virasoro_suite(&cfg),
            )
        }
        Command::ModeBracket { family, m, n, normalization } => {
            let fam = Family::parse(family)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown family {family:?}")))?;
            let b = match normalization {
                NormChoice::Wick => wick_bracket(fam),
                NormChoice::Paper => definition_bracket(fam).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "family {family} has no printed generating-function bracket"
                    ))
                })?,
            };
            println!("{}", b.eval(*m, *n));
            Ok(Outcome::Printed)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Lambda { .. } => "lambda",
        Command::Series { .. } => "series",
        Command::Bracket { .. } => "bracket",
        Command::VerifyStructure { .. } => "verify-structure",
        Command::VerifyJacobi { .. } => "verify-jacobi",
        Command::VerifyRho { .. } => "verify-rho",
        Command::VerifyModule(_) => "verify-module",
        Command::VerifyVirasoro { .. } => "verify-virasoro",
        Command::ModeBracket { .. } => "mode-bracket",
    }
}

fn report_path(cli: &Cli) -> PathBuf {
    let dir = std::env::var_os(REPORT_DIR_VAR).map(PathBuf::from);
    match (&cli.report, dir) {
        (Some(p), Some(d)) if p.is_relative() => d.join(p),
        (Some(p), _) => p.clone(),
        (None, Some(d)) => d.join(format!("{}.json", command_name(&cli.command))),
        (None, None) => PathBuf::from(format!("{}.json", command_name(&cli.command))),
    }
}

fn summarize(report: &Report) {
    for c in &report.checks {
        if c.status == Status::Fail {
            println!("FAIL {} {}", c.name, c.parameters);
            println!("     defect {}", c.defect);
            for n in &c.notes {
                println!("     {n}");
            }
        }
    }
    for c in &report.checks {
        if c.status != Status::Fail && !c.notes.is_empty() {
            println!("note {} {}: {}", c.name, c.parameters, c.notes.join("; "));
        }
    }
    let s = report.summary;
    println!("{} pass, {} fail, {} skipped", s.pass, s.fail, s.skipped);
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let Outcome::Report(mut report) = outcome else {
        return ExitCode::SUCCESS;
    };
    if cli.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    summarize(&report);
    let path = report_path(&cli);
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        if let Err(e) = std::fs::create_dir_all(parent) {
            eprintln!("error: cannot create {}: {e}", parent.display());
            return ExitCode::from(2);
        }
    }
    if let Err(e) = std::fs::write(&path, report.to_json()) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return ExitCode::from(2);
    }
    println!("report written to {}", path.display());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
