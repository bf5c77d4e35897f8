//! `ringlab`: compressed commuting graphs of finite and localized rings.
//!
//! Exit status: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 size budget exceeded, 4 unresolved merges.

mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ringlab_core::dsl::{load_semidirect, parse_ring, DslError};
use ringlab_core::integral::monic_annihilator;
use ringlab_core::localized::{class_representative, lambda1_localized, membership_witness, LocalizedRational};
use ringlab_core::semidirect::{LocalizedSemidirect, SemidirectError};
use ringlab_core::subring::{compressed_commuting_graph, unital_subring_lattice, Mode};
use ringlab_core::verify::{self, Suite, VerifyOptions};
use ringlab_core::{IntPolynomial, OutputFormat, RingError};

use config::Config;

#[derive(Parser)]
#[command(name = "ringlab", version, about = "Compressed commuting graphs of rings")]
struct Cli {
    /// TOML file with budgets, witness bounds, format and seed.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Largest ring order stored as tables.
    #[arg(long, global = true, env = "RINGLAB_TABLE_MAX")]
    table_max: Option<usize>,
    /// Largest ring order accepted at all.
    #[arg(long, global = true, env = "RINGLAB_RULE_MAX")]
    rule_max: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print Λ(R), or Λ¹(R) with --unital.
    Graph {
        /// Ring spec, e.g. z:4, gf:2:6, tri:gf:2:1:2, prod:z:2,z:3.
        spec: String,
        #[arg(long)]
        unital: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long, value_enum, default_value = "paper")]
        suite: SuiteArg,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Λ¹ of Z[1/m] ⋉ I from a JSON data file.
    Semidirect {
        #[arg(long)]
        data: PathBuf,
        /// Print only the graph instead of the full report.
        #[arg(long)]
        graph: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Also print the canonical representative of this element, given
        /// as `num/den@m,x`.
        #[arg(long)]
        canonical: Option<String>,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Monic annihilator of an element from a content-1 annihilator.
    Integral {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        element: usize,
        /// Coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// All unital subrings of a finite unital ring.
    Lattice { spec: String },
    /// Z[1/m]: its Λ¹, class representatives and membership witnesses.
    Localized {
        #[command(subcommand)]
        op: LocalizedOp,
    },
}

#[derive(Subcommand)]
enum LocalizedOp {
    Graph {
        m: u64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Squarefree representative of the class of `num/den@m`.
    Rep {
        #[arg(allow_hyphen_values = true)]
        a: String,
    },
    /// Integer polynomial q with q(a) = target.
    Witness {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        target: String,
    },
}

#[derive(Args)]
struct BoundArgs {
    /// Largest witness degree.
    #[arg(long = "deg")]
    degree: Option<usize>,
    /// Largest absolute witness coefficient.
    #[arg(long)]
    coef: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Dot => OutputFormat::Dot,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Paper,
    Properties,
}

enum Failure {
    Usage(String),
    Budget(String),
    Verification(String),
    Unresolved(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Unresolved(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Budget(m) | Failure::Verification(m) | Failure::Unresolved(m) => m,
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        if e.is_budget() {
            Failure::Budget(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<RingError> for Failure {
    fn from(e: RingError) -> Self {
        match e {
            RingError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn settings(cli: &Cli) -> Result<Config, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(Failure::Usage)?,
        None => Config::default(),
    };
    if let Some(t) = cli.table_max {
        cfg.table_max = t;
    }
    if let Some(r) = cli.rule_max {
        cfg.rule_max = r;
    }
    let bounds = match &cli.command {
        Command::Verify { bounds, .. } | Command::Semidirect { bounds, .. } => Some(bounds),
        _ => None,
    };
    if let Some(b) = bounds {
        cfg.degree = b.degree.unwrap_or(cfg.degree);
        cfg.coef = b.coef.unwrap_or(cfg.coef);
    }
    if let Command::Verify { seed: Some(s), .. } = cli.command {
        cfg.seed = s;
    }
    cfg.check().map_err(Failure::Usage)?;
    Ok(cfg)
}

fn format_of(flag: Option<Format>, cfg: &Config) -> OutputFormat {
    flag.map(Into::into).unwrap_or(cfg.format)
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn localized(text: &str) -> Result<LocalizedRational, Failure> {
    text.parse().map_err(usage)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = settings(&cli)?;
    let budget = cfg.budget();
    match cli.command {
        Command::Graph { spec, unital, format } => {
            let ring = parse_ring(&spec, &budget)?;
            let mode = if unital { Mode::Unital } else { Mode::Nonunital };
            Ok(compressed_commuting_graph(&ring, mode)?.emit(format_of(format, &cfg)))
        }
        Command::Verify { suite, .. } => {
            let suite = match suite {
                SuiteArg::Paper => Suite::Paper,
                SuiteArg::Properties => Suite::Properties,
            };
            let report = verify::run(suite, &VerifyOptions { seed: cfg.seed, bounds: cfg.bounds(), budget });
            let text = report.to_json();
            print!("{text}");
            if report.failures() > 0 {
                Err(Failure::Verification(format!("{} items failed", report.failures())))
            } else if report.unresolved > 0 {
                Err(Failure::Unresolved(format!("{} pairs unresolved", report.unresolved)))
            } else {
                Ok(String::new())
            }
        }
        Command::Semidirect { data, graph, format, canonical, .. } => {
            let data = load_semidirect(&data, &budget)?;
            let h = LocalizedSemidirect::new(data).map_err(semidirect_failure)?;
            let report = h.lambda1(cfg.bounds());
            let mut out = if graph { report.graph.emit(format_of(format, &cfg)) } else { json(&report) };
            if let Some(text) = canonical {
                let (z, x) = text.split_once(',').ok_or_else(|| usage("expected num/den@m,x"))?;
                let x: usize = x.trim().parse().map_err(usage)?;
                let elem = h.element(localized(z.trim())?, x).map_err(semidirect_failure)?;
                out.push_str(&json(&h.canonicalize(&elem).map_err(semidirect_failure)?));
            }
            if report.is_complete() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Unresolved(format!("{} pairs unresolved", report.unresolved.len())))
            }
        }
        Command::Integral { ring, element, poly } => {
            let r = parse_ring(&ring, &budget)?;
            let q = IntPolynomial::parse_csv(&poly).map_err(usage)?;
            let out = monic_annihilator(&r, element, &q).map_err(usage)?;
            Ok(out.polynomial.to_csv() + "\n")
        }
        Command::Lattice { spec } => {
            let ring = parse_ring(&spec, &budget)?;
            let lattice = unital_subring_lattice(&ring)?;
            #[derive(Serialize)]
            struct Out<'a> {
                ring: &'a str,
                count: usize,
                complete: bool,
                subrings: &'a [ringlab_core::subring::ElementSet],
            }
            Ok(json(&Out {
                ring: ring.descriptor(),
                count: lattice.subrings.len(),
                complete: lattice.complete,
                subrings: &lattice.subrings,
            }))
        }
        Command::Localized { op } => match op {
            LocalizedOp::Graph { m, format } => Ok(lambda1_localized(m).map_err(usage)?.emit(format_of(format, &cfg))),
            LocalizedOp::Rep { a } => Ok(format!("{}\n", class_representative(&localized(&a)?))),
            LocalizedOp::Witness { a, target } => {
                let (a, t) = (localized(&a)?, localized(&target)?);
                match membership_witness(&a, &t) {
                    Some(q) => Ok(q.to_csv() + "\n"),
                    None => Err(Failure::Verification(format!("{t} is not in the unital subring generated by {a}"))),
                }
            }
        },
    }
}

fn semidirect_failure(e: SemidirectError) -> Failure {
    match e {
        SemidirectError::Ring(r) => r.into(),
        other => Failure::Usage(other.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("ringlab: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
