//! The `coherence-lab` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distance::SqrtBranch;
use crate::error::{Error, Result};
use crate::figures::{figure, FigureId, FigureOptions};
use crate::overcomplete::{orthogonality_violation, PhaseBasisConfig, RootNormalization, ViolationReport};
use crate::states::{qubit_from_bloch, StateSpec};
use crate::sweep::SweepTable;
use crate::verify::{self, Suite, VerifyConfig, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY: i32 = 4;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "COHERENCE_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "coherence-lab", version, about = "Coherence, certainty and nonclassicality quantifiers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Fixed Fock cutoff (disables automatic growth).
    #[arg(long, global = true)]
    pub trunc_dim: Option<usize>,
    /// Tail probability allowed beyond the cutoff.
    #[arg(long, global = true)]
    pub tail_tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random samples per dimension in `verify`.
    #[arg(long, global = true, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    All,
    Pythagoras,
    Bounds,
    Oracles,
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootNormArg {
    Consistent,
    Printed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantify one state given as StateSpec JSON (inline, a file, or `-` for stdin).
    Quantify {
        spec: String,
    },
    /// Run a figure sweep.
    Figure {
        #[arg(value_enum)]
        id: FigureArg,
        /// Grid override such as `nt=40`, `f=0:1:0.05`, `r=0,0.5` or `method=operator`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        sets: Vec<String>,
    },
    /// Run the property suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Use the per-entry principal square root (fault injection).
        #[arg(long)]
        naive_branch: bool,
    },
    /// Phase-basis orthogonality violation for a qubit.
    Counterexample {
        /// Bloch vector as `x,y,z`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 0.0, 0.5])]
        bloch: Vec<f64>,
        /// Starting quadrature node count (default 8N).
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value = "consistent")]
        root_norm: RootNormArg,
    },
}

fn read_spec(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s)?;
        return Ok(s);
    }
    if arg.trim_start().starts_with('{') {
        return Ok(arg.to_string());
    }
    Ok(std::fs::read_to_string(arg)?)
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                out.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn table_text(t: &SweepTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => t.to_csv(),
        Format::Json => Ok(t.to_json()),
    }
}

fn verify_csv(r: &VerifyReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["suite", "name", "passed", "total", "worst", "tolerance", "status"])
        .map_err(io)?;
    for p in &r.results {
        w.write_record([
            p.suite.clone(),
            p.name.clone(),
            p.passed.to_string(),
            p.total.to_string(),
            format!("{:.16e}", p.worst),
            format!("{:e}", p.tolerance),
            if p.ok() { "pass" } else { "fail" }.to_string(),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn violation_csv(v: &ViolationReport) -> String {
    let norm = match v.root_normalization {
        RootNormalization::Consistent => "consistent",
        RootNormalization::Printed => "printed",
    };
    let rows = [
        ("violation", format!("{:.16e}", v.violation)),
        ("cross_term", format!("{:.16e}", v.cross_term)),
        ("coherence", format!("{:.16e}", v.coherence)),
        ("certainty", format!("{:.16e}", v.certainty)),
        ("pythagoras_residual", format!("{:.16e}", v.pythagoras_residual)),
        ("off_diagonal_mass", format!("{:.16e}", v.off_diagonal_mass)),
        ("root_square_defect", format!("{:.16e}", v.root_square_defect)),
        ("nodes", v.nodes.to_string()),
        ("quadrature_change", format!("{:.16e}", v.quadrature_change)),
        ("root_normalization", norm.to_string()),
    ];
    let mut s = String::from("quantity,value\n");
    for (k, val) in rows {
        s.push_str(&format!("{k},{val}\n"));
    }
    s
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    let common = &cli.common;
    match cli.command {
        Command::Quantify { spec } => {
            let spec = StateSpec::from_json(&read_spec(&spec)?)?.with_truncation(common.trunc_dim, common.tail_tol);
            let report = spec.report()?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_string_pretty(&report).expect("reports serialize"),
                Format::Csv => {
                    let mut t = SweepTable::new("quantify", &[], &[]);
                    t.push_meta("spec", spec.to_json());
                    t.fill(vec![Vec::new()], |_| Ok((report.clone(), Vec::new())));
                    t.to_csv()?
                }
            };
            emit(common, &text)?;
            Ok(EXIT_OK)
        }
        Command::Figure { id, sets } => {
            let id: FigureId = format!("{id:?}").to_lowercase().parse()?;
            let mut opts = FigureOptions::default().with_sets(&sets)?;
            if let Some(d) = common.trunc_dim {
                opts.trunc.dim = Some(d);
                opts.trunc.auto_grow = false;
            }
            if let Some(t) = common.tail_tol {
                opts.trunc.tail_mass_tol = t;
            }
            let table = figure(id, &opts)?;
            emit(common, &table_text(&table, common.format.unwrap_or(Format::Csv))?)?;
            Ok(EXIT_OK)
        }
        Command::Verify { suite, naive_branch } => {
            let cfg = VerifyConfig {
                suite: match suite {
                    SuiteArg::All => Suite::All,
                    SuiteArg::Pythagoras => Suite::Pythagoras,
                    SuiteArg::Bounds => Suite::Bounds,
                    SuiteArg::Oracles => Suite::Oracles,
                    SuiteArg::Infinite => Suite::Infinite,
                },
                seed: common.seed,
                trials: common.trials,
                branch: if naive_branch {
                    SqrtBranch::NaivePrincipal
                } else {
                    SqrtBranch::HermitianConsistent
                },
            };
            let report = verify::run(&cfg);
            let text = match common.format {
                None => report.to_string(),
                Some(Format::Json) => serde_json::to_string_pretty(&report).expect("reports serialize"),
                Some(Format::Csv) => verify_csv(&report)?,
            };
            emit(common, &text)?;
            Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY })
        }
        Command::Counterexample { bloch, nodes, root_norm } => {
            let s: [f64; 3] = bloch
                .as_slice()
                .try_into()
                .map_err(|_| Error::Parse(format!("--bloch needs 3 components, got {}", bloch.len())))?;
            let rho = qubit_from_bloch(s)?;
            let cfg = PhaseBasisConfig {
                nodes,
                root_normalization: match root_norm {
                    RootNormArg::Consistent => RootNormalization::Consistent,
                    RootNormArg::Printed => RootNormalization::Printed,
                },
                ..PhaseBasisConfig::default()
            };
            let v = orthogonality_violation(&rho, &cfg)?;
            let text = match common.format.unwrap_or(Format::Json) {
                Format::Json => serde_json::to_string_pretty(&v).expect("reports serialize"),
                Format::Csv => violation_csv(&v),
            };
            emit(common, &text)?;
            Ok(EXIT_OK)
        }
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Parses arguments, runs, and maps every outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
