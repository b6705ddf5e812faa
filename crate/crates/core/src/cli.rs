//! Command-line front end.
//!
//! Exit codes: 0 success (or CONSISTENT), 1 PROHIBITED, 2 invalid input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::catalog::{
    all_types, catalog_form, catalog_milnor, parse_name, variants_for, MilnorData, SingularityType,
};
use crate::checker::{check_theorem_a, Verdict};
use crate::local::{compute_qp_detailed, MorsifiedLocalScheme};
use crate::qform::{InertiaTriple, RationalSymmetricForm};
use crate::rational::RationalText;
use crate::scheme::CurveScheme;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "avcheck",
    version,
    about = "Exact prohibition checks for real plane curve schemes"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a curve scheme file against the inequalities.
    Check { file: PathBuf },
    /// Compute the local form of a morsification file.
    LocalForm { file: PathBuf },
    /// Print catalog forms, for one type (e.g. `A3`) or all up to a bound.
    Catalog {
        #[arg(value_name = "TYPE")]
        selector: Option<String>,
        /// Restrict to one variant, e.g. `x^{2n}-y^2` (`+-` stands for `±`).
        #[arg(long, requires = "selector")]
        variant: Option<String>,
        /// Largest Milnor number when no type is given.
        #[arg(long, default_value_t = 8)]
        max_index: u32,
    },
    /// Print the inertia of a matrix file.
    Inertia { file: PathBuf },
}

#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct CliError(String);

impl CliError {
    fn at(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError(format!("{}: {e}", path.display()))
    }
}

#[derive(Serialize)]
struct FormJson {
    labels: Vec<String>,
    matrix: Vec<Vec<RationalText>>,
    inertia: InertiaTriple,
}

impl FormJson {
    fn new(f: &RationalSymmetricForm) -> Self {
        Self {
            labels: f.labels().to_vec(),
            matrix: f
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(RationalText).collect())
                .collect(),
            inertia: f.inertia(),
        }
    }
}

#[derive(Serialize)]
struct CatalogEntryJson {
    #[serde(rename = "type")]
    name: String,
    variant: String,
    n: u32,
    form: FormJson,
    milnor: MilnorData,
}

#[derive(Serialize)]
struct LocalFormJson {
    mu: u32,
    rho: u32,
    delta: u32,
    tilde: FormJson,
    local_form: FormJson,
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("output serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::at(path, e))
}

/// Runs a parsed invocation, writing to `out`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: io::Error| CliError(e.to_string());
    match &cli.command {
        Command::Check { file } => {
            let scheme = CurveScheme::load(file).map_err(|e| CliError::at(file, e))?;
            let report = check_theorem_a(&scheme).map_err(|e| CliError::at(file, e))?;
            let text = match cli.format {
                Format::Human => report.to_table(),
                Format::Json => report.to_json(),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(match report.verdict {
                Verdict::Consistent => 0,
                Verdict::Prohibited => 1,
            })
        }
        Command::LocalForm { file } => {
            let fixture =
                MorsifiedLocalScheme::from_json(&read(file)?).map_err(|e| CliError::at(file, e))?;
            let c = compute_qp_detailed(&fixture).map_err(|e| CliError::at(file, e))?;
            let text = match cli.format {
                Format::Human => format!(
                    "mu = {}, rho = {}, nodes = {}\ntilde form:\n{}\nlocal form:\n{}\ninertia (plus, minus, zero): {}\n",
                    fixture.mu(),
                    fixture.rho(),
                    fixture.delta(),
                    indent(&c.tilde.to_string()),
                    indent(&c.qp.to_string()),
                    c.qp.inertia()
                ),
                Format::Json => json(&LocalFormJson {
                    mu: fixture.mu(),
                    rho: fixture.rho(),
                    delta: fixture.delta(),
                    tilde: FormJson::new(&c.tilde),
                    local_form: FormJson::new(&c.qp),
                }),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Catalog {
            selector,
            variant,
            max_index,
        } => {
            let types = select_types(selector.as_deref(), variant.as_deref(), *max_index)?;
            let text = match cli.format {
                Format::Human => types
                    .iter()
                    .map(catalog_human)
                    .collect::<Vec<_>>()
                    .join("\n"),
                Format::Json => json(
                    &types
                        .iter()
                        .map(|t| CatalogEntryJson {
                            name: t.name(),
                            variant: t.variant().to_string(),
                            n: t.n(),
                            form: FormJson::new(&catalog_form(t)),
                            milnor: catalog_milnor(t),
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(0)
        }
        Command::Inertia { file } => {
            let form: RationalSymmetricForm =
                read(file)?.parse().map_err(|e| CliError::at(file, e))?;
            let i = form.inertia();
            let text = match cli.format {
                Format::Human => format!("{i}\n"),
                Format::Json => json(&serde_json::json!({ "dim": form.dim(), "inertia": i })),
            };
            out.write_all(text.as_bytes()).map_err(io)?;
            Ok(0)
        }
    }
}

fn indent(s: &str) -> String {
    s.lines()
        .map(|l| format!("  {l}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn select_types(
    selector: Option<&str>,
    variant: Option<&str>,
    max_index: u32,
) -> Result<Vec<SingularityType>, CliError> {
    let err = |e: crate::catalog::CatalogError| CliError(e.to_string());
    match (selector, variant) {
        (None, _) => Ok(all_types(max_index)),
        (Some(name), Some(v)) => Ok(vec![SingularityType::parse(name, v).map_err(err)?]),
        (Some(name), None) => {
            let (family, index) = parse_name(name).map_err(err)?;
            Ok(variants_for(family, index))
        }
    }
}

fn catalog_human(t: &SingularityType) -> String {
    let form = catalog_form(t);
    let m = catalog_milnor(t);
    let n = match t.family() {
        crate::catalog::Family::E => String::new(),
        _ => format!("  (n = {})", t.n()),
    };
    format!(
        "{}  {}{n}\n{}\ninertia (plus, minus, zero): {}\nmilnor (plus, minus): ({}, {})\n",
        t.name(),
        t.variant(),
        indent(&form.to_string()),
        form.inertia(),
        m.mu_plus,
        m.mu_minus
    )
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_env("AVCHECK_LOG")
        .init();
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    match run(&cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
