use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod catalog;
mod error;
mod params;
mod report;
mod sweep;

use catalog::{Context, Outcome, CATALOG};
use error::CliError;
use params::{ConfigFile, ParamSpec};
use report::Document;

const DEFAULT_TOL: f64 = 1e-9;
const DEFAULT_OUT: &str = "qsplit-reports";
const OUT_ENV: &str = "QSPLIT_OUT";

#[derive(Parser)]
#[command(name = "qsplit", version, about = "Run measurement, no-signaling and microcausality scenarios and write reports")]
struct Cli {
    /// Root seed; every stochastic step derives its own seed from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Tolerance for exact quantities.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Report directory [env: QSPLIT_OUT] [default: qsplit-reports]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List scenarios and their parameters.
    List,
    /// Run one scenario or checker.
    Run {
        /// Scenario name; may instead come from the config file.
        scenario: Option<String>,
        /// Parameter override, repeatable.
        #[arg(long = "param", short = 'p', value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// TOML file with `scenario`, `seed`, `tol`, `out` and a `[params]` table.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run every catalog scenario with default parameters.
    Suite {
        /// Scenario to leave out, repeatable.
        #[arg(long)]
        exclude: Vec<String>,
    },
    /// Tabulate the commutator combinations of the two-point function over a grid.
    SweepDeltaPlus {
        #[arg(long = "param", short = 'p', value_name = "KEY=VALUE")]
        params: Vec<String>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

struct Settings {
    seed: u64,
    tol: f64,
    out: PathBuf,
}

fn settings(cli: &Cli, file: &ConfigFile) -> Result<Settings, CliError> {
    let tol = cli.tol.or(file.tol).unwrap_or(DEFAULT_TOL);
    if !(tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let out = cli
        .out
        .clone()
        .or_else(|| file.out.clone())
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    Ok(Settings { seed: cli.seed.or(file.seed).unwrap_or(0), tol, out })
}

fn catalog_listing() -> String {
    let mut s = String::from("scenarios:\n");
    for e in CATALOG {
        s.push_str(&format!("  {:<28} {}\n", e.name, e.summary));
    }
    s.push_str(&format!("  {:<28} {}\n", sweep::NAME, "grid sweep (verb: sweep-delta-plus)"));
    s
}

fn describe(name: &str, summary: &str, params: &[ParamSpec]) -> String {
    let mut s = format!("{name}\n  {summary}\n");
    for p in params {
        s.push_str(&format!("    {:<20} default {:<24} {}\n", p.key, p.default, p.help));
    }
    s
}

/// Prints the summary and writes both report files; returns whether all quantities passed.
fn finish(outcome: &Outcome, doc: &Document, dir: &std::path::Path) -> Result<bool, CliError> {
    let r = &outcome.report;
    let passed = r.passed();
    let ok = r.quantities.iter().filter(|q| q.pass).count();
    println!("{}: {} ({ok}/{} quantities)", r.name, if passed { "PASS" } else { "FAIL" }, r.quantities.len());
    for q in r.failures() {
        println!(
            "  failed {}: predicted {:e}, expected {:e} ± {:e}",
            q.label, q.predicted, q.expected, q.tolerance
        );
    }
    for n in &outcome.notes {
        println!("  {n}");
    }
    let [txt, json] = doc.write(dir)?;
    println!("  reports: {} {}", txt.display(), json.display());
    Ok(passed)
}

fn run_entry(entry: &catalog::Entry, file: &toml::Table, overrides: &[String], s: &Settings) -> Result<bool, CliError> {
    let params = params::resolve(entry.params, entry.name, file, overrides)?;
    let ctx = Context { seed: s.seed, tol: s.tol };
    let mut outcome = (entry.run)(&params, &ctx)?;
    outcome.report = outcome.report.sorted();
    let doc = Document::new(&outcome.report, &params, s.seed, s.tol, &outcome.notes);
    finish(&outcome, &doc, &s.out)
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    match &cli.command {
        Command::List => {
            let mut text: String = CATALOG.iter().map(|e| describe(e.name, e.summary, e.params)).collect();
            text.push_str(&describe(sweep::NAME, "verb sweep-delta-plus: grid sweep of the commutator combinations", sweep::PARAMS));
            // A closed pipe (`qsplit list | head`) is not an error.
            let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), text.as_bytes());
            Ok(true)
        }
        Command::Run { scenario, params, config } => {
            let file = match config {
                Some(path) => ConfigFile::load(path)?,
                None => ConfigFile::default(),
            };
            let s = settings(&cli, &file)?;
            let name = scenario
                .clone()
                .or_else(|| file.scenario.clone())
                .ok_or_else(|| CliError::Usage(format!("no scenario given\n{}", catalog_listing())))?;
            if name == sweep::NAME {
                return run_sweep(&file.params, params, &s);
            }
            let entry = catalog::find(&name)
                .ok_or_else(|| CliError::Usage(format!("unknown scenario {name:?}\n{}", catalog_listing())))?;
            run_entry(entry, &file.params, params, &s)
        }
        Command::Suite { exclude } => {
            let s = settings(&cli, &ConfigFile::default())?;
            for name in exclude {
                if catalog::find(name).is_none() {
                    return Err(CliError::Usage(format!("unknown scenario {name:?}\n{}", catalog_listing())));
                }
            }
            let mut all = true;
            let mut failed = Vec::new();
            for e in CATALOG.iter().filter(|e| !exclude.iter().any(|x| x == e.name)) {
                if !run_entry(e, &toml::Table::new(), &[], &s)? {
                    all = false;
                    failed.push(e.name);
                }
            }
            println!("suite: {}", if all { "PASS".to_string() } else { format!("FAIL ({})", failed.join(", ")) });
            Ok(all)
        }
        Command::SweepDeltaPlus { params, config } => {
            let file = match config {
                Some(path) => ConfigFile::load(path)?,
                None => ConfigFile::default(),
            };
            let s = settings(&cli, &file)?;
            run_sweep(&file.params, params, &s)
        }
    }
}

fn run_sweep(file: &toml::Table, overrides: &[String], s: &Settings) -> Result<bool, CliError> {
    let params = params::resolve(sweep::PARAMS, sweep::NAME, file, overrides)?;
    let (report, rows) = sweep::run(&params, s.tol)?;
    let outcome = Outcome { report: report.sorted(), notes: Vec::new() };
    let mut doc = Document::new(&outcome.report, &params, s.seed, s.tol, &outcome.notes);
    doc.rows = Some(&rows);
    finish(&outcome, &doc, &s.out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
