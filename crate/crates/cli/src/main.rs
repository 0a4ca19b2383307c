use std::process::ExitCode;

use arithext_cli::{catalog, parse_scenario, run_scenario, suite, CliError, Report, Scenario, Settings};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "arithext", version, about = "Run arithmetic-extension scenarios and the acceptance suite")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    #[arg(long, global = true)]
    tol_structural: Option<f64>,
    #[arg(long, global = true)]
    tol_quadrature: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    nmax_torsion: Option<u64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file (JSON or TOML) or a catalog entry.
    Run {
        #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
        file: Option<String>,
        #[arg(long)]
        catalog: Option<String>,
    },
    /// List or print built-in scenarios.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Run every acceptance criterion.
    VerifySuite,
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Emit { name: String },
}

fn settings(g: &Global) -> Result<Settings, CliError> {
    let mut s = Settings::default();
    for (name, v) in [("tol-structural", g.tol_structural), ("tol-quadrature", g.tol_quadrature)] {
        if let Some(t) = v {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Input(format!("--{name} must be positive")));
            }
        }
    }
    if g.nmax_torsion == Some(0) {
        return Err(CliError::Input("--nmax-torsion must be positive".into()));
    }
    s.tol_structural = g.tol_structural.unwrap_or(s.tol_structural);
    s.tol_quadrature = g.tol_quadrature.unwrap_or(s.tol_quadrature);
    s.seed = g.seed.unwrap_or(s.seed);
    s.nmax_torsion = g.nmax_torsion.unwrap_or(s.nmax_torsion);
    Ok(s)
}

fn print_report(r: &Report, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(r).expect("report serializes"));
        return;
    }
    println!("{} ({}): {}", r.scenario, r.kind, if r.passed { "PASS" } else { "FAIL" });
    for p in &r.predicates {
        println!("  {:<26} {}", p.check, if p.passed { "pass" } else { "FAIL" });
        if !p.passed {
            println!("    {}", p.values);
        }
    }
}

fn load(file: Option<String>, entry: Option<String>) -> Result<Scenario, CliError> {
    if let Some(name) = entry {
        return catalog::entry(&name).ok_or(CliError::UnknownEntry(name));
    }
    let path = file.unwrap_or_default();
    let text = std::fs::read_to_string(&path)?;
    parse_scenario(&path, &text)
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let st = settings(&cli.global)?;
    let json = cli.global.json;
    match cli.command {
        Command::Run { file, catalog } => {
            let report = run_scenario(&load(file, catalog)?, &st)?;
            print_report(&report, json);
            Ok(report.passed)
        }
        Command::Catalog { action: CatalogAction::List } => {
            let all = catalog::catalog();
            if json {
                let names: Vec<_> = all.iter().map(|s| serde_json::json!({ "name": s.name(), "kind": s.kind() })).collect();
                println!("{}", serde_json::to_string_pretty(&names).expect("list serializes"));
            } else {
                for s in &all {
                    println!("{:<28} {}", s.name(), s.kind());
                }
            }
            Ok(true)
        }
        Command::Catalog { action: CatalogAction::Emit { name } } => {
            let s = catalog::entry(&name).ok_or(CliError::UnknownEntry(name))?;
            println!("{}", serde_json::to_string_pretty(&s).expect("scenario serializes"));
            Ok(true)
        }
        Command::VerifySuite => {
            let report = suite::verify_suite(&st);
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                for line in suite::human_lines(&report) {
                    println!("{line}");
                }
            }
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
