//! Command-line front end for the guarded recursion laboratory.
//!
//! Three subcommands:
//!
//! * `laws` — run equational-law suites against one or more models and emit
//!   a replayable report (text or JSON).
//! * `solve` — parse a guarded equation system from a file, print its unique
//!   solution as depth-k truncations in the input syntax, and optionally
//!   re-verify the solution square.
//! * `search` — probe an open implication for counterexamples over the
//!   perturbed lifting variants; findings are data, not failures.
//!
//! Exit codes: 0 success, 1 scored failure (or unguarded/failed check in
//! `solve`), 2 configuration or parse error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use guarded_core::cat::CatError;
use guarded_core::citm::EquationSystem;
use guarded_core::laws::search::{run_search, SearchConfig, SearchTarget};
use guarded_core::laws::suite::{
    parse_laws, parse_models, run_suite, scored_failures, SizeProfile, SuiteConfig,
};
use guarded_core::verdict::reports_to_json;

#[derive(Parser)]
#[command(name = "guarded", version, about = "Guarded fixpoint laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run law suites and report verdicts per (model, law) pair.
    Laws(LawsArgs),
    /// Solve a guarded equation system and print truncated solution trees.
    Solve(SolveArgs),
    /// Hunt for counterexamples to an open implication.
    Search(SearchArgs),
}

#[derive(Args)]
struct LawsArgs {
    /// Models to check: comma-separated names or `all`.
    #[arg(long, default_value = "all")]
    model: String,
    /// Laws to check: comma-separated names or groups (`conway`, `trace`,
    /// `dinat`, `derived`, `all`).
    #[arg(long, default_value = "all")]
    laws: String,
    /// Trials per (model, law) pair; must be at least 1.
    #[arg(long, default_value_t = 200)]
    trials: u32,
    /// Run seed; identical config + seed replays byte-identically.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Truncation depth for term-model equality; must be at least 1.
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Size profile: small, medium, or large.
    #[arg(long, default_value = "medium")]
    sizes: String,
    /// Also write the report to this file (same bytes as stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SolveArgs {
    /// Path to the equation-system file.
    file: PathBuf,
    /// Unfolding depth k; solutions print as depth-k truncations.
    #[arg(long, default_value_t = 4)]
    depth: u32,
    /// Re-verify the solution square at the same depth.
    #[arg(long)]
    check: bool,
    /// Also write the output to this file (same bytes as stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: text or json.
    #[arg(long, default_value = "text")]
    format: String,
}

#[derive(Args)]
struct SearchArgs {
    /// Implication to probe: dd-in-lift-variants, d2-from-conway, or
    /// d2-from-d1.
    target: String,
    /// Candidate budget: how many perturbed operators to examine.
    #[arg(long, default_value_t = 64)]
    trials: u32,
    /// Run seed; identical config + seed replays byte-identically.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Size profile: small, medium, or large.
    #[arg(long, default_value = "medium")]
    sizes: String,
    /// Also write the findings to this file (same bytes as stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: text or json.
    #[arg(long, default_value = "json")]
    format: String,
}

/// Output formats shared by every subcommand.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

impl Format {
    fn parse(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => bail!("unknown format `{other}` (expected `text` or `json`)"),
        }
    }
}

/// Print `body` to stdout and mirror the same bytes to `out` when given.
fn emit(body: &str, out: Option<&PathBuf>) -> Result<()> {
    print!("{body}");
    if let Some(path) = out {
        fs::write(path, body).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn cmd_laws(args: &LawsArgs) -> Result<ExitCode> {
    if args.trials == 0 {
        bail!("--trials must be at least 1");
    }
    if args.depth == 0 {
        bail!("--depth must be at least 1");
    }
    let models = parse_models(&args.model).map_err(anyhow::Error::msg)?;
    let laws = parse_laws(&args.laws).map_err(anyhow::Error::msg)?;
    let sizes = SizeProfile::parse(&args.sizes).map_err(anyhow::Error::msg)?;
    let format = Format::parse(&args.format)?;

    let cfg = SuiteConfig {
        trials: args.trials,
        seed: args.seed,
        depth: args.depth,
        sizes,
        ..SuiteConfig::default()
    };
    let reports = run_suite(&models, &laws, &cfg);
    let failures = scored_failures(&reports);

    let body = match format {
        Format::Json => format!("{}\n", reports_to_json(&reports)),
        Format::Text => {
            let mut lines: Vec<String> = reports.iter().map(|r| r.text_line()).collect();
            lines.push(format!(
                "suite: {} scored failure(s) across {} report(s)",
                failures,
                reports.len()
            ));
            format!("{}\n", lines.join("\n"))
        }
    };
    emit(&body, args.out.as_ref())?;

    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    if args.depth == 0 {
        bail!("--depth must be at least 1");
    }
    let format = Format::parse(&args.format)?;
    let src = fs::read_to_string(&args.file)
        .with_context(|| format!("reading {}", args.file.display()))?;
    let system = EquationSystem::parse(&src).map_err(anyhow::Error::new)?;

    let sol = match system.solve(args.depth) {
        Ok(sol) => sol,
        Err(CatError::Unguarded { variable }) => {
            eprintln!(
                "error: the equation for `{variable}` is unguarded: its right-hand \
                 side is only a recursion variable"
            );
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(e.into()),
    };
    let checked = args.check.then(|| system.check_square(&sol, args.depth));

    let body = match format {
        Format::Text => {
            let mut lines = system.render_solution(&sol, args.depth);
            if let Some(ok) = checked {
                lines.push(format!(
                    "square: {} (depth {})",
                    if ok { "ok" } else { "FAIL" },
                    args.depth
                ));
            }
            format!("{}\n", lines.join("\n"))
        }
        Format::Json => {
            let vars: Vec<serde_json::Value> = system
                .vars()
                .iter()
                .zip(&sol)
                .map(|(name, term)| {
                    serde_json::json!({
                        "name": name,
                        "value": system.render_term(term, args.depth),
                    })
                })
                .collect();
            let mut obj = serde_json::json!({
                "depth": args.depth,
                "vars": vars,
            });
            if let Some(ok) = checked {
                obj["check"] = serde_json::json!(ok);
            }
            format!("{}\n", serde_json::to_string_pretty(&obj)?)
        }
    };
    emit(&body, args.out.as_ref())?;

    Ok(if checked == Some(false) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_search(args: &SearchArgs) -> Result<ExitCode> {
    let target = SearchTarget::parse(&args.target).map_err(anyhow::Error::msg)?;
    let sizes = SizeProfile::parse(&args.sizes).map_err(anyhow::Error::msg)?;
    let format = Format::parse(&args.format)?;

    let cfg = SearchConfig {
        budget: args.trials,
        seed: args.seed,
        sizes,
    };
    let outcome = run_search(target, &cfg);

    let body = match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&outcome)?),
        Format::Text => {
            let mut lines = vec![format!(
                "search {}: budget {}, screened out {}, {} finding(s)",
                outcome.target,
                outcome.budget,
                outcome.screened_out,
                outcome.findings.len()
            )];
            for f in &outcome.findings {
                lines.push(format!(
                    "  trial {} seed {} variant {} law {}: {} != {}  [{}]",
                    f.trial, f.seed, f.variant, f.law, f.lhs, f.rhs, f.instance
                ));
            }
            lines.push(format!("note: {}", outcome.note));
            format!("{}\n", lines.join("\n"))
        }
    };
    emit(&body, args.out.as_ref())?;

    // Findings are data, not failures: a search run always exits cleanly.
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Laws(args) => cmd_laws(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Search(args) => cmd_search(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
