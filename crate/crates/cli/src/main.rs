use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use kinetic_virial::reports::{emit, OutputFormat, RunOutcome};
use kinetic_virial::{run_from_config, Model, RunConfig};

/// Worker-count override for scans.
const WORKERS_ENV: &str = "VIRIAL_WORKERS";

#[derive(Parser)]
#[command(
    name = "kvirial",
    version,
    about = "Static kinetic steady states and their virial checks"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Build one state (or a scan) and write its table
    Build(Args),
    /// Run a parameter scan and write one row per point
    Scan(Args),
    /// Run every inequality and identity check; the exit code reports the verdict
    Check(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long)]
    config: PathBuf,
    /// overrides the configured output format
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// overrides the configured output path
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Vp,
    Nv,
    Ev,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Vp => Model::Vp,
            ModelArg::Nv => Model::Nv,
            ModelArg::Ev => Model::Ev,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

fn load(args: &Args) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(m) = args.model.map(Model::from) {
        match cfg.model {
            Some(c) if c != m => bail!(
                "--model {} conflicts with model {} in {}",
                m.tag(),
                c.tag(),
                args.config.display()
            ),
            _ => cfg.model = Some(m),
        }
    }
    if let Some(f) = args.format {
        cfg.output.format = match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        };
    }
    if args.output.is_some() {
        cfg.output.path = args.output.clone();
    }
    Ok(cfg)
}

fn configure_workers() -> anyhow::Result<()> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("{WORKERS_ENV}={v} is not a worker count"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn print_checks(outcome: &RunOutcome) -> bool {
    let mut residuals_ok = true;
    match outcome {
        RunOutcome::Single { report, .. } => {
            for c in &report.checks {
                let verdict = if c.trivial {
                    "TRIVIAL"
                } else if c.passed {
                    "PASS"
                } else {
                    "FAIL"
                };
                println!("{verdict:7} {}  margin {:.6e}", c.name, c.margin);
            }
            for r in &report.residuals {
                let verdict = if r.within_limit { "PASS" } else { "FAIL" };
                println!(
                    "{verdict:7} {}  relative {:.3e} (limit {:.0e})",
                    r.name, r.relative, r.limit
                );
                residuals_ok &= r.within_limit;
            }
        }
        RunOutcome::Scan(t) => {
            for r in &t.rows {
                let verdict = match (&r.failure, r.checks_passed) {
                    (Some(code), _) => format!("ERROR   {code}"),
                    (None, true) => "PASS".to_string(),
                    (None, false) => "FAIL".to_string(),
                };
                println!("{verdict:7} param {:.6e}", r.param);
                for (name, m) in r.margins.iter().filter(|(_, m)| **m < 0.0) {
                    println!("        {name}  margin {m:.6e}");
                }
            }
            if let Some(i) = t.binding_argmax {
                println!("binding maximum at param {:.6e}", t.rows[i].param);
            }
        }
    }
    residuals_ok
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    configure_workers()?;
    let (args, check) = match &cli.verb {
        Verb::Build(a) => (a, false),
        Verb::Scan(a) => (a, false),
        Verb::Check(a) => (a, true),
    };
    let cfg = load(args)?;
    if matches!(cli.verb, Verb::Scan(_)) && cfg.scan.is_none() {
        bail!("config {} has no scan section", args.config.display());
    }
    let outcome = run_from_config(&cfg)?;
    if let RunOutcome::Scan(t) = &outcome {
        for r in t.rows.iter().filter(|r| r.failure.is_some()) {
            eprintln!(
                "build failed at param {:e}: {}",
                r.param,
                r.failure.as_deref().unwrap_or_default()
            );
        }
    }
    let mut code = outcome.exit_code() as u8;
    if check {
        let residuals_ok = print_checks(&outcome);
        if cfg.output.path.is_some() {
            emit(&outcome, cfg.output.format, cfg.output.path.as_deref())?;
        }
        if code == 0 && !residuals_ok {
            code = 2;
        }
    } else {
        emit(&outcome, cfg.output.format, cfg.output.path.as_deref())?;
    }
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
