use clap::{Parser, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;
use submersion_lab::config::seed_from_env;
use submersion_lab::{render, run, CliError, Command, Format, RunConfig, Source};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CommandArg {
    Check,
    Adapt,
    Oracle,
    Identities,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Biharmonicity checks, frame adaptation and finite-difference oracles for
/// Riemannian submersions with one-dimensional fibres.
#[derive(Debug, Parser)]
#[command(name = "submersion-lab", version)]
struct Args {
    #[arg(value_enum)]
    command: CommandArg,
    /// Catalog example: flat, hyperbolic-slice, hopf, nil3 (append -sheared for the sheared chart).
    #[arg(long, conflicts_with = "spec")]
    example: Option<String>,
    /// Spec file with integrability data.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Base dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Curvature of the total space.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Finite-difference step.
    #[arg(long, default_value_t = submersion_core::numgeom::DEFAULT_H)]
    h: f64,
    /// Residual tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
}

fn config(args: Args) -> Result<RunConfig, CliError> {
    let command = match args.command {
        CommandArg::Check => Command::Check,
        CommandArg::Adapt => Command::Adapt,
        CommandArg::Oracle => Command::Oracle,
        CommandArg::Identities => Command::Identities,
    };
    let source = match (args.example, args.spec) {
        (Some(name), _) => Source::Example(name),
        (None, Some(path)) => Source::Spec(path),
        (None, None) => Source::None,
    };
    let mut cfg = RunConfig::new(command, source);
    cfg.n = args.n;
    cfg.c = args.c;
    cfg.h = args.h;
    cfg.tol = args.tol;
    cfg.out = args.out;
    cfg.format = match args.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    cfg.seed = seed_from_env()?;
    Ok(cfg)
}

fn execute(args: Args) -> Result<i32, CliError> {
    let cfg = config(args)?;
    let outcome = run(&cfg)?;
    let text = render(&outcome, cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e))?,
        None => print!("{text}"),
    }
    Ok(outcome.exit_code())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = Args::parse();
    match execute(args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
