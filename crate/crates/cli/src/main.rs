//! `curvecode` command-line front end.
//!
//! Exit codes: 0 success, 1 runtime error, 2 invalid input, 3 the requested
//! construction is infeasible on the given system.

mod commands;
mod config;
mod inputs;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{LevelsField, RationalField, Settings};

#[derive(Debug)]
pub enum CliError {
    Runtime(String),
    Validation(String),
    Infeasible(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Infeasible(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Runtime(m) => write!(f, "error: {m}"),
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Infeasible(m) => write!(f, "infeasible: {m}"),
        }
    }
}

#[derive(Parser)]
#[command(name = "curvecode", version, about = "Code discretized functions and forge witnesses with prescribed word frequencies")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `dyadic`, `uniform:<base>`, or a file with one level per line.
    #[arg(long, global = true)]
    system: Option<String>,
    /// Depth of a uniform system.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// `x`, `const:c`, `line:s,c`, `zigzag:k,a`, `random:k`, or a breakpoint file.
    #[arg(long, global = true)]
    function: Option<String>,
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Worker threads for per-level work.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for `random:k` functions.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Quantitative, qualitative and stretched codes plus statistics per level.
    Code {
        /// `a..b` (inclusive) or `a,b,c`; defaults to every level.
        #[arg(long)]
        levels: Option<String>,
    },
    /// Build a witness near the function whose code has word `w` at frequency `alpha`.
    Forge {
        /// Comma-separated symbols, e.g. `1,-1`.
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        t: Option<u32>,
        #[arg(long)]
        eps: Option<String>,
        /// `qualitative` or `quantitative`.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        min_level: Option<usize>,
    },
    /// Build a witness whose steps alternate beyond ±jump.
    Zigzag {
        #[arg(long)]
        jump: Option<u64>,
        #[arg(long)]
        eps: Option<String>,
        /// Defaults to the deepest level.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Compare a line's stretched code with its cutting sequence per level.
    Sturmian {
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        intercept: Option<String>,
        #[arg(long)]
        levels: Option<String>,
    },
    /// Per-level table and SVG plot: `freq` (word frequency of the function)
    /// or `sturmian` (line convergence).
    Sweep {
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        levels: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        beta: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        intercept: Option<String>,
    },
}

fn parse_word(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Validation(format!("cannot read word {text:?}")))
}

fn text_rational(s: Option<String>) -> Option<RationalField> {
    s.map(RationalField::Text)
}

fn flag_settings(common: &Common, command: Command) -> Result<(Settings, &'static str), CliError> {
    let mut s = Settings {
        system: common.system.clone(),
        depth: common.depth,
        function: common.function.clone(),
        out_dir: common.out_dir.clone(),
        jobs: common.jobs,
        seed: common.seed,
        ..Settings::default()
    };
    let name = match command {
        Command::Code { levels } => {
            s.levels = levels.map(LevelsField::Text);
            "code"
        }
        Command::Forge { w, alpha, t, eps, mode, min_level } => {
            s.w = w.as_deref().map(parse_word).transpose()?;
            s.alpha = text_rational(alpha);
            s.t = t;
            s.eps = text_rational(eps);
            s.mode = mode;
            s.min_level = min_level;
            "forge"
        }
        Command::Zigzag { jump, eps, level } => {
            s.jump = jump;
            s.eps = text_rational(eps);
            s.level = level;
            "zigzag"
        }
        Command::Sturmian { beta, intercept, levels } => {
            s.beta = text_rational(beta);
            s.intercept = text_rational(intercept);
            s.levels = levels.map(LevelsField::Text);
            "sturmian"
        }
        Command::Sweep { kind, levels, w, alpha, mode, beta, intercept } => {
            s.kind = kind;
            s.levels = levels.map(LevelsField::Text);
            s.w = w.as_deref().map(parse_word).transpose()?;
            s.alpha = text_rational(alpha);
            s.mode = mode;
            s.beta = text_rational(beta);
            s.intercept = text_rational(intercept);
            "sweep"
        }
    };
    Ok((s, name))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let file = match &cli.common.config {
        Some(path) => Settings::load(path)?,
        None => Settings::default(),
    };
    let (flags, name) = flag_settings(&cli.common, cli.command)?;
    let settings = file.overlay(flags);
    match name {
        "code" => commands::code(&settings),
        "forge" => commands::forge(&settings),
        "zigzag" => commands::zigzag(&settings),
        "sturmian" => commands::sturmian(&settings),
        _ => commands::sweep(&settings),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
