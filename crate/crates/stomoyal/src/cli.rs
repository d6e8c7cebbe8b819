use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use crate::commands::{run_command, Command, Options, OutputFormat};
use crate::diagnostics::{Code, Diagnostic};
use crate::document::{load_problem, parse_metric, parse_order};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

/// Exact stochastic Moyal products, brackets, moments and Sobolev norms.
#[derive(Debug, Parser)]
#[command(name = "stomoyal", version)]
struct Cli {
    /// star | bracket | cr | norm | expect | verify
    command: String,
    /// Functional names from the document, or expressions over its variables.
    args: Vec<String>,
    /// Problem document, JSON or block syntax; `-` reads standard input.
    #[arg(long)]
    input: PathBuf,
    /// Highest power of h to compute, or `auto`.
    #[arg(long)]
    order: Option<String>,
    /// flat | phase
    #[arg(long)]
    metric: Option<String>,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Paths per chunk; estimates depend on it, not on the worker count.
    #[arg(long)]
    chunk: Option<usize>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Integrability exponent of the Sobolev norm.
    #[arg(long)]
    p: Option<f64>,
    /// Derivative order for `cr` and `norm`.
    #[arg(long)]
    r: Option<usize>,
}

/// What a CLI invocation printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn render_diagnostic(d: &Diagnostic, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => format!("{d}\n"),
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({ "error": d.to_json() })).unwrap();
            s.push('\n');
            s
        }
    }
}

fn execute(cli: &Cli, format: OutputFormat) -> Result<Outcome, Diagnostic> {
    let command: Command = cli.command.parse()?;
    let order = cli
        .order
        .as_deref()
        .map(|s| {
            parse_order(s).ok_or_else(|| {
                Diagnostic::new(Code::Usage, format!("--order must be a nonnegative integer or auto, got {s:?}"))
            })
        })
        .transpose()?;
    let metric = cli
        .metric
        .as_deref()
        .map(|s| {
            parse_metric(s)
                .ok_or_else(|| Diagnostic::new(Code::Usage, format!("--metric must be flat or phase, got {s:?}")))
        })
        .transpose()?;
    if cli.chunk == Some(0) || cli.workers == Some(0) || cli.samples == Some(0) {
        return Err(Diagnostic::new(Code::Usage, "--samples, --chunk and --workers must be positive"));
    }
    let text = if cli.input.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Diagnostic::new(Code::Io, format!("cannot read standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(&cli.input)
            .map_err(|e| Diagnostic::new(Code::Io, format!("cannot read {}: {e}", cli.input.display())))?
    };
    let problem = load_problem(&text).map_err(|mut d| {
        d.message = format!("{}: {}", cli.input.display(), d.message);
        d
    })?;
    let opts = Options {
        order,
        metric,
        samples: cli.samples,
        seed: cli.seed,
        chunk: cli.chunk,
        workers: cli.workers,
        r: cli.r,
        p: cli.p,
    };
    let out = run_command(&problem, command, &cli.args, &opts)?;
    Ok(Outcome { stdout: out.render(format), stderr: String::new(), code: out.exit_code() })
}

/// Runs the command line `argv` (including the program name).
pub fn run_cli<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { stdout: rendered, stderr: String::new(), code: 0 }
                }
                _ => {
                    let first = rendered.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
                    let d = Diagnostic::new(Code::Usage, first);
                    Outcome { stdout: String::new(), stderr: render_diagnostic(&d, OutputFormat::Text), code: 2 }
                }
            };
        }
    };
    let format = match cli.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Json => OutputFormat::Json,
    };
    execute(&cli, format).unwrap_or_else(|d| Outcome {
        stdout: String::new(),
        stderr: render_diagnostic(&d, format),
        code: 2,
    })
}
