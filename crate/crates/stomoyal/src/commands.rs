use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};
use stomoyal_core::monte_carlo::{z_score, Estimate, DEFAULT_CHUNK_SIZE, Z_THRESHOLD};
use stomoyal_core::prelude::*;
use stomoyal_core::scalar::{format_rational, to_f64};
use stomoyal_core::star::AxiomCheck;

use crate::diagnostics::{Code, Diagnostic};
use crate::document::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Star,
    Bracket,
    Cr,
    Norm,
    Expect,
    Verify,
}

impl Command {
    pub const ALL: [Command; 6] =
        [Command::Star, Command::Bracket, Command::Cr, Command::Norm, Command::Expect, Command::Verify];

    pub fn name(self) -> &'static str {
        match self {
            Command::Star => "star",
            Command::Bracket => "bracket",
            Command::Cr => "cr",
            Command::Norm => "norm",
            Command::Expect => "expect",
            Command::Verify => "verify",
        }
    }

    fn arity(self) -> usize {
        match self {
            Command::Star | Command::Bracket | Command::Cr => 2,
            Command::Norm | Command::Expect => 1,
            Command::Verify => 3,
        }
    }
}

impl FromStr for Command {
    type Err = Diagnostic;

    fn from_str(s: &str) -> Result<Self, Diagnostic> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
            Diagnostic::new(Code::Usage, format!("unknown command {s:?}; expected one of {}", names.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

/// Flags shared by all commands. `None` falls back to the document or to the
/// command's default.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub order: Option<Truncation>,
    pub metric: Option<MetricProfile>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub chunk: Option<usize>,
    pub workers: Option<usize>,
    pub r: Option<usize>,
    pub p: Option<f64>,
}

impl Options {
    fn sampler(&self) -> SamplerConfig {
        let mut cfg = SamplerConfig::new(self.seed).with_chunk_size(self.chunk.unwrap_or(DEFAULT_CHUNK_SIZE));
        if let Some(w) = self.workers {
            cfg = cfg.with_workers(w);
        }
        cfg
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutput {
    pub text: String,
    pub json: Value,
    /// False when a verification failed.
    pub success: bool,
}

impl CommandOutput {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("outputs serialize");
                s.push('\n');
                s
            }
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.success {
            0
        } else {
            1
        }
    }
}

fn engine(e: impl std::fmt::Display) -> Diagnostic {
    Diagnostic::new(Code::Engine, e.to_string())
}

fn estimate_json(e: &Estimate) -> Value {
    json!({ "mean": e.mean, "stderr": e.stderr })
}

fn sampling_json(n: usize, cfg: &SamplerConfig) -> Value {
    json!({ "n": n, "seed": cfg.seed, "chunk_size": cfg.chunk_size })
}

/// Runs `command` on resolved arguments.
pub fn run_command(
    problem: &Problem,
    command: Command,
    args: &[String],
    opts: &Options,
) -> Result<CommandOutput, Diagnostic> {
    if args.len() != command.arity() {
        return Err(Diagnostic::new(
            Code::Usage,
            format!("{} takes {} functional arguments, got {}", command.name(), command.arity(), args.len()),
        ));
    }
    let fs = args.iter().map(|a| problem.resolve_argument(a)).collect::<Result<Vec<_>, _>>()?;
    let metric = opts.metric.unwrap_or(problem.document.metric);
    let truncation = opts.order.unwrap_or(problem.document.hbar_order);
    let base = json!({ "command": command.name(), "metric": metric.name(), "arguments": args });
    let with = |extra: Value| {
        let mut v = base.clone();
        v.as_object_mut().unwrap().extend(extra.as_object().unwrap().clone());
        v
    };

    match command {
        Command::Star => {
            let s = moyal_product(&fs[0], &fs[1], truncation, metric).map_err(engine)?;
            let coeffs: Vec<String> = s.coefficients().iter().map(|c| c.to_string()).collect();
            Ok(CommandOutput {
                text: format!("{s}\n"),
                json: with(json!({
                    "truncation_order": s.truncation_order(),
                    "terminated": s.terminated(),
                    "coefficients": coeffs,
                    "series": s.to_string(),
                })),
                success: true,
            })
        }
        Command::Bracket => {
            let b = poisson_bracket(&fs[0], &fs[1], metric).map_err(engine)?;
            Ok(CommandOutput { text: format!("{b}\n"), json: with(json!({ "result": b.to_string() })), success: true })
        }
        Command::Cr => {
            let r = opts.r.unwrap_or(1);
            let c = cochain(&fs[0], &fs[1], r, metric).map_err(engine)?;
            Ok(CommandOutput {
                text: format!("{c}\n"),
                json: with(json!({ "r": r, "result": c.to_string() })),
                success: true,
            })
        }
        Command::Expect => {
            let exact = expectation_exact(&fs[0]).map_err(engine)?;
            let mut text = format!("E = {}\n", format_rational(&exact));
            let mut out = with(json!({ "exact": format_rational(&exact) }));
            if let Some(n) = opts.samples {
                let cfg = opts.sampler();
                let batch = realize_samples(fs[0].atlas(), n, &cfg).map_err(engine)?;
                let est = estimate_moment(&fs[0], &batch, &cfg).map_err(engine)?;
                let z = z_score(est.mean, est.stderr, to_f64(&exact));
                let _ = writeln!(text, "estimate = {:.6} +/- {:.6} (z = {:.3})", est.mean, est.stderr, z);
                let obj = out.as_object_mut().unwrap();
                obj.insert("estimate".into(), estimate_json(&est));
                obj.insert("z".into(), json!(z));
                obj.insert("sampling".into(), sampling_json(n, &cfg));
            }
            Ok(CommandOutput { text, json: out, success: true })
        }
        Command::Norm => {
            let r = opts.r.unwrap_or(1);
            let p = opts.p.unwrap_or(2.0);
            if !(p.is_finite() && p >= 1.0) {
                return Err(Diagnostic::new(Code::Usage, format!("--p must be a finite number >= 1, got {p}")));
            }
            let exact = if p == 2.0 { Some(sobolev_norm_exact_p2(&fs[0], r).map_err(engine)?) } else { None };
            if exact.is_none() && opts.samples.is_none() {
                return Err(Diagnostic::new(
                    Code::Usage,
                    format!(
                        "the norm with p = {p} has no exact oracle; pass --samples (and optionally --seed, --chunk)"
                    ),
                ));
            }
            let mut text = String::new();
            let mut out = with(json!({ "r": r, "p": p }));
            let obj = out.as_object_mut().unwrap();
            if let Some(e) = &exact {
                let _ = writeln!(text, "norm^2 = {}", format_rational(&e.squared));
                let _ = writeln!(text, "norm = {:.6}", e.value);
                obj.insert("exact".into(), json!({ "squared": format_rational(&e.squared), "value": e.value }));
            }
            if let Some(n) = opts.samples {
                let cfg = opts.sampler();
                let batch = realize_samples(fs[0].atlas(), n, &cfg).map_err(engine)?;
                let est = estimate_sobolev_norm(&fs[0], r, p, &batch, &cfg).map_err(engine)?;
                let _ = write!(text, "estimate = {:.6} +/- {:.6}", est.mean, est.stderr);
                if let Some(e) = &exact {
                    let z = z_score(est.mean, est.stderr, e.value);
                    let _ = write!(text, " (z = {z:.3})");
                    obj.insert("z".into(), json!(z));
                }
                text.push('\n');
                obj.insert("estimate".into(), estimate_json(&est));
                obj.insert("sampling".into(), sampling_json(n, &cfg));
            }
            Ok(CommandOutput { text, json: out, success: true })
        }
        Command::Verify => verify(problem, &fs, args, truncation, metric, opts)
            .map(|(text, extra, ok)| CommandOutput { text, json: with(extra), success: ok }),
    }
}

fn verify(
    problem: &Problem,
    fs: &[Polynomial],
    args: &[String],
    truncation: Truncation,
    metric: MetricProfile,
    opts: &Options,
) -> Result<(String, Value, bool), Diagnostic> {
    let order = match truncation {
        Truncation::Order(n) => n,
        // every coefficient of (F*G)*H vanishes past the total degree
        Truncation::Auto => fs.iter().map(|f| f.degree() as usize).sum(),
    };
    let mut report = check_star_axioms(&fs[0], &fs[1], &fs[2], order, metric).map_err(engine)?;
    report.extend(check_poisson_axioms(&fs[0], &fs[1], &fs[2], metric).map_err(engine)?);

    let mut consistency = Vec::new();
    if let Some(n) = opts.samples {
        let cfg = opts.sampler();
        let batch = realize_samples(&problem.atlas, n, &cfg).map_err(engine)?;
        for (f, name) in fs.iter().zip(args) {
            let r = opts.r.unwrap_or(1);
            let c = consistency_report(f, r, &batch, &cfg).map_err(engine)?;
            let detail: Vec<String> = c.entries.iter().map(|e| format!("{} z = {:.3}", e.quantity, e.z)).collect();
            report.checks.push(AxiomCheck {
                axiom: format!("Monte Carlo agrees with exact moments for {name}"),
                passed: !c.flagged(),
                detail: format!("{} (threshold {Z_THRESHOLD})", detail.join(", ")),
            });
            consistency.push(c);
        }
    }

    let failed = report.checks.iter().filter(|c| !c.passed).count();
    let mut text = report.to_string();
    if failed == 0 {
        let _ = writeln!(text, "all {} checks passed", report.checks.len());
    } else {
        let _ = writeln!(text, "{failed} of {} checks failed", report.checks.len());
    }
    let mut extra = json!({ "order": order, "passed": failed == 0, "checks": report.checks });
    if opts.samples.is_some() {
        extra.as_object_mut().unwrap().insert("consistency".into(), json!(consistency));
    }
    Ok((text, extra, failed == 0))
}
