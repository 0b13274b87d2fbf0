use std::fmt::Write as _;
use std::fs;
use std::io::{self, IsTerminal, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use fpd_core::script::{self, SourceMap};
use fpd_core::xml::{self, Mode};
use fpd_core::{list_rules, validate, Diagnostic, Model, Placement, RuleConfig, RuleId, Severity, StateKind};
use serde_json::json;

/// Validate, convert, format and inspect FPD process models.
#[derive(Parser, Debug)]
#[command(name = "fpd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check models against the rule catalog.
    Validate {
        #[arg(value_name = "PATH", required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Comma-separated rule codes or names to run (default: all).
        #[arg(long, value_delimiter = ',')]
        rules: Vec<RuleId>,
        /// Override a rule's severity, e.g. `R13=error`. Repeatable.
        #[arg(long = "severity", value_name = "RULE=LEVEL", value_parser = parse_override)]
        severities: Vec<(RuleId, Severity)>,
        #[command(flatten)]
        input: InputOpts,
    },
    /// Convert between `.fpd` and `.xml`.
    Convert {
        #[arg(value_name = "PATH")]
        path: PathBuf,
        #[arg(long, value_enum)]
        to: InputFormat,
        /// Output file (default: standard output).
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[command(flatten)]
        input: InputOpts,
    },
    /// Rewrite files in canonical form.
    Fmt {
        #[arg(value_name = "PATH", required = true)]
        paths: Vec<PathBuf>,
        /// Report files that would change instead of rewriting them.
        #[arg(long)]
        check: bool,
    },
    /// Print element counts per process.
    Report {
        #[arg(value_name = "PATH")]
        path: PathBuf,
        #[command(flatten)]
        input: InputOpts,
    },
    /// Print the rule catalog.
    Rules,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct InputOpts {
    /// Input format, overriding the file extension.
    #[arg(long, value_enum)]
    from: Option<InputFormat>,
    /// Skip unknown XML content with a warning instead of failing.
    #[arg(long)]
    lenient: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Machine,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum InputFormat {
    Fpd,
    Xml,
}

fn parse_override(s: &str) -> Result<(RuleId, Severity), String> {
    let (rule, level) = s
        .split_once('=')
        .ok_or_else(|| format!("expected RULE=LEVEL, got `{s}`"))?;
    let rule = rule.parse::<RuleId>().map_err(|e| e.to_string())?;
    Ok((rule, level.parse()?))
}

const STATUS_VIOLATIONS: u8 = 1;
const STATUS_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let color = Color::from_env();
    let result = match cli.command {
        Command::Validate {
            paths,
            format,
            rules,
            severities,
            input,
        } => {
            let mut config = if rules.is_empty() {
                RuleConfig::default()
            } else {
                RuleConfig::only(rules)
            };
            for (rule, severity) in severities {
                config.set_severity(rule, severity);
            }
            Ok(cmd_validate(&paths, format, &config, input, color))
        }
        Command::Convert { path, to, out, input } => cmd_convert(&path, to, out.as_deref(), input),
        Command::Fmt { paths, check } => Ok(cmd_fmt(&paths, check)),
        Command::Report { path, input } => cmd_report(&path, input),
        Command::Rules => {
            cmd_rules();
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(STATUS_ERROR)
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Color(bool);

impl Color {
    fn from_env() -> Self {
        match std::env::var("FPD_COLOR").as_deref() {
            Ok("always") => Color(true),
            Ok("never") => Color(false),
            _ => Color(io::stdout().is_terminal()),
        }
    }

    fn paint(self, code: &str, text: &str) -> String {
        if self.0 {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_owned()
        }
    }
}

struct Loaded {
    model: Model,
    spans: Option<SourceMap>,
}

fn detect(path: &Path, from: Option<InputFormat>) -> Result<InputFormat> {
    if let Some(f) = from {
        return Ok(f);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("fpd") => Ok(InputFormat::Fpd),
        Some("xml") => Ok(InputFormat::Xml),
        _ => bail!("{}: unknown file type; use --from fpd|xml", path.display()),
    }
}

fn load(path: &Path, opts: InputOpts) -> Result<Loaded> {
    let format = detect(path, opts.from)?;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let name = path.display().to_string();
    match format {
        InputFormat::Fpd => match script::parse_with_spans(&text, &name) {
            Ok((model, spans)) => Ok(Loaded {
                model,
                spans: Some(spans),
            }),
            Err(errors) => {
                let mut msg = String::new();
                for (i, e) in errors.iter().enumerate() {
                    if i > 0 {
                        msg.push_str("\nerror: ");
                    }
                    let _ = write!(msg, "{e}");
                }
                Err(anyhow!(msg))
            }
        },
        InputFormat::Xml => {
            let mode = if opts.lenient { Mode::Lenient } else { Mode::Strict };
            let (model, warnings) = xml::deserialize_with(&text, mode).map_err(|e| anyhow!("{name}: {e}"))?;
            for w in warnings {
                eprintln!("warning: {name}: {w}");
            }
            Ok(Loaded { model, spans: None })
        }
    }
}

fn cmd_validate(paths: &[PathBuf], format: Format, config: &RuleConfig, input: InputOpts, color: Color) -> u8 {
    let mut status = 0;
    let stdout = io::stdout();
    for path in paths {
        let loaded = match load(path, input) {
            Ok(l) => l,
            Err(e) => {
                eprintln!("error: {e:#}");
                status = STATUS_ERROR;
                continue;
            }
        };
        let diags = validate(&loaded.model, config);
        let file = path.display().to_string();
        let mut out = String::new();
        match format {
            Format::Machine => {
                for d in &diags {
                    out.push_str(&machine_record(&file, d, loaded.spans.as_ref()));
                    out.push('\n');
                }
            }
            Format::Text => {
                for d in &diags {
                    text_record(&mut out, &file, d, loaded.spans.as_ref(), color);
                }
                let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
                let warnings = diags.len() - errors;
                let _ = writeln!(out, "{file}: {errors} errors, {warnings} warnings");
            }
        }
        let _ = stdout.lock().write_all(out.as_bytes());
        if diags.iter().any(|d| d.severity == Severity::Error) {
            status = status.max(STATUS_VIOLATIONS);
        }
    }
    status
}

fn location(file: &str, d: &Diagnostic, spans: Option<&SourceMap>) -> String {
    spans
        .and_then(|s| d.elements.iter().find_map(|e| s.get(e)))
        .map_or_else(|| file.to_owned(), ToString::to_string)
}

fn text_record(out: &mut String, file: &str, d: &Diagnostic, spans: Option<&SourceMap>, color: Color) {
    let label = match d.severity {
        Severity::Error => color.paint("1;31", "error"),
        Severity::Warning => color.paint("1;33", "warning"),
    };
    let _ = writeln!(
        out,
        "{}: {label}[{} {}]: {}",
        location(file, d, spans),
        d.rule.code(),
        d.rule.name(),
        d.message
    );
    let _ = writeln!(out, "    process {}; elements: {}", d.process_id, d.elements.join(", "));
}

fn machine_record(file: &str, d: &Diagnostic, spans: Option<&SourceMap>) -> String {
    let span = spans.and_then(|s| d.elements.iter().find_map(|e| s.get(e)));
    let mut record = json!({
        "file": file,
        "rule": d.rule.code(),
        "severity": d.severity.as_str(),
        "processId": d.process_id,
        "elements": d.elements,
        "message": d.message,
    });
    if let Some(span) = span {
        record["line"] = json!(span.start_line);
        record["column"] = json!(span.start_col);
    }
    record.to_string()
}

fn render(model: &Model, to: InputFormat) -> String {
    match to {
        InputFormat::Fpd => script::print(model),
        InputFormat::Xml => xml::serialize(model),
    }
}

fn cmd_convert(path: &Path, to: InputFormat, out: Option<&Path>, input: InputOpts) -> Result<u8> {
    let loaded = load(path, input)?;
    let diags = validate(&loaded.model, &RuleConfig::default());
    let errors = diags.iter().filter(|d| d.severity == Severity::Error).count();
    if errors > 0 {
        eprintln!(
            "warning: {}: model has {errors} rule violations; converting anyway",
            path.display()
        );
    }
    let text = render(&loaded.model, to);
    match out {
        Some(out) => fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn cmd_fmt(paths: &[PathBuf], check: bool) -> u8 {
    let mut status = 0;
    for path in paths {
        match fmt_one(path, check) {
            Ok(true) if check => {
                println!("would reformat {}", path.display());
                status = status.max(STATUS_VIOLATIONS);
            }
            Ok(_) => {}
            Err(e) => {
                eprintln!("error: {e:#}");
                status = STATUS_ERROR;
            }
        }
    }
    status
}

/// Returns whether the file is not in canonical form.
fn fmt_one(path: &Path, check: bool) -> Result<bool> {
    let format = detect(path, None)?;
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let canonical = match format {
        InputFormat::Fpd => script::print(
            &script::parse_with_spans(&text, &path.display().to_string())
                .map_err(|errors| {
                    anyhow!(errors
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join("\nerror: "))
                })?
                .0,
        ),
        InputFormat::Xml => xml::canonicalize(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?,
    };
    let changed = canonical != text;
    if changed && !check {
        fs::write(path, canonical).with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(changed)
}

fn cmd_report(path: &Path, input: InputOpts) -> Result<u8> {
    let model = load(path, input)?.model;
    let mut out = String::new();
    for p in model.processes() {
        let states_of = |k: StateKind| p.states.iter().filter(|s| s.kind == k).count();
        let placed = |pl: Placement| p.states.iter().filter(|s| s.placement == pl).count();
        let _ = writeln!(out, "process {} ({})", p.name(), p.id());
        let _ = writeln!(
            out,
            "  states: {} (product {}, energy {}, information {}; boundary {}, intermediate {})",
            p.states.len(),
            states_of(StateKind::Product),
            states_of(StateKind::Energy),
            states_of(StateKind::Information),
            placed(Placement::Boundary),
            placed(Placement::Intermediate),
        );
        let _ = writeln!(out, "  operators: {}", p.operators.len());
        let _ = writeln!(out, "  resources: {}", p.resources.len());
        let _ = writeln!(out, "  connectors: {}", p.connectors.len());
        let _ = writeln!(out, "  flows: {}", p.flows.len());
        let _ = writeln!(out, "  usages: {}", p.usages.len());
        let _ = writeln!(out, "  decomposition depth: {}", 1 + model.decomposition_depth(p.id()));
    }
    let depth = model
        .root_process_ids()
        .iter()
        .map(|id| 1 + model.decomposition_depth(id))
        .max()
        .unwrap_or(0);
    let _ = writeln!(out, "model decomposition depth: {depth}");
    io::stdout().write_all(out.as_bytes())?;
    Ok(0)
}

fn cmd_rules() {
    for r in list_rules() {
        println!(
            "{:<4} {:<26} {:<8} {}",
            r.code,
            r.name,
            r.default_severity.as_str(),
            r.description
        );
    }
}
