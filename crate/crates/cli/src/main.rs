use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use walkdir::WalkDir;

use prolint::config::{ModeSystem, DEFAULT_CONFIG_FILE};
use prolint::diagnostics::{render_json, render_text, Diagnostic, FileReport, Severity};
use prolint::rules::{catalog, is_known_rule};
use prolint::{check_format, format_source, lint_source, load_config, Config, SourceFile};

const EXIT_CLEAN: u8 = 0;
const EXIT_FINDINGS: u8 = 1;
const EXIT_TROUBLE: u8 = 2;

#[derive(Parser)]
#[command(name = "prolint", version, about = "Style checker and formatter for Prolog source")]
struct Cli {
    #[command(flatten)]
    opts: Options,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Options {
    /// Configuration file (default: ./.prolintrc when present).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    max_line_length: Option<usize>,
    /// Indent unit in spaces.
    #[arg(long, global = true, value_name = "N")]
    indent: Option<usize>,
    #[arg(long, global = true, value_name = "SYSTEM", value_parser = parse_mode_system)]
    mode_system: Option<ModeSystem>,
    #[arg(long, global = true, value_name = "ID,...", value_delimiter = ',')]
    enable: Vec<String>,
    #[arg(long, global = true, value_name = "ID,...", value_delimiter = ',')]
    disable: Vec<String>,
    /// Override one rule's severity, e.g. `I05=warning`. Repeatable.
    #[arg(long, global = true, value_name = "ID=LEVEL")]
    severity: Vec<String>,
    /// Lowest severity that makes `check` exit with 1.
    #[arg(long, global = true, value_name = "LEVEL", value_parser = parse_severity)]
    fail_on: Option<Severity>,
}

#[derive(Subcommand)]
enum Command {
    /// Lint files and directories.
    Check {
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
        #[arg(required = true, value_name = "PATH")]
        paths: Vec<String>,
    },
    /// Format files, printing the result unless --write or --check is given.
    Fmt {
        /// Rewrite files in place.
        #[arg(long, conflicts_with = "check")]
        write: bool,
        /// Report files that are not in canonical layout.
        #[arg(long)]
        check: bool,
        #[arg(required = true, value_name = "PATH")]
        paths: Vec<String>,
    },
    /// Print the rule catalog.
    Rules {
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

fn parse_mode_system(s: &str) -> Result<ModeSystem, String> {
    s.parse()
}

fn parse_severity(s: &str) -> Result<Severity, String> {
    s.parse()
}

/// A path to process, or standard input.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Input {
    Stdin,
    File(PathBuf),
}

impl Input {
    fn display(&self) -> String {
        match self {
            Input::Stdin => "<stdin>".to_string(),
            Input::File(p) => p.display().to_string(),
        }
    }

    fn load(&self) -> Result<SourceFile, String> {
        match self {
            Input::Stdin => {
                let mut bytes = Vec::new();
                io::stdin().read_to_end(&mut bytes).map_err(|e| format!("<stdin>: {e}"))?;
                SourceFile::from_bytes("<stdin>", bytes).map_err(|e| e.to_string())
            }
            Input::File(p) => SourceFile::load(p).map_err(|e| e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("prolint: {message}");
            EXIT_TROUBLE
        }
    };
    ExitCode::from(code)
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Rules { format } => {
            print!("{}", render_catalog(format));
            Ok(EXIT_CLEAN)
        }
        Command::Check { format, paths } => {
            let config = resolve_config(&cli.opts)?;
            let (inputs, missing) = collect_inputs(&paths, &config);
            Ok(check(&inputs, &config, format).max(missing))
        }
        Command::Fmt { write, check, paths } => {
            let config = resolve_config(&cli.opts)?;
            let (inputs, missing) = collect_inputs(&paths, &config);
            let mode = match (write, check) {
                (true, _) => FmtMode::Write,
                (_, true) => FmtMode::Check,
                _ => FmtMode::Print,
            };
            Ok(fmt(&inputs, &config, mode).max(missing))
        }
    }
}

fn resolve_config(opts: &Options) -> Result<Config, String> {
    let path = match &opts.config {
        Some(p) => Some(p.clone()),
        None => Some(PathBuf::from(DEFAULT_CONFIG_FILE)).filter(|p| p.is_file()),
    };
    let mut config = match path {
        Some(p) => {
            let text = fs::read_to_string(&p).map_err(|e| format!("{}: {e}", p.display()))?;
            let loaded = load_config(&text).map_err(|e| format!("{}: {e}", p.display()))?;
            for w in &loaded.warnings {
                eprintln!("prolint: {}: {w}", p.display());
            }
            loaded.config
        }
        None => Config::default(),
    };
    if let Some(n) = opts.max_line_length {
        config.max_line_length = n.max(1);
    }
    if let Some(n) = opts.indent {
        config.indent_size = n.max(1);
    }
    if let Some(m) = opts.mode_system {
        config.mode_system = m;
    }
    if let Some(s) = opts.fail_on {
        config.failure_threshold = s;
    }
    for (ids, on) in [(&opts.enable, true), (&opts.disable, false)] {
        for id in ids.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
            known(id)?;
            config.set_enabled(id, on);
        }
    }
    for item in &opts.severity {
        let (id, level) = item
            .split_once('=')
            .ok_or_else(|| format!("--severity expects ID=LEVEL, found `{item}`"))?;
        known(id.trim())?;
        config.set_severity(id.trim(), level.parse()?);
    }
    Ok(config)
}

fn known(id: &str) -> Result<(), String> {
    if is_known_rule(id) {
        Ok(())
    } else {
        Err(format!("unknown rule id `{id}` (see `prolint rules`)"))
    }
}

/// Expand directories to the source files beneath them. A directory that
/// cannot be walked is reported and makes the final exit code 2.
fn collect_inputs(paths: &[String], config: &Config) -> (Vec<Input>, u8) {
    let mut inputs = Vec::new();
    let mut status = EXIT_CLEAN;
    for p in paths {
        if p == "-" {
            inputs.push(Input::Stdin);
            continue;
        }
        let path = Path::new(p);
        if path.is_dir() {
            for entry in WalkDir::new(path).sort_by_file_name() {
                match entry {
                    Ok(e) if e.file_type().is_file() && has_source_extension(e.path(), config) => {
                        inputs.push(Input::File(e.into_path()));
                    }
                    Ok(_) => {}
                    Err(e) => {
                        eprintln!("prolint: {e}");
                        status = EXIT_TROUBLE;
                    }
                }
            }
        } else {
            // Explicitly named files are taken whatever their extension;
            // unreadable ones fail later with the I/O error.
            inputs.push(Input::File(path.to_path_buf()));
        }
    }
    inputs.sort();
    inputs.dedup();
    (inputs, status)
}

fn has_source_extension(path: &Path, config: &Config) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| config.extensions.iter().any(|x| x == e))
}

fn check(inputs: &[Input], config: &Config, format: OutputFormat) -> u8 {
    let results: Vec<(String, Result<Vec<Diagnostic>, String>)> = inputs
        .par_iter()
        .map(|input| {
            let found = input.load().map(|src| lint_source(&src, config));
            (input.display(), found)
        })
        .collect();
    let mut reports = Vec::new();
    let mut status = EXIT_CLEAN;
    for (path, found) in results {
        match found {
            Ok(diagnostics) => {
                if diagnostics.iter().any(|d| d.severity >= config.failure_threshold) {
                    status = status.max(EXIT_FINDINGS);
                }
                reports.push(FileReport { path, diagnostics });
            }
            Err(message) => {
                eprintln!("prolint: {message}");
                status = EXIT_TROUBLE;
            }
        }
    }
    let rendered = match format {
        OutputFormat::Text => render_text(&reports),
        OutputFormat::Json => render_json(&reports),
    };
    print!("{rendered}");
    let _ = io::stdout().flush();
    status
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum FmtMode {
    Print,
    Check,
    Write,
}

/// Outcome of formatting one input.
enum Formatted {
    Text(String),
    Clean,
    Diverges { line: usize, col: usize },
    Written,
    Refused(Diagnostic),
}

fn fmt(inputs: &[Input], config: &Config, mode: FmtMode) -> u8 {
    let results: Vec<(String, Result<Formatted, String>)> = inputs
        .par_iter()
        .map(|input| (input.display(), fmt_one(input, config, mode)))
        .collect();
    let mut status = EXIT_CLEAN;
    let mut out = String::new();
    for (path, result) in results {
        match result {
            Ok(Formatted::Text(t)) => out.push_str(&t),
            Ok(Formatted::Clean | Formatted::Written) => {}
            Ok(Formatted::Diverges { line, col }) => {
                out.push_str(&format!("{path}:{line}:{col}: not in canonical layout\n"));
                status = status.max(EXIT_FINDINGS);
            }
            Ok(Formatted::Refused(d)) => {
                eprintln!(
                    "{path}:{}:{}: {} [{}] {} (file left unformatted)",
                    d.span.start_line, d.span.start_col, d.severity, d.rule_id, d.message
                );
                status = status.max(EXIT_FINDINGS);
            }
            Err(message) => {
                eprintln!("prolint: {message}");
                status = EXIT_TROUBLE;
            }
        }
    }
    print!("{out}");
    let _ = io::stdout().flush();
    status
}

fn fmt_one(input: &Input, config: &Config, mode: FmtMode) -> Result<Formatted, String> {
    let src = input.load()?;
    if mode == FmtMode::Check {
        return Ok(match check_format(&src, config) {
            Ok(c) => match c.divergence {
                None => Formatted::Clean,
                Some(s) => Formatted::Diverges {
                    line: s.start_line,
                    col: s.start_col,
                },
            },
            Err(d) => Formatted::Refused(d),
        });
    }
    let text = match format_source(&src, config) {
        Ok(text) => text,
        Err(d) => return Ok(Formatted::Refused(d)),
    };
    match (mode, input) {
        (FmtMode::Write, Input::File(path)) => {
            if text != src.content {
                write_in_place(path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
            }
            Ok(Formatted::Written)
        }
        _ => Ok(Formatted::Text(text)),
    }
}

/// Replace a file through a sibling temporary file so that an interrupted
/// run leaves either the old or the new content.
fn write_in_place(path: &Path, text: &str) -> io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    if let Ok(meta) = fs::metadata(path) {
        fs::set_permissions(tmp.path(), meta.permissions())?;
    }
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn render_catalog(format: OutputFormat) -> String {
    let mut out = String::new();
    match format {
        OutputFormat::Text => {
            for d in catalog() {
                let state = if d.default_enabled { "" } else { " (disabled by default)" };
                out.push_str(&format!("{}  {:<7}  {}{state}\n", d.id, d.default_severity, d.title));
                out.push_str(&format!("      {}\n", d.guideline));
                for (k, v) in d.parameters {
                    out.push_str(&format!("      {k} = {v}\n"));
                }
            }
        }
        OutputFormat::Json => {
            let rules: Vec<serde_json::Value> = catalog()
                .map(|d| {
                    let params: serde_json::Map<String, serde_json::Value> =
                        d.parameters.iter().map(|(k, v)| (k.to_string(), (*v).into())).collect();
                    serde_json::json!({
                        "id": d.id,
                        "title": d.title,
                        "guideline": d.guideline,
                        "severity": d.default_severity.as_str(),
                        "enabled": d.default_enabled,
                        "parameters": params,
                    })
                })
                .collect();
            out = serde_json::to_string_pretty(&rules).expect("catalog serializes");
            out.push('\n');
        }
    }
    out
}
