//! Command-line front end. `run` is the whole program minus argument
//! parsing, so it can be driven from tests.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::corpus::{self, check_corpus, load_corpus, load_embedded, CorpusError, LoadedScript, Status};
use crate::kernel::Environment;
use crate::export::{self, ExportOptions};
use crate::oracle::{self, Verifier};
use crate::parser::parse_script;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Oracle,
    Export,
}

/// Everything one invocation needs. Defaults: no paths, no trace,
/// `max_errors` 20, seed 0, `max_n` 3, not checked-only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub paths: Vec<PathBuf>,
    pub trace: bool,
    pub max_errors: usize,
    pub seed: u64,
    pub max_n: usize,
    pub checked_only: bool,
    pub standalone: bool,
    pub json: bool,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> RunConfig {
        RunConfig {
            command,
            paths: Vec::new(),
            trace: false,
            max_errors: 20,
            seed: 0,
            max_n: 3,
            checked_only: false,
            standalone: false,
            json: false,
            output: None,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "lambdad", version, about = "Proof checker for the Calculus of Constructions with definitions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, clap::Args)]
pub struct CommonFlags {
    /// Print every step, not only exports and failures.
    #[arg(long)]
    pub trace: bool,
    /// Stop listing errors after this many failed rows.
    #[arg(long = "maxErrors", alias = "max-errors", default_value_t = 20)]
    pub max_errors: usize,
    /// Seed for sampled oracle runs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest carrier size for the oracle.
    #[arg(long = "maxN", alias = "max-n", default_value_t = 3)]
    pub max_n: usize,
    /// Export only scripts that check.
    #[arg(long = "checkedOnly", alias = "checked-only")]
    pub checked_only: bool,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Check scripts, a manifest, or (with no paths) the built-in corpus.
    Check {
        paths: Vec<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run the finite-model theorem registry.
    Oracle {
        /// Theorem ids to run; all when empty.
        ids: Vec<String>,
        #[command(flatten)]
        flags: CommonFlags,
        /// Also print one JSON record per theorem.
        #[arg(long)]
        json: bool,
    },
    /// Render scripts as flag-derivation LaTeX.
    Export {
        paths: Vec<PathBuf>,
        #[command(flatten)]
        flags: CommonFlags,
        /// Wrap the fragment in a minimal document.
        #[arg(long)]
        standalone: bool,
        /// Write to a file instead of standard output.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        let (command, paths, flags) = match self.command {
            CliCommand::Check { paths, flags } => (Command::Check, paths, flags),
            CliCommand::Oracle { ids, flags, json } => {
                let mut c = config(Command::Oracle, ids.into_iter().map(PathBuf::from).collect(), flags);
                c.json = json;
                return c;
            }
            CliCommand::Export { paths, flags, standalone, output } => {
                let mut c = config(Command::Export, paths, flags);
                c.standalone = standalone;
                c.output = output;
                return c;
            }
        };
        config(command, paths, flags)
    }
}

fn config(command: Command, paths: Vec<PathBuf>, f: CommonFlags) -> RunConfig {
    RunConfig {
        paths,
        trace: f.trace,
        max_errors: f.max_errors,
        seed: f.seed,
        max_n: f.max_n,
        checked_only: f.checked_only,
        ..RunConfig::new(command)
    }
}

/// Runs one command and returns its exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match config.command {
        Command::Check => run_check(config, out, err),
        Command::Oracle => run_oracle(config, out, err),
        Command::Export => run_export(config, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "internal error: {e}");
            EXIT_INTERNAL
        }
    }
}

fn is_manifest(p: &Path) -> bool {
    p.extension().is_some_and(|e| e == "txt")
}

fn input_error(err: &mut dyn Write, e: &CorpusError) -> std::io::Result<i32> {
    writeln!(err, "error: {e}")?;
    Ok(EXIT_INPUT)
}

/// Reads `.ld` scripts given on the command line.
pub fn read_scripts(paths: &[PathBuf]) -> Result<Vec<LoadedScript>, CorpusError> {
    paths
        .iter()
        .map(|p| {
            let path = p.display().to_string();
            let source = std::fs::read_to_string(p).map_err(|_| CorpusError::MissingScript(path.clone()))?;
            let script = parse_script(&source).map_err(|error| CorpusError::Parse { path: path.clone(), error })?;
            Ok(LoadedScript { path, source, script })
        })
        .collect()
}

fn run_check(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let (manifests, scripts): (Vec<&PathBuf>, Vec<&PathBuf>) = config.paths.iter().partition(|p| is_manifest(p));
    let loaded = match manifests.first() {
        Some(m) => load_corpus(m),
        None => load_embedded(),
    };
    let (manifest, corpus_scripts) = match loaded {
        Ok(x) => x,
        Err(e) => return input_error(err, &e),
    };
    let report = check_corpus(Environment::new(), &corpus_scripts, &manifest);
    if scripts.is_empty() || !manifests.is_empty() {
        if config.trace {
            for s in &report.steps {
                writeln!(out, "{:<4}  {:<24}  {}:{}", s.status.label(), s.name, s.script, s.span)?;
            }
        }
        write!(out, "{}", report.table())?;
        if scripts.is_empty() {
            return Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL });
        }
    }
    let user: Vec<PathBuf> = scripts.into_iter().cloned().collect();
    let user_scripts = match read_scripts(&user) {
        Ok(s) => s,
        Err(e) => return input_error(err, &e),
    };
    let (steps, _, _) = corpus::check_scripts_with(report.env.clone(), report.notations.clone(), &user_scripts);
    let mut shown = 0;
    let mut ok = report.passed();
    for s in &steps {
        if s.status == Status::Fail {
            ok = false;
        }
        if config.trace || s.kind != corpus::StepKind::Statement || s.status == Status::Fail {
            writeln!(out, "{:<4}  {:<24}  {}:{}", s.status.label(), s.name, s.script, s.span)?;
        }
        if s.status == Status::Fail && shown < config.max_errors {
            shown += 1;
            for e in &s.errors {
                for line in e.lines() {
                    writeln!(out, "        {line}")?;
                }
            }
        }
    }
    Ok(if ok { EXIT_PASS } else { EXIT_FAIL })
}

fn run_oracle(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    if config.max_n == 0 || config.max_n > oracle::MAX_CARRIER as usize {
        writeln!(err, "error: --maxN must be between 1 and {}", oracle::MAX_CARRIER)?;
        return Ok(EXIT_INPUT);
    }
    let verifier = Verifier { max_n: config.max_n as u8, seed: config.seed, ..Verifier::default() };
    let ids: Vec<String> = if config.paths.is_empty() {
        oracle::registry().iter().map(|t| t.id.to_string()).collect()
    } else {
        config.paths.iter().map(|p| p.display().to_string()).collect()
    };
    let mut reports = Vec::with_capacity(ids.len());
    for id in &ids {
        match oracle::verify_theorem(id, &verifier) {
            Ok(r) => reports.push(r),
            Err(e) => {
                writeln!(err, "error: {e}")?;
                return Ok(EXIT_INPUT);
            }
        }
    }
    for r in &reports {
        writeln!(out, "{}", r.line())?;
        if config.trace {
            writeln!(out, "      {}", r.title)?;
        }
    }
    if config.json {
        let records: Vec<_> = reports.iter().map(|r| r.to_json()).collect();
        writeln!(out, "{}", serde_json::Value::Array(records))?;
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    writeln!(out, "{passed}/{} theorems verified", reports.len())?;
    Ok(if passed == reports.len() { EXIT_PASS } else { EXIT_FAIL })
}

fn run_export(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> std::io::Result<i32> {
    let (manifests, paths): (Vec<&PathBuf>, Vec<&PathBuf>) = config.paths.iter().partition(|p| is_manifest(p));
    let loaded = match manifests.first() {
        Some(m) => load_corpus(m),
        None => load_embedded(),
    };
    let (manifest, corpus_scripts) = match loaded {
        Ok(x) => x,
        Err(e) => return input_error(err, &e),
    };
    let user: Vec<PathBuf> = paths.into_iter().cloned().collect();
    let user_scripts = match read_scripts(&user) {
        Ok(s) => s,
        Err(e) => return input_error(err, &e),
    };
    let report = check_corpus(Environment::new(), &corpus_scripts, &manifest);
    let targets = if user_scripts.is_empty() { &corpus_scripts } else { &user_scripts };
    if config.checked_only {
        let failed: Vec<String> = if user_scripts.is_empty() {
            report.steps.iter().filter(|s| s.status == Status::Fail).map(|s| format!("{}:{} {}", s.script, s.span, s.name)).collect()
        } else {
            let (steps, _, _) = corpus::check_scripts_with(report.env.clone(), report.notations.clone(), &user_scripts);
            steps.iter().filter(|s| s.status == Status::Fail).map(|s| format!("{}:{} {}", s.script, s.span, s.name)).collect()
        };
        if !failed.is_empty() {
            for f in failed.iter().take(config.max_errors) {
                writeln!(err, "not checked: {f}")?;
            }
            return Ok(EXIT_FAIL);
        }
    }
    let opts = ExportOptions::default();
    let mut body = String::new();
    for s in targets {
        match export::layout(&s.script, &report.notations, &opts) {
            Ok(l) => {
                body.push_str(&format!("% {}\n", s.path));
                body.push_str(&l.to_latex(false));
            }
            Err(e) => {
                writeln!(err, "error: {}: {e}", s.path)?;
                return Ok(EXIT_INPUT);
            }
        }
    }
    if config.standalone {
        body = export::standalone_document(&body);
    }
    match &config.output {
        Some(path) => std::fs::write(path, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(EXIT_PASS)
}
