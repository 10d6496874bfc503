use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use actionable::pipeline::{run, Command, RunConfig, CONFIG_KEYS};
use actionable::Error;
use clap::{Args, Parser, Subcommand};

/// Actionable-message classification pipeline.
///
/// Every config key can be given in the config file or overridden with
/// `--key value` after the subcommand.
#[derive(Parser)]
#[command(name = "actionable", version)]
struct Cli {
    /// Flat `key = value` config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for balancing, splitting, shuffling and synthesis.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Overrides {
    /// `--key value` config overrides.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, value_name = "--KEY VALUE")]
    rest: Vec<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a synthetic corpus and population file.
    Synth(Overrides),
    /// Validate and summarize the corpus.
    Ingest(Overrides),
    /// Build, dump or scatter per-domain lexicons.
    Lexicon {
        #[command(subcommand)]
        action: LexiconCmd,
    },
    /// Train and score candidate models for every domain.
    Train(Overrides),
    /// Apply a selection strategy and persist the registry.
    Select(Overrides),
    /// Evaluate the registry on the held-out split.
    Evaluate(Overrides),
    /// Label messages from `--input` with the registry.
    Classify(Overrides),
    /// Feature diagnostics, selection census or strategy comparison.
    Report {
        #[command(subcommand)]
        kind: ReportCmd,
    },
}

#[derive(Subcommand)]
enum LexiconCmd {
    Build(Overrides),
    Dump(Overrides),
    Scatter(Overrides),
}

#[derive(Subcommand)]
enum ReportCmd {
    Mi(Overrides),
    Census(Overrides),
    Strategy(Overrides),
}

fn flatten(cmd: Cmd) -> (Command, Vec<String>) {
    match cmd {
        Cmd::Synth(o) => (Command::Synth, o.rest),
        Cmd::Ingest(o) => (Command::Ingest, o.rest),
        Cmd::Lexicon { action } => match action {
            LexiconCmd::Build(o) => (Command::LexiconBuild, o.rest),
            LexiconCmd::Dump(o) => (Command::LexiconDump, o.rest),
            LexiconCmd::Scatter(o) => (Command::LexiconScatter, o.rest),
        },
        Cmd::Train(o) => (Command::Train, o.rest),
        Cmd::Select(o) => (Command::Select, o.rest),
        Cmd::Evaluate(o) => (Command::Evaluate, o.rest),
        Cmd::Classify(o) => (Command::Classify, o.rest),
        Cmd::Report { kind } => match kind {
            ReportCmd::Mi(o) => (Command::ReportMi, o.rest),
            ReportCmd::Census(o) => (Command::ReportCensus, o.rest),
            ReportCmd::Strategy(o) => (Command::ReportStrategy, o.rest),
        },
    }
}

/// Parses `--key value` and `--key=value` pairs.
fn apply_overrides(cfg: &mut RunConfig, rest: &[String]) -> Result<(), Error> {
    let mut it = rest.iter();
    while let Some(flag) = it.next() {
        let Some(body) = flag.strip_prefix("--") else {
            return Err(Error::Config(format!("unexpected argument `{flag}`")));
        };
        let (key, value) = match body.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = it.next().ok_or_else(|| Error::Config(format!("--{body} needs a value")))?;
                (body.to_string(), v.clone())
            }
        };
        let key = key.replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) && key != "seed" {
            return Err(Error::Config(format!("unknown flag `--{body}`")));
        }
        cfg.set(&key, &value)?;
    }
    Ok(())
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    eprintln!("error\tkind={kind}\tmessage={}", one_line(message));
    ExitCode::from(code)
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::Corpus(_) => "corpus",
        Error::Lexicon(_) => "lexicon",
        Error::Learner(_) => "learner",
        Error::Selection(_) => "selection",
        Error::Metrics(_) => "metrics",
        Error::Io { .. } => "io",
        Error::Config(_) => "config",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            return fail("usage", text.lines().next().unwrap_or("invalid arguments"), 2);
        }
    };
    let (command, rest) = flatten(cli.command);
    let mut cfg = match cli.config.as_deref().map(RunConfig::from_file).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(e @ Error::Config(_)) => return fail("usage", &e.to_string(), 2),
        Err(e) => return fail(kind(&e), &e.to_string(), 1),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Err(e) = apply_overrides(&mut cfg, &rest) {
        return fail("usage", &e.to_string(), 2);
    }
    let mut stderr = io::stderr().lock();
    match run(command, &cfg, &mut stderr) {
        Ok(summary) => {
            println!("{summary}");
            let _ = io::stdout().flush();
            ExitCode::SUCCESS
        }
        Err(e @ Error::Config(_)) => fail("usage", &e.to_string(), 2),
        Err(e) => fail(kind(&e), &e.to_string(), 1),
    }
}
