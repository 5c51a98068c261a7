//! Argument handling and exit codes.
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every requested method says the inclusion holds |
//! | 1 | every requested method says it fails |
//! | 2 | methods disagree |
//! | 3 | usage or input error |
//! | 4 | a label-set cap or search budget was exceeded |

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use cfgi_core::closure::Method;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::differential::{differential_run, DIFFERENTIAL_METHODS};
use crate::dot::to_dot;
use crate::format::{parse_grammar, parse_group};
use crate::pipeline::{run_methods, Config, Instance};
use crate::random::Bounds;
use crate::report::{InputSummary, Report, DEFAULT_METHODS};

pub const EXIT_USAGE: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "cfgi",
    version,
    about = "Decide whether a context-free language lies in a group language"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide one grammar against one group.
    Decide {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        group: PathBuf,
        /// Write the transition diagram in Graphviz format.
        #[arg(long)]
        emit_dot: Option<PathBuf>,
        #[command(flatten)]
        opts: Options,
    },
    /// Compare methods on seeded random instances.
    Differential {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Faithful,
    Filtered,
}

#[derive(Debug, Args)]
struct Options {
    /// Comma-separated subset of faithful, filtered, witness, anisimov, enumeration.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Closure variant; replaces any closure method in the method list.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, default_value_t = 100_000)]
    max_set_size: usize,
    /// Length bound of the enumeration method.
    #[arg(long, default_value_t = 8)]
    max_word_len: usize,
    /// Short-word bound of the anisimov method (default 2^n).
    #[arg(long)]
    pumping_p: Option<usize>,
    /// Pumped-word bound of the anisimov method (default 2^n).
    #[arg(long)]
    pumping_q: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Seed for random instance generation.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Options {
    fn config(&self) -> Config {
        Config {
            max_set_size: self.max_set_size,
            max_word_len: self.max_word_len,
            pumping_p: self.pumping_p,
            pumping_q: self.pumping_q,
            ..Config::default()
        }
    }

    fn methods(&self, default: &[Method]) -> Result<Vec<Method>, String> {
        let mut methods = match &self.methods {
            None => default.to_vec(),
            Some(names) => names
                .iter()
                .map(|n| Method::from_name(n.trim()).ok_or_else(|| format!("unknown method `{n}`")))
                .collect::<Result<_, _>>()?,
        };
        if methods.is_empty() {
            return Err("no methods requested".to_string());
        }
        if let Some(mode) = self.mode {
            let chosen = match mode {
                ModeArg::Faithful => Method::Faithful,
                ModeArg::Filtered => Method::Filtered,
            };
            for m in methods.iter_mut() {
                if matches!(m, Method::Faithful | Method::Filtered) {
                    *m = chosen;
                }
            }
        }
        let mut seen = Vec::new();
        methods.retain(|m| {
            let fresh = !seen.contains(m);
            seen.push(*m);
            fresh
        });
        Ok(methods)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), String> {
    std::fs::write(path, contents).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn read_file(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn usage(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn decide(grammar: &Path, group: &Path, emit_dot: Option<&Path>, opts: &Options) -> u8 {
    let methods = match opts.methods(&DEFAULT_METHODS) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    let (gsrc, psrc) = match (read_file(grammar), read_file(group)) {
        (Ok(g), Ok(p)) => (g, p),
        (Err(e), _) | (_, Err(e)) => return usage(e),
    };
    let g = match parse_grammar(&String::from_utf8_lossy(&gsrc)) {
        Ok(g) => g,
        Err(e) => return usage(format_args!("{}: {e}", grammar.display())),
    };
    let spec = match parse_group(&String::from_utf8_lossy(&psrc)) {
        Ok(s) => s,
        Err(e) => return usage(format_args!("{}: {e}", group.display())),
    };
    let inst = match Instance::prepare(&g, &spec) {
        Ok(i) => i,
        Err(e) => return usage(e),
    };
    log::info!(
        "{} nonterminals, {} rules after normalization",
        inst.grammar.nonterminal_count(),
        inst.grammar.rules().len()
    );
    if let Some(path) = emit_dot {
        let d = match inst.diagram() {
            Ok(d) => d,
            Err(e) => return usage(e),
        };
        if let Err(e) = write_file(path, &to_dot(&d)) {
            return usage(e);
        }
    }
    let out = run_methods(&inst, &methods, &opts.config());
    let report = Report::build(
        &inst,
        &out,
        InputSummary::of(&inst, Some(&gsrc), Some(&psrc)),
    );
    print!("{}", report.summary());
    if let Some(path) = &opts.report {
        if let Err(e) = write_file(path, &report.to_json()) {
            return usage(e);
        }
    }
    report.exit_code
}

fn differential(count: usize, opts: &Options) -> u8 {
    let methods = match opts.methods(&DIFFERENTIAL_METHODS) {
        Ok(m) => m,
        Err(e) => return usage(e),
    };
    let report = differential_run(
        count,
        opts.seed,
        &Bounds::default(),
        &methods,
        &opts.config(),
    );
    print!("{}", report.summary_text());
    if let Some(path) = &opts.report {
        if let Err(e) = write_file(path, &report.to_json()) {
            return usage(e);
        }
    }
    report.exit_code()
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match &cli.command {
        Command::Decide {
            grammar,
            group,
            emit_dot,
            opts,
        } => decide(grammar, group, emit_dot.as_deref(), opts),
        Command::Differential { count, opts } => differential(*count, opts),
    }
}
