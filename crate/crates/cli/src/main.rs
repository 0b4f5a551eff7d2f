//! `circprove`: prove, check, translate, run corpora and find countermodels.
//!
//! Exit codes: 0 success or provable, 1 negative verdict, 2 usage or format
//! error.

use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;
use std::time::Instant;

use circprove::*;
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "circprove", version, about = "Standard and circular proofs for K4, GL, S4 and Grz")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a proof of a sequent such as "[]([]p -> p) => []p".
    Prove {
        #[arg(long, short)]
        calculus: String,
        #[arg(long, short, value_enum, default_value = "standard")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Cap on expanded sequents.
        #[arg(long)]
        max_sequents: Option<usize>,
        /// Print each backward step to stderr.
        #[arg(long)]
        trace: bool,
        /// Sequent text, or "-" for stdin.
        sequent: String,
    },
    /// Check a proof in the interchange format.
    Check {
        #[arg(long, short)]
        calculus: String,
        #[arg(long, short, value_enum, default_value = "standard")]
        mode: ModeArg,
        /// Proof file, or "-" for stdin.
        file: String,
    },
    /// Translate a proof between a standard and a circular calculus.
    Translate {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, value_enum, default_value = "interchange")]
        format: Format,
        /// Proof file, or "-" for stdin.
        file: String,
    },
    /// Compare two deciders over every formula up to a size bound.
    Corpus {
        #[arg(long, default_value_t = 1)]
        atoms: usize,
        #[arg(long)]
        max_size: usize,
        /// Two deciders, e.g. "gl/circular-k4".
        #[arg(long)]
        pair: String,
        #[arg(long)]
        max_sequents: Option<usize>,
    },
    /// Search small Kripke models for one refuting a sequent.
    Countermodel {
        /// k4, s4 or gl-finite.
        #[arg(long)]
        frame: String,
        #[arg(long, default_value_t = 3)]
        max_worlds: usize,
        /// Sequent text, or "-" for stdin.
        sequent: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Standard,
    Circular,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Standard => Mode::Standard,
            ModeArg::Circular => Mode::Circular,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Interchange,
}

/// A failure with its exit code.
struct Failure(u8, String);

type Result<T> = std::result::Result<T, Failure>;

fn usage(msg: impl ToString) -> Failure {
    Failure(2, msg.to_string())
}

fn negative(msg: impl ToString) -> Failure {
    Failure(1, msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("{msg}");
            ExitCode::from(code)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Prove {
            calculus,
            mode,
            format,
            max_sequents,
            trace,
            sequent,
        } => cmd_prove(&calculus, mode.into(), format, max_sequents, trace, &sequent),
        Command::Check { calculus, mode, file } => cmd_check(&calculus, mode.into(), &file),
        Command::Translate { from, to, format, file } => cmd_translate(&from, &to, format, &file),
        Command::Corpus {
            atoms,
            max_size,
            pair,
            max_sequents,
        } => cmd_corpus(atoms, max_size, &pair, max_sequents),
        Command::Countermodel {
            frame,
            max_worlds,
            sequent,
        } => cmd_countermodel(&frame, max_worlds, &sequent),
    }
}

fn input(arg: &str) -> Result<String> {
    if arg == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(usage)?;
        Ok(s)
    } else {
        Ok(arg.to_string())
    }
}

fn read_file(arg: &str) -> Result<String> {
    if arg == "-" {
        input(arg)
    } else {
        fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))
    }
}

fn calculus(name: &str) -> Result<Calculus> {
    Calculus::by_name(name).map_err(usage)
}

fn parse_sequent(arg: &str) -> Result<Sequent> {
    let text = input(arg)?;
    Sequent::parse(text.trim()).map_err(usage)
}

fn parse_proof(arg: &str) -> Result<DerivationTree> {
    from_interchange(&read_file(arg)?).map_err(usage)
}

fn verdict(c: &Calculus, d: &DerivationTree, mode: Mode) -> Verdict {
    match mode {
        Mode::Standard => check_standard(c, d),
        Mode::Circular => check_circular(c, d),
    }
}

/// Prints a proof after checking that its printed form parses back to a
/// valid proof.
fn emit(c: &Calculus, d: &DerivationTree, mode: Mode, format: Format) -> Result<()> {
    let text = to_interchange(d);
    let reparsed = from_interchange(&text).map_err(|e| Failure(2, format!("internal: {e}")))?;
    let v = verdict(c, &reparsed, mode);
    if reparsed != *d || !v.is_valid() {
        return Err(Failure(2, format!("internal: emitted proof does not re-check: {v}")));
    }
    match format {
        Format::Text => print!("{}", d.render()),
        Format::Interchange => println!("{text}"),
    }
    Ok(())
}

fn cmd_prove(
    name: &str,
    mode: Mode,
    format: Format,
    max_sequents: Option<usize>,
    trace: bool,
    sequent: &str,
) -> Result<()> {
    let c = calculus(name)?;
    let goal = parse_sequent(sequent)?;
    let mut cfg = SearchConfig::new(c.clone(), mode);
    cfg.max_sequents = max_sequents;
    cfg.trace = trace;
    match prove(&cfg, &goal).map_err(usage)? {
        Outcome::Proof(d) => emit(&c, &d, mode, format),
        Outcome::NotProvable => Err(negative(format!("not provable: {goal}"))),
    }
}

fn cmd_check(name: &str, mode: Mode, file: &str) -> Result<()> {
    let c = calculus(name)?;
    let d = parse_proof(file)?;
    match verdict(&c, &d, mode) {
        Verdict::Valid => {
            println!("valid");
            Ok(())
        }
        v => Err(negative(v)),
    }
}

fn cmd_translate(from: &str, to: &str, format: Format, file: &str) -> Result<()> {
    type Translation = fn(&DerivationTree) -> std::result::Result<DerivationTree, TransformError>;
    let (source, target, mode, run): (Calculus, Calculus, Mode, Translation) = match (from, to) {
        ("gl", "circular-k4") => (Calculus::g3gl(), Calculus::g3k4(), Mode::Circular, gl_to_circular),
        ("circular-k4", "gl") => (Calculus::g3k4(), Calculus::g3gl(), Mode::Standard, circular_to_standard),
        ("grz", "circular-s4") => (Calculus::g3grz(), Calculus::g3s4(), Mode::Circular, grz_to_circular_s4),
        _ => {
            return Err(usage(format!(
                "unsupported translation {from} -> {to} \
                 (supported: gl -> circular-k4, circular-k4 -> gl, grz -> circular-s4)"
            )))
        }
    };
    let d = parse_proof(file)?;
    let source_mode = if from.starts_with("circular-") { Mode::Circular } else { Mode::Standard };
    let v = verdict(&source, &d, source_mode);
    if !v.is_valid() {
        return Err(negative(format!("source proof rejected: {v}")));
    }
    let out = run(&d).map_err(|e| match e {
        TransformError::InvalidInput(m) => negative(m),
        e => Failure(2, e.to_string()),
    })?;
    emit(&target, &out, mode, format)
}

/// A decider given as "calc" (standard) or "circular-calc".
fn decider(arg: &str, max_sequents: Option<usize>) -> Result<SearchConfig> {
    let (mode, name) = match arg.strip_prefix("circular-") {
        Some(rest) => (Mode::Circular, rest),
        None => (Mode::Standard, arg),
    };
    let mut cfg = SearchConfig::new(calculus(name)?, mode);
    cfg.max_sequents = max_sequents;
    Ok(cfg)
}

fn cmd_corpus(atoms: usize, max_size: usize, pair: &str, max_sequents: Option<usize>) -> Result<()> {
    let (a, b) = pair
        .split_once('/')
        .ok_or_else(|| usage(format!("pair `{pair}` is not of the form A/B")))?;
    let (x, y) = (decider(a, max_sequents)?, decider(b, max_sequents)?);
    let single = x.calculus.single_conclusion || y.calculus.single_conclusion;
    let start = Instant::now();
    let goals: Vec<Sequent> = corpus(atoms, max_size)
        .filter(|g| !single || g.succ.len() <= 1)
        .collect();
    let results: Vec<(Option<bool>, Option<bool>)> = goals
        .par_iter()
        .map(|g| (decide(&x, g).ok(), decide(&y, g).ok()))
        .collect();
    let mut provable = (0, 0);
    let mut limited = Vec::new();
    let mut disagreements = Vec::new();
    for (g, r) in goals.iter().zip(&results) {
        match *r {
            (Some(p), Some(q)) => {
                provable.0 += p as usize;
                provable.1 += q as usize;
                if p != q {
                    disagreements.push((g, p, q));
                }
            }
            _ => limited.push(g),
        }
    }
    for g in &limited {
        println!("resource limit: {g}");
    }
    for (g, p, q) in &disagreements {
        println!("disagreement: {g}: {a} {p}, {b} {q}");
    }
    println!("goals: {}", goals.len());
    println!("provable ({a}): {}", provable.0);
    println!("provable ({b}): {}", provable.1);
    println!("resource limits: {}", limited.len());
    println!("disagreements: {}", disagreements.len());
    println!("runtime: {:.3}s", start.elapsed().as_secs_f64());
    if disagreements.is_empty() {
        Ok(())
    } else {
        Err(negative(format!("{} disagreements", disagreements.len())))
    }
}

fn cmd_countermodel(frame: &str, max_worlds: usize, sequent: &str) -> Result<()> {
    let class = FrameClass::parse(frame).map_err(usage)?;
    if max_worlds > 4 {
        return Err(usage("at most 4 worlds are supported"));
    }
    let goal = parse_sequent(sequent)?;
    match countermodel(&goal, class, max_worlds) {
        Some(cm) => {
            print!("{}", cm.model);
            println!("fails at: w{}", cm.world);
            Ok(())
        }
        None => Err(negative(format!("no countermodel with at most {max_worlds} worlds"))),
    }
}
