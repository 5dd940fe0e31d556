use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use moment_positivity::cli::{self, EXIT_INPUT};
use moment_positivity::deciders::Options;
use moment_positivity::exactnum::parse_rational;
use moment_positivity::io::{to_text, Instance};
use moment_positivity::{Error, Result};

#[derive(Parser)]
#[command(name = "momentpos", version, about = "Positivity of matrix moment sequences and linear recurrences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the output document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral report of a rational matrix.
    Spectra { input: String },
    /// Decide positivity of one or more instances.
    Decide {
        #[arg(required = true)]
        inputs: Vec<String>,
        #[command(flatten)]
        flags: Flags,
        /// Decide independent instance files on this many threads.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Terms and positivity of a linear recurrence.
    Lrs {
        input: String,
        #[command(flatten)]
        flags: Flags,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Free Polya check of a non-commutative polynomial.
    Polya {
        input: String,
        /// Pad witness matrices to this size.
        #[arg(long)]
        pad: Option<usize>,
    },
    /// Reduction gadgets of a mortality instance.
    Gadget {
        input: String,
        /// Exponent of the checked moment identity.
        #[arg(long, default_value_t = 2)]
        n: u64,
        /// Exponent bound of the mortality search.
        #[arg(long, default_value_t = 4)]
        bound: u64,
    },
    /// Re-check an emitted document against its instance.
    VerifyCertificate {
        instance: String,
        certificate: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Clone, Default)]
struct Flags {
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    max_n: Option<u64>,
    #[arg(long)]
    degree_budget: Option<u32>,
    #[arg(long)]
    relation_bound: Option<u32>,
    #[arg(long)]
    tolerance: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    progression: Option<Vec<u64>>,
}

impl Flags {
    fn apply(&self, o: &mut Options) -> Result<()> {
        if let Some(m) = &self.mode {
            o.mode = m.parse()?;
        }
        if let Some(n) = self.max_n {
            o.budget.max_moment_index = n;
        }
        if let Some(d) = self.degree_budget {
            o.budget.max_invariant_degree = d;
        }
        if let Some(r) = self.relation_bound {
            o.budget.relation_exponent_bound = r;
        }
        if let Some(t) = &self.tolerance {
            o.budget.tolerance = parse_rational(t)?;
        }
        if let Some(e) = &self.epsilon {
            o.epsilon = parse_rational(e)?;
        }
        if let Some(pq) = &self.progression {
            if pq[0] == 0 || pq[1] == 0 {
                return Err(Error::InvalidArgument("progression needs p, q >= 1".into()));
            }
            o.p = pq[0];
            o.q = pq[1];
        }
        Ok(())
    }
}

fn read_source(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn load(path: &str, flags: &Flags) -> Result<(Instance, Options)> {
    let (inst, mut opts) = cli::load(&read_source(path)?, &Options::default(), |_| {})?;
    flags.apply(&mut opts)?;
    Ok((inst, opts))
}

fn decide_one(path: &str, flags: &Flags) -> (Value, i32) {
    load(path, flags).and_then(|(i, o)| cli::decide(i, &o)).unwrap_or_else(|e| (cli::error_json(&e), EXIT_INPUT))
}

fn run(cmd: Command) -> Result<(Value, i32)> {
    let none = Flags::default();
    match cmd {
        Command::Spectra { input } => cli::spectra(load(&input, &none)?.0),
        Command::Decide { inputs, flags, jobs } if inputs.len() == 1 && jobs <= 1 => {
            let (i, o) = load(&inputs[0], &flags)?;
            cli::decide(i, &o)
        }
        Command::Decide { inputs, flags, jobs } => {
            let jobs = jobs.max(1);
            let mut results: Vec<Option<(Value, i32)>> = vec![None; inputs.len()];
            std::thread::scope(|scope| {
                for (chunk_in, chunk_out) in inputs.chunks(inputs.len().div_ceil(jobs)).zip(results.chunks_mut(inputs.len().div_ceil(jobs))) {
                    let flags = &flags;
                    scope.spawn(move || {
                        for (p, slot) in chunk_in.iter().zip(chunk_out) {
                            *slot = Some(decide_one(p, flags));
                        }
                    });
                }
            });
            let results: Vec<(Value, i32)> = results.into_iter().map(|r| r.expect("every slot filled")).collect();
            let code = results.iter().map(|r| r.1).max().unwrap_or(0);
            let docs: Vec<Value> =
                inputs.iter().zip(results).map(|(p, (v, c))| json!({"input": p, "exit_code": c, "output": v})).collect();
            Ok((Value::Array(docs), code))
        }
        Command::Lrs { input, flags, terms } => {
            let (i, o) = load(&input, &flags)?;
            cli::lrs(i, &o, terms)
        }
        Command::Polya { input, pad } => cli::polya(load(&input, &none)?.0, pad),
        Command::Gadget { input, n, bound } => cli::gadget(load(&input, &none)?.0, n, bound),
        Command::VerifyCertificate { instance, certificate, flags } => {
            let (i, o) = load(&instance, &flags)?;
            let doc: Value = serde_json::from_str(&read_source(&certificate)?).map_err(|e| Error::Parse(e.to_string()))?;
            let ok = cli::verify_document(i, &o, &doc)?;
            Ok((json!({"accepted": ok}), if ok { 0 } else { 1 }))
        }
    }
}

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { 0 });
        }
    };
    let (doc, code) = run(args.command).unwrap_or_else(|e| (cli::error_json(&e), EXIT_INPUT));
    let text = to_text(&doc);
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(EXIT_INPUT as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(code as u8)
}
