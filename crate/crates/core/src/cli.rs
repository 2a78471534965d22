//! Command implementations behind the `qudit` binary.
//!
//! Every command writes exactly one JSON document to stdout on success and
//! diagnostics to stderr. Exit codes: 0 success, 1 usage error, 2 validation
//! error, 3 I/O error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::analysis::{entropies, expect_k, expect_q, k_distributions, partition, EntropyReport};
use crate::duality::{planewave, to_k_rep, to_q_rep};
use crate::error::Error;
use crate::gates::{create_functional, Circuit, CircuitFile, FunctionalCircuitLayout};
use crate::json::to_canonical_string;
use crate::state::{Representation, StateFile, StateVector};
use crate::system::{is_prime, DigitLabel, QuditSystem};
use crate::verify::{run_verification, VerifyReport, DEFAULT_SEED};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    Usage = 1,
    Validation = 2,
    Io = 3,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    pub exit_code: ExitCode,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct Failure {
    code: ExitCode,
    message: String,
    /// Emitted on stdout even though the command failed (verify reports).
    payload: Option<String>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: ExitCode::Usage, message: message.into(), payload: None }
    }

    fn validation(message: impl Into<String>) -> Self {
        Self { code: ExitCode::Validation, message: message.into(), payload: None }
    }

    fn io(message: impl Into<String>) -> Self {
        Self { code: ExitCode::Io, message: message.into(), payload: None }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::validation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "qudit", version, about = "Qudit states, functionals, and their Fourier duality")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RepArg {
    Q,
    K,
}

impl From<RepArg> for Representation {
    fn from(r: RepArg) -> Self {
        match r {
            RepArg::Q => Representation::Q,
            RepArg::K => Representation::K,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fourier-transform a state file to the requested representation.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        to: RepArg,
    },
    /// Q-rep planewave of a basis functional.
    Planewave {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Comma-separated digits, e.g. `2,1`.
        #[arg(long)]
        k: String,
    },
    /// Classes of basis labels by the value of k·q.
    Partition {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: String,
    },
    /// Run the functional-creation circuit on handlers ⊗ sources ⊗ |0⟩.
    Functional {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        handlers: PathBuf,
        #[arg(long)]
        sources: String,
    },
    /// Apply a circuit file to a q-rep state file.
    Run {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Expectations, k-distributions, and entropies of a state.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// `e` or a positive number other than 1.
        #[arg(long, default_value = "e")]
        log_base: String,
    },
    /// Check the library's invariants for one system size.
    Verify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult { exit_code: ExitCode::Usage, stdout: String::new(), stderr: rendered }
            } else {
                CommandResult { exit_code: ExitCode::Success, stdout: rendered, stderr: String::new() }
            };
        }
    };
    match execute(cli.command) {
        Ok(stdout) => CommandResult { exit_code: ExitCode::Success, stdout, stderr: String::new() },
        Err(f) => CommandResult {
            exit_code: f.code,
            stdout: f.payload.unwrap_or_default(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Transform { input, to } => render(&cmd_transform(&input, to.into())?.to_file()),
        Command::Planewave { n, d, k } => {
            let k = parse_label(n, d, &k)?;
            render(&planewave(&k).to_file())
        }
        Command::Partition { n, d, k } => {
            let k = parse_label(n, d, &k)?;
            render(&partition(&k).to_file())
        }
        Command::Functional { d, handlers, sources } => render(&cmd_functional(d, &handlers, &sources)?),
        Command::Run { circuit, input } => render(&cmd_run(&circuit, &input)?.to_file()),
        Command::Analyze { input, log_base } => render(&cmd_analyze(&input, &log_base)?),
        Command::Verify { d, n, seed } => {
            let report = cmd_verify(n, d, seed)?;
            let text = render(&report)?;
            if report.all_passed {
                Ok(text)
            } else {
                let failing: Vec<_> = report.failures().map(|c| c.name).collect();
                Err(Failure {
                    code: ExitCode::Validation,
                    message: format!("failing checks: {}", failing.join(", ")),
                    payload: Some(text),
                })
            }
        }
    }
}

fn render<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = to_canonical_string(value).map_err(|e| Failure::io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::validation(format!("{}: {e}", path.display())))
}

fn read_state(path: &Path) -> Result<StateVector, Failure> {
    let file: StateFile = read_json(path)?;
    Ok(StateVector::try_from(file)?)
}

fn parse_digits(text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Failure::usage(format!("malformed digit list `{text}`")))
        })
        .collect()
}

/// Malformed or out-of-range digits are usage errors; a bad `(n, d)` is a validation error.
fn parse_label(n: usize, d: usize, text: &str) -> Result<DigitLabel, Failure> {
    let system = QuditSystem::new(n, d)?;
    let digits = parse_digits(text)?;
    DigitLabel::new(system, digits).map_err(|e| Failure::usage(format!("bad functional `{text}`: {e}")))
}

fn cmd_transform(input: &Path, to: Representation) -> Result<StateVector, Failure> {
    let state = read_state(input)?;
    Ok(match (state.rep(), to) {
        (Representation::Q, Representation::K) => to_k_rep(&state)?,
        (Representation::K, Representation::Q) => to_q_rep(&state)?,
        _ => state,
    })
}

#[derive(Debug, Serialize)]
struct FunctionalReport {
    d: usize,
    m: usize,
    sources: Vec<usize>,
    layout: FunctionalCircuitLayout,
    holder_probabilities: Vec<f64>,
    state: StateFile,
}

fn cmd_functional(d: usize, handlers: &Path, sources: &str) -> Result<FunctionalReport, Failure> {
    let handlers = read_state(handlers)?;
    let hs = handlers.system();
    if hs.d() != d {
        return Err(Failure::validation(format!("handler state has d = {}, expected {d}", hs.d())));
    }
    let digits = parse_digits(sources)?;
    if digits.len() != hs.n() {
        return Err(Failure::validation(format!(
            "{} source digits for {} handler qudits",
            digits.len(),
            hs.n()
        )));
    }
    let sources = DigitLabel::new(QuditSystem::new(hs.n(), d)?, digits)?;
    let out = create_functional(&handlers, &sources)?;
    Ok(FunctionalReport {
        d,
        m: out.layout.m(),
        sources: sources.digits().to_vec(),
        layout: out.layout,
        holder_probabilities: out.holder_probabilities,
        state: out.state.to_file(),
    })
}

fn cmd_run(circuit: &Path, input: &Path) -> Result<StateVector, Failure> {
    let file: CircuitFile = read_json(circuit)?;
    let circuit = Circuit::try_from(file)?;
    let state = read_state(input)?;
    Ok(circuit.run(&state)?)
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub d: usize,
    pub is_prime: bool,
    pub input_rep: Representation,
    pub transformed: bool,
    pub expect_q: Vec<f64>,
    pub expect_k: Vec<f64>,
    pub k_distributions: Vec<Vec<f64>>,
    pub entropy: EntropyReport,
}

/// Full analysis of a state; k-rep inputs are moved to q-rep first.
pub fn analyze_state(state: &StateVector) -> crate::Result<AnalysisReport> {
    let input_rep = state.rep();
    let psi = match input_rep {
        Representation::Q => state.clone(),
        Representation::K => to_q_rep(state)?,
    };
    let system = psi.system();
    Ok(AnalysisReport {
        n: system.n(),
        d: system.d(),
        is_prime: is_prime(system.d()),
        input_rep,
        transformed: input_rep == Representation::K,
        expect_q: expect_q(&psi)?,
        expect_k: expect_k(&psi)?,
        k_distributions: k_distributions(&psi)?,
        entropy: entropies(&psi)?,
    })
}

fn cmd_analyze(input: &Path, log_base: &str) -> Result<AnalysisReport, Failure> {
    let base = match log_base {
        "e" => None,
        other => match other.parse::<f64>() {
            Ok(b) if b.is_finite() && b > 0.0 && b != 1.0 => Some(b),
            _ => return Err(Failure::usage(format!("invalid log base `{other}`"))),
        },
    };
    let mut report = analyze_state(&read_state(input)?)?;
    if let Some(b) = base {
        report.entropy = report.entropy.in_base(b);
    }
    Ok(report)
}

fn cmd_verify(n: usize, d: usize, seed: u64) -> Result<VerifyReport, Failure> {
    Ok(run_verification(QuditSystem::new(n, d)?, seed))
}
