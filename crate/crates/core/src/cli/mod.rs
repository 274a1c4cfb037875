//! Batch front-end over system files.
//!
//! [`run`] parses arguments, executes one command and returns everything the
//! process would print, so it can be driven from tests and examples as well
//! as from the `induced-pressure` binary.
//!
//! Exit codes: 0 success, 1 computation error, 2 parse or validation error.
//! On failure stdout is empty and stderr holds one line
//! `error: <kind>: <message>` with kind one of `usage`, `io`, `parse`,
//! `validation`, `computation`.

mod format;
mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use format::{emit_system, parse_system, NamedPotential, Options, ParseError, SystemFile};
pub use report::{significant, Cell, Report, Table};

use crate::error::Error;
use crate::induced::{
    bs_dimension_with, default_t_grid, induced_pressure_definitional, induced_pressure_root_with, partition_sums,
    r_diagnostic, InducedProblem, SolverSettings,
};
use crate::measures::{gibbs_constant_estimate, gibbs_measure, variational_search, SearchSettings};
use crate::potential::{BlockCode, LocallyConstantPotential};
use crate::pressure::{pressure_definitional, pressure_spectral_with, SpectralSettings};
use crate::sft::{EnumerationCap, Word};

/// Environment variable overriding the enumeration cap of every command.
pub const CAP_ENV: &str = "INDUCED_PRESSURE_CAP";

/// Slack allowed on the variational upper bound.
pub const VARIATIONAL_SLACK: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "induced-pressure",
    version,
    about = "Classical and induced pressure, BS dimension and Gibbs measures on topological Markov shifts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// System definition file.
    system: PathBuf,
    /// Emit CSV at full precision instead of aligned tables.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
struct Pair {
    #[arg(long)]
    phi: String,
    #[arg(long)]
    psi: String,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Convention {
    Spanning,
    Separated,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classical pressure P(phi) from the transfer matrix.
    Pressure {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        phi: String,
        /// Also report the finite-n partition-sum estimate at this n.
        #[arg(long)]
        definitional: Option<usize>,
    },
    /// Induced pressure: the root of P(phi - beta psi) = 0.
    Induced {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
    },
    /// BS dimension: the root of P(-s psi) = 0.
    BsDim {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        psi: String,
    },
    /// Gibbs measure of phi - beta* psi and its cylinder ratio bands.
    Gibbs {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        gibbs_depth: Option<usize>,
    },
    /// Random search over Markov measures against the variational upper bound.
    VariationalCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        refine_steps: Option<usize>,
        /// Required here or as `seed` in the file's [options].
        #[arg(long)]
        seed: Option<u64>,
        /// Add the Gibbs measure to the candidate pool (mixing shifts only).
        #[arg(long)]
        inject_gibbs: bool,
        /// Include every evaluated candidate.
        #[arg(long)]
        trajectory: bool,
    },
    /// Partition-sum estimate of the induced pressure (validation only).
    Definitional {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        t_step: Option<f64>,
        /// Also report the other convention at t_max.
        #[arg(long, value_enum)]
        compare: Option<Convention>,
    },
    /// Truncated tail sums R_T at a given beta and a bounded/growing verdict.
    RDiagnostic {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        pair: Pair,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// Largest T; defaults to min(20 / min psi, ln(1e6) / BS dimension of psi).
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 10)]
        points: usize,
    },
    /// Alphabet, word counts and recurrence flags.
    Info {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Pressure { common, .. }
            | Command::Induced { common, .. }
            | Command::BsDim { common, .. }
            | Command::Gibbs { common, .. }
            | Command::VariationalCheck { common, .. }
            | Command::Definitional { common, .. }
            | Command::RDiagnostic { common, .. }
            | Command::Info { common, .. } => common,
        }
    }
}

/// Everything a command invocation prints, plus its exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Parse(String),
    Validation(String),
    Computation(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Computation(_) => 1,
            _ => 2,
        }
    }

    fn line(&self) -> String {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Io(m) => ("io", m),
            Failure::Parse(m) => ("parse", m),
            Failure::Validation(m) => ("validation", m),
            Failure::Computation(m) => ("computation", m),
        };
        format!("error: {kind}: {}\n", msg.replace('\n', " "))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotIrreducible
            | Error::NotMixing(_)
            | Error::NotConverged { .. }
            | Error::CapExceeded { .. }
            | Error::Overflow(_) => Failure::Computation(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

/// Runs one command line (program name first, as in `std::env::args`).
pub fn run<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutput {
                    code: 0,
                    stdout: rendered,
                    stderr: String::new(),
                },
                _ => {
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    let msg = first.strip_prefix("error: ").unwrap_or(first);
                    fail(Failure::Usage(msg.to_string()))
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(report) => CommandOutput {
            code: 0,
            stdout: if cli.command.common().csv {
                report.to_csv()
            } else {
                report.to_text()
            },
            stderr: String::new(),
        },
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> CommandOutput {
    CommandOutput {
        code: f.code(),
        stdout: String::new(),
        stderr: f.line(),
    }
}

fn load(common: &Common) -> Result<SystemFile, Failure> {
    let text = std::fs::read_to_string(&common.system)
        .map_err(|e| Failure::Io(format!("{}: {e}", common.system.display())))?;
    let mut sys = parse_system(&text).map_err(|e| Failure::Parse(e.to_string()))?;
    if let Ok(v) = std::env::var(CAP_ENV) {
        sys.options.cap = v
            .trim()
            .parse()
            .map_err(|_| Failure::Validation(format!("{CAP_ENV}={v:?} is not a non-negative integer")))?;
    }
    Ok(sys)
}

fn potential<'a>(sys: &'a SystemFile, name: &str) -> Result<&'a LocallyConstantPotential, Failure> {
    sys.potential(name)
        .ok_or_else(|| Failure::Validation(format!("unknown potential {name:?}")))
}

fn problem(sys: &SystemFile, pair: &Pair) -> Result<InducedProblem, Failure> {
    Ok(InducedProblem::with_psi_floor(
        sys.sft.clone(),
        potential(sys, &pair.phi)?.clone(),
        potential(sys, &pair.psi)?.clone(),
        sys.options.psi_floor,
    )?)
}

fn solver_settings(o: &Options) -> SolverSettings {
    SolverSettings {
        tol_beta: o.tol_beta,
        spectral: SpectralSettings {
            tol: o.tol_inner,
            max_iters: o.max_iters,
        },
        cap: EnumerationCap(o.cap),
    }
}

fn state_label(blocks: Option<&BlockCode>, s: usize) -> String {
    match blocks {
        Some(b) => b.blocks[s].to_string(),
        None => Word::from_symbols(vec![s]).to_string(),
    }
}

fn execute(command: &Command) -> Result<Report, Failure> {
    let sys = load(command.common())?;
    let settings = solver_settings(&sys.options);
    let cap = settings.cap;
    let mut report = Report::default();
    match command {
        Command::Pressure { phi, definitional, .. } => {
            let phi = potential(&sys, phi)?;
            let p = pressure_spectral_with(&sys.sft, phi, settings.spectral, cap)?;
            let mut rows = vec![("pressure", Cell::Num(p))];
            if let Some(n) = *definitional {
                let d = pressure_definitional(&sys.sft, phi, n, cap)?;
                rows.push(("definitional_n", n.into()));
                rows.push(("definitional", d.into()));
                rows.push(("difference", (d - p).into()));
            }
            report.add("pressure", Table::summary(rows));
        }
        Command::Induced { pair, .. } => {
            let prob = problem(&sys, pair)?;
            let root = induced_pressure_root_with(&prob, &settings)?;
            report.add(
                "induced pressure",
                Table::summary(vec![
                    ("beta_star", root.beta.into()),
                    ("lower", root.lower.into()),
                    ("upper", root.upper.into()),
                    ("bracket_width", root.bracket_width().into()),
                    ("residual", root.residual.into()),
                    ("evaluations", root.evaluations.into()),
                ]),
            );
        }
        Command::BsDim { psi, .. } => {
            let psi = potential(&sys, psi)?;
            let d = bs_dimension_with(&sys.sft, psi, &settings)?;
            report.add("bs dimension", Table::summary(vec![("bs_dimension", d.into())]));
        }
        Command::Gibbs { pair, gibbs_depth, .. } => {
            let prob = problem(&sys, pair)?;
            let (mu, beta) = gibbs_measure(&prob, &settings)?;
            let view = prob.markov_view(cap)?;
            let blocks = view.blocks.as_ref();
            let depth = gibbs_depth.unwrap_or(sys.options.gibbs_depth);
            let bands = gibbs_constant_estimate(&mu, &prob, beta, depth, cap)?;
            report.add(
                "gibbs measure",
                Table::summary(vec![
                    ("beta_star", beta.into()),
                    ("states", mu.alphabet_size().into()),
                    ("entropy", mu.entropy().into()),
                    ("stationarity_residual", mu.stationarity_residual().into()),
                ]),
            );
            let mut t = Table::new(&["from", "to", "probability"]);
            for i in 0..mu.alphabet_size() {
                for &j in mu.sft().successors(i) {
                    t.push(vec![
                        state_label(blocks, i).into(),
                        state_label(blocks, j).into(),
                        mu.transition(i, j).into(),
                    ]);
                }
            }
            report.add("transition", t);
            let mut t = Table::new(&["state", "probability"]);
            for (i, &p) in mu.stationary().iter().enumerate() {
                t.push(vec![state_label(blocks, i).into(), p.into()]);
            }
            report.add("stationary", t);
            let mut t = Table::new(&["depth", "min_ratio", "max_ratio", "spread"]);
            for b in &bands {
                t.push(vec![b.depth.into(), b.min.into(), b.max.into(), b.spread().into()]);
            }
            report.add("gibbs ratio bands", t);
        }
        Command::VariationalCheck {
            pair,
            samples,
            refine_steps,
            seed,
            inject_gibbs,
            trajectory,
            ..
        } => {
            let seed = seed
                .or(sys.options.seed)
                .ok_or_else(|| Failure::Usage("variational-check needs --seed or `seed` in [options]".into()))?;
            let prob = problem(&sys, pair)?;
            let root = induced_pressure_root_with(&prob, &settings)?;
            let gibbs = if *inject_gibbs {
                Some(gibbs_measure(&prob, &settings)?.0)
            } else {
                None
            };
            let search = SearchSettings {
                cap,
                ..SearchSettings::new(
                    samples.unwrap_or(sys.options.samples),
                    refine_steps.unwrap_or(sys.options.refine_steps),
                    seed,
                )
            };
            let result = variational_search(&prob, &search, gibbs.as_ref())?;
            let within = result.best_quotient <= root.beta + VARIATIONAL_SLACK;
            report.add(
                "variational check",
                Table::summary(vec![
                    ("beta_star", root.beta.into()),
                    ("best_quotient", result.best_quotient.into()),
                    ("gap", (result.best_quotient - root.beta).into()),
                    ("max_sampled", result.max_sampled.into()),
                    ("samples", search.samples.into()),
                    ("refine_steps", search.refine_steps.into()),
                    ("seed", seed.into()),
                    ("gibbs_injected", gibbs.is_some().into()),
                    ("upper_bound", if within { "PASS" } else { "FAIL" }.into()),
                ]),
            );
            if *trajectory {
                let mut t = Table::new(&["stage", "index", "quotient", "accepted", "best"]);
                for s in &result.trajectory {
                    t.push(vec![
                        s.stage.as_str().into(),
                        s.index.into(),
                        s.quotient.into(),
                        s.accepted.into(),
                        s.best.into(),
                    ]);
                }
                report.add("trajectory", t);
            }
        }
        Command::Definitional {
            pair,
            t_max,
            t_step,
            compare,
            ..
        } => {
            let prob = problem(&sys, pair)?;
            let step = t_step.or(sys.options.t_step).unwrap_or(t_max / 60.0);
            let est = induced_pressure_definitional(&prob, *t_max, step, cap)?;
            report.add(
                "definitional estimate (validation only)",
                Table::summary(vec![
                    ("estimate", est.estimate.into()),
                    ("t_step", step.into()),
                    ("points", est.samples.len().into()),
                    ("partial", est.partial.into()),
                ]),
            );
            let mut t = Table::new(&["T", "log_rate"]);
            for &(tt, r) in &est.samples {
                t.push(vec![tt.into(), r.into()]);
            }
            report.add("grid", t);
            if let Some(c) = compare {
                let t_last = est.samples.last().map(|s| s.0).unwrap_or(*t_max);
                let (q, p) = partition_sums(&prob, t_last, cap)?;
                let other = match c {
                    Convention::Spanning => &q,
                    Convention::Separated => &p,
                };
                let mut t = Table::new(&["T", "spanning", "separated", "selected", "difference"]);
                t.push(vec![
                    t_last.into(),
                    q.log_rate.into(),
                    p.log_rate.into(),
                    other.log_rate.into(),
                    (q.log_rate - p.log_rate).into(),
                ]);
                report.add("conventions", t);
            }
        }
        Command::RDiagnostic {
            pair,
            beta,
            t_max,
            points,
            ..
        } => {
            let prob = problem(&sys, pair)?;
            if *points == 0 {
                return Err(Failure::Usage("--points must be at least 1".into()));
            }
            let grid = match t_max {
                Some(t) => (1..=*points).map(|i| t * i as f64 / *points as f64).collect(),
                None => default_t_grid(&prob, *points, &settings)?,
            };
            let diag = r_diagnostic(&prob, *beta, &grid, &settings)?;
            report.add(
                "r diagnostic",
                Table::summary(vec![
                    ("beta", diag.beta.into()),
                    ("pressure", diag.pressure.into()),
                    ("verdict", diag.verdict.as_str().into()),
                ]),
            );
            let mut t = Table::new(&["T", "R", "horizon", "tail_bound"]);
            for s in &diag.samples {
                t.push(vec![
                    s.t.into(),
                    s.value.into(),
                    s.horizon.into(),
                    s.tail_bound.map_or(Cell::Text("-".into()), Cell::Num),
                ]);
            }
            report.add("samples", t);
        }
        Command::Info { max_len, .. } => {
            let sft = &sys.sft;
            report.add(
                "shift",
                Table::summary(vec![
                    ("alphabet_size", sft.alphabet_size().into()),
                    ("edges", sft.edge_count().into()),
                    ("irreducible", sft.is_irreducible().into()),
                    ("period", sft.period().map_or(Cell::Text("-".into()), |p| p.into())),
                    ("mixing", sft.is_mixing().into()),
                ]),
            );
            let mut t = Table::new(&["length", "words"]);
            for n in 1..=*max_len {
                match sft.count_words(n) {
                    Ok(c) => t.push(vec![n.into(), c.into()]),
                    Err(Error::Overflow(_)) => break,
                    Err(e) => return Err(e.into()),
                }
            }
            report.add("word counts", t);
            let mut t = Table::new(&["name", "memory", "min", "max"]);
            for p in &sys.potentials {
                t.push(vec![
                    p.name.clone().into(),
                    p.potential.memory().into(),
                    p.potential.min_value().into(),
                    p.potential.max_value().into(),
                ]);
            }
            report.add("potentials", t);
        }
    }
    Ok(report)
}
