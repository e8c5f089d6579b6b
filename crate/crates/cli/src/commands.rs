//! Argument parsing and command dispatch.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use diagport::gates::{apply_unitary, post_alice_layout, Unitary};
use diagport::protocol::{
    compare_engines, compare_schemes, correction_for, engine_registry, run_once, scheme_registry,
    teleport_with_eigenbasis, verify_all_branches, ClassicalMessage, DiagonalEngine, Engine,
    Scheme, TeleportationResult,
};
use diagport::qstate::{DensityMatrix, DiagonalState};
use diagport::seed::{derive_seed, rng_from_seed};
use diagport::{EXACT_TOL, MAX_DENSE_WIRES, SPECTRAL_TOL};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::report::{
    BenchReport, BenchRun, BranchesReport, CaseReport, LocalityReport, RunBatch, RunReport, Timing,
    VerifyReport,
};
use crate::spec::{parse_state_file, InputSpec, Payload, SpecError};

/// The diagonal engine holds `2^(3N)` probabilities; beyond this `N` that is
/// more than a gigabyte.
pub const MAX_DIAGONAL_QUBITS: usize = 9;

/// Largest `N` for which `verify` also runs the dense engine and the
/// locality audit; dense cost grows as `64^N`.
pub const MAX_VERIFY_DENSE_QUBITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// Teleport the state in `--state` once (or `--trials` times).
    Run,
    /// Enumerate and audit every measurement branch for `--state`.
    Branches,
    /// Randomized verification over `--cases` inputs of size `--n`.
    Verify,
    /// Time the diagonal pipeline at size `--n`.
    Bench,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "diagport",
    version,
    about = "Teleport diagonal mixed states with classical resources"
)]
pub struct Cli {
    pub command: CommandKind,
    /// JSON state file.
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// copies | generalized (default copies).
    #[arg(long)]
    pub scheme: Option<String>,
    /// dense | diagonal (default diagonal).
    #[arg(long)]
    pub engine: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Number of qubits for verify and bench.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub cases: Option<usize>,
    /// Leave wall-clock fields out of the report.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Spec { path: String, source: SpecError },
    #[error(transparent)]
    Core(#[from] diagport::Error),
}

/// What to print and how to exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub exit_code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VERIFICATION_FAILED: u8 = 2;

pub fn dispatch(cli: &Cli) -> Result<Output, CliError> {
    check_flags(cli)?;
    match cli.command {
        CommandKind::Run => run(cli),
        CommandKind::Branches => branches(cli),
        CommandKind::Verify => verify(cli),
        CommandKind::Bench => bench(cli),
    }
}

fn check_flags(cli: &Cli) -> Result<(), CliError> {
    let name = cli
        .command
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_owned();
    let (state, trials, n, cases) = match cli.command {
        CommandKind::Run => (true, true, false, false),
        CommandKind::Branches => (true, false, false, false),
        CommandKind::Verify => (false, false, true, true),
        CommandKind::Bench => (true, true, true, false),
    };
    let reject = |flag: &str| {
        Err(CliError::Usage(format!(
            "--{flag} is not accepted by `{name}`"
        )))
    };
    if !state && cli.state.is_some() {
        return reject("state");
    }
    if !trials && cli.trials.is_some() {
        return reject("trials");
    }
    if !n && cli.n.is_some() {
        return reject("n");
    }
    if !cases && cli.cases.is_some() {
        return reject("cases");
    }
    if matches!(cli.command, CommandKind::Run | CommandKind::Branches) && cli.state.is_none() {
        return Err(CliError::Usage(format!("`{name}` needs --state <FILE>")));
    }
    if cli.command == CommandKind::Bench && cli.state.is_some() && cli.n.is_some() {
        return Err(CliError::Usage(
            "bench takes either --state or --n, not both".into(),
        ));
    }
    if cli.trials == Some(0) {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if cli.cases == Some(0) {
        return Err(CliError::Usage("--cases must be at least 1".into()));
    }
    Ok(())
}

fn load(path: &PathBuf) -> Result<InputSpec, CliError> {
    let shown = path.display().to_string();
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: shown.clone(),
        source,
    })?;
    let spec = parse_state_file(&bytes).map_err(|source| CliError::Spec {
        path: shown,
        source,
    })?;
    check_qubits(spec.n_qubits)?;
    Ok(spec)
}

fn check_qubits(n: usize) -> Result<(), CliError> {
    if n == 0 || n > MAX_DIAGONAL_QUBITS {
        return Err(CliError::Usage(format!(
            "N must be in 1..={MAX_DIAGONAL_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

fn scheme(name: Option<&str>) -> Result<Arc<dyn Scheme>, CliError> {
    scheme_registry()
        .get(name.unwrap_or("copies"))
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn engine(name: Option<&str>) -> Result<Arc<dyn Engine>, CliError> {
    engine_registry()
        .get(name.unwrap_or("diagonal"))
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn timing(cli: &Cli, start: Instant, with_rss: bool) -> Option<Timing> {
    (!cli.no_timing).then(|| Timing {
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
        peak_rss_bytes: if with_rss { peak_rss_bytes() } else { None },
    })
}

/// `VmHWM` from `/proc/self/status`, where available.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn teleport(
    spec: &InputSpec,
    scheme: &dyn Scheme,
    engine: &dyn Engine,
    seed: u64,
) -> Result<TeleportationResult, CliError> {
    Ok(match &spec.payload {
        Payload::Diagonal(d) => run_once(d, scheme, engine, seed)?,
        Payload::Eigen {
            eigenvalues,
            eigenvectors,
        } => teleport_with_eigenbasis(eigenvectors, eigenvalues, scheme, engine, seed)?,
    })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let spec = load(cli.state.as_ref().expect("checked"))?;
    let scheme = scheme(cli.scheme.as_deref())?;
    let engine = engine(cli.engine.as_deref())?;
    let trials = cli.trials.unwrap_or(1);

    let start = Instant::now();
    if trials == 1 {
        let result = teleport(&spec, scheme.as_ref(), engine.as_ref(), cli.seed)?;
        let report = RunReport::new(
            &result,
            spec.n_qubits,
            spec.label.clone(),
            timing(cli, start, false),
        );
        return Ok(Output {
            stdout: to_json(&report),
            exit_code: EXIT_OK,
        });
    }
    let runs = (0..trials)
        .map(|k| {
            let t = Instant::now();
            let result = teleport(
                &spec,
                scheme.as_ref(),
                engine.as_ref(),
                derive_seed(cli.seed, k as u64),
            )?;
            Ok(RunReport::new(
                &result,
                spec.n_qubits,
                None,
                timing(cli, t, false),
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let batch = RunBatch::new(cli.seed, runs, timing(cli, start, false));
    Ok(Output {
        stdout: to_json(&batch),
        exit_code: EXIT_OK,
    })
}

fn branches(cli: &Cli) -> Result<Output, CliError> {
    let spec = load(cli.state.as_ref().expect("checked"))?;
    let scheme = scheme(cli.scheme.as_deref())?;
    let engine = engine(cli.engine.as_deref())?;
    let start = Instant::now();
    let input = spec.diagonal();
    let report = verify_all_branches(input, scheme.as_ref(), engine.as_ref())?
        .with_scheme_equivalence(compare_schemes(input, engine.as_ref())?);
    let passed = report.passed;
    let out = BranchesReport {
        label: spec.label.clone(),
        input_kind: match spec.payload {
            Payload::Diagonal(_) => "probabilities",
            Payload::Eigen { .. } => "eigenvalues",
        },
        report,
        timing: timing(cli, start, false),
    };
    Ok(Output {
        stdout: to_json(&out),
        exit_code: if passed {
            EXIT_OK
        } else {
            EXIT_VERIFICATION_FAILED
        },
    })
}

fn verify_case(
    n: usize,
    case: usize,
    seed: u64,
    schemes: &[Arc<dyn Scheme>],
    engines: &[Arc<dyn Engine>],
    dense: bool,
) -> Result<CaseReport, CliError> {
    let input = DiagonalState::random(n, &mut rng_from_seed(seed))?;
    let mut r = CaseReport {
        case,
        seed,
        max_uniformity_deviation: 0.0,
        max_faithfulness_residual: 0.0,
        max_coherence_residual: 0.0,
        min_fidelity: 1.0,
        scheme_residual: 0.0,
        engine_residual: dense.then_some(0.0),
        eigenbasis_residual: None,
        deterministic: true,
        passed: true,
    };
    for scheme in schemes {
        for engine in engines {
            let audit = verify_all_branches(&input, scheme.as_ref(), engine.as_ref())?;
            r.max_uniformity_deviation = r
                .max_uniformity_deviation
                .max(audit.max_uniformity_deviation);
            r.max_faithfulness_residual = r
                .max_faithfulness_residual
                .max(audit.max_faithfulness_residual);
            r.max_coherence_residual = r.max_coherence_residual.max(audit.max_coherence_residual);
            r.min_fidelity = r.min_fidelity.min(audit.min_fidelity);
            r.passed &= audit.passed;

            let first = run_once(&input, scheme.as_ref(), engine.as_ref(), seed)?;
            let again = run_once(&input, scheme.as_ref(), engine.as_ref(), seed)?;
            r.deterministic &= first == again;
            r.min_fidelity = r.min_fidelity.min(first.fidelity_to_input);
        }
        if let Some(worst) = r.engine_residual.as_mut() {
            *worst = worst.max(compare_engines(&input, scheme.as_ref())?);
        }
    }
    for engine in engines {
        r.scheme_residual = r
            .scheme_residual
            .max(compare_schemes(&input, engine.as_ref())?);
    }
    if n <= MAX_VERIFY_DENSE_QUBITS {
        // a random eigenbasis on top of the same spectrum
        let v = Unitary::random(n, &mut rng_from_seed(derive_seed(seed, 1)))?;
        let target = apply_unitary(&DensityMatrix::from_diagonal(&input), &v)?;
        let mut worst = 0.0f64;
        for scheme in schemes {
            let result =
                teleport_with_eigenbasis(&v, &input, scheme.as_ref(), &DiagonalEngine, seed)?;
            worst = worst.max(result.bob_final.to_dense().max_abs_diff(&target));
        }
        r.eigenbasis_residual = Some(worst);
    }
    r.passed &= r.deterministic
        && r.eigenbasis_residual.is_none_or(|e| e <= SPECTRAL_TOL)
        && r.scheme_residual <= EXACT_TOL
        && r.engine_residual.is_none_or(|e| e <= EXACT_TOL)
        && 1.0 - r.min_fidelity <= SPECTRAL_TOL;
    Ok(r)
}

fn locality(n: usize, schemes: &[Arc<dyn Scheme>]) -> Result<LocalityReport, CliError> {
    let mut alice = 0.0f64;
    let mut bob = 0.0f64;
    let mut message_bits = 0;
    for scheme in schemes {
        let layout = scheme.layout(n);
        alice = alice.max(
            scheme
                .alice_operator(n)?
                .identity_residual_on(layout.b_wires())?,
        );
        let after = post_alice_layout(n, scheme.kind());
        let alice_wires: Vec<usize> = after
            .x_wires()
            .iter()
            .chain(after.a_wires())
            .copied()
            .collect();
        for m in 0..1usize << n {
            let message =
                ClassicalMessage::new((0..n).map(|i| ((m >> (n - 1 - i)) & 1) as u8).collect())?;
            message_bits = message_bits.max(message.to_wire().len());
            let correction = correction_for(&message).embed(&after)?;
            bob = bob.max(correction.identity_residual_on(&alice_wires)?);
        }
    }
    Ok(LocalityReport {
        alice_on_bob_wires: alice,
        bob_on_alice_wires: bob,
        message_bits,
        passed: alice <= EXACT_TOL && bob <= EXACT_TOL && message_bits == n,
    })
}

fn verify(cli: &Cli) -> Result<Output, CliError> {
    let n = cli.n.unwrap_or(2);
    check_qubits(n)?;
    let cases = cli.cases.unwrap_or(100);
    let schemes = match &cli.scheme {
        Some(name) => vec![scheme(Some(name))?],
        None => scheme_registry()
            .iter()
            .map(|(_, s)| Arc::clone(s))
            .collect(),
    };
    let dense_ok = n <= MAX_VERIFY_DENSE_QUBITS && 3 * n <= MAX_DENSE_WIRES;
    let engines: Vec<Arc<dyn Engine>> = match &cli.engine {
        Some(name) => vec![engine(Some(name))?],
        None => engine_registry()
            .iter()
            .filter(|(name, _)| dense_ok || *name != "dense")
            .map(|(_, e)| Arc::clone(e))
            .collect(),
    };
    if !dense_ok && engines.iter().any(|e| e.name() == "dense") {
        return Err(CliError::Usage(format!(
            "verify runs the dense engine only for N <= {MAX_VERIFY_DENSE_QUBITS}"
        )));
    }
    let dense = dense_ok && engines.len() > 1;

    let start = Instant::now();
    let case_reports = (0..cases)
        .into_par_iter()
        .map(|k| {
            verify_case(
                n,
                k,
                derive_seed(cli.seed, k as u64),
                &schemes,
                &engines,
                dense,
            )
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let locality = if dense_ok {
        Some(locality(n, &schemes)?)
    } else {
        None
    };

    let max = |f: fn(&CaseReport) -> f64| case_reports.iter().map(f).fold(0.0, f64::max);
    let failed_cases: Vec<usize> = case_reports
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.case)
        .collect();
    let passed = failed_cases.is_empty() && locality.as_ref().is_none_or(|l| l.passed);
    let report = VerifyReport {
        n_qubits: n,
        cases,
        seed: cli.seed,
        schemes: schemes.iter().map(|s| s.name().to_owned()).collect(),
        engines: engines.iter().map(|e| e.name().to_owned()).collect(),
        max_uniformity_deviation: max(|c| c.max_uniformity_deviation),
        max_faithfulness_residual: max(|c| c.max_faithfulness_residual),
        max_coherence_residual: max(|c| c.max_coherence_residual),
        max_scheme_residual: max(|c| c.scheme_residual),
        max_engine_residual: dense.then(|| max(|c| c.engine_residual.unwrap_or(0.0))),
        max_eigenbasis_residual: (n <= MAX_VERIFY_DENSE_QUBITS)
            .then(|| max(|c| c.eigenbasis_residual.unwrap_or(0.0))),
        min_fidelity: case_reports
            .iter()
            .map(|c| c.min_fidelity)
            .fold(1.0, f64::min),
        locality,
        failed_cases,
        passed,
        case_reports,
        timing: timing(cli, start, false),
    };
    Ok(Output {
        stdout: to_json(&report),
        exit_code: if passed {
            EXIT_OK
        } else {
            EXIT_VERIFICATION_FAILED
        },
    })
}

fn bench(cli: &Cli) -> Result<Output, CliError> {
    let scheme = scheme(cli.scheme.as_deref())?;
    let engine = engine(cli.engine.as_deref())?;
    if engine.name() != "diagonal" {
        return Err(CliError::Usage(
            "bench times the diagonal engine only".into(),
        ));
    }
    let spec = match &cli.state {
        Some(path) => load(path)?,
        None => {
            let n = cli.n.unwrap_or(8);
            check_qubits(n)?;
            let input = DiagonalState::random(n, &mut rng_from_seed(cli.seed))?;
            InputSpec {
                n_qubits: n,
                payload: Payload::Diagonal(input),
                label: None,
            }
        }
    };
    let n = spec.n_qubits;
    let entries: u64 = 1 << (3 * n);

    let start = Instant::now();
    let runs = (0..cli.trials.unwrap_or(1))
        .map(|k| {
            let seed = derive_seed(cli.seed, k as u64);
            let t = Instant::now();
            let result = teleport(&spec, scheme.as_ref(), engine.as_ref(), seed)?;
            Ok(BenchRun {
                seed,
                message: result.message.to_wire(),
                fidelity: result.fidelity_to_input,
                wall_ms: (!cli.no_timing).then(|| t.elapsed().as_secs_f64() * 1e3),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = BenchReport {
        scheme: scheme.kind(),
        engine: engine.name().to_owned(),
        n_qubits: n,
        wires: 3 * n,
        state_entries: entries,
        state_bytes: entries * std::mem::size_of::<f64>() as u64,
        min_fidelity: runs.iter().map(|r| r.fidelity).fold(1.0, f64::min),
        runs,
        timing: timing(cli, start, true),
    };
    Ok(Output {
        stdout: to_json(&report),
        exit_code: EXIT_OK,
    })
}
