//! JSON shapes printed by the CLI.

use std::collections::BTreeMap;

use diagport::protocol::{RegisterState, TeleportationResult, VerificationReport};
use diagport::qstate::SchemeKind;
use serde::{Deserialize, Serialize};

/// A register state as JSON: a probability vector, or a row-major matrix of
/// `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateJson {
    Diagonal(Vec<f64>),
    Dense(Vec<Vec<[f64; 2]>>),
}

impl From<&RegisterState> for StateJson {
    fn from(state: &RegisterState) -> Self {
        match state {
            RegisterState::Diagonal(d) => StateJson::Diagonal(d.probs().to_vec()),
            RegisterState::Dense(rho) => {
                let m = rho.matrix();
                StateJson::Dense(
                    (0..m.nrows())
                        .map(|i| {
                            (0..m.ncols())
                                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                                .collect()
                        })
                        .collect(),
                )
            }
        }
    }
}

/// Wall-clock measurements; left out under `--no-timing` so reports are
/// byte-for-byte reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peak_rss_bytes: Option<u64>,
}

fn bits_string(bits: &[u8]) -> String {
    bits.iter()
        .map(|b| if *b == 0 { '0' } else { '1' })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub scheme: SchemeKind,
    pub engine: String,
    pub seed: u64,
    pub n_qubits: usize,
    pub input: StateJson,
    /// What crossed the channel.
    pub message: String,
    /// Alice's other outcome bits; never sent.
    pub alpha_bits: String,
    pub cbits_sent: usize,
    pub branch_probability: f64,
    pub bob_final: StateJson,
    pub fidelity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunReport {
    pub fn new(
        result: &TeleportationResult,
        n_qubits: usize,
        label: Option<String>,
        timing: Option<Timing>,
    ) -> Self {
        RunReport {
            label,
            scheme: result.scheme,
            engine: result.engine.to_owned(),
            seed: result.seed,
            n_qubits,
            input: (&result.input).into(),
            message: result.message.to_wire(),
            alpha_bits: bits_string(&result.outcome.alpha_bits),
            cbits_sent: result.cbits_sent,
            branch_probability: result.outcome.probability,
            bob_final: (&result.bob_final).into(),
            fidelity: result.fidelity_to_input,
            timing,
        }
    }
}

/// `run --trials K` with `K > 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunBatch {
    pub master_seed: u64,
    pub trials: usize,
    /// Counts keyed by the outcome string `x bits` then `alpha bits`.
    pub outcome_counts: BTreeMap<String, u64>,
    pub min_fidelity: f64,
    pub runs: Vec<RunReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl RunBatch {
    pub fn new(master_seed: u64, runs: Vec<RunReport>, timing: Option<Timing>) -> Self {
        let mut outcome_counts = BTreeMap::new();
        for r in &runs {
            *outcome_counts
                .entry(format!("{}{}", r.message, r.alpha_bits))
                .or_insert(0) += 1;
        }
        RunBatch {
            master_seed,
            trials: runs.len(),
            outcome_counts,
            min_fidelity: runs.iter().map(|r| r.fidelity).fold(1.0, f64::min),
            runs,
            timing,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchesReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// `eigenvalues` when the state file gave an eigen-decomposition; the
    /// table then describes the diagonalized register.
    pub input_kind: &'static str,
    #[serde(flatten)]
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: usize,
    pub seed: u64,
    pub max_uniformity_deviation: f64,
    pub max_faithfulness_residual: f64,
    pub max_coherence_residual: f64,
    pub min_fidelity: f64,
    pub scheme_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub engine_residual: Option<f64>,
    /// Max entrywise `|bob - V diag V^dagger|` with a random `V`, N <= 3 only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenbasis_residual: Option<f64>,
    pub deterministic: bool,
    pub passed: bool,
}

/// Operator locality, audited once per `verify` on the dense matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    /// How far Alice's operator is from the identity on Bob's wires.
    pub alice_on_bob_wires: f64,
    /// How far every possible correction is from the identity on Alice's wires.
    pub bob_on_alice_wires: f64,
    pub message_bits: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n_qubits: usize,
    pub cases: usize,
    pub seed: u64,
    pub schemes: Vec<String>,
    pub engines: Vec<String>,
    pub max_uniformity_deviation: f64,
    pub max_faithfulness_residual: f64,
    pub max_coherence_residual: f64,
    pub max_scheme_residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_engine_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_eigenbasis_residual: Option<f64>,
    pub min_fidelity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locality: Option<LocalityReport>,
    pub failed_cases: Vec<usize>,
    pub passed: bool,
    pub case_reports: Vec<CaseReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub seed: u64,
    pub message: String,
    pub fidelity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub scheme: SchemeKind,
    pub engine: String,
    pub n_qubits: usize,
    pub wires: usize,
    /// Probabilities the diagonal engine holds for the joint register.
    pub state_entries: u64,
    pub state_bytes: u64,
    pub min_fidelity: f64,
    pub runs: Vec<BenchRun>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}
