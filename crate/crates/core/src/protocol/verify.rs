//! Exhaustive audit of every measurement branch.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{
    correction_for, initial_joint_state, ClassicalMessage, DenseEngine, DiagonalEngine, Engine,
    PauliString, Scheme,
};
use super::{CopiesScheme, GeneralizedScheme};
use crate::measurement::{enumerate_branches, BranchRecord};
use crate::qstate::{DiagonalState, SchemeKind};
use crate::{Result, EXACT_TOL, SPECTRAL_TOL};

/// One branch with Bob's correction and its residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchAudit {
    #[serde(flatten)]
    pub record: BranchRecord,
    pub correction: PauliString,
    /// `|p - 4^-N|`.
    pub uniformity_deviation: f64,
    /// Max entrywise `|bob corrected - input|`.
    pub faithfulness_residual: f64,
    pub fidelity: f64,
}

/// Machine-readable result of [`verify_all_branches`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub scheme: SchemeKind,
    pub engine: String,
    pub n_qubits: usize,
    pub branch_count: usize,
    pub max_uniformity_deviation: f64,
    pub max_faithfulness_residual: f64,
    pub max_coherence_residual: f64,
    pub min_fidelity: f64,
    pub probability_sum_error: f64,
    pub uniform: bool,
    pub faithful: bool,
    /// Present when the other scheme was run on the same input.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheme_equivalence_residual: Option<f64>,
    pub passed: bool,
    pub branches: Vec<BranchAudit>,
}

impl VerificationReport {
    /// Records a scheme-equivalence residual and folds it into `passed`.
    pub fn with_scheme_equivalence(mut self, residual: f64) -> Self {
        self.scheme_equivalence_residual = Some(residual);
        self.passed &= residual <= EXACT_TOL;
        self
    }
}

/// Enumerates all `4^N` branches and checks the uniform-outcome law and
/// faithfulness of Bob's corrected state on each.
pub fn verify_all_branches(
    input: &DiagonalState,
    scheme: &dyn Scheme,
    engine: &dyn Engine,
) -> Result<VerificationReport> {
    let n = input.n_wires();
    let records = branch_table(input, scheme, engine)?;
    let expected_p = 0.25f64.powi(n as i32);

    let mut branches = Vec::with_capacity(records.len());
    for record in records {
        let correction = correction_for(&ClassicalMessage::new(record.x_bits.clone())?);
        let bob = correction.apply_diagonal(&record.bob_state_raw)?;
        branches.push(BranchAudit {
            uniformity_deviation: (record.probability - expected_p).abs(),
            faithfulness_residual: bob
                .max_abs_diff(input)
                .max(record.bob_state_corrected.max_abs_diff(input)),
            fidelity: bob.fidelity(input)?,
            correction,
            record,
        });
    }

    let max = |f: fn(&BranchAudit) -> f64| branches.iter().map(f).fold(0.0, f64::max);
    let max_uniformity_deviation = max(|b| b.uniformity_deviation);
    let max_faithfulness_residual = max(|b| b.faithfulness_residual);
    let max_coherence_residual = max(|b| b.record.coherence_residual);
    let min_fidelity = branches.iter().map(|b| b.fidelity).fold(1.0, f64::min);
    let probability_sum_error =
        (branches.iter().map(|b| b.record.probability).sum::<f64>() - 1.0).abs();

    let uniform = branches.len() == 1 << (2 * n) && max_uniformity_deviation <= EXACT_TOL;
    let faithful = max_faithfulness_residual <= EXACT_TOL
        && max_coherence_residual <= EXACT_TOL
        && (1.0 - min_fidelity) <= SPECTRAL_TOL;
    Ok(VerificationReport {
        scheme: scheme.kind(),
        engine: engine.name().to_owned(),
        n_qubits: n,
        branch_count: branches.len(),
        max_uniformity_deviation,
        max_faithfulness_residual,
        max_coherence_residual,
        min_fidelity,
        probability_sum_error,
        uniform,
        faithful,
        scheme_equivalence_residual: None,
        passed: uniform && faithful && probability_sum_error <= EXACT_TOL,
        branches,
    })
}

fn branch_table(
    input: &DiagonalState,
    scheme: &dyn Scheme,
    engine: &dyn Engine,
) -> Result<Vec<BranchRecord>> {
    engine.check_size(3 * input.n_wires())?;
    let (joint, _) = initial_joint_state(input, scheme);
    let evolved = engine.apply_alice(&joint, scheme)?;
    enumerate_branches(&evolved, &scheme.measurement_plan(input.n_wires()))
}

fn record_residual(a: &BranchRecord, b: &BranchRecord) -> f64 {
    if a.x_bits != b.x_bits || a.alpha_bits != b.alpha_bits {
        return f64::INFINITY;
    }
    (a.probability - b.probability)
        .abs()
        .max(a.bob_state_raw.max_abs_diff(&b.bob_state_raw))
        .max(a.bob_state_corrected.max_abs_diff(&b.bob_state_corrected))
}

/// Max residual between the two schemes' branch tables, matched on `(x, alpha)`.
pub fn compare_schemes(input: &DiagonalState, engine: &dyn Engine) -> Result<f64> {
    let copies = branch_table(input, &CopiesScheme, engine)?;
    let generalized = branch_table(input, &GeneralizedScheme, engine)?;
    if copies.len() != generalized.len() {
        return Ok(f64::INFINITY);
    }
    let by_key: HashMap<(&[u8], &[u8]), &BranchRecord> = generalized
        .iter()
        .map(|r| ((r.x_bits.as_slice(), r.alpha_bits.as_slice()), r))
        .collect();
    Ok(copies
        .iter()
        .map(|r| {
            by_key
                .get(&(r.x_bits.as_slice(), r.alpha_bits.as_slice()))
                .map_or(f64::INFINITY, |g| record_residual(r, g))
        })
        .fold(0.0, f64::max))
}

/// Max residual between dense and diagonal branch tables for one scheme.
pub fn compare_engines(input: &DiagonalState, scheme: &dyn Scheme) -> Result<f64> {
    let dense = branch_table(input, scheme, &DenseEngine)?;
    let diagonal = branch_table(input, scheme, &DiagonalEngine)?;
    if dense.len() != diagonal.len() {
        return Ok(f64::INFINITY);
    }
    Ok(dense
        .iter()
        .zip(&diagonal)
        .map(|(a, b)| record_residual(a, b).max(a.coherence_residual))
        .fold(0.0, f64::max))
}
