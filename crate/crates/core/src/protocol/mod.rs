//! The two-party protocol.
//!
//! Alice holds `X_1..X_N` (the state to send) and `A_1..A_N`; Bob holds
//! `B_1..B_N`. Each `(A_i, B_i)` is classically correlated. Alice applies her
//! operator, measures all her wires in the computational basis and sends only
//! the `N` x-bits. Bob flips `B_i` whenever `x_i = 1` and ends up holding the
//! input state exactly, on every branch.

mod eigenbasis;
mod engine;
mod message;
mod scheme;
mod verify;

use std::sync::Arc;

pub use eigenbasis::{dephasing_demo, teleport_with_eigenbasis};
pub use engine::{DenseEngine, DiagonalEngine, Engine, JointState};
pub use message::{correction_for, ClassicalChannel, ClassicalMessage, PauliString};
pub use scheme::{CopiesScheme, GeneralizedScheme, Scheme};
pub use verify::{
    compare_engines, compare_schemes, verify_all_branches, BranchAudit, VerificationReport,
};

use crate::measurement::{sample_outcome, BranchRecord};
use crate::qstate::{DensityMatrix, DiagonalState, RegisterLayout, SchemeKind};
use crate::registry::Registry;
use crate::seed::rng_from_seed;
use crate::Result;

/// All built-in schemes by name.
pub fn scheme_registry() -> Registry<dyn Scheme> {
    let mut r: Registry<dyn Scheme> = Registry::new("scheme");
    r.register("copies", Arc::new(CopiesScheme));
    r.register("generalized", Arc::new(GeneralizedScheme));
    r
}

/// All built-in engines by name.
pub fn engine_registry() -> Registry<dyn Engine> {
    let mut r: Registry<dyn Engine> = Registry::new("engine");
    r.register("dense", Arc::new(DenseEngine));
    r.register("diagonal", Arc::new(DiagonalEngine));
    r
}

/// A register state that is either diagonal or a full density matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum RegisterState {
    Diagonal(DiagonalState),
    Dense(DensityMatrix),
}

impl RegisterState {
    pub fn to_dense(&self) -> DensityMatrix {
        match self {
            RegisterState::Diagonal(d) => DensityMatrix::from_diagonal(d),
            RegisterState::Dense(rho) => rho.clone(),
        }
    }
}

/// Outcome of one sampled protocol run.
#[derive(Debug, Clone, PartialEq)]
pub struct TeleportationResult {
    pub scheme: SchemeKind,
    pub engine: &'static str,
    pub seed: u64,
    pub input: RegisterState,
    pub outcome: BranchRecord,
    pub message: ClassicalMessage,
    /// Bits that crossed the channel; always `N`.
    pub cbits_sent: usize,
    pub bob_final: RegisterState,
    pub fidelity_to_input: f64,
}

/// `input (x) resource` in the scheme's layout.
pub fn initial_joint_state(
    input: &DiagonalState,
    scheme: &dyn Scheme,
) -> (DiagonalState, RegisterLayout) {
    let n = input.n_wires();
    (input.tensor(&scheme.resource(n)), scheme.layout(n))
}

/// One run: Alice evolves and measures, sends her x-bits, Bob corrects.
pub fn run_once(
    input: &DiagonalState,
    scheme: &dyn Scheme,
    engine: &dyn Engine,
    seed: u64,
) -> Result<TeleportationResult> {
    let n = input.n_wires();
    engine.check_size(3 * n)?;

    // Alice: step one, then the measurement of step two
    let (joint, _) = initial_joint_state(input, scheme);
    let evolved = engine.apply_alice(&joint, scheme)?;
    let plan = scheme.measurement_plan(n);
    let sample = sample_outcome(&evolved, &plan, &mut rng_from_seed(seed))?;
    let mut channel = ClassicalChannel::new();
    channel.send(ClassicalMessage::new(sample.record.x_bits.clone())?);
    let cbits_sent = channel.bits_sent();

    // Bob: his wires are in the branch's conditional state
    let message = channel.receive().expect("message was sent");
    let bob_final = correction_for(&message).apply_diagonal(&sample.record.bob_state_raw)?;
    let fidelity_to_input = bob_final.fidelity(input)?;

    Ok(TeleportationResult {
        scheme: scheme.kind(),
        engine: engine.name(),
        seed,
        input: RegisterState::Diagonal(input.clone()),
        outcome: sample.record,
        message,
        cbits_sent,
        bob_final: RegisterState::Diagonal(bob_final),
        fidelity_to_input,
    })
}
