//! What crosses from Alice to Bob, and what Bob does with it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::gates::{GateDescriptor, Unitary};
use crate::qstate::{DensityMatrix, DiagonalState, RegisterLayout};
use crate::{Error, Result};

/// The `N` x-bits Alice sends. Alpha bits stay with Alice.
///
/// Serializes as a string of exactly `N` `'0'`/`'1'` characters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ClassicalMessage {
    x_bits: Vec<u8>,
}

impl ClassicalMessage {
    pub fn new(x_bits: Vec<u8>) -> Result<Self> {
        if x_bits.is_empty() {
            return Err(Error::EmptyRegister);
        }
        if let Some(&b) = x_bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidBit(b));
        }
        Ok(ClassicalMessage { x_bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.x_bits
    }

    pub fn len(&self) -> usize {
        self.x_bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_bits.is_empty()
    }

    pub fn to_wire(&self) -> String {
        self.x_bits
            .iter()
            .map(|&b| if b == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for ClassicalMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_wire())
    }
}

impl TryFrom<String> for ClassicalMessage {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(format!("invalid bit character {other:?}")),
            })
            .collect::<std::result::Result<Vec<u8>, String>>()?;
        ClassicalMessage::new(bits).map_err(|e| e.to_string())
    }
}

impl From<ClassicalMessage> for String {
    fn from(m: ClassicalMessage) -> String {
        m.to_wire()
    }
}

/// Single-round, lossless Alice-to-Bob channel: one send, one receive.
#[derive(Debug, Default)]
pub struct ClassicalChannel {
    slot: Option<ClassicalMessage>,
    bits_sent: usize,
}

impl ClassicalChannel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Panics on a second send; the protocol has exactly one round.
    pub fn send(&mut self, message: ClassicalMessage) {
        assert!(
            self.slot.is_none() && self.bits_sent == 0,
            "channel already used"
        );
        self.bits_sent = message.len();
        self.slot = Some(message);
    }

    pub fn bits_sent(&self) -> usize {
        self.bits_sent
    }

    /// Hands the message to Bob, consuming the channel.
    pub fn receive(self) -> Option<ClassicalMessage> {
        self.slot
    }
}

/// Per-wire Pauli indices for Bob's `B_1..B_N`; only `sigma_0`/`sigma_1` occur.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliString(Vec<u8>);

impl PauliString {
    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `sigma_k1 (x) sigma_k2 (x) ...` on Bob's register.
    pub fn to_unitary(&self) -> Result<Unitary> {
        let n = self.len();
        let gates = self
            .0
            .iter()
            .enumerate()
            .map(|(w, &k)| GateDescriptor::pauli(k, w, n))
            .collect::<Result<Vec<_>>>()?;
        Unitary::from_gates(n, &gates)
    }

    /// The correction as an operator on the full `3N`-wire register.
    pub fn embed(&self, layout: &RegisterLayout) -> Result<Unitary> {
        let wires = layout.n_wires();
        let gates = self
            .0
            .iter()
            .zip(layout.b_wires())
            .map(|(&k, &b)| GateDescriptor::pauli(k, b, wires))
            .collect::<Result<Vec<_>>>()?;
        Unitary::from_gates(wires, &gates)
    }

    /// Bob's correction on a diagonal state of his `N` wires.
    pub fn apply_diagonal(&self, state: &DiagonalState) -> Result<DiagonalState> {
        if state.n_wires() != self.len() {
            return Err(Error::DimensionMismatch(state.n_wires(), self.len()));
        }
        let mut out = state.clone();
        for (w, &k) in self.0.iter().enumerate() {
            let g = GateDescriptor::pauli(k, w, self.len())?;
            crate::gates::apply_gate_diagonal_in_place(&mut out, &g)?;
        }
        Ok(out)
    }

    /// Bob's correction on a dense state of his `N` wires.
    pub fn apply_dense(&self, state: &DensityMatrix) -> Result<DensityMatrix> {
        crate::gates::apply_unitary(state, &self.to_unitary()?)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| format!("sigma{k}")).collect();
        f.write_str(&parts.join(" (x) "))
    }
}

/// `sigma_{x_i}` on `B_i`: identity where `x_i = 0`, NOT where `x_i = 1`.
pub fn correction_for(message: &ClassicalMessage) -> PauliString {
    PauliString(message.bits().to_vec())
}
