//! Gates and composite operators: single-wire embeddings, the parting CNOT,
//! swaps, the interleave swap network, Alice's operator for both schemes and
//! the probability-space fast path.

mod alice;
mod descriptor;
mod diagonal;
mod network;
mod permutation;
mod unitary;

pub use alice::{alice_circuit, alice_operator, alice_wire_map, post_alice_layout};
pub use descriptor::{hadamard_matrix, pauli_matrix, GateDescriptor, GateKind};
pub use diagonal::{apply_gate_diagonal, apply_gate_diagonal_in_place};
pub use network::{interleave_network, interleave_swaps, interleave_wire_map, Direction};
pub use permutation::PermutationGate;
pub use unitary::{apply_unitary, cnot, embed_single, swap, Unitary};
