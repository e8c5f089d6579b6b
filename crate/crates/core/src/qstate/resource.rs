//! The correlated resource states Alice and Bob share before the protocol.

use super::DiagonalState;
use crate::gates::{interleave_network, Direction};

/// `(|00><00| + |11><11|) / 2`.
pub fn classical_pair() -> DiagonalState {
    DiagonalState::from_raw(2, vec![0.5, 0.0, 0.0, 0.5])
}

/// `N` classical pairs in interleaved order `A_1, B_1, ..., A_N, B_N`.
pub fn copies_resource(n: usize) -> DiagonalState {
    assert!(n >= 1, "at least one pair required");
    let pair = classical_pair();
    (1..n).fold(pair.clone(), |acc, _| acc.tensor(&pair))
}

/// The generalized correlated state over `A_1..A_N, B_1..B_N`: the `N` pairs
/// conjugated by the interleave-to-block wire permutation.
pub fn generalized_classical_state(n: usize) -> DiagonalState {
    interleave_network(n, Direction::InterleavedToBlock).apply_diagonal(&copies_resource(n))
}
