//! The swap network that moves interleaved pairs `(A_1, B_1, ..., A_N, B_N)`
//! into block order `(A_1..A_N, B_1..B_N)` and back.
//!
//! The shuffle is an involution only for `N <= 2`; from `N = 3` on it is a
//! longer cycle, so both directions are kept explicit.

use super::PermutationGate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    BlockToInterleaved,
    InterleavedToBlock,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::BlockToInterleaved => Direction::InterleavedToBlock,
            Direction::InterleavedToBlock => Direction::BlockToInterleaved,
        }
    }
}

/// Destination wire for each of the `2N` wires.
pub fn interleave_wire_map(n: usize, direction: Direction) -> Vec<usize> {
    let to_block: Vec<usize> = (0..2 * n)
        .map(|w| if w % 2 == 0 { w / 2 } else { n + w / 2 })
        .collect();
    match direction {
        Direction::InterleavedToBlock => to_block,
        Direction::BlockToInterleaved => {
            let mut inv = vec![0; 2 * n];
            for (w, &d) in to_block.iter().enumerate() {
                inv[d] = w;
            }
            inv
        }
    }
}

/// Adjacent transpositions `(k, k+1)` realizing the shuffle, in application
/// order. There are `N(N-1)/2` of them.
pub fn interleave_swaps(n: usize, direction: Direction) -> Vec<(usize, usize)> {
    let dest = interleave_wire_map(n, direction);
    // arrangement[p] = original wire currently sitting at position p
    let mut arrangement: Vec<usize> = (0..2 * n).collect();
    let mut wanted = vec![0; 2 * n];
    for (w, &d) in dest.iter().enumerate() {
        wanted[d] = w;
    }
    let mut swaps = Vec::new();
    for (p, &target) in wanted.iter().enumerate() {
        let mut q = arrangement
            .iter()
            .position(|&w| w == target)
            .expect("wire present");
        while q > p {
            arrangement.swap(q - 1, q);
            swaps.push((q - 1, q));
            q -= 1;
        }
    }
    swaps
}

/// The shuffle on `2N` wires as a basis permutation, composed from the
/// neighbour swaps of [`interleave_swaps`].
pub fn interleave_network(n: usize, direction: Direction) -> PermutationGate {
    assert!(n >= 1, "network needs at least one pair");
    let wires = 2 * n;
    interleave_swaps(n, direction).into_iter().fold(
        PermutationGate::identity(wires),
        |acc, (i, j)| {
            let mut dest: Vec<usize> = (0..wires).collect();
            dest.swap(i, j);
            acc.then(&PermutationGate::from_wire_map(&dest).expect("transposition"))
        },
    )
}
