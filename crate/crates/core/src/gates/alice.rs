//! Alice's operator: CNOT from each `A_i` onto `X_i`, then a Hadamard on each
//! `A_i`. In the generalized scheme her wires are first reordered from
//! `X_1..X_N, A_1..A_N` to `X_1, A_1, ..., X_N, A_N` by neighbour swaps.

use super::{
    interleave_swaps, interleave_wire_map, Direction, GateDescriptor, PermutationGate, Unitary,
};
use crate::qstate::{RegisterLayout, SchemeKind};
use crate::Result;

/// Where each wire's qubit sits after Alice's operator (`3N` entries).
pub fn alice_wire_map(n: usize, scheme: SchemeKind) -> Vec<usize> {
    let mut dest: Vec<usize> = (0..3 * n).collect();
    if scheme == SchemeKind::Generalized {
        // the X block plays the first half of the shuffle, the A block the second
        let xa = interleave_wire_map(n, Direction::BlockToInterleaved);
        dest[..2 * n].copy_from_slice(&xa);
    }
    dest
}

/// Role-to-wire map in force once Alice's operator has run.
pub fn post_alice_layout(n: usize, scheme: SchemeKind) -> RegisterLayout {
    RegisterLayout::for_scheme(scheme, n).relabel(&alice_wire_map(n, scheme))
}

/// The circuit in application order: reordering swaps (generalized only),
/// then `CNOT(control A_i, target X_i)` for each `i`, then `H` on each `A_i`.
pub fn alice_circuit(n: usize, scheme: SchemeKind) -> Vec<GateDescriptor> {
    let wires = 3 * n;
    let mut gates = Vec::with_capacity(n * (n + 3) / 2);
    if scheme == SchemeKind::Generalized {
        for (i, j) in interleave_swaps(n, Direction::BlockToInterleaved) {
            gates.push(GateDescriptor::swap(i, j, wires).expect("swap within X/A block"));
        }
    }
    let layout = post_alice_layout(n, scheme);
    for i in 0..n {
        gates.push(
            GateDescriptor::cnot(layout.a_wires()[i], layout.x_wires()[i], wires)
                .expect("distinct X and A wires"),
        );
    }
    for &a in layout.a_wires() {
        gates.push(GateDescriptor::hadamard(a, wires).expect("A wire in range"));
    }
    gates
}

/// Dense form of Alice's operator on all `3N` wires.
///
/// Built independently of [`alice_circuit`]: CNOTs and Hadamards act on the
/// scheme's initial wires (non-adjacent in the generalized layout), and the
/// reordering is applied afterwards as one permutation.
pub fn alice_operator(n: usize, scheme: SchemeKind) -> Result<Unitary> {
    let wires = 3 * n;
    let layout = RegisterLayout::for_scheme(scheme, n);
    let mut gates = Vec::with_capacity(2 * n);
    for i in 0..n {
        gates.push(GateDescriptor::cnot(
            layout.a_wires()[i],
            layout.x_wires()[i],
            wires,
        )?);
    }
    for &a in layout.a_wires() {
        gates.push(GateDescriptor::hadamard(a, wires)?);
    }
    let mut u = Unitary::from_gates(wires, &gates)?;
    if scheme == SchemeKind::Generalized {
        u.left_permute(&PermutationGate::from_wire_map(&alice_wire_map(n, scheme))?);
    }
    Ok(u)
}
