//! Probability-space fast path. Exact for this protocol: the joint state is
//! diagonal before every Hadamard and measurement follows directly, so only
//! the dephased action `p'(..b_w..) = (p(..0..) + p(..1..)) / 2` matters.

use super::{GateDescriptor, GateKind};
use crate::bits::mask;
use crate::qstate::DiagonalState;
use crate::{Error, Result};

pub fn apply_gate_diagonal(d: &DiagonalState, g: &GateDescriptor) -> Result<DiagonalState> {
    let mut out = d.clone();
    apply_gate_diagonal_in_place(&mut out, g)?;
    Ok(out)
}

/// In-place variant; touches each entry at most once per gate.
pub fn apply_gate_diagonal_in_place(d: &mut DiagonalState, g: &GateDescriptor) -> Result<()> {
    let n = d.n_wires();
    if g.n_wires() != n {
        return Err(Error::DimensionMismatch(g.n_wires(), n));
    }
    let p = d.probs_mut();
    match g.kind() {
        GateKind::Pauli(0, _) => {}
        GateKind::Pauli(1, w) => {
            let m = mask(w, n);
            for i in (0..p.len()).filter(|i| i & m == 0) {
                p.swap(i, i | m);
            }
        }
        GateKind::Cnot { control, target } => {
            let (c, t) = (mask(control, n), mask(target, n));
            for i in (0..p.len()).filter(|i| i & c != 0 && i & t == 0) {
                p.swap(i, i | t);
            }
        }
        GateKind::Swap(a, b) => {
            let (ma, mb) = (mask(a, n), mask(b, n));
            for i in (0..p.len()).filter(|i| i & ma != 0 && i & mb == 0) {
                p.swap(i, i ^ ma ^ mb);
            }
        }
        GateKind::Hadamard(w) => {
            let m = mask(w, n);
            for i in (0..p.len()).filter(|i| i & m == 0) {
                let avg = 0.5 * (p[i] + p[i | m]);
                p[i] = avg;
                p[i | m] = avg;
            }
        }
        GateKind::Pauli(..) => return Err(Error::UnsupportedGate(g.to_string())),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{apply_unitary, PermutationGate};
    use crate::qstate::{classical_pair, make_diagonal, DensityMatrix};

    #[test]
    fn dephased_hadamard() {
        let d = DiagonalState::basis(1, 0).unwrap();
        let g = GateDescriptor::hadamard(0, 1).unwrap();
        assert_eq!(apply_gate_diagonal(&d, &g).unwrap().probs(), &[0.5, 0.5]);
    }

    #[test]
    fn cnot_permutes_probabilities() {
        let d = make_diagonal(&[0.0, 0.25, 0.0, 0.75]).unwrap();
        let g = GateDescriptor::cnot(1, 0, 2).unwrap();
        // |01> -> |11>, |11> -> |01>
        assert_eq!(
            apply_gate_diagonal(&d, &g).unwrap().probs(),
            &[0.0, 0.75, 0.0, 0.25]
        );
    }

    #[test]
    fn sigma2_sigma3_unsupported() {
        let d = DiagonalState::uniform(1).unwrap();
        for k in [2, 3] {
            let g = GateDescriptor::pauli(k, 0, 1).unwrap();
            assert!(matches!(
                apply_gate_diagonal(&d, &g),
                Err(Error::UnsupportedGate(_))
            ));
        }
        let wrong_size = GateDescriptor::hadamard(0, 2).unwrap();
        assert!(apply_gate_diagonal(&d, &wrong_size).is_err());
    }

    #[test]
    fn permutation_gates_match_index_maps() {
        let d = DiagonalState::random(3, &mut rand::thread_rng()).unwrap();
        for g in [
            GateDescriptor::pauli(1, 2, 3).unwrap(),
            GateDescriptor::cnot(0, 2, 3).unwrap(),
            GateDescriptor::swap(0, 2, 3).unwrap(),
        ] {
            let via_perm: PermutationGate = g.to_permutation().unwrap();
            assert_eq!(
                apply_gate_diagonal(&d, &g).unwrap(),
                via_perm.apply_diagonal(&d)
            );
        }
    }

    #[test]
    fn one_qubit_pipeline_matches_dense() {
        let joint = make_diagonal(&[0.3, 0.7])
            .unwrap()
            .tensor(&classical_pair());
        let gates = crate::gates::alice_circuit(1, crate::qstate::SchemeKind::Copies);
        let mut fast = joint.clone();
        for g in &gates {
            apply_gate_diagonal_in_place(&mut fast, g).unwrap();
        }
        let u = crate::gates::alice_operator(1, crate::qstate::SchemeKind::Copies).unwrap();
        let dense = apply_unitary(&DensityMatrix::from_diagonal(&joint), &u)
            .unwrap()
            .diagonal_part();
        assert!(fast.max_abs_diff(&dense) < 1e-15);
    }
}
