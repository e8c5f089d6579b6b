use std::borrow::Cow;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Scheme;
use crate::gates::{apply_gate_diagonal_in_place, apply_unitary};
use crate::measurement::{Measurable, Slice};
use crate::qstate::{DensityMatrix, DiagonalState};
use crate::{Error, Result, MAX_DENSE_WIRES};

/// A simulation back end for Alice's operator.
pub trait Engine: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// Largest register the engine accepts, if bounded.
    fn max_wires(&self) -> Option<usize>;

    fn check_size(&self, n_wires: usize) -> Result<()> {
        match self.max_wires() {
            Some(max) if n_wires > max => Err(Error::TooManyWiresForDense {
                wires: n_wires,
                max,
            }),
            _ => Ok(()),
        }
    }

    /// Applies Alice's operator for `scheme` to the initial joint state.
    fn apply_alice(&self, joint: &DiagonalState, scheme: &dyn Scheme) -> Result<JointState>;
}

/// The joint state after Alice's operator, in whichever form the engine keeps.
#[derive(Debug, Clone, PartialEq)]
pub enum JointState {
    Diagonal(DiagonalState),
    Dense(DensityMatrix),
}

impl Measurable for JointState {
    fn n_wires(&self) -> usize {
        match self {
            JointState::Diagonal(d) => d.n_wires(),
            JointState::Dense(rho) => rho.n_wires(),
        }
    }

    fn probabilities(&self) -> Cow<'_, [f64]> {
        match self {
            JointState::Diagonal(d) => d.probabilities(),
            JointState::Dense(rho) => rho.probabilities(),
        }
    }

    fn slice(&self, measured: &[usize], outcome: usize, keep: &[usize]) -> Slice {
        match self {
            JointState::Diagonal(d) => d.slice(measured, outcome, keep),
            JointState::Dense(rho) => rho.slice(measured, outcome, keep),
        }
    }

    fn slices(&self, measured: &[usize], keep: &[usize]) -> Vec<Slice> {
        match self {
            JointState::Diagonal(d) => d.slices(measured, keep),
            JointState::Dense(rho) => rho.slices(measured, keep),
        }
    }
}

/// Full density-matrix evolution `U rho U^dagger` with the dense operator.
#[derive(Debug, Clone, Copy, Default)]
pub struct DenseEngine;

impl DenseEngine {
    /// Evolves an arbitrary (possibly coherent) joint density matrix.
    pub fn apply_alice_dense(
        &self,
        joint: &DensityMatrix,
        scheme: &dyn Scheme,
    ) -> Result<DensityMatrix> {
        self.check_size(joint.n_wires())?;
        let n = joint.n_wires() / 3;
        let u = scheme.alice_operator(n)?;
        apply_unitary(joint, &u)
    }
}

impl Engine for DenseEngine {
    fn name(&self) -> &'static str {
        "dense"
    }

    fn max_wires(&self) -> Option<usize> {
        Some(MAX_DENSE_WIRES)
    }

    fn apply_alice(&self, joint: &DiagonalState, scheme: &dyn Scheme) -> Result<JointState> {
        self.check_size(joint.n_wires())?;
        let u = scheme.alice_operator(joint.n_wires() / 3)?;
        // U diag(p) U^dagger as a sum of p_k u_k u_k^dagger over the support
        // of p; the columns of U are sparse, so only their nonzeros are touched
        let d = joint.dim();
        let mut out = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        let mut nonzero = Vec::new();
        for (k, &p) in joint.probs().iter().enumerate().filter(|(_, &p)| p > 0.0) {
            nonzero.clear();
            nonzero.extend(
                u.matrix()
                    .column(k)
                    .iter()
                    .enumerate()
                    .filter(|(_, z)| **z != Complex64::new(0.0, 0.0))
                    .map(|(r, z)| (r, *z)),
            );
            for &(c, zc) in &nonzero {
                let zc = zc.conj() * p;
                for &(r, zr) in &nonzero {
                    out[(r, c)] += zr * zc;
                }
            }
        }
        let rho = DensityMatrix::from_trusted(joint.n_wires(), out);
        Ok(JointState::Dense(rho))
    }
}

/// Probability-vector evolution through Alice's gate list.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiagonalEngine;

impl Engine for DiagonalEngine {
    fn name(&self) -> &'static str {
        "diagonal"
    }

    fn max_wires(&self) -> Option<usize> {
        None
    }

    fn apply_alice(&self, joint: &DiagonalState, scheme: &dyn Scheme) -> Result<JointState> {
        let n = joint.n_wires() / 3;
        let mut state = joint.clone();
        for g in scheme.alice_circuit(n) {
            apply_gate_diagonal_in_place(&mut state, &g)?;
        }
        Ok(JointState::Diagonal(state))
    }
}
