use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{PermutationGate, Unitary};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Hadamard(usize),
    /// `sigma_k` on a wire, `k` in `0..=3`.
    Pauli(u8, usize),
    /// NOT on `target` when `control` reads 1; any separation allowed.
    Cnot {
        control: usize,
        target: usize,
    },
    Swap(usize, usize),
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GateKind::Hadamard(w) => write!(f, "H({w})"),
            GateKind::Pauli(k, w) => write!(f, "sigma{k}({w})"),
            GateKind::Cnot { control, target } => write!(f, "CNOT(c={control},t={target})"),
            GateKind::Swap(i, j) => write!(f, "SWAP({i},{j})"),
        }
    }
}

/// A gate bound to a register size, with its wire indices checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GateDescriptor {
    kind: GateKind,
    n_wires: usize,
}

impl GateDescriptor {
    pub fn new(kind: GateKind, n_wires: usize) -> Result<Self> {
        let in_range = |w: usize| {
            if w < n_wires {
                Ok(())
            } else {
                Err(Error::WireOutOfRange { wire: w, n_wires })
            }
        };
        match kind {
            GateKind::Hadamard(w) => in_range(w)?,
            GateKind::Pauli(k, w) => {
                in_range(w)?;
                if k > 3 {
                    return Err(Error::UnsupportedGate(kind.to_string()));
                }
            }
            GateKind::Cnot {
                control: a,
                target: b,
            }
            | GateKind::Swap(a, b) => {
                in_range(a)?;
                in_range(b)?;
                if a == b {
                    return Err(Error::WireCollision(a));
                }
            }
        }
        Ok(GateDescriptor { kind, n_wires })
    }

    pub fn hadamard(wire: usize, n_wires: usize) -> Result<Self> {
        Self::new(GateKind::Hadamard(wire), n_wires)
    }

    pub fn pauli(k: u8, wire: usize, n_wires: usize) -> Result<Self> {
        Self::new(GateKind::Pauli(k, wire), n_wires)
    }

    pub fn cnot(control: usize, target: usize, n_wires: usize) -> Result<Self> {
        Self::new(GateKind::Cnot { control, target }, n_wires)
    }

    pub fn swap(i: usize, j: usize, n_wires: usize) -> Result<Self> {
        Self::new(GateKind::Swap(i, j), n_wires)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    /// Whether the gate maps basis states to basis states (0/1 matrix).
    pub fn is_permutation(&self) -> bool {
        matches!(
            self.kind,
            GateKind::Pauli(0 | 1, _) | GateKind::Cnot { .. } | GateKind::Swap(..)
        )
    }

    /// Basis-index permutation for 0/1 gates, `None` otherwise.
    pub fn to_permutation(&self) -> Option<PermutationGate> {
        self.is_permutation()
            .then(|| PermutationGate::from_index_map(self.n_wires, |i| self.map_index(i)))
    }

    /// Image of a basis index under a permutation gate.
    pub(crate) fn map_index(&self, i: usize) -> usize {
        let n = self.n_wires;
        let m = |w| crate::bits::mask(w, n);
        match self.kind {
            GateKind::Pauli(0, _) => i,
            GateKind::Pauli(1, w) => i ^ m(w),
            GateKind::Cnot { control, target } => {
                if i & m(control) != 0 {
                    i ^ m(target)
                } else {
                    i
                }
            }
            GateKind::Swap(a, b) => {
                if ((i & m(a)) != 0) != ((i & m(b)) != 0) {
                    i ^ m(a) ^ m(b)
                } else {
                    i
                }
            }
            _ => unreachable!("not a permutation gate"),
        }
    }

    /// The 2x2 matrix of a single-wire gate.
    pub(crate) fn single_wire(&self) -> Option<(Matrix2<Complex64>, usize)> {
        match self.kind {
            GateKind::Hadamard(w) => Some((hadamard_matrix(), w)),
            GateKind::Pauli(k, w) => Some((pauli_matrix(k), w)),
            _ => None,
        }
    }

    /// Dense unitary on the full register.
    pub fn to_unitary(&self) -> Result<Unitary> {
        match self.kind {
            GateKind::Cnot { control, target } => super::cnot(control, target, self.n_wires),
            GateKind::Swap(i, j) => super::swap(i, j, self.n_wires),
            _ => {
                let (g, w) = self.single_wire().expect("single-wire gate");
                super::embed_single(&g, w, self.n_wires)
            }
        }
    }
}

impl fmt::Display for GateDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.kind.fmt(f)
    }
}

pub fn hadamard_matrix() -> Matrix2<Complex64> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    Matrix2::new(h, h, h, -h)
}

/// `sigma_0` (identity) through `sigma_3`. Panics for `k > 3`.
pub fn pauli_matrix(k: u8) -> Matrix2<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => Matrix2::new(l, o, o, l),
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -i, i, o),
        3 => Matrix2::new(l, o, o, -l),
        _ => panic!("no Pauli matrix sigma_{k}"),
    }
}
