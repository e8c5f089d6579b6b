use nalgebra::DMatrix;
use num_complex::Complex64;

use super::Unitary;
use crate::bits::{bit, mask};
use crate::qstate::DiagonalState;
use crate::{Error, Result};

/// A basis-state permutation `|i> -> |images[i]>` on `n_wires` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGate {
    n_wires: usize,
    images: Vec<usize>,
}

impl PermutationGate {
    pub fn identity(n_wires: usize) -> Self {
        PermutationGate {
            n_wires,
            images: (0..1usize << n_wires).collect(),
        }
    }

    /// Checks that `images` is a bijection on `0..2^n_wires`.
    pub fn new(n_wires: usize, images: Vec<usize>) -> Result<Self> {
        let d = 1usize << n_wires;
        if images.len() != d {
            return Err(Error::DimensionMismatch(images.len(), d));
        }
        let mut seen = vec![false; d];
        for &i in &images {
            if i >= d || seen[i] {
                return Err(Error::DuplicateWire(i));
            }
            seen[i] = true;
        }
        Ok(PermutationGate { n_wires, images })
    }

    pub(crate) fn from_index_map(n_wires: usize, f: impl Fn(usize) -> usize) -> Self {
        PermutationGate {
            n_wires,
            images: (0..1usize << n_wires).map(f).collect(),
        }
    }

    /// Moves the qubit on wire `w` to wire `dest[w]`.
    pub fn from_wire_map(dest: &[usize]) -> Result<Self> {
        let n = dest.len();
        let mut seen = vec![false; n];
        for &w in dest {
            if w >= n {
                return Err(Error::WireOutOfRange {
                    wire: w,
                    n_wires: n,
                });
            }
            if seen[w] {
                return Err(Error::DuplicateWire(w));
            }
            seen[w] = true;
        }
        Ok(Self::from_index_map(n, |i| {
            (0..n).fold(0, |acc, w| {
                if bit(i, w, n) == 1 {
                    acc | mask(dest[w], n)
                } else {
                    acc
                }
            })
        }))
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `self` first, then `then`.
    pub fn then(&self, then: &PermutationGate) -> PermutationGate {
        assert_eq!(self.n_wires, then.n_wires, "register size mismatch");
        PermutationGate {
            n_wires: self.n_wires,
            images: self.images.iter().map(|&i| then.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> PermutationGate {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img] = i;
        }
        PermutationGate {
            n_wires: self.n_wires,
            images: inv,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn is_involution(&self) -> bool {
        self.then(self).is_identity()
    }

    /// `P rho P^dagger` for diagonal `rho`: the probability vector permuted.
    pub fn apply_diagonal(&self, d: &DiagonalState) -> DiagonalState {
        assert_eq!(d.n_wires(), self.n_wires, "register size mismatch");
        let mut out = vec![0.0; d.dim()];
        for (i, &p) in d.probs().iter().enumerate() {
            out[self.images[i]] = p;
        }
        DiagonalState::from_raw(self.n_wires, out)
    }

    /// The 0/1 unitary with `U[images[i], i] = 1`.
    pub fn to_unitary(&self) -> Result<Unitary> {
        if self.n_wires > crate::MAX_DENSE_WIRES {
            return Err(Error::TooManyWiresForDense {
                wires: self.n_wires,
                max: crate::MAX_DENSE_WIRES,
            });
        }
        let d = self.images.len();
        let mut m = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
        for (i, &img) in self.images.iter().enumerate() {
            m[(img, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(Unitary::from_trusted(self.n_wires, m))
    }
}
