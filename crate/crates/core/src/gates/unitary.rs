use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rand::Rng;

use super::{GateDescriptor, PermutationGate};
use crate::bits::{check_wires, mask};
use crate::qstate::DensityMatrix;
use crate::{Error, Result, EXACT_TOL, MAX_DENSE_WIRES};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A dense unitary over `n_wires` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Unitary {
    n_wires: usize,
    matrix: DMatrix<Complex64>,
}

impl Unitary {
    /// Checks `U U^dagger = I` to 1e-12.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::with_tolerance(matrix, EXACT_TOL)
    }

    /// As [`Unitary::new`] with a caller-chosen tolerance, for matrices read
    /// from decimal text.
    pub fn with_tolerance(matrix: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(Error::DimensionMismatch(r, c));
        }
        if !r.is_power_of_two() || r == 1 {
            return Err(Error::NotPowerOfTwo(r));
        }
        let u = Unitary {
            n_wires: r.trailing_zeros() as usize,
            matrix,
        };
        let dev = u.unitarity_residual();
        if dev > tol {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub(crate) fn from_trusted(n_wires: usize, matrix: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1usize << n_wires);
        Unitary { n_wires, matrix }
    }

    pub fn identity(n_wires: usize) -> Result<Self> {
        dense_limit(n_wires)?;
        let d = 1usize << n_wires;
        Ok(Self::from_trusted(n_wires, DMatrix::identity(d, d)))
    }

    /// Product of `gates`, applied first to last.
    pub fn from_gates(n_wires: usize, gates: &[GateDescriptor]) -> Result<Self> {
        let mut u = Self::identity(n_wires)?;
        for g in gates {
            u.left_apply(g)?;
        }
        Ok(u)
    }

    /// A Haar-distributed unitary from the QR decomposition of a complex
    /// Gaussian matrix with the phases of `R`'s diagonal divided out.
    pub fn random<R: Rng + ?Sized>(n_wires: usize, rng: &mut R) -> Result<Self> {
        dense_limit(n_wires)?;
        let d = 1usize << n_wires;
        let gauss = |rng: &mut R| {
            // Box-Muller
            let u1: f64 = 1.0 - rng.gen::<f64>();
            let u2: f64 = rng.gen();
            (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
        };
        let z = DMatrix::from_fn(d, d, |_, _| Complex64::new(gauss(rng), gauss(rng)));
        let qr = z.qr();
        let (mut q, r) = qr.unpack();
        for j in 0..d {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() > 0.0 {
                rjj / rjj.norm()
            } else {
                ONE
            };
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
        Ok(Self::from_trusted(n_wires, q))
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Unitary {
        Self::from_trusted(self.n_wires, self.matrix.adjoint())
    }

    /// `self * other` (apply `other` first).
    pub fn mul(&self, other: &Unitary) -> Result<Unitary> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(Self::from_trusted(
            self.n_wires,
            &self.matrix * &other.matrix,
        ))
    }

    /// Max entrywise deviation of `U U^dagger` from the identity.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = &self.matrix * self.matrix.adjoint();
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((prod[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// Max entrywise deviation from the identity matrix.
    pub fn identity_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..d {
                let target = if i == j { ONE } else { ZERO };
                worst = worst.max((self.matrix[(i, j)] - target).norm());
            }
        }
        worst
    }

    /// How far `U` is from the form `U' (x) I_wires`: zero exactly when the
    /// operator acts as the identity on every wire in `wires`.
    pub fn identity_residual_on(&self, wires: &[usize]) -> Result<f64> {
        check_wires(wires, self.n_wires)?;
        let wmask = wires.iter().fold(0, |m, &w| m | mask(w, self.n_wires));
        let d = self.dim();
        let mut worst = 0.0f64;
        for c in 0..d {
            for r in 0..d {
                let z = self.matrix[(r, c)];
                let dev = if r & wmask != c & wmask {
                    z.norm()
                } else {
                    (z - self.matrix[(r & !wmask, c & !wmask)]).norm()
                };
                worst = worst.max(dev);
            }
        }
        Ok(worst)
    }

    /// Replaces `U` by `G U` using row operations, `O(4^n)` per gate.
    pub(crate) fn left_apply(&mut self, g: &GateDescriptor) -> Result<()> {
        if g.n_wires() != self.n_wires {
            return Err(Error::DimensionMismatch(g.n_wires(), self.n_wires));
        }
        if let Some(p) = g.to_permutation() {
            self.left_permute(&p);
            return Ok(());
        }
        let (m, w) = g
            .single_wire()
            .expect("non-permutation gates are single-wire");
        let bit = mask(w, self.n_wires);
        // column-major storage: walk each column contiguously
        for mut col in self.matrix.column_iter_mut() {
            for r0 in (0..col.len()).filter(|r| r & bit == 0) {
                let r1 = r0 | bit;
                let (a, b) = (col[r0], col[r1]);
                col[r0] = m[(0, 0)] * a + m[(0, 1)] * b;
                col[r1] = m[(1, 0)] * a + m[(1, 1)] * b;
            }
        }
        Ok(())
    }

    /// Replaces `U` by `P U`.
    pub(crate) fn left_permute(&mut self, p: &PermutationGate) {
        let d = self.dim();
        let mut out = DMatrix::from_element(d, d, ZERO);
        for (src, mut dst) in self.matrix.column_iter().zip(out.column_iter_mut()) {
            for (i, &img) in p.images().iter().enumerate() {
                dst[img] = src[i];
            }
        }
        self.matrix = out;
    }
}

fn dense_limit(n_wires: usize) -> Result<()> {
    if n_wires == 0 {
        return Err(Error::EmptyRegister);
    }
    if n_wires > MAX_DENSE_WIRES {
        return Err(Error::TooManyWiresForDense {
            wires: n_wires,
            max: MAX_DENSE_WIRES,
        });
    }
    Ok(())
}

/// `I (x) ... (x) g (x) ... (x) I` with `g` on `wire`.
pub fn embed_single(g: &Matrix2<Complex64>, wire: usize, n_wires: usize) -> Result<Unitary> {
    dense_limit(n_wires)?;
    if wire >= n_wires {
        return Err(Error::WireOutOfRange { wire, n_wires });
    }
    let gd = DMatrix::from_fn(2, 2, |i, j| g[(i, j)]);
    let dev = (&gd * gd.adjoint() - DMatrix::<Complex64>::identity(2, 2))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if dev > EXACT_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let left = 1usize << wire;
    let right = 1usize << (n_wires - 1 - wire);
    let m = DMatrix::<Complex64>::identity(left, left)
        .kronecker(&gd)
        .kronecker(&DMatrix::identity(right, right));
    Ok(Unitary::from_trusted(n_wires, m))
}

/// Controlled NOT with arbitrary separation between `control` and `target`.
pub fn cnot(control: usize, target: usize, n_wires: usize) -> Result<Unitary> {
    dense_limit(n_wires)?;
    let g = GateDescriptor::cnot(control, target, n_wires)?;
    g.to_permutation()
        .expect("CNOT permutes the basis")
        .to_unitary()
}

/// Exchanges the bits of wires `i` and `j` on every basis state.
pub fn swap(i: usize, j: usize, n_wires: usize) -> Result<Unitary> {
    dense_limit(n_wires)?;
    let g = GateDescriptor::swap(i, j, n_wires)?;
    g.to_permutation()
        .expect("SWAP permutes the basis")
        .to_unitary()
}

/// `U rho U^dagger`.
pub fn apply_unitary(rho: &DensityMatrix, u: &Unitary) -> Result<DensityMatrix> {
    if rho.dim() != u.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), u.dim()));
    }
    let out = u.matrix() * rho.matrix() * u.matrix().adjoint();
    Ok(DensityMatrix::from_trusted(rho.n_wires(), out))
}
