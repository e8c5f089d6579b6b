use nalgebra::DMatrix;
use num_complex::Complex64;

use super::DiagonalState;
use crate::bits::{check_wires, complement, scatter};
use crate::{Error, Result, EXACT_TOL, SPECTRAL_TOL};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A dense density matrix over `n_wires` qubits: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_wires: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace to 1e-12 and the spectrum to -1e-10.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n_wires = wires_for(&matrix)?;
        let herm = hermiticity_residual(&matrix);
        if herm > EXACT_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > EXACT_TOL || tr.im.abs() > EXACT_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        let rho = DensityMatrix { n_wires, matrix };
        let min = rho.min_eigenvalue();
        if min < -SPECTRAL_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(rho)
    }

    /// Wraps the output of a trace-preserving operation on valid inputs.
    pub(crate) fn from_trusted(n_wires: usize, matrix: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(matrix.nrows(), 1usize << n_wires);
        if cfg!(debug_assertions) && matrix.nrows() <= 1024 {
            debug_assert!(hermiticity_residual(&matrix) <= 1e-9);
            debug_assert!((matrix.trace().re - 1.0).abs() <= 1e-9);
        }
        DensityMatrix { n_wires, matrix }
    }

    /// `|psi><psi|` for a normalized state vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Self::new(&v * v.adjoint())
    }

    pub fn from_diagonal(d: &DiagonalState) -> Self {
        let diag = nalgebra::DVector::from_iterator(
            d.dim(),
            d.probs().iter().map(|&p| Complex64::new(p, 0.0)),
        );
        DensityMatrix {
            n_wires: d.n_wires(),
            matrix: DMatrix::from_diagonal(&diag),
        }
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

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Drops all coherences. Rounding-level negatives on the diagonal are
    /// clamped to zero; nothing is renormalized.
    pub fn diagonal_part(&self) -> DiagonalState {
        let probs = (0..self.dim())
            .map(|i| self.matrix[(i, i)].re.max(0.0))
            .collect();
        DiagonalState::from_raw(self.n_wires, probs)
    }

    /// Kronecker product; `self` occupies the more significant wires.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::from_trusted(
            self.n_wires + other.n_wires,
            self.matrix.kronecker(&other.matrix),
        )
    }

    /// Reduced state on `keep`; kept wires stay in ascending order.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        check_wires(keep, self.n_wires)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let block = self.block(&[], 0, &keep);
        Ok(DensityMatrix::from_trusted(keep.len(), block))
    }

    /// Unnormalized block `<outcome|_measured  Tr_rest(rho)  |outcome>_measured`
    /// restricted to `keep`, with every other wire traced out.
    pub(crate) fn block(
        &self,
        measured: &[usize],
        outcome: usize,
        keep: &[usize],
    ) -> DMatrix<Complex64> {
        let n = self.n_wires;
        let traced = complement(n, measured, keep);
        let base = scatter(outcome, measured, n);
        let dk = 1usize << keep.len();
        let dt = 1usize << traced.len();
        let keep_offsets: Vec<usize> = (0..dk).map(|a| scatter(a, keep, n)).collect();
        let traced_offsets: Vec<usize> = (0..dt).map(|t| scatter(t, &traced, n)).collect();
        DMatrix::from_fn(dk, dk, |a, b| {
            traced_offsets.iter().fold(ZERO, |acc, &t| {
                acc + self.matrix[(base | keep_offsets[a] | t, base | keep_offsets[b] | t)]
            })
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest |entry| off the main diagonal.
    pub fn max_coherence(&self) -> f64 {
        off_diagonal_max(&self.matrix)
    }

    /// Largest entrywise modulus of the difference; `INFINITY` on size mismatch.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Principal square root of a PSD matrix via its eigendecomposition.
    fn sqrt_psd(&self) -> DMatrix<Complex64> {
        let eig = self.matrix.clone().symmetric_eigen();
        let roots = eig
            .eigenvalues
            .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0));
        &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
    }
}

/// Uhlmann fidelity in the squared convention, `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
///
/// Evaluated as the squared trace norm of `sqrt(rho) sqrt(sigma)`, which is
/// the same quantity but treats both arguments alike, so the result is
/// symmetric to rounding even for rank-deficient states.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(rho.dim(), sigma.dim()));
    }
    let product = rho.sqrt_psd() * sigma.sqrt_psd();
    let trace_norm: f64 = product.singular_values().iter().sum();
    Ok((trace_norm * trace_norm).clamp(0.0, 1.0))
}

fn wires_for(matrix: &DMatrix<Complex64>) -> Result<usize> {
    let (r, c) = matrix.shape();
    if r != c {
        return Err(Error::DimensionMismatch(r, c));
    }
    if !r.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(r));
    }
    if r == 1 {
        return Err(Error::EmptyRegister);
    }
    Ok(r.trailing_zeros() as usize)
}

pub(crate) fn hermiticity_residual(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn off_diagonal_max(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j {
                worst = worst.max(m[(i, j)].norm());
            }
        }
    }
    worst
}
