use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, EXACT_TOL};

/// A state diagonal in the computational basis, stored as true probabilities.
///
/// Serializes as a plain list of probabilities; deserialization runs the same
/// validation as [`make_diagonal`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiagonalState {
    n_wires: usize,
    probs: Vec<f64>,
}

/// Validates and normalizes a probability vector over `2^n` basis states.
///
/// Entries down to `-1e-12` are clamped to zero and the vector renormalized;
/// anything further out is rejected.
pub fn make_diagonal(probs: &[f64]) -> Result<DiagonalState> {
    let len = probs.len();
    if !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    if len == 1 {
        return Err(Error::EmptyRegister);
    }
    if let Some((index, &value)) = probs
        .iter()
        .enumerate()
        .find(|(_, p)| !p.is_finite() || **p < -EXACT_TOL)
    {
        return Err(Error::NegativeProbability { index, value });
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > EXACT_TOL {
        return Err(Error::NotNormalized { sum });
    }
    let clamped: Vec<f64> = probs.iter().map(|p| p.max(0.0)).collect();
    let total: f64 = clamped.iter().sum();
    Ok(DiagonalState {
        n_wires: len.trailing_zeros() as usize,
        probs: clamped.into_iter().map(|p| p / total).collect(),
    })
}

impl DiagonalState {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        make_diagonal(&probs)
    }

    /// Wraps a vector produced by an operation that preserves the invariants.
    pub(crate) fn from_raw(n_wires: usize, probs: Vec<f64>) -> Self {
        debug_assert_eq!(probs.len(), 1usize << n_wires);
        debug_assert!(n_wires >= 1);
        debug_assert!(
            (probs.iter().sum::<f64>() - 1.0).abs() <= 1e-9,
            "diagonal state lost normalization"
        );
        DiagonalState { n_wires, probs }
    }

    /// `|index><index|` on `n_wires` wires.
    pub fn basis(n_wires: usize, index: usize) -> Result<Self> {
        if n_wires == 0 {
            return Err(Error::EmptyRegister);
        }
        let dim = 1usize << n_wires;
        if index >= dim {
            return Err(Error::DimensionMismatch(index, dim));
        }
        let mut probs = vec![0.0; dim];
        probs[index] = 1.0;
        Ok(Self::from_raw(n_wires, probs))
    }

    /// The maximally mixed state.
    pub fn uniform(n_wires: usize) -> Result<Self> {
        if n_wires == 0 {
            return Err(Error::EmptyRegister);
        }
        let dim = 1usize << n_wires;
        Ok(Self::from_raw(n_wires, vec![1.0 / dim as f64; dim]))
    }

    /// Draws a state uniformly from the probability simplex.
    pub fn random<R: Rng + ?Sized>(n_wires: usize, rng: &mut R) -> Result<Self> {
        if n_wires == 0 {
            return Err(Error::EmptyRegister);
        }
        let dim = 1usize << n_wires;
        // exponential spacings normalized give a flat Dirichlet draw
        let raw: Vec<f64> = (0..dim).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        let total: f64 = raw.iter().sum();
        Ok(Self::from_raw(
            n_wires,
            raw.into_iter().map(|x| x / total).collect(),
        ))
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub(crate) fn probs_mut(&mut self) -> &mut [f64] {
        &mut self.probs
    }

    pub fn into_probs(self) -> Vec<f64> {
        self.probs
    }

    /// Outer product; `self` occupies the more significant wires.
    pub fn tensor(&self, other: &DiagonalState) -> DiagonalState {
        let mut probs = Vec::with_capacity(self.dim() * other.dim());
        for &p in &self.probs {
            probs.extend(other.probs.iter().map(|&q| p * q));
        }
        Self::from_raw(self.n_wires + other.n_wires, probs)
    }

    /// Marginal distribution on `keep` (ascending wire order).
    pub fn marginal(&self, keep: &[usize]) -> Result<DiagonalState> {
        if keep.is_empty() {
            return Err(Error::EmptyKeepSet);
        }
        crate::bits::check_wires(keep, self.n_wires)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        let mut out = vec![0.0; 1 << keep.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            out[crate::bits::gather(i, &keep, self.n_wires)] += p;
        }
        Ok(Self::from_raw(keep.len(), out))
    }

    /// Largest entrywise difference; `INFINITY` if the sizes differ.
    pub fn max_abs_diff(&self, other: &DiagonalState) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Squared Bhattacharyya overlap `(sum sqrt(p_i q_i))^2`, which is the
    /// Uhlmann fidelity of two commuting diagonal states.
    pub fn fidelity(&self, other: &DiagonalState) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        let overlap: f64 = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(p, q)| (p * q).sqrt())
            .sum();
        Ok((overlap * overlap).clamp(0.0, 1.0))
    }
}

impl TryFrom<Vec<f64>> for DiagonalState {
    type Error = Error;

    fn try_from(probs: Vec<f64>) -> Result<Self> {
        make_diagonal(&probs)
    }
}

impl From<DiagonalState> for Vec<f64> {
    fn from(d: DiagonalState) -> Self {
        d.probs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_wire_register_rejected() {
        assert_eq!(make_diagonal(&[1.0]), Err(Error::EmptyRegister));
    }

    #[test]
    fn one_qubit_mixture_accepted() {
        let d = make_diagonal(&[0.3, 0.7]).unwrap();
        assert_eq!(d.n_wires(), 1);
        assert_eq!(d.probs(), &[0.3, 0.7]);
    }

    #[test]
    fn sum_off_by_one_percent_rejected() {
        assert!(matches!(
            make_diagonal(&[0.25, 0.25, 0.25, 0.26]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn length_must_be_power_of_two() {
        assert_eq!(
            make_diagonal(&[0.5, 0.25, 0.25]),
            Err(Error::NotPowerOfTwo(3))
        );
        assert_eq!(make_diagonal(&[]), Err(Error::NotPowerOfTwo(0)));
    }

    #[test]
    fn tiny_negatives_clamped_large_rejected() {
        let d = make_diagonal(&[-1e-13, 1.0 + 1e-13]).unwrap();
        assert_eq!(d.probs()[0], 0.0);
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(matches!(
            make_diagonal(&[-0.1, 1.1]),
            Err(Error::NegativeProbability { index: 0, .. })
        ));
        assert!(make_diagonal(&[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn tensor_with_classical_pair() {
        let d = make_diagonal(&[0.3, 0.7]).unwrap();
        let pair = crate::qstate::classical_pair();
        let t = d.tensor(&pair);
        let expected = [0.15, 0.0, 0.0, 0.15, 0.35, 0.0, 0.0, 0.35];
        assert_eq!(t.n_wires(), 3);
        for (a, b) in t.probs().iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_of_pair_is_maximally_mixed() {
        let pair = crate::qstate::classical_pair();
        assert_eq!(pair.marginal(&[0]).unwrap().probs(), &[0.5, 0.5]);
        assert_eq!(pair.marginal(&[1]).unwrap().probs(), &[0.5, 0.5]);
        assert_eq!(pair.marginal(&[]), Err(Error::EmptyKeepSet));
    }

    #[test]
    fn closed_form_fidelity() {
        let a = make_diagonal(&[0.5, 0.5]).unwrap();
        let b = make_diagonal(&[0.3, 0.7]).unwrap();
        assert!((a.fidelity(&b).unwrap() - 0.958_257_569_495_584).abs() < 1e-12);
        let zero = DiagonalState::basis(1, 0).unwrap();
        let one = DiagonalState::basis(1, 1).unwrap();
        assert_eq!(zero.fidelity(&one).unwrap(), 0.0);
    }
}
