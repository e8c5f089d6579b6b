//! Projective computational-basis measurement on chosen wires: marginal
//! outcome probabilities, exhaustive branch enumeration and seeded sampling.
//!
//! Outcomes are indexed big-endian in the order the measured wires are
//! listed, so enumerating `0..2^k` is lexicographic in that wire order.

use std::borrow::Cow;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::{check_wires, gather, scatter, to_bits};
use crate::qstate::{DensityMatrix, DiagonalState};
use crate::{Error, Result};

/// Branches lighter than this are flagged and given a uniform conditional state.
pub const ZERO_BRANCH: f64 = 1e-15;

/// Unnormalized post-measurement block on the kept wires.
#[derive(Debug, Clone, PartialEq)]
pub enum Slice {
    Diagonal(Vec<f64>),
    Dense(DMatrix<Complex64>),
}

impl Slice {
    pub fn weight(&self) -> f64 {
        match self {
            Slice::Diagonal(p) => p.iter().sum(),
            Slice::Dense(m) => m.trace().re,
        }
    }

    /// Renormalized diagonal plus the largest relative coherence dropped.
    fn conditional(&self, n_keep: usize) -> (DiagonalState, f64, bool) {
        let w = self.weight();
        if w < ZERO_BRANCH {
            return (
                DiagonalState::uniform(n_keep).expect("n_keep >= 1"),
                0.0,
                true,
            );
        }
        match self {
            Slice::Diagonal(p) => {
                let probs = p.iter().map(|x| x / w).collect();
                (DiagonalState::from_raw(n_keep, probs), 0.0, false)
            }
            Slice::Dense(m) => {
                let probs = (0..m.nrows())
                    .map(|i| (m[(i, i)].re / w).max(0.0))
                    .collect();
                let coherence = crate::qstate::off_diagonal_max(m) / w;
                (DiagonalState::from_raw(n_keep, probs), coherence, false)
            }
        }
    }
}

/// A register state that can be measured in the computational basis.
pub trait Measurable {
    fn n_wires(&self) -> usize;

    /// Diagonal of the state in the computational basis.
    fn probabilities(&self) -> Cow<'_, [f64]>;

    /// Block of the state on `keep` after projecting `measured` onto
    /// `outcome`, all remaining wires traced out.
    fn slice(&self, measured: &[usize], outcome: usize, keep: &[usize]) -> Slice;

    /// [`Measurable::slice`] for every outcome, in outcome order.
    fn slices(&self, measured: &[usize], keep: &[usize]) -> Vec<Slice> {
        (0..1usize << measured.len())
            .map(|k| self.slice(measured, k, keep))
            .collect()
    }
}

impl Measurable for DiagonalState {
    fn n_wires(&self) -> usize {
        DiagonalState::n_wires(self)
    }

    fn probabilities(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(self.probs())
    }

    fn slice(&self, measured: &[usize], outcome: usize, keep: &[usize]) -> Slice {
        let n = DiagonalState::n_wires(self);
        let traced = crate::bits::complement(n, measured, keep);
        let base = scatter(outcome, measured, n);
        let p = self.probs();
        let traced_offsets: Vec<usize> = (0..1usize << traced.len())
            .map(|t| scatter(t, &traced, n))
            .collect();
        Slice::Diagonal(
            (0..1usize << keep.len())
                .map(|a| {
                    let ka = base | scatter(a, keep, n);
                    traced_offsets.iter().map(|&t| p[ka | t]).sum()
                })
                .collect(),
        )
    }

    fn slices(&self, measured: &[usize], keep: &[usize]) -> Vec<Slice> {
        let n = DiagonalState::n_wires(self);
        let dk = 1usize << keep.len();
        let mut buckets = vec![0.0; (1usize << measured.len()) * dk];
        for (i, &p) in self.probs().iter().enumerate() {
            if p != 0.0 {
                buckets[gather(i, measured, n) * dk + gather(i, keep, n)] += p;
            }
        }
        buckets
            .chunks(dk)
            .map(|c| Slice::Diagonal(c.to_vec()))
            .collect()
    }
}

impl Measurable for DensityMatrix {
    fn n_wires(&self) -> usize {
        DensityMatrix::n_wires(self)
    }

    fn probabilities(&self) -> Cow<'_, [f64]> {
        Cow::Owned((0..self.dim()).map(|i| self.matrix()[(i, i)].re).collect())
    }

    fn slice(&self, measured: &[usize], outcome: usize, keep: &[usize]) -> Slice {
        Slice::Dense(self.block(measured, outcome, keep))
    }
}

/// Probability of each outcome on `wires`, outcome `k` read big-endian in
/// the listed wire order.
pub fn branch_probabilities<S: Measurable + ?Sized>(
    state: &S,
    wires: &[usize],
) -> Result<Vec<f64>> {
    let n = state.n_wires();
    check_wires(wires, n)?;
    let mut out = vec![0.0; 1usize << wires.len()];
    for (i, &p) in state.probabilities().iter().enumerate() {
        out[gather(i, wires, n)] += p;
    }
    Ok(out)
}

/// Which measured positions carry the `x` bits and which wires are Bob's.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurementPlan {
    /// Alice's measured wires in outcome-bit order.
    pub measured: Vec<usize>,
    /// Bob's wires; `bob[i]` is corrected by the `i`-th x bit.
    pub bob: Vec<usize>,
    /// Positions within `measured` holding `x_1..x_N`; the rest are alpha bits.
    pub x_positions: Vec<usize>,
}

impl MeasurementPlan {
    pub fn validate(&self, n_wires: usize) -> Result<()> {
        let all: Vec<usize> = self.measured.iter().chain(&self.bob).copied().collect();
        check_wires(&all, n_wires)?;
        check_wires(&self.x_positions, self.measured.len())?;
        if self.x_positions.len() != self.bob.len() {
            return Err(Error::DimensionMismatch(
                self.x_positions.len(),
                self.bob.len(),
            ));
        }
        Ok(())
    }

    fn split(&self, outcome: usize) -> (Vec<u8>, Vec<u8>) {
        let bits = to_bits(outcome, self.measured.len());
        let x = self.x_positions.iter().map(|&p| bits[p]).collect();
        let alpha = (0..bits.len())
            .filter(|p| !self.x_positions.contains(p))
            .map(|p| bits[p])
            .collect();
        (x, alpha)
    }
}

/// One outcome of Alice's measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    pub x_bits: Vec<u8>,
    pub alpha_bits: Vec<u8>,
    /// Unnormalized weight of the branch, i.e. its probability.
    pub probability: f64,
    /// Set when `probability < 1e-15`; the conditional states are then uniform.
    pub zero_probability: bool,
    /// Bob's renormalized conditional state before correction.
    pub bob_state_raw: DiagonalState,
    /// Bob's state after `sigma_1` on every `B_i` with `x_i = 1`.
    pub bob_state_corrected: DiagonalState,
    /// Largest off-diagonal entry of Bob's conditional state (dense engine
    /// only; always zero on the diagonal path).
    pub coherence_residual: f64,
}

/// Flips Bob's local bits selected by `x`, i.e. applies `prod sigma_{x_i}`.
pub(crate) fn correct(raw: &DiagonalState, x_bits: &[u8]) -> DiagonalState {
    let flip = x_bits
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let mut out = vec![0.0; raw.dim()];
    for (b, &p) in raw.probs().iter().enumerate() {
        out[b ^ flip] = p;
    }
    DiagonalState::from_raw(raw.n_wires(), out)
}

fn record(plan: &MeasurementPlan, outcome: usize, slice: &Slice) -> BranchRecord {
    let (x_bits, alpha_bits) = plan.split(outcome);
    let (raw, coherence, zero) = slice.conditional(plan.bob.len());
    let corrected = correct(&raw, &x_bits);
    BranchRecord {
        x_bits,
        alpha_bits,
        probability: slice.weight(),
        zero_probability: zero,
        bob_state_raw: raw,
        bob_state_corrected: corrected,
        coherence_residual: coherence,
    }
}

/// Every branch of the measurement, in outcome order.
pub fn enumerate_branches<S: Measurable + ?Sized>(
    state: &S,
    plan: &MeasurementPlan,
) -> Result<Vec<BranchRecord>> {
    plan.validate(state.n_wires())?;
    Ok(state
        .slices(&plan.measured, &plan.bob)
        .iter()
        .enumerate()
        .map(|(k, s)| record(plan, k, s))
        .collect())
}

/// A single sampled branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub outcome: usize,
    pub record: BranchRecord,
}

/// Draws one outcome from [`branch_probabilities`] using `rng` and returns
/// the matching branch record.
pub fn sample_outcome<S, R>(state: &S, plan: &MeasurementPlan, rng: &mut R) -> Result<Sample>
where
    S: Measurable + ?Sized,
    R: Rng + ?Sized,
{
    plan.validate(state.n_wires())?;
    let probs = branch_probabilities(state, &plan.measured)?;
    let outcome = draw(&probs, rng.gen::<f64>());
    let slice = state.slice(&plan.measured, outcome, &plan.bob);
    Ok(Sample {
        outcome,
        record: record(plan, outcome, &slice),
    })
}

/// Inverse-CDF draw; never lands on a zero-weight outcome.
fn draw(probs: &[f64], u: f64) -> usize {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (k, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = k;
        if target < acc {
            return k;
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn one_qubit_plan() -> MeasurementPlan {
        MeasurementPlan {
            measured: vec![0, 1],
            bob: vec![2],
            x_positions: vec![0],
        }
    }

    #[test]
    fn basis_state_probabilities() {
        let d = DiagonalState::basis(2, 0b01).unwrap();
        assert_eq!(
            branch_probabilities(&d, &[0, 1]).unwrap(),
            vec![0.0, 1.0, 0.0, 0.0]
        );
        // wire order sets the bit order
        assert_eq!(
            branch_probabilities(&d, &[1, 0]).unwrap(),
            vec![0.0, 0.0, 1.0, 0.0]
        );
        let rho = DensityMatrix::from_diagonal(&d);
        assert_eq!(
            branch_probabilities(&rho, &[0, 1]).unwrap(),
            vec![0.0, 1.0, 0.0, 0.0]
        );
    }

    #[test]
    fn wire_errors() {
        let d = DiagonalState::uniform(2).unwrap();
        assert!(matches!(
            branch_probabilities(&d, &[0, 2]),
            Err(Error::WireOutOfRange { wire: 2, .. })
        ));
        assert!(matches!(
            branch_probabilities(&d, &[1, 1]),
            Err(Error::DuplicateWire(1))
        ));
        let plan = MeasurementPlan {
            measured: vec![0],
            bob: vec![0],
            x_positions: vec![0],
        };
        assert!(enumerate_branches(&d, &plan).is_err());
    }

    #[test]
    fn zero_branches_are_flagged_uniform() {
        let d = DiagonalState::basis(3, 0).unwrap();
        let recs = enumerate_branches(&d, &one_qubit_plan()).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(!recs[0].zero_probability);
        for r in &recs[1..] {
            assert!(r.zero_probability);
            assert_eq!(r.bob_state_raw.probs(), &[0.5, 0.5]);
        }
    }

    #[test]
    fn correction_flips_selected_wires() {
        let raw = crate::qstate::make_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(correct(&raw, &[1, 0]).probs(), &[0.3, 0.4, 0.1, 0.2]);
        assert_eq!(correct(&raw, &[0, 1]).probs(), &[0.2, 0.1, 0.4, 0.3]);
        assert_eq!(correct(&raw, &[0, 0]), raw);
    }

    #[test]
    fn sampling_is_deterministic_and_consistent() {
        let d = DiagonalState::random(3, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let plan = one_qubit_plan();
        let a = sample_outcome(&d, &plan, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        let b = sample_outcome(&d, &plan, &mut ChaCha8Rng::seed_from_u64(42)).unwrap();
        assert_eq!(a, b);
        let all = enumerate_branches(&d, &plan).unwrap();
        assert_eq!(a.record, all[a.outcome]);
    }

    #[test]
    fn certain_outcome_sampled() {
        let d = DiagonalState::basis(2, 0b01).unwrap();
        let plan = MeasurementPlan {
            measured: vec![1],
            bob: vec![0],
            x_positions: vec![0],
        };
        for seed in 0..20 {
            let s = sample_outcome(&d, &plan, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
            assert_eq!(s.outcome, 1);
            assert_eq!(s.record.bob_state_raw.probs(), &[1.0, 0.0]);
            assert_eq!(s.record.probability, 1.0);
        }
    }

    #[test]
    fn draw_skips_zero_weight_outcomes() {
        assert_eq!(draw(&[0.0, 1.0, 0.0], 0.0), 1);
        assert_eq!(draw(&[0.0, 1.0, 0.0], 0.999_999), 1);
        assert_eq!(draw(&[0.5, 0.0, 0.5], 0.5), 2);
    }

    #[test]
    fn dense_and_diagonal_slices_agree() {
        let d = DiagonalState::random(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let rho = DensityMatrix::from_diagonal(&d);
        let plan = MeasurementPlan {
            measured: vec![3, 0],
            bob: vec![2],
            x_positions: vec![1],
        };
        let a = enumerate_branches(&d, &plan).unwrap();
        let b = enumerate_branches(&rho, &plan).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x.probability - y.probability).abs() < 1e-15);
            assert!(x.bob_state_raw.max_abs_diff(&y.bob_state_raw) < 1e-15);
            assert_eq!(x.x_bits, y.x_bits);
        }
    }
}
