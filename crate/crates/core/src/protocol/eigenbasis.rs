//! Inputs that are not diagonal in the computational basis.
//!
//! If `rho = V diag(lambda) V^dagger` with `V` known, Alice first applies
//! `V^dagger` to her X register, which makes it diagonal; the diagonal
//! protocol then runs unchanged and Bob applies `V` to his B register,
//! giving `V diag(lambda) V^dagger` again. Without that step the protocol
//! delivers only the computational-basis diagonal of `rho`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{
    correction_for, run_once, ClassicalMessage, DenseEngine, Engine, RegisterState, Scheme,
    TeleportationResult,
};
use crate::gates::{apply_unitary, Unitary};
use crate::measurement::Measurable;
use crate::qstate::{fidelity, make_diagonal, DensityMatrix, DiagonalState};
use crate::{Error, Result, SPECTRAL_TOL};

/// Teleports `V diag(eigenvalues) V^dagger` given the eigenbasis `V`.
pub fn teleport_with_eigenbasis(
    v: &Unitary,
    eigenvalues: &DiagonalState,
    scheme: &dyn Scheme,
    engine: &dyn Engine,
    seed: u64,
) -> Result<TeleportationResult> {
    if v.n_wires() != eigenvalues.n_wires() {
        return Err(Error::DimensionMismatch(v.dim(), eigenvalues.dim()));
    }
    let dev = v.unitarity_residual();
    if dev > SPECTRAL_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let target = apply_unitary(&DensityMatrix::from_diagonal(eigenvalues), v)?;

    // Alice diagonalizes what she holds; the result is diagonal up to rounding
    let diagonalized = apply_unitary(&target, &v.adjoint())?;
    let alice_input = make_diagonal(diagonalized.diagonal_part().probs())?;
    let mut result = run_once(&alice_input, scheme, engine, seed)?;

    let bob_diag = match &result.bob_final {
        RegisterState::Diagonal(d) => d.clone(),
        RegisterState::Dense(rho) => rho.diagonal_part(),
    };
    let bob_final = apply_unitary(&DensityMatrix::from_diagonal(&bob_diag), v)?;
    result.fidelity_to_input = fidelity(&bob_final, &target)?;
    result.input = RegisterState::Dense(target);
    result.bob_final = RegisterState::Dense(bob_final);
    Ok(result)
}

/// Runs the plain protocol on a state with coherences, averaging Bob's
/// corrected state exactly over all branches. Returns Bob's state and its
/// fidelity to `rho`.
pub fn dephasing_demo(rho: &DensityMatrix, scheme: &dyn Scheme) -> Result<(DensityMatrix, f64)> {
    let n = rho.n_wires();
    DenseEngine.check_size(3 * n)?;
    let resource = DensityMatrix::from_diagonal(&scheme.resource(n));
    let evolved = DenseEngine.apply_alice_dense(&rho.tensor(&resource), scheme)?;
    let plan = scheme.measurement_plan(n);
    plan.validate(evolved.n_wires())?;

    let dim = 1usize << n;
    let mut average = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (outcome, slice) in evolved
        .slices(&plan.measured, &plan.bob)
        .into_iter()
        .enumerate()
    {
        let block = match slice {
            crate::measurement::Slice::Dense(m) => m,
            crate::measurement::Slice::Diagonal(_) => {
                unreachable!("dense engine yields dense slices")
            }
        };
        let bits = crate::bits::to_bits(outcome, plan.measured.len());
        let x_bits = plan.x_positions.iter().map(|&p| bits[p]).collect();
        let correction = correction_for(&ClassicalMessage::new(x_bits)?).to_unitary()?;
        // the block carries its branch weight, so summing averages
        average += correction.matrix() * block * correction.matrix().adjoint();
    }
    let bob = DensityMatrix::new(average)?;
    let f = fidelity(&bob, rho)?;
    Ok((bob, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{embed_single, hadamard_matrix};
    use crate::protocol::{CopiesScheme, DiagonalEngine, GeneralizedScheme};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn hadamard_eigenbasis() {
        let v = embed_single(&hadamard_matrix(), 0, 1).unwrap();
        let lambda = make_diagonal(&[0.2, 0.8]).unwrap();
        let expected = DMatrix::from_row_slice(2, 2, &[c(0.5), c(-0.3), c(-0.3), c(0.5)]);
        for seed in 0..4 {
            let r = teleport_with_eigenbasis(&v, &lambda, &CopiesScheme, &DiagonalEngine, seed)
                .unwrap();
            let RegisterState::Dense(bob) = &r.bob_final else {
                panic!("dense expected")
            };
            assert!((bob.matrix() - &expected).iter().all(|z| z.norm() < 1e-12));
            assert!((r.fidelity_to_input - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_eigenbasis_reduces_to_run_once() {
        let v = Unitary::identity(2).unwrap();
        let lambda = make_diagonal(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let a =
            teleport_with_eigenbasis(&v, &lambda, &GeneralizedScheme, &DiagonalEngine, 3).unwrap();
        let b = run_once(&lambda, &GeneralizedScheme, &DiagonalEngine, 3).unwrap();
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.bob_final.to_dense(), b.bob_final.to_dense());
    }

    #[test]
    fn mismatched_sizes_rejected() {
        let v = Unitary::identity(2).unwrap();
        let lambda = make_diagonal(&[0.2, 0.8]).unwrap();
        assert!(teleport_with_eigenbasis(&v, &lambda, &CopiesScheme, &DiagonalEngine, 0).is_err());
    }

    #[test]
    fn plus_state_is_dephased() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = DensityMatrix::from_pure(&[c(h), c(h)]).unwrap();
        let (bob, f) = dephasing_demo(&plus, &CopiesScheme).unwrap();
        assert!(
            bob.max_abs_diff(&DensityMatrix::from_diagonal(
                &DiagonalState::uniform(1).unwrap()
            )) < 1e-12
        );
        assert!((f - 0.5).abs() < 1e-10);
    }

    #[test]
    fn partial_coherence_keeps_diagonal() {
        let rho = DensityMatrix::new(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.7), c(0.2), c(0.2), c(0.3)],
        ))
        .unwrap();
        for scheme in [&CopiesScheme as &dyn Scheme, &GeneralizedScheme] {
            let (bob, f) = dephasing_demo(&rho, scheme).unwrap();
            let expected = DensityMatrix::from_diagonal(&make_diagonal(&[0.7, 0.3]).unwrap());
            assert!(bob.max_abs_diff(&expected) < 1e-12);
            assert!(f < 1.0 - 1e-6);
        }
        let diag = DensityMatrix::from_diagonal(&make_diagonal(&[0.7, 0.3]).unwrap());
        let (bob, f) = dephasing_demo(&diag, &CopiesScheme).unwrap();
        assert!(bob.max_abs_diff(&diag) < 1e-12);
        assert!((f - 1.0).abs() < 1e-10);
    }
}
