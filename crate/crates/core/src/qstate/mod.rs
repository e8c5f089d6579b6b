//! State algebra: diagonal states, dense density matrices and the register
//! layouts the protocol assigns to Alice's and Bob's wires.

mod density;
mod diagonal;
mod layout;
mod resource;

pub(crate) use density::off_diagonal_max;
pub use density::{fidelity, DensityMatrix};
pub use diagonal::{make_diagonal, DiagonalState};
pub use layout::{RegisterLayout, Role, SchemeKind};
pub use resource::{classical_pair, copies_resource, generalized_classical_state};

/// Embeds a diagonal state as a density matrix.
pub fn density_from_diagonal(d: &DiagonalState) -> DensityMatrix {
    DensityMatrix::from_diagonal(d)
}

/// The computational-basis diagonal of a density matrix.
pub fn diagonal_part(rho: &DensityMatrix) -> DiagonalState {
    rho.diagonal_part()
}
