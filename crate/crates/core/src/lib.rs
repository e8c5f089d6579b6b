//! Simulation of deterministic teleportation of diagonal multi-qubit mixtures
//! using only classically correlated pairs and one-way classical communication.
//!
//! The crate is organised bottom-up:
//!
//! - [`qstate`]: diagonal states, dense density matrices, register layouts,
//!   tensor products, partial traces and fidelity.
//! - [`gates`]: gate descriptors, dense unitaries, basis permutations, the
//!   interleave swap network and Alice's composite operator.
//! - [`measurement`]: computational-basis measurement, exhaustive branch
//!   enumeration and seeded sampling.
//! - [`protocol`]: the two-party run, exhaustive verification, the
//!   known-eigenbasis extension and the dephasing negative control.
//!
//! Protocol variants ([`protocol::Scheme`]) and simulation back ends
//! ([`protocol::Engine`]) are trait objects looked up by name in a
//! [`registry::Registry`], so callers such as the CLI pick them at runtime.
//!
//! Bit ordering is big-endian throughout: wire 0 is the leftmost ket symbol
//! and the basis index of `|b_0 b_1 ... b_{n-1}>` is `sum b_i 2^(n-1-i)`.

pub mod error;
pub mod gates;
pub mod measurement;
pub mod protocol;
pub mod qstate;
pub mod registry;
pub mod seed;

pub(crate) mod bits;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Tolerance for exact-algebra checks (normalization, entrywise equality).
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for spectral and fidelity computations.
pub const SPECTRAL_TOL: f64 = 1e-10;
/// Largest register for which dense matrices are built.
pub const MAX_DENSE_WIRES: usize = 14;
