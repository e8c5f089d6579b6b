use std::fmt;

use crate::gates::{self, GateDescriptor, Unitary};
use crate::measurement::MeasurementPlan;
use crate::qstate::{self, DiagonalState, RegisterLayout, SchemeKind};
use crate::Result;

/// One way of sharing the correlated resource and arranging Alice's wires.
pub trait Scheme: Send + Sync + fmt::Debug {
    fn kind(&self) -> SchemeKind;

    fn name(&self) -> &'static str {
        self.kind().name()
    }

    /// Role-to-wire assignment of the initial joint state.
    fn layout(&self, n: usize) -> RegisterLayout {
        RegisterLayout::for_scheme(self.kind(), n)
    }

    /// The `2N`-wire resource shared before the protocol starts.
    fn resource(&self, n: usize) -> DiagonalState;

    /// Alice's operator as a gate list in application order.
    fn alice_circuit(&self, n: usize) -> Vec<GateDescriptor> {
        gates::alice_circuit(n, self.kind())
    }

    /// Alice's operator as a dense matrix (at most 14 wires).
    fn alice_operator(&self, n: usize) -> Result<Unitary> {
        gates::alice_operator(n, self.kind())
    }

    /// Wires Alice measures after her operator, and which outcome bits are
    /// the `x` bits Bob needs.
    fn measurement_plan(&self, n: usize) -> MeasurementPlan;
}

/// `N` independent classical pairs.
#[derive(Debug, Clone, Copy, Default)]
pub struct CopiesScheme;

impl Scheme for CopiesScheme {
    fn kind(&self) -> SchemeKind {
        SchemeKind::Copies
    }

    fn resource(&self, n: usize) -> DiagonalState {
        qstate::copies_resource(n)
    }

    /// Outcome bits ordered `x_1..x_N alpha_1..alpha_N`.
    fn measurement_plan(&self, n: usize) -> MeasurementPlan {
        let layout = gates::post_alice_layout(n, self.kind());
        MeasurementPlan {
            measured: layout
                .x_wires()
                .iter()
                .chain(layout.a_wires())
                .copied()
                .collect(),
            bob: layout.b_wires().to_vec(),
            x_positions: (0..n).collect(),
        }
    }
}

/// The generalized correlated state, with Alice's wires interleaved first.
#[derive(Debug, Clone, Copy, Default)]
pub struct GeneralizedScheme;

impl Scheme for GeneralizedScheme {
    fn kind(&self) -> SchemeKind {
        SchemeKind::Generalized
    }

    fn resource(&self, n: usize) -> DiagonalState {
        qstate::generalized_classical_state(n)
    }

    /// Outcome bits ordered `x_1 alpha_1 ... x_N alpha_N`.
    fn measurement_plan(&self, n: usize) -> MeasurementPlan {
        let layout = gates::post_alice_layout(n, self.kind());
        let measured = (0..n)
            .flat_map(|i| [layout.x_wires()[i], layout.a_wires()[i]])
            .collect();
        MeasurementPlan {
            measured,
            bob: layout.b_wires().to_vec(),
            x_positions: (0..n).map(|i| 2 * i).collect(),
        }
    }
}
