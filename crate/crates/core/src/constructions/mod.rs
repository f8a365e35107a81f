//! Builders for the adaptive circuits, plus an exhaustive verification suite.

mod adder;
mod autoccz;
mod delayed_cz;
mod mux;
mod suite;

pub use adder::{
    build_cuccaro_adder, build_maj, build_maj_inverse, build_uma, cuccaro_gates, AdderLayout,
    AdderSpec, ToffoliStyle,
};
pub use autoccz::{
    append_autoccz, build_autoccz, build_toffoli_from_ccz, consumption_site_ops, AutoCczResource,
    AUTOCCZ_ANCILLAS,
};
pub use delayed_cz::{
    build_delayed_choice_cz, build_delayed_choice_cz_with_choice_qubit, CzChoice,
};
pub use mux::build_fowler_multiplexer_cz;
pub use suite::{
    registry, verify_adder_exhaustive, verify_construction, verify_named, SuiteConfig, SuiteReport,
    CONSTRUCTION_NAMES, DEFAULT_SEED,
};

use crate::circuit::{Circuit, Gate, MeasurementKey};

/// Unitary the construction is supposed to enact on its data qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    Fixed(Vec<Gate>),
    /// Depends on one recorded outcome.
    Select {
        key: MeasurementKey,
        when_one: Vec<Gate>,
        when_zero: Vec<Gate>,
    },
}

/// A built circuit together with what it should do.
///
/// Target gates act on input-local indices: input qubit `i` is
/// `data_qubits[i]` in the circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub name: String,
    pub circuit: Circuit,
    pub data_qubits: Vec<usize>,
    pub routing_qubits: Vec<usize>,
    pub target: Target,
}

impl Construction {
    pub fn num_data_qubits(&self) -> usize {
        self.data_qubits.len()
    }
}
