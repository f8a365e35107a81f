//! Small-scale circuit engine: dense state vectors, Pauli-frame tracking and
//! exhaustive enumeration of measurement branches.
//!
//! Every construction in [`crate::constructions`] is checked against this
//! engine, so it favours exactness over speed: branches are enumerated, never
//! sampled, and registers are capped at [`MAX_QUBITS`].

mod branch;
mod frame;
mod program;
mod reversible;
mod state;
mod text;

pub use branch::{
    channel_equals_unitary_mod_frame, enumerate_branches, restrict_to, run_postselected,
    run_postselected_reduced, total_probability, BranchOutcome, AMPLITUDE_TOLERANCE,
    PROBABILITY_TOLERANCE,
};
pub use frame::{Condition, MeasurementKey, Pauli, PauliFrame};
pub use program::{Basis, Circuit, CircuitBuilder, Init, Op, MAX_MEASUREMENTS};
pub use reversible::run_reversible;
pub use state::{
    apply_gate, format_bits, parse_bits, Gate, GateKind, StateVector, MAX_QUBITS, NORM_TOLERANCE,
    ZERO_PROBABILITY,
};
pub use text::{parse_circuit, to_text};
