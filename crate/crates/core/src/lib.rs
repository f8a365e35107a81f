//! Verification and resource planning for reaction-limited surface code
//! computations built from auto-corrected CCZ ("AutoCCZ") states.
//!
//! - [`circuit`]: dense simulator with Pauli frames and branch enumeration.
//! - [`zx`]: ZX-graph evaluation and Pauli-modulo equivalence.
//! - [`constructions`]: delayed-choice CZs, AutoCCZ, Toffoli, MAJ/UMA and the
//!   ripple-carry adder, with their verification suites.
//! - [`factory`]: CCZ factory rates, counts and qubit totals.
//! - [`scheduler`]: discrete-event simulation of reaction-limited execution.
//! - [`layout`]: floorplans, volume accounting and SVG/JSON export.
//! - [`config`]: the key/value configuration grammar shared by the CLI.

pub mod circuit;
pub mod config;
pub mod constructions;
mod error;
pub mod factory;
pub mod layout;
pub mod par;
pub mod rational;
pub mod scheduler;
pub mod zx;

pub use error::{Error, Result};
