//! JSON graph fixtures with expected resolutions.
//!
//! ```json
//! {
//!   "name": "delayed-choice-cz",
//!   "description": "...",
//!   "graph": {
//!     "nodes": [{"kind": "z", "phase": 0}, ...],
//!     "edges": [[0, 2], ...],
//!     "ports": [{"node": 0, "direction": "input"}, ...]
//!   },
//!   "checks": [
//!     {"resolve": [[6, "X"], [7, "X"]], "expect": ["CZ 0 1"]}
//!   ]
//! }
//! ```
//!
//! `kind` is one of `z`, `x`, `hadamard`, `choice`; `phase` counts π/4.
//! `expect` is a gate list acting on the port qubits; each check passes iff
//! the resolved graph evaluates to that unitary modulo Pauli and scalar.

use serde::{Deserialize, Serialize};

use super::{equiv_mod_pauli_scalar, evaluate, EvaluatedMap, ZxGraph};
use crate::circuit::{Basis, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub resolve: Vec<(usize, Basis)>,
    pub expect: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZxFixture {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub graph: ZxGraph,
    pub checks: Vec<FixtureCheck>,
}

impl ZxFixture {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("fixture serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub checks_run: usize,
    pub failures: Vec<String>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs every check. Malformed checks are errors; mismatches are failures.
pub fn run_fixture(fixture: &ZxFixture) -> Result<FixtureReport> {
    let g = &fixture.graph;
    if g.num_inputs() != g.num_outputs() {
        return Err(Error::argument(format!(
            "{}: fixture graphs need as many inputs as outputs",
            fixture.name
        )));
    }
    let n = g.num_inputs();
    let mut report = FixtureReport {
        name: fixture.name.clone(),
        ..Default::default()
    };
    for (i, check) in fixture.checks.iter().enumerate() {
        let resolved = check
            .resolve
            .iter()
            .try_fold(g.clone(), |g, &(node, basis)| g.resolve_choice(node, basis))?;
        let gates = check
            .expect
            .iter()
            .map(|s| s.parse::<Gate>())
            .collect::<Result<Vec<_>>>()?;
        for gate in &gates {
            gate.validate(n)?;
        }
        let actual = evaluate(&resolved)?;
        let expected = EvaluatedMap::from_gates(n, &gates)?;
        report.checks_run += 1;
        if !equiv_mod_pauli_scalar(&actual, &expected)? {
            report.failures.push(format!(
                "{}: check {i} ({}) does not match",
                fixture.name,
                if check.expect.is_empty() {
                    "identity".to_string()
                } else {
                    check.expect.join("; ")
                }
            ));
        }
    }
    Ok(report)
}
