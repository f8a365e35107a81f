//! Gate-by-gate translation of one measurement branch into a ZX graph.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{equiv_mod_pauli_scalar, evaluate, EvaluatedMap, Node, ZxBuilder, ZxGraph};
use crate::circuit::{
    run_postselected_reduced, Basis, Circuit, Gate, GateKind, Init, Op, PauliFrame, StateVector,
};
use crate::constructions::{Construction, Target};
use crate::error::{Error, Result};

struct Wires {
    b: ZxBuilder,
    /// Node each live qubit's wire currently ends on.
    end: Vec<Option<usize>>,
    /// Post-measurement state of a measured qubit, created lazily.
    pending: Vec<Option<(Basis, bool)>>,
}

impl Wires {
    fn state_node(basis: Basis, value: bool) -> Node {
        let k = if value { 4 } else { 0 };
        match basis {
            Basis::Z => Node::x(k),
            Basis::X => Node::z(k),
        }
    }

    fn end(&mut self, q: usize) -> usize {
        if let Some(n) = self.end[q] {
            return n;
        }
        let (basis, value) = self.pending[q].take().expect("qubit is live or measured");
        let n = self.b.node(Self::state_node(basis, value));
        self.end[q] = Some(n);
        n
    }

    fn attach(&mut self, q: usize, node: Node) -> usize {
        let prev = self.end(q);
        let n = self.b.node(node);
        self.b.edge(prev, n);
        self.end[q] = Some(n);
        n
    }

    fn hadamard(&mut self, q: usize) {
        self.attach(q, Node::hadamard());
    }

    fn gate(&mut self, gate: &Gate) {
        let t = &gate.targets;
        match gate.kind {
            GateKind::X => {
                self.attach(t[0], Node::x(4));
            }
            GateKind::Z => {
                self.attach(t[0], Node::z(4));
            }
            GateKind::S => {
                self.attach(t[0], Node::z(2));
            }
            GateKind::H => self.hadamard(t[0]),
            GateKind::Cx => {
                let c = self.attach(t[0], Node::z(0));
                let x = self.attach(t[1], Node::x(0));
                self.b.edge(c, x);
            }
            GateKind::Cz => {
                let a = self.attach(t[0], Node::z(0));
                let b = self.attach(t[1], Node::z(0));
                self.b.hadamard_edge(a, b);
            }
            GateKind::Swap => {
                self.end.swap(t[0], t[1]);
                self.pending.swap(t[0], t[1]);
            }
            GateKind::Ccz => self.ccz(t[0], t[1], t[2]),
            GateKind::Ccx => {
                self.hadamard(t[2]);
                self.ccz(t[0], t[1], t[2]);
                self.hadamard(t[2]);
            }
        }
    }

    /// CCZ as π/4 phase gadgets, from
    /// `4abc = a + b + c - (a^b) - (a^c) - (b^c) + (a^b^c)`.
    fn ccz(&mut self, a: usize, b: usize, c: usize) {
        let w = [
            self.attach(a, Node::z(1)),
            self.attach(b, Node::z(1)),
            self.attach(c, Node::z(1)),
        ];
        let gadgets: [(&[usize], u8); 4] =
            [(&[0, 1], 7), (&[0, 2], 7), (&[1, 2], 7), (&[0, 1, 2], 1)];
        for (legs, phase) in gadgets {
            let x = self.b.node(Node::x(0));
            for &l in legs {
                self.b.edge(w[l], x);
            }
            let z = self.b.node(Node::z(phase));
            self.b.edge(x, z);
        }
    }
}

/// ZX graph of the Kraus operator selected by `outcomes` (recorded values),
/// from the data qubits (inputs, ascending) to the data qubits (outputs).
/// Classically controlled gates and adaptive bases are resolved against
/// `outcomes`; frame updates are dropped, so the graph is exact only
/// modulo Pauli.
pub fn branch_to_zx(circuit: &Circuit, outcomes: &[bool]) -> Result<ZxGraph> {
    if outcomes.len() != circuit.num_measurements() {
        return Err(Error::argument(format!(
            "expected {} outcomes, got {}",
            circuit.num_measurements(),
            outcomes.len()
        )));
    }
    let n = circuit.num_qubits();
    let mut w = Wires {
        b: ZxBuilder::new(),
        end: vec![None; n],
        pending: vec![None; n],
    };
    for (q, init) in circuit.init().iter().enumerate() {
        let node = match init {
            Init::Data => {
                let z = w.b.node(Node::z(0));
                w.b.input(z);
                z
            }
            Init::Zero => w.b.node(Node::x(0)),
            Init::Plus => w.b.node(Node::z(0)),
        };
        w.end[q] = Some(node);
    }
    let mut frame = PauliFrame::identity(n);
    let mut k = 0usize;
    for op in circuit.ops() {
        match op {
            Op::Gate { gate, control } => {
                if control.as_ref().is_none_or(|c| c.eval(&outcomes[..k])) {
                    w.gate(gate);
                    frame.conjugate_through(gate)?;
                }
            }
            Op::Frame {
                pauli,
                qubit,
                condition,
            } => {
                if condition.eval(&outcomes[..k]) {
                    frame.toggle(*pauli, *qubit);
                }
            }
            Op::Measure {
                qubit,
                basis,
                flip_basis_if,
            } => {
                let q = *qubit;
                let basis = if flip_basis_if.eval(&outcomes[..k]) {
                    basis.other()
                } else {
                    *basis
                };
                let flip = match basis {
                    Basis::Z => frame.x(q),
                    Basis::X => frame.z(q),
                };
                let raw = outcomes[k] ^ flip;
                w.attach(q, Wires::state_node(basis, raw));
                w.end[q] = None;
                w.pending[q] = Some((basis, raw));
                k += 1;
            }
        }
    }
    for q in circuit.data_qubits() {
        let e = w.end(q);
        w.b.output(e);
    }
    for (q, init) in circuit.init().iter().enumerate() {
        if *init != Init::Data && w.end[q].is_some() {
            return Err(Error::contract(format!(
                "non-data qubit {q} is not measured at the end of the branch"
            )));
        }
    }
    w.b.build()
}

/// The simulator's Kraus operator for one branch, over the data qubits.
pub fn simulated_branch_map(circuit: &Circuit, outcomes: &[bool]) -> Result<EvaluatedMap> {
    let data = circuit.data_qubits();
    let k = data.len();
    let mut m = EvaluatedMap::zeros(k, k);
    for col in 0..1usize << k {
        let input = StateVector::basis(k, col)?;
        let Some((amps, live)) = run_postselected_reduced(circuit, &input, outcomes)? else {
            continue;
        };
        let mut sorted = live.clone();
        sorted.sort_unstable();
        if sorted != data {
            return Err(Error::contract(
                "branch leaves qubits other than the data qubits unmeasured",
            ));
        }
        for (local, a) in amps.iter().enumerate() {
            let row = live.iter().enumerate().fold(0usize, |acc, (i, q)| {
                let pos = data.iter().position(|d| d == q).expect("checked above");
                acc | (local >> i & 1) << pos
            });
            m.set(row, col, *a);
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ZxBranchReport {
    pub name: String,
    pub branches_checked: usize,
    /// Branches impossible for every input (zero Kraus operator).
    pub branches_skipped: usize,
    pub failures: Vec<String>,
}

impl ZxBranchReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each outcome pattern: the translated graph must evaluate to the
/// simulator's Kraus operator, and to the construction's target, modulo
/// Pauli and scalar.
pub fn check_branches_against_zx(
    c: &Construction,
    patterns: &[Vec<bool>],
) -> Result<ZxBranchReport> {
    let k = c.num_data_qubits();
    let mut report = ZxBranchReport {
        name: c.name.clone(),
        ..Default::default()
    };
    for outcomes in patterns {
        let label: String = outcomes
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        let simulated = simulated_branch_map(&c.circuit, outcomes)?;
        if simulated.is_zero(1e-12) {
            report.branches_skipped += 1;
            continue;
        }
        report.branches_checked += 1;
        let zx = evaluate(&branch_to_zx(&c.circuit, outcomes)?)?;
        if !equiv_mod_pauli_scalar(&zx, &simulated)? {
            report.failures.push(format!(
                "{}: branch {label}: ZX map differs from simulation",
                c.name
            ));
            continue;
        }
        let gates = match &c.target {
            Target::Fixed(g) => g,
            Target::Select {
                key,
                when_one,
                when_zero,
            } => {
                if outcomes[key.0] {
                    when_one
                } else {
                    when_zero
                }
            }
        };
        let target = EvaluatedMap::from_gates(k, gates)?;
        if !equiv_mod_pauli_scalar(&zx, &target)? {
            report.failures.push(format!(
                "{}: branch {label}: ZX map differs from target",
                c.name
            ));
        }
    }
    Ok(report)
}

/// Every outcome pattern of `num_measurements` bits when there are at most
/// `limit`, otherwise `limit` distinct patterns drawn with `seed`, ascending.
pub fn sample_patterns(num_measurements: usize, limit: usize, seed: u64) -> Vec<Vec<bool>> {
    let total = 1usize << num_measurements;
    let mut picked: Vec<usize> = if total <= limit {
        (0..total).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::index::sample(&mut rng, total, limit).into_vec()
    };
    picked.sort_unstable();
    picked
        .into_iter()
        .map(|p| (0..num_measurements).map(|k| p >> k & 1 == 1).collect())
        .collect()
}
