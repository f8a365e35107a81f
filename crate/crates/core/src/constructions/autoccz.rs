use super::{Construction, Target};
use crate::circuit::{Basis, Circuit, CircuitBuilder, Condition, Gate, Init, Op, Pauli};
use crate::error::{Error, Result};

/// Ancilla qubits used by one AutoCCZ: 3 CCZ qubits and 6 routing qubits.
pub const AUTOCCZ_ANCILLAS: usize = 9;

/// Where an AutoCCZ lives inside a larger circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoCczResource {
    pub ccz_qubits: [usize; 3],
    /// Pairs `(0,1)`, `(2,3)`, `(4,5)` each guard one potential CZ fixup.
    pub routing_qubits: [usize; 6],
    /// Standalone 9-qubit circuit preparing the resource state.
    pub circuit_fragment: Circuit,
}

impl AutoCczResource {
    pub fn routing_pairs(&self) -> [(usize, usize); 3] {
        let r = self.routing_qubits;
        [(r[0], r[1]), (r[2], r[3]), (r[4], r[5])]
    }
}

/// Ancilla layout relative to `base`: `c0, r, r, c1, r, r, c2, r, r`.
fn offsets(base: usize) -> ([usize; 3], [usize; 6]) {
    (
        [base, base + 3, base + 6],
        [base + 1, base + 2, base + 4, base + 5, base + 7, base + 8],
    )
}

fn append_creation(b: &mut CircuitBuilder, base: usize) {
    let ([c0, c1, c2], r) = offsets(base);
    for q in base..base + AUTOCCZ_ANCILLAS {
        b.set_init(q, Init::Plus);
    }
    b.gate(Gate::ccz(c0, c1, c2));
    // A ring c0 - r0 - r1 - c1 - r2 - r3 - c2 - r4 - r5 - c0 of CZs.
    // Each routing pair sits in front of the CZ fixup between two CCZ qubits.
    b.cz(r[0], r[1]).cz(c1, r[2]).cz(r[3], c2).cz(r[4], r[5]);
    b.cz(c0, r[0]).cz(r[1], c1).cz(r[2], r[3]).cz(c2, r[4]);
    b.cz(c0, r[5]);
}

/// Appends creation and consumption of an AutoCCZ acting as CCZ on
/// `targets`. Ancillas occupy `ancilla_base .. ancilla_base + 9` and must be
/// fresh. Every correction is either a measurement-basis choice or a frame
/// update; no unitary is classically controlled.
pub fn append_autoccz(
    b: &mut CircuitBuilder,
    targets: [usize; 3],
    ancilla_base: usize,
) -> Result<AutoCczResource> {
    check_distinct(&targets)?;
    let (ccz, r) = offsets(ancilla_base);
    if targets
        .iter()
        .any(|t| (ancilla_base..ancilla_base + AUTOCCZ_ANCILLAS).contains(t))
    {
        return Err(Error::argument("AutoCCZ ancillas overlap a target"));
    }
    append_creation(b, ancilla_base);
    for (t, c) in targets.iter().zip(ccz) {
        b.cx(*t, c);
    }
    let m: Vec<Condition> = ccz.iter().map(|&c| b.measure(c, Basis::Z).into()).collect();
    // The fixup CZ between CCZ qubits i and j is needed when the third
    // parity outcome is 1; its routing pair is then measured in X.
    let selectors = [&m[2], &m[0], &m[1]];
    let mut effective: Vec<Condition> = Vec::with_capacity(6);
    for (pair, sel) in selectors.iter().enumerate() {
        let k1: Condition = b
            .measure_adaptive(r[2 * pair], Basis::Z, (*sel).clone())
            .into();
        let k2: Condition = b
            .measure_adaptive(r[2 * pair + 1], Basis::Z, (*sel).clone())
            .into();
        // In the activated basis the byproducts cross to the far end.
        effective.push(Condition::select(sel, &k2, &k1));
        effective.push(Condition::select(sel, &k1, &k2));
    }
    let [t0, t1, t2] = targets;
    let updates = [
        (t0, &effective[0]),
        (t1, &effective[1]),
        (t1, &effective[2]),
        (t2, &effective[3]),
        (t2, &effective[4]),
        (t0, &effective[5]),
    ];
    for (t, c) in updates {
        b.frame(Pauli::Z, t, c.clone());
    }
    b.frame(Pauli::Z, t2, m[0].and(&m[1]))
        .frame(Pauli::Z, t0, m[1].and(&m[2]))
        .frame(Pauli::Z, t1, m[0].and(&m[2]));
    Ok(AutoCczResource {
        ccz_qubits: ccz,
        routing_qubits: r,
        circuit_fragment: creation_fragment()?,
    })
}

fn creation_fragment() -> Result<Circuit> {
    let mut b = CircuitBuilder::new(AUTOCCZ_ANCILLAS);
    append_creation(&mut b, 0);
    b.build()
}

fn check_distinct(qubits: &[usize]) -> Result<()> {
    for (i, a) in qubits.iter().enumerate() {
        if qubits[i + 1..].contains(a) {
            return Err(Error::argument(format!("qubit {a} used twice")));
        }
    }
    Ok(())
}

fn data_builder(qubits: &[usize]) -> Result<(CircuitBuilder, usize, Vec<usize>)> {
    check_distinct(qubits)?;
    let n_data = qubits.iter().max().map_or(0, |m| m + 1);
    let mut b = CircuitBuilder::new(n_data + AUTOCCZ_ANCILLAS);
    for q in 0..n_data {
        b.set_init(q, Init::Data);
    }
    Ok((b, n_data, (0..n_data).collect()))
}

/// Creation plus consumption of one AutoCCZ acting as CCZ on `targets`.
/// Qubits `0..=max(targets)` are data; the nine ancillas follow.
pub fn build_autoccz(targets: [usize; 3]) -> Result<(AutoCczResource, Construction)> {
    let (mut b, n_data, data) = data_builder(&targets)?;
    let resource = append_autoccz(&mut b, targets, n_data)?;
    let construction = Construction {
        name: "autoccz".to_string(),
        circuit: b.build()?,
        data_qubits: data,
        routing_qubits: resource.routing_qubits.to_vec(),
        target: Target::Fixed(vec![Gate::ccz(targets[0], targets[1], targets[2])]),
    };
    Ok((resource, construction))
}

/// Toffoli onto `target` by consuming an AutoCCZ between two Hadamards.
pub fn build_toffoli_from_ccz(
    control_a: usize,
    control_b: usize,
    target: usize,
) -> Result<Construction> {
    let (mut b, n_data, data) = data_builder(&[control_a, control_b, target])?;
    b.h(target);
    let resource = append_autoccz(&mut b, [control_a, control_b, target], n_data)?;
    b.h(target);
    Ok(Construction {
        name: "toffoli".to_string(),
        circuit: b.build()?,
        data_qubits: data,
        routing_qubits: resource.routing_qubits.to_vec(),
        target: Target::Fixed(vec![Gate::ccx(control_a, control_b, target)]),
    })
}

/// Operations of `circuit` at the consumption site: everything touching one
/// of `targets` after the resource has been created.
pub fn consumption_site_ops<'a>(circuit: &'a Circuit, targets: &[usize]) -> Vec<&'a Op> {
    circuit
        .ops()
        .iter()
        .filter(|op| match op {
            Op::Gate { gate, .. } => gate.targets.iter().any(|q| targets.contains(q)),
            Op::Measure { qubit, .. } | Op::Frame { qubit, .. } => targets.contains(qubit),
        })
        .collect()
}
