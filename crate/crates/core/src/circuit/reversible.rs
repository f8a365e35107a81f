use super::program::{Circuit, Init, Op};
use super::state::{format_bits, parse_bits, GateKind};
use crate::error::{Error, Result};

/// Evaluates a classical reversible circuit on a basis input.
///
/// Accepted instructions are X, CX, CCX, SWAP and the pattern `H t; CCZ ..t..;
/// H t`, which is a Toffoli onto `t`. The bit string covers every qubit,
/// leftmost character = qubit 0.
pub fn run_reversible(circuit: &Circuit, basis_input: &str) -> Result<String> {
    let n = circuit.num_qubits();
    if basis_input.len() != n {
        return Err(Error::argument(format!(
            "input has {} bits, circuit has {n} qubits",
            basis_input.len()
        )));
    }
    if let Some(q) = circuit.init().iter().position(|&i| i == Init::Plus) {
        return Err(Error::contract(format!(
            "qubit {q} starts in |+>, which is not a classical input"
        )));
    }
    let mut bits = parse_bits(basis_input)?;
    let ops = circuit.ops();
    let mut pc = 0;
    let bit = |bits: usize, q: usize| bits >> q & 1 == 1;
    while pc < ops.len() {
        let Op::Gate { gate, control } = &ops[pc] else {
            return Err(Error::contract(format!(
                "op {pc} is a measurement or frame update"
            )));
        };
        if control.is_some() {
            return Err(Error::contract(format!(
                "op {pc} is classically controlled"
            )));
        }
        let t = &gate.targets;
        match gate.kind {
            GateKind::X => bits ^= 1 << t[0],
            GateKind::Cx => {
                if bit(bits, t[0]) {
                    bits ^= 1 << t[1];
                }
            }
            GateKind::Ccx => {
                if bit(bits, t[0]) && bit(bits, t[1]) {
                    bits ^= 1 << t[2];
                }
            }
            GateKind::Swap => {
                if bit(bits, t[0]) != bit(bits, t[1]) {
                    bits ^= (1 << t[0]) | (1 << t[1]);
                }
            }
            GateKind::H => {
                let target = t[0];
                let pattern = match (ops.get(pc + 1), ops.get(pc + 2)) {
                    (
                        Some(Op::Gate {
                            gate: mid,
                            control: None,
                        }),
                        Some(Op::Gate {
                            gate: last,
                            control: None,
                        }),
                    ) if mid.kind == GateKind::Ccz
                        && mid.targets.contains(&target)
                        && last.kind == GateKind::H
                        && last.targets[0] == target =>
                    {
                        Some(mid)
                    }
                    _ => None,
                };
                let Some(ccz) = pattern else {
                    return Err(Error::contract(format!(
                        "op {pc}: H is only classical as part of H-CCZ-H"
                    )));
                };
                let controls: Vec<usize> = ccz
                    .targets
                    .iter()
                    .copied()
                    .filter(|&q| q != target)
                    .collect();
                if controls.iter().all(|&c| bit(bits, c)) {
                    bits ^= 1 << target;
                }
                pc += 2;
            }
            other => {
                return Err(Error::contract(format!(
                    "op {pc}: {} is not a classical reversible gate",
                    other.name()
                )));
            }
        }
        pc += 1;
    }
    Ok(format_bits(bits, n))
}
