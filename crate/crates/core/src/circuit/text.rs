//! Plain-text circuit format.
//!
//! One instruction per line; `#` starts a comment. Measurements are numbered
//! `m0, m1, ...` in the order they appear.
//!
//! ```text
//! qubits <n>                       must come first
//! init <q> data|zero|plus          default is zero
//! <GATE> <q>... [if <cond>]        GATE in X Z H S CX CZ SWAP CCZ CCX
//! M <q> X|Z [flip <cond>]          measure; basis swaps X<->Z when cond holds
//! FRAME X|Z <q> if <cond>          multiply a Pauli into the frame
//! ```
//!
//! `<cond>` is an XOR of AND-terms over measurement keys, e.g. `m0&m3^m2^1`.

use std::fmt::Write as _;

use super::frame::{Condition, Pauli};
use super::program::{Basis, Circuit, CircuitBuilder, Init, Op};
use super::state::{Gate, GateKind};
use crate::error::{Error, Result};

pub fn to_text(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.num_qubits());
    for (q, init) in circuit.init().iter().enumerate() {
        match init {
            Init::Zero => {}
            Init::Data => {
                let _ = writeln!(out, "init {q} data");
            }
            Init::Plus => {
                let _ = writeln!(out, "init {q} plus");
            }
        }
    }
    let mut next_key = 0;
    for op in circuit.ops() {
        match op {
            Op::Gate { gate, control } => {
                let _ = write!(out, "{gate}");
                if let Some(c) = control {
                    let _ = write!(out, " if {c}");
                }
            }
            Op::Measure {
                qubit,
                basis,
                flip_basis_if,
            } => {
                let b = match basis {
                    Basis::X => "X",
                    Basis::Z => "Z",
                };
                let _ = write!(out, "M {qubit} {b}");
                if !flip_basis_if.is_never() {
                    let _ = write!(out, " flip {flip_basis_if}");
                }
                let _ = write!(out, "  # m{next_key}");
                next_key += 1;
            }
            Op::Frame {
                pauli,
                qubit,
                condition,
            } => {
                let _ = write!(out, "FRAME {} {qubit} if {condition}", pauli.name());
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut builder: Option<CircuitBuilder> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, cond) = split_keyword(line, line_no)?;
        let referenced = cond.as_ref().and_then(|(_, c)| c.max_key());
        let words: Vec<&str> = head.split_whitespace().collect();
        let op = words[0].to_ascii_uppercase();
        if op == "QUBITS" {
            if builder.is_some() {
                return Err(Error::parse(line_no, "duplicate qubits line"));
            }
            let n = parse_usize(words.get(1), line_no)?;
            if words.len() != 2 {
                return Err(Error::parse(line_no, "expected: qubits <n>"));
            }
            builder = Some(CircuitBuilder::new(n));
            continue;
        }
        let Some(b) = builder.as_mut() else {
            return Err(Error::parse(
                line_no,
                "the first instruction must be 'qubits <n>'",
            ));
        };
        let check_q = |q: usize| {
            if q >= b.num_qubits() {
                Err(Error::parse(line_no, format!("qubit {q} out of range")))
            } else {
                Ok(q)
            }
        };
        match op.as_str() {
            "INIT" => {
                if words.len() != 3 || cond.is_some() {
                    return Err(Error::parse(line_no, "expected: init <q> data|zero|plus"));
                }
                let q = check_q(parse_usize(words.get(1), line_no)?)?;
                let init = match words[2].to_ascii_lowercase().as_str() {
                    "data" => Init::Data,
                    "zero" | "0" => Init::Zero,
                    "plus" | "+" => Init::Plus,
                    other => {
                        return Err(Error::parse(
                            line_no,
                            format!("unknown init label {other:?}"),
                        ))
                    }
                };
                b.set_init(q, init);
            }
            "M" => {
                if words.len() != 3 {
                    return Err(Error::parse(line_no, "expected: M <q> X|Z [flip <cond>]"));
                }
                let q = check_q(parse_usize(words.get(1), line_no)?)?;
                let basis = parse_basis(words[2], line_no)?;
                let flip = match cond {
                    Some(("flip", c)) => c,
                    Some((kw, _)) => {
                        return Err(Error::parse(line_no, format!("unexpected '{kw}' on M")))
                    }
                    None => Condition::never(),
                };
                b.measure_adaptive(q, basis, flip);
            }
            "FRAME" => {
                if words.len() != 3 {
                    return Err(Error::parse(line_no, "expected: FRAME X|Z <q> if <cond>"));
                }
                let pauli = match words[1].to_ascii_uppercase().as_str() {
                    "X" => Pauli::X,
                    "Z" => Pauli::Z,
                    other => return Err(Error::parse(line_no, format!("unknown Pauli {other:?}"))),
                };
                let q = check_q(parse_usize(words.get(2), line_no)?)?;
                let condition = match cond {
                    Some(("if", c)) => c,
                    _ => return Err(Error::parse(line_no, "FRAME needs 'if <cond>'")),
                };
                b.frame(pauli, q, condition);
            }
            name => {
                let kind = GateKind::from_name(name)
                    .ok_or_else(|| Error::parse(line_no, format!("unknown opcode {name:?}")))?;
                let targets = words[1..]
                    .iter()
                    .map(|w| parse_usize(Some(w), line_no))
                    .collect::<Result<Vec<_>>>()?;
                let gate = Gate::new(kind, &targets);
                gate.validate(b.num_qubits())
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                match cond {
                    None => b.gate(gate),
                    Some(("if", c)) => b.gate_if(gate, c),
                    Some((kw, _)) => {
                        return Err(Error::parse(line_no, format!("unexpected '{kw}' on gate")))
                    }
                };
            }
        }
        if let Some(k) = referenced {
            let measured_before = b.num_measurements() - usize::from(op == "M");
            if k.0 >= measured_before {
                return Err(Error::parse(
                    line_no,
                    format!("{k} is used before it is measured"),
                ));
            }
        }
    }
    let b = builder.ok_or_else(|| Error::parse(0, "empty circuit description"))?;
    b.build()
}

fn split_keyword(line: &str, line_no: usize) -> Result<(&str, Option<(&'static str, Condition)>)> {
    for kw in ["if", "flip"] {
        let pat = format!(" {kw} ");
        if let Some(pos) = line.find(&pat) {
            let cond_text = &line[pos + pat.len()..];
            let cond = Condition::parse(cond_text).map_err(|m| Error::parse(line_no, m))?;
            return Ok((&line[..pos], Some((kw, cond))));
        }
    }
    Ok((line, None))
}

fn parse_usize(word: Option<&&str>, line_no: usize) -> Result<usize> {
    let w = word.ok_or_else(|| Error::parse(line_no, "missing operand"))?;
    w.parse()
        .map_err(|_| Error::parse(line_no, format!("expected a qubit index, got {w:?}")))
}

fn parse_basis(word: &str, line_no: usize) -> Result<Basis> {
    match word.to_ascii_uppercase().as_str() {
        "X" => Ok(Basis::X),
        "Z" => Ok(Basis::Z),
        other => Err(Error::parse(line_no, format!("unknown basis {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# teleport qubit 0 onto qubit 2
qubits 3
init 0 data
init 1 plus
CX 1 2
CX 0 1
H 0
M 0 Z
M 1 Z
FRAME X 2 if m1
FRAME Z 2 if m0
X 2 if m0&m1
M 2 X flip m0^m1
";

    #[test]
    fn parses_and_prints_round_trip() {
        let c = parse_circuit(SAMPLE).unwrap();
        assert_eq!(c.num_qubits(), 3);
        assert_eq!(c.num_measurements(), 3);
        let again = parse_circuit(&to_text(&c)).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_circuit("qubits 2\nCX 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_circuit("qubits 2\nFRAME Z 0 if m0\nM 0 Z\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_circuit("H 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_circuit("qubits 1\nFOO 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_circuit("qubits 1\nM 0 Z flip m0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
