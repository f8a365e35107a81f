use serde::{Deserialize, Serialize};

use super::frame::{Condition, MeasurementKey, Pauli};
use super::state::{Gate, GateKind, StateVector, MAX_QUBITS};
use crate::error::{Error, Result};

/// Upper bound on measurements per circuit (branch enumeration is 2^k).
pub const MAX_MEASUREMENTS: usize = 16;

/// Initial label of a qubit. `Data` qubits are filled from the caller's input
/// state, in ascending qubit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Init {
    Data,
    Zero,
    Plus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    X,
    Z,
}

impl Basis {
    pub fn other(self) -> Basis {
        match self {
            Basis::X => Basis::Z,
            Basis::Z => Basis::X,
        }
    }
}

/// One circuit instruction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    /// A unitary gate, optionally classically controlled.
    Gate {
        gate: Gate,
        control: Option<Condition>,
    },
    /// Measurement in `basis`, or in the other basis when `flip_basis_if`
    /// evaluates true on earlier outcomes.
    Measure {
        qubit: usize,
        basis: Basis,
        flip_basis_if: Condition,
    },
    /// Multiplies `pauli` on `qubit` into the frame when `condition` holds.
    Frame {
        pauli: Pauli,
        qubit: usize,
        condition: Condition,
    },
}

impl Op {
    /// Qubits whose quantum state the instruction touches.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Gate { gate, .. } => gate.targets.clone(),
            Op::Measure { qubit, .. } | Op::Frame { qubit, .. } => vec![*qubit],
        }
    }

    pub fn is_classically_controlled_unitary(&self) -> bool {
        matches!(self, Op::Gate { control: Some(c), .. } if !c.is_never())
    }
}

/// An ordered, validated circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    init: Vec<Init>,
    ops: Vec<Op>,
    num_measurements: usize,
}

impl Circuit {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn init(&self) -> &[Init] {
        &self.init
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn num_measurements(&self) -> usize {
        self.num_measurements
    }

    /// Data qubits in ascending order.
    pub fn data_qubits(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|&q| self.init[q] == Init::Data)
            .collect()
    }

    /// Number of gates of `kind`, ignoring classical control.
    pub fn count_gates(&self, kind: GateKind) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, Op::Gate { gate, .. } if gate.kind == kind))
            .count()
    }

    /// Embeds `data` into the data qubits and prepares every other qubit
    /// according to its label.
    pub fn prepare(&self, data: &StateVector) -> Result<StateVector> {
        let data_qubits = self.data_qubits();
        if data.num_qubits() != data_qubits.len() {
            return Err(Error::argument(format!(
                "input has {} qubits but the circuit has {} data qubits",
                data.num_qubits(),
                data_qubits.len()
            )));
        }
        // Place data in the low qubits, ancillas above, then permute.
        let ancillas: Vec<usize> = (0..self.num_qubits)
            .filter(|&q| self.init[q] != Init::Data)
            .collect();
        let mut state = data.tensor(&StateVector::zero(ancillas.len())?)?;
        let base = data_qubits.len();
        for (i, &q) in ancillas.iter().enumerate() {
            if self.init[q] == Init::Plus {
                state.apply(&Gate::h(base + i))?;
            }
        }
        let mut position: Vec<usize> = data_qubits;
        position.extend(ancillas);
        state.permuted(&position)
    }
}

/// Incremental builder; [`CircuitBuilder::build`] validates the result.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    num_qubits: usize,
    init: Vec<Init>,
    ops: Vec<Op>,
    num_measurements: usize,
}

impl CircuitBuilder {
    /// All qubits start as `Zero`.
    pub fn new(num_qubits: usize) -> Self {
        CircuitBuilder {
            num_qubits,
            init: vec![Init::Zero; num_qubits],
            ops: Vec::new(),
            num_measurements: 0,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_measurements(&self) -> usize {
        self.num_measurements
    }

    pub fn set_init(&mut self, qubit: usize, init: Init) -> &mut Self {
        if qubit < self.num_qubits {
            self.init[qubit] = init;
        } else {
            // Recorded so build() reports it.
            self.init.resize(qubit + 1, Init::Zero);
            self.init[qubit] = init;
        }
        self
    }

    pub fn gate(&mut self, gate: Gate) -> &mut Self {
        self.ops.push(Op::Gate {
            gate,
            control: None,
        });
        self
    }

    pub fn gate_if(&mut self, gate: Gate, control: Condition) -> &mut Self {
        self.ops.push(Op::Gate {
            gate,
            control: Some(control),
        });
        self
    }

    pub fn h(&mut self, q: usize) -> &mut Self {
        self.gate(Gate::h(q))
    }

    pub fn cx(&mut self, c: usize, t: usize) -> &mut Self {
        self.gate(Gate::cx(c, t))
    }

    pub fn cz(&mut self, a: usize, b: usize) -> &mut Self {
        self.gate(Gate::cz(a, b))
    }

    pub fn measure(&mut self, qubit: usize, basis: Basis) -> MeasurementKey {
        self.measure_adaptive(qubit, basis, Condition::never())
    }

    pub fn measure_adaptive(
        &mut self,
        qubit: usize,
        basis: Basis,
        flip_basis_if: Condition,
    ) -> MeasurementKey {
        let key = MeasurementKey(self.num_measurements);
        self.num_measurements += 1;
        self.ops.push(Op::Measure {
            qubit,
            basis,
            flip_basis_if,
        });
        key
    }

    pub fn frame(&mut self, pauli: Pauli, qubit: usize, condition: Condition) -> &mut Self {
        if !condition.is_never() {
            self.ops.push(Op::Frame {
                pauli,
                qubit,
                condition,
            });
        }
        self
    }

    pub fn push(&mut self, op: Op) -> Option<MeasurementKey> {
        let key = if matches!(op, Op::Measure { .. }) {
            let k = MeasurementKey(self.num_measurements);
            self.num_measurements += 1;
            Some(k)
        } else {
            None
        };
        self.ops.push(op);
        key
    }

    pub fn build(&self) -> Result<Circuit> {
        let n = self.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::capacity(format!(
                "{n} qubits exceeds the {MAX_QUBITS}-qubit guardrail"
            )));
        }
        if self.init.len() != n {
            return Err(Error::argument(format!(
                "init label for qubit {} out of range",
                self.init.len() - 1
            )));
        }
        if self.num_measurements > MAX_MEASUREMENTS {
            return Err(Error::capacity(format!(
                "{} measurements exceeds the limit of {MAX_MEASUREMENTS}",
                self.num_measurements
            )));
        }
        let check_qubit = |q: usize, what: &str| {
            if q >= n {
                Err(Error::argument(format!(
                    "{what} qubit {q} out of range for {n} qubits"
                )))
            } else {
                Ok(())
            }
        };
        let check_cond = |c: &Condition, seen: usize, idx: usize| match c.max_key() {
            Some(k) if k.0 >= seen => Err(Error::contract(format!(
                "op {idx} references {k} before it is measured"
            ))),
            _ => Ok(()),
        };
        let mut seen = 0usize;
        for (idx, op) in self.ops.iter().enumerate() {
            match op {
                Op::Gate { gate, control } => {
                    gate.validate(n)?;
                    if let Some(c) = control {
                        check_cond(c, seen, idx)?;
                    }
                }
                Op::Measure {
                    qubit,
                    flip_basis_if,
                    ..
                } => {
                    check_qubit(*qubit, "measured")?;
                    check_cond(flip_basis_if, seen, idx)?;
                    seen += 1;
                }
                Op::Frame {
                    qubit, condition, ..
                } => {
                    check_qubit(*qubit, "frame")?;
                    check_cond(condition, seen, idx)?;
                }
            }
        }
        Ok(Circuit {
            num_qubits: n,
            init: self.init.clone(),
            ops: self.ops.clone(),
            num_measurements: seen,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forward_references_are_rejected() {
        let mut b = CircuitBuilder::new(2);
        b.frame(Pauli::Z, 0, MeasurementKey(0).into());
        b.measure(1, Basis::Z);
        assert!(matches!(b.build(), Err(Error::Contract(_))));
    }

    #[test]
    fn guardrails() {
        assert!(matches!(
            CircuitBuilder::new(17).build(),
            Err(Error::Capacity(_))
        ));
        let mut b = CircuitBuilder::new(1);
        for _ in 0..17 {
            b.measure(0, Basis::Z);
        }
        assert!(matches!(b.build(), Err(Error::Capacity(_))));
        let mut b = CircuitBuilder::new(2);
        b.cx(0, 2);
        assert!(matches!(b.build(), Err(Error::Argument(_))));
    }

    #[test]
    fn prepare_places_data_and_ancillas() {
        let mut b = CircuitBuilder::new(3);
        b.set_init(0, Init::Plus)
            .set_init(1, Init::Data)
            .set_init(2, Init::Zero);
        let c = b.build().unwrap();
        let s = c.prepare(&StateVector::from_bits("1").unwrap()).unwrap();
        // qubit1 = 1, qubit0 = |+>, qubit2 = 0 -> indices 0b010 and 0b011
        let a = s.amplitudes();
        assert!((a[0b010].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((a[0b011].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(c.prepare(&StateVector::zero(2).unwrap()).is_err());
    }
}
