use super::{Construction, Target};
use crate::circuit::{Basis, CircuitBuilder, Condition, Gate, Init, Pauli};
use crate::error::Result;

/// Terminal basis choice for the routing qubits of a delayed-choice CZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CzChoice {
    /// Measure routing qubits in Z: the CZ happens.
    Apply,
    /// Measure routing qubits in X: the CZ is skipped.
    Skip,
}

impl CzChoice {
    fn routing_basis(self) -> Basis {
        match self {
            CzChoice::Apply => Basis::Z,
            CzChoice::Skip => Basis::X,
        }
    }
}

const DATA: [usize; 2] = [0, 1];
const ROUTING: [usize; 2] = [2, 3];

/// Two-routing-qubit delayed-choice CZ. Qubits 0 and 1 are data, 2 and 3
/// are routing qubits prepared as a CZ-linked pair and entangled with the
/// data by CNOTs. The routing measurement basis selects the behaviour.
pub fn build_delayed_choice_cz(choice: CzChoice) -> Result<Construction> {
    let mut b = prepare_pair(4);
    let basis = choice.routing_basis();
    let k0 = b.measure(ROUTING[0], basis);
    let k1 = b.measure(ROUTING[1], basis);
    // In the Z basis the byproducts cross over between the data qubits.
    let (for0, for1) = match choice {
        CzChoice::Apply => (k1, k0),
        CzChoice::Skip => (k0, k1),
    };
    b.frame(Pauli::Z, DATA[0], for0.into());
    b.frame(Pauli::Z, DATA[1], for1.into());
    let target = match choice {
        CzChoice::Apply => vec![Gate::cz(0, 1)],
        CzChoice::Skip => Vec::new(),
    };
    Ok(Construction {
        name: match choice {
            CzChoice::Apply => "delayed-cz-apply",
            CzChoice::Skip => "delayed-cz-skip",
        }
        .to_string(),
        circuit: b.build()?,
        data_qubits: DATA.to_vec(),
        routing_qubits: ROUTING.to_vec(),
        target: Target::Fixed(target),
    })
}

/// The same construction with the choice supplied by a fifth qubit in `|+⟩`
/// that is measured first (outcome 1 applies the CZ). This gives three
/// measurements and eight branches per input.
pub fn build_delayed_choice_cz_with_choice_qubit() -> Result<Construction> {
    let mut b = prepare_pair(5);
    b.set_init(4, Init::Plus);
    let choice = b.measure(4, Basis::Z);
    let c: Condition = choice.into();
    let k0 = b.measure_adaptive(ROUTING[0], Basis::X, c.clone());
    let k1 = b.measure_adaptive(ROUTING[1], Basis::X, c.clone());
    let (k0, k1): (Condition, Condition) = (k0.into(), k1.into());
    b.frame(Pauli::Z, DATA[0], Condition::select(&c, &k1, &k0));
    b.frame(Pauli::Z, DATA[1], Condition::select(&c, &k0, &k1));
    Ok(Construction {
        name: "delayed-cz-choice-qubit".to_string(),
        circuit: b.build()?,
        data_qubits: DATA.to_vec(),
        routing_qubits: ROUTING.to_vec(),
        target: Target::Select {
            key: choice,
            when_one: vec![Gate::cz(0, 1)],
            when_zero: Vec::new(),
        },
    })
}

fn prepare_pair(num_qubits: usize) -> CircuitBuilder {
    let mut b = CircuitBuilder::new(num_qubits);
    b.set_init(DATA[0], Init::Data)
        .set_init(DATA[1], Init::Data)
        .set_init(ROUTING[0], Init::Plus)
        .set_init(ROUTING[1], Init::Plus);
    b.cz(ROUTING[0], ROUTING[1])
        .cx(DATA[0], ROUTING[0])
        .cx(DATA[1], ROUTING[1]);
    b
}
