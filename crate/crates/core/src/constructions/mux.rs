use super::{Construction, CzChoice, Target};
use crate::circuit::{Basis, CircuitBuilder, Condition, Gate, Init, MeasurementKey, Pauli};
use crate::error::Result;

/// Baseline delayed-choice CZ built from a demultiplexer / multiplexer pair
/// around each data qubit.
///
/// Each data qubit `q` is split onto two paths (`q` itself and a fresh wire
/// `p`). Only the `q` paths meet at the CZ. Routing qubits `rA, rB` open the
/// paths and `sA, sB` close them; measuring a routing qubit in Z connects its
/// path, in X cuts it. Two data qubits times four routing qubits gives eight.
///
/// Qubits per data qubit `d`, at base `6d`: `q, p, rA, rB, sA, sB`.
pub fn build_fowler_multiplexer_cz(choice: CzChoice) -> Result<Construction> {
    let mut b = CircuitBuilder::new(12);
    let mut routing = Vec::new();
    for d in 0..2 {
        let base = 6 * d;
        b.set_init(base, Init::Data).set_init(base + 1, Init::Zero);
        for r in 2..6 {
            b.set_init(base + r, Init::Plus);
            routing.push(base + r);
        }
    }
    for d in 0..2 {
        let (q, p) = (6 * d, 6 * d + 1);
        b.cx(q, p).cx(q + 2, q).cx(q + 3, p);
    }
    b.cz(0, 6);
    for d in 0..2 {
        let (q, p) = (6 * d, 6 * d + 1);
        b.cx(q + 4, q).cx(q + 5, p).cx(q, p);
    }
    // Apply keeps the q path: rA, sA in Z, rB, sB in X. Skip is the mirror.
    let (conn, cut) = match choice {
        CzChoice::Apply => (Basis::Z, Basis::X),
        CzChoice::Skip => (Basis::X, Basis::Z),
    };
    let mut k: Vec<MeasurementKey> = Vec::with_capacity(10);
    for d in 0..2 {
        let base = 6 * d;
        k.push(b.measure(base + 1, Basis::Z));
        k.push(b.measure(base + 2, conn));
        k.push(b.measure(base + 3, cut));
        k.push(b.measure(base + 4, conn));
        k.push(b.measure(base + 5, cut));
    }
    let parity = |idx: &[usize]| {
        idx.iter()
            .fold(Condition::never(), |acc, &i| acc.xor(&k[i].into()))
    };
    let (x0, z0, x1, z1) = match choice {
        CzChoice::Apply => (parity(&[1, 3]), parity(&[6]), parity(&[6, 8]), parity(&[1])),
        CzChoice::Skip => (
            parity(&[0, 2, 4]),
            parity(&[1, 3]),
            parity(&[5, 7, 9]),
            parity(&[6, 8]),
        ),
    };
    b.frame(Pauli::X, 0, x0)
        .frame(Pauli::Z, 0, z0)
        .frame(Pauli::X, 6, x1)
        .frame(Pauli::Z, 6, z1);
    Ok(Construction {
        name: match choice {
            CzChoice::Apply => "fowler-mux-apply",
            CzChoice::Skip => "fowler-mux-skip",
        }
        .to_string(),
        circuit: b.build()?,
        data_qubits: vec![0, 6],
        routing_qubits: routing,
        target: Target::Fixed(match choice {
            CzChoice::Apply => vec![Gate::cz(0, 1)],
            CzChoice::Skip => Vec::new(),
        }),
    })
}
