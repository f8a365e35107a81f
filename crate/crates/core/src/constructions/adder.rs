use serde::{Deserialize, Serialize};

use super::autoccz::append_autoccz;
use super::{Construction, Target, AUTOCCZ_ANCILLAS};
use crate::circuit::{format_bits, parse_bits, Circuit, CircuitBuilder, Gate, GateKind, Init};
use crate::error::{Error, Result};

/// How a Toffoli inside MAJ/UMA is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ToffoliStyle {
    /// A plain CCX gate.
    Direct,
    /// Consumes an AutoCCZ between Hadamards (adds nine ancillas).
    AutoCcz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdderSpec {
    pub m: usize,
    pub toffoli_count: usize,
    pub measurement_depth: usize,
}

impl AdderSpec {
    pub fn new(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::argument(format!(
                "adder width must be >= 2, got {m}"
            )));
        }
        Ok(AdderSpec {
            m,
            toffoli_count: 2 * m - 3,
            measurement_depth: 2 * m - 3,
        })
    }
}

/// Wire assignment of the ripple-carry adder: carry-in on qubit 0, then
/// `t_0, i_0, t_1, i_1, ..., t_{m-2}, i_{m-2}, t_{m-1}`. The offset register
/// `i` has `m - 1` bits; the target `t` has `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdderLayout {
    pub m: usize,
}

impl AdderLayout {
    pub fn num_qubits(&self) -> usize {
        2 * self.m
    }

    pub fn carry_in(&self) -> usize {
        0
    }

    pub fn target(&self, k: usize) -> usize {
        2 * k + 1
    }

    pub fn offset(&self, k: usize) -> usize {
        2 * k + 2
    }

    /// Carry wire entering position `k + 1` (`c_in` for `k = -1`).
    fn carry(&self, k: isize) -> usize {
        if k < 0 {
            self.carry_in()
        } else {
            self.offset(k as usize)
        }
    }

    pub fn encode(&self, t: usize, i: usize, carry_in: bool) -> String {
        let mut bits = usize::from(carry_in);
        for k in 0..self.m {
            bits |= (t >> k & 1) << self.target(k);
        }
        for k in 0..self.m - 1 {
            bits |= (i >> k & 1) << self.offset(k);
        }
        format_bits(bits, self.num_qubits())
    }

    /// Returns `(t, i, carry_in)`.
    pub fn decode(&self, bits: &str) -> Result<(usize, usize, bool)> {
        let v = parse_bits(bits)?;
        let t = (0..self.m).fold(0, |acc, k| acc | (v >> self.target(k) & 1) << k);
        let i = (0..self.m - 1).fold(0, |acc, k| acc | (v >> self.offset(k) & 1) << k);
        Ok((t, i, v & 1 == 1))
    }
}

fn maj(c: usize, b: usize, a: usize) -> [Gate; 3] {
    [Gate::cx(a, b), Gate::cx(a, c), Gate::ccx(c, b, a)]
}

fn uma(c: usize, b: usize, a: usize) -> [Gate; 3] {
    [Gate::ccx(c, b, a), Gate::cx(a, c), Gate::cx(c, b)]
}

/// Gate list of the V-shaped ripple-carry adder: a MAJ wave upward, one
/// combined top step, then a UMA wave back down.
pub fn cuccaro_gates(m: usize) -> Result<Vec<Gate>> {
    AdderSpec::new(m)?;
    let l = AdderLayout { m };
    let mut gates = Vec::new();
    for k in 0..m - 2 {
        gates.extend(maj(l.carry(k as isize - 1), l.target(k), l.offset(k)));
    }
    let top = m - 2;
    let (w, i, t, hi) = (
        l.carry(top as isize - 1),
        l.offset(top),
        l.target(top),
        l.target(m - 1),
    );
    gates.extend([
        Gate::cx(i, w),
        Gate::cx(i, t),
        Gate::ccx(w, t, hi),
        Gate::cx(i, hi),
        Gate::cx(i, w),
        Gate::cx(w, t),
    ]);
    for k in (0..m - 2).rev() {
        gates.extend(uma(l.carry(k as isize - 1), l.target(k), l.offset(k)));
    }
    Ok(gates)
}

/// Ripple-carry adder on `2m` qubits computing `t <- t + i + c_in mod 2^m`.
pub fn build_cuccaro_adder(m: usize) -> Result<(Circuit, AdderSpec)> {
    let spec = AdderSpec::new(m)?;
    let l = AdderLayout { m };
    let mut b = CircuitBuilder::new(l.num_qubits());
    for q in 0..l.num_qubits() {
        b.set_init(q, Init::Data);
    }
    for g in cuccaro_gates(m)? {
        b.gate(g);
    }
    let circuit = b.build()?;
    debug_assert_eq!(circuit.count_gates(GateKind::Ccx), spec.toffoli_count);
    Ok((circuit, spec))
}

fn three_wire(name: &str, gates: Vec<Gate>, style: ToffoliStyle) -> Result<Construction> {
    let extra = match style {
        ToffoliStyle::Direct => 0,
        ToffoliStyle::AutoCcz => AUTOCCZ_ANCILLAS,
    };
    let mut b = CircuitBuilder::new(3 + extra);
    for q in 0..3 {
        b.set_init(q, Init::Data);
    }
    let mut routing = Vec::new();
    for g in &gates {
        match (g.kind, style) {
            (GateKind::Ccx, ToffoliStyle::AutoCcz) => {
                let t = g.targets[2];
                b.h(t);
                let r = append_autoccz(&mut b, [g.targets[0], g.targets[1], t], 3)?;
                b.h(t);
                routing.extend(r.routing_qubits);
            }
            _ => {
                b.gate(g.clone());
            }
        }
    }
    Ok(Construction {
        name: name.to_string(),
        circuit: b.build()?,
        data_qubits: vec![0, 1, 2],
        routing_qubits: routing,
        target: Target::Fixed(gates),
    })
}

/// MAJ on wires `(c, b, a) = (0, 1, 2)`; `a` ends up holding the majority.
pub fn build_maj(style: ToffoliStyle) -> Result<Construction> {
    three_wire("maj", maj(0, 1, 2).to_vec(), style)
}

/// UMA on wires `(c, b, a) = (0, 1, 2)`: restores `a` and `c`, writes the
/// sum bit into `b`.
pub fn build_uma(style: ToffoliStyle) -> Result<Construction> {
    three_wire("uma", uma(0, 1, 2).to_vec(), style)
}

/// Exact inverse of MAJ.
pub fn build_maj_inverse(style: ToffoliStyle) -> Result<Construction> {
    let mut gates = maj(0, 1, 2).to_vec();
    gates.reverse();
    three_wire("maj-inverse", gates, style)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::run_reversible;

    #[test]
    fn toffoli_count_is_2m_minus_3() {
        for m in 2..=12 {
            let gates = cuccaro_gates(m).unwrap();
            let n = gates.iter().filter(|g| g.kind == GateKind::Ccx).count();
            assert_eq!(n, 2 * m - 3);
        }
        assert_eq!(AdderSpec::new(5).unwrap().toffoli_count, 7);
        assert!(matches!(AdderSpec::new(1), Err(Error::Argument(_))));
    }

    #[test]
    fn five_plus_two_in_three_bits() {
        let (c, _) = build_cuccaro_adder(3).unwrap();
        let l = AdderLayout { m: 3 };
        let out = run_reversible(&c, &l.encode(5, 2, false)).unwrap();
        assert_eq!(l.decode(&out).unwrap(), (7, 2, false));
    }

    #[test]
    fn zero_plus_zero() {
        let (c, _) = build_cuccaro_adder(2).unwrap();
        let l = AdderLayout { m: 2 };
        let out = run_reversible(&c, &l.encode(0, 0, false)).unwrap();
        assert_eq!(l.decode(&out).unwrap(), (0, 0, false));
    }

    #[test]
    fn layout_round_trip() {
        let l = AdderLayout { m: 4 };
        assert_eq!(l.decode(&l.encode(11, 5, true)).unwrap(), (11, 5, true));
    }
}
