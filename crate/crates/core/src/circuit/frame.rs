use std::fmt;

use serde::{Deserialize, Serialize};

use super::state::{Gate, GateKind, StateVector};
use crate::error::{Error, Result};

/// Single-qubit Pauli used in frame updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Z,
}

impl Pauli {
    pub fn name(self) -> &'static str {
        match self {
            Pauli::X => "X",
            Pauli::Z => "Z",
        }
    }
}

/// Pending Pauli corrections, one X bit and one Z bit per qubit. The frame
/// `F` means the logical state is `F|ψ⟩` where `|ψ⟩` is the simulated state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliFrame {
    num_qubits: usize,
    x_bits: u32,
    z_bits: u32,
}

impl PauliFrame {
    pub fn identity(num_qubits: usize) -> Self {
        PauliFrame {
            num_qubits,
            x_bits: 0,
            z_bits: 0,
        }
    }

    pub fn from_bits(num_qubits: usize, x_bits: u32, z_bits: u32) -> Self {
        let mask = if num_qubits >= 32 {
            u32::MAX
        } else {
            (1u32 << num_qubits) - 1
        };
        PauliFrame {
            num_qubits,
            x_bits: x_bits & mask,
            z_bits: z_bits & mask,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn x_bits(&self) -> u32 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u32 {
        self.z_bits
    }

    pub fn x(&self, q: usize) -> bool {
        self.x_bits >> q & 1 == 1
    }

    pub fn z(&self, q: usize) -> bool {
        self.z_bits >> q & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Multiplies a Pauli into the frame (XOR of its bit).
    pub fn toggle(&mut self, pauli: Pauli, q: usize) {
        match pauli {
            Pauli::X => self.x_bits ^= 1 << q,
            Pauli::Z => self.z_bits ^= 1 << q,
        }
    }

    /// Group product, ignoring phase.
    pub fn compose(&self, other: &PauliFrame) -> PauliFrame {
        PauliFrame {
            num_qubits: self.num_qubits.max(other.num_qubits),
            x_bits: self.x_bits ^ other.x_bits,
            z_bits: self.z_bits ^ other.z_bits,
        }
    }

    /// Applies the frame's Paulis to `state` (Z first, then X).
    pub fn apply_to(&self, state: &mut StateVector) -> Result<()> {
        for q in 0..self.num_qubits {
            if self.z(q) {
                state.apply(&Gate::z(q))?;
            }
            if self.x(q) {
                state.apply(&Gate::x(q))?;
            }
        }
        Ok(())
    }

    /// Updates the frame for a gate applied after it: `F ← U F U†`.
    /// Fails when the conjugated frame would not be a Pauli product.
    pub fn conjugate_through(&mut self, gate: &Gate) -> Result<()> {
        let t = &gate.targets;
        let swap_bits = |bits: &mut u32, a: usize, b: usize| {
            let (ba, bb) = (*bits >> a & 1, *bits >> b & 1);
            if ba != bb {
                *bits ^= (1 << a) | (1 << b);
            }
        };
        match gate.kind {
            GateKind::X | GateKind::Z => {}
            GateKind::H => {
                let (x, z) = (self.x(t[0]), self.z(t[0]));
                if x != z {
                    self.x_bits ^= 1 << t[0];
                    self.z_bits ^= 1 << t[0];
                }
            }
            GateKind::S => {
                if self.x(t[0]) {
                    self.z_bits ^= 1 << t[0];
                }
            }
            GateKind::Cx => {
                let (c, tg) = (t[0], t[1]);
                if self.x(c) {
                    self.x_bits ^= 1 << tg;
                }
                if self.z(tg) {
                    self.z_bits ^= 1 << c;
                }
            }
            GateKind::Cz => {
                let (a, b) = (t[0], t[1]);
                let (xa, xb) = (self.x(a), self.x(b));
                if xa {
                    self.z_bits ^= 1 << b;
                }
                if xb {
                    self.z_bits ^= 1 << a;
                }
            }
            GateKind::Swap => {
                swap_bits(&mut self.x_bits, t[0], t[1]);
                swap_bits(&mut self.z_bits, t[0], t[1]);
            }
            GateKind::Ccz => {
                if t.iter().any(|&q| self.x(q)) {
                    return Err(Error::contract(format!(
                        "X frame component on a CCZ qubit ({gate}) does not stay Pauli"
                    )));
                }
            }
            GateKind::Ccx => {
                if self.x(t[0]) || self.x(t[1]) || self.z(t[2]) {
                    return Err(Error::contract(format!(
                        "frame component through {gate} does not stay Pauli"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.num_qubits {
            let c = match (self.x(q), self.z(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Index of a measurement within a circuit, in program order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MeasurementKey(pub usize);

impl fmt::Display for MeasurementKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{}", self.0)
    }
}

/// A Boolean function of measurement outcomes in algebraic normal form: the
/// XOR of AND-monomials. An empty monomial is the constant 1; an empty term
/// list is the constant 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Condition {
    terms: Vec<Vec<MeasurementKey>>,
}

impl Condition {
    pub fn never() -> Self {
        Condition { terms: Vec::new() }
    }

    pub fn always() -> Self {
        Condition {
            terms: vec![Vec::new()],
        }
    }

    pub fn from_terms(terms: Vec<Vec<MeasurementKey>>) -> Self {
        let mut c = Condition { terms };
        c.normalize();
        c
    }

    pub fn terms(&self) -> &[Vec<MeasurementKey>] {
        &self.terms
    }

    pub fn is_never(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalize(&mut self) {
        for t in &mut self.terms {
            t.sort();
            t.dedup();
        }
        self.terms.sort();
        // x ⊕ x = 0
        let mut out: Vec<Vec<MeasurementKey>> = Vec::with_capacity(self.terms.len());
        for t in self.terms.drain(..) {
            if out.last() == Some(&t) {
                out.pop();
            } else {
                out.push(t);
            }
        }
        self.terms = out;
    }

    pub fn xor(&self, other: &Condition) -> Condition {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Condition::from_terms(terms)
    }

    pub fn and(&self, other: &Condition) -> Condition {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut t = a.clone();
                t.extend(b.iter().copied());
                terms.push(t);
            }
        }
        Condition::from_terms(terms)
    }

    pub fn not(&self) -> Condition {
        self.xor(&Condition::always())
    }

    /// `if selector { when_one } else { when_zero }`.
    pub fn select(selector: &Condition, when_one: &Condition, when_zero: &Condition) -> Condition {
        when_zero.xor(&selector.and(&when_zero.xor(when_one)))
    }

    pub fn eval(&self, outcomes: &[bool]) -> bool {
        self.terms
            .iter()
            .filter(|t| {
                t.iter()
                    .all(|k| outcomes.get(k.0).copied().unwrap_or(false))
            })
            .count()
            % 2
            == 1
    }

    /// Largest key referenced, if any.
    pub fn max_key(&self) -> Option<MeasurementKey> {
        self.terms.iter().flatten().copied().max()
    }

    /// Parses `m0&m3^m2^1`; `0` is never and `1` is always.
    pub fn parse(text: &str) -> std::result::Result<Condition, String> {
        let mut terms = Vec::new();
        for term in text.split('^') {
            let term = term.trim();
            if term.is_empty() {
                return Err(format!("empty term in condition {text:?}"));
            }
            if term == "0" {
                continue;
            }
            if term == "1" {
                terms.push(Vec::new());
                continue;
            }
            let mut keys = Vec::new();
            for factor in term.split('&') {
                let factor = factor.trim();
                let idx = factor
                    .strip_prefix('m')
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| format!("bad measurement key {factor:?}"))?;
                keys.push(MeasurementKey(idx));
            }
            terms.push(keys);
        }
        Ok(Condition::from_terms(terms))
    }
}

impl From<MeasurementKey> for Condition {
    fn from(k: MeasurementKey) -> Self {
        Condition {
            terms: vec![vec![k]],
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "^")?;
            }
            if t.is_empty() {
                write!(f, "1")?;
            }
            for (j, k) in t.iter().enumerate() {
                if j > 0 {
                    write!(f, "&")?;
                }
                write!(f, "{k}")?;
            }
        }
        Ok(())
    }
}
