use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register the dense engine accepts.
pub const MAX_QUBITS: usize = 16;

/// Tolerance on `|‖ψ‖² − 1|` after every operation.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// The gate set understood by the engine. `Ccx` is the Toffoli gate; it is
/// included so classical circuits can be written directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    Z,
    H,
    S,
    Cx,
    Cz,
    Swap,
    Ccz,
    Ccx,
}

impl GateKind {
    pub const ALL: [GateKind; 9] = [
        GateKind::X,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::Ccz,
        GateKind::Ccx,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::Z | GateKind::H | GateKind::S => 1,
            GateKind::Cx | GateKind::Cz | GateKind::Swap => 2,
            GateKind::Ccz | GateKind::Ccx => 3,
        }
    }

    pub fn is_clifford(self) -> bool {
        !matches!(self, GateKind::Ccz | GateKind::Ccx)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::Z => "Z",
            GateKind::H => "H",
            GateKind::S => "S",
            GateKind::Cx => "CX",
            GateKind::Cz => "CZ",
            GateKind::Swap => "SWAP",
            GateKind::Ccz => "CCZ",
            GateKind::Ccx => "CCX",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        let upper = name.to_ascii_uppercase();
        let kind = match upper.as_str() {
            "X" => GateKind::X,
            "Z" => GateKind::Z,
            "H" => GateKind::H,
            "S" => GateKind::S,
            "CX" | "CNOT" => GateKind::Cx,
            "CZ" => GateKind::Cz,
            "SWAP" => GateKind::Swap,
            "CCZ" => GateKind::Ccz,
            "CCX" | "TOFFOLI" => GateKind::Ccx,
            _ => return None,
        };
        Some(kind)
    }
}

/// A gate bound to its target qubits. For controlled gates the controls come
/// first and the target last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Self {
        Gate {
            kind,
            targets: targets.to_vec(),
        }
    }

    pub fn x(q: usize) -> Self {
        Gate::new(GateKind::X, &[q])
    }
    pub fn z(q: usize) -> Self {
        Gate::new(GateKind::Z, &[q])
    }
    pub fn h(q: usize) -> Self {
        Gate::new(GateKind::H, &[q])
    }
    pub fn s(q: usize) -> Self {
        Gate::new(GateKind::S, &[q])
    }
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cx, &[control, target])
    }
    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, &[a, b])
    }
    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, &[a, b])
    }
    pub fn ccz(a: usize, b: usize, c: usize) -> Self {
        Gate::new(GateKind::Ccz, &[a, b, c])
    }
    pub fn ccx(a: usize, b: usize, target: usize) -> Self {
        Gate::new(GateKind::Ccx, &[a, b, target])
    }

    /// Checks arity, range and distinctness against a register of `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::argument(format!(
                "{} takes {} target(s), got {}",
                self.kind.name(),
                self.kind.arity(),
                self.targets.len()
            )));
        }
        for (i, &q) in self.targets.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::argument(format!(
                    "{} target {q} out of range for {num_qubits} qubits",
                    self.kind.name()
                )));
            }
            if self.targets[..i].contains(&q) {
                return Err(Error::argument(format!(
                    "{} has duplicate target {q}",
                    self.kind.name()
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for q in &self.targets {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Gate {
    type Err = Error;

    /// Parses the [`fmt::Display`] form, e.g. `CZ 0 1`.
    fn from_str(s: &str) -> Result<Gate> {
        let mut words = s.split_whitespace();
        let name = words.next().unwrap_or("");
        let kind = GateKind::from_name(name)
            .ok_or_else(|| Error::argument(format!("unknown gate {name:?}")))?;
        let targets = words
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Error::argument(format!("bad qubit index {w:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if targets.len() != kind.arity() {
            return Err(Error::argument(format!(
                "{} takes {} qubits, got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        Ok(Gate { kind, targets })
    }
}

/// Dense state of up to [`MAX_QUBITS`] qubits. Qubit `q` is bit `q` of the
/// amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    fn check_size(num_qubits: usize) -> Result<()> {
        if num_qubits > MAX_QUBITS {
            return Err(Error::capacity(format!(
                "{num_qubits} qubits exceeds the {MAX_QUBITS}-qubit guardrail"
            )));
        }
        Ok(())
    }

    /// The all-zero basis state.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        Self::check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::argument(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            num_qubits,
            amplitudes,
        })
    }

    /// Basis state from a bit string, leftmost character = qubit 0.
    pub fn from_bits(bits: &str) -> Result<Self> {
        Self::basis(bits.len(), parse_bits(bits)?)
    }

    /// Normalizes the given amplitudes. The length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::argument(format!(
                "amplitude count {dim} is not a power of two"
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        Self::check_size(num_qubits)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::argument("amplitudes have zero or non-finite norm"));
        }
        Ok(StateVector {
            num_qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Haar-ish random state: i.i.d. Gaussian amplitudes, normalized.
    pub fn random<R: Rng + ?Sized>(num_qubits: usize, rng: &mut R) -> Result<Self> {
        Self::check_size(num_qubits)?;
        let dim = 1usize << num_qubits;
        let amps = (0..dim)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        Self::from_amplitudes(amps)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `self ⊗ high`: `self` occupies the low qubits.
    pub fn tensor(&self, high: &StateVector) -> Result<StateVector> {
        Self::check_size(self.num_qubits + high.num_qubits)?;
        let mut amplitudes = Vec::with_capacity(self.amplitudes.len() * high.amplitudes.len());
        for h in &high.amplitudes {
            for l in &self.amplitudes {
                amplitudes.push(l * h);
            }
        }
        Ok(StateVector {
            num_qubits: self.num_qubits + high.num_qubits,
            amplitudes,
        })
    }

    /// Applies `gate` in place.
    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let t = &gate.targets;
        match gate.kind {
            GateKind::X => self.apply_x(t[0]),
            GateKind::Z => self.apply_phase_mask(1 << t[0]),
            GateKind::H => self.apply_h(t[0]),
            GateKind::S => {
                let bit = 1 << t[0];
                let i = Complex64::new(0.0, 1.0);
                for (idx, a) in self.amplitudes.iter_mut().enumerate() {
                    if idx & bit != 0 {
                        *a *= i;
                    }
                }
            }
            GateKind::Cx => self.apply_controlled_x(1 << t[0], t[1]),
            GateKind::Cz => self.apply_phase_mask((1 << t[0]) | (1 << t[1])),
            GateKind::Swap => {
                let (a, b) = (1usize << t[0], 1usize << t[1]);
                for idx in 0..self.amplitudes.len() {
                    if idx & a != 0 && idx & b == 0 {
                        self.amplitudes.swap(idx, idx ^ a ^ b);
                    }
                }
            }
            GateKind::Ccz => self.apply_phase_mask((1 << t[0]) | (1 << t[1]) | (1 << t[2])),
            GateKind::Ccx => self.apply_controlled_x((1 << t[0]) | (1 << t[1]), t[2]),
        }
        Ok(())
    }

    fn apply_x(&mut self, q: usize) {
        let bit = 1 << q;
        for idx in 0..self.amplitudes.len() {
            if idx & bit == 0 {
                self.amplitudes.swap(idx, idx | bit);
            }
        }
    }

    fn apply_h(&mut self, q: usize) {
        let bit = 1 << q;
        for idx in 0..self.amplitudes.len() {
            if idx & bit == 0 {
                let a = self.amplitudes[idx];
                let b = self.amplitudes[idx | bit];
                self.amplitudes[idx] = (a + b) * FRAC_1_SQRT_2;
                self.amplitudes[idx | bit] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }

    /// Negates every amplitude whose index has all bits of `mask` set.
    fn apply_phase_mask(&mut self, mask: usize) {
        for (idx, a) in self.amplitudes.iter_mut().enumerate() {
            if idx & mask == mask {
                *a = -*a;
            }
        }
    }

    fn apply_controlled_x(&mut self, controls: usize, target: usize) {
        let bit = 1 << target;
        for idx in 0..self.amplitudes.len() {
            if idx & controls == controls && idx & bit == 0 {
                self.amplitudes.swap(idx, idx | bit);
            }
        }
    }

    /// Relabels qubits: qubit `i` of `self` becomes qubit `position[i]`.
    pub fn permuted(&self, position: &[usize]) -> Result<StateVector> {
        let n = self.num_qubits;
        let mut seen = 0usize;
        for &p in position {
            if p >= n || seen >> p & 1 == 1 {
                return Err(Error::argument(format!(
                    "{position:?} is not a permutation"
                )));
            }
            seen |= 1 << p;
        }
        if position.len() != n {
            return Err(Error::argument(format!(
                "{position:?} is not a permutation"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (idx, a) in self.amplitudes.iter().enumerate() {
            let mut phys = 0usize;
            for (i, &p) in position.iter().enumerate() {
                phys |= (idx >> i & 1) << p;
            }
            amplitudes[phys] = *a;
        }
        Ok(StateVector {
            num_qubits: n,
            amplitudes,
        })
    }

    /// Measures `qubit` in Z with outcome `value` and drops it; higher
    /// qubits shift down by one. Returns `None` for an impossible outcome.
    pub fn measure_out(&self, qubit: usize, value: bool) -> Option<(StateVector, f64)> {
        let low = (1usize << qubit) - 1;
        let half = self.amplitudes.len() >> 1;
        let bit = usize::from(value) << qubit;
        let kept: Vec<Complex64> = (0..half)
            .map(|j| self.amplitudes[(j & low) | ((j & !low) << 1) | bit])
            .collect();
        let p: f64 = kept.iter().map(|a| a.norm_sqr()).sum();
        if p <= ZERO_PROBABILITY {
            return None;
        }
        let scale = 1.0 / p.sqrt();
        Some((
            StateVector {
                num_qubits: self.num_qubits - 1,
                amplitudes: kept.into_iter().map(|a| a * scale).collect(),
            },
            p,
        ))
    }

    /// Probability that measuring `qubit` in the Z basis yields 1.
    pub fn probability_one(&self, qubit: usize) -> f64 {
        let bit = 1 << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects `qubit` onto `|value⟩` and renormalizes. Returns the
    /// probability of that outcome; the state is left untouched when it is 0.
    pub fn project(&mut self, qubit: usize, value: bool) -> f64 {
        let bit = 1 << qubit;
        let p1 = self.probability_one(qubit);
        let p = if value { p1 } else { 1.0 - p1 };
        if p <= ZERO_PROBABILITY {
            return 0.0;
        }
        let scale = 1.0 / p.sqrt();
        for (idx, a) in self.amplitudes.iter_mut().enumerate() {
            if (idx & bit != 0) == value {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        p
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// True when both states agree up to a global phase, amplitude by
    /// amplitude within `tol`. The phase is aligned on the largest amplitude
    /// of `other`.
    pub fn equals_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.num_qubits == other.num_qubits
            && amplitudes_equal_up_to_phase(&self.amplitudes, &other.amplitudes, tol)
    }
}

/// Branch probabilities below this are treated as exactly zero.
pub const ZERO_PROBABILITY: f64 = 1e-12;

pub(crate) fn amplitudes_equal_up_to_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some((k, _)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
    else {
        return true;
    };
    if a[k].norm() < tol {
        return b[k].norm() < tol && a.iter().all(|x| x.norm() < tol);
    }
    let phase = b[k] / a[k];
    let phase = phase / phase.norm();
    a.iter().zip(b).all(|(x, y)| (x * phase - y).norm() <= tol)
}

/// Parses a bit string, leftmost character = bit 0.
pub fn parse_bits(bits: &str) -> Result<usize> {
    if bits.len() > usize::BITS as usize - 1 {
        return Err(Error::argument("bit string too long"));
    }
    bits.chars()
        .enumerate()
        .try_fold(0usize, |acc, (i, c)| match c {
            '0' => Ok(acc),
            '1' => Ok(acc | (1 << i)),
            other => Err(Error::argument(format!("invalid bit character {other:?}"))),
        })
}

/// Formats the low `len` bits of `value`, bit 0 leftmost.
pub fn format_bits(value: usize, len: usize) -> String {
    (0..len)
        .map(|i| if value >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box-Muller; u1 is kept away from 0.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Applies `gate` to a copy of `state`.
pub fn apply_gate(state: &StateVector, gate: &Gate) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn assert_norm(state: &StateVector) {
        assert!((state.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
    }

    #[test]
    fn z_fixes_zero() {
        let s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::z(0)).unwrap();
        assert_eq!(s, StateVector::zero(1).unwrap());
    }

    #[test]
    fn ccz_negates_all_ones() {
        let s = StateVector::from_bits("111").unwrap();
        let out = apply_gate(&s, &Gate::ccz(0, 1, 2)).unwrap();
        assert!((out.amplitudes()[7] + Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hadamard_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = StateVector::random(3, &mut rng).unwrap();
        let out = apply_gate(&apply_gate(&s, &Gate::h(1)).unwrap(), &Gate::h(1)).unwrap();
        for (a, b) in s.amplitudes().iter().zip(out.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn bad_targets_are_rejected() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(
            apply_gate(&s, &Gate::x(2)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            apply_gate(&s, &Gate::cx(1, 1)),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            apply_gate(&s, &Gate::new(GateKind::Cz, &[0])),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn guardrail() {
        assert!(matches!(StateVector::zero(17), Err(Error::Capacity(_))));
        assert!(StateVector::zero(16).is_ok());
    }

    #[test]
    fn cx_on_bits() {
        let s = StateVector::from_bits("10").unwrap();
        let out = apply_gate(&s, &Gate::cx(0, 1)).unwrap();
        assert_eq!(out, StateVector::from_bits("11").unwrap());
    }

    #[test]
    fn every_gate_preserves_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut s = StateVector::random(4, &mut rng).unwrap();
        for kind in GateKind::ALL {
            let targets: Vec<usize> = (0..kind.arity()).map(|i| (i * 3 + 1) % 4).collect();
            s.apply(&Gate::new(kind, &targets)).unwrap();
            assert_norm(&s);
        }
    }

    #[test]
    fn projection_probabilities() {
        let mut s = apply_gate(&StateVector::zero(1).unwrap(), &Gate::h(0)).unwrap();
        assert!((s.probability_one(0) - 0.5).abs() < 1e-15);
        let p = s.project(0, true);
        assert!((p - 0.5).abs() < 1e-15);
        assert_eq!(s, StateVector::from_bits("1").unwrap());
        assert_eq!(s.clone().project(0, false), 0.0);
    }

    #[test]
    fn bit_strings_round_trip() {
        assert_eq!(parse_bits("0110").unwrap(), 0b0110);
        assert_eq!(format_bits(0b0110, 4), "0110");
        assert_eq!(format_bits(parse_bits("1000").unwrap(), 4), "1000");
        assert!(parse_bits("012").is_err());
    }
}
