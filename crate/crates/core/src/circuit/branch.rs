//! Exhaustive measurement-branch enumeration.
//!
//! Branches are visited depth first with outcome 0 before outcome 1, so the
//! output is in lexicographic order of the recorded outcome bits. Branches
//! whose probability is zero are kept (with `final_state == None`) so that
//! the i-th branch always corresponds to the same outcome pattern.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::frame::PauliFrame;
use super::program::{Basis, Circuit, Op};
use super::state::{amplitudes_equal_up_to_phase, Gate, StateVector};
use crate::error::{Error, Result};

/// Amplitude tolerance for channel comparisons.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;

/// Tolerance on the total probability of an enumeration.
pub const PROBABILITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct BranchOutcome {
    /// Recorded outcomes in measurement order.
    pub outcome_bits: Vec<bool>,
    pub probability: f64,
    /// `None` for zero-probability branches.
    pub final_state: Option<StateVector>,
    pub final_frame: PauliFrame,
    /// Bit q set when qubit q was measured and not touched afterwards.
    pub collapsed: u32,
    /// State of the qubits never measured (or touched again after
    /// measurement), local qubit `i` = physical `live_qubits[i]`. The full
    /// state is this tensored with the measured qubits' basis states.
    pub reduced_state: Option<StateVector>,
    pub live_qubits: Vec<usize>,
}

impl BranchOutcome {
    pub fn is_possible(&self) -> bool {
        self.final_state.is_some()
    }

    pub fn outcome_string(&self) -> String {
        self.outcome_bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect()
    }
}

/// Walk state. Measured qubits are dropped from `state` (which then covers
/// only `live`, local qubit `i` = physical `live[i]`) and remembered in
/// `dead` as their post-measurement basis state, so each level of the tree
/// costs half the one above it.
#[derive(Clone)]
struct Walker {
    state: Option<StateVector>,
    live: Vec<usize>,
    dead: Vec<Option<(Basis, bool)>>,
    frame: PauliFrame,
    outcomes: Vec<bool>,
    probability: f64,
    collapsed: u32,
}

impl Walker {
    fn new(circuit: &Circuit, input: &StateVector) -> Result<Self> {
        let n = circuit.num_qubits();
        Ok(Walker {
            state: Some(circuit.prepare(input)?),
            live: (0..n).collect(),
            dead: vec![None; n],
            frame: PauliFrame::identity(n),
            outcomes: Vec::with_capacity(circuit.num_measurements()),
            probability: 1.0,
            collapsed: 0,
        })
    }

    /// Local index of physical qubit `q`, re-inserting it if it was dropped.
    fn local(&mut self, q: usize) -> Result<usize> {
        if let Some(i) = self.live.iter().position(|&p| p == q) {
            return Ok(i);
        }
        let (basis, value) = self.dead[q].take().expect("qubit is live or dead");
        if let Some(state) = self.state.as_mut() {
            let mut single = StateVector::basis(1, usize::from(value))?;
            if basis == Basis::X {
                single.apply(&Gate::h(0))?;
            }
            *state = state.tensor(&single)?;
        }
        self.live.push(q);
        Ok(self.live.len() - 1)
    }

    /// Full state over all qubits in physical order. Dropped qubits are in
    /// product basis states, so only the nonzero entries are written.
    fn expand(&self) -> Result<Option<StateVector>> {
        let Some(state) = &self.state else {
            return Ok(None);
        };
        let n = self.dead.len();
        let mut terms = vec![(0usize, Complex64::new(1.0, 0.0))];
        for (q, d) in self.dead.iter().enumerate() {
            match d {
                None => {}
                Some((Basis::Z, v)) => terms.iter_mut().for_each(|t| t.0 |= usize::from(*v) << q),
                Some((Basis::X, v)) => {
                    let sign = if *v { -FRAC_1_SQRT_2 } else { FRAC_1_SQRT_2 };
                    terms = terms
                        .into_iter()
                        .flat_map(|(idx, f)| [(idx, f * FRAC_1_SQRT_2), (idx | 1 << q, f * sign)])
                        .collect();
                }
            }
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (l, a) in state.amplitudes().iter().enumerate() {
            if *a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let base = self
                .live
                .iter()
                .enumerate()
                .fold(0usize, |acc, (i, &q)| acc | (l >> i & 1) << q);
            for (idx, f) in &terms {
                amps[base | idx] = a * f;
            }
        }
        StateVector::from_amplitudes(amps).map(Some)
    }
}

/// Runs `circuit` on `input` (over its data qubits) and returns every branch.
pub fn enumerate_branches(circuit: &Circuit, input: &StateVector) -> Result<Vec<BranchOutcome>> {
    let walker = Walker::new(circuit, input)?;
    let mut out = Vec::with_capacity(1 << circuit.num_measurements());
    walk(circuit, 0, walker, None, &mut out)?;
    Ok(out)
}

/// Follows a single outcome pattern without renormalizing, returning the
/// unnormalized post-selected state and the frame. Used to extract the
/// Kraus operator of one branch.
pub fn run_postselected(
    circuit: &Circuit,
    input: &StateVector,
    outcomes: &[bool],
) -> Result<(Vec<Complex64>, PauliFrame)> {
    let branch = forced_branch(circuit, input, outcomes)?;
    let scale = branch.probability.sqrt();
    let amps = match branch.final_state {
        Some(s) => s.amplitudes().iter().map(|a| a * scale).collect(),
        None => vec![Complex64::new(0.0, 0.0); 1 << circuit.num_qubits()],
    };
    Ok((amps, branch.final_frame))
}

/// Like [`run_postselected`] but returns only the unmeasured qubits:
/// unnormalized amplitudes with local qubit `i` = physical `live[i]`.
/// `None` when the outcome pattern is impossible for `input`.
pub fn run_postselected_reduced(
    circuit: &Circuit,
    input: &StateVector,
    outcomes: &[bool],
) -> Result<Option<(Vec<Complex64>, Vec<usize>)>> {
    let branch = forced_branch(circuit, input, outcomes)?;
    let scale = branch.probability.sqrt();
    Ok(branch.reduced_state.map(|s| {
        (
            s.amplitudes().iter().map(|a| a * scale).collect(),
            branch.live_qubits,
        )
    }))
}

fn forced_branch(
    circuit: &Circuit,
    input: &StateVector,
    outcomes: &[bool],
) -> Result<BranchOutcome> {
    if outcomes.len() != circuit.num_measurements() {
        return Err(Error::argument(format!(
            "expected {} outcomes, got {}",
            circuit.num_measurements(),
            outcomes.len()
        )));
    }
    let walker = Walker::new(circuit, input)?;
    let mut out = Vec::with_capacity(1);
    walk(circuit, 0, walker, Some(outcomes), &mut out)?;
    Ok(out.pop().expect("forced walk yields one branch"))
}

fn walk(
    circuit: &Circuit,
    start: usize,
    mut w: Walker,
    forced: Option<&[bool]>,
    out: &mut Vec<BranchOutcome>,
) -> Result<()> {
    let ops = circuit.ops();
    for (pc, op) in ops.iter().enumerate().skip(start) {
        match op {
            Op::Gate { gate, control } => {
                if control.as_ref().is_none_or(|c| c.eval(&w.outcomes)) {
                    apply_tracked(&mut w, gate)?;
                }
            }
            Op::Frame {
                pauli,
                qubit,
                condition,
            } => {
                if condition.eval(&w.outcomes) {
                    w.frame.toggle(*pauli, *qubit);
                }
            }
            Op::Measure {
                qubit,
                basis,
                flip_basis_if,
            } => {
                let q = *qubit;
                let basis = if flip_basis_if.eval(&w.outcomes) {
                    basis.other()
                } else {
                    *basis
                };
                // A frame component anticommuting with the measured
                // observable flips the recorded outcome.
                let flip = match basis {
                    Basis::Z => w.frame.x(q),
                    Basis::X => w.frame.z(q),
                };
                let local = w.local(q)?;
                if basis == Basis::X {
                    if let Some(state) = w.state.as_mut() {
                        state.apply(&Gate::h(local))?;
                    }
                }
                let choices: &[bool] = match forced {
                    Some(f) if f[w.outcomes.len()] => &[true],
                    Some(_) => &[false],
                    None => &[false, true],
                };
                let parent = w.state.take();
                w.live.remove(local);
                for &recorded in choices {
                    let raw = recorded ^ flip;
                    let mut child = w.clone();
                    match parent.as_ref().and_then(|s| s.measure_out(local, raw)) {
                        Some((reduced, p)) => {
                            child.state = Some(reduced);
                            child.probability *= p;
                        }
                        None => child.probability = 0.0,
                    }
                    child.dead[q] = Some((basis, raw));
                    child.outcomes.push(recorded);
                    child.collapsed |= 1 << q;
                    walk(circuit, pc + 1, child, forced, out)?;
                }
                return Ok(());
            }
        }
    }
    out.push(BranchOutcome {
        final_state: w.expand()?,
        outcome_bits: w.outcomes,
        probability: w.probability,
        final_frame: w.frame,
        collapsed: w.collapsed,
        reduced_state: w.state,
        live_qubits: w.live,
    });
    Ok(())
}

fn apply_tracked(w: &mut Walker, gate: &Gate) -> Result<()> {
    gate.validate(w.frame.num_qubits())?;
    let local: Vec<usize> = gate
        .targets
        .iter()
        .map(|&q| w.local(q))
        .collect::<Result<_>>()?;
    if let Some(state) = w.state.as_mut() {
        state.apply(&Gate::new(gate.kind, &local))?;
    }
    w.frame.conjugate_through(gate)?;
    for &q in &gate.targets {
        w.collapsed &= !(1 << q);
    }
    Ok(())
}

/// Sum of branch probabilities.
pub fn total_probability(branches: &[BranchOutcome]) -> f64 {
    branches.iter().map(|b| b.probability).sum()
}

/// Restriction of a product state onto `data_qubits`, or `None` when the
/// state is entangled across the data/ancilla cut.
pub fn restrict_to(state: &StateVector, data_qubits: &[usize]) -> Option<Vec<Complex64>> {
    let n = state.num_qubits();
    let amps = state.amplitudes();
    let data_mask: usize = data_qubits.iter().map(|&q| 1usize << q).sum();
    let (best, _) = amps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
    let anc_pattern = best & !data_mask;
    let embed = |local: usize| -> usize {
        data_qubits
            .iter()
            .enumerate()
            .fold(anc_pattern, |acc, (i, &q)| acc | ((local >> i & 1) << q))
    };
    let mut slice: Vec<Complex64> = (0..1usize << data_qubits.len())
        .map(|l| amps[embed(l)])
        .collect();
    let weight: f64 = slice.iter().map(|a| a.norm_sqr()).sum();
    if weight == 0.0 {
        return None;
    }
    let norm = weight.sqrt();
    slice.iter_mut().for_each(|a| *a /= norm);
    // Everything outside this ancilla pattern is below tolerance.
    let total: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if (total - weight).max(0.0).sqrt() <= AMPLITUDE_TOLERANCE * total.sqrt() {
        return Some(slice);
    }
    // Check the state factors as slice ⊗ φ.
    let anc_dim = 1usize << n;
    let mut residual = 0.0;
    for idx in 0..anc_dim {
        if idx & data_mask != 0 {
            continue;
        }
        let phi: Complex64 = (0..slice.len())
            .map(|l| {
                let full = data_qubits
                    .iter()
                    .enumerate()
                    .fold(idx, |acc, (i, &q)| acc | ((l >> i & 1) << q));
                slice[l].conj() * amps[full]
            })
            .sum();
        for (l, s) in slice.iter().enumerate() {
            let full = data_qubits
                .iter()
                .enumerate()
                .fold(idx, |acc, (i, &q)| acc | ((l >> i & 1) << q));
            residual += (amps[full] - s * phi).norm_sqr();
        }
    }
    (residual.sqrt() <= AMPLITUDE_TOLERANCE).then_some(slice)
}

/// True iff every possible branch, after applying its frame, leaves the data
/// qubits in `target · input` up to global phase. `target` acts on
/// input-local qubit indices; `data_qubits[i]` is where input qubit `i` ends.
pub fn channel_equals_unitary_mod_frame(
    branches: &[BranchOutcome],
    input: &StateVector,
    target: &[Gate],
    data_qubits: &[usize],
) -> Result<bool> {
    let mut expected = input.clone();
    for g in target {
        expected.apply(g)?;
    }
    if data_qubits.len() != input.num_qubits() {
        return Err(Error::argument(format!(
            "{} data qubits for a {}-qubit input",
            data_qubits.len(),
            input.num_qubits()
        )));
    }
    let data_mask: u32 = data_qubits.iter().map(|&q| 1u32 << q).sum();
    for branch in branches {
        let Some(state) = &branch.final_state else {
            continue;
        };
        let n = state.num_qubits();
        let ancilla_mask = ((1u64 << n) - 1) as u32 & !data_mask;
        if branch.collapsed & ancilla_mask != ancilla_mask {
            let missing: Vec<usize> = (0..n)
                .filter(|&q| ancilla_mask >> q & 1 == 1 && branch.collapsed >> q & 1 == 0)
                .collect();
            return Err(Error::contract(format!(
                "branch {} leaves non-data qubits {missing:?} unmeasured",
                branch.outcome_string()
            )));
        }
        // The frame is a tensor product, so only its data part matters once
        // the state factors.
        let mut local = match (
            &branch.reduced_state,
            same_set(&branch.live_qubits, data_qubits),
        ) {
            (Some(reduced), Some(position)) => reduced.permuted(&position)?,
            _ => {
                let Some(restricted) = restrict_to(state, data_qubits) else {
                    return Ok(false);
                };
                StateVector::from_amplitudes(restricted)?
            }
        };
        data_frame(&branch.final_frame, data_qubits).apply_to(&mut local)?;
        if !amplitudes_equal_up_to_phase(
            local.amplitudes(),
            expected.amplitudes(),
            AMPLITUDE_TOLERANCE,
        ) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `position[i]` = index of `live[i]` in `data`, when both hold the same qubits.
fn same_set(live: &[usize], data: &[usize]) -> Option<Vec<usize>> {
    if live.len() != data.len() {
        return None;
    }
    live.iter()
        .map(|q| data.iter().position(|d| d == q))
        .collect()
}

fn data_frame(frame: &PauliFrame, data_qubits: &[usize]) -> PauliFrame {
    let (mut x, mut z) = (0u32, 0u32);
    for (i, &q) in data_qubits.iter().enumerate() {
        x |= u32::from(frame.x(q)) << i;
        z |= u32::from(frame.z(q)) << i;
    }
    PauliFrame::from_bits(data_qubits.len(), x, z)
}
