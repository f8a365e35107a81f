use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Direction, NodeKind, ZxGraph};
use crate::circuit::{Gate, StateVector};
use crate::error::{Error, Result};

/// Largest tensor rank allowed during contraction (2^24 amplitudes).
pub const MAX_INTERMEDIATE_RANK: usize = 24;

/// Dense matrix of shape `2^outputs × 2^inputs`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedMap {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub data: Vec<Complex64>,
}

impl EvaluatedMap {
    pub fn zeros(num_inputs: usize, num_outputs: usize) -> Self {
        EvaluatedMap {
            num_inputs,
            num_outputs,
            data: vec![Complex64::new(0.0, 0.0); 1 << (num_inputs + num_outputs)],
        }
    }

    pub fn rows(&self) -> usize {
        1 << self.num_outputs
    }

    pub fn cols(&self) -> usize {
        1 << self.num_inputs
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Complex64) {
        let cols = self.cols();
        self.data[row * cols + col] = v;
    }

    pub fn identity(n: usize) -> Self {
        Self::from_gates(n, &[]).expect("identity is always valid")
    }

    /// Unitary of a gate sequence on `n` qubits.
    pub fn from_gates(n: usize, gates: &[Gate]) -> Result<Self> {
        let mut m = Self::zeros(n, n);
        for col in 0..1usize << n {
            let mut s = StateVector::basis(n, col)?;
            for g in gates {
                s.apply(g)?;
            }
            for (row, a) in s.amplitudes().iter().enumerate() {
                m.set(row, col, *a);
            }
        }
        Ok(m)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|a| a.norm() <= tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
struct Tensor {
    /// Leg labels; bit `j` of a data index is the value on `labels[j]`.
    labels: Vec<usize>,
    data: Vec<Complex64>,
}

fn phase(k: u8) -> Complex64 {
    Complex64::from_polar(1.0, f64::from(k) * PI / 4.0)
}

fn node_tensor(kind: NodeKind, phase_k: u8, labels: Vec<usize>) -> Result<Tensor> {
    let n = labels.len();
    if n > MAX_INTERMEDIATE_RANK {
        return Err(Error::capacity(format!("node with {n} legs")));
    }
    let dim = 1usize << n;
    let e = phase(phase_k);
    let data = match kind {
        NodeKind::Z => {
            let mut d = vec![Complex64::new(0.0, 0.0); dim];
            d[0] += 1.0;
            d[dim - 1] += e;
            d
        }
        NodeKind::X => {
            let scale = 0.5f64.powf(n as f64 / 2.0);
            (0..dim)
                .map(|i| {
                    let sign = if i.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    (Complex64::new(1.0, 0.0) + e * sign) * scale
                })
                .collect()
        }
        NodeKind::Hadamard => {
            let h = FRAC_1_SQRT_2;
            vec![h, h, h, -h]
                .into_iter()
                .map(|v| Complex64::new(v, 0.0))
                .collect()
        }
        NodeKind::Choice => unreachable!("checked by caller"),
    };
    trace_repeated(Tensor { labels, data })
}

/// Sums over pairs of legs that carry the same label (self-loops).
fn trace_repeated(mut t: Tensor) -> Result<Tensor> {
    loop {
        let dup = (0..t.labels.len()).find_map(|i| {
            (i + 1..t.labels.len())
                .find(|&j| t.labels[j] == t.labels[i])
                .map(|j| (i, j))
        });
        let Some((i, j)) = dup else {
            return Ok(t);
        };
        let keep: Vec<usize> = (0..t.labels.len()).filter(|&k| k != i && k != j).collect();
        let mut data = vec![Complex64::new(0.0, 0.0); 1 << keep.len()];
        for (idx, a) in t.data.iter().enumerate() {
            if (idx >> i & 1) != (idx >> j & 1) {
                continue;
            }
            let r = keep
                .iter()
                .enumerate()
                .fold(0usize, |acc, (pos, &k)| acc | (idx >> k & 1) << pos);
            data[r] += a;
        }
        t = Tensor {
            labels: keep.iter().map(|&k| t.labels[k]).collect(),
            data,
        };
    }
}

fn contract(a: &Tensor, b: &Tensor) -> Result<Tensor> {
    let shared: Vec<usize> = a
        .labels
        .iter()
        .copied()
        .filter(|l| b.labels.contains(l))
        .collect();
    let a_free: Vec<usize> = (0..a.labels.len())
        .filter(|&i| !shared.contains(&a.labels[i]))
        .collect();
    let b_free: Vec<usize> = (0..b.labels.len())
        .filter(|&i| !shared.contains(&b.labels[i]))
        .collect();
    let rank = a_free.len() + b_free.len();
    if rank > MAX_INTERMEDIATE_RANK {
        return Err(Error::capacity(format!(
            "contraction would create a rank-{rank} tensor (limit {MAX_INTERMEDIATE_RANK})"
        )));
    }
    let a_shared: Vec<usize> = shared
        .iter()
        .map(|l| a.labels.iter().position(|x| x == l).unwrap())
        .collect();
    let b_shared: Vec<usize> = shared
        .iter()
        .map(|l| b.labels.iter().position(|x| x == l).unwrap())
        .collect();
    let scatter = |value: usize, positions: &[usize]| {
        positions
            .iter()
            .enumerate()
            .fold(0usize, |acc, (bit, &p)| acc | (value >> bit & 1) << p)
    };
    let mut data = vec![Complex64::new(0.0, 0.0); 1 << rank];
    for (r, out) in data.iter_mut().enumerate() {
        let ra = scatter(r, &a_free);
        let rb = scatter(r >> a_free.len(), &b_free);
        let mut acc = Complex64::new(0.0, 0.0);
        for s in 0..1usize << shared.len() {
            acc += a.data[ra | scatter(s, &a_shared)] * b.data[rb | scatter(s, &b_shared)];
        }
        *out = acc;
    }
    let labels = a_free
        .iter()
        .map(|&i| a.labels[i])
        .chain(b_free.iter().map(|&i| b.labels[i]))
        .collect();
    Ok(Tensor { labels, data })
}

/// Contracts the spider network into a matrix.
pub fn evaluate(graph: &ZxGraph) -> Result<EvaluatedMap> {
    if let Some(c) = graph.choice_nodes().first() {
        return Err(Error::contract(format!(
            "delayed-choice node {c} must be resolved before evaluation"
        )));
    }
    let num_edges = graph.edges().len();
    let mut tensors = Vec::with_capacity(graph.nodes().len());
    for (i, node) in graph.nodes().iter().enumerate() {
        let mut labels = Vec::new();
        for (e, &(a, b)) in graph.edges().iter().enumerate() {
            if a == i {
                labels.push(e);
            }
            if b == i {
                labels.push(e);
            }
        }
        for (p, port) in graph.ports().iter().enumerate() {
            if port.node == i {
                labels.push(num_edges + p);
            }
        }
        tensors.push(node_tensor(node.kind, node.phase, labels)?);
    }
    let mut result = Tensor {
        labels: Vec::new(),
        data: vec![Complex64::new(1.0, 0.0)],
    };
    while !tensors.is_empty() {
        // Greedy: the connected pair with the smallest result, else fold the
        // smallest remaining tensor into the accumulated disconnected part.
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..tensors.len() {
            for j in i + 1..tensors.len() {
                let shared = tensors[i]
                    .labels
                    .iter()
                    .filter(|l| tensors[j].labels.contains(l))
                    .count();
                if shared == 0 {
                    continue;
                }
                let rank = tensors[i].labels.len() + tensors[j].labels.len() - 2 * shared;
                if best.is_none_or(|(r, _, _)| rank < r) {
                    best = Some((rank, i, j));
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                let b = tensors.swap_remove(j);
                let a = tensors.swap_remove(i);
                tensors.push(contract(&a, &b)?);
            }
            None => {
                let (k, _) = tensors
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, t)| t.labels.len())
                    .expect("non-empty");
                let t = tensors.swap_remove(k);
                result = contract(&result, &t)?;
            }
        }
    }
    to_matrix(graph, &result, num_edges)
}

fn to_matrix(graph: &ZxGraph, t: &Tensor, num_edges: usize) -> Result<EvaluatedMap> {
    let position = |port: usize| {
        t.labels
            .iter()
            .position(|&l| l == num_edges + port)
            .expect("every port survives contraction")
    };
    let inputs: Vec<usize> = graph
        .ports_in(Direction::Input)
        .map(|(p, _)| position(p))
        .collect();
    let outputs: Vec<usize> = graph
        .ports_in(Direction::Output)
        .map(|(p, _)| position(p))
        .collect();
    let mut m = EvaluatedMap::zeros(inputs.len(), outputs.len());
    for row in 0..m.rows() {
        for col in 0..m.cols() {
            let mut idx = 0usize;
            for (bit, &pos) in outputs.iter().enumerate() {
                idx |= (row >> bit & 1) << pos;
            }
            for (bit, &pos) in inputs.iter().enumerate() {
                idx |= (col >> bit & 1) << pos;
            }
            m.set(row, col, t.data[idx]);
        }
    }
    Ok(m)
}
