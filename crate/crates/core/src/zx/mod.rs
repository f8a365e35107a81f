//! ZX-calculus graphs, including delayed-choice nodes, and their evaluation
//! to linear maps.
//!
//! Conventions:
//! - phases are integers `k` meaning `k·π/4`, reduced mod 8;
//! - a Hadamard edge is a two-legged [`NodeKind::Hadamard`] node;
//! - a port is an open leg on a node; input `k` (the k-th input port in
//!   list order) is bit `k` of the column index, likewise for outputs.

mod eval;
pub mod figures;
mod fixture;
mod pauli;
mod translate;

pub use eval::{evaluate, EvaluatedMap, MAX_INTERMEDIATE_RANK};
pub use fixture::{run_fixture, FixtureCheck, FixtureReport, ZxFixture};
pub use pauli::equiv_mod_pauli_scalar;
pub use translate::{
    branch_to_zx, check_branches_against_zx, sample_patterns, simulated_branch_map, ZxBranchReport,
};

use serde::{Deserialize, Serialize};

use crate::circuit::Basis;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Z,
    X,
    Hadamard,
    /// A pending X-or-Z measurement; must be resolved before evaluation.
    Choice,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Node {
    pub kind: NodeKind,
    /// Multiple of π/4.
    #[serde(default)]
    pub phase: u8,
}

impl Node {
    pub fn z(phase: u8) -> Self {
        Node {
            kind: NodeKind::Z,
            phase: phase % 8,
        }
    }

    pub fn x(phase: u8) -> Self {
        Node {
            kind: NodeKind::X,
            phase: phase % 8,
        }
    }

    pub fn hadamard() -> Self {
        Node {
            kind: NodeKind::Hadamard,
            phase: 0,
        }
    }

    pub fn choice() -> Self {
        Node {
            kind: NodeKind::Choice,
            phase: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Input,
    Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Port {
    pub node: usize,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct ZxGraph {
    nodes: Vec<Node>,
    edges: Vec<(usize, usize)>,
    ports: Vec<Port>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    nodes: Vec<Node>,
    edges: Vec<(usize, usize)>,
    ports: Vec<Port>,
}

impl TryFrom<RawGraph> for ZxGraph {
    type Error = Error;

    fn try_from(raw: RawGraph) -> Result<Self> {
        ZxGraph::new(raw.nodes, raw.edges, raw.ports)
    }
}

impl From<ZxGraph> for RawGraph {
    fn from(g: ZxGraph) -> Self {
        RawGraph {
            nodes: g.nodes,
            edges: g.edges,
            ports: g.ports,
        }
    }
}

impl ZxGraph {
    pub fn new(nodes: Vec<Node>, edges: Vec<(usize, usize)>, ports: Vec<Port>) -> Result<Self> {
        let mut nodes = nodes;
        nodes.iter_mut().for_each(|n| n.phase %= 8);
        let g = ZxGraph {
            nodes,
            edges,
            ports,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn ports(&self) -> &[Port] {
        &self.ports
    }

    pub fn num_inputs(&self) -> usize {
        self.ports_in(Direction::Input).count()
    }

    pub fn num_outputs(&self) -> usize {
        self.ports_in(Direction::Output).count()
    }

    pub(crate) fn ports_in(&self, dir: Direction) -> impl Iterator<Item = (usize, &Port)> {
        self.ports
            .iter()
            .enumerate()
            .filter(move |(_, p)| p.direction == dir)
    }

    /// Number of legs (edge ends plus ports) on `node`.
    pub fn degree(&self, node: usize) -> usize {
        let edge_ends: usize = self
            .edges
            .iter()
            .map(|&(a, b)| usize::from(a == node) + usize::from(b == node))
            .sum();
        edge_ends + self.ports.iter().filter(|p| p.node == node).count()
    }

    pub fn choice_nodes(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].kind == NodeKind::Choice)
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.nodes.len();
        for &(a, b) in &self.edges {
            if a >= n || b >= n {
                return Err(Error::argument(format!(
                    "edge ({a}, {b}) out of range for {n} nodes"
                )));
            }
        }
        for p in &self.ports {
            if p.node >= n {
                return Err(Error::argument(format!("port on missing node {}", p.node)));
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            match node.kind {
                NodeKind::Hadamard if self.degree(i) != 2 => {
                    return Err(Error::argument(format!(
                        "hadamard node {i} has {} legs, expected 2",
                        self.degree(i)
                    )));
                }
                NodeKind::Choice => {
                    let edges = self
                        .edges
                        .iter()
                        .filter(|&&(a, b)| a == i || b == i)
                        .count();
                    let self_loop = self.edges.iter().any(|&(a, b)| a == i && b == i);
                    if edges != 1 || self_loop || self.ports.iter().any(|p| p.node == i) {
                        return Err(Error::argument(format!(
                            "delayed-choice node {i} must have exactly one edge and no ports"
                        )));
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Replaces delayed-choice `node` with a phase-0 spider: X activates the
    /// connection it guards, Z cuts it. Outcome signs are left to the Pauli
    /// frame, so results are meaningful modulo Pauli.
    pub fn resolve_choice(&self, node: usize, basis: Basis) -> Result<ZxGraph> {
        let Some(current) = self.nodes.get(node) else {
            return Err(Error::argument(format!("node {node} out of range")));
        };
        if current.kind != NodeKind::Choice {
            return Err(Error::argument(format!(
                "node {node} is not a delayed-choice node"
            )));
        }
        let mut g = self.clone();
        g.nodes[node] = match basis {
            Basis::X => Node::x(0),
            Basis::Z => Node::z(0),
        };
        Ok(g)
    }

    /// Every spider's color swapped; Hadamard and choice nodes unchanged.
    pub fn color_swapped(&self) -> ZxGraph {
        let mut g = self.clone();
        for n in &mut g.nodes {
            n.kind = match n.kind {
                NodeKind::Z => NodeKind::X,
                NodeKind::X => NodeKind::Z,
                k => k,
            };
        }
        g
    }

    /// Disjoint union; ports of `other` follow those of `self`.
    pub fn disjoint_union(&self, other: &ZxGraph) -> ZxGraph {
        let off = self.nodes.len();
        let mut g = self.clone();
        g.nodes.extend(other.nodes.iter().copied());
        g.edges
            .extend(other.edges.iter().map(|&(a, b)| (a + off, b + off)));
        g.ports.extend(other.ports.iter().map(|p| Port {
            node: p.node + off,
            direction: p.direction,
        }));
        g
    }
}

/// Incremental construction helper.
#[derive(Debug, Clone, Default)]
pub struct ZxBuilder {
    nodes: Vec<Node>,
    edges: Vec<(usize, usize)>,
    ports: Vec<Port>,
}

impl ZxBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, node: Node) -> usize {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn edge(&mut self, a: usize, b: usize) -> &mut Self {
        self.edges.push((a, b));
        self
    }

    /// Joins `a` and `b` through a fresh Hadamard node.
    pub fn hadamard_edge(&mut self, a: usize, b: usize) -> usize {
        let h = self.node(Node::hadamard());
        self.edge(a, h).edge(h, b);
        h
    }

    pub fn input(&mut self, node: usize) -> &mut Self {
        self.ports.push(Port {
            node,
            direction: Direction::Input,
        });
        self
    }

    pub fn output(&mut self, node: usize) -> &mut Self {
        self.ports.push(Port {
            node,
            direction: Direction::Output,
        });
        self
    }

    /// A delayed-choice node hanging off `node`.
    pub fn choice_on(&mut self, node: usize) -> usize {
        let c = self.node(Node::choice());
        self.edge(node, c);
        c
    }

    pub fn build(&self) -> Result<ZxGraph> {
        ZxGraph::new(self.nodes.clone(), self.edges.clone(), self.ports.clone())
    }
}
