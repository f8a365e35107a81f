//! Hand-encoded graphs for the two delayed-choice CZ constructions.

use super::{FixtureCheck, Node, ZxBuilder, ZxFixture, ZxGraph};
use crate::circuit::Basis;
use crate::constructions::CzChoice;
use crate::error::{Error, Result};

/// A graph with its delayed-choice nodes in a fixed, documented order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceGraph {
    pub graph: ZxGraph,
    pub choices: Vec<usize>,
}

impl ChoiceGraph {
    /// Resolves `choices[i]` with `bases[i]`.
    pub fn resolve(&self, bases: &[Basis]) -> Result<ZxGraph> {
        if bases.len() != self.choices.len() {
            return Err(Error::argument(format!(
                "expected {} bases, got {}",
                self.choices.len(),
                bases.len()
            )));
        }
        self.choices
            .iter()
            .zip(bases)
            .try_fold(self.graph.clone(), |g, (&c, &b)| g.resolve_choice(c, b))
    }
}

/// Two data wires joined by `X -H- X`, each X spider guarded by a choice
/// node. Choices: `[near wire 0, near wire 1]`. Both X gives CZ, both Z cuts
/// the link and gives the identity. Mixed choices project one wire.
pub fn delayed_choice_cz_graph() -> ChoiceGraph {
    let mut b = ZxBuilder::new();
    let a = b.node(Node::z(0));
    b.input(a).output(a);
    let c = b.node(Node::z(0));
    b.input(c).output(c);
    let xa = b.node(Node::x(0));
    let xc = b.node(Node::x(0));
    b.edge(a, xa).edge(c, xc);
    b.hadamard_edge(xa, xc);
    let choices = vec![b.choice_on(xa), b.choice_on(xc)];
    ChoiceGraph {
        graph: b.build().expect("well-formed"),
        choices,
    }
}

/// Multiplex/demultiplex form: each data wire splits into two routes that
/// rejoin. Route 0 passes a Z spider that carries the CZ link, route 1 is a
/// bare wire. Every route end is an X spider with a choice node.
///
/// Choices, per data wire `d` in order: `[route0 in, route0 out, route1 in,
/// route1 out]`. The same graph serves both directions.
pub fn multiplexer_cz_graph() -> ChoiceGraph {
    let mut b = ZxBuilder::new();
    let mut choices = Vec::with_capacity(8);
    let mut link = Vec::with_capacity(2);
    for _ in 0..2 {
        let zin = b.node(Node::z(0));
        let zout = b.node(Node::z(0));
        b.input(zin);
        b.output(zout);
        let route0 = [b.node(Node::x(0)), b.node(Node::x(0))];
        let mid = b.node(Node::z(0));
        b.edge(zin, route0[0]).edge(route0[0], mid);
        b.edge(mid, route0[1]).edge(route0[1], zout);
        let route1 = [b.node(Node::x(0)), b.node(Node::x(0))];
        b.edge(zin, route1[0]).edge(route1[0], route1[1]);
        b.edge(route1[1], zout);
        for x in route0.into_iter().chain(route1) {
            choices.push(b.choice_on(x));
        }
        link.push(mid);
    }
    b.hadamard_edge(link[0], link[1]);
    ChoiceGraph {
        graph: b.build().expect("well-formed"),
        choices,
    }
}

/// Bases selecting route 0 (apply) or route 1 (skip) on both wires.
pub fn multiplexer_bases(choice: CzChoice) -> Vec<Basis> {
    let (r0, r1) = match choice {
        CzChoice::Apply => (Basis::X, Basis::Z),
        CzChoice::Skip => (Basis::Z, Basis::X),
    };
    [r0, r0, r1, r1].repeat(2)
}

/// Bases for the two-node graph.
pub fn delayed_choice_bases(choice: CzChoice) -> Vec<Basis> {
    match choice {
        CzChoice::Apply => vec![Basis::X; 2],
        CzChoice::Skip => vec![Basis::Z; 2],
    }
}

fn check(graph: &ChoiceGraph, bases: &[Basis], expect: &[&str]) -> FixtureCheck {
    FixtureCheck {
        resolve: graph
            .choices
            .iter()
            .copied()
            .zip(bases.iter().copied())
            .collect(),
        expect: expect.iter().map(|s| s.to_string()).collect(),
    }
}

/// Two Z spiders joined by a Hadamard edge, one open leg on each side.
pub fn hadamard_edge_cz_graph() -> ZxGraph {
    let mut b = ZxBuilder::new();
    let a = b.node(Node::z(0));
    let c = b.node(Node::z(0));
    b.input(a).input(c).output(a).output(c);
    b.hadamard_edge(a, c);
    b.build().expect("well-formed")
}

/// The fixture set shipped under `fixtures/zx`.
pub fn builtin_fixtures() -> Vec<ZxFixture> {
    use Basis::{X, Z};
    let dc = delayed_choice_cz_graph();
    let mux = multiplexer_cz_graph();
    vec![
        ZxFixture {
            name: "hadamard-edge-cz".into(),
            description: "Two Z spiders joined by a Hadamard edge".into(),
            graph: hadamard_edge_cz_graph(),
            checks: vec![FixtureCheck {
                resolve: vec![],
                expect: vec!["CZ 0 1".into()],
            }],
        },
        ZxFixture {
            name: "delayed-choice-cz".into(),
            description: "Optimized delayed-choice CZ; choice nodes near wire 0 then wire 1".into(),
            checks: vec![check(&dc, &[X, X], &["CZ 0 1"]), check(&dc, &[Z, Z], &[])],
            graph: dc.graph,
        },
        ZxFixture {
            name: "multiplexer-cz".into(),
            description: "Multiplex/demultiplex delayed-choice CZ (reconstructed); per wire: \
                          route0 in, route0 out, route1 in, route1 out"
                .into(),
            checks: vec![
                check(&mux, &multiplexer_bases(CzChoice::Apply), &["CZ 0 1"]),
                check(&mux, &multiplexer_bases(CzChoice::Skip), &[]),
            ],
            graph: mux.graph,
        },
    ]
}
