use std::path::PathBuf;

use latticeplan::circuit::{Basis, Gate};
use latticeplan::constructions::*;
use latticeplan::zx::figures::*;
use latticeplan::zx::*;
use latticeplan::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn cz() -> EvaluatedMap {
    EvaluatedMap::from_gates(2, &[Gate::cz(0, 1)]).unwrap()
}

#[test]
fn hadamard_edge_between_z_spiders_is_cz() {
    let m = evaluate(&hadamard_edge_cz_graph()).unwrap();
    assert!(equiv_mod_pauli_scalar(&m, &cz()).unwrap());
    // Exact up to the Hadamard's 1/sqrt2.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..4 {
        let want = if i == 3 { -h } else { h };
        assert!((m.get(i, i) - Complex64::new(want, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn delayed_choice_graph_resolutions() {
    use Basis::{X, Z};
    let g = delayed_choice_cz_graph();
    assert_eq!(g.choices.len(), 2);
    let id = EvaluatedMap::identity(2);
    let both_x = evaluate(&g.resolve(&[X, X]).unwrap()).unwrap();
    assert!(equiv_mod_pauli_scalar(&both_x, &cz()).unwrap());
    assert!(!equiv_mod_pauli_scalar(&both_x, &id).unwrap());
    let both_z = evaluate(&g.resolve(&[Z, Z]).unwrap()).unwrap();
    assert!(equiv_mod_pauli_scalar(&both_z, &id).unwrap());
    assert!(!equiv_mod_pauli_scalar(&both_z, &cz()).unwrap());
    // Mixed choices measure one data qubit in Z: a projector, not a unitary.
    for bases in [[X, Z], [Z, X]] {
        let m = evaluate(&g.resolve(&bases).unwrap()).unwrap();
        let nonzero_columns = (0..4)
            .filter(|&c| (0..4).any(|r| m.get(r, c).norm() > 1e-9))
            .count();
        assert_eq!(nonzero_columns, 2, "{bases:?}");
        assert!(!equiv_mod_pauli_scalar(&m, &id).unwrap(), "{bases:?}");
        assert!(!equiv_mod_pauli_scalar(&m, &cz()).unwrap(), "{bases:?}");
    }
}

#[test]
fn multiplexer_graph_resolutions() {
    let g = multiplexer_cz_graph();
    assert_eq!(g.choices.len(), 8);
    let apply = evaluate(&g.resolve(&multiplexer_bases(CzChoice::Apply)).unwrap()).unwrap();
    let skip = evaluate(&g.resolve(&multiplexer_bases(CzChoice::Skip)).unwrap()).unwrap();
    assert!(equiv_mod_pauli_scalar(&apply, &cz()).unwrap());
    assert!(equiv_mod_pauli_scalar(&skip, &EvaluatedMap::identity(2)).unwrap());
    assert!(!equiv_mod_pauli_scalar(&skip, &cz()).unwrap());
}

#[test]
fn unresolved_and_double_resolution_errors() {
    let g = delayed_choice_cz_graph();
    assert!(matches!(evaluate(&g.graph), Err(Error::Contract(_))));
    let once = g.graph.resolve_choice(g.choices[0], Basis::X).unwrap();
    assert!(matches!(
        once.resolve_choice(g.choices[0], Basis::Z),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        g.graph.resolve_choice(0, Basis::X),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        g.graph.resolve_choice(999, Basis::X),
        Err(Error::Argument(_))
    ));
    assert!(g.resolve(&[Basis::X]).is_err());
}

#[test]
fn malformed_graphs_are_rejected() {
    let z = Node::z(0);
    let out = Port {
        node: 0,
        direction: Direction::Output,
    };
    assert!(matches!(
        ZxGraph::new(vec![z], vec![(0, 1)], vec![]),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        ZxGraph::new(vec![z], vec![], vec![Port { node: 3, ..out }]),
        Err(Error::Argument(_))
    ));
    // choice node with two edges
    assert!(matches!(
        ZxGraph::new(vec![z, Node::choice()], vec![(0, 1), (0, 1)], vec![out]),
        Err(Error::Argument(_))
    ));
    // choice node with a port
    assert!(matches!(
        ZxGraph::new(
            vec![z, Node::choice()],
            vec![(0, 1)],
            vec![Port { node: 1, ..out }]
        ),
        Err(Error::Argument(_))
    ));
    // hadamard with one leg
    assert!(matches!(
        ZxGraph::new(vec![z, Node::hadamard()], vec![(0, 1)], vec![out]),
        Err(Error::Argument(_))
    ));
}

#[test]
fn malformed_fixture_json_is_a_parse_error() {
    assert!(matches!(
        ZxFixture::from_json("{\"name\": 3"),
        Err(Error::Parse { .. })
    ));
    let bad_edge =
        r#"{"name":"x","graph":{"nodes":[{"kind":"z"}],"edges":[[0,5]],"ports":[]},"checks":[]}"#;
    assert!(ZxFixture::from_json(bad_edge).is_err());
}

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/zx")
}

/// Set LATTICEPLAN_BLESS=1 to rewrite the shipped files.
#[test]
fn shipped_fixtures_match_builtin_graphs() {
    let bless = std::env::var_os("LATTICEPLAN_BLESS").is_some();
    for f in builtin_fixtures() {
        let path = fixture_dir().join(format!("{}.json", f.name));
        if bless {
            std::fs::write(&path, f.to_json()).unwrap();
        }
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, f.to_json(), "{}", path.display());
        let parsed = ZxFixture::from_json(&text).unwrap();
        assert_eq!(parsed, f);
        let report = run_fixture(&parsed).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.checks_run, f.checks.len());
    }
}

#[test]
fn fixture_with_wrong_expectation_fails() {
    let mut f = builtin_fixtures().remove(1);
    f.checks[0].expect.clear();
    let report = run_fixture(&f).unwrap();
    assert!(!report.passed());
}

fn zx_report(c: &Construction, limit: usize) -> ZxBranchReport {
    let patterns = sample_patterns(c.circuit.num_measurements(), limit, DEFAULT_SEED);
    let r = check_branches_against_zx(c, &patterns).unwrap();
    assert!(r.passed(), "{}: {:?}", c.name, r.failures);
    assert!(r.branches_checked > 0);
    r
}

#[test]
fn delayed_choice_circuits_agree_with_zx_on_every_branch() {
    for choice in [CzChoice::Apply, CzChoice::Skip] {
        let c = build_delayed_choice_cz(choice).unwrap();
        let r = zx_report(&c, usize::MAX);
        assert_eq!(r.branches_checked + r.branches_skipped, 4);
    }
    let c = build_delayed_choice_cz_with_choice_qubit().unwrap();
    let r = zx_report(&c, usize::MAX);
    assert_eq!(r.branches_checked + r.branches_skipped, 8);
}

#[test]
fn multiplexer_circuit_agrees_with_zx_on_sampled_branches() {
    for choice in [CzChoice::Apply, CzChoice::Skip] {
        zx_report(&build_fowler_multiplexer_cz(choice).unwrap(), 48);
    }
}

#[test]
fn autoccz_and_toffoli_agree_with_zx_on_sampled_branches() {
    let (_, c) = build_autoccz([0, 1, 2]).unwrap();
    zx_report(&c, 24);
    zx_report(&build_toffoli_from_ccz(0, 1, 2).unwrap(), 24);
}

#[test]
fn zx_translation_detects_a_wrong_target() {
    let mut c = build_delayed_choice_cz(CzChoice::Apply).unwrap();
    c.target = Target::Fixed(vec![]);
    let patterns = sample_patterns(c.circuit.num_measurements(), usize::MAX, 0);
    let r = check_branches_against_zx(&c, &patterns).unwrap();
    assert!(!r.passed());
}

#[test]
fn sample_patterns_is_exhaustive_or_seeded() {
    assert_eq!(sample_patterns(3, 100, 1).len(), 8);
    let a = sample_patterns(10, 16, 7);
    assert_eq!(a.len(), 16);
    assert_eq!(a, sample_patterns(10, 16, 7));
    let mut d = a.clone();
    d.dedup();
    assert_eq!(d.len(), 16);
}

// Random small graphs for the algebraic properties.

#[derive(Debug, Clone)]
struct Spec {
    spiders: Vec<(bool, u8)>,
    edges: Vec<(usize, usize, bool)>,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

fn build(spec: &Spec) -> ZxGraph {
    let mut b = ZxBuilder::new();
    let ids: Vec<usize> = spec
        .spiders
        .iter()
        .map(|&(z, p)| b.node(if z { Node::z(p) } else { Node::x(p) }))
        .collect();
    for &(a, c, had) in &spec.edges {
        let (a, c) = (ids[a % ids.len()], ids[c % ids.len()]);
        if had {
            b.hadamard_edge(a, c);
        } else {
            b.edge(a, c);
        }
    }
    for &i in &spec.inputs {
        b.input(ids[i % ids.len()]);
    }
    for &o in &spec.outputs {
        b.output(ids[o % ids.len()]);
    }
    b.build().unwrap()
}

fn graph_spec(max_ports: usize) -> impl Strategy<Value = Spec> {
    (1usize..=max_ports).prop_flat_map(|ports| {
        (
            prop::collection::vec((any::<bool>(), 0u8..8), 1..6),
            prop::collection::vec((0usize..6, 0usize..6, any::<bool>()), 0..7),
            prop::collection::vec(0usize..6, ports),
            prop::collection::vec(0usize..6, ports),
        )
            .prop_map(|(spiders, edges, inputs, outputs)| Spec {
                spiders,
                edges,
                inputs,
                outputs,
            })
    })
}

fn hadamard_all(n: usize) -> Vec<Gate> {
    (0..n).map(Gate::h).collect()
}

fn gate_list(n: usize) -> impl Strategy<Value = Vec<Gate>> {
    prop::collection::vec((0usize..4, 0usize..n, 0usize..n), 0..6).prop_map(move |ops| {
        ops.into_iter()
            .map(|(k, a, b)| match k {
                0 => Gate::h(a),
                1 => Gate::s(a),
                2 if a != b => Gate::cz(a, b),
                2 => Gate::x(a),
                _ => Gate::z(a),
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn color_swap_is_hadamard_conjugation(spec in graph_spec(2)) {
        let g = build(&spec);
        let m = evaluate(&g).unwrap();
        let swapped = evaluate(&g.color_swapped()).unwrap();
        let hin = EvaluatedMap::from_gates(g.num_inputs(), &hadamard_all(g.num_inputs())).unwrap();
        let hout = EvaluatedMap::from_gates(g.num_outputs(), &hadamard_all(g.num_outputs())).unwrap();
        let scale = m.max_abs().max(1.0);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        acc += hout.get(r, i) * m.get(i, j) * hin.get(j, c);
                    }
                }
                prop_assert!((acc - swapped.get(r, c)).norm() < 1e-9 * scale);
            }
        }
    }

    #[test]
    fn detached_scalar_never_changes_equivalence(
        spec in graph_spec(2),
        kind in any::<bool>(),
        phase in (0u8..8).prop_filter("phase pi gives a zero scalar", |p| *p != 4),
        gates in gate_list(2),
    ) {
        let mut spec = spec;
        spec.outputs.truncate(spec.inputs.len());
        let g = build(&spec);
        let mut s = ZxBuilder::new();
        s.node(if kind { Node::z(phase) } else { Node::x(phase) });
        let scalar = s.build().unwrap();
        let with_scalar = evaluate(&g.disjoint_union(&scalar)).unwrap();
        let plain = evaluate(&g).unwrap();
        let n = g.num_inputs();
        let gates: Vec<Gate> = gates
            .into_iter()
            .filter(|g| g.targets.iter().all(|&q| q < n))
            .collect();
        let others = [
            plain.clone(),
            EvaluatedMap::from_gates(n, &gates).unwrap(),
            EvaluatedMap::identity(n),
        ];
        for other in &others {
            prop_assert_eq!(
                equiv_mod_pauli_scalar(&with_scalar, other).unwrap(),
                equiv_mod_pauli_scalar(&plain, other).unwrap()
            );
        }
    }
}
