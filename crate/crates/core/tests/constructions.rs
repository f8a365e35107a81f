use latticeplan::circuit::{
    channel_equals_unitary_mod_frame, enumerate_branches, run_reversible, total_probability, Gate,
    GateKind, Op, StateVector,
};
use latticeplan::constructions::*;
use latticeplan::Error;
use num_complex::Complex64;

fn assert_suite(c: &Construction) -> SuiteReport {
    let report = verify_construction(c, &SuiteConfig::default()).unwrap();
    assert!(report.passed(), "{}: {:?}", c.name, report.failures);
    assert_eq!(report.random_inputs, 20);
    report
}

#[test]
fn delayed_choice_cz_apply_and_skip() {
    for choice in [CzChoice::Apply, CzChoice::Skip] {
        let c = build_delayed_choice_cz(choice).unwrap();
        assert_eq!(c.routing_qubits.len(), 2);
        assert_eq!(c.circuit.num_qubits(), 4);
        let r = assert_suite(&c);
        assert_eq!(r.basis_inputs, 4);
    }
}

#[test]
fn delayed_choice_cz_with_choice_qubit_has_eight_branches_per_input() {
    let c = build_delayed_choice_cz_with_choice_qubit().unwrap();
    for i in 0..4 {
        let input = StateVector::basis(2, i).unwrap();
        let br = enumerate_branches(&c.circuit, &input).unwrap();
        assert_eq!(br.len(), 8);
        assert!((total_probability(&br) - 1.0).abs() < 1e-9);
    }
    assert_suite(&c);
}

#[test]
fn fowler_multiplexer_uses_eight_routing_qubits() {
    for choice in [CzChoice::Apply, CzChoice::Skip] {
        let c = build_fowler_multiplexer_cz(choice).unwrap();
        assert_eq!(c.routing_qubits.len(), 8);
        assert_suite(&c);
    }
    let optimized = build_delayed_choice_cz(CzChoice::Apply).unwrap();
    let baseline = build_fowler_multiplexer_cz(CzChoice::Apply).unwrap();
    assert_eq!(
        baseline.routing_qubits.len() / optimized.routing_qubits.len(),
        4
    );
}

#[test]
fn autoccz_equals_ccz() {
    let (resource, c) = build_autoccz([0, 1, 2]).unwrap();
    assert_eq!(c.circuit.num_qubits(), 12);
    assert_eq!(resource.routing_qubits.len(), 6);
    assert_eq!(resource.routing_pairs().len(), 3);
    assert_eq!(resource.circuit_fragment.num_qubits(), 9);
    let r = assert_suite(&c);
    assert_eq!(r.basis_inputs, 8);
}

#[test]
fn autoccz_targets_need_not_be_ordered() {
    let (_, c) = build_autoccz([2, 0, 1]).unwrap();
    assert_suite(&c);
}

#[test]
fn autoccz_consumption_site_has_no_classically_controlled_unitaries() {
    let (_, c) = build_autoccz([0, 1, 2]).unwrap();
    let site = consumption_site_ops(&c.circuit, &[0, 1, 2]);
    assert!(!site.is_empty());
    assert!(site
        .iter()
        .all(|op| !op.is_classically_controlled_unitary()));
    assert!(c
        .circuit
        .ops()
        .iter()
        .all(|op| !op.is_classically_controlled_unitary()));
    assert!(site.iter().any(|op| matches!(op, Op::Frame { .. })));
}

#[test]
fn autoccz_rejects_duplicate_targets() {
    assert!(matches!(build_autoccz([0, 0, 1]), Err(Error::Argument(_))));
    assert!(matches!(
        build_toffoli_from_ccz(1, 1, 2),
        Err(Error::Argument(_))
    ));
}

#[test]
fn autoccz_on_specific_inputs() {
    let (_, c) = build_autoccz([0, 1, 2]).unwrap();
    let zero = StateVector::from_bits("000").unwrap();
    let br = enumerate_branches(&c.circuit, &zero).unwrap();
    assert!(channel_equals_unitary_mod_frame(&br, &zero, &[], &[0, 1, 2]).unwrap());

    // (|110> + |111>)/sqrt2 with qubit 0 leftmost: indices 0b011 and 0b111.
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![Complex64::new(0.0, 0.0); 8];
    amps[0b011] = Complex64::new(h, 0.0);
    amps[0b111] = Complex64::new(h, 0.0);
    let input = StateVector::from_amplitudes(amps.clone()).unwrap();
    let br = enumerate_branches(&c.circuit, &input).unwrap();
    assert!(
        channel_equals_unitary_mod_frame(&br, &input, &[Gate::ccz(0, 1, 2)], &[0, 1, 2]).unwrap()
    );
    assert!(!channel_equals_unitary_mod_frame(&br, &input, &[], &[0, 1, 2]).unwrap());
}

#[test]
fn toffoli_from_ccz_truth_table() {
    let c = build_toffoli_from_ccz(0, 1, 2).unwrap();
    for (input, output) in [
        ("000", "000"),
        ("100", "100"),
        ("010", "010"),
        ("110", "111"),
        ("111", "110"),
        ("001", "001"),
    ] {
        let s = StateVector::from_bits(input).unwrap();
        let br = enumerate_branches(&c.circuit, &s).unwrap();
        let expected = StateVector::from_bits(output).unwrap();
        // Express the expected output as a permutation target via CCX.
        assert!(
            channel_equals_unitary_mod_frame(&br, &s, &[Gate::ccx(0, 1, 2)], &[0, 1, 2]).unwrap()
        );
        let mut t = s.clone();
        t.apply(&Gate::ccx(0, 1, 2)).unwrap();
        assert!(t.equals_up_to_phase(&expected, 1e-12));
    }
    let r = assert_suite(&c);
    assert_eq!(r.basis_inputs, 8);
}

#[test]
fn toffoli_branches_are_not_identity() {
    let c = build_toffoli_from_ccz(0, 1, 2).unwrap();
    let s = StateVector::from_bits("110").unwrap();
    let br = enumerate_branches(&c.circuit, &s).unwrap();
    assert!(!channel_equals_unitary_mod_frame(&br, &s, &[], &[0, 1, 2]).unwrap());
}

#[test]
fn maj_uma_and_inverse_suites() {
    for build in [build_maj, build_uma, build_maj_inverse] {
        assert_suite(&build(ToffoliStyle::AutoCcz).unwrap());
        assert_suite(&build(ToffoliStyle::Direct).unwrap());
    }
}

fn run_direct(gates: &[Construction], bits: &str) -> String {
    gates.iter().fold(bits.to_string(), |acc, c| {
        run_reversible(&c.circuit, &acc).unwrap()
    })
}

#[test]
fn maj_computes_majority_on_a() {
    let maj = build_maj(ToffoliStyle::Direct).unwrap();
    // wires (c, b, a) = qubits (0, 1, 2)
    for v in 0..8usize {
        let (c, b, a) = (v & 1, v >> 1 & 1, v >> 2 & 1);
        let bits = format!("{c}{b}{a}");
        let classical = run_reversible(&maj.circuit, &bits).unwrap();
        assert_eq!(run_direct(std::slice::from_ref(&maj), &bits), classical);
        let out: Vec<u8> = classical.bytes().collect();
        let majority = usize::from(c + b + a >= 2);
        assert_eq!((out[2] - b'0') as usize, majority, "input {bits}");
    }
    assert_eq!(run_reversible(&maj.circuit, "000").unwrap(), "000");
}

#[test]
fn maj_then_uma_restores_carry_wires_and_writes_sum() {
    let maj = build_maj(ToffoliStyle::Direct).unwrap();
    let uma = build_uma(ToffoliStyle::Direct).unwrap();
    for v in 0..8usize {
        let bits: String = (0..3)
            .map(|q| if v >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        let out: Vec<char> = run_direct(&[maj.clone(), uma.clone()], &bits)
            .chars()
            .collect();
        let inp: Vec<char> = bits.chars().collect();
        assert_eq!(out[0], inp[0]);
        assert_eq!(out[2], inp[2]);
        let sum = (v & 1) ^ (v >> 1 & 1) ^ (v >> 2 & 1);
        assert_eq!(out[1], if sum == 1 { '1' } else { '0' });
    }
}

#[test]
fn maj_then_inverse_is_identity() {
    let maj = build_maj(ToffoliStyle::Direct).unwrap();
    let inv = build_maj_inverse(ToffoliStyle::Direct).unwrap();
    for v in 0..8usize {
        let bits: String = (0..3)
            .map(|q| if v >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        assert_eq!(run_direct(&[maj.clone(), inv.clone()], &bits), bits);
    }
}

#[test]
fn adder_exhaustive_two_to_eight() {
    let r = verify_adder_exhaustive(2..=8).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    for m in 2..=8 {
        let (c, spec) = build_cuccaro_adder(m).unwrap();
        assert_eq!(spec.toffoli_count, 2 * m - 3);
        assert_eq!(spec.measurement_depth, 2 * m - 3);
        assert_eq!(c.count_gates(GateKind::Ccx), 2 * m - 3);
    }
    assert!(matches!(build_cuccaro_adder(1), Err(Error::Argument(_))));
}

#[test]
fn adder_agrees_with_state_vector() {
    let (c, _) = build_cuccaro_adder(3).unwrap();
    let gates = cuccaro_gates(3).unwrap();
    for v in 0..64usize {
        let bits: String = (0..6)
            .map(|q| if v >> q & 1 == 1 { '1' } else { '0' })
            .collect();
        let classical = run_reversible(&c, &bits).unwrap();
        let mut s = StateVector::from_bits(&bits).unwrap();
        for g in &gates {
            s.apply(g).unwrap();
        }
        assert!(s.equals_up_to_phase(&StateVector::from_bits(&classical).unwrap(), 1e-12));
    }
}

#[test]
fn named_suites() {
    let config = SuiteConfig::default();
    for name in CONSTRUCTION_NAMES {
        let r = verify_named(name, &config).unwrap();
        assert!(r.passed(), "{name}: {:?}", r.failures);
    }
    assert!(matches!(
        verify_named("no-such", &config),
        Err(Error::Argument(_))
    ));
}

#[test]
fn seeded_inputs_are_reproducible() {
    let c = build_delayed_choice_cz(CzChoice::Apply).unwrap();
    let a = verify_construction(&c, &SuiteConfig::default()).unwrap();
    let b = verify_construction(&c, &SuiteConfig::default()).unwrap();
    assert_eq!(a, b);
}
