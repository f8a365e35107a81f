use latticeplan::config::{RunConfig, KEYS};
use latticeplan::rational::{frac, int};
use latticeplan::Error;

#[test]
fn defaults_reproduce_baseline_distances() {
    let c = RunConfig::default();
    let spec = c.factory_spec().unwrap();
    assert_eq!((spec.d1, spec.d2), (17, 27));
    assert_eq!(c.assumptions.cycle_time, int(1));
    assert_eq!(c.assumptions.reaction_time, int(10));
}

#[test]
fn parses_every_key() {
    let text = "\
# full file
cycle_time_us = 0.5
reaction_time_us = 2.5   # trailing comment
gate_error = 1e-4
d1 = 15
d2 = 23
target_volume = 3e8
error_budget = 0.02
injection = legacy
t1_style = prior
m = 64
entries = 128
output_bits = 32
sides = 1
factories = 9
pattern = R_L_L_R
rows = 4
buffer = 3
window_us = 0..150.5
seed = 42
random_states = 5
";
    let c = RunConfig::parse(text).unwrap();
    assert_eq!(c.assumptions.cycle_time, frac(1, 2));
    assert_eq!(c.assumptions.reaction_time, frac(5, 2));
    assert_eq!(c.assumptions.gate_error, 1e-4);
    assert_eq!((c.d1, c.d2), (Some(15), Some(23)));
    assert_eq!(c.m, 64);
    assert_eq!(c.factories, Some(9));
    assert_eq!(c.buffer, Some(3));
    assert_eq!(c.window_us, Some((int(0), frac(301, 2))));
    assert_eq!(c.seed, Some(42));
    assert_eq!(c.random_states, 5);
    assert_eq!(
        text.lines().filter(|l| l.contains(" = ")).count(),
        KEYS.len()
    );
}

#[test]
fn unknown_key_reports_line() {
    let e = RunConfig::parse("m = 10\n\nspeed = 3\n").unwrap_err();
    match e {
        Error::Parse { line, message } => {
            assert_eq!(line, 3);
            assert!(message.contains("unknown key"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn malformed_lines_report_line() {
    for (text, line) in [
        ("m 10\n", 1),
        ("m = 10\ngate_error = lots\n", 2),
        ("d2 = -3\n", 1),
        ("injection = sideways\n", 1),
        ("window_us = 5..1\n", 1),
    ] {
        match RunConfig::parse(text) {
            Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn later_values_override_earlier_ones() {
    let mut c = RunConfig::parse("cycle_time_us = 10\n").unwrap();
    c.set("cycle_time_us", "1").unwrap();
    assert_eq!(c.assumptions.cycle_time, int(1));
}

#[test]
fn partial_distance_override_keeps_selected_other() {
    let c = RunConfig::parse("d2 = 31\n").unwrap();
    let spec = c.factory_spec().unwrap();
    assert_eq!((spec.d1, spec.d2), (17, 31));
}

#[test]
fn invalid_physics_is_rejected_before_planning() {
    let c = RunConfig::parse("gate_error = 0.011\n").unwrap();
    assert!(matches!(
        c.factory_spec(),
        Err(Error::TooCloseToThreshold { .. })
    ));
    let c = RunConfig::parse("d1 = 17\nd2 = 28\n").unwrap();
    assert!(matches!(c.factory_spec(), Err(Error::Argument(_))));
}
