use latticeplan::factory::{FactorySpec, FACTORY_PATCHES};
use latticeplan::layout::{
    export, from_json, maj_block, plan_adder_layout, plan_lookup_layout, routing_volume_comparison,
    sweep_frames, validate, volume_report, AdderLayoutParams, Block, ExportFormat,
    LookupLayoutParams, Role,
};
use latticeplan::rational::int;
use latticeplan::Error;
use proptest::prelude::*;

fn spec() -> FactorySpec {
    FactorySpec::new(17, 27).unwrap()
}

fn adder(m: usize, n: usize) -> latticeplan::layout::Floorplan {
    plan_adder_layout(m, &spec(), n, &AdderLayoutParams::default()).unwrap()
}

#[test]
fn baseline_adder_layout_validates() {
    let plan = adder(1000, 14);
    let report = validate(&plan);
    assert!(report.passed(), "{report:?}");
    assert_eq!(plan.regions_of(Role::CczFactory).count(), 14);
    assert_eq!(plan.regions_of(Role::FixupBox).count(), 28);
    assert_eq!(plan.count_role(Role::CczFactory), 14 * FACTORY_PATCHES);
    assert_eq!(plan.regions_of(Role::MajArea).count(), 1);
    assert_eq!(plan.patch_distance, 27);
}

#[test]
fn data_rows_hold_every_register_bit() {
    for m in [2, 7, 56, 57, 1000] {
        let plan = adder(m, 4);
        assert_eq!(plan.count_role(Role::DataRowTarget), m, "m={m}");
        assert_eq!(plan.count_role(Role::DataRowOffset), m, "m={m}");
        assert!(validate(&plan).passed());
    }
}

#[test]
fn odd_factory_counts_place_one_more_on_top() {
    let plan = adder(100, 5);
    let mut ys: Vec<usize> = plan.regions_of(Role::CczFactory).map(|r| r.y).collect();
    ys.sort();
    assert_eq!(ys.iter().filter(|&&y| y == 0).count(), 3);
    assert!(validate(&plan).passed());
}

#[test]
fn adder_layout_argument_errors() {
    let p = AdderLayoutParams::default();
    assert!(matches!(
        plan_adder_layout(1, &spec(), 4, &p),
        Err(Error::Argument(_))
    ));
    assert!(matches!(
        plan_adder_layout(10, &spec(), 1, &p),
        Err(Error::Argument(_))
    ));
    let wide = AdderLayoutParams {
        fixup_width: 8,
        ..p
    };
    assert!(matches!(
        plan_adder_layout(10, &spec(), 4, &wide),
        Err(Error::Argument(_))
    ));
}

#[test]
fn row_limit_reports_required_width() {
    let p = AdderLayoutParams {
        max_rows_per_register: 2,
        ..AdderLayoutParams::default()
    };
    match plan_adder_layout(1000, &spec(), 2, &p) {
        Err(Error::Capacity(msg)) => assert!(msg.contains("at least 1001"), "{msg}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn removing_gaps_breaks_reachability() {
    let plan = adder(100, 4);
    let mut json: serde_json::Value =
        serde_json::from_slice(&export(&plan, ExportFormat::Json)).unwrap();
    json["regions"]
        .as_array_mut()
        .unwrap()
        .retain(|r| r["role"] != "gap");
    for t in json["tiles"].as_array_mut().unwrap() {
        *t = serde_json::Value::String(t.as_str().unwrap().replace('g', "."));
    }
    let broken = from_json(&serde_json::to_vec(&json).unwrap()).unwrap();
    let report = validate(&broken);
    assert!(report.get("non_overlap").unwrap().passed);
    assert!(!report.get("reachability").unwrap().passed);
    assert!(!report.get("factory_gaps").unwrap().passed);
}

#[test]
fn overlapping_regions_fail_validation() {
    let mut bad = adder(100, 4);
    bad.regions.push(bad.regions[0].clone());
    assert!(!validate(&bad).get("non_overlap").unwrap().passed);
}

#[test]
fn missing_fixup_fails_validation() {
    let mut plan = adder(100, 4);
    let i = plan
        .regions
        .iter()
        .position(|r| r.role == Role::FixupBox)
        .unwrap();
    plan.regions.remove(i);
    let report = validate(&plan);
    assert!(!report.get("two_fixups_per_factory").unwrap().passed);
}

#[test]
fn lookup_pattern_tiles() {
    let cases = [
        (1, "R_L_"),
        (2, "R_L_L_R"),
        (3, "R_L_L_RR_L_"),
        (4, "R_L_L_RR_L_L_R"),
    ];
    for (rows, want) in cases {
        let plan = plan_lookup_layout(rows, &spec(), &LookupLayoutParams::default()).unwrap();
        let report = validate(&plan);
        assert!(report.passed(), "rows={rows}: {report:?}");
        assert_eq!(report.get("pattern").unwrap().detail, want);
        assert_eq!(plan.regions_of(Role::DataRowOffset).count(), rows);
        assert_eq!(plan.regions_of(Role::AccessCorridor).count(), 2);
        assert_eq!(plan.regions_of(Role::IterationArea).count(), 1);
    }
}

#[test]
fn lookup_inner_access_row_serves_two_rows() {
    let plan = plan_lookup_layout(2, &spec(), &LookupLayoutParams::default()).unwrap();
    let report = validate(&plan);
    let c = report.get("inner_access_shared").unwrap();
    assert!(c.passed);
    assert!(c.detail.starts_with("1 "), "{}", c.detail);
}

#[test]
fn lookup_layout_errors() {
    let p = LookupLayoutParams::default();
    assert!(matches!(
        plan_lookup_layout(0, &spec(), &p),
        Err(Error::Argument(_))
    ));
    for pattern in ["", "RXR", "R__R"] {
        let q = LookupLayoutParams {
            pattern: pattern.into(),
            ..p.clone()
        };
        assert!(
            matches!(plan_lookup_layout(2, &spec(), &q), Err(Error::Argument(_))),
            "{pattern}"
        );
    }
}

#[test]
fn lookup_without_access_fails() {
    let p = LookupLayoutParams {
        pattern: "RLLR".into(),
        ..LookupLayoutParams::default()
    };
    let plan = plan_lookup_layout(2, &spec(), &p).unwrap();
    let report = validate(&plan);
    assert!(!report.get("l_rows_adjacent_to_access").unwrap().passed);
    assert!(!report.get("reachability").unwrap().passed);
}

#[test]
fn volumes() {
    assert_eq!(maj_block().volume(), 45);
    let empty = volume_report(&[]);
    assert_eq!(empty.total, 0);
    let r = volume_report(&[maj_block(), Block::new("wire", 2, 1, 3)]);
    assert_eq!(r.total, 51);
    let (report, ratio) = routing_volume_comparison(5).unwrap();
    assert_eq!(report.components[0].1, 10);
    assert_eq!(report.components[1].1, 40);
    assert_eq!(ratio, int(4));
}

#[test]
fn json_round_trip_is_lossless() {
    let plans = [
        adder(300, 6),
        plan_lookup_layout(3, &spec(), &LookupLayoutParams::default()).unwrap(),
    ];
    for plan in plans {
        let bytes = export(&plan, ExportFormat::Json);
        let back = from_json(&bytes).unwrap();
        assert_eq!(back, plan);
        assert_eq!(export(&back, ExportFormat::Json), bytes);
    }
    assert!(matches!(
        from_json(b"{\"kind\": 3}"),
        Err(Error::Parse { .. })
    ));
}

#[test]
fn svg_is_deterministic_and_counts_factories() {
    let plan = adder(1000, 14);
    let a = export(&plan, ExportFormat::Svg);
    let b = export(&adder(1000, 14), ExportFormat::Svg);
    assert_eq!(a, b);
    let svg = String::from_utf8(a).unwrap();
    assert!(svg.starts_with("<?xml"));
    let factories = svg
        .lines()
        .filter(|l| {
            l.contains("class=\"region ccz_factory\"") && l.contains("width=\"150\" height=\"80\"")
        })
        .count();
    assert_eq!(factories, 14);
    let tiles = svg
        .lines()
        .filter(|l| l.starts_with("<rect class=\"tile"))
        .count();
    assert_eq!(tiles, plan.width * plan.height);
}

#[test]
fn export_format_parsing() {
    assert_eq!("svg".parse::<ExportFormat>().unwrap(), ExportFormat::Svg);
    assert_eq!("JSON".parse::<ExportFormat>().unwrap(), ExportFormat::Json);
    assert!(matches!(
        "png".parse::<ExportFormat>(),
        Err(Error::Argument(_))
    ));
}

#[test]
fn sweep_alternates_direction() {
    let plan = adder(200, 4);
    let frames = sweep_frames(&plan);
    let rows = plan.regions_of(Role::DataRowTarget).count();
    assert_eq!(frames.len(), 2 * rows);
    assert!(frames.windows(2).all(|w| w[0].rightward != w[1].rightward));
    assert_eq!(frames.first().unwrap().row_y, frames.last().unwrap().row_y);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adder_layouts_always_validate(m in 2usize..400, n in 2usize..12) {
        let plan = adder(m, n);
        let report = validate(&plan);
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert_eq!(plan.regions_of(Role::FixupBox).count(), 2 * n);
        prop_assert_eq!(plan.count_role(Role::CczFactory), n * FACTORY_PATCHES);
    }

    #[test]
    fn lookup_layouts_always_validate(rows in 1usize..20, width in 1usize..40) {
        let p = LookupLayoutParams { row_width: width, ..LookupLayoutParams::default() };
        let plan = plan_lookup_layout(rows, &spec(), &p).unwrap();
        prop_assert!(validate(&plan).passed());
    }
}
