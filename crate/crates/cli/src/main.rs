//! `latticeplan`: verification, estimates, schedules and floorplans.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use latticeplan::circuit::to_text;
use latticeplan::config::RunConfig;
use latticeplan::constructions::{
    build_cuccaro_adder, registry, verify_named, SuiteConfig, SuiteReport, CONSTRUCTION_NAMES,
    DEFAULT_SEED,
};
use latticeplan::factory::{ccz_rate, select_code_distances, FactorySpec};
use latticeplan::layout::{
    export, plan_adder_layout, plan_lookup_layout, validate, AdderLayoutParams, ExportFormat,
    Floorplan, LookupLayoutParams, Role, ValidationReport,
};
use latticeplan::rational::{self, Q};
use latticeplan::scheduler::{
    build_adder_dag, phase_timeline, simulate_lookup, simulate_reaction_limited, to_ns, LookupSpec,
    ScheduleTrace, SimOptions,
};
use latticeplan::zx::{run_fixture, ZxFixture};

const SEED_VAR: &str = "LATTICEPLAN_SEED";

#[derive(Parser)]
#[command(
    name = "latticeplan",
    version,
    about = "Reaction-limited surface code planning"
)]
struct Cli {
    /// Key/value configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Directory for reports and artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Extra `key=value` overrides, applied last.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run construction equivalence suites and ZX fixtures.
    Verify {
        /// Construction names, or `all`.
        names: Vec<String>,
        /// ZX fixture files to check.
        #[arg(long, num_args = 1..)]
        zx: Vec<PathBuf>,
        /// Print each named construction as circuit text instead of verifying.
        #[arg(long)]
        emit: bool,
    },
    /// Factory throughput, count and qubit total.
    Estimate(Physical),
    /// Simulate reaction-limited execution.
    Schedule {
        #[command(flatten)]
        physical: Physical,
        #[arg(long, value_enum, default_value_t = Mode::Adder)]
        mode: Mode,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        factories: Option<usize>,
        #[arg(long)]
        buffer: Option<usize>,
        #[arg(long)]
        entries: Option<usize>,
        #[arg(long)]
        output_bits: Option<usize>,
        #[arg(long)]
        sides: Option<u32>,
        /// Trace window `from..to` in µs.
        #[arg(long)]
        window_us: Option<String>,
    },
    /// Plan and validate a floorplan.
    Layout {
        #[command(flatten)]
        physical: Physical,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        factories: Option<usize>,
        /// Row pattern of a lookup layout, e.g. R_L_L_R; selects the lookup plan.
        #[arg(long)]
        pattern: Option<String>,
        /// Lookup rows.
        #[arg(long)]
        rows: Option<usize>,
    },
}

#[derive(Args)]
struct Physical {
    #[arg(long)]
    cycle_time_us: Option<String>,
    #[arg(long)]
    reaction_time_us: Option<String>,
    #[arg(long)]
    gate_error: Option<String>,
    #[arg(long)]
    d1: Option<u32>,
    #[arg(long)]
    d2: Option<u32>,
    #[arg(long)]
    target_volume: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Adder,
    Lookup,
    Timeline,
}

/// A finished command: what to print, files to write, and whether every
/// requested check passed.
struct Outcome {
    text: String,
    json: serde_json::Value,
    artifacts: Vec<(String, Vec<u8>)>,
    passed: bool,
}

impl Outcome {
    fn new(text: String, json: serde_json::Value) -> Self {
        Outcome {
            text,
            json,
            artifacts: Vec::new(),
            passed: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let mut config = RunConfig::default();
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        config
            .apply_text(&text)
            .with_context(|| format!("in {}", path.display()))?;
    }
    let outcome = match &cli.command {
        Command::Verify { names, zx, emit } => {
            apply_overrides(&mut config, &[], &cli.set)?;
            cmd_verify(&config, names, zx, *emit)?
        }
        Command::Estimate(p) => {
            apply_overrides(&mut config, &physical_pairs(p), &cli.set)?;
            cmd_estimate(&config)?
        }
        Command::Schedule {
            physical,
            mode,
            m,
            factories,
            buffer,
            entries,
            output_bits,
            sides,
            window_us,
        } => {
            let mut pairs = physical_pairs(physical);
            push(&mut pairs, "m", m);
            push(&mut pairs, "factories", factories);
            push(&mut pairs, "buffer", buffer);
            push(&mut pairs, "entries", entries);
            push(&mut pairs, "output_bits", output_bits);
            push(&mut pairs, "sides", sides);
            push(&mut pairs, "window_us", window_us);
            apply_overrides(&mut config, &pairs, &cli.set)?;
            cmd_schedule(&config, *mode)?
        }
        Command::Layout {
            physical,
            m,
            factories,
            pattern,
            rows,
        } => {
            let mut pairs = physical_pairs(physical);
            push(&mut pairs, "m", m);
            push(&mut pairs, "factories", factories);
            push(&mut pairs, "pattern", pattern);
            push(&mut pairs, "rows", rows);
            apply_overrides(&mut config, &pairs, &cli.set)?;
            cmd_layout(&config, pattern.is_some())?
        }
    };
    let report = if cli.json {
        let mut s = serde_json::to_string_pretty(&outcome.json)?;
        s.push('\n');
        s
    } else {
        outcome.text
    };
    print!("{report}");
    if let Some(dir) = &cli.out {
        write_artifacts(dir, cli.json, &report, &outcome.artifacts)?;
    }
    Ok(outcome.passed)
}

fn push<T: ToString>(pairs: &mut Vec<(&'static str, String)>, key: &'static str, v: &Option<T>) {
    if let Some(v) = v {
        pairs.push((key, v.to_string()));
    }
}

fn physical_pairs(p: &Physical) -> Vec<(&'static str, String)> {
    let mut pairs = Vec::new();
    push(&mut pairs, "cycle_time_us", &p.cycle_time_us);
    push(&mut pairs, "reaction_time_us", &p.reaction_time_us);
    push(&mut pairs, "gate_error", &p.gate_error);
    push(&mut pairs, "d1", &p.d1);
    push(&mut pairs, "d2", &p.d2);
    push(&mut pairs, "target_volume", &p.target_volume);
    pairs
}

fn apply_overrides(
    config: &mut RunConfig,
    flags: &[(&'static str, String)],
    set: &[String],
) -> Result<()> {
    for (key, value) in flags {
        config
            .set(key, value)
            .with_context(|| format!("--{}", key.replace('_', "-")))?;
    }
    for pair in set {
        let Some((key, value)) = pair.split_once('=') else {
            bail!("--set expects KEY=VALUE, got {pair:?}");
        };
        config
            .set(key.trim(), value.trim())
            .with_context(|| format!("--set {pair}"))?;
    }
    Ok(())
}

fn write_artifacts(
    dir: &Path,
    json: bool,
    report: &str,
    artifacts: &[(String, Vec<u8>)],
) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = if json { "report.json" } else { "report.txt" };
    let mut files = vec![(name.to_string(), report.as_bytes().to_vec())];
    files.extend(artifacts.iter().cloned());
    for (name, bytes) in files {
        let path = dir.join(&name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn seed(config: &RunConfig) -> Result<u64> {
    if let Some(s) = config.seed {
        return Ok(s);
    }
    match std::env::var(SEED_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_VAR} must be an unsigned integer, got {v:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn cmd_verify(config: &RunConfig, names: &[String], zx: &[PathBuf], emit: bool) -> Result<Outcome> {
    if names.is_empty() && zx.is_empty() {
        bail!(
            "name a construction, `all`, or pass --zx files; known: {}",
            CONSTRUCTION_NAMES.join(", ")
        );
    }
    let mut selected: Vec<&str> = Vec::new();
    for n in names {
        if n == "all" {
            selected.extend(CONSTRUCTION_NAMES);
        } else if let Some(known) = CONSTRUCTION_NAMES.iter().find(|k| **k == n.as_str()) {
            selected.push(known);
        } else {
            bail!(
                "unknown construction {n:?}; known: {}",
                CONSTRUCTION_NAMES.join(", ")
            );
        }
    }
    if emit {
        let mut text = String::new();
        for name in &selected {
            let circuit = if *name == "adder" {
                build_cuccaro_adder(config.m)?.0
            } else {
                let (_, build) = registry()
                    .into_iter()
                    .find(|(n, _)| n == name)
                    .expect("registered");
                build()?.circuit
            };
            let _ = writeln!(text, "# {name}");
            text.push_str(&to_text(&circuit));
        }
        let json = json!({ "circuits": selected });
        return Ok(Outcome::new(text, json));
    }

    let suite = SuiteConfig {
        random_states: config.random_states,
        seed: seed(config)?,
    };
    let reports: Vec<SuiteReport> = selected
        .iter()
        .map(|n| verify_named(n, &suite))
        .collect::<latticeplan::Result<_>>()?;
    let mut text = String::new();
    let _ = writeln!(text, "seed {}", suite.seed);
    for r in &reports {
        let _ = writeln!(
            text,
            "{:<24} {}  inputs {:>4} basis + {:>2} random  branches {:>7}",
            r.name,
            if r.passed() { "PASS" } else { "FAIL" },
            r.basis_inputs,
            r.random_inputs,
            r.branches_checked
        );
        for f in &r.failures {
            let _ = writeln!(text, "    {f}");
        }
    }
    let mut fixtures = Vec::new();
    for path in zx {
        let source =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let fixture =
            ZxFixture::from_json(&source).with_context(|| format!("in {}", path.display()))?;
        let report = run_fixture(&fixture).with_context(|| format!("in {}", path.display()))?;
        let _ = writeln!(
            text,
            "zx {:<21} {}  checks {}",
            report.name,
            if report.passed() { "PASS" } else { "FAIL" },
            report.checks_run
        );
        for f in &report.failures {
            let _ = writeln!(text, "    {f}");
        }
        fixtures.push(report);
    }
    let passed = reports.iter().all(|r| r.passed()) && fixtures.iter().all(|r| r.passed());
    let _ = writeln!(
        text,
        "{}",
        if passed {
            "all checks passed"
        } else {
            "FAILED"
        }
    );
    let json = json!({
        "seed": suite.seed,
        "constructions": reports,
        "zx_fixtures": fixtures,
        "passed": passed,
    });
    let mut outcome = Outcome::new(text, json);
    outcome.passed = passed;
    Ok(outcome)
}

fn cmd_estimate(config: &RunConfig) -> Result<Outcome> {
    let spec = config.factory_spec()?;
    let report = ccz_rate(&spec, &config.assumptions)?;
    let advisory = select_code_distances(
        &config.assumptions,
        config.target_volume,
        &config.error_model(),
    )?
    .t_factory_advisory;
    let mut text = format!("{report}\n");
    if advisory {
        text.push_str("advisory         volume favours T factories\n");
    }
    let _ = writeln!(
        text,
        "summary          {} factories, {} kHz, {:.2}M qubits",
        report.factories_needed,
        rational::format_significant(&report.effective_rate_khz, 2),
        report.physical_qubits_total as f64 / 1e6
    );
    let mut json = report.to_json();
    json["cycle_time_us"] = json!(config.assumptions.cycle_time.to_string());
    json["reaction_time_us"] = json!(config.assumptions.reaction_time.to_string());
    json["gate_error"] = json!(config.assumptions.gate_error);
    json["t_factory_advisory"] = json!(advisory);
    Ok(Outcome::new(text, json))
}

fn factory_count(config: &RunConfig, spec: &FactorySpec) -> Result<usize> {
    match config.factories {
        Some(n) => Ok(n),
        None => Ok(ccz_rate(spec, &config.assumptions)?.factories_needed as usize),
    }
}

fn windowed(trace: ScheduleTrace, window: Option<(Q, Q)>) -> Result<ScheduleTrace> {
    Ok(match window {
        Some((a, b)) => trace.window(to_ns(&a)?, to_ns(&b)?),
        None => trace,
    })
}

fn cmd_schedule(config: &RunConfig, mode: Mode) -> Result<Outcome> {
    let spec = config.factory_spec()?;
    let a = &config.assumptions;
    let n = factory_count(config, &spec)?;
    let options = SimOptions {
        buffer: config.buffer,
    };
    let lookup = || LookupSpec::new(config.entries, config.output_bits, config.sides);
    let (trace, phases) = match mode {
        Mode::Adder => {
            let dag = build_adder_dag(config.m)?;
            (simulate_reaction_limited(&dag, &spec, a, n, options)?, None)
        }
        Mode::Lookup => (simulate_lookup(&lookup()?, &spec, a, n, options)?, None),
        Mode::Timeline => {
            let t = phase_timeline(&lookup()?, config.m, &spec, a, n)?;
            (t.trace.clone(), Some(t))
        }
    };
    let mut text = String::new();
    let _ = writeln!(text, "distances        d1={} d2={}", spec.d1, spec.d2);
    text.push_str(&trace.summary());
    if let Some(t) = &phases {
        let _ = writeln!(text, "phases");
        for p in &t.phases {
            let _ = writeln!(
                text,
                "  {:<10} start {:>10.3} µs  duration {:>10.3} µs  toffolis {}",
                p.name,
                p.start_ns as f64 / 1e3,
                p.duration_ns as f64 / 1e3,
                p.toffolis
            );
        }
        let _ = writeln!(text, "total            {:.3} ms", t.total_ns() as f64 / 1e6);
    }
    let exported = windowed(trace, config.window_us)?;
    let json = json!({
        "d1": spec.d1,
        "d2": spec.d2,
        "factories": n,
        "makespan_ns": exported.makespan_ns,
        "makespan_ms": exported.makespan_ms(),
        "limiter": exported.limiter,
        "produced": exported.produced,
        "consumed": exported.consumed,
        "phases": phases.as_ref().map(|t| &t.phases),
    });
    let mut outcome = Outcome::new(text, json);
    outcome
        .artifacts
        .push(("trace.jsonl".into(), exported.to_json_lines().into_bytes()));
    Ok(outcome)
}

fn layout_summary(plan: &Floorplan, report: &ValidationReport) -> String {
    let mut text = String::new();
    let _ = writeln!(
        text,
        "{:?} floorplan {}x{} patches at d={}",
        plan.kind, plan.width, plan.height, plan.patch_distance
    );
    if let Some(p) = &plan.pattern {
        let _ = writeln!(text, "pattern          {p}");
    }
    for role in [Role::CczFactory, Role::FixupBox] {
        let n = plan.regions_of(role).count();
        if n > 0 {
            let _ = writeln!(text, "{:<16} {n}", role.name());
        }
    }
    for c in &report.checks {
        let _ = writeln!(
            text,
            "  {:<28} {}  {}",
            c.name,
            if c.passed { "PASS" } else { "FAIL" },
            c.detail
        );
    }
    let _ = writeln!(
        text,
        "{}",
        if report.passed() {
            "layout valid"
        } else {
            "layout INVALID"
        }
    );
    text
}

fn cmd_layout(config: &RunConfig, lookup: bool) -> Result<Outcome> {
    let spec = config.factory_spec()?;
    let plan = if lookup {
        let params = LookupLayoutParams {
            pattern: config.pattern.clone(),
            ..LookupLayoutParams::default()
        };
        plan_lookup_layout(config.rows, &spec, &params)?
    } else {
        let n = factory_count(config, &spec)?;
        plan_adder_layout(config.m, &spec, n, &AdderLayoutParams::default())?
    };
    let report = validate(&plan);
    let text = layout_summary(&plan, &report);
    let json = json!({
        "kind": plan.kind,
        "width": plan.width,
        "height": plan.height,
        "patch_distance": plan.patch_distance,
        "checks": report.checks,
        "passed": report.passed(),
    });
    let mut outcome = Outcome::new(text, json);
    outcome.passed = report.passed();
    outcome
        .artifacts
        .push(("floorplan.svg".into(), export(&plan, ExportFormat::Svg)));
    outcome
        .artifacts
        .push(("floorplan.json".into(), export(&plan, ExportFormat::Json)));
    Ok(outcome)
}
