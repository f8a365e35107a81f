use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    build_autoccz, build_cuccaro_adder, build_delayed_choice_cz,
    build_delayed_choice_cz_with_choice_qubit, build_fowler_multiplexer_cz, build_maj,
    build_maj_inverse, build_toffoli_from_ccz, build_uma, AdderLayout, Construction, CzChoice,
    Target, ToffoliStyle,
};
use crate::circuit::{
    channel_equals_unitary_mod_frame, enumerate_branches, run_reversible, total_probability,
    BranchOutcome, GateKind, StateVector, PROBABILITY_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::par;

/// Seed used when `LATTICEPLAN_SEED` is not set.
pub const DEFAULT_SEED: u64 = 0x5eed_2019;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    pub random_states: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            random_states: 20,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub basis_inputs: usize,
    pub random_inputs: usize,
    /// Enumerated branches, including impossible ones.
    pub branches_checked: usize,
    pub possible_branches: usize,
    pub max_probability_error: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn inputs_checked(&self) -> usize {
        self.basis_inputs + self.random_inputs
    }
}

type Builder = fn() -> Result<Construction>;

/// Every named construction with a channel-level suite.
pub fn registry() -> Vec<(&'static str, Builder)> {
    vec![
        ("delayed-cz-apply", || {
            build_delayed_choice_cz(CzChoice::Apply)
        }),
        ("delayed-cz-skip", || {
            build_delayed_choice_cz(CzChoice::Skip)
        }),
        (
            "delayed-cz-choice-qubit",
            build_delayed_choice_cz_with_choice_qubit,
        ),
        ("fowler-mux-apply", || {
            build_fowler_multiplexer_cz(CzChoice::Apply)
        }),
        ("fowler-mux-skip", || {
            build_fowler_multiplexer_cz(CzChoice::Skip)
        }),
        ("autoccz", || build_autoccz([0, 1, 2]).map(|(_, c)| c)),
        ("toffoli", || build_toffoli_from_ccz(0, 1, 2)),
        ("maj", || build_maj(ToffoliStyle::AutoCcz)),
        ("uma", || build_uma(ToffoliStyle::AutoCcz)),
        ("maj-inverse", || build_maj_inverse(ToffoliStyle::AutoCcz)),
    ]
}

/// Names accepted by [`verify_named`], in report order.
pub const CONSTRUCTION_NAMES: [&str; 11] = [
    "delayed-cz-apply",
    "delayed-cz-skip",
    "delayed-cz-choice-qubit",
    "fowler-mux-apply",
    "fowler-mux-skip",
    "autoccz",
    "toffoli",
    "maj",
    "uma",
    "maj-inverse",
    "adder",
];

pub fn verify_named(name: &str, config: &SuiteConfig) -> Result<SuiteReport> {
    if name == "adder" {
        return verify_adder_exhaustive(2..=8);
    }
    let (_, build) = registry()
        .into_iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| {
            Error::argument(format!(
                "unknown construction {name:?}; known: {}",
                CONSTRUCTION_NAMES.join(", ")
            ))
        })?;
    verify_construction(&build()?, config)
}

/// Checks the construction on every basis input and `random_states` seeded
/// random inputs, over every measurement branch.
pub fn verify_construction(c: &Construction, config: &SuiteConfig) -> Result<SuiteReport> {
    let n = c.num_data_qubits();
    let mut inputs: Vec<(String, StateVector)> = (0..1usize << n)
        .map(|i| Ok((format!("basis {i}"), StateVector::basis(n, i)?)))
        .collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for r in 0..config.random_states {
        inputs.push((format!("random #{r}"), StateVector::random(n, &mut rng)?));
    }
    let results = par::map(&inputs, |(label, input)| check_input(c, label, input));
    let mut report = SuiteReport {
        name: c.name.clone(),
        basis_inputs: 1 << n,
        random_inputs: config.random_states,
        branches_checked: 0,
        possible_branches: 0,
        max_probability_error: 0.0,
        failures: Vec::new(),
    };
    for r in results {
        let r = r?;
        report.branches_checked += r.branches;
        report.possible_branches += r.possible;
        report.max_probability_error = report.max_probability_error.max(r.probability_error);
        report.failures.extend(r.failure);
    }
    Ok(report)
}

struct InputResult {
    branches: usize,
    possible: usize,
    probability_error: f64,
    failure: Option<String>,
}

fn check_input(c: &Construction, label: &str, input: &StateVector) -> Result<InputResult> {
    let branches = enumerate_branches(&c.circuit, input)?;
    let probability_error = (total_probability(&branches) - 1.0).abs();
    let mut failure = None;
    if probability_error > PROBABILITY_TOLERANCE {
        failure = Some(format!(
            "{}: {label}: branch probabilities sum to 1 - {probability_error:e}",
            c.name
        ));
    } else if !channel_matches(c, &branches, input)? {
        failure = Some(format!(
            "{}: {label}: channel differs from target modulo frame",
            c.name
        ));
    }
    Ok(InputResult {
        branches: branches.len(),
        possible: branches.iter().filter(|b| b.is_possible()).count(),
        probability_error,
        failure,
    })
}

fn channel_matches(
    c: &Construction,
    branches: &[BranchOutcome],
    input: &StateVector,
) -> Result<bool> {
    match &c.target {
        Target::Fixed(gates) => {
            channel_equals_unitary_mod_frame(branches, input, gates, &c.data_qubits)
        }
        Target::Select {
            key,
            when_one,
            when_zero,
        } => {
            let (ones, zeros): (Vec<BranchOutcome>, Vec<BranchOutcome>) = branches
                .iter()
                .cloned()
                .partition(|b| b.outcome_bits[key.0]);
            Ok(
                channel_equals_unitary_mod_frame(&ones, input, when_one, &c.data_qubits)?
                    && channel_equals_unitary_mod_frame(&zeros, input, when_zero, &c.data_qubits)?,
            )
        }
    }
}

/// Runs the ripple-carry adder on every `(t, i, c_in)` for each width in
/// `widths` and compares against integer addition. Also checks the Toffoli
/// count.
pub fn verify_adder_exhaustive(widths: std::ops::RangeInclusive<usize>) -> Result<SuiteReport> {
    let cases: Vec<(usize, usize)> = widths
        .clone()
        .flat_map(|m| (0..1usize << m).map(move |t| (m, t)))
        .collect();
    let circuits = widths
        .clone()
        .map(|m| build_cuccaro_adder(m).map(|(c, spec)| (m, c, spec)))
        .collect::<Result<Vec<_>>>()?;
    let mut failures = Vec::new();
    for (m, c, spec) in &circuits {
        let ccx = c.count_gates(GateKind::Ccx);
        if ccx != spec.toffoli_count || ccx != 2 * m - 3 {
            failures.push(format!(
                "adder m={m}: {ccx} Toffolis, expected {}",
                2 * m - 3
            ));
        }
    }
    let first = *widths.start();
    let results = par::map(&cases, |&(m, t)| -> Result<Vec<String>> {
        let circuit = &circuits[m - first].1;
        let layout = AdderLayout { m };
        let mut bad = Vec::new();
        for i in 0..1usize << (m - 1) {
            for cin in [false, true] {
                let out = run_reversible(circuit, &layout.encode(t, i, cin))?;
                let got = layout.decode(&out)?;
                let want = ((t + i + usize::from(cin)) % (1 << m), i, cin);
                if got != want {
                    bad.push(format!(
                        "adder m={m}: t={t} i={i} c_in={cin} gave {got:?}, expected {want:?}"
                    ));
                }
            }
        }
        Ok(bad)
    });
    let mut inputs = 0;
    for (m, _) in &cases {
        inputs += 2usize << (m - 1);
    }
    for r in results {
        failures.extend(r?);
    }
    Ok(SuiteReport {
        name: "adder".to_string(),
        basis_inputs: inputs,
        random_inputs: 0,
        branches_checked: 0,
        possible_branches: 0,
        max_probability_error: 0.0,
        failures,
    })
}
