//! CCZ factory throughput, code distance selection and footprint.
//!
//! Rates are kHz and times microseconds, both exact rationals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, frac, int, Q};

/// Footprint of one CCZ factory in logical patches.
pub const FACTORY_WIDTH: usize = 15;
pub const FACTORY_HEIGHT: usize = 8;
pub const FACTORY_PATCHES: usize = FACTORY_WIDTH * FACTORY_HEIGHT;

/// Above this many Toffolis the report advises T factories instead.
pub const T_FACTORY_ADVISORY_VOLUME: f64 = 1e13;

/// Quoted whole-machine qubit ceiling; not derived by this model.
pub const QUOTED_TOTAL_QUBIT_CEILING: u64 = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Planar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalAssumptions {
    /// µs per surface code cycle.
    pub cycle_time: Q,
    /// µs from a measurement to the dependent basis choice.
    pub reaction_time: Q,
    pub gate_error: f64,
    pub connectivity: Connectivity,
}

impl Default for PhysicalAssumptions {
    fn default() -> Self {
        PhysicalAssumptions {
            cycle_time: int(1),
            reaction_time: int(10),
            gate_error: 1e-3,
            connectivity: Connectivity::Planar,
        }
    }
}

impl PhysicalAssumptions {
    pub fn validate(&self) -> Result<()> {
        if self.cycle_time <= int(0) || self.reaction_time <= int(0) {
            return Err(Error::argument("cycle and reaction times must be positive"));
        }
        if self.gate_error.is_nan() || self.gate_error <= 0.0 {
            return Err(Error::argument("gate error must be positive"));
        }
        let threshold = ErrorModel::default().threshold;
        if self.gate_error >= threshold {
            return Err(Error::TooCloseToThreshold {
                gate_error: self.gate_error,
                threshold,
            });
        }
        Ok(())
    }

    /// CCZ states per µs needed to keep up with the control system, in kHz.
    pub fn reaction_rate_khz(&self) -> Q {
        int(1000) / self.reaction_time
    }
}

/// How the level-2 factory injects its T states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectionStyle {
    /// 5.5·d cycles per CCZ.
    Legacy,
    /// 5·d cycles per CCZ.
    Overlapped,
}

/// Level-1 T factory variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum T1Style {
    /// 6.25·d1 cycles.
    Prior,
    /// 5.75·d1 cycles.
    Improved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorySpec {
    pub d1: u32,
    pub d2: u32,
    pub injection: InjectionStyle,
    pub t1_style: T1Style,
    pub t1_factory_count: u32,
    pub t_states_per_ccz: u32,
}

impl FactorySpec {
    pub fn new(d1: u32, d2: u32) -> Result<Self> {
        let spec = FactorySpec {
            d1,
            d2,
            injection: InjectionStyle::Overlapped,
            t1_style: T1Style::Improved,
            t1_factory_count: 6,
            t_states_per_ccz: 8,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, d) in [("d1", self.d1), ("d2", self.d2)] {
            if d < 3 || d % 2 == 0 {
                return Err(Error::argument(format!(
                    "{name} must be odd and at least 3, got {d}"
                )));
            }
        }
        if self.t1_factory_count == 0 || self.t_states_per_ccz == 0 {
            return Err(Error::argument("factory counts must be positive"));
        }
        Ok(())
    }

    pub fn ccz_depth_cycles(&self) -> Q {
        let per_d = match self.injection {
            InjectionStyle::Legacy => frac(11, 2),
            InjectionStyle::Overlapped => int(5),
        };
        per_d * int(self.d2.into())
    }

    pub fn t1_depth_cycles(&self) -> Q {
        let per_d = match self.t1_style {
            T1Style::Prior => frac(25, 4),
            T1Style::Improved => frac(23, 4),
        };
        per_d * int(self.d1.into())
    }

    /// Cycles of level-1 production per CCZ state across all T factories.
    pub fn t1_cycles_per_ccz(&self) -> Q {
        self.t1_depth_cycles() * int(self.t_states_per_ccz.into())
            / int(self.t1_factory_count.into())
    }

    pub fn footprint_patches(&self) -> usize {
        FACTORY_PATCHES
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitingFactor {
    Level1,
    Level2,
}

impl fmt::Display for LimitingFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitingFactor::Level1 => "level-1 T supply",
            LimitingFactor::Level2 => "level-2 depth",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThroughputReport {
    pub spec: FactorySpec,
    pub level2_rate_khz: Q,
    pub level1_bound_khz: Q,
    pub effective_rate_khz: Q,
    pub limiting_factor: LimitingFactor,
    pub factories_needed: u64,
    pub physical_qubits_total: u64,
}

/// Level-2 rate, level-1 bound and their minimum. Ties go to level 2.
pub fn rates(spec: &FactorySpec, a: &PhysicalAssumptions) -> (Q, Q, Q, LimitingFactor) {
    let level2 = int(1000) / (spec.ccz_depth_cycles() * a.cycle_time);
    let level1 = int(1000) / (spec.t1_cycles_per_ccz() * a.cycle_time);
    if level1 < level2 {
        (level2, level1, level1, LimitingFactor::Level1)
    } else {
        (level2, level1, level2, LimitingFactor::Level2)
    }
}

pub fn ccz_rate(spec: &FactorySpec, a: &PhysicalAssumptions) -> Result<ThroughputReport> {
    spec.validate()?;
    a.validate()?;
    let (level2, level1, effective, limiting) = rates(spec, a);
    let factories_needed = factories_for_reaction_limit(spec, a)?;
    Ok(ThroughputReport {
        spec: *spec,
        level2_rate_khz: level2,
        level1_bound_khz: level1,
        effective_rate_khz: effective,
        limiting_factor: limiting,
        factories_needed,
        physical_qubits_total: physical_qubits(spec, factories_needed)?,
    })
}

/// Factories whose combined output matches one CCZ per reaction time.
pub fn factories_for_reaction_limit(spec: &FactorySpec, a: &PhysicalAssumptions) -> Result<u64> {
    spec.validate()?;
    if a.cycle_time <= int(0) || a.reaction_time <= int(0) {
        return Err(Error::argument("cycle and reaction times must be positive"));
    }
    let (_, _, effective, _) = rates(spec, a);
    let n = rational::ceil(&(a.reaction_rate_khz() / effective)).max(1);
    Ok(n as u64)
}

pub fn qubits_per_patch(d: u32) -> u64 {
    2 * u64::from(d + 1).pow(2)
}

pub fn physical_qubits(spec: &FactorySpec, n_factories: u64) -> Result<u64> {
    spec.validate()?;
    if n_factories == 0 {
        return Err(Error::argument("need at least one factory"));
    }
    Ok(n_factories * FACTORY_PATCHES as u64 * qubits_per_patch(spec.d2))
}

/// Surface code logical error fit used to pick code distances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorModel {
    /// Logical error per patch per d cycles at threshold.
    pub prefactor: f64,
    pub threshold: f64,
    /// Allowed total failure probability over the whole computation.
    pub budget: f64,
}

impl Default for ErrorModel {
    fn default() -> Self {
        ErrorModel {
            prefactor: 0.1,
            threshold: 0.01,
            budget: 0.01,
        }
    }
}

/// Level-2 charge per CCZ is `LEVEL2_VOLUME · d2` patch-rounds at p_L(d2):
/// the 15×8 footprint over 5 rounds, scaled once more by d2.
const LEVEL2_VOLUME: f64 = (FACTORY_PATCHES * 5) as f64;
/// Level-1 charge per T state is `LEVEL1_VOLUME · d1` patch-rounds at p_L(d1).
const LEVEL1_VOLUME: f64 = 115.0;
/// Pairs of faulty T states (out of 8) that slip past level-2 detection.
const LEVEL1_PAIRS: f64 = 28.0;
const MAX_DISTANCE: u32 = 201;

impl ErrorModel {
    pub fn logical_error(&self, gate_error: f64, d: u32) -> f64 {
        self.prefactor * (gate_error / self.threshold).powf(f64::from(d + 1) / 2.0)
    }

    /// Failure probability of `volume` CCZ states attributed to level 2.
    pub fn level2_failure(&self, gate_error: f64, d2: u32, volume: f64) -> f64 {
        volume * LEVEL2_VOLUME * f64::from(d2) * self.logical_error(gate_error, d2)
    }

    /// Failure probability attributed to level-1 T states: two faults must
    /// coincide in one CCZ.
    pub fn level1_failure(&self, gate_error: f64, d1: u32, volume: f64) -> f64 {
        let per_t = LEVEL1_VOLUME * f64::from(d1) * self.logical_error(gate_error, d1);
        volume * LEVEL1_PAIRS * per_t * per_t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistanceChoice {
    pub d1: u32,
    pub d2: u32,
    /// The volume is large enough that T factories are the better tool.
    pub t_factory_advisory: bool,
}

/// Smallest odd distances keeping level 2 within the budget and level 1
/// within half of it.
pub fn select_code_distances(
    a: &PhysicalAssumptions,
    target_volume: f64,
    model: &ErrorModel,
) -> Result<DistanceChoice> {
    if target_volume.is_nan() || target_volume < 1.0 {
        return Err(Error::argument(
            "target volume must be at least one Toffoli",
        ));
    }
    if a.gate_error.is_nan() || a.gate_error <= 0.0 {
        return Err(Error::argument("gate error must be positive"));
    }
    if a.gate_error >= model.threshold {
        return Err(Error::TooCloseToThreshold {
            gate_error: a.gate_error,
            threshold: model.threshold,
        });
    }
    let smallest = |ok: &dyn Fn(u32) -> bool| {
        (3..=MAX_DISTANCE)
            .step_by(2)
            .find(|&d| ok(d))
            .ok_or_else(|| {
                Error::capacity(format!(
                    "no code distance up to {MAX_DISTANCE} meets the error budget"
                ))
            })
    };
    let d2 = smallest(&|d| model.level2_failure(a.gate_error, d, target_volume) <= model.budget)?;
    let d1 =
        smallest(&|d| model.level1_failure(a.gate_error, d, target_volume) <= model.budget / 2.0)?;
    Ok(DistanceChoice {
        d1,
        d2,
        t_factory_advisory: target_volume > T_FACTORY_ADVISORY_VOLUME,
    })
}

impl ThroughputReport {
    pub fn to_json(&self) -> serde_json::Value {
        let rate = |q: &Q| {
            serde_json::json!({
                "khz": rational::to_f64(q),
                "exact": q.to_string(),
                "display": rational::format_significant(q, 2),
            })
        };
        serde_json::json!({
            "d1": self.spec.d1,
            "d2": self.spec.d2,
            "injection": self.spec.injection,
            "ccz_depth_cycles": self.spec.ccz_depth_cycles().to_string(),
            "t1_depth_cycles": self.spec.t1_depth_cycles().to_string(),
            "level2_rate": rate(&self.level2_rate_khz),
            "level1_bound": rate(&self.level1_bound_khz),
            "effective_rate": rate(&self.effective_rate_khz),
            "limiting_factor": self.limiting_factor,
            "factories_needed": self.factories_needed,
            "physical_qubits_total": self.physical_qubits_total,
            "state_infidelity": "not modeled",
        })
    }
}

impl fmt::Display for ThroughputReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let khz = |q: &Q| {
            format!(
                "{} kHz ({})",
                rational::format_significant(q, 2),
                rational::format_fixed(q, 3)
            )
        };
        writeln!(
            f,
            "distances        d1={} d2={}",
            self.spec.d1, self.spec.d2
        )?;
        writeln!(f, "level-2 rate     {}", khz(&self.level2_rate_khz))?;
        writeln!(f, "level-1 bound    {}", khz(&self.level1_bound_khz))?;
        writeln!(f, "effective rate   {}", khz(&self.effective_rate_khz))?;
        writeln!(f, "limited by       {}", self.limiting_factor)?;
        writeln!(f, "factories        {}", self.factories_needed)?;
        writeln!(
            f,
            "physical qubits  {} ({:.2}M)",
            self.physical_qubits_total,
            self.physical_qubits_total as f64 / 1e6
        )?;
        write!(f, "state infidelity not modeled")
    }
}
