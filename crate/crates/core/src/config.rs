//! Key/value run configuration shared by every CLI command.
//!
//! One `key = value` pair per line; `#` starts a comment. Times are in µs.
//! Command-line flags are applied through [`RunConfig::set`] after the file,
//! so they override it.
//!
//! ```text
//! cycle_time_us    = 1
//! reaction_time_us = 10
//! gate_error       = 1e-3
//! target_volume    = 1e8
//! m                = 1000
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factory::{
    select_code_distances, ErrorModel, FactorySpec, InjectionStyle, PhysicalAssumptions, T1Style,
};
use crate::layout::DEFAULT_PATTERN;
use crate::rational::{self, Q};

pub const KEYS: [&str; 20] = [
    "cycle_time_us",
    "reaction_time_us",
    "gate_error",
    "d1",
    "d2",
    "target_volume",
    "error_budget",
    "injection",
    "t1_style",
    "m",
    "entries",
    "output_bits",
    "sides",
    "factories",
    "pattern",
    "rows",
    "buffer",
    "window_us",
    "seed",
    "random_states",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub assumptions: PhysicalAssumptions,
    pub d1: Option<u32>,
    pub d2: Option<u32>,
    /// Toffolis the computation must survive; drives distance selection.
    pub target_volume: f64,
    pub error_budget: f64,
    pub injection: InjectionStyle,
    pub t1_style: T1Style,
    pub m: usize,
    pub entries: usize,
    pub output_bits: usize,
    pub sides: u32,
    /// Defaults to the reaction-limited count.
    pub factories: Option<usize>,
    pub pattern: String,
    pub rows: usize,
    pub buffer: Option<usize>,
    /// Trace export window `[from, to]` in µs.
    pub window_us: Option<(Q, Q)>,
    pub seed: Option<u64>,
    pub random_states: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            assumptions: PhysicalAssumptions::default(),
            d1: None,
            d2: None,
            target_volume: 1e8,
            error_budget: ErrorModel::default().budget,
            injection: InjectionStyle::Overlapped,
            t1_style: T1Style::Improved,
            m: 1000,
            entries: 1024,
            output_bits: 1000,
            sides: 2,
            factories: None,
            pattern: DEFAULT_PATTERN.to_string(),
            rows: 2,
            buffer: None,
            window_us: None,
            seed: None,
            random_states: 20,
        }
    }
}

fn parse_int<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| {
        Error::argument(format!(
            "{key} expects a non-negative integer, got {value:?}"
        ))
    })
}

fn parse_float(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::argument(format!("{key} expects a number, got {value:?}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = RunConfig::default();
        config.apply_text(text)?;
        Ok(config)
    }

    /// Applies every pair in `text`; errors carry the 1-based line number.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::parse(i + 1, format!("expected `key = value`, got {line:?}"))
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| match e {
                Error::Argument(m) => Error::parse(i + 1, m),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "cycle_time_us" => self.assumptions.cycle_time = rational::parse_decimal(value)?,
            "reaction_time_us" => self.assumptions.reaction_time = rational::parse_decimal(value)?,
            "gate_error" => self.assumptions.gate_error = parse_float(key, value)?,
            "d1" => self.d1 = Some(parse_int(key, value)?),
            "d2" => self.d2 = Some(parse_int(key, value)?),
            "target_volume" => self.target_volume = parse_float(key, value)?,
            "error_budget" => self.error_budget = parse_float(key, value)?,
            "injection" => {
                self.injection = match value {
                    "overlapped" => InjectionStyle::Overlapped,
                    "legacy" => InjectionStyle::Legacy,
                    _ => {
                        return Err(Error::argument(format!(
                            "injection must be overlapped or legacy, got {value:?}"
                        )))
                    }
                }
            }
            "t1_style" => {
                self.t1_style = match value {
                    "improved" => T1Style::Improved,
                    "prior" => T1Style::Prior,
                    _ => {
                        return Err(Error::argument(format!(
                            "t1_style must be improved or prior, got {value:?}"
                        )))
                    }
                }
            }
            "m" => self.m = parse_int(key, value)?,
            "entries" => self.entries = parse_int(key, value)?,
            "output_bits" => self.output_bits = parse_int(key, value)?,
            "sides" => self.sides = parse_int(key, value)?,
            "factories" => self.factories = Some(parse_int(key, value)?),
            "pattern" => self.pattern = value.to_string(),
            "rows" => self.rows = parse_int(key, value)?,
            "buffer" => self.buffer = Some(parse_int(key, value)?),
            "window_us" => {
                let (a, b) = value.split_once("..").ok_or_else(|| {
                    Error::argument(format!("window_us expects `from..to`, got {value:?}"))
                })?;
                let (a, b) = (rational::parse_decimal(a)?, rational::parse_decimal(b)?);
                if a > b {
                    return Err(Error::argument("window_us start is after its end"));
                }
                self.window_us = Some((a, b));
            }
            "seed" => self.seed = Some(parse_int(key, value)?),
            "random_states" => self.random_states = parse_int(key, value)?,
            _ => {
                return Err(Error::argument(format!(
                    "unknown key {key:?}; known keys: {}",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    pub fn error_model(&self) -> ErrorModel {
        ErrorModel {
            budget: self.error_budget,
            ..ErrorModel::default()
        }
    }

    /// Overridden distances, or the ones the error model selects for
    /// `target_volume`. Validates the physical assumptions first.
    pub fn factory_spec(&self) -> Result<FactorySpec> {
        self.assumptions.validate()?;
        let (d1, d2) = match (self.d1, self.d2) {
            (Some(d1), Some(d2)) => (d1, d2),
            (d1, d2) => {
                let chosen = select_code_distances(
                    &self.assumptions,
                    self.target_volume,
                    &self.error_model(),
                )?;
                (d1.unwrap_or(chosen.d1), d2.unwrap_or(chosen.d2))
            }
        };
        let mut spec = FactorySpec::new(d1, d2)?;
        spec.injection = self.injection;
        spec.t1_style = self.t1_style;
        Ok(spec)
    }
}
