//! Parameter sweeps: scenario files, built-in figure presets, sweep
//! execution, optimal power-split search and CSV output.
//!
//! SNRs are given in dB at this boundary only; `10^(dB/10)` converts them
//! to the linear values the rest of the crate uses.

mod output;
mod presets;
mod run;
mod scenario;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{SolutionId, SystemConfig};
use crate::montecarlo::EavesdropperMode;

pub use output::{emit_csv, read_csv, write_csv, CSV_COLUMNS};
pub use presets::{preset, PRESET_NAMES};
pub use run::{find_alpha_star, run_sweep, AlphaStar, SweepRow};
pub use scenario::{load_scenario, parse_scenario};

/// Errors from loading scenarios and running sweeps.
#[derive(Debug, Error)]
pub enum SweepError {
    #[error("{source_name}:{line}:{column}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Model(#[from] crate::Error),

    #[error("invalid sweep: {0}")]
    Spec(String),

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}

pub type SweepResult<T> = std::result::Result<T, SweepError>;

/// `10^(dB/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Gamma0Db,
    GammaEDb,
    AlphaF,
    SourceAntennas,
    NearAntennas,
    FarAntennas,
    EveAntennas,
    NearM,
    FarM,
    EveM,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 10] = [
        SweepAxis::Gamma0Db,
        SweepAxis::GammaEDb,
        SweepAxis::AlphaF,
        SweepAxis::SourceAntennas,
        SweepAxis::NearAntennas,
        SweepAxis::FarAntennas,
        SweepAxis::EveAntennas,
        SweepAxis::NearM,
        SweepAxis::FarM,
        SweepAxis::EveM,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Gamma0Db => "gamma0_dB",
            SweepAxis::GammaEDb => "gammaE_dB",
            SweepAxis::AlphaF => "alphaF",
            SweepAxis::SourceAntennas => "L_S",
            SweepAxis::NearAntennas => "L_N",
            SweepAxis::FarAntennas => "L_F",
            SweepAxis::EveAntennas => "L_E",
            SweepAxis::NearM => "m_N",
            SweepAxis::FarM => "m_F",
            SweepAxis::EveM => "m_E",
        }
    }

    /// Writes `value` into `cfg`. Integer-valued parameters must receive
    /// positive integers; `alphaF` also sets `alphaN = 1 − alphaF`.
    pub fn apply(self, cfg: &mut SystemConfig, value: f64) -> SweepResult<()> {
        if !value.is_finite() {
            return Err(SweepError::Spec(format!("{}: non-finite value", self.name())));
        }
        let count = || -> SweepResult<u32> {
            if value >= 1.0 && value.fract() == 0.0 && value <= f64::from(u32::MAX) {
                Ok(value as u32)
            } else {
                Err(SweepError::Spec(format!(
                    "{} must be a positive integer, got {value}",
                    self.name()
                )))
            }
        };
        match self {
            SweepAxis::Gamma0Db => cfg.gamma0 = db_to_linear(value),
            SweepAxis::GammaEDb => cfg.gamma_e = db_to_linear(value),
            SweepAxis::AlphaF => cfg.set_alpha_far(value),
            SweepAxis::SourceAntennas => cfg.source_antennas = count()?,
            SweepAxis::NearAntennas => cfg.near.antennas = count()?,
            SweepAxis::FarAntennas => cfg.far.antennas = count()?,
            SweepAxis::EveAntennas => cfg.eve.antennas = count()?,
            SweepAxis::NearM => cfg.near.fading.m = count()?,
            SweepAxis::FarM => cfg.far.fading.m = count()?,
            SweepAxis::EveM => cfg.eve.fading.m = count()?,
        }
        Ok(())
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = SweepError;

    fn from_str(s: &str) -> SweepResult<Self> {
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SweepAxis::ALL.iter().map(|a| a.name()).collect();
                SweepError::Spec(format!("unknown parameter `{s}` (expected one of {})", names.join(", ")))
            })
    }
}

/// Which evaluations each row carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outputs {
    pub exact: bool,
    pub asymptotic: bool,
    pub montecarlo: bool,
}

impl Outputs {
    pub const ALL: Outputs = Outputs {
        exact: true,
        asymptotic: true,
        montecarlo: true,
    };

    pub fn is_empty(&self) -> bool {
        !(self.exact || self.asymptotic || self.montecarlo)
    }
}

/// A named set of parameter overrides applied before the sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub overrides: Vec<(SweepAxis, f64)>,
}

/// A fully validated sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemConfig,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub curves: Vec<Curve>,
    pub solutions: Vec<SolutionId>,
    pub outputs: Outputs,
    pub trials: u64,
    /// Every row reuses this seed, so curves share common random numbers.
    pub seed: u64,
    pub mode: EavesdropperMode,
}

impl SweepSpec {
    /// Checks that every (curve, value) pair yields a valid configuration.
    pub fn validate(&self) -> SweepResult<()> {
        if self.values.is_empty() {
            return Err(SweepError::Spec("sweep needs at least one value".into()));
        }
        if self.curves.is_empty() {
            return Err(SweepError::Spec("sweep needs at least one curve".into()));
        }
        if self.solutions.is_empty() {
            return Err(SweepError::Spec("sweep needs at least one solution".into()));
        }
        if self.outputs.is_empty() {
            return Err(SweepError::Spec("outputs must name at least one of exact, asymptotic, montecarlo".into()));
        }
        if self.outputs.montecarlo && self.trials == 0 {
            return Err(SweepError::Spec("trials must be at least 1".into()));
        }
        for curve in &self.curves {
            for &v in &self.values {
                self.config_for(curve, v)?;
            }
        }
        Ok(())
    }

    /// The configuration of one operating point.
    pub fn config_for(&self, curve: &Curve, value: f64) -> SweepResult<SystemConfig> {
        let mut cfg = self.base.clone();
        for &(axis, v) in &curve.overrides {
            axis.apply(&mut cfg, v)?;
        }
        self.axis.apply(&mut cfg, value)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `start:stop:step` into an inclusive grid.
pub fn parse_grid(text: &str) -> SweepResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || SweepError::Spec(format!("grid `{text}` is not start:stop:step"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<SweepResult<_>>()?;
    grid(nums[0], nums[1], nums[2])
}

/// Inclusive arithmetic grid `start, start + step, …, stop`, with values
/// rounded to 12 decimals so that e.g. `0.98` is exactly representable as
/// typed.
pub fn grid(start: f64, stop: f64, step: f64) -> SweepResult<Vec<f64>> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(SweepError::Spec(format!(
            "grid {start}:{stop}:{step} needs step > 0 and stop ≥ start"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n)
        .map(|i| {
            let v = start + i as f64 * step;
            (v * 1e12).round() / 1e12
        })
        .collect())
}

/// Parses `"I"`, `"II"`, `"1"`, `"2"` or `"both"`.
pub fn parse_solutions(text: &str) -> SweepResult<Vec<SolutionId>> {
    match text.trim() {
        "1" | "I" => Ok(vec![SolutionId::SolutionI]),
        "2" | "II" => Ok(vec![SolutionId::SolutionII]),
        "both" => Ok(SolutionId::BOTH.to_vec()),
        other => Err(SweepError::Spec(format!(
            "unknown solution `{other}` (expected 1, 2 or both)"
        ))),
    }
}

/// Parses `"sic"` or `"wces"`.
pub fn parse_mode(text: &str) -> SweepResult<EavesdropperMode> {
    match text.trim() {
        "sic" => Ok(EavesdropperMode::SicWithInterference),
        "wces" => Ok(EavesdropperMode::WorstCase),
        other => Err(SweepError::Spec(format!(
            "unknown eavesdropper mode `{other}` (expected sic or wces)"
        ))),
    }
}
