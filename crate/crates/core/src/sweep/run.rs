use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Scenario, SolutionId, SystemConfig};
use crate::montecarlo::{estimate_sop, McConfig};
use crate::secrecy::{sop_asymptotic, sop_breakdown};

use super::{SweepResult, SweepSpec};

/// One operating point of a sweep for one selection rule. Columns that
/// were not requested, or whose evaluation failed, are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub curve: String,
    pub axis: String,
    pub axis_value: f64,
    pub solution: SolutionId,
    pub sop_near_exact: Option<f64>,
    pub sop_far_exact: Option<f64>,
    pub sop_overall_exact: Option<f64>,
    pub sop_near_asym: Option<f64>,
    pub sop_far_asym: Option<f64>,
    pub sop_overall_asym: Option<f64>,
    pub sop_near_mc: Option<f64>,
    pub sop_near_mc_stderr: Option<f64>,
    pub sop_far_mc: Option<f64>,
    pub sop_far_mc_stderr: Option<f64>,
    pub sop_overall_mc: Option<f64>,
    pub sop_overall_mc_stderr: Option<f64>,
    /// Messages of failed evaluations, `; `-separated.
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(curve: &str, spec: &SweepSpec, value: f64, solution: SolutionId) -> Self {
        Self {
            curve: curve.to_string(),
            axis: spec.axis.name().to_string(),
            axis_value: value,
            solution,
            sop_near_exact: None,
            sop_far_exact: None,
            sop_overall_exact: None,
            sop_near_asym: None,
            sop_far_asym: None,
            sop_overall_asym: None,
            sop_near_mc: None,
            sop_near_mc_stderr: None,
            sop_far_mc: None,
            sop_far_mc_stderr: None,
            sop_overall_mc: None,
            sop_overall_mc_stderr: None,
            error: None,
        }
    }

    fn push_error(&mut self, what: &str, e: impl std::fmt::Display) {
        let msg = format!("{what}: {e}");
        self.error = Some(match self.error.take() {
            Some(prev) => format!("{prev}; {msg}"),
            None => msg,
        });
    }
}

fn evaluate_row(spec: &SweepSpec, curve_idx: usize, value: f64, sol: SolutionId) -> SweepRow {
    let curve = &spec.curves[curve_idx];
    let mut row = SweepRow::empty(&curve.label, spec, value, sol);
    let sc = match spec
        .config_for(curve, value)
        .map_err(|e| e.to_string())
        .and_then(|cfg| Scenario::new(cfg).map_err(|e| e.to_string()))
    {
        Ok(sc) => sc,
        Err(e) => {
            row.push_error("config", e);
            return row;
        }
    };

    if spec.outputs.exact {
        match sop_breakdown(&sc, sol) {
            Ok(b) => {
                row.sop_near_exact = Some(b.sop_near);
                row.sop_far_exact = Some(b.sop_far);
                row.sop_overall_exact = Some(b.sop_overall);
            }
            Err(e) => row.push_error("exact", e),
        }
    }
    if spec.outputs.asymptotic {
        match sop_asymptotic(&sc, sol) {
            // The leading-order expressions are unbounded at low SNR;
            // cap them at 1 so every column stays a probability.
            Ok(a) => {
                row.sop_near_asym = Some(a.sop_near.clamp(0.0, 1.0));
                row.sop_far_asym = Some(a.sop_far.clamp(0.0, 1.0));
                row.sop_overall_asym = Some(a.sop_overall.clamp(0.0, 1.0));
            }
            Err(e) => row.push_error("asymptotic", e),
        }
    }
    if spec.outputs.montecarlo {
        let mc = McConfig::new(spec.trials, spec.seed).with_mode(spec.mode);
        match estimate_sop(&sc, sol, &mc) {
            Ok(est) => {
                row.sop_near_mc = Some(est.near.mean);
                row.sop_near_mc_stderr = Some(est.near.std_error);
                row.sop_far_mc = Some(est.far.mean);
                row.sop_far_mc_stderr = Some(est.far.std_error);
                row.sop_overall_mc = Some(est.overall.mean);
                row.sop_overall_mc_stderr = Some(est.overall.std_error);
            }
            Err(e) => row.push_error("montecarlo", e),
        }
    }
    if row.error.is_some() {
        log::warn!(
            "{} {}={} solution {}: {}",
            row.curve,
            row.axis,
            row.axis_value,
            sol,
            row.error.as_deref().unwrap_or_default()
        );
    }
    row
}

/// Evaluates every (curve, value, solution) point of a validated spec.
///
/// Points are computed in parallel but returned in curve, value, solution
/// order. A failing point does not stop the sweep: its row carries the
/// error message and empty cells.
pub fn run_sweep(spec: &SweepSpec) -> SweepResult<Vec<SweepRow>> {
    spec.validate()?;
    let points: Vec<(usize, f64, SolutionId)> = (0..spec.curves.len())
        .flat_map(|c| {
            spec.values
                .iter()
                .flat_map(move |&v| spec.solutions.iter().map(move |&s| (c, v, s)))
        })
        .collect();
    Ok(points
        .into_par_iter()
        .map(|(c, v, s)| evaluate_row(spec, c, v, s))
        .collect())
}

/// Power split minimising the exact overall SOP on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStar {
    pub alpha_far: f64,
    pub sop_overall: f64,
}

/// Searches `grid` (every point in `(0.5, 1)`) for the `α_F` minimising the
/// exact overall SOP, with `α_N = 1 − α_F`. Ties go to the smaller `α_F`.
pub fn find_alpha_star(cfg: &SystemConfig, sol: SolutionId, grid: &[f64]) -> Result<AlphaStar> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", "needs at least one value"));
    }
    if let Some(&bad) = grid.iter().find(|&&a| !(a > 0.5 && a < 1.0)) {
        return Err(Error::invalid("alphaF", format!("grid value {bad} outside (0.5, 1)")));
    }
    let values = grid
        .par_iter()
        .map(|&alpha| {
            let mut c = cfg.clone();
            c.set_alpha_far(alpha);
            let sc = Scenario::new(c)?;
            Ok((alpha, sop_breakdown(&sc, sol)?.sop_overall))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = AlphaStar {
        alpha_far: values[0].0,
        sop_overall: values[0].1,
    };
    for &(alpha, sop) in &values[1..] {
        if sop < best.sop_overall || (sop == best.sop_overall && alpha < best.alpha_far) {
            best = AlphaStar {
                alpha_far: alpha,
                sop_overall: sop,
            };
        }
    }
    Ok(best)
}
