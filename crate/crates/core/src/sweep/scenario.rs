//! TOML scenario files.
//!
//! ```toml
//! [system]
//! L_S = 2                  # source antennas
//! alphaF = 0.6
//! alphaN = 0.4
//! gamma0_dB = 10
//! gammaE_dB = 10
//! R_F = 0.5
//! R_sN = 0.5
//! R_sF = 0.5
//! quadratureN = 100        # optional, default 100
//! path_loss_exponent = 2   # optional default for links given by position
//!
//! [source]
//! position = [0.0, 0.5]    # needed when any link gives a position
//!
//! [near]                   # likewise [far] and [eve]
//! antennas = 2
//! m = 2
//! omega = 1.0              # optional, default 1
//! position = [0.5, 0.5]    # λ = Ω / d^θ from the source distance ...
//! lambda = 4.0             # ... or λ directly; if both, they must agree
//! path_loss_exponent = 2   # optional per-link override
//!
//! [sweep]
//! axis = "gamma0_dB"       # gamma0_dB gammaE_dB alphaF L_S L_N L_F L_E m_N m_F m_E
//! values = [0, 10, 20]     # or start / stop / step
//! solutions = ["I", "II"]  # optional, default both
//! outputs = ["exact", "asymptotic", "montecarlo"]   # optional, default all
//! trials = 1000000         # optional
//! seed = 1                 # optional
//! mode = "sic"             # optional: sic | wces
//!
//! [[curve]]                # optional, repeatable
//! label = "gammaE = 0 dB"
//! set = { gammaE_dB = 0 }  # any sweep parameter names
//! ```
//!
//! Unknown keys anywhere are errors.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::model::{
    FadingProfile, Link, LinkGeometry, NodePosition, PathModel, SolutionId, SystemConfig,
    DEFAULT_QUADRATURE_N,
};
use crate::montecarlo::{EavesdropperMode, DEFAULT_TRIALS};

use super::presets::preset;
use super::{
    db_to_linear, grid, parse_mode, Curve, Outputs, SweepAxis, SweepError, SweepResult, SweepSpec,
};

/// Default seed for Monte Carlo columns.
pub const DEFAULT_SEED: u64 = 20_190_601;

/// Relative tolerance when a link gives both `lambda` and a position.
const LAMBDA_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    system: SystemSection,
    source: Option<SourceSection>,
    near: LinkSection,
    far: LinkSection,
    eve: LinkSection,
    sweep: SweepSection,
    #[serde(default)]
    curve: Vec<CurveSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    #[serde(rename = "L_S")]
    source_antennas: u32,
    #[serde(rename = "alphaF")]
    alpha_far: f64,
    #[serde(rename = "alphaN")]
    alpha_near: f64,
    #[serde(rename = "gamma0_dB")]
    gamma0_db: f64,
    #[serde(rename = "gammaE_dB")]
    gamma_e_db: f64,
    #[serde(rename = "R_F")]
    rate_far: f64,
    #[serde(rename = "R_sN")]
    secrecy_rate_near: f64,
    #[serde(rename = "R_sF")]
    secrecy_rate_far: f64,
    #[serde(rename = "quadratureN")]
    quadrature_n: Option<usize>,
    path_loss_exponent: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SourceSection {
    position: [f64; 2],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinkSection {
    antennas: u32,
    m: f64,
    omega: Option<f64>,
    lambda: Option<f64>,
    position: Option<[f64; 2]>,
    path_loss_exponent: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    axis: String,
    values: Option<Vec<f64>>,
    start: Option<f64>,
    stop: Option<f64>,
    step: Option<f64>,
    solutions: Option<Vec<String>>,
    outputs: Option<Vec<String>>,
    trials: Option<u64>,
    seed: Option<u64>,
    mode: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveSection {
    label: String,
    #[serde(default)]
    set: BTreeMap<String, f64>,
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.chars().rev().take_while(|&c| c != '\n').count() + 1;
    (line, column)
}

/// Parses scenario text; `source_name` labels parse errors.
pub fn parse_scenario(text: &str, source_name: &str) -> SweepResult<SweepSpec> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_column(text, s.start));
        SweepError::Parse {
            source_name: source_name.to_string(),
            line,
            column,
            message: e.message().trim().to_string(),
        }
    })?;
    build_spec(file)
}

/// Loads a built-in preset by name, or else a scenario file from disk.
pub fn load_scenario(name_or_path: &str) -> SweepResult<SweepSpec> {
    if let Some(spec) = preset(name_or_path) {
        return spec;
    }
    let path = Path::new(name_or_path);
    let text = std::fs::read_to_string(path).map_err(|source| SweepError::Io {
        path: name_or_path.to_string(),
        source,
    })?;
    parse_scenario(&text, name_or_path)
}

fn build_link(
    section: &LinkSection,
    field: &'static str,
    source: Option<NodePosition>,
    default_exponent: Option<f64>,
) -> SweepResult<Link> {
    let fading = FadingProfile::from_real_shape(section.m, section.omega.unwrap_or(1.0))?;
    let geometry = match section.position {
        Some([x, y]) => {
            let source = source.ok_or_else(|| {
                SweepError::Spec(format!("[{field}] gives a position but [source] is missing"))
            })?;
            let exponent = section
                .path_loss_exponent
                .or(default_exponent)
                .ok_or_else(|| {
                    SweepError::Spec(format!("[{field}] needs a path_loss_exponent"))
                })?;
            Some(LinkGeometry::between(&source, &NodePosition::new(x, y)?, exponent)?)
        }
        None => None,
    };
    let path = match (geometry, section.lambda) {
        (Some(g), Some(lambda)) => {
            let implied = fading.omega / g.distance.powf(g.path_loss_exponent);
            if ((implied - lambda) / lambda).abs() > LAMBDA_MATCH_TOL {
                return Err(SweepError::Spec(format!(
                    "[{field}] lambda = {lambda} disagrees with the geometry, which gives {implied}"
                )));
            }
            PathModel::Geometry(g)
        }
        (Some(g), None) => PathModel::Geometry(g),
        (None, Some(lambda)) => PathModel::MeanGain(lambda),
        (None, None) => {
            return Err(SweepError::Spec(format!(
                "[{field}] needs either lambda or position"
            )))
        }
    };
    Ok(Link {
        antennas: section.antennas,
        fading,
        path,
    })
}

fn parse_solution_list(items: &[String]) -> SweepResult<Vec<SolutionId>> {
    let mut out = Vec::new();
    for item in items {
        let sol = match item.as_str() {
            "I" | "1" => SolutionId::SolutionI,
            "II" | "2" => SolutionId::SolutionII,
            other => {
                return Err(SweepError::Spec(format!(
                    "unknown solution `{other}` (expected I or II)"
                )))
            }
        };
        if !out.contains(&sol) {
            out.push(sol);
        }
    }
    Ok(out)
}

fn parse_outputs(items: &[String]) -> SweepResult<Outputs> {
    let mut out = Outputs {
        exact: false,
        asymptotic: false,
        montecarlo: false,
    };
    for item in items {
        match item.as_str() {
            "exact" => out.exact = true,
            "asymptotic" => out.asymptotic = true,
            "montecarlo" => out.montecarlo = true,
            other => {
                return Err(SweepError::Spec(format!(
                    "unknown output `{other}` (expected exact, asymptotic or montecarlo)"
                )))
            }
        }
    }
    Ok(out)
}

fn build_spec(file: ScenarioFile) -> SweepResult<SweepSpec> {
    let sys = &file.system;
    let source = file
        .source
        .as_ref()
        .map(|s| NodePosition::new(s.position[0], s.position[1]))
        .transpose()?;
    let exponent = sys.path_loss_exponent;
    let base = SystemConfig {
        source_antennas: sys.source_antennas,
        near: build_link(&file.near, "near", source, exponent)?,
        far: build_link(&file.far, "far", source, exponent)?,
        eve: build_link(&file.eve, "eve", source, exponent)?,
        alpha_far: sys.alpha_far,
        alpha_near: sys.alpha_near,
        gamma0: db_to_linear(sys.gamma0_db),
        gamma_e: db_to_linear(sys.gamma_e_db),
        rate_far: sys.rate_far,
        secrecy_rate_near: sys.secrecy_rate_near,
        secrecy_rate_far: sys.secrecy_rate_far,
        quadrature_n: sys.quadrature_n.unwrap_or(DEFAULT_QUADRATURE_N),
    };
    base.validate()?;

    let sw = &file.sweep;
    let axis: SweepAxis = sw.axis.parse()?;
    let values = match (&sw.values, sw.start, sw.stop, sw.step) {
        (Some(v), None, None, None) => v.clone(),
        (None, Some(a), Some(b), Some(s)) => grid(a, b, s)?,
        _ => {
            return Err(SweepError::Spec(
                "[sweep] needs either `values` or all of `start`, `stop`, `step`".into(),
            ))
        }
    };
    let solutions = match &sw.solutions {
        Some(items) => parse_solution_list(items)?,
        None => SolutionId::BOTH.to_vec(),
    };
    let outputs = match &sw.outputs {
        Some(items) => parse_outputs(items)?,
        None => Outputs::ALL,
    };
    let mode = match &sw.mode {
        Some(m) => parse_mode(m)?,
        None => EavesdropperMode::SicWithInterference,
    };
    let curves = if file.curve.is_empty() {
        vec![Curve {
            label: "base".into(),
            overrides: Vec::new(),
        }]
    } else {
        file.curve
            .iter()
            .map(|c| {
                let overrides = c
                    .set
                    .iter()
                    .map(|(k, &v)| Ok((k.parse::<SweepAxis>()?, v)))
                    .collect::<SweepResult<Vec<_>>>()?;
                Ok(Curve {
                    label: c.label.clone(),
                    overrides,
                })
            })
            .collect::<SweepResult<Vec<_>>>()?
    };
    let spec = SweepSpec {
        base,
        axis,
        values,
        curves,
        solutions,
        outputs,
        trials: sw.trials.unwrap_or(DEFAULT_TRIALS),
        seed: sw.seed.unwrap_or(DEFAULT_SEED),
        mode,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    const MINIMAL: &str = r#"
[system]
L_S = 2
alphaF = 0.6
alphaN = 0.4
gamma0_dB = 10
gammaE_dB = 10
R_F = 0.5
R_sN = 0.5
R_sF = 0.5

[near]
antennas = 2
m = 2
lambda = 4.0

[far]
antennas = 2
m = 2
lambda = 1.0

[eve]
antennas = 2
m = 2
lambda = 0.108108108108108

[sweep]
axis = "gamma0_dB"
values = [0, 10]
"#;

    #[test]
    fn minimal_file_parses() {
        let spec = parse_scenario(MINIMAL, "t").unwrap();
        assert_eq!(spec.values, vec![0.0, 10.0]);
        assert_eq!(spec.solutions, SolutionId::BOTH.to_vec());
        assert_eq!(spec.outputs, Outputs::ALL);
        assert_eq!(spec.curves.len(), 1);
        assert_eq!(spec.base.quadrature_n, 100);
        assert!((spec.base.gamma0 - 10.0).abs() < 1e-12);
    }

    #[test]
    fn missing_alpha_near_names_field() {
        let text = MINIMAL.replace("alphaN = 0.4\n", "");
        let err = parse_scenario(&text, "t").unwrap_err();
        assert!(err.to_string().contains("alphaN"), "{err}");
    }

    #[test]
    fn equal_split_rejected() {
        let text = MINIMAL
            .replace("alphaF = 0.6", "alphaF = 0.5")
            .replace("alphaN = 0.4", "alphaN = 0.5");
        let err = parse_scenario(&text, "t").unwrap_err();
        assert!(matches!(
            err,
            SweepError::Model(Error::InvalidParameter { field: "alphaF", .. })
        ));
    }

    #[test]
    fn unknown_key_reports_position() {
        let text = MINIMAL.replace("R_sF = 0.5", "R_sF = 0.5\nR_typo = 1");
        match parse_scenario(&text, "file.toml").unwrap_err() {
            SweepError::Parse { line, message, .. } => {
                assert_eq!(line, 11);
                assert!(message.contains("R_typo"), "{message}");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn geometry_and_lambda_must_agree() {
        let geo = MINIMAL
            .replace("[near]", "[source]\nposition = [0.0, 0.5]\n\n[near]")
            .replace("lambda = 4.0", "lambda = 4.0\nposition = [0.5, 0.5]\npath_loss_exponent = 2");
        assert!(parse_scenario(&geo, "t").is_ok());
        let bad = geo.replace("lambda = 4.0", "lambda = 3.0");
        assert!(matches!(parse_scenario(&bad, "t"), Err(SweepError::Spec(_))));
    }

    #[test]
    fn curves_and_grid() {
        let text = MINIMAL.replace("values = [0, 10]", "start = 0\nstop = 40\nstep = 5")
            + "\n[[curve]]\nlabel = \"weak\"\nset = { gammaE_dB = 0, L_E = 1 }\n";
        let spec = parse_scenario(&text, "t").unwrap();
        assert_eq!(spec.values.len(), 9);
        assert_eq!(spec.curves[0].overrides.len(), 2);
        let bad = text.replace("L_E = 1", "L_X = 1");
        assert!(parse_scenario(&bad, "t").is_err());
    }

    #[test]
    fn empty_outputs_rejected() {
        let text = MINIMAL.replace("values = [0, 10]", "values = [0, 10]\noutputs = []");
        assert!(matches!(parse_scenario(&text, "t"), Err(SweepError::Spec(_))));
    }

    #[test]
    fn line_column_counts() {
        assert_eq!(line_column("ab\ncd", 4), (2, 2));
        assert_eq!(line_column("ab", 0), (1, 1));
    }
}
