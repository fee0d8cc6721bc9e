//! Built-in scenarios for the standard figure families `fig2` … `fig10`.
//!
//! Every preset starts from the same base: source at (0, 0.5), near user at
//! (0.5, 0.5), far user at (1, 0.5), eavesdropper at (3, 0), path-loss
//! exponent 2 and Ω = 1 on every link (so λ_N = 4, λ_F = 1,
//! λ_E = 1/9.25), m = 2 and two antennas everywhere, α_F = 0.6,
//! R_F = R_sN = R_sF = 0.5, γ0 = γE = 10 dB and 100 Gauss–Chebyshev nodes.
//! A preset overrides only the parameters its figure fixes.

use super::scenario::parse_scenario;
use super::{SweepResult, SweepSpec};

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 9] = [
    "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
];

const BASE: &str = r#"
[system]
L_S = 2
alphaF = 0.6
alphaN = 0.4
gamma0_dB = 10
gammaE_dB = 10
R_F = 0.5
R_sN = 0.5
R_sF = 0.5
quadratureN = 100
path_loss_exponent = 2

[source]
position = [0.0, 0.5]

[near]
antennas = 2
m = 2
position = [0.5, 0.5]

[far]
antennas = 2
m = 2
position = [1.0, 0.5]

[eve]
antennas = 2
m = 2
position = [3.0, 0.0]
"#;

// SOP vs γ0 for γE ∈ {0, 10} dB. fig2, fig3 and fig4 plot SOP_N, SOP_F and
// SOP_O of the same sweep; each preset still emits all three columns.
const GAMMA0_VS_GAMMA_E: &str = r#"
[sweep]
axis = "gamma0_dB"
start = 0
stop = 40
step = 10

[[curve]]
label = "gammaE=0dB"
set = { gammaE_dB = 0 }

[[curve]]
label = "gammaE=10dB"
set = { gammaE_dB = 10 }
"#;

// SOP_N vs γ0 over (L_S, L_N, L_E). The figure does not list the tuples
// plotted, so these vary one count at a time around (2, 2, 2), plus the
// all-single-antenna case (with L_F = 1 too) in which both solutions
// coincide.
const FIG5: &str = r#"
[sweep]
axis = "gamma0_dB"
start = 0
stop = 40
step = 10

[[curve]]
label = "(1,1,1)"
set = { L_S = 1, L_N = 1, L_E = 1, L_F = 1 }

[[curve]]
label = "(2,2,2)"
set = {}

[[curve]]
label = "(3,2,2)"
set = { L_S = 3 }

[[curve]]
label = "(2,3,2)"
set = { L_N = 3 }

[[curve]]
label = "(2,2,3)"
set = { L_E = 3 }
"#;

// SOP_F vs γ0 over (L_S, L_F, L_E); tuples chosen as for fig5.
const FIG6: &str = r#"
[sweep]
axis = "gamma0_dB"
start = 0
stop = 40
step = 10

[[curve]]
label = "(1,1,1)"
set = { L_S = 1, L_F = 1, L_E = 1, L_N = 1 }

[[curve]]
label = "(2,2,2)"
set = {}

[[curve]]
label = "(3,2,2)"
set = { L_S = 3 }

[[curve]]
label = "(2,3,2)"
set = { L_F = 3 }

[[curve]]
label = "(2,2,3)"
set = { L_E = 3 }
"#;

// SOP_O vs γ0 over (L_S, L_F, L_N, L_E); in the (1,1,1,1) curve both
// solutions coincide.
const FIG7: &str = r#"
[sweep]
axis = "gamma0_dB"
start = 0
stop = 40
step = 10

[[curve]]
label = "(1,1,1,1)"
set = { L_S = 1, L_F = 1, L_N = 1, L_E = 1 }

[[curve]]
label = "(2,2,2,2)"
set = {}

[[curve]]
label = "(3,2,2,2)"
set = { L_S = 3 }

[[curve]]
label = "(2,3,3,2)"
set = { L_F = 3, L_N = 3 }

[[curve]]
label = "(2,2,2,3)"
set = { L_E = 3 }
"#;

// SOP_O vs α_F with α_N = 1 − α_F at γ0 = γE = 10 dB. The grid starts at
// 0.51 because α_F = 0.5 violates α_F > α_N.
const FIG8: &str = r#"
[sweep]
axis = "alphaF"
start = 0.51
stop = 0.99
step = 0.01
"#;

// SOP_O vs m_E for (m_N, m_F) ∈ {(1,1), (2,2), (3,3)} at γ0 = γE = 10 dB.
const FIG9: &str = r#"
[sweep]
axis = "m_E"
start = 1
stop = 5
step = 1

[[curve]]
label = "(mN,mF)=(1,1)"
set = { m_N = 1, m_F = 1 }

[[curve]]
label = "(mN,mF)=(2,2)"
set = { m_N = 2, m_F = 2 }

[[curve]]
label = "(mN,mF)=(3,3)"
set = { m_N = 3, m_F = 3 }
"#;

// Protocol comparison, Solution I only, with L_S = 2 and L_F = L_N = L_E = 1.
// This is the only family with single-antenna users; the figure fixes
// them explicitly instead of inheriting the two-antenna default. The
// worst-case eavesdropper curve is the same sweep run with
// `mode = "wces"` (CLI: `--mode wces`); the other protocols it is compared
// with are out of scope.
const FIG10: &str = r#"
[sweep]
axis = "gamma0_dB"
start = 0
stop = 40
step = 10
solutions = ["I"]

[[curve]]
label = "LS=2,LF=LN=LE=1"
set = { L_F = 1, L_N = 1, L_E = 1 }
"#;

fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig2" | "fig3" | "fig4" => GAMMA0_VS_GAMMA_E,
        "fig5" => FIG5,
        "fig6" => FIG6,
        "fig7" => FIG7,
        "fig8" => FIG8,
        "fig9" => FIG9,
        "fig10" => FIG10,
        _ => return None,
    })
}

/// The preset called `name`, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<SweepResult<SweepSpec>> {
    let sweep = preset_text(name)?;
    let text = format!("{BASE}{sweep}");
    Some(parse_scenario(&text, name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Scenario;
    use crate::sweep::SweepAxis;

    #[test]
    fn all_presets_load() {
        for name in PRESET_NAMES {
            let spec = preset(name).unwrap().unwrap_or_else(|e| panic!("{name}: {e}"));
            spec.validate().unwrap();
        }
        assert!(preset("fig11").is_none());
    }

    #[test]
    fn base_geometry_derived_values() {
        let spec = preset("fig2").unwrap().unwrap();
        let d = Scenario::new(spec.base).unwrap().derived;
        assert!((d.beta - 1.5).abs() < 1e-15);
        assert!((d.gamma_th - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((d.lambda_near - 4.0).abs() < 1e-12);
        assert!((d.lambda_far - 1.0).abs() < 1e-12);
        // |SE|² = 3² + 0.5² = 9.25
        assert!((d.lambda_eve - 1.0 / 9.25).abs() < 1e-12);
    }

    #[test]
    fn fig2_curves() {
        let spec = preset("fig2").unwrap().unwrap();
        assert_eq!(spec.axis, SweepAxis::Gamma0Db);
        assert_eq!(spec.values, vec![0.0, 10.0, 20.0, 30.0, 40.0]);
        let weak = spec.config_for(&spec.curves[0], 20.0).unwrap();
        assert!((weak.gamma_e - 1.0).abs() < 1e-15);
        assert!((weak.gamma0 - 100.0).abs() < 1e-12);
        assert_eq!(weak.near.antennas, 2);
    }

    #[test]
    fn fig8_grid_and_fig10_antennas() {
        let spec = preset("fig8").unwrap().unwrap();
        assert_eq!(spec.values.len(), 49);
        assert_eq!(spec.values[0], 0.51);
        let spec = preset("fig10").unwrap().unwrap();
        let cfg = spec.config_for(&spec.curves[0], 10.0).unwrap();
        assert_eq!(
            (cfg.source_antennas, cfg.far.antennas, cfg.near.antennas, cfg.eve.antennas),
            (2, 1, 1, 1)
        );
        assert_eq!(spec.solutions.len(), 1);
    }
}
