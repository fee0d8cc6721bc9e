//! Scenario description, validation and the derived symbols used by the
//! closed forms.
//!
//! All SNRs are linear here; dB conversion happens only in [`crate::sweep`].

use std::fmt;

use crate::error::{Error, Result};

/// Tolerance on `α_F + α_N = 1`.
pub const POWER_SPLIT_TOL: f64 = 1e-12;

/// Point on the 2-D deployment plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePosition {
    pub x: f64,
    pub y: f64,
}

impl NodePosition {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::invalid("position", "coordinates must be finite"));
        }
        Ok(Self { x, y })
    }

    pub fn distance_to(&self, other: &NodePosition) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Distance and path-loss exponent of one source-to-receiver link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub distance: f64,
    pub path_loss_exponent: f64,
}

impl LinkGeometry {
    pub fn new(distance: f64, path_loss_exponent: f64) -> Result<Self> {
        if !(distance > 0.0) || !distance.is_finite() {
            return Err(Error::invalid("distance", format!("must be positive, got {distance}")));
        }
        if !(path_loss_exponent >= 0.0) || !path_loss_exponent.is_finite() {
            return Err(Error::invalid(
                "pathLossExponent",
                format!("must be non-negative, got {path_loss_exponent}"),
            ));
        }
        Ok(Self {
            distance,
            path_loss_exponent,
        })
    }

    pub fn between(from: &NodePosition, to: &NodePosition, path_loss_exponent: f64) -> Result<Self> {
        Self::new(from.distance_to(to), path_loss_exponent)
    }
}

/// Nakagami-m parameters of every antenna pair on a link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingProfile {
    /// Shape parameter; restricted to integers so that every finite sum over
    /// `m·L` terms is well defined.
    pub m: u32,
    /// Mean per-antenna power gain `E|h|²`.
    pub omega: f64,
}

impl FadingProfile {
    pub fn new(m: u32, omega: f64) -> Result<Self> {
        let profile = Self { m, omega };
        profile.validate()?;
        Ok(profile)
    }

    /// Accepts a real-valued shape and rejects anything that is not a
    /// positive integer.
    pub fn from_real_shape(m: f64, omega: f64) -> Result<Self> {
        if !(m >= 1.0) || m.fract() != 0.0 || m > f64::from(u32::MAX) {
            return Err(Error::invalid("m", format!("must be a positive integer, got {m}")));
        }
        Self::new(m as u32, omega)
    }

    fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::invalid("m", "must be a positive integer"));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(Error::invalid("omega", format!("must be positive, got {}", self.omega)));
        }
        Ok(())
    }
}

/// How the mean link gain `λ` is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathModel {
    /// `λ = Ω / d^θ`.
    Geometry(LinkGeometry),
    /// `λ` given directly.
    MeanGain(f64),
}

/// One source-to-receiver link with MRC at the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub antennas: u32,
    pub fading: FadingProfile,
    pub path: PathModel,
}

impl Link {
    pub fn lambda(&self) -> f64 {
        match self.path {
            PathModel::Geometry(g) => self.fading.omega / g.distance.powf(g.path_loss_exponent),
            PathModel::MeanGain(lambda) => lambda,
        }
    }

    /// `a = m·L`.
    pub fn shape(&self) -> u32 {
        self.fading.m * self.antennas
    }

    fn validate(&self, field: &'static str) -> Result<()> {
        if self.antennas == 0 {
            return Err(Error::invalid(field, "antenna count must be at least 1"));
        }
        self.fading.validate()?;
        if let PathModel::Geometry(g) = self.path {
            LinkGeometry::new(g.distance, g.path_loss_exponent)?;
        }
        let lambda = self.lambda();
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::invalid(field, format!("mean gain must be positive, got {lambda}")));
        }
        Ok(())
    }
}

/// Full description of one operating point.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Transmit antennas at the source, `L_S`.
    pub source_antennas: u32,
    pub near: Link,
    pub far: Link,
    pub eve: Link,
    pub alpha_far: f64,
    pub alpha_near: f64,
    /// Transmit SNR towards the legitimate users, `P_S / N_0` (linear).
    pub gamma0: f64,
    /// Transmit SNR towards the eavesdropper, `P_S / N_E` (linear).
    pub gamma_e: f64,
    /// Target rate of the far user's message, bps/Hz.
    pub rate_far: f64,
    pub secrecy_rate_near: f64,
    pub secrecy_rate_far: f64,
    /// Nodes of the Gauss–Chebyshev rule in the far-user closed form.
    pub quadrature_n: usize,
}

/// Default Gauss–Chebyshev order.
pub const DEFAULT_QUADRATURE_N: usize = 100;

impl SystemConfig {
    /// Sets `α_F` and `α_N = 1 − α_F` together.
    pub fn set_alpha_far(&mut self, alpha_far: f64) {
        self.alpha_far = alpha_far;
        self.alpha_near = 1.0 - alpha_far;
    }

    pub fn validate(&self) -> Result<()> {
        if self.source_antennas == 0 {
            return Err(Error::invalid("L_S", "antenna count must be at least 1"));
        }
        self.near.validate("near")?;
        self.far.validate("far")?;
        self.eve.validate("eve")?;
        if !(self.alpha_near > 0.0) {
            return Err(Error::invalid("alphaN", format!("must be positive, got {}", self.alpha_near)));
        }
        if !(self.alpha_far > self.alpha_near) {
            return Err(Error::invalid(
                "alphaF",
                format!(
                    "must exceed alphaN (got alphaF = {}, alphaN = {})",
                    self.alpha_far, self.alpha_near
                ),
            ));
        }
        if (self.alpha_far + self.alpha_near - 1.0).abs() > POWER_SPLIT_TOL {
            return Err(Error::invalid(
                "alphaF",
                format!(
                    "alphaF + alphaN must equal 1 (got {})",
                    self.alpha_far + self.alpha_near
                ),
            ));
        }
        for (field, snr) in [("gamma0", self.gamma0), ("gammaE", self.gamma_e)] {
            if !(snr > 0.0) || !snr.is_finite() {
                return Err(Error::invalid(field, format!("must be a positive linear SNR, got {snr}")));
            }
        }
        for (field, rate) in [
            ("R_F", self.rate_far),
            ("R_sN", self.secrecy_rate_near),
            ("R_sF", self.secrecy_rate_far),
        ] {
            if !(rate >= 0.0) || !rate.is_finite() {
                return Err(Error::invalid(field, format!("must be a non-negative rate, got {rate}")));
            }
        }
        if self.quadrature_n == 0 {
            return Err(Error::invalid("quadratureN", "must be at least 1"));
        }
        Ok(())
    }
}

/// Auxiliary symbols shared by the closed-form expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedParams {
    pub a_near: u32,
    pub a_far: u32,
    pub a_eve: u32,
    pub lambda_near: f64,
    pub lambda_far: f64,
    pub lambda_eve: f64,
    /// `α_F / α_N`, the ceiling of every far-message SINR.
    pub beta: f64,
    /// `2^{R_F} − 1`.
    pub gamma_th: f64,
    /// `log2(α_F / (α_F − α_N γ_th))`; `None` when `γ_th ≥ β`.
    pub eta: Option<f64>,
    /// `(2^{R_sN} − 1) / α_N`.
    pub gamma_s_near: f64,
    /// `1 / (α_N 2^{R_sF}) − 1`.
    pub u_far: f64,
    /// `a_N · L_S`.
    pub b_near: u32,
    /// `a_F · L_S`.
    pub b_far: u32,
}

impl DerivedParams {
    /// True when the near user cannot decode the far message at any SNR.
    pub fn near_saturated(&self) -> bool {
        self.gamma_th >= self.beta
    }
}

pub fn derive_params(config: &SystemConfig) -> Result<DerivedParams> {
    config.validate()?;
    let (af, an) = (config.alpha_far, config.alpha_near);
    let beta = af / an;
    let gamma_th = config.rate_far.exp2() - 1.0;
    let eta = (gamma_th < beta).then(|| (af / (af - an * gamma_th)).log2());
    Ok(DerivedParams {
        a_near: config.near.shape(),
        a_far: config.far.shape(),
        a_eve: config.eve.shape(),
        lambda_near: config.near.lambda(),
        lambda_far: config.far.lambda(),
        lambda_eve: config.eve.lambda(),
        beta,
        gamma_th,
        eta,
        gamma_s_near: (config.secrecy_rate_near.exp2() - 1.0) / an,
        u_far: 1.0 / (an * config.secrecy_rate_far.exp2()) - 1.0,
        b_near: config.near.shape() * config.source_antennas,
        b_far: config.far.shape() * config.source_antennas,
    })
}

/// `A_x = x / (α_F − α_N x)` on `0 ≤ x < β`.
pub fn a_fraction(x: f64, alpha_far: f64, alpha_near: f64) -> Result<f64> {
    let denom = alpha_far - alpha_near * x;
    if !(x >= 0.0) {
        return Err(Error::Domain {
            function: "a_fraction",
            value: x,
            reason: "argument must be non-negative",
        });
    }
    if !(denom > 0.0) {
        return Err(Error::Domain {
            function: "a_fraction",
            value: x,
            reason: "argument must lie below beta = alphaF / alphaN",
        });
    }
    Ok(x / denom)
}

/// `g(x) = 2^{R_sF} x + 2^{R_sF} − 1`.
pub fn g_shift(x: f64, secrecy_rate_far: f64) -> f64 {
    let scale = secrecy_rate_far.exp2();
    scale * x + scale - 1.0
}

/// Transmit antenna selection rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SolutionId {
    /// Select the antenna maximising the source-to-near gain.
    SolutionI,
    /// Select the antenna maximising the source-to-far gain.
    SolutionII,
}

impl SolutionId {
    pub const BOTH: [SolutionId; 2] = [SolutionId::SolutionI, SolutionId::SolutionII];
}

impl fmt::Display for SolutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolutionId::SolutionI => "I",
            SolutionId::SolutionII => "II",
        })
    }
}

/// A validated configuration together with its derived symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: SystemConfig,
    pub derived: DerivedParams,
}

impl Scenario {
    pub fn new(config: SystemConfig) -> Result<Self> {
        let derived = derive_params(&config)?;
        Ok(Self { config, derived })
    }

    /// `A_x` for this scenario's power split.
    pub fn a_fraction(&self, x: f64) -> Result<f64> {
        a_fraction(x, self.config.alpha_far, self.config.alpha_near)
    }

    /// `g(x)` for this scenario's far secrecy rate.
    pub fn g_shift(&self, x: f64) -> f64 {
        g_shift(x, self.config.secrecy_rate_far)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    pub(crate) fn fig_base() -> Scenario {
        Scenario::new(base_config()).unwrap()
    }

    pub(crate) fn base_config() -> SystemConfig {
        let s = NodePosition::new(0.0, 0.5).unwrap();
        let link = |x: f64, y: f64| Link {
            antennas: 2,
            fading: FadingProfile::new(2, 1.0).unwrap(),
            path: PathModel::Geometry(
                LinkGeometry::between(&s, &NodePosition::new(x, y).unwrap(), 2.0).unwrap(),
            ),
        };
        SystemConfig {
            source_antennas: 2,
            near: link(0.5, 0.5),
            far: link(1.0, 0.5),
            eve: link(3.0, 0.0),
            alpha_far: 0.6,
            alpha_near: 0.4,
            gamma0: 10.0,
            gamma_e: 10.0,
            rate_far: 0.5,
            secrecy_rate_near: 0.5,
            secrecy_rate_far: 0.5,
            quadrature_n: DEFAULT_QUADRATURE_N,
        }
    }

    #[test]
    fn derived_examples() {
        let d = derive_params(&base_config()).unwrap();
        assert_relative_eq!(d.beta, 1.5, epsilon = 1e-15);
        assert_relative_eq!(d.gamma_th, 0.414_213_562_373_095, epsilon = 1e-12);
        assert_relative_eq!(d.lambda_near, 4.0, epsilon = 1e-12);
        assert_relative_eq!(d.lambda_far, 1.0, epsilon = 1e-12);
        assert_relative_eq!(d.lambda_eve, 1.0 / 9.25, epsilon = 1e-12);
        assert_relative_eq!(d.lambda_eve, 0.108108, epsilon = 1e-6);
        assert_eq!((d.a_near, d.a_far, d.a_eve), (4, 4, 4));
        assert_eq!((d.b_near, d.b_far), (8, 8));
        // log2(0.6 / (0.6 − 0.4·(√2 − 1))), evaluated independently.
        let eta = (0.6 / (0.6 - 0.4 * (2.0_f64.sqrt() - 1.0))).log2();
        assert_relative_eq!(d.eta.unwrap(), eta, epsilon = 1e-14);
        assert_relative_eq!(d.eta.unwrap(), 0.466_222, epsilon = 1e-6);
        assert_relative_eq!(d.u_far, 0.767_766_952_966_368_8, epsilon = 1e-12);
    }

    #[test]
    fn eta_undefined_when_saturated() {
        let mut cfg = base_config();
        cfg.rate_far = 2.0;
        let d = derive_params(&cfg).unwrap();
        assert!(d.eta.is_none());
        assert!(d.near_saturated());
    }

    #[test]
    fn rejects_bad_power_split() {
        let mut cfg = base_config();
        cfg.set_alpha_far(0.5);
        let err = derive_params(&cfg).unwrap_err();
        assert!(matches!(err, Error::InvalidParameter { field: "alphaF", .. }));
        cfg.alpha_far = 0.7;
        cfg.alpha_near = 0.4;
        assert!(derive_params(&cfg).is_err());
    }

    #[test]
    fn rejects_non_integer_shape() {
        assert!(FadingProfile::from_real_shape(1.5, 1.0).is_err());
        assert!(FadingProfile::from_real_shape(0.0, 1.0).is_err());
        assert!(FadingProfile::new(0, 1.0).is_err());
        assert_eq!(FadingProfile::from_real_shape(3.0, 1.0).unwrap().m, 3);
    }

    #[test]
    fn a_fraction_examples() {
        assert_eq!(a_fraction(0.0, 0.6, 0.4).unwrap(), 0.0);
        let gth = 0.5_f64.exp2() - 1.0;
        assert_relative_eq!(a_fraction(gth, 0.6, 0.4).unwrap(), 0.953_718, epsilon = 1e-6);
        let near_pole = a_fraction(0.999 * 1.5, 0.6, 0.4).unwrap();
        let before = a_fraction(0.99 * 1.5, 0.6, 0.4).unwrap();
        assert!(near_pole > before && near_pole > 100.0);
        assert!(a_fraction(1.5, 0.6, 0.4).is_err());
        assert!(a_fraction(-0.1, 0.6, 0.4).is_err());
    }

    #[test]
    fn a_fraction_increasing_and_convex() {
        let n = 1000;
        let vals: Vec<f64> = (0..n)
            .map(|i| a_fraction(1.5 * i as f64 / n as f64, 0.6, 0.4).unwrap())
            .collect();
        for w in vals.windows(3) {
            assert!(w[1] > w[0]);
            assert!(w[2] - w[1] >= w[1] - w[0]);
        }
    }

    #[test]
    fn g_shift_examples() {
        assert_relative_eq!(g_shift(0.37, 0.0), 0.37, epsilon = 1e-15);
        assert_relative_eq!(g_shift(0.0, 0.5), 0.414_213_562, epsilon = 1e-9);
        let u = 1.0 / (0.4 * 0.5_f64.exp2()) - 1.0;
        assert_relative_eq!(u, 0.767_767, epsilon = 1e-6);
        assert_relative_eq!(g_shift(u, 0.5), 1.5, epsilon = 1e-12);
    }

    #[test]
    fn derive_is_deterministic() {
        let cfg = base_config();
        assert_eq!(derive_params(&cfg).unwrap(), derive_params(&cfg).unwrap());
    }

    proptest! {
        #[test]
        fn endpoint_identity(af in 0.5001f64..0.999, rsf in 0.0f64..4.0) {
            let mut cfg = base_config();
            cfg.set_alpha_far(af);
            cfg.secrecy_rate_far = rsf;
            let d = derive_params(&cfg).unwrap();
            prop_assert!(d.u_far <= d.beta + 1e-12);
            prop_assert!((g_shift(d.u_far, rsf) - d.beta).abs() <= 1e-12 * d.beta.max(1.0));
        }

        #[test]
        fn branch_point_continuity(af in 0.51f64..0.99, rf in 0.0f64..2.0) {
            let mut cfg = base_config();
            cfg.set_alpha_far(af);
            cfg.rate_far = rf;
            let d = derive_params(&cfg).unwrap();
            if let Some(eta) = d.eta {
                cfg.secrecy_rate_near = eta;
                let d2 = derive_params(&cfg).unwrap();
                let a = a_fraction(d2.gamma_th, cfg.alpha_far, cfg.alpha_near).unwrap();
                prop_assert!((d2.gamma_s_near - a).abs() <= 1e-12 * a.max(1.0));
                prop_assert!(eta >= 0.0);
            }
        }
    }
}
