//! Monte Carlo simulation of the raw system model.
//!
//! Nothing here touches a closed form: each trial draws channel power gains,
//! performs antenna selection, forms the SINRs from their definitions and
//! applies the outage-event definitions. This makes the simulator an
//! independent oracle for the analytic module.
//!
//! Trials are split into fixed blocks of [`BLOCK_TRIALS`]; block `b` draws
//! from ChaCha8 stream `b` of the run's seed, so results do not depend on
//! how blocks are scheduled across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{Link, Scenario, SolutionId};

/// Trials per independently seeded block.
pub const BLOCK_TRIALS: u64 = 65_536;

/// Default number of trials per operating point.
pub const DEFAULT_TRIALS: u64 = 1_000_000;

/// How the eavesdropper treats the near user's signal while decoding the
/// far message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EavesdropperMode {
    /// The near message acts as interference.
    SicWithInterference,
    /// Worst case: the eavesdropper sees the far message interference-free.
    WorstCase,
}

/// How the gains of the non-selected links are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SelectionSampling {
    /// One fresh draw per non-selection link: the selected index is
    /// independent of the other links' gains.
    Shortcut,
    /// Draw every link's gain on every source antenna and index by the
    /// selected antenna.
    FullMatrix,
}

/// Draws a Gamma(`m·L`, `λ/m`) MRC power gain.
pub fn sample_mrc_gain<R: Rng + ?Sized>(rng: &mut R, m: u32, lambda: f64, l: u32) -> Result<f64> {
    Ok(mrc_gamma(m, lambda, l)?.sample(rng))
}

fn mrc_gamma(m: u32, lambda: f64, l: u32) -> Result<Gamma<f64>> {
    if m == 0 || l == 0 || !(lambda > 0.0) {
        return Err(Error::invalid("gain", "need m ≥ 1, L ≥ 1 and λ > 0"));
    }
    Gamma::new(f64::from(m * l), lambda / f64::from(m))
        .map_err(|e| Error::invalid("gain", e.to_string()))
}

fn link_gamma(link: &Link) -> Result<Gamma<f64>> {
    mrc_gamma(link.fading.m, link.lambda(), link.antennas)
}

/// Channel power gains on the selected source antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub near: f64,
    pub far: f64,
    pub eve: f64,
}

/// Pre-built samplers for one scenario and selection rule.
#[derive(Debug, Clone)]
pub struct ChannelSampler {
    near: Gamma<f64>,
    far: Gamma<f64>,
    eve: Gamma<f64>,
    source_antennas: u32,
    solution: SolutionId,
    sampling: SelectionSampling,
}

impl ChannelSampler {
    pub fn new(sc: &Scenario, solution: SolutionId, sampling: SelectionSampling) -> Result<Self> {
        Ok(Self {
            near: link_gamma(&sc.config.near)?,
            far: link_gamma(&sc.config.far)?,
            eve: link_gamma(&sc.config.eve)?,
            source_antennas: sc.config.source_antennas,
            solution,
            sampling,
        })
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> ChannelDraw {
        let (selected, other) = match self.solution {
            SolutionId::SolutionI => (&self.near, &self.far),
            SolutionId::SolutionII => (&self.far, &self.near),
        };
        let (best, other_gain, eve) = match self.sampling {
            SelectionSampling::Shortcut => {
                let best = (0..self.source_antennas)
                    .map(|_| selected.sample(rng))
                    .fold(f64::NEG_INFINITY, f64::max);
                (best, other.sample(rng), self.eve.sample(rng))
            }
            SelectionSampling::FullMatrix => {
                let mut best = f64::NEG_INFINITY;
                let mut other_gain = 0.0;
                let mut eve = 0.0;
                for _ in 0..self.source_antennas {
                    let s = selected.sample(rng);
                    let o = other.sample(rng);
                    let e = self.eve.sample(rng);
                    if s > best {
                        best = s;
                        other_gain = o;
                        eve = e;
                    }
                }
                (best, other_gain, eve)
            }
        };
        match self.solution {
            SolutionId::SolutionI => ChannelDraw {
                near: best,
                far: other_gain,
                eve,
            },
            SolutionId::SolutionII => ChannelDraw {
                near: other_gain,
                far: best,
                eve,
            },
        }
    }
}

/// Instantaneous SINRs of one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sinrs {
    /// Far user decoding its own message, near message as interference.
    pub far_xf: f64,
    /// Near user decoding the far message (first SIC stage).
    pub near_xf: f64,
    /// Near user decoding its own message after SIC.
    pub near_xn: f64,
    /// Eavesdropper decoding the far message.
    pub eve_xf: f64,
    /// Eavesdropper decoding the near message after removing the far one.
    pub eve_xn: f64,
}

pub fn compute_sinrs(sc: &Scenario, draw: &ChannelDraw, mode: EavesdropperMode) -> Sinrs {
    let (af, an) = (sc.config.alpha_far, sc.config.alpha_near);
    let (g0, ge) = (sc.config.gamma0, sc.config.gamma_e);
    let interfered = |snr: f64, gain: f64| af * snr * gain / (an * snr * gain + 1.0);
    let eve_xf = match mode {
        EavesdropperMode::SicWithInterference => interfered(ge, draw.eve),
        EavesdropperMode::WorstCase => af * ge * draw.eve,
    };
    Sinrs {
        far_xf: interfered(g0, draw.far),
        near_xf: interfered(g0, draw.near),
        near_xn: an * g0 * draw.near,
        eve_xf,
        eve_xn: an * ge * draw.eve,
    }
}

/// Which of the three disjoint near-user outage events occurred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NearOutageEvent {
    /// Near user fails to decode the far message.
    DecodeFailure,
    /// Near user decodes it, the eavesdropper does not, and the near
    /// user's own rate falls short of the secrecy rate.
    RateShortfall,
    /// Both decode it and the near secrecy capacity falls short.
    SecrecyShortfall,
}

impl NearOutageEvent {
    pub const ALL: [NearOutageEvent; 3] = [
        NearOutageEvent::DecodeFailure,
        NearOutageEvent::RateShortfall,
        NearOutageEvent::SecrecyShortfall,
    ];

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub outage_near: bool,
    pub outage_far: bool,
    pub outage_overall: bool,
    pub near_event: Option<NearOutageEvent>,
}

/// Applies the outage definitions to one set of SINRs. Rate comparisons are
/// done as `1 + γ_a < 2^R (1 + γ_b)`, the exponentiated form of
/// `log2((1 + γ_a)/(1 + γ_b)) < R`.
pub fn classify(sc: &Scenario, s: &Sinrs) -> TrialOutcome {
    let gamma_th = sc.derived.gamma_th;
    let near_scale = sc.config.secrecy_rate_near.exp2();
    let far_scale = sc.config.secrecy_rate_far.exp2();
    let near_event = if s.near_xf < gamma_th {
        Some(NearOutageEvent::DecodeFailure)
    } else if s.eve_xf < gamma_th {
        (1.0 + s.near_xn < near_scale).then_some(NearOutageEvent::RateShortfall)
    } else {
        (1.0 + s.near_xn < near_scale * (1.0 + s.eve_xn))
            .then_some(NearOutageEvent::SecrecyShortfall)
    };
    let outage_near = near_event.is_some();
    let outage_far = 1.0 + s.far_xf < far_scale * (1.0 + s.eve_xf);
    TrialOutcome {
        outage_near,
        outage_far,
        outage_overall: outage_near || outage_far,
        near_event,
    }
}

/// One trial with the shortcut selection sampler.
pub fn simulate_trial<R: Rng + ?Sized>(
    sc: &Scenario,
    sol: SolutionId,
    mode: EavesdropperMode,
    rng: &mut R,
) -> Result<TrialOutcome> {
    let sampler = ChannelSampler::new(sc, sol, SelectionSampling::Shortcut)?;
    Ok(classify(sc, &compute_sinrs(sc, &sampler.draw(rng), mode)))
}

/// Run parameters for [`estimate_sop`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub mode: EavesdropperMode,
    pub sampling: SelectionSampling,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            mode: EavesdropperMode::SicWithInterference,
            sampling: SelectionSampling::Shortcut,
        }
    }

    pub fn with_mode(self, mode: EavesdropperMode) -> Self {
        Self { mode, ..self }
    }

    pub fn with_sampling(self, sampling: SelectionSampling) -> Self {
        Self { sampling, ..self }
    }
}

/// A binomial frequency estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    /// `√(p̂(1 − p̂)/n)`.
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_counts(hits: u64, trials: u64, seed: u64) -> Self {
        let n = trials as f64;
        let mean = hits as f64 / n;
        Self {
            mean,
            std_error: (mean * (1.0 - mean) / n).sqrt(),
            trials,
            seed,
        }
    }

    /// `(value − mean) / std_error`, with a zero standard error treated as
    /// exact agreement only when the values coincide.
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = value - self.mean;
        if self.std_error > 0.0 {
            diff / self.std_error
        } else if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    }
}

/// Near, far and overall estimates from the same trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SopEstimates {
    pub near: McEstimate,
    pub far: McEstimate,
    /// Frequency of outage at either user, i.e. the true joint event.
    pub overall: McEstimate,
    /// Counts of each near-user outage event, in [`NearOutageEvent::ALL`]
    /// order.
    pub event_counts: [u64; 3],
}

impl SopEstimates {
    pub fn event(&self, e: NearOutageEvent) -> McEstimate {
        McEstimate::from_counts(self.event_counts[e.index()], self.near.trials, self.near.seed)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    near: u64,
    far: u64,
    overall: u64,
    events: [u64; 3],
}

impl Counts {
    fn merge(mut self, other: Counts) -> Counts {
        self.near += other.near;
        self.far += other.far;
        self.overall += other.overall;
        for (a, b) in self.events.iter_mut().zip(other.events) {
            *a += b;
        }
        self
    }

    fn record(&mut self, t: &TrialOutcome) {
        self.near += u64::from(t.outage_near);
        self.far += u64::from(t.outage_far);
        self.overall += u64::from(t.outage_overall);
        if let Some(e) = t.near_event {
            self.events[e.index()] += 1;
        }
    }
}

/// The RNG for block `block` of a run seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Estimates the three SOPs from `cfg.trials` independent trials.
/// Deterministic in `(scenario, sol, cfg)` regardless of thread count.
pub fn estimate_sop(sc: &Scenario, sol: SolutionId, cfg: &McConfig) -> Result<SopEstimates> {
    if cfg.trials == 0 {
        return Err(Error::invalid("trials", "must be at least 1"));
    }
    let sampler = ChannelSampler::new(sc, sol, cfg.sampling)?;
    let blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let counts = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = block_rng(cfg.seed, b);
            let n = BLOCK_TRIALS.min(cfg.trials - b * BLOCK_TRIALS);
            let mut c = Counts::default();
            for _ in 0..n {
                let draw = sampler.draw(&mut rng);
                c.record(&classify(sc, &compute_sinrs(sc, &draw, cfg.mode)));
            }
            c
        })
        .reduce(Counts::default, Counts::merge);
    let est = |hits| McEstimate::from_counts(hits, cfg.trials, cfg.seed);
    Ok(SopEstimates {
        near: est(counts.near),
        far: est(counts.far),
        overall: est(counts.overall),
        event_counts: counts.events,
    })
}

/// Draws `n` samples of `f(draw)` deterministically from `seed`.
pub fn sample_channel<F>(
    sampler: &ChannelSampler,
    n: usize,
    seed: u64,
    f: F,
) -> Vec<f64>
where
    F: Fn(&ChannelDraw) -> f64 + Sync,
{
    let block = BLOCK_TRIALS as usize;
    let blocks = n.div_ceil(block);
    (0..blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let mut rng = block_rng(seed, b as u64);
            let len = block.min(n - b * block);
            (0..len).map(|_| f(&sampler.draw(&mut rng))).collect::<Vec<_>>()
        })
        .collect()
}

/// Right-continuous empirical CDF of a sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::invalid("samples", "need at least one sample"));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::invalid("samples", "NaN sample"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Fraction of samples `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }
}

/// Kolmogorov–Smirnov statistic `sup |F_n(x) − F(x)|` for a continuous `F`.
pub fn ks_distance<F: Fn(f64) -> f64>(ecdf: &EmpiricalCdf, cdf: F) -> f64 {
    let n = ecdf.len() as f64;
    ecdf.sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Asymptotic one-sample KS critical value at the 1% level, `1.6276/√n`.
pub fn ks_critical_value_1pct(n: usize) -> f64 {
    1.6276 / (n as f64).sqrt()
}
