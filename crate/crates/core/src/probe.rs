//! Empirical zero-one diagnostics: probability curves of growing cylinder
//! events, plug-in mutual information and a finite mixing probe.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::budget;
use crate::error::{Error, Result};
use crate::info::{mutual_information, Dist, JointDist};
use crate::mc::{count_parallel, McConfig, McReport};
use crate::renorm::{LocalRule, StabilizationEvent};
use crate::rng;
use crate::symmetry::{FnEvent, WindowEvent};

/// A random configuration, read one site at a time. The value at a site
/// must be a pure function of `(seed, sample, site)`.
pub trait ConfigSampler: Sync {
    fn alphabet_size(&self) -> usize;
    fn value(&self, seed: u64, sample: u64, site: i64) -> usize;
    fn describe(&self) -> String;

    fn values(&self, seed: u64, sample: u64, window: &[i64]) -> Vec<usize> {
        window.iter().map(|&k| self.value(seed, sample, k)).collect()
    }
}

/// I.i.d. sites. Binary distributions draw symbol 1 with
/// [`rng::bernoulli`], so their samples coincide with the renormalization
/// Monte Carlo at the same seed.
#[derive(Clone, Debug)]
pub struct IidSampler(pub Dist);

impl ConfigSampler for IidSampler {
    fn alphabet_size(&self) -> usize {
        self.0.len()
    }

    fn value(&self, seed: u64, sample: u64, site: i64) -> usize {
        let probs = self.0.probs();
        if probs.len() == 2 {
            usize::from(rng::bernoulli(seed, sample, rng::site_counter(site), probs[1]))
        } else {
            rng::categorical(seed, sample, rng::site_counter(site), probs)
        }
    }

    fn describe(&self) -> String {
        format!("iid {:?}", self.0.probs())
    }
}

/// One symbol drawn per sample and copied to every site: an exchangeable
/// process that is not mixing.
#[derive(Clone, Debug)]
pub struct CopiedSampler(pub Dist);

impl ConfigSampler for CopiedSampler {
    fn alphabet_size(&self) -> usize {
        self.0.len()
    }

    fn value(&self, seed: u64, sample: u64, _site: i64) -> usize {
        IidSampler(self.0.clone()).value(seed, sample, 0)
    }

    fn describe(&self) -> String {
        format!("copied {:?}", self.0.probs())
    }
}

type Generator = Box<dyn Fn(usize) -> Result<Box<dyn WindowEvent>> + Send + Sync>;

/// Cylinder events indexed by level, with growing windows.
pub struct EventFamily {
    generator: Generator,
    pub description: String,
}

impl EventFamily {
    pub fn new(
        description: impl Into<String>,
        generator: impl Fn(usize) -> Result<Box<dyn WindowEvent>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            generator: Box::new(generator),
            description: description.into(),
        }
    }

    pub fn event(&self, level: usize) -> Result<Box<dyn WindowEvent>> {
        (self.generator)(level)
    }

    /// The sure event on `[-n, n]`.
    pub fn full(alphabet_size: usize) -> Self {
        Self::new("full", move |n| {
            let r = n as i64;
            Ok(Box::new(FnEvent::new((-r..=r).collect(), alphabet_size, |_| true)) as Box<dyn WindowEvent>)
        })
    }

    /// `{a_site = symbol}` at every level.
    pub fn site_equals(site: i64, symbol: usize, alphabet_size: usize) -> Self {
        Self::new(format!("a_{site}={symbol}"), move |_| {
            Ok(Box::new(FnEvent::new(vec![site], alphabet_size, move |v| v[0] == symbol)) as Box<dyn WindowEvent>)
        })
    }

    /// Level `n`: the trace at 0 equals `symbol` for levels `n - lag ..= n`.
    pub fn stabilization(rule: &LocalRule, symbol: usize, lag: usize) -> Self {
        let rule = rule.clone();
        Self::new(format!("stabilization symbol={symbol} lag={lag}"), move |n| {
            Ok(Box::new(StabilizationEvent::new(&rule, symbol, n.saturating_sub(lag), n)?) as Box<dyn WindowEvent>)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub level: usize,
    pub report: McReport,
    /// `min(estimate, 1 - estimate)`: distance of the estimate from {0, 1}.
    pub d_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveReport {
    pub description: String,
    pub points: Vec<CurvePoint>,
    /// Whether `d_n` is non-increasing along the requested levels.
    pub d_non_increasing: bool,
}

/// Estimates `P(X in E_n)` for each level, with fresh samples per level
/// drawn from the same seed.
pub fn event_probability_curve(
    family: &EventFamily,
    sampler: &dyn ConfigSampler,
    levels: &[usize],
    cfg: &McConfig,
) -> Result<CurveReport> {
    cfg.validate()?;
    let mut points = Vec::with_capacity(levels.len());
    let mut previous: Option<BTreeSet<i64>> = None;
    for &level in levels {
        let event = family.event(level)?;
        if event.alphabet_size() != sampler.alphabet_size() {
            return Err(Error::validation(format!(
                "event alphabet {} differs from sampler alphabet {}",
                event.alphabet_size(),
                sampler.alphabet_size()
            )));
        }
        budget::check("event window sites", event.window().len() as u128)?;
        let window: BTreeSet<i64> = event.window().iter().copied().collect();
        if let Some(prev) = &previous {
            if !prev.is_subset(&window) {
                return Err(Error::validation(format!("window at level {level} does not contain the previous window")));
            }
        }
        let counts = count_parallel(cfg.samples, cfg.workers, 1, |i, acc| {
            if event.contains(&sampler.values(cfg.seed, i, event.window())) {
                acc[0] += 1;
            }
        });
        let report = McReport::from_counts(counts[0], cfg.samples, cfg.seed)
            .tag("level", level)
            .tag("event", &family.description)
            .tag("sampler", sampler.describe());
        let d_n = report.estimate.min(1.0 - report.estimate);
        points.push(CurvePoint { level, report, d_n });
        previous = Some(window);
    }
    let d_non_increasing = points.windows(2).all(|w| w[1].d_n <= w[0].d_n);
    Ok(CurveReport {
        description: family.description.clone(),
        points,
        d_non_increasing,
    })
}

/// Plug-in mutual information (bits) of the empirical 2x2 joint of `(y, z)`.
pub fn empirical_mi(pairs: &[(bool, bool)]) -> Result<f64> {
    if pairs.len() < 2 {
        return Err(Error::validation("empirical mutual information needs at least 2 samples"));
    }
    let mut counts = [[0u64; 2]; 2];
    for &(y, z) in pairs {
        counts[usize::from(y)][usize::from(z)] += 1;
    }
    let n = pairs.len() as f64;
    let rows: Vec<Vec<f64>> = counts
        .iter()
        .map(|row| row.iter().map(|&c| c as f64 / n).collect())
        .collect();
    mutual_information(&JointDist::from_matrix(&rows)?, 2.0)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingReport {
    /// `max_W |P(V n W) - P(V) P(W)|` over the supplied family.
    pub value: f64,
    /// Always true: a finite family only bounds the supremum from below.
    pub lower_bound: bool,
    pub p_v: f64,
    pub per_w: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Empirical short-range correlation between `v` (inside `k_window`) and
/// events determined outside `k_window`.
pub fn mixing_probe(
    sampler: &dyn ConfigSampler,
    v: &dyn WindowEvent,
    k_window: &[i64],
    w_family: &[&dyn WindowEvent],
    cfg: &McConfig,
) -> Result<MixingReport> {
    cfg.validate()?;
    let k: BTreeSet<i64> = k_window.iter().copied().collect();
    if let Some(site) = v.window().iter().find(|s| !k.contains(s)) {
        return Err(Error::validation(format!("V depends on site {site} outside the K window")));
    }
    for (idx, w) in w_family.iter().enumerate() {
        if let Some(site) = w.window().iter().find(|s| k.contains(s)) {
            return Err(Error::validation(format!("W[{idx}] touches site {site} of the K window")));
        }
    }
    let m = w_family.len();
    let counts = count_parallel(cfg.samples, cfg.workers, 1 + 2 * m, |i, acc| {
        let in_v = v.contains(&sampler.values(cfg.seed, i, v.window()));
        acc[0] += u64::from(in_v);
        for (j, w) in w_family.iter().enumerate() {
            let in_w = w.contains(&sampler.values(cfg.seed, i, w.window()));
            acc[1 + 2 * j] += u64::from(in_w);
            acc[2 + 2 * j] += u64::from(in_w && in_v);
        }
    });
    let n = cfg.samples as f64;
    let p_v = counts[0] as f64 / n;
    let per_w: Vec<f64> = (0..m)
        .map(|j| {
            let p_w = counts[1 + 2 * j] as f64 / n;
            let p_vw = counts[2 + 2 * j] as f64 / n;
            (p_vw - p_v * p_w).abs()
        })
        .collect();
    Ok(MixingReport {
        value: per_w.iter().copied().fold(0.0, f64::max),
        lower_bound: true,
        p_v,
        per_w,
        samples: cfg.samples,
        seed: cfg.seed,
    })
}
