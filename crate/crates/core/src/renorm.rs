//! Block renormalization maps on `M^Z`.
//!
//! A rule with half-width `ell`, interaction range `r` and local rule `phi`
//! acts by `T(a)_k = phi(a_{bk-ell-r}, ..., a_{bk+ell+r})` with block size
//! `b = 2 ell + 1`. The rule is simple when `r = 0`. Traces, block windows,
//! block-exchange maps, the induced single-site dynamics and the
//! stabilization Monte Carlo all live here.

use std::collections::BTreeMap;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};
use crate::info::{Alphabet, Dist};
use crate::mc::{count_parallel, McConfig, McReport};
use crate::rng;
use crate::symmetry::{PositionalMap, WindowEvent};

/// Local rule `phi: M^(2 ell + 2 r + 1) -> M` with its block geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRule {
    alphabet: Alphabet,
    ell: usize,
    range: usize,
    block: usize,
    /// Output symbol per argument tuple, mixed radix, first argument most significant.
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawRule {
    alphabet: Alphabet,
    ell: usize,
    range: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    block: Option<usize>,
    table: BTreeMap<String, String>,
}

impl Serialize for LocalRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let table = (0..self.table.len())
            .map(|i| {
                let args = crate::symmetry::decode_config(i, self.alphabet.len(), self.width());
                let key: String = args.iter().map(|&a| self.alphabet.label(a)).collect();
                (key, self.alphabet.label(self.table[i]).to_string())
            })
            .collect();
        RawRule {
            alphabet: self.alphabet.clone(),
            ell: self.ell,
            range: self.range,
            block: Some(self.block),
            table,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LocalRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRule::deserialize(d)?;
        LocalRule::from_raw(raw).map_err(serde::de::Error::custom)
    }
}

impl LocalRule {
    /// Rule from a dense output table. The table must be total.
    pub fn new(alphabet: Alphabet, ell: usize, range: usize, table: Vec<usize>) -> Result<Self> {
        let width = 2 * ell + 2 * range + 1;
        let len = budget::power(alphabet.len() as u64, width);
        budget::check("local rule table", len)?;
        if table.len() as u128 != len {
            return Err(Error::validation(format!(
                "rule table has {} rows, expected {len}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&v| v >= alphabet.len()) {
            return Err(Error::validation(format!("rule output {bad} outside the alphabet")));
        }
        Ok(Self {
            alphabet,
            ell,
            range,
            block: 2 * ell + 1,
            table,
        })
    }

    pub fn from_fn(alphabet: Alphabet, ell: usize, range: usize, phi: impl Fn(&[usize]) -> usize) -> Result<Self> {
        let width = 2 * ell + 2 * range + 1;
        let len = budget::power(alphabet.len() as u64, width);
        budget::check("local rule table", len)?;
        let table = (0..len as usize)
            .map(|i| phi(&crate::symmetry::decode_config(i, alphabet.len(), width)))
            .collect();
        Self::new(alphabet, ell, range, table)
    }

    fn from_raw(raw: RawRule) -> Result<Self> {
        let block = 2 * raw.ell + 1;
        if let Some(b) = raw.block {
            if b != block {
                return Err(Error::validation(format!(
                    "block size {b} inconsistent with ell = {} (expected {block})",
                    raw.ell
                )));
            }
        }
        let alphabet = raw.alphabet;
        let label_len = alphabet.label(0).chars().count();
        if label_len == 0 || alphabet.symbols().iter().any(|s| s.chars().count() != label_len) {
            return Err(Error::validation(
                "rule files need symbol labels of one common non-empty length",
            ));
        }
        let width = 2 * raw.ell + 2 * raw.range + 1;
        let len = budget::power(alphabet.len() as u64, width);
        budget::check("local rule table", len)?;
        let mut table = vec![None; len as usize];
        for (key, value) in &raw.table {
            let chars: Vec<char> = key.chars().collect();
            if chars.len() != width * label_len {
                return Err(Error::validation(format!("rule key {key:?} does not have {width} symbols")));
            }
            let mut index = 0usize;
            for chunk in chars.chunks(label_len) {
                let label: String = chunk.iter().collect();
                let s = alphabet
                    .position(&label)
                    .ok_or_else(|| Error::validation(format!("unknown symbol {label:?} in key {key:?}")))?;
                index = index * alphabet.len() + s;
            }
            let out = alphabet
                .position(value)
                .ok_or_else(|| Error::validation(format!("unknown output symbol {value:?}")))?;
            table[index] = Some(out);
        }
        let missing = table.iter().filter(|v| v.is_none()).count();
        if missing > 0 {
            return Err(Error::validation(format!("rule table is partial: {missing} rows missing")));
        }
        Self::new(alphabet, raw.ell, raw.range, table.into_iter().flatten().collect())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn range(&self) -> usize {
        self.range
    }

    /// Block size `2 ell + 1`.
    pub fn block(&self) -> usize {
        self.block
    }

    /// Number of arguments, `2 ell + 2 r + 1`.
    pub fn width(&self) -> usize {
        2 * self.ell + 2 * self.range + 1
    }

    pub fn is_simple(&self) -> bool {
        self.range == 0
    }

    /// `phi(args)`.
    pub fn apply(&self, args: &[usize]) -> usize {
        self.table[crate::symmetry::encode_config(args, self.alphabet.len())]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    fn reach(&self) -> i64 {
        (self.ell + self.range) as i64
    }
}

/// Majority of three bits: `ell = 1`, `r = 0`.
pub fn majority_rule() -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, 0, |a| usize::from(a.iter().sum::<usize>() >= 2))
        .expect("majority table")
}

/// `phi(x, y, z) = y`: the trace never changes.
pub fn center_rule() -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, 0, |a| a[1]).expect("center table")
}

pub fn and_rule() -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, 0, |a| a[0] & a[1] & a[2]).expect("and table")
}

pub fn xor_rule() -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, 0, |a| a[0] ^ a[1] ^ a[2]).expect("xor table")
}

/// `phi(x, y, z) = y or (x and z)`. No symmetry of this rule moves the
/// centre argument.
pub fn center_or_ends_rule() -> LocalRule {
    LocalRule::from_fn(Alphabet::binary(), 1, 0, |a| a[1] | (a[0] & a[2])).expect("table")
}

/// Built-in rules by name.
pub fn builtin_rule(name: &str) -> Option<LocalRule> {
    match name {
        "majority" => Some(majority_rule()),
        "center" => Some(center_rule()),
        "and" => Some(and_rule()),
        "xor" => Some(xor_rule()),
        "center-or-ends" => Some(center_or_ends_rule()),
        _ => None,
    }
}

pub const BUILTIN_RULES: &[&str] = &["majority", "center", "and", "xor", "center-or-ends"];

/// Radius `S_n` of the input window that determines `a^n_0`:
/// `S_0 = 0`, `S_{m+1} = b S_m + ell + r`.
pub fn required_radius(rule: &LocalRule, n: usize) -> Result<i64> {
    let b = rule.block() as i64;
    let mut s: i64 = 0;
    for m in 0..n {
        s = s
            .checked_mul(b)
            .and_then(|v| v.checked_add(rule.reach()))
            .ok_or_else(|| Error::budget(format!("window radius at level {}", m + 1), "overflow", i64::MAX as u64))?;
    }
    Ok(s)
}

/// Values on the symmetric interval `[-radius, radius]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    radius: i64,
    cells: Vec<usize>,
}

impl Line {
    pub fn new(radius: i64, cells: Vec<usize>) -> Result<Self> {
        if radius < 0 || cells.len() as i64 != 2 * radius + 1 {
            return Err(Error::validation(format!(
                "line of radius {radius} needs {} cells, got {}",
                2 * radius + 1,
                cells.len()
            )));
        }
        Ok(Self { radius, cells })
    }

    pub fn constant(radius: i64, symbol: usize) -> Self {
        Self {
            radius,
            cells: vec![symbol; (2 * radius + 1) as usize],
        }
    }

    /// Line from a closure over positions.
    pub fn from_fn(radius: i64, f: impl Fn(i64) -> usize) -> Self {
        Self {
            radius,
            cells: (-radius..=radius).map(f).collect(),
        }
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, k: i64) -> Option<usize> {
        if k.abs() <= self.radius {
            Some(self.cells[(k + self.radius) as usize])
        } else {
            None
        }
    }

    /// The centred sub-line of radius `r <= self.radius()`.
    pub fn restrict(&self, r: i64) -> Line {
        assert!(r >= 0 && r <= self.radius, "restrict beyond the window");
        let off = (self.radius - r) as usize;
        Line {
            radius: r,
            cells: self.cells[off..off + (2 * r + 1) as usize].to_vec(),
        }
    }
}

/// One application of the renormalization map on a finite window. The
/// output covers every position whose input block lies inside the window.
fn step(rule: &LocalRule, line: &Line) -> Option<Line> {
    let reach = rule.reach();
    if line.radius < reach {
        return None;
    }
    let b = rule.block() as i64;
    let radius = (line.radius - reach) / b;
    let width = rule.width();
    let radix = rule.alphabet.len();
    let cells = (-radius..=radius)
        .map(|k| {
            let start = (b * k - reach + line.radius) as usize;
            let idx = line.cells[start..start + width]
                .iter()
                .fold(0usize, |acc, &v| acc * radix + v);
            rule.table[idx]
        })
        .collect();
    Some(Line { radius, cells })
}

fn check_line(rule: &LocalRule, line: &Line) -> Result<()> {
    if let Some(bad) = line.cells.iter().find(|&&v| v >= rule.alphabet.len()) {
        return Err(Error::validation(format!("cell value {bad} outside the rule alphabet")));
    }
    Ok(())
}

/// Levels `a^0, ..., a^levels` computed from a window. Level 0 is the input.
pub fn evolve(config: &Line, rule: &LocalRule, levels: usize) -> Result<Vec<Line>> {
    check_line(rule, config)?;
    let required = required_radius(rule, levels)?;
    if config.radius < required {
        return Err(Error::WindowTooSmall {
            required,
            given: config.radius,
        });
    }
    let mut out = Vec::with_capacity(levels + 1);
    out.push(config.clone());
    for _ in 0..levels {
        let next = step(rule, out.last().expect("non-empty")).ok_or_else(|| {
            Error::Internal("window shrank below the required radius".to_string())
        })?;
        out.push(next);
    }
    Ok(out)
}

/// The trace `a^0_0, a^1_0, ..., a^n_0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    pub levels: usize,
    pub values: Vec<usize>,
    /// Radius of the input window actually read, `S_n`.
    pub window_radius_used: i64,
}

pub fn trace_at_zero(config: &Line, rule: &LocalRule, n: usize) -> Result<TraceResult> {
    check_line(rule, config)?;
    let required = required_radius(rule, n)?;
    if config.radius < required {
        return Err(Error::WindowTooSmall {
            required,
            given: config.radius,
        });
    }
    let values = trace_values(rule, config.restrict(required), n);
    Ok(TraceResult {
        levels: n,
        values,
        window_radius_used: required,
    })
}

/// Trace of a window already cut to radius `S_n`.
fn trace_values(rule: &LocalRule, mut line: Line, n: usize) -> Vec<usize> {
    let mut values = Vec::with_capacity(n + 1);
    values.push(line.get(0).expect("centre"));
    for _ in 0..n {
        line = step(rule, &line).expect("radius follows the recurrence");
        values.push(line.get(0).expect("centre"));
    }
    values
}

/// The index set `B^n_k` of inputs that determine `a^n_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub level: usize,
    pub position: i64,
    pub indices: Vec<i64>,
}

impl BlockSpec {
    /// `B^n_k = b^n k + [-S_n, S_n]`.
    pub fn new(rule: &LocalRule, level: usize, position: i64) -> Result<Self> {
        let s = required_radius(rule, level)?;
        let centre = block_stride(rule, level)?
            .checked_mul(position)
            .ok_or_else(|| Error::budget("block centre", "overflow", i64::MAX as u64))?;
        Ok(Self {
            level,
            position,
            indices: (centre - s..=centre + s).collect(),
        })
    }
}

/// `b^n`, the spacing between consecutive level-`n` blocks.
fn block_stride(rule: &LocalRule, n: usize) -> Result<i64> {
    (rule.block() as i64)
        .checked_pow(n as u32)
        .ok_or_else(|| Error::budget(format!("block stride at level {n}"), "overflow", i64::MAX as u64))
}

/// The finitary map exchanging `B^n_0` and `B^n_1` order-preservingly and
/// fixing every other index.
///
/// For a simple rule exchanging these blocks swaps `a^n_0` with `a^n_1`
/// and leaves all other level-`n` values alone.
pub fn block_exchange(n: usize, rule: &LocalRule) -> Result<PositionalMap> {
    if !rule.is_simple() {
        return Err(Error::Unsupported(
            "block exchange needs a simple rule (interaction range 0)".to_string(),
        ));
    }
    let s = required_radius(rule, n)?;
    let stride = block_stride(rule, n)?;
    budget::check("block exchange support", (2 * (2 * s + 1)) as u128)?;
    PositionalMap::finitary((-s..=s).flat_map(|i| [(i, i + stride), (i + stride, i)]))
}

/// Law of `phi(Z_1, ..., Z_b)` for i.i.d. `Z_i ~ d`: the one-step image of a
/// product measure under a simple rule.
pub fn pushforward(rule: &LocalRule, d: &Dist) -> Result<Dist> {
    if !rule.is_simple() {
        return Err(Error::Unsupported(
            "pushforward of a product measure needs a simple rule".to_string(),
        ));
    }
    if d.alphabet() != rule.alphabet() {
        return Err(Error::validation("distribution and rule alphabets differ"));
    }
    let probs = pushforward_probs(rule, d.probs());
    let total: f64 = probs.iter().sum();
    Dist::new(d.alphabet().clone(), probs.iter().map(|p| p / total).collect())
}

fn pushforward_probs(rule: &LocalRule, probs: &[f64]) -> Vec<f64> {
    let radix = probs.len();
    let width = rule.width();
    let mut out = vec![0.0; radix];
    for (i, &sym) in rule.table.iter().enumerate() {
        let args = crate::symmetry::decode_config(i, radix, width);
        out[sym] += args.iter().map(|&a| probs[a]).product::<f64>();
    }
    out
}

fn require_binary_simple(rule: &LocalRule) -> Result<()> {
    if !rule.is_simple() {
        return Err(Error::Unsupported("single-site dynamics need a simple rule".to_string()));
    }
    if rule.alphabet.len() != 2 {
        return Err(Error::validation("scalar dynamics need a binary alphabet"));
    }
    Ok(())
}

/// `f(p) = P(phi(Z) = 1)` for i.i.d. Bernoulli(p) arguments, as a
/// polynomial in `p`. Defined for every real `p`.
pub fn site_map(rule: &LocalRule, p: f64) -> f64 {
    pushforward_probs(rule, &[1.0 - p, p])[1]
}

/// Orbit `p0, f(p0), ..., f^n(p0)` of the single-site parameter.
pub fn iterate_dynamics(rule: &LocalRule, p0: f64, n: usize) -> Result<Vec<f64>> {
    require_binary_simple(rule)?;
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::validation(format!("p0 = {p0} outside [0, 1]")));
    }
    let mut orbit = Vec::with_capacity(n + 1);
    let mut p = p0;
    orbit.push(p);
    for _ in 0..n {
        p = site_map(rule, p).clamp(0.0, 1.0);
        orbit.push(p);
    }
    Ok(orbit)
}

/// Distribution orbit for rules on any alphabet.
pub fn iterate_dist(rule: &LocalRule, d: &Dist, n: usize) -> Result<Vec<Dist>> {
    let mut orbit = vec![d.clone()];
    for _ in 0..n {
        let next = pushforward(rule, orbit.last().expect("non-empty"))?;
        orbit.push(next);
    }
    Ok(orbit)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Attracting,
    Repelling,
    Marginal,
}

impl std::fmt::Display for Stability {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stability::Attracting => "attracting",
            Stability::Repelling => "repelling",
            Stability::Marginal => "marginal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub p: f64,
    pub derivative: f64,
    pub stability: Stability,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub points: Vec<FixedPoint>,
    /// Set when `f(p) = p` holds on the whole scan grid; `points` is then empty.
    pub degenerate: bool,
}

const SCAN_STEP: f64 = 1e-4;
const BISECTION_TOL: f64 = 1e-12;
const GRID_ZERO: f64 = 1e-12;
const DIFF_STEP: f64 = 1e-6;
const MARGINAL_BAND: f64 = 1e-6;

/// Roots of `f(p) = p` on `[0, 1]` with their stability.
///
/// The roots come from a sign scan on a `1e-4` grid refined by bisection to
/// `1e-12`; `f'` is a central difference with step `1e-6`.
pub fn fixed_points(rule: &LocalRule) -> Result<FixedPointReport> {
    require_binary_simple(rule)?;
    let g = |p: f64| site_map(rule, p) - p;
    let steps = (1.0 / SCAN_STEP).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&p| g(p)).collect();
    if values.iter().all(|v| v.abs() <= GRID_ZERO) {
        return Ok(FixedPointReport {
            points: Vec::new(),
            degenerate: true,
        });
    }
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..grid.len() {
        if values[i].abs() <= GRID_ZERO {
            roots.push(grid[i]);
        } else if i + 1 < grid.len() && values[i + 1].abs() > GRID_ZERO && values[i] * values[i + 1] < 0.0 {
            let (mut lo, mut hi) = (grid[i], grid[i + 1]);
            let mut g_lo = values[i];
            while hi - lo > BISECTION_TOL {
                let mid = 0.5 * (lo + hi);
                let g_mid = g(mid);
                if g_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (g_mid < 0.0) == (g_lo < 0.0) {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
    }
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    let points = roots
        .into_iter()
        .map(|p| {
            let derivative = (site_map(rule, p + DIFF_STEP) - site_map(rule, p - DIFF_STEP)) / (2.0 * DIFF_STEP);
            let stability = if derivative.abs() < 1.0 - MARGINAL_BAND {
                Stability::Attracting
            } else if derivative.abs() > 1.0 + MARGINAL_BAND {
                Stability::Repelling
            } else {
                Stability::Marginal
            };
            FixedPoint { p, derivative, stability }
        })
        .collect();
    Ok(FixedPointReport {
        points,
        degenerate: false,
    })
}

/// Parameters of the stabilization Monte Carlo: sites are i.i.d.
/// Bernoulli(`p`) and the event is "`a^n_0 = s` for every `n` in
/// `stabilize_from..=depth`".
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationConfig {
    pub p: f64,
    pub depth: usize,
    pub stabilize_from: usize,
    #[serde(flatten)]
    pub mc: McConfig,
}

impl StabilizationConfig {
    pub fn validate(&self) -> Result<()> {
        self.mc.validate()?;
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::validation(format!("p = {} outside [0, 1]", self.p)));
        }
        if self.stabilize_from > self.depth {
            return Err(Error::validation(format!(
                "stabilize_from = {} exceeds depth = {}",
                self.stabilize_from, self.depth
            )));
        }
        Ok(())
    }
}

/// Reference values computed from the orbit `f^n(p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    /// `f^n(p)` for `n` in `stabilize_from..=depth`.
    pub orbit: Vec<f64>,
    /// `max(0, 1 - sum (1 - f^n(p)))`, a lower bound for P(stable at 1).
    pub union_ones: f64,
    /// `max(0, 1 - sum f^n(p))`, a lower bound for P(stable at 0).
    pub union_zeros: f64,
    /// `prod f^n(p)`, the value if the levels were independent.
    pub product_ones: f64,
    pub product_zeros: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationReport {
    pub config: StabilizationConfig,
    pub ones: McReport,
    pub zeros: McReport,
    /// Present for simple rules, where the single-site dynamics exist.
    pub reference: Option<ReferenceBounds>,
}

/// Estimates P(`a^n_0 = s` for all `stabilize_from <= n <= depth`) for
/// `s = 1` and `s = 0` on an i.i.d. Bernoulli(`p`) input.
///
/// Site `k` of sample `i` is `rng::bernoulli(seed, i, k, p)`, so the
/// estimate is identical for every worker count.
pub fn stabilization_probe(rule: &LocalRule, cfg: &StabilizationConfig) -> Result<StabilizationReport> {
    cfg.validate()?;
    if rule.alphabet.len() != 2 {
        return Err(Error::validation("stabilization probe needs a binary rule"));
    }
    let radius = required_radius(rule, cfg.depth)?;
    budget::check("stabilization window sites", (2 * radius as u128) + 1)?;
    let McConfig { samples, seed, workers } = cfg.mc;
    let (from, depth, p) = (cfg.stabilize_from, cfg.depth, cfg.p);
    let counts = count_parallel(samples, workers, 2, |i, acc| {
        let line = Line::from_fn(radius, |k| usize::from(rng::bernoulli(seed, i, rng::site_counter(k), p)));
        let trace = trace_values(rule, line, depth);
        let tail = &trace[from..=depth];
        if tail.iter().all(|&v| v == 1) {
            acc[0] += 1;
        }
        if tail.iter().all(|&v| v == 0) {
            acc[1] += 1;
        }
    });
    let tag = |r: McReport, s: usize| {
        r.tag("symbol", s)
            .tag("p", p)
            .tag("depth", depth)
            .tag("from", from)
    };
    let reference = if rule.is_simple() {
        let orbit = iterate_dynamics(rule, p, depth)?[from..=depth].to_vec();
        let miss_ones: f64 = orbit.iter().map(|q| 1.0 - q).sum();
        let miss_zeros: f64 = orbit.iter().sum();
        Some(ReferenceBounds {
            union_ones: (1.0 - miss_ones).max(0.0),
            union_zeros: (1.0 - miss_zeros).max(0.0),
            product_ones: orbit.iter().product(),
            product_zeros: orbit.iter().map(|q| 1.0 - q).product(),
            orbit,
        })
    } else {
        None
    };
    Ok(StabilizationReport {
        config: *cfg,
        ones: tag(McReport::from_counts(counts[0], samples, seed), 1),
        zeros: tag(McReport::from_counts(counts[1], samples, seed), 0),
        reference,
    })
}

/// The truncated stabilization event `{a : a^n_0 = symbol for from <= n <= depth}`
/// on the window `[-S_depth, S_depth]`.
#[derive(Clone, Debug)]
pub struct StabilizationEvent {
    rule: LocalRule,
    symbol: usize,
    from: usize,
    depth: usize,
    radius: i64,
    window: Vec<i64>,
}

impl StabilizationEvent {
    pub fn new(rule: &LocalRule, symbol: usize, from: usize, depth: usize) -> Result<Self> {
        if from > depth {
            return Err(Error::validation(format!("from = {from} exceeds depth = {depth}")));
        }
        if symbol >= rule.alphabet.len() {
            return Err(Error::validation(format!("symbol {symbol} outside the rule alphabet")));
        }
        let radius = required_radius(rule, depth)?;
        budget::check("stabilization event window", (2 * radius as u128) + 1)?;
        Ok(Self {
            rule: rule.clone(),
            symbol,
            from,
            depth,
            radius,
            window: (-radius..=radius).collect(),
        })
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }
}

impl WindowEvent for StabilizationEvent {
    fn window(&self) -> &[i64] {
        &self.window
    }

    fn alphabet_size(&self) -> usize {
        self.rule.alphabet.len()
    }

    fn contains(&self, values: &[usize]) -> bool {
        let line = Line {
            radius: self.radius,
            cells: values.to_vec(),
        };
        let trace = trace_values(&self.rule, line, self.depth);
        trace[self.from..].iter().all(|&v| v == self.symbol)
    }
}

/// First permutation `sigma` (lexicographic order, zero-based argument
/// positions) with `phi(a_sigma(1), ..., a_sigma(w)) = phi(a_1, ..., a_w)`
/// for all arguments and `sigma(centre) != centre`.
pub fn central_moving_symmetry(rule: &LocalRule) -> Result<Option<Vec<usize>>> {
    let width = rule.width();
    let radix = rule.alphabet.len();
    if width > 5 || radix > 4 {
        return Err(Error::budget(
            "central symmetry search (limit: 5 arguments, 4 symbols)",
            format!("{width} arguments, {radix} symbols"),
            120,
        ));
    }
    let centre = width / 2;
    let mut permuted = vec![0usize; width];
    for sigma in (0..width).permutations(width) {
        if sigma[centre] == centre {
            continue;
        }
        let preserved = (0..rule.table.len()).all(|i| {
            let args = crate::symmetry::decode_config(i, radix, width);
            for (slot, &s) in permuted.iter_mut().zip(&sigma) {
                *slot = args[s];
            }
            rule.apply(&permuted) == rule.table[i]
        });
        if preserved {
            return Ok(Some(sigma));
        }
    }
    Ok(None)
}
