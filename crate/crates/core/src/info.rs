//! Exact information quantities of finite discrete distributions.
//!
//! Joint distributions are stored densely in mixed-radix order with the
//! first coordinate most significant. Entropies default to bits; every
//! function that takes a `base` accepts any base greater than one.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};

/// Allowed deviation of a probability vector's sum from one.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Negative mutual information down to this magnitude is treated as
/// rounding noise and clamped to zero.
pub const MI_CLAMP: f64 = 1e-9;

/// Largest per-coordinate alphabet accepted by [`sup_dependence`].
pub const SUP_DEPENDENCE_MAX_ALPHABET: usize = 16;

#[derive(Deserialize)]
#[serde(untagged)]
enum RawLabel {
    Text(String),
    Number(serde_json::Number),
}

impl From<RawLabel> for String {
    fn from(l: RawLabel) -> Self {
        match l {
            RawLabel::Text(s) => s,
            RawLabel::Number(n) => n.to_string(),
        }
    }
}

/// Ordered list of distinct symbol labels. JSON numbers are accepted as
/// labels and stored as their decimal text.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<RawLabel>", into = "Vec<String>")]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl TryFrom<Vec<RawLabel>> for Alphabet {
    type Error = Error;
    fn try_from(raw: Vec<RawLabel>) -> Result<Self> {
        Alphabet::new(raw.into_iter().map(String::from).collect())
    }
}

impl From<Alphabet> for Vec<String> {
    fn from(a: Alphabet) -> Self {
        a.symbols
    }
}

impl Alphabet {
    pub fn new(symbols: Vec<String>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::validation("alphabet must have at least one symbol"));
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if !seen.insert(s.as_str()) {
                return Err(Error::validation(format!("duplicate symbol label {s:?}")));
            }
        }
        Ok(Self { symbols })
    }

    /// Labels `"0"`, `"1"`, ..., `"n-1"`.
    pub fn indexed(n: usize) -> Self {
        assert!(n >= 1, "alphabet must be non-empty");
        Self {
            symbols: (0..n).map(|i| i.to_string()).collect(),
        }
    }

    pub fn binary() -> Self {
        Self::indexed(2)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn label(&self, i: usize) -> &str {
        &self.symbols[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == label)
    }

    fn product(parts: &[&Alphabet]) -> Alphabet {
        let mut labels = vec![String::new()];
        for a in parts {
            let mut next = Vec::with_capacity(labels.len() * a.len());
            for prefix in &labels {
                for s in &a.symbols {
                    if prefix.is_empty() {
                        next.push(s.clone());
                    } else {
                        next.push(format!("{prefix},{s}"));
                    }
                }
            }
            labels = next;
        }
        Alphabet {
            symbols: labels.into_iter().map(|l| format!("({l})")).collect(),
        }
    }
}

fn validate_probs(probs: &[f64]) -> Result<()> {
    let mut sum = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::validation(format!(
                "probability #{i} is {p}, expected a finite non-negative number"
            )));
        }
        sum += p;
    }
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::validation(format!(
            "probabilities sum to {sum}, expected 1 within {SUM_TOLERANCE}"
        )));
    }
    Ok(())
}

fn check_base(base: f64) -> Result<()> {
    if !(base.is_finite() && base > 1.0) {
        return Err(Error::validation(format!("logarithm base must exceed 1, got {base}")));
    }
    Ok(())
}

/// Shannon entropy of a probability vector in nats, `0 log 0 = 0`.
fn entropy_nats(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.ln())
        .sum()
}

/// Distribution on a finite alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDist")]
pub struct Dist {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

#[derive(Deserialize)]
struct RawDist {
    alphabet: Alphabet,
    probs: Vec<f64>,
}

impl TryFrom<RawDist> for Dist {
    type Error = Error;
    fn try_from(raw: RawDist) -> Result<Self> {
        Dist::new(raw.alphabet, raw.probs)
    }
}

impl Dist {
    pub fn new(alphabet: Alphabet, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != alphabet.len() {
            return Err(Error::validation(format!(
                "{} probabilities for an alphabet of {} symbols",
                probs.len(),
                alphabet.len()
            )));
        }
        validate_probs(&probs)?;
        Ok(Self { alphabet, probs })
    }

    /// Distribution on the indexed alphabet of `probs.len()` symbols.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::validation("empty probability vector"));
        }
        Self::new(Alphabet::indexed(probs.len()), probs)
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            alphabet: Alphabet::indexed(n),
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self {
            alphabet: Alphabet::indexed(n),
            probs,
        }
    }

    /// Bernoulli(p) on `{"0", "1"}`.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::validation(format!("Bernoulli parameter {p} outside [0, 1]")));
        }
        Ok(Self {
            alphabet: Alphabet::binary(),
            probs: vec![1.0 - p, p],
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Joint distribution of `n >= 1` finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDist {
    coords: Vec<Alphabet>,
    probs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JointEntry {
    key: Vec<usize>,
    p: f64,
}

#[derive(Serialize, Deserialize)]
struct RawJoint {
    coords: Vec<Alphabet>,
    probs: Vec<JointEntry>,
}

impl Serialize for JointDist {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let probs = self
            .probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p != 0.0)
            .map(|(i, &p)| JointEntry {
                key: self.decode(i),
                p,
            })
            .collect();
        RawJoint {
            coords: self.coords.clone(),
            probs,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JointDist {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawJoint::deserialize(d)?;
        JointDist::from_entries(raw.coords, raw.probs.into_iter().map(|e| (e.key, e.p)))
            .map_err(serde::de::Error::custom)
    }
}

impl JointDist {
    /// Builds a joint from a dense probability vector in mixed-radix order.
    pub fn new(coords: Vec<Alphabet>, probs: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::validation("joint distribution needs at least one coordinate"));
        }
        let size = Self::checked_size(&coords)?;
        if probs.len() != size {
            return Err(Error::validation(format!(
                "{} probabilities for a joint of size {size}",
                probs.len()
            )));
        }
        validate_probs(&probs)?;
        Ok(Self { coords, probs })
    }

    /// Builds a joint from sparse `(key, p)` entries; missing keys have mass 0.
    pub fn from_entries(
        coords: Vec<Alphabet>,
        entries: impl IntoIterator<Item = (Vec<usize>, f64)>,
    ) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::validation("joint distribution needs at least one coordinate"));
        }
        let size = Self::checked_size(&coords)?;
        let mut probs = vec![0.0; size];
        let mut seen = BTreeSet::new();
        for (key, p) in entries {
            if key.len() != coords.len() {
                return Err(Error::validation(format!(
                    "key {key:?} has arity {}, expected {}",
                    key.len(),
                    coords.len()
                )));
            }
            for (c, (&k, a)) in key.iter().zip(&coords).enumerate() {
                if k >= a.len() {
                    return Err(Error::validation(format!(
                        "key {key:?}: index {k} out of range for coordinate {c}"
                    )));
                }
            }
            if !seen.insert(key.clone()) {
                return Err(Error::validation(format!("duplicate key {key:?}")));
            }
            let idx = Self::encode_with(&coords, &key);
            probs[idx] = p;
        }
        validate_probs(&probs)?;
        Ok(Self { coords, probs })
    }

    /// Joint on indexed alphabets of the given sizes, probabilities from
    /// `f(key)`. The result is validated.
    pub fn from_fn(sizes: &[usize], f: impl Fn(&[usize]) -> f64) -> Result<Self> {
        let coords: Vec<Alphabet> = sizes.iter().map(|&n| Alphabet::indexed(n)).collect();
        let size = Self::checked_size(&coords)?;
        let mut probs = Vec::with_capacity(size);
        let mut key = vec![0usize; sizes.len()];
        for _ in 0..size {
            probs.push(f(&key));
            increment(&mut key, sizes);
        }
        Self::new(coords, probs)
    }

    /// Two-coordinate joint from a row-major matrix `rows[x][y]`.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map_or(0, Vec::len);
        if nx == 0 || ny == 0 || rows.iter().any(|r| r.len() != ny) {
            return Err(Error::validation("matrix must be non-empty and rectangular"));
        }
        Self::new(
            vec![Alphabet::indexed(nx), Alphabet::indexed(ny)],
            rows.iter().flatten().copied().collect(),
        )
    }

    fn checked_size(coords: &[Alphabet]) -> Result<usize> {
        let mut size: u128 = 1;
        for a in coords {
            size = size.saturating_mul(a.len() as u128);
        }
        budget::check("joint distribution size", size)?;
        Ok(size as usize)
    }

    fn encode_with(coords: &[Alphabet], key: &[usize]) -> usize {
        key.iter()
            .zip(coords)
            .fold(0usize, |acc, (&k, a)| acc * a.len() + k)
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut key = vec![0; self.coords.len()];
        for (slot, a) in key.iter_mut().zip(&self.coords).rev() {
            *slot = idx % a.len();
            idx /= a.len();
        }
        key
    }

    pub fn arity(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Alphabet] {
        &self.coords
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.coords.iter().map(Alphabet::len).collect()
    }

    /// Dense probabilities in mixed-radix order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, key: &[usize]) -> f64 {
        self.probs[Self::encode_with(&self.coords, key)]
    }

    fn check_coords(&self, coords: &[usize]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &c in coords {
            if c >= self.arity() {
                return Err(Error::validation(format!(
                    "coordinate {c} out of range for a joint of arity {}",
                    self.arity()
                )));
            }
            if !seen.insert(c) {
                return Err(Error::validation(format!("coordinate {c} used twice")));
            }
        }
        Ok(())
    }

    /// Dense marginal over `coords`, in the order given.
    fn marginal_probs(&self, coords: &[usize]) -> Vec<f64> {
        let sizes = self.sizes();
        let out_size: usize = coords.iter().map(|&c| sizes[c]).product();
        let mut out = vec![0.0; out_size];
        let mut key = vec![0usize; sizes.len()];
        for &p in &self.probs {
            if p != 0.0 {
                let idx = coords.iter().fold(0usize, |acc, &c| acc * sizes[c] + key[c]);
                out[idx] += p;
            }
            increment(&mut key, &sizes);
        }
        out
    }

    /// Marginal law of one coordinate.
    pub fn marginal(&self, coord: usize) -> Result<Dist> {
        self.check_coords(&[coord])?;
        Ok(Dist {
            alphabet: self.coords[coord].clone(),
            probs: self.marginal_probs(&[coord]),
        })
    }

    /// Joint entropy of the coordinates in `coords`; the empty set has entropy 0.
    pub fn entropy_of(&self, coords: &[usize], base: f64) -> Result<f64> {
        check_base(base)?;
        self.check_coords(coords)?;
        Ok(entropy_nats(self.marginal_probs(coords)) / base.ln())
    }

    /// `I(A : B) = H(A) + H(B) - H(A, B)` for disjoint coordinate sets.
    pub fn mutual_information_between(&self, a: &[usize], b: &[usize], base: f64) -> Result<f64> {
        let union: Vec<usize> = a.iter().chain(b).copied().collect();
        self.check_coords(&union)?;
        let raw = self.entropy_of(a, base)? + self.entropy_of(b, base)? - self.entropy_of(&union, base)?;
        clamp_mi(raw)
    }
}

fn clamp_mi(raw: f64) -> Result<f64> {
    if raw >= 0.0 {
        Ok(raw)
    } else if raw >= -MI_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::Internal(format!("mutual information evaluated to {raw}")))
    }
}

fn increment(key: &mut [usize], sizes: &[usize]) {
    for i in (0..key.len()).rev() {
        key[i] += 1;
        if key[i] < sizes[i] {
            return;
        }
        key[i] = 0;
    }
}

/// Shannon entropy `-sum p log_base p`.
pub fn entropy(d: &Dist, base: f64) -> Result<f64> {
    check_base(base)?;
    validate_probs(&d.probs)?;
    Ok(entropy_nats(d.probs.iter().copied()) / base.ln())
}

/// Mutual information of a two-coordinate joint.
pub fn mutual_information(j: &JointDist, base: f64) -> Result<f64> {
    if j.arity() != 2 {
        return Err(Error::validation(format!(
            "mutual information needs 2 coordinates, got {}",
            j.arity()
        )));
    }
    j.mutual_information_between(&[0], &[1], base)
}

/// Regroups coordinates into blocks. Each block becomes one coordinate over
/// the product alphabet of its members (singleton blocks keep their
/// alphabet); coordinates not named by any block are marginalised out.
pub fn group(j: &JointDist, partition: &[Vec<usize>]) -> Result<JointDist> {
    if partition.is_empty() {
        return Err(Error::validation("partition must have at least one block"));
    }
    if partition.iter().any(Vec::is_empty) {
        return Err(Error::validation("partition blocks must be non-empty"));
    }
    let flat: Vec<usize> = partition.iter().flatten().copied().collect();
    j.check_coords(&flat).map_err(|e| match e {
        Error::Validation(msg) if msg.contains("used twice") => {
            Error::validation(format!("overlapping partition blocks: {msg}"))
        }
        other => other,
    })?;
    let coords = partition
        .iter()
        .map(|block| {
            if block.len() == 1 {
                j.coords[block[0]].clone()
            } else {
                let parts: Vec<&Alphabet> = block.iter().map(|&c| &j.coords[c]).collect();
                Alphabet::product(&parts)
            }
        })
        .collect();
    // Flattened block order is exactly the mixed-radix order of the new joint.
    let probs = j.marginal_probs(&flat);
    Ok(JointDist { coords, probs })
}

/// Total variation distance `sup_A |p(A) - q(A)| = (1/2) sum |p_i - q_i|`.
pub fn tv_distance(p: &Dist, q: &Dist) -> Result<f64> {
    if p.alphabet != q.alphabet {
        return Err(Error::validation("total variation needs identical alphabets"));
    }
    Ok(tv_of_probs(&p.probs, &q.probs))
}

pub(crate) fn tv_of_probs(p: &[f64], q: &[f64]) -> f64 {
    let l1: f64 = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    (0.5 * l1).min(1.0)
}

/// Total variation between two joints over the same coordinates.
pub fn tv_distance_joint(p: &JointDist, q: &JointDist) -> Result<f64> {
    if p.coords != q.coords {
        return Err(Error::validation("total variation needs identical coordinate alphabets"));
    }
    Ok(tv_of_probs(&p.probs, &q.probs))
}

/// Maximising rectangle of [`sup_dependence`], as bit masks over the two
/// alphabets.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DependenceWitness {
    pub value: f64,
    pub a_mask: u32,
    pub b_mask: u32,
}

/// `max_{A, B} |P(A x B) - P(A) P(B)|` over all subset pairs.
///
/// For a fixed `A` the optimal `B` collects either all positive or all
/// negative column excesses, so only the `2^|X|` row subsets are enumerated.
pub fn sup_dependence(j: &JointDist) -> Result<f64> {
    sup_dependence_witness(j).map(|w| w.value)
}

pub fn sup_dependence_witness(j: &JointDist) -> Result<DependenceWitness> {
    if j.arity() != 2 {
        return Err(Error::validation(format!(
            "dependence coefficient needs 2 coordinates, got {}",
            j.arity()
        )));
    }
    let (nx, ny) = (j.coords[0].len(), j.coords[1].len());
    if nx > SUP_DEPENDENCE_MAX_ALPHABET || ny > SUP_DEPENDENCE_MAX_ALPHABET {
        return Err(Error::budget(
            format!(
                "exhaustive dependence coefficient (alphabet limit {SUP_DEPENDENCE_MAX_ALPHABET} per coordinate)"
            ),
            format!("{nx}x{ny}"),
            SUP_DEPENDENCE_MAX_ALPHABET as u64,
        ));
    }
    let px = j.marginal_probs(&[0]);
    let py = j.marginal_probs(&[1]);
    let excess: Vec<f64> = (0..nx * ny)
        .map(|i| j.probs[i] - px[i / ny] * py[i % ny])
        .collect();
    let mut best = DependenceWitness {
        value: 0.0,
        a_mask: 0,
        b_mask: 0,
    };
    let mut column = vec![0.0; ny];
    for a_mask in 1u32..(1 << nx) {
        column.iter_mut().for_each(|c| *c = 0.0);
        for x in (0..nx).filter(|x| a_mask >> x & 1 == 1) {
            for y in 0..ny {
                column[y] += excess[x * ny + y];
            }
        }
        let (mut pos, mut neg, mut pos_mask, mut neg_mask) = (0.0, 0.0, 0u32, 0u32);
        for (y, &c) in column.iter().enumerate() {
            if c > 0.0 {
                pos += c;
                pos_mask |= 1 << y;
            } else if c < 0.0 {
                neg -= c;
                neg_mask |= 1 << y;
            }
        }
        if pos > best.value {
            best = DependenceWitness { value: pos, a_mask, b_mask: pos_mask };
        }
        if neg > best.value {
            best = DependenceWitness { value: neg, a_mask, b_mask: neg_mask };
        }
    }
    Ok(best)
}

/// Entropy of `V`, its information with each `W_i`, and the dependence
/// level among the `W`'s, as needed by the O'Connell inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    /// `H(V)` in bits.
    pub entropy_bits: f64,
    /// `I(V : W_i)` in bits, in `W` order.
    pub mi_terms: Vec<f64>,
    /// `H(V) - sum_i I(V : W_i)`.
    pub gap: f64,
    /// `max_i I(W_i : (W_1, ..., W_{i-1}))`, zero when there is a single `W`.
    pub gamma_star: f64,
}

impl InfoReport {
    pub fn n(&self) -> usize {
        self.mi_terms.len()
    }

    /// Exact inequality for independent `W`'s.
    pub fn independent_bound_holds(&self) -> bool {
        self.gap >= -MI_CLAMP
    }

    /// Almost-independent bound `gap > -n * gamma_star`, with slack 1e-9.
    pub fn approximate_bound_holds(&self) -> bool {
        self.gap > -(self.n() as f64) * self.gamma_star - MI_CLAMP
    }
}

/// Evaluates both O'Connell inequalities for `V = coordinate v_coord` and
/// `W_1, ..., W_n` = the remaining coordinates in order.
pub fn oconnell_report(j: &JointDist, v_coord: usize) -> Result<InfoReport> {
    if j.arity() < 2 {
        return Err(Error::validation(format!(
            "O'Connell report needs V and at least one W, got arity {}",
            j.arity()
        )));
    }
    j.check_coords(&[v_coord])?;
    let ws: Vec<usize> = (0..j.arity()).filter(|&c| c != v_coord).collect();
    let entropy_bits = j.entropy_of(&[v_coord], 2.0)?;
    let mi_terms: Vec<f64> = ws
        .iter()
        .map(|&w| j.mutual_information_between(&[v_coord], &[w], 2.0))
        .collect::<Result<_>>()?;
    let mut gamma_star: f64 = 0.0;
    for i in 1..ws.len() {
        let gamma = j.mutual_information_between(&[ws[i]], &ws[..i], 2.0)?;
        gamma_star = gamma_star.max(gamma);
    }
    let gap = entropy_bits - mi_terms.iter().sum::<f64>();
    Ok(InfoReport {
        entropy_bits,
        mi_terms,
        gap,
        gamma_star,
    })
}

/// Product measure of the given marginals.
pub fn product_dist(ms: &[Dist]) -> Result<JointDist> {
    if ms.is_empty() {
        return Err(Error::validation("product of an empty list of distributions"));
    }
    let coords: Vec<Alphabet> = ms.iter().map(|m| m.alphabet.clone()).collect();
    let size = JointDist::checked_size(&coords)?;
    let mut probs = vec![1.0];
    probs.reserve(size);
    for m in ms {
        probs = probs
            .iter()
            .flat_map(|&acc| m.probs.iter().map(move |&p| acc * p))
            .collect();
    }
    Ok(JointDist { coords, probs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bsc() -> JointDist {
        JointDist::from_matrix(&[vec![0.4, 0.1], vec![0.1, 0.4]]).unwrap()
    }

    fn copy_bit() -> JointDist {
        JointDist::from_matrix(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy(&Dist::uniform(2), 2.0).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(entropy(&Dist::point(3, 1), 2.0).unwrap(), 0.0);
        let b = Dist::bernoulli(0.25).unwrap();
        // -.25 log2 .25 - .75 log2 .75
        let expected = 0.5 + 0.75 * (4.0f64 / 3.0).log2();
        assert_abs_diff_eq!(entropy(&b, 2.0).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(entropy(&b, 2.0).unwrap(), 0.811_278_124_459_132_8, epsilon = 1e-12);
    }

    #[test]
    fn entropy_rejects_bad_input() {
        assert!(matches!(Dist::from_probs(vec![0.5, 0.6]), Err(Error::Validation(_))));
        assert!(matches!(Dist::from_probs(vec![-0.5, 1.5]), Err(Error::Validation(_))));
        assert!(entropy(&Dist::uniform(2), 1.0).is_err());
        let bad: std::result::Result<Dist, _> =
            serde_json::from_str(r#"{"alphabet":["a","b"],"probs":[0.3,0.3]}"#);
        assert!(bad.is_err());
    }

    #[test]
    fn mutual_information_examples() {
        let indep = product_dist(&[Dist::bernoulli(0.3).unwrap(), Dist::uniform(3)]).unwrap();
        assert_abs_diff_eq!(mutual_information(&indep, 2.0).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mutual_information(&copy_bit(), 2.0).unwrap(), 1.0, epsilon = 1e-14);
        // 2 - H(.4, .1, .1, .4)
        let h_joint = -(2.0 * 0.4 * 0.4f64.log2() + 2.0 * 0.1 * 0.1f64.log2());
        assert_abs_diff_eq!(mutual_information(&bsc(), 2.0).unwrap(), 2.0 - h_joint, epsilon = 1e-14);
        assert_abs_diff_eq!(mutual_information(&bsc(), 2.0).unwrap(), 0.278_071_905_112_638, epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_wrong_arity() {
        let j = product_dist(&[Dist::uniform(2), Dist::uniform(2), Dist::uniform(2)]).unwrap();
        assert!(matches!(mutual_information(&j, 2.0), Err(Error::Validation(_))));
    }

    #[test]
    fn clamp_behaviour() {
        assert_eq!(clamp_mi(-1e-10).unwrap(), 0.0);
        assert_eq!(clamp_mi(0.25).unwrap(), 0.25);
        assert!(matches!(clamp_mi(-1e-6), Err(Error::Internal(_))));
    }

    #[test]
    fn group_examples() {
        let j = JointDist::from_fn(&[2, 3, 2], |k| (1 + k[0] + 2 * k[1] + k[2]) as f64 / 48.0).unwrap();
        let g = group(&j, &[vec![0], vec![1, 2]]).unwrap();
        assert_eq!(g.sizes(), vec![2, 6]);
        assert_eq!(g.coords()[1].label(0), "(0,0)");
        assert_abs_diff_eq!(g.prob(&[1, 5]), j.prob(&[1, 2, 1]), epsilon = 0.0);

        let two = JointDist::from_matrix(&[vec![0.1, 0.2], vec![0.3, 0.4]]).unwrap();
        let m = group(&two, &[vec![0]]).unwrap();
        assert_eq!(m.arity(), 1);
        assert_abs_diff_eq!(m.probs()[0], 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(m.probs()[1], 0.7, epsilon = 1e-15);

        let u = product_dist(&[Dist::uniform(2), Dist::uniform(2), Dist::uniform(2)]).unwrap();
        assert_eq!(group(&u, &[vec![0], vec![1], vec![2]]).unwrap(), u);
    }

    #[test]
    fn group_rejects_overlap() {
        let u = product_dist(&[Dist::uniform(2), Dist::uniform(2), Dist::uniform(2)]).unwrap();
        let err = group(&u, &[vec![0, 1], vec![1, 2]]).unwrap_err();
        assert!(matches!(err, Error::Validation(ref m) if m.contains("overlapping")), "{err}");
        assert!(group(&u, &[vec![3]]).is_err());
        assert!(group(&u, &[vec![]]).is_err());
    }

    #[test]
    fn tv_examples() {
        let p = Dist::bernoulli(0.5).unwrap();
        assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
        assert_eq!(tv_distance(&Dist::point(3, 0), &Dist::point(3, 2)).unwrap(), 1.0);
        let q = Dist::bernoulli(0.7).unwrap();
        assert_abs_diff_eq!(tv_distance(&p, &q).unwrap(), 0.2, epsilon = 1e-15);
        assert!(tv_distance(&p, &Dist::uniform(3)).is_err());
    }

    #[test]
    fn sup_dependence_examples() {
        let indep = product_dist(&[Dist::bernoulli(0.2).unwrap(), Dist::uniform(4)]).unwrap();
        assert_abs_diff_eq!(sup_dependence(&indep).unwrap(), 0.0, epsilon = 1e-15);
        assert_eq!(sup_dependence(&copy_bit()).unwrap(), 0.25);
        let w = sup_dependence_witness(&bsc()).unwrap();
        assert_abs_diff_eq!(w.value, 0.15, epsilon = 1e-15);
    }

    #[test]
    fn sup_dependence_budget() {
        let j = product_dist(&[Dist::uniform(17), Dist::uniform(2)]).unwrap();
        match sup_dependence(&j) {
            Err(Error::Budget { what, .. }) => assert!(what.contains("16")),
            other => panic!("expected budget error, got {other:?}"),
        }
        let ok = product_dist(&[Dist::uniform(16), Dist::uniform(16)]).unwrap();
        assert!(sup_dependence(&ok).is_ok());
    }

    #[test]
    fn oconnell_independent_v() {
        let j = product_dist(&[Dist::bernoulli(0.3).unwrap(), Dist::uniform(2), Dist::uniform(3)]).unwrap();
        let r = oconnell_report(&j, 0).unwrap();
        assert!(r.mi_terms.iter().all(|&m| m.abs() < 1e-12));
        assert_abs_diff_eq!(r.gap, entropy(&Dist::bernoulli(0.3).unwrap(), 2.0).unwrap(), epsilon = 1e-12);
        assert!(r.independent_bound_holds());
    }

    #[test]
    fn oconnell_equality_case() {
        // V = (W1, W2) encoded as 2*W1 + W2.
        let j = JointDist::from_fn(&[4, 2, 2], |k| if k[0] == 2 * k[1] + k[2] { 0.25 } else { 0.0 }).unwrap();
        let r = oconnell_report(&j, 0).unwrap();
        assert_abs_diff_eq!(r.entropy_bits, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mi_terms[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.mi_terms[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gap, 0.0, epsilon = 1e-12);
        assert_eq!(r.gamma_star, 0.0);
    }

    #[test]
    fn oconnell_arity() {
        let j = JointDist::new(vec![Alphabet::binary()], vec![0.5, 0.5]).unwrap();
        assert!(matches!(oconnell_report(&j, 0), Err(Error::Validation(_))));
        assert!(oconnell_report(&bsc(), 2).is_err());
    }

    #[test]
    fn product_examples() {
        let d = Dist::bernoulli(0.3).unwrap();
        let single = product_dist(std::slice::from_ref(&d)).unwrap();
        assert_eq!(single.probs(), d.probs());
        let two = product_dist(&[Dist::uniform(2), Dist::uniform(2)]).unwrap();
        assert_eq!(two.probs(), &[0.25; 4]);
        assert!(product_dist(&[]).is_err());
    }

    #[test]
    fn product_budget() {
        let big = vec![Dist::uniform(16); 7];
        assert!(matches!(product_dist(&big), Err(Error::Budget { .. })));
    }

    #[test]
    fn joint_json_round_trip() {
        let text = r#"{"coords":[["a","b"],[0,1,2]],"probs":[{"key":[0,0],"p":0.5},{"key":[1,2],"p":0.5}]}"#;
        let j: JointDist = serde_json::from_str(text).unwrap();
        assert_eq!(j.coords()[1].label(2), "2");
        assert_eq!(j.prob(&[1, 2]), 0.5);
        let back: JointDist = serde_json::from_str(&serde_json::to_string(&j).unwrap()).unwrap();
        assert_eq!(back, j);
        let bad = r#"{"coords":[["a","b"]],"probs":[{"key":[0,0],"p":1.0}]}"#;
        assert!(serde_json::from_str::<JointDist>(bad).is_err());
        let dup = r#"{"coords":[["a","a"]],"probs":[{"key":[0],"p":1.0}]}"#;
        assert!(serde_json::from_str::<JointDist>(dup).is_err());
    }
}
