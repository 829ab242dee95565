//! Positional maps on an index set and positional symmetries of events.
//!
//! Maps act on configurations by pullback: for a configuration `a` and a map
//! `pi`, the configuration `a^pi` has `(a^pi)_k = a_{pi(k)}`. With this
//! convention `(a^g)^f = a^(g o f)`, i.e. pullback is contravariant. Getting
//! the direction wrong silently turns every check into a check about the
//! inverse map, so all code in this module goes through [`apply_map`] or
//! [`PositionalMap::eval`].
//!
//! Maps are stored symbolically (shift, finitary table, composition) and are
//! only ever evaluated on finite windows.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use bitvec::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};
use crate::info::Alphabet;

/// The countable index set a map acts on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum IndexSet {
    Integers,
    Labeled { ids: Vec<i64> },
}

impl IndexSet {
    pub fn labeled(ids: Vec<i64>) -> Result<Self> {
        let unique: BTreeSet<_> = ids.iter().collect();
        if unique.len() != ids.len() {
            return Err(Error::validation("labeled index set has duplicate ids"));
        }
        Ok(IndexSet::Labeled { ids })
    }

    pub fn contains(&self, k: i64) -> bool {
        match self {
            IndexSet::Integers => true,
            IndexSet::Labeled { ids } => ids.contains(&k),
        }
    }

    /// Whether `map` sends every element of a labeled set back into it.
    /// Always true on the integers. Only the finitely many ids of a labeled
    /// set are checked.
    pub fn is_closed_under(&self, map: &PositionalMap) -> bool {
        match self {
            IndexSet::Integers => true,
            IndexSet::Labeled { ids } => ids.iter().all(|&k| self.contains(map.eval(k))),
        }
    }
}

/// A map `pi` from the index set to itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PositionalMap {
    /// `k -> k + k0`.
    Shift { k: i64 },
    /// Explicit table on a finite support, identity elsewhere.
    Finitary {
        #[serde(with = "int_keys")]
        table: BTreeMap<i64, i64>,
    },
    /// `maps[0] o maps[1] o ... o maps[n-1]`; the last map is applied first.
    Composition { maps: Vec<PositionalMap> },
}

impl PositionalMap {
    pub fn identity() -> Self {
        PositionalMap::Finitary {
            table: BTreeMap::new(),
        }
    }

    pub fn shift(k: i64) -> Self {
        if k == 0 {
            Self::identity()
        } else {
            PositionalMap::Shift { k }
        }
    }

    /// Finitary map from `(from, to)` pairs. Fixed points are dropped; a
    /// repeated source with conflicting targets is rejected.
    pub fn finitary(pairs: impl IntoIterator<Item = (i64, i64)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (from, to) in pairs {
            if let Some(prev) = table.insert(from, to) {
                if prev != to {
                    return Err(Error::validation(format!(
                        "finitary table sends {from} to both {prev} and {to}"
                    )));
                }
            }
        }
        table.retain(|k, v| k != v);
        Ok(PositionalMap::Finitary { table })
    }

    /// Transposition of two indices.
    pub fn transposition(a: i64, b: i64) -> Self {
        Self::finitary([(a, b), (b, a)]).expect("transposition is well defined")
    }

    pub fn is_identity(&self) -> bool {
        match self {
            PositionalMap::Shift { k } => *k == 0,
            PositionalMap::Finitary { table } => table.iter().all(|(k, v)| k == v),
            PositionalMap::Composition { maps } => maps.iter().all(Self::is_identity),
        }
    }

    /// `pi(k)`.
    pub fn eval(&self, k: i64) -> i64 {
        match self {
            PositionalMap::Shift { k: s } => k + s,
            PositionalMap::Finitary { table } => table.get(&k).copied().unwrap_or(k),
            PositionalMap::Composition { maps } => maps.iter().rev().fold(k, |acc, m| m.eval(acc)),
        }
    }

    /// Images of a window, in window order.
    pub fn image(&self, window: &[i64]) -> Vec<i64> {
        window.iter().map(|&k| self.eval(k)).collect()
    }

    fn parts(self) -> Vec<PositionalMap> {
        match self {
            PositionalMap::Composition { maps } => maps.into_iter().flat_map(Self::parts).collect(),
            m if m.is_identity() => Vec::new(),
            m => vec![m],
        }
    }
}

mod int_keys {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(table: &BTreeMap<i64, i64>, s: S) -> Result<S::Ok, S::Error> {
        table.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, i64>, D::Error> {
        let raw = BTreeMap::<String, i64>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<i64>()
                    .map(|k| (k, v))
                    .map_err(|_| serde::de::Error::custom(format!("table key {k:?} is not an integer")))
            })
            .collect()
    }
}

/// Fuses two adjacent factors `f o g` when they have the same kind.
fn fuse(f: &PositionalMap, g: &PositionalMap) -> Option<PositionalMap> {
    match (f, g) {
        (PositionalMap::Shift { k: a }, PositionalMap::Shift { k: b }) => Some(PositionalMap::shift(a + b)),
        (PositionalMap::Finitary { table: tf }, PositionalMap::Finitary { table: tg }) => {
            let support: BTreeSet<i64> = tf.keys().chain(tg.keys()).copied().collect();
            let mut table = BTreeMap::new();
            for k in support {
                let v = f.eval(g.eval(k));
                if v != k {
                    table.insert(k, v);
                }
            }
            Some(PositionalMap::Finitary { table })
        }
        _ => None,
    }
}

/// `f o g`, i.e. `k -> f(g(k))`, in normal form: identities dropped,
/// adjacent shifts summed, adjacent finitary tables fused.
pub fn compose(f: &PositionalMap, g: &PositionalMap) -> PositionalMap {
    let mut stack: Vec<PositionalMap> = Vec::new();
    for part in f.clone().parts().into_iter().chain(g.clone().parts()) {
        let mut current = part;
        while let Some(top) = stack.pop() {
            match fuse(&top, &current) {
                Some(fused) => current = fused,
                None => {
                    stack.push(top);
                    break;
                }
            }
        }
        if !current.is_identity() {
            stack.push(current);
        }
    }
    match stack.len() {
        0 => PositionalMap::identity(),
        1 => stack.pop().expect("one element"),
        _ => PositionalMap::Composition { maps: stack },
    }
}

/// Finite assignment of symbol indices to indices.
pub type Config = BTreeMap<i64, usize>;

/// Pullback of `config` along `map`, restricted to `target`:
/// `result_k = config_{map(k)}` for `k` in `target`.
pub fn apply_map(config: &Config, map: &PositionalMap, target: &[i64]) -> Result<Config> {
    let mut out = Config::new();
    let mut missing = BTreeSet::new();
    for &k in target {
        let src = map.eval(k);
        match config.get(&src) {
            Some(&v) => {
                out.insert(k, v);
            }
            None => {
                missing.insert(src);
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::Coverage {
            missing: missing.into_iter().collect(),
        });
    }
    Ok(out)
}

/// Whether `map` is injective on `window`.
pub fn is_injective_on(map: &PositionalMap, window: &[i64]) -> bool {
    let domain: BTreeSet<i64> = window.iter().copied().collect();
    let images: BTreeSet<i64> = domain.iter().map(|&k| map.eval(k)).collect();
    images.len() == domain.len()
}

/// An event determined by the values on a finite window.
pub trait WindowEvent: Send + Sync {
    fn window(&self) -> &[i64];
    fn alphabet_size(&self) -> usize;
    /// Membership of the configuration whose value at `window()[i]` is
    /// `values[i]`.
    fn contains(&self, values: &[usize]) -> bool;
}

/// Mixed-radix index of a window configuration, first entry most significant.
pub fn encode_config(values: &[usize], radix: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * radix + v)
}

pub fn decode_config(mut index: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut values = vec![0; len];
    for slot in values.iter_mut().rev() {
        *slot = index % radix;
        index /= radix;
    }
    values
}

/// Cylinder event stored as a truth table over all `|M|^|W|` window
/// configurations.
///
/// Bit `i` of the table is the membership of the configuration with
/// mixed-radix index `i` (first window index most significant). The JSON
/// `bits` field is the table packed least-significant-bit first into bytes,
/// hex encoded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CylinderEvent {
    window: Vec<i64>,
    alphabet: Alphabet,
    table: BitVec<u8, Lsb0>,
}

#[derive(Serialize, Deserialize)]
struct RawEvent {
    window: Vec<i64>,
    alphabet: Alphabet,
    bits: String,
}

impl Serialize for CylinderEvent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawEvent {
            window: self.window.clone(),
            alphabet: self.alphabet.clone(),
            bits: hex::encode(self.table.as_raw_slice()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CylinderEvent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawEvent::deserialize(d)?;
        CylinderEvent::from_hex(raw.window, raw.alphabet, &raw.bits).map_err(serde::de::Error::custom)
    }
}

impl CylinderEvent {
    fn table_len(window: &[i64], alphabet: &Alphabet) -> Result<usize> {
        let unique: BTreeSet<_> = window.iter().collect();
        if unique.len() != window.len() {
            return Err(Error::validation("event window has repeated indices"));
        }
        let len = budget::power(alphabet.len() as u64, window.len());
        budget::check("cylinder event table", len)?;
        Ok(len as usize)
    }

    /// Tabulates `predicate` over every configuration of the window.
    pub fn from_fn(window: Vec<i64>, alphabet: Alphabet, predicate: impl Fn(&[usize]) -> bool) -> Result<Self> {
        let len = Self::table_len(&window, &alphabet)?;
        let radix = alphabet.len();
        let mut table = BitVec::with_capacity(len);
        let mut values = vec![0usize; window.len()];
        for _ in 0..len {
            table.push(predicate(&values));
            for i in (0..values.len()).rev() {
                values[i] += 1;
                if values[i] < radix {
                    break;
                }
                values[i] = 0;
            }
        }
        Ok(Self { window, alphabet, table })
    }

    /// Tabulates any window event.
    pub fn tabulate(event: &dyn WindowEvent, alphabet: Alphabet) -> Result<Self> {
        if alphabet.len() != event.alphabet_size() {
            return Err(Error::validation("alphabet size does not match the event"));
        }
        Self::from_fn(event.window().to_vec(), alphabet, |v| event.contains(v))
    }

    pub fn from_bits(window: Vec<i64>, alphabet: Alphabet, bits: &[bool]) -> Result<Self> {
        let len = Self::table_len(&window, &alphabet)?;
        if bits.len() != len {
            return Err(Error::validation(format!("table has {} entries, expected {len}", bits.len())));
        }
        Ok(Self {
            window,
            alphabet,
            table: bits.iter().copied().collect(),
        })
    }

    pub fn from_hex(window: Vec<i64>, alphabet: Alphabet, bits: &str) -> Result<Self> {
        let len = Self::table_len(&window, &alphabet)?;
        let bytes = hex::decode(bits).map_err(|e| Error::validation(format!("bad hex table: {e}")))?;
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::validation(format!(
                "hex table has {} bytes, expected {}",
                bytes.len(),
                len.div_ceil(8)
            )));
        }
        let mut table = BitVec::<u8, Lsb0>::from_vec(bytes);
        if table[len..].any() {
            return Err(Error::validation("hex table has bits set past its length"));
        }
        table.truncate(len);
        Ok(Self { window, alphabet, table })
    }

    /// The event containing every configuration.
    pub fn full(window: Vec<i64>, alphabet: Alphabet) -> Result<Self> {
        Self::from_fn(window, alphabet, |_| true)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn bit(&self, index: usize) -> bool {
        self.table[index]
    }

    pub fn table_len_bits(&self) -> usize {
        self.table.len()
    }

    pub fn hex(&self) -> String {
        hex::encode(self.table.as_raw_slice())
    }
}

impl WindowEvent for CylinderEvent {
    fn window(&self) -> &[i64] {
        &self.window
    }

    fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    fn contains(&self, values: &[usize]) -> bool {
        self.table[encode_config(values, self.alphabet.len())]
    }
}

type Predicate = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

/// Window event backed by a predicate instead of a table, for windows too
/// large to tabulate.
#[derive(Clone)]
pub struct FnEvent {
    window: Vec<i64>,
    alphabet_size: usize,
    predicate: Predicate,
}

impl FnEvent {
    pub fn new(
        window: Vec<i64>,
        alphabet_size: usize,
        predicate: impl Fn(&[usize]) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            window,
            alphabet_size,
            predicate: Arc::new(predicate),
        }
    }
}

impl std::fmt::Debug for FnEvent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FnEvent")
            .field("window", &self.window)
            .field("alphabet_size", &self.alphabet_size)
            .finish_non_exhaustive()
    }
}

impl WindowEvent for FnEvent {
    fn window(&self) -> &[i64] {
        &self.window
    }

    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn contains(&self, values: &[usize]) -> bool {
        (self.predicate)(values)
    }
}

/// Whether `map` is a positional symmetry of `event`: `a in E <=> a^pi in E`.
///
/// Both sides depend only on the values on `W u pi(W)`, so every
/// configuration of that union is checked.
pub fn is_positional_symmetry(event: &dyn WindowEvent, map: &PositionalMap) -> Result<bool> {
    let window = event.window();
    let image = map.image(window);
    let union: Vec<i64> = window
        .iter()
        .chain(&image)
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let radix = event.alphabet_size();
    let total = budget::power(radix as u64, union.len());
    budget::check("positional symmetry enumeration", total)?;
    let pos = |k: i64| union.binary_search(&k).expect("index in union");
    let direct: Vec<usize> = window.iter().map(|&k| pos(k)).collect();
    let pulled: Vec<usize> = image.iter().map(|&k| pos(k)).collect();

    let mut config = vec![0usize; union.len()];
    let mut a = vec![0usize; window.len()];
    let mut b = vec![0usize; window.len()];
    for _ in 0..total as usize {
        for (i, (&d, &p)) in direct.iter().zip(&pulled).enumerate() {
            a[i] = config[d];
            b[i] = config[p];
        }
        if event.contains(&a) != event.contains(&b) {
            return Ok(false);
        }
        for i in (0..config.len()).rev() {
            config[i] += 1;
            if config[i] < radix {
                break;
            }
            config[i] = 0;
        }
    }
    Ok(true)
}

/// Breadth-first search over words in `generators` of length
/// `1..=max_depth` for a map with `pi(J) n J` empty.
///
/// Words are visited by length, then lexicographically by generator
/// position; the word `[i1, ..., iL]` denotes `g_i1 o ... o g_iL`. The
/// first hit is returned, so the answer is deterministic.
pub fn find_disjoint_map(
    generators: &[PositionalMap],
    j: &[i64],
    max_depth: usize,
) -> Result<Option<PositionalMap>> {
    if max_depth == 0 {
        return Err(Error::validation("max_depth must be at least 1"));
    }
    if generators.is_empty() {
        return Ok(None);
    }
    let words: u128 = (1..=max_depth)
        .map(|l| budget::power(generators.len() as u64, l))
        .fold(0u128, |a, b| a.saturating_add(b));
    budget::check("disjoint map search words", words)?;

    let j_set: BTreeSet<i64> = j.iter().copied().collect();
    let disjoint = |m: &PositionalMap| j_set.iter().all(|&k| !j_set.contains(&m.eval(k)));
    let mut frontier = vec![PositionalMap::identity()];
    for _ in 0..max_depth {
        let mut next = Vec::with_capacity(frontier.len() * generators.len());
        for word in &frontier {
            for g in generators {
                let candidate = compose(word, g);
                if disjoint(&candidate) {
                    return Ok(Some(candidate));
                }
                next.push(candidate);
            }
        }
        frontier = next;
    }
    Ok(None)
}
