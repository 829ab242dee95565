//! Recursive graphs with copy-swapping automorphisms and their random
//! subgraphs.
//!
//! `G_0` is an arbitrary finite graph. `G_n` consists of two copies
//! `G_{n-1}^a`, `G_{n-1}^b` and a fresh finite graph `L_n`; each `L_n`
//! vertex is joined to all or none of the copy vertices, and cross edges
//! between the copies come in symmetric pairs `u^a - v^b`, `v^a - u^b`.
//! `G_{n-1}` is identified with its `a` copy, so a vertex of `G_m` keeps its
//! identity in `G_n` by padding its copy word with `a`.
//!
//! A vertex born at level `o` carries one copy letter per later step: the
//! letter chosen at step `j > o` sits at word position `j - o - 1`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::budget;
use crate::error::{Error, Result};
use crate::mc::{count_parallel, McConfig, McReport};
use crate::rng::{self, CounterStream};
use crate::symmetry::PositionalMap;

/// Vertex identity: copy word, level of birth, label within `G_0` or `L_m`.
///
/// The derived order (word, then origin, then local) is the canonical
/// vertex order used for edge ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId {
    pub word: String,
    pub origin: usize,
    pub local: usize,
}

impl VertexId {
    pub fn new(word: &str, origin: usize, local: usize) -> Self {
        Self {
            word: word.to_string(),
            origin,
            local,
        }
    }

    /// Copy letter chosen at construction step `step`, if the vertex existed then.
    pub fn letter_at_step(&self, step: usize) -> Option<u8> {
        if step <= self.origin {
            return None;
        }
        self.word.as_bytes().get(step - self.origin - 1).copied()
    }

    /// Label safe for CSV output: `o<origin>_v<local>_w<word>`.
    pub fn label(&self) -> String {
        format!("o{}_v{}_w{}", self.origin, self.local, self.word)
    }

    fn with_letter(&self, letter: char) -> Self {
        let mut word = self.word.clone();
        word.push(letter);
        Self {
            word,
            origin: self.origin,
            local: self.local,
        }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Plain finite simple graph on vertices `0..vertices`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseGraph {
    pub vertices: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

impl BaseGraph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self { vertices, edges };
        g.validate()?;
        Ok(g)
    }

    pub fn empty(vertices: usize) -> Self {
        Self {
            vertices,
            edges: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if u >= self.vertices || v >= self.vertices {
                return Err(Error::validation(format!("edge ({u}, {v}) references a missing vertex")));
            }
            if u == v {
                return Err(Error::validation(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::validation(format!("repeated edge ({u}, {v})")));
            }
        }
        Ok(())
    }
}

/// Choices made when building `G_n` from `G_{n-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSpec {
    pub l_graph: BaseGraph,
    /// Per `L_n` vertex: joined to every copy vertex, or to none.
    pub attach: Vec<bool>,
    /// Generators `(u, v)` over `G_{n-1}` vertices, each meaning the edges
    /// `u^a - v^b` and `v^a - u^b`.
    #[serde(default)]
    pub cross_pairs: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub g0: BaseGraph,
    pub levels: Vec<LevelSpec>,
    /// Seed the spec was drawn from, if it was generated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Shape of a randomly drawn [`ConstructionSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomSpecParams {
    pub levels: usize,
    pub g0_vertices: usize,
    pub edge_p: f64,
    /// Each `L_n` has between 1 and this many vertices.
    pub max_l_vertices: usize,
    pub attach_p: f64,
    /// Each level gets between 0 and this many cross-pair generators.
    pub max_cross_pairs: usize,
}

impl Default for RandomSpecParams {
    fn default() -> Self {
        Self {
            levels: 3,
            g0_vertices: 3,
            edge_p: 0.5,
            max_l_vertices: 2,
            attach_p: 0.5,
            max_cross_pairs: 2,
        }
    }
}

fn random_base(stream: &mut CounterStream, vertices: usize, edge_p: f64) -> BaseGraph {
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if stream.next_bool(edge_p) {
                edges.push((u, v));
            }
        }
    }
    BaseGraph { vertices, edges }
}

impl ConstructionSpec {
    /// Spec whose arbitrary choices are drawn from `seed`.
    pub fn random(params: &RandomSpecParams, seed: u64) -> Self {
        let mut stream = CounterStream::new(seed, 0x0067_7261_7068);
        let g0 = random_base(&mut stream, params.g0_vertices.max(1), params.edge_p);
        // Vertex ids of G_{j-1} are only needed for cross pairs, so track them cheaply.
        let mut current: Vec<VertexId> = (0..g0.vertices).map(|i| VertexId::new("", 0, i)).collect();
        let mut levels = Vec::with_capacity(params.levels);
        for j in 1..=params.levels {
            let l_vertices = 1 + stream.below(params.max_l_vertices.max(1) as u64) as usize;
            let l_graph = random_base(&mut stream, l_vertices, params.edge_p);
            let attach = (0..l_vertices).map(|_| stream.next_bool(params.attach_p)).collect();
            let n_cross = stream.below(params.max_cross_pairs as u64 + 1) as usize;
            let cross_pairs = (0..n_cross)
                .map(|_| {
                    let u = current[stream.below(current.len() as u64) as usize].clone();
                    let v = current[stream.below(current.len() as u64) as usize].clone();
                    (u, v)
                })
                .collect();
            let mut next: Vec<VertexId> = current
                .iter()
                .flat_map(|v| [v.with_letter('a'), v.with_letter('b')])
                .collect();
            next.extend((0..l_vertices).map(|i| VertexId::new("", j, i)));
            current = next;
            levels.push(LevelSpec {
                l_graph,
                attach,
                cross_pairs,
            });
        }
        Self {
            g0,
            levels,
            seed: Some(seed),
        }
    }

    /// `|V(G_n)| = 2^n |G_0| + sum_m 2^(n-m) |L_m|`.
    pub fn vertex_count(&self, n: usize) -> u128 {
        let mut count = self.g0.vertices as u128;
        for level in self.levels.iter().take(n) {
            count = count.saturating_mul(2).saturating_add(level.l_graph.vertices as u128);
        }
        count
    }
}

/// A finite simple graph with canonically ordered vertices and edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGraph {
    level: usize,
    vertices: Vec<VertexId>,
    /// Sorted `(u, v)` index pairs with `u < v`; the position is the edge id.
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl FiniteGraph {
    fn from_parts(level: usize, mut vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        vertices.sort();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Internal("duplicate vertex ids".to_string()));
        }
        let idx = |v: &VertexId| {
            vertices
                .binary_search(v)
                .map_err(|_| Error::Internal(format!("edge references unknown vertex {v}")))
        };
        let mut pairs = Vec::with_capacity(edges.len());
        for (u, v) in &edges {
            let (a, b) = (idx(u)?, idx(v)?);
            if a == b {
                return Err(Error::Internal(format!("loop at {u}")));
            }
            pairs.push((a.min(b), a.max(b)));
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut adjacency = vec![Vec::new(); vertices.len()];
        for &(a, b) in &pairs {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency.iter_mut().for_each(|n| n.sort_unstable());
        Ok(Self {
            level,
            vertices,
            edges: pairs,
            adjacency,
        })
    }

    /// Construction level `n` of this graph.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.vertices.binary_search(v).ok()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&(u.min(v), u.max(v))).ok()
    }

    /// Edge ids with both endpoints in `vertices`.
    pub fn induced_edges(&self, vertices: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = vertices.iter().copied().collect();
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, (u, v))| set.contains(u) && set.contains(v))
            .map(|(i, _)| i)
            .collect()
    }

    /// Vertices incident to the given edge ids.
    pub fn incident_vertices(&self, edge_ids: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = edge_ids
            .iter()
            .flat_map(|&e| [self.edges[e].0, self.edges[e].1])
            .collect();
        set.into_iter().collect()
    }

    /// Edge list CSV with header `u,v`.
    pub fn to_csv(&self) -> String {
        self.edges_csv(None)
    }

    /// Edge list CSV of the kept edges only.
    pub fn edges_csv(&self, keep: Option<&[bool]>) -> String {
        let mut out = String::from("u,v\n");
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if keep.is_none_or(|k| k[i]) {
                out.push_str(&format!("{},{}\n", self.vertices[u].label(), self.vertices[v].label()));
            }
        }
        out
    }

    /// Adjacency JSON: `{"level": n, "vertices": [...], "adjacency": {label: [labels]}}`.
    pub fn to_adjacency_json(&self) -> serde_json::Value {
        let adjacency: serde_json::Map<String, serde_json::Value> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let nbrs = self.adjacency[i]
                    .iter()
                    .map(|&j| serde_json::Value::String(self.vertices[j].label()))
                    .collect();
                (v.label(), serde_json::Value::Array(nbrs))
            })
            .collect();
        serde_json::json!({
            "level": self.level,
            "vertices": self.vertices.iter().map(VertexId::label).collect::<Vec<_>>(),
            "edges": self.edge_count(),
            "adjacency": adjacency,
        })
    }
}

/// Builds `G_n`.
pub fn build(spec: &ConstructionSpec, n: usize) -> Result<FiniteGraph> {
    if n > spec.levels.len() {
        return Err(Error::validation(format!(
            "level {n} requested but the spec defines {} levels",
            spec.levels.len()
        )));
    }
    budget::check("graph vertices", spec.vertex_count(n))?;
    spec.g0.validate()?;

    let mut vertices: Vec<VertexId> = (0..spec.g0.vertices).map(|i| VertexId::new("", 0, i)).collect();
    let mut edges: Vec<(VertexId, VertexId)> = spec
        .g0
        .edges
        .iter()
        .map(|&(u, v)| (vertices[u].clone(), vertices[v].clone()))
        .collect();

    for (j, level) in spec.levels.iter().enumerate().take(n).map(|(i, l)| (i + 1, l)) {
        level.l_graph.validate()?;
        if level.attach.len() != level.l_graph.vertices {
            return Err(Error::validation(format!(
                "level {j}: attach has {} entries for {} L vertices",
                level.attach.len(),
                level.l_graph.vertices
            )));
        }
        let mut by_kind: HashMap<(usize, usize), Vec<&VertexId>> = HashMap::new();
        for v in &vertices {
            by_kind.entry((v.origin, v.local)).or_default().push(v);
        }
        let present: BTreeSet<&VertexId> = vertices.iter().collect();
        let mut next_edges = Vec::with_capacity(edges.len() * 2);
        for (u, v) in &edges {
            next_edges.push((u.with_letter('a'), v.with_letter('a')));
            next_edges.push((u.with_letter('b'), v.with_letter('b')));
        }
        // Cross pairs are closed over all copies of each endpoint so that
        // every lower-level copy swap stays an automorphism.
        for (u, v) in &level.cross_pairs {
            for w in [u, v] {
                if !present.contains(w) {
                    return Err(Error::validation(format!("level {j}: cross pair vertex {w} is not in G_{}", j - 1)));
                }
            }
            for &u2 in &by_kind[&(u.origin, u.local)] {
                for &v2 in &by_kind[&(v.origin, v.local)] {
                    next_edges.push((u2.with_letter('a'), v2.with_letter('b')));
                    next_edges.push((v2.with_letter('a'), u2.with_letter('b')));
                }
            }
        }
        let l_ids: Vec<VertexId> = (0..level.l_graph.vertices).map(|i| VertexId::new("", j, i)).collect();
        for &(a, b) in &level.l_graph.edges {
            next_edges.push((l_ids[a].clone(), l_ids[b].clone()));
        }
        let mut next_vertices: Vec<VertexId> = Vec::with_capacity(vertices.len() * 2 + l_ids.len());
        for v in &vertices {
            next_vertices.push(v.with_letter('a'));
            next_vertices.push(v.with_letter('b'));
        }
        for (l, &attached) in l_ids.iter().zip(&level.attach) {
            if attached {
                for v in &next_vertices {
                    next_edges.push((l.clone(), v.clone()));
                }
            }
        }
        next_vertices.extend(l_ids);
        vertices = next_vertices;
        edges = next_edges;
    }
    FiniteGraph::from_parts(n, vertices, edges)
}

/// Vertex permutation as an index table: vertex `i` maps to `perm[i]`.
pub type VertexPerm = Vec<usize>;

/// The automorphism exchanging the two copies of `G_m` inside the embedded
/// `G_{m+1}`: flips the copy letter of step `m + 1` on every vertex of
/// `G_{m+1}` born at level `<= m`, and fixes all other vertices.
pub fn swap_automorphism(g: &FiniteGraph, m: usize) -> Result<VertexPerm> {
    if m + 1 > g.level {
        return Err(Error::validation(format!(
            "swap at level {m} needs a graph built to level {} (have {})",
            m + 1,
            g.level
        )));
    }
    let n = g.level;
    g.vertices
        .iter()
        .map(|v| {
            let moved = v.origin <= m && (m + 2..=n).all(|step| v.letter_at_step(step) == Some(b'a'));
            if !moved {
                return g.index_of(v).ok_or_else(|| Error::Internal(format!("unknown vertex {v}")));
            }
            let pos = m - v.origin;
            let mut word = v.word.clone().into_bytes();
            word[pos] = if word[pos] == b'a' { b'b' } else { b'a' };
            let image = VertexId {
                word: String::from_utf8(word).expect("ascii copy word"),
                origin: v.origin,
                local: v.local,
            };
            g.index_of(&image)
                .ok_or_else(|| Error::Internal(format!("swap image {image} missing")))
        })
        .collect()
}

/// Whether `perm` is a bijection of the vertices preserving adjacency.
pub fn is_automorphism(g: &FiniteGraph, perm: &[usize]) -> bool {
    if perm.len() != g.vertex_count() {
        return false;
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    g.edges.iter().all(|&(u, v)| g.has_edge(perm[u], perm[v]))
}

/// The copy swap at the smallest level `m` such that all of `a` lies in one
/// copy of `G_m` inside the embedded `G_{m+1}`. The returned permutation
/// moves `a` onto a disjoint set.
pub fn disjoint_automorphism_for(g: &FiniteGraph, a: &[usize]) -> Result<(usize, VertexPerm)> {
    if a.is_empty() {
        return Err(Error::validation("vertex set must be non-empty"));
    }
    if let Some(&bad) = a.iter().find(|&&i| i >= g.vertex_count()) {
        return Err(Error::validation(format!("vertex index {bad} out of range")));
    }
    let n = g.level;
    let vs: Vec<&VertexId> = a.iter().map(|&i| &g.vertices[i]).collect();
    for m in 0..n {
        let inside = vs
            .iter()
            .all(|v| v.origin <= m && (m + 2..=n).all(|s| v.letter_at_step(s) == Some(b'a')));
        if !inside {
            continue;
        }
        let first = vs[0].letter_at_step(m + 1);
        if vs.iter().all(|v| v.letter_at_step(m + 1) == first) {
            let theta = swap_automorphism(g, m)?;
            let set: BTreeSet<usize> = a.iter().copied().collect();
            if a.iter().any(|&i| set.contains(&theta[i])) {
                return Err(Error::Internal("copy swap did not separate the set".to_string()));
            }
            return Ok((m, theta));
        }
    }
    Err(Error::Depth(format!(
        "no copy of G_m inside G_{n} contains the whole set; build the graph deeper (or avoid top-level L vertices)"
    )))
}

/// The edge map `pi(uv) = theta(u) theta(v)` on edge ids.
pub fn edge_map_of(g: &FiniteGraph, theta: &[usize]) -> Result<PositionalMap> {
    if !is_automorphism(g, theta) {
        return Err(Error::validation("vertex map is not an automorphism of the graph"));
    }
    let pairs = g.edges.iter().enumerate().map(|(e, &(u, v))| {
        let image = g.edge_id(theta[u], theta[v]).expect("automorphism preserves edges");
        (e as i64, image as i64)
    });
    PositionalMap::finitary(pairs)
}

fn check_p(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::validation(format!("p = {p} outside [0, 1]")));
    }
    Ok(())
}

/// Keep-mask of a random subgraph: edge `e` is kept with probability `p`.
pub fn sample_subgraph(g: &FiniteGraph, p: f64, seed: u64) -> Result<Vec<bool>> {
    check_p(p)?;
    Ok(sample_mask(g, p, seed, 0))
}

/// Keep-mask of sample `sample` in a seeded sequence.
pub fn sample_mask(g: &FiniteGraph, p: f64, seed: u64, sample: u64) -> Vec<bool> {
    (0..g.edge_count() as u64)
        .map(|e| rng::bernoulli(seed, sample, e, p))
        .collect()
}

/// A property of spanning subgraphs, given by a keep-mask over edge ids.
///
/// Implementations are trusted to be invariant under graph isomorphism.
pub trait SubgraphProperty: Sync {
    fn name(&self) -> String;
    fn holds(&self, g: &FiniteGraph, keep: &[bool]) -> bool;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphProperty {
    Always,
    HasEdge,
    HasTriangle,
    MinDegreeAtLeast(usize),
    Connected,
    HasIsolatedVertex,
}

impl FromStr for GraphProperty {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "true" | "always" => GraphProperty::Always,
            "has-edge" => GraphProperty::HasEdge,
            "has-triangle" => GraphProperty::HasTriangle,
            "connected" => GraphProperty::Connected,
            "has-isolated-vertex" => GraphProperty::HasIsolatedVertex,
            other => match other.strip_prefix("min-degree-") {
                Some(k) => GraphProperty::MinDegreeAtLeast(
                    k.parse().map_err(|_| Error::validation(format!("bad degree in {other:?}")))?,
                ),
                None => return Err(Error::validation(format!("unknown property {other:?}"))),
            },
        })
    }
}

fn kept_adjacency(g: &FiniteGraph, keep: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for (&(u, v), _) in g.edges.iter().zip(keep).filter(|(_, &k)| k) {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj.iter_mut().for_each(|n| n.sort_unstable());
    adj
}

impl SubgraphProperty for GraphProperty {
    fn name(&self) -> String {
        match self {
            GraphProperty::Always => "true".to_string(),
            GraphProperty::HasEdge => "has-edge".to_string(),
            GraphProperty::HasTriangle => "has-triangle".to_string(),
            GraphProperty::MinDegreeAtLeast(k) => format!("min-degree-{k}"),
            GraphProperty::Connected => "connected".to_string(),
            GraphProperty::HasIsolatedVertex => "has-isolated-vertex".to_string(),
        }
    }

    fn holds(&self, g: &FiniteGraph, keep: &[bool]) -> bool {
        match self {
            GraphProperty::Always => true,
            GraphProperty::HasEdge => keep.iter().any(|&k| k),
            GraphProperty::HasTriangle => {
                let adj = kept_adjacency(g, keep);
                g.edges.iter().zip(keep).filter(|(_, &k)| k).any(|(&(u, v), _)| {
                    adj[u].iter().any(|w| *w > v && adj[v].binary_search(w).is_ok())
                })
            }
            GraphProperty::MinDegreeAtLeast(k) => kept_adjacency(g, keep).iter().all(|n| n.len() >= *k),
            GraphProperty::HasIsolatedVertex => kept_adjacency(g, keep).iter().any(Vec::is_empty),
            GraphProperty::Connected => {
                let adj = kept_adjacency(g, keep);
                if adj.is_empty() {
                    return true;
                }
                let mut seen = vec![false; adj.len()];
                let mut stack = vec![0];
                seen[0] = true;
                let mut count = 1;
                while let Some(u) = stack.pop() {
                    for &w in &adj[u] {
                        if !seen[w] {
                            seen[w] = true;
                            count += 1;
                            stack.push(w);
                        }
                    }
                }
                count == adj.len()
            }
        }
    }
}

/// Empirical probability that a random subgraph with parameter `p` has the
/// property. Sample `i` uses [`sample_mask`] with index `i`.
pub fn estimate_property(
    g: &FiniteGraph,
    p: f64,
    property: &dyn SubgraphProperty,
    cfg: &McConfig,
) -> Result<McReport> {
    check_p(p)?;
    cfg.validate()?;
    let counts = count_parallel(cfg.samples, cfg.workers, 1, |i, acc| {
        if property.holds(g, &sample_mask(g, p, cfg.seed, i)) {
            acc[0] += 1;
        }
    });
    Ok(McReport::from_counts(counts[0], cfg.samples, cfg.seed)
        .tag("level", g.level())
        .tag("p", p)
        .tag("property", property.name()))
}
