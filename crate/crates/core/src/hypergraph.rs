//! Validated k-uniform k-partite hypergraphs.
//!
//! Every hyperedge of a [`KPartiteHypergraph`] has exactly one vertex in each
//! part. Vertices are addressed by [`VertexId`] (part index plus position in
//! the part), and hyperedges are stored as vertex lists ordered by part, so
//! `edge[p].part == p` always holds.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// A vertex, identified by its part and its position within that part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub part: usize,
    pub local: usize,
}

impl VertexId {
    pub const fn new(part: usize, local: usize) -> Self {
        Self { part, local }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.part, self.local)
    }
}

/// A hyperedge or trace: vertices sorted by `(part, local)`.
pub type VertexSet = Vec<VertexId>;

/// Whether isolated vertices are rejected or tolerated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Coverage {
    #[default]
    Strict,
    Lenient,
}

/// Unvalidated input: part label lists and edges given as label lists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub parts: Vec<Vec<String>>,
    pub edges: Vec<Vec<String>>,
}

impl RawInstance {
    pub fn new<S: AsRef<str>>(parts: &[&[S]], edges: &[&[S]]) -> Self {
        let own = |xs: &[S]| xs.iter().map(|s| s.as_ref().to_owned()).collect();
        Self {
            parts: parts.iter().map(|p| own(p)).collect(),
            edges: edges.iter().map(|e| own(e)).collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypergraphError {
    #[error("a k-partite hypergraph needs at least 2 parts, got {0}")]
    TooFewParts(usize),
    #[error("part {0} is empty")]
    EmptyPart(usize),
    #[error("vertex label `{0}` is declared more than once")]
    DuplicateVertexLabel(String),
    #[error("edge {edge} references undeclared vertex `{label}`")]
    UnknownVertexLabel { edge: usize, label: String },
    #[error("edge {edge} has {size} vertices, expected {k}")]
    NotUniform { edge: usize, size: usize, k: usize },
    #[error("edge {edge} has {count} vertices in part {part}, expected exactly 1")]
    NotPartite { edge: usize, part: usize, count: usize },
    #[error("vertex `{0}` lies in no edge")]
    IsolatedVertex(String),
    #[error("vertex subset is empty")]
    EmptySubset,
    #[error("vertex {0} does not belong to the hypergraph")]
    UnknownVertex(VertexId),
    #[error("expected a set of {expected} vertices, got {actual}")]
    WrongArity { expected: usize, actual: usize },
    #[error("vertices {0} and {1} lie in the same part")]
    SamePart(VertexId, VertexId),
}

/// A k-uniform k-partite hypergraph in canonical form.
///
/// Vertices inside each part are ordered by their labels (numeric-aware), and
/// edges are sorted lexicographically by their per-part local indices. All
/// tie-breaking in the crate follows this order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPartiteHypergraph {
    labels: Vec<Vec<String>>,
    edges: Vec<VertexSet>,
    edge_index: HashSet<VertexSet>,
}

impl KPartiteHypergraph {
    /// Validates `raw` and returns the canonical instance.
    pub fn build(raw: &RawInstance, coverage: Coverage) -> Result<Self, HypergraphError> {
        let k = raw.parts.len();
        if k < 2 {
            return Err(HypergraphError::TooFewParts(k));
        }
        let mut labels = Vec::with_capacity(k);
        let mut seen = HashSet::new();
        for (p, part) in raw.parts.iter().enumerate() {
            if part.is_empty() {
                return Err(HypergraphError::EmptyPart(p));
            }
            for label in part {
                if !seen.insert(label.as_str()) {
                    return Err(HypergraphError::DuplicateVertexLabel(label.clone()));
                }
            }
            let mut sorted = part.clone();
            sorted.sort_by(|a, b| natural_cmp(a, b));
            labels.push(sorted);
        }

        let lookup: HashMap<&str, VertexId> = labels
            .iter()
            .enumerate()
            .flat_map(|(p, part)| {
                part.iter()
                    .enumerate()
                    .map(move |(i, l)| (l.as_str(), VertexId::new(p, i)))
            })
            .collect();

        let mut edges = BTreeSet::new();
        for (e, raw_edge) in raw.edges.iter().enumerate() {
            if raw_edge.len() != k {
                return Err(HypergraphError::NotUniform {
                    edge: e,
                    size: raw_edge.len(),
                    k,
                });
            }
            let mut edge = Vec::with_capacity(k);
            for label in raw_edge {
                match lookup.get(label.as_str()) {
                    Some(&v) => edge.push(v),
                    None => {
                        return Err(HypergraphError::UnknownVertexLabel {
                            edge: e,
                            label: label.clone(),
                        })
                    }
                }
            }
            let mut per_part = vec![0usize; k];
            for v in &edge {
                per_part[v.part] += 1;
            }
            if let Some((part, &count)) = per_part.iter().enumerate().find(|(_, &c)| c != 1) {
                return Err(HypergraphError::NotPartite { edge: e, part, count });
            }
            edge.sort_unstable();
            edges.insert(edge);
        }

        let hypergraph = Self {
            labels,
            edge_index: edges.iter().cloned().collect(),
            edges: edges.into_iter().collect(),
        };
        if coverage == Coverage::Strict {
            if let Some(v) = hypergraph.isolated_vertices().first() {
                return Err(HypergraphError::IsolatedVertex(hypergraph.label(*v).to_owned()));
            }
        }
        Ok(hypergraph)
    }

    /// Number of parts.
    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn part_size(&self, part: usize) -> usize {
        self.labels[part].len()
    }

    pub fn part_sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn part(&self, part: usize) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.labels[part].len()).map(move |i| VertexId::new(part, i))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.k()).flat_map(move |p| self.part(p))
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        v.part < self.k() && v.local < self.labels[v.part].len()
    }

    /// Canonically ordered hyperedges.
    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Whether `vertices` (in any order) forms a hyperedge.
    pub fn contains_edge(&self, vertices: &[VertexId]) -> bool {
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        self.edge_index.contains(&sorted)
    }

    pub fn label(&self, v: VertexId) -> &str {
        &self.labels[v.part][v.local]
    }

    pub fn labels(&self) -> &[Vec<String>] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<VertexId> {
        self.labels.iter().enumerate().find_map(|(p, part)| {
            part.iter()
                .position(|l| l == label)
                .map(|i| VertexId::new(p, i))
        })
    }

    /// Resolves a list of labels; `None` if any label is unknown.
    pub fn vertices_by_labels<S: AsRef<str>>(&self, labels: &[S]) -> Option<VertexSet> {
        let mut out = labels
            .iter()
            .map(|l| self.vertex_by_label(l.as_ref()))
            .collect::<Option<Vec<_>>>()?;
        out.sort_unstable();
        Some(out)
    }

    pub fn set_labels(&self, set: &[VertexId]) -> Vec<String> {
        set.iter().map(|&v| self.label(v).to_owned()).collect()
    }

    /// Vertices lying in no hyperedge, in canonical order.
    pub fn isolated_vertices(&self) -> Vec<VertexId> {
        let touched: HashSet<VertexId> = self.edges.iter().flatten().copied().collect();
        self.vertices().filter(|v| !touched.contains(v)).collect()
    }

    pub fn to_raw(&self) -> RawInstance {
        RawInstance {
            parts: self.labels.clone(),
            edges: self.edges.iter().map(|e| self.set_labels(e)).collect(),
        }
    }

    /// Rotates the part order left by `shift`, so part `shift` becomes the first.
    pub fn rotate_parts(&self, shift: usize) -> Self {
        let mut raw = self.to_raw();
        let k = self.k();
        raw.parts.rotate_left(shift % k);
        Self::build(&raw, Coverage::Lenient).expect("rotation preserves validity")
    }

    /// The subhypergraph generated on `subset`: all nonempty traces `e ∩ subset`.
    pub fn generated_subhypergraph(
        &self,
        subset: &BTreeSet<VertexId>,
    ) -> Result<GeneratedSubhypergraph, HypergraphError> {
        if subset.is_empty() {
            return Err(HypergraphError::EmptySubset);
        }
        if let Some(&v) = subset.iter().find(|&&v| !self.contains_vertex(v)) {
            return Err(HypergraphError::UnknownVertex(v));
        }
        let traces: BTreeSet<VertexSet> = self
            .edges
            .iter()
            .map(|e| e.iter().copied().filter(|v| subset.contains(v)).collect::<Vec<_>>())
            .filter(|t| !t.is_empty())
            .collect();

        let mut parts = Vec::new();
        let mut is_union = true;
        for p in 0..self.k() {
            let inside = self.part(p).filter(|v| subset.contains(v)).count();
            if inside == self.part_size(p) {
                parts.push(PartSpan { index: p, size: inside });
            } else if inside > 0 {
                is_union = false;
            }
        }

        Ok(GeneratedSubhypergraph {
            base: subset.clone(),
            traces: traces.into_iter().collect(),
            parts: is_union.then_some(parts),
        })
    }

    /// The subhypergraph generated on the union of all parts except the last.
    pub fn prefix_subhypergraph(&self) -> GeneratedSubhypergraph {
        let subset = (0..self.k() - 1).flat_map(|p| self.part(p)).collect();
        self.generated_subhypergraph(&subset)
            .expect("prefix parts are nonempty")
    }

    /// All (k−1)-subsets contained in at least one hyperedge.
    pub fn submaximal_edges(&self) -> Vec<SubmaximalEdge> {
        let set: BTreeSet<VertexSet> = self
            .edges
            .iter()
            .flat_map(|e| {
                (0..e.len()).map(move |skip| {
                    e.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        set.into_iter()
            .map(|vertices| SubmaximalEdge { vertices })
            .collect()
    }

    /// `N(e) = { v : e ∪ {v} is a hyperedge }`; empty when `e` lies in no edge.
    pub fn neighborhood(&self, edge: &[VertexId]) -> Result<BTreeSet<VertexId>, HypergraphError> {
        let sub = SubmaximalEdge::new(self.k(), edge.to_vec())?;
        if let Some(&v) = sub.vertices.iter().find(|&&v| !self.contains_vertex(v)) {
            return Err(HypergraphError::UnknownVertex(v));
        }
        let missing = sub.missing_part(self.k());
        Ok(self
            .edges
            .iter()
            .filter(|e| {
                e.iter()
                    .filter(|v| v.part != missing)
                    .eq(sub.vertices.iter())
            })
            .map(|e| e[missing])
            .collect())
    }

    /// `N(A)`, the union of neighborhoods over a family of (k−1)-sets.
    pub fn neighborhood_of_set<'a, I>(&self, family: I) -> Result<BTreeSet<VertexId>, HypergraphError>
    where
        I: IntoIterator<Item = &'a [VertexId]>,
    {
        let mut union = BTreeSet::new();
        for edge in family {
            union.extend(self.neighborhood(edge)?);
        }
        Ok(union)
    }
}

/// A (k−1)-set of vertices with at most one vertex per part.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubmaximalEdge {
    vertices: VertexSet,
}

impl SubmaximalEdge {
    pub fn new(k: usize, mut vertices: VertexSet) -> Result<Self, HypergraphError> {
        if vertices.len() + 1 != k {
            return Err(HypergraphError::WrongArity {
                expected: k - 1,
                actual: vertices.len(),
            });
        }
        vertices.sort_unstable();
        if let Some(w) = vertices.windows(2).find(|w| w[0].part == w[1].part) {
            return Err(HypergraphError::SamePart(w[0], w[1]));
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn covered_parts(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.part).collect()
    }

    /// The single part index in `0..k` this set does not touch.
    pub fn missing_part(&self, k: usize) -> usize {
        (0..k)
            .find(|p| self.vertices.iter().all(|v| v.part != *p))
            .expect("a (k-1)-set misses one part")
    }
}

impl AsRef<[VertexId]> for SubmaximalEdge {
    fn as_ref(&self) -> &[VertexId] {
        &self.vertices
    }
}

/// A part fully contained in the base set of a generated subhypergraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartSpan {
    pub index: usize,
    pub size: usize,
}

/// Deduplicated traces of hyperedges on a vertex subset.
///
/// Containment between traces is kept; only exact duplicates are merged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedSubhypergraph {
    base: BTreeSet<VertexId>,
    traces: Vec<VertexSet>,
    parts: Option<Vec<PartSpan>>,
}

impl GeneratedSubhypergraph {
    pub fn base(&self) -> &BTreeSet<VertexId> {
        &self.base
    }

    pub fn traces(&self) -> &[VertexSet] {
        &self.traces
    }

    pub fn contains_trace(&self, trace: &[VertexId]) -> bool {
        let mut sorted = trace.to_vec();
        sorted.sort_unstable();
        self.traces.binary_search(&sorted).is_ok()
    }

    /// Part structure, present only when the base set is a union of whole parts.
    pub fn parts(&self) -> Option<&[PartSpan]> {
        self.parts.as_deref()
    }
}

/// Orders labels so that embedded numbers compare numerically (`a2 < a10`),
/// falling back to byte order to keep the comparison total.
pub(crate) fn natural_cmp(a: &str, b: &str) -> Ordering {
    natord::compare(a, b).then_with(|| a.cmp(b))
}
