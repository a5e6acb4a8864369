//! Prefix perfect matchings, SDR machinery and the extension constructor.
//!
//! Given a perfect matching `M = {e_1, .., e_t}` of the subhypergraph
//! generated on the first `k − 1` parts, each `e_i` can be completed to a
//! hyperedge by any vertex of its neighborhood `N(e_i)` in the last part.
//! Choosing distinct completions is exactly a system of distinct
//! representatives for `(N(e_1), .., N(e_t))`, so the size of the largest
//! matching obtainable this way is `t − d`, where `d = max_A (|A| − |N(A)|)`
//! is the Hall deficiency of the family.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::hypergraph::{
    GeneratedSubhypergraph, HypergraphError, KPartiteHypergraph, SubmaximalEdge, VertexId,
    VertexSet,
};

/// Largest family size accepted by [`hall_subset_oracle`].
pub const SUBSET_ORACLE_MAX_T: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("not a perfect matching of the prefix subhypergraph: {0}")]
    NotPerfectPrefixMatching(String),
    #[error("subset oracle needs t <= {SUBSET_ORACLE_MAX_T}, got t = {0}")]
    TooLarge(usize),
    #[error("generated subhypergraph has no part structure")]
    MissingPartStructure,
    #[error("adjacency of left element {left} mentions {vertex}, which is not a right vertex")]
    UnknownRightVertex { left: usize, vertex: VertexId },
    #[error("criterion not applicable: {0}")]
    NotApplicable(NotApplicable),
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NotApplicable {
    #[error("prefix parts have unequal sizes {0:?}")]
    UnequalPrefixParts(Vec<usize>),
    #[error("the prefix subhypergraph has no perfect matching")]
    NoPrefixPerfectMatching,
}

/// A set of pairwise disjoint edges, kept in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching {
    edges: Vec<VertexSet>,
}

impl Matching {
    pub fn new(edges: Vec<VertexSet>) -> Self {
        let mut edges: Vec<VertexSet> = edges
            .into_iter()
            .map(|mut e| {
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort();
        Self { edges }
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_pairwise_disjoint(&self) -> bool {
        let mut seen = HashSet::new();
        self.edges.iter().flatten().all(|v| seen.insert(*v))
    }

    /// Whether this is a matching of `h`: disjoint edges, each a hyperedge of `h`.
    pub fn is_matching_of(&self, h: &KPartiteHypergraph) -> bool {
        self.is_pairwise_disjoint() && self.edges.iter().all(|e| h.contains_edge(e))
    }
}

/// Result of [`enumerate_perfect_matchings`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectMatchings {
    pub matchings: Vec<Matching>,
    /// Set when the parts differ in size, so no perfect matching can exist.
    pub unequal_parts: bool,
}

/// Up to `limit` perfect matchings of a part-structured subhypergraph, in
/// canonical order.
///
/// Backtracks over the vertices of the first part in order, trying the traces
/// through each vertex in canonical order.
pub fn enumerate_perfect_matchings(
    sub: &GeneratedSubhypergraph,
    limit: usize,
) -> Result<PerfectMatchings, MatchingError> {
    let parts = sub.parts().ok_or(MatchingError::MissingPartStructure)?;
    let Some(first) = parts.first() else {
        return Ok(PerfectMatchings { matchings: Vec::new(), unequal_parts: false });
    };
    if parts.iter().any(|p| p.size != first.size) {
        return Ok(PerfectMatchings { matchings: Vec::new(), unequal_parts: true });
    }

    let mut by_anchor: Vec<Vec<&VertexSet>> = vec![Vec::new(); first.size];
    for trace in sub.traces() {
        let anchors: Vec<_> = trace.iter().filter(|v| v.part == first.index).collect();
        // only traces with one vertex per part can appear in a perfect matching
        if anchors.len() == 1 && trace.len() == parts.len() {
            by_anchor[anchors[0].local].push(trace);
        }
    }

    struct Search<'a> {
        by_anchor: Vec<Vec<&'a VertexSet>>,
        used: HashSet<VertexId>,
        chosen: Vec<&'a VertexSet>,
        found: Vec<Matching>,
        limit: usize,
    }

    impl Search<'_> {
        fn run(&mut self, anchor: usize) {
            if self.found.len() >= self.limit {
                return;
            }
            if anchor == self.by_anchor.len() {
                self.found
                    .push(Matching::new(self.chosen.iter().map(|t| (*t).clone()).collect()));
                return;
            }
            for i in 0..self.by_anchor[anchor].len() {
                let trace = self.by_anchor[anchor][i];
                if trace.iter().any(|v| self.used.contains(v)) {
                    continue;
                }
                self.used.extend(trace.iter().copied());
                self.chosen.push(trace);
                self.run(anchor + 1);
                self.chosen.pop();
                for v in trace {
                    self.used.remove(v);
                }
                if self.found.len() >= self.limit {
                    return;
                }
            }
        }
    }

    let mut search = Search {
        by_anchor,
        used: HashSet::new(),
        chosen: Vec::new(),
        found: Vec::new(),
        limit: limit.max(1),
    };
    search.run(0);
    Ok(PerfectMatchings { matchings: search.found, unequal_parts: false })
}

/// The family `(N(e_1), .., N(e_t))` as a bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdrInstance {
    left: Vec<SubmaximalEdge>,
    right: Vec<VertexId>,
    adjacency: Vec<Vec<usize>>,
}

impl SdrInstance {
    /// Builds an instance from explicit neighborhoods. `right` is sorted and
    /// deduplicated; every adjacency entry must be one of its vertices.
    pub fn new(
        left: Vec<SubmaximalEdge>,
        right: Vec<VertexId>,
        neighborhoods: Vec<BTreeSet<VertexId>>,
    ) -> Result<Self, MatchingError> {
        assert_eq!(left.len(), neighborhoods.len(), "one neighborhood per left element");
        let mut right = right;
        right.sort_unstable();
        right.dedup();
        let adjacency = neighborhoods
            .iter()
            .enumerate()
            .map(|(i, n)| {
                n.iter()
                    .map(|v| {
                        right
                            .binary_search(v)
                            .map_err(|_| MatchingError::UnknownRightVertex { left: i, vertex: *v })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { left, right, adjacency })
    }

    /// The instance induced by a perfect matching `m` of the prefix
    /// subhypergraph: left side is `m`, right side is the last part.
    pub fn from_prefix_matching(
        h: &KPartiteHypergraph,
        m: &Matching,
    ) -> Result<Self, MatchingError> {
        check_prefix_perfect_matching(h, m)?;
        let k = h.k();
        let left = m
            .edges()
            .iter()
            .map(|e| SubmaximalEdge::new(k, e.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let neighborhoods = left
            .iter()
            .map(|e| h.neighborhood(e.vertices()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(left, h.part(k - 1).collect(), neighborhoods)
    }

    pub fn left(&self) -> &[SubmaximalEdge] {
        &self.left
    }

    pub fn right(&self) -> &[VertexId] {
        &self.right
    }

    pub fn neighborhood(&self, i: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[i].iter().map(|&r| self.right[r])
    }
}

/// A maximum partial SDR: `(left index, representative)` pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdrMatching {
    pub pairs: Vec<(usize, VertexId)>,
    mate_of_left: Vec<Option<usize>>,
    mate_of_right: Vec<Option<usize>>,
}

impl SdrMatching {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Maximum-cardinality SDR by augmenting paths.
///
/// Left elements are processed in ascending order and candidates are tried
/// in canonical vertex order, so the result is a function of the instance.
pub fn max_bipartite_matching(inst: &SdrInstance) -> SdrMatching {
    fn augment(
        inst: &SdrInstance,
        i: usize,
        visited: &mut [bool],
        mate_of_left: &mut [Option<usize>],
        mate_of_right: &mut [Option<usize>],
    ) -> bool {
        for &r in &inst.adjacency[i] {
            if visited[r] {
                continue;
            }
            visited[r] = true;
            let free = match mate_of_right[r] {
                None => true,
                Some(j) => augment(inst, j, visited, mate_of_left, mate_of_right),
            };
            if free {
                mate_of_right[r] = Some(i);
                mate_of_left[i] = Some(r);
                return true;
            }
        }
        false
    }

    let mut mate_of_left = vec![None; inst.left.len()];
    let mut mate_of_right = vec![None; inst.right.len()];
    for i in 0..inst.left.len() {
        let mut visited = vec![false; inst.right.len()];
        augment(inst, i, &mut visited, &mut mate_of_left, &mut mate_of_right);
    }
    let pairs = mate_of_left
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.map(|r| (i, inst.right[r])))
        .collect();
    SdrMatching { pairs, mate_of_left, mate_of_right }
}

/// A subfamily `A` attaining the Hall deficiency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallWitness {
    /// Indices of the members of `A` in the left list.
    pub members: Vec<usize>,
    pub neighborhood: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallReport {
    pub t: usize,
    pub max_sdr: usize,
    pub deficiency: usize,
    /// Present iff `deficiency > 0`; satisfies `|N(A)| = |A| − deficiency`.
    pub witness: Option<HallWitness>,
}

impl HallReport {
    pub fn satisfies_hall(&self) -> bool {
        self.deficiency == 0
    }
}

/// Deficiency and a maximal violator read off a maximum SDR.
///
/// Left elements reachable from unmatched ones by alternating paths form a
/// set `A` whose neighborhood is fully matched back into `A`, which gives
/// `|A| − |N(A)| = t − |SDR|`.
pub fn sdr_hall_report(inst: &SdrInstance, sdr: &SdrMatching) -> HallReport {
    let t = inst.left.len();
    let deficiency = t - sdr.len();
    let witness = (deficiency > 0).then(|| {
        let mut left_seen = vec![false; t];
        let mut right_seen = vec![false; inst.right.len()];
        let mut queue: VecDeque<usize> = (0..t).filter(|&i| sdr.mate_of_left[i].is_none()).collect();
        for &i in &queue {
            left_seen[i] = true;
        }
        while let Some(i) = queue.pop_front() {
            for &r in &inst.adjacency[i] {
                if right_seen[r] {
                    continue;
                }
                right_seen[r] = true;
                let j = sdr.mate_of_right[r].expect("maximum matching leaves no augmenting path");
                if !left_seen[j] {
                    left_seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
        HallWitness {
            members: (0..t).filter(|&i| left_seen[i]).collect(),
            neighborhood: (0..inst.right.len())
                .filter(|&r| right_seen[r])
                .map(|r| inst.right[r])
                .collect(),
        }
    });
    HallReport { t, max_sdr: sdr.len(), deficiency, witness }
}

/// Hall deficiency of the neighborhoods of a prefix perfect matching,
/// computed through a maximum SDR.
pub fn hall_deficiency(h: &KPartiteHypergraph, m: &Matching) -> Result<HallReport, MatchingError> {
    let inst = SdrInstance::from_prefix_matching(h, m)?;
    let sdr = max_bipartite_matching(&inst);
    Ok(sdr_hall_report(&inst, &sdr))
}

/// Hall deficiency by checking every subfamily `A ⊆ M`.
///
/// Ties between maximizing subfamilies go to the smallest bitmask.
pub fn hall_subset_oracle(h: &KPartiteHypergraph, m: &Matching) -> Result<HallReport, MatchingError> {
    check_prefix_perfect_matching(h, m)?;
    let t = m.len();
    if t > SUBSET_ORACLE_MAX_T {
        return Err(MatchingError::TooLarge(t));
    }
    let last = h.k() - 1;
    let width = h.part_size(last);
    let words = width.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = m
        .edges()
        .iter()
        .map(|e| {
            let mut bits = vec![0u64; words];
            for v in h.neighborhood(e)? {
                bits[v.local / 64] |= 1 << (v.local % 64);
            }
            Ok(bits)
        })
        .collect::<Result<_, MatchingError>>()?;

    let mut best = (0usize, 0u64);
    let mut union = vec![0u64; words];
    for subset in 1u64..(1 << t) {
        union.iter_mut().for_each(|w| *w = 0);
        for (i, bits) in masks.iter().enumerate() {
            if subset >> i & 1 == 1 {
                union.iter_mut().zip(bits).for_each(|(u, b)| *u |= b);
            }
        }
        let covered: usize = union.iter().map(|w| w.count_ones() as usize).sum();
        let size = subset.count_ones() as usize;
        if size > covered && size - covered > best.0 {
            best = (size - covered, subset);
        }
    }

    let (deficiency, subset) = best;
    let witness = (deficiency > 0).then(|| {
        let members: Vec<usize> = (0..t).filter(|i| subset >> i & 1 == 1).collect();
        let neighborhood = h
            .neighborhood_of_set(members.iter().map(|&i| m.edges()[i].as_slice()))
            .expect("members are valid (k-1)-sets")
            .into_iter()
            .collect();
        HallWitness { members, neighborhood }
    });
    Ok(HallReport { t, max_sdr: t - deficiency, deficiency, witness })
}

/// Completes a maximum SDR of `m` into a matching of `h` of size
/// `t − deficiency(m)`.
pub fn extend_matching(h: &KPartiteHypergraph, m: &Matching) -> Result<Matching, MatchingError> {
    let inst = SdrInstance::from_prefix_matching(h, m)?;
    Ok(extension_from_sdr(&inst, &max_bipartite_matching(&inst)))
}

fn extension_from_sdr(inst: &SdrInstance, sdr: &SdrMatching) -> Matching {
    Matching::new(
        sdr.pairs
            .iter()
            .map(|&(i, v)| {
                let mut edge = inst.left[i].vertices().to_vec();
                edge.push(v);
                edge
            })
            .collect(),
    )
}

/// Checks that `m` is a perfect matching of the subhypergraph generated on
/// the first `k − 1` parts.
pub fn check_prefix_perfect_matching(
    h: &KPartiteHypergraph,
    m: &Matching,
) -> Result<(), MatchingError> {
    let fail = |msg: String| Err(MatchingError::NotPerfectPrefixMatching(msg));
    let prefix = h.prefix_subhypergraph();
    for e in m.edges() {
        if !prefix.contains_trace(e) {
            return fail(format!("{:?} is not a trace of the prefix", h.set_labels(e)));
        }
    }
    if !m.is_pairwise_disjoint() {
        return fail("edges overlap".into());
    }
    let covered: usize = m.edges().iter().map(Vec::len).sum();
    if covered != prefix.base().len() {
        return fail(format!(
            "covers {covered} of {} prefix vertices",
            prefix.base().len()
        ));
    }
    Ok(())
}

/// Number of prefix perfect matchings, as far as a limit-2 enumeration sees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PmCount {
    One,
    AtLeastTwo,
}

/// One enumerated prefix perfect matching and what it yields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixAnalysis {
    pub matching: Matching,
    pub hall: HallReport,
    pub extension: Matching,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    /// A matching of size `t = |V_1|` exists; the witness is attached.
    SaturatingMatchingExists,
    /// The prefix perfect matching is unique and deficient, so no matching of
    /// size `t` exists. The best extension through it has `max_extension` edges.
    NoSaturatingMatching { max_extension: usize },
    /// Several prefix perfect matchings, all deficient. Nothing is claimed
    /// about matchings of size `t`.
    Inconclusive { best_extension: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixVerdict {
    pub t: usize,
    pub pm_count: PmCount,
    /// One entry per enumerated prefix perfect matching (at most two).
    pub analyses: Vec<PrefixAnalysis>,
    /// Index into `analyses` of the first matching with the least deficiency.
    pub chosen: usize,
    pub conclusion: Conclusion,
    /// Positive conclusion and `|V_k| = t`: the witness is a perfect matching.
    pub perfect_matching: bool,
}

impl PrefixVerdict {
    pub fn unique(&self) -> bool {
        self.pm_count == PmCount::One
    }

    pub fn chosen_analysis(&self) -> &PrefixAnalysis {
        &self.analyses[self.chosen]
    }

    pub fn witness(&self) -> &Matching {
        &self.chosen_analysis().extension
    }

    pub fn is_positive(&self) -> bool {
        self.conclusion == Conclusion::SaturatingMatchingExists
    }
}

/// Decides whether `h` has a matching saturating the first part, using the
/// Hall condition on neighborhoods of prefix perfect matchings.
///
/// With a unique prefix perfect matching the criterion is exact in both
/// directions. Without uniqueness only a deficiency-free matching licenses a
/// conclusion; otherwise the verdict is [`Conclusion::Inconclusive`].
pub fn prefix_hall_verdict(h: &KPartiteHypergraph) -> Result<PrefixVerdict, MatchingError> {
    let k = h.k();
    let prefix_sizes: Vec<usize> = (0..k - 1).map(|p| h.part_size(p)).collect();
    let t = prefix_sizes[0];
    if prefix_sizes.iter().any(|&s| s != t) {
        return Err(MatchingError::NotApplicable(NotApplicable::UnequalPrefixParts(
            prefix_sizes,
        )));
    }
    let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2)?;
    if found.matchings.is_empty() {
        return Err(MatchingError::NotApplicable(NotApplicable::NoPrefixPerfectMatching));
    }

    let analyses = found
        .matchings
        .into_iter()
        .map(|matching| {
            let inst = SdrInstance::from_prefix_matching(h, &matching)?;
            let sdr = max_bipartite_matching(&inst);
            Ok(PrefixAnalysis {
                hall: sdr_hall_report(&inst, &sdr),
                extension: extension_from_sdr(&inst, &sdr),
                matching,
            })
        })
        .collect::<Result<Vec<_>, MatchingError>>()?;

    let pm_count = if analyses.len() == 1 { PmCount::One } else { PmCount::AtLeastTwo };
    let chosen = (0..analyses.len())
        .min_by_key(|&i| analyses[i].hall.deficiency)
        .expect("at least one analysis");
    let best = &analyses[chosen];
    let conclusion = match (best.hall.deficiency, pm_count) {
        (0, _) => Conclusion::SaturatingMatchingExists,
        (d, PmCount::One) => Conclusion::NoSaturatingMatching { max_extension: t - d },
        (d, PmCount::AtLeastTwo) => Conclusion::Inconclusive { best_extension: t - d },
    };
    let perfect_matching =
        conclusion == Conclusion::SaturatingMatchingExists && h.part_size(k - 1) == t;
    Ok(PrefixVerdict { t, pm_count, analyses, chosen, conclusion, perfect_matching })
}
