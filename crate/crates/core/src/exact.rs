//! Exact maximum matching and minimum vertex cover by exhaustive search.
//!
//! Both problems are NP-hard for k ≥ 3; these solvers are meant for small
//! instances where they serve as ground truth.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::hypergraph::{KPartiteHypergraph, VertexId};
use crate::matching::Matching;

/// Size guard for callers that want to refuse large instances up front.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_edges: usize,
    pub max_vertices: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { max_edges: 40, max_vertices: 40 }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("instance has {edges} edges and {vertices} vertices; exact search is limited to {limit_edges} edges and {limit_vertices} vertices")]
pub struct TooLarge {
    pub edges: usize,
    pub vertices: usize,
    pub limit_edges: usize,
    pub limit_vertices: usize,
}

impl SearchLimits {
    pub fn check(&self, h: &KPartiteHypergraph) -> Result<(), TooLarge> {
        if h.edge_count() > self.max_edges || h.vertex_count() > self.max_vertices {
            return Err(TooLarge {
                edges: h.edge_count(),
                vertices: h.vertex_count(),
                limit_edges: self.max_edges,
                limit_vertices: self.max_vertices,
            });
        }
        Ok(())
    }
}

/// Maximum matching size `α′(H)` with a witness.
///
/// Include/exclude branching over the canonical edge order. A node is pruned
/// when `current + min_p (free vertices of part p still reachable)` cannot
/// beat the incumbent; the search stops once the smallest part is saturated.
pub fn alpha_prime(h: &KPartiteHypergraph) -> (usize, Matching) {
    struct Search<'a> {
        edges: &'a [Vec<VertexId>],
        used: Vec<Vec<bool>>,
        current: Vec<usize>,
        best: Vec<usize>,
        cap: usize,
    }

    impl Search<'_> {
        fn compatible(&self, e: usize) -> bool {
            self.edges[e].iter().all(|v| !self.used[v.part][v.local])
        }

        fn bound(&self, from: usize) -> usize {
            let mut reach: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.used.len()];
            for e in from..self.edges.len() {
                if self.compatible(e) {
                    for v in &self.edges[e] {
                        reach[v.part].insert(v.local);
                    }
                }
            }
            reach.iter().map(BTreeSet::len).min().unwrap_or(0)
        }

        fn set(&mut self, e: usize, value: bool) {
            for i in 0..self.edges[e].len() {
                let v = self.edges[e][i];
                self.used[v.part][v.local] = value;
            }
        }

        fn run(&mut self, from: usize) {
            if self.current.len() > self.best.len() {
                self.best = self.current.clone();
            }
            if self.best.len() == self.cap || from == self.edges.len() {
                return;
            }
            if self.current.len() + self.bound(from) <= self.best.len() {
                return;
            }
            if self.compatible(from) {
                self.set(from, true);
                self.current.push(from);
                self.run(from + 1);
                self.current.pop();
                self.set(from, false);
            }
            self.run(from + 1);
        }
    }

    let sizes = h.part_sizes();
    let mut search = Search {
        edges: h.edges(),
        used: sizes.iter().map(|&n| vec![false; n]).collect(),
        current: Vec::new(),
        best: Vec::new(),
        cap: sizes.iter().copied().min().unwrap_or(0),
    };
    search.run(0);
    let witness = Matching::new(search.best.iter().map(|&e| h.edges()[e].clone()).collect());
    (witness.len(), witness)
}

/// Minimum vertex cover size `β(H)` with a witness.
///
/// Starts from the first part, which always covers every edge, and looks for
/// strictly smaller covers by branching on the vertices of the first
/// uncovered edge. `α′(H)` is a lower bound, so the search stops early when
/// it is reached.
pub fn beta(h: &KPartiteHypergraph) -> (usize, Vec<VertexId>) {
    let (lower, _) = alpha_prime(h);
    beta_with_lower_bound(h, lower)
}

fn beta_with_lower_bound(h: &KPartiteHypergraph, lower: usize) -> (usize, Vec<VertexId>) {
    struct Search<'a> {
        edges: &'a [Vec<VertexId>],
        chosen: Vec<VertexId>,
        in_cover: Vec<Vec<bool>>,
        best: Vec<VertexId>,
        lower: usize,
    }

    impl Search<'_> {
        fn covered(&self, e: usize) -> bool {
            self.edges[e].iter().any(|v| self.in_cover[v.part][v.local])
        }

        /// Size of a greedy set of pairwise disjoint uncovered edges; each
        /// needs its own cover vertex.
        fn disjoint_uncovered(&self, from: usize) -> usize {
            let mut taken: Vec<VertexId> = Vec::new();
            let mut count = 0;
            for e in from..self.edges.len() {
                if !self.covered(e) && self.edges[e].iter().all(|v| !taken.contains(v)) {
                    taken.extend(self.edges[e].iter().copied());
                    count += 1;
                }
            }
            count
        }

        fn run(&mut self, from: usize) {
            if self.best.len() <= self.lower {
                return;
            }
            let Some(e) = (from..self.edges.len()).find(|&e| !self.covered(e)) else {
                if self.chosen.len() < self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            };
            if self.chosen.len() + self.disjoint_uncovered(e) >= self.best.len() {
                return;
            }
            for i in 0..self.edges[e].len() {
                let v = self.edges[e][i];
                self.in_cover[v.part][v.local] = true;
                self.chosen.push(v);
                self.run(e + 1);
                self.chosen.pop();
                self.in_cover[v.part][v.local] = false;
            }
        }
    }

    let mut search = Search {
        edges: h.edges(),
        chosen: Vec::new(),
        in_cover: h.part_sizes().iter().map(|&n| vec![false; n]).collect(),
        best: h.part(0).collect(),
        lower,
    };
    search.run(0);
    let mut cover = search.best;
    cover.sort_unstable();
    (cover.len(), cover)
}

/// Whether every hyperedge meets `cover`.
pub fn is_vertex_cover(h: &KPartiteHypergraph, cover: &[VertexId]) -> bool {
    h.edges().iter().all(|e| e.iter().any(|v| cover.contains(v)))
}

/// Matching number and cover number side by side, with witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub alpha_prime: usize,
    pub beta: usize,
    /// Size of the first part.
    pub t: usize,
    pub max_matching_witness: Matching,
    pub min_cover_witness: Vec<VertexId>,
    /// `α′ = t`: some matching saturates the first part.
    pub has_t_matching: bool,
    /// `α′ = β = t`.
    pub konig_equality: bool,
}

/// Computes `α′` and `β` by independent searches and compares them with `|V_1|`.
pub fn konig_report(h: &KPartiteHypergraph) -> DualityReport {
    let (alpha_prime, max_matching_witness) = alpha_prime(h);
    let (beta, min_cover_witness) = beta_with_lower_bound(h, alpha_prime);
    let t = h.part_size(0);
    DualityReport {
        alpha_prime,
        beta,
        t,
        max_matching_witness,
        min_cover_witness,
        has_t_matching: alpha_prime == t,
        konig_equality: alpha_prime == t && beta == t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{Coverage, RawInstance};

    fn build(parts: &[&[&str]], edges: &[&[&str]]) -> KPartiteHypergraph {
        KPartiteHypergraph::build(&RawInstance::new(parts, edges), Coverage::Lenient).unwrap()
    }

    fn ex_2_5() -> KPartiteHypergraph {
        build(
            &[&["x1", "x2"], &["y1", "y2"], &["z1", "z2"]],
            &[
                &["x1", "y1", "z1"],
                &["x1", "y2", "z2"],
                &["x2", "y2", "z2"],
                &["x2", "y1", "z2"],
            ],
        )
    }

    fn ex_2_8() -> KPartiteHypergraph {
        build(
            &[&["1", "2"], &["3", "4"], &["5", "6"]],
            &[&["1", "3", "5"], &["2", "3", "6"], &["2", "4", "5"]],
        )
    }

    fn single() -> KPartiteHypergraph {
        build(&[&["a"], &["b"], &["c"]], &[&["a", "b", "c"]])
    }

    /// Brute force over all edge subsets and all vertex subsets.
    fn brute_force(h: &KPartiteHypergraph) -> (usize, usize) {
        let m = h.edge_count();
        let alpha = (0u32..1 << m)
            .filter(|mask| {
                let chosen = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| h.edges()[i].clone());
                Matching::new(chosen.collect()).is_pairwise_disjoint()
            })
            .map(u32::count_ones)
            .max()
            .unwrap() as usize;
        let vertices: Vec<VertexId> = h.vertices().collect();
        let beta = (0u32..1 << vertices.len())
            .filter(|mask| {
                let cover: Vec<_> = (0..vertices.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| vertices[i])
                    .collect();
                is_vertex_cover(h, &cover)
            })
            .map(u32::count_ones)
            .min()
            .unwrap() as usize;
        (alpha, beta)
    }

    #[test]
    fn examples() {
        let h = ex_2_8();
        let (a, w) = alpha_prime(&h);
        assert_eq!(a, 1);
        assert!(w.is_matching_of(&h));
        let (b, cover) = beta(&h);
        assert_eq!(b, 2);
        assert!(is_vertex_cover(&h, &cover));

        let h = ex_2_5();
        assert_eq!(alpha_prime(&h).0, 2);
        let (b, cover) = beta(&h);
        assert_eq!(b, 2);
        assert_eq!(h.set_labels(&cover), ["x1", "x2"]);

        assert_eq!(alpha_prime(&single()).0, 1);
        assert_eq!(beta(&single()).0, 1);
    }

    #[test]
    fn reports() {
        let r = konig_report(&ex_2_8());
        assert_eq!((r.alpha_prime, r.beta, r.t), (1, 2, 2));
        assert!(!r.has_t_matching && !r.konig_equality);
        let r = konig_report(&ex_2_5());
        assert_eq!((r.alpha_prime, r.beta, r.t), (2, 2, 2));
        assert!(r.has_t_matching && r.konig_equality);
        let r = konig_report(&single());
        assert_eq!((r.alpha_prime, r.beta, r.t), (1, 1, 1));
        assert!(r.has_t_matching && r.konig_equality);
    }

    #[test]
    fn edgeless_instance() {
        let h = build(&[&["a", "b"], &["c"]], &[]);
        let r = konig_report(&h);
        assert_eq!((r.alpha_prime, r.beta), (0, 0));
        assert!(r.min_cover_witness.is_empty());
    }

    #[test]
    fn matches_brute_force_on_dense_tripartite() {
        // all 8 triples on parts of size 2, minus a few
        let mut edges = Vec::new();
        for x in ["x1", "x2"] {
            for y in ["y1", "y2"] {
                for z in ["z1", "z2"] {
                    edges.push(vec![x, y, z]);
                }
            }
        }
        for drop in 0..edges.len() {
            let kept: Vec<&[&str]> = edges
                .iter()
                .enumerate()
                .filter(|&(i, _)| i % 3 != drop % 3 || i == drop)
                .map(|(_, e)| e.as_slice())
                .collect();
            let h = build(&[&["x1", "x2"], &["y1", "y2"], &["z1", "z2"]], &kept);
            let r = konig_report(&h);
            assert_eq!((r.alpha_prime, r.beta), brute_force(&h));
        }
    }

    #[test]
    fn guard() {
        let limits = SearchLimits { max_edges: 2, max_vertices: 40 };
        assert!(limits.check(&ex_2_8()).is_err());
        assert!(SearchLimits::default().check(&ex_2_8()).is_ok());
    }
}
