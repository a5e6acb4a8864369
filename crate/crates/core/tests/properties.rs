use std::collections::BTreeSet;

use kpartite_hall::exact::{alpha_prime, beta, is_vertex_cover, konig_report};
use kpartite_hall::generate::vertex_label;
use kpartite_hall::hypergraph::{Coverage, KPartiteHypergraph, RawInstance, VertexId};
use kpartite_hall::instance::{parse_instance, serialize_instance, InstanceDocument};
use kpartite_hall::matching::{
    enumerate_perfect_matchings, extend_matching, hall_deficiency, hall_subset_oracle,
    max_bipartite_matching, prefix_hall_verdict, Conclusion, Matching, SdrInstance,
};
use proptest::prelude::*;

/// Instances with `k − 1` prefix parts of size `t` and a last part of size
/// `last`, keeping each possible edge according to `mask`.
fn arb_instance(max_k: usize, max_t: usize) -> impl Strategy<Value = KPartiteHypergraph> {
    (2..=max_k, 1..=max_t, 1..=max_t + 1).prop_flat_map(|(k, t, last)| {
        let mut sizes = vec![t; k - 1];
        sizes.push(last);
        let total: usize = sizes.iter().product();
        (Just(sizes), prop::collection::vec(prop::bool::weighted(0.35), total))
            .prop_map(|(sizes, mask)| from_mask(&sizes, &mask, false))
    })
}

/// Like [`arb_instance`], but the diagonal prefix traces are always present
/// and completed, so the prefix has at least one perfect matching.
fn arb_with_prefix_matching(max_k: usize, max_t: usize) -> impl Strategy<Value = KPartiteHypergraph> {
    (2..=max_k, 1..=max_t, 1..=max_t + 1).prop_flat_map(|(k, t, last)| {
        let mut sizes = vec![t; k - 1];
        sizes.push(last);
        let total: usize = sizes.iter().product();
        (Just(sizes), prop::collection::vec(prop::bool::weighted(0.3), total))
            .prop_map(|(sizes, mask)| from_mask(&sizes, &mask, true))
    })
}

fn from_mask(sizes: &[usize], mask: &[bool], diagonal: bool) -> KPartiteHypergraph {
    let k = sizes.len();
    let mut edges = Vec::new();
    for (j, &keep) in mask.iter().enumerate() {
        let mut rest = j;
        let mut tuple = vec![0; k];
        for p in (0..k).rev() {
            tuple[p] = rest % sizes[p];
            rest /= sizes[p];
        }
        let on_diagonal = tuple[..k - 1].iter().all(|&i| i == tuple[0]);
        if keep || (diagonal && on_diagonal && tuple[k - 1] == tuple[0] % sizes[k - 1]) {
            edges.push(tuple.iter().enumerate().map(|(p, &i)| vertex_label(p, i)).collect());
        }
    }
    let parts = sizes
        .iter()
        .enumerate()
        .map(|(p, &n)| (0..n).map(|i| vertex_label(p, i)).collect())
        .collect();
    KPartiteHypergraph::build(&RawInstance { parts, edges }, Coverage::Lenient).unwrap()
}

/// Maximum matching size by trying every edge subset.
fn brute_alpha(h: &KPartiteHypergraph) -> usize {
    let edges = h.edges();
    fn rec(edges: &[Vec<VertexId>], i: usize, used: &mut BTreeSet<VertexId>) -> usize {
        if i == edges.len() {
            return 0;
        }
        let skip = rec(edges, i + 1, used);
        if edges[i].iter().all(|v| !used.contains(v)) {
            used.extend(edges[i].iter().copied());
            let take = 1 + rec(edges, i + 1, used);
            for v in &edges[i] {
                used.remove(v);
            }
            return skip.max(take);
        }
        skip
    }
    rec(edges, 0, &mut BTreeSet::new())
}

/// Minimum vertex cover size by trying covers in order of size.
fn brute_beta(h: &KPartiteHypergraph) -> usize {
    let vertices: Vec<VertexId> = h.vertices().collect();
    let n = vertices.len();
    (0u64..1 << n)
        .filter(|mask| {
            let cover: Vec<_> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| vertices[i]).collect();
            is_vertex_cover(h, &cover)
        })
        .map(|m| m.count_ones() as usize)
        .min()
        .unwrap()
}

/// Deficiency `max_A (|A| − |N(A)|)` straight from the definition.
fn brute_deficiency(h: &KPartiteHypergraph, m: &Matching) -> usize {
    let t = m.len();
    (0u32..1 << t)
        .map(|mask| {
            let members: Vec<&[VertexId]> =
                (0..t).filter(|i| mask >> i & 1 == 1).map(|i| m.edges()[i].as_slice()).collect();
            let n = h.neighborhood_of_set(members.iter().copied()).unwrap().len();
            members.len().saturating_sub(n)
        })
        .max()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn edge_vertices_are_neighbors_of_the_rest(h in arb_instance(4, 3)) {
        for e in h.edges() {
            for (i, v) in e.iter().enumerate() {
                let rest: Vec<VertexId> = e.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &w)| w).collect();
                let n = h.neighborhood(&rest).unwrap();
                prop_assert!(n.contains(v));
                prop_assert!(n.iter().all(|w| w.part == v.part));
            }
        }
    }

    #[test]
    fn generated_on_all_vertices_is_identity(h in arb_instance(4, 3)) {
        let all = h.vertices().collect();
        let s = h.generated_subhypergraph(&all).unwrap();
        prop_assert_eq!(s.traces(), h.edges());
        let prefix = h.prefix_subhypergraph();
        prop_assert!(prefix.traces().iter().all(|t| t.len() == h.k() - 1));
    }

    #[test]
    fn serialization_is_canonical(h in arb_instance(4, 3), rotate in 0usize..7) {
        let text = serialize_instance(&h);
        let back = parse_instance(&text, Coverage::Lenient).unwrap();
        prop_assert_eq!(&back, &h);

        // shuffled input order gives the same bytes
        let mut doc = InstanceDocument::from_hypergraph(&h);
        let n = doc.edges.len().max(1);
        doc.edges.rotate_left(rotate % n);
        doc.edges.iter_mut().for_each(|e| e.reverse());
        doc.parts.iter_mut().for_each(|p| p.reverse());
        let reparsed = parse_instance(&doc.to_json(), Coverage::Lenient).unwrap();
        prop_assert_eq!(serialize_instance(&reparsed), text);
    }

    #[test]
    fn exact_solvers_match_brute_force(h in arb_instance(3, 3)) {
        let (a, w) = alpha_prime(&h);
        prop_assert_eq!(a, brute_alpha(&h));
        prop_assert!(w.is_matching_of(&h));
        prop_assert_eq!(w.len(), a);
        let (b, cover) = beta(&h);
        prop_assert_eq!(b, brute_beta(&h));
        prop_assert!(is_vertex_cover(&h, &cover));
        prop_assert_eq!(cover.len(), b);
    }

    #[test]
    fn duality_and_saturation_equivalence(h in arb_instance(4, 4)) {
        let r = konig_report(&h);
        prop_assert!(r.alpha_prime <= r.beta);
        prop_assert!(r.alpha_prime <= h.part_sizes().into_iter().min().unwrap());
        prop_assert_eq!(r.has_t_matching, r.konig_equality);
        if h.k() == 2 {
            prop_assert_eq!(r.alpha_prime, r.beta);
        }
    }

    #[test]
    fn deficiency_routes_agree(h in arb_with_prefix_matching(4, 5)) {
        let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2).unwrap();
        prop_assert!(!found.matchings.is_empty());
        for m in &found.matchings {
            let fast = hall_deficiency(&h, m).unwrap();
            let slow = hall_subset_oracle(&h, m).unwrap();
            let brute = brute_deficiency(&h, m);
            prop_assert_eq!(fast.deficiency, brute);
            prop_assert_eq!(slow.deficiency, brute);
            for report in [&fast, &slow] {
                match &report.witness {
                    None => prop_assert_eq!(report.deficiency, 0),
                    Some(w) => {
                        let n = h
                            .neighborhood_of_set(w.members.iter().map(|&i| m.edges()[i].as_slice()))
                            .unwrap();
                        prop_assert_eq!(n.len() + report.deficiency, w.members.len());
                    }
                }
            }
        }
    }

    #[test]
    fn extension_size_law(h in arb_with_prefix_matching(4, 5)) {
        let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2).unwrap();
        for m in &found.matchings {
            let ext = extend_matching(&h, m).unwrap();
            let d = hall_deficiency(&h, m).unwrap().deficiency;
            prop_assert_eq!(ext.len(), m.len() - d);
            prop_assert!(ext.is_matching_of(&h));
            let last = h.k() - 1;
            for e in ext.edges() {
                let trace: Vec<VertexId> = e.iter().copied().filter(|v| v.part != last).collect();
                prop_assert!(m.edges().contains(&trace));
            }
        }
    }

    #[test]
    fn verdict_agrees_with_exact_search(h in arb_with_prefix_matching(4, 4)) {
        let v = prefix_hall_verdict(&h).unwrap();
        let (alpha, _) = alpha_prime(&h);
        let t = v.t;
        // deficiency-free prefix matching always yields a saturating matching
        for a in &v.analyses {
            if a.hall.deficiency == 0 {
                prop_assert_eq!(alpha, t);
            }
        }
        match v.conclusion {
            Conclusion::SaturatingMatchingExists => prop_assert_eq!(alpha, t),
            Conclusion::NoSaturatingMatching { .. } => {
                prop_assert!(v.unique());
                prop_assert!(alpha < t);
            }
            Conclusion::Inconclusive { .. } => prop_assert!(!v.unique()),
        }
        if v.unique() {
            prop_assert_eq!(v.chosen_analysis().hall.deficiency == 0, alpha >= t);
        }
    }

    #[test]
    fn bipartite_verdict_is_classical_hall(h in arb_instance(2, 6)) {
        let t = h.part_size(0);
        let hall = (1u32..1 << t).all(|mask| {
            let n: BTreeSet<VertexId> = h
                .edges()
                .iter()
                .filter(|e| mask >> e[0].local & 1 == 1)
                .map(|e| e[1])
                .collect();
            n.len() >= mask.count_ones() as usize
        });
        let positive = prefix_hall_verdict(&h).is_ok_and(|v| v.is_positive());
        prop_assert_eq!(positive, hall);
        prop_assert_eq!(alpha_prime(&h).0 == t, hall);
    }

    #[test]
    fn augmenting_paths_are_deterministic_and_maximum(h in arb_with_prefix_matching(3, 6)) {
        let m = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 1).unwrap().matchings.remove(0);
        let inst = SdrInstance::from_prefix_matching(&h, &m).unwrap();
        let a = max_bipartite_matching(&inst);
        prop_assert_eq!(&a, &max_bipartite_matching(&inst));
        prop_assert_eq!(a.len(), m.len() - brute_deficiency(&h, &m));
        let reps: BTreeSet<VertexId> = a.pairs.iter().map(|&(_, v)| v).collect();
        prop_assert_eq!(reps.len(), a.len());
        for &(i, v) in &a.pairs {
            prop_assert!(inst.neighborhood(i).any(|w| w == v));
        }
    }
}

#[test]
fn build_is_deterministic() {
    let raw = RawInstance::new(
        &[&["x2", "x1"], &["y1", "y2"], &["z2", "z1"]],
        &[&["x1", "y1", "z1"], &["x2", "y2", "z2"], &["x1", "y2", "z2"]],
    );
    let a = KPartiteHypergraph::build(&raw, Coverage::Strict).unwrap();
    let b = KPartiteHypergraph::build(&raw, Coverage::Strict).unwrap();
    assert_eq!(serialize_instance(&a), serialize_instance(&b));
}
