//! Deficiency of a set family given directly as an SDR instance, without a
//! hypergraph. The fast route (augmenting paths) is compared against subset
//! enumeration on the hypergraph form of the same data.

use std::collections::BTreeSet;

use kpartite_hall::hypergraph::{Coverage, KPartiteHypergraph, RawInstance, SubmaximalEdge};
use kpartite_hall::matching::{
    hall_deficiency, hall_subset_oracle, max_bipartite_matching, sdr_hall_report, Matching, SdrInstance,
};

fn main() {
    // alg and geo both need r1
    let raw = RawInstance::new(
        &[&["alg", "geo", "top"], &["r1", "r2"]],
        &[&["alg", "r1"], &["geo", "r1"], &["top", "r1"], &["top", "r2"]],
    );
    let h = KPartiteHypergraph::build(&raw, Coverage::Strict).unwrap();
    let left: Vec<SubmaximalEdge> =
        h.part(0).map(|v| SubmaximalEdge::new(2, vec![v]).unwrap()).collect();
    let neighborhoods: Vec<BTreeSet<_>> = left.iter().map(|e| h.neighborhood(e.vertices()).unwrap()).collect();
    let inst = SdrInstance::new(left, h.part(1).collect(), neighborhoods).unwrap();

    let sdr = max_bipartite_matching(&inst);
    for &(i, room) in &sdr.pairs {
        println!("{} -> {}", h.label(inst.left()[i].vertices()[0]), h.label(room));
    }
    let report = sdr_hall_report(&inst, &sdr);
    println!("max SDR {} of {}, deficiency {}", report.max_sdr, report.t, report.deficiency);
    if let Some(w) = &report.witness {
        let names: Vec<_> = w.members.iter().map(|&i| h.label(inst.left()[i].vertices()[0])).collect();
        let rooms: Vec<_> = w.neighborhood.iter().map(|&v| h.label(v)).collect();
        println!("violator {{{}}} can only use {{{}}}", names.join(", "), rooms.join(", "));
    }

    let m = Matching::new(h.part(0).map(|v| vec![v]).collect());
    let fast = hall_deficiency(&h, &m).unwrap();
    let slow = hall_subset_oracle(&h, &m).unwrap();
    assert_eq!(fast.deficiency, slow.deficiency);
    println!("subset oracle agrees: deficiency {}", slow.deficiency);
}
