//! Submaximal edges, neighborhoods and generated subhypergraphs of a small
//! 3-partite instance.

use std::collections::BTreeSet;

use kpartite_hall::hypergraph::{Coverage, KPartiteHypergraph, RawInstance};

fn main() {
    let raw = RawInstance::new(
        &[&["x1", "x2"], &["y1", "y2"], &["z1", "z2"]],
        &[
            &["x1", "y1", "z1"],
            &["x2", "y2", "z2"],
            &["x1", "y2", "z2"],
            &["x2", "y1", "z2"],
        ],
    );
    let h = KPartiteHypergraph::build(&raw, Coverage::Strict).expect("valid instance");

    println!("{} submaximal edges:", h.submaximal_edges().len());
    for e in h.submaximal_edges() {
        let n = h.neighborhood(e.vertices()).unwrap();
        let n: Vec<_> = n.into_iter().map(|v| h.label(v)).collect();
        println!("  N({{{}}}) = {{{}}}", h.set_labels(e.vertices()).join(", "), n.join(", "));
    }

    let prefix = h.prefix_subhypergraph();
    println!("prefix traces:");
    for t in prefix.traces() {
        println!("  {{{}}}", h.set_labels(t).join(", "));
    }

    // an arbitrary vertex set has traces but no part structure
    let base: BTreeSet<_> = h.vertices_by_labels(&["x1", "y2", "z1"]).unwrap().into_iter().collect();
    let g = h.generated_subhypergraph(&base).unwrap();
    println!(
        "generated on {{x1, y2, z1}}: {} traces, part structure: {}",
        g.traces().len(),
        g.parts().is_some()
    );
}
