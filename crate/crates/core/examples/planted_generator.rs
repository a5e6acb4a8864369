//! Seeded generators: a planted instance whose prefix has exactly one
//! perfect matching, and an independent random instance.

use kpartite_hall::generate::{gen_planted_unique, gen_random, PlantedParams, RandomParams};
use kpartite_hall::instance::serialize_instance;
use kpartite_hall::matching::enumerate_perfect_matchings;

fn main() {
    let mut params = PlantedParams::new(3, 4);
    params.trace_density = 0.6;
    let h = gen_planted_unique(&params, 42).unwrap();
    let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2).unwrap();
    println!("planted: {} edges, prefix perfect matchings: {}", h.edge_count(), found.matchings.len());
    print!("{}", serialize_instance(&h));

    let random = RandomParams { part_sizes: vec![2, 2, 3], edge_probability: 0.3 };
    let g = gen_random(&random, 42).unwrap();
    println!("random: {} edges, degenerate: {}", g.hypergraph.edge_count(), g.degenerate);

    // same seed, same instance
    assert_eq!(gen_planted_unique(&params, 42).unwrap(), h);
}
