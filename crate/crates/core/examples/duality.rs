//! Exact matching number and vertex cover number, with witnesses.

use kpartite_hall::exact::{konig_report, SearchLimits};
use kpartite_hall::instance::{fixture, FIXTURE_NAMES};

fn main() {
    for name in FIXTURE_NAMES {
        let h = fixture(name).unwrap();
        SearchLimits::default().check(&h).expect("fixtures are small");
        let r = konig_report(&h);
        let matching: Vec<String> = r
            .max_matching_witness
            .edges()
            .iter()
            .map(|e| format!("{{{}}}", h.set_labels(e).join(",")))
            .collect();
        println!(
            "{name:<15} alpha' = {} {}  beta = {} {{{}}}  t = {}  equality: {}",
            r.alpha_prime,
            matching.join(""),
            r.beta,
            h.set_labels(&r.min_cover_witness).join(","),
            r.t,
            r.konig_equality
        );
    }
}
