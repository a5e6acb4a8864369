//! Run the prefix Hall criterion on an instance and print, for each perfect
//! matching of the prefix, its deficiency and the matching it extends to.

use kpartite_hall::instance::fixture;
use kpartite_hall::matching::{prefix_hall_verdict, Conclusion};

fn main() {
    let h = fixture("ex_2_5").unwrap();
    let verdict = prefix_hall_verdict(&h).expect("prefix has a perfect matching");
    let show = |edges: &[Vec<_>]| -> String {
        let parts: Vec<String> = edges.iter().map(|e| format!("{{{}}}", h.set_labels(e).join(","))).collect();
        parts.join(" ")
    };

    println!("t = {}, unique prefix matching: {}", verdict.t, verdict.unique());
    for a in &verdict.analyses {
        println!("M = {}", show(a.matching.edges()));
        println!("  deficiency {}", a.hall.deficiency);
        if let Some(w) = &a.hall.witness {
            let members: Vec<_> = w.members.iter().map(|&i| a.matching.edges()[i].clone()).collect();
            println!("  A = {}  N(A) = {{{}}}", show(&members), h.set_labels(&w.neighborhood).join(","));
        }
        println!("  extends to {}", show(a.extension.edges()));
    }
    match verdict.conclusion {
        Conclusion::SaturatingMatchingExists => println!("a matching of size t exists"),
        Conclusion::NoSaturatingMatching { max_extension } => {
            println!("no matching of size t; best extension {max_extension}")
        }
        Conclusion::Inconclusive { best_extension } => {
            println!("inconclusive; best extension {best_extension}")
        }
    }
}
