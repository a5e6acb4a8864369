//! Reading, validating and writing instance documents.

use kpartite_hall::hypergraph::Coverage;
use kpartite_hall::instance::{parse_instance, serialize_instance, InstanceError};

const SHUFFLED: &str = r#"{
  "format_version": "1",
  "k": 2,
  "parts": [["v10", "v2", "v1"], ["w2", "w1"]],
  "edges": [["w1", "v10"], ["v2", "w2"], ["v1", "w1"]]
}"#;

fn main() {
    let h = parse_instance(SHUFFLED, Coverage::Strict).unwrap();
    // labels come back in natural order, edges sorted
    let canonical = serialize_instance(&h);
    print!("{canonical}");
    assert_eq!(parse_instance(&canonical, Coverage::Strict).unwrap(), h);

    let bad = [
        r#"{"format_version":"1","k":2,"parts":[["a"],["b"]],"edges":[["a","a"]]}"#,
        r#"{"format_version":"1","k":2,"parts":[["a","c"],["b"]],"edges":[["a","b"]]}"#,
        r#"{"format_version":"1","k":2,"parts":[["a"],["b"]],"edges":[["a","b","b"]]}"#,
    ];
    for text in bad {
        match parse_instance(text, Coverage::Strict) {
            Err(InstanceError::Invalid(e)) => println!("invalid: {e}"),
            Err(e) => println!("rejected: {e}"),
            Ok(_) => unreachable!(),
        }
    }
}
