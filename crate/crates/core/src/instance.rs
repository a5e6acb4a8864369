//! JSON instance documents and the built-in fixtures.
//!
//! ```json
//! {
//!   "format_version": "1",
//!   "k": 3,
//!   "parts": [["1", "2"], ["3", "4"], ["5", "6"]],
//!   "edges": [["1", "3", "5"], ["2", "3", "6"], ["2", "4", "5"]],
//!   "metadata": { "any": "thing" }
//! }
//! ```
//!
//! Unknown top-level fields are rejected. Serialization is canonical: keys in
//! the order above, vertices and edges in the instance's canonical order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Coverage, HypergraphError, KPartiteHypergraph, RawInstance};

pub const FORMAT_VERSION: &str = "1";

pub const FIXTURE_NAMES: [&str; 4] = ["ex_2_5", "ex_2_8", "k2_hall_fail", "k3_single_edge"];

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("syntax error: {0}")]
    Syntax(#[source] serde_json::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invalid hypergraph: {0}")]
    Invalid(#[from] HypergraphError),
    #[error("unknown fixture `{0}` (known: {known})", known = FIXTURE_NAMES.join(", "))]
    UnknownFixture(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub format_version: String,
    pub k: usize,
    pub parts: Vec<Vec<String>>,
    pub edges: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<BTreeMap<String, serde_json::Value>>,
}

impl InstanceDocument {
    pub fn from_hypergraph(h: &KPartiteHypergraph) -> Self {
        let raw = h.to_raw();
        Self {
            format_version: FORMAT_VERSION.to_owned(),
            k: h.k(),
            parts: raw.parts,
            edges: raw.edges,
            metadata: None,
        }
    }

    pub fn with_metadata(mut self, metadata: BTreeMap<String, serde_json::Value>) -> Self {
        self.metadata = Some(metadata);
        self
    }

    /// Document-level checks that do not need the hypergraph.
    fn check_schema(&self) -> Result<(), InstanceError> {
        let schema = |msg: String| Err(InstanceError::Schema(msg));
        if self.format_version != FORMAT_VERSION {
            return schema(format!(
                "unsupported format_version `{}`, expected `{FORMAT_VERSION}`",
                self.format_version
            ));
        }
        if self.parts.len() != self.k {
            return schema(format!("k = {} but {} parts listed", self.k, self.parts.len()));
        }
        let declared: std::collections::HashSet<&str> =
            self.parts.iter().flatten().map(String::as_str).collect();
        for (i, edge) in self.edges.iter().enumerate() {
            if edge.len() != self.k {
                return schema(format!("edge {i} has {} entries, k = {}", edge.len(), self.k));
            }
            if let Some(label) = edge.iter().find(|l| !declared.contains(l.as_str())) {
                return schema(format!("edge {i} references undeclared vertex `{label}`"));
            }
        }
        Ok(())
    }

    pub fn to_hypergraph(&self, coverage: Coverage) -> Result<KPartiteHypergraph, InstanceError> {
        self.check_schema()?;
        let raw = RawInstance { parts: self.parts.clone(), edges: self.edges.clone() };
        Ok(KPartiteHypergraph::build(&raw, coverage)?)
    }

    /// Canonical JSON text: one part per line, one edge per line, and a
    /// trailing newline.
    pub fn to_json(&self) -> String {
        fn compact<T: Serialize + ?Sized>(value: &T) -> String {
            serde_json::to_string(value).expect("documents always serialize")
        }
        let lines = |rows: &[Vec<String>]| -> String {
            if rows.is_empty() {
                return "[]".to_owned();
            }
            let body: Vec<String> = rows.iter().map(|r| format!("    {}", compact(r))).collect();
            format!("[\n{}\n  ]", body.join(",\n"))
        };
        let mut out = format!(
            "{{\n  \"format_version\": {},\n  \"k\": {},\n  \"parts\": {},\n  \"edges\": {}",
            compact(&self.format_version),
            self.k,
            lines(&self.parts),
            lines(&self.edges),
        );
        if let Some(metadata) = &self.metadata {
            out += &format!(",\n  \"metadata\": {}", compact(metadata));
        }
        out += "\n}\n";
        out
    }
}

pub fn parse_document(text: &str) -> Result<InstanceDocument, InstanceError> {
    let doc: InstanceDocument = serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            InstanceError::Schema(e.to_string())
        } else {
            InstanceError::Syntax(e)
        }
    })?;
    doc.check_schema()?;
    Ok(doc)
}

pub fn parse_instance(text: &str, coverage: Coverage) -> Result<KPartiteHypergraph, InstanceError> {
    parse_document(text)?.to_hypergraph(coverage)
}

pub fn serialize_instance(h: &KPartiteHypergraph) -> String {
    InstanceDocument::from_hypergraph(h).to_json()
}

/// Source text of a built-in fixture.
pub fn fixture_source(name: &str) -> Result<&'static str, InstanceError> {
    Ok(match name {
        "ex_2_5" => include_str!("../fixtures/ex_2_5.json"),
        "ex_2_8" => include_str!("../fixtures/ex_2_8.json"),
        "k2_hall_fail" => include_str!("../fixtures/k2_hall_fail.json"),
        "k3_single_edge" => include_str!("../fixtures/k3_single_edge.json"),
        other => return Err(InstanceError::UnknownFixture(other.to_owned())),
    })
}

/// A built-in fixture instance. Fixtures are loaded leniently, since
/// `k2_hall_fail` has an isolated vertex.
pub fn fixture(name: &str) -> Result<KPartiteHypergraph, InstanceError> {
    parse_instance(fixture_source(name)?, Coverage::Lenient)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load() {
        let h = fixture("ex_2_5").unwrap();
        assert_eq!((h.k(), h.edge_count(), h.part_sizes()), (3, 4, vec![2, 2, 2]));
        assert_eq!(fixture("ex_2_8").unwrap().edge_count(), 3);
        let single = fixture("k3_single_edge").unwrap();
        assert_eq!((single.edge_count(), single.part_sizes()), (1, vec![1, 1, 1]));
        let k2 = fixture("k2_hall_fail").unwrap();
        assert_eq!(k2.isolated_vertices().len(), 1);
        assert!(matches!(fixture("nope"), Err(InstanceError::UnknownFixture(_))));
    }

    #[test]
    fn fixture_files_parse_strictly_where_possible() {
        for name in ["ex_2_5", "ex_2_8", "k3_single_edge"] {
            parse_instance(fixture_source(name).unwrap(), Coverage::Strict).unwrap();
        }
        assert!(matches!(
            parse_instance(fixture_source("k2_hall_fail").unwrap(), Coverage::Strict),
            Err(InstanceError::Invalid(HypergraphError::IsolatedVertex(_)))
        ));
    }

    #[test]
    fn canonical_serialization_of_example() {
        let text = serialize_instance(&fixture("ex_2_8").unwrap());
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["parts"], serde_json::json!([["1", "2"], ["3", "4"], ["5", "6"]]));
        assert_eq!(
            doc["edges"],
            serde_json::json!([["1", "3", "5"], ["2", "3", "6"], ["2", "4", "5"]])
        );
        let keys: Vec<_> = text.lines().filter(|l| l.starts_with("  \"")).collect();
        assert!(keys[0].contains("format_version") && keys[1].contains("\"k\""));
    }

    #[test]
    fn schema_errors() {
        let short_edge = r#"{"format_version":"1","k":3,"parts":[["a"],["b"],["c"]],"edges":[["a","b"]]}"#;
        assert!(matches!(parse_instance(short_edge, Coverage::Lenient), Err(InstanceError::Schema(_))));
        let unknown_field = r#"{"format_version":"1","k":2,"parts":[["a"],["b"]],"edges":[],"extra":1}"#;
        assert!(matches!(parse_instance(unknown_field, Coverage::Lenient), Err(InstanceError::Schema(_))));
        let version = r#"{"format_version":"2","k":2,"parts":[["a"],["b"]],"edges":[]}"#;
        assert!(matches!(parse_instance(version, Coverage::Lenient), Err(InstanceError::Schema(_))));
        let undeclared = r#"{"format_version":"1","k":2,"parts":[["a"],["b"]],"edges":[["a","q"]]}"#;
        assert!(matches!(parse_instance(undeclared, Coverage::Lenient), Err(InstanceError::Schema(_))));
        assert!(matches!(parse_instance("{", Coverage::Lenient), Err(InstanceError::Syntax(_))));
        let partite = r#"{"format_version":"1","k":2,"parts":[["a","b"],["c"]],"edges":[["a","b"]]}"#;
        assert!(matches!(
            parse_instance(partite, Coverage::Lenient),
            Err(InstanceError::Invalid(HypergraphError::NotPartite { .. }))
        ));
    }

    #[test]
    fn differently_ordered_inputs_serialize_identically() {
        let a = r#"{"format_version":"1","k":2,"parts":[["b","a"],["d","c"]],"edges":[["b","c"],["a","d"]]}"#;
        let b = r#"{"format_version":"1","k":2,"parts":[["a","b"],["c","d"]],"edges":[["a","d"],["c","b"]]}"#;
        let sa = serialize_instance(&parse_instance(a, Coverage::Strict).unwrap());
        let sb = serialize_instance(&parse_instance(b, Coverage::Strict).unwrap());
        assert_eq!(sa, sb);
    }

    #[test]
    fn edgeless_lenient_instance_serializes_with_empty_edges() {
        let text = r#"{"format_version":"1","k":2,"parts":[["a"],["b"]],"edges":[]}"#;
        let h = parse_instance(text, Coverage::Lenient).unwrap();
        let out = serialize_instance(&h);
        assert!(out.contains("\"edges\": []"));
        assert_eq!(out, r#"{
  "format_version": "1",
  "k": 2,
  "parts": [
    ["a"],
    ["b"]
  ],
  "edges": []
}
"#);
        assert_eq!(parse_instance(&out, Coverage::Lenient).unwrap(), h);
    }
}
