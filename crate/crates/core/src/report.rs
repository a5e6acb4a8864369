//! Serializable, label-based reports for instances.
//!
//! Field order is fixed by the struct definitions, so the JSON form of a
//! report is byte-stable for a given instance.

use std::fmt::Write as _;

use serde::Serialize;

use crate::exact::{konig_report, DualityReport};
use crate::hypergraph::{Coverage, KPartiteHypergraph, VertexId};
use crate::matching::{
    prefix_hall_verdict, Conclusion, Matching, MatchingError, PmCount, PrefixAnalysis,
};

pub const REPORT_VERSION: &str = "1";

pub(crate) fn edge_labels(h: &KPartiteHypergraph, m: &Matching) -> Vec<Vec<String>> {
    m.edges().iter().map(|e| h.set_labels(e)).collect()
}

fn vertex_labels(h: &KPartiteHypergraph, vs: &[VertexId]) -> Vec<String> {
    h.set_labels(vs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InstanceSummary {
    pub k: usize,
    pub part_sizes: Vec<usize>,
    pub edge_count: usize,
    pub coverage: &'static str,
    pub isolated_vertices: Vec<String>,
}

impl InstanceSummary {
    pub fn new(h: &KPartiteHypergraph, coverage: Coverage) -> Self {
        Self {
            k: h.k(),
            part_sizes: h.part_sizes(),
            edge_count: h.edge_count(),
            coverage: match coverage {
                Coverage::Strict => "strict",
                Coverage::Lenient => "lenient",
            },
            isolated_vertices: vertex_labels(h, &h.isolated_vertices()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violator {
    pub members: Vec<Vec<String>>,
    pub neighborhood: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixMatchingReport {
    pub matching: Vec<Vec<String>>,
    pub t: usize,
    pub max_sdr: usize,
    pub deficiency: usize,
    pub violator: Option<Violator>,
    pub extension: Vec<Vec<String>>,
}

impl PrefixMatchingReport {
    fn new(h: &KPartiteHypergraph, a: &PrefixAnalysis) -> Self {
        Self {
            matching: edge_labels(h, &a.matching),
            t: a.hall.t,
            max_sdr: a.hall.max_sdr,
            deficiency: a.hall.deficiency,
            violator: a.hall.witness.as_ref().map(|w| Violator {
                members: w
                    .members
                    .iter()
                    .map(|&i| h.set_labels(&a.matching.edges()[i]))
                    .collect(),
                neighborhood: vertex_labels(h, &w.neighborhood),
            }),
            extension: edge_labels(h, &a.extension),
        }
    }
}

/// Outcome of the prefix Hall criterion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    pub applicable: bool,
    pub reason: Option<String>,
    pub t: usize,
    /// `"0"`, `"1"` or `">=2"`.
    pub pm_count: &'static str,
    pub unique: bool,
    pub matchings: Vec<PrefixMatchingReport>,
    pub chosen: Option<usize>,
    /// `matching_of_size_t_exists`, `no_matching_of_size_t` or `inconclusive`.
    pub conclusion: Option<&'static str>,
    pub max_extension: Option<usize>,
    pub witness: Option<Vec<Vec<String>>>,
    pub perfect_matching: bool,
}

impl PrefixReport {
    pub fn new(h: &KPartiteHypergraph) -> Self {
        let t = h.part_size(0);
        match prefix_hall_verdict(h) {
            Ok(v) => {
                let (conclusion, max_extension) = match v.conclusion {
                    Conclusion::SaturatingMatchingExists => ("matching_of_size_t_exists", t),
                    Conclusion::NoSaturatingMatching { max_extension } => {
                        ("no_matching_of_size_t", max_extension)
                    }
                    Conclusion::Inconclusive { best_extension } => ("inconclusive", best_extension),
                };
                Self {
                    applicable: true,
                    reason: None,
                    t,
                    pm_count: match v.pm_count {
                        PmCount::One => "1",
                        PmCount::AtLeastTwo => ">=2",
                    },
                    unique: v.unique(),
                    matchings: v.analyses.iter().map(|a| PrefixMatchingReport::new(h, a)).collect(),
                    chosen: Some(v.chosen),
                    conclusion: Some(conclusion),
                    max_extension: Some(max_extension),
                    witness: Some(edge_labels(h, v.witness())),
                    perfect_matching: v.perfect_matching,
                }
            }
            Err(e) => Self {
                applicable: false,
                reason: Some(match e {
                    MatchingError::NotApplicable(reason) => reason.to_string(),
                    other => other.to_string(),
                }),
                t,
                pm_count: "0",
                unique: false,
                matchings: Vec::new(),
                chosen: None,
                conclusion: None,
                max_extension: None,
                witness: None,
                perfect_matching: false,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualitySection {
    pub alpha_prime: usize,
    pub beta: usize,
    pub t: usize,
    pub max_matching_witness: Vec<Vec<String>>,
    pub min_cover_witness: Vec<String>,
    pub has_t_matching: bool,
    pub konig_equality: bool,
}

impl DualitySection {
    pub fn new(h: &KPartiteHypergraph, r: &DualityReport) -> Self {
        Self {
            alpha_prime: r.alpha_prime,
            beta: r.beta,
            t: r.t,
            max_matching_witness: edge_labels(h, &r.max_matching_witness),
            min_cover_witness: vertex_labels(h, &r.min_cover_witness),
            has_t_matching: r.has_t_matching,
            konig_equality: r.konig_equality,
        }
    }
}

/// Everything `analyze` reports about one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub report_version: &'static str,
    pub instance: InstanceSummary,
    pub prefix: PrefixReport,
    pub duality: DualitySection,
}

impl AnalysisReport {
    pub fn new(h: &KPartiteHypergraph, coverage: Coverage) -> Self {
        Self {
            report_version: REPORT_VERSION,
            instance: InstanceSummary::new(h, coverage),
            prefix: PrefixReport::new(h),
            duality: DualitySection::new(h, &konig_report(h)),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let i = &self.instance;
        let _ = writeln!(
            out,
            "instance: k = {}, part sizes {:?}, {} edges ({})",
            i.k, i.part_sizes, i.edge_count, i.coverage
        );
        if !i.isolated_vertices.is_empty() {
            let _ = writeln!(out, "warning: isolated vertices {}", i.isolated_vertices.join(", "));
        }

        let p = &self.prefix;
        let _ = writeln!(out, "\nprefix criterion (t = {})", p.t);
        if !p.applicable {
            let _ = writeln!(out, "  not applicable: {}", p.reason.as_deref().unwrap_or(""));
        } else {
            let _ = writeln!(
                out,
                "  prefix perfect matchings: {} ({})",
                p.pm_count,
                if p.unique { "unique" } else { "not unique" }
            );
            for (n, m) in p.matchings.iter().enumerate() {
                let _ = writeln!(out, "  M{} = {}", n + 1, fmt_edges(&m.matching));
                let _ = writeln!(
                    out,
                    "    max SDR {} of {}, deficiency {}",
                    m.max_sdr, m.t, m.deficiency
                );
                if let Some(v) = &m.violator {
                    let _ = writeln!(
                        out,
                        "    violator A = {} with N(A) = {{{}}}",
                        fmt_edges(&v.members),
                        v.neighborhood.join(", ")
                    );
                }
                let _ = writeln!(out, "    extension {}", fmt_edges(&m.extension));
            }
            let _ = writeln!(
                out,
                "  conclusion: {} (best extension {})",
                p.conclusion.unwrap_or(""),
                p.max_extension.unwrap_or(0)
            );
            if p.perfect_matching {
                let _ = writeln!(out, "  the witness is a perfect matching");
            }
        }

        let d = &self.duality;
        let _ = writeln!(out, "\nexact search");
        let _ = writeln!(
            out,
            "  alpha' = {} via {}",
            d.alpha_prime,
            fmt_edges(&d.max_matching_witness)
        );
        let _ = writeln!(out, "  beta   = {} via {{{}}}", d.beta, d.min_cover_witness.join(", "));
        let _ = writeln!(
            out,
            "  t = {}, has t-matching: {}, alpha' = beta = t: {}",
            d.t, d.has_t_matching, d.konig_equality
        );
        out
    }
}

pub(crate) fn fmt_edges(edges: &[Vec<String>]) -> String {
    let inner: Vec<String> = edges.iter().map(|e| format!("{{{}}}", e.join(", "))).collect();
    format!("{{{}}}", inner.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::fixture;

    #[test]
    fn nonunique_example_report() {
        let r = AnalysisReport::new(&fixture("ex_2_5").unwrap(), Coverage::Strict);
        assert_eq!(r.prefix.pm_count, ">=2");
        assert_eq!(r.prefix.matchings[1].matching, [["x1", "y2"], ["x2", "y1"]]);
        let v = r.prefix.matchings[1].violator.as_ref().unwrap();
        assert_eq!(v.neighborhood, ["z2"]);
        assert_eq!(r.prefix.conclusion, Some("matching_of_size_t_exists"));
        assert!(r.to_text().contains("N(A) = {z2}"));
    }

    #[test]
    fn inapplicable_prefix_report() {
        let r = PrefixReport::new(&fixture("k2_hall_fail").unwrap().rotate_parts(1));
        // V1 = {c, d} with d isolated: no perfect matching of the prefix
        assert!(!r.applicable);
        assert_eq!(r.pm_count, "0");
        assert!(r.reason.unwrap().contains("no perfect matching"));
    }
}
