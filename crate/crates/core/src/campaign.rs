//! Property campaigns over generated instances.
//!
//! Every property is checked on its own stream of `trials` instances. Trial
//! `i` of property `p` draws its shape and instance seed from the ChaCha8
//! stream `(p << 32) | i` under the campaign seed, so results do not depend on
//! evaluation order and any failure can be replayed from its recorded seed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::exact::{alpha_prime, is_vertex_cover, konig_report};
use crate::generate::{gen_planted_unique, gen_random, PlantedParams, RandomParams};
use crate::hypergraph::{KPartiteHypergraph, SubmaximalEdge, VertexId};
use crate::instance::InstanceDocument;
use crate::matching::{
    enumerate_perfect_matchings, hall_deficiency, hall_subset_oracle, max_bipartite_matching,
    prefix_hall_verdict, Conclusion, HallReport, Matching, SdrInstance,
};
use crate::report::REPORT_VERSION;

/// Largest part size a campaign may use; keeps the exact solvers and the
/// subset oracle fast.
pub const MAX_CAMPAIGN_T: usize = 10;
pub const MAX_CAMPAIGN_K: usize = 6;

const RANDOM_DENSITIES: [f64; 4] = [0.2, 0.35, 0.5, 0.7];
const TRACE_DENSITIES: [f64; 4] = [0.2, 0.4, 0.6, 0.8];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    UniquePlanted,
    Random,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::UniquePlanted, Mode::Random];

    pub fn name(self) -> &'static str {
        match self {
            Mode::UniquePlanted => "unique-planted",
            Mode::Random => "random",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    /// Unique prefix PM: Hall-deficiency zero iff a matching saturates V₁.
    Thm21,
    /// Extensions have exactly `t − deficiency` edges and are valid.
    Thm26,
    /// `α′ = t` iff `α′ = β = t`, plus witness and weak-duality checks.
    Thm27,
    /// Augmenting-path deficiency equals the subset-enumeration oracle.
    DefectEquivalence,
    /// Bipartite case: the verdict is classical Hall, and `α′ = β`.
    K2Reduction,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Thm21,
        Property::Thm26,
        Property::Thm27,
        Property::DefectEquivalence,
        Property::K2Reduction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Thm21 => "thm21",
            Property::Thm26 => "thm26",
            Property::Thm27 => "thm27",
            Property::DefectEquivalence => "defect-equivalence",
            Property::K2Reduction => "k2-reduction",
        }
    }

    /// Instance families the property is meaningful on.
    pub fn modes(self) -> &'static [Mode] {
        match self {
            Property::Thm21 | Property::Thm26 | Property::DefectEquivalence => &[Mode::UniquePlanted],
            Property::Thm27 | Property::K2Reduction => &Mode::ALL,
        }
    }

    fn check(self, h: &KPartiteHypergraph) -> Result<(), String> {
        match self {
            Property::Thm21 => check_unique_prefix_equivalence(h),
            Property::Thm26 => check_extension_size(h),
            Property::Thm27 => check_duality(h),
            Property::DefectEquivalence => check_defect_equivalence(h),
            Property::K2Reduction => check_bipartite_reduction(h),
        }
    }
}

macro_rules! parse_by_name {
    ($ty:ty, $what:literal) => {
        impl FromStr for $ty {
            type Err = String;
            fn from_str(s: &str) -> Result<Self, String> {
                Self::ALL
                    .into_iter()
                    .find(|x| x.name() == s)
                    .ok_or_else(|| {
                        let known: Vec<_> = Self::ALL.iter().map(|x| x.name()).collect();
                        format!("unknown {} `{s}` (known: {})", $what, known.join(", "))
                    })
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

parse_by_name!(Mode, "mode");
parse_by_name!(Property, "property");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CampaignConfig {
    pub trials: usize,
    pub seed: u64,
    pub k_values: Vec<usize>,
    pub t_values: Vec<usize>,
    pub modes: Vec<Mode>,
    pub properties: Vec<Property>,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            seed: 0,
            k_values: vec![2, 3, 4],
            t_values: vec![1, 2, 3, 4],
            modes: Mode::ALL.to_vec(),
            properties: Property::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CampaignError {
    #[error("invalid campaign configuration: {0}")]
    InvalidConfig(String),
}

impl CampaignConfig {
    pub fn validate(&self) -> Result<(), CampaignError> {
        let bad = |msg: String| Err(CampaignError::InvalidConfig(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.k_values.is_empty() || self.t_values.is_empty() {
            return bad("k and t ranges must be nonempty".into());
        }
        if self.modes.is_empty() || self.properties.is_empty() {
            return bad("modes and properties must be nonempty".into());
        }
        if let Some(k) = self.k_values.iter().find(|&&k| !(2..=MAX_CAMPAIGN_K).contains(&k)) {
            return bad(format!("k = {k} outside 2..={MAX_CAMPAIGN_K}"));
        }
        if let Some(t) = self.t_values.iter().find(|&&t| !(1..=MAX_CAMPAIGN_T).contains(&t)) {
            return bad(format!("t = {t} outside 1..={MAX_CAMPAIGN_T}"));
        }
        Ok(())
    }
}

/// How trial instances are produced; recorded with failures for replay.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum TrialRecipe {
    UniquePlanted {
        k: usize,
        t: usize,
        last_part_size: usize,
        trace_density: f64,
        attachments: (usize, usize),
        seed: u64,
    },
    Random {
        part_sizes: Vec<usize>,
        edge_probability: f64,
        seed: u64,
    },
}

impl TrialRecipe {
    fn draw(property: Property, mode: Mode, config: &CampaignConfig, rng: &mut ChaCha8Rng) -> Self {
        let k = match property {
            Property::K2Reduction => 2,
            _ => config.k_values[rng.gen_range(0..config.k_values.len())],
        };
        let t = config.t_values[rng.gen_range(0..config.t_values.len())];
        let last_part_size = (t as i64 + rng.gen_range(-1..=1)).max(1) as usize;
        let seed = rng.next_u64();
        match mode {
            Mode::UniquePlanted => TrialRecipe::UniquePlanted {
                k,
                t,
                last_part_size,
                trace_density: TRACE_DENSITIES[rng.gen_range(0..TRACE_DENSITIES.len())],
                attachments: (1, rng.gen_range(1..=3)),
                seed,
            },
            Mode::Random => {
                let mut part_sizes = vec![t; k - 1];
                part_sizes.push(last_part_size);
                TrialRecipe::Random {
                    part_sizes,
                    edge_probability: RANDOM_DENSITIES[rng.gen_range(0..RANDOM_DENSITIES.len())],
                    seed,
                }
            }
        }
    }

    pub fn build(&self) -> Result<KPartiteHypergraph, String> {
        match self {
            TrialRecipe::UniquePlanted { k, t, last_part_size, trace_density, attachments, seed } => {
                let params = PlantedParams {
                    k: *k,
                    t: *t,
                    last_part_size: *last_part_size,
                    trace_density: *trace_density,
                    attachments: *attachments,
                };
                gen_planted_unique(&params, *seed).map_err(|e| e.to_string())
            }
            TrialRecipe::Random { part_sizes, edge_probability, seed } => {
                let params = RandomParams {
                    part_sizes: part_sizes.clone(),
                    edge_probability: *edge_probability,
                };
                gen_random(&params, *seed)
                    .map(|g| g.hypergraph)
                    .map_err(|e| e.to_string())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub recipe: TrialRecipe,
    pub detail: String,
    pub instance: Option<InstanceDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property: &'static str,
    pub modes: Vec<&'static str>,
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: Option<String>,
    pub first_failure: Option<Failure>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CampaignReport {
    pub report_version: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub k_values: Vec<usize>,
    pub t_values: Vec<usize>,
    pub properties: Vec<PropertyReport>,
    pub all_passed: bool,
    /// Wall-clock time; left out unless explicitly requested, so that
    /// reports stay byte-identical across runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CampaignReport {
    pub fn property(&self, p: Property) -> Option<&PropertyReport> {
        self.properties.iter().find(|r| r.property == p.name())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("campaign seed {} with {} trials per property\n", self.seed, self.trials);
        for p in &self.properties {
            if let Some(reason) = &p.skipped {
                out += &format!("  {:<20} skipped: {reason}\n", p.property);
                continue;
            }
            let status = if p.failed == 0 { "PASS" } else { "FAIL" };
            out += &format!(
                "  {:<20} {status} {}/{} passed [{}]\n",
                p.property,
                p.passed,
                p.trials,
                p.modes.join(", ")
            );
            if let Some(f) = &p.first_failure {
                out += &format!("    first failure at trial {}: {}\n", f.trial, f.detail);
                if let Ok(recipe) = serde_json::to_string(&f.recipe) {
                    out += &format!("    replay with {recipe}\n");
                }
            }
        }
        if let Some(ms) = self.elapsed_ms {
            out += &format!("elapsed {ms} ms\n");
        }
        out
    }
}

fn trial_rng(seed: u64, property_index: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((property_index as u64) << 32) | trial as u64);
    rng
}

pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    config.validate()?;
    let wanted: BTreeSet<Property> = config.properties.iter().copied().collect();
    let properties = Property::ALL
        .iter()
        .enumerate()
        .filter(|(_, p)| wanted.contains(p))
        .map(|(index, &property)| run_property(config, index, property))
        .collect::<Vec<_>>();
    let all_passed = properties.iter().all(|p| p.failed == 0);
    Ok(CampaignReport {
        report_version: REPORT_VERSION,
        seed: config.seed,
        trials: config.trials,
        k_values: config.k_values.clone(),
        t_values: config.t_values.clone(),
        properties,
        all_passed,
        elapsed_ms: None,
    })
}

fn run_property(config: &CampaignConfig, index: usize, property: Property) -> PropertyReport {
    let modes: Vec<Mode> = property
        .modes()
        .iter()
        .copied()
        .filter(|m| config.modes.contains(m))
        .collect();
    let mode_names = modes.iter().map(|m| m.name()).collect();
    if modes.is_empty() {
        let wants: Vec<_> = property.modes().iter().map(|m| m.name()).collect();
        return PropertyReport {
            property: property.name(),
            modes: mode_names,
            trials: 0,
            passed: 0,
            failed: 0,
            skipped: Some(format!("needs mode {}", wants.join(" or "))),
            first_failure: None,
        };
    }

    let outcomes: Vec<Option<Failure>> = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, index, trial);
            let mode = modes[trial % modes.len()];
            let recipe = TrialRecipe::draw(property, mode, config, &mut rng);
            let result = recipe
                .build()
                .map_err(|e| (format!("generator failed: {e}"), None))
                .and_then(|h| property.check(&h).map_err(|e| (e, Some(h))));
            result.err().map(|(detail, h)| Failure {
                trial,
                instance: h.map(|h| {
                    InstanceDocument::from_hypergraph(&h).with_metadata(BTreeMap::from([(
                        "recipe".to_owned(),
                        serde_json::to_value(&recipe).expect("recipes serialize"),
                    )]))
                }),
                recipe,
                detail,
            })
        })
        .collect();

    let failed = outcomes.iter().filter(|o| o.is_some()).count();
    PropertyReport {
        property: property.name(),
        modes: mode_names,
        trials: config.trials,
        passed: config.trials - failed,
        failed,
        skipped: None,
        first_failure: outcomes.into_iter().flatten().next(),
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Extension edges must be hyperedges, pairwise disjoint, and each must
/// restrict to a member of the prefix matching.
fn check_extension(h: &KPartiteHypergraph, m: &Matching, ext: &Matching, size: usize) -> Result<(), String> {
    ensure(ext.is_matching_of(h), || "extension is not a matching of H".into())?;
    ensure(ext.len() == size, || format!("extension has {} edges, expected {size}", ext.len()))?;
    let last = h.k() - 1;
    for e in ext.edges() {
        let trace: Vec<VertexId> = e.iter().copied().filter(|v| v.part != last).collect();
        ensure(m.edges().contains(&trace), || {
            format!("extension edge {:?} does not restrict to M", h.set_labels(e))
        })?;
    }
    Ok(())
}

fn check_unique_prefix_equivalence(h: &KPartiteHypergraph) -> Result<(), String> {
    let verdict = prefix_hall_verdict(h).map_err(|e| e.to_string())?;
    ensure(verdict.unique(), || "planted prefix perfect matching is not unique".into())?;
    let t = verdict.t;
    let deficiency = verdict.chosen_analysis().hall.deficiency;
    let (alpha, witness) = alpha_prime(h);
    ensure(witness.is_matching_of(h) && witness.len() == alpha, || {
        "alpha' witness is not a matching of the stated size".into()
    })?;
    ensure((deficiency == 0) == (alpha >= t), || {
        format!("deficiency {deficiency} but alpha' = {alpha} with t = {t}")
    })?;
    match verdict.conclusion {
        Conclusion::SaturatingMatchingExists => check_extension(
            h,
            &verdict.chosen_analysis().matching,
            verdict.witness(),
            t,
        ),
        Conclusion::NoSaturatingMatching { max_extension } => ensure(
            alpha < t && max_extension <= alpha,
            || format!("negative verdict but alpha' = {alpha}, t = {t}"),
        ),
        Conclusion::Inconclusive { .. } => Err("unique prefix yet inconclusive".into()),
    }
}

fn check_extension_size(h: &KPartiteHypergraph) -> Result<(), String> {
    let verdict = prefix_hall_verdict(h).map_err(|e| e.to_string())?;
    for a in &verdict.analyses {
        let independent = hall_deficiency(h, &a.matching).map_err(|e| e.to_string())?;
        ensure(independent == a.hall, || "verdict Hall report differs from hall_deficiency".into())?;
        check_extension(h, &a.matching, &a.extension, a.hall.t - a.hall.deficiency)?;
    }
    Ok(())
}

fn check_duality(h: &KPartiteHypergraph) -> Result<(), String> {
    let r = konig_report(h);
    let min_part = h.part_sizes().into_iter().min().unwrap_or(0);
    ensure(r.alpha_prime <= r.beta, || format!("alpha' = {} > beta = {}", r.alpha_prime, r.beta))?;
    ensure(r.alpha_prime <= min_part, || "alpha' exceeds the smallest part".into())?;
    ensure(
        r.max_matching_witness.is_matching_of(h) && r.max_matching_witness.len() == r.alpha_prime,
        || "invalid alpha' witness".into(),
    )?;
    ensure(
        is_vertex_cover(h, &r.min_cover_witness) && r.min_cover_witness.len() == r.beta,
        || "invalid beta witness".into(),
    )?;
    ensure(r.has_t_matching == r.konig_equality, || {
        format!("alpha' = {}, beta = {}, t = {}", r.alpha_prime, r.beta, r.t)
    })?;
    // positive verdicts need a saturating matching; negative ones rule it out
    if let Ok(v) = prefix_hall_verdict(h) {
        match v.conclusion {
            Conclusion::SaturatingMatchingExists => {
                ensure(r.has_t_matching, || "positive prefix verdict but alpha' < t".into())?
            }
            Conclusion::NoSaturatingMatching { .. } => {
                ensure(!r.has_t_matching, || "negative prefix verdict but alpha' = t".into())?
            }
            Conclusion::Inconclusive { .. } => {}
        }
    }
    Ok(())
}

fn check_witness(h: &KPartiteHypergraph, m: &Matching, report: &HallReport, who: &str) -> Result<(), String> {
    match &report.witness {
        None => ensure(report.deficiency == 0, || format!("{who}: deficiency without witness")),
        Some(w) => {
            let members = w.members.iter().map(|&i| m.edges()[i].as_slice());
            let n = h.neighborhood_of_set(members).map_err(|e| e.to_string())?;
            ensure(n.iter().copied().eq(w.neighborhood.iter().copied()), || {
                format!("{who}: stated N(A) is wrong")
            })?;
            ensure(w.members.len() == n.len() + report.deficiency, || {
                format!("{who}: |A| - |N(A)| != deficiency")
            })
        }
    }
}

fn check_defect_equivalence(h: &KPartiteHypergraph) -> Result<(), String> {
    let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2).map_err(|e| e.to_string())?;
    ensure(!found.matchings.is_empty(), || "no prefix perfect matching".into())?;
    for m in &found.matchings {
        let fast = hall_deficiency(h, m).map_err(|e| e.to_string())?;
        let slow = hall_subset_oracle(h, m).map_err(|e| e.to_string())?;
        ensure(fast.deficiency == slow.deficiency && fast.max_sdr == slow.max_sdr, || {
            format!("augmenting deficiency {} vs subset oracle {}", fast.deficiency, slow.deficiency)
        })?;
        check_witness(h, m, &fast, "augmenting")?;
        check_witness(h, m, &slow, "oracle")?;
    }
    Ok(())
}

fn check_bipartite_reduction(h: &KPartiteHypergraph) -> Result<(), String> {
    ensure(h.k() == 2, || "k2-reduction needs a bipartite instance".into())?;
    let left: Vec<VertexId> = h.part(0).collect();
    let t = left.len();

    // classical Hall straight from the edge list
    let neighbors: Vec<BTreeSet<VertexId>> = left
        .iter()
        .map(|&x| h.edges().iter().filter(|e| e[0] == x).map(|e| e[1]).collect())
        .collect();
    let inst = SdrInstance::new(
        left.iter()
            .map(|&x| SubmaximalEdge::new(2, vec![x]).expect("singleton"))
            .collect(),
        h.part(1).collect(),
        neighbors.clone(),
    )
    .map_err(|e| e.to_string())?;
    let classical = max_bipartite_matching(&inst).len();
    let hall_holds = (1u32..1 << t).all(|mask| {
        let union: BTreeSet<_> = (0..t)
            .filter(|i| mask >> i & 1 == 1)
            .flat_map(|i| neighbors[i].iter())
            .collect();
        union.len() >= mask.count_ones() as usize
    });
    ensure(hall_holds == (classical == t), || {
        format!("subset Hall condition {hall_holds} but max matching {classical} of {t}")
    })?;

    let positive = prefix_hall_verdict(h).is_ok_and(|v| v.is_positive());
    ensure(positive == (classical == t), || {
        format!("prefix verdict positive = {positive}, classical max matching {classical} of {t}")
    })?;

    let r = konig_report(h);
    ensure(r.alpha_prime == r.beta, || format!("alpha' = {} but beta = {}", r.alpha_prime, r.beta))?;
    ensure(r.alpha_prime == classical, || {
        format!("alpha' = {} but augmenting paths give {classical}", r.alpha_prime)
    })
}
