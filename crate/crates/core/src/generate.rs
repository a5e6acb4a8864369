//! Seeded instance generators.
//!
//! All randomness comes from a ChaCha8 stream keyed by the 64-bit seed, so a
//! given `(params, seed)` always yields the same instance.

use rand::seq::index;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hypergraph::{Coverage, KPartiteHypergraph, RawInstance};
use crate::matching::enumerate_perfect_matchings;

/// Largest number of candidate k-tuples the random generator will scan.
pub const MAX_CANDIDATE_TUPLES: usize = 1 << 22;

/// Resampling budget of the planted generator.
pub const PLANTED_MAX_ATTEMPTS: u64 = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("no instance with a unique prefix perfect matching after {0} attempts")]
    RetryExhausted(u64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomParams {
    pub part_sizes: Vec<usize>,
    pub edge_probability: f64,
}

impl RandomParams {
    pub fn validate(&self) -> Result<(), GenerateError> {
        check_sizes(&self.part_sizes)?;
        check_probability("edge_probability", self.edge_probability)?;
        let tuples = self
            .part_sizes
            .iter()
            .try_fold(1usize, |acc, &n| acc.checked_mul(n))
            .filter(|&n| n <= MAX_CANDIDATE_TUPLES);
        if tuples.is_none() {
            return Err(GenerateError::InvalidParams(format!(
                "more than {MAX_CANDIDATE_TUPLES} candidate edges"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PlantedParams {
    pub k: usize,
    /// Size of each of the first `k − 1` parts.
    pub t: usize,
    pub last_part_size: usize,
    /// Probability of keeping each non-diagonal staircase trace.
    pub trace_density: f64,
    /// Inclusive range for the number of last-part vertices attached to a trace.
    pub attachments: (usize, usize),
}

impl PlantedParams {
    pub fn new(k: usize, t: usize) -> Self {
        Self { k, t, last_part_size: t, trace_density: 0.4, attachments: (1, 2) }
    }

    pub fn validate(&self) -> Result<(), GenerateError> {
        let mut sizes = vec![self.t; self.k.saturating_sub(1)];
        sizes.push(self.last_part_size);
        check_sizes(&sizes)?;
        check_probability("trace_density", self.trace_density)?;
        let (lo, hi) = self.attachments;
        if lo == 0 || lo > hi {
            return Err(GenerateError::InvalidParams(format!(
                "attachments range {lo}..={hi} must satisfy 1 <= min <= max"
            )));
        }
        let tuples = self.t.checked_pow(self.k as u32 - 1);
        if tuples.is_none_or(|n| n > MAX_CANDIDATE_TUPLES) {
            return Err(GenerateError::InvalidParams(format!(
                "more than {MAX_CANDIDATE_TUPLES} candidate traces"
            )));
        }
        Ok(())
    }
}

fn check_sizes(sizes: &[usize]) -> Result<(), GenerateError> {
    if sizes.len() < 2 {
        return Err(GenerateError::InvalidParams(format!("need k >= 2 parts, got {}", sizes.len())));
    }
    if sizes.contains(&0) {
        return Err(GenerateError::InvalidParams("part sizes must be positive".into()));
    }
    Ok(())
}

fn check_probability(name: &str, p: f64) -> Result<(), GenerateError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenerateError::InvalidParams(format!("{name} = {p} is outside [0, 1]")));
    }
    Ok(())
}

/// Label of vertex `local` in part `part`: `a0`, `b3`, ... and `p27_0` past 26 parts.
pub fn vertex_label(part: usize, local: usize) -> String {
    if part < 26 {
        format!("{}{local}", (b'a' + part as u8) as char)
    } else {
        format!("p{part}_{local}")
    }
}

fn labelled_parts(sizes: &[usize]) -> Vec<Vec<String>> {
    sizes
        .iter()
        .enumerate()
        .map(|(p, &n)| (0..n).map(|i| vertex_label(p, i)).collect())
        .collect()
}

fn tuple_labels(tuple: &[usize]) -> Vec<String> {
    tuple.iter().enumerate().map(|(p, &i)| vertex_label(p, i)).collect()
}

/// Odometer over `[0, sizes[0]) × .. × [0, sizes[n-1])` in lexicographic order.
fn advance(tuple: &mut [usize], sizes: &[usize]) -> bool {
    for p in (0..tuple.len()).rev() {
        tuple[p] += 1;
        if tuple[p] < sizes[p] {
            return true;
        }
        tuple[p] = 0;
    }
    false
}

fn unit_interval(word: u64) -> f64 {
    (word >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generated {
    pub hypergraph: KPartiteHypergraph,
    /// Set when no edge was kept.
    pub degenerate: bool,
}

/// Keeps each of the `∏ |V_p|` possible edges independently with
/// `edge_probability`.
///
/// The decision for the `j`-th tuple in lexicographic order is read from
/// position `j` of the keystream, independent of every other tuple.
pub fn gen_random(params: &RandomParams, seed: u64) -> Result<Generated, GenerateError> {
    params.validate()?;
    let sizes = &params.part_sizes;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut tuple = vec![0; sizes.len()];
    let mut j: u128 = 0;
    loop {
        rng.set_word_pos(2 * j);
        if unit_interval(rng.next_u64()) < params.edge_probability {
            edges.push(tuple_labels(&tuple));
        }
        j += 1;
        if !advance(&mut tuple, sizes) {
            break;
        }
    }
    let raw = RawInstance { parts: labelled_parts(sizes), edges };
    let hypergraph = KPartiteHypergraph::build(&raw, Coverage::Lenient)
        .expect("generated tuples are k-partite");
    Ok(Generated { degenerate: hypergraph.edge_count() == 0, hypergraph })
}

/// An instance whose prefix subhypergraph has exactly one perfect matching.
///
/// Prefix traces are the diagonal `(i, .., i)` plus a random subset of the
/// tuples whose first coordinate is no larger than any other. Removing the
/// first-part vertex with the largest index always leaves a smaller instance
/// of the same shape, and that vertex can only be covered by its diagonal
/// trace, so the diagonal is the unique perfect matching. Each trace is then
/// completed by one or more random last-part vertices. Uniqueness is checked
/// by enumeration before returning; on failure a fresh stream is drawn.
pub fn gen_planted_unique(params: &PlantedParams, seed: u64) -> Result<KPartiteHypergraph, GenerateError> {
    params.validate()?;
    let prefix_len = params.k - 1;
    let t = params.t;
    let mut sizes = vec![t; prefix_len];
    sizes.push(params.last_part_size);

    for attempt in 0..PLANTED_MAX_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);

        let mut traces = Vec::new();
        let mut tuple = vec![0; prefix_len];
        loop {
            let head = tuple[0];
            let staircase = tuple.iter().all(|&i| i >= head);
            let diagonal = tuple.iter().all(|&i| i == head);
            // draw for every tuple so each decision keeps a fixed stream position
            let keep = rng.gen::<f64>() < params.trace_density;
            if diagonal || (staircase && keep) {
                traces.push(tuple.clone());
            }
            if !advance(&mut tuple, &sizes[..prefix_len]) {
                break;
            }
        }

        let (lo, hi) = params.attachments;
        let mut edges = Vec::new();
        for trace in &traces {
            let count = rng.gen_range(lo..=hi).min(params.last_part_size);
            let mut picks = index::sample(&mut rng, params.last_part_size, count).into_vec();
            picks.sort_unstable();
            for z in picks {
                let mut full = trace.clone();
                full.push(z);
                edges.push(tuple_labels(&full));
            }
        }

        let raw = RawInstance { parts: labelled_parts(&sizes), edges };
        let h = KPartiteHypergraph::build(&raw, Coverage::Lenient)
            .expect("generated tuples are k-partite");
        let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2)
            .expect("prefix is a union of parts");
        if found.matchings.len() == 1 {
            return Ok(h);
        }
    }
    Err(GenerateError::RetryExhausted(PLANTED_MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::serialize_instance;
    use crate::matching::Matching;

    #[test]
    fn probability_one_keeps_everything() {
        let g = gen_random(&RandomParams { part_sizes: vec![2, 2, 2], edge_probability: 1.0 }, 99).unwrap();
        assert_eq!(g.hypergraph.edge_count(), 8);
        assert!(!g.degenerate);
    }

    #[test]
    fn probability_zero_is_degenerate() {
        let g = gen_random(&RandomParams { part_sizes: vec![2, 3], edge_probability: 0.0 }, 1).unwrap();
        assert!(g.degenerate);
        assert_eq!(g.hypergraph.edge_count(), 0);
    }

    #[test]
    fn random_is_deterministic() {
        let params = RandomParams { part_sizes: vec![3, 3, 4], edge_probability: 0.3 };
        let a = serialize_instance(&gen_random(&params, 5).unwrap().hypergraph);
        let b = serialize_instance(&gen_random(&params, 5).unwrap().hypergraph);
        assert_eq!(a, b);
        let c = serialize_instance(&gen_random(&params, 6).unwrap().hypergraph);
        assert_ne!(a, c);
    }

    #[test]
    fn random_tuple_decisions_do_not_depend_on_shape() {
        // tuple (0, 0, j) sits at the same stream position when only the
        // last part grows, so the kept edges of the smaller shape persist
        let small = gen_random(&RandomParams { part_sizes: vec![1, 1, 3], edge_probability: 0.5 }, 3).unwrap();
        let large = gen_random(&RandomParams { part_sizes: vec![1, 1, 8], edge_probability: 0.5 }, 3).unwrap();
        let restricted: Vec<_> = large
            .hypergraph
            .edges()
            .iter()
            .filter(|e| e[2].local < 3)
            .cloned()
            .collect();
        assert_eq!(small.hypergraph.edges(), restricted.as_slice());
    }

    #[test]
    fn invalid_random_params() {
        let bad = RandomParams { part_sizes: vec![2, 2], edge_probability: 1.5 };
        assert!(matches!(gen_random(&bad, 0), Err(GenerateError::InvalidParams(_))));
        let bad = RandomParams { part_sizes: vec![2], edge_probability: 0.5 };
        assert!(matches!(gen_random(&bad, 0), Err(GenerateError::InvalidParams(_))));
        let bad = RandomParams { part_sizes: vec![2, 0], edge_probability: 0.5 };
        assert!(matches!(gen_random(&bad, 0), Err(GenerateError::InvalidParams(_))));
    }

    #[test]
    fn planted_single_vertex_parts() {
        for k in 2..=5 {
            let h = gen_planted_unique(&PlantedParams::new(k, 1), 0).unwrap();
            assert_eq!(h.prefix_subhypergraph().traces().len(), 1);
        }
    }

    #[test]
    fn planted_prefix_has_unique_perfect_matching() {
        let mut params = PlantedParams::new(3, 3);
        params.trace_density = 0.5;
        let h = gen_planted_unique(&params, 7).unwrap();
        let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 2).unwrap();
        assert_eq!(found.matchings.len(), 1);
    }

    /// All perfect matchings of a bipartite prefix, by trying every permutation.
    fn permutation_count(h: &KPartiteHypergraph, t: usize) -> usize {
        fn rec(h: &KPartiteHypergraph, row: usize, used: &mut Vec<bool>, chosen: &mut Vec<Vec<crate::hypergraph::VertexId>>, out: &mut usize) {
            let t = used.len();
            if row == t {
                let m = Matching::new(chosen.clone());
                if m.edges().iter().all(|e| h.prefix_subhypergraph().contains_trace(e)) {
                    *out += 1;
                }
                return;
            }
            for col in 0..t {
                if !used[col] {
                    used[col] = true;
                    chosen.push(vec![
                        crate::hypergraph::VertexId::new(0, row),
                        crate::hypergraph::VertexId::new(1, col),
                    ]);
                    rec(h, row + 1, used, chosen, out);
                    chosen.pop();
                    used[col] = false;
                }
            }
        }
        let mut out = 0;
        rec(h, 0, &mut vec![false; t], &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn planted_staircase_is_unique_by_brute_force() {
        for t in 1..=6 {
            for seed in 0..5 {
                let mut params = PlantedParams::new(3, t);
                params.trace_density = 0.8;
                let h = gen_planted_unique(&params, seed).unwrap();
                assert_eq!(permutation_count(&h, t), 1, "t={t} seed={seed}");
            }
        }
    }

    #[test]
    fn planted_is_deterministic_and_valid() {
        let mut params = PlantedParams::new(4, 4);
        params.last_part_size = 6;
        params.attachments = (1, 3);
        let a = gen_planted_unique(&params, 11).unwrap();
        assert_eq!(a, gen_planted_unique(&params, 11).unwrap());
        assert_eq!(a.part_sizes(), vec![4, 4, 4, 6]);
        assert!(a.isolated_vertices().iter().all(|v| v.part == 3));
    }

    #[test]
    fn invalid_planted_params() {
        let mut p = PlantedParams::new(3, 2);
        p.attachments = (0, 2);
        assert!(gen_planted_unique(&p, 0).is_err());
        let mut p = PlantedParams::new(3, 2);
        p.trace_density = -0.1;
        assert!(gen_planted_unique(&p, 0).is_err());
        assert!(gen_planted_unique(&PlantedParams::new(1, 2), 0).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(vertex_label(0, 3), "a3");
        assert_eq!(vertex_label(2, 10), "c10");
        assert_eq!(vertex_label(30, 1), "p30_1");
    }
}
