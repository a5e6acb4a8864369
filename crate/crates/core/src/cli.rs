//! The `kpartite-hall` command line.
//!
//! Exit codes: 0 success, 1 property failures in `verify`, 2 input or
//! configuration error, 3 criterion not applicable, 4 I/O failure.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::campaign::{run_campaign, CampaignConfig, Mode, Property};
use crate::exact::SearchLimits;
use crate::generate::{gen_planted_unique, gen_random, PlantedParams, RandomParams};
use crate::hypergraph::{Coverage, KPartiteHypergraph};
use crate::instance::{fixture_source, parse_instance, InstanceDocument};
use crate::matching::{enumerate_perfect_matchings, extend_matching, hall_deficiency};
use crate::report::{edge_labels, fmt_edges, AnalysisReport, InstanceSummary, REPORT_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NOT_APPLICABLE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "kpartite-hall", version, about = "Hall-type matching criteria for k-uniform k-partite hypergraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that an instance file is a valid k-uniform k-partite hypergraph
    Validate(InputArgs),
    /// Prefix Hall criterion plus exact matching and cover numbers
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Run the exact solvers on instances above the default size guard
        #[arg(long)]
        force: bool,
    },
    /// Print the matching built from the canonical prefix perfect matching
    Extend(InputArgs),
    /// Write a generated instance
    Generate {
        #[command(subcommand)]
        mode: GenerateMode,
    },
    /// Check the matching theorems on generated instances
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Instance file, or `fixture:<name>` for a built-in instance
    input: String,
    /// Reject isolated vertices (default)
    #[arg(long, conflicts_with = "lenient")]
    strict: bool,
    /// Accept isolated vertices with a warning
    #[arg(long)]
    lenient: bool,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
    /// Rotate the part order left by this many places before analysis
    #[arg(long, default_value_t = 0)]
    rotate_parts: usize,
}

impl InputArgs {
    fn coverage(&self) -> Coverage {
        if self.lenient {
            Coverage::Lenient
        } else {
            Coverage::Strict
        }
    }
}

#[derive(Subcommand, Debug)]
enum GenerateMode {
    /// Every possible edge kept independently with probability p
    Random {
        /// Part sizes, e.g. 2,2,2 (overrides --k/--t)
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
        #[arg(long, default_value_t = 0.3)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Instance whose prefix has a unique perfect matching
    Planted {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// Size of the last part (defaults to t)
        #[arg(long)]
        last_size: Option<usize>,
        #[arg(long, default_value_t = 0.4)]
        trace_density: f64,
        /// Attachments per trace as `min..max` (inclusive) or a single number
        #[arg(long, default_value = "1..2", value_parser = parse_range)]
        attachments: (usize, usize),
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Values of k, as a list (2,3,4) or inclusive range (2..4)
    #[arg(long, default_value = "2..4", value_parser = parse_values)]
    k: ValueList,
    /// Sizes of the first part, as a list or inclusive range
    #[arg(long, default_value = "1..4", value_parser = parse_values)]
    t: ValueList,
    #[arg(long, value_delimiter = ',', default_value = "unique-planted,random")]
    modes: Vec<Mode>,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "thm21,thm26,thm27,defect-equivalence,k2-reduction"
    )]
    properties: Vec<Property>,
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the JSON report
    #[arg(long)]
    timing: bool,
}

/// `a..b` or `a..=b` (both inclusive) or a single number.
fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok((a, b))
        }
        None => num(s).map(|n| (n, n)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct ValueList(Vec<usize>);

/// Comma-separated list whose items may be inclusive ranges.
fn parse_values(s: &str) -> Result<ValueList, String> {
    let mut out = Vec::new();
    for item in s.split(',').filter(|x| !x.trim().is_empty()) {
        let (a, b) = parse_range(item)?;
        out.extend(a..=b);
    }
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(ValueList(out))
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate(input) => validate(&input, out),
        Command::Analyze { input, force } => analyze(&input, force, out),
        Command::Extend(input) => extend(&input, out),
        Command::Generate { mode } => generate(mode, out, err),
        Command::Verify(args) => verify(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure { code, message }) => {
            let _ = writeln!(err, "error: {message}");
            code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl ToString) -> Self {
        Self { code: EXIT_INPUT, message: message.to_string() }
    }

    fn io(message: impl ToString) -> Self {
        Self { code: EXIT_IO, message: message.to_string() }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(Failure::io)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn load(input: &InputArgs) -> Result<KPartiteHypergraph, Failure> {
    let text = match input.input.strip_prefix("fixture:") {
        Some(name) => fixture_source(name).map_err(Failure::input)?.to_owned(),
        None => std::fs::read_to_string(&input.input)
            .map_err(|e| Failure::input(format!("cannot read {}: {e}", input.input)))?,
    };
    let h = parse_instance(&text, input.coverage()).map_err(Failure::input)?;
    Ok(if input.rotate_parts == 0 { h } else { h.rotate_parts(input.rotate_parts) })
}

#[derive(Serialize)]
struct ValidationReport {
    report_version: &'static str,
    valid: bool,
    instance: Option<InstanceSummary>,
    errors: Vec<String>,
}

fn validate(input: &InputArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    match load(input) {
        Ok(h) => {
            let summary = InstanceSummary::new(&h, input.coverage());
            if input.json {
                let report = ValidationReport {
                    report_version: REPORT_VERSION,
                    valid: true,
                    instance: Some(summary),
                    errors: Vec::new(),
                };
                emit(out, &json(&report))?;
            } else {
                let mut text = format!(
                    "valid: k = {}, part sizes {:?}, {} edges\n",
                    summary.k, summary.part_sizes, summary.edge_count
                );
                if !summary.isolated_vertices.is_empty() {
                    text += &format!(
                        "warning: isolated vertices {}\n",
                        summary.isolated_vertices.join(", ")
                    );
                }
                emit(out, &text)?;
            }
            Ok(EXIT_OK)
        }
        Err(f) if input.json && f.code == EXIT_INPUT => {
            let report = ValidationReport {
                report_version: REPORT_VERSION,
                valid: false,
                instance: None,
                errors: vec![f.message],
            };
            emit(out, &json(&report))?;
            Ok(EXIT_INPUT)
        }
        Err(f) => Err(f),
    }
}

fn analyze(input: &InputArgs, force: bool, out: &mut dyn Write) -> Result<i32, Failure> {
    let h = load(input)?;
    if !force {
        SearchLimits::default()
            .check(&h)
            .map_err(|e| Failure::input(format!("{e}; pass --force to search anyway")))?;
    }
    let report = AnalysisReport::new(&h, input.coverage());
    emit(out, &if input.json { report.to_json() } else { report.to_text() })?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ExtensionReport {
    report_version: &'static str,
    t: usize,
    prefix_matching: Vec<Vec<String>>,
    deficiency: usize,
    extension: Vec<Vec<String>>,
}

fn extend(input: &InputArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let h = load(input)?;
    let found = enumerate_perfect_matchings(&h.prefix_subhypergraph(), 1)
        .map_err(Failure::input)?;
    let Some(m) = found.matchings.first() else {
        let reason = if found.unequal_parts {
            "prefix parts have unequal sizes"
        } else {
            "the prefix subhypergraph has no perfect matching"
        };
        let _ = writeln!(out, "not applicable: {reason}");
        return Ok(EXIT_NOT_APPLICABLE);
    };
    let hall = hall_deficiency(&h, m).map_err(Failure::input)?;
    let extension = extend_matching(&h, m).map_err(Failure::input)?;
    let report = ExtensionReport {
        report_version: REPORT_VERSION,
        t: hall.t,
        prefix_matching: edge_labels(&h, m),
        deficiency: hall.deficiency,
        extension: edge_labels(&h, &extension),
    };
    let text = if input.json {
        json(&report)
    } else {
        let mut s = format!(
            "prefix matching {}\ndeficiency {}, extension of size {}:\n",
            fmt_edges(&report.prefix_matching),
            report.deficiency,
            report.extension.len()
        );
        for e in &report.extension {
            s += &format!("{}\n", e.join(" "));
        }
        s
    };
    emit(out, &text)?;
    Ok(EXIT_OK)
}

fn generate(mode: GenerateMode, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    let (doc, path) = match mode {
        GenerateMode::Random { sizes, k, t, p, seed, out: path } => {
            let part_sizes = sizes.unwrap_or_else(|| vec![t; k]);
            let params = RandomParams { part_sizes: part_sizes.clone(), edge_probability: p };
            let g = gen_random(&params, seed).map_err(Failure::input)?;
            if g.degenerate {
                let _ = writeln!(err, "warning: generated instance has no edges");
            }
            let metadata = BTreeMap::from([
                ("generator".to_owned(), "random".into()),
                ("part_sizes".to_owned(), part_sizes.into()),
                ("edge_probability".to_owned(), p.into()),
                ("seed".to_owned(), seed.into()),
            ]);
            (InstanceDocument::from_hypergraph(&g.hypergraph).with_metadata(metadata), path)
        }
        GenerateMode::Planted { k, t, last_size, trace_density, attachments, seed, out: path } => {
            let params = PlantedParams {
                k,
                t,
                last_part_size: last_size.unwrap_or(t),
                trace_density,
                attachments,
            };
            let h = gen_planted_unique(&params, seed).map_err(Failure::input)?;
            let metadata = BTreeMap::from([
                ("generator".to_owned(), "unique-planted".into()),
                ("k".to_owned(), k.into()),
                ("t".to_owned(), t.into()),
                ("last_part_size".to_owned(), params.last_part_size.into()),
                ("trace_density".to_owned(), trace_density.into()),
                ("attachments".to_owned(), vec![attachments.0, attachments.1].into()),
                ("seed".to_owned(), seed.into()),
            ]);
            (InstanceDocument::from_hypergraph(&h).with_metadata(metadata), path)
        }
    };
    let text = doc.to_json();
    match path {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?,
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    let config = CampaignConfig {
        trials: args.trials,
        seed: args.seed,
        k_values: args.k.0.clone(),
        t_values: args.t.0.clone(),
        modes: args.modes.clone(),
        properties: args.properties.clone(),
    };
    let start = Instant::now();
    let mut report = run_campaign(&config).map_err(Failure::input)?;
    if args.timing || !args.json {
        report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
    }
    emit(out, &if args.json { report.to_json() } else { report.to_text() })?;
    Ok(if report.all_passed { EXIT_OK } else { EXIT_PROPERTY_FAILURE })
}
