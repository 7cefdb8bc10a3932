//! File formats: network TSV, degree histograms, partitions, audit logs,
//! sweep CSV and the trained-model bundle directory.
//!
//! Writers are deterministic byte-for-byte: all maps iterate in sorted order
//! and floats print with Rust's shortest round-trip formatting.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::community::Partition;
use crate::error::{Error, Result};
use crate::graph::{load_bipartite, BipartiteGraph, DegreeHistogram, IngredientNetwork};
use crate::pipeline::{ModelReport, PipelineConfig, TrainedModel};
use crate::recipes::{load_recipes, LoadReport, RecipeCorpus};
use crate::reconcile::SanityDecision;

/// Integral weights print as integers, everything else round-trips.
fn fmt_number(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

// ---------------------------------------------------------------------------
// network TSV

/// Serialize a network: a `#nodes` preamble, one `#node` line per isolated
/// node, then tab-separated weighted edges.
pub fn network_to_string(network: &IngredientNetwork) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#nodes\t{}", network.node_count());
    for node in network.nodes() {
        if network.degree(node) == 0 {
            let _ = writeln!(out, "#node\t{node}");
        }
    }
    for (a, b, w) in network.edges() {
        let _ = writeln!(out, "{a}\t{b}\t{}", fmt_number(w));
    }
    out
}

pub fn parse_network(text: &str) -> Result<IngredientNetwork> {
    let mut network = IngredientNetwork::new();
    let mut declared: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let parse_err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#nodes\t") {
            declared = Some(
                rest.trim()
                    .parse()
                    .map_err(|_| parse_err(format!("bad node count `{rest}`")))?,
            );
            continue;
        }
        if let Some(rest) = line.strip_prefix("#node\t") {
            network.add_node(rest);
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [a, b, w] = fields.as_slice() else {
            return Err(parse_err(format!(
                "expected `node<TAB>node<TAB>weight`, got `{line}`"
            )));
        };
        let weight: f64 = w
            .parse()
            .map_err(|_| parse_err(format!("bad weight `{w}`")))?;
        if a == b || weight <= 0.0 {
            return Err(parse_err(format!("invalid edge `{line}`")));
        }
        network.set_edge(a, b, weight);
    }
    if let Some(n) = declared {
        if n != network.node_count() {
            return Err(Error::Parse {
                line: 1,
                message: format!(
                    "preamble declares {n} nodes but the body defines {}",
                    network.node_count()
                ),
            });
        }
    }
    Ok(network)
}

pub fn write_network(path: &Path, network: &IngredientNetwork) -> Result<()> {
    Ok(fs::write(path, network_to_string(network))?)
}

pub fn read_network(path: &Path) -> Result<IngredientNetwork> {
    parse_network(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// degree histogram

pub fn histogram_csv(histogram: &DegreeHistogram) -> String {
    let mut out = String::from("degree,count\n");
    for (degree, count) in &histogram.counts {
        let _ = writeln!(out, "{degree},{count}");
    }
    out
}

/// The `{nodes, edges, mean_degree, density}` summary object.
pub fn histogram_summary_json(histogram: &DegreeHistogram) -> String {
    #[derive(Serialize)]
    struct Summary {
        nodes: usize,
        edges: usize,
        mean_degree: f64,
        density: f64,
    }
    let mut text = serde_json::to_string_pretty(&Summary {
        nodes: histogram.nodes,
        edges: histogram.edges,
        mean_degree: histogram.mean_degree,
        density: histogram.density,
    })
    .expect("summary serializes");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// partition TSV

pub fn partition_to_string(partition: &Partition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#codelength\t{}", partition.codelength);
    for (node, community) in partition.assignment() {
        let _ = writeln!(out, "{node}\t{community}");
    }
    out
}

pub fn parse_partition(text: &str) -> Result<Partition> {
    let mut codelength = 0.0;
    let mut assignment = std::collections::BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        let parse_err = |message: String| Error::Parse {
            line: idx + 1,
            message,
        };
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#codelength\t") {
            codelength = rest
                .parse()
                .map_err(|_| parse_err(format!("bad codelength `{rest}`")))?;
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let (node, community) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(format!("expected `node<TAB>community`, got `{line}`")))?;
        let community: usize = community
            .parse()
            .map_err(|_| parse_err(format!("bad community id `{community}`")))?;
        assignment.insert(node.to_string(), community);
    }
    Partition::new(assignment, codelength)
}

pub fn write_partition(path: &Path, partition: &Partition) -> Result<()> {
    Ok(fs::write(path, partition_to_string(partition))?)
}

pub fn read_partition(path: &Path) -> Result<Partition> {
    parse_partition(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// audit log

/// One JSON object per removal decision, in execution order.
pub fn audit_to_jsonl(log: &[SanityDecision]) -> String {
    let mut out = String::new();
    for decision in log {
        out.push_str(&serde_json::to_string(decision).expect("decision serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_audit_jsonl(text: &str) -> Result<Vec<SanityDecision>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| Ok(serde_json::from_str(l)?))
        .collect()
}

// ---------------------------------------------------------------------------
// sweep output

/// `ff,fr,knowledge,sensitivity,specificity,min_score,codelength`, one row
/// per report in ranked order.
pub fn sweep_csv(reports: &[ModelReport]) -> String {
    let mut out = String::from("ff,fr,knowledge,sensitivity,specificity,min_score,codelength\n");
    for report in reports {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            report.config.ff,
            report.config.fr,
            report.config.knowledge_fraction,
            report.sensitivity,
            report.specificity,
            report.min_score(),
            report.partition.codelength
        );
    }
    out
}

#[derive(Serialize)]
struct BestRecord<'a> {
    ff: f64,
    fr: f64,
    knowledge: f64,
    sensitivity: f64,
    specificity: f64,
    min_score: f64,
    codelength: f64,
    repetitions: &'a [crate::pipeline::RepetitionScore],
}

/// JSON record of the top-ranked sweep cell.
pub fn best_model_json(report: &ModelReport) -> String {
    let mut text = serde_json::to_string_pretty(&BestRecord {
        ff: report.config.ff,
        fr: report.config.fr,
        knowledge: report.config.knowledge_fraction,
        sensitivity: report.sensitivity,
        specificity: report.specificity,
        min_score: report.min_score(),
        codelength: report.partition.codelength,
        repetitions: &report.repetitions,
    })
    .expect("record serializes");
    text.push('\n');
    text
}

// ---------------------------------------------------------------------------
// model bundle

/// File names inside a model bundle directory.
pub const BUNDLE_PARTITION: &str = "partition.tsv";
pub const BUNDLE_CONFIG: &str = "config.json";
pub const BUNDLE_AUDIT: &str = "audit.jsonl";
pub const BUNDLE_METRICS: &str = "metrics.json";
pub const BUNDLE_NETWORK: &str = "network.tsv";

/// Write a trained model as a reloadable directory: partition, config, audit
/// log, metrics, and the unfiltered projection that supplies pair scores.
pub fn write_model_bundle(
    dir: &Path,
    model: &TrainedModel,
    config: &PipelineConfig,
    network: &IngredientNetwork,
    metrics: &impl Serialize,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_partition(&dir.join(BUNDLE_PARTITION), &model.partition)?;
    write_json(&dir.join(BUNDLE_CONFIG), config)?;
    fs::write(dir.join(BUNDLE_AUDIT), audit_to_jsonl(&model.audit))?;
    write_json(&dir.join(BUNDLE_METRICS), metrics)?;
    write_network(&dir.join(BUNDLE_NETWORK), network)?;
    Ok(())
}

/// A reloaded model bundle, sufficient for classify/rank without retraining.
#[derive(Debug, Clone)]
pub struct ModelBundle {
    pub partition: Partition,
    pub config: PipelineConfig,
    pub network: IngredientNetwork,
}

pub fn read_model_bundle(dir: &Path) -> Result<ModelBundle> {
    Ok(ModelBundle {
        partition: read_partition(&dir.join(BUNDLE_PARTITION))?,
        config: read_json(&dir.join(BUNDLE_CONFIG))?,
        network: read_network(&dir.join(BUNDLE_NETWORK))?,
    })
}

// ---------------------------------------------------------------------------
// generic JSON helpers

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(fs::write(path, text)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

/// Summary the CLI writes into a bundle's metrics.json.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainMetrics {
    pub codelength: f64,
    pub communities: usize,
    pub must_link: usize,
    pub cannot_link: usize,
    pub knowledge_west: usize,
    pub knowledge_east: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation_sensitivity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation_specificity: Option<f64>,
}
