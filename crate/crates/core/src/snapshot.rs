//! End-to-end analysis and the on-disk snapshot it produces.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufReader;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clustering::{build_hierarchy, TopicHierarchy, TopicId, DEFAULT_ALPHA};
use crate::error::{Error, Result};
use crate::ingest::{
    extract_schema_with_diagnostics, parse_ntriples, schema_stats, ExtractDiagnostics,
    NamespaceFilter, SchemaGraph, StatsReport,
};
use crate::query::{generate_queries, GeneratedQuery, DEFAULT_BETA};
use crate::ranking::{io_degrees, rank_topics, ranks_to_tsv, DegreeIndex, RankingReport};
use crate::similarity::{similarity_matrix, SimilarityMatrix};

pub const SNAPSHOT_FILE: &str = "snapshot.json";
pub const SCHEMA_FILE: &str = "schema.tsv";
pub const STATS_FILE: &str = "stats.json";
pub const SIMILARITY_FILE: &str = "similarity.tsv";
pub const HIERARCHY_FILE: &str = "hierarchy.json";
pub const RANKS_FILE: &str = "ranks.tsv";
pub const QUERIES_FILE: &str = "queries.json";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisParams {
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
}

impl Default for AnalysisParams {
    fn default() -> Self {
        AnalysisParams {
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisSnapshot {
    pub dataset_id: String,
    /// Seconds since the Unix epoch.
    pub created_at: u64,
    pub params: AnalysisParams,
    pub stats: StatsReport,
    pub diagnostics: Option<ExtractDiagnostics>,
    pub schema: SchemaGraph,
    pub sm: SimilarityMatrix,
    pub hierarchy: TopicHierarchy,
    pub degrees: DegreeIndex,
    pub ranking: RankingReport,
    pub queries: BTreeMap<TopicId, Vec<GeneratedQuery>>,
}

/// Flat record of the query bundle export.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryRecord {
    pub topic_id: TopicId,
    pub nl_question: String,
    pub sparql: String,
    pub beta: f64,
    pub share_template: bool,
    pub predicates: Vec<String>,
}

/// Schema read from a file with what the reader knows about it.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSchema {
    pub schema: SchemaGraph,
    pub diagnostics: Option<ExtractDiagnostics>,
    pub dataset_id: String,
    /// Modification time of the file, seconds since the epoch.
    pub modified: u64,
}

/// Reads `.nt` instance data (schema extracted) or a `.tsv` schema.
pub fn load_schema(path: &Path) -> Result<LoadedSchema> {
    let filter = NamespaceFilter::default();
    let file = File::open(path)?;
    let modified = file
        .metadata()?
        .modified()?
        .duration_since(std::time::UNIX_EPOCH)
        .map_or(0, |d| d.as_secs());
    let reader = BufReader::new(file);
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    let (schema, diagnostics) = match ext {
        "nt" => {
            let store = parse_ntriples(reader)?;
            let (g, d) = extract_schema_with_diagnostics(&store, &filter);
            (g, Some(d))
        }
        "tsv" => (SchemaGraph::read_tsv(reader, &filter)?, None),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{}: expected a .nt or .tsv input",
                path.display()
            )))
        }
    };
    let dataset_id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string();
    Ok(LoadedSchema {
        schema,
        diagnostics,
        dataset_id,
        modified,
    })
}

/// Runs similarity, clustering, ranking and query generation over `schema`.
pub fn analyze(
    schema: SchemaGraph,
    dataset_id: &str,
    created_at: u64,
    params: AnalysisParams,
) -> Result<AnalysisSnapshot> {
    if !(0.0..=1.0).contains(&params.alpha) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {} outside [0, 1]",
            params.alpha
        )));
    }
    if !(0.0..1.0).contains(&params.beta) {
        return Err(Error::InvalidArgument(format!(
            "beta = {} outside [0, 1)",
            params.beta
        )));
    }
    if schema.predicates().is_empty() {
        return Err(Error::DegenerateGraph {
            vertices: schema.concepts().len(),
        });
    }
    let stats = schema_stats(&schema)?;
    let sm = similarity_matrix(&schema);
    let hierarchy = build_hierarchy(&sm, params.alpha, params.seed);
    let degrees = io_degrees(&schema);
    let (ranking, queries) = {
        let leaves = hierarchy.leaves();
        let mut queries = BTreeMap::new();
        for leaf in &leaves {
            queries.insert(
                leaf.id,
                generate_queries(leaf, &schema, &sm, &degrees, params.beta)?,
            );
        }
        (rank_topics(&leaves, &schema, &sm, &degrees), queries)
    };
    Ok(AnalysisSnapshot {
        dataset_id: dataset_id.to_string(),
        created_at,
        params,
        stats,
        diagnostics: None,
        schema,
        sm,
        hierarchy,
        degrees,
        ranking,
        queries,
    })
}

impl AnalysisSnapshot {
    pub fn query_records(&self) -> Vec<QueryRecord> {
        self.queries
            .iter()
            .flat_map(|(id, qs)| {
                qs.iter().map(move |q| QueryRecord {
                    topic_id: *id,
                    nl_question: q.nl_question.clone(),
                    sparql: q.sparql.clone(),
                    beta: q.beta,
                    share_template: q.share_template,
                    predicates: q
                        .graph
                        .predicates()
                        .into_iter()
                        .map(str::to_string)
                        .collect(),
                })
            })
            .collect()
    }

    pub fn leaf_ids(&self) -> Vec<TopicId> {
        self.hierarchy.leaves().iter().map(|l| l.id).collect()
    }

    /// Writes the snapshot and the per-artifact exports into `dir`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join(SNAPSHOT_FILE), pretty(self)?)?;
        fs::write(dir.join(SCHEMA_FILE), self.schema.to_tsv())?;
        fs::write(dir.join(STATS_FILE), pretty(&self.stats)?)?;
        fs::write(dir.join(SIMILARITY_FILE), self.sm.to_tsv())?;
        fs::write(dir.join(HIERARCHY_FILE), pretty(&self.hierarchy)?)?;
        fs::write(dir.join(RANKS_FILE), ranks_to_tsv(&self.ranking.rows))?;
        fs::write(dir.join(QUERIES_FILE), pretty(&self.query_records())?)?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let path = dir.join(SNAPSHOT_FILE);
        let file =
            File::open(&path).map_err(|e| Error::Snapshot(format!("{}: {e}", path.display())))?;
        serde_json::from_reader(BufReader::new(file))
            .map_err(|e| Error::Snapshot(format!("{}: {e}", path.display())))
    }
}

fn pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
