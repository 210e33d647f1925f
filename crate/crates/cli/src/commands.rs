//! `analyze` and `query` subcommands.

use std::io::Write;
use std::path::Path;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use ontotopic::client::{execute, render_table, EndpointConfig, TableStyle};
use ontotopic::clustering::TopicId;
use ontotopic::snapshot::{analyze, load_schema, AnalysisParams, AnalysisSnapshot};

/// Timestamp recorded in the snapshot: `SOURCE_DATE_EPOCH` when set, else
/// the input's modification time, so reruns on the same file agree.
pub fn created_at(source_date_epoch: Option<&str>, modified: u64) -> Result<u64> {
    match source_date_epoch {
        Some(s) => s
            .trim()
            .parse()
            .with_context(|| format!("SOURCE_DATE_EPOCH `{s}` is not an integer")),
        None => Ok(modified),
    }
}

pub fn cmd_analyze(
    input: &Path,
    params: AnalysisParams,
    out_dir: &Path,
    source_date_epoch: Option<&str>,
    out: &mut impl Write,
) -> Result<AnalysisSnapshot> {
    let loaded = load_schema(input).with_context(|| format!("reading {}", input.display()))?;
    let created = created_at(source_date_epoch, loaded.modified)?;
    let mut snap = analyze(loaded.schema, &loaded.dataset_id, created, params)
        .with_context(|| format!("analyzing {}", input.display()))?;
    snap.diagnostics = loaded.diagnostics;
    snap.save(out_dir)
        .with_context(|| format!("writing {}", out_dir.display()))?;

    let s = &snap.stats;
    if let Some(d) = &snap.diagnostics {
        writeln!(
            out,
            "instances: {} triples, {} contributing, {} untyped skipped, {} built-in filtered",
            d.instance_triples, d.contributing, d.skipped_untyped, d.builtin_filtered
        )?;
    }
    writeln!(
        out,
        "schema: |C|={} |P|={} |E|={} D={:.4}",
        s.concept_count, s.predicate_count, s.edge_sum, s.density
    )?;
    let leaves = snap.hierarchy.leaves().len();
    let queries: usize = snap.queries.values().map(Vec::len).sum();
    writeln!(
        out,
        "hierarchy: {} ({leaves} leaf topics, {queries} queries)",
        snap.hierarchy.shape_string()
    )?;
    writeln!(out, "wrote {}", out_dir.display())?;
    Ok(snap)
}

fn leaf_list(snap: &AnalysisSnapshot) -> String {
    snap.leaf_ids()
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn cmd_query(
    snapshot_dir: &Path,
    topic: &str,
    endpoint: Option<&str>,
    timeout: Duration,
    style: TableStyle,
    out: &mut impl Write,
) -> Result<()> {
    let snap = AnalysisSnapshot::load(snapshot_dir)?;
    let id: TopicId = match topic.parse() {
        Ok(id) => id,
        Err(_) => bail!(
            "`{topic}` is not a topic id; leaf topics: {}",
            leaf_list(&snap)
        ),
    };
    match snap.hierarchy.find(id) {
        None => bail!("unknown topic {id}; leaf topics: {}", leaf_list(&snap)),
        Some(node) if !node.is_leaf() => bail!(
            "{id} is an internal topic; leaf topics: {}",
            leaf_list(&snap)
        ),
        Some(_) => {}
    }
    let queries = snap.queries.get(&id).map(Vec::as_slice).unwrap_or(&[]);
    for (i, q) in queries.iter().enumerate() {
        writeln!(out, "# {}. {}", i + 1, q.nl_question)?;
        writeln!(out, "{}", q.sparql)?;
    }
    let Some(url) = endpoint else {
        return Ok(());
    };
    let Some(top) = queries.first() else {
        bail!("{id} has no generated queries to execute");
    };
    let cfg = EndpointConfig::new(url)?.with_timeout(timeout);
    let table = execute(&cfg, &top.sparql)?;
    write!(out, "{}", render_table(&table, style))?;
    Ok(())
}
