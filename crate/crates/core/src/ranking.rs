//! Degree indices, Top-k lists and the five-criteria topic ranking.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::clustering::{TopicId, TopicNode};
use crate::ingest::{schema_stats, SchemaGraph};
use crate::similarity::SimilarityMatrix;

pub const TOP_K: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PredicateDegree {
    /// Distinct domain concepts.
    pub in_degree: usize,
    /// Distinct range concepts.
    pub out_degree: usize,
    pub pio: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DegreeIndex {
    pub predicates: BTreeMap<String, PredicateDegree>,
    /// Distinct incident predicates per concept, either role.
    pub concepts: BTreeMap<String, usize>,
}

impl DegreeIndex {
    pub fn pio(&self, predicate: &str) -> usize {
        self.predicates.get(predicate).map_or(0, |d| d.pio)
    }

    pub fn cio(&self, concept: &str) -> usize {
        self.concepts.get(concept).copied().unwrap_or(0)
    }
}

pub fn io_degrees(g: &SchemaGraph) -> DegreeIndex {
    let mut predicates: BTreeMap<String, PredicateDegree> = g
        .predicates()
        .iter()
        .map(|p| {
            let zero = PredicateDegree {
                in_degree: 0,
                out_degree: 0,
                pio: 0,
            };
            (p.clone(), zero)
        })
        .collect();
    let mut incident: BTreeSet<(&str, &str)> = BTreeSet::new();
    for (c, p) in g.domain_edges().keys() {
        if let Some(d) = predicates.get_mut(p) {
            d.in_degree += 1;
        }
        incident.insert((c, p));
    }
    for (p, c) in g.range_edges().keys() {
        if let Some(d) = predicates.get_mut(p) {
            d.out_degree += 1;
        }
        incident.insert((c, p));
    }
    for d in predicates.values_mut() {
        d.pio = d.in_degree + d.out_degree;
    }
    let mut concepts: BTreeMap<String, usize> =
        g.concepts().iter().map(|c| (c.clone(), 0)).collect();
    for (c, _) in incident {
        *concepts.entry(c.to_string()).or_default() += 1;
    }
    DegreeIndex {
        predicates,
        concepts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopKind {
    Predicate,
    Concept,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopEntry {
    pub iri: String,
    pub score: usize,
    /// Leaf topic credited with this item, when topics were supplied.
    pub topic: Option<TopicId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopKList {
    pub kind: TopKind,
    pub entries: Vec<TopEntry>,
}

fn top_scores<'a>(
    scores: impl Iterator<Item = (&'a String, usize)>,
    k: usize,
) -> Vec<(String, usize)> {
    let mut all: Vec<(String, usize)> = scores.map(|(iri, s)| (iri.clone(), s)).collect();
    all.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

/// Top `k` predicates by pio, ties by IRI. Each entry is tagged with the leaf
/// holding the predicate.
pub fn top_predicates(idx: &DegreeIndex, k: usize, leaves: &[&TopicNode]) -> TopKList {
    let entries = top_scores(idx.predicates.iter().map(|(p, d)| (p, d.pio)), k)
        .into_iter()
        .map(|(iri, score)| TopEntry {
            topic: leaves
                .iter()
                .filter(|l| l.predicates.contains(&iri))
                .map(|l| l.id)
                .min(),
            iri,
            score,
        })
        .collect();
    TopKList {
        kind: TopKind::Predicate,
        entries,
    }
}

/// Top `k` concepts by cio, ties by IRI.
///
/// A concept shared by several leaves is credited once, to the leaf where it
/// has the most incident predicates (smallest topic id on ties).
pub fn top_concepts(
    idx: &DegreeIndex,
    k: usize,
    g: &SchemaGraph,
    leaves: &[&TopicNode],
) -> TopKList {
    let local: Vec<(TopicId, DegreeIndex)> = leaves
        .iter()
        .map(|l| {
            (
                l.id,
                io_degrees(&g.induced(l.predicates.iter().map(String::as_str))),
            )
        })
        .collect();
    let entries = top_scores(idx.concepts.iter().map(|(c, &n)| (c, n)), k)
        .into_iter()
        .map(|(iri, score)| {
            let topic = local
                .iter()
                .filter(|(_, d)| d.cio(&iri) > 0)
                .max_by(|(a, da), (b, db)| da.cio(&iri).cmp(&db.cio(&iri)).then(b.cmp(a)))
                .map(|(id, _)| *id);
            TopEntry { iri, score, topic }
        })
        .collect();
    TopKList {
        kind: TopKind::Concept,
        entries,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TopicMeasures {
    pub mean_similarity: f64,
    pub mean_sw: f64,
    pub density: f64,
}

/// Local measures of one leaf. A singleton has mean similarity 1; a missing
/// silhouette (unsplit root) or degenerate subgraph counts as 0.
pub fn topic_measures(topic: &TopicNode, g: &SchemaGraph, sm: &SimilarityMatrix) -> TopicMeasures {
    let idx: Vec<usize> = topic
        .predicates
        .iter()
        .filter_map(|p| sm.index_of(p))
        .collect();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            sum += sm.get(i, j);
            pairs += 1;
        }
    }
    let mean_similarity = if pairs == 0 { 1.0 } else { sum / pairs as f64 };
    let sub = g.induced(topic.predicates.iter().map(String::as_str));
    TopicMeasures {
        mean_similarity,
        mean_sw: topic.mean_sw.unwrap_or(0.0),
        density: schema_stats(&sub).map_or(0.0, |s| s.density),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionRanks {
    pub top_concepts: usize,
    pub top_predicates: usize,
    pub similarity: usize,
    pub silhouette_width: usize,
    pub density: usize,
}

impl CriterionRanks {
    pub fn mean(&self) -> f64 {
        (self.top_concepts
            + self.top_predicates
            + self.similarity
            + self.silhouette_width
            + self.density) as f64
            / 5.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TopicRankRow {
    pub topic_id: TopicId,
    pub ranks: CriterionRanks,
    pub overall: f64,
    pub final_position: usize,
    pub measures: TopicMeasures,
    /// Members in the global Top-k predicate list.
    pub top_predicate_count: usize,
    /// Top-k concepts credited to this topic.
    pub top_concept_count: usize,
}

/// Competition ranking ("1224"): higher scores rank better, equal scores
/// share the better rank.
pub fn competition_ranks<T, F>(scores: &[T], cmp: F) -> Vec<usize>
where
    F: Fn(&T, &T) -> Ordering,
{
    scores
        .iter()
        .map(|s| {
            1 + scores
                .iter()
                .filter(|o| cmp(o, s) == Ordering::Greater)
                .count()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankingReport {
    pub rows: Vec<TopicRankRow>,
    pub top_predicates: TopKList,
    pub top_concepts: TopKList,
}

/// Ranks leaf topics on five criteria and orders them by the mean rank; ties
/// go to the better similarity rank, then the topic id.
pub fn rank_topics(
    leaves: &[&TopicNode],
    g: &SchemaGraph,
    sm: &SimilarityMatrix,
    idx: &DegreeIndex,
) -> RankingReport {
    let mut leaves: Vec<&TopicNode> = leaves.to_vec();
    leaves.sort_by_key(|l| l.id);
    let top_p = top_predicates(idx, TOP_K, &leaves);
    let top_c = top_concepts(idx, TOP_K, g, &leaves);

    let credit = |list: &TopKList, id: TopicId| -> (usize, usize) {
        list.entries
            .iter()
            .filter(|e| e.topic == Some(id))
            .fold((0, 0), |(n, s), e| (n + 1, s + e.score))
    };
    let pred_scores: Vec<(usize, usize)> = leaves
        .iter()
        .map(|l| {
            let in_list = l
                .predicates
                .iter()
                .filter(|p| top_p.entries.iter().any(|e| &e.iri == *p))
                .count();
            (in_list, l.predicates.iter().map(|p| idx.pio(p)).sum())
        })
        .collect();
    let concept_scores: Vec<(usize, usize)> = leaves.iter().map(|l| credit(&top_c, l.id)).collect();
    let measures: Vec<TopicMeasures> = leaves.iter().map(|l| topic_measures(l, g, sm)).collect();

    let r_pred = competition_ranks(&pred_scores, Ord::cmp);
    let r_conc = competition_ranks(&concept_scores, Ord::cmp);
    let by = |f: fn(&TopicMeasures) -> f64| {
        competition_ranks(&measures, move |a, b| f(a).total_cmp(&f(b)))
    };
    let r_sim = by(|m| m.mean_similarity);
    let r_sw = by(|m| m.mean_sw);
    let r_den = by(|m| m.density);

    let mut rows: Vec<TopicRankRow> = leaves
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let ranks = CriterionRanks {
                top_concepts: r_conc[i],
                top_predicates: r_pred[i],
                similarity: r_sim[i],
                silhouette_width: r_sw[i],
                density: r_den[i],
            };
            TopicRankRow {
                topic_id: l.id,
                overall: ranks.mean(),
                ranks,
                final_position: 0,
                measures: measures[i],
                top_predicate_count: pred_scores[i].0,
                top_concept_count: concept_scores[i].0,
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.overall
            .total_cmp(&b.overall)
            .then(a.ranks.similarity.cmp(&b.ranks.similarity))
            .then(a.topic_id.cmp(&b.topic_id))
    });
    for (pos, row) in rows.iter_mut().enumerate() {
        row.final_position = pos + 1;
    }
    RankingReport {
        rows,
        top_predicates: top_p,
        top_concepts: top_c,
    }
}

pub const RANK_TSV_HEADER: &str =
    "topicId\ttopConcepts\ttopPredicates\tsimilarity\tsilhouetteWidth\tdensity\toverall\tfinalPosition";

/// Rank table, one row per leaf in final order.
pub fn ranks_to_tsv(rows: &[TopicRankRow]) -> String {
    let mut out = String::from(RANK_TSV_HEADER);
    out.push('\n');
    for r in rows {
        let k = &r.ranks;
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.1}\t{}",
            r.topic_id,
            k.top_concepts,
            k.top_predicates,
            k.similarity,
            k.silhouette_width,
            k.density,
            r.overall,
            r.final_position
        );
    }
    out
}
