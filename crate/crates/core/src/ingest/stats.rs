//! Size and density statistics for a schema graph.
//!
//! Density treats concepts and predicates as the vertex set `V = |C| + |P|`
//! and the distinct domain and range pairs as edges:
//!
//! ```text
//! D = 2|E| / (|V| (|V| - 1))
//! ```
//!
//! For the Bio2RDF DrugBank schema (|E| = 519, |C| = 93, |P| = 63) this gives
//! 0.0429, in line with the 0.043 usually reported for that ontology. The
//! variant denominator `(|C|+|P|)(|C|-1)(|P|-1)` that sometimes circulates
//! evaluates to about 0.00117 on the same counts and does not reproduce the
//! reported value, so it is not offered here.

use serde::{Deserialize, Serialize};

use super::schema::SchemaGraph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub concept_count: usize,
    pub predicate_count: usize,
    /// Distinct domain pairs plus distinct range pairs.
    pub edge_sum: usize,
    pub schema_triple_count: usize,
    pub density: f64,
}

pub fn schema_stats(g: &SchemaGraph) -> Result<StatsReport> {
    let concept_count = g.concepts().len();
    let predicate_count = g.predicates().len();
    let edge_sum = g.domain_edges().len() + g.range_edges().len();
    Ok(StatsReport {
        concept_count,
        predicate_count,
        edge_sum,
        schema_triple_count: g.schema_triples().len(),
        density: density(edge_sum, concept_count, predicate_count)?,
    })
}

pub fn density(edges: usize, concepts: usize, predicates: usize) -> Result<f64> {
    let v = concepts + predicates;
    if v < 2 {
        return Err(Error::DegenerateGraph { vertices: v });
    }
    Ok(2.0 * edges as f64 / (v as f64 * (v - 1) as f64))
}
