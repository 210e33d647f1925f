//! Schema-level view of an ontology: a bipartite graph of concepts (classes)
//! and the predicates linking a domain concept to a range concept.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::store::TripleStore;
use super::term::{local_name, Term, OWL_NS, RDFS_LABEL, RDFS_NS, RDF_NS, XSD_NS};
use crate::error::{Error, Result};

/// Namespaces whose predicates are treated as built-in vocabulary and excluded
/// from the schema graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamespaceFilter {
    prefixes: Vec<String>,
}

impl Default for NamespaceFilter {
    fn default() -> Self {
        NamespaceFilter::new([RDF_NS, RDFS_NS, OWL_NS, XSD_NS])
    }
}

impl NamespaceFilter {
    pub fn new<I, S>(prefixes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        NamespaceFilter {
            prefixes: prefixes.into_iter().map(Into::into).collect(),
        }
    }

    pub fn is_builtin(&self, iri: &str) -> bool {
        self.prefixes.iter().any(|p| iri.starts_with(p.as_str()))
    }

    pub fn prefixes(&self) -> &[String] {
        &self.prefixes
    }
}

/// Tally of instance triples that did not contribute to the schema.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractDiagnostics {
    pub instance_triples: usize,
    pub builtin_filtered: usize,
    pub skipped_untyped: usize,
    pub contributing: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(into = "SchemaRecord", from = "SchemaRecord")]
pub struct SchemaGraph {
    concepts: BTreeSet<String>,
    predicates: BTreeSet<String>,
    domain_edges: BTreeMap<(String, String), u64>,
    range_edges: BTreeMap<(String, String), u64>,
    schema_triples: BTreeMap<(String, String, String), u64>,
    labels: BTreeMap<String, String>,
}

impl SchemaGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(domain, predicate, range, count)` rows.
    pub fn from_triples<I, S>(rows: I) -> Self
    where
        I: IntoIterator<Item = (S, S, S, u64)>,
        S: Into<String>,
    {
        let mut g = SchemaGraph::new();
        for (d, p, r, n) in rows {
            g.add_triple(d, p, r, n);
        }
        g
    }

    /// Records `count` occurrences of the schema triple. A zero count only
    /// declares the predicate.
    pub fn add_triple(
        &mut self,
        domain: impl Into<String>,
        predicate: impl Into<String>,
        range: impl Into<String>,
        count: u64,
    ) {
        let (d, p, r) = (domain.into(), predicate.into(), range.into());
        self.predicates.insert(p.clone());
        if count == 0 {
            return;
        }
        self.concepts.insert(d.clone());
        self.concepts.insert(r.clone());
        *self.domain_edges.entry((d.clone(), p.clone())).or_default() += count;
        *self.range_edges.entry((p.clone(), r.clone())).or_default() += count;
        *self.schema_triples.entry((d, p, r)).or_default() += count;
    }

    pub fn declare_predicate(&mut self, predicate: impl Into<String>) {
        self.predicates.insert(predicate.into());
    }

    pub fn set_label(&mut self, iri: impl Into<String>, label: impl Into<String>) {
        self.labels.insert(iri.into(), label.into());
    }

    pub fn concepts(&self) -> &BTreeSet<String> {
        &self.concepts
    }

    pub fn predicates(&self) -> &BTreeSet<String> {
        &self.predicates
    }

    pub fn domain_edges(&self) -> &BTreeMap<(String, String), u64> {
        &self.domain_edges
    }

    pub fn range_edges(&self) -> &BTreeMap<(String, String), u64> {
        &self.range_edges
    }

    pub fn schema_triples(&self) -> &BTreeMap<(String, String, String), u64> {
        &self.schema_triples
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    /// Display label for an IRI, falling back to its local name.
    pub fn label<'a>(&'a self, iri: &'a str) -> &'a str {
        self.labels
            .get(iri)
            .map(String::as_str)
            .unwrap_or_else(|| local_name(iri))
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty() && self.concepts.is_empty()
    }

    /// Schema triples of one predicate as `(domain, range, count)`.
    pub fn triples_of<'a>(
        &'a self,
        predicate: &'a str,
    ) -> impl Iterator<Item = (&'a str, &'a str, u64)> + 'a {
        self.schema_triples
            .iter()
            .filter(move |((_, p, _), _)| p == predicate)
            .map(|((d, _, r), &n)| (d.as_str(), r.as_str(), n))
    }

    /// Subgraph spanned by `predicates` and the concepts incident to them.
    pub fn induced<'a, I>(&self, predicates: I) -> SchemaGraph
    where
        I: IntoIterator<Item = &'a str>,
    {
        let keep: BTreeSet<&str> = predicates.into_iter().collect();
        let mut g = SchemaGraph::new();
        for p in &self.predicates {
            if keep.contains(p.as_str()) {
                g.declare_predicate(p.clone());
            }
        }
        for ((d, p, r), &n) in &self.schema_triples {
            if keep.contains(p.as_str()) {
                g.add_triple(d.clone(), p.clone(), r.clone(), n);
            }
        }
        for (iri, label) in &self.labels {
            if g.concepts.contains(iri) || g.predicates.contains(iri) {
                g.labels.insert(iri.clone(), label.clone());
            }
        }
        g
    }

    /// Reads the tab-separated schema format:
    /// `domain <TAB> predicate <TAB> range <TAB> count`, `#` comments.
    /// Rows whose predicate falls in `filter` are dropped.
    pub fn read_tsv<R: BufRead>(input: R, filter: &NamespaceFilter) -> Result<SchemaGraph> {
        let mut g = SchemaGraph::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| match e.kind() {
                std::io::ErrorKind::InvalidData => Error::Encoding { line: line_no },
                _ => Error::Io(e),
            })?;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            let bad = |column: usize, message: &str| Error::Parse {
                line: line_no,
                column,
                message: message.to_string(),
            };
            if fields.len() != 4 {
                return Err(bad(1, "expected 4 tab-separated fields"));
            }
            let count: u64 = fields[3]
                .parse()
                .map_err(|_| bad(4, "count is not a non-negative integer"))?;
            let (d, p, r) = (fields[0], fields[1], fields[2]);
            if p.is_empty() {
                return Err(bad(2, "empty predicate"));
            }
            if count > 0 && (d.is_empty() || r.is_empty()) {
                return Err(bad(1, "empty concept on a counted row"));
            }
            if filter.is_builtin(p) {
                continue;
            }
            g.add_triple(d, p, r, count);
        }
        Ok(g)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("# domain\tpredicate\trange\tcount\n");
        let with_triples: BTreeSet<&str> = self
            .schema_triples
            .keys()
            .map(|(_, p, _)| p.as_str())
            .collect();
        for p in &self.predicates {
            if !with_triples.contains(p.as_str()) {
                let _ = writeln!(out, "\t{p}\t\t0");
            }
        }
        for ((d, p, r), n) in &self.schema_triples {
            let _ = writeln!(out, "{d}\t{p}\t{r}\t{n}");
        }
        out
    }
}

/// Projects instance triples onto class level.
///
/// Each triple `(s, p, o)` with a non-built-in predicate yields one schema
/// triple per pair in `types(s) × types(o)`; literal objects use their datatype
/// (or the plain-literal pseudo-concept) as range. Triples with an untyped
/// subject or object are skipped and counted. `rdfs:label` values populate
/// the label map.
pub fn extract_schema(store: &TripleStore, filter: &NamespaceFilter) -> SchemaGraph {
    extract_schema_with_diagnostics(store, filter).0
}

pub fn extract_schema_with_diagnostics(
    store: &TripleStore,
    filter: &NamespaceFilter,
) -> (SchemaGraph, ExtractDiagnostics) {
    let mut g = SchemaGraph::new();
    let mut diag = ExtractDiagnostics {
        instance_triples: store.len(),
        ..Default::default()
    };
    for t in store.triples() {
        if t.predicate == RDFS_LABEL {
            if let (Some(iri), Term::Literal { value, .. }) = (t.subject.as_iri(), &t.object) {
                match g.labels.get(iri) {
                    Some(existing) if existing <= value => {}
                    _ => {
                        g.labels.insert(iri.to_string(), value.clone());
                    }
                }
            }
        }
        if filter.is_builtin(&t.predicate) {
            diag.builtin_filtered += 1;
            continue;
        }
        let Some(domains) = store.types_of(&t.subject) else {
            diag.skipped_untyped += 1;
            continue;
        };
        let literal_range;
        let ranges: Vec<&str> = match t.object.literal_concept() {
            Some(c) => {
                literal_range = [c];
                literal_range.to_vec()
            }
            None => match store.types_of(&t.object) {
                Some(types) => types.iter().map(String::as_str).collect(),
                None => {
                    diag.skipped_untyped += 1;
                    continue;
                }
            },
        };
        diag.contributing += 1;
        for d in domains {
            for r in &ranges {
                g.add_triple(d.as_str(), t.predicate.as_str(), *r, 1);
            }
        }
    }
    // labels only for IRIs that survive into the schema
    g.labels
        .retain(|iri, _| g.concepts.contains(iri) || g.predicates.contains(iri));
    (g, diag)
}

#[derive(Serialize, Deserialize)]
struct SchemaRecord {
    predicates: Vec<String>,
    triples: Vec<(String, String, String, u64)>,
    labels: BTreeMap<String, String>,
}

impl From<SchemaGraph> for SchemaRecord {
    fn from(g: SchemaGraph) -> Self {
        SchemaRecord {
            predicates: g.predicates.into_iter().collect(),
            triples: g
                .schema_triples
                .into_iter()
                .map(|((d, p, r), n)| (d, p, r, n))
                .collect(),
            labels: g.labels,
        }
    }
}

impl From<SchemaRecord> for SchemaGraph {
    fn from(rec: SchemaRecord) -> Self {
        let mut g = SchemaGraph::from_triples(rec.triples);
        for p in rec.predicates {
            g.declare_predicate(p);
        }
        g.labels = rec.labels;
        g
    }
}
