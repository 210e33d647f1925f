//! Query graphs built from topics, rendered as SPARQL and as a question.

mod parse;
mod render;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::clustering::{TopicId, TopicNode};
use crate::error::{Error, Result};
use crate::ingest::{local_name, SchemaGraph, PLAIN_LITERAL, RDF_NS, XSD_NS};
use crate::ranking::DegreeIndex;
use crate::similarity::SimilarityMatrix;

pub use parse::{parse_sparql, ParsedPattern, ParsedQuery, ParsedTerm};
pub use render::{render_nl, render_sparql};

pub const DEFAULT_BETA: f64 = 0.2;
pub const MAX_VARIANTS: usize = 10;
/// Extra thresholds tried when building query variants.
pub const BETA_SWEEP: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryVariable {
    pub name: String,
    /// Concept asserted with a type pattern; `None` leaves the variable untyped.
    pub concept: Option<String>,
    /// Variable bound by a label pattern, if any.
    pub label_var: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplePattern {
    pub subject: String,
    pub predicate: String,
    pub object: String,
    pub optional: bool,
}

impl TriplePattern {
    fn touches(&self, var: &str) -> bool {
        self.subject == var || self.object == var
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QueryGraph {
    pub variables: Vec<QueryVariable>,
    /// Predicate patterns between variables. Type and label patterns are
    /// implied by the variables.
    pub patterns: Vec<TriplePattern>,
    /// Projected variable names, in select order.
    pub projections: Vec<String>,
    pub source_topic: Option<TopicId>,
    /// Display labels for the concepts and predicates used.
    pub labels: BTreeMap<String, String>,
    /// Variable cloned by the share template.
    pub share_hub: Option<String>,
}

impl QueryGraph {
    pub fn variable(&self, name: &str) -> Option<&QueryVariable> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn label<'a>(&'a self, iri: &'a str) -> &'a str {
        self.labels
            .get(iri)
            .map(String::as_str)
            .unwrap_or_else(|| local_name(iri))
    }

    pub fn required(&self) -> impl Iterator<Item = &TriplePattern> {
        self.patterns.iter().filter(|p| !p.optional)
    }

    /// Distinct predicates in pattern order.
    pub fn predicates(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.patterns
            .iter()
            .map(|p| p.predicate.as_str())
            .filter(|p| seen.insert(*p))
            .collect()
    }

    /// Concepts of typed variables.
    pub fn concepts(&self) -> BTreeSet<&str> {
        self.variables
            .iter()
            .filter_map(|v| v.concept.as_deref())
            .collect()
    }

    /// Checks that patterns only use declared variables, that projections
    /// resolve and that required patterns form one connected graph.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        let declared: BTreeSet<&str> = self.variables.iter().map(|v| v.name.as_str()).collect();
        if declared.len() != self.variables.len() {
            return bad("duplicate variable name".into());
        }
        let mut label_vars = BTreeSet::new();
        for v in &self.variables {
            if let Some(l) = &v.label_var {
                if declared.contains(l.as_str()) || !label_vars.insert(l.as_str()) {
                    return bad(format!("label variable ?{l} clashes with another variable"));
                }
            }
        }
        for p in &self.patterns {
            for v in [&p.subject, &p.object] {
                if !declared.contains(v.as_str()) {
                    return bad(format!("pattern uses undeclared ?{v}"));
                }
            }
        }
        for name in &self.projections {
            let bound = label_vars.contains(name.as_str())
                || self.patterns.iter().any(|p| p.touches(name))
                || self
                    .variable(name)
                    .is_some_and(|v| v.concept.is_some() || v.label_var.is_some());
            if !bound {
                return bad(format!("projected ?{name} does not occur in the query"));
            }
        }
        if self.required_components().len() > 1 {
            return bad("required patterns are not connected".into());
        }
        Ok(())
    }

    /// Variable sets connected through required patterns. Variables that
    /// only occur in optional patterns are ignored.
    fn required_components(&self) -> Vec<BTreeSet<String>> {
        let mut comps: Vec<BTreeSet<String>> = Vec::new();
        for p in self.required() {
            let hit: Vec<usize> = comps
                .iter()
                .enumerate()
                .filter(|(_, c)| c.contains(&p.subject) || c.contains(&p.object))
                .map(|(i, _)| i)
                .collect();
            let mut merged: BTreeSet<String> = [p.subject.clone(), p.object.clone()].into();
            for &i in hit.iter().rev() {
                merged.extend(comps.remove(i));
            }
            comps.push(merged);
        }
        comps
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedQuery {
    pub topic_id: Option<TopicId>,
    pub nl_question: String,
    pub sparql: String,
    pub beta: f64,
    pub share_template: bool,
    pub graph: QueryGraph,
}

/// Member predicate with the highest pio; ties go to the smaller IRI.
pub fn seed_predicate<'a>(topic: &'a TopicNode, idx: &DegreeIndex) -> Result<&'a str> {
    topic
        .predicates
        .iter()
        .max_by(|a, b| idx.pio(a).cmp(&idx.pio(b)).then_with(|| b.cmp(a)))
        .map(String::as_str)
        .ok_or_else(|| Error::InvalidArgument(format!("topic {} has no predicates", topic.id)))
}

/// Breadth-first expansion from `seed` over `members`.
///
/// Each expanded predicate looks at the unvisited members in descending
/// similarity (ties by IRI) and admits them while `sm > beta`; the first one
/// at or below `beta` ends that predicate's turn. Returns predicates in visit
/// order, seed first.
pub fn expand(
    members: &[String],
    sm: &SimilarityMatrix,
    beta: f64,
    seed: &str,
) -> Result<Vec<String>> {
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidArgument(format!(
            "beta = {beta} outside [0, 1)"
        )));
    }
    if !members.iter().any(|m| m == seed) {
        return Err(Error::InvalidArgument(format!(
            "seed {seed} is not a topic member"
        )));
    }
    let index = |p: &str| {
        sm.index_of(p)
            .ok_or_else(|| Error::UnknownPredicate(p.to_string()))
    };
    let mut visited = vec![seed.to_string()];
    let mut queue = VecDeque::from([seed.to_string()]);
    while let Some(f) = queue.pop_front() {
        let fi = index(&f)?;
        let mut candidates: Vec<(f64, &String)> = Vec::new();
        for m in members {
            if !visited.contains(m) {
                candidates.push((sm.get(fi, index(m)?), m));
            }
        }
        candidates.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
        for (s, m) in candidates {
            if s <= beta {
                break;
            }
            visited.push(m.clone());
            queue.push_back(m.clone());
        }
    }
    Ok(visited)
}

fn is_literal_range(concept: &str) -> bool {
    concept == PLAIN_LITERAL || concept.starts_with(XSD_NS) || concept.starts_with(RDF_NS)
}

/// Variable name stem from a display label.
fn var_stem(label: &str) -> String {
    let stem: String = label
        .chars()
        .filter(char::is_ascii_alphanumeric)
        .flat_map(|c| c.to_lowercase())
        .collect();
    if stem.is_empty() || stem.starts_with(|c: char| c.is_ascii_digit()) {
        format!("v{stem}")
    } else {
        stem
    }
}

fn fresh(stem: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = stem.to_string();
    let mut n = 2;
    while taken.contains(&name) {
        name = format!("{stem}{n}");
        n += 1;
    }
    taken.insert(name.clone());
    name
}

/// Result of [`bind_variables`] with notes on anything left out.
#[derive(Debug, Clone, PartialEq)]
pub struct Binding {
    pub graph: QueryGraph,
    pub diagnostics: Vec<String>,
}

/// Binds each predicate to its most frequent schema triple and shares one
/// variable per concept. Literal ranges get their own untyped variable that
/// is projected as is. If the patterns fall apart into several components,
/// only the one with the highest summed pio is kept.
pub fn bind_variables(predicates: &[String], g: &SchemaGraph, idx: &DegreeIndex) -> Binding {
    let mut diagnostics = Vec::new();
    let mut taken = BTreeSet::new();
    let mut concept_var: BTreeMap<String, String> = BTreeMap::new();
    let mut variables: Vec<QueryVariable> = Vec::new();
    let mut literal_vars = BTreeSet::new();
    let mut patterns = Vec::new();
    let mut labels = BTreeMap::new();

    let mut concept_variable =
        |concept: &str, variables: &mut Vec<QueryVariable>, taken: &mut BTreeSet<String>| {
            if let Some(v) = concept_var.get(concept) {
                return v.clone();
            }
            let name = fresh(&var_stem(g.label(concept)), taken);
            concept_var.insert(concept.to_string(), name.clone());
            variables.push(QueryVariable {
                name: name.clone(),
                concept: Some(concept.to_string()),
                label_var: None,
            });
            name
        };

    for p in predicates {
        let best = g
            .triples_of(p)
            .fold(None::<(&str, &str, u64)>, |best, t| match best {
                Some(b) if b.2 >= t.2 => Some(b),
                _ => Some(t),
            });
        let Some((domain, range, _)) = best else {
            diagnostics.push(format!("{p}: no schema triple, skipped"));
            continue;
        };
        labels.insert(p.clone(), g.label(p).to_string());
        labels.insert(domain.to_string(), g.label(domain).to_string());
        let subject = concept_variable(domain, &mut variables, &mut taken);
        let object = if is_literal_range(range) {
            let name = fresh(&var_stem(g.label(p)), &mut taken);
            variables.push(QueryVariable {
                name: name.clone(),
                concept: None,
                label_var: None,
            });
            literal_vars.insert(name.clone());
            name
        } else if range == domain {
            // a self loop needs a second variable of the same type
            let name = fresh(&var_stem(g.label(range)), &mut taken);
            variables.push(QueryVariable {
                name: name.clone(),
                concept: Some(range.to_string()),
                label_var: None,
            });
            name
        } else {
            labels.insert(range.to_string(), g.label(range).to_string());
            concept_variable(range, &mut variables, &mut taken)
        };
        patterns.push(TriplePattern {
            subject,
            predicate: p.clone(),
            object,
            optional: false,
        });
    }

    let mut qg = QueryGraph {
        variables,
        patterns,
        labels,
        ..QueryGraph::default()
    };
    let comps = qg.required_components();
    if comps.len() > 1 {
        let weight = |c: &BTreeSet<String>| -> usize {
            qg.patterns
                .iter()
                .filter(|p| c.contains(&p.subject))
                .map(|p| idx.pio(&p.predicate))
                .sum()
        };
        // highest pio wins, the component met first on ties
        let first_seen =
            |c: &BTreeSet<String>| qg.patterns.iter().position(|p| c.contains(&p.subject));
        let keep = comps
            .iter()
            .max_by(|a, b| {
                weight(a)
                    .cmp(&weight(b))
                    .then(first_seen(b).cmp(&first_seen(a)))
            })
            .cloned()
            .expect("several components");
        for p in qg.patterns.iter().filter(|p| !keep.contains(&p.subject)) {
            diagnostics.push(format!(
                "{}: disconnected from the seed component, dropped",
                p.predicate
            ));
        }
        qg.patterns.retain(|p| keep.contains(&p.subject));
        qg.variables.retain(|v| keep.contains(&v.name));
    }
    // label variables and projections follow first appearance in patterns
    let mut order: Vec<String> = Vec::new();
    for p in &qg.patterns {
        for v in [&p.subject, &p.object] {
            if !order.contains(v) {
                order.push(v.clone());
            }
        }
    }
    for name in order {
        if literal_vars.contains(&name) {
            qg.projections.push(name);
            continue;
        }
        let label = fresh(&format!("{name}label"), &mut taken);
        if let Some(v) = qg.variables.iter_mut().find(|v| v.name == name) {
            v.label_var = Some(label.clone());
        }
        qg.projections.push(label);
    }
    let used: BTreeSet<String> = qg
        .predicates()
        .into_iter()
        .chain(qg.concepts())
        .map(str::to_string)
        .collect();
    qg.labels.retain(|k, _| used.contains(k));
    Binding {
        graph: qg,
        diagnostics,
    }
}

/// The variable shared by the most required patterns (at least two, whose
/// other ends differ from it). Either role counts.
fn share_hub(qg: &QueryGraph) -> Option<&QueryVariable> {
    let degree = |v: &QueryVariable| {
        qg.required()
            .filter(|p| p.touches(&v.name) && p.subject != p.object)
            .count()
    };
    qg.variables
        .iter()
        .filter(|v| v.concept.is_some() && degree(v) >= 2)
        .fold(None, |best: Option<&QueryVariable>, v| match best {
            Some(b) if degree(b) >= degree(v) => Some(b),
            _ => Some(v),
        })
}

/// Clones the hub variable so two instances sharing the same neighbours can
/// be compared. Each hub pattern gets an optional copy on the clone. Returns
/// the graph unchanged when no variable qualifies.
pub fn apply_share_template(qg: &QueryGraph) -> QueryGraph {
    let Some(hub) = share_hub(qg) else {
        return qg.clone();
    };
    let mut out = qg.clone();
    let mut taken: BTreeSet<String> = qg
        .variables
        .iter()
        .flat_map(|v| std::iter::once(v.name.clone()).chain(v.label_var.clone()))
        .chain(qg.projections.iter().cloned())
        .collect();
    let clone = fresh(&format!("{}2", hub.name), &mut taken);
    let clone_label = hub
        .label_var
        .as_ref()
        .map(|_| fresh(&format!("{clone}label"), &mut taken));
    out.variables.push(QueryVariable {
        name: clone.clone(),
        concept: hub.concept.clone(),
        label_var: clone_label.clone(),
    });
    let mut patterns = Vec::new();
    for p in &qg.patterns {
        patterns.push(p.clone());
        if !p.optional && p.touches(&hub.name) && p.subject != p.object {
            let swap = |v: &String| {
                if *v == hub.name {
                    clone.clone()
                } else {
                    v.clone()
                }
            };
            patterns.push(TriplePattern {
                subject: swap(&p.subject),
                predicate: p.predicate.clone(),
                object: swap(&p.object),
                optional: true,
            });
        }
    }
    out.patterns = patterns;
    if let Some(l) = clone_label {
        let at = hub
            .label_var
            .as_ref()
            .and_then(|hl| out.projections.iter().position(|p| p == hl))
            .map_or(out.projections.len(), |i| i + 1);
        out.projections.insert(at, l);
    }
    out.share_hub = Some(hub.name.clone());
    out
}

/// One query for `(beta, share)`; `None` when nothing could be bound.
pub fn generate_query(
    topic: &TopicNode,
    g: &SchemaGraph,
    sm: &SimilarityMatrix,
    idx: &DegreeIndex,
    beta: f64,
    share: bool,
) -> Result<Option<GeneratedQuery>> {
    let seed = seed_predicate(topic, idx)?;
    let preds = expand(&topic.predicates, sm, beta, seed)?;
    let mut qg = bind_variables(&preds, g, idx).graph;
    if qg.patterns.is_empty() {
        return Ok(None);
    }
    qg.source_topic = Some(topic.id);
    if share {
        qg = apply_share_template(&qg);
    }
    Ok(Some(GeneratedQuery {
        topic_id: Some(topic.id),
        nl_question: render_nl(&qg),
        sparql: render_sparql(&qg),
        beta,
        share_template: qg.share_hub.is_some(),
        graph: qg,
    }))
}

/// Up to [`MAX_VARIANTS`] distinct queries for a topic: the given `beta`
/// first, then the sweep thresholds, each without and with the share
/// template. Duplicates by SPARQL text are dropped.
pub fn generate_queries(
    topic: &TopicNode,
    g: &SchemaGraph,
    sm: &SimilarityMatrix,
    idx: &DegreeIndex,
    beta: f64,
) -> Result<Vec<GeneratedQuery>> {
    let mut out: Vec<GeneratedQuery> = Vec::new();
    let betas = std::iter::once(beta).chain(BETA_SWEEP.into_iter().filter(|b| *b != beta));
    for b in betas {
        for share in [false, true] {
            if out.len() == MAX_VARIANTS {
                return Ok(out);
            }
            if let Some(q) = generate_query(topic, g, sm, idx, b, share)? {
                if !out.iter().any(|o| o.sparql == q.sparql) {
                    out.push(q);
                }
            }
        }
    }
    Ok(out)
}
