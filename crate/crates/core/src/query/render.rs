use std::fmt::Write as _;

use super::QueryGraph;
use crate::ingest::{RDFS_LABEL, RDF_TYPE};

/// SPARQL text: type patterns, required patterns, optional patterns, then
/// label patterns in projection order.
pub fn render_sparql(qg: &QueryGraph) -> String {
    let mut out = String::from("select distinct");
    for p in &qg.projections {
        let _ = write!(out, " ?{p}");
    }
    out.push_str(" where {\n");
    for v in &qg.variables {
        if let Some(c) = &v.concept {
            let _ = writeln!(out, "  ?{} <{RDF_TYPE}> <{c}> .", v.name);
        }
    }
    for p in qg.required() {
        let _ = writeln!(out, "  ?{} <{}> ?{} .", p.subject, p.predicate, p.object);
    }
    for p in qg.patterns.iter().filter(|p| p.optional) {
        let _ = writeln!(
            out,
            "  Optional {{ ?{} <{}> ?{} }} .",
            p.subject, p.predicate, p.object
        );
    }
    let owner = |label: &str| {
        qg.variables
            .iter()
            .find(|v| v.label_var.as_deref() == Some(label))
    };
    let mut rest: Vec<(&str, &str)> = qg
        .variables
        .iter()
        .filter_map(|v| Some((v.name.as_str(), v.label_var.as_deref()?)))
        .filter(|(_, l)| !qg.projections.iter().any(|p| p == l))
        .collect();
    rest.sort_unstable();
    let projected = qg
        .projections
        .iter()
        .filter_map(|p| owner(p).map(|v| (v.name.as_str(), p.as_str())));
    for (var, label) in projected.chain(rest) {
        let _ = writeln!(out, "  ?{var} <{RDFS_LABEL}> ?{label} .");
    }
    out.push_str("}\n");
    out
}

fn join_list(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

/// Template question for a query graph.
pub fn render_nl(qg: &QueryGraph) -> String {
    let var_label = |name: &str| -> String {
        match qg.variable(name).and_then(|v| v.concept.as_deref()) {
            Some(c) => qg.label(c).to_string(),
            None => name.to_string(),
        }
    };
    if let Some(hub) = &qg.share_hub {
        let mut shared: Vec<String> = Vec::new();
        let mut as_subject = false;
        for p in qg.required() {
            if !p.touches(hub) || p.subject == p.object {
                continue;
            }
            as_subject |= &p.subject == hub;
            let other = if &p.subject == hub {
                &p.object
            } else {
                &p.subject
            };
            let item = match qg.variable(other).and_then(|v| v.concept.as_deref()) {
                Some(c) => qg.label(c),
                None => qg.label(&p.predicate),
            }
            .to_lowercase();
            if !shared.contains(&item) {
                shared.push(item);
            }
        }
        let kind = if as_subject { "same" } else { "common" };
        return format!(
            "For any two {}s which share the {kind} {}, what are all the possible combinations?",
            var_label(hub).to_lowercase(),
            join_list(&shared)
        );
    }
    let Some(first) = qg.required().next() else {
        return String::new();
    };
    let mut preds: Vec<String> = Vec::new();
    for p in qg.required() {
        let l = qg.label(&p.predicate).to_string();
        if !preds.contains(&l) {
            preds.push(l);
        }
    }
    format!(
        "For any {}, what are its {}?",
        var_label(&first.subject),
        join_list(&preds)
    )
}
