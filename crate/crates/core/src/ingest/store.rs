use std::collections::{BTreeMap, BTreeSet};

use super::term::{Term, Triple, RDF_TYPE};

/// Instance-level triples with a predicate index and an `rdf:type` index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TripleStore {
    triples: Vec<Triple>,
    by_predicate: BTreeMap<String, Vec<usize>>,
    type_of: BTreeMap<Term, BTreeSet<String>>,
}

impl TripleStore {
    pub fn new(triples: Vec<Triple>) -> Self {
        let mut by_predicate: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut type_of: BTreeMap<Term, BTreeSet<String>> = BTreeMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_predicate.entry(t.predicate.clone()).or_default().push(i);
            if t.predicate == RDF_TYPE {
                if let Some(class) = t.object.as_iri() {
                    type_of
                        .entry(t.subject.clone())
                        .or_default()
                        .insert(class.to_string());
                }
            }
        }
        TripleStore {
            triples,
            by_predicate,
            type_of,
        }
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn with_predicate<'a>(&'a self, predicate: &str) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_predicate
            .get(predicate)
            .into_iter()
            .flatten()
            .map(move |&i| &self.triples[i])
    }

    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.by_predicate.keys().map(String::as_str)
    }

    /// Classes asserted for `node` through `rdf:type`.
    pub fn types_of(&self, node: &Term) -> Option<&BTreeSet<String>> {
        self.type_of.get(node)
    }

    /// Number of distinct typed nodes.
    pub fn typed_node_count(&self) -> usize {
        self.type_of.len()
    }

    pub fn into_triples(self) -> Vec<Triple> {
        self.triples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexes_are_consistent_with_rebuild() {
        let triples = vec![
            Triple::new(Term::iri("d1"), RDF_TYPE, Term::iri("Drug")),
            Triple::new(Term::iri("d1"), RDF_TYPE, Term::iri("Compound")),
            Triple::new(Term::iri("d1"), "target", Term::iri("t1")),
            Triple::new(Term::iri("d1"), RDF_TYPE, Term::literal("not a class")),
        ];
        let store = TripleStore::new(triples.clone());
        let rebuilt = TripleStore::new(store.clone().into_triples());
        assert_eq!(store, rebuilt);
        assert_eq!(store.with_predicate(RDF_TYPE).count(), 3);
        assert_eq!(store.with_predicate("target").count(), 1);
        let types = store.types_of(&Term::iri("d1")).unwrap();
        assert_eq!(types.len(), 2);
        assert!(store.types_of(&Term::iri("t1")).is_none());
    }
}
