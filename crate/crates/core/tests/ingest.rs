//! Schema extraction on small files whose counts were tallied by hand.

use std::path::{Path, PathBuf};

use ontotopic::ingest::{schema_stats, SchemaGraph, PLAIN_LITERAL, XSD_NS};
use ontotopic::ranking::io_degrees;
use ontotopic::snapshot::load_schema;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn count(g: &SchemaGraph, d: &str, p: &str, r: &str) -> u64 {
    g.schema_triples()
        .get(&(d.to_string(), p.to_string(), r.to_string()))
        .copied()
        .unwrap_or(0)
}

#[test]
fn tiny_file() {
    let loaded = load_schema(&data("tiny.nt")).unwrap();
    let d = loaded.diagnostics.unwrap();
    // 11 triples: 6 type/label, 1 with an untyped object, 4 contributing
    assert_eq!(d.instance_triples, 11);
    assert_eq!(d.builtin_filtered, 6);
    assert_eq!(d.skipped_untyped, 1);
    assert_eq!(d.contributing, 4);

    let g = &loaded.schema;
    let ex = |s: &str| format!("http://ex.org/{s}");
    let decimal = format!("{XSD_NS}decimal");
    // t1 carries two types, so each target triple fans out twice; the blank
    // node subject counts like any typed resource
    assert_eq!(count(g, &ex("Drug"), &ex("target"), &ex("Target")), 2);
    assert_eq!(count(g, &ex("Drug"), &ex("target"), &ex("Protein")), 2);
    assert_eq!(count(g, &ex("Drug"), &ex("mass"), &decimal), 1);
    assert_eq!(count(g, &ex("Drug"), &ex("note"), PLAIN_LITERAL), 1);
    assert_eq!(g.schema_triples().len(), 4);
    assert_eq!(g.label(&ex("Drug")), "Drug class");
    assert!(!g.labels().contains_key(&ex("d1")));

    let s = schema_stats(g).unwrap();
    assert_eq!((s.concept_count, s.predicate_count, s.edge_sum), (5, 3, 7));
    assert!((s.density - 14.0 / 56.0).abs() < 1e-15);
}

#[test]
fn forty_triple_drugbank_excerpt() {
    let loaded = load_schema(&data("drugbank_40.nt")).unwrap();
    assert_eq!(loaded.dataset_id, "drugbank_40");
    let d = loaded.diagnostics.unwrap();
    assert_eq!(d.instance_triples, 40);
    // 11 type and 8 label triples
    assert_eq!(d.builtin_filtered, 19);
    // x-pubchem-substance and reference point at untyped resources
    assert_eq!(d.skipped_untyped, 2);
    assert_eq!(d.contributing, 19);

    let g = &loaded.schema;
    let v = |s: &str| format!("http://bio2rdf.org/drugbank_vocabulary:{s}");
    let uniprot = "http://bio2rdf.org/uniprot_vocabulary:Resource";
    let decimal = format!("{XSD_NS}decimal");
    let expected = [
        (v("Drug"), v("target"), v("Target"), 5),
        (v("Target-Relation"), v("drug"), v("Drug"), 2),
        (v("Target-Relation"), v("target"), v("Target"), 2),
        (v("Enzyme-Relation"), v("drug"), v("Drug"), 1),
        (v("Enzyme-Relation"), v("enzyme"), v("Enzyme"), 1),
        (v("Drug"), v("enzyme"), v("Enzyme"), 1),
        (v("Target"), v("x-uniprot"), uniprot.to_string(), 2),
        (v("Enzyme"), v("x-uniprot"), uniprot.to_string(), 1),
        (
            v("Target-Relation"),
            v("action"),
            PLAIN_LITERAL.to_string(),
            2,
        ),
        (v("Drug"), v("mass"), decimal, 2),
    ];
    for (dom, p, r, n) in &expected {
        assert_eq!(count(g, dom, p, r), *n, "{dom} {p} {r}");
    }
    assert_eq!(g.schema_triples().len(), expected.len());
    assert!(!g.predicates().contains(&v("reference")));

    let s = schema_stats(g).unwrap();
    // 10 domain pairs + 6 range pairs over 8 concepts and 6 predicates
    assert_eq!((s.concept_count, s.predicate_count, s.edge_sum), (8, 6, 16));
    assert!((s.density - 32.0 / 182.0).abs() < 1e-15);

    let idx = io_degrees(g);
    for (p, pio) in [
        ("target", 3),
        ("drug", 3),
        ("enzyme", 3),
        ("x-uniprot", 3),
        ("action", 2),
        ("mass", 2),
    ] {
        assert_eq!(idx.pio(&v(p)), pio, "{p}");
    }
    assert_eq!(idx.cio(&v("Drug")), 4);
    assert_eq!(idx.cio(&v("Target-Relation")), 3);
    assert_eq!(g.label(&v("Target")), "Target");
}

#[test]
fn schema_tsv_round_trip() {
    let loaded = load_schema(&data("drugbank_40.nt")).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("schema.tsv");
    std::fs::write(&path, loaded.schema.to_tsv()).unwrap();
    let back = load_schema(&path).unwrap();
    assert!(back.diagnostics.is_none());
    assert_eq!(back.schema.schema_triples(), loaded.schema.schema_triples());
    assert_eq!(back.schema.predicates(), loaded.schema.predicates());
}

#[test]
fn unsupported_extension() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("x.ttl");
    std::fs::write(&path, "").unwrap();
    assert!(load_schema(&path).is_err());
}
