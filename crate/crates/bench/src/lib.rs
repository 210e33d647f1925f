//! Inputs shared by the benchmarks.

use std::path::Path;

use ontotopic::ingest::SchemaGraph;
use ontotopic::snapshot::load_schema;

/// Schema of the bundled DrugBank-style sample.
pub fn sample_schema() -> SchemaGraph {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/drugbank_sample.nt");
    load_schema(&path).expect("bundled fixture").schema
}
