//! Parsing of RDF input and extraction of the schema graph.

mod ntriples;
mod schema;
mod stats;
mod store;
mod term;

pub use ntriples::{parse_line, parse_ntriples, parse_ntriples_str, write_ntriples};
pub use schema::{
    extract_schema, extract_schema_with_diagnostics, ExtractDiagnostics, NamespaceFilter,
    SchemaGraph,
};
pub use stats::{density, schema_stats, StatsReport};
pub use store::TripleStore;
pub use term::{
    local_name, Term, Triple, OWL_NS, PLAIN_LITERAL, RDFS_LABEL, RDFS_NS, RDF_NS, RDF_TYPE, XSD_NS,
};
