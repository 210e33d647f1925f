//! Command-line driver and HTTP service for ontology topic analysis.

pub mod api;
pub mod commands;
