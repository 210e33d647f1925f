//! SPARQL protocol client and result tables.

use std::fmt::Write as _;
use std::time::Duration;

use reqwest::Url;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ingest::{parse_line, Term};

pub const RESULTS_JSON: &str = "application/sparql-results+json";
/// Queries longer than this are sent with POST.
pub const GET_LIMIT: usize = 2048;
const SNIPPET_LEN: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// GET for short queries, POST above [`GET_LIMIT`] bytes.
    #[default]
    Auto,
    Get,
    Post,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointConfig {
    pub url: Url,
    pub timeout: Duration,
    pub method: Method,
    pub default_graph: Option<String>,
}

impl EndpointConfig {
    pub fn new(url: &str) -> Result<Self> {
        let url = Url::parse(url)
            .map_err(|e| Error::InvalidArgument(format!("endpoint url `{url}`: {e}")))?;
        if !matches!(url.scheme(), "http" | "https") {
            return Err(Error::InvalidArgument(format!(
                "endpoint url `{url}` is not http(s)"
            )));
        }
        Ok(EndpointConfig {
            url,
            timeout: Duration::from_secs(30),
            method: Method::Auto,
            default_graph: None,
        })
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Cell {
    Iri {
        value: String,
    },
    Literal {
        value: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        datatype: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lang: Option<String>,
    },
    Blank {
        value: String,
    },
    Unbound,
}

impl Cell {
    pub fn literal(value: impl Into<String>) -> Self {
        Cell::Literal {
            value: value.into(),
            datatype: None,
            lang: None,
        }
    }

    /// Plain text used by the aligned layout.
    pub fn text(&self) -> &str {
        match self {
            Cell::Iri { value } | Cell::Literal { value, .. } | Cell::Blank { value } => value,
            Cell::Unbound => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BindingTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Reads a SPARQL JSON results document.
pub fn parse_results_json(body: &str) -> Result<BindingTable> {
    let bad = |m: &str| Error::ResultsFormat(m.to_string());
    let doc: Value = serde_json::from_str(body).map_err(|e| Error::ResultsFormat(e.to_string()))?;
    let columns: Vec<String> = doc
        .pointer("/head/vars")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing head.vars"))?
        .iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| bad("non-string variable name"))
        })
        .collect::<Result<_>>()?;
    let bindings = doc
        .pointer("/results/bindings")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing results.bindings"))?;
    let mut rows = Vec::with_capacity(bindings.len());
    for b in bindings {
        let b = b
            .as_object()
            .ok_or_else(|| bad("binding is not an object"))?;
        let mut row = Vec::with_capacity(columns.len());
        for col in &columns {
            let Some(term) = b.get(col) else {
                row.push(Cell::Unbound);
                continue;
            };
            let field = |k: &str| term.get(k).and_then(Value::as_str).map(str::to_string);
            let value = field("value").ok_or_else(|| bad("term without value"))?;
            let cell = match field("type").as_deref() {
                Some("uri") => Cell::Iri { value },
                Some("bnode") => Cell::Blank { value },
                Some("literal" | "typed-literal") => Cell::Literal {
                    value,
                    datatype: field("datatype"),
                    lang: field("xml:lang"),
                },
                _ => return Err(bad("unknown term type")),
            };
            row.push(cell);
        }
        rows.push(row);
    }
    Ok(BindingTable { columns, rows })
}

fn snippet(body: &str) -> String {
    body.chars().take(SNIPPET_LEN).collect()
}

/// Runs a SELECT query and returns its bindings in server order.
pub fn execute(cfg: &EndpointConfig, sparql: &str) -> Result<BindingTable> {
    if sparql.trim().is_empty() {
        return Err(Error::InvalidArgument("empty query".into()));
    }
    let client = reqwest::blocking::Client::builder()
        .timeout(cfg.timeout)
        .build()
        .map_err(|e| Error::Transport(e.to_string()))?;
    let mut params: Vec<(&str, &str)> = vec![("query", sparql)];
    if let Some(g) = &cfg.default_graph {
        params.push(("default-graph-uri", g));
    }
    let post = match cfg.method {
        Method::Auto => sparql.len() > GET_LIMIT,
        Method::Get => false,
        Method::Post => true,
    };
    let request = if post {
        client.post(cfg.url.clone()).form(&params)
    } else {
        client.get(cfg.url.clone()).query(&params)
    };
    let response = request
        .header(reqwest::header::ACCEPT, RESULTS_JSON)
        .send()
        .map_err(|e| Error::Transport(e.to_string()))?;
    let status = response.status();
    let body = response
        .text()
        .map_err(|e| Error::Transport(e.to_string()))?;
    if !status.is_success() {
        return Err(Error::Endpoint {
            status: status.as_u16(),
            snippet: snippet(&body),
        });
    }
    parse_results_json(&body)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableStyle {
    #[default]
    Tsv,
    Aligned,
}

fn needs_quotes(value: &str) -> bool {
    value.is_empty()
        || value.starts_with(['<', '"'])
        || value.starts_with("_:")
        || value.contains(['\t', '\n', '\r'])
}

fn tsv_cell(cell: &Cell) -> String {
    match cell {
        Cell::Iri { value } => Term::iri(value.as_str()).to_string(),
        Cell::Blank { value } => format!("_:{value}"),
        Cell::Unbound => String::new(),
        Cell::Literal {
            value,
            datatype,
            lang,
        } => {
            let term = match (datatype, lang) {
                (_, Some(l)) => Term::lang_literal(value.as_str(), l.as_str()),
                (Some(d), None) => Term::typed_literal(value.as_str(), d.as_str()),
                (None, None) if !needs_quotes(value) => return value.clone(),
                (None, None) => Term::literal(value.as_str()),
            };
            term.to_string()
        }
    }
}

pub fn render_table(t: &BindingTable, style: TableStyle) -> String {
    match style {
        TableStyle::Tsv => {
            let mut out = t.columns.join("\t");
            out.push('\n');
            for row in &t.rows {
                let cells: Vec<String> = row.iter().map(tsv_cell).collect();
                out.push_str(&cells.join("\t"));
                out.push('\n');
            }
            out
        }
        TableStyle::Aligned => {
            let text = |c: &Cell| c.text().replace(['\t', '\n', '\r'], " ");
            let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
            for row in &t.rows {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(text(c).chars().count());
                }
            }
            let line = |cells: Vec<String>| -> String {
                let mut s = String::new();
                for (i, (c, w)) in cells.iter().zip(&widths).enumerate() {
                    if i > 0 {
                        s.push_str("  ");
                    }
                    let _ = write!(s, "{c:<w$}");
                }
                s.trim_end().to_string() + "\n"
            };
            let mut out = line(t.columns.clone());
            out.push_str(&line(widths.iter().map(|w| "-".repeat(*w)).collect()));
            for row in &t.rows {
                out.push_str(&line(row.iter().map(text).collect()));
            }
            let _ = writeln!(out, "({} rows)", t.rows.len());
            out
        }
    }
}

fn parse_tsv_cell(field: &str, line: usize) -> Result<Cell> {
    if field.is_empty() {
        return Ok(Cell::Unbound);
    }
    if let Some(id) = field.strip_prefix("_:") {
        return Ok(Cell::Blank {
            value: id.to_string(),
        });
    }
    if !field.starts_with(['<', '"']) {
        return Ok(Cell::literal(field));
    }
    // quoted cells use N-Triples term syntax
    let triple = parse_line(&format!("<s> <p> {field} ."), line)
        .map_err(|e| Error::ResultsFormat(format!("line {line}: {e}")))?
        .ok_or_else(|| Error::ResultsFormat(format!("line {line}: bad cell")))?;
    Ok(match triple.object {
        Term::Iri { value } => Cell::Iri { value },
        Term::Blank { id } => Cell::Blank { value: id },
        Term::Literal {
            value,
            datatype,
            language,
        } => Cell::Literal {
            value,
            datatype,
            lang: language,
        },
    })
}

/// Reads the TSV form written by [`render_table`].
pub fn parse_tsv(text: &str) -> Result<BindingTable> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::ResultsFormat("missing header".into()))?;
    let columns: Vec<String> = header.split('\t').map(str::to_string).collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != columns.len() {
            return Err(Error::ResultsFormat(format!(
                "line {}: {} fields for {} columns",
                i + 2,
                fields.len(),
                columns.len()
            )));
        }
        rows.push(
            fields
                .iter()
                .map(|f| parse_tsv_cell(f, i + 2))
                .collect::<Result<_>>()?,
        );
    }
    Ok(BindingTable { columns, rows })
}
