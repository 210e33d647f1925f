//! Parser for the SELECT subset emitted by the renderer.
//!
//! Accepts `select [distinct] ?v ... where { ... }` with IRI, variable and
//! literal terms, `a` for rdf:type, `Optional { ... }` groups and `#`
//! comments. Keywords are case-insensitive, commas between projected
//! variables are tolerated and the `.` separators are optional before `}`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{QueryGraph, QueryVariable, TriplePattern};
use crate::error::{Error, Result};
use crate::ingest::{RDFS_LABEL, RDF_TYPE};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum ParsedTerm {
    Var(String),
    Iri(String),
    Literal(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedPattern {
    pub subject: ParsedTerm,
    pub predicate: ParsedTerm,
    pub object: ParsedTerm,
    pub optional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsedQuery {
    pub distinct: bool,
    pub projections: Vec<String>,
    pub patterns: Vec<ParsedPattern>,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Var(String),
    Iri(String),
    Literal(String),
    Word(String),
    Punct(char),
}

fn syntax(position: usize, message: impl Into<String>) -> Error {
    Error::SparqlSyntax {
        position,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '#' => while chars.next_if(|&(_, c)| c != '\n').is_some() {},
            '{' | '}' | '.' | ',' => {
                chars.next();
                out.push((at, Tok::Punct(c)));
            }
            '?' | '$' => {
                chars.next();
                let mut name = String::new();
                while let Some((_, c)) = chars.next_if(|&(_, c)| c.is_alphanumeric() || c == '_') {
                    name.push(c);
                }
                if name.is_empty() {
                    return Err(syntax(at, "empty variable name"));
                }
                out.push((at, Tok::Var(name)));
            }
            '<' => {
                chars.next();
                let mut iri = String::new();
                loop {
                    match chars.next() {
                        Some((_, '>')) => break,
                        Some((p, c)) if c.is_whitespace() || c == '<' => {
                            return Err(syntax(p, "invalid character in IRI"))
                        }
                        Some((_, c)) => iri.push(c),
                        None => return Err(syntax(at, "unterminated IRI")),
                    }
                }
                out.push((at, Tok::Iri(iri)));
            }
            '"' => {
                chars.next();
                let mut value = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((p, '\\')) => match chars.next() {
                            Some((_, 'n')) => value.push('\n'),
                            Some((_, 't')) => value.push('\t'),
                            Some((_, c @ ('"' | '\\' | '\''))) => value.push(c),
                            _ => return Err(syntax(p, "invalid escape in literal")),
                        },
                        Some((_, c)) => value.push(c),
                        None => return Err(syntax(at, "unterminated literal")),
                    }
                }
                // language tags and datatypes are accepted and dropped
                if chars.next_if(|&(_, c)| c == '@').is_some() {
                    while chars
                        .next_if(|&(_, c)| c.is_alphanumeric() || c == '-')
                        .is_some()
                    {}
                } else if chars.next_if(|&(_, c)| c == '^').is_some() {
                    if chars.next_if(|&(_, c)| c == '^').is_none()
                        || chars.next_if(|&(_, c)| c == '<').is_none()
                    {
                        return Err(syntax(at, "expected `^^<datatype>` after literal"));
                    }
                    if !chars.by_ref().any(|(_, c)| c == '>') {
                        return Err(syntax(at, "unterminated datatype IRI"));
                    }
                }
                out.push((at, Tok::Literal(value)));
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some((_, c)) = chars.next_if(|&(_, c)| c.is_ascii_alphabetic()) {
                    word.push(c.to_ascii_lowercase());
                }
                out.push((at, Tok::Word(word)));
            }
            _ => return Err(syntax(at, format!("unexpected character `{c}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Word(x)) if x == w) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Punct(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(syntax(self.pos(), format!("expected `{c}`")))
        }
    }

    fn term(&mut self, predicate: bool) -> Result<ParsedTerm> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Var(v)) => Ok(ParsedTerm::Var(v)),
            Some(Tok::Iri(i)) => Ok(ParsedTerm::Iri(i)),
            Some(Tok::Literal(l)) if !predicate => Ok(ParsedTerm::Literal(l)),
            Some(Tok::Word(w)) if predicate && w == "a" => Ok(ParsedTerm::Iri(RDF_TYPE.into())),
            _ => Err(syntax(pos, "expected a variable or IRI")),
        }
    }

    fn triple(&mut self, optional: bool) -> Result<ParsedPattern> {
        let subject = self.term(false)?;
        let predicate = self.term(true)?;
        let object = self.term(false)?;
        if matches!(subject, ParsedTerm::Literal(_)) {
            return Err(syntax(self.pos(), "literal in subject position"));
        }
        Ok(ParsedPattern {
            subject,
            predicate,
            object,
            optional,
        })
    }

    /// Patterns up to (not including) the closing `}`.
    fn group(&mut self, optional: bool, out: &mut Vec<ParsedPattern>) -> Result<()> {
        loop {
            match self.peek() {
                Some(Tok::Punct('}')) => return Ok(()),
                Some(Tok::Word(w)) if w == "optional" => {
                    if optional {
                        return Err(syntax(self.pos(), "nested Optional is not supported"));
                    }
                    self.at += 1;
                    self.expect_punct('{')?;
                    let before = out.len();
                    self.group(true, out)?;
                    if out.len() == before {
                        return Err(syntax(self.pos(), "empty Optional group"));
                    }
                    self.expect_punct('}')?;
                    self.eat_punct('.');
                }
                None => return Err(syntax(self.end, "unexpected end of query")),
                _ => {
                    out.push(self.triple(optional)?);
                    if !self.eat_punct('.') && self.peek() != Some(&Tok::Punct('}')) {
                        return Err(syntax(self.pos(), "expected `.` or `}` after a pattern"));
                    }
                }
            }
        }
    }
}

/// Parses the SELECT subset. Every projected variable must occur in the
/// WHERE block.
pub fn parse_sparql(src: &str) -> Result<ParsedQuery> {
    let mut p = Parser {
        toks: tokenize(src)?,
        at: 0,
        end: src.len(),
    };
    if !p.eat_word("select") {
        return Err(syntax(p.pos(), "expected `select`"));
    }
    let distinct = p.eat_word("distinct");
    let mut projections = Vec::new();
    let mut proj_pos = Vec::new();
    loop {
        let pos = p.pos();
        match p.peek() {
            Some(Tok::Var(v)) => {
                projections.push(v.clone());
                proj_pos.push(pos);
                p.at += 1;
                p.eat_punct(',');
            }
            _ => break,
        }
    }
    if projections.is_empty() {
        return Err(syntax(p.pos(), "expected at least one projected variable"));
    }
    p.eat_word("where");
    p.expect_punct('{')?;
    let mut patterns = Vec::new();
    p.group(false, &mut patterns)?;
    p.expect_punct('}')?;
    if p.peek().is_some() {
        return Err(syntax(p.pos(), "unexpected content after the query"));
    }
    let used: BTreeSet<&str> = patterns
        .iter()
        .flat_map(|t| [&t.subject, &t.predicate, &t.object])
        .filter_map(|t| match t {
            ParsedTerm::Var(v) => Some(v.as_str()),
            _ => None,
        })
        .collect();
    for (v, pos) in projections.iter().zip(proj_pos) {
        if !used.contains(v.as_str()) {
            return Err(syntax(pos, format!("?{v} is not used in the WHERE block")));
        }
    }
    Ok(ParsedQuery {
        distinct,
        projections,
        patterns,
    })
}

impl ParsedQuery {
    /// Rebuilds a query graph, reading required `rdf:type` patterns as
    /// variable types and required `rdfs:label` patterns as label variables.
    pub fn to_query_graph(&self) -> Result<QueryGraph> {
        let outside =
            |m: &str| Error::InvalidArgument(format!("{m} is outside the generated subset"));
        let mut qg = QueryGraph {
            projections: self.projections.clone(),
            ..QueryGraph::default()
        };
        let mut labels: Vec<(String, String)> = Vec::new();
        fn declare<'a>(qg: &'a mut QueryGraph, name: &str) -> &'a mut QueryVariable {
            if let Some(i) = qg.variables.iter().position(|v| v.name == name) {
                return &mut qg.variables[i];
            }
            qg.variables.push(QueryVariable {
                name: name.to_string(),
                concept: None,
                label_var: None,
            });
            qg.variables.last_mut().expect("just pushed")
        }
        for t in &self.patterns {
            let (ParsedTerm::Var(s), ParsedTerm::Iri(p)) = (&t.subject, &t.predicate) else {
                return Err(outside(
                    "a pattern without a variable subject and IRI predicate",
                ));
            };
            match (&t.object, p.as_str(), t.optional) {
                (ParsedTerm::Iri(c), RDF_TYPE, false) => {
                    let v = declare(&mut qg, s);
                    if v.concept.is_some() {
                        return Err(outside("a second type for one variable"));
                    }
                    v.concept = Some(c.clone());
                }
                (ParsedTerm::Var(l), RDFS_LABEL, false) => labels.push((s.clone(), l.clone())),
                (ParsedTerm::Var(o), _, optional) => {
                    declare(&mut qg, s);
                    declare(&mut qg, o);
                    qg.patterns.push(TriplePattern {
                        subject: s.clone(),
                        predicate: p.clone(),
                        object: o.clone(),
                        optional,
                    });
                }
                _ => return Err(outside("a constant object")),
            }
        }
        for (s, l) in labels {
            let v = declare(&mut qg, &s);
            if v.label_var.is_some() {
                return Err(outside("a second label for one variable"));
            }
            v.label_var = Some(l);
        }
        qg.validate()?;
        Ok(qg)
    }
}
