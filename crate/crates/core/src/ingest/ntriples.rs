//! Line-oriented N-Triples reader and writer.
//!
//! IRIs are taken verbatim (relative references such as `<a>` are accepted),
//! so fixtures can use short names.

use std::io::{BufRead, Write};

use super::store::TripleStore;
use super::term::{Term, Triple};
use crate::error::{Error, Result};

/// Parses an N-Triples document into a [`TripleStore`], keeping duplicates.
pub fn parse_ntriples<R: BufRead>(mut input: R) -> Result<TripleStore> {
    let mut triples = Vec::new();
    let mut buf = Vec::new();
    let mut line_no = 0;
    loop {
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        line_no += 1;
        let line = std::str::from_utf8(&buf).map_err(|_| Error::Encoding { line: line_no })?;
        let line = line.trim_end_matches(['\n', '\r']);
        if let Some(t) = parse_line(line, line_no)? {
            triples.push(t);
        }
    }
    Ok(TripleStore::new(triples))
}

pub fn parse_ntriples_str(input: &str) -> Result<TripleStore> {
    parse_ntriples(input.as_bytes())
}

/// Writes one triple per line in canonical N-Triples form.
pub fn write_ntriples<'a, W: Write>(
    triples: impl IntoIterator<Item = &'a Triple>,
    mut out: W,
) -> std::io::Result<()> {
    for t in triples {
        writeln!(out, "{t}")?;
    }
    Ok(())
}

/// Parses a single line; `Ok(None)` for blank and comment lines.
pub fn parse_line(line: &str, line_no: usize) -> Result<Option<Triple>> {
    let mut cur = Cursor {
        src: line,
        pos: 0,
        line: line_no,
    };
    cur.skip_ws();
    if cur.at_end() || cur.peek() == Some('#') {
        return Ok(None);
    }
    let subject = match cur.peek() {
        Some('<') => Term::iri(cur.iri()?),
        Some('_') => Term::blank(cur.blank()?),
        _ => return Err(cur.error("expected IRI or blank node as subject")),
    };
    cur.skip_ws();
    if cur.peek() != Some('<') {
        return Err(cur.error("expected IRI as predicate"));
    }
    let predicate = cur.iri()?;
    cur.skip_ws();
    let object = match cur.peek() {
        Some('<') => Term::iri(cur.iri()?),
        Some('_') => Term::blank(cur.blank()?),
        Some('"') => cur.literal()?,
        _ => return Err(cur.error("expected IRI, blank node or literal as object")),
    };
    cur.skip_ws();
    if cur.peek() != Some('.') {
        return Err(cur.error("expected `.` terminating the triple"));
    }
    cur.bump();
    cur.skip_ws();
    if !(cur.at_end() || cur.peek() == Some('#')) {
        return Err(cur.error("unexpected content after `.`"));
    }
    Ok(Some(Triple::new(subject, predicate, object)))
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t' | '\r' | '\n')) {
            self.bump();
        }
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            line: self.line,
            column: self.src[..self.pos].chars().count() + 1,
            message: message.to_string(),
        }
    }

    fn iri(&mut self) -> Result<String> {
        self.bump(); // '<'
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated IRI")),
                Some('>') => break,
                Some('\\') => out.push(self.unicode_escape()?),
                Some(c) if c == ' ' || c == '<' || c == '"' => {
                    return Err(self.error("invalid character in IRI"))
                }
                Some(c) => out.push(c),
            }
        }
        if out.is_empty() {
            return Err(self.error("empty IRI"));
        }
        Ok(out)
    }

    fn blank(&mut self) -> Result<String> {
        self.bump();
        if self.bump() != Some(':') {
            return Err(self.error("expected `_:` blank node prefix"));
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                self.bump();
            } else {
                break;
            }
        }
        // a trailing '.' belongs to the statement terminator
        while self.src[start..self.pos].ends_with('.') {
            self.pos -= 1;
        }
        if self.pos == start {
            return Err(self.error("empty blank node label"));
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn literal(&mut self) -> Result<Term> {
        self.bump(); // '"'
        let mut value = String::new();
        loop {
            match self.bump() {
                None => return Err(self.error("unterminated literal")),
                Some('"') => break,
                Some('\\') => {
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u' | 'U') => {
                            value.push(self.unicode_escape()?);
                            continue;
                        }
                        _ => return Err(self.error("invalid escape in literal")),
                    };
                    self.bump();
                    value.push(c);
                }
                Some(c) => value.push(c),
            }
        }
        match self.peek() {
            Some('@') => {
                self.bump();
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '-') {
                    self.bump();
                }
                if self.pos == start {
                    return Err(self.error("empty language tag"));
                }
                Ok(Term::lang_literal(value, &self.src[start..self.pos]))
            }
            Some('^') => {
                self.bump();
                if self.bump() != Some('^') || self.peek() != Some('<') {
                    return Err(self.error("expected `^^<datatype>`"));
                }
                let dt = self.iri()?;
                Ok(Term::typed_literal(value, dt))
            }
            _ => Ok(Term::literal(value)),
        }
    }

    /// Reads `uXXXX` or `UXXXXXXXX` after a backslash.
    fn unicode_escape(&mut self) -> Result<char> {
        let width = match self.bump() {
            Some('u') => 4,
            Some('U') => 8,
            _ => return Err(self.error("invalid escape")),
        };
        let end = self.pos + width;
        let hex = self
            .src
            .get(self.pos..end)
            .ok_or_else(|| self.error("truncated unicode escape"))?;
        let code =
            u32::from_str_radix(hex, 16).map_err(|_| self.error("invalid unicode escape"))?;
        self.pos = end;
        char::from_u32(code).ok_or_else(|| self.error("escape is not a scalar value"))
    }
}
