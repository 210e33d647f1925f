//! Minimal SPARQL endpoint stand-in: answers every request with one canned
//! response and records what it received.

#![allow(dead_code)]

use std::io::{BufRead, BufReader, Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread;

#[derive(Debug, Clone)]
pub struct Received {
    pub method: String,
    pub target: String,
    pub headers: Vec<(String, String)>,
    pub body: String,
}

impl Received {
    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }
}

pub struct MockEndpoint {
    pub url: String,
    pub log: Arc<Mutex<Vec<Received>>>,
}

pub const THREE_ROWS: &str = r#"{"head":{"vars":["drug","label"]},"results":{"bindings":[
{"drug":{"type":"uri","value":"http://bio2rdf.org/drugbank:DB00001"},"label":{"type":"literal","value":"Lepirudin","xml:lang":"en"}},
{"drug":{"type":"uri","value":"http://bio2rdf.org/drugbank:DB00002"},"label":{"type":"literal","value":"Cetuximab"}},
{"drug":{"type":"uri","value":"http://bio2rdf.org/drugbank:DB00003"}}]}}"#;

pub const EMPTY: &str = r#"{"head":{"vars":["drug"]},"results":{"bindings":[]}}"#;

impl MockEndpoint {
    pub fn start(status: u16, body: &'static str) -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind mock endpoint");
        let url = format!("http://{}/sparql", listener.local_addr().unwrap());
        let log = Arc::new(Mutex::new(Vec::new()));
        let seen = Arc::clone(&log);
        thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { continue };
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut line = String::new();
                if reader.read_line(&mut line).is_err() {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let method = parts.next().unwrap_or_default().to_string();
                let target = parts.next().unwrap_or_default().to_string();
                let mut headers = Vec::new();
                loop {
                    let mut h = String::new();
                    if reader.read_line(&mut h).unwrap_or(0) == 0 || h.trim().is_empty() {
                        break;
                    }
                    if let Some((k, v)) = h.split_once(':') {
                        headers.push((k.trim().to_string(), v.trim().to_string()));
                    }
                }
                let len = headers
                    .iter()
                    .find(|(k, _)| k.eq_ignore_ascii_case("content-length"))
                    .and_then(|(_, v)| v.parse().ok())
                    .unwrap_or(0);
                let mut payload = vec![0; len];
                let _ = reader.read_exact(&mut payload);
                seen.lock().unwrap().push(Received {
                    method,
                    target,
                    headers,
                    body: String::from_utf8_lossy(&payload).into_owned(),
                });
                let reason = if status == 200 { "OK" } else { "Error" };
                let _ = write!(
                    stream,
                    "HTTP/1.1 {status} {reason}\r\nContent-Type: application/sparql-results+json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                );
            }
        });
        MockEndpoint { url, log }
    }

    pub fn requests(&self) -> Vec<Received> {
        self.log.lock().unwrap().clone()
    }
}
