//! Plain-text edge-list format: a header line `n m` followed by `m` lines
//! `u v` with `u < v`, ASCII decimal, LF line endings.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

impl Graph {
    pub fn to_edge_list_string(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            reason: "missing header".into(),
        })?;
        let [n, m] = parse_pair(header, hl + 1)?;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            let [u, v] = parse_pair(line, i + 1)?;
            if u == v {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("self-loop at vertex {u}"),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: hl + 1,
                reason: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Graph::from_edges(n, edges)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Graph> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Graph::parse_edge_list(&text)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_edge_list_string().as_bytes())
            .map_err(|e| Error::io(path, e))
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<[usize; 2]> {
    let mut it = line.split_ascii_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            reason: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            reason: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            reason: "trailing tokens".into(),
        });
    }
    Ok(pair)
}
