//! Plain-text graph files.
//!
//! ```text
//! # comment
//! m 3 A 1 3
//! 1 2 1
//! 2 3 1
//! ```
//!
//! The header names the terminal count and the secrecy-seeking set; every
//! following line is `i j e_ij` with one-based terminals.

use crate::error::{Error, Result};

use super::{Multigraph, TerminalSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphFile {
    pub graph: Multigraph,
    pub set: TerminalSet,
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_terminal(token: &str, m: usize, line: usize) -> Result<usize> {
    let v: usize = token
        .parse()
        .map_err(|_| parse_error(line, format!("expected a terminal index, got {token:?}")))?;
    if v == 0 || v > m {
        return Err(parse_error(line, format!("terminal {v} outside 1..={m}")));
    }
    Ok(v - 1)
}

pub fn parse_graph_file(text: &str) -> Result<GraphFile> {
    let mut header: Option<(usize, TerminalSet)> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() < 3 || tokens[0] != "m" || tokens[2] != "A" {
                    return Err(parse_error(line, "expected header `m <count> A <members>`"));
                }
                let m: usize = tokens[1]
                    .parse()
                    .map_err(|_| parse_error(line, format!("bad terminal count {:?}", tokens[1])))?;
                if m < 2 {
                    return Err(parse_error(line, format!("need at least 2 terminals, got {m}")));
                }
                if m > super::MAX_TERMINALS {
                    return Err(parse_error(
                        line,
                        format!("{m} terminals exceeds the format limit {}", super::MAX_TERMINALS),
                    ));
                }
                let mut set = TerminalSet::EMPTY;
                for t in &tokens[3..] {
                    set.insert(parse_terminal(t, m, line)?);
                }
                header = Some((m, set));
            }
            Some((m, _)) => {
                if tokens.len() != 3 {
                    return Err(parse_error(line, "expected `i j e_ij`"));
                }
                let i = parse_terminal(tokens[0], m, line)?;
                let j = parse_terminal(tokens[1], m, line)?;
                if i == j {
                    return Err(parse_error(line, format!("self-loop on terminal {}", i + 1)));
                }
                let e: i64 = tokens[2]
                    .parse()
                    .map_err(|_| parse_error(line, format!("bad multiplicity {:?}", tokens[2])))?;
                if e < 0 {
                    return Err(parse_error(line, format!("negative multiplicity {e}")));
                }
                edges.push((i, j, e));
            }
        }
    }
    let (m, set) = header.ok_or_else(|| parse_error(0, "missing header line"))?;
    let graph = Multigraph::from_edges(m, &edges)?;
    Ok(GraphFile { graph, set })
}

pub fn write_graph_file(file: &GraphFile) -> String {
    let mut out = format!("m {} A", file.graph.m());
    for i in file.set.iter() {
        out.push_str(&format!(" {}", i + 1));
    }
    out.push('\n');
    for (i, j, e) in file.graph.edges() {
        out.push_str(&format!("{} {} {}\n", i + 1, j + 1, e));
    }
    out
}
