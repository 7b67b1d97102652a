//! graph6 and edge-list encodings.
//!
//! The edge-list format is line oriented: the first line is `n m`, followed
//! by `m` lines `u v` with `u < v`, in ascending lexicographic order, each
//! terminated by LF. Vertices are 0-indexed.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Graph6,
    Edgelist,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "graph6" | "g6" => Ok(Format::Graph6),
            "edgelist" | "el" => Ok(Format::Edgelist),
            other => Err(format!("unknown graph format `{other}`")),
        }
    }
}

pub fn encode(g: &Graph, format: Format) -> Vec<u8> {
    match format {
        Format::Graph6 => to_graph6(g).into_bytes(),
        Format::Edgelist => to_edgelist(g).into_bytes(),
    }
}

pub fn decode(bytes: &[u8], format: Format) -> Result<Graph, GraphError> {
    match format {
        Format::Graph6 => from_graph6(bytes),
        Format::Edgelist => from_edgelist(bytes),
    }
}

fn parse_err(offset: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse {
        offset,
        msg: msg.into(),
    }
}

/// graph6 string (no header, no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend_from_slice(&[126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn from_graph6(bytes: &[u8]) -> Result<Graph, GraphError> {
    let mut data = bytes;
    let mut base = 0;
    if let Some(rest) = data.strip_prefix(b">>graph6<<") {
        data = rest;
        base = 10;
    }
    while let Some((&last, rest)) = data.split_last() {
        if last == b'\n' || last == b'\r' {
            data = rest;
        } else {
            break;
        }
    }
    if data.is_empty() {
        return Err(parse_err(base, "empty graph6 input"));
    }
    for (i, &b) in data.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(parse_err(base + i, format!("byte {b:#04x} outside graph6 range")));
        }
    }
    let (n, header) = if data[0] != 126 {
        ((data[0] - 63) as usize, 1)
    } else if data.len() >= 2 && data[1] == 126 {
        if data.len() < 8 {
            return Err(parse_err(base + data.len(), "truncated 8-byte size"));
        }
        let n = data[2..8]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, 8)
    } else {
        if data.len() < 4 {
            return Err(parse_err(base + data.len(), "truncated 4-byte size"));
        }
        let n = data[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, 4)
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let expected = header + pairs.div_ceil(6);
    if data.len() != expected {
        let offset = base + data.len().min(expected);
        return Err(parse_err(
            offset,
            format!("expected {expected} bytes for {n} vertices, found {}", data.len()),
        ));
    }
    let mut g = Graph::blank(n)?;
    let body = &data[header..];
    let mut bit = 0usize;
    for j in 1..n {
        for i in 0..j {
            let b = body[bit / 6] - 63;
            if b & (0x20 >> (bit % 6)) != 0 {
                g.add_edge_unchecked(i, j);
            }
            bit += 1;
        }
    }
    if !bit.is_multiple_of(6) {
        let b = body[bit / 6] - 63;
        let pad_mask = (1u8 << (6 - bit % 6)) - 1;
        if b & pad_mask != 0 {
            return Err(parse_err(base + header + bit / 6, "nonzero padding bits"));
        }
    }
    Ok(g)
}

pub fn to_edgelist(g: &Graph) -> String {
    let mut s = String::new();
    writeln!(s, "{} {}", g.n(), g.m()).expect("writing to a String");
    for (u, v) in g.edges() {
        writeln!(s, "{u} {v}").expect("writing to a String");
    }
    s
}

pub fn from_edgelist(bytes: &[u8]) -> Result<Graph, GraphError> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(e.valid_up_to(), "invalid UTF-8"))?;
    let mut lines = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let body = line.trim_end_matches(['\n', '\r']);
        if !body.trim().is_empty() {
            lines.push((offset, body));
        }
        offset += line.len();
    }
    let Some(&(hoff, header)) = lines.first() else {
        return Err(parse_err(0, "empty edge list"));
    };
    let (n, m) = parse_pair(header, hoff)?;
    if lines.len() - 1 != m {
        return Err(parse_err(
            offset,
            format!("header announces {m} edges, found {}", lines.len() - 1),
        ));
    }
    let mut g = Graph::blank(n)?;
    for &(off, line) in &lines[1..] {
        let (u, v) = parse_pair(line, off)?;
        if u >= n || v >= n {
            return Err(parse_err(off, format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(parse_err(off, "self-loop"));
        }
        if g.has_edge(u, v) {
            return Err(parse_err(off, "duplicate edge"));
        }
        g.add_edge_unchecked(u, v);
    }
    Ok(g)
}

fn parse_pair(line: &str, offset: usize) -> Result<(usize, usize), GraphError> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| parse_err(offset, "expected two integers"))?;
        tok.parse()
            .map_err(|_| parse_err(offset, format!("`{tok}` is not a nonnegative integer")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(parse_err(offset, "trailing tokens"));
    }
    Ok((a, b))
}
