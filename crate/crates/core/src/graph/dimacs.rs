//! DIMACS ASCII clique format: `c` comment lines, one `p edge N M` header and
//! `M` lines `e u v` with 1-based vertex ids.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

pub fn read_dimacs(path: impl AsRef<Path>) -> Result<Graph> {
    parse_dimacs(File::open(path)?)
}

pub fn write_dimacs(g: &Graph, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dimacs_to(g, &mut w)?;
    w.flush()?;
    Ok(())
}

pub fn write_dimacs_to(g: &Graph, mut w: impl Write) -> Result<()> {
    writeln!(w, "p edge {} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "e {} {}", u + 1, v + 1)?;
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| parse_err(line, format!("malformed {what}")))
}

pub fn parse_dimacs(reader: impl Read) -> Result<Graph> {
    let mut graph: Option<(Graph, usize)> = None;
    let mut seen_edges = 0usize;

    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let mut toks = line.split_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if graph.is_some() {
                    return Err(parse_err(lineno, "second problem line"));
                }
                let format: String = field(toks.next(), lineno, "format")?;
                if format != "edge" && format != "col" {
                    return Err(parse_err(lineno, format!("unsupported format '{format}'")));
                }
                let n: usize = field(toks.next(), lineno, "vertex count")?;
                let m: usize = field(toks.next(), lineno, "edge count")?;
                graph = Some((Graph::empty(n), m));
            }
            Some("e") => {
                let Some((g, _)) = graph.as_mut() else {
                    return Err(parse_err(lineno, "edge line before the problem line"));
                };
                let u: usize = field(toks.next(), lineno, "endpoint")?;
                let v: usize = field(toks.next(), lineno, "endpoint")?;
                if u == 0 || v == 0 || u > g.n() || v > g.n() {
                    return Err(parse_err(lineno, format!("endpoint out of range 1..={}", g.n())));
                }
                if u == v {
                    return Err(parse_err(lineno, format!("self-loop on vertex {u}")));
                }
                if g.has_edge(u - 1, v - 1) {
                    return Err(parse_err(lineno, format!("duplicate edge {u} {v}")));
                }
                g.set_edge(u - 1, v - 1);
                seen_edges += 1;
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown line type '{other}'")));
            }
        }
    }

    let (g, m) = graph.ok_or_else(|| parse_err(0, "no problem line"))?;
    if seen_edges != m {
        return Err(Error::invalid(format!(
            "header declares {m} edges but {seen_edges} were listed"
        )));
    }
    Ok(g)
}
