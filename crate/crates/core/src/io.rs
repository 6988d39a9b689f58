//! Text and JSON instance formats.
//!
//! * Edge lists: first non-comment line `n m`, then `m` lines `u v` (0-based).
//!   Lines starting with `#` are comments.
//! * Signed edge lists: as above with a third column `+1` or `-1`.
//! * List assignments: one line per vertex, `v: c1 c2 ...` with 1-based colours.
//! * Valued covers: JSON, see [`CoverDoc`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cover::{Cover, ValueMap};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::reductions::{ListAssignment, SignedGraph};

/// JSON form of a valued cover:
///
/// ```json
/// { "n": 3, "kappa": 2, "edges": [[0,1],[1,2]],
///   "matchings": { "0-1": [[1,1],[2,2]] },
///   "f": [[0,1,1],[1,2,1]] }
/// ```
///
/// Matching keys are `"u-v"` with `u < v` and pairs `[p, q]` mean
/// `(u, p) ~ (v, q)`; fiber indices are 1-based. Missing matchings are empty
/// and missing `f` entries are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDoc {
    pub n: usize,
    pub kappa: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub matchings: BTreeMap<String, Vec<[usize; 2]>>,
    #[serde(default)]
    pub f: Vec<[u64; 3]>,
}

impl CoverDoc {
    /// Canonical document: sorted edges, sorted pairs, nonzero values only.
    pub fn from_instance(c: &Cover, f: &ValueMap) -> CoverDoc {
        let g = c.base();
        let mut matchings = BTreeMap::new();
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let pairs: Vec<[usize; 2]> = c
                .matching(e)
                .pairs()
                .into_iter()
                .map(|(p, q)| [p + 1, q + 1])
                .collect();
            if !pairs.is_empty() {
                matchings.insert(format!("{u}-{v}"), pairs);
            }
        }
        let mut values = Vec::new();
        for v in 0..c.n() {
            for q in 0..c.kappa() {
                let x = f.get(v, q);
                if x > 0 {
                    values.push([v as u64, q as u64 + 1, x as u64]);
                }
            }
        }
        CoverDoc {
            n: g.n(),
            kappa: c.kappa(),
            edges: g.edges().iter().map(|&(u, v)| [u, v]).collect(),
            matchings,
            f: values,
        }
    }

    pub fn to_instance(&self) -> Result<(Cover, ValueMap)> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let g = Graph::new(self.n, &edges)?;
        if self.kappa == 0 {
            return Err(Error::ZeroKappa);
        }
        let mut ms = Vec::new();
        for (key, pairs) in &self.matchings {
            let (u, v) = parse_edge_key(key)?;
            let mut zero_based = Vec::with_capacity(pairs.len());
            for &[p, q] in pairs {
                for x in [p, q] {
                    if x == 0 || x > self.kappa {
                        return Err(Error::FiberIndexOutOfRange {
                            index: x,
                            kappa: self.kappa,
                        });
                    }
                }
                zero_based.push((p - 1, q - 1));
            }
            ms.push(((u, v), zero_based));
        }
        let cover = Cover::new(g, self.kappa, &ms)?;
        let mut f = ValueMap::zeros(self.n, self.kappa);
        let mut seen = vec![false; self.n * self.kappa];
        for &[v, q, value] in &self.f {
            let (v, q) = (v as usize, q as usize);
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            if q == 0 || q > self.kappa {
                return Err(Error::FiberIndexOutOfRange {
                    index: q,
                    kappa: self.kappa,
                });
            }
            let value = u32::try_from(value)
                .map_err(|_| Error::Json(format!("value {value} at ({v},{q}) is too large")))?;
            if std::mem::replace(&mut seen[v * self.kappa + q - 1], true) {
                return Err(Error::Json(format!("duplicate f entry for ({v},{q})")));
            }
            f.set(v, q - 1, value);
        }
        Ok((cover, f))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("cover documents serialise")
    }

    pub fn from_json(text: &str) -> Result<CoverDoc> {
        Ok(serde_json::from_str(text)?)
    }
}

fn parse_edge_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Json(format!("matching key {key:?} is not of the form \"u-v\""));
    let (a, b) = key.split_once('-').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

/// Reads a valued cover from its JSON document.
pub fn read_cover_json(text: &str) -> Result<(Cover, ValueMap)> {
    CoverDoc::from_json(text)?.to_instance()
}

pub fn write_cover_json(c: &Cover, f: &ValueMap) -> String {
    CoverDoc::from_instance(c, f).to_json()
}

// Non-comment, non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.ok_or_else(|| Error::Parse {
        line,
        msg: format!("missing {what}"),
    })?
    .parse()
    .map_err(|_| Error::Parse {
        line,
        msg: format!("bad {what}"),
    })
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize)> {
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing `n m` header".into(),
    })?;
    let mut toks = header.split_whitespace();
    let n = parse_num(toks.next(), ln, "vertex count")?;
    let m = parse_num(toks.next(), ln, "edge count")?;
    Ok((n, m))
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut edges = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let u = parse_num(toks.next(), ln, "endpoint")?;
        let v = parse_num(toks.next(), ln, "endpoint")?;
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    Graph::new(n, &edges)
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_signed_edge_list(text: &str) -> Result<SignedGraph> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut edges = Vec::with_capacity(m);
    let mut signs = Vec::with_capacity(m);
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let u = parse_num(toks.next(), ln, "endpoint")?;
        let v = parse_num(toks.next(), ln, "endpoint")?;
        let s: i8 = parse_num(toks.next(), ln, "sign")?;
        if s != 1 && s != -1 {
            return Err(Error::Parse {
                line: ln,
                msg: format!("sign must be +1 or -1, got {s}"),
            });
        }
        edges.push((u, v));
        signs.push(s);
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header promises {m} edges, found {}", edges.len()),
        });
    }
    SignedGraph::new(n, &edges, &signs)
}

/// Parses `v: c1 c2 ...` lines. Vertices without a line get an empty list.
pub fn parse_list_assignment(text: &str, n: usize, kappa: usize) -> Result<ListAssignment> {
    let mut lists = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    for (ln, line) in content_lines(text) {
        let (head, rest) = line.split_once(':').ok_or(Error::Parse {
            line: ln,
            msg: "expected `v: c1 c2 ...`".into(),
        })?;
        let v: usize = parse_num(Some(head.trim()), ln, "vertex")?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Parse {
                line: ln,
                msg: format!("vertex {v} listed twice"),
            });
        }
        for tok in rest.split_whitespace() {
            let c: usize = parse_num(Some(tok), ln, "colour")?;
            if c == 0 || c > kappa {
                return Err(Error::FiberIndexOutOfRange { index: c, kappa });
            }
            lists[v].push(c - 1);
        }
    }
    ListAssignment::new(kappa, lists)
}

/// Parses per-vertex value rows `v: f1 f2 ...` into `κ` functions on `V(G)`.
pub fn parse_value_rows(text: &str, n: usize) -> Result<Vec<Vec<u32>>> {
    let mut rows: Vec<Option<Vec<u32>>> = vec![None; n];
    let mut width = None;
    for (ln, line) in content_lines(text) {
        let (head, rest) = line.split_once(':').ok_or(Error::Parse {
            line: ln,
            msg: "expected `v: f1 f2 ...`".into(),
        })?;
        let v: usize = parse_num(Some(head.trim()), ln, "vertex")?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        let row = rest
            .split_whitespace()
            .map(|t| parse_num(Some(t), ln, "value"))
            .collect::<Result<Vec<u32>>>()?;
        if *width.get_or_insert(row.len()) != row.len() {
            return Err(Error::Parse {
                line: ln,
                msg: "rows have different lengths".into(),
            });
        }
        rows[v] = Some(row);
    }
    let width = width.unwrap_or(1);
    Ok(rows.into_iter().map(|r| r.unwrap_or_else(|| vec![0; width])).collect())
}
