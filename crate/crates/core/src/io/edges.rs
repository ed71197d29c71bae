use std::io::{BufRead, Write};

use crate::complex::{SparseMetricSpace, VertexId};
use crate::error::{Error, Result};

use super::{parse_num, write_err};

/// Reads `u v d` rows under a `# n=<count> tau=<threshold>` header. Without
/// a header the vertex count is one past the largest id and the threshold is
/// the longest distance.
pub fn read_edge_list(r: impl BufRead) -> Result<SparseMetricSpace> {
    let mut n: Option<usize> = None;
    let mut tau: Option<f64> = None;
    let mut edges = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let no = i + 1;
        let line = line.map_err(|e| Error::parse(no, e.to_string()))?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        if let Some(rest) = t.strip_prefix('#') {
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("n=") {
                    n = Some(parse_num(no, v, "vertex count")?);
                } else if let Some(v) = tok.strip_prefix("tau=") {
                    let x: f64 = parse_num(no, v, "threshold")?;
                    if x.is_nan() || x < 0.0 {
                        return Err(Error::parse(no, format!("bad threshold {v:?}")));
                    }
                    tau = Some(x);
                }
            }
            continue;
        }
        let f: Vec<&str> = t.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::parse(no, format!("expected 3 fields, got {}", f.len())));
        }
        let u: VertexId = parse_num(no, f[0], "vertex")?;
        let v: VertexId = parse_num(no, f[1], "vertex")?;
        let d: f64 = parse_num(no, f[2], "distance")?;
        if u >= v {
            return Err(Error::parse(no, format!("need u < v, got {u} {v}")));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::parse(no, format!("distance {d} must be finite and positive")));
        }
        if let Some(tau) = tau {
            if d > tau {
                return Err(Error::parse(no, format!("distance {d} above tau {tau}")));
            }
        }
        if let Some(n) = n {
            if v as usize >= n {
                return Err(Error::parse(no, format!("vertex {v} out of range for n={n}")));
            }
        }
        edges.push((u, v, d));
    }
    let n = n.unwrap_or_else(|| edges.iter().map(|e| e.1 as usize + 1).max().unwrap_or(0));
    let tau = tau.unwrap_or_else(|| edges.iter().map(|e| e.2).fold(0.0, f64::max));
    SparseMetricSpace::new(n, edges, tau)
}

pub fn write_edge_list(space: &SparseMetricSpace, mut w: impl Write) -> Result<()> {
    writeln!(w, "# n={} tau={}", space.n_vertices(), space.threshold()).map_err(write_err)?;
    for e in space.edges() {
        writeln!(w, "{} {} {}", e.u, e.v, e.length).map_err(write_err)?;
    }
    w.flush().map_err(write_err)
}
