use std::collections::{BTreeMap, HashSet};
use std::io::BufRead;

use crate::complex::{SparseMetricSpace, VertexId};
use crate::error::{Error, Result};

use super::{data_lines, parse_num};

/// A contact matrix turned into distances `1 / m`.
#[derive(Debug, Clone)]
pub struct ContactLoad {
    pub space: SparseMetricSpace,
    pub entries: usize,
    /// Zero or NaN contacts.
    pub absent: usize,
    /// Distances above the threshold.
    pub beyond_tau: usize,
    pub diagonal: usize,
    /// Repeated pairs; the first occurrence wins.
    pub duplicates: usize,
    /// Number of kept edges per bin distance `|i - j|`.
    pub bin_distance: BTreeMap<u64, usize>,
}

impl ContactLoad {
    pub fn valid_edges(&self) -> usize {
        self.space.edges().len()
    }
}

/// Reads `i j m` triples. Zero and NaN contacts mean the edge is absent and
/// distances above `tau` are dropped. `n_vertices` defaults to one past the
/// largest id.
pub fn read_contacts(r: impl BufRead, tau: f64, n_vertices: Option<usize>) -> Result<ContactLoad> {
    let mut edges = Vec::new();
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::new();
    let (mut entries, mut absent, mut beyond, mut diagonal, mut dups) = (0, 0, 0, 0, 0);
    let mut max_id: Option<VertexId> = None;
    for item in data_lines(r) {
        let (no, line) = item?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::parse(no, format!("expected 3 fields, got {}", f.len())));
        }
        let i: VertexId = parse_num(no, f[0], "bin")?;
        let j: VertexId = parse_num(no, f[1], "bin")?;
        let m: f64 = parse_num(no, f[2], "contact")?;
        if m < 0.0 || m.is_infinite() {
            return Err(Error::parse(no, format!("contact {m} must be finite and non-negative")));
        }
        entries += 1;
        max_id = Some(max_id.map_or(i.max(j), |x| x.max(i).max(j)));
        if i == j {
            diagonal += 1;
            continue;
        }
        if m.is_nan() || m == 0.0 {
            absent += 1;
            continue;
        }
        let key = (i.min(j), i.max(j));
        if !seen.insert(key) {
            dups += 1;
            continue;
        }
        let d = 1.0 / m;
        if !d.is_finite() {
            absent += 1;
            continue;
        }
        if d > tau {
            beyond += 1;
            continue;
        }
        edges.push((key.0, key.1, d));
    }
    let n = n_vertices.unwrap_or(max_id.map_or(0, |x| x as usize + 1));
    let mut bin_distance = BTreeMap::new();
    for &(u, v, _) in &edges {
        *bin_distance.entry((v - u) as u64).or_insert(0) += 1;
    }
    Ok(ContactLoad {
        space: SparseMetricSpace::new(n, edges, tau)?,
        entries,
        absent,
        beyond_tau: beyond,
        diagonal,
        duplicates: dups,
        bin_distance,
    })
}
