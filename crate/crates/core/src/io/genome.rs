use std::collections::BTreeMap;
use std::io::BufRead;

use crate::complex::VertexId;
use crate::error::{Error, Result};

use super::{data_lines, parse_num};

/// Bin id to chromosome name.
pub type BinMap = BTreeMap<VertexId, String>;

/// Reads `bin chromosome` rows. A repeated bin keeps its last name.
pub fn read_bin_map(r: impl BufRead) -> Result<BinMap> {
    let mut map = BinMap::new();
    for item in data_lines(r) {
        let (no, line) = item?;
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::parse(no, format!("expected 2 fields, got {}", f.len())));
        }
        let bin: VertexId = parse_num(no, f[0], "bin")?;
        map.insert(bin, f[1].to_string());
    }
    Ok(map)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CycleKind {
    /// Every vertex on this chromosome.
    Cis(String),
    /// The chromosomes touched, sorted.
    Trans(Vec<String>),
}

/// Per chromosome pair, the number of trans cycles touching both.
pub type TransCounts = BTreeMap<(String, String), usize>;

/// Classifies a cycle by the chromosomes of its vertices and adds trans
/// cycles to `counts`.
pub fn classify_cis_trans(vertices: &[VertexId], chrom: &BinMap, counts: &mut TransCounts) -> Result<CycleKind> {
    let mut names: Vec<String> = Vec::new();
    for &v in vertices {
        let c = chrom.get(&v).ok_or(Error::UnmappedVertex(v))?;
        names.push(c.clone());
    }
    names.sort();
    names.dedup();
    match names.len() {
        0 => Err(Error::InvalidInput("empty cycle".into())),
        1 => Ok(CycleKind::Cis(names.pop().unwrap())),
        _ => {
            for i in 0..names.len() {
                for j in i + 1..names.len() {
                    *counts.entry((names[i].clone(), names[j].clone())).or_insert(0) += 1;
                }
            }
            Ok(CycleKind::Trans(names))
        }
    }
}
