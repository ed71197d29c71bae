use crate::chain::xor_sorted;
use crate::complex::Filtration;
use crate::error::{Error, Result};

use super::matrix::ReducedMatrix;

/// Dimension-0 pairs and the reduced edge columns of the negative edges.
#[derive(Debug, Clone)]
pub struct EdgeReduction {
    /// `(vertex, killing edge)`; `None` for the oldest vertex of each component.
    pub pairs: Vec<(u32, Option<u64>)>,
    pub matrix: ReducedMatrix,
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
}

/// Elder-rule pairing by union-find. Roots are the smallest vertex of each
/// component, so the younger root dies when two components merge.
pub fn union_find_pairs(f: &Filtration) -> Vec<(u32, Option<u64>)> {
    let n = f.count(0) as usize;
    let mut uf = UnionFind::new(n);
    let mut death: Vec<Option<u64>> = vec![None; n];
    for (k, e) in f.edges().iter().enumerate() {
        let (ru, rv) = (uf.find(e.u), uf.find(e.v));
        if ru != rv {
            let (old, young) = if ru < rv { (ru, rv) } else { (rv, ru) };
            uf.parent[young as usize] = old;
            death[young as usize] = Some(k as u64);
        }
    }
    (0..n as u32).map(|v| (v, death[v as usize])).collect()
}

/// Standard left-to-right reduction of the edge columns. Union-find decides
/// which edges are negative; only those columns are reduced.
pub fn reduce_edges(f: &Filtration) -> Result<EdgeReduction> {
    let n = f.count(0) as usize;
    let mut uf = UnionFind::new(n);
    let mut matrix = ReducedMatrix::new(1, false);
    let mut death: Vec<Option<u64>> = vec![None; n];
    for (k, e) in f.edges().iter().enumerate() {
        let (ru, rv) = (uf.find(e.u), uf.find(e.v));
        if ru == rv {
            continue;
        }
        let (old, young) = if ru < rv { (ru, rv) } else { (rv, ru) };
        uf.parent[young as usize] = old;
        let mut col = if e.u < e.v {
            vec![e.u as u64, e.v as u64]
        } else {
            vec![e.v as u64, e.u as u64]
        };
        loop {
            let low = *col
                .last()
                .ok_or_else(|| Error::Internal(format!("negative edge {k} reduced to zero")))?;
            match matrix.stored_owner(low) {
                Some(c) => {
                    col = xor_sorted(&col, matrix.column(c).expect("owner has a column"));
                }
                None => break,
            }
        }
        let low = *col.last().unwrap();
        if low != young as u64 {
            return Err(Error::Internal(format!(
                "edge {k}: reduced pivot {low} disagrees with elder rule vertex {young}"
            )));
        }
        death[young as usize] = Some(k as u64);
        matrix.insert(k as u64, col);
    }
    Ok(EdgeReduction {
        pairs: (0..n as u32).map(|v| (v, death[v as usize])).collect(),
        matrix,
    })
}
