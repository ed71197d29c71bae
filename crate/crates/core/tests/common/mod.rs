//! Brute-force references shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tightph::{Filtration, SparseMetricSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_points(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|_| {
            let mut p = [0.0; 3];
            for c in p.iter_mut().take(dim) {
                *c = rng.gen::<f64>();
            }
            p
        })
        .collect()
}

pub fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

pub fn distance_matrix(points: &[[f64; 3]]) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| points.iter().map(|q| dist(p, q)).collect())
        .collect()
}

pub fn space_from_matrix(d: &[Vec<f64>], tau: f64) -> SparseMetricSpace {
    let n = d.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if d[i][j] <= tau {
                edges.push((i as u32, j as u32, d[i][j]));
            }
        }
    }
    SparseMetricSpace::new(n, edges, tau).unwrap()
}

/// Integer-valued distances so that many diameters tie.
pub fn tie_rich_matrix(rng: &mut impl Rng, n: usize, levels: u32) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(1..=levels) as f64;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    d
}

/// Every Rips simplex of dimension <= max_dim, by enumerating vertex subsets.
pub fn rips_simplices(d: &[Vec<f64>], tau: f64, max_dim: usize) -> Vec<(Vec<u32>, f64)> {
    let n = d.len();
    let mut out: Vec<(Vec<u32>, f64)> = (0..n as u32).map(|v| (vec![v], 0.0)).collect();
    let mut frontier: Vec<(Vec<u32>, f64)> = out.clone();
    for _ in 0..max_dim {
        let mut next = Vec::new();
        for (s, diam) in &frontier {
            let last = *s.last().unwrap();
            for w in last + 1..n as u32 {
                let mut m = *diam;
                let mut ok = true;
                for &x in s {
                    let dx = d[x as usize][w as usize];
                    if dx > tau {
                        ok = false;
                        break;
                    }
                    m = m.max(dx);
                }
                if ok {
                    let mut t = s.clone();
                    t.push(w);
                    next.push((t, m));
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct OracleReduction {
    /// simplices in filtration order
    pub order: Vec<Vec<u32>>,
    pub diam: Vec<f64>,
    pub r: Vec<Vec<usize>>,
    pub v: Vec<Vec<usize>>,
    /// (birth index, death index)
    pub pairs: Vec<(usize, Option<usize>)>,
    /// number of column additions spent on each column
    pub additions: Vec<usize>,
}

fn xor(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i] < b[j]) {
            out.push(a[i]);
            i += 1;
        } else if i == a.len() || b[j] < a[i] {
            out.push(b[j]);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
    out
}

/// Left-to-right reduction of the full boundary matrix, keeping V.
pub fn oracle_reduce(order: Vec<Vec<u32>>, diam: Vec<f64>) -> OracleReduction {
    let index: HashMap<Vec<u32>, usize> = order.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    let m = order.len();
    let mut r: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut v: Vec<Vec<usize>> = Vec::with_capacity(m);
    let mut additions = vec![0; m];
    let mut low_owner: HashMap<usize, usize> = HashMap::new();
    for j in 0..m {
        let s = &order[j];
        let mut col: Vec<usize> = if s.len() == 1 {
            Vec::new()
        } else {
            (0..s.len())
                .map(|skip| {
                    let face: Vec<u32> = s
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != skip)
                        .map(|(_, &x)| x)
                        .collect();
                    index[&face]
                })
                .collect()
        };
        col.sort_unstable();
        let mut vj = vec![j];
        while let Some(&low) = col.last() {
            match low_owner.get(&low) {
                Some(&k) => {
                    col = xor(&col, &r[k]);
                    vj = xor(&vj, &v[k]);
                    additions[j] += 1;
                }
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            low_owner.insert(low, j);
        }
        vj.sort_unstable();
        r.push(col);
        v.push(vj);
    }
    let mut pairs = Vec::new();
    for i in 0..m {
        if !r[i].is_empty() {
            continue;
        }
        pairs.push((i, low_owner.get(&i).copied()));
    }
    OracleReduction {
        order,
        diam,
        r,
        v,
        pairs,
        additions,
    }
}

impl OracleReduction {
    /// Sorted (birth, death) multiset for one dimension.
    pub fn values(&self, dim: usize) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = self
            .pairs
            .iter()
            .filter(|(b, _)| self.order[*b].len() == dim + 1)
            .map(|&(b, d)| (self.diam[b], d.map_or(f64::INFINITY, |d| self.diam[d])))
            .collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        out
    }
}

/// Oracle on an independently enumerated complex ordered by (diameter, dim, vertices).
pub fn oracle_from_matrix(d: &[Vec<f64>], tau: f64, max_dim: usize) -> OracleReduction {
    let mut simplices = rips_simplices(d, tau, max_dim);
    simplices.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.len().cmp(&b.0.len())).then(a.0.cmp(&b.0)));
    let diam = simplices.iter().map(|s| s.1).collect();
    oracle_reduce(simplices.into_iter().map(|s| s.0).collect(), diam)
}

/// Oracle on exactly the order used by a filtration.
pub fn oracle_from_filtration(f: &Filtration) -> OracleReduction {
    let ordered = f.ordered_simplices();
    let diam = ordered.iter().map(|&s| f.diameter(s)).collect();
    let order = ordered.iter().map(|&s| f.vertices(s).to_vec()).collect();
    oracle_reduce(order, diam)
}
