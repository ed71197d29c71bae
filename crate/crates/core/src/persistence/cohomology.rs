use std::collections::{HashMap, HashSet};

use crate::chain::MinColumn;
use crate::complex::{Filtration, Simplex};
use crate::error::Result;

/// Result of reducing the coboundary columns of one dimension.
#[derive(Debug, Clone, Default)]
pub struct CoboundaryReduction {
    pub dim: u8,
    /// Nontrivial pairs `(birth, death)`; `None` marks an essential class.
    pub pairs: Vec<(u64, Option<u64>)>,
    /// Apparent pairs, never reduced and never stored.
    pub trivial: Vec<(u64, u64)>,
    /// Every death simplex in dimension `dim + 1`, apparent ones included.
    pub deaths: HashSet<u64>,
    /// Reduced coboundary columns of the nontrivial finite pairs, by birth.
    pub cocycles: HashMap<u64, Vec<u64>>,
}

impl CoboundaryReduction {
    /// `(row, column)` pivots of the reduced coboundary matrix: the death
    /// simplex is the pivot of the birth simplex's column.
    pub fn pivots(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self
            .pairs
            .iter()
            .filter_map(|&(b, d)| d.map(|d| (d, b)))
            .chain(self.trivial.iter().map(|&(b, d)| (d, b)))
            .collect();
        v.sort_unstable();
        v
    }
}

/// The apparent partner of `s` one dimension up: its earliest cofacet `t`,
/// provided `s` is the latest facet of `t`.
pub fn detect_trivial_pair(f: &Filtration, s: Simplex) -> Option<u64> {
    f.trivial_cofacet(s)
}

/// Pairs `dim`-simplices with `(dim+1)`-simplices by reducing coboundary
/// columns from the latest simplex to the earliest. `cleared` holds the
/// `dim`-simplices already known to be deaths one dimension down; their
/// columns are skipped.
pub fn reduce_coboundary(f: &Filtration, dim: u8, cleared: &HashSet<u64>) -> Result<CoboundaryReduction> {
    let mut out = CoboundaryReduction {
        dim,
        ..Default::default()
    };
    let mut columns: Vec<u64> = f.simplices(dim as usize).filter(|k| !cleared.contains(k)).collect();
    columns.reverse();

    // death simplex -> birth simplex owning it as a pivot
    let mut owner: HashMap<u64, u64> = HashMap::new();
    let mut work = MinColumn::default();
    let mut buf = Vec::new();

    for &sigma in &columns {
        let s = Simplex::new(dim, sigma);
        f.coboundary_into(s, &mut buf);
        work.clear();
        work.extend(buf.iter().copied());
        let mut untouched = true;
        loop {
            let Some(t) = work.pivot() else {
                out.pairs.push((sigma, None));
                break;
            };
            if let Some(&other) = owner.get(&t) {
                work.extend(out.cocycles[&other].iter().copied());
                untouched = false;
                continue;
            }
            let ts = Simplex::new(dim + 1, t);
            let top = f.max_facet(ts).expect("cofacet has facets");
            if top == sigma {
                if untouched {
                    out.trivial.push((sigma, t));
                    out.deaths.insert(t);
                    break;
                }
            } else if !cleared.contains(&top) && f.smallest_cofacet(Simplex::new(dim, top)) == Some(t) {
                // t is the apparent partner of a later column whose reduced
                // coboundary is its plain coboundary
                f.coboundary_into(Simplex::new(dim, top), &mut buf);
                work.extend(buf.iter().copied());
                untouched = false;
                continue;
            }
            out.cocycles.insert(sigma, work.take_sorted());
            owner.insert(t, sigma);
            out.deaths.insert(t);
            out.pairs.push((sigma, Some(t)));
            break;
        }
    }
    out.pairs.reverse();
    out.trivial.reverse();
    Ok(out)
}
