//! GF(2) chains stored as strictly increasing simplex keys.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::complex::{Filtration, Simplex, SimplexVertices};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Chain {
    pub dim: u8,
    pub simplices: Vec<u64>,
}

impl Chain {
    pub fn new(dim: u8, mut simplices: Vec<u64>) -> Self {
        simplices.sort_unstable();
        compress_pairs(&mut simplices);
        Chain { dim, simplices }
    }

    /// Wraps keys that are already strictly increasing.
    pub fn from_sorted(dim: u8, simplices: Vec<u64>) -> Self {
        debug_assert!(simplices.windows(2).all(|w| w[0] < w[1]));
        Chain { dim, simplices }
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Largest key in the chain.
    pub fn low(&self) -> Option<u64> {
        self.simplices.last().copied()
    }

    pub fn contains(&self, key: u64) -> bool {
        self.simplices.binary_search(&key).is_ok()
    }

    pub fn xor(&self, other: &Chain) -> Chain {
        debug_assert_eq!(self.dim, other.dim);
        Chain {
            dim: self.dim,
            simplices: xor_sorted(&self.simplices, &other.simplices),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.simplices.iter().map(|&k| Simplex::new(self.dim, k))
    }

    pub fn boundary(&self, f: &Filtration) -> Chain {
        if self.dim == 0 {
            return Chain::default();
        }
        let mut out = Vec::with_capacity(self.len() * (self.dim as usize + 1));
        for s in self.iter() {
            out.extend(f.boundary(s));
        }
        Chain::new(self.dim - 1, out)
    }

    pub fn is_cycle(&self, f: &Filtration) -> bool {
        self.boundary(f).is_empty()
    }

    /// Distinct vertices touched by the chain, ascending.
    pub fn vertex_set(&self, f: &Filtration) -> Vec<u32> {
        let mut vs: Vec<u32> = self.iter().flat_map(|s| f.vertices(s)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn vertex_tuples(&self, f: &Filtration) -> Vec<SimplexVertices> {
        self.iter().map(|s| f.vertices(s)).collect()
    }

    /// Largest simplex diameter in the chain (0 for an empty chain).
    pub fn max_diameter(&self, f: &Filtration) -> f64 {
        self.iter().map(|s| f.diameter(s)).fold(0.0, f64::max)
    }
}

/// Symmetric difference of two strictly increasing lists.
pub fn xor_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Size of the intersection of two strictly increasing lists.
pub fn intersection_size(a: &[u64], b: &[u64]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Removes values that occur an even number of times from a sorted list and
/// keeps one copy of the others.
pub fn compress_pairs(v: &mut Vec<u64>) {
    let mut w = 0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            v[w] = v[i];
            w += 1;
        }
        i = j;
    }
    v.truncate(w);
}

/// Working column whose pivot is its smallest key (coboundary reduction).
#[derive(Debug, Default)]
pub(crate) struct MinColumn(BinaryHeap<Reverse<u64>>);

impl MinColumn {
    pub(crate) fn clear(&mut self) {
        self.0.clear();
    }

    pub(crate) fn extend(&mut self, ks: impl IntoIterator<Item = u64>) {
        self.0.extend(ks.into_iter().map(Reverse));
    }

    /// Smallest key with odd multiplicity; cancels pairs on the way.
    pub(crate) fn pivot(&mut self) -> Option<u64> {
        while let Some(Reverse(k)) = self.0.pop() {
            if self.0.peek() == Some(&Reverse(k)) {
                self.0.pop();
            } else {
                self.0.push(Reverse(k));
                return Some(k);
            }
        }
        None
    }

    pub(crate) fn into_sorted(self) -> Vec<u64> {
        let mut v: Vec<u64> = self.0.into_iter().map(|r| r.0).collect();
        v.sort_unstable();
        compress_pairs(&mut v);
        v
    }

    pub(crate) fn take_sorted(&mut self) -> Vec<u64> {
        std::mem::take(self).into_sorted()
    }
}

/// Working column whose pivot is its largest key (boundary reduction).
#[derive(Debug, Default)]
pub(crate) struct MaxColumn(BinaryHeap<u64>);

impl MaxColumn {
    pub(crate) fn extend(&mut self, ks: impl IntoIterator<Item = u64>) {
        self.0.extend(ks);
    }

    pub(crate) fn pivot(&mut self) -> Option<u64> {
        while let Some(k) = self.0.pop() {
            if self.0.peek() == Some(&k) {
                self.0.pop();
            } else {
                self.0.push(k);
                return Some(k);
            }
        }
        None
    }

    pub(crate) fn into_sorted(self) -> Vec<u64> {
        let mut v = self.0.into_sorted_vec();
        compress_pairs(&mut v);
        v
    }
}
