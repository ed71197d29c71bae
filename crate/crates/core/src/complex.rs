//! Sparse metric input and the Vietoris–Rips filtration built over it.
//!
//! Simplices are never materialized. Every simplex is a `(dim, key)` pair
//! where the key orders simplices of one dimension in filtration order:
//!
//! * vertex `v`: key `v`
//! * edge: its position in the sorted edge list
//! * triangle `<k_p, k_s>`: `k_p * n + k_s`, with `k_p` the diameter edge and
//!   `k_s` the opposite vertex
//! * tetrahedron `<k_p, (a, b)>`: `k_p * n^2 + a * n + b`, with `k_p` the
//!   diameter edge and `a < b` the two remaining vertices
//!
//! The diameter edge is the facet edge that enters the filtration last, so
//! ordering by key is ordering by (diameter, diameter edge, rest). Global
//! filtration order across dimensions is `(diameter, dim, key)`.

use std::cmp::Ordering;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};

pub type VertexId = u32;

/// Pairwise distance lookup. `None` means the pair is not admitted.
pub trait Metric {
    fn distance(&self, u: VertexId, v: VertexId) -> Option<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    pub length: f64,
}

/// Vertices plus the finite pairwise distances that may enter the complex.
/// Pairs that are not stored are at distance +inf.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMetricSpace {
    n_vertices: usize,
    // sorted by (u, v), u < v
    edges: Vec<Edge>,
    threshold: f64,
}

impl SparseMetricSpace {
    /// Strict constructor: every edge must be valid and within `threshold`.
    pub fn new(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
        threshold: f64,
    ) -> Result<Self> {
        Self::build(n_vertices, edges, threshold, false)
    }

    /// Like [`SparseMetricSpace::new`] but silently drops edges longer than `threshold`.
    pub fn with_cutoff(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
        threshold: f64,
    ) -> Result<Self> {
        Self::build(n_vertices, edges, threshold, true)
    }

    fn build(
        n_vertices: usize,
        edges: impl IntoIterator<Item = (VertexId, VertexId, f64)>,
        threshold: f64,
        drop_long: bool,
    ) -> Result<Self> {
        if threshold.is_nan() || threshold < 0.0 {
            return Err(Error::InvalidInput(format!("threshold {threshold} is not valid")));
        }
        if n_vertices > VertexId::MAX as usize {
            return Err(Error::CapacityOverflow {
                what: "vertex ids",
                size: n_vertices as u128,
            });
        }
        let mut out = Vec::new();
        for (a, b, d) in edges {
            for x in [a, b] {
                if x as usize >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: x as u64,
                        n_vertices,
                    });
                }
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self loop at vertex {a}")));
            }
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) has distance {d}; distances must be finite and positive"
                )));
            }
            if d > threshold {
                if drop_long {
                    continue;
                }
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) has distance {d} above threshold {threshold}"
                )));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            out.push(Edge { u, v, length: d });
        }
        out.sort_by_key(|x| (x.u, x.v));
        for w in out.windows(2) {
            if (w[0].u, w[0].v) == (w[1].u, w[1].v) {
                return Err(Error::DuplicateEdge(w[0].u, w[0].v));
            }
        }
        Ok(SparseMetricSpace {
            n_vertices,
            edges: out,
            threshold,
        })
    }

    /// Euclidean distances between points, keeping pairs within `threshold`.
    pub fn from_embedding(embedding: &crate::geometry::Embedding, threshold: f64) -> Result<Self> {
        Self::new(embedding.len(), embedding.pairs_within(threshold), threshold)
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Restrict to a smaller threshold.
    pub fn with_threshold(&self, threshold: f64) -> SparseMetricSpace {
        SparseMetricSpace {
            n_vertices: self.n_vertices,
            edges: self.edges.iter().copied().filter(|e| e.length <= threshold).collect(),
            threshold: threshold.min(self.threshold),
        }
    }

    /// Induced subspace on `members`, re-indexed 0..members.len().
    pub fn induced(&self, members: &[VertexId]) -> SparseMetricSpace {
        let mut index = vec![u32::MAX; self.n_vertices];
        for (i, &m) in members.iter().enumerate() {
            index[m as usize] = i as u32;
        }
        let mut edges: Vec<Edge> = self
            .edges
            .iter()
            .filter_map(|e| {
                let (a, b) = (index[e.u as usize], index[e.v as usize]);
                (a != u32::MAX && b != u32::MAX).then(|| {
                    let (u, v) = if a < b { (a, b) } else { (b, a) };
                    Edge { u, v, length: e.length }
                })
            })
            .collect();
        edges.sort_by_key(|x| (x.u, x.v));
        SparseMetricSpace {
            n_vertices: members.len(),
            edges,
            threshold: self.threshold,
        }
    }
}

impl Metric for SparseMetricSpace {
    fn distance(&self, u: VertexId, v: VertexId) -> Option<f64> {
        if u == v {
            return ((u as usize) < self.n_vertices).then_some(0.0);
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(a, b)))
            .ok()
            .map(|i| self.edges[i].length)
    }
}

/// A simplex identified by dimension and per-dimension filtration key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub dim: u8,
    pub key: u64,
}

impl Simplex {
    pub fn new(dim: u8, key: u64) -> Self {
        Simplex { dim, key }
    }
}

pub type SimplexVertices = ArrayVec<VertexId, 4>;

/// Vietoris–Rips filtration over a [`SparseMetricSpace`] up to dimension 3.
#[derive(Debug, Clone)]
pub struct Filtration {
    n_vertices: usize,
    max_dim: usize,
    threshold: f64,
    edges: Vec<Edge>,
    // per vertex: (neighbor, edge index), sorted by neighbor
    neighbors: Vec<Vec<(VertexId, u64)>>,
    // exclusive key bounds per dimension, used by prefix truncation
    limits: [u64; 4],
}

impl Filtration {
    /// Builds the filtration with edges ordered by `(length, u, v)`.
    pub fn build(space: &SparseMetricSpace, max_dim: usize) -> Result<Self> {
        let mut order: Vec<usize> = (0..space.edges.len()).collect();
        order.sort_by(|&a, &b| {
            let (x, y) = (&space.edges[a], &space.edges[b]);
            x.length.total_cmp(&y.length).then((x.u, x.v).cmp(&(y.u, y.v)))
        });
        Self::from_order(space, max_dim, &order)
    }

    /// Builds the filtration with an explicit edge order given as indices into
    /// `space.edges()`. The order must be non-decreasing in length.
    pub fn with_edge_order(space: &SparseMetricSpace, max_dim: usize, order: &[usize]) -> Result<Self> {
        let mut seen = vec![false; space.edges.len()];
        if order.len() != space.edges.len() {
            return Err(Error::InvalidInput("edge order is not a permutation".into()));
        }
        for &i in order {
            if i >= seen.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidInput("edge order is not a permutation".into()));
            }
        }
        for w in order.windows(2) {
            if space.edges[w[0]].length > space.edges[w[1]].length {
                return Err(Error::InvalidInput(
                    "edge order must be non-decreasing in length".into(),
                ));
            }
        }
        Self::from_order(space, max_dim, order)
    }

    fn from_order(space: &SparseMetricSpace, max_dim: usize, order: &[usize]) -> Result<Self> {
        if max_dim > 3 {
            return Err(Error::InvalidInput(format!(
                "max_dim {max_dim} exceeds the supported 3"
            )));
        }
        let n = space.n_vertices as u128;
        let n_edges = order.len() as u128;
        let needed = match max_dim {
            0 | 1 => n.max(n_edges),
            2 => n_edges * n,
            _ => n_edges * n * n,
        };
        if needed > u64::MAX as u128 {
            return Err(Error::CapacityOverflow {
                what: "simplex keys",
                size: needed,
            });
        }
        let edges: Vec<Edge> = if max_dim == 0 {
            Vec::new()
        } else {
            order.iter().map(|&i| space.edges[i]).collect()
        };
        let mut f = Filtration {
            n_vertices: space.n_vertices,
            max_dim,
            threshold: space.threshold,
            edges,
            neighbors: Vec::new(),
            limits: [space.n_vertices as u64, u64::MAX, u64::MAX, u64::MAX],
        };
        f.limits[1] = f.edges.len() as u64;
        f.rebuild_neighbors();
        Ok(f)
    }

    fn rebuild_neighbors(&mut self) {
        let mut nb: Vec<Vec<(VertexId, u64)>> = vec![Vec::new(); self.n_vertices];
        for (i, e) in self.edges.iter().enumerate() {
            nb[e.u as usize].push((e.v, i as u64));
            nb[e.v as usize].push((e.u, i as u64));
        }
        for list in &mut nb {
            list.sort_unstable();
        }
        self.neighbors = nb;
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: u64) -> &Edge {
        &self.edges[index as usize]
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    fn n(&self) -> u64 {
        self.n_vertices as u64
    }

    fn tri_key(&self, kp: u64, ks: VertexId) -> u64 {
        kp * self.n() + ks as u64
    }

    fn tet_key(&self, kp: u64, a: VertexId, b: VertexId) -> u64 {
        let n = self.n();
        kp * n * n + a as u64 * n + b as u64
    }

    /// Index of edge `(u, v)` if it is in the filtration.
    pub fn edge_index(&self, u: VertexId, v: VertexId) -> Option<u64> {
        let list = self.neighbors.get(u as usize)?;
        list.binary_search_by(|&(w, _)| w.cmp(&v)).ok().map(|i| list[i].1)
    }

    fn split_triangle(&self, key: u64) -> (u64, VertexId) {
        (key / self.n(), (key % self.n()) as VertexId)
    }

    fn split_tetra(&self, key: u64) -> (u64, VertexId, VertexId) {
        let n = self.n();
        let kp = key / (n * n);
        let rest = key % (n * n);
        (kp, (rest / n) as VertexId, (rest % n) as VertexId)
    }

    /// Whether `s` is a simplex of this filtration.
    pub fn contains(&self, s: Simplex) -> bool {
        let d = s.dim as usize;
        if d > self.max_dim || s.key >= self.limits[d] {
            return false;
        }
        match s.dim {
            0 | 1 => true,
            2 => {
                let (kp, ks) = self.split_triangle(s.key);
                if kp >= self.edges.len() as u64 {
                    return false;
                }
                let e = self.edges[kp as usize];
                if ks == e.u || ks == e.v {
                    return false;
                }
                matches!((self.edge_index(e.u, ks), self.edge_index(e.v, ks)),
                    (Some(x), Some(y)) if x < kp && y < kp)
            }
            3 => {
                let (kp, a, b) = self.split_tetra(s.key);
                if kp >= self.edges.len() as u64 || a >= b {
                    return false;
                }
                let e = self.edges[kp as usize];
                if a == e.u || a == e.v || b == e.u || b == e.v {
                    return false;
                }
                [(e.u, a), (e.u, b), (e.v, a), (e.v, b), (a, b)]
                    .iter()
                    .all(|&(x, y)| matches!(self.edge_index(x, y), Some(i) if i < kp))
            }
            _ => false,
        }
    }

    /// Sorted vertex tuple of `s`.
    pub fn vertices(&self, s: Simplex) -> SimplexVertices {
        let mut out = SimplexVertices::new();
        match s.dim {
            0 => out.push(s.key as VertexId),
            1 => {
                let e = self.edges[s.key as usize];
                out.push(e.u);
                out.push(e.v);
            }
            2 => {
                let (kp, ks) = self.split_triangle(s.key);
                let e = self.edges[kp as usize];
                out.extend([e.u, e.v, ks]);
            }
            3 => {
                let (kp, a, b) = self.split_tetra(s.key);
                let e = self.edges[kp as usize];
                out.extend([e.u, e.v, a, b]);
            }
            _ => unreachable!("dimension above 3"),
        }
        out.sort_unstable();
        out
    }

    /// Diameter of `s`; for triangles and tetrahedra this is the length of `k_p`.
    pub fn diameter(&self, s: Simplex) -> f64 {
        match s.dim {
            0 => 0.0,
            1 => self.edges[s.key as usize].length,
            2 => self.edges[(s.key / self.n()) as usize].length,
            3 => {
                let n = self.n();
                self.edges[(s.key / (n * n)) as usize].length
            }
            _ => unreachable!("dimension above 3"),
        }
    }

    /// Encodes a vertex set as a simplex of this filtration.
    pub fn encode(&self, vertices: &[VertexId]) -> Option<Simplex> {
        let mut vs: SimplexVertices = vertices.iter().copied().collect();
        vs.sort_unstable();
        if vs.windows(2).any(|w| w[0] == w[1]) || vs.is_empty() {
            return None;
        }
        let dim = (vs.len() - 1) as u8;
        if dim as usize > self.max_dim {
            return None;
        }
        let s = match dim {
            0 => Simplex::new(0, vs[0] as u64),
            1 => Simplex::new(1, self.edge_index(vs[0], vs[1])?),
            2 => {
                let ids = [
                    (self.edge_index(vs[0], vs[1])?, vs[2]),
                    (self.edge_index(vs[0], vs[2])?, vs[1]),
                    (self.edge_index(vs[1], vs[2])?, vs[0]),
                ];
                let (kp, ks) = *ids.iter().max_by_key(|x| x.0).unwrap();
                Simplex::new(2, self.tri_key(kp, ks))
            }
            3 => {
                let mut best = (0u64, 0usize, 0usize);
                let mut first = true;
                for i in 0..4 {
                    for j in i + 1..4 {
                        let id = self.edge_index(vs[i], vs[j])?;
                        if first || id > best.0 {
                            best = (id, i, j);
                            first = false;
                        }
                    }
                }
                let rest: ArrayVec<VertexId, 2> =
                    (0..4).filter(|&k| k != best.1 && k != best.2).map(|k| vs[k]).collect();
                Simplex::new(3, self.tet_key(best.0, rest[0], rest[1]))
            }
            _ => return None,
        };
        (s.key < self.limits[dim as usize]).then_some(s)
    }

    /// Facet keys of `s` in ascending order.
    pub fn boundary(&self, s: Simplex) -> ArrayVec<u64, 4> {
        let mut out = ArrayVec::new();
        match s.dim {
            0 => {}
            1 => {
                let e = self.edges[s.key as usize];
                out.extend([e.u as u64, e.v as u64]);
            }
            2 => {
                let (kp, ks) = self.split_triangle(s.key);
                let e = self.edges[kp as usize];
                out.push(kp);
                out.push(self.edge_index(e.u, ks).expect("triangle facet"));
                out.push(self.edge_index(e.v, ks).expect("triangle facet"));
            }
            3 => {
                let vs = self.vertices(s);
                for skip in 0..4 {
                    let face: ArrayVec<VertexId, 3> = (0..4).filter(|&k| k != skip).map(|k| vs[k]).collect();
                    out.push(self.encode(&face).expect("tetrahedron facet").key);
                }
            }
            _ => unreachable!("dimension above 3"),
        }
        out.sort_unstable();
        out
    }

    /// Largest facet key; for an edge its younger vertex, otherwise the facet
    /// containing the diameter edge.
    pub fn max_facet(&self, s: Simplex) -> Option<u64> {
        match s.dim {
            0 => None,
            1 => {
                let e = self.edges[s.key as usize];
                Some(e.v.max(e.u) as u64)
            }
            2 => Some(s.key / self.n()),
            3 => {
                let (kp, _, b) = self.split_tetra(s.key);
                Some(self.tri_key(kp, b))
            }
            _ => None,
        }
    }

    /// Calls `f(w, id(a, w), id(b, w))` for every common neighbor `w` of `a` and `b`.
    fn common_neighbors(&self, a: VertexId, b: VertexId, mut f: impl FnMut(VertexId, u64, u64)) {
        let (la, lb) = (&self.neighbors[a as usize], &self.neighbors[b as usize]);
        let (mut i, mut j) = (0, 0);
        while i < la.len() && j < lb.len() {
            match la[i].0.cmp(&lb[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    f(la[i].0, la[i].1, lb[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    fn for_each_cofacet(&self, s: Simplex, mut f: impl FnMut(u64)) {
        if s.dim as usize >= self.max_dim {
            return;
        }
        match s.dim {
            0 => {
                let v = s.key as VertexId;
                for &(_, id) in &self.neighbors[v as usize] {
                    f(id);
                }
            }
            1 => {
                let e = self.edges[s.key as usize];
                let limit = self.limits[2];
                self.common_neighbors(e.u, e.v, |w, iu, iv| {
                    let key = if s.key > iu && s.key > iv {
                        self.tri_key(s.key, w)
                    } else if iu > iv {
                        self.tri_key(iu, e.v)
                    } else {
                        self.tri_key(iv, e.u)
                    };
                    if key < limit {
                        f(key);
                    }
                });
            }
            2 => {
                let vs = self.vertices(s);
                let (a, b, c) = (vs[0], vs[1], vs[2]);
                let ids = [
                    (self.edge_index(a, b).unwrap(), a, b),
                    (self.edge_index(a, c).unwrap(), a, c),
                    (self.edge_index(b, c).unwrap(), b, c),
                ];
                let inner = *ids.iter().max_by_key(|x| x.0).unwrap();
                let lc = &self.neighbors[c as usize];
                let mut k = 0;
                let limit = self.limits[3];
                self.common_neighbors(a, b, |w, ia, ib| {
                    while k < lc.len() && lc[k].0 < w {
                        k += 1;
                    }
                    if k < lc.len() && lc[k].0 == w {
                        let ic = lc[k].1;
                        let mut best = inner;
                        for cand in [(ia, a, w), (ib, b, w), (ic, c, w)] {
                            if cand.0 > best.0 {
                                best = cand;
                            }
                        }
                        let mut rest: ArrayVec<VertexId, 4> = [a, b, c, w]
                            .into_iter()
                            .filter(|&x| x != best.1 && x != best.2)
                            .collect();
                        rest.sort_unstable();
                        let key = self.tet_key(best.0, rest[0], rest[1]);
                        if key < limit {
                            f(key);
                        }
                    }
                });
            }
            _ => {}
        }
    }

    /// Cofacet keys of `s` in ascending filtration order.
    pub fn coboundary(&self, s: Simplex) -> impl Iterator<Item = u64> {
        let mut out = Vec::new();
        self.coboundary_into(s, &mut out);
        out.into_iter()
    }

    pub fn coboundary_into(&self, s: Simplex, out: &mut Vec<u64>) {
        out.clear();
        self.for_each_cofacet(s, |k| out.push(k));
        out.sort_unstable();
    }

    pub fn smallest_cofacet(&self, s: Simplex) -> Option<u64> {
        let mut best: Option<u64> = None;
        self.for_each_cofacet(s, |k| {
            if best.is_none_or(|b| k < b) {
                best = Some(k);
            }
        });
        best
    }

    /// Zero-reduction partner of `s` one dimension up: the earliest cofacet `t`
    /// of `s` when `s` is also the largest facet of `t`.
    pub fn trivial_cofacet(&self, s: Simplex) -> Option<u64> {
        let t = self.smallest_cofacet(s)?;
        (self.max_facet(Simplex::new(s.dim + 1, t)) == Some(s.key)).then_some(t)
    }

    /// Keys of all `dim`-simplices in ascending order.
    pub fn simplices(&self, dim: usize) -> Box<dyn Iterator<Item = u64> + '_> {
        if dim > self.max_dim {
            return Box::new(std::iter::empty());
        }
        match dim {
            0 => Box::new(0..self.limits[0].min(self.n())),
            1 => Box::new(0..self.edges.len() as u64),
            2 => Box::new(TriangleIter::new(self)),
            3 => Box::new(TetraIter::new(self)),
            _ => Box::new(std::iter::empty()),
        }
    }

    pub fn count(&self, dim: usize) -> u64 {
        match dim {
            0 if dim <= self.max_dim => self.limits[0].min(self.n()),
            1 if dim <= self.max_dim => self.edges.len() as u64,
            _ => self.simplices(dim).count() as u64,
        }
    }

    /// Compares two simplices in global filtration order.
    pub fn cmp_filtration(&self, a: Simplex, b: Simplex) -> Ordering {
        self.diameter(a)
            .total_cmp(&self.diameter(b))
            .then(a.dim.cmp(&b.dim))
            .then(a.key.cmp(&b.key))
    }

    /// Every simplex in global filtration order.
    pub fn ordered_simplices(&self) -> Vec<Simplex> {
        let mut all: Vec<Simplex> = (0..=self.max_dim)
            .flat_map(|d| self.simplices(d).map(move |k| Simplex::new(d as u8, k)))
            .collect();
        all.sort_by(|&a, &b| self.cmp_filtration(a, b));
        all
    }

    /// The sub-filtration made of the first `count` simplices in global order.
    pub fn truncate(&self, count: usize) -> Filtration {
        let ordered = self.ordered_simplices();
        let mut limits = [0u64; 4];
        for s in ordered.iter().take(count) {
            let d = s.dim as usize;
            limits[d] = limits[d].max(s.key + 1);
        }
        let mut f = self.clone();
        f.edges.truncate(limits[1] as usize);
        f.limits = limits;
        f.rebuild_neighbors();
        f
    }
}

impl Metric for Filtration {
    fn distance(&self, u: VertexId, v: VertexId) -> Option<f64> {
        if u == v {
            return ((u as usize) < self.n_vertices).then_some(0.0);
        }
        self.edge_index(u, v).map(|k| self.edges[k as usize].length)
    }
}

struct TriangleIter<'a> {
    f: &'a Filtration,
    kp: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl<'a> TriangleIter<'a> {
    fn new(f: &'a Filtration) -> Self {
        TriangleIter {
            f,
            kp: 0,
            buf: Vec::new(),
            pos: 0,
        }
    }
}

impl Iterator for TriangleIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.buf.len() {
                let k = self.buf[self.pos];
                self.pos += 1;
                if k >= self.f.limits[2] {
                    self.kp = self.f.edges.len() as u64;
                    self.buf.clear();
                    return None;
                }
                return Some(k);
            }
            if self.kp >= self.f.edges.len() as u64 {
                return None;
            }
            let kp = self.kp;
            self.kp += 1;
            self.buf.clear();
            self.pos = 0;
            let e = self.f.edges[kp as usize];
            let f = self.f;
            let buf = &mut self.buf;
            f.common_neighbors(e.u, e.v, |w, iu, iv| {
                if iu < kp && iv < kp {
                    buf.push(f.tri_key(kp, w));
                }
            });
        }
    }
}

struct TetraIter<'a> {
    f: &'a Filtration,
    kp: u64,
    buf: Vec<u64>,
    pos: usize,
}

impl<'a> TetraIter<'a> {
    fn new(f: &'a Filtration) -> Self {
        TetraIter {
            f,
            kp: 0,
            buf: Vec::new(),
            pos: 0,
        }
    }
}

impl Iterator for TetraIter<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        loop {
            if self.pos < self.buf.len() {
                let k = self.buf[self.pos];
                self.pos += 1;
                if k >= self.f.limits[3] {
                    self.kp = self.f.edges.len() as u64;
                    self.buf.clear();
                    return None;
                }
                return Some(k);
            }
            if self.kp >= self.f.edges.len() as u64 {
                return None;
            }
            let kp = self.kp;
            self.kp += 1;
            self.buf.clear();
            self.pos = 0;
            let e = self.f.edges[kp as usize];
            let f = self.f;
            let mut common = Vec::new();
            f.common_neighbors(e.u, e.v, |w, iu, iv| {
                if iu < kp && iv < kp {
                    common.push(w);
                }
            });
            for i in 0..common.len() {
                for j in i + 1..common.len() {
                    if matches!(f.edge_index(common[i], common[j]), Some(id) if id < kp) {
                        self.buf.push(f.tet_key(kp, common[i], common[j]));
                    }
                }
            }
        }
    }
}
