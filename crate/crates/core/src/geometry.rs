//! Point embeddings in R^2 / R^3 and the proximity queries the pipeline needs.

use std::collections::HashMap;

use crate::complex::{Metric, VertexId};
use crate::error::{Error, Result};

pub type Point = [f64; 3];

/// Cartesian coordinates for every vertex of a data set. Planar embeddings
/// keep `z = 0` and report `dim == 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    dim: usize,
    coords: Vec<Point>,
}

impl Embedding {
    pub fn new(dim: usize, coords: Vec<Point>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidInput(format!(
                "embedding dimension must be 2 or 3, got {dim}"
            )));
        }
        for (i, p) in coords.iter().enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite coordinate for vertex {i}")));
            }
            if dim == 2 && p[2] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "planar embedding has non-zero z for vertex {i}"
                )));
            }
        }
        Ok(Embedding { dim, coords })
    }

    pub fn from_points3(coords: Vec<Point>) -> Result<Self> {
        Self::new(3, coords)
    }

    pub fn from_points2(coords: &[[f64; 2]]) -> Result<Self> {
        Self::new(2, coords.iter().map(|p| [p[0], p[1], 0.0]).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn point(&self, v: VertexId) -> Point {
        self.coords[v as usize]
    }

    /// Sub-embedding over `members`, re-indexed 0..members.len().
    pub fn subset(&self, members: &[VertexId]) -> Embedding {
        Embedding {
            dim: self.dim,
            coords: members.iter().map(|&v| self.coords[v as usize]).collect(),
        }
    }

    /// Same vertex set with replaced coordinates.
    pub fn with_coords(&self, coords: Vec<Point>) -> Embedding {
        debug_assert_eq!(coords.len(), self.coords.len());
        Embedding { dim: self.dim, coords }
    }

    /// All pairs `(i, j, d)` with `i < j` and `d <= radius`, sorted by `(i, j)`.
    pub fn pairs_within(&self, radius: f64) -> Vec<(VertexId, VertexId, f64)> {
        let n = self.coords.len();
        let mut out = Vec::new();
        if n < 2 {
            return out;
        }
        if !radius.is_finite() || n <= 64 {
            for i in 0..n {
                for j in i + 1..n {
                    let d = euclidean(&self.coords[i], &self.coords[j]);
                    if d <= radius {
                        out.push((i as VertexId, j as VertexId, d));
                    }
                }
            }
            return out;
        }
        let grid = Grid::new(&self.coords, radius.max(f64::MIN_POSITIVE));
        for i in 0..n {
            grid.for_each_near(&self.coords[i], |j| {
                if j > i {
                    let d = euclidean(&self.coords[i], &self.coords[j]);
                    if d <= radius {
                        out.push((i as VertexId, j as VertexId, d));
                    }
                }
            });
        }
        out.sort_by_key(|a| (a.0, a.1));
        out
    }

    /// Distance from every point to its nearest other point (`inf` when alone).
    pub fn nearest_neighbor_distances(&self) -> Vec<f64> {
        let n = self.coords.len();
        let mut nn = vec![f64::INFINITY; n];
        for i in 0..n {
            for j in i + 1..n {
                let d = euclidean(&self.coords[i], &self.coords[j]);
                if d < nn[i] {
                    nn[i] = d;
                }
                if d < nn[j] {
                    nn[j] = d;
                }
            }
        }
        nn
    }
}

impl Metric for Embedding {
    fn distance(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let a = self.coords.get(u as usize)?;
        let b = self.coords.get(v as usize)?;
        Some(euclidean(a, b))
    }
}

pub fn euclidean(a: &Point, b: &Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Axis-aligned box, inclusive on every face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub lo: Point,
    pub hi: Point,
}

impl BoundingBox {
    pub fn of_points<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = *it.next()?;
        let mut bb = BoundingBox { lo: first, hi: first };
        for p in it {
            for k in 0..3 {
                bb.lo[k] = bb.lo[k].min(p[k]);
                bb.hi[k] = bb.hi[k].max(p[k]);
            }
        }
        Some(bb)
    }

    pub fn centered(center: Point, dims: [f64; 3]) -> Self {
        let mut lo = center;
        let mut hi = center;
        for k in 0..3 {
            lo[k] -= dims[k] / 2.0;
            hi[k] += dims[k] / 2.0;
        }
        BoundingBox { lo, hi }
    }

    pub fn contains(&self, p: &Point) -> bool {
        (0..3).all(|k| self.lo[k] <= p[k] && p[k] <= self.hi[k])
    }

    pub fn dims(&self) -> [f64; 3] {
        [
            self.hi[0] - self.lo[0],
            self.hi[1] - self.lo[1],
            self.hi[2] - self.lo[2],
        ]
    }

    pub fn center(&self) -> Point {
        [
            (self.lo[0] + self.hi[0]) / 2.0,
            (self.lo[1] + self.hi[1]) / 2.0,
            (self.lo[2] + self.hi[2]) / 2.0,
        ]
    }

    pub fn intersection(&self, other: &BoundingBox) -> BoundingBox {
        let mut lo = self.lo;
        let mut hi = self.hi;
        for k in 0..3 {
            lo[k] = lo[k].max(other.lo[k]);
            hi[k] = hi[k].min(other.hi[k]);
        }
        BoundingBox { lo, hi }
    }
}

/// Uniform hash grid with cell side equal to the query radius.
pub(crate) struct Grid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
}

impl Grid {
    pub(crate) fn new(points: &[Point], cell: f64) -> Self {
        let mut cells: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            cells.entry(Self::key(cell, p)).or_default().push(i);
        }
        Grid { cell, cells }
    }

    fn key(cell: f64, p: &Point) -> [i64; 3] {
        [
            (p[0] / cell).floor() as i64,
            (p[1] / cell).floor() as i64,
            (p[2] / cell).floor() as i64,
        ]
    }

    pub(crate) fn for_each_near(&self, p: &Point, mut f: impl FnMut(usize)) {
        let k = Self::key(self.cell, p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(ids) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        for &j in ids {
                            f(j);
                        }
                    }
                }
            }
        }
    }
}
