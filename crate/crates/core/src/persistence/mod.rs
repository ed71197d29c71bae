//! Persistence pairs over GF(2).
//!
//! Dimension 0 comes from a union-find pass that also records the reduced
//! edge columns. Higher dimensions are paired by reducing the coboundary
//! matrix with clearing and apparent-pair elision, after which only the
//! boundary columns of the nontrivial deaths are reduced to recover `R`.

mod boundary;
mod cohomology;
mod h0;
mod matrix;

use std::collections::HashSet;

use crate::complex::{Filtration, Simplex};
use crate::error::{Error, Result};

pub use boundary::{reduce_boundary_targeted, reduce_columns_serial};
pub use cohomology::{detect_trivial_pair, reduce_coboundary, CoboundaryReduction};
pub use h0::{reduce_edges, union_find_pairs, EdgeReduction};
pub use matrix::{Owner, ReducedMatrix};

pub const DEFAULT_BATCH_SIZE: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub dim: u8,
    pub birth_simplex: Simplex,
    pub death_simplex: Option<Simplex>,
    pub birth: f64,
    /// `f64::INFINITY` for essential classes.
    pub death: f64,
    /// Zero-reduction pair found from the paired indices alone.
    pub apparent: bool,
}

impl PersistencePair {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death_simplex.is_none()
    }

    pub fn bar(&self) -> Bar {
        Bar {
            dim: self.dim,
            birth: self.birth,
            death: self.death,
        }
    }
}

/// One `(dim, birth, death)` entry of a diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bar {
    pub dim: u8,
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    pub fn persistence(&self) -> f64 {
        self.death - self.birth
    }

    /// Persistence with essential classes bounded below by `tau - birth`.
    pub fn persistence_lower_bound(&self, tau: f64) -> f64 {
        if self.death.is_infinite() {
            tau - self.birth
        } else {
            self.death - self.birth
        }
    }

    /// Born by `tau_u` and persisting at least `epsilon`.
    pub fn is_significant(&self, params: &SignificanceParams) -> bool {
        self.birth <= params.tau_u && self.persistence_lower_bound(params.tau()) >= params.epsilon
    }
}

/// The two user thresholds; the computation runs to `tau_u + epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignificanceParams {
    pub tau_u: f64,
    pub epsilon: f64,
}

impl SignificanceParams {
    pub fn new(tau_u: f64, epsilon: f64) -> Result<Self> {
        if !(tau_u > 0.0 && tau_u.is_finite() && epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "thresholds must be positive and finite (tau_u = {tau_u}, epsilon = {epsilon})"
            )));
        }
        Ok(SignificanceParams { tau_u, epsilon })
    }

    pub fn tau(&self) -> f64 {
        self.tau_u + self.epsilon
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PersistenceDiagram {
    pub bars: Vec<Bar>,
}

impl PersistenceDiagram {
    pub fn new(bars: Vec<Bar>) -> Self {
        PersistenceDiagram { bars }
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    pub fn in_dim(&self, dim: u8) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == dim)
    }

    /// Sorted `(birth, death)` values of one dimension; the multiset view.
    pub fn values(&self, dim: u8) -> Vec<(f64, f64)> {
        let mut v: Vec<(f64, f64)> = self.in_dim(dim).map(|b| (b.birth, b.death)).collect();
        v.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        v
    }

    /// Bars with strictly positive persistence.
    pub fn without_zero_persistence(&self) -> PersistenceDiagram {
        PersistenceDiagram {
            bars: self.bars.iter().copied().filter(|b| b.death > b.birth).collect(),
        }
    }

    pub fn significant(&self, dim: u8, params: &SignificanceParams) -> Vec<Bar> {
        self.in_dim(dim).copied().filter(|b| b.is_significant(params)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PersistenceConfig {
    /// Highest homology dimension to pair (0, 1 or 2).
    pub max_dim: usize,
    pub batch_size: usize,
    /// Also reduce the boundary columns of nontrivial deaths.
    pub boundary: bool,
}

impl Default for PersistenceConfig {
    fn default() -> Self {
        PersistenceConfig {
            max_dim: 2,
            batch_size: DEFAULT_BATCH_SIZE,
            boundary: true,
        }
    }
}

/// Everything the reduction produced: pairs, the nontrivial pairs per
/// dimension, and the reduced boundary columns `R`.
#[derive(Debug, Clone)]
pub struct Persistence {
    pub max_dim: usize,
    pub pairs: Vec<PersistencePair>,
    pub edges: EdgeReduction,
    /// Index `d - 1` holds the coboundary pass of dimension `d`.
    pub coboundary: Vec<CoboundaryReduction>,
    /// Index `d` holds the reduced columns of the `(d+1)`-simplices killing
    /// `d`-classes. Index 0 comes from the edge reduction.
    pub reduced: Vec<ReducedMatrix>,
}

impl Persistence {
    pub fn compute(f: &Filtration, config: &PersistenceConfig) -> Result<Self> {
        if config.max_dim > 2 {
            return Err(Error::InvalidInput(format!(
                "homology dimension {} is not supported",
                config.max_dim
            )));
        }
        if config.max_dim > 0 && f.max_dim() < config.max_dim + 1 {
            return Err(Error::InvalidInput(format!(
                "filtration holds simplices up to dimension {}, need {}",
                f.max_dim(),
                config.max_dim + 1
            )));
        }
        if config.batch_size == 0 {
            return Err(Error::InvalidInput("batch size must be at least 1".into()));
        }
        let edges = reduce_edges(f)?;
        let mut pairs = Vec::new();
        for &(v, e) in &edges.pairs {
            pairs.push(PersistencePair {
                dim: 0,
                birth_simplex: Simplex::new(0, v as u64),
                death_simplex: e.map(|k| Simplex::new(1, k)),
                birth: 0.0,
                death: e.map_or(f64::INFINITY, |k| f.edge(k).length),
                apparent: false,
            });
        }
        let mut coboundary = Vec::new();
        let mut reduced = vec![edges.matrix.clone()];
        let mut cleared: HashSet<u64> = edges.matrix.death_keys().collect();
        for d in 1..=config.max_dim {
            let cob = reduce_coboundary(f, d as u8, &cleared)?;
            for &(b, t) in &cob.pairs {
                pairs.push(make_pair(f, d as u8, b, t, false));
            }
            for &(b, t) in &cob.trivial {
                pairs.push(make_pair(f, d as u8, b, Some(t), true));
            }
            if config.boundary {
                let targets: Vec<(u64, u64)> = cob.pairs.iter().filter_map(|&(b, t)| t.map(|t| (b, t))).collect();
                reduced.push(reduce_boundary_targeted(f, d as u8 + 1, &targets, config.batch_size)?);
            }
            cleared = cob.deaths.clone();
            coboundary.push(cob);
        }
        pairs.sort_by(|a, b| {
            a.dim
                .cmp(&b.dim)
                .then(f.cmp_filtration(a.birth_simplex, b.birth_simplex))
        });
        Ok(Persistence {
            max_dim: config.max_dim,
            pairs,
            edges,
            coboundary,
            reduced,
        })
    }

    pub fn diagram(&self) -> PersistenceDiagram {
        PersistenceDiagram::new(self.pairs.iter().map(|p| p.bar()).collect())
    }

    pub fn pairs_in_dim(&self, dim: u8) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(move |p| p.dim == dim)
    }

    /// The nontrivial pairs of a dimension (`p⊥` for `dim >= 1`).
    pub fn nontrivial_pairs(&self, dim: u8) -> impl Iterator<Item = &PersistencePair> {
        self.pairs_in_dim(dim).filter(|p| !p.apparent)
    }

    /// Reduced matrix whose columns kill `dim`-classes.
    pub fn reduced(&self, dim: u8) -> Option<&ReducedMatrix> {
        self.reduced.get(dim as usize)
    }

    /// Death simplices of `dim`-classes, apparent ones included.
    pub fn deaths(&self, dim: u8) -> HashSet<u64> {
        if dim == 0 {
            self.edges.matrix.death_keys().collect()
        } else {
            self.coboundary
                .get(dim as usize - 1)
                .map(|c| c.deaths.clone())
                .unwrap_or_default()
        }
    }
}

fn make_pair(f: &Filtration, dim: u8, birth: u64, death: Option<u64>, apparent: bool) -> PersistencePair {
    let bs = Simplex::new(dim, birth);
    let ds = death.map(|t| Simplex::new(dim + 1, t));
    PersistencePair {
        dim,
        birth_simplex: bs,
        death_simplex: ds,
        birth: f.diameter(bs),
        death: ds.map_or(f64::INFINITY, |s| f.diameter(s)),
        apparent,
    }
}
