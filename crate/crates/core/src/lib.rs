//! Persistent homology for sparse metric data with tight, localized
//! representative cycles.
//!
//! The pipeline runs in stages: build a Vietoris–Rips [`Filtration`], pair
//! simplices with [`Persistence::compute`], extract birth cycles, shorten and
//! smooth them, then localize significant features with covers over an
//! embedding and refine the covers stochastically.

pub mod birth_cycles;
pub mod chain;
pub mod complex;
pub mod cover;
pub mod error;
pub mod geometry;
pub mod io;
pub mod persistence;
pub mod pipeline;
pub mod refine;
pub mod stats;
pub mod stochastic;

pub use chain::Chain;
pub use complex::{Edge, Filtration, Metric, Simplex, SparseMetricSpace, VertexId};
pub use error::{Error, Result};
pub use geometry::{BoundingBox, Embedding, Point};
pub use persistence::{Bar, Persistence, PersistenceConfig, PersistenceDiagram, PersistencePair, SignificanceParams};
