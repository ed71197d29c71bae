//! Feature statistics of localized voids against random covers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::complex::VertexId;
use crate::cover::members_in;
use crate::error::{Error, Result};
use crate::geometry::{euclidean, BoundingBox, Embedding, Point};
use crate::persistence::{PersistenceDiagram, SignificanceParams};
use crate::stochastic::trial_rng;

/// Max elementwise gap between the descending, zero-padded lists of
/// significant bar lengths. Essential bars count as `tau - birth`.
pub fn l0_distance(a: &PersistenceDiagram, b: &PersistenceDiagram, dim: u8, params: &SignificanceParams) -> f64 {
    let lengths = |pd: &PersistenceDiagram| {
        let mut v: Vec<f64> = pd
            .significant(dim, params)
            .iter()
            .map(|bar| bar.persistence_lower_bound(params.tau()))
            .collect();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    let (la, lb) = (lengths(a), lengths(b));
    let n = la.len().max(lb.len());
    (0..n)
        .map(|i| (la.get(i).copied().unwrap_or(0.0) - lb.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

pub const POLAR_BINS: usize = 10;
pub const AZIMUTH_BINS: usize = 20;

/// Fraction of the 10 × 20 grid of (polar, azimuth) pixels of size π/10
/// hit by the directions from `center` to the points.
pub fn spherical_uniformity(points: &[Point], center: &Point) -> f64 {
    let step = PI / 10.0;
    let mut hit: BTreeSet<(usize, usize)> = BTreeSet::new();
    for p in points {
        let d = [p[0] - center[0], p[1] - center[1], p[2] - center[2]];
        let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if r == 0.0 {
            log::warn!("point at the cover center skipped for spherical uniformity");
            continue;
        }
        let theta = (d[2] / r).clamp(-1.0, 1.0).acos();
        let mut phi = d[1].atan2(d[0]);
        if phi < 0.0 {
            phi += 2.0 * PI;
        }
        let i = ((theta / step) as usize).min(POLAR_BINS - 1);
        let j = ((phi / step) as usize).min(AZIMUTH_BINS - 1);
        hit.insert((i, j));
    }
    hit.len() as f64 / (POLAR_BINS * AZIMUTH_BINS) as f64
}

/// The four features compared between voids and random covers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoidFeatures {
    pub cover_size: f64,
    pub spherical_uniformity: f64,
    /// Distance from the box center to the nearest member.
    pub radius: f64,
    /// Smallest box side over the longest.
    pub eccentricity: f64,
}

impl VoidFeatures {
    pub fn as_array(&self) -> [f64; 4] {
        [
            self.cover_size,
            self.spherical_uniformity,
            self.radius,
            self.eccentricity,
        ]
    }
}

/// Features of a box and the embedded members inside it.
pub fn features_of(bbox: &BoundingBox, members: &[VertexId], embedding: &Embedding) -> VoidFeatures {
    let center = bbox.center();
    let pts: Vec<Point> = members.iter().map(|&v| embedding.point(v)).collect();
    let radius = pts.iter().map(|p| euclidean(p, &center)).fold(f64::INFINITY, f64::min);
    let dims = bbox.dims();
    let sides = &dims[..embedding.dim()];
    let longest = sides.iter().copied().fold(0.0, f64::max);
    let smallest = sides.iter().copied().fold(f64::INFINITY, f64::min);
    VoidFeatures {
        cover_size: members.len() as f64,
        spherical_uniformity: spherical_uniformity(&pts, &center),
        radius: if radius.is_finite() { radius } else { 0.0 },
        eccentricity: if longest > 0.0 { smallest / longest } else { 1.0 },
    }
}

/// Random covers with their rescaling and principal axes.
#[derive(Debug, Clone)]
pub struct SampleBank {
    pub samples: Vec<VoidFeatures>,
    pub attempts: usize,
    pub min: [f64; 4],
    pub max: [f64; 4],
    pub mean: [f64; 4],
    /// Columns are the principal axes, by decreasing variance.
    pub basis: Matrix4<f64>,
    pub variance_ratios: [f64; 4],
    /// Sample coordinates along the principal axes.
    pub projected: Vec<[f64; 4]>,
}

impl SampleBank {
    pub fn new(samples: Vec<VoidFeatures>, attempts: usize) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyBank);
        }
        let n = samples.len() as f64;
        let mut min = [f64::INFINITY; 4];
        let mut max = [f64::NEG_INFINITY; 4];
        for s in &samples {
            for (d, x) in s.as_array().into_iter().enumerate() {
                min[d] = min[d].min(x);
                max[d] = max[d].max(x);
            }
        }
        let rescale = |x: [f64; 4]| rescale(&x, &min, &max);
        let scaled: Vec<Vector4<f64>> = samples.iter().map(|s| rescale(s.as_array())).collect();
        let mean = scaled.iter().fold(Vector4::zeros(), |a, v| a + v) / n;
        let mut cov = Matrix4::zeros();
        for v in &scaled {
            let c = v - mean;
            cov += c * c.transpose();
        }
        cov /= n;
        let eig = SymmetricEigen::new(cov);
        let mut idx = [0usize, 1, 2, 3];
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));
        let mut basis = Matrix4::zeros();
        for (c, &i) in idx.iter().enumerate() {
            let mut v = eig.eigenvectors.column(i).into_owned();
            let lead = (0..4)
                .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(b.cmp(&a)))
                .unwrap();
            if v[lead] < 0.0 {
                v = -v;
            }
            basis.set_column(c, &v);
        }
        let total: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0)).sum();
        let mut variance_ratios = [0.0; 4];
        for (c, &i) in idx.iter().enumerate() {
            variance_ratios[c] = if total > 0.0 {
                eig.eigenvalues[i].max(0.0) / total
            } else {
                0.25
            };
        }
        let projected = scaled
            .iter()
            .map(|v| {
                let h = basis.transpose() * (v - mean);
                [h[0], h[1], h[2], h[3]]
            })
            .collect();
        Ok(SampleBank {
            samples,
            attempts,
            min,
            max,
            mean: [mean[0], mean[1], mean[2], mean[3]],
            basis,
            variance_ratios,
            projected,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Coordinates of a feature set along the bank's principal axes, after
    /// rescaling with the bank's extrema (no clipping).
    pub fn project(&self, features: &VoidFeatures) -> [f64; 4] {
        let v = rescale(&features.as_array(), &self.min, &self.max);
        let h = self.basis.transpose() * (v - Vector4::from(self.mean));
        [h[0], h[1], h[2], h[3]]
    }

    /// Product over the four axes of the fraction of samples whose
    /// coordinate is strictly greater than the void's.
    pub fn pseudo_p_value(&self, features: &VoidFeatures) -> f64 {
        let w = self.project(features);
        let n = self.projected.len() as f64;
        (0..4)
            .map(|d| self.projected.iter().filter(|h| h[d] > w[d]).count() as f64 / n)
            .product()
    }
}

fn rescale(x: &[f64; 4], min: &[f64; 4], max: &[f64; 4]) -> Vector4<f64> {
    Vector4::from_fn(|d, _| {
        let span = max[d] - min[d];
        if span > 0.0 {
            (x[d] - min[d]) / span
        } else {
            0.0
        }
    })
}

/// Draws processed per parallel round.
const ROUND: usize = 1024;

/// Runs numbered draws in parallel rounds and keeps the first `n_samples`
/// successes in draw order. With `collapse`, an acceptance rate below 1e-3
/// after 1000 draws is an error.
fn collect_draws(
    draw: impl Fn(usize) -> Option<VoidFeatures> + Sync,
    n_samples: usize,
    max_attempts: usize,
    collapse: bool,
) -> Result<(Vec<VoidFeatures>, usize)> {
    let mut samples = Vec::with_capacity(n_samples);
    let mut attempts = 0;
    while samples.len() < n_samples && attempts < max_attempts {
        let round = ROUND.min(max_attempts - attempts);
        let got: Vec<Option<VoidFeatures>> = (attempts..attempts + round).into_par_iter().map(&draw).collect();
        for f in got {
            if samples.len() == n_samples {
                break;
            }
            attempts += 1;
            samples.extend(f);
        }
        if collapse && attempts >= 1000 && (samples.len() as f64) < 1e-3 * attempts as f64 {
            return Err(Error::AcceptanceCollapse {
                accepted: samples.len(),
                attempts,
            });
        }
    }
    Ok((samples, attempts))
}

/// Random boxes with side lengths between the smallest and largest sides of
/// `covers`, centered in random non-empty voxels of a grid with the smallest
/// sides. Boxes holding fewer points than the smallest cover are discarded.
pub fn spatial_sample(
    embedding: &Embedding,
    covers: &[(BoundingBox, usize)],
    n_samples: usize,
    max_attempts: usize,
    seed: u64,
) -> Result<SampleBank> {
    if covers.is_empty() {
        return Err(Error::InvalidInput("spatial sampling needs at least one cover".into()));
    }
    let mut dmin = [f64::INFINITY; 3];
    let mut dmax = [0.0f64; 3];
    for (b, _) in covers {
        let d = b.dims();
        for k in 0..3 {
            dmin[k] = dmin[k].min(d[k]);
            dmax[k] = dmax[k].max(d[k]);
        }
    }
    let n_min = covers.iter().map(|c| c.1).min().unwrap_or(0);
    let origin = BoundingBox::of_points(embedding.coords())
        .ok_or_else(|| Error::InvalidInput("empty embedding".into()))?
        .lo;
    let voxel = |p: &Point| -> [i64; 3] {
        let mut k = [0i64; 3];
        for a in 0..3 {
            if dmin[a] > 0.0 {
                k[a] = ((p[a] - origin[a]) / dmin[a]).floor() as i64;
            }
        }
        k
    };
    let voxels: Vec<[i64; 3]> = embedding
        .coords()
        .iter()
        .map(voxel)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let draw = |i: usize| -> Option<VoidFeatures> {
        let mut rng = trial_rng(seed, 0, i as u64);
        let v = voxels.choose(&mut rng)?;
        let mut center = [0.0; 3];
        let mut dims = [0.0; 3];
        for a in 0..3 {
            center[a] = origin[a] + (v[a] as f64 + rng.gen::<f64>()) * dmin[a];
            dims[a] = if dmax[a] > dmin[a] {
                rng.gen_range(dmin[a]..=dmax[a])
            } else {
                dmin[a]
            };
        }
        let bbox = BoundingBox::centered(center, dims);
        let members = members_in(&bbox, embedding);
        (members.len() >= n_min.max(1)).then(|| features_of(&bbox, &members, embedding))
    };

    let (samples, attempts) = collect_draws(draw, n_samples, max_attempts, false)?;
    SampleBank::new(samples, attempts)
}

/// Connected subgraphs of the `tau_u` neighborhood graph with a random size
/// in `[lo, hi]` and minimum induced degree 3, featurized by their covers.
pub fn graphical_sample(
    embedding: &Embedding,
    tau_u: f64,
    size_range: (usize, usize),
    n_samples: usize,
    max_attempts: usize,
    seed: u64,
) -> Result<SampleBank> {
    let (lo, hi) = size_range;
    if lo < 4 || hi < lo {
        return Err(Error::InvalidInput(format!("invalid subgraph size range [{lo}, {hi}]")));
    }
    let n = embedding.len();
    let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for (u, v, _) in embedding.pairs_within(tau_u) {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let draw = |i: usize| -> Option<VoidFeatures> {
        let mut rng = trial_rng(seed, 1, i as u64);
        let nodes = grow_subgraph(&adj, &mut rng, lo, hi)?;
        let pts: Vec<Point> = nodes.iter().map(|&v| embedding.point(v)).collect();
        let bbox = BoundingBox::of_points(&pts)?;
        let members = members_in(&bbox, embedding);
        Some(features_of(&bbox, &members, embedding))
    };

    let (samples, attempts) = collect_draws(draw, n_samples, max_attempts, true)?;
    SampleBank::new(samples, attempts)
}

/// Grows a random connected node set of a random size in `[lo, hi]`. Each
/// added node must already touch `min(3, size)` nodes of the set, so the first
/// four form a clique and every later node enters with degree at least 3.
/// `None` when no frontier node qualifies before the target size.
pub fn grow_subgraph(adj: &[Vec<VertexId>], rng: &mut impl Rng, lo: usize, hi: usize) -> Option<Vec<VertexId>> {
    if adj.is_empty() {
        return None;
    }
    let target = rng.gen_range(lo..=hi);
    let start = rng.gen_range(0..adj.len()) as VertexId;
    let mut inside: BTreeSet<VertexId> = BTreeSet::from([start]);
    // frontier node -> neighbors inside
    let mut frontier: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &w in &adj[start as usize] {
        *frontier.entry(w).or_insert(0) += 1;
    }
    while inside.len() < target {
        let need = inside.len().min(3);
        let candidates: Vec<VertexId> = frontier.iter().filter(|(_, &k)| k >= need).map(|(&v, _)| v).collect();
        let &v = candidates.choose(rng)?;
        frontier.remove(&v);
        inside.insert(v);
        for &w in &adj[v as usize] {
            if !inside.contains(&w) {
                *frontier.entry(w).or_insert(0) += 1;
            }
        }
    }
    let ok = inside
        .iter()
        .all(|&v| adj[v as usize].iter().filter(|w| inside.contains(w)).count() >= 3);
    ok.then(|| inside.into_iter().collect())
}

/// Minimum degree of the subgraph induced by `nodes`.
pub fn induced_min_degree(adj: &[Vec<VertexId>], nodes: &[VertexId]) -> usize {
    let set: HashMap<VertexId, ()> = nodes.iter().map(|&v| (v, ())).collect();
    nodes
        .iter()
        .map(|&v| adj[v as usize].iter().filter(|w| set.contains_key(w)).count())
        .min()
        .unwrap_or(0)
}

/// `-log10 p`, infinite for `p == 0`.
pub fn neg_log10(p: f64) -> f64 {
    if p <= 0.0 {
        f64::INFINITY
    } else {
        -p.log10()
    }
}
