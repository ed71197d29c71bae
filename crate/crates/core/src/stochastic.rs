//! Randomized refinement of a cover: jitter the embedded points, relabel
//! equal-length edges, recompute representatives per trial and keep the
//! set whose longest boundaries are shortest.
//!
//! Every random draw comes from a ChaCha8 stream addressed by
//! `(seed, cover id, trial id)`, so trials can run in any order.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::birth_cycles::{BirthCycleConfig, BirthCycleEngine};
use crate::complex::{Filtration, SparseMetricSpace, VertexId};
use crate::cover::{count_significant, Cover};
use crate::error::{Error, Result};
use crate::geometry::{Embedding, Point};
use crate::persistence::{Persistence, PersistenceConfig, SignificanceParams};
use crate::refine::shorten::{shorten_cycles, ShortenConfig};

pub const DEFAULT_SIMPLEX_BUDGET: u128 = 50_000_000;
const MAX_TRIALS_PER_AXIS: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefineConfig {
    /// Perturbations per cover; 0 keeps the embedding as is.
    pub n_pert: usize,
    /// Permutation draws per perturbation (duplicates discarded).
    pub n_perm: usize,
    pub seed: u64,
    pub m_max: u32,
    /// Largest simplex count attempted at the cover's full diameter.
    pub simplex_budget: u128,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            n_pert: 10,
            n_perm: 10,
            seed: 0,
            m_max: 20,
            simplex_budget: DEFAULT_SIMPLEX_BUDGET,
        }
    }
}

/// RNG for one trial of one cover.
pub fn trial_rng(seed: u64, cover_id: u64, trial_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(cover_id);
    rng.set_word_pos((trial_id as u128) << 40);
    rng
}

fn perturbation_trial(m: u32, k: usize) -> u64 {
    ((m as u64) << 16) | k as u64
}

fn permutation_trial(k: usize, j: usize) -> u64 {
    (1 << 26) | ((k as u64) << 12) | j as u64
}

/// Uniform point of the closed ball of `radius` around the origin, by
/// rejection from the enclosing cube. Planar embeddings stay planar.
pub fn sample_ball(rng: &mut impl Rng, radius: f64, dim: usize) -> Point {
    if radius <= 0.0 {
        return [0.0; 3];
    }
    loop {
        let mut p = [0.0; 3];
        for c in p.iter_mut().take(dim) {
            *c = rng.gen_range(-1.0..=1.0);
        }
        if p.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
            return p.map(|c| c * radius);
        }
    }
}

/// Moves each point uniformly within a ball of radius
/// `min(nearest-neighbor distance / 3, delta)`.
pub fn perturb_points(embedding: &Embedding, delta: f64, rng: &mut impl Rng) -> Embedding {
    let nn = embedding.nearest_neighbor_distances();
    let coords = embedding
        .coords()
        .iter()
        .zip(nn)
        .map(|(p, d)| {
            let r = (d / 3.0).min(delta);
            let o = sample_ball(rng, r, embedding.dim());
            [p[0] + o[0], p[1] + o[1], p[2] + o[2]]
        })
        .collect();
    embedding.with_coords(coords)
}

#[derive(Debug, Clone)]
pub struct Calibration {
    pub delta: f64,
    pub m: u32,
    /// The accepted perturbations of the cover's points (cover-local ids).
    pub perturbations: Vec<Embedding>,
}

/// Finds the smallest `m >= 1` for which `n_pert` perturbations with
/// `delta = (epsilon / 3) / 2^m` all keep the significant count of `local`.
pub fn calibrate_delta(
    local: &Embedding,
    n_sig: usize,
    dim: u8,
    params: &SignificanceParams,
    config: &RefineConfig,
    cover_id: u64,
) -> Result<Calibration> {
    let all: Vec<VertexId> = (0..local.len() as VertexId).collect();
    for m in 1..=config.m_max {
        let delta = (params.epsilon / 3.0) / 2f64.powi(m as i32);
        let perturbations: Vec<Embedding> = (0..config.n_pert)
            .map(|k| {
                let mut rng = trial_rng(config.seed, cover_id, perturbation_trial(m, k));
                perturb_points(local, delta, &mut rng)
            })
            .collect();
        let counts: Result<Vec<usize>> = perturbations
            .par_iter()
            .map(|e| count_significant(&all, e, dim, params))
            .collect();
        if counts?.iter().all(|&c| c == n_sig) {
            return Ok(Calibration {
                delta,
                m,
                perturbations,
            });
        }
    }
    Err(Error::CalibrationFailed { m_max: config.m_max })
}

/// Edge order of `space` (indices into `space.edges()`) with every run of
/// bit-equal lengths shuffled.
pub fn permuted_edge_order(space: &SparseMetricSpace, rng: &mut impl Rng) -> Vec<usize> {
    let edges = space.edges();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&edges[a], &edges[b]);
        x.length.total_cmp(&y.length).then((x.u, x.v).cmp(&(y.u, y.v)))
    });
    let mut start = 0;
    while start < order.len() {
        let len = edges[order[start]].length;
        let mut end = start + 1;
        while end < order.len() && edges[order[end]].length.to_bits() == len.to_bits() {
            end += 1;
        }
        order[start..end].shuffle(rng);
        start = end;
    }
    order
}

/// Filtration with equal-length edges relabeled at random.
pub fn permute_filtration(space: &SparseMetricSpace, max_dim: usize, rng: &mut impl Rng) -> Result<Filtration> {
    Filtration::with_edge_order(space, max_dim, &permuted_edge_order(space, rng))
}

/// A representative as sorted vertex tuples in global ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Boundary {
    pub dim: u8,
    pub simplices: Vec<Vec<VertexId>>,
}

impl Boundary {
    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Trial {
    pub perturbation: usize,
    pub permutation: usize,
    /// Representatives came from birth cycles at `tau` because the full
    /// complex was over budget.
    pub fallback: bool,
    pub boundaries: Vec<Boundary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimalSet {
    /// Trials attaining the minimum.
    pub trials: Vec<usize>,
    /// The unique minimal set, or one boundary holding the union of the
    /// simplices of all tied sets.
    pub boundaries: Vec<Boundary>,
}

impl MinimalSet {
    pub fn is_unique(&self) -> bool {
        self.trials.len() == 1
    }
}

fn length_key(set: &[Boundary], arity: usize) -> Vec<usize> {
    let mut v: Vec<usize> = set.iter().map(|b| b.len()).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v.resize(arity, 0);
    v
}

/// Picks the trial set whose decreasing length vector (zero padded) is
/// lexicographically smallest.
pub fn select_minimal(trials: &[Vec<Boundary>]) -> Option<MinimalSet> {
    let arity = trials.iter().map(|t| t.len()).max()?;
    let keys: Vec<Vec<usize>> = trials.iter().map(|t| length_key(t, arity)).collect();
    let best = keys.iter().min()?;
    let tied: Vec<usize> = (0..trials.len()).filter(|&i| &keys[i] == best).collect();
    if tied.len() == 1 {
        return Some(MinimalSet {
            boundaries: trials[tied[0]].clone(),
            trials: tied,
        });
    }
    let dim = tied
        .iter()
        .flat_map(|&i| trials[i].iter())
        .map(|b| b.dim)
        .next()
        .unwrap_or(0);
    let union: std::collections::BTreeSet<Vec<VertexId>> = tied
        .iter()
        .flat_map(|&i| trials[i].iter())
        .flat_map(|b| b.simplices.iter().cloned())
        .collect();
    Some(MinimalSet {
        boundaries: vec![Boundary {
            dim,
            simplices: union.into_iter().collect(),
        }],
        trials: tied,
    })
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

/// Simplices of the complete complex on `n` points up to `max_dim`.
pub fn complete_complex_size(n: usize, max_dim: usize) -> u128 {
    (1..=max_dim as u128 + 1)
        .map(|k| binom(n as u128, k))
        .fold(0, u128::saturating_add)
}

fn to_boundary(chain: &crate::chain::Chain, f: &Filtration, members: &[VertexId]) -> Boundary {
    let mut simplices: Vec<Vec<VertexId>> = chain
        .iter()
        .map(|s| {
            let mut v: Vec<VertexId> = f.vertices(s).iter().map(|&x| members[x as usize]).collect();
            v.sort_unstable();
            v
        })
        .collect();
    simplices.sort();
    Boundary {
        dim: chain.dim,
        simplices,
    }
}

/// Representatives of the significant `dim`-features of one trial.
fn trial_boundaries(
    space: &SparseMetricSpace,
    order: &[usize],
    members: &[VertexId],
    dim: u8,
    params: &SignificanceParams,
    full: bool,
) -> Result<Vec<Boundary>> {
    let f = Filtration::with_edge_order(space, dim as usize + 1, order)?;
    let p = Persistence::compute(
        &f,
        &PersistenceConfig {
            max_dim: dim as usize,
            ..Default::default()
        },
    )?;
    let significant: Vec<_> = p
        .pairs_in_dim(dim)
        .filter(|pair| pair.bar().is_significant(params))
        .copied()
        .collect();
    if full {
        // every class dies by the full diameter: its boundary is R(death)
        let r = p.reduced(dim).expect("boundary reduction enabled");
        let mut out = Vec::new();
        for pair in significant {
            let death = pair
                .death_simplex
                .ok_or_else(|| Error::Internal("essential class at full diameter".into()))?;
            let col = r
                .reduced_column(&f, death.key)
                .ok_or_else(|| Error::Internal(format!("no reduced column for {}", death.key)))?;
            out.push(to_boundary(&col, &f, members));
        }
        Ok(out)
    } else {
        let mut engine = BirthCycleEngine::new(&f, &p, dim, BirthCycleConfig::default())?;
        let mut cycles = Vec::new();
        for pair in significant {
            cycles.push(engine.birth_cycle(pair.birth_simplex.key)?);
        }
        let (short, _) = shorten_cycles(cycles, &ShortenConfig::for_dim(dim));
        Ok(short.iter().map(|c| to_boundary(c, &f, members)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct Refinement {
    pub cover_id: usize,
    /// `None` when calibration failed or no perturbations were requested.
    pub calibration: Option<(f64, u32)>,
    pub trials: Vec<Trial>,
    pub failed_trials: usize,
    pub minimal: Option<MinimalSet>,
}

/// Runs every perturbation × unique permutation of a cover and selects the
/// minimal representative set.
pub fn run_refinement(
    cover: &Cover,
    embedding: &Embedding,
    dim: u8,
    params: &SignificanceParams,
    config: &RefineConfig,
) -> Result<Refinement> {
    if config.n_pert >= MAX_TRIALS_PER_AXIS || config.n_perm >= MAX_TRIALS_PER_AXIS {
        return Err(Error::InvalidInput(format!(
            "n_pert and n_perm must be below {MAX_TRIALS_PER_AXIS}"
        )));
    }
    let local = embedding.subset(&cover.members);
    let cover_id = cover.id as u64;

    let (calibration, embeddings) = if config.n_pert == 0 {
        (None, vec![local.clone()])
    } else {
        match calibrate_delta(&local, cover.n_sig, dim, params, config, cover_id) {
            Ok(c) => (Some((c.delta, c.m)), c.perturbations),
            Err(Error::CalibrationFailed { m_max }) => {
                log::warn!(
                    "cover {}: calibration failed after {m_max} halvings, unperturbed",
                    cover.id
                );
                (None, vec![local.clone()])
            }
            Err(e) => return Err(e),
        }
    };

    // the full diameter of the cover when the complete complex fits the budget
    let full = complete_complex_size(local.len(), dim as usize + 1) <= config.simplex_budget;
    let threshold = if full { f64::INFINITY } else { params.tau() };
    let spaces: Vec<SparseMetricSpace> = embeddings
        .iter()
        .map(|e| SparseMetricSpace::from_embedding(e, threshold))
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for (k, space) in spaces.iter().enumerate() {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        for j in 0..config.n_perm.max(1) {
            let mut rng = trial_rng(config.seed, cover_id, permutation_trial(k, j));
            let order = permuted_edge_order(space, &mut rng);
            if seen.insert(order.clone()) {
                jobs.push((k, j, order));
            }
        }
    }

    let results: Vec<(usize, usize, Result<Vec<Boundary>>)> = jobs
        .par_iter()
        .map(|(k, j, order)| {
            let r = trial_boundaries(&spaces[*k], order, &cover.members, dim, params, full);
            (*k, *j, r)
        })
        .collect();

    let mut trials = Vec::new();
    let mut failed = 0;
    for (k, j, r) in results {
        match r {
            Ok(boundaries) => trials.push(Trial {
                perturbation: k,
                permutation: j,
                fallback: !full,
                boundaries,
            }),
            Err(e) => {
                failed += 1;
                log::warn!("cover {} trial ({k}, {j}) failed: {e}", cover.id);
            }
        }
    }
    let sets: Vec<Vec<Boundary>> = trials.iter().map(|t| t.boundaries.clone()).collect();
    Ok(Refinement {
        cover_id: cover.id,
        calibration,
        minimal: select_minimal(&sets),
        trials,
        failed_trials: failed,
    })
}
