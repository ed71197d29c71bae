//! Covers of cycles in an embedding and their graphical contraction.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::chain::{intersection_size, Chain};
use crate::complex::{Filtration, Metric, SparseMetricSpace, VertexId};
use crate::error::Result;
use crate::geometry::{BoundingBox, Embedding};
use crate::persistence::{Persistence, PersistenceConfig, SignificanceParams};

/// Axis-aligned box around a cycle plus every data point inside or on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Cover {
    pub id: usize,
    pub bbox: BoundingBox,
    /// Sorted global vertex ids.
    pub members: Vec<VertexId>,
    pub n_sig: usize,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn is_subset_of(&self, other: &Cover) -> bool {
        self.len() <= other.len()
            && intersection_size(&members_u64(&self.members), &members_u64(&other.members)) == self.len()
    }
}

fn members_u64(m: &[VertexId]) -> Vec<u64> {
    m.iter().map(|&v| v as u64).collect()
}

/// Upper bound on the persistence of any class a cycle can wrap: the largest
/// pairwise distance among its vertices minus its longest edge. Pairs with no
/// stored distance count as infinitely far apart.
pub fn max_persistence_estimate(cycle: &Chain, f: &Filtration, metric: &impl Metric) -> f64 {
    let vs = cycle.vertex_set(f);
    let mut far: f64 = 0.0;
    for (i, &a) in vs.iter().enumerate() {
        for &b in &vs[i + 1..] {
            match metric.distance(a, b) {
                Some(d) => far = far.max(d),
                None => return f64::INFINITY,
            }
        }
    }
    far - cycle.max_diameter(f)
}

/// Every vertex whose embedded point lies inside or on `bbox`.
pub fn members_in(bbox: &BoundingBox, embedding: &Embedding) -> Vec<VertexId> {
    embedding
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, p)| bbox.contains(p))
        .map(|(i, _)| i as VertexId)
        .collect()
}

/// Smallest box around `vertices` and the data points it holds. `n_sig` is
/// left at zero.
pub fn cover_of(id: usize, vertices: &[VertexId], embedding: &Embedding) -> Option<Cover> {
    let pts: Vec<_> = vertices.iter().map(|&v| embedding.point(v)).collect();
    let bbox = BoundingBox::of_points(&pts)?;
    Some(Cover {
        id,
        bbox,
        members: members_in(&bbox, embedding),
        n_sig: 0,
    })
}

/// Significant `dim`-features of a metric space, computed up to `tau`.
pub fn count_significant_in(space: &SparseMetricSpace, dim: u8, params: &SignificanceParams) -> Result<usize> {
    if space.n_vertices() == 0 {
        return Ok(0);
    }
    let space = space.with_threshold(params.tau());
    let f = Filtration::build(&space, dim as usize + 1)?;
    let p = Persistence::compute(
        &f,
        &PersistenceConfig {
            max_dim: dim as usize,
            boundary: false,
            ..Default::default()
        },
    )?;
    Ok(p.diagram().significant(dim, params).len())
}

/// Significant `dim`-features among `members`, with Euclidean distances taken
/// from the embedding.
pub fn count_significant(
    members: &[VertexId],
    embedding: &Embedding,
    dim: u8,
    params: &SignificanceParams,
) -> Result<usize> {
    let sub = embedding.subset(members);
    let space = SparseMetricSpace::from_embedding(&sub, params.tau())?;
    count_significant_in(&space, dim, params)
}

/// Fills in `n_sig` for every cover, in parallel.
pub fn count_all(covers: &mut [Cover], embedding: &Embedding, dim: u8, params: &SignificanceParams) -> Result<()> {
    let counts: Result<Vec<usize>> = covers
        .par_iter()
        .map(|c| count_significant(&c.members, embedding, dim, params))
        .collect();
    for (c, n) in covers.iter_mut().zip(counts?) {
        c.n_sig = n;
    }
    Ok(())
}

/// Index pairs of covers whose member sets intersect.
pub fn cover_intersection_graph(covers: &[Cover]) -> Vec<(usize, usize)> {
    let sets: Vec<Vec<u64>> = covers.iter().map(|c| members_u64(&c.members)).collect();
    let mut edges = Vec::new();
    for i in 0..covers.len() {
        for j in i + 1..covers.len() {
            if intersection_size(&sets[i], &sets[j]) > 0 {
                edges.push((i, j));
            }
        }
    }
    edges
}

/// Connected components of a graph on `n` nodes, each sorted ascending.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionEvent {
    /// `removed` held `kept` with the same significant count.
    Subset { removed: usize, kept: usize },
    /// `removed` covers replaced by their intersection `added`.
    Intersection { removed: Vec<usize>, added: usize },
}

#[derive(Debug, Clone, Default)]
pub struct ContractionLog {
    pub events: Vec<ContractionEvent>,
    /// Diagrams computed for candidate intersections.
    pub evaluations: usize,
}

fn cmp_covers(a: &Cover, b: &Cover) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            let ka = a.bbox.lo.iter().chain(&a.bbox.hi);
            let kb = b.bbox.lo.iter().chain(&b.bbox.hi);
            ka.zip(kb)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .then(a.id.cmp(&b.id))
}

/// Drops a cover when a strictly smaller cover with the same count sits
/// inside it, and collapses covers with identical member sets.
fn subset_pass(covers: &mut Vec<Cover>, log: &mut ContractionLog) {
    covers.sort_by(cmp_covers);
    let mut keep = vec![true; covers.len()];
    for i in 0..covers.len() {
        for j in 0..covers.len() {
            if i == j || !keep[j] || !keep[i] {
                continue;
            }
            let (ci, cj) = (&covers[i], &covers[j]);
            // j inside i, i goes; for equal sets the later one goes
            if ci.n_sig == cj.n_sig && cj.is_subset_of(ci) && (cj.len() < ci.len() || j < i) {
                keep[i] = false;
                log.events.push(ContractionEvent::Subset {
                    removed: ci.id,
                    kept: cj.id,
                });
            }
        }
    }
    let mut k = keep.into_iter();
    covers.retain(|_| k.next().unwrap());
}

/// Shrinks a set of covers with the subset and intersection rules until no
/// pair changes. Every input cover must have `n_sig > 0`. Intersections with
/// fewer than four members are never evaluated.
pub fn contract_covers(
    covers: Vec<Cover>,
    embedding: &Embedding,
    dim: u8,
    params: &SignificanceParams,
) -> Result<(Vec<Cover>, ContractionLog)> {
    let mut log = ContractionLog::default();
    let mut next_id = covers.iter().map(|c| c.id + 1).max().unwrap_or(0);
    let mut covers = covers;
    subset_pass(&mut covers, &mut log);

    let edges: Vec<(usize, usize)> = cover_intersection_graph(&covers)
        .into_iter()
        .filter(|&(i, j)| {
            let k = intersection_size(&members_u64(&covers[i].members), &members_u64(&covers[j].members));
            k != covers[i].len() && k != covers[j].len()
        })
        .collect();
    let comps = components(covers.len(), &edges);

    // n(intersection) depends only on the member set
    let mut counted: HashMap<Vec<VertexId>, usize> = HashMap::new();
    let mut out = Vec::new();
    for comp in comps {
        let mut g: Vec<Cover> = comp.iter().map(|&i| covers[i].clone()).collect();
        let mut update = true;
        while update {
            update = false;
            g.sort_by(cmp_covers);
            'pairs: for i in 0..g.len() {
                for j in i + 1..g.len() {
                    let common: Vec<VertexId> = {
                        let b: BTreeSet<VertexId> = g[j].members.iter().copied().collect();
                        g[i].members.iter().copied().filter(|v| b.contains(v)).collect()
                    };
                    if common.len() < 4 || common.len() == g[i].len() || common.len() == g[j].len() {
                        continue;
                    }
                    let n = match counted.get(&common) {
                        Some(&n) => n,
                        None => {
                            let n = count_significant(&common, embedding, dim, params)?;
                            log.evaluations += 1;
                            counted.insert(common.clone(), n);
                            n
                        }
                    };
                    let drop_i = n == g[i].n_sig;
                    let drop_j = n == g[j].n_sig;
                    if !(drop_i || drop_j) {
                        continue;
                    }
                    let ck = Cover {
                        id: next_id,
                        bbox: g[i].bbox.intersection(&g[j].bbox),
                        members: common,
                        n_sig: n,
                    };
                    next_id += 1;
                    let mut removed = Vec::new();
                    if drop_j {
                        removed.push(g.remove(j).id);
                    }
                    if drop_i {
                        removed.push(g.remove(i).id);
                    }
                    log.events
                        .push(ContractionEvent::Intersection { removed, added: ck.id });
                    g.retain(|c| {
                        let gone = c.n_sig == ck.n_sig && ck.is_subset_of(c);
                        if gone {
                            log.events.push(ContractionEvent::Subset {
                                removed: c.id,
                                kept: ck.id,
                            });
                        }
                        !gone
                    });
                    g.push(ck);
                    update = true;
                    break 'pairs;
                }
            }
        }
        out.extend(g);
    }
    out.sort_by(cmp_covers);
    Ok((out, log))
}
