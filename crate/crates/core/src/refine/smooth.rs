//! Local smoothing of representatives against small filled simplices.
//!
//! A move adds the boundary of a triangle (dimension 1) or tetrahedron
//! (dimension 2) whose diameter is at most `tau_u`, so the class in the
//! complex at `tau_u` never changes.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::chain::Chain;
use crate::complex::{Filtration, Metric, Simplex, VertexId};

/// The filled simplex a smoothing move used.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothMove {
    pub vertices: Vec<VertexId>,
    pub diameter: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedWalk {
    /// Closed walk without the repeated first vertex.
    pub vertices: Vec<VertexId>,
    /// Collapsed to two vertices (or fewer): the loop was filled in.
    pub degenerate: bool,
    pub moves: Vec<SmoothMove>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothedSurface {
    pub triangles: Vec<[VertexId; 3]>,
    pub moves: Vec<SmoothMove>,
    /// Tetrahedron-boundary components dropped at the end.
    pub dropped_components: usize,
}

/// Diameter of a vertex set, `None` if some pair has no distance.
pub fn diameter_of(vertices: &[VertexId], metric: &impl Metric) -> Option<f64> {
    let mut d: f64 = 0.0;
    for (i, &a) in vertices.iter().enumerate() {
        for &b in &vertices[i + 1..] {
            d = d.max(metric.distance(a, b)?);
        }
    }
    Some(d)
}

/// Drops `v_i` from the closed walk whenever the triangle
/// `(v_{i-1}, v_i, v_{i+1})` has diameter at most `tau_u`. Scans cyclically
/// from `v_0` and repeats until nothing changes.
pub fn smooth_h1(walk: &[VertexId], metric: &impl Metric, tau_u: f64) -> SmoothedWalk {
    let mut v = walk.to_vec();
    let mut moves = Vec::new();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < v.len() && v.len() > 2 {
            let n = v.len();
            let (a, b, c) = (v[(i + n - 1) % n], v[i], v[(i + 1) % n]);
            let d = if a != c { diameter_of(&[a, b, c], metric) } else { None };
            match d {
                Some(d) if d <= tau_u => {
                    moves.push(SmoothMove {
                        vertices: vec![a, b, c],
                        diameter: d,
                    });
                    v.remove(i);
                    changed = true;
                }
                _ => i += 1,
            }
        }
        if !changed || v.len() <= 2 {
            break;
        }
    }
    SmoothedWalk {
        degenerate: v.len() <= 2,
        vertices: v,
        moves,
    }
}

/// Vertex walk of a simple 1-cycle, starting at its smallest vertex and
/// heading to the smaller neighbor. `None` unless every vertex has degree two
/// and the edges form one loop.
pub fn chain_to_walk(chain: &Chain, f: &Filtration) -> Option<Vec<VertexId>> {
    if chain.dim != 1 || chain.is_empty() {
        return None;
    }
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for s in chain.iter() {
        let e = f.edge(s.key);
        adj.entry(e.u).or_default().push(e.v);
        adj.entry(e.v).or_default().push(e.u);
    }
    if adj.values().any(|n| n.len() != 2) {
        return None;
    }
    let (&start, first) = adj.iter().next()?;
    let mut walk = vec![start];
    let mut prev = start;
    let mut cur = *first.iter().min()?;
    while cur != start {
        walk.push(cur);
        let n = &adj[&cur];
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
        if walk.len() > adj.len() {
            return None;
        }
    }
    (walk.len() == adj.len()).then_some(walk)
}

/// Edge chain of a closed walk; `None` if a step is not an edge of `f`.
pub fn walk_to_chain(walk: &[VertexId], f: &Filtration) -> Option<Chain> {
    let n = walk.len();
    if n < 2 {
        return Some(Chain::new(1, Vec::new()));
    }
    let mut keys = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b) = (walk[i], walk[(i + 1) % n]);
        keys.push(f.edge_index(a, b)?);
    }
    Some(Chain::new(1, keys))
}

fn faces(p: &[VertexId; 4]) -> [[VertexId; 3]; 4] {
    [
        [p[1], p[2], p[3]],
        [p[0], p[2], p[3]],
        [p[0], p[1], p[3]],
        [p[0], p[1], p[2]],
    ]
}

fn sorted3(mut t: [VertexId; 3]) -> [VertexId; 3] {
    t.sort_unstable();
    t
}

/// Repeatedly replaces three faces of a tetrahedron (diameter at most
/// `tau_u`, fourth face absent) by the fourth face, always taking the
/// smallest-diameter tetrahedron available. Components that end up as the
/// boundary of one such tetrahedron are dropped.
pub fn smooth_h2(triangles: &[[VertexId; 3]], metric: &impl Metric, tau_u: f64) -> SmoothedSurface {
    let mut b: BTreeSet<[VertexId; 3]> = triangles.iter().map(|&t| sorted3(t)).collect();
    let mut moves = Vec::new();
    loop {
        let mut by_edge: HashMap<[VertexId; 2], Vec<[VertexId; 3]>> = HashMap::new();
        for t in &b {
            for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                by_edge.entry(e).or_default().push(*t);
            }
        }
        let mut candidates: BTreeSet<[VertexId; 4]> = BTreeSet::new();
        for list in by_edge.values() {
            for (i, t1) in list.iter().enumerate() {
                for t2 in &list[i + 1..] {
                    let mut p: Vec<VertexId> = t1.iter().chain(t2.iter()).copied().collect();
                    p.sort_unstable();
                    p.dedup();
                    if p.len() == 4 {
                        candidates.insert([p[0], p[1], p[2], p[3]]);
                    }
                }
            }
        }
        let mut best: Option<(f64, [VertexId; 4])> = None;
        for p in candidates {
            let present = faces(&p).iter().filter(|t| b.contains(*t)).count();
            if present != 3 {
                continue;
            }
            let Some(d) = diameter_of(&p, metric) else {
                continue;
            };
            if d <= tau_u && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, p));
            }
        }
        let Some((d, p)) = best else {
            break;
        };
        for t in faces(&p) {
            if !b.remove(&t) {
                b.insert(t);
            }
        }
        moves.push(SmoothMove {
            vertices: p.to_vec(),
            diameter: d,
        });
    }

    // drop components that are the boundary of a single filled tetrahedron
    let tris: Vec<[VertexId; 3]> = b.iter().copied().collect();
    let mut dropped = 0;
    let mut keep = vec![true; tris.len()];
    for comp in surface_components(&tris) {
        if comp.len() > 4 {
            continue;
        }
        let mut vs: Vec<VertexId> = comp.iter().flat_map(|&i| tris[i]).collect();
        vs.sort_unstable();
        vs.dedup();
        if comp.len() == 4 && vs.len() == 4 {
            if let Some(d) = diameter_of(&vs, metric) {
                if d <= tau_u {
                    for &i in &comp {
                        keep[i] = false;
                    }
                    dropped += 1;
                    moves.push(SmoothMove {
                        vertices: vs,
                        diameter: d,
                    });
                }
            }
        }
    }
    SmoothedSurface {
        triangles: tris.into_iter().zip(keep).filter_map(|(t, k)| k.then_some(t)).collect(),
        moves,
        dropped_components: dropped,
    }
}

/// Components of a triangle set under edge sharing, as index lists.
pub fn surface_components(tris: &[[VertexId; 3]]) -> Vec<Vec<usize>> {
    let mut by_edge: HashMap<[VertexId; 2], Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
            by_edge.entry(e).or_default().push(i);
        }
    }
    let mut seen = vec![false; tris.len()];
    let mut out = Vec::new();
    for s in 0..tris.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            let t = tris[i];
            for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                for &j in &by_edge[&e] {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
        }
        out.push(comp);
    }
    out
}

/// Triangle vertex tuples of a 2-chain.
pub fn chain_triangles(chain: &Chain, f: &Filtration) -> Vec<[VertexId; 3]> {
    chain
        .iter()
        .map(|s| {
            let v = f.vertices(s);
            [v[0], v[1], v[2]]
        })
        .collect()
}

/// 2-chain of a triangle list; `None` if a triangle is not in `f`.
pub fn triangles_to_chain(tris: &[[VertexId; 3]], f: &Filtration) -> Option<Chain> {
    let mut keys = Vec::with_capacity(tris.len());
    for t in tris {
        let s: Simplex = f.encode(t)?;
        keys.push(s.key);
    }
    Some(Chain::new(2, keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Embedding;

    fn square() -> Embedding {
        Embedding::from_points2(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn square_with_short_diagonal() {
        // diagonal sqrt(2) admitted: both triangles fill the square
        let out = smooth_h1(&[0, 1, 2, 3], &square(), 1.5);
        assert!(out.degenerate);
        assert_eq!(out.moves.len(), 2);
        let out = smooth_h1(&[0, 1, 2, 3], &square(), 1.2);
        assert_eq!(out.vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn small_triangle_degenerates() {
        let e = Embedding::from_points2(&[[0.0, 0.0], [1.0, 0.0], [0.5, 0.8]]).unwrap();
        let out = smooth_h1(&[0, 1, 2], &e, 1.0);
        assert!(out.degenerate);
        let out = smooth_h1(&[0, 1, 2], &e, 0.9);
        assert!(!out.degenerate);
    }

    #[test]
    fn octahedron_is_left_alone_when_tetrahedra_are_large() {
        let e = Embedding::from_points3(vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
        ])
        .unwrap();
        let mut tris = Vec::new();
        for &x in &[0, 1] {
            for &y in &[2, 3] {
                for &z in &[4, 5] {
                    tris.push(sorted3([x, y, z]));
                }
            }
        }
        let out = smooth_h2(&tris, &e, 1.5);
        assert_eq!(out.triangles.len(), 8);
        assert!(out.moves.is_empty());
    }
}
