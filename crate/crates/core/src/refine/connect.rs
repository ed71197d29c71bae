//! Splitting representatives into connected pieces.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::chain::Chain;
use crate::complex::{Filtration, Simplex, VertexId};

/// Splits a cycle into connected pieces: for dimension 1 the fundamental cycle
/// basis of its edge graph, for dimension 2 the components of its triangles
/// under edge sharing. Other dimensions are returned unchanged.
pub fn split_disconnected(cycle: &Chain, f: &Filtration) -> Vec<Chain> {
    match cycle.dim {
        1 => cycle_basis(cycle, f),
        2 => triangle_components(cycle, f),
        _ => vec![cycle.clone()],
    }
}

fn cycle_basis(cycle: &Chain, f: &Filtration) -> Vec<Chain> {
    // adjacency: vertex -> [(neighbor, edge key)], deterministic order
    let mut adj: BTreeMap<VertexId, Vec<(VertexId, u64)>> = BTreeMap::new();
    for &k in &cycle.simplices {
        let e = f.edge(k);
        adj.entry(e.u).or_default().push((e.v, k));
        adj.entry(e.v).or_default().push((e.u, k));
    }
    for list in adj.values_mut() {
        list.sort_unstable();
    }
    // BFS spanning forest
    let mut parent: HashMap<VertexId, (VertexId, u64)> = HashMap::new();
    let mut depth: HashMap<VertexId, usize> = HashMap::new();
    let mut tree_edges = std::collections::HashSet::new();
    for &root in adj.keys() {
        if depth.contains_key(&root) {
            continue;
        }
        depth.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(y, k) in &adj[&x] {
                if !depth.contains_key(&y) {
                    depth.insert(y, depth[&x] + 1);
                    parent.insert(y, (x, k));
                    tree_edges.insert(k);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut out = Vec::new();
    for &k in &cycle.simplices {
        if tree_edges.contains(&k) {
            continue;
        }
        let e = f.edge(k);
        let mut edges = vec![k];
        let (mut a, mut b) = (e.u, e.v);
        while a != b {
            if depth[&a] >= depth[&b] {
                let (p, pk) = parent[&a];
                edges.push(pk);
                a = p;
            } else {
                let (p, pk) = parent[&b];
                edges.push(pk);
                b = p;
            }
        }
        out.push(Chain::new(1, edges));
    }
    out
}

fn triangle_components(cycle: &Chain, f: &Filtration) -> Vec<Chain> {
    let tris = &cycle.simplices;
    let mut by_edge: HashMap<(VertexId, VertexId), Vec<usize>> = HashMap::new();
    for (i, &t) in tris.iter().enumerate() {
        let v = f.vertices(Simplex::new(2, t));
        for (a, b) in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
            by_edge.entry((a, b)).or_default().push(i);
        }
    }
    let mut comp = vec![usize::MAX; tris.len()];
    let mut out = Vec::new();
    for start in 0..tris.len() {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[start] = id;
        let mut members = vec![tris[start]];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let v = f.vertices(Simplex::new(2, tris[i]));
            for key in [(v[0], v[1]), (v[0], v[2]), (v[1], v[2])] {
                for &j in &by_edge[&key] {
                    if comp[j] == usize::MAX {
                        comp[j] = id;
                        members.push(tris[j]);
                        stack.push(j);
                    }
                }
            }
        }
        out.push(Chain::new(2, members));
    }
    out
}
