mod common;

use std::collections::HashSet;

use common::*;
use rand::Rng;
use tightph::cover::{
    contract_covers, count_all, count_significant, cover_intersection_graph, cover_of, max_persistence_estimate,
    ContractionEvent, Cover,
};
use tightph::{Chain, Embedding, Filtration, SignificanceParams, SparseMetricSpace};

fn circle(n: usize, r: f64, cx: f64, cy: f64) -> Vec<[f64; 3]> {
    (0..n)
        .map(|i| {
            let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            [cx + r * t.cos(), cy + r * t.sin(), 0.0]
        })
        .collect()
}

fn planar(pts: Vec<[f64; 3]>) -> Embedding {
    Embedding::new(2, pts).unwrap()
}

fn loop_chain(f: &Filtration, walk: &[u32]) -> Chain {
    tightph::refine::smooth::walk_to_chain(walk, f).unwrap()
}

#[test]
fn square_and_triangle_estimates() {
    let sq = planar(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0]]);
    let f = Filtration::build(&SparseMetricSpace::from_embedding(&sq, 1.0).unwrap(), 2).unwrap();
    let c = loop_chain(&f, &[0, 1, 2, 3]);
    assert!((max_persistence_estimate(&c, &f, &sq) - (2f64.sqrt() - 1.0)).abs() < 1e-12);

    let h = 3f64.sqrt() / 2.0;
    let tri = planar(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, h, 0.0]]);
    let f = Filtration::build(&SparseMetricSpace::from_embedding(&tri, 1.0 + 1e-9).unwrap(), 2).unwrap();
    let c = loop_chain(&f, &[0, 1, 2]);
    assert!(max_persistence_estimate(&c, &f, &tri).abs() < 1e-12);
}

#[test]
fn worked_cycle_estimate_bounds_persistence() {
    // the surviving cycle of the worked example, with bd = 3 added so every pair has a distance
    let full = vec![
        vec![0.0, 1.0, 2.75, 2.5],
        vec![1.0, 0.0, 1.5, 3.0],
        vec![2.75, 1.5, 0.0, 2.0],
        vec![2.5, 3.0, 2.0, 0.0],
    ];
    let metric = space_from_matrix(&full, 3.0);
    let s = SparseMetricSpace::new(
        4,
        [(0, 1, 1.0), (1, 2, 1.5), (2, 3, 2.0), (0, 3, 2.5), (0, 2, 2.75)],
        2.75,
    )
    .unwrap();
    let f = Filtration::build(&s, 2).unwrap();
    let c = loop_chain(&f, &[0, 1, 2, 3]);
    let est = max_persistence_estimate(&c, &f, &metric);
    assert_eq!(est, 3.0 - 2.5);
    // the class born at 2.5 in the full complex dies no later than 2.5 + est
    let oracle = oracle_from_matrix(&full, f64::INFINITY, 2);
    let bars = oracle.values(1);
    let born = bars.iter().find(|b| b.0 == 2.5).expect("class born at 2.5");
    assert!(born.1 - born.0 <= est);
}

#[test]
fn covers_match_brute_force() {
    let mut r = rng(11);
    let pts = random_points(&mut r, 300, 3);
    let e = Embedding::from_points3(pts.clone()).unwrap();
    for trial in 0..20 {
        let k = r.gen_range(3..10);
        let cyc: Vec<u32> = (0..k).map(|_| r.gen_range(0..300)).collect();
        let c = cover_of(trial, &cyc, &e).unwrap();
        let lo: Vec<f64> = (0..3)
            .map(|a| cyc.iter().map(|&v| pts[v as usize][a]).fold(f64::INFINITY, f64::min))
            .collect();
        let hi: Vec<f64> = (0..3)
            .map(|a| {
                cyc.iter()
                    .map(|&v| pts[v as usize][a])
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .collect();
        let brute: Vec<u32> = (0..300u32)
            .filter(|&i| (0..3).all(|a| lo[a] <= pts[i as usize][a] && pts[i as usize][a] <= hi[a]))
            .collect();
        assert_eq!(c.members, brute);
        assert!(cyc.iter().all(|v| c.members.contains(v)));
        // the box of the cycle is the box of its cover
        let again = cover_of(trial, &c.members, &e).unwrap();
        assert_eq!(again.bbox, c.bbox);
        assert_eq!(again.members, c.members);
    }
}

#[test]
fn intersection_graph_matches_brute_force() {
    let mut r = rng(5);
    let e = Embedding::from_points3(random_points(&mut r, 200, 3)).unwrap();
    let covers: Vec<Cover> = (0..15)
        .map(|i| {
            let cyc: Vec<u32> = (0..3).map(|_| r.gen_range(0..200)).collect();
            cover_of(i, &cyc, &e).unwrap()
        })
        .collect();
    let mut brute = Vec::new();
    for i in 0..covers.len() {
        let a: HashSet<u32> = covers[i].members.iter().copied().collect();
        for j in i + 1..covers.len() {
            if covers[j].members.iter().any(|v| a.contains(v)) {
                brute.push((i, j));
            }
        }
    }
    assert_eq!(cover_intersection_graph(&covers), brute);
}

#[test]
fn disjoint_and_chained_graphs() {
    let e = planar((0..10).map(|i| [i as f64, 0.0, 0.0]).collect());
    let disjoint: Vec<Cover> = (0..3)
        .map(|i| cover_of(i, &[3 * i as u32, 3 * i as u32 + 1], &e).unwrap())
        .collect();
    assert!(cover_intersection_graph(&disjoint).is_empty());
    let chained: Vec<Cover> = (0..3)
        .map(|i| cover_of(i, &[3 * i as u32, 3 * i as u32 + 3], &e).unwrap())
        .collect();
    assert_eq!(cover_intersection_graph(&chained), vec![(0, 1), (1, 2)]);
}

#[test]
fn significant_counts() {
    let params = SignificanceParams::new(0.6, 0.5).unwrap();
    let line = planar(vec![[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [1.0, 0.0, 0.0]]);
    assert_eq!(count_significant(&[0, 1, 2], &line, 1, &params).unwrap(), 0);
    assert_eq!(count_significant(&[], &line, 1, &params).unwrap(), 0);

    // 12-point unit circle: spacing 0.518, hole far larger than epsilon
    let pts = circle(12, 1.0, 0.0, 0.0);
    let e = planar(pts.clone());
    let all: Vec<u32> = (0..12).collect();
    let got = count_significant(&all, &e, 1, &params).unwrap();
    let oracle = oracle_from_matrix(&distance_matrix(&pts), params.tau(), 2);
    let expect = oracle
        .values(1)
        .iter()
        .filter(|(b, d)| *b <= params.tau_u && d.min(params.tau()) - b >= params.epsilon)
        .count();
    assert_eq!(expect, 1);
    assert_eq!(got, expect);
}

#[test]
fn random_counts_match_oracle() {
    let params = SignificanceParams::new(0.3, 0.1).unwrap();
    for seed in 0..25 {
        let mut r = rng(seed);
        let pts = random_points(&mut r, 18, 2);
        let e = planar(pts.clone());
        let all: Vec<u32> = (0..18).collect();
        let oracle = oracle_from_matrix(&distance_matrix(&pts), params.tau(), 2);
        let expect = oracle
            .values(1)
            .iter()
            .filter(|(b, d)| *b <= params.tau_u && d.min(params.tau()) - b >= params.epsilon)
            .count();
        assert_eq!(count_significant(&all, &e, 1, &params).unwrap(), expect, "seed {seed}");
    }
}

/// A 12-point circle at the origin plus small clusters on the left and right.
fn two_box_instance() -> (Embedding, Vec<u32>, Vec<u32>, Vec<u32>) {
    let mut pts = circle(12, 1.0, 0.0, 0.0);
    let ring: Vec<u32> = (0..12).collect();
    pts.extend([[-2.5, 0.0, 0.0], [-2.4, 0.05, 0.0], [-2.45, -0.05, 0.0]]);
    pts.extend([[2.5, 0.0, 0.0], [2.4, 0.05, 0.0], [2.45, -0.05, 0.0]]);
    (planar(pts), ring, vec![12, 13, 14], vec![15, 16, 17])
}

#[test]
fn nested_cover_is_dropped() {
    let params = SignificanceParams::new(0.6, 0.5).unwrap();
    let (e, ring, left, _) = two_box_instance();
    let inner = cover_of(0, &ring, &e).unwrap();
    let outer = cover_of(1, &[ring.clone(), left].concat(), &e).unwrap();
    let mut covers = vec![outer, inner];
    count_all(&mut covers, &e, 1, &params).unwrap();
    assert!(covers.iter().all(|c| c.n_sig == 1));
    let (out, log) = contract_covers(covers, &e, 1, &params).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].id, 0);
    assert_eq!(log.events, vec![ContractionEvent::Subset { removed: 1, kept: 0 }]);
}

#[test]
fn disjoint_covers_unchanged() {
    let params = SignificanceParams::new(0.6, 0.5).unwrap();
    let mut pts = circle(12, 1.0, 0.0, 0.0);
    pts.extend(circle(12, 1.0, 10.0, 0.0));
    let e = planar(pts);
    let a: Vec<u32> = (0..12).collect();
    let b: Vec<u32> = (12..24).collect();
    let mut covers = vec![cover_of(0, &a, &e).unwrap(), cover_of(1, &b, &e).unwrap()];
    count_all(&mut covers, &e, 1, &params).unwrap();
    let (out, log) = contract_covers(covers.clone(), &e, 1, &params).unwrap();
    assert_eq!(out, covers);
    assert!(log.events.is_empty());
}

#[test]
fn overlapping_covers_shrink_to_shared_void() {
    let params = SignificanceParams::new(0.6, 0.5).unwrap();
    let (e, ring, left, right) = two_box_instance();
    let a = cover_of(0, &[ring.clone(), left].concat(), &e).unwrap();
    let b = cover_of(1, &[ring.clone(), right].concat(), &e).unwrap();
    let mut covers = vec![a, b];
    count_all(&mut covers, &e, 1, &params).unwrap();
    assert!(covers.iter().all(|c| c.n_sig == 1));
    let (out, log) = contract_covers(covers, &e, 1, &params).unwrap();
    assert_eq!(out.len(), 1);
    assert_eq!(out[0].members, ring);
    assert_eq!(count_significant(&out[0].members, &e, 1, &params).unwrap(), 1);
    assert_eq!(log.evaluations, 1);
    assert!(matches!(&log.events[0], ContractionEvent::Intersection { removed, .. } if removed.len() == 2));
}

#[test]
fn contraction_only_shrinks() {
    let params = SignificanceParams::new(0.6, 0.5).unwrap();
    for seed in 0..6 {
        let mut r = rng(seed);
        let mut pts = circle(12, 1.0, 0.0, 0.0);
        for _ in 0..10 {
            pts.push([r.gen_range(-3.0..3.0), r.gen_range(-3.0..3.0), 0.0]);
        }
        let e = planar(pts);
        let ring: Vec<u32> = (0..12).collect();
        let mut covers: Vec<Cover> = (0..5)
            .map(|i| {
                let extra: Vec<u32> = (0..2).map(|_| r.gen_range(12..22)).collect();
                cover_of(i, &[ring.clone(), extra].concat(), &e).unwrap()
            })
            .collect();
        count_all(&mut covers, &e, 1, &params).unwrap();
        covers.retain(|c| c.n_sig > 0);
        let inputs = covers.clone();
        let (out, _) = contract_covers(covers, &e, 1, &params).unwrap();
        assert!(!out.is_empty());
        for c in &out {
            assert!(c.n_sig > 0);
            assert_eq!(count_significant(&c.members, &e, 1, &params).unwrap(), c.n_sig);
            assert!(inputs.iter().any(|i| c.members.iter().all(|v| i.members.contains(v))));
        }
    }
}
