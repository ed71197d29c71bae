mod common;

use std::collections::{BTreeSet, VecDeque};

use common::*;
use nalgebra::{Matrix4, Vector4};
use proptest::prelude::*;
use rand::Rng;
use tightph::cover::members_in;
use tightph::stats::{
    features_of, graphical_sample, grow_subgraph, induced_min_degree, l0_distance, neg_log10, spatial_sample,
    spherical_uniformity, SampleBank, VoidFeatures,
};
use tightph::stochastic::trial_rng;
use tightph::{Bar, BoundingBox, Embedding, PersistenceDiagram, SignificanceParams};

fn diagram(bars: &[(f64, f64)]) -> PersistenceDiagram {
    PersistenceDiagram::new(
        bars.iter()
            .map(|&(birth, death)| Bar { dim: 1, birth, death })
            .collect(),
    )
}

/// Pads both length lists to a common arity and compares position by position.
fn l0_by_definition(a: &[(f64, f64)], b: &[(f64, f64)], params: &SignificanceParams) -> f64 {
    let tau = params.tau();
    let lengths = |bars: &[(f64, f64)]| {
        let mut v: Vec<f64> = bars
            .iter()
            .map(|&(b, d)| (b, if d.is_infinite() { tau } else { d }))
            .filter(|(b, d)| *b <= params.tau_u && d - b >= params.epsilon)
            .map(|(b, d)| d - b)
            .collect();
        v.sort_by(|x, y| y.partial_cmp(x).unwrap());
        v
    };
    let (mut x, mut y) = (lengths(a), lengths(b));
    let n = x.len().max(y.len());
    x.resize(n, 0.0);
    y.resize(n, 0.0);
    let mut best = 0.0;
    for i in 0..n {
        let g = (x[i] - y[i]).abs();
        if g > best {
            best = g;
        }
    }
    best
}

fn random_bars(r: &mut impl Rng) -> Vec<(f64, f64)> {
    let k = r.gen_range(0..8);
    (0..k)
        .map(|_| {
            let b = r.gen_range(0.0..5.5);
            let d = if r.gen_bool(0.15) {
                f64::INFINITY
            } else {
                r.gen_range(b..=5.5)
            };
            (b, d)
        })
        .collect()
}

#[test]
fn l0_examples() {
    let params = SignificanceParams::new(100.0, 1.0).unwrap();
    let a = diagram(&[(0.0, 5.0), (1.0, 4.0)]);
    let b = diagram(&[(0.0, 4.0)]);
    assert_eq!(l0_distance(&a, &b, 1, &params), 3.0);
    assert_eq!(l0_distance(&a, &a, 1, &params), 0.0);
    // insignificant bars do not count
    let c = diagram(&[(0.0, 4.0), (2.0, 2.5)]);
    assert_eq!(l0_distance(&b, &c, 1, &params), 0.0);
}

#[test]
fn l0_matches_definition_on_random_pairs() {
    let params = SignificanceParams::new(5.0, 0.5).unwrap();
    let mut r = rng(77);
    for _ in 0..200 {
        let (a, b) = (random_bars(&mut r), random_bars(&mut r));
        let got = l0_distance(&diagram(&a), &diagram(&b), 1, &params);
        assert_eq!(got, l0_by_definition(&a, &b, &params));
    }
}

proptest! {
    #[test]
    fn l0_is_a_pseudometric(seed in 0u64..10_000) {
        let params = SignificanceParams::new(5.0, 0.5).unwrap();
        let mut r = rng(seed);
        let (a, b, c) = (diagram(&random_bars(&mut r)), diagram(&random_bars(&mut r)), diagram(&random_bars(&mut r)));
        let ab = l0_distance(&a, &b, 1, &params);
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, l0_distance(&b, &a, 1, &params));
        prop_assert_eq!(l0_distance(&a, &a, 1, &params), 0.0);
        prop_assert!(l0_distance(&a, &c, 1, &params) <= ab + l0_distance(&b, &c, 1, &params) + 1e-12);
    }

    #[test]
    fn uniformity_is_a_multiple_of_one_200th(seed in 0u64..10_000, n in 0usize..300) {
        let mut r = rng(seed);
        let pts: Vec<[f64; 3]> = (0..n).map(|_| [r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)]).collect();
        let u = spherical_uniformity(&pts, &[0.0; 3]);
        let k = u * 200.0;
        prop_assert!((0.0..=1.0).contains(&u));
        prop_assert!((k - k.round()).abs() < 1e-9);
    }
}

#[test]
fn uniform_sphere_sample_covers_the_grid() {
    let mut r = rng(3);
    let pts: Vec<[f64; 3]> = (0..5000)
        .map(|_| loop {
            let p = [
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0),
                r.gen_range(-1.0..1.0f64),
            ];
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            if n > 1e-3 && n <= 1.0 {
                break [p[0] / n + 4.0, p[1] / n, p[2] / n];
            }
        })
        .collect();
    assert!(spherical_uniformity(&pts, &[4.0, 0.0, 0.0]) >= 0.98);
}

#[test]
fn center_points_are_skipped() {
    assert_eq!(spherical_uniformity(&[[1.0, 1.0, 1.0]], &[1.0, 1.0, 1.0]), 0.0);
}

fn bank_of(rows: &[[f64; 4]]) -> SampleBank {
    let samples = rows
        .iter()
        .map(|r| VoidFeatures {
            cover_size: r[0],
            spherical_uniformity: r[1],
            radius: r[2],
            eccentricity: r[3],
        })
        .collect();
    SampleBank::new(samples, rows.len()).unwrap()
}

fn hand_rows() -> Vec<[f64; 4]> {
    vec![
        [10.0, 0.20, 1.0, 0.5],
        [14.0, 0.35, 1.2, 0.6],
        [9.0, 0.10, 0.8, 0.4],
        [20.0, 0.50, 0.9, 0.9],
        [12.0, 0.30, 1.5, 0.7],
        [16.0, 0.25, 1.1, 0.3],
        [11.0, 0.45, 0.7, 0.8],
        [18.0, 0.40, 1.3, 0.55],
        [13.0, 0.15, 1.4, 0.65],
        [15.0, 0.33, 1.0, 0.75],
    ]
}

/// Feature vector whose projection onto the bank's axes is `w`.
fn unproject(bank: &SampleBank, w: [f64; 4]) -> VoidFeatures {
    let v = bank.basis * Vector4::from(w) + Vector4::from(bank.mean);
    let x: Vec<f64> = (0..4)
        .map(|d| bank.min[d] + v[d] * (bank.max[d] - bank.min[d]))
        .collect();
    VoidFeatures {
        cover_size: x[0],
        spherical_uniformity: x[1],
        radius: x[2],
        eccentricity: x[3],
    }
}

#[test]
fn pca_basis_and_ratios() {
    let rows = hand_rows();
    let bank = bank_of(&rows);
    let b = bank.basis;
    assert!((b.transpose() * b - Matrix4::identity()).abs().max() < 1e-9);
    assert!((bank.variance_ratios.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    assert!(bank.variance_ratios.windows(2).all(|w| w[0] >= w[1]));

    // covariance of the rescaled rows, independently
    let scaled: Vec<[f64; 4]> = rows
        .iter()
        .map(|r| {
            let mut s = [0.0; 4];
            for d in 0..4 {
                let lo = rows.iter().map(|x| x[d]).fold(f64::INFINITY, f64::min);
                let hi = rows.iter().map(|x| x[d]).fold(f64::NEG_INFINITY, f64::max);
                s[d] = (r[d] - lo) / (hi - lo);
                assert!((0.0..=1.0).contains(&s[d]));
            }
            s
        })
        .collect();
    let mut mean = [0.0; 4];
    for s in &scaled {
        for d in 0..4 {
            mean[d] += s[d] / 10.0;
        }
    }
    let mut cov = Matrix4::zeros();
    for s in &scaled {
        for i in 0..4 {
            for j in 0..4 {
                cov[(i, j)] += (s[i] - mean[i]) * (s[j] - mean[j]) / 10.0;
            }
        }
    }
    let trace = cov.trace();
    for c in 0..4 {
        let v = b.column(c);
        let lambda = (v.transpose() * cov * v)[0];
        assert!((cov * v - v * lambda).abs().max() < 1e-9);
        assert!((lambda / trace - bank.variance_ratios[c]).abs() < 1e-9);
        // sign convention
        let lead = (0..4).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap();
        assert!(v[lead] > 0.0);
    }
    // brute-force count product on the projected rows
    for (i, r) in rows.iter().enumerate() {
        let w = bank.projected[i];
        let mut p = 1.0;
        for d in 0..4 {
            p *= bank.projected.iter().filter(|h| h[d] > w[d]).count() as f64 / 10.0;
        }
        let f = VoidFeatures {
            cover_size: r[0],
            spherical_uniformity: r[1],
            radius: r[2],
            eccentricity: r[3],
        };
        assert!((bank.pseudo_p_value(&f) - p).abs() < 1e-12);
    }
}

#[test]
fn p_value_examples() {
    let bank = bank_of(&hand_rows());
    let mut top = [0.0; 4];
    let mut median = [0.0; 4];
    for d in 0..4 {
        let mut col: Vec<f64> = bank.projected.iter().map(|h| h[d]).collect();
        col.sort_by(f64::total_cmp);
        top[d] = col[9] + 1.0;
        median[d] = 0.5 * (col[4] + col[5]);
    }
    assert_eq!(bank.pseudo_p_value(&unproject(&bank, top)), 0.0);
    assert_eq!(neg_log10(0.0), f64::INFINITY);
    assert!((bank.pseudo_p_value(&unproject(&bank, median)) - 0.0625).abs() < 1e-12);
    assert!((neg_log10(0.01) - 2.0).abs() < 1e-12);
    assert!(SampleBank::new(Vec::new(), 5).is_err());
}

proptest! {
    #[test]
    fn p_value_is_monotone(w in proptest::array::uniform4(-1.0f64..1.0), d in 0usize..4, step in 0.0f64..0.5) {
        let bank = bank_of(&hand_rows());
        let p = bank.pseudo_p_value(&unproject(&bank, w));
        let mut w2 = w;
        w2[d] += step;
        let q = bank.pseudo_p_value(&unproject(&bank, w2));
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(q <= p + 1e-12);
    }
}

#[test]
fn features_of_a_box() {
    let e = Embedding::from_points3(vec![[0.0, 0.0, 0.0], [4.0, 2.0, 1.0], [1.0, 1.0, 0.5], [9.0, 9.0, 9.0]]).unwrap();
    let b = BoundingBox::of_points(&[[0.0, 0.0, 0.0], [4.0, 2.0, 1.0]]).unwrap();
    let members = members_in(&b, &e);
    assert_eq!(members, vec![0, 1, 2]);
    let f = features_of(&b, &members, &e);
    assert_eq!(f.cover_size, 3.0);
    assert_eq!(f.eccentricity, 0.25);
    // center (2, 1, 0.5), nearest member (1, 1, 0.5)
    assert!((f.radius - 1.0).abs() < 1e-12);
    assert_eq!(f.spherical_uniformity, 3.0 / 200.0);
}

fn uniform_cube(seed: u64, n: usize, side: f64) -> Vec<[f64; 3]> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| [r.gen_range(0.0..side), r.gen_range(0.0..side), r.gen_range(0.0..side)])
        .collect()
}

#[test]
fn spatial_samples_respect_member_floor() {
    let e = Embedding::from_points3(uniform_cube(1, 2000, 10.0)).unwrap();
    let covers = [
        (BoundingBox::centered([5.0; 3], [2.0, 2.0, 2.0]), 12),
        (BoundingBox::centered([3.0; 3], [3.0, 2.5, 2.0]), 25),
    ];
    let bank = spatial_sample(&e, &covers, 500, 100_000, 4).unwrap();
    assert_eq!(bank.len(), 500);
    assert!(bank.attempts >= 500);
    assert!(bank.samples.iter().all(|f| f.cover_size >= 12.0));
}

#[test]
fn spatial_centers_stay_in_the_only_voxel() {
    // every point lies in the first voxel of a grid of side 5
    let e = Embedding::from_points3(uniform_cube(2, 50, 1.0)).unwrap();
    let covers = [(BoundingBox::centered([0.5; 3], [5.0; 3]), 1)];
    let bank = spatial_sample(&e, &covers, 200, 10_000, 0).unwrap();
    // a box of side 5 centered in [0, 5)^3 always reaches back to the points
    assert_eq!(bank.len(), 200);
    assert!(bank.samples.iter().all(|f| f.cover_size >= 1.0));
}

#[test]
fn cover_size_grows_with_box_volume() {
    let e = Embedding::from_points3(uniform_cube(5, 3000, 10.0)).unwrap();
    let mean_size = |side: f64| {
        let covers = [(BoundingBox::centered([5.0; 3], [side; 3]), 1)];
        let bank = spatial_sample(&e, &covers, 400, 100_000, 9).unwrap();
        bank.samples.iter().map(|f| f.cover_size).sum::<f64>() / bank.len() as f64
    };
    let sizes: Vec<f64> = [1.0, 2.0, 3.0].iter().map(|&s| mean_size(s)).collect();
    assert!(sizes.windows(2).all(|w| w[0] < w[1]), "{sizes:?}");
}

fn carved_cube() -> (Embedding, BoundingBox, Vec<u32>) {
    let pts: Vec<[f64; 3]> = uniform_cube(7, 6000, 10.0)
        .into_iter()
        .filter(|p| ((p[0] - 5.0).powi(2) + (p[1] - 5.0).powi(2) + (p[2] - 5.0).powi(2)).sqrt() > 2.0)
        .collect();
    let e = Embedding::from_points3(pts).unwrap();
    let b = BoundingBox::centered([5.0; 3], [4.4; 3]);
    let members = members_in(&b, &e);
    (e, b, members)
}

#[test]
fn carved_void_is_significant_against_spatial_samples() {
    let (e, b, members) = carved_cube();
    let void = features_of(&b, &members, &e);
    let bank = spatial_sample(&e, &[(b, members.len())], 2000, 1_000_000, 11).unwrap();
    let p = bank.pseudo_p_value(&void);
    assert!(p <= 0.05, "p = {p}");
}

fn bfs_connected(adj: &[Vec<u32>], nodes: &[u32]) -> bool {
    let set: BTreeSet<u32> = nodes.iter().copied().collect();
    let mut seen = BTreeSet::from([nodes[0]]);
    let mut q = VecDeque::from([nodes[0]]);
    while let Some(v) = q.pop_front() {
        for &w in &adj[v as usize] {
            if set.contains(&w) && seen.insert(w) {
                q.push_back(w);
            }
        }
    }
    seen.len() == set.len()
}

#[test]
fn grown_subgraphs_are_connected_dense_and_sized() {
    let e = Embedding::from_points3(uniform_cube(8, 400, 5.0)).unwrap();
    let mut adj = vec![Vec::new(); e.len()];
    for (u, v, _) in e.pairs_within(1.0) {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut accepted = 0;
    for i in 0..2000 {
        let mut r = trial_rng(0, 0, i);
        if let Some(nodes) = grow_subgraph(&adj, &mut r, 6, 12) {
            accepted += 1;
            assert!((6..=12).contains(&nodes.len()));
            assert!(bfs_connected(&adj, &nodes));
            assert!(induced_min_degree(&adj, &nodes) >= 3);
        }
    }
    assert!(accepted > 0);
}

#[test]
fn graphical_sampling_regimes() {
    // a tetrahedron: every 4-subgraph is complete
    let tet =
        Embedding::from_points3(vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
    let bank = graphical_sample(&tet, 1.5, (4, 4), 50, 1000, 0).unwrap();
    assert_eq!(bank.attempts, 50);
    assert!(bank.samples.iter().all(|f| f.cover_size == 4.0));

    // a path graph never reaches degree 3
    let line = Embedding::from_points3((0..30).map(|i| [i as f64, 0.0, 0.0]).collect()).unwrap();
    assert!(graphical_sample(&line, 1.1, (4, 6), 10, 5000, 0).is_err());
    assert!(graphical_sample(&tet, 1.5, (3, 4), 10, 100, 0).is_err());
}
