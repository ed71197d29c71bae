mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use tightph::cover::{count_all, cover_of};
use tightph::geometry::euclidean;
use tightph::stochastic::{
    complete_complex_size, permute_filtration, permuted_edge_order, perturb_points, run_refinement, sample_ball,
    select_minimal, trial_rng, Boundary, RefineConfig,
};
use tightph::{Embedding, Filtration, Persistence, PersistenceConfig, SignificanceParams, SparseMetricSpace};

fn boundary(len: usize, tag: u32) -> Boundary {
    Boundary {
        dim: 1,
        simplices: (0..len as u32)
            .map(|i| vec![tag * 100 + i, tag * 100 + i + 1])
            .collect(),
    }
}

proptest! {
    #[test]
    fn perturbation_displacement_is_bounded(seed in 0u64..1000, delta in 0.0f64..0.5) {
        let mut r = rng(seed);
        let e = Embedding::from_points3(random_points(&mut r, 40, 3)).unwrap();
        let nn = e.nearest_neighbor_distances();
        let mut tr = trial_rng(seed, 3, 17);
        let moved = perturb_points(&e, delta, &mut tr);
        for i in 0..e.len() {
            let d = euclidean(&e.coords()[i], &moved.coords()[i]);
            prop_assert!(d <= (nn[i] / 3.0).min(delta) + 1e-12);
        }
    }
}

#[test]
fn zero_delta_is_identity() {
    let mut r = rng(2);
    let e = Embedding::from_points3(random_points(&mut r, 30, 3)).unwrap();
    let moved = perturb_points(&e, 0.0, &mut trial_rng(0, 0, 0));
    assert_eq!(moved, e);
}

#[test]
fn ball_samples_fill_octants_evenly() {
    let mut r = trial_rng(9, 0, 0);
    let n = 8000;
    let mut octants = [0usize; 8];
    let mut inner = 0;
    for _ in 0..n {
        let p = sample_ball(&mut r, 2.0, 3);
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        assert!(norm <= 2.0);
        // half the volume lies within 2 * 0.5^(1/3)
        if norm <= 2.0 * 0.5f64.cbrt() {
            inner += 1;
        }
        let o = (p[0] > 0.0) as usize | ((p[1] > 0.0) as usize) << 1 | ((p[2] > 0.0) as usize) << 2;
        octants[o] += 1;
    }
    let expected = n as f64 / 8.0;
    let chi2: f64 = octants.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 7 degrees of freedom, 0.001 level
    assert!(chi2 < 24.32, "chi2 {chi2}");
    let frac = inner as f64 / n as f64;
    assert!((frac - 0.5).abs() < 0.03, "inner fraction {frac}");
}

#[test]
fn planar_ball_samples_stay_planar() {
    let mut r = trial_rng(1, 0, 0);
    for _ in 0..100 {
        assert_eq!(sample_ball(&mut r, 1.0, 2)[2], 0.0);
    }
}

#[test]
fn trial_streams_are_distinct_and_reproducible() {
    use rand::RngCore;
    let a: Vec<u64> = (0..4).map(|_| trial_rng(5, 1, 2).next_u64()).collect();
    assert!(a.windows(2).all(|w| w[0] == w[1]));
    let x = trial_rng(5, 1, 2).next_u64();
    assert_ne!(x, trial_rng(5, 1, 3).next_u64());
    assert_ne!(x, trial_rng(5, 2, 2).next_u64());
    assert_ne!(x, trial_rng(6, 1, 2).next_u64());
}

#[test]
fn permuted_diagrams_are_identical() {
    for seed in 0..10 {
        let mut r = rng(seed);
        let d = tie_rich_matrix(&mut r, 12, 3);
        let space = space_from_matrix(&d, f64::INFINITY);
        let reference = oracle_from_matrix(&d, f64::INFINITY, 3);
        for j in 0..20 {
            let mut tr = trial_rng(seed, 0, j);
            let f = permute_filtration(&space, 3, &mut tr).unwrap();
            let p = Persistence::compute(
                &f,
                &PersistenceConfig {
                    max_dim: 2,
                    ..Default::default()
                },
            )
            .unwrap();
            let diag = p.diagram().without_zero_persistence();
            for dim in 0..=2u8 {
                let mut want = reference.values(dim as usize);
                want.retain(|(b, d)| b != d);
                assert_eq!(diag.values(dim), want, "seed {seed} trial {j} dim {dim}");
            }
        }
    }
}

#[test]
fn duplicate_orders_are_bounded_by_tie_permutations() {
    // one run of three equal lengths, everything else distinct
    let s = SparseMetricSpace::new(
        4,
        [
            (0, 1, 1.0),
            (0, 2, 2.0),
            (1, 2, 2.0),
            (2, 3, 2.0),
            (0, 3, 3.0),
            (1, 3, 3.5),
        ],
        f64::INFINITY,
    )
    .unwrap();
    let mut seen = HashSet::new();
    for j in 0..200 {
        let order = permuted_edge_order(&s, &mut trial_rng(0, 0, j));
        assert_eq!(order[0], 0);
        assert_eq!(&order[4..], &[2, 4]);
        seen.insert(order);
    }
    assert_eq!(seen.len(), 6);
}

#[test]
fn minimal_set_examples() {
    let a = vec![boundary(9, 0), boundary(4, 1)];
    let b = vec![boundary(8, 2), boundary(5, 3)];
    let c = vec![boundary(5, 5), boundary(8, 4)];
    let m = select_minimal(&[a.clone(), b.clone(), c.clone()]).unwrap();
    assert_eq!(m.trials, vec![1, 2]);
    assert!(!m.is_unique());
    assert_eq!(m.boundaries.len(), 1);
    assert_eq!(m.boundaries[0].len(), 26);

    let m = select_minimal(&[a.clone(), b.clone()]).unwrap();
    assert!(m.is_unique());
    assert_eq!(m.boundaries, b);

    let single = select_minimal(std::slice::from_ref(&a)).unwrap();
    assert_eq!(single.trials, vec![0]);
    assert_eq!(single.boundaries, a);

    // shorter sets are zero padded
    let m = select_minimal(&[a.clone(), vec![boundary(9, 6)]]).unwrap();
    assert_eq!(m.trials, vec![1]);
    assert!(select_minimal(&[]).is_none());
}

#[test]
fn complete_complex_counts() {
    assert_eq!(complete_complex_size(4, 3), 4 + 6 + 4 + 1);
    assert_eq!(complete_complex_size(10, 2), 10 + 45 + 120);
    assert_eq!(complete_complex_size(0, 2), 0);
}

fn ring_setup() -> (Embedding, SignificanceParams, tightph::cover::Cover) {
    // irregular ring: no tied distances
    let mut r = rng(4);
    let pts: Vec<[f64; 3]> = (0..14)
        .map(|i| {
            use rand::Rng;
            let t = 2.0 * std::f64::consts::PI * (i as f64 + r.gen_range(-0.2..0.2)) / 14.0;
            let rad = 1.0 + r.gen_range(-0.05..0.05);
            [rad * t.cos(), rad * t.sin(), 0.0]
        })
        .collect();
    let e = Embedding::new(2, pts).unwrap();
    let params = SignificanceParams::new(0.7, 0.5).unwrap();
    let all: Vec<u32> = (0..14).collect();
    let mut covers = vec![cover_of(0, &all, &e).unwrap()];
    count_all(&mut covers, &e, 1, &params).unwrap();
    assert_eq!(covers[0].n_sig, 1);
    (e, params, covers.pop().unwrap())
}

#[test]
fn unperturbed_single_trial_matches_direct_reduction() {
    let (e, params, cover) = ring_setup();
    let cfg = RefineConfig {
        n_pert: 0,
        n_perm: 1,
        ..Default::default()
    };
    let out = run_refinement(&cover, &e, 1, &params, &cfg).unwrap();
    assert_eq!(out.trials.len(), 1);
    assert!(out.calibration.is_none());
    assert!(!out.trials[0].fallback);

    let space = SparseMetricSpace::from_embedding(&e.subset(&cover.members), f64::INFINITY).unwrap();
    let f = Filtration::build(&space, 2).unwrap();
    let p = Persistence::compute(
        &f,
        &PersistenceConfig {
            max_dim: 1,
            ..Default::default()
        },
    )
    .unwrap();
    let expected: Vec<Boundary> = p
        .pairs_in_dim(1)
        .filter(|q| q.bar().is_significant(&params))
        .map(|q| {
            let col = p
                .reduced(1)
                .unwrap()
                .reduced_column(&f, q.death_simplex.unwrap().key)
                .unwrap();
            let mut simplices: Vec<Vec<u32>> = col
                .vertex_tuples(&f)
                .iter()
                .map(|t| t.iter().map(|&v| cover.members[v as usize]).collect())
                .collect();
            simplices.sort();
            Boundary { dim: 1, simplices }
        })
        .collect();
    assert_eq!(out.trials[0].boundaries, expected);
    assert_eq!(out.minimal.unwrap().boundaries, expected);
}

#[test]
fn refinement_boundaries_are_cycles_around_the_hole() {
    let (e, params, cover) = ring_setup();
    let cfg = RefineConfig {
        n_pert: 3,
        n_perm: 3,
        seed: 8,
        ..Default::default()
    };
    let out = run_refinement(&cover, &e, 1, &params, &cfg).unwrap();
    let (delta, m) = out.calibration.unwrap();
    assert!(m >= 1);
    assert_eq!(delta, (0.5 / 3.0) / 2f64.powi(m as i32));
    assert_eq!(out.failed_trials, 0);
    for t in &out.trials {
        assert_eq!(t.boundaries.len(), 1);
        // every vertex of a 1-cycle has even degree
        let mut deg = std::collections::HashMap::new();
        for s in &t.boundaries[0].simplices {
            for v in s {
                *deg.entry(*v).or_insert(0) += 1;
            }
        }
        assert!(deg.values().all(|d| d % 2 == 0));
        assert!(t.boundaries[0].len() >= 4);
    }
}

#[test]
fn refinement_is_deterministic_across_thread_counts() {
    let (e, params, cover) = ring_setup();
    let cfg = RefineConfig {
        n_pert: 4,
        n_perm: 4,
        seed: 21,
        ..Default::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_refinement(&cover, &e, 1, &params, &cfg).unwrap())
    };
    let a = run(1);
    let b = run(4);
    assert_eq!(a.calibration, b.calibration);
    assert_eq!(a.minimal, b.minimal);
    let key = |r: &tightph::stochastic::Refinement| {
        r.trials
            .iter()
            .map(|t| (t.perturbation, t.permutation, t.boundaries.clone()))
            .collect::<Vec<_>>()
    };
    assert_eq!(key(&a), key(&b));
}

#[test]
fn oversized_trial_counts_are_rejected() {
    let (e, params, cover) = ring_setup();
    let cfg = RefineConfig {
        n_pert: 4096,
        ..Default::default()
    };
    assert!(run_refinement(&cover, &e, 1, &params, &cfg).is_err());
}
