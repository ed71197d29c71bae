//! End-to-end stages shared by the command line and the tests.

use crate::birth_cycles::{birth_cycles, BirthCycle, BirthCycleConfig, BirthSelection};
use crate::chain::Chain;
use crate::complex::Filtration;
use crate::cover::{
    contract_covers, count_all, cover_intersection_graph, cover_of, max_persistence_estimate, ContractionLog, Cover,
};
use crate::error::Result;
use crate::geometry::Embedding;
use crate::persistence::{Persistence, SignificanceParams};
use crate::refine::connect::split_disconnected;
use crate::refine::shorten::{shorten_cycles, ShortenConfig, ShortenReport};
use crate::refine::smooth::{
    chain_to_walk, chain_triangles, smooth_h1, smooth_h2, triangles_to_chain, walk_to_chain, SmoothMove,
};
use crate::stochastic::{run_refinement, RefineConfig, Refinement};

#[derive(Debug, Clone)]
pub struct CycleStages {
    pub birth: Vec<BirthCycle>,
    /// Shortened cycles in decreasing length order.
    pub shortened: Vec<Chain>,
    pub shorten_report: ShortenReport,
    /// Connected, smoothed pieces.
    pub smoothed: Vec<Chain>,
    /// Pieces that smoothing filled in completely.
    pub degenerate: Vec<Chain>,
    pub moves: Vec<SmoothMove>,
}

/// Birth cycles of the positive-persistence classes of `dim`, shortened,
/// split into connected pieces and smoothed against simplices of diameter at
/// most `tau_u`.
pub fn cycle_stages(
    f: &Filtration,
    p: &Persistence,
    dim: u8,
    tau_u: f64,
    bc_config: BirthCycleConfig,
    shorten: &ShortenConfig,
) -> Result<CycleStages> {
    let birth = birth_cycles(f, p, dim, BirthSelection::PositivePersistence, bc_config)?;
    let chains: Vec<Chain> = birth.iter().map(|b| b.chain.clone()).collect();
    let (shortened, shorten_report) = shorten_cycles(chains, shorten);
    let mut smoothed = Vec::new();
    let mut degenerate = Vec::new();
    let mut moves = Vec::new();
    for c in &shortened {
        for piece in split_disconnected(c, f) {
            match dim {
                1 => {
                    let Some(walk) = chain_to_walk(&piece, f) else {
                        smoothed.push(piece);
                        continue;
                    };
                    let out = smooth_h1(&walk, f, tau_u);
                    moves.extend(out.moves);
                    if out.degenerate {
                        degenerate.push(piece);
                    } else {
                        smoothed.push(walk_to_chain(&out.vertices, f).expect("smoothing keeps edges"));
                    }
                }
                2 => {
                    let out = smooth_h2(&chain_triangles(&piece, f), f, tau_u);
                    moves.extend(out.moves);
                    let chain = triangles_to_chain(&out.triangles, f).expect("smoothing keeps triangles");
                    if chain.is_empty() {
                        degenerate.push(piece);
                    } else {
                        smoothed.push(chain);
                    }
                }
                _ => smoothed.push(piece),
            }
        }
    }
    Ok(CycleStages {
        birth,
        shortened,
        shorten_report,
        smoothed,
        degenerate,
        moves,
    })
}

#[derive(Debug, Clone)]
pub struct LocalizeConfig {
    pub dim: u8,
    pub params: SignificanceParams,
    pub refine: RefineConfig,
    /// Skip the stochastic stage.
    pub skip_refinement: bool,
}

#[derive(Debug, Clone)]
pub struct Localization {
    /// Cycles whose persistence estimate fell below epsilon.
    pub filtered: usize,
    /// Covers of the remaining cycles, before dropping `n_sig == 0`.
    pub covers: Vec<Cover>,
    pub contracted: Vec<Cover>,
    pub contraction: ContractionLog,
    /// Edges between contracted covers with intersecting members.
    pub graph: Vec<(usize, usize)>,
    pub refinements: Vec<Refinement>,
}

/// Covers around `cycles`, contraction and per-cover refinement.
pub fn localize(
    cycles: &[Chain],
    f: &Filtration,
    embedding: &Embedding,
    config: &LocalizeConfig,
) -> Result<Localization> {
    let params = &config.params;
    let mut filtered = 0;
    let mut covers = Vec::new();
    for c in cycles {
        if max_persistence_estimate(c, f, embedding) < params.epsilon {
            filtered += 1;
            continue;
        }
        if let Some(cover) = cover_of(covers.len(), &c.vertex_set(f), embedding) {
            covers.push(cover);
        }
    }
    count_all(&mut covers, embedding, config.dim, params)?;
    let live: Vec<Cover> = covers.iter().filter(|c| c.n_sig > 0).cloned().collect();
    let (contracted, contraction) = contract_covers(live, embedding, config.dim, params)?;
    let graph = cover_intersection_graph(&contracted);
    let mut refinements = Vec::new();
    if !config.skip_refinement {
        for c in &contracted {
            refinements.push(run_refinement(c, embedding, config.dim, params, &config.refine)?);
        }
    }
    Ok(Localization {
        filtered,
        covers,
        contracted,
        contraction,
        graph,
        refinements,
    })
}
