//! Birth cycles: columns of `V` at birth simplices, rebuilt on demand.
//!
//! `V(c)` is `c` plus the `V` columns of every column added while reducing
//! `∂c`. Nothing but `R` is kept from the persistence pass, so each `V` column
//! is recomputed by replaying the reduction. Expensive, frequently requested
//! columns are cached.

use std::collections::HashMap;

use crate::chain::{compress_pairs, Chain, MaxColumn};
use crate::complex::{Filtration, Simplex};
use crate::error::{Error, Result};
use crate::persistence::{Owner, Persistence, ReducedMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct BirthCycle {
    pub birth_simplex: Simplex,
    pub birth: f64,
    pub death: f64,
    pub chain: Chain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BirthCycleConfig {
    /// Cache `V(c)` only when its reduction took more than this many additions.
    pub n_r_star: usize,
    /// ...and once it has been requested more than this many times.
    pub n_u_star: usize,
    pub cache: bool,
    /// Maximum number of column expansions for a single birth cycle.
    pub recursion_budget: usize,
}

impl Default for BirthCycleConfig {
    fn default() -> Self {
        BirthCycleConfig {
            n_r_star: 64,
            n_u_star: 2,
            cache: true,
            recursion_budget: 50_000_000,
        }
    }
}

/// Which births get a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BirthSelection {
    /// Every birth simplex, zero-persistence ones included.
    #[default]
    All,
    /// Births whose death is strictly later than the birth.
    PositivePersistence,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub hits: usize,
    pub stored: usize,
    pub expansions: usize,
}

struct Frame {
    column: u64,
    work: MaxColumn,
    start: usize,
    additions: usize,
    /// Child whose output is pending; its additions are added on return.
    child: Option<u64>,
}

/// Replays reductions in one homology dimension.
pub struct BirthCycleEngine<'a> {
    f: &'a Filtration,
    r: &'a ReducedMatrix,
    dim: u8,
    config: BirthCycleConfig,
    cache: HashMap<u64, Vec<u64>>,
    usage: HashMap<u64, usize>,
    /// Total additions (recursive) per column, known after its first expansion.
    cost: HashMap<u64, usize>,
    pub stats: CacheStats,
}

impl<'a> BirthCycleEngine<'a> {
    pub fn new(f: &'a Filtration, persistence: &'a Persistence, dim: u8, config: BirthCycleConfig) -> Result<Self> {
        if dim == 0 || dim as usize > persistence.max_dim {
            return Err(Error::InvalidInput(format!(
                "birth cycles need 1 <= dim <= {}, got {dim}",
                persistence.max_dim
            )));
        }
        let r = persistence
            .reduced(dim - 1)
            .ok_or_else(|| Error::InvalidInput("persistence was computed without R".into()))?;
        Ok(BirthCycleEngine {
            f,
            r,
            dim,
            config,
            cache: HashMap::new(),
            usage: HashMap::new(),
            cost: HashMap::new(),
            stats: CacheStats::default(),
        })
    }

    fn start_frame(&self, column: u64, start: usize) -> Frame {
        let mut work = MaxColumn::default();
        work.extend(self.f.boundary(Simplex::new(self.dim, column)));
        Frame {
            column,
            work,
            start,
            additions: 0,
            child: None,
        }
    }

    /// `V(column)` as a sorted GF(2) chain of `dim`-simplices.
    pub fn v_column(&mut self, column: u64) -> Result<Vec<u64>> {
        let mut out: Vec<u64> = Vec::new();
        let mut stack: Vec<Frame> = vec![self.start_frame(column, 0)];
        let mut expansions = 0usize;
        'frames: while !stack.is_empty() {
            let depth = stack.len();
            let frame = stack.last_mut().unwrap();
            if let Some(child) = frame.child.take() {
                frame.additions += self.cost.get(&child).copied().unwrap_or(0);
            }
            loop {
                let Some(low) = frame.work.pivot() else {
                    break;
                };
                let add = match self.r.owner(self.f, low) {
                    Some(Owner::Stored(c)) if c == frame.column => break,
                    Some(Owner::Apparent(t)) if t == frame.column => break,
                    Some(Owner::Stored(c)) if c < frame.column => c,
                    Some(Owner::Apparent(t)) if t < frame.column => {
                        frame.work.extend(self.f.boundary(Simplex::new(self.dim, t)));
                        frame.additions += 1;
                        out.push(t);
                        continue;
                    }
                    _ => {
                        if depth == 1 {
                            return Err(Error::NotABirth(column));
                        }
                        return Err(Error::Internal(format!(
                            "row {low} of column {} has no earlier owner",
                            frame.column
                        )));
                    }
                };
                frame
                    .work
                    .extend(self.r.column(add).expect("stored column").iter().copied());
                frame.additions += 1;
                *self.usage.entry(add).or_insert(0) += 1;
                if let Some(v) = self.cache.get(&add) {
                    self.stats.hits += 1;
                    out.extend_from_slice(v);
                    frame.additions += self.cost.get(&add).copied().unwrap_or(0);
                    continue;
                }
                expansions += 1;
                if expansions > self.config.recursion_budget {
                    return Err(Error::RecursionBudget {
                        simplex: column,
                        budget: self.config.recursion_budget,
                    });
                }
                frame.child = Some(add);
                let child = self.start_frame(add, out.len());
                stack.push(child);
                continue 'frames;
            }
            // frame finished: its V column is out[start..] plus itself
            let frame = stack.pop().unwrap();
            out.push(frame.column);
            self.cost.insert(frame.column, frame.additions);
            if !stack.is_empty() && self.config.cache {
                let used = self.usage.get(&frame.column).copied().unwrap_or(0);
                if frame.additions > self.config.n_r_star && used > self.config.n_u_star {
                    let mut v = out.split_off(frame.start);
                    v.sort_unstable();
                    compress_pairs(&mut v);
                    out.extend_from_slice(&v);
                    self.cache.insert(frame.column, v);
                    self.stats.stored += 1;
                }
            }
        }
        self.stats.expansions += expansions;
        out.sort_unstable();
        compress_pairs(&mut out);
        Ok(out)
    }

    /// Birth cycle of a birth simplex; errors if its reduced column is non-zero.
    pub fn birth_cycle(&mut self, sigma: u64) -> Result<Chain> {
        if self.r.column(sigma).is_some() || self.is_apparent_death(sigma) {
            return Err(Error::NotABirth(sigma));
        }
        Ok(Chain::from_sorted(self.dim, self.v_column(sigma)?))
    }

    fn is_apparent_death(&self, sigma: u64) -> bool {
        let s = Simplex::new(self.dim, sigma);
        match self.f.max_facet(s) {
            Some(low) => self.dim >= 2 && self.f.trivial_cofacet(Simplex::new(self.dim - 1, low)) == Some(sigma),
            None => false,
        }
    }
}

/// Birth simplices of `dim` in filtration order, with birth and death values.
pub fn births(p: &Persistence, dim: u8, selection: BirthSelection) -> Vec<(Simplex, f64, f64)> {
    p.pairs_in_dim(dim)
        .filter(|pair| match selection {
            BirthSelection::All => true,
            BirthSelection::PositivePersistence => pair.death > pair.birth,
        })
        .map(|pair| (pair.birth_simplex, pair.birth, pair.death))
        .collect()
}

/// Computes birth cycles one at a time and hands each to `sink`. Returns the
/// number emitted.
pub fn compute_all_birth_cycles(
    f: &Filtration,
    p: &Persistence,
    dim: u8,
    selection: BirthSelection,
    config: BirthCycleConfig,
    mut sink: impl FnMut(BirthCycle) -> Result<()>,
) -> Result<usize> {
    let mut engine = BirthCycleEngine::new(f, p, dim, config)?;
    let list = births(p, dim, selection);
    for &(s, birth, death) in &list {
        let chain = engine.birth_cycle(s.key)?;
        sink(BirthCycle {
            birth_simplex: s,
            birth,
            death,
            chain,
        })?;
    }
    log::debug!(
        "H{dim}: {} birth cycles, cache stored {} hits {} expansions {}",
        list.len(),
        engine.stats.stored,
        engine.stats.hits,
        engine.stats.expansions
    );
    Ok(list.len())
}

/// Convenience wrapper collecting every birth cycle.
pub fn birth_cycles(
    f: &Filtration,
    p: &Persistence,
    dim: u8,
    selection: BirthSelection,
    config: BirthCycleConfig,
) -> Result<Vec<BirthCycle>> {
    let mut out = Vec::new();
    compute_all_birth_cycles(f, p, dim, selection, config, |c| {
        out.push(c);
        Ok(())
    })?;
    Ok(out)
}
