//! Greedy shortening of a cycle basis by pairwise symmetric differences.
//!
//! Each round finds the largest achievable length reduction `d*` over all
//! ordered pairs, replaces every cycle that attains it, and stops when no
//! pair sum is shorter than its larger summand. Cycles are ranked by
//! decreasing length, so a cycle only ever needs to be summed with cycles
//! ranked after it.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::chain::{intersection_size, xor_sorted, Chain};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShortenConfig {
    /// Rayon chunk length for the initial scan.
    pub init_chunk: usize,
    /// Rayon chunk length for the per-round refresh.
    pub iter_chunk: usize,
    /// Use the simplex-to-cycle index (the dimension-1 path). Without it every
    /// round rescans all pairs.
    pub indexed: bool,
    /// Keep the sorted length vector after every round.
    pub record_history: bool,
}

impl Default for ShortenConfig {
    fn default() -> Self {
        ShortenConfig {
            init_chunk: 1000,
            iter_chunk: 50,
            indexed: true,
            record_history: false,
        }
    }
}

impl ShortenConfig {
    /// Defaults for cycles of the given dimension.
    pub fn for_dim(dim: u8) -> Self {
        ShortenConfig {
            indexed: dim == 1,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShortenReport {
    pub rounds: usize,
    pub substitutions: usize,
    /// Sorted (decreasing) length vectors, initial state first.
    pub history: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Best {
    partner: Option<usize>,
    reduction: usize,
}

struct State {
    cycles: Vec<Vec<u64>>,
    /// ids in rank order
    order: Vec<usize>,
    rank: Vec<usize>,
    best: Vec<Best>,
    index: HashMap<u64, Vec<usize>>,
}

impl State {
    fn new(cycles: Vec<Vec<u64>>, indexed: bool) -> Self {
        let n = cycles.len();
        let mut s = State {
            cycles,
            order: (0..n).collect(),
            rank: vec![0; n],
            best: vec![Best::default(); n],
            index: HashMap::new(),
        };
        s.resort();
        if indexed {
            for (id, c) in s.cycles.iter().enumerate() {
                for &k in c {
                    s.index.entry(k).or_default().push(id);
                }
            }
        }
        s
    }

    fn resort(&mut self) {
        let cycles = &self.cycles;
        self.order
            .sort_by(|&a, &b| cycles[b].len().cmp(&cycles[a].len()).then(a.cmp(&b)));
        for (r, &id) in self.order.iter().enumerate() {
            self.rank[id] = r;
        }
    }

    fn lengths(&self) -> Vec<usize> {
        self.order.iter().map(|&id| self.cycles[id].len()).collect()
    }

    /// Length reduction of `i` when summed with `j`, or `None` when it cannot
    /// beat `floor` (early exit while counting).
    fn reduction(&self, i: usize, j: usize, floor: usize) -> Option<usize> {
        let (a, b) = (&self.cycles[i], &self.cycles[j]);
        // need |a ^ b| < |a| - floor
        let limit = a.len().checked_sub(floor)?;
        let (mut x, mut y, mut count) = (0, 0, 0);
        while x < a.len() || y < b.len() {
            if y == b.len() || (x < a.len() && a[x] < b[y]) {
                count += 1;
                x += 1;
            } else if x == a.len() || b[y] < a[x] {
                count += 1;
                y += 1;
            } else {
                x += 1;
                y += 1;
            }
            if count >= limit {
                return None;
            }
        }
        Some(a.len() - count)
    }

    /// Scan every cycle ranked after `i` using the index: intersection sizes
    /// give `|Xi ^ Xj| = |Xi| + |Xj| - 2|Xi ∩ Xj|`.
    fn scan_indexed(&self, i: usize) -> Best {
        let ri = self.rank[i];
        let mut counts: HashMap<usize, usize> = HashMap::new();
        for k in &self.cycles[i] {
            if let Some(ids) = self.index.get(k) {
                for &j in ids {
                    if self.rank[j] > ri {
                        *counts.entry(j).or_insert(0) += 1;
                    }
                }
            }
        }
        let mut best = Best::default();
        for (j, c) in counts {
            let lj = self.cycles[j].len();
            if 2 * c <= lj {
                continue;
            }
            let r = 2 * c - lj;
            let better = r > best.reduction
                || (r == best.reduction && best.partner.is_some_and(|p| self.rank[j] < self.rank[p]));
            if better {
                best = Best {
                    partner: Some(j),
                    reduction: r,
                };
            }
        }
        best
    }

    /// Scan candidates (in rank order) with the two early exits: stop once a
    /// candidate is no longer than the current best reduction, and abandon a
    /// pair once its sum is already too long.
    fn scan_list(&self, i: usize, candidates: &[usize], start: Best) -> Best {
        let ri = self.rank[i];
        let mut best = start;
        for &j in candidates {
            if self.rank[j] <= ri || j == i {
                continue;
            }
            if self.cycles[j].len() <= best.reduction {
                break;
            }
            if let Some(r) = self.reduction(i, j, best.reduction) {
                if r > best.reduction {
                    best = Best {
                        partner: Some(j),
                        reduction: r,
                    };
                }
            }
        }
        best
    }

    fn scan_all(&self, i: usize) -> Best {
        let from = self.rank[i] + 1;
        self.scan_list(i, &self.order[from..], Best::default())
    }
}

/// Shortens `cycles` in place of a basis. All chains must share one dimension.
pub fn shorten_cycles(cycles: Vec<Chain>, config: &ShortenConfig) -> (Vec<Chain>, ShortenReport) {
    let dim = cycles.first().map_or(0, |c| c.dim);
    debug_assert!(cycles.iter().all(|c| c.dim == dim));
    let mut report = ShortenReport::default();
    let mut state = State::new(cycles.into_iter().map(|c| c.simplices).collect(), config.indexed);
    let n = state.cycles.len();
    if config.record_history {
        report.history.push(state.lengths());
    }

    let init: Vec<Best> = {
        let st = &state;
        (0..n)
            .into_par_iter()
            .with_min_len(config.init_chunk.max(1))
            .map(|i| {
                if config.indexed {
                    st.scan_indexed(i)
                } else {
                    st.scan_all(i)
                }
            })
            .collect()
    };
    state.best = init;

    loop {
        let d_star = state.best.iter().map(|b| b.reduction).max().unwrap_or(0);
        if d_star == 0 {
            break;
        }
        report.rounds += 1;

        // substitute with the partners' values from before this round
        let chosen: Vec<(usize, usize)> = state
            .order
            .iter()
            .filter(|&&i| state.best[i].reduction == d_star)
            .map(|&i| (i, state.best[i].partner.expect("positive reduction has a partner")))
            .collect();
        let new_values: Vec<Vec<u64>> = chosen
            .iter()
            .map(|&(i, j)| xor_sorted(&state.cycles[i], &state.cycles[j]))
            .collect();
        let mut updated = vec![false; n];
        for (&(i, _), value) in chosen.iter().zip(new_values) {
            if config.indexed {
                update_index(&mut state.index, i, &state.cycles[i], &value);
            }
            state.cycles[i] = value;
            updated[i] = true;
        }
        report.substitutions += chosen.len();
        state.resort();
        if config.record_history {
            report.history.push(state.lengths());
        }

        let refreshed: Vec<Best> = if config.indexed {
            let st = &state;
            let mut updated_list: Vec<usize> = (0..n).filter(|&i| updated[i]).collect();
            updated_list.sort_by_key(|&i| st.rank[i]);
            (0..n)
                .into_par_iter()
                .with_min_len(config.iter_chunk.max(1))
                .map(|i| {
                    let old = st.best[i];
                    let partner_updated = old.partner.is_some_and(|p| updated[p]);
                    if updated[i] || (old.reduction != 0 && partner_updated) {
                        // cases 1 and 3: everything ranked after i
                        st.scan_indexed(i)
                    } else {
                        // cases 2 and 4: only the updated cycles can do better
                        st.scan_list(i, &updated_list, old)
                    }
                })
                .collect()
        } else {
            let st = &state;
            (0..n)
                .into_par_iter()
                .with_min_len(config.iter_chunk.max(1))
                .map(|i| st.scan_all(i))
                .collect()
        };
        state.best = refreshed;
    }

    let out = state
        .order
        .iter()
        .map(|&id| Chain::from_sorted(dim, std::mem::take(&mut state.cycles[id])))
        .collect();
    (out, report)
}

fn update_index(index: &mut HashMap<u64, Vec<usize>>, id: usize, old: &[u64], new: &[u64]) {
    // removed: in old, not in new; added: in new, not in old
    let (mut x, mut y) = (0, 0);
    while x < old.len() || y < new.len() {
        if y == new.len() || (x < old.len() && old[x] < new[y]) {
            if let Some(list) = index.get_mut(&old[x]) {
                list.retain(|&c| c != id);
                if list.is_empty() {
                    index.remove(&old[x]);
                }
            }
            x += 1;
        } else if x == old.len() || new[y] < old[x] {
            index.entry(new[y]).or_default().push(id);
            y += 1;
        } else {
            x += 1;
            y += 1;
        }
    }
}

/// `|a ^ b|` through intersection counting.
pub fn sum_length(a: &Chain, b: &Chain) -> usize {
    a.len() + b.len() - 2 * intersection_size(&a.simplices, &b.simplices)
}

/// True when no pair sum is shorter than the longer of its two summands.
pub fn is_pairwise_minimal(cycles: &[Chain]) -> bool {
    for (i, a) in cycles.iter().enumerate() {
        for b in &cycles[i + 1..] {
            let s = sum_length(a, b);
            if s < a.len().max(b.len()) {
                return false;
            }
        }
    }
    true
}
