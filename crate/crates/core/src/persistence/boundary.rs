use rayon::prelude::*;

use crate::chain::MaxColumn;
use crate::complex::{Filtration, Simplex};
use crate::error::{Error, Result};

use super::matrix::{Owner, ReducedMatrix};

enum Progress {
    Done(Vec<u64>),
    /// The pivot belongs to a column that is not in the matrix yet.
    Blocked(MaxColumn),
}

/// Adds owning columns until the pivot reaches `birth`, or until the pivot's
/// owner is missing from `m`.
fn advance(f: &Filtration, m: &ReducedMatrix, death: u64, birth: u64, mut col: MaxColumn) -> Result<Progress> {
    let dim = m.dim();
    loop {
        let Some(low) = col.pivot() else {
            return Err(Error::Internal(format!(
                "boundary column {death} (dim {dim}) reduced to zero; expected pivot {birth}"
            )));
        };
        if low == birth {
            return Ok(Progress::Done(col.into_sorted()));
        }
        if low < birth {
            return Err(Error::Internal(format!(
                "boundary column {death} (dim {dim}) passed its expected pivot {birth}"
            )));
        }
        match m.owner(f, low) {
            Some(Owner::Stored(c)) if c < death => {
                col.extend(m.column(c).expect("stored owner").iter().copied());
            }
            Some(Owner::Apparent(t)) if t < death => {
                col.extend(f.boundary(Simplex::new(dim, t)));
            }
            _ => return Ok(Progress::Blocked(col)),
        }
    }
}

fn initial(f: &Filtration, dim: u8, death: u64) -> MaxColumn {
    let mut col = MaxColumn::default();
    col.extend(f.boundary(Simplex::new(dim, death)));
    col
}

/// Reduces the boundary columns of the given `(birth, death)` pairs, where the
/// deaths are `dim`-simplices. Columns are handled in batches: every column of
/// a batch is first reduced in parallel against the columns already merged,
/// then the batch is finished serially in order. The result does not depend
/// on `batch_size` or on the number of worker threads.
pub fn reduce_boundary_targeted(
    f: &Filtration,
    dim: u8,
    targets: &[(u64, u64)],
    batch_size: usize,
) -> Result<ReducedMatrix> {
    let mut sorted: Vec<(u64, u64)> = targets.to_vec();
    sorted.sort_unstable_by_key(|&(_, d)| d);
    let mut m = ReducedMatrix::new(dim, true);
    for batch in sorted.chunks(batch_size.max(1)) {
        let frozen = &m;
        let phase1: Vec<Result<Progress>> = batch
            .par_iter()
            .map(|&(b, d)| advance(f, frozen, d, b, initial(f, dim, d)))
            .collect();
        for (&(b, d), res) in batch.iter().zip(phase1) {
            let column = match res? {
                Progress::Done(c) => c,
                Progress::Blocked(col) => match advance(f, &m, d, b, col)? {
                    Progress::Done(c) => c,
                    Progress::Blocked(_) => {
                        return Err(Error::Internal(format!(
                            "boundary column {d} (dim {dim}) has a pivot with no earlier owner"
                        )))
                    }
                },
            };
            m.insert(d, column);
        }
    }
    Ok(m)
}

/// Plain serial reduction of the same columns; reference for the batched path.
pub fn reduce_columns_serial(f: &Filtration, dim: u8, targets: &[(u64, u64)]) -> Result<ReducedMatrix> {
    let mut sorted: Vec<(u64, u64)> = targets.to_vec();
    sorted.sort_unstable_by_key(|&(_, d)| d);
    let mut m = ReducedMatrix::new(dim, true);
    for &(b, d) in &sorted {
        match advance(f, &m, d, b, initial(f, dim, d))? {
            Progress::Done(c) => m.insert(d, c),
            Progress::Blocked(_) => {
                return Err(Error::Internal(format!(
                    "boundary column {d} (dim {dim}) has a pivot with no earlier owner"
                )))
            }
        }
    }
    Ok(m)
}
