use std::collections::HashMap;

use crate::chain::Chain;
use crate::complex::{Filtration, Simplex};

/// Which column owns a pivot row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    /// A stored reduced column, keyed by its death simplex.
    Stored(u64),
    /// An apparent pair partner whose reduced column is its own boundary.
    Apparent(u64),
}

/// Reduced boundary columns of dimension `dim`, keyed by death simplex, plus
/// the pivot-row index. Apparent pairs are not stored; when `apparent_inline`
/// is set they are resolved from the filtration on lookup.
#[derive(Debug, Clone, Default)]
pub struct ReducedMatrix {
    dim: u8,
    columns: HashMap<u64, Vec<u64>>,
    owners: HashMap<u64, u64>,
    apparent_inline: bool,
}

impl ReducedMatrix {
    pub fn new(dim: u8, apparent_inline: bool) -> Self {
        ReducedMatrix {
            dim,
            columns: HashMap::new(),
            owners: HashMap::new(),
            apparent_inline,
        }
    }

    /// Dimension of the columns.
    pub fn dim(&self) -> u8 {
        self.dim
    }

    /// Number of stored (nontrivial) columns.
    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub(crate) fn insert(&mut self, death: u64, column: Vec<u64>) {
        let low = *column.last().expect("reduced death column is non-empty");
        let prev = self.owners.insert(low, death);
        debug_assert!(prev.is_none(), "row {low} already owned");
        self.columns.insert(death, column);
    }

    pub fn column(&self, death: u64) -> Option<&[u64]> {
        self.columns.get(&death).map(Vec::as_slice)
    }

    /// Stored death keys in ascending order.
    pub fn death_keys(&self) -> impl Iterator<Item = u64> + '_ {
        let mut keys: Vec<u64> = self.columns.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
    }

    /// `(pivot row, death column)` for every stored column, by row.
    pub fn pivots(&self) -> Vec<(u64, u64)> {
        let mut v: Vec<(u64, u64)> = self.owners.iter().map(|(&r, &c)| (r, c)).collect();
        v.sort_unstable();
        v
    }

    pub fn stored_owner(&self, row: u64) -> Option<u64> {
        self.owners.get(&row).copied()
    }

    pub fn owner(&self, f: &Filtration, row: u64) -> Option<Owner> {
        if let Some(&c) = self.owners.get(&row) {
            return Some(Owner::Stored(c));
        }
        if self.apparent_inline {
            if let Some(t) = f.trivial_cofacet(Simplex::new(self.dim - 1, row)) {
                return Some(Owner::Apparent(t));
            }
        }
        None
    }

    /// `R(death)`: the stored column, or the boundary of an apparent death.
    pub fn reduced_column(&self, f: &Filtration, death: u64) -> Option<Chain> {
        if let Some(c) = self.columns.get(&death) {
            return Some(Chain::from_sorted(self.dim - 1, c.clone()));
        }
        if self.apparent_inline {
            let s = Simplex::new(self.dim, death);
            let low = f.max_facet(s)?;
            if f.trivial_cofacet(Simplex::new(self.dim - 1, low)) == Some(death) {
                return Some(Chain::from_sorted(self.dim - 1, f.boundary(s).to_vec()));
            }
        }
        None
    }
}
