//! Sparse vectors over a shared noun index space.

use crate::error::{Error, Result};
use crate::ingest::SpaceId;
use crate::num::Scalar;

/// Sparse real vector indexed by vocabulary-noun coordinates.
///
/// Entries are stored sorted by coordinate; absent coordinates are zero.
/// Structural entries may carry the value 0 (a nonzero association times an
/// orthogonal similarity); support-based operations treat them as present.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseVector<F> {
    space: SpaceId,
    entries: Vec<(u32, F)>,
}

impl<F: Scalar> SparseVector<F> {
    /// `entries` must be sorted by strictly increasing in-range coordinates.
    pub fn new(space: SpaceId, entries: Vec<(u32, F)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(i, _)| (*i as usize) < space.len()));
        SparseVector { space, entries }
    }

    pub fn empty(space: SpaceId) -> Self {
        SparseVector {
            space,
            entries: Vec::new(),
        }
    }

    pub fn space(&self) -> SpaceId {
        self.space
    }

    pub fn entries(&self) -> &[(u32, F)] {
        &self.entries
    }

    /// Number of structural entries.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// True when every coordinate is zero, structural or not.
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|(_, v)| *v == F::zero())
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(())
    }

    pub fn dot(&self, other: &Self) -> Result<F> {
        self.check_space(other)?;
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut acc = F::zero();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = acc + a[i].1 * b[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(acc)
    }

    pub fn norm_sq(&self) -> F {
        self.entries
            .iter()
            .map(|(_, v)| *v * *v)
            .fold(F::zero(), |acc, v| acc + v)
    }

    /// Cosine similarity; 0 when either vector is all-zero.
    pub fn cosine(&self, other: &Self) -> Result<F> {
        let denom_sq = self.norm_sq() * other.norm_sq();
        if denom_sq == F::zero() {
            self.check_space(other)?;
            return Ok(F::zero());
        }
        Ok(self.dot(other)? / denom_sq.sqrt())
    }

    /// Coordinate-wise product; support is the intersection of supports.
    pub fn hadamard(&self, other: &Self) -> Result<SparseVector<F>> {
        self.check_space(other)?;
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j) = (0, 0);
        let mut entries = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    entries.push((a[i].0, a[i].1 * b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(SparseVector::new(self.space, entries))
    }

    /// Multiply every entry by `factor`.
    pub fn scaled(&self, factor: F) -> SparseVector<F> {
        SparseVector {
            space: self.space,
            entries: self.entries.iter().map(|(i, v)| (*i, *v * factor)).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<F> {
        let mut dense = vec![F::zero(); self.space.len()];
        for (i, v) in &self.entries {
            dense[*i as usize] = *v;
        }
        dense
    }
}
