use crate::error::{Error, Result};

/// Sparse feature vector: strictly increasing indices, no stored zeros.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseVector {
    entries: Vec<(usize, f64)>,
    dimension: usize,
}

impl SparseVector {
    pub fn zeros(dimension: usize) -> SparseVector {
        SparseVector {
            entries: Vec::new(),
            dimension,
        }
    }

    /// Builds a vector from `(index, weight)` pairs in any order. Zero weights
    /// are dropped; repeated indices are summed.
    pub fn from_pairs<I>(dimension: usize, pairs: I) -> Result<SparseVector>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut entries: Vec<(usize, f64)> = pairs.into_iter().collect();
        entries.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, w) in entries {
            if i >= dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    found: i + 1,
                });
            }
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += w,
                _ => merged.push((i, w)),
            }
        }
        merged.retain(|&(_, w)| w != 0.0);
        Ok(SparseVector {
            entries: merged,
            dimension,
        })
    }

    pub fn from_dense(values: &[f64]) -> SparseVector {
        SparseVector {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(i, w)| (i, *w))
                .collect(),
            dimension: values.len(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Stored entries in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.entries
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.entries[pos].1)
            .unwrap_or(0.0)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dimension];
        for &(i, w) in &self.entries {
            out[i] = w;
        }
        out
    }

    /// Dot product with a dense vector; only stored entries are touched.
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.entries.iter().map(|&(i, w)| w * dense[i]).sum()
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|&(_, w)| w * w).sum::<f64>().sqrt()
    }

    /// Divides by the L2 norm; the zero vector is left unchanged.
    pub fn l2_normalized(mut self) -> SparseVector {
        let n = self.norm();
        if n > 0.0 {
            for e in &mut self.entries {
                e.1 /= n;
            }
        }
        self
    }

    /// Concatenates blocks into one vector, offsetting each block's indices
    /// by the dimensions of the blocks before it.
    pub fn concat(blocks: &[SparseVector]) -> SparseVector {
        let mut entries = Vec::with_capacity(blocks.iter().map(SparseVector::nnz).sum());
        let mut offset = 0;
        for b in blocks {
            entries.extend(b.entries.iter().map(|&(i, w)| (i + offset, w)));
            offset += b.dimension;
        }
        SparseVector {
            entries,
            dimension: offset,
        }
    }

    pub fn first_non_finite(&self) -> Option<usize> {
        self.entries.iter().find(|(_, w)| !w.is_finite()).map(|&(i, _)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_sorted_merged_and_pruned() {
        let v = SparseVector::from_pairs(5, [(3, 1.0), (1, 2.0), (3, -1.0), (4, 0.5)]).unwrap();
        assert_eq!(v.iter().collect::<Vec<_>>(), [(1, 2.0), (4, 0.5)]);
        assert_eq!(v.get(3), 0.0);
        assert!(SparseVector::from_pairs(2, [(2, 1.0)]).is_err());
    }

    #[test]
    fn concat_offsets() {
        let a = SparseVector::from_dense(&[0.0, 1.0]);
        let b = SparseVector::from_dense(&[2.0, 0.0, 3.0]);
        let c = SparseVector::concat(&[a, b]);
        assert_eq!(c.dimension(), 5);
        assert_eq!(c.to_dense(), [0.0, 1.0, 2.0, 0.0, 3.0]);
    }

    #[test]
    fn normalization() {
        let v = SparseVector::from_dense(&[3.0, 4.0]).l2_normalized();
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert!(SparseVector::zeros(3).l2_normalized().is_zero());
    }
}
