use std::fmt;

use crate::error::{Error, Result};

/// Strictly increasing set of coordinate indices addressing one component
/// `dx_{j1} ∧ … ∧ dx_{jk}` of a `k`-form on `ℝⁿ`.
///
/// Indices are stored zero-based; the text format and `Display` use the
/// one-based convention `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    n: usize,
    indices: Vec<usize>,
}

impl MultiIndex {
    /// Zero-based constructor. Fails unless the indices are strictly
    /// increasing and below `n`.
    pub fn new(n: usize, indices: Vec<usize>) -> Result<Self> {
        if indices.len() > n {
            return Err(Error::Degree(format!(
                "{} indices exceed dimension {n}",
                indices.len()
            )));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::Dimension(format!(
                "index {} outside 1..={n}",
                bad + 1
            )));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Parameter(format!(
                "indices {indices:?} are not strictly increasing"
            )));
        }
        Ok(MultiIndex { n, indices })
    }

    /// One-based constructor matching the mathematical notation.
    pub fn from_one_based(n: usize, indices: &[usize]) -> Result<Self> {
        if indices.contains(&0) {
            return Err(Error::Dimension("index 0 in one-based multi-index".into()));
        }
        Self::new(n, indices.iter().map(|i| i - 1).collect())
    }

    pub fn empty(n: usize) -> Self {
        MultiIndex {
            n,
            indices: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// All multi-indices of degree `k` in lexicographic order.
    pub fn all(n: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut current = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
            if cur.len() == k {
                out.push(MultiIndex {
                    n,
                    indices: cur.clone(),
                });
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(n, k, i + 1, cur, out);
                cur.pop();
            }
        }
        rec(n, k, 0, &mut current, &mut out);
        out
    }

    /// The index with position `pos` removed.
    pub fn without_position(&self, pos: usize) -> MultiIndex {
        let mut indices = self.indices.clone();
        indices.remove(pos);
        MultiIndex { n: self.n, indices }
    }

    /// Inserts coordinate `i` (not already present), returning the new index
    /// and the sign `(-1)^{position}` of moving `dx_i` from the front into
    /// place.
    pub fn insert_front(&self, i: usize) -> Option<(MultiIndex, i32)> {
        match self.indices.binary_search(&i) {
            Ok(_) => None,
            Err(pos) => {
                let mut indices = self.indices.clone();
                indices.insert(pos, i);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                Some((MultiIndex { n: self.n, indices }, sign))
            }
        }
    }

    /// Concatenates `self` then `other` and sorts, returning the sign of the
    /// sorting permutation. `None` when the indices overlap.
    pub fn concat_sorted(&self, other: &MultiIndex) -> Option<(MultiIndex, i32)> {
        let mut v: Vec<usize> = self.indices.iter().chain(&other.indices).copied().collect();
        let sign = sort_with_sign(&mut v)?;
        Some((MultiIndex { n: self.n, indices: v }, sign))
    }
}

/// Sorts in place and returns the permutation sign, or `None` on a repeated
/// entry.
pub fn sort_with_sign(v: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && v[j - 1] == v[j] {
            return None;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(sign)
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_out_of_range() {
        assert!(MultiIndex::new(3, vec![1, 0]).is_err());
        assert!(MultiIndex::new(3, vec![1, 1]).is_err());
        assert!(MultiIndex::new(3, vec![3]).is_err());
        assert!(MultiIndex::from_one_based(3, &[1, 3]).is_ok());
    }

    #[test]
    fn enumerates_binomial_many() {
        assert_eq!(MultiIndex::all(5, 2).len(), 10);
        assert_eq!(MultiIndex::all(4, 0).len(), 1);
        assert_eq!(MultiIndex::all(2, 3).len(), 0);
    }

    #[test]
    fn permutation_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        let mut v = vec![1, 0];
        assert_eq!(sort_with_sign(&mut v), Some(-1));
        let mut v = vec![1, 2, 1];
        assert_eq!(sort_with_sign(&mut v), None);
    }
}
