use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A search space of `n` basis states with `r` marked ones.
///
/// Besides the sorted marked list, the instance keeps a per-state rank so the
/// deviation of state `i` can be found inside its block (marked or unmarked)
/// in constant time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchInstance {
    n: usize,
    marked: Vec<usize>,
    is_marked: Vec<bool>,
    rank: Vec<usize>,
}

impl SearchInstance {
    /// Validates `1 <= r <= N/2`, `N >= 2` and that marked indices are unique and in range.
    pub fn new(n: usize, marked: &[usize]) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewStates(n));
        }
        let r = marked.len();
        if r == 0 || r > n / 2 {
            return Err(Error::RMarkedOutOfRange { r, n });
        }
        let mut is_marked = vec![false; n];
        for &index in marked {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, n });
            }
            if is_marked[index] {
                return Err(Error::DuplicateIndex(index));
            }
            is_marked[index] = true;
        }
        let mut rank = vec![0; n];
        let (mut marked_seen, mut unmarked_seen) = (0, 0);
        for (slot, &m) in rank.iter_mut().zip(&is_marked) {
            if m {
                *slot = marked_seen;
                marked_seen += 1;
            } else {
                *slot = unmarked_seen;
                unmarked_seen += 1;
            }
        }
        let mut marked = marked.to_vec();
        marked.sort_unstable();
        Ok(Self {
            n,
            marked,
            is_marked,
            rank,
        })
    }

    /// Instance whose marked states are the last `r` indices.
    pub fn with_last_marked(n: usize, r: usize) -> Result<Self> {
        let first = n.checked_sub(r).ok_or(Error::RMarkedOutOfRange { r, n })?;
        let marked: Vec<usize> = (first..n).collect();
        Self::new(n, &marked)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.marked.len()
    }

    pub fn unmarked_count(&self) -> usize {
        self.n - self.marked.len()
    }

    /// Marked indices in ascending order.
    pub fn marked(&self) -> &[usize] {
        &self.marked
    }

    pub fn is_marked(&self, index: usize) -> bool {
        self.is_marked.get(index).copied().unwrap_or(false)
    }

    pub fn marked_mask(&self) -> &[bool] {
        &self.is_marked
    }

    /// Position of `index` among the states of its own block, in index order.
    pub fn block_rank(&self, index: usize) -> Result<usize> {
        self.rank
            .get(index)
            .copied()
            .ok_or(Error::IndexOutOfRange { index, n: self.n })
    }

    /// Iterator over unmarked indices in ascending order.
    pub fn unmarked(&self) -> impl Iterator<Item = usize> + '_ {
        self.is_marked
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| (!m).then_some(i))
    }

    /// `r / N`, the only ratio the oscillation frequency depends on.
    pub fn marked_fraction(&self) -> f64 {
        self.r() as f64 / self.n as f64
    }
}
