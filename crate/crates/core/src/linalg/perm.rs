//! Row permutations tracked by the pivoted Hessenberg processes.

use crate::error::{Error, Result};

/// Permutation of `0..len`, stored as the image sequence `map[i]`.
///
/// The pivoted reductions never move data; they only swap entries of this
/// map and address vectors through it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Identity permutation on `0..n`.
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    /// Builds a permutation from an explicit image sequence, verifying that
    /// it is a bijection on `0..map.len()`.
    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &image in &map {
            if image >= n {
                return Err(Error::InvalidStructure(format!(
                    "permutation image {image} out of bounds for length {n}"
                )));
            }
            if seen[image] {
                return Err(Error::InvalidStructure(format!(
                    "permutation image {image} repeated"
                )));
            }
            seen[image] = true;
        }
        Ok(Self { map })
    }

    /// Length of the permuted index set.
    pub fn len(&self) -> usize {
        self.map.len()
    }

    /// True if the permutation is empty.
    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Image of position `i`.
    pub fn get(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Swaps the images at positions `i` and `j`.
    pub fn swap(&mut self, i: usize, j: usize) {
        self.map.swap(i, j);
    }

    /// The full image sequence.
    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_maps_each_index_to_itself() {
        let p = Permutation::identity(4);
        assert_eq!(p.as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn swap_exchanges_images() {
        let mut p = Permutation::identity(3);
        p.swap(0, 2);
        assert_eq!(p.as_slice(), &[2, 1, 0]);
    }

    #[test]
    fn from_map_validates_bijection() {
        assert!(Permutation::from_map(vec![1, 0, 2]).is_ok());
        assert!(Permutation::from_map(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_map(vec![0, 3]).is_err());
    }
}
