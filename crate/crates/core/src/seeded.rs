use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::SeededRng;

/// A seeded permutation of point indices. Every nondeterministic choice in a
/// trial picks the candidate that comes first in this permutation, so one
/// seed replays the whole trial.
#[derive(Debug, Clone)]
pub struct SeededOrder {
    seed: u64,
    rank: Vec<u32>,
}

impl SeededOrder {
    pub fn new(seed: u64, len: usize) -> Self {
        let mut rng = SeededRng::seed_from_u64(seed);
        let mut perm: Vec<u32> = (0..len as u32).collect();
        perm.shuffle(&mut rng);
        let mut rank = vec![0u32; len];
        for (pos, &p) in perm.iter().enumerate() {
            rank[p as usize] = pos as u32;
        }
        SeededOrder { seed, rank }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The candidate ranked first, if any.
    pub fn first(&self, candidates: impl IntoIterator<Item = usize>) -> Option<usize> {
        candidates.into_iter().min_by_key(|&i| self.rank[i])
    }

    /// Candidates sorted into permutation order.
    pub fn sorted(&self, candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut v: Vec<usize> = candidates.into_iter().collect();
        v.sort_by_key(|&i| self.rank[i]);
        v
    }
}
