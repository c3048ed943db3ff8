//! Deterministic sweeps: exhaustive index ranges and seeded samples.
//!
//! Results never depend on scheduling; with the `parallel` feature the
//! search still returns the lowest failing index.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Smallest `i < n` for which `f` yields a witness.
#[cfg(feature = "parallel")]
pub fn find_first<W: Send>(n: usize, f: impl Fn(usize) -> Option<W> + Sync + Send) -> Option<W> {
    use rayon::prelude::*;
    (0..n).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub fn find_first<W: Send>(n: usize, f: impl Fn(usize) -> Option<W> + Sync + Send) -> Option<W> {
    (0..n).find_map(f)
}

/// Applies `f` to each index, preserving order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    (0..n).map(f).collect()
}

/// Seeded generator used by every sampled check.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` tuples of `arity` indices below `n`, reproducible from `seed`.
pub fn sample_tuples(seed: u64, n: usize, arity: usize, count: usize) -> Vec<Vec<usize>> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| (0..arity).map(|_| r.gen_range(0..n)).collect())
        .collect()
}

/// Either every tuple in `[0,n)^arity` (when that is at most `limit`) or `samples` seeded ones.
pub fn tuples(n: usize, arity: usize, limit: usize, samples: usize, seed: u64) -> (Vec<Vec<usize>>, bool) {
    let total = n.checked_pow(arity as u32).unwrap_or(usize::MAX);
    if total <= limit {
        let mut out = Vec::with_capacity(total);
        for mut k in 0..total {
            let mut t = alloc::vec![0; arity];
            for slot in t.iter_mut().rev() {
                *slot = k % n;
                k /= n;
            }
            out.push(t);
        }
        (out, true)
    } else {
        (sample_tuples(seed, n, arity, samples), false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_witness_is_lowest() {
        assert_eq!(find_first(100, |i| (i % 7 == 3).then_some(i)), Some(3));
        assert_eq!(find_first(10, |_| None::<()>), None);
    }

    #[test]
    fn samples_are_reproducible() {
        assert_eq!(sample_tuples(7, 50, 3, 20), sample_tuples(7, 50, 3, 20));
        assert_ne!(sample_tuples(7, 50, 3, 20), sample_tuples(8, 50, 3, 20));
    }

    #[test]
    fn exhaustive_tuples_enumerate_lexicographically() {
        let (t, all) = tuples(3, 2, 100, 5, 0);
        assert!(all);
        assert_eq!(t.len(), 9);
        assert_eq!(t[0], alloc::vec![0, 0]);
        assert_eq!(t[1], alloc::vec![0, 1]);
        assert_eq!(t[8], alloc::vec![2, 2]);
    }
}
