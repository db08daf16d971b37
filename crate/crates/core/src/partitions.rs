//! Set partitions of `0..n` as restricted growth strings.
//!
//! A restricted growth string `a` has `a[0] = 0` and
//! `a[i] ≤ 1 + max(a[0..i])`. Strings are produced in lexicographic order,
//! which is the canonical enumeration order used throughout the crate.

use rand::Rng;

use crate::graph::VertexPartition;

/// Lexicographic iterator over all restricted growth strings of length `n`.
#[derive(Clone, Debug)]
pub struct RestrictedGrowth {
    current: Vec<usize>,
    // prefix_max[i] = max(current[0..=i])
    prefix_max: Vec<usize>,
    done: bool,
}

impl RestrictedGrowth {
    pub fn new(n: usize) -> Self {
        Self {
            current: vec![0; n],
            prefix_max: vec![0; n],
            done: false,
        }
    }

    fn advance(&mut self) {
        let n = self.current.len();
        // rightmost position that can still grow
        let mut i = n;
        while i > 1 {
            i -= 1;
            if self.current[i] <= self.prefix_max[i - 1] {
                self.current[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.current[i]);
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return;
            }
        }
        self.done = true;
    }
}

impl Iterator for RestrictedGrowth {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        if self.current.is_empty() {
            self.done = true;
        } else {
            self.advance();
        }
        Some(out)
    }
}

/// All partitions of `0..n` in canonical order.
pub fn set_partitions(n: usize) -> impl Iterator<Item = VertexPartition> {
    RestrictedGrowth::new(n).map(|rgs| VertexPartition::from_labels(&rgs))
}

/// Bell number `B(n)`, via the Bell triangle.
pub fn bell(n: usize) -> u128 {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}

/// A random partition with exactly `t` parts: `t` distinct seed vertices
/// open the parts, every other vertex joins a uniformly random part.
pub fn random_partition_with_parts<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> VertexPartition {
    assert!(1 <= t && t <= n, "need 1 <= t <= n");
    let seeds = rand::seq::index::sample(rng, n, t);
    let mut labels = vec![usize::MAX; n];
    for (part, v) in seeds.iter().enumerate() {
        labels[v] = part;
    }
    for l in labels.iter_mut().filter(|l| **l == usize::MAX) {
        *l = rng.random_range(0..t);
    }
    VertexPartition::from_labels(&labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn counts_match_bell_numbers() {
        let expected = [1u128, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in expected.iter().enumerate() {
            assert_eq!(bell(n), b);
            assert_eq!(RestrictedGrowth::new(n).count() as u128, b, "n = {n}");
        }
    }

    #[test]
    fn strings_are_restricted_distinct_and_sorted() {
        let all: Vec<_> = RestrictedGrowth::new(6).collect();
        let unique: HashSet<_> = all.iter().cloned().collect();
        assert_eq!(unique.len(), all.len());
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for s in &all {
            let mut max = 0;
            assert_eq!(s[0], 0);
            for &x in &s[1..] {
                assert!(x <= max + 1);
                max = max.max(x);
            }
        }
    }

    #[test]
    fn first_and_last() {
        let all: Vec<_> = RestrictedGrowth::new(3).collect();
        assert_eq!(all.first().unwrap(), &vec![0, 0, 0]);
        assert_eq!(all.last().unwrap(), &vec![0, 1, 2]);
    }

    #[test]
    fn random_partition_has_requested_parts() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t in 1..=7 {
            let p = random_partition_with_parts(7, t, &mut rng);
            assert_eq!(p.t(), t);
            assert_eq!(p.n(), 7);
        }
    }
}
