//! Deterministic enumeration orders.
//!
//! Subsets come by increasing cardinality and lexicographically within a
//! cardinality. The first failing set in this order is the one reported.

use crate::interval::IndexPair;

/// All `k`-subsets of `items` in lexicographic order.
pub fn combinations(items: &[usize], k: usize) -> Combinations<'_> {
    Combinations { items, idx: (0..k).collect(), done: k > items.len() }
}

pub struct Combinations<'a> {
    items: &'a [usize],
    idx: Vec<usize>,
    done: bool,
}

impl Iterator for Combinations<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.iter().map(|&i| self.items[i]).collect();
        let (n, k) = (self.items.len(), self.idx.len());
        // advance to the next index tuple
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.idx[pos] < n - k + pos {
                self.idx[pos] += 1;
                for q in pos + 1..k {
                    self.idx[q] = self.idx[q - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Nonempty subsets of `items` by cardinality, then lexicographically.
pub fn nonempty_subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (1..=items.len()).flat_map(move |k| combinations(items, k))
}

/// Nonempty subsets of `{0..n}`.
pub fn nonempty_subsets_of(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let all: Vec<usize> = (0..n).collect();
    (1..=n).flat_map(move |k| combinations(&all, k).collect::<Vec<_>>())
}

/// Disjoint pairs `(I, J)` with `I ∪ J` nonempty, one per `(I, J) ~ (J, I)`
/// class: the smallest element of `I ∪ J` always lies in `I`.
///
/// Order: `K = I ∪ J` by the subset order, then `J ⊆ K \ {min K}` by the
/// subset order (starting with `J = ∅`).
pub fn index_pairs(n: usize) -> impl Iterator<Item = IndexPair> {
    nonempty_subsets_of(n).flat_map(|k| {
        let rest: Vec<usize> = k[1..].to_vec();
        let mut js: Vec<Vec<usize>> = vec![Vec::new()];
        js.extend(nonempty_subsets(&rest));
        js.into_iter().map(move |j| {
            let i: Vec<usize> = k.iter().copied().filter(|x| !j.contains(x)).collect();
            IndexPair::new(i, j).expect("disjoint by construction")
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_order() {
        let s: Vec<Vec<usize>> = nonempty_subsets_of(3).collect();
        assert_eq!(
            s,
            vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]
        );
        assert_eq!(nonempty_subsets_of(0).count(), 0);
        assert_eq!(combinations(&[0, 1], 3).count(), 0);
        assert_eq!(combinations(&[4, 7], 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn pair_count_is_half_of_three_pow() {
        for n in 1..=6 {
            assert_eq!(index_pairs(n).count(), (3usize.pow(n as u32) - 1) / 2);
        }
        let first: Vec<IndexPair> = index_pairs(2).collect();
        assert_eq!(first[0].i(), &[0]);
        assert_eq!(first[2].i(), &[0, 1]);
        assert_eq!(first[3].j(), &[1]);
    }
}
