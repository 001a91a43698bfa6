//! `d`-subsets of `{0, …, e-1}` in colexicographic order.

/// Binomial coefficient as `u128`; saturates instead of overflowing.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// The `k`-subset of colex rank `rank`, in increasing order.
pub fn colex_unrank(mut rank: u128, k: usize) -> Vec<usize> {
    let mut out = vec![0; k];
    for pos in (1..=k).rev() {
        // Largest c with C(c, pos) <= rank.
        let mut c = pos - 1;
        while binomial(c + 1, pos) <= rank {
            c += 1;
        }
        out[pos - 1] = c;
        rank -= binomial(c, pos);
    }
    out
}

/// Precomputed binomials for O(d) ranking of subsets of `[e]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColexIndex {
    e: usize,
    d: usize,
    table: Vec<Vec<usize>>,
}

impl ColexIndex {
    pub fn new(e: usize, d: usize) -> Self {
        let mut table = vec![vec![0usize; d + 2]; e + 1];
        for (n, row) in table.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                *slot = binomial(n, k).min(usize::MAX as u128) as usize;
            }
        }
        ColexIndex { e, d, table }
    }

    pub fn len(&self) -> usize {
        self.table[self.e][self.d]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rank of a strictly increasing `d`-subset: `Σ_k C(s_k, k+1)`.
    pub fn rank(&self, sorted: &[usize]) -> usize {
        debug_assert_eq!(sorted.len(), self.d);
        debug_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
        sorted.iter().enumerate().map(|(k, &s)| self.table[s][k + 1]).sum()
    }

    /// Rank of `base ∪ {extra}` for a sorted `(d-1)`-subset `base` not
    /// containing `extra`.
    pub fn rank_with(&self, base: &[usize], extra: usize) -> usize {
        debug_assert_eq!(base.len() + 1, self.d);
        let mut r = 0;
        let mut k = 0;
        let mut placed = false;
        for &s in base {
            if !placed && extra < s {
                r += self.table[extra][k + 1];
                k += 1;
                placed = true;
            }
            r += self.table[s][k + 1];
            k += 1;
        }
        if !placed {
            r += self.table[extra][k + 1];
        }
        r
    }

    /// Rank of `base − {base[skip]}` for a sorted `(d+1)`-subset `base`.
    pub fn rank_without(&self, base: &[usize], skip: usize) -> usize {
        debug_assert_eq!(base.len(), self.d + 1);
        base.iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .enumerate()
            .map(|(k, (_, &s))| self.table[s][k + 1])
            .sum()
    }
}

/// Iterator over the `k`-subsets of `{0, …, n-1}` in colex order, so the
/// `r`-th item has colex rank `r`.
#[derive(Clone, Debug)]
pub struct ColexSubsets {
    n: usize,
    cur: Vec<usize>,
    done: bool,
}

impl ColexSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        ColexSubsets { n, cur: (0..k).collect(), done: k > n }
    }
}

impl Iterator for ColexSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        let k = self.cur.len();
        // Smallest position that can be bumped without colliding with its
        // right neighbour; everything to its left resets to 0..i.
        let mut i = 0;
        loop {
            if i == k {
                self.done = true;
                break;
            }
            let limit = if i + 1 < k { self.cur[i + 1] } else { self.n };
            if self.cur[i] + 1 < limit {
                self.cur[i] += 1;
                for (j, slot) in self.cur[..i].iter_mut().enumerate() {
                    *slot = j;
                }
                break;
            }
            i += 1;
        }
        Some(out)
    }
}
