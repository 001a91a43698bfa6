use super::PhyloTree;
use crate::error::{Error, Result};
use crate::scalar::{tied, Scalar};

/// Index of pair `(i, j)`, `i < j`, among the lexicographic pairs of `[m]`.
pub fn pair_index(i: usize, j: usize, m: usize) -> usize {
    debug_assert!(i < j && j < m);
    i * m - i * (i + 1) / 2 + (j - i - 1)
}

/// The `m` with `C(m, 2) = len`.
pub fn leaves_for_pairs(len: usize) -> Result<usize> {
    let m = ((1.0 + (1.0 + 8.0 * len as f64).sqrt()) / 2.0).round() as usize;
    if m >= 2 && m * (m - 1) / 2 == len {
        Ok(m)
    } else {
        Err(Error::NotTriangular(len))
    }
}

/// Every triple's maximum over its three pairs is attained at least twice.
pub fn is_ultrametric<T: Scalar>(v: &[T]) -> Result<bool> {
    let m = leaves_for_pairs(v.len())?;
    for i in 0..m {
        for j in i + 1..m {
            let ij = v[pair_index(i, j, m)];
            for k in j + 1..m {
                let (ik, jk) = (v[pair_index(i, k, m)], v[pair_index(j, k, m)]);
                let top = ij.max(ik).max(jk);
                let hits = [ij, ik, jk].iter().filter(|&&x| tied(x, top)).count();
                if hits < 2 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The strong triangle inequality `d_ik ≤ max(d_ij, d_jk)` for every triple.
pub fn is_ultrametric_triangle<T: Scalar>(v: &[T]) -> Result<bool> {
    let m = leaves_for_pairs(v.len())?;
    let d = |a: usize, b: usize| if a < b { v[pair_index(a, b, m)] } else { v[pair_index(b, a, m)] };
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                if i == j || j == k || i == k {
                    continue;
                }
                let bound = d(i, j).max(d(j, k));
                if d(i, k) > bound && !tied(d(i, k), bound) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Shifts by a constant so every entry is at least 1 when some entry is
/// not positive; ultrametricity and the induced topology are unchanged.
pub fn positive_representative(v: &[f64]) -> Vec<f64> {
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if min > 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x + (1.0 - min)).collect()
    }
}

/// Equidistant tree with the given ultrametric as its cophenetic vector.
///
/// Clusters merge in order of increasing distance at height `d/2`; ties go
/// to the pair whose smallest leaf indices are least. A merge within the
/// tie tolerance of a child's height extends that child into a polytomy.
pub fn ultrametric_to_tree(v: &[f64], labels: &[String]) -> Result<PhyloTree> {
    let m = leaves_for_pairs(v.len())?;
    if labels.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: labels.len() });
    }
    if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::NotDissimilarity(format!("entries must be positive, found {x}")));
    }
    if !is_ultrametric(v)? {
        return Err(Error::NotUltrametric);
    }
    let mut node_labels: Vec<Option<String>> = labels.iter().cloned().map(Some).collect();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut heights = vec![0.0; m];
    // Active clusters: (node, leaves).
    let mut clusters: Vec<(usize, Vec<usize>)> = (0..m).map(|i| (i, vec![i])).collect();
    let dist = |a: &[usize], b: &[usize]| {
        let mut worst = f64::NEG_INFINITY;
        for &x in a {
            for &y in b {
                let (i, j) = if x < y { (x, y) } else { (y, x) };
                worst = worst.max(v[pair_index(i, j, m)]);
            }
        }
        worst
    };
    while clusters.len() > 1 {
        let mut best: Option<(f64, usize, usize)> = None;
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let d = dist(&clusters[a].1, &clusters[b].1);
                let better = match best {
                    None => true,
                    Some((bd, ba, bb)) => {
                        if tied(d, bd) {
                            (clusters[a].1[0], clusters[b].1[0]) < (clusters[ba].1[0], clusters[bb].1[0])
                        } else {
                            d < bd
                        }
                    }
                };
                if better {
                    best = Some((d, a, b));
                }
            }
        }
        let (d, a, b) = best.expect("two clusters remain");
        let h = d / 2.0;
        let (nb, lb) = clusters.remove(b);
        let (na, la) = clusters.remove(a);
        let mut kids = Vec::new();
        for n in [na, nb] {
            if !children[n].is_empty() && tied(heights[n], h) {
                kids.append(&mut children[n]);
            } else {
                kids.push(n);
            }
        }
        let id = node_labels.len();
        node_labels.push(None);
        children.push(kids);
        heights.push(h);
        let mut leaves = la;
        leaves.extend(lb);
        leaves.sort_unstable();
        // Keep clusters ordered by smallest leaf for deterministic ties.
        let at = clusters.partition_point(|c| c.1[0] < leaves[0]);
        clusters.insert(at, (id, leaves));
    }
    let root = clusters[0].0;
    // Drop nodes emptied by polytomy merges and renumber.
    let live: Vec<bool> = (0..children.len()).map(|n| n < m || !children[n].is_empty()).collect();
    let mut new_id = vec![usize::MAX; children.len()];
    let mut next = 0;
    for n in 0..children.len() {
        if live[n] {
            new_id[n] = next;
            next += 1;
        }
    }
    let keep = |n: &usize| live[*n];
    let labels: Vec<Option<String>> = (0..children.len()).filter(keep).map(|n| node_labels[n].clone()).collect();
    let kids: Vec<Vec<usize>> =
        (0..children.len()).filter(keep).map(|n| children[n].iter().map(|&c| new_id[c]).collect()).collect();
    let hs: Vec<f64> = (0..children.len()).filter(keep).map(|n| heights[n]).collect();
    PhyloTree::from_heights(labels, kids, &hs, new_id[root])
}
