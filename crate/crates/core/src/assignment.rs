//! Tropical determinant, second-best permutation and tropical volume.
//!
//! The determinant `max_σ Σ_i A[i, σ(i)]` is a maximum-weight perfect
//! assignment, solved with the O(n³) shortest augmenting path form of the
//! Hungarian method on negated weights. `-∞` entries are missing arcs. The
//! second-best permutation comes from `n` re-solves, each forbidding one arc
//! of the optimum: any other permutation avoids at least one of those arcs.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{tied, Scalar};
use crate::trop::Trop;

/// A permutation `perm` (row `i` ↦ column `perm[i]`) and its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment<T> {
    pub value: T,
    pub perm: Vec<usize>,
}

/// Best and second-best permutations of a square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct AssignmentResult<T> {
    pub best: Assignment<T>,
    /// `None` when no other permutation has finite weight.
    pub second: Option<Assignment<T>>,
}

impl<T: Scalar> AssignmentResult<T> {
    pub fn best_value(&self) -> T {
        self.best.value
    }

    pub fn second_value(&self) -> Trop<T> {
        self.second.as_ref().map_or(Trop::NegInf, |s| Trop::Fin(s.value))
    }
}

/// Maximum-weight perfect assignment; `forbidden` arcs are treated as `-∞`.
/// Returns `None` when every permutation uses a `-∞` arc.
pub fn max_weight_assignment<T: Scalar>(a: &Matrix<T>, forbidden: Option<(usize, usize)>) -> Option<Assignment<T>> {
    let n = a.rows();
    debug_assert!(a.is_square());
    if n == 0 {
        return Some(Assignment { value: T::zero(), perm: Vec::new() });
    }
    let cost = |i: usize, j: usize| -> Option<T> {
        if forbidden == Some((i, j)) {
            return None;
        }
        a.get(i, j).finite().map(|w| -w)
    };

    let inf = T::infinity();
    // 1-based potentials; column 0 is the virtual source.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                if let Some(c) = cost(i0 - 1, j - 1) {
                    let cur = c - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if delta == inf {
                // Hall's condition fails for the rows reached so far.
                return None;
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]] + delta;
                    v[j] = v[j] - delta;
                } else {
                    minv[j] = minv[j] - delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut perm = vec![0usize; n];
    for j in 1..=n {
        perm[owner[j] - 1] = j - 1;
    }
    let value = perm_value(a, &perm)?;
    Some(Assignment { value, perm })
}

/// `Σ_i A[i, perm(i)]`, or `None` if it meets a `-∞` entry.
pub fn perm_value<T: Scalar>(a: &Matrix<T>, perm: &[usize]) -> Option<T> {
    perm.iter().enumerate().try_fold(T::zero(), |acc, (i, &j)| Some(acc + a.get(i, j).finite()?))
}

/// Tropical determinant of a square matrix together with the second-best
/// permutation.
pub fn trop_det<T: Scalar>(a: &Matrix<T>) -> Result<AssignmentResult<T>> {
    if !a.is_square() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", a.rows(), a.cols())));
    }
    let best = max_weight_assignment(a, None).ok_or(Error::DegenerateAssignment)?;
    let second = best
        .perm
        .iter()
        .enumerate()
        .filter_map(|(i, &j)| max_weight_assignment(a, Some((i, j))))
        .fold(None::<Assignment<T>>, |acc, cand| match acc {
            Some(cur) if cur.value >= cand.value => Some(cur),
            _ => Some(cand),
        });
    Ok(AssignmentResult { best, second })
}

/// Tropical determinant value only.
pub fn tdet<T: Scalar>(a: &Matrix<T>) -> Trop<T> {
    max_weight_assignment(a, None).map_or(Trop::NegInf, |s| Trop::Fin(s.value))
}

/// Gap between the best and second-best permutation weights of an
/// all-finite square matrix.
pub fn trop_volume<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if let Some(pos) = a.entries().iter().position(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!("volume needs finite entries; entry {pos} is -inf")));
    }
    let res = trop_det(a)?;
    let second = res.second.ok_or(Error::NoSecondPermutation(a.rows()))?;
    Ok(res.best.value - second.value)
}

/// `true` when the determinant is attained by two permutations (within the
/// tie tolerance). A matrix whose second permutation is `-∞` is nonsingular.
pub fn is_trop_singular<T: Scalar>(a: &Matrix<T>) -> Result<bool> {
    let res = trop_det(a)?;
    Ok(match res.second {
        Some(s) => tied(res.best.value, s.value),
        None => false,
    })
}
