//! Points of the tropical projective torus `R^e / R·1` and the tropical metric.

use std::ops::Index;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of `R^e / R·1`, held through one of its representatives.
///
/// Operations are invariant under adding a multiple of the all-ones vector;
/// [`Point::normalized`] gives the canonical representative with first
/// coordinate zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Point<T> {
    coords: Vec<T>,
}

impl<T: Scalar> Point<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::TooFewCoordinates(coords.len()));
        }
        if let Some(i) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Point { coords })
    }

    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&c| T::lit(c)).collect())
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<T>) -> Self {
        debug_assert!(coords.len() >= 2 && coords.iter().all(|c| c.is_finite()));
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<T> {
        self.coords
    }

    /// Canonical representative: `coords[0] == 0`.
    pub fn normalized(&self) -> Self {
        let c0 = self.coords[0];
        Point { coords: self.coords.iter().map(|&c| c - c0).collect() }
    }

    /// The representative `self + lambda·1`.
    pub fn shifted(&self, lambda: T) -> Self {
        Point { coords: self.coords.iter().map(|&c| c + lambda).collect() }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// Tropical distance `max_i (v_i - w_i) - min_j (v_j - w_j)`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.check_dim(other)?;
        Ok(distance_unchecked(&self.coords, &other.coords))
    }

    /// `true` when both represent the same torus point up to the tie tolerance.
    pub fn same_class(&self, other: &Self) -> bool {
        self.dim() == other.dim() && {
            let d = distance_unchecked(&self.coords, &other.coords);
            let scale = self.coords.iter().chain(&other.coords).fold(T::one(), |m, c| m.max(c.abs()));
            d <= T::tie_eps() * scale
        }
    }

    /// Coordinatewise max of `a ⊙ self` and `b ⊙ other`.
    pub fn tropical_combination(&self, a: T, other: &Self, b: T) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Point {
            coords: self.coords.iter().zip(&other.coords).map(|(&x, &y)| (a + x).max(b + y)).collect(),
        })
    }
}

impl<T> Index<usize> for Point<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.coords[i]
    }
}

pub(crate) fn distance_unchecked<T: Scalar>(v: &[T], w: &[T]) -> T {
    let mut hi = T::neg_infinity();
    let mut lo = T::infinity();
    for (&a, &b) in v.iter().zip(w) {
        let d = a - b;
        hi = hi.max(d);
        lo = lo.min(d);
    }
    hi - lo
}

/// Tropical distance between two points.
pub fn trop_distance<T: Scalar>(v: &Point<T>, w: &Point<T>) -> Result<T> {
    v.distance(w)
}

/// `true` if `x` and `y` are equal as torus points within the tie tolerance.
pub fn approx_same<T: Scalar>(x: &Point<T>, y: &Point<T>) -> bool {
    x.same_class(y)
}

/// Pairwise form `max_{i<j} |v_i - w_i - v_j + w_j|` of the tropical metric.
pub fn trop_distance_pairwise<T: Scalar>(v: &Point<T>, w: &Point<T>) -> Result<T> {
    v.check_dim(w)?;
    let e = v.dim();
    let mut best = T::zero();
    for i in 0..e {
        for j in i + 1..e {
            best = best.max((v[i] - w[i] - v[j] + w[j]).abs());
        }
    }
    Ok(best)
}
