//! Tropical polytopes: max-plus convex hulls of finitely many points.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::point::{distance_unchecked, Point};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Polytope<T> {
    vertices: Vec<Point<T>>,
}

impl<T: Scalar> Polytope<T> {
    pub fn new(vertices: Vec<Point<T>>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::Empty)?;
        let e = first.dim();
        if let Some(v) = vertices.iter().find(|v| v.dim() != e) {
            return Err(Error::DimensionMismatch { expected: e, found: v.dim() });
        }
        Ok(Polytope { vertices })
    }

    pub fn from_matrix(m: &Matrix<T>) -> Result<Self> {
        Self::new((0..m.rows()).map(|i| m.row_point(i)).collect::<Result<_>>()?)
    }

    pub fn vertices(&self) -> &[Point<T>] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].dim()
    }

    pub fn to_matrix(&self) -> Matrix<T> {
        Matrix::from_points(&self.vertices).expect("vertices share a dimension")
    }

    /// Nearest point of the hull: `π = max_k (λ_k + V_k)` with
    /// `λ_k = min_i (x_i − V_{k,i})`.
    pub fn project(&self, x: &Point<T>) -> Result<Point<T>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        Ok(Point::from_vec_unchecked(self.project_coords(x.coords())))
    }

    pub(crate) fn project_coords(&self, x: &[T]) -> Vec<T> {
        let mut pi = vec![T::neg_infinity(); x.len()];
        for v in &self.vertices {
            let lambda = x.iter().zip(v.coords()).map(|(&a, &b)| a - b).fold(T::infinity(), T::min);
            for (p, &b) in pi.iter_mut().zip(v.coords()) {
                *p = p.max(lambda + b);
            }
        }
        pi
    }

    pub fn distance(&self, x: &Point<T>) -> Result<T> {
        let pi = self.project(x)?;
        Ok(distance_unchecked(x.coords(), pi.coords()))
    }

    pub fn contains(&self, x: &Point<T>) -> Result<bool> {
        Ok(self.project(x)?.same_class(x))
    }
}

/// Free-function form of [`Polytope::project`].
pub fn polytope_project<T: Scalar>(p: &Polytope<T>, x: &Point<T>) -> Result<Point<T>> {
    p.project(x)
}

/// Distance from `x` to the tropical convex hull of `p`.
pub fn hull_distance<T: Scalar>(p: &Polytope<T>, x: &Point<T>) -> Result<T> {
    p.distance(x)
}
