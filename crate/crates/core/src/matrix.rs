//! Rectangular matrices over the tropical semiring.

use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::{tied, Scalar};
use crate::trop::Trop;

/// A row-major matrix with entries in `R ∪ {-∞}`. Rows are read as points.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Trop<T>>,
}

impl<T: Scalar> Matrix<T> {
    pub fn from_trop_rows(rows: Vec<Vec<Trop<T>>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::Shape(format!("ragged rows: {} vs {}", bad.len(), cols)));
        }
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix with all-finite entries.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        Self::from_trop_rows(rows.iter().map(|r| r.iter().map(|&x| Trop::Fin(x)).collect()).collect())
    }

    pub fn from_f64_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(&rows.iter().map(|r| r.iter().map(|&x| T::lit(x)).collect()).collect::<Vec<_>>())
    }

    pub fn from_points(points: &[Point<T>]) -> Result<Self> {
        let rows: Vec<Vec<T>> = points.iter().map(|p| p.coords().to_vec()).collect();
        Self::from_rows(&rows)
    }

    /// Tropical identity: `0` on the diagonal, `-∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix { rows: n, cols: n, data: vec![Trop::NegInf; n * n] };
        for i in 0..n {
            m.data[i * n + i] = Trop::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Trop<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Trop<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Trop<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Row `i` as a torus point, if all its entries are finite.
    pub fn row_point(&self, i: usize) -> Result<Point<T>> {
        let coords: Option<Vec<T>> = self.row(i).iter().map(|x| x.finite()).collect();
        let coords = coords.ok_or_else(|| Error::InvalidArgument(format!("row {i} has a -inf entry")))?;
        Point::new(coords)
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Submatrix keeping the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            data.extend(cols.iter().map(|&j| self.get(i, j)));
        }
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    /// Copy with row `r` removed.
    pub fn without_row(&self, r: usize) -> Self {
        let data = (0..self.rows).filter(|&i| i != r).flat_map(|i| self.row(i).iter().copied()).collect();
        Matrix { rows: self.rows - 1, cols: self.cols, data }
    }

    /// Copy with the rows reordered as `order`.
    pub fn select_rows(&self, order: &[usize]) -> Self {
        let data = order.iter().flat_map(|&i| self.row(i).iter().copied()).collect();
        Matrix { rows: order.len(), cols: self.cols, data }
    }

    pub fn map(&self, f: impl Fn(Trop<T>) -> Trop<T>) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    pub fn entries(&self) -> &[Trop<T>] {
        &self.data
    }
}

/// Tropical product `(A ⊗ C)_{ij} = max_l (A_il + C_lj)`.
pub fn trop_matmul<T: Scalar>(a: &Matrix<T>, c: &Matrix<T>) -> Result<Matrix<T>> {
    if a.cols != c.rows {
        return Err(Error::Shape(format!("{}x{} times {}x{}", a.rows, a.cols, c.rows, c.cols)));
    }
    let mut out = Matrix { rows: a.rows, cols: c.cols, data: vec![Trop::NegInf; a.rows * c.cols] };
    for i in 0..a.rows {
        for j in 0..c.cols {
            let v = (0..a.cols).fold(Trop::NegInf, |acc, l| acc + a.get(i, l) * c.get(l, j));
            out.set(i, j, v);
        }
    }
    Ok(out)
}

/// Tests whether a dissimilarity matrix is a metric via `-D ⊙ -D = -D`.
///
/// `d` must be square and symmetric with a zero diagonal and finite,
/// nonnegative off-diagonal entries.
pub fn is_metric<T: Scalar>(d: &Matrix<T>) -> Result<bool> {
    if !d.is_square() {
        return Err(Error::NotDissimilarity(format!("{}x{} is not square", d.rows, d.cols)));
    }
    let m = d.rows;
    for i in 0..m {
        match d.get(i, i) {
            Trop::Fin(x) if x == T::zero() => {}
            _ => return Err(Error::NotDissimilarity(format!("diagonal entry {i} is not zero"))),
        }
        for j in 0..m {
            let (a, b) = match (d.get(i, j), d.get(j, i)) {
                (Trop::Fin(a), Trop::Fin(b)) => (a, b),
                _ => return Err(Error::NotDissimilarity(format!("entry ({i},{j}) is -inf"))),
            };
            if a != b {
                return Err(Error::NotDissimilarity(format!("entries ({i},{j}) and ({j},{i}) differ")));
            }
            if a < T::zero() {
                return Err(Error::NotDissimilarity(format!("entry ({i},{j}) is negative")));
            }
        }
    }
    let neg = d.map(|x| match x {
        Trop::Fin(v) => Trop::Fin(-v),
        Trop::NegInf => Trop::NegInf,
    });
    let sq = trop_matmul(&neg, &neg)?;
    Ok(sq.entries().iter().zip(neg.entries()).all(|(a, b)| match (a, b) {
        (Trop::Fin(a), Trop::Fin(b)) => tied(*a, *b),
        _ => false,
    }))
}
