use crate::assignment::trop_det;
use crate::error::{Error, Result};
use crate::linspace::Hyperplane;
use crate::matrix::Matrix;
use crate::point::Point;
use crate::scalar::Scalar;

/// Best-fit tropical hyperplane for `e` points in `R^e / R·1`.
///
/// The total distance equals the tropical volume of the points. Rows are
/// indexed so the optimal permutation is the identity; the smallest row `j`
/// where the second-best permutation moves is dropped and the remaining
/// `e − 1` rows span the hyperplane.
pub fn best_fit_hyperplane_exact<T: Scalar>(points: &Matrix<T>) -> Result<(Hyperplane<T>, T)> {
    if !points.is_square() || points.rows() < 2 {
        return Err(Error::Shape(format!("need e points in dimension e, got {}x{}", points.rows(), points.cols())));
    }
    let rows = (0..points.rows()).map(|i| points.row_point(i)).collect::<Result<Vec<Point<T>>>>()?;
    let det = trop_det(points)?;
    let second = det.second.as_ref().ok_or(Error::NoSecondPermutation(points.rows()))?;
    let j = (0..points.rows())
        .find(|&i| second.perm[i] != det.best.perm[i])
        .expect("distinct permutations differ somewhere");
    let h = Hyperplane::from_points(&points.without_row(j))?;
    let mut total = T::zero();
    for r in &rows {
        total = total + h.distance(r)?;
    }
    Ok((h, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::trop_volume;

    #[test]
    fn four_point_example() {
        let a = Matrix::<f64>::from_f64_rows(&[&[0.0, -2.0, -2.0], &[0.0, -1.0, 2.0], &[0.0, 2.0, -1.0]]).unwrap();
        let (h, d) = best_fit_hyperplane_exact(&a).unwrap();
        assert_eq!(d, 4.0);
        assert_eq!(trop_volume(&a).unwrap(), 4.0);
        // Deleting the first row leaves the line with apex (0, 2, 2).
        assert!(h.apex().same_class(&Point::from_f64(&[0.0, 2.0, 2.0]).unwrap()));
    }

    #[test]
    fn collinear_points_have_zero_distance() {
        let a = Matrix::<f64>::from_f64_rows(&[&[0.0, 0.0, 0.0], &[0.0, -1.0, 0.0], &[0.0, -2.0, 0.0]]).unwrap();
        assert_eq!(best_fit_hyperplane_exact(&a).unwrap().1, 0.0);
    }

    #[test]
    fn rejects_non_square() {
        let a = Matrix::<f64>::from_f64_rows(&[&[0.0, 1.0, 2.0], &[0.0, 2.0, 1.0]]).unwrap();
        assert!(best_fit_hyperplane_exact(&a).is_err());
    }
}
