use microlp::{ComparisonOp, OptimizationDirection, Problem};

use crate::error::{Error, Result};
use crate::point::{distance_unchecked, Point};
use crate::scalar::Scalar;

/// A tropical Fermat–Weber point of `points` and the minimal distance sum.
///
/// Solved as a linear program in `x` (with `x_0 = 0`) and bounds
/// `b_i ≤ x_k − D_ik ≤ a_i`, minimising `Σ (a_i − b_i)`. The returned value
/// is the distance sum recomputed at the solution.
pub fn fermat_weber<T: Scalar>(points: &[Point<T>]) -> Result<(Point<T>, T)> {
    let first = points.first().ok_or(Error::Empty)?;
    let e = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != e) {
        return Err(Error::DimensionMismatch { expected: e, found: p.dim() });
    }
    let data: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let c0 = p[0].to_f64().expect("finite");
            p.coords().iter().map(|c| c.to_f64().expect("finite") - c0).collect()
        })
        .collect();

    let free = (f64::NEG_INFINITY, f64::INFINITY);
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let x: Vec<_> = (1..e).map(|_| lp.add_var(0.0, free)).collect();
    for d in &data {
        let a = lp.add_var(1.0, free);
        let b = lp.add_var(-1.0, free);
        lp.add_constraint([(a, 1.0)], ComparisonOp::Ge, -d[0]);
        lp.add_constraint([(b, 1.0)], ComparisonOp::Le, -d[0]);
        for k in 1..e {
            lp.add_constraint([(a, 1.0), (x[k - 1], -1.0)], ComparisonOp::Ge, -d[k]);
            lp.add_constraint([(b, 1.0), (x[k - 1], -1.0)], ComparisonOp::Le, -d[k]);
        }
    }
    let sol = lp
        .solve()
        .map_err(|err| Error::Solver(err.to_string()))?
        .into_solution()
        .map_err(|_| Error::Solver("Fermat-Weber LP did not finish".into()))?;
    let coords: Vec<T> = std::iter::once(T::zero()).chain(x.iter().map(|&v| T::lit(sol.var_value(v)))).collect();
    let value = points.iter().fold(T::zero(), |acc, p| acc + distance_unchecked(&coords, p.coords()));
    Ok((Point::from_vec_unchecked(coords), value))
}

/// Sum of tropical distances from `x` to each point.
pub fn distance_sum<T: Scalar>(x: &Point<T>, points: &[Point<T>]) -> Result<T> {
    points.iter().try_fold(T::zero(), |acc, p| Ok(acc + x.distance(p)?))
}
