//! Tropical Plücker vectors, tropical linear spaces and nearest-point maps.

use std::fmt::Write as _;

use crate::assignment::tdet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::point::{distance_unchecked, Point};
use crate::scalar::{tied, Scalar};
use crate::subsets::{binomial, ColexIndex, ColexSubsets};
use crate::trop::{top_two, Trop};

/// Largest supported number of Plücker coordinates, `C(e, d)`.
pub const MAX_PLUCKER_COORDS: u128 = 1_000_000;

/// A map from `d`-subsets of `[e]` to `R ∪ {-∞}`, stored in colex order.
#[derive(Clone, Debug, PartialEq)]
pub struct PluckerVector<T> {
    e: usize,
    d: usize,
    index: ColexIndex,
    values: Vec<Trop<T>>,
}

fn check_size(e: usize, d: usize) -> Result<()> {
    if d == 0 || d > e {
        return Err(Error::InvalidArgument(format!("rank {d} outside 1..={e}")));
    }
    let count = binomial(e, d);
    if count > MAX_PLUCKER_COORDS {
        return Err(Error::TooManySubsets { e, d, count, limit: MAX_PLUCKER_COORDS });
    }
    Ok(())
}

impl<T: Scalar> PluckerVector<T> {
    /// Builds from values listed in colex order of the `d`-subsets.
    pub fn from_values(e: usize, d: usize, values: Vec<Trop<T>>) -> Result<Self> {
        check_size(e, d)?;
        let index = ColexIndex::new(e, d);
        if values.len() != index.len() {
            return Err(Error::DimensionMismatch { expected: index.len(), found: values.len() });
        }
        if values.iter().all(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("Plücker vector is identically -inf".into()));
        }
        Ok(PluckerVector { e, d, index, values })
    }

    pub fn from_fn(e: usize, d: usize, mut f: impl FnMut(&[usize]) -> Trop<T>) -> Result<Self> {
        check_size(e, d)?;
        let values = ColexSubsets::new(e, d).map(|s| f(&s)).collect();
        Self::from_values(e, d, values)
    }

    pub fn ambient_dim(&self) -> usize {
        self.e
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[Trop<T>] {
        &self.values
    }

    /// Value on a strictly increasing `d`-subset.
    pub fn get(&self, sorted: &[usize]) -> Trop<T> {
        self.values[self.index.rank(sorted)]
    }

    /// Value on an arbitrary index list: order is ignored and lists with
    /// fewer than `d` distinct elements give `-∞`.
    pub fn get_set(&self, subset: &[usize]) -> Trop<T> {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.len() != self.d || s.iter().any(|&i| i >= self.e) {
            return Trop::NegInf;
        }
        self.get(&s)
    }

    fn with(&self, base: &[usize], extra: usize) -> Trop<T> {
        self.values[self.index.rank_with(base, extra)]
    }

    fn without(&self, base: &[usize], skip: usize) -> Trop<T> {
        self.values[self.index.rank_without(base, skip)]
    }

    /// Checks the tropical exchange relation for every `(d-1)`-subset σ and
    /// `(d+1)`-subset τ.
    pub fn validate(&self) -> Result<()> {
        if self.d == self.e {
            return Ok(());
        }
        for sigma in ColexSubsets::new(self.e, self.d - 1) {
            for tau in ColexSubsets::new(self.e, self.d + 1) {
                let terms = (0..tau.len()).map(|i| {
                    let left = if sigma.contains(&tau[i]) { Trop::NegInf } else { self.with(&sigma, tau[i]) };
                    left * self.without(&tau, i)
                });
                if let Some((Trop::Fin(top), _, second)) = top_two(terms) {
                    let twice = matches!(second, Trop::Fin(s) if tied(top, s));
                    if !twice {
                        return Err(Error::ExchangeRelation { sigma, tau });
                    }
                }
            }
        }
        Ok(())
    }

    /// Text form: header `e d`, then one line per subset in colex order with
    /// the 1-based sorted indices followed by the value (`-inf` allowed).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.e, self.d);
        for (s, v) in ColexSubsets::new(self.e, self.d).zip(&self.values) {
            for i in s {
                let _ = write!(out, "{} ", i + 1);
            }
            let _ = writeln!(out, "{v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::InvalidArgument(format!("Plücker text line {line}: {msg}"));
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let hdr: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(1, "header must be `e d`")))
            .collect::<Result<_>>()?;
        let [e, d] = hdr[..] else { return Err(bad(1, "header must be `e d`")) };
        check_size(e, d)?;
        let index = ColexIndex::new(e, d);
        let mut values = vec![None; index.len()];
        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != d + 1 {
                return Err(bad(ln + 1, "expected d indices and a value"));
            }
            let mut subset = Vec::with_capacity(d);
            for t in &toks[..d] {
                let i: usize = t.parse().map_err(|_| bad(ln + 1, "bad index"))?;
                if i == 0 || i > e {
                    return Err(bad(ln + 1, "index out of range"));
                }
                subset.push(i - 1);
            }
            subset.sort_unstable();
            if subset.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(ln + 1, "repeated index"));
            }
            let v = match toks[d] {
                "-inf" => Trop::NegInf,
                t => Trop::Fin(t.parse::<T>().map_err(|_| bad(ln + 1, "bad value"))?),
            };
            values[index.rank(&subset)] = Some(v);
        }
        let values: Option<Vec<_>> = values.into_iter().collect();
        let values = values.ok_or_else(|| bad(0, "some subsets have no value"))?;
        Self::from_values(e, d, values)
    }
}

/// Plücker vector of the Stiefel tropical linear space spanned by the rows
/// of a `d × e` matrix: `p(ω) = tdet(A_ω)`.
pub fn stiefel_plucker<T: Scalar>(a: &Matrix<T>) -> Result<PluckerVector<T>> {
    let (d, e) = (a.rows(), a.cols());
    if d >= e {
        return Err(Error::RankTooLarge { d, e });
    }
    check_size(e, d)?;
    PluckerVector::from_fn(e, d, |omega| small_tdet(a, omega))
}

/// `tdet` of the columns `cols` of `a`; enumerates permutations for `d ≤ 3`.
fn small_tdet<T: Scalar>(a: &Matrix<T>, cols: &[usize]) -> Trop<T> {
    let g = |i: usize, k: usize| a.get(i, cols[k]);
    match cols.len() {
        1 => g(0, 0),
        2 => g(0, 0) * g(1, 1) + g(0, 1) * g(1, 0),
        3 => {
            g(0, 0) * g(1, 1) * g(2, 2)
                + g(0, 0) * g(1, 2) * g(2, 1)
                + g(0, 1) * g(1, 0) * g(2, 2)
                + g(0, 1) * g(1, 2) * g(2, 0)
                + g(0, 2) * g(1, 0) * g(2, 1)
                + g(0, 2) * g(1, 1) * g(2, 0)
        }
        _ => tdet(&a.select_columns(cols)),
    }
}

/// The tropical linear space `L_p` of a Plücker vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSpace<T> {
    plucker: PluckerVector<T>,
}


impl<T: Scalar> LinearSpace<T> {
    pub fn new(plucker: PluckerVector<T>) -> Self {
        LinearSpace { plucker }
    }

    /// Like [`LinearSpace::new`], but first checks the exchange relation.
    pub fn validated(plucker: PluckerVector<T>) -> Result<Self> {
        plucker.validate()?;
        Ok(Self::new(plucker))
    }

    /// Stiefel tropical linear space spanned by the rows of `a`.
    pub fn stiefel(a: &Matrix<T>) -> Result<Self> {
        Ok(Self::new(stiefel_plucker(a)?))
    }

    pub fn plucker(&self) -> &PluckerVector<T> {
        &self.plucker
    }

    pub fn ambient_dim(&self) -> usize {
        self.plucker.e
    }

    fn check(&self, x: &Point<T>) -> Result<()> {
        if x.dim() != self.plucker.e {
            return Err(Error::DimensionMismatch { expected: self.plucker.e, found: x.dim() });
        }
        Ok(())
    }

    /// For every `(d+1)`-subset τ, the maximum of `p(τ - τ_i) + x_{τ_i}` must
    /// be attained at least twice.
    pub fn contains(&self, x: &Point<T>) -> Result<bool> {
        self.check(x)?;
        let p = &self.plucker;
        if p.d == p.e {
            return Ok(true);
        }
        let xs = x.coords();
        for tau in ColexSubsets::new(p.e, p.d + 1) {
            let terms = tau.iter().enumerate().map(|(i, &t)| p.without(&tau, i) * Trop::Fin(xs[t]));
            if let Some((Trop::Fin(top), _, second)) = top_two(terms) {
                if !matches!(second, Trop::Fin(s) if tied(top, s)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Nearest point of `L_p` to `u` (Blue Rule):
    /// `w_i = max_τ min_{j∉τ} (u_j + p(τ∪i) − p(τ∪j))` over `(d-1)`-subsets
    /// τ avoiding `i`, with `j = i` included in the minimum.
    ///
    /// `p(τ∪i)` does not depend on `j`, so each τ contributes
    /// `p(τ∪i) + m_τ` with `m_τ = min_{j∉τ} (u_j − p(τ∪j))` shared by all `i`.
    pub fn blue_project(&self, u: &Point<T>) -> Result<Point<T>> {
        self.check(u)?;
        let p = &self.plucker;
        let us = u.coords();
        let mut w = vec![Trop::<T>::NegInf; p.e];
        let mut in_tau = vec![false; p.e];
        for tau in ColexSubsets::new(p.e, p.d - 1) {
            tau.iter().for_each(|&t| in_tau[t] = true);
            // j with p(τ∪j) = -∞ impose no bound.
            let mut m = T::infinity();
            for j in (0..p.e).filter(|&j| !in_tau[j]) {
                if let Trop::Fin(pj) = p.with(&tau, j) {
                    m = m.min(us[j] - pj);
                }
            }
            if m.is_finite() {
                for i in (0..p.e).filter(|&i| !in_tau[i]) {
                    let cand = p.with(&tau, i) * Trop::Fin(m);
                    w[i] = w[i] + cand;
                }
            }
            tau.iter().for_each(|&t| in_tau[t] = false);
        }
        let coords = w
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.finite().ok_or(Error::MalformedLinearSpace(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Point::from_vec_unchecked(coords))
    }

    /// Difference between `u` and its Blue Rule projection (Red Rule).
    ///
    /// For each `(d+1)`-subset τ with a unique maximiser `τ_i` of
    /// `p(τ − τ_i) + u_{τ_i}`, the gap to the second maximum raises `v_{τ_i}`.
    pub fn red_residual(&self, u: &Point<T>) -> Result<Vec<T>> {
        self.check(u)?;
        let p = &self.plucker;
        let us = u.coords();
        let mut v = vec![T::zero(); p.e];
        if p.d == p.e {
            return Ok(v);
        }
        for tau in ColexSubsets::new(p.e, p.d + 1) {
            let terms = tau.iter().enumerate().map(|(i, &t)| p.without(&tau, i) * Trop::Fin(us[t]));
            match top_two(terms) {
                Some((Trop::Fin(top), at, Trop::Fin(second))) => {
                    if !tied(top, second) {
                        let k = tau[at];
                        v[k] = v[k].max(top - second);
                    }
                }
                Some((Trop::Fin(_), at, Trop::NegInf)) => return Err(Error::MalformedLinearSpace(tau[at])),
                _ => {}
            }
        }
        Ok(v)
    }

    /// `d_tr(u, blue_project(u))`.
    pub fn distance(&self, u: &Point<T>) -> Result<T> {
        let w = self.blue_project(u)?;
        Ok(distance_unchecked(u.coords(), w.coords()))
    }
}

/// Free-function form of [`LinearSpace::blue_project`].
pub fn blue_project<T: Scalar>(l: &LinearSpace<T>, u: &Point<T>) -> Result<Point<T>> {
    l.blue_project(u)
}

/// Free-function form of [`LinearSpace::red_residual`].
pub fn red_residual<T: Scalar>(l: &LinearSpace<T>, u: &Point<T>) -> Result<Vec<T>> {
    l.red_residual(u)
}

/// Free-function form of [`LinearSpace::distance`].
pub fn distance_to_linspace<T: Scalar>(l: &LinearSpace<T>, u: &Point<T>) -> Result<T> {
    l.distance(u)
}

/// A tropical hyperplane: the points `x` where `max_i (c_i + x_i)` is
/// attained at least twice.
///
/// The coefficients are the Plücker coordinates `c_i = p([e] − {i})` of the
/// hyperplane as a linear space of rank `e − 1`. Its apex (the point where
/// all terms tie) is `−c`.
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Hyperplane<T> {
    pub fn from_coefficients(coeffs: Vec<T>) -> Result<Self> {
        Ok(Hyperplane { coeffs: Point::new(coeffs)?.into_coords() })
    }

    pub fn from_apex(apex: &Point<T>) -> Self {
        Hyperplane { coeffs: apex.coords().iter().map(|&a| -a).collect() }
    }

    /// Hyperplane spanned by the `e − 1` rows of an `(e−1) × e` matrix;
    /// `c_i` is the tropical determinant of `a` with column `i` deleted.
    pub fn from_points(a: &Matrix<T>) -> Result<Self> {
        let e = a.cols();
        if e < 2 || a.rows() + 1 != e {
            return Err(Error::Shape(format!("hyperplane needs an (e-1) x e matrix, got {}x{}", a.rows(), e)));
        }
        let coeffs = (0..e)
            .map(|i| {
                let cols: Vec<usize> = (0..e).filter(|&k| k != i).collect();
                small_tdet(a, &cols).finite().ok_or(Error::DegenerateAssignment)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Hyperplane { coeffs })
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coeffs
    }

    pub fn apex(&self) -> Point<T> {
        Point::from_vec_unchecked(self.coeffs.iter().map(|&c| -c).collect())
    }

    fn gap(&self, x: &Point<T>) -> Result<T> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let terms = self.coeffs.iter().zip(x.coords()).map(|(&c, &xi)| Trop::Fin(c + xi));
        let (top, _, second) = top_two(terms).expect("nonempty");
        Ok(top.sub_finite(second).expect("finite terms"))
    }

    pub fn contains(&self, x: &Point<T>) -> Result<bool> {
        let g = self.gap(x)?;
        let scale = x.coords().iter().chain(&self.coeffs).fold(T::one(), |m, c| m.max(c.abs()));
        Ok(g <= T::tie_eps() * scale)
    }

    /// Distance from `x`: the gap between the two largest `c_i + x_i`.
    pub fn distance(&self, x: &Point<T>) -> Result<T> {
        self.gap(x)
    }

    /// The same hyperplane as a rank `e − 1` linear space.
    pub fn to_linear_space(&self) -> LinearSpace<T> {
        let e = self.dim();
        let p = PluckerVector::from_fn(e, e - 1, |s| {
            // The one index missing from the (e-1)-subset.
            let missing = (0..e).find(|i| !s.contains(i)).expect("proper subset");
            Trop::Fin(self.coeffs[missing])
        })
        .expect("hyperplane sizes are valid");
        LinearSpace::new(p)
    }
}

/// Hyperplane through the rows of an `(e−1) × e` matrix.
pub fn hyperplane_from_points<T: Scalar>(a: &Matrix<T>) -> Result<Hyperplane<T>> {
    Hyperplane::from_points(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line_example() -> LinearSpace<f64> {
        LinearSpace::stiefel(&Matrix::from_f64_rows(&[&[0.0, 2.0, 4.0], &[0.0, -1.0, -3.0]]).unwrap()).unwrap()
    }

    fn p(c: &[f64]) -> Point<f64> {
        Point::from_f64(c).unwrap()
    }

    fn random_point(rng: &mut ChaCha8Rng, e: usize) -> Point<f64> {
        Point::new((0..e).map(|_| rng.gen_range(-10.0..10.0)).collect()).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, d: usize, e: usize) -> Matrix<f64> {
        Matrix::from_rows(&(0..d).map(|_| (0..e).map(|_| rng.gen_range(-10.0..10.0)).collect()).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn stiefel_coordinates_of_line_example() {
        let l = line_example();
        let pl = l.plucker();
        assert_eq!(pl.get(&[0, 1]), Trop::Fin(2.0));
        assert_eq!(pl.get(&[0, 2]), Trop::Fin(4.0));
        assert_eq!(pl.get(&[1, 2]), Trop::Fin(3.0));
        assert_eq!(pl.get_set(&[2, 1]), Trop::Fin(3.0));
        assert_eq!(pl.get_set(&[1, 1]), Trop::NegInf);
        pl.validate().unwrap();
    }

    #[test]
    fn rank_one_stiefel_is_the_row() {
        let a = Matrix::<f64>::from_f64_rows(&[&[3.0, -1.0, 0.5, 2.0]]).unwrap();
        let pl = stiefel_plucker(&a).unwrap();
        for i in 0..4 {
            assert_eq!(pl.get(&[i]), a.get(0, i));
        }
        assert!(matches!(stiefel_plucker(&Matrix::<f64>::identity(3)), Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn stiefel_matches_generic_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 3, 6);
        let pl = stiefel_plucker(&a).unwrap();
        for s in ColexSubsets::new(6, 3) {
            assert_eq!(pl.get(&s), tdet(&a.select_columns(&s)));
        }
        pl.validate().unwrap();
    }

    #[test]
    fn blue_and_red_rules_on_line_example() {
        let l = line_example();
        let u = p(&[1.0, -2.0, 3.0]);
        assert_eq!(l.blue_project(&u).unwrap().coords(), &[1.0, -2.0, 2.0]);
        assert_eq!(l.red_residual(&u).unwrap(), vec![0.0, 0.0, 1.0]);
        assert_eq!(l.distance(&u).unwrap(), 1.0);
        assert!(!l.contains(&u).unwrap());
    }

    #[test]
    fn generators_are_members() {
        let l = line_example();
        assert!(l.contains(&p(&[0.0, 2.0, 4.0])).unwrap());
        assert!(l.contains(&p(&[0.0, -1.0, -3.0])).unwrap());
        let g = p(&[0.0, 2.0, 4.0]);
        assert!(l.blue_project(&g).unwrap().same_class(&g));
        assert_eq!(l.red_residual(&g).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn projection_properties_on_random_spaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let e = rng.gen_range(3..=6);
            let d = rng.gen_range(1..e);
            let l = LinearSpace::stiefel(&random_matrix(&mut rng, d, e)).unwrap();
            let u = random_point(&mut rng, e);
            let w = l.blue_project(&u).unwrap();
            let v = l.red_residual(&u).unwrap();
            for k in 0..e {
                assert!((u[k] - w[k] - v[k]).abs() < 1e-12, "u = w + v fails");
            }
            assert!(l.contains(&w).unwrap());
            let ww = l.blue_project(&w).unwrap();
            assert!(ww.same_class(&w));
            assert_eq!(l.contains(&u).unwrap(), l.distance(&u).unwrap() <= 1e-9 * 10.0);
        }
    }

    #[test]
    fn hyperplane_distance_is_single_gap() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let h = Hyperplane::from_coefficients((0..4).map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap();
            let l = h.to_linear_space();
            l.plucker().validate().unwrap();
            let u = random_point(&mut rng, 4);
            let gap = h.distance(&u).unwrap();
            assert!((l.distance(&u).unwrap() - gap).abs() < 1e-12);
            let v = l.red_residual(&u).unwrap();
            assert!((v.iter().cloned().fold(0.0, f64::max) - gap).abs() < 1e-12);
        }
    }

    #[test]
    fn hyperplane_through_two_points() {
        let a = Matrix::<f64>::from_f64_rows(&[&[0.0, -1.0, 2.0], &[0.0, 2.0, -1.0]]).unwrap();
        let h = hyperplane_from_points(&a).unwrap();
        assert_eq!(h.coefficients(), &[4.0, 2.0, 2.0]);
        assert!(h.apex().same_class(&p(&[0.0, 2.0, 2.0])));
        for i in 0..2 {
            assert!(h.contains(&a.row_point(i).unwrap()).unwrap());
        }
        assert_eq!(h.to_linear_space(), LinearSpace::stiefel(&a).unwrap());
    }

    #[test]
    fn hyperplane_with_duplicate_rows() {
        let a = Matrix::<f64>::from_f64_rows(&[&[0.0, 1.0, 5.0, 2.0], &[0.0, 1.0, 5.0, 2.0], &[1.0, 0.0, 0.0, 3.0]])
            .unwrap();
        let h = hyperplane_from_points(&a).unwrap();
        for i in 0..3 {
            assert!(h.contains(&a.row_point(i).unwrap()).unwrap());
        }
    }

    #[test]
    fn line_projection_matches_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..5 {
            let l = LinearSpace::stiefel(&random_matrix(&mut rng, 2, 3)).unwrap();
            let u = random_point(&mut rng, 3);
            let best = l.distance(&u).unwrap();
            // The line is the union of the rays apex - t·e_k, t ≥ 0.
            let mut grid_best = f64::INFINITY;
            let step = 1e-2;
            let apex = {
                let pl = l.plucker();
                let c = [pl.get(&[1, 2]), pl.get(&[0, 2]), pl.get(&[0, 1])].map(|v| v.finite().unwrap());
                [-c[0], -c[1], -c[2]]
            };
            for k in 0..3 {
                for s in 0..4000 {
                    let t = s as f64 * step;
                    let mut q = apex;
                    q[k] -= t;
                    let q = Point::new(q.to_vec()).unwrap();
                    grid_best = grid_best.min(u.distance(&q).unwrap());
                }
            }
            assert!(best <= grid_best + 1e-12);
            assert!(grid_best - best <= step);
        }
    }

    #[test]
    fn tropically_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let l = LinearSpace::stiefel(&random_matrix(&mut rng, 2, 5)).unwrap();
            let x = l.blue_project(&random_point(&mut rng, 5)).unwrap();
            let y = l.blue_project(&random_point(&mut rng, 5)).unwrap();
            let z = x.tropical_combination(rng.gen_range(-5.0..5.0), &y, rng.gen_range(-5.0..5.0)).unwrap();
            assert!(l.contains(&z).unwrap());
        }
    }

    #[test]
    fn stiefel_span_of_points_on_a_line_can_leave_it() {
        let origin_line = Hyperplane::<f64>::from_coefficients(vec![0.0; 3]).unwrap().to_linear_space();
        let d1 = p(&[0.0, -1.0, 0.0]);
        let d2 = p(&[0.0, -2.0, 0.0]);
        assert!(origin_line.contains(&d1).unwrap() && origin_line.contains(&d2).unwrap());
        let spanned = LinearSpace::stiefel(&Matrix::from_points(&[d1, d2]).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let escaped = (0..200).any(|_| {
            let x = spanned.blue_project(&random_point(&mut rng, 3)).unwrap();
            origin_line.distance(&x).unwrap() > 1e-9
        });
        assert!(escaped);
    }

    #[test]
    fn validator_rejects_broken_vector() {
        // For e = 4, d = 2 the relation on τ = [4] needs the max of
        // p12+p34, p13+p24, p14+p23 to be attained twice.
        let good = PluckerVector::from_values(4, 2, vec![Trop::Fin(0.0); 6]).unwrap();
        good.validate().unwrap();
        let mut vals = vec![Trop::Fin(0.0); 6];
        vals[0] = Trop::Fin(5.0);
        let bad = PluckerVector::from_values(4, 2, vals).unwrap();
        assert!(matches!(bad.validate(), Err(Error::ExchangeRelation { .. })));
    }

    #[test]
    fn malformed_space_is_reported() {
        // Coordinate 2 never appears with a finite value: a loop.
        let pl = PluckerVector::from_fn(3, 1, |s| if s[0] == 2 { Trop::NegInf } else { Trop::Fin(0.0) }).unwrap();
        let l = LinearSpace::new(pl);
        assert!(matches!(l.blue_project(&p(&[0.0, 1.0, 2.0])), Err(Error::MalformedLinearSpace(2))));
    }

    #[test]
    fn text_round_trip() {
        let pl = line_example().plucker().clone();
        let text = pl.to_text();
        assert_eq!(text, "3 2\n1 2 2\n1 3 4\n2 3 3\n");
        assert_eq!(PluckerVector::<f64>::from_text(&text).unwrap(), pl);
        let with_inf = PluckerVector::from_values(3, 2, vec![Trop::Fin(1.5), Trop::NegInf, Trop::Fin(0.0)]).unwrap();
        assert_eq!(PluckerVector::<f64>::from_text(&with_inf.to_text()).unwrap(), with_inf);
        assert!(PluckerVector::<f64>::from_text("3 2\n1 2 x\n").is_err());
    }

    #[test]
    fn size_guard() {
        assert!(matches!(PluckerVector::<f64>::from_fn(60, 6, |_| Trop::Fin(0.0)), Err(Error::TooManySubsets { .. })));
    }
}
