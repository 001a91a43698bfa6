//! Best-fit tropical hyperplanes, Fermat–Weber points, and tropical PCA by
//! search over data-point tuples.

mod exact;
mod fermat_weber;
mod report;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linspace::LinearSpace;
use crate::matrix::Matrix;
use crate::point::{distance_unchecked, Point};
use crate::polytope::Polytope;
use crate::scalar::Scalar;
use crate::subsets::{binomial, colex_unrank};

pub use exact::best_fit_hyperplane_exact;
pub use fermat_weber::{distance_sum, fermat_weber};
pub use report::{FitReport, ModelReport};

/// Enumerate mode refuses searches larger than this many tuples.
pub const MAX_ENUMERATED_TUPLES: u128 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Sample,
    Enumerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Consecutive non-improving proposals before the sampler stops.
    pub convergence_window: usize,
    pub max_iterations: usize,
    pub rng_seed: u64,
    pub mode: SearchMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { convergence_window: 100, max_iterations: 100_000, rng_seed: 0, mode: SearchMode::Sample }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Model<T> {
    LinearSpace(LinearSpace<T>),
    Polytope(Polytope<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult<T> {
    pub model: Model<T>,
    pub generating_indices: Vec<usize>,
    pub total_distance: T,
    pub proportion_r: T,
    pub projections: Vec<Point<T>>,
    pub distances: Vec<T>,
    pub iterations_run: usize,
    pub converged: bool,
    /// Incumbent total distance after the initial tuple and each proposal
    /// (sample mode only).
    pub trace: Vec<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Flavor {
    Stiefel,
    Polytope,
}

fn build_model<T: Scalar>(flavor: Flavor, gens: Vec<Point<T>>) -> Result<Model<T>> {
    Ok(match flavor {
        Flavor::Stiefel => Model::LinearSpace(LinearSpace::stiefel(&Matrix::from_points(&gens)?)?),
        Flavor::Polytope => Model::Polytope(Polytope::new(gens)?),
    })
}

fn project<T: Scalar>(model: &Model<T>, x: &Point<T>) -> Result<Point<T>> {
    match model {
        Model::LinearSpace(l) => l.blue_project(x),
        Model::Polytope(p) => p.project(x),
    }
}

/// Projections and per-point distances; sums are always taken in index
/// order so parallel and sequential evaluation agree bit for bit.
fn project_all<T: Scalar>(model: &Model<T>, data: &[Point<T>], parallel: bool) -> Result<(Vec<Point<T>>, Vec<T>)> {
    let one = |x: &Point<T>| {
        let pi = project(model, x)?;
        let d = distance_unchecked(x.coords(), pi.coords());
        Ok((pi, d))
    };
    let pairs: Vec<(Point<T>, T)> =
        if parallel { data.par_iter().map(one).collect::<Result<_>>()? } else { data.iter().map(one).collect::<Result<_>>()? };
    Ok(pairs.into_iter().unzip())
}

fn total_for<T: Scalar>(flavor: Flavor, data: &[Point<T>], idx: &[usize], parallel: bool) -> Result<T> {
    let model = build_model(flavor, idx.iter().map(|&i| data[i].clone()).collect())?;
    let (_, d) = project_all(&model, data, parallel)?;
    Ok(d.into_iter().fold(T::zero(), |a, b| a + b))
}

struct SearchOutcome<T> {
    best: Vec<usize>,
    iterations: usize,
    converged: bool,
    trace: Vec<T>,
}

fn check_inputs<T: Scalar>(data: &[Point<T>], s: usize, cfg: &SearchConfig) -> Result<()> {
    let first = data.first().ok_or(Error::Empty)?;
    if let Some(p) = data.iter().find(|p| p.dim() != first.dim()) {
        return Err(Error::DimensionMismatch { expected: first.dim(), found: p.dim() });
    }
    if s < 2 {
        return Err(Error::InvalidArgument(format!("need s >= 2, got {s}")));
    }
    if s > data.len() {
        return Err(Error::InvalidArgument(format!("s = {s} exceeds the {} data points", data.len())));
    }
    if cfg.convergence_window == 0 {
        return Err(Error::InvalidArgument("convergence window must be at least 1".into()));
    }
    Ok(())
}

fn search<T: Scalar>(flavor: Flavor, data: &[Point<T>], s: usize, cfg: &SearchConfig) -> Result<SearchOutcome<T>> {
    let n = data.len();
    match cfg.mode {
        SearchMode::Sample => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
            let mut best: Vec<usize> = (0..s).collect();
            let mut best_d = total_for(flavor, data, &best, true)?;
            let mut trace = vec![best_d];
            let (mut iterations, mut stale, mut converged) = (0, 0, false);
            while iterations < cfg.max_iterations {
                iterations += 1;
                let mut cand = sample(&mut rng, n, s).into_vec();
                cand.sort_unstable();
                let d = total_for(flavor, data, &cand, true)?;
                if d < best_d {
                    best = cand;
                    best_d = d;
                    stale = 0;
                } else {
                    stale += 1;
                }
                trace.push(best_d);
                if stale >= cfg.convergence_window {
                    converged = true;
                    break;
                }
            }
            Ok(SearchOutcome { best, iterations, converged, trace })
        }
        SearchMode::Enumerate => {
            let count = binomial(n, s);
            if count > MAX_ENUMERATED_TUPLES {
                return Err(Error::TooManySubsets { e: n, d: s, count, limit: MAX_ENUMERATED_TUPLES });
            }
            let (rank, _) = (0..count as u64)
                .into_par_iter()
                .map(|r| total_for(flavor, data, &colex_unrank(r as u128, s), false).map(|d| (r, d)))
                .try_reduce_with(|a, b| Ok(if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) { b } else { a }))
                .expect("at least one tuple")?;
            Ok(SearchOutcome {
                best: colex_unrank(rank as u128, s),
                iterations: count as usize,
                converged: true,
                trace: Vec::new(),
            })
        }
    }
}

fn fit<T: Scalar>(flavor: Flavor, data: &[Point<T>], s: usize, cfg: &SearchConfig) -> Result<FitResult<T>> {
    check_inputs(data, s, cfg)?;
    let out = search(flavor, data, s, cfg)?;
    let model = build_model(flavor, out.best.iter().map(|&i| data[i].clone()).collect())?;
    let (projections, distances) = project_all(&model, data, true)?;
    let total_distance = distances.iter().fold(T::zero(), |a, &b| a + b);
    let proportion_r = proportion_of_variance(data, &projections)?;
    Ok(FitResult {
        model,
        generating_indices: out.best,
        total_distance,
        proportion_r,
        projections,
        distances,
        iterations_run: out.iterations,
        converged: out.converged,
        trace: out.trace,
    })
}

/// Tropical PCA with a Stiefel tropical linear space spanned by `s` data
/// points.
pub fn fit_stiefel_pca<T: Scalar>(data: &[Point<T>], s: usize, cfg: &SearchConfig) -> Result<FitResult<T>> {
    fit(Flavor::Stiefel, data, s, cfg)
}

/// Tropical PCA with the tropical polytope of `s` data points.
pub fn fit_polytope_pca<T: Scalar>(data: &[Point<T>], s: usize, cfg: &SearchConfig) -> Result<FitResult<T>> {
    fit(Flavor::Polytope, data, s, cfg)
}

/// Total distance from `data` to the Stiefel space of the rows `indices`.
pub fn stiefel_total_distance<T: Scalar>(data: &[Point<T>], indices: &[usize]) -> Result<T> {
    total_for(Flavor::Stiefel, data, indices, true)
}

/// Total distance from `data` to the tropical polytope of the rows `indices`.
pub fn polytope_total_distance<T: Scalar>(data: &[Point<T>], indices: &[usize]) -> Result<T> {
    total_for(Flavor::Polytope, data, indices, true)
}

/// `r = Σ d(π̄, π_i) / (Σ d(D_i, π_i) + Σ d(π̄, π_i))` where `π̄` is a
/// Fermat–Weber point of the projections. Returns 0 when both sums vanish.
pub fn proportion_of_variance<T: Scalar>(data: &[Point<T>], projections: &[Point<T>]) -> Result<T> {
    if data.is_empty() {
        return Err(Error::Empty);
    }
    if data.len() != projections.len() {
        return Err(Error::DimensionMismatch { expected: data.len(), found: projections.len() });
    }
    let (center, _) = fermat_weber(projections)?;
    let mut spread = T::zero();
    let mut residual = T::zero();
    for (d, p) in data.iter().zip(projections) {
        spread = spread + center.distance(p)?;
        residual = residual + d.distance(p)?;
    }
    let denom = spread + residual;
    Ok(if denom > T::zero() { spread / denom } else { T::zero() })
}
