use serde::{Deserialize, Serialize};

use super::{FitResult, Model, SearchConfig, SearchMode};
use crate::point::Point;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelReport {
    /// Stiefel tropical linear space spanned by the generator rows.
    LinearSpace { generators: Vec<Vec<f64>> },
    Polytope { vertices: Vec<Vec<f64>> },
}

impl ModelReport {
    /// Generator rows: polytope vertices or the spanning points.
    pub fn points(&self) -> &[Vec<f64>] {
        match self {
            ModelReport::LinearSpace { generators } => generators,
            ModelReport::Polytope { vertices } => vertices,
        }
    }
}

/// JSON-friendly summary of a [`FitResult`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub method: String,
    pub s: usize,
    pub mode: SearchMode,
    pub seed: u64,
    pub convergence_window: usize,
    pub max_iterations: usize,
    pub generating_indices: Vec<usize>,
    pub total_distance: f64,
    pub proportion_r: f64,
    pub iterations_run: usize,
    pub converged: bool,
    pub model: ModelReport,
    pub distances: Vec<f64>,
    pub trace: Vec<f64>,
}

fn f<T: Scalar>(x: T) -> f64 {
    x.to_f64().expect("scalar converts to f64")
}

fn rows<T: Scalar>(points: &[Point<T>]) -> Vec<Vec<f64>> {
    points.iter().map(|p| p.coords().iter().map(|&c| f(c)).collect()).collect()
}

impl FitReport {
    pub fn new<T: Scalar>(result: &FitResult<T>, data: &[Point<T>], cfg: &SearchConfig) -> Self {
        let (method, model) = match &result.model {
            Model::LinearSpace(_) => {
                let gens: Vec<Point<T>> = result.generating_indices.iter().map(|&i| data[i].clone()).collect();
                ("stiefel", ModelReport::LinearSpace { generators: rows(&gens) })
            }
            Model::Polytope(p) => ("polytope", ModelReport::Polytope { vertices: rows(p.vertices()) }),
        };
        FitReport {
            method: method.into(),
            s: result.generating_indices.len(),
            mode: cfg.mode,
            seed: cfg.rng_seed,
            convergence_window: cfg.convergence_window,
            max_iterations: cfg.max_iterations,
            generating_indices: result.generating_indices.clone(),
            total_distance: f(result.total_distance),
            proportion_r: f(result.proportion_r),
            iterations_run: result.iterations_run,
            converged: result.converged,
            model,
            distances: result.distances.iter().map(|&d| f(d)).collect(),
            trace: result.trace.iter().map(|&d| f(d)).collect(),
        }
    }
}
