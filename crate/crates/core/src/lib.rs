//! Tropical principal component analysis in the tropical projective torus.
//!
//! Points live in `R^e / R·1`; the max-plus semiring supplies determinants,
//! Plücker vectors, linear spaces and polytopes. On top of those sit
//! best-fit searches, a MILP export for polytope fitting, and helpers for
//! phylogenetic trees viewed as ultrametrics.

pub mod assignment;
pub mod error;
pub mod fitting;
pub mod io;
pub mod linspace;
pub mod matrix;
pub mod milp;
pub mod phylo;
pub mod point;
pub mod polytope;
pub mod scalar;
pub mod simulate;
pub mod subsets;
pub mod trop;

pub use assignment::{is_trop_singular, tdet, trop_det, trop_volume, Assignment, AssignmentResult};
pub use error::{Error, Result};
pub use fitting::{
    best_fit_hyperplane_exact, fermat_weber, fit_polytope_pca, fit_stiefel_pca, proportion_of_variance, FitReport,
    FitResult, Model, SearchConfig, SearchMode,
};
pub use linspace::{
    blue_project, distance_to_linspace, hyperplane_from_points, red_residual, stiefel_plucker, Hyperplane,
    LinearSpace, PluckerVector,
};
pub use matrix::{is_metric, trop_matmul, Matrix};
pub use milp::{build_model, MilpModel, PolytopeMilp, SolutionCheck};
pub use phylo::{
    is_ultrametric, parse_newick, parse_newick_lines, topology_tally, ultrametric_to_tree, PhyloTree,
    TopologySignature,
};
pub use point::{approx_same, trop_distance, Point};
pub use polytope::{hull_distance, polytope_project, Polytope};
pub use scalar::{tied, Scalar};
pub use simulate::{default_species_tree, simulate_trees, SimConfig, SimMode};
pub use trop::Trop;

pub type TropScalar = Trop<f64>;
pub type TropPoint = Point<f64>;
pub type TropMatrix = Matrix<f64>;
pub type TropPluckerVector = PluckerVector<f64>;
pub type TropLinearSpace = LinearSpace<f64>;
pub type TropHyperplane = Hyperplane<f64>;
pub type TropPolytope = Polytope<f64>;

pub type TropScalar32 = Trop<f32>;
pub type TropPoint32 = Point<f32>;
pub type TropMatrix32 = Matrix<f32>;
pub type TropLinearSpace32 = LinearSpace<f32>;
pub type TropHyperplane32 = Hyperplane<f32>;
pub type TropPolytope32 = Polytope<f32>;
