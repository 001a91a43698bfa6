//! Mixed-integer program for the best-fit tropical triangle (three-vertex
//! tropical polytope), with LP-file export and a solution checker.
//!
//! Variable names (all indices 1-based): `D{p}_{k}` vertex coordinates,
//! `dprime_{i}_{k}` projections, `lam_{p}_{i}` polytope multipliers,
//! `Delta_{i}` per-point distances, `y_{p}_{i}_{k}` and `z_{p}_{i}_{k}`
//! binaries selecting the tight terms.

mod lp;

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::point::Point;
use crate::polytope::Polytope;
use crate::scalar::tied;

pub use lp::{lp_string, read_lp, write_lp};

/// Number of vertices in the exported model.
pub const VERTICES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Continuous,
    Binary,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    /// `(variable index, coefficient)` pairs.
    pub terms: Vec<(usize, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

/// A minimisation MILP over named variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MilpModel {
    pub variables: Vec<Variable>,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<Constraint>,
    index: HashMap<String, usize>,
}

impl MilpModel {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index of `name`, adding a continuous variable with bounds
    /// `[0, +inf)` if it is new.
    pub fn var(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.variables.push(Variable { name: name.to_string(), kind: VarKind::Continuous, lower: 0.0, upper: f64::INFINITY });
        self.index.insert(name.to_string(), self.variables.len() - 1);
        self.variables.len() - 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn add_constraint(&mut self, name: String, terms: Vec<(usize, f64)>, sense: Sense, rhs: f64) {
        self.constraints.push(Constraint { name, terms, sense, rhs });
    }

    pub fn count_kind(&self, kind: VarKind) -> usize {
        self.variables.iter().filter(|v| v.kind == kind).count()
    }

    /// Number of variables whose name starts with `prefix`.
    pub fn count_prefix(&self, prefix: &str) -> usize {
        self.variables.iter().filter(|v| v.name.starts_with(prefix)).count()
    }

    /// Number of constraints whose name starts with `prefix`.
    pub fn count_constraints(&self, prefix: &str) -> usize {
        self.constraints.iter().filter(|c| c.name.starts_with(prefix)).count()
    }

    /// Renumbers variables by first appearance in the objective, the
    /// constraints, then everything else; the order an LP file lists them.
    pub fn canonicalize(&mut self) {
        let mut order = Vec::with_capacity(self.variables.len());
        let mut seen = vec![false; self.variables.len()];
        let mut visit = |i: usize, order: &mut Vec<usize>| {
            if !seen[i] {
                seen[i] = true;
                order.push(i);
            }
        };
        for &(i, _) in &self.objective {
            visit(i, &mut order);
        }
        for c in &self.constraints {
            for &(i, _) in &c.terms {
                visit(i, &mut order);
            }
        }
        for i in 0..self.variables.len() {
            visit(i, &mut order);
        }
        let mut new_of = vec![0; order.len()];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        self.variables = order.iter().map(|&old| self.variables[old].clone()).collect();
        for t in &mut self.objective {
            t.0 = new_of[t.0];
        }
        for c in &mut self.constraints {
            for t in &mut c.terms {
                t.0 = new_of[t.0];
            }
        }
        self.index = self.variables.iter().enumerate().map(|(i, v)| (v.name.clone(), i)).collect();
    }

    fn lhs(&self, terms: &[(usize, f64)], values: &[f64]) -> f64 {
        terms.iter().map(|&(i, c)| c * values[i]).sum()
    }

    /// Evaluates an assignment: every constraint, bound and integrality
    /// condition is checked within the tie tolerance.
    pub fn evaluate(&self, assignment: &HashMap<String, f64>) -> Result<(f64, Vec<String>)> {
        let values = self
            .variables
            .iter()
            .map(|v| assignment.get(&v.name).copied().ok_or_else(|| Error::MissingVariable(v.name.clone())))
            .collect::<Result<Vec<f64>>>()?;
        let mut violations = Vec::new();
        for (v, &x) in self.variables.iter().zip(&values) {
            if !x.is_finite() {
                violations.push(format!("{} is not finite", v.name));
                continue;
            }
            if (x < v.lower && !tied(x, v.lower)) || (x > v.upper && !tied(x, v.upper)) {
                violations.push(format!("{} = {x} outside [{}, {}]", v.name, v.lower, v.upper));
            }
            if v.kind == VarKind::Binary && !(tied(x, 0.0) || tied(x, 1.0)) {
                violations.push(format!("{} = {x} is not binary", v.name));
            }
        }
        for c in &self.constraints {
            let lhs = self.lhs(&c.terms, &values);
            let scale = c.terms.iter().map(|&(i, k)| (k * values[i]).abs()).fold(c.rhs.abs(), f64::max);
            let slack = match c.sense {
                Sense::Le => c.rhs - lhs,
                Sense::Ge => lhs - c.rhs,
                Sense::Eq => -(lhs - c.rhs).abs(),
            };
            if slack < -1e-9 * scale.max(1.0) {
                violations.push(format!("{}: {lhs} {} {}", c.name, c.sense.symbol(), c.rhs));
            }
        }
        Ok((self.lhs(&self.objective, &values), violations))
    }
}

/// The three-vertex polytope MILP for a data set.
#[derive(Clone, Debug, PartialEq)]
pub struct PolytopeMilp {
    pub model: MilpModel,
    pub data: Vec<Vec<f64>>,
    pub big_m: f64,
}

/// Outcome of [`PolytopeMilp::check_solution`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionCheck {
    pub feasible: bool,
    pub objective: f64,
    /// Hull distance of the decoded vertices against the data.
    pub hull_distance: f64,
    pub violations: Vec<String>,
}

fn dname(p: usize, k: usize) -> String {
    format!("D{}_{}", p + 1, k + 1)
}
fn dpname(i: usize, k: usize) -> String {
    format!("dprime_{}_{}", i + 1, k + 1)
}
fn lamname(p: usize, i: usize) -> String {
    format!("lam_{}_{}", p + 1, i + 1)
}
fn deltaname(i: usize) -> String {
    format!("Delta_{}", i + 1)
}
fn yname(p: usize, i: usize, k: usize) -> String {
    format!("y_{}_{}_{}", p + 1, i + 1, k + 1)
}
fn zname(p: usize, i: usize, k: usize) -> String {
    format!("z_{}_{}_{}", p + 1, i + 1, k + 1)
}

/// Default Big-M: `4R + 1` with `R` the largest coordinate range of a data
/// point. Slacks of an assignment built from vertices with range at most
/// `3R` never exceed it.
pub fn default_big_m(data: &[Vec<f64>]) -> f64 {
    let r = data
        .iter()
        .map(|d| d.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - d.iter().cloned().fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    4.0 * r + 1.0
}

/// Builds the MILP for fitting a tropical triangle to `data`.
pub fn build_model(data: &[Point<f64>]) -> Result<PolytopeMilp> {
    if data.len() < VERTICES {
        return Err(Error::InvalidArgument(format!("need at least {VERTICES} points, got {}", data.len())));
    }
    let e = data[0].dim();
    if let Some(p) = data.iter().find(|p| p.dim() != e) {
        return Err(Error::DimensionMismatch { expected: e, found: p.dim() });
    }
    let d: Vec<Vec<f64>> = data.iter().map(|p| p.coords().to_vec()).collect();
    let big_m = default_big_m(&d);
    let n = d.len();
    let mut m = MilpModel::new();

    let delta: Vec<usize> = (0..n).map(|i| m.var(&deltaname(i))).collect();
    m.objective = delta.iter().map(|&v| (v, 1.0)).collect();
    let free = |m: &mut MilpModel, name: String| {
        let v = m.var(&name);
        m.variables[v].lower = f64::NEG_INFINITY;
        v
    };
    let dp: Vec<Vec<usize>> = (0..n).map(|i| (0..e).map(|k| free(&mut m, dpname(i, k))).collect()).collect();
    let vert: Vec<Vec<usize>> = (0..VERTICES).map(|p| (0..e).map(|k| free(&mut m, dname(p, k))).collect()).collect();
    let lam: Vec<Vec<usize>> = (0..VERTICES).map(|p| (0..n).map(|i| free(&mut m, lamname(p, i))).collect()).collect();
    let binary = |m: &mut MilpModel, name: String| {
        let v = m.var(&name);
        m.variables[v].kind = VarKind::Binary;
        m.variables[v].upper = 1.0;
        v
    };

    for i in 0..n {
        for k in 0..e {
            for l in k + 1..e {
                let c = d[i][k] - d[i][l];
                let (a, b) = (dp[i][k], dp[i][l]);
                let (ks, ls) = (k + 1, l + 1);
                m.add_constraint(format!("abs_pos_{}_{ks}_{ls}", i + 1), vec![(delta[i], 1.0), (a, 1.0), (b, -1.0)], Sense::Ge, c);
                m.add_constraint(format!("abs_neg_{}_{ks}_{ls}", i + 1), vec![(delta[i], 1.0), (a, -1.0), (b, 1.0)], Sense::Ge, -c);
            }
        }
    }
    for p in 0..VERTICES {
        for i in 0..n {
            for k in 0..e {
                let tag = format!("{}_{}_{}", p + 1, i + 1, k + 1);
                let y = binary(&mut m, yname(p, i, k));
                let (x, l, v) = (dp[i][k], lam[p][i], vert[p][k]);
                m.add_constraint(format!("dom_{tag}"), vec![(x, 1.0), (l, -1.0), (v, -1.0)], Sense::Ge, 0.0);
                m.add_constraint(format!("tight_{tag}"), vec![(x, 1.0), (l, -1.0), (v, -1.0), (y, -big_m)], Sense::Le, 0.0);
            }
        }
    }
    for i in 0..n {
        for k in 0..e {
            let ys = (0..VERTICES).map(|p| (m.index_of(&yname(p, i, k)).expect("y declared"), 1.0)).collect();
            m.add_constraint(format!("ysum_{}_{}", i + 1, k + 1), ys, Sense::Le, 2.0);
        }
    }
    for p in 0..VERTICES {
        for i in 0..n {
            for k in 0..e {
                let tag = format!("{}_{}_{}", p + 1, i + 1, k + 1);
                let z = binary(&mut m, zname(p, i, k));
                let (l, v) = (lam[p][i], vert[p][k]);
                m.add_constraint(format!("lam_{tag}"), vec![(l, 1.0), (v, 1.0)], Sense::Le, d[i][k]);
                m.add_constraint(format!("lamtight_{tag}"), vec![(l, 1.0), (v, 1.0), (z, big_m)], Sense::Ge, d[i][k]);
            }
            let zs = (0..e).map(|k| (m.index_of(&zname(p, i, k)).expect("z declared"), 1.0)).collect();
            m.add_constraint(format!("zsum_{}_{}", p + 1, i + 1), zs, Sense::Le, (e - 1) as f64);
        }
    }
    for (p, row) in vert.iter().enumerate() {
        m.add_constraint(format!("gauge_{}", p + 1), vec![(row[0], 1.0)], Sense::Eq, 0.0);
    }
    m.canonicalize();
    Ok(PolytopeMilp { model: m, data: d, big_m })
}

impl PolytopeMilp {
    pub fn points(&self) -> usize {
        self.data.len()
    }

    pub fn dim(&self) -> usize {
        self.data[0].len()
    }

    /// The vertices `D{p}` read from an assignment.
    pub fn decode_polytope(&self, assignment: &HashMap<String, f64>) -> Result<Polytope<f64>> {
        let vertices = (0..VERTICES)
            .map(|p| {
                let coords = (0..self.dim())
                    .map(|k| {
                        let name = dname(p, k);
                        assignment.get(&name).copied().ok_or(Error::MissingVariable(name))
                    })
                    .collect::<Result<Vec<f64>>>()?;
                Point::new(coords)
            })
            .collect::<Result<Vec<_>>>()?;
        Polytope::new(vertices)
    }

    /// The assignment induced by a polytope: vertices shifted so their first
    /// coordinate is 0, projections by the closed-form map, and binaries
    /// marking the maximising vertex and minimising coordinate.
    pub fn assignment_for(&self, polytope: &Polytope<f64>) -> Result<HashMap<String, f64>> {
        if polytope.len() != VERTICES || polytope.dim() != self.dim() {
            return Err(Error::Shape(format!(
                "need {VERTICES} vertices of dimension {}, got {} of dimension {}",
                self.dim(),
                polytope.len(),
                polytope.dim()
            )));
        }
        let e = self.dim();
        let verts: Vec<Vec<f64>> = polytope.vertices().iter().map(|v| v.coords().iter().map(|c| c - v[0]).collect()).collect();
        let mut a = HashMap::new();
        for (p, v) in verts.iter().enumerate() {
            for (k, &x) in v.iter().enumerate() {
                a.insert(dname(p, k), x);
            }
        }
        for (i, di) in self.data.iter().enumerate() {
            let lam: Vec<f64> =
                verts.iter().map(|v| (0..e).map(|t| di[t] - v[t]).fold(f64::INFINITY, f64::min)).collect();
            let dp: Vec<f64> =
                (0..e).map(|k| (0..VERTICES).map(|p| lam[p] + verts[p][k]).fold(f64::NEG_INFINITY, f64::max)).collect();
            let resid: Vec<f64> = (0..e).map(|k| di[k] - dp[k]).collect();
            let hi = resid.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = resid.iter().cloned().fold(f64::INFINITY, f64::min);
            a.insert(deltaname(i), hi - lo);
            for (k, &x) in dp.iter().enumerate() {
                a.insert(dpname(i, k), x);
            }
            for p in 0..VERTICES {
                a.insert(lamname(p, i), lam[p]);
                for k in 0..e {
                    let tight = dp[k] - (lam[p] + verts[p][k]);
                    a.insert(yname(p, i, k), if tight > 0.0 { 1.0 } else { 0.0 });
                    let slack = (di[k] - verts[p][k]) - lam[p];
                    a.insert(zname(p, i, k), if slack > 0.0 { 1.0 } else { 0.0 });
                }
            }
        }
        Ok(a)
    }

    pub fn check_solution(&self, assignment: &HashMap<String, f64>) -> Result<SolutionCheck> {
        let (objective, violations) = self.model.evaluate(assignment)?;
        let polytope = self.decode_polytope(assignment)?;
        let mut hull_distance = 0.0;
        for d in &self.data {
            hull_distance += polytope.distance(&Point::new(d.clone())?)?;
        }
        Ok(SolutionCheck { feasible: violations.is_empty(), objective, hull_distance, violations })
    }
}
