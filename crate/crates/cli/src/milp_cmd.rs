use std::collections::HashMap;
use std::path::PathBuf;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;
use tropca::milp::lp_string;
use tropca::{build_model, Point, Polytope};

use crate::data::{load, read_text};
use crate::manifest::{to_json, RunManifest};
use crate::{write_file, CmdResult, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// CSV of points or Newick trees.
    #[arg(long)]
    input: PathBuf,
    /// LP file to write; standard output when omitted and no check is asked.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON solution to check: a map from variable names to values, or
    /// `{"vertices": [[...], ...]}`.
    #[arg(long)]
    check: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Solution {
    Vertices { vertices: Vec<Vec<f64>> },
    Values(HashMap<String, f64>),
}

#[derive(Serialize)]
struct CheckOutput {
    manifest: RunManifest,
    feasible: bool,
    objective: f64,
    hull_distance: f64,
    violations: Vec<String>,
}

pub fn run(a: Args) -> CmdResult {
    let started = Instant::now();
    let ds = load(&a.input)?;
    let points = ds.rows.iter().map(|r| Point::new(r.clone())).collect::<Result<Vec<_>, _>>()?;
    let milp = build_model(&points)?;
    match &a.out {
        Some(p) => write_file(p, lp_string(&milp.model).as_bytes())?,
        None if a.check.is_none() => print!("{}", lp_string(&milp.model)),
        None => {}
    }
    let Some(check_path) = &a.check else {
        return Ok(());
    };
    let text = read_text(check_path)?;
    let sol: Solution = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{}: {e}", check_path.display())))?;
    let assignment = match sol {
        Solution::Values(m) => m,
        Solution::Vertices { vertices } => {
            let verts = vertices.into_iter().map(Point::new).collect::<Result<Vec<_>, _>>()?;
            milp.assignment_for(&Polytope::new(verts)?)?
        }
    };
    let check = milp.check_solution(&assignment)?;
    let config = json!({ "out": a.out.as_ref().map(|p| p.display().to_string()), "big_m": milp.big_m });
    let out = CheckOutput {
        manifest: RunManifest::new("export-milp", &[&a.input, check_path], config, None, started),
        feasible: check.feasible,
        objective: check.objective,
        hull_distance: check.hull_distance,
        violations: check.violations,
    };
    print!("{}", String::from_utf8(to_json(&out)).expect("utf-8"));
    Ok(())
}
