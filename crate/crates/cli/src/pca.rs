use std::path::PathBuf;
use std::time::Instant;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;
use tropca::io::write_points_csv;
use tropca::phylo::positive_representative;
use tropca::{
    fit_polytope_pca, fit_stiefel_pca, topology_tally, ultrametric_to_tree, FitReport, Point, SearchConfig,
    SearchMode,
};

use crate::data::{first_non_ultrametric, load, read_exclusions};
use crate::manifest::{to_json, RunManifest};
use crate::{write_file, CmdResult, Failure, Method};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Sample,
    Enumerate,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// CSV of points (`.csv`) or Newick trees, one per line.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    /// Number of generating points.
    #[arg(long, default_value_t = 3)]
    s: usize,
    #[arg(long, value_enum, default_value_t = Mode::Sample)]
    mode: Mode,
    /// Stop after this many proposals without improvement.
    #[arg(long, default_value_t = 100)]
    window: usize,
    #[arg(long, default_value_t = 100_000)]
    max_iter: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Fit tree data even when some trees are not equidistant.
    #[arg(long)]
    allow_non_ultrametric: bool,
    /// File of zero-based row indices to leave out, one per line.
    #[arg(long)]
    exclude: Option<PathBuf>,
}

#[derive(Serialize)]
struct Output<'a> {
    manifest: RunManifest,
    /// Input rows used, in order; `generating_indices` refer to these rows
    /// of the input.
    rows_used: Vec<usize>,
    excluded: Vec<usize>,
    result: &'a FitReport,
}

pub fn run(a: Args) -> CmdResult {
    let started = Instant::now();
    let ds = load(&a.input)?;
    if !a.allow_non_ultrametric {
        if let Some(row) = first_non_ultrametric(&ds) {
            return Err(Failure {
                code: 3,
                msg: format!("row {row} of {} is not an ultrametric (use --allow-non-ultrametric)", a.input.display()),
            });
        }
    }
    let excluded = match &a.exclude {
        Some(p) => read_exclusions(p, ds.rows.len())?,
        None => Vec::new(),
    };
    let rows_used: Vec<usize> = (0..ds.rows.len()).filter(|i| excluded.binary_search(i).is_err()).collect();
    let points = rows_used.iter().map(|&i| Point::new(ds.rows[i].clone())).collect::<Result<Vec<_>, _>>()?;
    if points.is_empty() {
        return Err(Failure::input("every row is excluded"));
    }

    let cfg = SearchConfig {
        convergence_window: a.window,
        max_iterations: a.max_iter,
        rng_seed: a.seed,
        mode: match a.mode {
            Mode::Sample => SearchMode::Sample,
            Mode::Enumerate => SearchMode::Enumerate,
        },
    };
    let fit = match a.method {
        Method::Stiefel => fit_stiefel_pca(&points, a.s, &cfg)?,
        Method::Polytope => fit_polytope_pca(&points, a.s, &cfg)?,
    };
    let mut report = FitReport::new(&fit, &points, &cfg);
    report.generating_indices = report.generating_indices.iter().map(|&i| rows_used[i]).collect();

    std::fs::create_dir_all(&a.out).map_err(|e| Failure::io(format!("{}: {e}", a.out.display())))?;
    let projections: Vec<Vec<f64>> = fit.projections.iter().map(|p| p.coords().to_vec()).collect();
    let mut csv = Vec::new();
    write_points_csv(&mut csv, ds.header.as_deref(), &projections)?;
    write_file(&a.out.join("projections.csv"), &csv)?;

    if let Some(labels) = &ds.labels {
        // Projections that are not ultrametrics have no tree; they are
        // reported as `-` and left out of the projected tally.
        let projected: Vec<Option<tropca::PhyloTree>> =
            projections.iter().map(|p| ultrametric_to_tree(&positive_representative(p), labels).ok()).collect();
        let mut per_point = String::from("row,topology\n");
        for (&row, t) in rows_used.iter().zip(&projected) {
            let sig = t.as_ref().map_or_else(|| "-".to_string(), |t| t.topology().0);
            per_point.push_str(&format!("{row},\"{sig}\"\n"));
        }
        write_file(&a.out.join("projection_topologies.csv"), per_point.as_bytes())?;

        let mut table = String::from("source,count,topology\n");
        if let Some(trees) = &ds.trees {
            let used: Vec<_> = rows_used.iter().map(|&i| trees[i].clone()).collect();
            for (sig, n) in topology_tally(&used)? {
                table.push_str(&format!("input,{n},\"{}\"\n", sig.0));
            }
        }
        let trees: Vec<_> = projected.into_iter().flatten().collect();
        if !trees.is_empty() {
            for (sig, n) in topology_tally(&trees)? {
                table.push_str(&format!("projected,{n},\"{}\"\n", sig.0));
            }
        }
        write_file(&a.out.join("topologies.csv"), table.as_bytes())?;
    }

    let config = json!({
        "method": report.method,
        "s": a.s,
        "mode": cfg.mode,
        "window": a.window,
        "max_iter": a.max_iter,
        "allow_non_ultrametric": a.allow_non_ultrametric,
        "exclude": a.exclude.as_ref().map(|p| p.display().to_string()),
        "out": a.out.display().to_string(),
    });
    let mut inputs = vec![&a.input];
    inputs.extend(a.exclude.as_ref());
    let out = Output {
        manifest: RunManifest::new("pca", &inputs, config, Some(a.seed), started),
        rows_used,
        excluded,
        result: &report,
    };
    write_file(&a.out.join("fit.json"), &to_json(&out))?;
    println!(
        "{} fit: total distance {}, r = {}, generating rows {:?}",
        report.method, report.total_distance, report.proportion_r, report.generating_indices
    );
    Ok(())
}
