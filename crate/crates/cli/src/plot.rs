use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use tropca::io::read_points_csv;

use crate::data::read_text;
use crate::{write_file, CmdResult, Failure};

#[derive(clap::Args, Debug)]
pub struct Args {
    /// CSV of points, e.g. `projections.csv` from `pca`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Polytope vertices: a CSV of rows, or a `fit.json` from `pca`, which
    /// also adds the total distance to the plot.
    #[arg(long)]
    vertices: Option<PathBuf>,
    /// `row,topology` CSV (as written by `pca`) to colour the points.
    #[arg(long)]
    topologies: Option<PathBuf>,
    /// Coordinate triple `i,j,k` (1-based) to plot when there are more than
    /// three coordinates.
    #[arg(long, value_delimiter = ',')]
    coords: Option<Vec<usize>>,
}

const PALETTE: [&str; 10] =
    ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>, Failure> {
    let text = read_text(path)?;
    Ok(read_points_csv(text.as_bytes()).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?.rows)
}

/// Vertices and, for a fit report, its total distance.
fn read_vertices(path: &Path) -> Result<(Vec<Vec<f64>>, Option<f64>), Failure> {
    if !path.extension().is_some_and(|x| x.eq_ignore_ascii_case("json")) {
        return Ok((read_rows(path)?, None));
    }
    let v: serde_json::Value = serde_json::from_str(&read_text(path)?)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let result = v.get("result").unwrap_or(&v);
    let model = result.get("model").ok_or_else(|| Failure::input(format!("{}: no model", path.display())))?;
    let points = model.get("vertices").or_else(|| model.get("generators"));
    let rows: Vec<Vec<f64>> = points
        .and_then(|p| serde_json::from_value(p.clone()).ok())
        .ok_or_else(|| Failure::input(format!("{}: model has no point rows", path.display())))?;
    Ok((rows, result.get("total_distance").and_then(|d| d.as_f64())))
}

/// Row index to topology signature.
fn read_topologies(path: &Path) -> Result<Vec<String>, Failure> {
    let text = read_text(path)?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        let sig = rec.get(1).ok_or_else(|| Failure::input(format!("{}: expected row,topology", path.display())))?;
        out.push(sig.to_string());
    }
    Ok(out)
}

pub fn run(a: Args) -> CmdResult {
    let rows = read_rows(&a.input)?;
    let e = rows[0].len();
    let idx: [usize; 3] = match &a.coords {
        Some(c) => {
            if c.len() != 3 {
                return Err(Failure::input("--coords takes exactly three indices"));
            }
            if let Some(&bad) = c.iter().find(|&&i| i == 0 || i > e) {
                return Err(Failure::input(format!("coordinate {bad} is outside 1..={e}")));
            }
            [c[0] - 1, c[1] - 1, c[2] - 1]
        }
        None if e == 3 => [0, 1, 2],
        None => {
            return Err(Failure {
                code: 4,
                msg: format!("plots need points with 3 coordinates, found {e}; choose a triple with --coords i,j,k"),
            })
        }
    };
    let (vertices, total) = match &a.vertices {
        Some(p) => read_vertices(p)?,
        None => (Vec::new(), None),
    };
    if let Some(v) = vertices.iter().find(|v| v.len() != e) {
        return Err(Failure::input(format!("vertex has {} coordinates, points have {e}", v.len())));
    }
    let topologies = match &a.topologies {
        Some(p) => {
            let t = read_topologies(p)?;
            if t.len() != rows.len() {
                return Err(Failure::input(format!("{} topologies for {} points", t.len(), rows.len())));
            }
            Some(t)
        }
        None => None,
    };
    let plane = |r: &Vec<f64>| (r[idx[1]] - r[idx[0]], r[idx[2]] - r[idx[0]]);
    let pts: Vec<(f64, f64)> = rows.iter().map(plane).collect();
    let verts: Vec<(f64, f64)> = vertices.iter().map(plane).collect();
    let svg = render(&pts, &verts, topologies.as_deref(), total, idx);
    write_file(&a.out, svg.as_bytes())
}

/// Signatures ranked by descending count, then signature.
fn ranked(topologies: &[String]) -> Vec<(String, usize)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for t in topologies {
        *counts.entry(t).or_default() += 1;
    }
    let mut v: Vec<(String, usize)> = counts.into_iter().map(|(k, n)| (k.to_string(), n)).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

fn render(pts: &[(f64, f64)], verts: &[(f64, f64)], topologies: Option<&[String]>, total: Option<f64>, idx: [usize; 3]) -> String {
    let (w, h, pad) = (640.0, 640.0, 50.0);
    let all = pts.iter().chain(verts);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let scale = (w - 2.0 * pad) / span;
    let sx = |x: f64| pad + (x - x0) * scale;
    let sy = |y: f64| h - pad - (y - y0) * scale;

    let legend = topologies.map(ranked).unwrap_or_default();
    let colour = |i: usize| -> &str {
        match topologies {
            Some(t) => {
                let rank = legend.iter().position(|(s, _)| *s == t[i]).unwrap_or(0);
                PALETTE[rank.min(PALETTE.len() - 1)]
            }
            None => PALETTE[0],
        }
    };

    let legend_h = 20.0 * legend.len() as f64;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="12">"#,
        w + 320.0,
        h.max(legend_h + 60.0)
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="gray"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    let (i, j, k) = (idx[0] + 1, idx[1] + 1, idx[2] + 1);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">x{j} - x{i}</text>"#, w / 2.0, h - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">x{k} - x{i}</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (n, &(x, y)) in pts.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="4" fill="{}" fill-opacity="0.8"/>"#,
            sx(x),
            sy(y),
            colour(n)
        );
    }
    for (n, &(x, y)) in verts.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<rect class="vertex" x="{:.3}" y="{:.3}" width="10" height="10" fill="none" stroke="black" stroke-width="2"/>"#,
            sx(x) - 5.0,
            sy(y) - 5.0
        );
        let _ = writeln!(s, r#"<text x="{:.3}" y="{:.3}">V{}</text>"#, sx(x) + 8.0, sy(y) - 8.0, n + 1);
    }
    let lx = w + 10.0;
    let mut ly = pad;
    if let Some(d) = total {
        let _ = writeln!(s, r#"<text class="distance" x="{lx}" y="{ly}">total distance = {d}</text>"#);
        ly += 24.0;
    }
    for (rank, (sig, n)) in legend.iter().enumerate() {
        let c = PALETTE[rank.min(PALETTE.len() - 1)];
        let _ = writeln!(s, r#"<circle cx="{}" cy="{}" r="5" fill="{c}"/>"#, lx + 5.0, ly - 4.0);
        let _ = writeln!(s, r#"<text class="legend" x="{}" y="{ly}">{n}  {}</text>"#, lx + 16.0, escape(sig));
        ly += 20.0;
    }
    s.push_str("</svg>\n");
    s
}
