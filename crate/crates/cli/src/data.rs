//! Input loading: CSV point tables or Newick files (one tree per line).

use std::path::Path;

use tropca::io::{pair_header, read_points_csv};
use tropca::{is_ultrametric, parse_newick_lines, PhyloTree};

use crate::Failure;

pub struct Dataset {
    pub rows: Vec<Vec<f64>>,
    /// Column names for CSV output.
    pub header: Option<Vec<String>>,
    /// Sorted leaf labels when the rows are tree distances.
    pub labels: Option<Vec<String>>,
    pub trees: Option<Vec<PhyloTree>>,
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv"))
}

/// Reads `.csv` files as point tables and anything else as Newick.
pub fn load(path: &Path) -> Result<Dataset, Failure> {
    let text = read_text(path)?;
    let name = path.display();
    if is_csv(path) {
        let table = read_points_csv(text.as_bytes()).map_err(|e| Failure::input(format!("{name}: {e}")))?;
        let labels = table.pair_labels();
        return Ok(Dataset { rows: table.rows, header: table.header, labels, trees: None });
    }
    let trees = parse_newick_lines(&text).map_err(|e| Failure::input(format!("{name}: {e}")))?;
    if trees.is_empty() {
        return Err(Failure::input(format!("{name}: no trees")));
    }
    let mut rows = Vec::with_capacity(trees.len());
    let mut labels: Option<Vec<String>> = None;
    for (i, t) in trees.iter().enumerate() {
        let c = t.cophenetic();
        match &labels {
            None => labels = Some(c.labels),
            Some(l) if *l != c.labels => {
                return Err(Failure::input(format!("{name}: tree {} has a different leaf set", i + 1)));
            }
            Some(_) => {}
        }
        rows.push(c.values);
    }
    let labels = labels.expect("at least one tree");
    if labels.len() < 3 {
        return Err(Failure::input(format!("{name}: trees need at least 3 leaves")));
    }
    let header = pair_header(&labels).ok();
    Ok(Dataset { rows, header, labels: Some(labels), trees: Some(trees) })
}

/// First row (1-based) that is not an ultrametric, for tree data only.
pub fn first_non_ultrametric(ds: &Dataset) -> Option<usize> {
    ds.labels.as_ref()?;
    ds.rows.iter().position(|r| !is_ultrametric(r).unwrap_or(false)).map(|i| i + 1)
}

/// Zero-based row indices, one per line; blank lines and `#` comments skipped.
pub fn read_exclusions(path: &Path, rows: usize) -> Result<Vec<usize>, Failure> {
    let mut out = Vec::new();
    for (n, line) in read_text(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let i: usize = line
            .parse()
            .map_err(|_| Failure::input(format!("{}:{}: `{line}` is not an index", path.display(), n + 1)))?;
        if i >= rows {
            return Err(Failure::input(format!("{}:{}: index {i} out of range (0..{rows})", path.display(), n + 1)));
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
