use std::path::PathBuf;

use clap::ValueEnum;
use tropca::io::{pair_header, write_points_csv};
use tropca::{default_species_tree, parse_newick, simulate_trees, SimConfig, SimMode};

use crate::data::read_text;
use crate::{write_file, CmdResult, Failure};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Kingman,
    Msc,
}

#[derive(clap::Args, Debug)]
pub struct Args {
    /// Number of gene trees.
    #[arg(long)]
    n: usize,
    /// Leaves per tree.
    #[arg(long, default_value_t = 8)]
    leaves: usize,
    #[arg(long, value_enum, default_value_t = Mode::Msc)]
    mode: Mode,
    /// Newick species tree for the multispecies coalescent; a built-in
    /// tree on `a, b, ...` when omitted.
    #[arg(long)]
    species_tree: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Newick output; distances go next to it with a `.csv` extension.
    #[arg(long)]
    out: PathBuf,
}

pub fn run(a: Args) -> CmdResult {
    let species_tree = match &a.species_tree {
        Some(p) => {
            let tree = parse_newick(read_text(p)?.trim()).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            if matches!(a.mode, Mode::Kingman) {
                return Err(Failure::input("--species-tree only applies to --mode msc"));
            }
            Some(tree)
        }
        None if matches!(a.mode, Mode::Msc) => Some(default_species_tree(a.leaves)?),
        None => None,
    };
    let cfg = SimConfig {
        num_trees: a.n,
        num_leaves: a.leaves,
        species_tree,
        mode: match a.mode {
            Mode::Kingman => SimMode::Kingman,
            Mode::Msc => SimMode::Msc,
        },
        rng_seed: a.seed,
    };
    let trees = simulate_trees(&cfg).map_err(|e| Failure::input(e.to_string()))?;
    let mut newick = String::new();
    let mut rows = Vec::with_capacity(trees.len());
    let mut labels = Vec::new();
    for t in &trees {
        newick.push_str(&t.to_newick());
        newick.push('\n');
        let c = t.cophenetic();
        labels = c.labels;
        rows.push(c.values);
    }
    write_file(&a.out, newick.as_bytes())?;
    let mut csv = Vec::new();
    write_points_csv(&mut csv, Some(&pair_header(&labels)?), &rows)?;
    write_file(&a.out.with_extension("csv"), &csv)
}
