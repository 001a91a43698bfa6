//! Random equidistant gene trees: the Kingman coalescent and the
//! multispecies coalescent inside a fixed species tree.
//!
//! Times are in coalescent units; `k` lineages merge at rate `C(k, 2)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phylo::{default_labels, parse_newick, PhyloTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimMode {
    Kingman,
    Msc,
}

#[derive(Clone, Debug)]
pub struct SimConfig {
    pub num_trees: usize,
    pub num_leaves: usize,
    /// Required in MSC mode; must be equidistant with one leaf per gene
    /// tree leaf.
    pub species_tree: Option<PhyloTree>,
    pub mode: SimMode,
    pub rng_seed: u64,
}

/// Species tree used when none is given: eight leaves with clades
/// `{g,c}`, `{h,f}` and `{a,b,d,e}`, depth 10. Other sizes get a caterpillar
/// of depth 10 with evenly spaced splits.
pub fn default_species_tree(m: usize) -> Result<PhyloTree> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 leaves, got {m}")));
    }
    if m == 8 {
        return parse_newick("(((a:2,b:2):2,(d:2,e:2):2):6,((g:3,c:3):4,(h:3,f:3):4):3);");
    }
    let labels = default_labels(m);
    let step = 10.0 / (m - 1) as f64;
    let mut s = format!("({}:{step},{}:{step})", labels[0], labels[1]);
    for (k, l) in labels.iter().enumerate().skip(2) {
        let h = step * k as f64;
        s = format!("({s}:{step},{l}:{h})");
    }
    parse_newick(&format!("{s};"))
}

/// Gene tree under construction: node heights and children.
struct Builder {
    labels: Vec<Option<String>>,
    children: Vec<Vec<usize>>,
    heights: Vec<f64>,
}

impl Builder {
    fn leaf(&mut self, label: String) -> usize {
        self.labels.push(Some(label));
        self.children.push(Vec::new());
        self.heights.push(0.0);
        self.labels.len() - 1
    }

    /// Coalesces `lineages` from time `start` until `end` (or one lineage
    /// remains) and returns the time reached.
    fn coalesce(&mut self, rng: &mut ChaCha8Rng, lineages: &mut Vec<usize>, start: f64, end: f64) {
        let mut t = start;
        while lineages.len() > 1 {
            let k = lineages.len() as f64;
            let wait = Exp::new(k * (k - 1.0) / 2.0).expect("positive rate").sample(rng);
            if t + wait >= end {
                return;
            }
            t += wait;
            let a = lineages.swap_remove(rng.gen_range(0..lineages.len()));
            let b = lineages.swap_remove(rng.gen_range(0..lineages.len()));
            self.labels.push(None);
            self.children.push(vec![a, b]);
            self.heights.push(t);
            lineages.push(self.labels.len() - 1);
        }
    }

    fn finish(self, root: usize) -> Result<PhyloTree> {
        PhyloTree::from_heights(self.labels, self.children, &self.heights, root)
    }
}

fn kingman(rng: &mut ChaCha8Rng, labels: &[String]) -> Result<PhyloTree> {
    let mut b = Builder { labels: Vec::new(), children: Vec::new(), heights: Vec::new() };
    let mut lineages: Vec<usize> = labels.iter().map(|l| b.leaf(l.clone())).collect();
    b.coalesce(rng, &mut lineages, 0.0, f64::INFINITY);
    b.finish(lineages[0])
}

/// Species tree nodes in postorder with their heights above the leaves.
struct Species {
    postorder: Vec<usize>,
    heights: Vec<f64>,
}

fn species_layout(t: &PhyloTree) -> Result<Species> {
    if !t.cophenetic().ultrametric {
        return Err(Error::InvalidArgument("species tree must be equidistant".into()));
    }
    let depth = t.depths();
    let total = t.height();
    let heights = depth.iter().map(|d| (total - d).max(0.0)).collect();
    let mut postorder = Vec::with_capacity(t.nodes().len());
    let mut stack = vec![(t.root(), false)];
    while let Some((v, expanded)) = stack.pop() {
        if expanded {
            postorder.push(v);
        } else {
            stack.push((v, true));
            for &c in t.nodes()[v].children.iter().rev() {
                stack.push((c, false));
            }
        }
    }
    Ok(Species { postorder, heights })
}

fn msc(rng: &mut ChaCha8Rng, species: &PhyloTree, layout: &Species) -> Result<PhyloTree> {
    let mut b = Builder { labels: Vec::new(), children: Vec::new(), heights: Vec::new() };
    let nodes = species.nodes();
    let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for &v in &layout.postorder {
        let mut lineages = if nodes[v].children.is_empty() {
            vec![b.leaf(nodes[v].label.clone().expect("labelled"))]
        } else {
            nodes[v].children.iter().flat_map(|&c| std::mem::take(&mut outgoing[c])).collect()
        };
        let end = nodes[v].parent.map_or(f64::INFINITY, |p| layout.heights[p]);
        b.coalesce(rng, &mut lineages, layout.heights[v], end);
        outgoing[v] = lineages;
    }
    let root = outgoing[species.root()][0];
    b.finish(root)
}

/// Generates `num_trees` gene trees. Tree `i` draws from ChaCha stream `i`
/// of the seed, so output is independent of thread scheduling.
pub fn simulate_trees(cfg: &SimConfig) -> Result<Vec<PhyloTree>> {
    if cfg.num_trees == 0 {
        return Err(Error::InvalidArgument("need at least one tree".into()));
    }
    if cfg.num_leaves < 3 {
        return Err(Error::InvalidArgument(format!("need at least 3 leaves, got {}", cfg.num_leaves)));
    }
    let rng_for = |i: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(i as u64);
        rng
    };
    match cfg.mode {
        SimMode::Kingman => {
            let labels = default_labels(cfg.num_leaves);
            (0..cfg.num_trees).into_par_iter().map(|i| kingman(&mut rng_for(i), &labels)).collect()
        }
        SimMode::Msc => {
            let species = cfg
                .species_tree
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("multispecies coalescent needs a species tree".into()))?;
            if species.num_leaves() != cfg.num_leaves {
                return Err(Error::InvalidArgument(format!(
                    "species tree has {} leaves, expected {}",
                    species.num_leaves(),
                    cfg.num_leaves
                )));
            }
            let layout = species_layout(species)?;
            (0..cfg.num_trees).into_par_iter().map(|i| msc(&mut rng_for(i), species, &layout)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(mode: SimMode, n: usize, m: usize, species: Option<PhyloTree>) -> SimConfig {
        SimConfig { num_trees: n, num_leaves: m, species_tree: species, mode, rng_seed: 7 }
    }

    #[test]
    fn trees_are_equidistant() {
        for t in simulate_trees(&cfg(SimMode::Kingman, 50, 3, None)).unwrap() {
            assert!(t.cophenetic().ultrametric);
            assert_eq!(t.num_leaves(), 3);
        }
        let sp = default_species_tree(8).unwrap();
        for t in simulate_trees(&cfg(SimMode::Msc, 50, 8, Some(sp))).unwrap() {
            assert!(t.cophenetic().ultrametric);
            assert_eq!(t.leaf_labels(), default_labels(8));
            // Lineages cannot meet before their species do.
            assert!(t.height() >= 10.0);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a: Vec<String> = simulate_trees(&cfg(SimMode::Kingman, 20, 6, None)).unwrap().iter().map(|t| t.to_newick()).collect();
        let b: Vec<String> = simulate_trees(&cfg(SimMode::Kingman, 20, 6, None)).unwrap().iter().map(|t| t.to_newick()).collect();
        assert_eq!(a, b);
        let mut other = cfg(SimMode::Kingman, 20, 6, None);
        other.rng_seed = 8;
        let c: Vec<String> = simulate_trees(&other).unwrap().iter().map(|t| t.to_newick()).collect();
        assert_ne!(a, c);
    }

    fn mean_and_se(h: &[f64]) -> (f64, f64) {
        let n = h.len() as f64;
        let mean = h.iter().sum::<f64>() / n;
        let var = h.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn kingman_root_height_matches_theory() {
        let m = 8;
        let trees = simulate_trees(&cfg(SimMode::Kingman, 4000, m, None)).unwrap();
        let heights: Vec<f64> = trees.iter().map(PhyloTree::height).collect();
        let (mean, se) = mean_and_se(&heights);
        let expected = 2.0 * (1.0 - 1.0 / m as f64);
        assert!((mean - expected).abs() < 3.0 * se, "mean {mean} vs {expected} (se {se})");
    }

    #[test]
    fn star_species_tree_of_depth_zero_is_kingman() {
        let star = parse_newick("(a:0,b:0,c:0,d:0,e:0,f:0,g:0,h:0);").unwrap();
        let trees = simulate_trees(&cfg(SimMode::Msc, 2000, 8, Some(star))).unwrap();
        let heights: Vec<f64> = trees.iter().map(PhyloTree::height).collect();
        let (mean, se) = mean_and_se(&heights);
        assert!((mean - 1.75).abs() < 3.0 * se, "mean {mean} (se {se})");
    }

    #[test]
    fn deep_caterpillar_gives_mostly_concordant_gene_trees() {
        let sp = default_species_tree(5).unwrap();
        assert!((sp.height() - 10.0).abs() < 1e-12);
        let trees = simulate_trees(&cfg(SimMode::Msc, 500, 5, Some(sp.clone()))).unwrap();
        let same = trees.iter().filter(|t| t.topology() == sp.topology()).count();
        assert!(same * 2 > trees.len(), "{same} of {}", trees.len());
    }

    #[test]
    fn bad_configs() {
        assert!(simulate_trees(&cfg(SimMode::Msc, 5, 8, None)).is_err());
        assert!(simulate_trees(&cfg(SimMode::Kingman, 5, 2, None)).is_err());
        let sp = default_species_tree(8).unwrap();
        assert!(simulate_trees(&cfg(SimMode::Msc, 5, 7, Some(sp))).is_err());
        let crooked = parse_newick("((a:1,b:2):1,c:2);").unwrap();
        assert!(simulate_trees(&cfg(SimMode::Msc, 5, 3, Some(crooked))).is_err());
    }
}
