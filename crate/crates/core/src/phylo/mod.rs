//! Rooted phylogenetic trees, Newick text, and their embedding as points
//! of `R^{C(m,2)} / R·1` through cophenetic distances.

mod newick;
mod ultrametric;

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};

pub use newick::{parse_newick, parse_newick_lines};
pub use ultrametric::{
    is_ultrametric, is_ultrametric_triangle, leaves_for_pairs, pair_index, positive_representative,
    ultrametric_to_tree,
};

#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub label: Option<String>,
    /// `None` when the Newick text gave no length; read as 0.
    pub length: Option<f64>,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
}

/// A rooted tree stored as an arena of nodes.
#[derive(Clone, Debug, PartialEq)]
pub struct PhyloTree {
    nodes: Vec<Node>,
    root: usize,
}

/// Leaf-to-leaf path lengths over the sorted leaf labels, pairs `(i, j)`
/// with `i < j` in lexicographic order.
#[derive(Clone, Debug, PartialEq)]
pub struct Cophenetic {
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub ultrametric: bool,
}

/// Canonical Newick without branch lengths, children ordered by their
/// smallest leaf label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TopologySignature(pub String);

impl std::fmt::Display for TopologySignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl PhyloTree {
    /// Checks the arena: leaves labelled uniquely, no single-child nodes,
    /// at least two leaves.
    pub fn from_nodes(nodes: Vec<Node>, root: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::Newick { offset: 0, msg });
        let mut seen = HashSet::new();
        for n in &nodes {
            if n.children.len() == 1 {
                return bad("node with a single child".into());
            }
            if n.children.is_empty() {
                match &n.label {
                    None => return bad("leaf without a label".into()),
                    Some(l) if !seen.insert(l.clone()) => return bad(format!("duplicate leaf label `{l}`")),
                    _ => {}
                }
            }
            if n.length.is_some_and(|l| !(l.is_finite() && l >= 0.0)) {
                return bad("branch lengths must be finite and nonnegative".into());
            }
        }
        if seen.len() < 2 {
            return bad("a tree needs at least two leaves".into());
        }
        Ok(PhyloTree { nodes, root })
    }

    /// Builds a tree from merge heights: `heights[v]` for every node, with
    /// branch lengths `height(parent) − height(child)`.
    pub fn from_heights(labels: Vec<Option<String>>, children: Vec<Vec<usize>>, heights: &[f64], root: usize) -> Result<Self> {
        let mut nodes: Vec<Node> =
            labels.into_iter().zip(children).map(|(label, children)| Node { label, length: None, children, parent: None }).collect();
        for v in 0..nodes.len() {
            for c in nodes[v].children.clone() {
                nodes[c].parent = Some(v);
                nodes[c].length = Some((heights[v] - heights[c]).max(0.0));
            }
        }
        Self::from_nodes(nodes, root)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn leaves(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nodes.len()).filter(|&v| self.nodes[v].children.is_empty())
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves().count()
    }

    /// Leaf labels in sorted order.
    pub fn leaf_labels(&self) -> Vec<String> {
        let mut l: Vec<String> = self.leaves().map(|v| self.nodes[v].label.clone().expect("leaves are labelled")).collect();
        l.sort();
        l
    }

    pub fn has_missing_lengths(&self) -> bool {
        self.nodes.iter().enumerate().any(|(v, n)| v != self.root && n.length.is_none())
    }

    /// Distance from the root to every node.
    pub fn depths(&self) -> Vec<f64> {
        let mut depth = vec![0.0; self.nodes.len()];
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            for &c in &self.nodes[v].children {
                depth[c] = depth[v] + self.nodes[c].length.unwrap_or(0.0);
                stack.push(c);
            }
        }
        depth
    }

    /// Largest root-to-leaf distance.
    pub fn height(&self) -> f64 {
        let d = self.depths();
        self.leaves().map(|v| d[v]).fold(0.0, f64::max)
    }

    pub fn to_newick(&self) -> String {
        let mut s = String::new();
        newick::emit(self, self.root, true, &mut s);
        s.push(';');
        s
    }

    fn ancestors(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![v];
        while let Some(p) = self.nodes[v].parent {
            out.push(p);
            v = p;
        }
        out
    }

    /// Cophenetic vector over sorted leaf labels.
    pub fn cophenetic(&self) -> Cophenetic {
        let labels = self.leaf_labels();
        let by_label: BTreeMap<&str, usize> =
            self.leaves().map(|v| (self.nodes[v].label.as_deref().expect("labelled"), v)).collect();
        let leaf: Vec<usize> = labels.iter().map(|l| by_label[l.as_str()]).collect();
        let depth = self.depths();
        let paths: Vec<Vec<usize>> = leaf.iter().map(|&v| self.ancestors(v)).collect();
        let m = labels.len();
        let mut values = Vec::with_capacity(m * (m - 1) / 2);
        for i in 0..m {
            let on_path: HashSet<usize> = paths[i].iter().copied().collect();
            for j in i + 1..m {
                let lca = *paths[j].iter().find(|v| on_path.contains(v)).expect("common root");
                values.push(depth[leaf[i]] + depth[leaf[j]] - 2.0 * depth[lca]);
            }
        }
        let ultrametric = is_ultrametric(&values).expect("triangular by construction");
        Cophenetic { labels, values, ultrametric }
    }

    fn signature_of(&self, v: usize) -> (String, String) {
        let n = &self.nodes[v];
        if n.children.is_empty() {
            let l = n.label.clone().expect("labelled");
            return (l.clone(), newick_label(&l));
        }
        let mut parts: Vec<(String, String)> = n.children.iter().map(|&c| self.signature_of(c)).collect();
        parts.sort();
        let min = parts[0].0.clone();
        let body: Vec<String> = parts.into_iter().map(|p| p.1).collect();
        (min, format!("({})", body.join(",")))
    }

    pub fn topology(&self) -> TopologySignature {
        TopologySignature(format!("{};", self.signature_of(self.root).1))
    }

    /// Whether some internal node has exactly the given leaves below it.
    pub fn has_clade(&self, labels: &[&str]) -> bool {
        let want: HashSet<&str> = labels.iter().copied().collect();
        (0..self.nodes.len()).any(|v| {
            let mut below = HashSet::new();
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                let n = &self.nodes[u];
                if n.children.is_empty() {
                    below.insert(n.label.as_deref().expect("labelled"));
                }
                stack.extend(&n.children);
            }
            below == want
        })
    }
}

fn newick_label(l: &str) -> String {
    let t = PhyloTree {
        nodes: vec![Node { label: Some(l.to_string()), length: None, children: vec![], parent: None }],
        root: 0,
    };
    let mut s = String::new();
    newick::emit(&t, 0, false, &mut s);
    s
}

/// Counts trees by topology, most frequent first (ties by signature).
pub fn topology_tally(trees: &[PhyloTree]) -> Result<Vec<(TopologySignature, usize)>> {
    let mut counts: BTreeMap<TopologySignature, usize> = BTreeMap::new();
    let mut leaf_set: Option<Vec<String>> = None;
    for t in trees {
        let labels = t.leaf_labels();
        match &leaf_set {
            None => leaf_set = Some(labels),
            Some(l) if *l != labels => {
                return Err(Error::MixedLeafSets(format!("{} vs {}", l.join(","), labels.join(","))));
            }
            _ => {}
        }
        *counts.entry(t.topology()).or_default() += 1;
    }
    let mut out: Vec<_> = counts.into_iter().collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(out)
}

/// Leaf labels for simulated and reconstructed trees: `a`..`z` for up to
/// 26 leaves, `t1`.. otherwise.
pub fn default_labels(m: usize) -> Vec<String> {
    if m <= 26 {
        (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=m).map(|i| format!("t{i}")).collect()
    }
}
