use super::{Node, PhyloTree};
use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    nodes: Vec<Node>,
}

fn err<T>(offset: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Newick { offset, msg: msg.into() })
}

const SPECIAL: &[u8] = b"()[]':;,";

impl Parser<'_> {
    fn skip(&mut self) -> Result<()> {
        loop {
            match self.s.get(self.pos) {
                Some(c) if c.is_ascii_whitespace() => self.pos += 1,
                Some(b'[') => {
                    let start = self.pos;
                    match self.s[self.pos..].iter().position(|&c| c == b']') {
                        Some(end) => self.pos += end + 1,
                        None => return err(start, "unterminated comment"),
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    fn peek(&mut self) -> Result<Option<u8>> {
        self.skip()?;
        Ok(self.s.get(self.pos).copied())
    }

    fn label(&mut self) -> Result<Option<String>> {
        match self.peek()? {
            Some(b'\'') => {
                let start = self.pos;
                self.pos += 1;
                let mut out = Vec::new();
                loop {
                    match self.s.get(self.pos) {
                        None => return err(start, "unterminated quoted label"),
                        Some(b'\'') if self.s.get(self.pos + 1) == Some(&b'\'') => {
                            out.push(b'\'');
                            self.pos += 2;
                        }
                        Some(b'\'') => {
                            self.pos += 1;
                            break;
                        }
                        Some(&c) => {
                            out.push(c);
                            self.pos += 1;
                        }
                    }
                }
                String::from_utf8(out).map(Some).or_else(|_| err(start, "label is not valid UTF-8"))
            }
            Some(c) if !SPECIAL.contains(&c) => {
                let start = self.pos;
                while let Some(&c) = self.s.get(self.pos) {
                    if SPECIAL.contains(&c) || c.is_ascii_whitespace() {
                        break;
                    }
                    self.pos += 1;
                }
                Ok(Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned()))
            }
            _ => Ok(None),
        }
    }

    fn length(&mut self) -> Result<Option<f64>> {
        if self.peek()? != Some(b':') {
            return Ok(None);
        }
        self.pos += 1;
        self.skip()?;
        let start = self.pos;
        while let Some(&c) = self.s.get(self.pos) {
            if c.is_ascii_digit() || matches!(c, b'.' | b'-' | b'+' | b'e' | b'E') {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => Ok(Some(v)),
            Ok(_) => err(start, format!("branch length `{text}` must be finite and nonnegative")),
            Err(_) => err(start, "expected a branch length"),
        }
    }

    fn subtree(&mut self) -> Result<usize> {
        let start = self.pos;
        let mut children = Vec::new();
        if self.peek()? == Some(b'(') {
            self.pos += 1;
            loop {
                children.push(self.subtree()?);
                match self.peek()? {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    Some(c) => return err(self.pos, format!("expected `,` or `)`, found `{}`", c as char)),
                    None => return err(self.pos, "unexpected end of input"),
                }
            }
        }
        let label = self.label()?;
        if children.is_empty() && label.is_none() {
            return match self.peek()? {
                None => err(self.pos, "unexpected end of input"),
                _ => err(start, "leaf without a label"),
            };
        }
        if children.len() == 1 {
            return err(start, "node with a single child");
        }
        let length = self.length()?;
        let id = self.nodes.len();
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes.push(Node { label, length, children, parent: None });
        Ok(id)
    }
}

/// Parses one Newick tree terminated by `;`.
pub fn parse_newick(text: &str) -> Result<PhyloTree> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, nodes: Vec::new() };
    if p.peek()?.is_none() {
        return err(0, "empty input");
    }
    let root = p.subtree()?;
    match p.peek()? {
        Some(b';') => p.pos += 1,
        Some(c) => return err(p.pos, format!("expected `;`, found `{}`", c as char)),
        None => return err(p.pos, "missing terminating `;`"),
    }
    if p.peek()?.is_some() {
        return err(p.pos, "trailing characters after `;`");
    }
    PhyloTree::from_nodes(p.nodes, root)
}

/// Parses a file with one tree per line; blank lines are skipped.
pub fn parse_newick_lines(text: &str) -> Result<Vec<PhyloTree>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            parse_newick(l).map_err(|e| match e {
                Error::Newick { offset, msg } => Error::Newick { offset, msg: format!("line {}: {msg}", n + 1) },
                other => other,
            })
        })
        .collect()
}

fn quote(label: &str) -> String {
    if !label.is_empty() && !label.bytes().any(|c| SPECIAL.contains(&c) || c.is_ascii_whitespace()) {
        label.to_string()
    } else {
        format!("'{}'", label.replace('\'', "''"))
    }
}

pub(super) fn emit(tree: &PhyloTree, node: usize, lengths: bool, out: &mut String) {
    let n = &tree.nodes[node];
    if !n.children.is_empty() {
        out.push('(');
        for (k, &c) in n.children.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            emit(tree, c, lengths, out);
        }
        out.push(')');
    }
    if let Some(l) = &n.label {
        out.push_str(&quote(l));
    }
    if lengths {
        if let Some(len) = n.length {
            out.push(':');
            out.push_str(&format!("{len}"));
        }
    }
}
