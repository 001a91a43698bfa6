//! LP text format: `Minimize`, `Subject To`, `Bounds`, `Binary`, `End`.

use std::fmt::Write as _;
use std::io::{BufWriter, Write};

use super::{MilpModel, Sense, VarKind};
use crate::error::{Error, Result};

const WIDTH: usize = 78;

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "+inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

/// Appends `tokens` to `out`, starting continuation lines with a space
/// once a line would pass `WIDTH` characters.
fn wrapped(out: &mut String, first: &str, tokens: &[String]) {
    let mut line = first.to_string();
    for t in tokens {
        if line.len() + 1 + t.len() > WIDTH && !line.trim().is_empty() {
            out.push_str(&line);
            out.push('\n');
            line = String::from(" ");
        } else if !line.is_empty() && !line.ends_with(' ') {
            line.push(' ');
        }
        line.push_str(t);
    }
    out.push_str(&line);
    out.push('\n');
}

fn expr_tokens(m: &MilpModel, terms: &[(usize, f64)]) -> Vec<String> {
    let mut toks = Vec::new();
    for (n, &(v, c)) in terms.iter().enumerate() {
        let sign = if c < 0.0 { "-" } else { "+" };
        if n > 0 || c < 0.0 {
            toks.push(sign.to_string());
        }
        let name = &m.variables[v].name;
        if c.abs() == 1.0 {
            toks.push(name.clone());
        } else {
            toks.push(format!("{} {name}", num(c.abs())));
        }
    }
    if toks.is_empty() {
        toks.push("0".into());
    }
    toks
}

/// Renders the model as LP text.
pub fn lp_string(m: &MilpModel) -> String {
    let mut out = String::from("Minimize\n");
    wrapped(&mut out, " obj:", &expr_tokens(m, &m.objective));
    out.push_str("Subject To\n");
    for c in &m.constraints {
        let mut toks = expr_tokens(m, &c.terms);
        toks.push(c.sense.symbol().to_string());
        toks.push(num(c.rhs));
        wrapped(&mut out, &format!(" {}:", c.name), &toks);
    }
    out.push_str("Bounds\n");
    for v in m.variables.iter().filter(|v| v.kind == VarKind::Continuous) {
        match (v.lower, v.upper) {
            (l, u) if l == 0.0 && u == f64::INFINITY => {}
            (l, u) if l == f64::NEG_INFINITY && u == f64::INFINITY => {
                let _ = writeln!(out, " {} free", v.name);
            }
            (l, u) => {
                let _ = writeln!(out, " {} <= {} <= {}", num(l), v.name, num(u));
            }
        }
    }
    let bins: Vec<String> = m.variables.iter().filter(|v| v.kind == VarKind::Binary).map(|v| v.name.clone()).collect();
    if !bins.is_empty() {
        out.push_str("Binary\n");
        wrapped(&mut out, " ", &bins);
    }
    out.push_str("End\n");
    out
}

/// Writes the model as LP text.
pub fn write_lp(m: &MilpModel, w: impl Write) -> Result<()> {
    let mut w = BufWriter::new(w);
    w.write_all(lp_string(m).as_bytes())?;
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Objective,
    Constraints,
    Bounds,
    Binary,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.trim().to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" | "bound" => Some(Section::Bounds),
        "binary" | "binaries" | "bin" => Some(Section::Binary),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn parse_num(tok: &str, line: usize) -> Result<f64> {
    match tok.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" | "+infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        t => t.parse().map_err(|_| Error::LpParse { line, msg: format!("expected a number, found `{tok}`") }),
    }
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok()
}

/// Splits on whitespace and detaches comparison operators and signs.
fn tokenize(s: &str) -> Vec<String> {
    let spaced = s.replace("<=", " <= ").replace(">=", " >= ").replace("=<", " <= ").replace("=>", " >= ");
    let mut toks = Vec::new();
    for raw in spaced.split_whitespace() {
        if raw == "<=" || raw == ">=" {
            toks.push(raw.to_string());
            continue;
        }
        let mut cur = String::new();
        for ch in raw.chars() {
            if ch == '=' || ((ch == '+' || ch == '-') && !cur.ends_with(['e', 'E'])) || ch == '<' || ch == '>' {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(ch.to_string());
            } else {
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            toks.push(cur);
        }
    }
    toks
}

/// Parses `[sign] [coef] var ...` into terms.
fn parse_expr(m: &mut MilpModel, toks: &[String], line: usize) -> Result<Vec<(usize, f64)>> {
    let mut terms = Vec::new();
    let mut sign = 1.0;
    let mut coef: Option<f64> = None;
    for t in toks {
        match t.as_str() {
            "+" => {}
            "-" => sign = -sign,
            t if is_number(t) => {
                coef = Some(coef.unwrap_or(1.0) * parse_num(t, line)?);
            }
            t if t.starts_with(|c: char| c.is_ascii_digit() || c == '.') => {
                // `2x` style: numeric prefix glued to the name.
                let cut = t.find(|c: char| !(c.is_ascii_digit() || c == '.')).expect("not a number");
                let v = m.var(&t[cut..]);
                terms.push((v, sign * coef.unwrap_or(1.0) * parse_num(&t[..cut], line)?));
                sign = 1.0;
                coef = None;
            }
            name => {
                let v = m.var(name);
                terms.push((v, sign * coef.unwrap_or(1.0)));
                sign = 1.0;
                coef = None;
            }
        }
    }
    if coef.is_some_and(|c| c != 0.0) {
        return Err(Error::LpParse { line, msg: "constant terms are not supported".into() });
    }
    Ok(terms)
}

fn strip_label(s: &str) -> (Option<String>, &str) {
    match s.split_once(':') {
        Some((name, rest)) => (Some(name.trim().to_string()), rest),
        None => (None, s),
    }
}

/// Parses LP text. Variables are numbered by first appearance.
pub fn read_lp(text: &str) -> Result<MilpModel> {
    let mut m = MilpModel::new();
    let mut section = Section::None;
    // Statements may span lines; collect (start line, text) per section.
    let mut objective = String::new();
    let mut constraints: Vec<(usize, String)> = Vec::new();
    let mut bounds: Vec<(usize, String)> = Vec::new();
    let mut binaries: Vec<(usize, String)> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('\\').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        if let Some(s) = section_of(line) {
            section = s;
            continue;
        }
        match section {
            Section::None => return Err(Error::LpParse { line: line_no, msg: "content before `Minimize`".into() }),
            Section::End => return Err(Error::LpParse { line: line_no, msg: "content after `End`".into() }),
            Section::Objective => {
                objective.push(' ');
                objective.push_str(line);
            }
            Section::Constraints => {
                // A labelled line, or a line after a finished statement, starts a new one.
                let done = constraints.last().is_none_or(|(_, s)| {
                    let t = tokenize(s);
                    t.iter().any(|x| x == "<=" || x == ">=" || x == "=")
                        && t.last().is_some_and(|x| is_number(x) || x.ends_with("inf"))
                });
                if line.contains(':') || done {
                    constraints.push((line_no, line.to_string()));
                } else {
                    let last = constraints.last_mut().expect("nonempty");
                    last.1.push(' ');
                    last.1.push_str(line);
                }
            }
            Section::Bounds => bounds.push((line_no, line.to_string())),
            Section::Binary => binaries.push((line_no, line.to_string())),
        }
    }
    if section != Section::End {
        return Err(Error::LpParse { line: text.lines().count(), msg: "missing `End`".into() });
    }

    let (_, obj) = strip_label(&objective);
    m.objective = parse_expr(&mut m, &tokenize(obj), 1)?;
    for (k, (line, stmt)) in constraints.iter().enumerate() {
        let (name, body) = strip_label(stmt);
        let toks = tokenize(body);
        let at = toks
            .iter()
            .position(|t| t == "<=" || t == ">=" || t == "=" || t == "<" || t == ">")
            .ok_or_else(|| Error::LpParse { line: *line, msg: "constraint without a comparison".into() })?;
        let sense = match toks[at].as_str() {
            "<=" | "<" => Sense::Le,
            ">=" | ">" => Sense::Ge,
            _ => Sense::Eq,
        };
        let rhs_toks = &toks[at + 1..];
        let rhs = match rhs_toks {
            [v] => parse_num(v, *line)?,
            [s, v] if s == "-" => -parse_num(v, *line)?,
            [s, v] if s == "+" => parse_num(v, *line)?,
            _ => return Err(Error::LpParse { line: *line, msg: "right-hand side must be a single number".into() }),
        };
        let terms = parse_expr(&mut m, &toks[..at], *line)?;
        m.add_constraint(name.unwrap_or_else(|| format!("c{}", k + 1)), terms, sense, rhs);
    }
    for (line, stmt) in &bounds {
        let toks = tokenize(stmt);
        let toks: Vec<&str> = toks.iter().map(String::as_str).collect();
        // Rejoin signed numbers split by the tokenizer.
        let mut merged: Vec<String> = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            if (toks[i] == "-" || toks[i] == "+") && i + 1 < toks.len() && (is_number(toks[i + 1]) || toks[i + 1].eq_ignore_ascii_case("inf"))
            {
                merged.push(format!("{}{}", toks[i], toks[i + 1]));
                i += 2;
            } else {
                merged.push(toks[i].to_string());
                i += 1;
            }
        }
        let bad = || Error::LpParse { line: *line, msg: format!("unrecognised bound `{}`", stmt.trim()) };
        let mut set = |name: &str, lo: Option<f64>, hi: Option<f64>| {
            let v = m.var(name);
            if let Some(l) = lo {
                m.variables[v].lower = l;
            }
            if let Some(h) = hi {
                m.variables[v].upper = h;
            }
        };
        match merged.iter().map(String::as_str).collect::<Vec<_>>()[..] {
            [name, free] if free.eq_ignore_ascii_case("free") => set(name, Some(f64::NEG_INFINITY), Some(f64::INFINITY)),
            [lo, "<=", name, "<=", hi] => set(name, Some(parse_num(lo, *line)?), Some(parse_num(hi, *line)?)),
            [name, ">=", lo] => set(name, Some(parse_num(lo, *line)?), None),
            [lo, "<=", name] if parse_num(lo, *line).is_ok() => set(name, Some(parse_num(lo, *line)?), None),
            [name, "<=", hi] => set(name, None, Some(parse_num(hi, *line)?)),
            [name, "=", x] => {
                let x = parse_num(x, *line)?;
                set(name, Some(x), Some(x))
            }
            _ => return Err(bad()),
        }
    }
    for (_, stmt) in &binaries {
        for name in stmt.split_whitespace() {
            let v = m.var(name);
            m.variables[v].kind = VarKind::Binary;
            m.variables[v].lower = 0.0;
            m.variables[v].upper = 1.0;
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> MilpModel {
        let mut m = MilpModel::new();
        let x = m.var("x");
        let y = m.var("y");
        let b = m.var("b");
        m.variables[y].lower = f64::NEG_INFINITY;
        m.variables[b].kind = VarKind::Binary;
        m.variables[b].upper = 1.0;
        m.objective = vec![(x, 1.0), (y, -2.5)];
        m.add_constraint("c1".into(), vec![(x, 1.0), (y, 1.0)], Sense::Ge, -3.0);
        m.add_constraint("c2".into(), vec![(x, 0.1), (b, -1e-7)], Sense::Le, 4.0);
        m.add_constraint("c3".into(), vec![(y, -1.0)], Sense::Eq, 0.0);
        m
    }

    #[test]
    fn tiny_round_trip() {
        let m = tiny();
        let text = lp_string(&m);
        assert!(text.starts_with("Minimize\n obj: x - 2.5 y\nSubject To\n c1: x + y >= -3\n"));
        assert!(text.contains(" y free\n"));
        assert!(text.contains("Binary\n b\n"));
        assert_eq!(read_lp(&text).unwrap(), m);
    }

    #[test]
    fn long_rows_wrap_and_reparse() {
        let mut m = MilpModel::new();
        let vars: Vec<usize> = (0..40).map(|i| m.var(&format!("a_long_variable_name_{i}"))).collect();
        m.objective = vars.iter().map(|&v| (v, 1.0)).collect();
        m.add_constraint("wide".into(), vars.iter().map(|&v| (v, 0.5)).collect(), Sense::Le, 1.0);
        let text = lp_string(&m);
        assert!(text.lines().all(|l| l.len() <= WIDTH + 30));
        assert_eq!(read_lp(&text).unwrap(), m);
    }

    #[test]
    fn reads_hand_written_forms() {
        let text = "\\ comment\nMinimize\n obj: 2x + 3 y\nSubject To\n r1: x + y >= 1\n -x+y<=2\nBounds\n x <= 4\n -1 <= y <= 1\nEnd\n";
        let m = read_lp(text).unwrap();
        assert_eq!(m.constraints.len(), 2);
        assert_eq!(m.constraints[1].name, "c2");
        assert_eq!(m.constraints[1].terms, vec![(0, -1.0), (1, 1.0)]);
        assert_eq!(m.variables[0].upper, 4.0);
        assert_eq!(m.variables[1].lower, -1.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(read_lp("Minimize\n obj: x\nSubject To\n c: x 3\nEnd\n"), Err(Error::LpParse { line: 4, .. })));
        assert!(matches!(read_lp("Minimize\n obj: x\n"), Err(Error::LpParse { .. })));
    }
}
