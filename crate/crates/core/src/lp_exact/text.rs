//! Line-oriented exact text format for programs and points.
//!
//! ```text
//! lp <num-vars> <num-constraints>
//! var <name> <role> <cost> [<upper>]
//! con <=|<=|>=> <rhs> <col>:<coef> ...
//! end
//! ```
//!
//! Points are `point <count>` followed by `<name> <value>` lines.

use super::{LinearProgram, Rational, Relation};
use crate::error::{Error, Result};

const MAX_ITEMS: usize = 1 << 22;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn rational(ln: usize, tok: &str) -> Result<Rational> {
    tok.parse().map_err(|e: super::ParseRationalError| Error::parse(ln, e.to_string()))
}

fn count(ln: usize, tok: Option<&str>) -> Result<usize> {
    let n: usize =
        tok.ok_or_else(|| Error::parse(ln, "missing count"))?.parse().map_err(|_| Error::parse(ln, "bad count"))?;
    if n > MAX_ITEMS {
        return Err(Error::parse(ln, format!("count {n} exceeds {MAX_ITEMS}")));
    }
    Ok(n)
}

pub(super) fn format_lp(lp: &LinearProgram) -> String {
    let mut s = format!("lp {} {}\n", lp.num_variables(), lp.num_constraints());
    for v in lp.variables() {
        s.push_str(&format!("var {} {} {}", v.name, v.role, v.cost));
        if let Some(u) = &v.upper {
            s.push_str(&format!(" {u}"));
        }
        s.push('\n');
    }
    for c in lp.constraints() {
        s.push_str(&format!("con {} {}", c.relation.symbol(), c.rhs));
        for (j, a) in &c.coeffs {
            s.push_str(&format!(" {j}:{a}"));
        }
        s.push('\n');
    }
    s.push_str("end\n");
    s
}

pub(super) fn parse_lp(text: &str) -> Result<LinearProgram> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty program"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("lp") {
        return Err(Error::parse(ln, "expected `lp <vars> <constraints>`"));
    }
    let nv = count(ln, toks.next())?;
    let nc = count(ln, toks.next())?;
    if toks.next().is_some() {
        return Err(Error::parse(ln, "trailing tokens in header"));
    }

    let mut lp = LinearProgram::new();
    let mut last = ln;
    for _ in 0..nv {
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(last + 1, "missing `var` line"))?;
        last = ln;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.first() != Some(&"var") || !(4..=5).contains(&toks.len()) {
            return Err(Error::parse(ln, "expected `var <name> <role> <cost> [<upper>]`"));
        }
        let j = lp.add_variable(toks[1], toks[2], rational(ln, toks[3])?);
        if let Some(u) = toks.get(4) {
            lp.set_upper(j, rational(ln, u)?);
        }
    }
    for _ in 0..nc {
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(last + 1, "missing `con` line"))?;
        last = ln;
        let mut toks = line.split_whitespace();
        if toks.next() != Some("con") {
            return Err(Error::parse(ln, "expected `con <rel> <rhs> <col>:<coef> ...`"));
        }
        let relation = match toks.next() {
            Some("=") => Relation::Eq,
            Some("<=") => Relation::Le,
            Some(">=") => Relation::Ge,
            other => return Err(Error::parse(ln, format!("bad relation {other:?}"))),
        };
        let rhs = rational(ln, toks.next().ok_or_else(|| Error::parse(ln, "missing rhs"))?)?;
        let coeffs = toks
            .map(|t| {
                let (j, a) = t.split_once(':').ok_or_else(|| Error::parse(ln, format!("bad term {t:?}")))?;
                let j: usize = j.parse().map_err(|_| Error::parse(ln, format!("bad column {j:?}")))?;
                Ok((j, rational(ln, a)?))
            })
            .collect::<Result<Vec<_>>>()?;
        lp.add_constraint(coeffs, relation, rhs);
    }
    match lines.next() {
        Some((_, "end")) => {}
        Some((ln, _)) => return Err(Error::parse(ln, "expected `end`")),
        None => return Err(Error::parse(last + 1, "missing `end`")),
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "content after `end`"));
    }
    lp.validate()?;
    Ok(lp)
}

pub fn format_point(named: &[(String, Rational)]) -> String {
    let mut s = format!("point {}\n", named.len());
    for (name, v) in named {
        s.push_str(&format!("{name} {v}\n"));
    }
    s
}

pub fn parse_point(text: &str) -> Result<Vec<(String, Rational)>> {
    let mut lines = content_lines(text);
    let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty point"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("point") {
        return Err(Error::parse(ln, "expected `point <count>`"));
    }
    let n = count(ln, toks.next())?;
    let mut out = Vec::with_capacity(n.min(1 << 16));
    let mut seen = std::collections::HashSet::new();
    for _ in 0..n {
        let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln, "missing point entry"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        let [name, value] = toks[..] else {
            return Err(Error::parse(ln, "expected `<name> <value>`"));
        };
        if !seen.insert(name.to_string()) {
            return Err(Error::parse(ln, format!("duplicate entry {name:?}")));
        }
        out.push((name.to_string(), rational(ln, value)?));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content after point"));
    }
    Ok(out)
}
