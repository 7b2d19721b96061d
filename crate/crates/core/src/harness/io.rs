//! Text formats for graphs, FDGs, FORGs, labellings and flat config files.
//!
//! AG format:
//! ```text
//! n
//! a_1 a_2 ... a_n
//! b_11 b_12 ... b_1n
//! ...
//! b_n1 b_n2 ... b_nn
//! order i t_1 t_2 ...      (optional, one line per vertex; a bare
//!                          `order` marks an order on the empty graph)
//! ```
//! A tuple is a comma-separated list of components (`c<k>` for a
//! categorical code, a decimal number for a real). `#` is the null tuple;
//! off the diagonal it marks an absent arc.
//!
//! FDG format (blank lines and lines starting with `#` are skipped):
//! ```text
//! fdg n
//! z Z
//! binning VERTEX_WIDTH ARC_WIDTH
//! vertex i PDF                   (n lines)
//! arc i j u PDF                  (n(n-1) lines)
//! vrel A|O|E  followed by n rows of 0/1
//! arel A|O|E  followed by n(n-1) rows of 0/1, in arc-slot order
//! order i t_1 t_2 ...            (optional)
//! end
//! ```
//! `PDF` is `null=P support=S comps=K C_1 ... C_K`, each `C` being `-` or
//! `bin:p;bin:p...` with bins written `c<k>` or `r<k>`. Arc slots are
//! ordered by source, then target. A FORG file starts with `forg n` and has
//! no relation or order sections.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::attr::{AttrTuple, AttrValue, Bin};
use crate::error::{Error, Result};
use crate::fdg::{BoolMatrix, Fdg, RelationKind, Relations};
use crate::forg::Forg;
use crate::graph::AttributedGraph;
use crate::labelling::CommonLabelling;
use crate::pdf::Pdf;
use crate::synthesis::Binnings;

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Whitespace-separated tokens with 1-based columns.
fn tokens(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(b)) => {
                out.push((b, &s[b..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(b) = start {
        out.push((b, &s[b..]));
    }
    out.into_iter().map(|(b, t)| (s[..b].chars().count() + 1, t)).collect()
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, col: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| perr(line, col, format!("expected {what}, found `{tok}`")))
}

fn parse_tuple(tok: &str, line: usize, col: usize) -> Result<AttrTuple> {
    if tok == "#" {
        return Ok(AttrTuple::null());
    }
    let mut values = Vec::new();
    let mut offset = 0;
    for part in tok.split(',') {
        let c = col + offset;
        offset += part.len() + 1;
        let v = match part.strip_prefix('c') {
            Some(code) => AttrValue::Cat(parse_num(code, line, c, "a categorical code")?),
            None => {
                let x: f64 = parse_num(part, line, c, "a number")?;
                if !x.is_finite() {
                    return Err(perr(line, c, "attribute must be finite"));
                }
                AttrValue::Real(x)
            }
        };
        values.push(v);
    }
    AttrTuple::new(values).ok_or_else(|| perr(line, col, "empty tuple"))
}

fn format_tuple(t: &AttrTuple) -> String {
    t.to_string()
}

/// Parses the AG text format.
pub fn parse_ag(text: &str) -> Result<AttributedGraph> {
    let lines: Vec<&str> = text.lines().collect();
    let get = |k: usize| lines.get(k).copied().ok_or_else(|| perr(k + 1, 1, "unexpected end of file"));
    let head = tokens(get(0)?);
    if head.len() != 1 {
        return Err(perr(1, 1, "first line must hold the number of vertices"));
    }
    let n: usize = parse_num(head[0].1, 1, head[0].0, "a vertex count")?;
    let vline = tokens(get(1)?);
    if vline.len() != n {
        return Err(perr(2, 1, format!("expected {n} vertex tuples, found {}", vline.len())));
    }
    let vertices: Vec<AttrTuple> = vline.iter().map(|(c, t)| parse_tuple(t, 2, *c)).collect::<Result<_>>()?;
    let mut arcs = Vec::new();
    for i in 0..n {
        let row = tokens(get(2 + i)?);
        if row.len() != n {
            return Err(perr(3 + i, 1, format!("expected {n} arc entries, found {}", row.len())));
        }
        for (j, (c, t)) in row.iter().enumerate() {
            let b = parse_tuple(t, 3 + i, *c)?;
            if i == j {
                if !b.is_null() {
                    return Err(perr(3 + i, *c, "diagonal entries must be `#`"));
                }
            } else if !b.is_null() {
                arcs.push(((i, j), b));
            }
        }
    }
    let mut order: Option<Vec<Vec<usize>>> = None;
    for (k, l) in lines.iter().enumerate().skip(2 + n) {
        let t = tokens(l);
        if t.is_empty() {
            continue;
        }
        if t[0].1 != "order" {
            return Err(perr(k + 1, t[0].0, "expected `order i t...`"));
        }
        if t.len() == 1 {
            order.get_or_insert_with(|| vec![Vec::new(); n]);
            continue;
        }
        let i: usize = parse_num(t[1].1, k + 1, t[1].0, "a vertex index")?;
        if i >= n {
            return Err(perr(k + 1, t[1].0, "vertex index out of range"));
        }
        let targets = t[2..].iter().map(|(c, x)| parse_num(x, k + 1, *c, "a vertex index")).collect::<Result<_>>()?;
        order.get_or_insert_with(|| vec![Vec::new(); n])[i] = targets;
    }
    let g = if vertices.iter().any(|v| v.is_null()) {
        AttributedGraph::new_extended(vertices, arcs)
    } else {
        AttributedGraph::new(vertices, arcs)
    }
    .map_err(|e| perr(1, 1, e.to_string()))?;
    match order {
        Some(o) => g.with_arc_order(o).map_err(|e| perr(3 + n, 1, e.to_string())),
        None => Ok(g),
    }
}

pub fn format_ag(g: &AttributedGraph) -> String {
    let n = g.order();
    let mut s = format!("{n}\n");
    s.push_str(&g.vertices().iter().map(format_tuple).collect::<Vec<_>>().join(" "));
    s.push('\n');
    for i in 0..n {
        let row: Vec<String> =
            (0..n).map(|j| g.arc(i, j).filter(|_| i != j).map_or_else(|| "#".to_string(), format_tuple)).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    if let Some(o) = g.arc_order() {
        if o.is_empty() {
            s.push_str("order\n");
        }
        for (i, t) in o.iter().enumerate() {
            s.push_str(&format!("order {i}"));
            for j in t {
                s.push_str(&format!(" {j}"));
            }
            s.push('\n');
        }
    }
    s
}

pub fn read_ag(path: impl AsRef<Path>) -> Result<AttributedGraph> {
    parse_ag(&fs::read_to_string(path)?)
}

pub fn write_ag(path: impl AsRef<Path>, g: &AttributedGraph) -> Result<()> {
    Ok(fs::write(path, format_ag(g))?)
}

fn parse_bin(tok: &str, line: usize, col: usize) -> Result<Bin> {
    if let Some(c) = tok.strip_prefix('c') {
        Ok(Bin::Cat(parse_num(c, line, col, "a categorical bin")?))
    } else if let Some(r) = tok.strip_prefix('r') {
        Ok(Bin::Real(parse_num(r, line, col, "a real bin")?))
    } else {
        Err(perr(line, col, format!("bad bin `{tok}`")))
    }
}

fn format_pdf(p: &Pdf) -> String {
    let mut s = format!("null={} support={} comps={}", p.null_prob(), p.support(), p.arity());
    for m in p.components() {
        if m.is_empty() {
            s.push_str(" -");
        } else {
            let parts: Vec<String> = m.iter().map(|(b, x)| format!("{b}:{x}")).collect();
            s.push(' ');
            s.push_str(&parts.join(";"));
        }
    }
    s
}

fn keyed<'a>(tok: (usize, &'a str), key: &str, line: usize) -> Result<&'a str> {
    tok.1
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| perr(line, tok.0, format!("expected `{key}=`")))
}

fn parse_pdf(t: &[(usize, &str)], line: usize) -> Result<Pdf> {
    if t.len() < 3 {
        return Err(perr(line, t.first().map_or(1, |x| x.0), "incomplete pdf"));
    }
    let null: f64 = parse_num(keyed(t[0], "null", line)?, line, t[0].0, "a probability")?;
    let support: f64 = parse_num(keyed(t[1], "support", line)?, line, t[1].0, "a support count")?;
    let k: usize = parse_num(keyed(t[2], "comps", line)?, line, t[2].0, "a component count")?;
    if t.len() != 3 + k {
        return Err(perr(line, t[2].0, format!("expected {k} components")));
    }
    if !(0.0..=1.0).contains(&null) {
        return Err(perr(line, t[0].0, "probability outside [0, 1]"));
    }
    let mut comps = Vec::with_capacity(k);
    for &(col, tok) in &t[3..] {
        let mut m = BTreeMap::new();
        if tok != "-" {
            for e in tok.split(';') {
                let (b, p) = e.split_once(':').ok_or_else(|| perr(line, col, "expected `bin:p`"))?;
                let p: f64 = parse_num(p, line, col, "a probability")?;
                m.insert(parse_bin(b, line, col)?, p);
            }
        }
        comps.push(m);
    }
    Ok(Pdf::from_parts(null, comps, support))
}

/// Non-empty, non-comment lines with 1-based numbers.
struct Cursor<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        let lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|(k, l)| (k + 1, l))
            .collect();
        Cursor { lines, pos: 0 }
    }

    fn next(&mut self) -> Result<(usize, Vec<(usize, &'a str)>)> {
        let last = self.lines.last().map_or(1, |l| l.0);
        let (k, l) = *self.lines.get(self.pos).ok_or_else(|| perr(last, 1, "unexpected end of file"))?;
        self.pos += 1;
        Ok((k, tokens(l)))
    }

    fn peek_word(&self) -> Option<&'a str> {
        self.lines.get(self.pos).and_then(|(_, l)| l.split_whitespace().next())
    }

    fn expect(&mut self, word: &str, args: usize) -> Result<(usize, Vec<(usize, &'a str)>)> {
        let (k, t) = self.next()?;
        if t.first().map(|x| x.1) != Some(word) || t.len() != args + 1 {
            return Err(perr(k, t.first().map_or(1, |x| x.0), format!("expected `{word}` with {args} value(s)")));
        }
        Ok((k, t))
    }
}

struct Common {
    n: usize,
    z: u64,
    binnings: Binnings,
    vertex_pdfs: Vec<Pdf>,
    arc_pdfs: Vec<Pdf>,
    u: Vec<u64>,
}

fn parse_common(c: &mut Cursor, header: &str) -> Result<Common> {
    let (k, t) = c.expect(header, 1)?;
    let n: usize = parse_num(t[1].1, k, t[1].0, "an order")?;
    let (k, t) = c.expect("z", 1)?;
    let z: u64 = parse_num(t[1].1, k, t[1].0, "a sample count")?;
    let (k, t) = c.expect("binning", 2)?;
    let widths: Vec<f64> = t[1..].iter().map(|(col, x)| parse_num(x, k, *col, "a bin width")).collect::<Result<_>>()?;
    if widths.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
        return Err(perr(k, t[1].0, "bin widths must be positive"));
    }
    let binnings = Binnings::new(widths[0], widths[1]);
    let mut vertex_pdfs = Vec::with_capacity(n);
    for i in 0..n {
        let (k, t) = c.next()?;
        if t.len() < 2 || t[0].1 != "vertex" {
            return Err(perr(k, 1, "expected `vertex i PDF`"));
        }
        let idx: usize = parse_num(t[1].1, k, t[1].0, "a vertex index")?;
        if idx != i {
            return Err(perr(k, t[1].0, format!("expected vertex {i}")));
        }
        vertex_pdfs.push(parse_pdf(&t[2..], k)?);
    }
    let mut arc_pdfs = Vec::new();
    let mut u = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (k, t) = c.next()?;
            if t.len() < 4 || t[0].1 != "arc" {
                return Err(perr(k, 1, "expected `arc i j u PDF`"));
            }
            let a: usize = parse_num(t[1].1, k, t[1].0, "a vertex index")?;
            let b: usize = parse_num(t[2].1, k, t[2].0, "a vertex index")?;
            if (a, b) != (i, j) {
                return Err(perr(k, t[1].0, format!("expected arc {i} {j}")));
            }
            u.push(parse_num(t[3].1, k, t[3].0, "an arc count")?);
            arc_pdfs.push(parse_pdf(&t[4..], k)?);
        }
    }
    Ok(Common { n, z, binnings, vertex_pdfs, arc_pdfs, u })
}

fn write_common(s: &mut String, header: &str, n: usize, z: u64, b: &Binnings, v: &[Pdf], a: &[Pdf], u: &[u64]) {
    s.push_str(&format!("{header} {n}\nz {z}\nbinning {} {}\n", b.vertex.width, b.arc.width));
    for (i, p) in v.iter().enumerate() {
        s.push_str(&format!("vertex {i} {}\n", format_pdf(p)));
    }
    let mut k = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s.push_str(&format!("arc {i} {j} {} {}\n", u[k], format_pdf(&a[k])));
                k += 1;
            }
        }
    }
}

fn parse_matrix(c: &mut Cursor, size: usize) -> Result<BoolMatrix> {
    let mut m = BoolMatrix::new(size, false);
    for i in 0..size {
        let (k, t) = c.next()?;
        let row = t.iter().map(|x| x.1).collect::<String>();
        if row.len() != size {
            return Err(perr(k, 1, format!("expected a row of {size} bits")));
        }
        for (j, ch) in row.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => m.set(i, j, true),
                _ => return Err(perr(k, j + 1, "expected 0 or 1")),
            }
        }
    }
    Ok(m)
}

fn write_matrix(s: &mut String, m: &BoolMatrix) {
    for i in 0..m.size() {
        for j in 0..m.size() {
            s.push(if m.get(i, j) { '1' } else { '0' });
        }
        s.push('\n');
    }
}

fn kind_of(sym: &str) -> Option<RelationKind> {
    RelationKind::ALL.into_iter().find(|k| k.symbol() == sym)
}

pub fn parse_fdg(text: &str) -> Result<Fdg> {
    let mut c = Cursor::new(text);
    let com = parse_common(&mut c, "fdg")?;
    let n = com.n;
    let s = n * n.saturating_sub(1);
    let mut rel = [Relations::from_presence(&[], n), Relations::from_presence(&[], s)];
    for (r, word, size) in [(0, "vrel", n), (1, "arel", s)] {
        for _ in 0..3 {
            let (k, t) = c.expect(word, 1)?;
            let kind = kind_of(t[1].1).ok_or_else(|| perr(k, t[1].0, "expected A, O or E"))?;
            *rel[r].get_mut(kind) = parse_matrix(&mut c, size)?;
        }
    }
    let [vrel, arel] = rel;
    let mut f = Fdg::from_parts(
        com.vertex_pdfs,
        com.arc_pdfs,
        com.u,
        com.z,
        vrel,
        arel,
        com.binnings.vertex,
        com.binnings.arc,
    )?;
    let mut order: Option<Vec<Vec<usize>>> = None;
    while c.peek_word() == Some("order") {
        let (k, t) = c.next()?;
        if t.len() == 1 {
            order.get_or_insert_with(|| vec![Vec::new(); n]);
            continue;
        }
        let i: usize = parse_num(t.get(1).map_or("", |x| x.1), k, 7, "a vertex index")?;
        if i >= n {
            return Err(perr(k, 7, "vertex index out of range"));
        }
        let targets = t[2..].iter().map(|(col, x)| parse_num(x, k, *col, "a vertex index")).collect::<Result<_>>()?;
        order.get_or_insert_with(|| vec![Vec::new(); n])[i] = targets;
    }
    c.expect("end", 0)?;
    if let Some(o) = order {
        f = f.with_arc_order(o)?;
    }
    Ok(f)
}

pub fn format_fdg(f: &Fdg) -> String {
    let mut s = String::new();
    let b = Binnings { vertex: f.vertex_binning, arc: f.arc_binning };
    write_common(&mut s, "fdg", f.order(), f.z, &b, &f.vertex_pdfs, &f.arc_pdfs, &f.u);
    for (word, rel) in [("vrel", &f.vertex_rel), ("arel", &f.arc_rel)] {
        for kind in RelationKind::ALL {
            s.push_str(&format!("{word} {}\n", kind.symbol()));
            write_matrix(&mut s, rel.get(kind));
        }
    }
    if let Some(o) = &f.arc_order {
        if o.is_empty() {
            s.push_str("order\n");
        }
        for (i, t) in o.iter().enumerate() {
            s.push_str(&format!("order {i}"));
            for j in t {
                s.push_str(&format!(" {j}"));
            }
            s.push('\n');
        }
    }
    s.push_str("end\n");
    s
}

pub fn read_fdg(path: impl AsRef<Path>) -> Result<Fdg> {
    parse_fdg(&fs::read_to_string(path)?)
}

pub fn write_fdg(path: impl AsRef<Path>, f: &Fdg) -> Result<()> {
    Ok(fs::write(path, format_fdg(f))?)
}

pub fn parse_forg(text: &str) -> Result<Forg> {
    let mut c = Cursor::new(text);
    let com = parse_common(&mut c, "forg")?;
    c.expect("end", 0)?;
    Forg::from_parts(com.vertex_pdfs, com.arc_pdfs, com.u, com.z, com.binnings)
}

pub fn format_forg(r: &Forg) -> String {
    let mut s = String::new();
    write_common(&mut s, "forg", r.order(), r.z, &r.binnings(), &r.vertex_pdfs, &r.arc_pdfs, &r.u);
    s.push_str("end\n");
    s
}

pub fn read_forg(path: impl AsRef<Path>) -> Result<Forg> {
    parse_forg(&fs::read_to_string(path)?)
}

pub fn write_forg(path: impl AsRef<Path>, r: &Forg) -> Result<()> {
    Ok(fs::write(path, format_forg(r))?)
}

/// One line per graph of `vertex->label` pairs (0-based); vertices not
/// listed, or listed as `v->#`, are unlabelled.
pub fn parse_labelling(text: &str, orders: &[usize]) -> Result<CommonLabelling> {
    let lines: Vec<&str> = text.lines().collect();
    let mut maps = Vec::with_capacity(orders.len());
    for (g, &n) in orders.iter().enumerate() {
        let line = lines.get(g).ok_or_else(|| perr(g + 1, 1, format!("missing labelling for graph {g}")))?;
        let mut map = vec![None; n];
        for (col, tok) in tokens(line) {
            let (v, l) = tok.split_once("->").ok_or_else(|| perr(g + 1, col, "expected `vertex->label`"))?;
            let v: usize = parse_num(v, g + 1, col, "a vertex index")?;
            if v >= n {
                return Err(perr(g + 1, col, format!("vertex {v} outside a graph of order {n}")));
            }
            map[v] = if l == "#" { None } else { Some(parse_num(l, g + 1, col, "a label")?) };
        }
        maps.push(map);
    }
    if lines.iter().skip(orders.len()).any(|l| !l.trim().is_empty()) {
        return Err(perr(orders.len() + 1, 1, "more labelling lines than graphs"));
    }
    Ok(CommonLabelling::new(maps))
}

pub fn format_labelling(l: &CommonLabelling) -> String {
    let mut s = String::new();
    for map in &l.maps {
        let parts: Vec<String> = map
            .iter()
            .enumerate()
            .map(|(v, t)| t.map_or_else(|| format!("{v}->#"), |t| format!("{v}->{t}")))
            .collect();
        s.push_str(&parts.join(" "));
        s.push('\n');
    }
    s
}

pub fn read_labelling(path: impl AsRef<Path>, orders: &[usize]) -> Result<CommonLabelling> {
    parse_labelling(&fs::read_to_string(path)?, orders)
}

/// Flat `key = value` file; `#` starts a comment line.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let l = line.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (key, value) = l.split_once('=').ok_or_else(|| perr(k + 1, 1, "expected `key = value`"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(perr(k + 1, 1, "empty key"));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(perr(k + 1, 1, format!("duplicate key `{key}`")));
        }
    }
    Ok(out)
}

pub fn read_config(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    parse_config(&fs::read_to_string(path)?)
}

/// Writes experiment rows with the standard header.
pub fn write_csv(path: impl AsRef<Path>, rows: &[super::ExperimentReport]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::Config(e.to_string()))?;
    w.write_record(super::ExperimentReport::CSV_HEADER).map_err(|e| Error::Config(e.to_string()))?;
    for r in rows {
        w.write_record(r.csv_row()).map_err(|e| Error::Config(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}
