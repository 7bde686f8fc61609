//! The fixture file format.
//!
//! A document is UTF-8 text made of whitespace-separated tokens, one statement
//! per line, `#` starting a comment. It opens with `twistalg 1`, then `field`,
//! `group` and any number of named blocks, each closed by `end`:
//!
//! ```text
//! twistalg 1
//! field q
//! group integers
//!
//! algebra A
//!   window 0..2
//!   degree 0 1
//!   degree 1 x
//!   degree 2 x^2
//!   entry 1 1 0 0 0 1        # g h i j m c: e_(g,i) e_(h,j) has coefficient c on e_(gh,m)
//!   unit 1
//! end
//! ```
//!
//! Block kinds are `algebra`, `galgebra`, `module`, `map`, `twist`, `principal`,
//! `morphism` and `expect`. Basis indices are 0-based, matrices are
//! `<rows>x<cols>` followed by their entries in row-major order, and scalars are
//! integer or fraction literals (residues for `fp:<p>`). Names may be used only
//! after the block that defines them. Printing is canonical: blocks are grouped
//! by kind in the order above and sorted by name, entries are sorted and only
//! nonzero structure constants are listed.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use twistalg::endo::{BigradedModule, Summand};
use twistalg::fixtures::{Between, Expectations, FixtureBundle, On};
use twistalg::foundations::{Elem, FieldSpec, FiniteGroup, GradingGroup, Matrix, Scalar, Tensor, Window};
use twistalg::g_algebra::{Association, GAlgebra, GAlgebraMorphism, PrincipalMap, Side};
use twistalg::graded_algebra::{GradedAlgebra, GradedLinearMap};
use twistalg::twisting::TwistingSystem;

pub const HEADER: &str = "twistalg 1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Expected reports attached to one G-algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expect {
    pub dims: BTreeMap<(Elem, Elem), usize>,
    /// `None` when no obstruction statement is present, `Some(vec![])` for `obstruction none`.
    pub obstructions: Option<Vec<((Elem, Elem), (Elem, Elem))>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub field: FieldSpec,
    pub group: GradingGroup,
    pub bundle: Option<(String, Window)>,
    pub algebras: BTreeMap<String, GradedAlgebra>,
    pub g_algebras: BTreeMap<String, GAlgebra>,
    /// Name of the algebra each associated G-algebra was built from.
    pub origins: BTreeMap<String, String>,
    pub modules: BTreeMap<String, On<BigradedModule>>,
    pub maps: BTreeMap<String, Between<GradedLinearMap>>,
    pub twists: BTreeMap<String, On<TwistingSystem>>,
    pub principals: BTreeMap<String, On<PrincipalMap>>,
    pub morphisms: BTreeMap<String, Between<GAlgebraMorphism>>,
    pub expects: BTreeMap<String, Expect>,
}

impl Document {
    pub fn new(field: FieldSpec, group: GradingGroup) -> Self {
        Document {
            field,
            group,
            bundle: None,
            algebras: BTreeMap::new(),
            g_algebras: BTreeMap::new(),
            origins: BTreeMap::new(),
            modules: BTreeMap::new(),
            maps: BTreeMap::new(),
            twists: BTreeMap::new(),
            principals: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            expects: BTreeMap::new(),
        }
    }

    fn name_of(&self, a: &GradedAlgebra) -> Option<&String> {
        self.algebras.iter().find(|(_, b)| *b == a).map(|(n, _)| n)
    }

    /// Adds `a`, or returns the name of an equal algebra already present.
    pub fn add_algebra(&mut self, name: &str, a: GradedAlgebra) -> String {
        if let Some(n) = self.name_of(&a) {
            return n.clone();
        }
        self.algebras.insert(name.to_string(), a);
        name.to_string()
    }

    /// Adds `r`, also adding the algebra it is associated with when needed.
    pub fn add_g_algebra(&mut self, name: &str, r: GAlgebra) {
        if let Some(o) = r.origin() {
            let base = self.add_algebra(&format!("{name}.base"), o.base.clone());
            self.origins.insert(name.to_string(), base);
        }
        self.g_algebras.insert(name.to_string(), r);
    }

    pub fn add_module(&mut self, name: &str, p: BigradedModule) {
        let on = self.add_algebra(&format!("{name}.base"), p.base().clone());
        self.modules.insert(name.to_string(), On { on, value: p });
    }

    pub fn from_bundle(b: &FixtureBundle) -> Self {
        let group = b
            .algebras
            .values()
            .next()
            .map(|a| a.group().clone())
            .unwrap_or(GradingGroup::Integers);
        let mut doc = Document::new(b.field, group);
        doc.bundle = Some((b.name.clone(), b.window));
        for (k, a) in &b.algebras {
            doc.algebras.insert(k.clone(), a.clone());
        }
        for (k, r) in &b.g_algebras {
            doc.add_g_algebra(k, r.clone());
        }
        for (k, p) in &b.modules {
            doc.add_module(k, p.clone());
        }
        doc.maps = b.graded_maps.clone();
        doc.twists = b.twists.clone();
        doc.principals = b.principal_maps.clone();
        doc.morphisms = b.morphisms.clone();
        let Expectations { dims, obstructions } = &b.expected;
        for (k, d) in dims {
            doc.expects.entry(k.clone()).or_default().dims = d.clone();
        }
        for (k, o) in obstructions {
            doc.expects.entry(k.clone()).or_default().obstructions = Some(o.clone());
        }
        doc
    }
}

// ---------------------------------------------------------------- printing

struct Printer<'a> {
    out: String,
    field: &'a FieldSpec,
    group: &'a GradingGroup,
}

impl Printer<'_> {
    fn line(&mut self, indent: bool, parts: &[String]) {
        if indent {
            self.out.push_str("  ");
        }
        self.out.push_str(&parts.join(" "));
        self.out.push('\n');
    }

    fn el(&self, g: Elem) -> String {
        self.group.label(g)
    }

    fn sc(&self, c: &Scalar) -> String {
        self.field.format(c)
    }

    fn matrix(&self, m: &Matrix) -> Vec<String> {
        let mut v = vec![format!("{}x{}", m.rows(), m.cols())];
        v.extend(m.entries().iter().map(|c| self.sc(c)));
        v
    }
}

fn s(x: impl ToString) -> String {
    x.to_string()
}

pub fn print(doc: &Document) -> String {
    let mut p = Printer { out: String::new(), field: &doc.field, group: &doc.group };
    p.line(false, &[s(HEADER)]);
    p.line(false, &[s("field"), s(doc.field)]);
    match &doc.group {
        GradingGroup::Integers => p.line(false, &[s("group integers")]),
        GradingGroup::Finite(g) => {
            p.line(false, &[s("group finite")]);
            let mut l = vec![s("labels")];
            l.extend(g.labels().iter().cloned());
            p.line(true, &l);
            for row in g.table() {
                let mut l = vec![s("row")];
                l.extend(row.iter().map(|k| g.labels()[*k].clone()));
                p.line(true, &l);
            }
            p.line(false, &[s("end")]);
        }
    }
    if let Some((name, w)) = &doc.bundle {
        p.line(false, &[s("bundle"), name.clone(), s(w)]);
    }
    for (name, a) in &doc.algebras {
        print_algebra(&mut p, name, a);
    }
    for (name, r) in &doc.g_algebras {
        print_g_algebra(&mut p, name, r, doc.origins.get(name));
    }
    for (name, m) in &doc.modules {
        p.out.push('\n');
        p.line(false, &[s("module"), name.clone()]);
        p.line(true, &[s("base"), m.on.clone()]);
        for (g, row) in m.value.rows() {
            let mut l = vec![s("row"), p.el(*g)];
            for summand in row {
                let mut t = p.el(summand.shift);
                if let Some(e) = &summand.idempotent {
                    let cs: Vec<String> = e.iter().map(|c| p.sc(c)).collect();
                    let _ = write!(t, "@{}", cs.join(","));
                }
                l.push(t);
            }
            p.line(true, &l);
        }
        p.line(false, &[s("end")]);
    }
    for (name, m) in &doc.maps {
        p.out.push('\n');
        p.line(false, &[s("map"), name.clone()]);
        p.line(true, &[s("from"), m.source.clone()]);
        p.line(true, &[s("to"), m.target.clone()]);
        p.line(true, &[s("shift"), p.el(m.value.shift())]);
        for (d, b) in m.value.blocks() {
            let mut l = vec![s("block"), p.el(*d)];
            l.extend(p.matrix(b));
            p.line(true, &l);
        }
        p.line(false, &[s("end")]);
    }
    for (name, t) in &doc.twists {
        p.out.push('\n');
        p.line(false, &[s("twist"), name.clone()]);
        p.line(true, &[s("on"), t.on.clone()]);
        p.line(true, &[s("family"), s(t.value.family())]);
        for (g, m) in t.value.maps() {
            p.line(true, &[s("member"), p.el(*g)]);
            if m.shift() != doc.group.identity() {
                p.line(true, &[s("shift"), p.el(*g), p.el(m.shift())]);
            }
            for (d, b) in m.blocks() {
                let mut l = vec![s("block"), p.el(*g), p.el(*d)];
                l.extend(p.matrix(b));
                p.line(true, &l);
            }
        }
        p.line(false, &[s("end")]);
    }
    for (name, t) in &doc.principals {
        p.out.push('\n');
        p.line(false, &[s("principal"), name.clone()]);
        p.line(true, &[s("on"), t.on.clone()]);
        p.line(true, &[s("family"), s(t.value.family())]);
        for (g, blocks) in t.value.maps() {
            p.line(true, &[s("member"), p.el(*g)]);
            for ((h, l), b) in blocks {
                let mut v = vec![s("block"), p.el(*g), p.el(*h), p.el(*l)];
                v.extend(p.matrix(b));
                p.line(true, &v);
            }
        }
        p.line(false, &[s("end")]);
    }
    for (name, m) in &doc.morphisms {
        p.out.push('\n');
        p.line(false, &[s("morphism"), name.clone()]);
        p.line(true, &[s("from"), m.source.clone()]);
        p.line(true, &[s("to"), m.target.clone()]);
        for ((f, g), b) in m.value.blocks() {
            let mut l = vec![s("block"), p.el(*f), p.el(*g)];
            l.extend(p.matrix(b));
            p.line(true, &l);
        }
        p.line(false, &[s("end")]);
    }
    for (name, e) in &doc.expects {
        p.out.push('\n');
        p.line(false, &[s("expect"), name.clone()]);
        for ((f, g), d) in &e.dims {
            p.line(true, &[s("dims"), p.el(*f), p.el(*g), s(d)]);
        }
        match &e.obstructions {
            None => {}
            Some(v) if v.is_empty() => p.line(true, &[s("obstruction none")]),
            Some(v) => {
                for ((a, b), (c, d)) in v {
                    p.line(true, &[s("obstruction"), p.el(*a), p.el(*b), p.el(*c), p.el(*d)]);
                }
            }
        }
        p.line(false, &[s("end")]);
    }
    p.out
}

fn print_tensor(p: &mut Printer, prefix: &[String], t: &Tensor) {
    for (i, j, m, c) in t.nonzero_entries(p.field) {
        let mut l = vec![s("entry")];
        l.extend(prefix.iter().cloned());
        l.extend([s(i), s(j), s(m), p.sc(c)]);
        p.line(true, &l);
    }
}

fn print_algebra(p: &mut Printer, name: &str, a: &GradedAlgebra) {
    p.out.push('\n');
    p.line(false, &[s("algebra"), s(name)]);
    p.line(true, &[s("window"), s(a.window())]);
    for (g, labels) in a.all_labels() {
        let mut l = vec![s("degree"), p.el(*g)];
        l.extend(labels.iter().cloned());
        p.line(true, &l);
    }
    for ((g, h), t) in a.structure_tensors() {
        print_tensor(p, &[p.el(*g), p.el(*h)], t);
    }
    let mut l = vec![s("unit")];
    l.extend(a.unit().iter().map(|c| p.sc(c)));
    p.line(true, &l);
    p.line(false, &[s("end")]);
}

fn print_g_algebra(p: &mut Printer, name: &str, r: &GAlgebra, origin: Option<&String>) {
    p.out.push('\n');
    p.line(false, &[s("galgebra"), s(name)]);
    p.line(true, &[s("index"), s(r.index())]);
    if let (Some(o), Some(base)) = (r.origin(), origin) {
        let side = match o.side {
            Side::Right => "right",
            Side::Left => "left",
        };
        p.line(true, &[s("origin"), s(side), base.clone()]);
    }
    for ((f, g), labels) in r.components() {
        let mut l = vec![s("component"), p.el(*f), p.el(*g)];
        l.extend(labels.iter().cloned());
        p.line(true, &l);
    }
    for ((f, g, h), t) in r.structure_tensors() {
        print_tensor(p, &[p.el(*f), p.el(*g), p.el(*h)], t);
    }
    for (f, u) in r.local_units() {
        let mut l = vec![s("local-unit"), p.el(*f)];
        l.extend(u.iter().map(|c| p.sc(c)));
        p.line(true, &l);
    }
    p.line(false, &[s("end")]);
}

// ----------------------------------------------------------------- parsing

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

struct Line<'a> {
    number: usize,
    toks: Vec<Tok<'a>>,
}

impl<'a> Line<'a> {
    fn end_column(&self) -> usize {
        self.toks.last().map_or(1, |t| t.column + t.text.chars().count())
    }

    fn arg(&self, k: usize, what: &str) -> Result<Tok<'a>, ParseError> {
        self.toks.get(k).copied().ok_or_else(|| ParseError {
            line: self.number,
            column: self.end_column(),
            message: format!("expected {what}"),
        })
    }

    fn exact(&self, n: usize) -> Result<(), ParseError> {
        match self.toks.get(n) {
            Some(t) => Err(err(*t, format!("unexpected `{}`", t.text))),
            None if self.toks.len() < n => Err(ParseError {
                line: self.number,
                column: self.end_column(),
                message: format!("`{}` takes {} arguments", self.toks[0].text, n - 1),
            }),
            None => Ok(()),
        }
    }
}

fn err(t: Tok, message: impl Into<String>) -> ParseError {
    ParseError { line: t.line, column: t.column, message: message.into() }
}

fn lex(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start: Option<usize> = None;
        for (i, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            if ch.is_whitespace() {
                if let Some(s0) = start.take() {
                    let column = content[..s0].chars().count() + 1;
                    toks.push(Tok { text: &content[s0..i], line: n + 1, column });
                }
            } else if start.is_none() {
                start = Some(i);
            }
        }
        if !toks.is_empty() {
            out.push(Line { number: n + 1, toks });
        }
    }
    out
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    doc: Document,
    field_fixed: bool,
}

fn lift<T, E: fmt::Display>(t: Tok, r: Result<T, E>) -> Result<T, ParseError> {
    r.map_err(|e| err(t, e.to_string()))
}

impl<'a> Parser<'a> {
    fn elem(&self, t: Tok) -> Result<Elem, ParseError> {
        lift(t, self.doc.group.parse_elem(t.text))
    }

    fn scalar(&self, t: Tok) -> Result<Scalar, ParseError> {
        lift(t, self.doc.field.parse(t.text))
    }

    fn index(&self, t: Tok) -> Result<usize, ParseError> {
        t.text.parse::<usize>().map_err(|_| err(t, format!("`{}` is not a basis index", t.text)))
    }

    fn window(&self, t: Tok) -> Result<Window, ParseError> {
        lift(t, t.text.parse::<Window>())
    }

    fn name(&self, t: Tok) -> Result<String, ParseError> {
        let ok = !t.text.is_empty()
            && t.text.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
        if ok {
            Ok(t.text.to_string())
        } else {
            Err(err(t, format!("`{}` is not a valid name", t.text)))
        }
    }

    fn matrix(&self, line: &Line, start: usize) -> Result<Matrix, ParseError> {
        let shape = line.arg(start, "matrix shape <rows>x<cols>")?;
        let (r, c) = shape
            .text
            .split_once('x')
            .and_then(|(r, c)| Some((r.parse::<usize>().ok()?, c.parse::<usize>().ok()?)))
            .ok_or_else(|| err(shape, format!("`{}` is not a matrix shape", shape.text)))?;
        let entries = &line.toks[start + 1..];
        if entries.len() != r * c {
            let t = entries.get(r * c).copied().unwrap_or(shape);
            return Err(err(t, format!("a {r}x{c} matrix needs {} entries, found {}", r * c, entries.len())));
        }
        let data = entries.iter().map(|t| self.scalar(*t)).collect::<Result<Vec<_>, _>>()?;
        Ok(Matrix::from_row_major(r, c, data))
    }

    fn next(&mut self) -> Option<&Line<'a>> {
        let l = self.lines.get(self.pos);
        self.pos += 1;
        l
    }

    /// Body lines of the block opened on the previous line, up to its `end`.
    fn body(&mut self, open: Tok<'a>) -> Result<Vec<Line<'a>>, ParseError> {
        let mut body = Vec::new();
        loop {
            let Some(line) = self.lines.get(self.pos) else {
                return Err(err(open, format!("`{}` block is not closed by `end`", open.text)));
            };
            self.pos += 1;
            if line.toks[0].text == "end" {
                line.exact(1)?;
                return Ok(body);
            }
            body.push(Line { number: line.number, toks: line.toks.clone() });
        }
    }

    fn fresh(&self, t: Tok, taken: bool) -> Result<(), ParseError> {
        if taken {
            Err(err(t, format!("`{}` is defined twice", t.text)))
        } else {
            Ok(())
        }
    }

    fn algebra_ref(&self, t: Tok) -> Result<&GradedAlgebra, ParseError> {
        self.doc
            .algebras
            .get(t.text)
            .ok_or_else(|| err(t, format!("no algebra named `{}` is defined above", t.text)))
    }

    fn g_algebra_ref(&self, t: Tok) -> Result<&GAlgebra, ParseError> {
        self.doc
            .g_algebras
            .get(t.text)
            .ok_or_else(|| err(t, format!("no galgebra named `{}` is defined above", t.text)))
    }

    fn run(&mut self) -> Result<(), ParseError> {
        let Some(first) = self.next() else {
            return Err(ParseError { line: 1, column: 1, message: format!("empty document, expected `{HEADER}`") });
        };
        let head: Vec<&str> = first.toks.iter().map(|t| t.text).collect();
        if head != ["twistalg", "1"] {
            return Err(err(first.toks[0], format!("expected header `{HEADER}`")));
        }
        while let Some(line) = self.lines.get(self.pos) {
            self.pos += 1;
            let kw = line.toks[0];
            let toks = line.toks.clone();
            let line = Line { number: line.number, toks };
            match kw.text {
                "field" => {
                    line.exact(2)?;
                    let t = line.toks[1];
                    let f: FieldSpec = lift(t, t.text.parse())?;
                    if self.field_fixed && f != self.doc.field {
                        return Err(err(t, format!("field {f} conflicts with {}", self.doc.field)));
                    }
                    if !self.doc.algebras.is_empty() || !self.doc.g_algebras.is_empty() {
                        if f != self.doc.field {
                            return Err(err(t, "the field must be declared before any algebra"));
                        }
                    }
                    self.doc.field = f;
                }
                "group" => self.group(&line)?,
                "bundle" => {
                    line.exact(3)?;
                    let w = self.window(line.toks[2])?;
                    self.doc.bundle = Some((self.name(line.toks[1])?, w));
                }
                "algebra" => self.algebra(&line)?,
                "galgebra" => self.g_algebra(&line)?,
                "module" => self.module(&line)?,
                "map" => self.map(&line)?,
                "twist" => self.twist(&line)?,
                "principal" => self.principal(&line)?,
                "morphism" => self.morphism(&line)?,
                "expect" => self.expect(&line)?,
                other => return Err(err(kw, format!("unknown statement `{other}`"))),
            }
        }
        Ok(())
    }

    fn group(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let kind = line.arg(1, "group kind `integers` or `finite`")?;
        line.exact(2)?;
        let group = match kind.text {
            "integers" => GradingGroup::Integers,
            "finite" => {
                let body = self.body(line.toks[0])?;
                let mut labels: Option<Vec<String>> = None;
                let mut rows: Vec<(Tok, Vec<Tok>)> = Vec::new();
                for l in &body {
                    match l.toks[0].text {
                        "labels" => labels = Some(l.toks[1..].iter().map(|t| t.text.to_string()).collect()),
                        "row" => rows.push((l.toks[0], l.toks[1..].to_vec())),
                        other => return Err(err(l.toks[0], format!("unknown group statement `{other}`"))),
                    }
                }
                let labels = labels.ok_or_else(|| err(kind, "finite group needs `labels`"))?;
                let mut table = Vec::new();
                for (t, row) in rows {
                    let r = row
                        .iter()
                        .map(|x| {
                            labels
                                .iter()
                                .position(|l| l == x.text)
                                .ok_or_else(|| err(*x, format!("unknown element `{}`", x.text)))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if r.len() != labels.len() {
                        return Err(err(t, format!("row needs {} entries", labels.len())));
                    }
                    table.push(r);
                }
                GradingGroup::Finite(lift(kind, FiniteGroup::new(labels, table))?)
            }
            other => return Err(err(kind, format!("unknown group kind `{other}`"))),
        };
        if !self.doc.algebras.is_empty() && group != self.doc.group {
            return Err(err(kind, "the group must be declared before any algebra"));
        }
        self.doc.group = group;
        Ok(())
    }

    fn algebra(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "algebra name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.algebras.contains_key(&name))?;
        let body = self.body(open)?;
        let mut window = None;
        let mut labels: BTreeMap<Elem, Vec<String>> = BTreeMap::new();
        let mut entries = Vec::new();
        let mut unit = None;
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "window" => {
                    l.exact(2)?;
                    window = Some(self.window(l.toks[1])?);
                }
                "degree" => {
                    let g = self.elem(l.arg(1, "degree")?)?;
                    if labels.insert(g, l.toks[2..].iter().map(|t| t.text.to_string()).collect()).is_some() {
                        return Err(err(l.toks[1], "degree listed twice"));
                    }
                }
                "entry" => {
                    l.exact(7)?;
                    let g = self.elem(l.toks[1])?;
                    let h = self.elem(l.toks[2])?;
                    let (i, j, m) = (self.index(l.toks[3])?, self.index(l.toks[4])?, self.index(l.toks[5])?);
                    entries.push((l.toks[1], g, h, i, j, m, self.scalar(l.toks[6])?));
                }
                "unit" => {
                    unit = Some(l.toks[1..].iter().map(|t| self.scalar(*t)).collect::<Result<Vec<_>, _>>()?);
                }
                other => return Err(err(kw, format!("unknown algebra statement `{other}`"))),
            }
        }
        let window = window.ok_or_else(|| err(open, "algebra needs a `window`"))?;
        let unit = unit.ok_or_else(|| err(open, "algebra needs a `unit`"))?;
        let f = self.doc.field;
        let grp = self.doc.group.clone();
        let mut structure: BTreeMap<(Elem, Elem), Tensor> = BTreeMap::new();
        for (t, g, h, i, j, m, c) in entries {
            let gh = grp.op(g, h);
            let dims = [g, h, gh].map(|d| labels.get(&d).map(Vec::len));
            let [Some(a), Some(b), Some(o)] = dims else {
                return Err(err(t, "entry refers to a degree without a `degree` line"));
            };
            if i >= a || j >= b || m >= o {
                return Err(err(t, "basis index out of range"));
            }
            structure.entry((g, h)).or_insert_with(|| Tensor::zeros(&f, a, b, o)).set(i, j, m, c);
        }
        let a = lift(open, GradedAlgebra::new(f, grp, window, labels, structure, unit))?;
        self.doc.algebras.insert(name, a);
        Ok(())
    }

    fn g_algebra(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "galgebra name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.g_algebras.contains_key(&name))?;
        let body = self.body(open)?;
        let mut index = None;
        let mut origin = None;
        let mut components: BTreeMap<(Elem, Elem), Vec<String>> = BTreeMap::new();
        let mut entries = Vec::new();
        let mut units = BTreeMap::new();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "index" => {
                    l.exact(2)?;
                    index = Some(self.window(l.toks[1])?);
                }
                "origin" => {
                    l.exact(3)?;
                    let side = match l.toks[1].text {
                        "right" => Side::Right,
                        "left" => Side::Left,
                        other => return Err(err(l.toks[1], format!("unknown side `{other}`"))),
                    };
                    let base = self.algebra_ref(l.toks[2])?.clone();
                    origin = Some((Association { side, base }, l.toks[2].text.to_string()));
                }
                "component" => {
                    let f = self.elem(l.arg(1, "row index")?)?;
                    let g = self.elem(l.arg(2, "column index")?)?;
                    let ls = l.toks[3..].iter().map(|t| t.text.to_string()).collect();
                    if components.insert((f, g), ls).is_some() {
                        return Err(err(l.toks[1], "component listed twice"));
                    }
                }
                "entry" => {
                    l.exact(8)?;
                    let (f, g, h) = (self.elem(l.toks[1])?, self.elem(l.toks[2])?, self.elem(l.toks[3])?);
                    let (i, j, m) = (self.index(l.toks[4])?, self.index(l.toks[5])?, self.index(l.toks[6])?);
                    entries.push((l.toks[1], f, g, h, i, j, m, self.scalar(l.toks[7])?));
                }
                "local-unit" => {
                    let f = self.elem(l.arg(1, "index")?)?;
                    let u = l.toks[2..].iter().map(|t| self.scalar(*t)).collect::<Result<Vec<_>, _>>()?;
                    units.insert(f, u);
                }
                other => return Err(err(kw, format!("unknown galgebra statement `{other}`"))),
            }
        }
        let index = index.ok_or_else(|| err(open, "galgebra needs an `index` window"))?;
        let fs = self.doc.field;
        let mut structure: BTreeMap<(Elem, Elem, Elem), Tensor> = BTreeMap::new();
        for (t, f, g, h, i, j, m, c) in entries {
            let dims = [(f, g), (g, h), (f, h)].map(|k| components.get(&k).map(Vec::len));
            let [Some(a), Some(b), Some(o)] = dims else {
                return Err(err(t, "entry refers to a component without a `component` line"));
            };
            if i >= a || j >= b || m >= o {
                return Err(err(t, "basis index out of range"));
            }
            structure.entry((f, g, h)).or_insert_with(|| Tensor::zeros(&fs, a, b, o)).set(i, j, m, c);
        }
        let mut r = lift(open, GAlgebra::new(fs, self.doc.group.clone(), index, components, structure, units))?;
        if let Some((assoc, base)) = origin {
            r = r.with_origin(assoc);
            self.doc.origins.insert(name.clone(), base);
        }
        self.doc.g_algebras.insert(name, r);
        Ok(())
    }

    fn module(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "module name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.modules.contains_key(&name))?;
        let body = self.body(open)?;
        let mut base: Option<(String, GradedAlgebra)> = None;
        let mut rows = BTreeMap::new();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "base" => {
                    l.exact(2)?;
                    base = Some((l.toks[1].text.to_string(), self.algebra_ref(l.toks[1])?.clone()));
                }
                "row" => {
                    let g = self.elem(l.arg(1, "row index")?)?;
                    let mut row = Vec::new();
                    for t in &l.toks[2..] {
                        let summand = match t.text.split_once('@') {
                            None => Summand::shift(self.elem(*t)?),
                            Some((sh, e)) => {
                                let shift = lift(*t, self.doc.group.parse_elem(sh))?;
                                let coords = e
                                    .split(',')
                                    .map(|c| lift(*t, self.doc.field.parse(c)))
                                    .collect::<Result<Vec<_>, _>>()?;
                                Summand::cut(shift, coords)
                            }
                        };
                        row.push(summand);
                    }
                    if rows.insert(g, row).is_some() {
                        return Err(err(l.toks[1], "row listed twice"));
                    }
                }
                other => return Err(err(kw, format!("unknown module statement `{other}`"))),
            }
        }
        let (on, b) = base.ok_or_else(|| err(open, "module needs a `base` algebra"))?;
        let p = lift(open, BigradedModule::new(b, rows))?;
        self.doc.modules.insert(name, On { on, value: p });
        Ok(())
    }

    fn map(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "map name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.maps.contains_key(&name))?;
        let body = self.body(open)?;
        let (mut from, mut to, mut shift) = (None, None, self.doc.group.identity());
        let mut blocks = BTreeMap::new();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "from" | "to" => {
                    l.exact(2)?;
                    self.algebra_ref(l.toks[1])?;
                    let n = Some(l.toks[1].text.to_string());
                    if kw.text == "from" {
                        from = n;
                    } else {
                        to = n;
                    }
                }
                "shift" => {
                    l.exact(2)?;
                    shift = self.elem(l.toks[1])?;
                }
                "block" => {
                    let d = self.elem(l.arg(1, "degree")?)?;
                    if blocks.insert(d, self.matrix(l, 2)?).is_some() {
                        return Err(err(l.toks[1], "block listed twice"));
                    }
                }
                other => return Err(err(kw, format!("unknown map statement `{other}`"))),
            }
        }
        let source = from.ok_or_else(|| err(open, "map needs `from`"))?;
        let target = to.ok_or_else(|| err(open, "map needs `to`"))?;
        let value = GradedLinearMap::new(self.doc.field, self.doc.group.clone(), shift, blocks);
        self.doc.maps.insert(name, Between { source, target, value });
        Ok(())
    }

    fn twist(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "twist name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.twists.contains_key(&name))?;
        let body = self.body(open)?;
        let (mut on, mut family) = (None, None);
        let mut members: BTreeMap<Elem, (Elem, BTreeMap<Elem, Matrix>)> = BTreeMap::new();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "on" => {
                    l.exact(2)?;
                    self.algebra_ref(l.toks[1])?;
                    on = Some(l.toks[1].text.to_string());
                }
                "family" => {
                    l.exact(2)?;
                    family = Some(self.window(l.toks[1])?);
                }
                "member" => {
                    l.exact(2)?;
                    let g = self.elem(l.toks[1])?;
                    if members.insert(g, (self.doc.group.identity(), BTreeMap::new())).is_some() {
                        return Err(err(l.toks[1], "member listed twice"));
                    }
                }
                "shift" => {
                    l.exact(3)?;
                    let g = self.elem(l.toks[1])?;
                    let sh = self.elem(l.toks[2])?;
                    members.get_mut(&g).ok_or_else(|| err(l.toks[1], "shift before its `member` line"))?.0 = sh;
                }
                "block" => {
                    let g = self.elem(l.arg(1, "member")?)?;
                    let d = self.elem(l.arg(2, "degree")?)?;
                    let m = self.matrix(l, 3)?;
                    let entry = members.get_mut(&g).ok_or_else(|| err(l.toks[1], "block before its `member` line"))?;
                    if entry.1.insert(d, m).is_some() {
                        return Err(err(l.toks[2], "block listed twice"));
                    }
                }
                other => return Err(err(kw, format!("unknown twist statement `{other}`"))),
            }
        }
        let on = on.ok_or_else(|| err(open, "twist needs `on`"))?;
        let family = family.ok_or_else(|| err(open, "twist needs a `family` window"))?;
        let (f, grp) = (self.doc.field, self.doc.group.clone());
        let maps = members
            .into_iter()
            .map(|(g, (sh, b))| (g, GradedLinearMap::new(f, grp.clone(), sh, b)))
            .collect();
        self.doc.twists.insert(name, On { on, value: TwistingSystem::new(family, maps) });
        Ok(())
    }

    fn principal(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "principal map name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.principals.contains_key(&name))?;
        let body = self.body(open)?;
        let (mut on, mut family) = (None, None);
        let mut maps: BTreeMap<Elem, BTreeMap<(Elem, Elem), Matrix>> = BTreeMap::new();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "on" => {
                    l.exact(2)?;
                    self.g_algebra_ref(l.toks[1])?;
                    on = Some(l.toks[1].text.to_string());
                }
                "family" => {
                    l.exact(2)?;
                    family = Some(self.window(l.toks[1])?);
                }
                "member" => {
                    l.exact(2)?;
                    let g = self.elem(l.toks[1])?;
                    if maps.insert(g, BTreeMap::new()).is_some() {
                        return Err(err(l.toks[1], "member listed twice"));
                    }
                }
                "block" => {
                    let g = self.elem(l.arg(1, "member")?)?;
                    let h = self.elem(l.arg(2, "row index")?)?;
                    let k = self.elem(l.arg(3, "column index")?)?;
                    let m = self.matrix(l, 4)?;
                    let entry = maps.get_mut(&g).ok_or_else(|| err(l.toks[1], "block before its `member` line"))?;
                    if entry.insert((h, k), m).is_some() {
                        return Err(err(l.toks[2], "block listed twice"));
                    }
                }
                other => return Err(err(kw, format!("unknown principal statement `{other}`"))),
            }
        }
        let on = on.ok_or_else(|| err(open, "principal map needs `on`"))?;
        let family = family.ok_or_else(|| err(open, "principal map needs a `family` window"))?;
        let value = PrincipalMap::new(self.doc.field, self.doc.group.clone(), family, maps);
        self.doc.principals.insert(name, On { on, value });
        Ok(())
    }

    fn morphism(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "morphism name")?;
        line.exact(2)?;
        let name = self.name(nt)?;
        self.fresh(nt, self.doc.morphisms.contains_key(&name))?;
        let body = self.body(open)?;
        let (mut from, mut to) = (None, None);
        let mut blocks = BTreeMap::new();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "from" | "to" => {
                    l.exact(2)?;
                    self.g_algebra_ref(l.toks[1])?;
                    let n = Some(l.toks[1].text.to_string());
                    if kw.text == "from" {
                        from = n;
                    } else {
                        to = n;
                    }
                }
                "block" => {
                    let f = self.elem(l.arg(1, "row index")?)?;
                    let g = self.elem(l.arg(2, "column index")?)?;
                    if blocks.insert((f, g), self.matrix(l, 3)?).is_some() {
                        return Err(err(l.toks[1], "block listed twice"));
                    }
                }
                other => return Err(err(kw, format!("unknown morphism statement `{other}`"))),
            }
        }
        let source = from.ok_or_else(|| err(open, "morphism needs `from`"))?;
        let target = to.ok_or_else(|| err(open, "morphism needs `to`"))?;
        let value = GAlgebraMorphism::new(self.doc.field, blocks);
        self.doc.morphisms.insert(name, Between { source, target, value });
        Ok(())
    }

    fn expect(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        let open = line.toks[0];
        let nt = line.arg(1, "galgebra name")?;
        line.exact(2)?;
        self.g_algebra_ref(nt)?;
        let name = nt.text.to_string();
        self.fresh(nt, self.doc.expects.contains_key(&name))?;
        let body = self.body(open)?;
        let mut e = Expect::default();
        for l in &body {
            let kw = l.toks[0];
            match kw.text {
                "dims" => {
                    l.exact(4)?;
                    let k = (self.elem(l.toks[1])?, self.elem(l.toks[2])?);
                    let d = self.index(l.toks[3])?;
                    e.dims.insert(k, d);
                }
                "obstruction" if l.toks.get(1).map(|t| t.text) == Some("none") => {
                    l.exact(2)?;
                    e.obstructions.get_or_insert_with(Vec::new);
                }
                "obstruction" => {
                    l.exact(5)?;
                    let src = (self.elem(l.toks[1])?, self.elem(l.toks[2])?);
                    let tgt = (self.elem(l.toks[3])?, self.elem(l.toks[4])?);
                    e.obstructions.get_or_insert_with(Vec::new).push((src, tgt));
                }
                other => return Err(err(kw, format!("unknown expect statement `{other}`"))),
            }
        }
        self.doc.expects.insert(name, e);
        Ok(())
    }
}

/// Parses a document. `field` supplies the field when the document has no
/// `field` line; when given, a conflicting `field` line is an error.
pub fn parse(text: &str, field: Option<FieldSpec>) -> Result<Document, ParseError> {
    parse_into(text, field, None)
}

/// Parses `text` on top of `base`, so that later files may refer to objects of earlier ones.
pub fn parse_into(text: &str, field: Option<FieldSpec>, base: Option<Document>) -> Result<Document, ParseError> {
    let field_fixed = field.is_some() || base.is_some();
    let doc = base.unwrap_or_else(|| Document::new(field.unwrap_or(FieldSpec::Rationals), GradingGroup::Integers));
    let doc = match field {
        Some(f) if f != doc.field => {
            return Err(ParseError { line: 1, column: 1, message: format!("field {f} conflicts with {}", doc.field) })
        }
        _ => doc,
    };
    let mut p = Parser { lines: lex(text), pos: 0, doc, field_fixed };
    p.run()?;
    Ok(p.doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "twistalg 1\nfield q\ngroup integers\n\nalgebra A\n  window 0..2\n  degree 0 1\n  degree 1 x\n  degree 2 x^2\n  entry 0 0 0 0 0 1\n  entry 0 1 0 0 0 1\n  entry 0 2 0 0 0 1\n  entry 1 0 0 0 0 1\n  entry 1 1 0 0 0 1\n  entry 2 0 0 0 0 1\n  unit 1\nend\n";

    #[test]
    fn small_document_roundtrips() {
        let d = parse(SMALL, None).unwrap();
        assert_eq!(d.algebras["A"].dim(Elem(2)), Some(1));
        assert_eq!(print(&d), SMALL);
    }

    #[test]
    fn comments_and_indentation_are_ignored() {
        let text = SMALL.replace("  window 0..2", "# nothing here\n      window   0..2   # the window").replace("\nend\n", "\n\nend\n");
        let d = parse(&text, None).unwrap();
        assert_eq!(print(&d), SMALL);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let e = parse("twistalg 1\nfield q\nalgebra A\n  window 0..x\nend\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (4, 10));
        let e = parse("twistalg 1\nfrobnicate\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = parse("twistalg 2\n", None).unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse(&SMALL.replace("entry 1 1 0 0 0 1", "entry 1 1 0 0 0 1.5"), None).unwrap_err();
        assert_eq!((e.line, e.column), (14, 19));
        let e = parse(&SMALL.replace("\nend\n", "\n"), None).unwrap_err();
        assert_eq!(e.line, 5, "{e}");
    }

    #[test]
    fn scalars_are_normalized() {
        let text = SMALL.replace("field q", "field fp:5").replace("unit 1", "unit 6");
        let d = parse(&text, None).unwrap();
        assert!(print(&d).contains("  unit 1\n"));
    }

    #[test]
    fn field_flag_conflicts() {
        assert!(parse(SMALL, Some(FieldSpec::Prime(3))).is_err());
        assert!(parse(SMALL, Some(FieldSpec::Rationals)).is_ok());
    }
}
