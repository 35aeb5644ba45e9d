//! Line-oriented manifold description language.
//!
//! ```text
//! manifold hyperbolic
//! coords x y z
//! param c
//! assume z > 0
//! metric:
//!   [x,x] = 1/z^2
//!   [y,y] = 1/z^2
//!   [z,z] = 1/z^2
//! vector V = -z d/dz
//! form eta = -1/z dz
//! function f = -ln(z)
//! tensor E:
//!   [x,y] = 1
//! frame F = E1, E2, E3
//! immersion into ambient.man:
//!   X = cos(u)
//! ```
//!
//! `metric: diag(a, b, ...)` and `metric: induced` are one-line forms; the
//! latter takes the metric from the immersion. Component indices are
//! coordinate names or 1-based positions.

use std::collections::BTreeSet;
use std::fmt;

use soliton_core::symbolic::{parse_expression, DomainConstraint, Expr, ParseError, Relation, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagKind {
    Syntax,
    UnknownName,
    DimensionMismatch,
    Duplicate,
    Asymmetric,
}

impl fmt::Display for DiagKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiagKind::Syntax => "syntax error",
            DiagKind::UnknownName => "unknown name",
            DiagKind::DimensionMismatch => "dimension mismatch",
            DiagKind::Duplicate => "duplicate declaration",
            DiagKind::Asymmetric => "asymmetric component",
        })
    }
}

/// Positioned parse diagnostic; line and column are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind}: {msg}")]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub kind: DiagKind,
    pub msg: String,
}

fn diag(line: usize, col: usize, kind: DiagKind, msg: impl Into<String>) -> Diagnostic {
    Diagnostic {
        line,
        col,
        kind,
        msg: msg.into(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MetricDecl {
    Components(Vec<Vec<Expr>>),
    Induced,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImmersionDecl {
    pub target: String,
    pub line: usize,
    /// `(target coordinate, component, line)` in declaration order.
    pub map: Vec<(String, Expr, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Named<T> {
    pub name: String,
    pub value: T,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub name: String,
    pub coords: Vec<Symbol>,
    pub params: Vec<Symbol>,
    pub assumptions: Vec<DomainConstraint>,
    pub metric: MetricDecl,
    pub vectors: Vec<Named<Vec<Expr>>>,
    pub forms: Vec<Named<Vec<Expr>>>,
    pub functions: Vec<Named<Expr>>,
    pub tensors: Vec<Named<Vec<Vec<Expr>>>>,
    pub frames: Vec<Named<Vec<String>>>,
    pub immersion: Option<ImmersionDecl>,
}

impl Document {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        self.coords.iter().chain(&self.params).cloned().collect()
    }

    pub fn vector(&self, name: &str) -> Option<&Vec<Expr>> {
        self.vectors.iter().find(|v| v.name == name).map(|v| &v.value)
    }

    pub fn form(&self, name: &str) -> Option<&Vec<Expr>> {
        self.forms.iter().find(|v| v.name == name).map(|v| &v.value)
    }

    pub fn function(&self, name: &str) -> Option<&Expr> {
        self.functions.iter().find(|v| v.name == name).map(|v| &v.value)
    }

    pub fn tensor(&self, name: &str) -> Option<&Vec<Vec<Expr>>> {
        self.tensors.iter().find(|v| v.name == name).map(|v| &v.value)
    }

    pub fn frame(&self, name: &str) -> Option<&Vec<String>> {
        self.frames.iter().find(|v| v.name == name).map(|v| &v.value)
    }
}

// Placeholder prefix for basis tokens; user identifiers may not contain `__`.
const BASIS: &str = "basis__";

#[derive(Clone, Copy, PartialEq)]
enum Block {
    None,
    Metric,
    Tensor,
    Immersion,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
    indented: bool,
}

/// Column (1-based, in chars) of byte offset `at` within `line`.
fn col_of(line: &str, at: usize) -> usize {
    line[..at.min(line.len())].chars().count() + 1
}

/// Byte offset of `part` inside `line`; `part` must be a subslice.
fn offset(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Split at top-level commas, keeping subslices.
fn split_commas(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

struct Parser<'a> {
    lines: Vec<Line<'a>>,
    name: Option<String>,
    coords: Vec<Symbol>,
    params: Vec<Symbol>,
    assumptions: Vec<DomainConstraint>,
    metric: Option<(MetricDecl, usize)>,
    metric_set: Vec<Vec<Option<(Expr, usize)>>>,
    vectors: Vec<Named<Vec<Expr>>>,
    forms: Vec<Named<Vec<Expr>>>,
    functions: Vec<Named<Expr>>,
    tensors: Vec<Named<Vec<Vec<Expr>>>>,
    tensor_set: Vec<Vec<Option<(Expr, usize)>>>,
    frames: Vec<(Named<Vec<String>>, Vec<usize>)>,
    immersion: Option<ImmersionDecl>,
    names: BTreeSet<String>,
}

/// Parse and validate a document.
pub fn parse_document(text: &str) -> Result<Document, Diagnostic> {
    let lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            Line {
                no: i + 1,
                text: body.trim_end(),
                indented: raw.starts_with([' ', '\t']),
            }
        })
        .collect();
    let mut p = Parser {
        lines,
        name: None,
        coords: Vec::new(),
        params: Vec::new(),
        assumptions: Vec::new(),
        metric: None,
        metric_set: Vec::new(),
        vectors: Vec::new(),
        forms: Vec::new(),
        functions: Vec::new(),
        tensors: Vec::new(),
        tensor_set: Vec::new(),
        frames: Vec::new(),
        immersion: None,
        names: BTreeSet::new(),
    };
    p.run()
}

impl<'a> Parser<'a> {
    fn run(&mut self) -> Result<Document, Diagnostic> {
        let mut block = Block::None;
        let lines = std::mem::take(&mut self.lines);
        for l in &lines {
            if l.text.trim().is_empty() {
                continue;
            }
            if l.indented {
                match block {
                    Block::None => return Err(diag(l.no, 1, DiagKind::Syntax, "indented line outside a block")),
                    Block::Metric => self.component_line(l, true)?,
                    Block::Tensor => self.component_line(l, false)?,
                    Block::Immersion => self.immersion_line(l)?,
                }
                continue;
            }
            if block == Block::Tensor {
                self.close_tensor();
            }
            block = self.statement(l)?;
        }
        if block == Block::Tensor {
            self.close_tensor();
        }
        self.finish(&lines)
    }

    fn symbols(&self) -> Vec<Symbol> {
        self.coords.iter().chain(&self.params).cloned().collect()
    }

    fn need_coords(&self, l: &Line) -> Result<(), Diagnostic> {
        if self.coords.is_empty() {
            Err(diag(l.no, 1, DiagKind::Syntax, "coords must be declared first"))
        } else {
            Ok(())
        }
    }

    fn expr(&self, l: &Line, part: &str, allowed: &[Symbol]) -> Result<Expr, Diagnostic> {
        let base = offset(l.text, part);
        if part.trim().is_empty() {
            return Err(diag(l.no, col_of(l.text, base), DiagKind::Syntax, "missing expression"));
        }
        parse_expression(part, allowed).map_err(|e| parse_diag(l, base, &e, |p| p))
    }

    fn declare(&mut self, l: &Line, name: &str, at: usize) -> Result<(), Diagnostic> {
        if !is_ident(name) || name.contains("__") {
            return Err(diag(l.no, col_of(l.text, at), DiagKind::Syntax, format!("invalid name '{name}'")));
        }
        if !self.names.insert(name.to_string()) {
            return Err(diag(l.no, col_of(l.text, at), DiagKind::Duplicate, format!("'{name}' is already declared")));
        }
        Ok(())
    }

    fn statement(&mut self, l: &Line<'a>) -> Result<Block, Diagnostic> {
        let text = l.text;
        let kw_end = text.find(|c: char| c.is_whitespace() || c == ':').unwrap_or(text.len());
        let kw = &text[..kw_end];
        let rest = &text[kw_end..];
        match kw {
            "manifold" => {
                let name = rest.trim();
                if self.name.is_some() {
                    return Err(diag(l.no, 1, DiagKind::Duplicate, "second manifold header"));
                }
                if !is_ident(name) {
                    return Err(diag(l.no, col_of(text, kw_end) + 1, DiagKind::Syntax, "expected a manifold name"));
                }
                self.name = Some(name.to_string());
                Ok(Block::None)
            }
            "coords" | "param" => {
                if kw == "coords" && !self.coords.is_empty() {
                    return Err(diag(l.no, 1, DiagKind::Duplicate, "coords declared twice"));
                }
                if kw == "param" && self.coords.is_empty() {
                    return Err(diag(l.no, 1, DiagKind::Syntax, "coords must be declared before param"));
                }
                if kw == "coords" && (!self.params.is_empty() || self.metric.is_some()) {
                    return Err(diag(l.no, 1, DiagKind::Syntax, "coords must come first"));
                }
                for tok in rest.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
                    let at = offset(text, tok);
                    self.declare(l, tok, at)?;
                    if matches!(tok, "pi" | "e") {
                        return Err(diag(l.no, col_of(text, at), DiagKind::Syntax, format!("'{tok}' is reserved")));
                    }
                    if kw == "coords" {
                        self.coords.push(Symbol::new(tok));
                    } else {
                        self.params.push(Symbol::new(tok));
                    }
                }
                if kw == "coords" && self.coords.len() < 2 {
                    return Err(diag(l.no, 1, DiagKind::DimensionMismatch, "at least two coordinates are required"));
                }
                Ok(Block::None)
            }
            "assume" => {
                self.need_coords(l)?;
                let body = rest.trim_start();
                let (op, rel) = [("!=", Relation::NotEqual), (">", Relation::Greater), ("<", Relation::Less)]
                    .into_iter()
                    .find(|(op, _)| body.contains(op))
                    .ok_or_else(|| diag(l.no, col_of(text, kw_end), DiagKind::Syntax, "expected SYMBOL (>|<|!=) BOUND"))?;
                let at = body.find(op).unwrap_or(0);
                let lhs = body[..at].trim();
                let sym = Symbol::new(lhs);
                if !self.symbols().contains(&sym) {
                    return Err(diag(
                        l.no,
                        col_of(text, offset(text, body)),
                        DiagKind::UnknownName,
                        format!("'{lhs}' is not a declared coordinate or parameter"),
                    ));
                }
                let bound = self.expr(l, &body[at + op.len()..], &self.symbols())?;
                self.assumptions.push(DomainConstraint::new(sym, rel, bound));
                Ok(Block::None)
            }
            "metric" => {
                self.need_coords(l)?;
                if self.metric.is_some() {
                    return Err(diag(l.no, 1, DiagKind::Duplicate, "second metric block"));
                }
                let body = rest.trim_start();
                let Some(body) = body.strip_prefix(':') else {
                    return Err(diag(l.no, col_of(text, kw_end), DiagKind::Syntax, "expected ':' after metric"));
                };
                let n = self.coords.len();
                let inline = body.trim();
                if inline.is_empty() {
                    self.metric = Some((MetricDecl::Components(Vec::new()), l.no));
                    self.metric_set = vec![vec![None; n]; n];
                    return Ok(Block::Metric);
                }
                if inline == "induced" {
                    self.metric = Some((MetricDecl::Induced, l.no));
                    return Ok(Block::None);
                }
                let Some(args) = inline.strip_prefix("diag").map(str::trim_start).and_then(|s| s.strip_prefix('(')).and_then(|s| s.strip_suffix(')')) else {
                    return Err(diag(
                        l.no,
                        col_of(text, offset(text, inline)),
                        DiagKind::Syntax,
                        "expected 'diag(...)', 'induced', or a component block",
                    ));
                };
                let parts = split_commas(args);
                if parts.len() != n {
                    return Err(diag(
                        l.no,
                        col_of(text, offset(text, inline)),
                        DiagKind::DimensionMismatch,
                        format!("diag has {} entries for {n} coordinates", parts.len()),
                    ));
                }
                let syms = self.symbols();
                let mut g = vec![vec![Expr::zero(); n]; n];
                for (i, part) in parts.into_iter().enumerate() {
                    g[i][i] = self.expr(l, part, &syms)?;
                }
                self.metric = Some((MetricDecl::Components(g), l.no));
                Ok(Block::None)
            }
            "vector" | "form" | "function" => {
                self.need_coords(l)?;
                let (name, rhs, at) = assignment(l, rest)?;
                self.declare(l, name, at)?;
                let syms = self.symbols();
                match kw {
                    "function" => {
                        let value = self.expr(l, rhs, &syms)?;
                        self.functions.push(Named { name: name.into(), value, line: l.no });
                    }
                    _ => {
                        let value = self.combination(l, rhs, kw == "vector")?;
                        let item = Named { name: name.into(), value, line: l.no };
                        if kw == "vector" {
                            self.vectors.push(item);
                        } else {
                            self.forms.push(item);
                        }
                    }
                }
                Ok(Block::None)
            }
            "tensor" => {
                self.need_coords(l)?;
                let body = rest.trim();
                let Some(name) = body.strip_suffix(':').map(str::trim) else {
                    return Err(diag(l.no, col_of(text, kw_end), DiagKind::Syntax, "expected 'tensor NAME:'"));
                };
                self.declare(l, name, offset(text, name))?;
                let n = self.coords.len();
                self.tensors.push(Named { name: name.into(), value: Vec::new(), line: l.no });
                self.tensor_set = vec![vec![None; n]; n];
                Ok(Block::Tensor)
            }
            "frame" => {
                self.need_coords(l)?;
                let (name, rhs, at) = assignment(l, rest)?;
                self.declare(l, name, at)?;
                let mut members = Vec::new();
                let mut cols = Vec::new();
                for part in split_commas(rhs) {
                    let m = part.trim();
                    if !is_ident(m) {
                        return Err(diag(l.no, col_of(text, offset(text, part)), DiagKind::Syntax, "expected a vector name"));
                    }
                    cols.push(col_of(text, offset(text, m)));
                    members.push(m.to_string());
                }
                self.frames.push((Named { name: name.into(), value: members, line: l.no }, cols));
                Ok(Block::None)
            }
            "immersion" => {
                self.need_coords(l)?;
                if self.immersion.is_some() {
                    return Err(diag(l.no, 1, DiagKind::Duplicate, "second immersion block"));
                }
                let body = rest.trim();
                let Some(target) = body.strip_prefix("into").and_then(|s| s.trim().strip_suffix(':')).map(str::trim) else {
                    return Err(diag(l.no, col_of(text, kw_end), DiagKind::Syntax, "expected 'immersion into FILE:'"));
                };
                if target.is_empty() {
                    return Err(diag(l.no, col_of(text, kw_end), DiagKind::Syntax, "missing target file"));
                }
                self.immersion = Some(ImmersionDecl {
                    target: target.to_string(),
                    line: l.no,
                    map: Vec::new(),
                });
                Ok(Block::Immersion)
            }
            _ => Err(diag(l.no, 1, DiagKind::Syntax, format!("unknown statement '{kw}'"))),
        }
    }

    /// `[a,b] = expr` inside a metric or tensor block.
    fn component_line(&mut self, l: &Line, metric: bool) -> Result<(), Diagnostic> {
        let text = l.text;
        let body = text.trim_start();
        let start = offset(text, body);
        let (Some(rest), Some(close)) = (body.strip_prefix('['), body.find(']')) else {
            return Err(diag(l.no, col_of(text, start), DiagKind::Syntax, "expected '[i,j] = expr'"));
        };
        let idx = &rest[..close - 1];
        let parts = split_commas(idx);
        if parts.len() != 2 {
            return Err(diag(l.no, col_of(text, start), DiagKind::DimensionMismatch, "a component needs exactly two indices"));
        }
        let mut ij = [0usize; 2];
        for (k, part) in parts.iter().enumerate() {
            let name = part.trim();
            let n = self.coords.len();
            ij[k] = match name.parse::<usize>() {
                Ok(i) if (1..=n).contains(&i) => i - 1,
                Ok(i) => {
                    return Err(diag(
                        l.no,
                        col_of(text, offset(text, part)),
                        DiagKind::DimensionMismatch,
                        format!("index {i} out of range 1..{n}"),
                    ))
                }
                Err(_) => self.coords.iter().position(|s| s.name() == name).ok_or_else(|| {
                    diag(l.no, col_of(text, offset(text, part)), DiagKind::UnknownName, format!("'{name}' is not a coordinate"))
                })?,
            };
        }
        let after = body[close + 1..].trim_start();
        let Some(rhs) = after.strip_prefix('=') else {
            return Err(diag(l.no, col_of(text, offset(text, after)), DiagKind::Syntax, "expected '='"));
        };
        let value = self.expr(l, rhs, &self.symbols())?;
        let set = if metric { &mut self.metric_set } else { &mut self.tensor_set };
        let [i, j] = ij;
        let what = if metric { "metric" } else { "tensor" };
        if let Some((_, line)) = &set[i][j] {
            return Err(diag(l.no, col_of(text, start), DiagKind::Duplicate, format!("{what} component [{},{}] already set on line {line}", i + 1, j + 1)));
        }
        if let Some((other, line)) = &set[j][i] {
            if other != &value {
                return Err(diag(
                    l.no,
                    col_of(text, start),
                    DiagKind::Asymmetric,
                    format!("{what}[{},{}] differs from [{},{}] on line {line}", i + 1, j + 1, j + 1, i + 1),
                ));
            }
        }
        set[i][j] = Some((value, l.no));
        Ok(())
    }

    fn close_tensor(&mut self) {
        let set = std::mem::take(&mut self.tensor_set);
        if let Some(t) = self.tensors.last_mut() {
            t.value = symmetric_fill(&set);
        }
    }

    fn immersion_line(&mut self, l: &Line) -> Result<(), Diagnostic> {
        let text = l.text;
        let body = text.trim_start();
        let Some(eq) = body.find('=') else {
            return Err(diag(l.no, col_of(text, offset(text, body)), DiagKind::Syntax, "expected 'TARGET_COORD = expr'"));
        };
        let lhs = body[..eq].trim();
        if !is_ident(lhs) {
            return Err(diag(l.no, col_of(text, offset(text, body)), DiagKind::Syntax, "expected a target coordinate name"));
        }
        let value = self.expr(l, &body[eq + 1..], &self.symbols())?;
        let imm = self.immersion.as_mut().expect("immersion block open");
        if imm.map.iter().any(|(n, _, _)| n == lhs) {
            return Err(diag(l.no, col_of(text, offset(text, body)), DiagKind::Duplicate, format!("component '{lhs}' assigned twice")));
        }
        imm.map.push((lhs.to_string(), value, l.no));
        Ok(())
    }

    /// Linear combination of `d/dx` (vectors) or `dx` (forms) tokens.
    fn combination(&self, l: &Line, rhs: &str, vector: bool) -> Result<Vec<Expr>, Diagnostic> {
        let base = offset(l.text, rhs);
        let (rewritten, map) = rewrite_basis(rhs, &self.coords, vector);
        let n = self.coords.len();
        let placeholders: Vec<Symbol> = (0..n).map(|k| Symbol::new(&format!("{BASIS}{k}"))).collect();
        let mut allowed = self.symbols();
        allowed.extend(placeholders.iter().cloned());
        if rhs.trim().is_empty() {
            return Err(diag(l.no, col_of(l.text, base), DiagKind::Syntax, "missing expression"));
        }
        let e = parse_expression(&rewritten, &allowed).map_err(|err| {
            parse_diag(l, base, &err, |p| map.get(p).copied().unwrap_or(rhs.len()))
        })?;
        let comps: Vec<Expr> = placeholders.iter().map(|p| e.diff(p)).collect();
        let mut rebuilt = Expr::zero();
        for (c, p) in comps.iter().zip(&placeholders) {
            rebuilt = &rebuilt + &(c * &Expr::symbol(p));
        }
        let linear = comps.iter().all(|c| placeholders.iter().all(|p| !c.depends_on(p))) && (&e - &rebuilt).is_zero();
        if !linear {
            let what = if vector { "d/dx" } else { "dx" };
            return Err(diag(
                l.no,
                col_of(l.text, base),
                DiagKind::Syntax,
                format!("expected a linear combination of {what} tokens"),
            ));
        }
        Ok(comps)
    }

    fn finish(&mut self, lines: &[Line]) -> Result<Document, Diagnostic> {
        let last = lines.last().map_or(1, |l| l.no);
        let name = self.name.clone().ok_or_else(|| diag(1, 1, DiagKind::Syntax, "missing 'manifold NAME' header"))?;
        if self.coords.is_empty() {
            return Err(diag(last, 1, DiagKind::Syntax, "missing coords"));
        }
        let (metric, mline) = self.metric.clone().ok_or_else(|| diag(last, 1, DiagKind::Syntax, "missing metric block"))?;
        let metric = match metric {
            MetricDecl::Components(g) if !g.is_empty() => MetricDecl::Components(g),
            MetricDecl::Components(_) if self.metric_set.iter().flatten().all(Option::is_none) => MetricDecl::Components(Vec::new()),
            MetricDecl::Components(_) => MetricDecl::Components(symmetric_fill(&self.metric_set)),
            MetricDecl::Induced => MetricDecl::Induced,
        };
        match &metric {
            MetricDecl::Components(g) if g.is_empty() => {
                return Err(diag(mline, 1, DiagKind::DimensionMismatch, "metric block has no components"));
            }
            MetricDecl::Induced if self.immersion.is_none() => {
                return Err(diag(mline, 1, DiagKind::Syntax, "'metric: induced' requires an immersion block"));
            }
            _ => {}
        }
        if let Some(imm) = &self.immersion {
            if imm.map.is_empty() {
                return Err(diag(imm.line, 1, DiagKind::DimensionMismatch, "immersion block has no components"));
            }
        }
        let mut frames = Vec::new();
        for (f, cols) in &self.frames {
            if f.value.len() != self.coords.len() {
                return Err(diag(
                    f.line,
                    1,
                    DiagKind::DimensionMismatch,
                    format!("frame has {} members for {} coordinates", f.value.len(), self.coords.len()),
                ));
            }
            for (m, col) in f.value.iter().zip(cols) {
                if !self.vectors.iter().any(|v| &v.name == m) {
                    return Err(diag(f.line, *col, DiagKind::UnknownName, format!("'{m}' is not a declared vector")));
                }
            }
            frames.push(f.clone());
        }
        Ok(Document {
            name,
            coords: self.coords.clone(),
            params: self.params.clone(),
            assumptions: self.assumptions.clone(),
            metric,
            vectors: self.vectors.clone(),
            forms: self.forms.clone(),
            functions: self.functions.clone(),
            tensors: self.tensors.clone(),
            frames,
            immersion: self.immersion.clone(),
        })
    }
}

/// `NAME = rhs`; returns the name, the right-hand side and the name offset.
fn assignment<'a>(l: &Line<'a>, rest: &'a str) -> Result<(&'a str, &'a str, usize), Diagnostic> {
    let Some(eq) = rest.find('=') else {
        return Err(diag(l.no, col_of(l.text, offset(l.text, rest)), DiagKind::Syntax, "expected 'NAME = ...'"));
    };
    let name = rest[..eq].trim();
    let at = if name.is_empty() { offset(l.text, rest) } else { offset(l.text, name) };
    Ok((name, &rest[eq + 1..], at))
}

fn symmetric_fill(set: &[Vec<Option<(Expr, usize)>>]) -> Vec<Vec<Expr>> {
    let n = set.len();
    let mut g = vec![vec![Expr::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if let Some((e, _)) = set[i][j].as_ref().or(set[j][i].as_ref()) {
                g[i][j] = e.clone();
            }
        }
    }
    g
}

fn parse_diag(l: &Line, base: usize, e: &ParseError, remap: impl Fn(usize) -> usize) -> Diagnostic {
    let (pos, kind, msg) = match e {
        ParseError::Syntax { pos, msg } => (*pos, DiagKind::Syntax, msg.clone()),
        ParseError::UnknownIdentifier { pos, name } => (*pos, DiagKind::UnknownName, format!("unknown identifier '{name}'")),
        ParseError::UnknownFunction { pos, name } => (*pos, DiagKind::UnknownName, format!("unknown function '{name}'")),
    };
    diag(l.no, col_of(l.text, base + remap(pos)), kind, msg)
}

/// Replace basis tokens by placeholder symbols, inserting `*` where a token
/// follows an operand. Returns the rewritten text and, for every byte of it,
/// the originating byte offset in `src`.
fn rewrite_basis(src: &str, coords: &[Symbol], vector: bool) -> (String, Vec<usize>) {
    let bytes = src.as_bytes();
    let mut out = String::new();
    let mut map = Vec::new();
    let mut i = 0;
    let push = |out: &mut String, map: &mut Vec<usize>, s: &str, at: usize| {
        out.push_str(s);
        map.extend(std::iter::repeat_n(at, s.len()));
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let ident = &src[start..i];
            let mut token = None;
            if vector && ident == "d" && src[i..].starts_with("/d") {
                let s2 = i + 2;
                let mut e2 = s2;
                while e2 < bytes.len() && (bytes[e2].is_ascii_alphanumeric() || bytes[e2] == b'_') {
                    e2 += 1;
                }
                if let Some(k) = coords.iter().position(|s| s.name() == &src[s2..e2]) {
                    token = Some(k);
                    i = e2;
                }
            } else if !vector {
                if let Some(k) = ident.strip_prefix('d').and_then(|rest| coords.iter().position(|s| s.name() == rest)) {
                    if !coords.iter().any(|s| s.name() == ident) {
                        token = Some(k);
                    }
                }
            }
            match token {
                Some(k) => {
                    let prev = out.trim_end().chars().last();
                    if prev.is_some_and(|p| p.is_ascii_alphanumeric() || p == '_' || p == ')' || p == '.') {
                        push(&mut out, &mut map, "*", start);
                    }
                    push(&mut out, &mut map, &format!("{BASIS}{k}"), start);
                }
                None => push(&mut out, &mut map, ident, start),
            }
        } else {
            let len = src[i..].chars().next().map_or(1, char::len_utf8);
            push(&mut out, &mut map, &src[i..i + len], i);
            i += len;
        }
    }
    map.push(src.len());
    (out, map)
}

fn fmt_components(f: &mut fmt::Formatter<'_>, m: &[Vec<Expr>], coords: &[Symbol]) -> fmt::Result {
    for i in 0..m.len() {
        for j in i..m.len() {
            if !m[i][j].is_zero() {
                writeln!(f, "  [{},{}] = {}", coords[i], coords[j], m[i][j])?;
            }
        }
    }
    Ok(())
}

fn fmt_combination(f: &mut fmt::Formatter<'_>, comps: &[Expr], coords: &[Symbol], vector: bool) -> fmt::Result {
    let terms: Vec<String> = comps
        .iter()
        .zip(coords)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, s)| {
            let basis = if vector { format!("d/d{s}") } else { format!("d{s}") };
            if c.is_one() {
                basis
            } else {
                format!("({c}) {basis}")
            }
        })
        .collect();
    if terms.is_empty() {
        f.write_str("0")
    } else {
        f.write_str(&terms.join(" + "))
    }
}

/// Canonical text; parsing it back yields an equal document.
impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "manifold {}", self.name)?;
        let join = |v: &[Symbol]| v.iter().map(|s| s.name().to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "coords {}", join(&self.coords))?;
        if !self.params.is_empty() {
            writeln!(f, "param {}", join(&self.params))?;
        }
        for a in &self.assumptions {
            writeln!(f, "assume {a}")?;
        }
        match &self.metric {
            MetricDecl::Induced => writeln!(f, "metric: induced")?,
            MetricDecl::Components(g) => {
                writeln!(f, "metric:")?;
                fmt_components(f, g, &self.coords)?;
            }
        }
        for v in &self.vectors {
            write!(f, "vector {} = ", v.name)?;
            fmt_combination(f, &v.value, &self.coords, true)?;
            writeln!(f)?;
        }
        for v in &self.forms {
            write!(f, "form {} = ", v.name)?;
            fmt_combination(f, &v.value, &self.coords, false)?;
            writeln!(f)?;
        }
        for v in &self.functions {
            writeln!(f, "function {} = {}", v.name, v.value)?;
        }
        for t in &self.tensors {
            writeln!(f, "tensor {}:", t.name)?;
            fmt_components(f, &t.value, &self.coords)?;
        }
        for fr in &self.frames {
            writeln!(f, "frame {} = {}", fr.name, fr.value.join(", "))?;
        }
        if let Some(imm) = &self.immersion {
            writeln!(f, "immersion into {}:", imm.target)?;
            for (name, e, _) in &imm.map {
                writeln!(f, "  {name} = {e}")?;
            }
        }
        Ok(())
    }
}
