//! Session files: a quiver, named representations and named formulas.
//!
//! Text form:
//!
//! ```text
//! # comment
//! quiver {
//!   vertex d, e
//!   edge f : d -> e
//! }
//! rep A {
//!   dim d = 2
//!   dim e = 1
//!   map f = [[1, 1/2]]
//! }
//! formula ker_f (x:d) := f(x) = 0
//! ```
//!
//! A file whose first non-blank character is `{` is read as JSON with the
//! same content (see [`JsonSession`]). Edges without a `map` line are sent
//! to the zero matrix.

use std::collections::BTreeMap;
use std::sync::Arc;

use repcat::formula::{parse_context, parse_formula_in, FormulaError, RegularFormula};
use repcat::{Matrix, Quiver, Rational, Representation, VertexId};
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("invalid session: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone)]
pub struct NamedFormula {
    pub name: String,
    pub context: Vec<(String, VertexId)>,
    pub body: String,
    pub formula: RegularFormula,
}

#[derive(Debug, Clone)]
pub struct Session {
    pub quiver: Arc<Quiver>,
    pub reps: Vec<(String, Arc<Representation>)>,
    pub formulas: Vec<NamedFormula>,
    /// Hex SHA-256 of the file contents.
    pub sha256: String,
}

impl Session {
    pub fn rep(&self, name: &str) -> Option<&Arc<Representation>> {
        self.reps.iter().find(|(n, _)| n == name).map(|(_, r)| r)
    }

    pub fn formula(&self, name: &str) -> Option<&NamedFormula> {
        self.formulas.iter().find(|f| f.name == name)
    }

    pub fn parse(text: &str) -> Result<Session, SessionError> {
        let mut s = if text.trim_start().starts_with('{') { parse_json(text)? } else { parse_text(text)? };
        s.sha256 = hex::encode(Sha256::digest(text.as_bytes()));
        Ok(s)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonSession {
    pub quiver: JsonQuiver,
    #[serde(default)]
    pub reps: Vec<JsonRep>,
    #[serde(default)]
    pub formulas: Vec<JsonFormula>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonQuiver {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<JsonEdge>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonEdge {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonRep {
    pub name: String,
    pub dims: BTreeMap<String, usize>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<Rational>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonFormula {
    pub name: String,
    pub context: String,
    pub body: String,
}

fn invalid(msg: impl Into<String>) -> SessionError {
    SessionError::Invalid(msg.into())
}

/// Collects the pieces of a session before building it.
#[derive(Default)]
struct Draft {
    quiver: Option<Arc<Quiver>>,
    reps: Vec<(String, Arc<Representation>)>,
    formulas: Vec<NamedFormula>,
}

impl Draft {
    fn quiver(&self) -> Result<&Arc<Quiver>, SessionError> {
        self.quiver.as_ref().ok_or_else(|| invalid("the quiver must be declared first"))
    }

    fn add_rep(
        &mut self,
        name: String,
        dims: Vec<(String, usize)>,
        maps: Vec<(String, Matrix)>,
    ) -> Result<(), SessionError> {
        let q = self.quiver()?.clone();
        if self.reps.iter().any(|(n, _)| *n == name) {
            return Err(invalid(format!("duplicate representation `{name}`")));
        }
        let mut dim_of: Vec<Option<usize>> = vec![None; q.vertex_count()];
        for (v, d) in dims {
            let id = q.vertex_id(&v).ok_or_else(|| invalid(format!("rep `{name}`: unknown vertex `{v}`")))?;
            if dim_of[id.0].replace(d).is_some() {
                return Err(invalid(format!("rep `{name}`: dimension of `{v}` given twice")));
            }
        }
        let dims: Vec<usize> = q
            .vertices()
            .map(|v| dim_of[v.0].ok_or_else(|| invalid(format!("rep `{name}`: no dimension for `{}`", q.vertex_name(v)))))
            .collect::<Result<_, _>>()?;
        let mut mats: Vec<Option<Matrix>> = vec![None; q.edge_count()];
        for (e, m) in maps {
            let id = q.edge_id(&e).ok_or_else(|| invalid(format!("rep `{name}`: unknown edge `{e}`")))?;
            let edge = q.edge(id);
            let shape = (dims[edge.target.0], dims[edge.source.0]);
            // `[]` stands for any matrix with no entries.
            let m = if m.entries().is_empty() && shape.0 * shape.1 == 0 { Matrix::zeros(shape.0, shape.1) } else { m };
            if mats[id.0].replace(m).is_some() {
                return Err(invalid(format!("rep `{name}`: matrix of `{e}` given twice")));
            }
        }
        let mats = q
            .edges()
            .iter()
            .zip(mats)
            .map(|(e, m)| m.unwrap_or_else(|| Matrix::zeros(dims[e.target.0], dims[e.source.0])))
            .collect();
        let rep = Representation::checked(q, dims, mats).map_err(|e| invalid(format!("rep `{name}`: {e}")))?;
        self.reps.push((name, Arc::new(rep)));
        Ok(())
    }

    /// `place` maps a byte offset in the context (`false`) or body (`true`)
    /// to a file line and column, when the file has lines.
    fn add_formula(
        &mut self,
        name: String,
        context: &str,
        body: &str,
        place: impl Fn(usize, bool) -> Option<(usize, usize)>,
    ) -> Result<(), SessionError> {
        let q = self.quiver()?.clone();
        if self.formulas.iter().any(|f| f.name == name) {
            return Err(invalid(format!("duplicate formula `{name}`")));
        }
        let located = |e: FormulaError, in_body: bool| match error_position(&e).and_then(|p| place(p, in_body)) {
            Some((line, col)) => SessionError::Syntax { line, col, message: strip_offset(&e.to_string()) },
            None => invalid(format!("formula `{name}`: {e}")),
        };
        let ctx = parse_context(context, &q).map_err(|e| located(e, false))?;
        let formula = parse_formula_in(body, &ctx, &q).map_err(|e| located(e, true))?;
        self.formulas.push(NamedFormula { name, context: ctx, body: body.trim().to_string(), formula });
        Ok(())
    }

    fn finish(self) -> Result<Session, SessionError> {
        let quiver = self.quiver.ok_or_else(|| invalid("no quiver declared"))?;
        Ok(Session { quiver, reps: self.reps, formulas: self.formulas, sha256: String::new() })
    }
}

fn error_position(e: &FormulaError) -> Option<usize> {
    match e {
        FormulaError::Syntax { position, .. }
        | FormulaError::UnknownSort { position, .. }
        | FormulaError::UnknownEdge { position, .. }
        | FormulaError::UnknownVariable { position, .. }
        | FormulaError::NonComposablePath { position, .. }
        | FormulaError::SortMismatchInEquation { position, .. } => Some(*position),
        _ => None,
    }
}

/// Drops the "at offset N" part of a formula error message.
fn strip_offset(msg: &str) -> String {
    if let Some(i) = msg.find(" (offset") {
        return msg[..i].to_string();
    }
    match msg.find(" at offset ") {
        Some(i) => {
            let tail = &msg[i + " at offset ".len()..];
            let rest = tail.trim_start_matches(|c: char| c.is_ascii_digit());
            format!("{}{}", &msg[..i], rest)
        }
        None => msg.to_string(),
    }
}

fn parse_json(text: &str) -> Result<Session, SessionError> {
    let js: JsonSession = serde_json::from_str(text).map_err(|e| SessionError::Syntax {
        line: e.line(),
        col: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_string(),
    })?;
    let mut q = Quiver::default();
    for v in &js.quiver.vertices {
        q.add_vertex(v.as_str()).map_err(|e| invalid(e.to_string()))?;
    }
    for e in &js.quiver.edges {
        q.add_edge(e.name.as_str(), e.source.as_str(), e.target.as_str()).map_err(|e| invalid(e.to_string()))?;
    }
    let mut d = Draft { quiver: Some(Arc::new(q)), ..Draft::default() };
    for r in js.reps {
        let mut maps = Vec::new();
        for (e, rows) in r.maps {
            let cols = rows.first().map_or(0, Vec::len);
            if rows.iter().any(|row| row.len() != cols) {
                return Err(invalid(format!("rep `{}`: rows of `{e}` have different lengths", r.name)));
            }
            maps.push((e, Matrix::from_rows(cols, rows).map_err(|e| invalid(e.to_string()))?));
        }
        d.add_rep(r.name, r.dims.into_iter().collect(), maps)?;
    }
    for f in js.formulas {
        d.add_formula(f.name, &f.context, &f.body, |_, _| None)?;
    }
    d.finish()
}

/// Byte offset to 1-based line and column.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, col)
}

struct TextParser<'a> {
    text: &'a str,
    /// Start offsets of the remaining lines.
    lines: Vec<(usize, &'a str)>,
    at: usize,
}

impl<'a> TextParser<'a> {
    fn new(text: &'a str) -> Self {
        let mut lines = Vec::new();
        let mut start = 0;
        for l in text.split_inclusive('\n') {
            lines.push((start, l.trim_end_matches(['\n', '\r'])));
            start += l.len();
        }
        TextParser { text, lines, at: 0 }
    }

    fn err(&self, offset: usize, message: impl Into<String>) -> SessionError {
        let (line, col) = line_col(self.text, offset);
        SessionError::Syntax { line, col, message: message.into() }
    }

    /// Next non-blank line with comments stripped, and its content offset.
    fn next_line(&mut self) -> Option<(usize, &'a str)> {
        while self.at < self.lines.len() {
            let (start, raw) = self.lines[self.at];
            self.at += 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim_start();
            let off = start + (content.len() - trimmed.len());
            let trimmed = trimmed.trim_end();
            if !trimmed.is_empty() {
                return Some((off, trimmed));
            }
        }
        None
    }

    fn block_lines(&mut self, open_at: usize) -> Result<Vec<(usize, &'a str)>, SessionError> {
        let mut out = Vec::new();
        loop {
            match self.next_line() {
                Some((_, "}")) => return Ok(out),
                Some(l) => out.push(l),
                None => return Err(self.err(open_at, "unclosed block")),
            }
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

fn parse_text(text: &str) -> Result<Session, SessionError> {
    let mut p = TextParser::new(text);
    let mut d = Draft::default();
    while let Some((off, line)) = p.next_line() {
        let (kw, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest_off = off + line.len() - rest.len();
        match kw {
            "quiver" => {
                if rest.trim() != "{" {
                    return Err(p.err(rest_off, "expected `{` after `quiver`"));
                }
                if d.quiver.is_some() {
                    return Err(p.err(off, "second quiver declaration"));
                }
                let mut q = Quiver::default();
                for (loff, l) in p.block_lines(off)? {
                    let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
                    let rest_off = loff + l.len() - rest.len();
                    match kw {
                        "vertex" => {
                            for name in rest.split(',') {
                                let name = name.trim();
                                if !is_ident(name) {
                                    return Err(p.err(rest_off, format!("invalid vertex name `{name}`")));
                                }
                                q.add_vertex(name).map_err(|e| p.err(loff, e.to_string()))?;
                            }
                        }
                        "edge" => {
                            let parsed = rest.split_once(':').and_then(|(n, st)| {
                                st.split_once("->").map(|(s, t)| (n.trim(), s.trim(), t.trim()))
                            });
                            let Some((n, s, t)) = parsed.filter(|(n, s, t)| is_ident(n) && is_ident(s) && is_ident(t))
                            else {
                                return Err(p.err(rest_off, "expected `edge NAME : SOURCE -> TARGET`"));
                            };
                            q.add_edge(n, s, t).map_err(|e| p.err(rest_off, e.to_string()))?;
                        }
                        _ => return Err(p.err(loff, format!("unexpected `{kw}` in quiver block"))),
                    }
                }
                d.quiver = Some(Arc::new(q));
            }
            "rep" => {
                let Some(name) = rest.trim().strip_suffix('{').map(str::trim).filter(|n| is_ident(n)) else {
                    return Err(p.err(rest_off, "expected `rep NAME {`"));
                };
                let name = name.to_string();
                if d.quiver.is_none() {
                    return Err(p.err(off, "the quiver must be declared first"));
                }
                let mut dims = Vec::new();
                let mut maps = Vec::new();
                let block = p.block_lines(off)?;
                for (loff, l) in block {
                    let (kw, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
                    let rest_off = loff + l.len() - rest.len();
                    let Some((target, value)) = rest.split_once('=') else {
                        return Err(p.err(rest_off, "expected `=`"));
                    };
                    let target = target.trim().to_string();
                    let value_off = rest_off + rest.find('=').unwrap_or(0) + 1;
                    match kw {
                        "dim" => {
                            let n = value.trim().parse::<usize>().map_err(|_| p.err(value_off, "expected a dimension"))?;
                            dims.push((target, n));
                        }
                        "map" => {
                            let m = parse_matrix(value).map_err(|(i, msg)| p.err(value_off + i, msg))?;
                            maps.push((target, m));
                        }
                        _ => return Err(p.err(loff, format!("unexpected `{kw}` in rep block"))),
                    }
                }
                d.add_rep(name, dims, maps).map_err(|e| match e {
                    SessionError::Invalid(m) => p.err(off, m),
                    other => other,
                })?;
            }
            "formula" => {
                let Some((head, body)) = rest.split_once(":=") else {
                    return Err(p.err(rest_off, "expected `formula NAME (CONTEXT) := BODY`"));
                };
                let head = head.trim();
                let Some((name, ctx)) = head.split_once('(').and_then(|(n, c)| c.strip_suffix(')').map(|c| (n.trim(), c)))
                else {
                    return Err(p.err(rest_off, "expected `NAME (CONTEXT)`"));
                };
                if !is_ident(name) {
                    return Err(p.err(rest_off, format!("invalid formula name `{name}`")));
                }
                let ctx_off = rest_off + (rest.len() - rest.trim_start().len()) + head.find('(').unwrap_or(0) + 1;
                let body_off = rest_off + rest.len() - body.len();
                let text = p.text;
                let at = |pos: usize, in_body: bool| Some(line_col(text, if in_body { body_off + pos } else { ctx_off + pos }));
                d.add_formula(name.to_string(), ctx, body, at).map_err(|e| match e {
                    SessionError::Invalid(m) => p.err(off, m),
                    other => other,
                })?;
            }
            _ => return Err(p.err(off, format!("unexpected `{kw}`"))),
        }
    }
    d.finish()
}

/// `[[1, 0], [1/2, -3]]`; `[]` is a matrix with no rows. Errors carry a
/// byte offset into `s`.
pub fn parse_matrix(s: &str) -> Result<Matrix, (usize, String)> {
    let bytes = s.as_bytes();
    let mut i = 0;
    let skip = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    let expect = |i: &mut usize, c: u8| -> Result<(), (usize, String)> {
        skip(i);
        if bytes.get(*i) == Some(&c) {
            *i += 1;
            Ok(())
        } else {
            Err((*i, format!("expected `{}`", c as char)))
        }
    };
    expect(&mut i, b'[')?;
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    skip(&mut i);
    if bytes.get(i) == Some(&b']') {
        i += 1;
    } else {
        loop {
            expect(&mut i, b'[')?;
            let mut row = Vec::new();
            skip(&mut i);
            if bytes.get(i) == Some(&b']') {
                i += 1;
            } else {
                loop {
                    skip(&mut i);
                    let start = i;
                    while i < bytes.len() && !matches!(bytes[i], b',' | b']') {
                        i += 1;
                    }
                    let lit = s[start..i].trim();
                    row.push(lit.parse::<Rational>().map_err(|_| (start, format!("invalid rational `{lit}`")))?);
                    skip(&mut i);
                    match bytes.get(i) {
                        Some(b',') => i += 1,
                        Some(b']') => {
                            i += 1;
                            break;
                        }
                        _ => return Err((i, "expected `,` or `]`".into())),
                    }
                }
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err((i, "rows have different lengths".into()));
                }
            }
            rows.push(row);
            skip(&mut i);
            match bytes.get(i) {
                Some(b',') => i += 1,
                Some(b']') => {
                    i += 1;
                    break;
                }
                _ => return Err((i, "expected `,` or `]`".into())),
            }
        }
    }
    skip(&mut i);
    if i != bytes.len() {
        return Err((i, "trailing characters after matrix".into()));
    }
    let cols = rows.first().map_or(0, Vec::len);
    Matrix::from_rows(cols, rows).map_err(|e| (0, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const NIL: &str = "\
# nilpotent loop
quiver {
  vertex d
  edge f : d -> d
}
rep N {
  dim d = 2
  map f = [[0, 1], [0, 0]]
}
rep Z {
  dim d = 2
}
formula ker_f (x:d) := f(x) = 0
formula im_f (x:d) := exists y:d . f(y) = x
";

    #[test]
    fn parses_text_sessions() {
        let s = Session::parse(NIL).unwrap();
        assert_eq!(s.quiver.vertex_count(), 1);
        assert_eq!(s.reps.len(), 2);
        assert!(s.rep("Z").unwrap().map(repcat::EdgeId(0)).is_zero());
        assert_eq!(s.formula("im_f").unwrap().context[0].0, "x");
        assert_eq!(s.sha256.len(), 64);
    }

    #[test]
    fn parses_json_sessions() {
        let json = r#"{
          "quiver": {"vertices": ["d"], "edges": [{"name": "f", "source": "d", "target": "d"}]},
          "reps": [{"name": "N", "dims": {"d": 2}, "maps": {"f": [[0, 1], [0, "0/3"]]}}],
          "formulas": [{"name": "ker_f", "context": "x:d", "body": "f(x) = 0"}]
        }"#;
        let s = Session::parse(json).unwrap();
        let t = Session::parse(NIL).unwrap();
        assert_eq!(s.rep("N"), t.rep("N"));
        assert_eq!(s.formula("ker_f").unwrap().formula, t.formula("ker_f").unwrap().formula);
    }

    #[test]
    fn reports_positions() {
        let bad = NIL.replace("f(x) = 0", "f(x) = = 0");
        match Session::parse(&bad).unwrap_err() {
            SessionError::Syntax { line, col, .. } => assert_eq!((line, col), (13, 31)),
            e => panic!("{e}"),
        }
        let bad = NIL.replace("[[0, 1], [0, 0]]", "[[0, 1], [0, x]]");
        match Session::parse(&bad).unwrap_err() {
            SessionError::Syntax { line, col, .. } => assert_eq!((line, col), (8, 24)),
            e => panic!("{e}"),
        }
        let bad = NIL.replace("[[0, 1], [0, 0]]", "[[0, 1]]");
        assert!(matches!(Session::parse(&bad).unwrap_err(), SessionError::Syntax { line: 6, .. }));
        let bad = NIL.replace("ker_f (x:d) := f(x)", "ker_f (x:d) := g(x)");
        assert!(matches!(Session::parse(&bad).unwrap_err(), SessionError::Syntax { line: 13, col: 24, .. }));
    }

    #[test]
    fn matrix_literals() {
        assert_eq!(parse_matrix("[[1, -1/2]]").unwrap(), Matrix::new(1, 2, vec![1.into(), Rational::new(-1, 2)]).unwrap());
        assert_eq!(parse_matrix("[]").unwrap(), Matrix::zeros(0, 0));
        assert_eq!(parse_matrix("[[], []]").unwrap(), Matrix::zeros(2, 0));
        assert!(parse_matrix("[[1], [1, 2]]").is_err());
        assert!(parse_matrix("[[1/0]]").is_err());
    }
}
