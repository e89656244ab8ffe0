//! Session files.
//!
//! ```text
//! # comment
//! base = F3                 Q or F<p>
//! layer rational x
//! layer pinsep u x + 1      u^p = x + 1
//! delta x = 1
//! bound = 4                 ansatz bound N
//! seed = 7
//! format = json             text or json
//! matrix A = [[x, 1], [0, x]]
//! f = t^2 - x               binding
//! ```
//!
//! Header lines (`base`, `layer`, `delta`) come before anything that uses
//! the tower. Bindings may refer to earlier bindings by name.

use std::fmt;
use std::sync::Arc;

use petit_core::expr::{self, Expr, ExprKind, Pos};
use petit_core::field::{BaseField, LayerDescription, TowerDescription};
use petit_core::{make_tower, Element, Error, FieldTower, OrePoly, OreRing, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Options {
    pub bound: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SessionFile {
    pub base: BaseField,
    pub layers: Vec<LayerDescription>,
    /// `(generator, image)` in file order.
    pub derivation: Vec<(String, String)>,
    pub options: Options,
    /// Row-major entries as expression strings.
    pub matrices: Vec<(String, Vec<Vec<String>>)>,
    pub bindings: Vec<(String, String)>,
}

impl Default for SessionFile {
    fn default() -> Self {
        SessionFile {
            base: BaseField::Rationals,
            layers: Vec::new(),
            derivation: Vec::new(),
            options: Options::default(),
            matrices: Vec::new(),
            bindings: Vec::new(),
        }
    }
}

const RESERVED: [&str; 7] = ["base", "layer", "delta", "bound", "seed", "format", "matrix"];

fn syntax(line: usize, col: usize, expected: &str) -> Error {
    Error::SyntaxError {
        line,
        col,
        expected: expected.into(),
    }
}

fn is_ident(s: &str) -> bool {
    let mut c = s.chars();
    matches!(c.next(), Some(ch) if ch.is_alphabetic() || ch == '_') && c.all(|ch| ch.is_alphanumeric() || ch == '_')
}

/// A line split into whitespace-separated words with their 1-based columns.
struct Line<'a> {
    no: usize,
    text: &'a str,
}

impl<'a> Line<'a> {
    /// Column of byte offset `off`.
    fn col(&self, off: usize) -> usize {
        self.text[..off].chars().count() + 1
    }

    /// Offset of the first non-space at or after `off`.
    fn skip_ws(&self, off: usize) -> usize {
        off + self.text[off..].len() - self.text[off..].trim_start().len()
    }

    /// Next word starting at `off`: `(word, end offset)`.
    fn word(&self, off: usize) -> Option<(&'a str, usize)> {
        let s = self.skip_ws(off);
        let rest = &self.text[s..];
        let len = rest.find(|c: char| c.is_whitespace() || c == '=').unwrap_or(rest.len());
        (len > 0).then(|| (&rest[..len], s + len))
    }

    /// Expect `=` after `off`; returns the offset after it.
    fn equals(&self, off: usize) -> Result<usize> {
        let s = self.skip_ws(off);
        if self.text[s..].starts_with('=') {
            Ok(s + 1)
        } else {
            Err(syntax(self.no, self.col(s), "'='"))
        }
    }

    /// Expression from `off` to the end of the line, syntax-checked.
    fn expr(&self, off: usize) -> Result<String> {
        let s = self.skip_ws(off);
        let src = self.text[s..].trim_end();
        if src.is_empty() {
            return Err(syntax(self.no, self.col(s), "an expression"));
        }
        expr::parse_at(
            src,
            Pos {
                line: self.no,
                col: self.col(s),
            },
        )?;
        Ok(src.to_string())
    }

    fn name(&self, off: usize, what: &str) -> Result<(&'a str, usize)> {
        match self.word(off) {
            Some((w, end)) if is_ident(w) => Ok((w, end)),
            _ => Err(syntax(self.no, self.col(self.skip_ws(off)), what)),
        }
    }
}

fn parse_base(line: &Line, off: usize) -> Result<BaseField> {
    let (w, end) = line
        .word(off)
        .ok_or_else(|| syntax(line.no, line.col(line.skip_ws(off)), "Q or F<p>"))?;
    if line.skip_ws(end) != line.text.len() {
        return Err(syntax(line.no, line.col(line.skip_ws(end)), "end of line"));
    }
    if w == "Q" {
        return Ok(BaseField::Rationals);
    }
    match w.strip_prefix('F').and_then(|p| p.parse::<u64>().ok()) {
        Some(p) => Ok(BaseField::Prime(p)),
        None => Err(syntax(line.no, line.col(line.skip_ws(off)), "Q or F<p>")),
    }
}

fn parse_number<T: std::str::FromStr>(line: &Line, off: usize) -> Result<T> {
    let s = line.skip_ws(off);
    line.text[s..]
        .trim_end()
        .parse()
        .map_err(|_| syntax(line.no, line.col(s), "a nonnegative integer"))
}

/// `[[e, e], [e, e]]`: rows of comma-separated expressions.
fn parse_matrix(line: &Line, off: usize) -> Result<Vec<Vec<String>>> {
    let text = line.text;
    let mut i = line.skip_ws(off);
    let expect = |i: usize, c: char, what: &str| -> Result<usize> {
        let j = line.skip_ws(i);
        if text[j..].starts_with(c) {
            Ok(j + 1)
        } else {
            Err(syntax(line.no, line.col(j), what))
        }
    };
    i = expect(i, '[', "'['")?;
    let mut rows = Vec::new();
    loop {
        i = expect(i, '[', "'['")?;
        let mut row = Vec::new();
        loop {
            let s = line.skip_ws(i);
            let len = text[s..].find([',', ']']).unwrap_or(text.len() - s);
            let src = text[s..s + len].trim_end();
            if src.is_empty() {
                return Err(syntax(line.no, line.col(s), "a matrix entry"));
            }
            expr::parse_at(
                src,
                Pos {
                    line: line.no,
                    col: line.col(s),
                },
            )?;
            row.push(src.to_string());
            i = s + len;
            if text[i..].starts_with(',') {
                i += 1;
            } else if text[i..].starts_with(']') {
                i += 1;
                break;
            } else {
                return Err(syntax(line.no, line.col(i), "',' or ']'"));
            }
        }
        rows.push(row);
        let j = line.skip_ws(i);
        if text[j..].starts_with(',') {
            i = j + 1;
        } else {
            i = expect(j, ']', "',' or ']'")?;
            break;
        }
    }
    let j = line.skip_ws(i);
    if j != text.len() {
        return Err(syntax(line.no, line.col(j), "end of line"));
    }
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::TypeError(format!("line {}: matrix must be square", line.no)));
    }
    Ok(rows)
}

/// Parse a session file; syntax errors carry line and column.
pub fn parse_session(text: &str) -> Result<SessionFile> {
    let mut s = SessionFile::default();
    let mut seen_base = false;
    let mut names: Vec<String> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let line = Line { no: i + 1, text: body };
        let Some((key, end)) = line.word(0) else {
            continue;
        };
        let key_col = line.col(line.skip_ws(0));
        match key {
            "base" => {
                if seen_base {
                    return Err(Error::TypeError(format!("line {}: base given twice", line.no)));
                }
                if !s.layers.is_empty() {
                    return Err(Error::TypeError(format!("line {}: base must precede the layers", line.no)));
                }
                s.base = parse_base(&line, line.equals(end)?)?;
                seen_base = true;
            }
            "layer" => {
                let kind_col = line.col(line.skip_ws(end));
                let (kind, end) = line.name(end, "'rational' or 'pinsep'")?;
                let (name, end) = line.name(end, "a generator name")?;
                if name == "t" || RESERVED.contains(&name) || names.iter().any(|n| n == name) {
                    return Err(Error::TypeError(format!("line {}: name '{name}' is reserved or repeated", line.no)));
                }
                match kind {
                    "rational" => {
                        if line.skip_ws(end) != body.len() {
                            return Err(syntax(line.no, line.col(line.skip_ws(end)), "end of line"));
                        }
                        s.layers.push(LayerDescription::Rational(name.into()));
                    }
                    "pinsep" => {
                        if s.base == BaseField::Rationals {
                            return Err(Error::TypeError(format!(
                                "line {}: purely inseparable layers need a prime base field",
                                line.no
                            )));
                        }
                        s.layers.push(LayerDescription::PInsep {
                            name: name.into(),
                            alpha: line.expr(end)?,
                        });
                    }
                    _ => return Err(syntax(line.no, kind_col, "'rational' or 'pinsep'")),
                }
                names.push(name.into());
            }
            "delta" => {
                let (name, end) = line.name(end, "a generator name")?;
                if !s.layers.iter().any(|l| l.name() == name) {
                    return Err(Error::TypeError(format!("line {}: derivation of unknown generator '{name}'", line.no)));
                }
                if s.derivation.iter().any(|(n, _)| n == name) {
                    return Err(Error::TypeError(format!("line {}: derivation of '{name}' given twice", line.no)));
                }
                s.derivation.push((name.into(), line.expr(line.equals(end)?)?));
            }
            "bound" => s.options.bound = Some(parse_number(&line, line.equals(end)?)?),
            "seed" => s.options.seed = Some(parse_number(&line, line.equals(end)?)?),
            "format" => {
                let off = line.equals(end)?;
                s.options.format = Some(match line.word(off) {
                    Some(("text", e)) if line.skip_ws(e) == body.len() => Format::Text,
                    Some(("json", e)) if line.skip_ws(e) == body.len() => Format::Json,
                    _ => return Err(syntax(line.no, line.col(line.skip_ws(off)), "'text' or 'json'")),
                });
            }
            "matrix" => {
                let (name, end) = line.name(end, "a matrix name")?;
                check_fresh(&line, name, &names)?;
                s.matrices.push((name.into(), parse_matrix(&line, line.equals(end)?)?));
                names.push(name.into());
            }
            name if is_ident(name) => {
                check_fresh(&line, name, &names)?;
                s.bindings.push((name.into(), line.expr(line.equals(end)?)?));
                names.push(name.into());
            }
            _ => return Err(syntax(line.no, key_col, "a header key or a binding name")),
        }
    }
    Ok(s)
}

fn check_fresh(line: &Line, name: &str, names: &[String]) -> Result<()> {
    if name == "t" || RESERVED.contains(&name) || names.iter().any(|n| n == name) {
        return Err(Error::TypeError(format!("line {}: name '{name}' is reserved or repeated", line.no)));
    }
    Ok(())
}

impl fmt::Display for SessionFile {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            BaseField::Rationals => writeln!(out, "base = Q")?,
            BaseField::Prime(p) => writeln!(out, "base = F{p}")?,
        }
        for l in &self.layers {
            match l {
                LayerDescription::Rational(n) => writeln!(out, "layer rational {n}")?,
                LayerDescription::PInsep { name, alpha } => writeln!(out, "layer pinsep {name} {alpha}")?,
            }
        }
        for (n, e) in &self.derivation {
            writeln!(out, "delta {n} = {e}")?;
        }
        if let Some(b) = self.options.bound {
            writeln!(out, "bound = {b}")?;
        }
        if let Some(s) = self.options.seed {
            writeln!(out, "seed = {s}")?;
        }
        match self.options.format {
            Some(Format::Text) => writeln!(out, "format = text")?,
            Some(Format::Json) => writeln!(out, "format = json")?,
            None => {}
        }
        for (n, rows) in &self.matrices {
            let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", r.join(", "))).collect();
            writeln!(out, "matrix {n} = [{}]", rows.join(", "))?;
        }
        for (n, e) in &self.bindings {
            writeln!(out, "{n} = {e}")?;
        }
        Ok(())
    }
}

/// A session with its tower built and bindings available for evaluation.
pub struct Context {
    pub session: SessionFile,
    pub ring: OreRing,
}

impl Context {
    pub fn new(session: SessionFile) -> Result<Context> {
        let descr = TowerDescription {
            base: session.base,
            layers: session.layers.clone(),
            derivation: session.derivation.clone(),
        };
        let ring = OreRing::new(Arc::new(make_tower(&descr)?));
        let ctx = Context { session, ring };
        // type-check every binding and matrix
        for (name, _) in &ctx.session.bindings {
            ctx.poly(name)?;
        }
        for (name, _) in &ctx.session.matrices {
            ctx.matrix(name)?;
        }
        Ok(ctx)
    }

    pub fn tower(&self) -> &FieldTower {
        self.ring.tower()
    }

    fn binding(&self, name: &str) -> Option<&str> {
        self.session
            .bindings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e.as_str())
    }

    /// Replace binding names by their (parsed) definitions.
    fn substitute(&self, e: Expr, stack: &mut Vec<String>) -> Result<Expr> {
        let pos = e.pos;
        let kind = match e.kind {
            ExprKind::Ident(name) => match self.binding(&name) {
                Some(src) => {
                    if stack.contains(&name) {
                        return Err(Error::TypeError(format!("binding '{name}' refers to itself")));
                    }
                    stack.push(name.clone());
                    let inner = self.substitute(expr::parse(src)?, stack)?;
                    stack.pop();
                    return Ok(inner);
                }
                None => ExprKind::Ident(name),
            },
            ExprKind::Neg(a) => ExprKind::Neg(Box::new(self.substitute(*a, stack)?)),
            ExprKind::Add(a, b) => ExprKind::Add(Box::new(self.substitute(*a, stack)?), Box::new(self.substitute(*b, stack)?)),
            ExprKind::Sub(a, b) => ExprKind::Sub(Box::new(self.substitute(*a, stack)?), Box::new(self.substitute(*b, stack)?)),
            ExprKind::Mul(a, b) => ExprKind::Mul(Box::new(self.substitute(*a, stack)?), Box::new(self.substitute(*b, stack)?)),
            ExprKind::Div(a, b) => ExprKind::Div(Box::new(self.substitute(*a, stack)?), Box::new(self.substitute(*b, stack)?)),
            ExprKind::Pow(a, n) => ExprKind::Pow(Box::new(self.substitute(*a, stack)?), n),
            k @ ExprKind::Int(_) => k,
        };
        Ok(Expr { kind, pos })
    }

    /// An Ore polynomial: a binding name or an inline expression.
    pub fn poly(&self, src: &str) -> Result<OrePoly> {
        let e = self.substitute(expr::parse(src)?, &mut Vec::new())?;
        expr::eval_ore(&self.ring, &e)
    }

    /// An element of K: like [`poly`](Self::poly) but of degree 0 in `t`.
    pub fn element(&self, src: &str) -> Result<Element> {
        let f = self.poly(src)?;
        match f.degree() {
            None => Ok(self.tower().zero()),
            Some(0) => Ok(f.coeffs()[0].clone()),
            Some(_) => Err(Error::TypeError(format!("'{src}' involves t but a field element is expected"))),
        }
    }

    pub fn matrix(&self, name: &str) -> Result<Vec<Vec<Element>>> {
        let (_, rows) = self
            .session
            .matrices
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| Error::TypeError(format!("unknown matrix '{name}'")))?;
        rows.iter()
            .map(|r| r.iter().map(|e| self.element(e)).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn one_binding() {
        let s = parse_session("base=F3\nlayer rational x\ndelta x = 1\nf = t^2 - x").unwrap();
        assert_eq!(s.base, BaseField::Prime(3));
        assert_eq!(s.bindings, vec![("f".to_string(), "t^2 - x".to_string())]);
        Context::new(s).unwrap();
    }

    #[test]
    fn t_times_x() {
        let ctx = Context::new(parse_session("base = Q\nlayer rational x\ndelta x = 1\nf = t*x\n").unwrap()).unwrap();
        let f = ctx.poly("f").unwrap();
        assert_eq!(ctx.ring.format(&f), "x*t + 1");
    }

    #[test]
    fn pinsep_over_q_is_a_type_error() {
        assert!(matches!(parse_session("base=Q\nlayer pinsep u 2"), Err(Error::TypeError(_))));
    }

    #[test]
    fn syntax_errors_are_located() {
        let e = parse_session("base = F3\nlayer rational x\ndelta x = 1\nf = t^2 - (x").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { line: 4, col: 13, .. }), "{e:?}");
        let e = parse_session("base = F3\n  ! = 1").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { line: 2, col: 3, .. }), "{e:?}");
        let e = parse_session("base == F3").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { line: 1, col: 7, .. }), "{e:?}");
        let e = parse_session("matrix A = [[1, 2], [3 4]]").unwrap_err();
        assert!(matches!(e, Error::SyntaxError { line: 1, .. }), "{e:?}");
    }

    #[test]
    fn type_errors() {
        let bad = [
            "base = F3\nlayer rational x\ndelta y = 1",
            "base = F3\nlayer rational x\ndelta x = 1\nf = t\nf = 1",
            "base = F3\nlayer rational t",
            "base = Q\nlayer rational x\ndelta x = 1\nf = y",
            "base = Q\nlayer rational x\ndelta x = 1\nf = g\ng = f",
        ];
        for src in bad {
            let r = parse_session(src).and_then(Context::new);
            assert!(matches!(r, Err(Error::TypeError(_))), "{src}: {:?}", r.err());
        }
    }

    #[test]
    fn matrices_and_comments() {
        let src = "# zero matrix\nbase = Q\nlayer rational x\ndelta x = 1 # d/dx\nmatrix A = [[0, x], [1/x, (x+1)^2]]\n";
        let ctx = Context::new(parse_session(src).unwrap()).unwrap();
        let a = ctx.matrix("A").unwrap();
        assert_eq!(ctx.tower().format(&a[1][1]), "x^2+2*x+1");
    }

    fn name() -> impl Strategy<Value = String> {
        "[a-s][a-z0-9_]{0,3}".prop_filter("reserved", |n| !RESERVED.contains(&n.as_str()))
    }

    fn expr_src(vars: Vec<String>) -> BoxedStrategy<String> {
        let leaf = prop_oneof![
            (0u32..20).prop_map(|n| n.to_string()),
            proptest::sample::select(vars),
            Just("t".to_string()),
        ];
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a} + {b}")),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("{a}*({b})")),
                (inner.clone(), 0u32..4).prop_map(|(a, n)| format!("({a})^{n}")),
                inner.prop_map(|a| format!("-({a})")),
            ]
        })
        .boxed()
    }

    fn session() -> impl Strategy<Value = SessionFile> {
        let base = prop_oneof![Just(BaseField::Rationals), Just(BaseField::Prime(3)), Just(BaseField::Prime(5))];
        (base, proptest::collection::btree_set(name(), 1..6), any::<Option<u16>>(), any::<Option<u64>>(), any::<bool>())
            .prop_flat_map(|(base, names, bound, seed, json)| {
                let names: Vec<String> = names.into_iter().collect();
                let gen = names[0].clone();
                let binds = names[1..].to_vec();
                let e = expr_src(vec![gen.clone()]);
                (
                    Just((base, gen, binds, bound, seed, json)),
                    e.clone(),
                    proptest::collection::vec(e, names.len() - 1),
                )
            })
            .prop_map(|((base, gen, binds, bound, seed, json), delta, exprs)| SessionFile {
                base,
                layers: vec![LayerDescription::Rational(gen.clone())],
                derivation: vec![(gen, delta)],
                options: Options {
                    bound: bound.map(usize::from),
                    seed,
                    format: Some(if json { Format::Json } else { Format::Text }),
                },
                matrices: Vec::new(),
                bindings: binds.into_iter().zip(exprs).collect(),
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn print_then_parse_is_identity(s in session()) {
            let printed = s.to_string();
            prop_assert_eq!(parse_session(&printed).unwrap(), s);
        }
    }
}
