//! The `.cdga` presentation language.
//!
//! ```text
//! # comment
//! max_degree 20
//!
//! algebra B
//!   gen y:2 b:3 c:3 u:4 n:5
//!   d n = b*c + u*y
//!
//! fibration E
//!   base B
//!   fiber odd 3 z
//!   u = u
//! ```
//!
//! A document is a sequence of lines. `algebra NAME` and `fibration NAME`
//! open blocks; every following line up to the next block header belongs to
//! that block. Indentation is ignored.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{is_identifier, FreeAlgebra, Poly, Presentation, PresentationError};
use crate::fibration::{
    build_fibration_model_named, default_fiber_names, FiberKind, FibrationModel,
};
use crate::qlinalg::Q;
use crate::sullivan::MinimalModel;

/// 1-based source position. Positions never take part in equality, so a
/// printed and reparsed document compares equal to the original.
#[derive(Debug, Clone, Copy, Default, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("line {line}, column {col}: expected {expected}, found {found}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
        found: String,
    },
    #[error("line {line}, column {col}: {message}")]
    Semantic {
        line: usize,
        col: usize,
        message: String,
    },
}

impl DslError {
    fn semantic(span: Span, message: impl Into<String>) -> Self {
        DslError::Semantic {
            line: span.line,
            col: span.col,
            message: message.into(),
        }
    }

    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Syntax { line, col, .. } | DslError::Semantic { line, col, .. } => {
                (*line, *col)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factor {
    pub name: String,
    pub exponent: u32,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coefficient: Q,
    pub factors: Vec<Factor>,
}

/// A polynomial expression as written, before name resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

impl Expr {
    /// The expression for an already-resolved polynomial.
    pub fn from_poly(pres: &Presentation, p: &Poly) -> Expr {
        let terms = p
            .terms()
            .map(|(m, c)| Term {
                coefficient: c.clone(),
                factors: m
                    .factors()
                    .iter()
                    .map(|&(i, e)| Factor {
                        name: pres.generators()[i].name.clone(),
                        exponent: e,
                        span: Span::default(),
                    })
                    .collect(),
            })
            .collect();
        Expr { terms }
    }

    /// Resolves names against `pres` and multiplies out with Koszul signs.
    pub fn resolve(&self, pres: &Presentation) -> Result<Poly, DslError> {
        self.resolve_in(pres.algebra())
    }

    pub fn resolve_in(&self, alg: &FreeAlgebra) -> Result<Poly, DslError> {
        let mut out = Poly::zero();
        for t in &self.terms {
            let mut fs = Vec::with_capacity(t.factors.len());
            for f in &t.factors {
                let i = alg.index_of(&f.name).ok_or_else(|| {
                    DslError::semantic(f.span, format!("unknown generator `{}`", f.name))
                })?;
                fs.push((i, f.exponent));
            }
            let (sign, m) = alg.normalize(&fs);
            match sign {
                0 => {}
                s if s < 0 => out.add_term(m, -t.coefficient.clone()),
                _ => out.add_term(m, t.coefficient.clone()),
            }
        }
        Ok(out)
    }

    fn first_span(&self) -> Span {
        self.terms
            .iter()
            .flat_map(|t| t.factors.first())
            .map(|f| f.span)
            .next()
            .unwrap_or_default()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let neg = t.coefficient.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = t.coefficient.abs();
            let mut parts: Vec<String> = Vec::new();
            if t.factors.is_empty() || !abs.is_one() {
                parts.push(abs.to_string());
            }
            for fac in &t.factors {
                if fac.exponent == 1 {
                    parts.push(fac.name.clone());
                } else {
                    parts.push(format!("{}^{}", fac.name, fac.exponent));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberKeyword {
    Even,
    Odd,
    Projective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberSpec {
    pub kind: FiberKeyword,
    pub n: u32,
    /// Only meaningful for projective fibres.
    pub d: u32,
    /// Optional generator names; empty means the defaults.
    pub names: Vec<String>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraBlock {
    pub name: String,
    pub max_degree: Option<u32>,
    pub generators: Vec<(String, u32)>,
    pub differentials: Vec<(String, Expr)>,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibrationBlock {
    pub name: String,
    pub max_degree: Option<u32>,
    pub base: String,
    pub fiber: FiberSpec,
    pub u: Expr,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Block {
    Algebra(AlgebraBlock),
    Fibration(FibrationBlock),
}

impl Block {
    pub fn name(&self) -> &str {
        match self {
            Block::Algebra(a) => &a.name,
            Block::Fibration(f) => &f.name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub max_degree: Option<u32>,
    pub blocks: Vec<Block>,
}

impl Document {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name() == name)
    }

    pub fn algebra_block(&self, name: &str) -> Option<&AlgebraBlock> {
        self.blocks.iter().find_map(|b| match b {
            Block::Algebra(a) if a.name == name => Some(a),
            _ => None,
        })
    }

    /// Builds the presentation of an algebra block. The truncation degree is
    /// `max_degree` if given, else the block's or the document's directive,
    /// else twice the top generator degree plus two.
    pub fn presentation(
        &self,
        block: &AlgebraBlock,
        max_degree: Option<u32>,
    ) -> Result<Presentation, DslError> {
        let top = block.generators.iter().map(|g| g.1).max().unwrap_or(0);
        let n = max_degree
            .or(block.max_degree)
            .or(self.max_degree)
            .unwrap_or(2 * top + 2);
        let names: Vec<(&str, u32)> = block
            .generators
            .iter()
            .map(|(s, d)| (s.as_str(), *d))
            .collect();
        let bare = Presentation::from_spec(&names, &[], n.max(1))
            .map_err(|e| DslError::semantic(block.span, e.to_string()))?;
        let mut diffs = vec![Poly::zero(); bare.len()];
        let mut seen = vec![false; bare.len()];
        for (g, expr) in &block.differentials {
            let span = expr.first_span();
            let i = bare.index_of(g).ok_or_else(|| {
                DslError::semantic(span, format!("differential of unknown generator `{g}`"))
            })?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(DslError::semantic(
                    span,
                    format!("`{g}` has two differentials"),
                ));
            }
            let p = expr.resolve(&bare)?;
            let want = bare.generators()[i].degree + 1;
            if !p.is_zero() && bare.degree(&p) != Some(want) {
                return Err(DslError::semantic(
                    span,
                    format!("d {g} must have degree {want}, got `{expr}`"),
                ));
            }
            diffs[i] = p;
        }
        Presentation::new(bare.algebra().clone(), diffs, bare.max_degree())
            .map_err(|e: PresentationError| DslError::semantic(block.span, e.to_string()))
    }
}

impl Document {
    pub fn fibration_block(&self, name: &str) -> Option<&FibrationBlock> {
        self.blocks.iter().find_map(|b| match b {
            Block::Fibration(f) if f.name == name => Some(f),
            _ => None,
        })
    }

    /// Builds the model of a fibration block over its (minimal) base block.
    pub fn fibration_model(
        &self,
        block: &FibrationBlock,
        max_degree: Option<u32>,
    ) -> Result<FibrationModel, DslError> {
        let base_block = self.algebra_block(&block.base).ok_or_else(|| {
            DslError::semantic(block.span, format!("unknown base algebra `{}`", block.base))
        })?;
        let n = max_degree.or(block.max_degree);
        let base = self.presentation(base_block, n)?;
        let base = MinimalModel::identity(&base).map_err(|_| {
            DslError::semantic(
                block.span,
                format!("base `{}` is not a minimal Sullivan algebra", block.base),
            )
        })?;
        let u = block.u.resolve(base.model())?;
        let fs = &block.fiber;
        let kind = match fs.kind {
            FiberKeyword::Even => FiberKind::EvenSphere(fs.n),
            FiberKeyword::Odd => FiberKind::OddSphere(fs.n),
            FiberKeyword::Projective => FiberKind::ProjectiveLike { n: fs.n, d: fs.d },
        };
        let names = if fs.names.is_empty() {
            default_fiber_names(kind)
        } else {
            fs.names.clone()
        };
        let wanted = default_fiber_names(kind).len();
        if names.len() != wanted {
            return Err(DslError::semantic(
                fs.span,
                format!(
                    "this fibre takes {wanted} generator name(s), got {}",
                    names.len()
                ),
            ));
        }
        build_fibration_model_named(&base, kind, &u, &names)
            .map_err(|e| DslError::semantic(block.u.first_span(), e.to_string()))
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        if let Some(n) = self.max_degree {
            let _ = writeln!(out, "max_degree {n}");
        }
        for b in &self.blocks {
            if !out.is_empty() {
                out.push('\n');
            }
            match b {
                Block::Algebra(a) => {
                    let _ = writeln!(out, "algebra {}", a.name);
                    if let Some(n) = a.max_degree {
                        let _ = writeln!(out, "  max_degree {n}");
                    }
                    if !a.generators.is_empty() {
                        let gens: Vec<String> = a
                            .generators
                            .iter()
                            .map(|(s, d)| format!("{s}:{d}"))
                            .collect();
                        let _ = writeln!(out, "  gen {}", gens.join(" "));
                    }
                    for (g, e) in &a.differentials {
                        let _ = writeln!(out, "  d {g} = {e}");
                    }
                }
                Block::Fibration(fb) => {
                    let _ = writeln!(out, "fibration {}", fb.name);
                    if let Some(n) = fb.max_degree {
                        let _ = writeln!(out, "  max_degree {n}");
                    }
                    let _ = writeln!(out, "  base {}", fb.base);
                    let fs = &fb.fiber;
                    let _ = match fs.kind {
                        FiberKeyword::Even => write!(out, "  fiber even {}", fs.n),
                        FiberKeyword::Odd => write!(out, "  fiber odd {}", fs.n),
                        FiberKeyword::Projective => {
                            write!(out, "  fiber projective {} {}", fs.n, fs.d)
                        }
                    };
                    for name in &fs.names {
                        let _ = write!(out, " {name}");
                    }
                    out.push('\n');
                    let _ = writeln!(out, "  u = {}", fb.u);
                }
            }
        }
        f.write_str(&out)
    }
}

/// Character cursor over one source line.
struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor {
            chars: src.chars().collect(),
            pos: 0,
            line,
            _src: src,
        }
    }

    fn span(&self) -> Span {
        Span {
            line: self.line,
            col: self.pos + 1,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn found(&mut self) -> String {
        match self.peek() {
            None => "end of line".to_string(),
            Some(_) => {
                let rest: String = self.chars[self.pos..]
                    .iter()
                    .take_while(|c| !c.is_whitespace())
                    .collect();
                format!("`{rest}`")
            }
        }
    }

    fn error(&mut self, expected: &str) -> DslError {
        let found = self.found();
        let s = self.span();
        DslError::Syntax {
            line: s.line,
            col: s.col,
            expected: expected.to_string(),
            found,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("`{c}`")))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), DslError> {
        self.skip_ws();
        let span = self.span();
        let start = self.pos;
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == '_' => self.pos += 1,
            _ => return Err(self.error("identifier")),
        }
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        while self.chars.get(self.pos) == Some(&'\'') {
            self.pos += 1;
        }
        Ok((self.chars[start..self.pos].iter().collect(), span))
    }

    fn peek_ident_start(&mut self) -> bool {
        self.peek()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    }

    fn integer(&mut self) -> Result<BigInt, DslError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn small(&mut self, what: &str) -> Result<u32, DslError> {
        self.skip_ws();
        let save = self.pos;
        let n = self.integer().map_err(|_| self.error(what))?;
        u32::try_from(n).map_err(|_| {
            self.pos = save;
            self.error(what)
        })
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        let end = self.pos + w.len();
        if self.chars.get(self.pos..end) == Some(&w[..])
            && !self
                .chars
                .get(end)
                .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'')
        {
            self.pos = end;
            true
        } else {
            false
        }
    }

    fn finish(&mut self) -> Result<(), DslError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error("end of line"))
        }
    }

    fn coefficient(&mut self) -> Result<Q, DslError> {
        let num = self.integer()?;
        if self.eat('/') {
            let den_span = self.span();
            let den = self.integer()?;
            if den.is_zero() {
                return Err(DslError::Syntax {
                    line: den_span.line,
                    col: den_span.col,
                    expected: "nonzero denominator".into(),
                    found: "`0`".into(),
                });
            }
            Ok(Q::new(num, den))
        } else {
            Ok(Q::from_integer(num))
        }
    }

    fn factor(&mut self) -> Result<Factor, DslError> {
        let (name, span) = self.ident()?;
        let exponent = if self.eat('^') {
            let e = self.small("exponent")?;
            if e == 0 {
                return Err(self.error("positive exponent"));
            }
            e
        } else {
            1
        };
        Ok(Factor {
            name,
            exponent,
            span,
        })
    }

    fn term(&mut self, negate: bool) -> Result<Term, DslError> {
        let mut coefficient = Q::one();
        let mut factors = Vec::new();
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coefficient = self.coefficient()?;
            if self.eat('*') {
                factors.push(self.factor()?);
            }
        } else if self.peek_ident_start() {
            factors.push(self.factor()?);
        } else {
            return Err(self.error("coefficient or generator"));
        }
        while self.eat('*') {
            factors.push(self.factor()?);
        }
        if negate {
            coefficient = -coefficient;
        }
        Ok(Term {
            coefficient,
            factors,
        })
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut terms = Vec::new();
        let neg = self.eat('-');
        terms.push(self.term(neg)?);
        loop {
            self.skip_ws();
            let op_span = self.span();
            let negate = if self.eat('+') {
                false
            } else if self.eat('-') {
                true
            } else {
                break;
            };
            let t = self.term(negate).map_err(|e| match e {
                DslError::Syntax { found, .. } => DslError::Syntax {
                    line: op_span.line,
                    col: op_span.col,
                    expected: "a term after the operator".into(),
                    found,
                },
                other => other,
            })?;
            terms.push(t);
        }
        terms.retain(|t| !t.coefficient.is_zero());
        Ok(Expr { terms })
    }
}

/// Parses a standalone polynomial expression.
pub fn parse_expression(text: &str) -> Result<Expr, DslError> {
    let mut c = Cursor::new(text, 1);
    let e = c.expr()?;
    c.finish()?;
    Ok(e)
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

enum Open {
    None,
    Algebra(AlgebraBlock),
    Fibration {
        name: String,
        span: Span,
        max_degree: Option<u32>,
        base: Option<String>,
        fiber: Option<FiberSpec>,
        u: Option<Expr>,
    },
}

fn close(open: Open, doc: &mut Document) -> Result<(), DslError> {
    match open {
        Open::None => {}
        Open::Algebra(a) => doc.blocks.push(Block::Algebra(a)),
        Open::Fibration {
            name,
            span,
            max_degree,
            base,
            fiber,
            u,
        } => {
            let missing = |what: &str| {
                DslError::semantic(span, format!("fibration `{name}` is missing `{what}`"))
            };
            let base = base.ok_or_else(|| missing("base"))?;
            let fiber = fiber.ok_or_else(|| missing("fiber"))?;
            let u = u.ok_or_else(|| missing("u"))?;
            doc.blocks.push(Block::Fibration(FibrationBlock {
                name,
                max_degree,
                base,
                fiber,
                u,
                span,
            }));
        }
    }
    Ok(())
}

fn fiber_spec(c: &mut Cursor, span: Span) -> Result<FiberSpec, DslError> {
    let kind = if c.keyword("even") {
        FiberKeyword::Even
    } else if c.keyword("odd") {
        FiberKeyword::Odd
    } else if c.keyword("projective") {
        FiberKeyword::Projective
    } else {
        return Err(c.error("`even`, `odd` or `projective`"));
    };
    let n = c.small("fibre degree")?;
    let d = if kind == FiberKeyword::Projective {
        c.small("truncation exponent")?
    } else {
        2
    };
    let mut names = Vec::new();
    while !c.at_end() {
        names.push(c.ident()?.0);
    }
    let max_names = if kind == FiberKeyword::Odd { 1 } else { 2 };
    if !names.is_empty() && names.len() != max_names {
        return Err(DslError::semantic(
            span,
            format!(
                "expected {max_names} fibre generator name(s), got {}",
                names.len()
            ),
        ));
    }
    Ok(FiberSpec {
        kind,
        n,
        d,
        names,
        span,
    })
}

/// Parses a whole document.
pub fn parse(text: &str) -> Result<Document, DslError> {
    let mut doc = Document::default();
    let mut open = Open::None;
    for (k, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let mut c = Cursor::new(line, k + 1);
        if c.at_end() {
            continue;
        }
        let span = c.span();
        if c.keyword("algebra") {
            let (name, _) = c.ident()?;
            c.finish()?;
            close(std::mem::replace(&mut open, Open::None), &mut doc)?;
            check_unique(&doc, &name, span)?;
            open = Open::Algebra(AlgebraBlock {
                name,
                max_degree: None,
                generators: Vec::new(),
                differentials: Vec::new(),
                span,
            });
            continue;
        }
        if c.keyword("fibration") {
            let (name, _) = c.ident()?;
            c.finish()?;
            close(std::mem::replace(&mut open, Open::None), &mut doc)?;
            check_unique(&doc, &name, span)?;
            open = Open::Fibration {
                name,
                span,
                max_degree: None,
                base: None,
                fiber: None,
                u: None,
            };
            continue;
        }
        if c.keyword("max_degree") {
            let n = c.small("truncation degree")?;
            c.finish()?;
            match &mut open {
                Open::None => doc.max_degree = Some(n),
                Open::Algebra(a) => a.max_degree = Some(n),
                Open::Fibration { max_degree, .. } => *max_degree = Some(n),
            }
            continue;
        }
        match &mut open {
            Open::None => return Err(c.error("`algebra`, `fibration` or `max_degree`")),
            Open::Algebra(a) => {
                if c.keyword("gen") {
                    loop {
                        let (name, _) = c.ident()?;
                        c.expect(':')?;
                        let deg = c.small("degree")?;
                        a.generators.push((name, deg));
                        if c.at_end() {
                            break;
                        }
                    }
                } else if c.keyword("d") {
                    let (name, _) = c.ident()?;
                    c.expect('=')?;
                    let e = c.expr()?;
                    c.finish()?;
                    a.differentials.push((name, e));
                } else {
                    return Err(c.error("`gen`, `d` or a block header"));
                }
            }
            Open::Fibration { base, fiber, u, .. } => {
                if c.keyword("base") {
                    *base = Some(c.ident()?.0);
                    c.finish()?;
                } else if c.keyword("fiber") {
                    *fiber = Some(fiber_spec(&mut c, span)?);
                } else if c.keyword("u") {
                    c.expect('=')?;
                    let e = c.expr()?;
                    c.finish()?;
                    *u = Some(e);
                } else {
                    return Err(c.error("`base`, `fiber`, `u` or a block header"));
                }
            }
        }
    }
    close(open, &mut doc)?;
    Ok(doc)
}

fn check_unique(doc: &Document, name: &str, span: Span) -> Result<(), DslError> {
    if doc.block(name).is_some() {
        return Err(DslError::semantic(
            span,
            format!("block `{name}` defined twice"),
        ));
    }
    Ok(())
}

/// An algebra block describing an existing presentation.
pub fn algebra_block(name: &str, pres: &Presentation, with_max_degree: bool) -> AlgebraBlock {
    debug_assert!(is_identifier(name));
    AlgebraBlock {
        name: name.to_string(),
        max_degree: with_max_degree.then_some(pres.max_degree()),
        generators: pres
            .generators()
            .iter()
            .map(|g| (g.name.clone(), g.degree))
            .collect(),
        differentials: pres
            .generators()
            .iter()
            .enumerate()
            .filter(|(i, _)| !pres.dg(*i).is_zero())
            .map(|(i, g)| (g.name.clone(), Expr::from_poly(pres, pres.dg(i))))
            .collect(),
        span: Span::default(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::{q, qf};

    const SEC6: &str = "algebra B\n gen y:2 b:3 c:3 u:4 n:5\n d n = b*c + u*y\n";

    #[test]
    fn parses_block() {
        let doc = parse(SEC6).unwrap();
        let a = doc.algebra_block("B").unwrap();
        assert_eq!(a.generators.len(), 5);
        let p = doc.presentation(a, None).unwrap();
        assert_eq!(p.max_degree(), 12);
        assert_eq!(p.to_string(), "Λ(y:2, b:3, c:3, u:4, n:5; dn = y*u + b*c)");
    }

    #[test]
    fn trailing_plus_is_syntax_error() {
        let err = parse("algebra B\n gen b:3 c:3 n:5\n d n = b*c +\n").unwrap_err();
        match err {
            DslError::Syntax { line, col, .. } => assert_eq!((line, col), (3, 12)),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_generator_is_semantic_error() {
        let doc = parse("algebra A\n gen z:3\n d z = q\n").unwrap();
        let err = doc
            .presentation(doc.algebra_block("A").unwrap(), None)
            .unwrap_err();
        assert_eq!(
            err,
            DslError::Semantic {
                line: 3,
                col: 8,
                message: "unknown generator `q`".into()
            }
        );
    }

    #[test]
    fn degree_mismatch_is_semantic_error() {
        let doc = parse("algebra A\n gen a:2 b:3\n d b = a\n").unwrap();
        let err = doc
            .presentation(doc.algebra_block("A").unwrap(), None)
            .unwrap_err();
        assert!(matches!(err, DslError::Semantic { line: 3, .. }));
    }

    #[test]
    fn expressions() {
        let e = parse_expression("-x^2 + 3/6*y*z' - 2").unwrap();
        assert_eq!(e.terms.len(), 3);
        assert_eq!(e.terms[0].coefficient, q(-1));
        assert_eq!(e.terms[1].coefficient, qf(1, 2));
        assert_eq!(e.terms[1].factors[1].name, "z'");
        assert_eq!(e.to_string(), "-x^2 + 1/2*y*z' - 2");
        assert_eq!(parse_expression("0").unwrap().to_string(), "0");
        assert!(parse_expression("1/0").is_err());
        assert!(parse_expression("x^").is_err());
        assert!(parse_expression("x y").is_err());
    }

    #[test]
    fn fibration_block_round_trip() {
        let text = "max_degree 20\nalgebra B\n gen b:3 c:4 n:6\n d n = b*c\n\
                    fibration E # odd fibre\n base B\n fiber odd 3 z\n u = c\n";
        let doc = parse(text).unwrap();
        let printed = doc.to_string();
        assert_eq!(parse(&printed).unwrap(), doc);
        match doc.block("E").unwrap() {
            Block::Fibration(f) => {
                assert_eq!(f.fiber.kind, FiberKeyword::Odd);
                assert_eq!(f.fiber.names, vec!["z".to_string()]);
            }
            _ => panic!(),
        }
    }

    #[test]
    fn fibration_requires_fields() {
        let err = parse("fibration E\n base B\n").unwrap_err();
        assert!(matches!(err, DslError::Semantic { .. }));
    }

    #[test]
    fn projective_fiber() {
        let doc = parse("fibration E\n base B\n fiber projective 2 3\n u = 2*x\n").unwrap();
        let Block::Fibration(f) = &doc.blocks[0] else {
            panic!()
        };
        assert_eq!((f.fiber.n, f.fiber.d), (2, 3));
    }

    #[test]
    fn stray_line_rejected() {
        assert!(matches!(
            parse("gen x:2\n"),
            Err(DslError::Syntax { line: 1, .. })
        ));
    }
}
