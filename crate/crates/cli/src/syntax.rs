//! Expression language: lexer, parser and canonical renderer.
//!
//! Precedence, loosest first: `+ -`, then `* / @`, then unary `-`, then `^`
//! (right associative, exponent may carry a unary minus). `D` is the
//! derivation, `i` the imaginary unit, `z` the independent variable; any
//! other identifier must be declared.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

/// Source range of a node, `start` inclusive and `end` exclusive.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: Pos,
    pub end: Pos,
}

impl Span {
    fn join(a: Span, b: Span) -> Span {
        Span { start: a.start, end: b.end }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.end.col.saturating_sub(1).max(self.start.col);
        if self.start.line == self.end.line && last == self.start.col {
            write!(f, "line {}, column {}", self.start.line, self.start.col)
        } else if self.start.line == self.end.line {
            write!(f, "line {}, columns {}-{}", self.start.line, self.start.col, last)
        } else {
            write!(f, "line {}, column {} to line {}, column {}", self.start.line, self.start.col, self.end.line, self.end.col)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Compose,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Compose => " @ ",
            BinOp::Pow => "^",
        }
    }

    fn prec(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div | BinOp::Compose => 2,
            BinOp::Pow => 4,
        }
    }
}

const PREC_NEG: u8 = 3;
const PREC_ATOM: u8 = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Imag,
    Z,
    D,
    Name(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// Syntax tree node. Equality ignores spans.
#[derive(Clone, Debug, Eq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Expr) -> bool {
        self.kind == other.kind
    }
}

impl Expr {
    fn prec(&self) -> u8 {
        match &self.kind {
            ExprKind::Neg(_) => PREC_NEG,
            ExprKind::Bin(op, _, _) => op.prec(),
            _ => PREC_ATOM,
        }
    }

    /// Canonical text that parses back to an equal tree.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write_at(&self, min_prec: u8, out: &mut String) {
        if self.prec() < min_prec {
            out.push('(');
            self.write(out);
            out.push(')');
        } else {
            self.write(out);
        }
    }

    fn write(&self, out: &mut String) {
        match &self.kind {
            ExprKind::Int(n) => out.push_str(&n.to_string()),
            ExprKind::Imag => out.push('i'),
            ExprKind::Z => out.push('z'),
            ExprKind::D => out.push('D'),
            ExprKind::Name(s) => out.push_str(s),
            ExprKind::Neg(a) => {
                out.push('-');
                a.write_at(PREC_NEG, out);
            }
            ExprKind::Bin(op, a, b) => {
                let p = op.prec();
                let (lp, rp) = match op {
                    BinOp::Pow => (PREC_ATOM, PREC_NEG),
                    _ => (p, p + 1),
                };
                a.write_at(lp, out);
                out.push_str(op.symbol());
                b.write_at(rp, out);
            }
        }
    }

    /// Every identifier other than the reserved ones, in order of appearance.
    pub fn names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.kind {
            ExprKind::Name(s) => out.push(s),
            ExprKind::Neg(a) => a.collect_names(out),
            ExprKind::Bin(_, a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
            _ => {}
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at line {}, column {}: {}", self.pos.line, self.pos.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "number `{n}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let j = if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && (chars[j] == '.' || chars[j] == 'e' || chars[j] == 'E') && chars.get(j + 1).is_some_and(|d| d.is_ascii_digit()) {
                return Err(ParseError {
                    pos: start,
                    message: "decimal literals are not allowed; write an exact fraction such as 3/2".into(),
                });
            }
            if j < chars.len() && chars[j] == '.' {
                return Err(ParseError { pos: Pos { line, col: col + (j - i) }, message: "decimal point in number".into() });
            }
            let digits: String = chars[i..j].iter().collect();
            out.push((Tok::Int(digits.parse().expect("digits")), Span::default()));
            j
        } else if is_ident_start(c) {
            let mut j = i;
            while j < chars.len() && is_ident_char(chars[j]) {
                j += 1;
            }
            out.push((Tok::Ident(chars[i..j].iter().collect()), Span::default()));
            j
        } else if "+-*/^@()".contains(c) {
            out.push((Tok::Sym(c), Span::default()));
            i + 1
        } else if c == '.' {
            return Err(ParseError { pos: start, message: "decimal literals are not allowed".into() });
        } else {
            return Err(ParseError { pos: start, message: format!("unexpected character `{c}`") });
        };
        col += j - i;
        out.last_mut().expect("pushed").1 = Span { start, end: Pos { line, col } };
        i = j;
    }
    let end = Pos { line, col };
    out.push((Tok::Eof, Span { start: end, end }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Span)>,
    at: usize,
    known: Option<&'a HashSet<String>>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn span(&self) -> Span {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, message: String) -> ParseError {
        ParseError { pos: self.span().start, message }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                Tok::Sym('@') => BinOp::Compose,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == &Tok::Sym('-') {
            let (_, s) = self.bump();
            let a = self.unary()?;
            let span = Span::join(s, a.span);
            return Ok(Expr { kind: ExprKind::Neg(Box::new(a)), span });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == &Tok::Sym('^') {
            self.bump();
            let e = self.unary()?;
            return Ok(bin(BinOp::Pow, base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, span) = self.bump();
        let kind = match tok {
            Tok::Int(n) => ExprKind::Int(n),
            Tok::Ident(s) => match s.as_str() {
                "z" => ExprKind::Z,
                "i" => ExprKind::Imag,
                "D" => ExprKind::D,
                _ => {
                    if !self.known.is_some_and(|k| k.contains(&s)) {
                        return Err(ParseError {
                            pos: span.start,
                            message: format!("undeclared name `{s}` (declare it in the --tower file)"),
                        });
                    }
                    ExprKind::Name(s)
                }
            },
            Tok::Sym('(') => {
                let inner = self.expr()?;
                if self.peek() != &Tok::Sym(')') {
                    return Err(self.error(format!("expected `)`, found {}", self.peek())));
                }
                let (_, close) = self.bump();
                return Ok(Expr { kind: inner.kind, span: Span::join(span, close) });
            }
            other => {
                self.at -= usize::from(other != Tok::Eof);
                return Err(self.error(format!("expected an operand, found {other}")));
            }
        };
        Ok(Expr { kind, span })
    }
}

fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
    let span = Span::join(a.span, b.span);
    Expr { kind: ExprKind::Bin(op, Box::new(a), Box::new(b)), span }
}

/// Parse with no declared names.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, None)
}

/// Parse, accepting the identifiers in `known`.
pub fn parse_with(text: &str, known: Option<&HashSet<String>>) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, at: 0, known };
    let e = p.expr()?;
    if p.peek() != &Tok::Eof {
        return Err(p.error(format!("unexpected {} after a complete expression", p.peek())));
    }
    Ok(e)
}
