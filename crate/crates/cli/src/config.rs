//! Tower declarations, one per line:
//!
//! ```text
//! gen Y : root = 2;          # Y = z^(1/2); roots come first
//! gen t : exp = 1;           # t'/t = 1, i.e. t = e^z
//! gen H' : logderiv = z;     # (H')'/H' = z
//! gen H : prim = H';         # H' is the derivative of H
//! let delta = z^2 + 1;       # named expression
//! ```

use std::collections::{HashMap, HashSet};

use lindiff::field::gauss::lcm_u32;
use lindiff::{Tower, TowerBuilder};

use crate::error::CliError;
use crate::eval::{required_ram, Env};
use crate::syntax::{parse_with, Expr, ParseError, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// `exp` and `logderiv`: `t'/t = u`.
    Exp,
    /// `t' = u`.
    Prim,
    /// `t = z^(1/p)`.
    Root(u32),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Decl {
    Gen { name: String, kind: GenKind, body: Option<Expr>, line: usize },
    Let { name: String, body: Expr, line: usize },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Gen { name, .. } | Decl::Let { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TowerSpec {
    pub decls: Vec<Decl>,
}

fn valid_name(s: &str) -> bool {
    let mut it = s.chars();
    it.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && it.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
        && !matches!(s, "z" | "i" | "D" | "gen" | "let")
}

fn line_err(line: usize, col: usize, message: impl Into<String>) -> CliError {
    CliError::TowerSyntax(ParseError { pos: Pos { line, col }, message: message.into() })
}

impl TowerSpec {
    pub fn parse(text: &str) -> Result<TowerSpec, CliError> {
        let mut decls: Vec<Decl> = Vec::new();
        let mut known = HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim_end();
            let content = content.strip_suffix(';').unwrap_or(content);
            if content.trim().is_empty() {
                continue;
            }
            let eq = content.find('=').ok_or_else(|| line_err(line, 1, "expected `gen NAME : KIND = EXPR` or `let NAME = EXPR`"))?;
            let (head, body_text) = (&content[..eq], &content[eq + 1..]);
            let body_col = raw[..eq + 1].chars().count() + 1;
            let mut words = head.split_whitespace();
            let decl = match words.next() {
                Some("let") => {
                    let name = words.next().filter(|n| valid_name(n)).ok_or_else(|| line_err(line, 1, "expected a name after `let`"))?;
                    if words.next().is_some() {
                        return Err(line_err(line, 1, "unexpected text before `=`"));
                    }
                    Decl::Let { name: name.into(), body: parse_body(body_text, line, body_col, &known)?, line }
                }
                Some("gen") => {
                    let rest: String = head.trim_start().trim_start_matches("gen").to_string();
                    let (name, kind) = rest.split_once(':').ok_or_else(|| line_err(line, 1, "expected `:` after the generator name"))?;
                    let (name, kind) = (name.trim(), kind.trim());
                    if !valid_name(name) {
                        return Err(line_err(line, 1, format!("invalid generator name `{name}`")));
                    }
                    let (kind, body) = match kind {
                        "exp" | "logderiv" => (GenKind::Exp, Some(parse_body(body_text, line, body_col, &known)?)),
                        "prim" => (GenKind::Prim, Some(parse_body(body_text, line, body_col, &known)?)),
                        "root" => {
                            let p: u32 = body_text
                                .trim()
                                .parse()
                                .ok()
                                .filter(|&p| p >= 1)
                                .ok_or_else(|| line_err(line, body_col, "root index must be a positive integer"))?;
                            (GenKind::Root(p), None)
                        }
                        other => return Err(line_err(line, 1, format!("unknown generator kind `{other}` (exp, logderiv, prim, root)"))),
                    };
                    Decl::Gen { name: name.into(), kind, body, line }
                }
                _ => return Err(line_err(line, 1, "expected `gen` or `let`")),
            };
            if !known.insert(decl.name().to_string()) {
                return Err(line_err(line, 1, format!("`{}` is declared twice", decl.name())));
            }
            decls.push(decl);
        }
        Ok(TowerSpec { decls })
    }

    pub fn names(&self) -> HashSet<String> {
        self.decls.iter().map(|d| d.name().to_string()).collect()
    }

    fn bodies(&self) -> impl Iterator<Item = &Expr> {
        self.decls.iter().filter_map(|d| match d {
            Decl::Gen { body, .. } => body.as_ref(),
            Decl::Let { body, .. } => Some(body),
        })
    }

    /// Build the tower, with enough ramification for the fractional powers
    /// of `z` in the declarations and in `extra`.
    pub fn build(&self, extra: &[&Expr]) -> Result<(Tower, HashMap<String, Expr>), CliError> {
        let ram = self.bodies().chain(extra.iter().copied()).map(required_ram).fold(1, lcm_u32);
        let mut b = TowerBuilder::new();
        if ram > 1 {
            b.root("_z", ram)?;
        }
        let mut lets = HashMap::new();
        for d in &self.decls {
            let wrap = |line: usize| move |e: CliError| CliError::Config { line, source: Box::new(e) };
            match d {
                Decl::Gen { name, kind: GenKind::Root(p), line, .. } => b.root(name, *p).map_err(|e| wrap(*line)(e.into()))?,
                Decl::Gen { name, kind, body: Some(body), line } => {
                    let u = Env { tower: b.tower(), lets: &lets }.scalar(body).map_err(wrap(*line))?;
                    let r = if *kind == GenKind::Exp { b.exp(name, u) } else { b.prim(name, u) };
                    r.map_err(|e| wrap(*line)(e.into()))?;
                }
                Decl::Gen { .. } => unreachable!("non-root generators have a body"),
                Decl::Let { name, body, .. } => {
                    lets.insert(name.clone(), body.clone());
                }
            }
        }
        Ok((b.build(), lets))
    }
}

fn parse_body(text: &str, line: usize, col: usize, known: &HashSet<String>) -> Result<Expr, CliError> {
    parse_with(text, Some(known)).map_err(|mut e| {
        e.pos = Pos { line, col: e.pos.col + col - 1 };
        CliError::TowerSyntax(e)
    })
}
