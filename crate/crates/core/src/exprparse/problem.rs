//! Problem files: function declarations, definitions and options.
//!
//! ```text
//! # restricted family with the Einstein example
//! func b(x3,x4) = 1/(2 - x3/2 - x4/2)
//! func c(x3,x4) = b
//! set label = einstein-example
//! ```
//!
//! A declaration without `= expr` leaves the function symbolic.

use std::collections::BTreeMap;

use crate::symcore::{ArgSet, Expr, FuncId, Jet, NormalForm, SymError, Substitution};

use super::error::{ParseError, Position};
use super::lexer::{lex, Tok, Token};
use super::parser::{coordinate_index, describe, Parser, Scope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    /// One defining function `a(x1,x2,x3,x4)`.
    General,
    /// `a = x1·b(x3,x4) + x2·c(x3,x4) + d(x3,x4)`.
    Restricted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Declaration {
    pub name: FuncId,
    pub args: ArgSet,
}

#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub mode: Mode,
    pub declarations: Vec<Declaration>,
    pub definitions: BTreeMap<FuncId, Expr>,
    pub options: BTreeMap<String, String>,
    /// Functions filled in with defaults (restricted `d ↦ 0`).
    pub defaulted: Vec<FuncId>,
}

const RESERVED: &[&str] = &["func", "set"];
const FAMILY: &[&str] = &["b", "c", "d"];

fn split_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// Parses a problem file.
pub fn parse(text: &str) -> Result<ProblemSpec, ParseError> {
    let mut decls: Vec<Declaration> = Vec::new();
    let mut definitions = BTreeMap::new();
    let mut options = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = split_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let trimmed = line.trim_start();
        let indent = line.len() - trimmed.len();
        if let Some(rest) = trimmed.strip_prefix("set").filter(|r| r.starts_with(char::is_whitespace)) {
            let (key, value) = rest.split_once('=').ok_or(ParseError::Syntax {
                pos: Position { line: line_no, col: indent + 4 },
                message: "expected `set key = value`".into(),
            })?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(ParseError::Syntax {
                    pos: Position { line: line_no, col: indent + 5 },
                    message: "option key must be alphanumeric".into(),
                });
            }
            if options.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(ParseError::DuplicateDefinition {
                    pos: Position { line: line_no, col: indent + 5 },
                    name: key.to_string(),
                });
            }
            continue;
        }
        let toks = lex(line, line_no)?;
        let end = Position { line: line_no, col: line.chars().count() + 1 };
        parse_decl(&toks, end, &mut decls, &mut definitions)?;
    }
    finish(decls, definitions, options)
}

fn parse_decl(
    toks: &[Token],
    end: Position,
    decls: &mut Vec<Declaration>,
    definitions: &mut BTreeMap<FuncId, Expr>,
) -> Result<(), ParseError> {
    let err = |k: usize, message: &str| ParseError::Syntax {
        pos: toks.get(k).map(|t| t.pos).unwrap_or(end),
        message: message.into(),
    };
    match toks.first().map(|t| &t.tok) {
        Some(Tok::Ident(kw, None)) if kw == "func" => {}
        Some(t) => return Err(err(0, &format!("expected `func` or `set`, found {}", describe(t)))),
        None => return Ok(()),
    }
    let (name, name_pos) = match toks.get(1) {
        Some(Token { tok: Tok::Ident(n, None), pos }) => (n.clone(), *pos),
        _ => return Err(err(1, "expected function name")),
    };
    if coordinate_index(&name).is_some() || RESERVED.contains(&name.as_str()) {
        return Err(err(1, &format!("`{name}` is reserved")));
    }
    if decls.iter().any(|d| &*d.name == name) {
        return Err(ParseError::DuplicateDefinition { pos: name_pos, name });
    }
    if !matches!(toks.get(2).map(|t| &t.tok), Some(Tok::LParen)) {
        return Err(err(2, "expected `(`"));
    }
    let mut k = 3;
    let mut coords = Vec::new();
    loop {
        match toks.get(k).map(|t| &t.tok) {
            Some(Tok::Ident(n, None)) if coordinate_index(n).is_some() => {
                let c = coordinate_index(n).unwrap();
                if coords.contains(&c) {
                    return Err(err(k, "repeated argument"));
                }
                coords.push(c);
            }
            Some(Tok::RParen) if coords.is_empty() => break,
            _ => return Err(err(k, "expected a coordinate x1..x4")),
        }
        k += 1;
        match toks.get(k).map(|t| &t.tok) {
            Some(Tok::Comma) => k += 1,
            Some(Tok::RParen) => break,
            _ => return Err(err(k, "expected `,` or `)`")),
        }
    }
    k += 1;
    let args = ArgSet::from_coords(&coords);
    if let Some(bad) = coords.iter().find(|c| FAMILY.contains(&name.as_str()) && !matches!(c, 3 | 4)) {
        return Err(ParseError::ArgumentViolation { pos: name_pos, func: name, symbol: format!("x{bad}") });
    }
    let definition = match toks.get(k).map(|t| &t.tok) {
        None => None,
        Some(Tok::Eq) => {
            let scope = Scope {
                funcs: decls.iter().map(|d| (d.name.to_string(), d.args)).collect(),
                params: Default::default(),
                owner: Some((name.clone(), args)),
            };
            let mut p = Parser::new(&toks[k + 1..], end, &scope);
            let e = p.expr()?;
            p.expect_end()?;
            Some(e)
        }
        Some(_) => return Err(err(k, "expected `=` or end of line")),
    };
    let name: FuncId = FuncId::from(name.as_str());
    if let Some(e) = definition {
        definitions.insert(name.clone(), e);
    }
    decls.push(Declaration { name, args });
    Ok(())
}

fn finish(
    mut decls: Vec<Declaration>,
    definitions: BTreeMap<FuncId, Expr>,
    options: BTreeMap<String, String>,
) -> Result<ProblemSpec, ParseError> {
    let has = |n: &str| decls.iter().any(|d| &*d.name == n);
    let general = has("a");
    let family: Vec<&str> = FAMILY.iter().copied().filter(|n| has(n)).collect();
    if general && !family.is_empty() {
        return Err(ParseError::InvalidProblem(format!(
            "define either `a` or `b, c, d`, not both (found a and {})",
            family.join(", ")
        )));
    }
    let mut defaulted = Vec::new();
    let mode = if general {
        Mode::General
    } else {
        for req in ["b", "c"] {
            if !has(req) {
                return Err(ParseError::InvalidProblem(format!(
                    "missing `{req}`: declare either a(x1,x2,x3,x4) or b, c (and optionally d) of (x3,x4)"
                )));
            }
        }
        let r34 = ArgSet::from_coords(&[3, 4]);
        if !has("d") {
            decls.push(Declaration { name: "d".into(), args: r34 });
            defaulted.push(FuncId::from("d"));
        }
        Mode::Restricted
    };
    let mut definitions = definitions;
    for name in &defaulted {
        definitions.insert(name.clone(), Expr::zero());
    }
    Ok(ProblemSpec { mode, declarations: decls, definitions, options, defaulted })
}

impl ProblemSpec {
    pub fn args_of(&self, name: &str) -> Option<ArgSet> {
        self.declarations.iter().find(|d| &*d.name == name).map(|d| d.args)
    }

    /// Scope naming every declared function, for parsing expressions against this problem.
    pub fn scope(&self) -> Scope {
        Scope::with_funcs(self.declarations.iter().map(|d| (&*d.name, d.args)))
    }

    /// Each declared function as a normal form: its definition with earlier
    /// functions resolved, or the symbolic jet when undefined.
    pub fn resolved(&self) -> Result<BTreeMap<FuncId, NormalForm>, SymError> {
        let mut sub = Substitution::new();
        let mut out = BTreeMap::new();
        for d in &self.declarations {
            let value = match self.definitions.get(&d.name) {
                Some(e) => sub.apply(&e.normalize()?)?,
                None => NormalForm::jet(Jet::base(d.name.clone(), d.args)),
            };
            if self.definitions.contains_key(&d.name) {
                sub = sub.bind(d.name.clone(), d.args, value.clone())?;
            }
            out.insert(d.name.clone(), value);
        }
        Ok(out)
    }

    /// The defining function `a` of the metric.
    pub fn defining_function(&self) -> Result<NormalForm, SymError> {
        let r = self.resolved()?;
        Ok(match self.mode {
            Mode::General => r["a"].clone(),
            Mode::Restricted => {
                &(&NormalForm::coord(1) * &r["b"]) + &(&(&NormalForm::coord(2) * &r["c"]) + &r["d"])
            }
        })
    }

    /// Bindings for the family's unknowns (`a`, or `b, c, d`), resolved.
    pub fn substitution(&self) -> Result<Substitution, SymError> {
        let r = self.resolved()?;
        let names: &[&str] = match self.mode {
            Mode::General => &["a"],
            Mode::Restricted => FAMILY,
        };
        let mut sub = Substitution::new();
        for n in names {
            sub = sub.bind(*n, self.args_of(n).unwrap(), r[*n].clone())?;
        }
        Ok(sub)
    }

    /// True when every family unknown resolves to a closed form without jets.
    pub fn is_concrete(&self) -> bool {
        match self.defining_function() {
            Ok(a) => a.atoms().iter().all(|x| x.as_jet().is_none()),
            Err(_) => false,
        }
    }
}

/// Parses a single expression against `scope`.
pub fn parse_expr(text: &str, scope: &Scope) -> Result<Expr, ParseError> {
    if text.contains('\n') {
        let line = text.lines().count();
        return Err(ParseError::Syntax { pos: Position { line, col: 1 }, message: "expression spans lines".into() });
    }
    let toks = lex(text, 1)?;
    let end = Position { line: 1, col: text.chars().count() + 1 };
    let mut p = Parser::new(&toks, end, scope);
    if p.at_end() {
        return Err(ParseError::Syntax { pos: end, message: "empty expression".into() });
    }
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}
