//! Precedence-climbing expression parser.
//!
//! Binding strength, tightest first: `^` (integer exponents only), unary `-`,
//! `*` and `/` (left associative), `+` and `-` (left associative).

use std::collections::{BTreeMap, BTreeSet};

use crate::symcore::{ArgSet, Atom, Expr, Jet, Rational};

use super::error::{ParseError, Position};
use super::lexer::{Tok, Token};

/// Names an expression may refer to.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub funcs: BTreeMap<String, ArgSet>,
    /// Module-local parameter names accepted as atoms (never from problem files).
    pub params: BTreeSet<String>,
    /// Function being defined; its arguments bound the coordinates and jets allowed.
    pub owner: Option<(String, ArgSet)>,
}

impl Scope {
    pub fn with_funcs<'a>(funcs: impl IntoIterator<Item = (&'a str, ArgSet)>) -> Scope {
        Scope { funcs: funcs.into_iter().map(|(n, a)| (n.to_string(), a)).collect(), ..Scope::default() }
    }
}

pub(crate) fn coordinate_index(name: &str) -> Option<u8> {
    match name {
        "x1" => Some(1),
        "x2" => Some(2),
        "x3" => Some(3),
        "x4" => Some(4),
        _ => None,
    }
}

pub(crate) struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    end: Position,
    scope: &'a Scope,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token], end: Position, scope: &'a Scope) -> Self {
        Parser { toks, at: 0, end, scope }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn pos(&self) -> Position {
        self.toks.get(self.at).map(|t| t.pos).unwrap_or(self.end)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), message: message.into() })
    }

    pub fn at_end(&self) -> bool {
        self.at >= self.toks.len()
    }

    pub fn expect_end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            self.syntax(format!("unexpected {}", describe(self.peek().unwrap())))
        }
    }

    pub fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    terms.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    terms.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Add(terms) })
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        let mut factors: Vec<Expr> = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    factors.push(self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.at += 1;
                    let rhs = self.unary()?;
                    if !factors.is_empty() {
                        factors.insert(0, acc);
                        acc = Expr::Mul(std::mem::take(&mut factors));
                    }
                    acc = Expr::Div(Box::new(acc), Box::new(rhs));
                }
                _ => break,
            }
        }
        if factors.is_empty() {
            Ok(acc)
        } else {
            factors.insert(0, acc);
            Ok(Expr::Mul(factors))
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.at += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if let Some(Tok::Caret) = self.peek() {
            self.at += 1;
            let e = self.exponent()?;
            if let Some(Tok::Caret) = self.peek() {
                return self.syntax("chained exponents need parentheses");
            }
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let paren = matches!(self.peek(), Some(Tok::LParen));
        if paren {
            self.at += 1;
        }
        let neg = matches!(self.peek(), Some(Tok::Minus));
        if neg {
            self.at += 1;
        }
        let pos = self.pos();
        let Some(Tok::Int(n)) = self.peek().cloned() else {
            return self.syntax("exponent must be an integer literal");
        };
        self.at += 1;
        let n: i64 = n
            .try_into()
            .ok()
            .filter(|v: &i64| *v <= 1_000)
            .ok_or(ParseError::Syntax { pos, message: "exponent too large".into() })?;
        if paren {
            if !matches!(self.peek(), Some(Tok::RParen)) {
                return self.syntax("expected `)`");
            }
            self.at += 1;
        }
        Ok(if neg { -n } else { n })
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Expr::Num(Rational::from_integer(n)))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let e = self.expr()?;
                if !matches!(self.peek(), Some(Tok::RParen)) {
                    return self.syntax("expected `)`");
                }
                self.at += 1;
                Ok(e)
            }
            Some(Tok::Ident(name, suffix)) => {
                self.at += 1;
                self.symbol(&name, suffix.as_deref(), pos)
            }
            Some(t) => self.syntax(format!("unexpected {}", describe(&t))),
            None => self.syntax("unexpected end of input"),
        }
    }

    fn symbol(&self, name: &str, suffix: Option<&str>, pos: Position) -> Result<Expr, ParseError> {
        let owner = self.scope.owner.as_ref();
        let violation = |symbol: String| ParseError::ArgumentViolation {
            pos,
            func: owner.map(|o| o.0.clone()).unwrap_or_default(),
            symbol,
        };
        if let Some(c) = coordinate_index(name) {
            if suffix.is_some() {
                return Err(ParseError::UnknownSymbol { pos, name: format!("{name}_{}", suffix.unwrap()) });
            }
            if owner.is_some_and(|(_, args)| !args.contains(c)) {
                return Err(violation(name.to_string()));
            }
            return Ok(Expr::coord(c));
        }
        if let Some(&args) = self.scope.funcs.get(name) {
            if owner.is_some_and(|(_, own)| !args.is_subset_of(*own)) {
                return Err(violation(name.to_string()));
            }
            let mut jet = Jet::base(name, args);
            for d in suffix.unwrap_or("").chars() {
                let i = d.to_digit(10).unwrap() as u8;
                if !(1..=4).contains(&i) {
                    return Err(ParseError::Syntax { pos, message: format!("derivative index {i} out of range 1..4") });
                }
                jet = jet.prolong(i).ok_or_else(|| ParseError::ArgumentViolation {
                    pos,
                    func: name.to_string(),
                    symbol: format!("x{i}"),
                })?;
            }
            return Ok(Expr::jet(jet));
        }
        if suffix.is_none() && self.scope.params.contains(name) {
            return Ok(Expr::Atom(Atom::param(name)));
        }
        let full = match suffix {
            Some(s) => format!("{name}_{s}"),
            None => name.to_string(),
        };
        Err(ParseError::UnknownSymbol { pos, name: full })
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number `{n}`"),
        Tok::Ident(n, None) => format!("`{n}`"),
        Tok::Ident(n, Some(s)) => format!("`{n}_{s}`"),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eq => "`=`".into(),
    }
}
