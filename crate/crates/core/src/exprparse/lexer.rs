use num_bigint::BigInt;

use super::error::{ParseError, Position};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    /// Identifier with an optional `_digits` jet suffix.
    Ident(String, Option<String>),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Position,
}

/// Tokenizes one line (without its comment). `line` is 1-based.
pub fn lex(text: &str, line: usize) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    let col_of = |k: usize| text[..chars.get(k).map(|c| c.0).unwrap_or(text.len())].chars().count() + 1;
    while i < chars.len() {
        let (_, ch) = chars[i];
        let pos = Position { line, col: col_of(i) };
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match ch {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, pos });
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            if i < chars.len() && (chars[i].1.is_ascii_alphabetic() || chars[i].1 == '_' || chars[i].1 == '.') {
                return Err(ParseError::Syntax {
                    pos: Position { line, col: col_of(i) },
                    message: format!("unexpected `{}` after number", chars[i].1),
                });
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), pos });
            continue;
        }
        if ch.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_alphanumeric() {
                i += 1;
            }
            let name: String = chars[start..i].iter().map(|c| c.1).collect();
            let mut suffix = None;
            if i < chars.len() && chars[i].1 == '_' {
                i += 1;
                let ds = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(ParseError::Syntax {
                        pos: Position { line, col: col_of(ds) },
                        message: "expected derivative digits after `_`".into(),
                    });
                }
                suffix = Some(chars[ds..i].iter().map(|c| c.1).collect());
                if i < chars.len() && (chars[i].1.is_ascii_alphabetic() || chars[i].1 == '_') {
                    return Err(ParseError::Syntax {
                        pos: Position { line, col: col_of(i) },
                        message: "unexpected character in jet reference".into(),
                    });
                }
            }
            out.push(Token { tok: Tok::Ident(name, suffix), pos });
            continue;
        }
        return Err(ParseError::Syntax { pos, message: format!("unexpected character `{ch}`") });
    }
    Ok(out)
}
