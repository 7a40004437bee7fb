use crate::ast::Span;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Numeral(String),
    Var(String),
    Directive(String),
    LParen,
    RParen,
    Dot,
    Comma,
    Colon,
    Neck,
    Arrow,
    Equals,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Numeral(s) | Tok::Var(s) => format!("`{s}`"),
            Tok::Directive(s) => format!("`#{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Equals => "`=`".into(),
        }
    }
}

pub fn tokenize(text: &str) -> Result<Vec<(Tok, Span)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| Error::Syntax { line, col, message };

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                out.push((Tok::LParen, span));
                advance(1, &mut i, &mut col);
            }
            ')' => {
                out.push((Tok::RParen, span));
                advance(1, &mut i, &mut col);
            }
            '.' => {
                out.push((Tok::Dot, span));
                advance(1, &mut i, &mut col);
            }
            ',' => {
                out.push((Tok::Comma, span));
                advance(1, &mut i, &mut col);
            }
            '=' => {
                out.push((Tok::Equals, span));
                advance(1, &mut i, &mut col);
            }
            ':' if chars.get(i + 1) == Some(&'-') => {
                out.push((Tok::Neck, span));
                advance(2, &mut i, &mut col);
            }
            ':' => {
                out.push((Tok::Colon, span));
                advance(1, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push((Tok::Arrow, span));
                advance(2, &mut i, &mut col);
            }
            '#' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && is_word(chars[j]) {
                    j += 1;
                }
                if j == start {
                    return Err(err(line, col, "expected directive name after `#`".into()));
                }
                let word: String = chars[start..j].iter().collect();
                out.push((Tok::Directive(word), span));
                advance(j - i, &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j < chars.len() && is_word(chars[j]) {
                    return Err(err(line, col, "malformed numeral".into()));
                }
                out.push((Tok::Numeral(chars[i..j].iter().collect()), span));
                advance(j - i, &mut i, &mut col);
            }
            c if c.is_ascii_lowercase() || c.is_ascii_uppercase() || c == '_' => {
                let mut j = i;
                while j < chars.len() && is_word(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                let tok = if c.is_ascii_lowercase() {
                    Tok::Ident(word)
                } else {
                    Tok::Var(word)
                };
                out.push((tok, span));
                advance(j - i, &mut i, &mut col);
            }
            other => return Err(err(line, col, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

fn is_word(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}
