use std::path::Path;
use std::sync::Arc;

use super::ParseError;
use crate::span::SourceSpan;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Str(String),
    Number(String),
    Null(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Dot,
    Arrow,
    Eq,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Str(s) => format!("string \"{s}\""),
            Tok::Number(s) => format!("number `{s}`"),
            Tok::Null(k) => format!("null `_:n{k}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub(crate) tok: Tok,
    pub(crate) span: SourceSpan,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }
}

pub(crate) fn tokenize(text: &str, file: &Arc<Path>) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    // Two-character lookahead for `--`, `->`, `_:n<k>` and negative numbers.
    let rest = |cur: &Cursor<'_>| -> String { cur.chars.clone().take(4).collect() };

    loop {
        while cur.peek().is_some_and(char::is_whitespace) {
            cur.bump();
        }
        let (line, column) = (cur.line, cur.column);
        let span = |len: usize| SourceSpan::new(file.clone(), line, column, len);
        let Some(c) = cur.peek() else {
            out.push(Token {
                tok: Tok::Eof,
                span: span(0),
            });
            return Ok(out);
        };
        let ahead = rest(&cur);

        if ahead.starts_with("--") {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            continue;
        }

        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            ':' => Some(Tok::Colon),
            '.' => Some(Tok::Dot),
            '=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(tok) = single {
            cur.bump();
            out.push(Token { tok, span: span(1) });
            continue;
        }

        if ahead.starts_with("->") {
            cur.bump();
            cur.bump();
            out.push(Token {
                tok: Tok::Arrow,
                span: span(2),
            });
            continue;
        }

        let mut chars = ahead.chars();
        let second = {
            chars.next();
            chars.next()
        };

        if c.is_ascii_digit() || (c == '-' && second.is_some_and(|d| d.is_ascii_digit())) {
            let mut s = String::new();
            s.push(cur.bump().unwrap());
            while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(cur.bump().unwrap());
            }
            // A fractional part needs a digit after the dot; otherwise the dot
            // terminates a declaration.
            let mut look = cur.chars.clone();
            if look.next() == Some('.') && look.next().is_some_and(|d| d.is_ascii_digit()) {
                s.push(cur.bump().unwrap());
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(cur.bump().unwrap());
                }
            }
            let len = s.chars().count();
            out.push(Token {
                tok: Tok::Number(s),
                span: span(len),
            });
            continue;
        }

        if ahead.starts_with("_:n") && ahead[3..].starts_with(|d: char| d.is_ascii_digit()) {
            for _ in 0..3 {
                cur.bump();
            }
            let mut digits = String::new();
            while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                digits.push(cur.bump().unwrap());
            }
            let len = digits.len() + 3;
            let index = digits.parse::<u64>().map_err(|_| ParseError::Syntax {
                span: span(len),
                expected: vec!["null index".into()],
                found: format!("`_:n{digits}`"),
            })?;
            out.push(Token {
                tok: Tok::Null(index),
                span: span(len),
            });
            continue;
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while cur
                .peek()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
            {
                s.push(cur.bump().unwrap());
            }
            let len = s.len();
            out.push(Token {
                tok: Tok::Ident(s),
                span: span(len),
            });
            continue;
        }

        if c == '"' {
            cur.bump();
            let mut s = String::new();
            let mut len = 1;
            loop {
                let Some(c) = cur.bump() else {
                    return Err(ParseError::Syntax {
                        span: span(len),
                        expected: vec!["closing `\"`".into()],
                        found: "end of input".into(),
                    });
                };
                len += 1;
                match c {
                    '"' => break,
                    '\\' => {
                        let esc = cur.bump();
                        len += 1;
                        match esc {
                            Some('"') => s.push('"'),
                            Some('\\') => s.push('\\'),
                            Some('n') => s.push('\n'),
                            Some('t') => s.push('\t'),
                            Some('r') => s.push('\r'),
                            other => {
                                return Err(ParseError::Syntax {
                                    span: span(len),
                                    expected: vec!["escape sequence".into()],
                                    found: other
                                        .map_or("end of input".into(), |c| format!("`\\{c}`")),
                                })
                            }
                        }
                    }
                    '\n' => {
                        return Err(ParseError::Syntax {
                            span: span(len - 1),
                            expected: vec!["closing `\"`".into()],
                            found: "end of line".into(),
                        })
                    }
                    c => s.push(c),
                }
            }
            out.push(Token {
                tok: Tok::Str(s),
                span: span(len),
            });
            continue;
        }

        return Err(ParseError::Syntax {
            span: span(1),
            expected: vec!["token".into()],
            found: format!("character `{c}`"),
        });
    }
}
