//! Hand-rolled lexer: maximal munch, 1-based line/column spans, `--` line
//! comments. Bad characters are reported and skipped so the parser still
//! sees the rest of the file.

use super::{Diagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Nat(u64),
    KwSort,
    KwFunc,
    KwPred,
    KwNode,
    KwIn,
    KwOut,
    KwAssumes,
    KwGuarantees,
    KwEvidence,
    KwConnect,
    KwForall,
    KwExists,
    KwTrue,
    KwFalse,
    KwAnd,
    KwOr,
    KwNot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    /// `<` — less-than in formulas, opening angle in `Set<...>`.
    Lt,
    /// `>` — only meaningful as the closing angle of `Set<...>`.
    Gt,
    Le,
    Eq,
    Neq,
    Implies,
    Arrow,
    Comma,
    Colon,
    Dot,
    Eof,
}

impl TokenKind {
    /// Human-readable name for diagnostics.
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(name) => format!("identifier '{name}'"),
            TokenKind::Nat(value) => format!("number '{value}'"),
            TokenKind::KwSort => "'sort'".into(),
            TokenKind::KwFunc => "'func'".into(),
            TokenKind::KwPred => "'pred'".into(),
            TokenKind::KwNode => "'node'".into(),
            TokenKind::KwIn => "'in'".into(),
            TokenKind::KwOut => "'out'".into(),
            TokenKind::KwAssumes => "'assumes'".into(),
            TokenKind::KwGuarantees => "'guarantees'".into(),
            TokenKind::KwEvidence => "'evidence'".into(),
            TokenKind::KwConnect => "'connect'".into(),
            TokenKind::KwForall => "'forall'".into(),
            TokenKind::KwExists => "'exists'".into(),
            TokenKind::KwTrue => "'true'".into(),
            TokenKind::KwFalse => "'false'".into(),
            TokenKind::KwAnd => "'and'".into(),
            TokenKind::KwOr => "'or'".into(),
            TokenKind::KwNot => "'not'".into(),
            TokenKind::LParen => "'('".into(),
            TokenKind::RParen => "')'".into(),
            TokenKind::LBrace => "'{'".into(),
            TokenKind::RBrace => "'}'".into(),
            TokenKind::Lt => "'<'".into(),
            TokenKind::Gt => "'>'".into(),
            TokenKind::Le => "'<='".into(),
            TokenKind::Eq => "'='".into(),
            TokenKind::Neq => "'!='".into(),
            TokenKind::Implies => "'=>'".into(),
            TokenKind::Arrow => "'->'".into(),
            TokenKind::Comma => "','".into(),
            TokenKind::Colon => "':'".into(),
            TokenKind::Dot => "'.'".into(),
            TokenKind::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub span: Span,
}

fn keyword(ident: &str) -> Option<TokenKind> {
    Some(match ident {
        "sort" => TokenKind::KwSort,
        "func" => TokenKind::KwFunc,
        "pred" => TokenKind::KwPred,
        "node" => TokenKind::KwNode,
        "in" => TokenKind::KwIn,
        "out" => TokenKind::KwOut,
        "assumes" => TokenKind::KwAssumes,
        "guarantees" => TokenKind::KwGuarantees,
        "evidence" => TokenKind::KwEvidence,
        "connect" => TokenKind::KwConnect,
        "forall" => TokenKind::KwForall,
        "exists" => TokenKind::KwExists,
        "true" => TokenKind::KwTrue,
        "false" => TokenKind::KwFalse,
        "and" => TokenKind::KwAnd,
        "or" => TokenKind::KwOr,
        "not" => TokenKind::KwNot,
        _ => return None,
    })
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer { chars: src.chars().peekable(), line: 1, col: 1 }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span::new(self.line, self.col, 1)
    }
}

/// Tokenizes the whole input. The token list always ends with `Eof`.
pub fn lex(src: &str) -> (Vec<Token>, Vec<Diagnostic>) {
    let mut lx = Lexer::new(src);
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = lx.peek() {
        if c.is_whitespace() {
            lx.bump();
            continue;
        }
        let start = lx.here();
        if c.is_ascii_alphabetic() || c == '_' {
            let mut ident = String::new();
            while let Some(c) = lx.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    ident.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            let span = Span::new(start.line, start.col, ident.chars().count() as u32);
            let kind = keyword(&ident).unwrap_or(TokenKind::Ident(ident));
            tokens.push(Token { kind, span });
            continue;
        }
        if c.is_ascii_digit() {
            let mut digits = String::new();
            while let Some(c) = lx.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            let span = Span::new(start.line, start.col, digits.len() as u32);
            match digits.parse::<u64>() {
                Ok(value) => tokens.push(Token { kind: TokenKind::Nat(value), span }),
                Err(_) => diags.push(Diagnostic::error(
                    "lex-number-too-large",
                    format!("number literal `{digits}` does not fit in 64 bits"),
                    span,
                )),
            }
            continue;
        }
        lx.bump();
        let two = |len| Span::new(start.line, start.col, len);
        let kind = match c {
            '(' => TokenKind::LParen,
            ')' => TokenKind::RParen,
            '{' => TokenKind::LBrace,
            '}' => TokenKind::RBrace,
            ',' => TokenKind::Comma,
            ':' => TokenKind::Colon,
            '.' => TokenKind::Dot,
            '>' => TokenKind::Gt,
            '<' => {
                if lx.peek() == Some('=') {
                    lx.bump();
                    tokens.push(Token { kind: TokenKind::Le, span: two(2) });
                    continue;
                }
                TokenKind::Lt
            }
            '=' => {
                if lx.peek() == Some('>') {
                    lx.bump();
                    tokens.push(Token { kind: TokenKind::Implies, span: two(2) });
                    continue;
                }
                TokenKind::Eq
            }
            '!' => {
                if lx.peek() == Some('=') {
                    lx.bump();
                    tokens.push(Token { kind: TokenKind::Neq, span: two(2) });
                    continue;
                }
                diags.push(Diagnostic::error(
                    "lex-unexpected-char",
                    "unexpected character `!`; did you mean `!=`?",
                    start,
                ));
                continue;
            }
            '-' => match lx.peek() {
                Some('>') => {
                    lx.bump();
                    tokens.push(Token { kind: TokenKind::Arrow, span: two(2) });
                    continue;
                }
                Some('-') => {
                    // Line comment: skip to end of line.
                    while let Some(c) = lx.peek() {
                        if c == '\n' {
                            break;
                        }
                        lx.bump();
                    }
                    continue;
                }
                _ => {
                    diags.push(Diagnostic::error(
                        "lex-unexpected-char",
                        "unexpected character `-`; comments start with `--` and arrows are `->`",
                        start,
                    ));
                    continue;
                }
            },
            other => {
                diags.push(Diagnostic::error(
                    "lex-unexpected-char",
                    format!("unexpected character `{other}`"),
                    start,
                ));
                continue;
            }
        };
        tokens.push(Token { kind, span: start });
    }

    tokens.push(Token { kind: TokenKind::Eof, span: lx.here() });
    (tokens, diags)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(src: &str) -> Vec<TokenKind> {
        let (tokens, diags) = lex(src);
        assert!(diags.is_empty(), "unexpected diagnostics: {diags:?}");
        tokens.into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn punctuation_uses_maximal_munch() {
        assert_eq!(
            kinds("a<=b < c => d -> e = f != g"),
            vec![
                TokenKind::Ident("a".into()),
                TokenKind::Le,
                TokenKind::Ident("b".into()),
                TokenKind::Lt,
                TokenKind::Ident("c".into()),
                TokenKind::Implies,
                TokenKind::Ident("d".into()),
                TokenKind::Arrow,
                TokenKind::Ident("e".into()),
                TokenKind::Eq,
                TokenKind::Ident("f".into()),
                TokenKind::Neq,
                TokenKind::Ident("g".into()),
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn keywords_and_identifiers_are_distinguished() {
        assert_eq!(
            kinds("sort sorting in input"),
            vec![
                TokenKind::KwSort,
                TokenKind::Ident("sorting".into()),
                TokenKind::KwIn,
                TokenKind::Ident("input".into()),
                TokenKind::Eof,
            ]
        );
    }

    #[test]
    fn comments_run_to_end_of_line() {
        assert_eq!(
            kinds("sort -- everything here is ignored -> { } !\npred"),
            vec![TokenKind::KwSort, TokenKind::KwPred, TokenKind::Eof]
        );
    }

    #[test]
    fn spans_are_one_based_lines_and_columns() {
        let (tokens, diags) = lex("sort Location\n  node X");
        assert!(diags.is_empty());
        assert_eq!(tokens[0].span, Span::new(1, 1, 4));
        assert_eq!(tokens[1].span, Span::new(1, 6, 8));
        assert_eq!(tokens[2].span, Span::new(2, 3, 4));
        assert_eq!(tokens[3].span, Span::new(2, 8, 1));
    }

    #[test]
    fn stray_characters_are_reported_and_skipped() {
        let (tokens, diags) = lex("sort ? Plan");
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, "lex-unexpected-char");
        assert_eq!(diags[0].span, Span::new(1, 6, 1));
        // Lexing continues past the bad character.
        assert_eq!(tokens.len(), 3);
    }

    #[test]
    fn lone_dash_is_an_error_not_a_comment() {
        let (_, diags) = lex("a - b");
        assert_eq!(diags.len(), 1);
        assert!(diags[0].message.contains("comments start with `--`"));
    }

    #[test]
    fn numbers_lex_and_overflow_is_reported() {
        let (tokens, diags) = lex("42");
        assert!(diags.is_empty());
        assert_eq!(tokens[0].kind, TokenKind::Nat(42));
        let (_, diags) = lex("99999999999999999999999999");
        assert_eq!(diags[0].code, "lex-number-too-large");
    }
}
