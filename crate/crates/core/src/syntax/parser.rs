//! Recursive-descent parser with declaration-level error recovery: on a
//! syntax error the parser reports a diagnostic and skips ahead to the next
//! token that can start a declaration, so one pass surfaces several errors.

use crate::confidence::Technique;
use crate::graph::Direction;

use super::lexer::{lex, Token, TokenKind};
use super::{
    CmpOp, ConnectDecl, Decl, Diagnostic, Formula, FuncDecl, NodeDecl, PortDecl, PredDecl,
    QuantKind, SortDecl, SpecFile, Term, TypeExpr, TypeExprKind,
};

/// Parses a `.agspec` source text. Any diagnostic — lexical or syntactic —
/// fails the parse; the returned list contains every problem found.
pub fn parse_spec(src: &str) -> Result<SpecFile, Vec<Diagnostic>> {
    let (tokens, mut diags) = lex(src);
    let mut parser = Parser { tokens, pos: 0, diags: Vec::new() };
    let spec = parser.parse_file();
    diags.append(&mut parser.diags);
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<Diagnostic>,
}

/// Internal error marker: the diagnostic has already been recorded.
type Fallible<T> = Result<T, ()>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_kind(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn advance(&mut self) -> Token {
        let token = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        token
    }

    fn error_here(&mut self, code: &str, message: String) {
        let span = self.peek().span;
        self.diags.push(Diagnostic::error(code, message, span));
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Fallible<Token> {
        if *self.peek_kind() == kind {
            Ok(self.advance())
        } else {
            let found = self.peek_kind().describe();
            self.error_here("parse-expected-token", format!("expected {what}, found {found}"));
            Err(())
        }
    }

    fn expect_ident(&mut self, what: &str) -> Fallible<(String, super::Span)> {
        match self.peek_kind() {
            TokenKind::Ident(_) => {
                let token = self.advance();
                let TokenKind::Ident(name) = token.kind else { unreachable!() };
                Ok((name, token.span))
            }
            other => {
                let found = other.describe();
                self.error_here("parse-expected-token", format!("expected {what}, found {found}"));
                Err(())
            }
        }
    }

    /// Skips ahead to the next plausible declaration start.
    fn synchronize(&mut self) {
        loop {
            match self.peek_kind() {
                TokenKind::Eof
                | TokenKind::KwSort
                | TokenKind::KwFunc
                | TokenKind::KwPred
                | TokenKind::KwNode
                | TokenKind::KwConnect => return,
                _ => {
                    self.advance();
                }
            }
        }
    }

    fn parse_file(&mut self) -> SpecFile {
        let mut decls = Vec::new();
        loop {
            let result = match self.peek_kind() {
                TokenKind::Eof => break,
                TokenKind::KwSort => self.parse_sort().map(Decl::Sort),
                TokenKind::KwFunc => self.parse_func().map(Decl::Func),
                TokenKind::KwPred => self.parse_pred().map(Decl::Pred),
                TokenKind::KwNode => self.parse_node().map(Decl::Node),
                TokenKind::KwConnect => self.parse_connect().map(Decl::Connect),
                other => {
                    let found = other.describe();
                    self.error_here(
                        "parse-expected-declaration",
                        format!(
                            "expected a declaration (sort, func, pred, node, or connect), found {found}"
                        ),
                    );
                    self.advance();
                    Err(())
                }
            };
            match result {
                Ok(decl) => decls.push(decl),
                Err(()) => self.synchronize(),
            }
        }
        SpecFile { decls }
    }

    fn parse_sort(&mut self) -> Fallible<SortDecl> {
        let kw = self.advance();
        let (name, _) = self.expect_ident("a sort name")?;
        Ok(SortDecl { name, span: kw.span })
    }

    fn parse_func(&mut self) -> Fallible<FuncDecl> {
        let kw = self.advance();
        let (name, _) = self.expect_ident("a function name")?;
        let params = self.parse_param_types()?;
        self.expect(TokenKind::Colon, "':' before the result type")?;
        let result = self.parse_type()?;
        Ok(FuncDecl { name, params, result, span: kw.span })
    }

    fn parse_pred(&mut self) -> Fallible<PredDecl> {
        let kw = self.advance();
        let (name, _) = self.expect_ident("a predicate name")?;
        let params = self.parse_param_types()?;
        Ok(PredDecl { name, params, span: kw.span })
    }

    fn parse_param_types(&mut self) -> Fallible<Vec<TypeExpr>> {
        self.expect(TokenKind::LParen, "'('")?;
        let mut params = Vec::new();
        if *self.peek_kind() != TokenKind::RParen {
            loop {
                params.push(self.parse_type()?);
                if *self.peek_kind() == TokenKind::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(TokenKind::RParen, "')'")?;
        Ok(params)
    }

    fn parse_type(&mut self) -> Fallible<TypeExpr> {
        match self.peek_kind() {
            TokenKind::Ident(name) if name == "Set" => {
                let set = self.advance();
                self.expect(TokenKind::Lt, "'<'")?;
                let (element, _) = self.expect_ident("a sort name")?;
                let close = self.expect(TokenKind::Gt, "'>' to close the set type")?;
                let len = close.span.col + close.span.len - set.span.col;
                let span = super::Span::new(set.span.line, set.span.col, len);
                Ok(TypeExpr { kind: TypeExprKind::Set(element), span })
            }
            TokenKind::Ident(_) => {
                let (name, span) = self.expect_ident("a type")?;
                Ok(TypeExpr { kind: TypeExprKind::Named(name), span })
            }
            other => {
                let found = other.describe();
                self.error_here("parse-expected-type", format!("expected a type, found {found}"));
                Err(())
            }
        }
    }

    fn parse_node(&mut self) -> Fallible<NodeDecl> {
        let kw = self.advance();
        let (name, _) = self.expect_ident("a node name")?;
        self.expect(TokenKind::LBrace, "'{'")?;
        let mut ports = Vec::new();
        loop {
            let direction = match self.peek_kind() {
                TokenKind::KwIn => Direction::In,
                TokenKind::KwOut => Direction::Out,
                _ => break,
            };
            let dir_token = self.advance();
            let (port_name, _) = self.expect_ident("a port name")?;
            self.expect(TokenKind::Colon, "':' before the port type")?;
            let ty = self.parse_type()?;
            ports.push(PortDecl { direction, name: port_name, ty, span: dir_token.span });
        }
        let assumes_kw = self.expect(TokenKind::KwAssumes, "'assumes'")?;
        let assumes = self.parse_formula()?;
        let guarantees_kw = self.expect(TokenKind::KwGuarantees, "'guarantees'")?;
        let guarantees = self.parse_formula()?;
        let mut evidence: Vec<(Technique, super::Span)> = Vec::new();
        if *self.peek_kind() == TokenKind::KwEvidence {
            self.advance();
            loop {
                let (word, span) = self.expect_ident("an evidence keyword")?;
                match word.parse::<Technique>() {
                    Ok(technique) => {
                        if evidence.iter().any(|(t, _)| *t == technique) {
                            self.diags.push(Diagnostic::error(
                                "parse-duplicate-evidence",
                                format!("evidence keyword `{word}` appears more than once"),
                                span,
                            ));
                            return Err(());
                        }
                        evidence.push((technique, span));
                    }
                    Err(_) => {
                        self.diags.push(Diagnostic::error(
                            "parse-unknown-evidence",
                            format!(
                                "unknown evidence keyword `{word}`; expected testing, simulation, or formal"
                            ),
                            span,
                        ));
                        return Err(());
                    }
                }
                if *self.peek_kind() == TokenKind::Comma {
                    self.advance();
                } else {
                    break;
                }
            }
        }
        self.expect(TokenKind::RBrace, "'}'")?;
        Ok(NodeDecl {
            name,
            ports,
            assumes,
            assumes_span: assumes_kw.span,
            guarantees,
            guarantees_span: guarantees_kw.span,
            evidence,
            span: kw.span,
        })
    }

    fn parse_connect(&mut self) -> Fallible<ConnectDecl> {
        let kw = self.advance();
        let (from_node, _) = self.expect_ident("a node name")?;
        self.expect(TokenKind::Dot, "'.'")?;
        let (from_port, _) = self.expect_ident("a port name")?;
        self.expect(TokenKind::Arrow, "'->'")?;
        let (to_node, _) = self.expect_ident("a node name")?;
        self.expect(TokenKind::Dot, "'.'")?;
        let (to_port, _) = self.expect_ident("a port name")?;
        Ok(ConnectDecl { from: (from_node, from_port), to: (to_node, to_port), span: kw.span })
    }

    // Formulas. Loosest to tightest: `=>` (right-assoc), `or`, `and`, `not`.
    // Quantifier bodies extend maximally to the right.
    fn parse_formula(&mut self) -> Fallible<Formula> {
        let lhs = self.parse_or()?;
        if *self.peek_kind() == TokenKind::Implies {
            self.advance();
            let rhs = self.parse_formula()?;
            Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn parse_or(&mut self) -> Fallible<Formula> {
        let mut lhs = self.parse_and()?;
        while *self.peek_kind() == TokenKind::KwOr {
            self.advance();
            let rhs = self.parse_and()?;
            lhs = Formula::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_and(&mut self) -> Fallible<Formula> {
        let mut lhs = self.parse_unary()?;
        while *self.peek_kind() == TokenKind::KwAnd {
            self.advance();
            let rhs = self.parse_unary()?;
            lhs = Formula::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn parse_unary(&mut self) -> Fallible<Formula> {
        match self.peek_kind() {
            TokenKind::KwNot => {
                self.advance();
                let body = self.parse_unary()?;
                Ok(Formula::Not(Box::new(body)))
            }
            TokenKind::KwForall | TokenKind::KwExists => self.parse_quantifier(),
            _ => self.parse_atom(),
        }
    }

    fn parse_quantifier(&mut self) -> Fallible<Formula> {
        let kw = self.advance();
        let kind =
            if kw.kind == TokenKind::KwForall { QuantKind::Forall } else { QuantKind::Exists };
        let (var, var_span) = self.expect_ident("a variable name")?;
        self.expect(TokenKind::Colon, "':' before the variable's sort")?;
        let (sort_name, sort_span) = self.expect_ident("a sort name")?;
        self.expect(TokenKind::Dot, "'.' before the quantifier body")?;
        let body = self.parse_formula()?;
        Ok(Formula::Quant { kind, var, var_span, sort_name, sort_span, body: Box::new(body) })
    }

    fn parse_atom(&mut self) -> Fallible<Formula> {
        match self.peek_kind() {
            TokenKind::KwTrue => {
                self.advance();
                Ok(Formula::True)
            }
            TokenKind::KwFalse => {
                self.advance();
                Ok(Formula::False)
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.parse_formula()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            TokenKind::Ident(_) | TokenKind::Nat(_) => {
                let lhs = self.parse_term()?;
                let op = match self.peek_kind() {
                    TokenKind::Eq => Some(CmpOp::Eq),
                    TokenKind::Neq => Some(CmpOp::Neq),
                    TokenKind::Le => Some(CmpOp::Le),
                    TokenKind::Lt => Some(CmpOp::Lt),
                    TokenKind::KwIn => Some(CmpOp::In),
                    _ => None,
                };
                match op {
                    Some(op) => {
                        self.advance();
                        let rhs = self.parse_term()?;
                        Ok(Formula::Cmp { op, lhs, rhs })
                    }
                    None => match lhs {
                        Term::App { name, span, args } => {
                            Ok(Formula::Pred { name, name_span: span, args })
                        }
                        other => {
                            self.diags.push(Diagnostic::error(
                                "parse-expected-formula",
                                "a bare term is not a formula; expected a comparison, \
                                 a membership test, or a predicate application"
                                    .to_string(),
                                other.span(),
                            ));
                            Err(())
                        }
                    },
                }
            }
            other => {
                let found = other.describe();
                self.error_here(
                    "parse-expected-formula",
                    format!("expected a formula, found {found}"),
                );
                Err(())
            }
        }
    }

    fn parse_term(&mut self) -> Fallible<Term> {
        match self.peek_kind() {
            TokenKind::Ident(_) => {
                let (name, span) = self.expect_ident("a term")?;
                if *self.peek_kind() == TokenKind::LParen {
                    self.advance();
                    let mut args = Vec::new();
                    if *self.peek_kind() != TokenKind::RParen {
                        loop {
                            args.push(self.parse_term()?);
                            if *self.peek_kind() == TokenKind::Comma {
                                self.advance();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(TokenKind::RParen, "')'")?;
                    Ok(Term::App { name, span, args })
                } else {
                    Ok(Term::Ident { name, span })
                }
            }
            TokenKind::Nat(_) => {
                let token = self.advance();
                let TokenKind::Nat(value) = token.kind else { unreachable!() };
                Ok(Term::Nat { value, span: token.span })
            }
            other => {
                let found = other.describe();
                self.error_here("parse-expected-term", format!("expected a term, found {found}"));
                Err(())
            }
        }
    }
}
