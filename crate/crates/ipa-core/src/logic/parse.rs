//! Parser for the canonical expression syntax.
//!
//! Grammar, loosest to tightest binding:
//!
//! ```text
//! expr    ::= or ("=>" expr)?                      right associative
//! or      ::= and ("|" and)*
//! and     ::= unary ("&" unary)*
//! unary   ::= "!" unary | cmp
//! cmp     ::= sum (("=" | "!=" | "<" | "<=" | ">" | ">=") sum)?
//! sum     ::= app (("+" | "-") integer)*
//! app     ::= atom ("(" expr ("," expr)* ")")?
//! atom    ::= "true" | "false" | integer | "-" integer | ident
//!           | "ITE" "(" expr "," expr "," expr ")"
//!           | "LAMBDA" "(" ident ("," ident)* ")" "." expr
//!           | "(" expr ")"
//! ```
//!
//! `<=`, `>=`, `>`, `!=`, and `=>` are sugar for the core connectives, so
//! rendering an expression and parsing it back yields a structurally equal
//! tree. Identifiers resolve against a signature plus named integer
//! constants; lambda parameters shadow both.

use crate::logic::expr::{Expr, Sort};
use crate::logic::sig::Signature;
use num_bigint::BigInt;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// Symbol resolution context for the parser.
#[derive(Debug, Clone, Copy)]
pub struct ParseCtx<'a> {
    pub sig: &'a Signature,
    /// Named integer literals (enumeration aliases).
    pub consts: &'a BTreeMap<String, BigInt>,
}

impl<'a> ParseCtx<'a> {
    pub fn new(sig: &'a Signature, consts: &'a BTreeMap<String, BigInt>) -> ParseCtx<'a> {
        ParseCtx { sig, consts }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    Amp,
    Pipe,
    Arrow,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
}

struct Lexer {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
}

fn lex(text: &str, line: usize) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
            }
            '#' => break,
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                toks.push((Tok::Comma, col));
                i += 1;
            }
            '.' => {
                toks.push((Tok::Dot, col));
                i += 1;
            }
            '&' => {
                toks.push((Tok::Amp, col));
                i += 1;
            }
            '|' => {
                toks.push((Tok::Pipe, col));
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '!' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Neq, col));
                    i += 2;
                } else {
                    toks.push((Tok::Bang, col));
                    i += 1;
                }
            }
            '=' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    toks.push((Tok::Arrow, col));
                    i += 2;
                } else {
                    toks.push((Tok::Eq, col));
                    i += 1;
                }
            }
            '<' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Le, col));
                    i += 2;
                } else {
                    toks.push((Tok::Lt, col));
                    i += 1;
                }
            }
            '>' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    toks.push((Tok::Ge, col));
                    i += 2;
                } else {
                    toks.push((Tok::Gt, col));
                    i += 1;
                }
            }
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().unwrap();
                toks.push((Tok::Int(v), col));
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((Tok::Ident(text[start..i].to_string()), col));
            }
            _ => {
                return Err(ParseError {
                    line,
                    col,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        line,
        end_col: text.len() + 1,
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            col: self.col(),
            msg: msg.into(),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(t) if *t == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err(format!("expected {what}"))),
        }
    }
}

struct Parser<'a> {
    lx: Lexer,
    ctx: ParseCtx<'a>,
    bound: Vec<String>,
}

/// Parse a single expression occupying the whole input. `line` seeds the
/// positions used in diagnostics.
pub fn parse_expr_at(text: &str, ctx: ParseCtx<'_>, line: usize) -> Result<Expr, ParseError> {
    let lx = lex(text, line)?;
    let mut p = Parser {
        lx,
        ctx,
        bound: Vec::new(),
    };
    let e = p.expr()?;
    if p.lx.peek().is_some() {
        return Err(p.lx.err("trailing input after expression"));
    }
    Ok(e)
}

pub fn parse_expr(text: &str, ctx: ParseCtx<'_>) -> Result<Expr, ParseError> {
    parse_expr_at(text, ctx, 1)
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.or_expr()?;
        if self.lx.peek() == Some(&Tok::Arrow) {
            self.lx.next();
            let rhs = self.expr()?;
            return Ok(Expr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.and_expr()?];
        while self.lx.peek() == Some(&Tok::Pipe) {
            self.lx.next();
            parts.push(self.and_expr()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(Expr::or(parts))
        }
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.lx.peek() == Some(&Tok::Amp) {
            self.lx.next();
            parts.push(self.unary()?);
        }
        if parts.len() == 1 {
            Ok(parts.pop().unwrap())
        } else {
            Ok(Expr::and(parts))
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.lx.peek() == Some(&Tok::Bang) {
            self.lx.next();
            let a = self.unary()?;
            return Ok(Expr::not(a));
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.sum()?;
        let op = match self.lx.peek() {
            Some(Tok::Eq) => Tok::Eq,
            Some(Tok::Neq) => Tok::Neq,
            Some(Tok::Lt) => Tok::Lt,
            Some(Tok::Le) => Tok::Le,
            Some(Tok::Gt) => Tok::Gt,
            Some(Tok::Ge) => Tok::Ge,
            _ => return Ok(lhs),
        };
        self.lx.next();
        let rhs = self.sum()?;
        Ok(match op {
            Tok::Eq => Expr::int_eq(lhs, rhs),
            Tok::Neq => Expr::not(Expr::int_eq(lhs, rhs)),
            Tok::Lt => Expr::int_lt(lhs, rhs),
            Tok::Le => Expr::int_le(lhs, rhs),
            Tok::Gt => Expr::int_lt(rhs, lhs),
            Tok::Ge => Expr::int_ge(lhs, rhs),
            _ => unreachable!(),
        })
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.app()?;
        loop {
            let neg = match self.lx.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.lx.next();
            match self.lx.next() {
                Some(Tok::Int(v)) => {
                    e = Expr::plus(e, if neg { -v } else { v });
                }
                _ => return Err(self.lx.err("expected integer constant after `+`/`-`")),
            }
        }
        Ok(e)
    }

    fn app(&mut self) -> Result<Expr, ParseError> {
        let head = self.atom()?;
        if self.lx.peek() != Some(&Tok::LParen) {
            return Ok(head);
        }
        use crate::logic::subst::{kind_of, Kind};
        let kind = kind_of(&head);
        if kind != Kind::FuncLike && kind != Kind::PredLike {
            return Ok(head);
        }
        self.lx.next();
        let mut args = vec![self.expr()?];
        while self.lx.peek() == Some(&Tok::Comma) {
            self.lx.next();
            args.push(self.expr()?);
        }
        self.lx.expect(Tok::RParen, "`)` after arguments")?;
        Ok(if kind == Kind::PredLike {
            Expr::pred_apply(head, args)
        } else {
            Expr::func_apply(head, args)
        })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let col = self.lx.col();
        match self.lx.next() {
            Some(Tok::Int(v)) => Ok(Expr::int(v)),
            Some(Tok::Minus) => match self.lx.next() {
                Some(Tok::Int(v)) => Ok(Expr::int(-v)),
                _ => Err(ParseError {
                    line: self.lx.line,
                    col,
                    msg: "expected integer after unary `-`".into(),
                }),
            },
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.lx.expect(Tok::RParen, "closing `)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "true" => Ok(Expr::truth(true)),
                "false" => Ok(Expr::truth(false)),
                "ITE" => {
                    self.lx.expect(Tok::LParen, "`(` after ITE")?;
                    let c = self.expr()?;
                    self.lx.expect(Tok::Comma, "`,` in ITE")?;
                    let t = self.expr()?;
                    self.lx.expect(Tok::Comma, "`,` in ITE")?;
                    let f = self.expr()?;
                    self.lx.expect(Tok::RParen, "`)` closing ITE")?;
                    Ok(Expr::ite(c, t, f))
                }
                "LAMBDA" => self.lambda(),
                _ => self.resolve(name, col),
            },
            _ => Err(ParseError {
                line: self.lx.line,
                col,
                msg: "expected an expression".into(),
            }),
        }
    }

    fn lambda(&mut self) -> Result<Expr, ParseError> {
        self.lx.expect(Tok::LParen, "`(` after LAMBDA")?;
        let mut params = Vec::new();
        loop {
            match self.lx.next() {
                Some(Tok::Ident(p)) => params.push(p),
                _ => return Err(self.lx.err("expected lambda parameter name")),
            }
            match self.lx.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => return Err(self.lx.err("expected `,` or `)` in parameter list")),
            }
        }
        self.lx.expect(Tok::Dot, "`.` after lambda parameters")?;
        let depth = self.bound.len();
        self.bound.extend(params.iter().cloned());
        let body = self.expr();
        self.bound.truncate(depth);
        let body = body?;
        // The lambda's own sort follows from the body; an integer body
        // yields a function, a Boolean body a predicate.
        use crate::logic::subst::{kind_of, Kind};
        Ok(match kind_of(&body) {
            Kind::Bool => Expr::lambda_bool(params, body),
            Kind::Int => Expr::lambda_int(params, body),
            _ => {
                return Err(self.lx.err("lambda body must be an integer or Boolean"));
            }
        })
    }

    fn resolve(&mut self, name: String, col: usize) -> Result<Expr, ParseError> {
        if self.bound.iter().rev().any(|b| *b == name) {
            return Ok(Expr::lambda_var(name));
        }
        if let Some(v) = self.ctx.consts.get(&name) {
            return Ok(Expr::int(v.clone()));
        }
        match self.ctx.sig.sort_of(&name) {
            Some(Sort::Bool) => Ok(Expr::bool_sym(name)),
            Some(Sort::Int) => Ok(Expr::int_sym(name)),
            Some(Sort::Func(_)) => Ok(Expr::func_sym(name)),
            Some(Sort::Pred(_)) => Ok(Expr::pred_sym(name)),
            None => Err(ParseError {
                line: self.lx.line,
                col,
                msg: format!("undeclared symbol `{name}`"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::sig::SymbolClass;

    fn ctx_fixture() -> (Signature, BTreeMap<String, BigInt>) {
        let mut sig = Signature::new();
        sig.declare("F", Sort::Func(1), SymbolClass::State).unwrap();
        sig.declare("G", Sort::Func(2), SymbolClass::State).unwrap();
        sig.declare("S", Sort::Pred(1), SymbolClass::State).unwrap();
        sig.declare("b", Sort::Bool, SymbolClass::State).unwrap();
        sig.declare("x", Sort::Int, SymbolClass::Index).unwrap();
        sig.declare("i", Sort::Int, SymbolClass::Input).unwrap();
        let mut consts = BTreeMap::new();
        consts.insert("two".to_string(), BigInt::from(2));
        (sig, consts)
    }

    #[test]
    fn parses_running_example_shapes() {
        let (sig, consts) = ctx_fixture();
        let ctx = ParseCtx::new(&sig, &consts);
        let e = parse_expr("LAMBDA (u). ITE(u = i, F(i + 1), F(u))", ctx).unwrap();
        assert_eq!(e.to_string(), "LAMBDA (u). ITE(u = i, F(i + 1), F(u))");
        let e = parse_expr("F(x) >= 0", ctx).unwrap();
        assert_eq!(
            e,
            Expr::int_ge(
                Expr::func_apply(Expr::func_sym("F"), vec![Expr::int_sym("x")]),
                Expr::int(0)
            )
        );
    }

    #[test]
    fn sugar_desugars() {
        let (sig, consts) = ctx_fixture();
        let ctx = ParseCtx::new(&sig, &consts);
        assert_eq!(
            parse_expr("x <= i", ctx).unwrap(),
            Expr::int_le(Expr::int_sym("x"), Expr::int_sym("i"))
        );
        assert_eq!(
            parse_expr("x != i", ctx).unwrap(),
            Expr::not(Expr::int_eq(Expr::int_sym("x"), Expr::int_sym("i")))
        );
        assert_eq!(
            parse_expr("b => S(x)", ctx).unwrap(),
            Expr::implies(
                Expr::bool_sym("b"),
                Expr::pred_apply(Expr::pred_sym("S"), vec![Expr::int_sym("x")])
            )
        );
        assert_eq!(parse_expr("x - 3", ctx).unwrap(), Expr::plus(Expr::int_sym("x"), -3));
        assert_eq!(parse_expr("two", ctx).unwrap(), Expr::int(2));
    }

    #[test]
    fn undeclared_symbol_reports_position() {
        let (sig, consts) = ctx_fixture();
        let ctx = ParseCtx::new(&sig, &consts);
        let err = parse_expr("x = nope", ctx).unwrap_err();
        assert_eq!((err.line, err.col), (1, 5));
    }

    #[test]
    fn precedence_not_vs_cmp_vs_and() {
        let (sig, consts) = ctx_fixture();
        let ctx = ParseCtx::new(&sig, &consts);
        let e = parse_expr("!x = i & b", ctx).unwrap();
        assert_eq!(
            e,
            Expr::and(vec![
                Expr::not(Expr::int_eq(Expr::int_sym("x"), Expr::int_sym("i"))),
                Expr::bool_sym("b")
            ])
        );
    }

    #[test]
    fn multi_arity_application() {
        let (sig, consts) = ctx_fixture();
        let ctx = ParseCtx::new(&sig, &consts);
        let e = parse_expr("G(x, i + 1) = 0", ctx).unwrap();
        assert_eq!(
            e,
            Expr::int_eq(
                Expr::func_apply(
                    Expr::func_sym("G"),
                    vec![Expr::int_sym("x"), Expr::plus(Expr::int_sym("i"), 1)]
                ),
                Expr::int(0)
            )
        );
    }
}
