//! Parser for the textual syntax of types and terms.
//!
//! ```text
//! type  ::= 'Pi' ident '.' type | atype ('->' type)?
//! atype ::= ident | '(' type ')'
//! term  ::= 'lam' ident ':' type '.' term
//!         | 'Lam' ident '.' term
//!         | post+ term-binder?          -- application, left associative
//! post  ::= atom ('{' type '}')*
//! atom  ::= ident | '(' term ')'
//! ```
//!
//! Unicode spellings `λ`, `\`, `Λ`, `Π`, `→` are accepted as well. In types,
//! an identifier is a type variable when bound by `Pi`/`Lam`, a sort when
//! declared in the signature, and a free type variable otherwise. In terms,
//! identifiers resolve to `lam`-bound variables, then constants, then the
//! supplied free-variable environment.

use thiserror::Error;

use super::check::Env;
use super::signature::Signature;
use super::term::Term;
use super::types::Type;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Lam,
    TyLam,
    Pi,
    Arrow,
    Dot,
    Colon,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '.' => Some(Tok::Dot),
            ':' => Some(Tok::Colon),
            'λ' | '\\' => Some(Tok::Lam),
            'Λ' => Some(Tok::TyLam),
            'Π' => Some(Tok::Pi),
            '→' => Some(Tok::Arrow),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((tok, i));
            continue;
        }
        if c == '-' {
            chars.next();
            match chars.next() {
                Some((_, '>')) => out.push((Tok::Arrow, i)),
                _ => return Err(ParseError::Syntax { offset: i, message: "expected `->`".into() }),
            }
            continue;
        }
        if is_ident_char(c) {
            let mut word = String::new();
            while let Some(&(_, c)) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                word.push(c);
                chars.next();
            }
            let tok = match word.as_str() {
                "lam" => Tok::Lam,
                "Lam" => Tok::TyLam,
                "Pi" => Tok::Pi,
                _ => Tok::Ident(word),
            };
            out.push((tok, i));
            continue;
        }
        return Err(ParseError::Syntax { offset: i, message: format!("unexpected character `{c}`") });
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
    env: &'a Env,
    tvars: Vec<String>,
    vars: Vec<(String, Type)>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, sig: &'a Signature, env: &'a Env) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, pos: 0, sig, env, tvars: Vec::new(), vars: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.bump() {
            Tok::Ident(s) => Ok(s),
            _ => {
                self.pos -= 1;
                self.err("expected identifier")
            }
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }

    fn ty(&mut self) -> Result<Type, ParseError> {
        if *self.peek() == Tok::Pi {
            self.bump();
            let v = self.ident()?;
            self.expect(Tok::Dot, "`.`")?;
            self.tvars.push(v.clone());
            let body = self.ty();
            self.tvars.pop();
            return Ok(Type::forall(v, body?));
        }
        let lhs = self.atype()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            return Ok(Type::arrow(lhs, rhs));
        }
        Ok(lhs)
    }

    fn atype(&mut self) -> Result<Type, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(name) => {
                self.bump();
                if self.tvars.contains(&name) || !self.sig.has_sort(&name) {
                    Ok(Type::Var(name))
                } else {
                    Ok(Type::Sort(name))
                }
            }
            _ => self.err("expected type"),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Tok::Lam => {
                self.bump();
                let x = self.ident()?;
                self.expect(Tok::Colon, "`:`")?;
                let ty = self.ty()?;
                self.expect(Tok::Dot, "`.`")?;
                self.vars.push((x.clone(), ty.clone()));
                let body = self.term();
                self.vars.pop();
                Ok(Term::lam(x, ty, body?))
            }
            Tok::TyLam => {
                self.bump();
                let a = self.ident()?;
                self.expect(Tok::Dot, "`.`")?;
                self.tvars.push(a.clone());
                let body = self.term();
                self.tvars.pop();
                Ok(Term::ty_lam(a, body?))
            }
            _ => {
                let mut acc = self.postfix()?;
                loop {
                    match self.peek() {
                        Tok::Ident(_) | Tok::LParen => {
                            let arg = self.postfix()?;
                            acc = Term::app(acc, arg);
                        }
                        Tok::Lam | Tok::TyLam => {
                            let arg = self.term()?;
                            return Ok(Term::app(acc, arg));
                        }
                        _ => return Ok(acc),
                    }
                }
            }
        }
    }

    fn postfix(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while *self.peek() == Tok::LBrace {
            self.bump();
            let ty = self.ty()?;
            self.expect(Tok::RBrace, "`}`")?;
            t = Term::ty_app(t, ty);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some((_, ty)) = self.vars.iter().rev().find(|(x, _)| *x == name) {
                    return Ok(Term::Var(name, ty.clone()));
                }
                if let Some(ty) = self.sig.constant_type(&name) {
                    return Ok(Term::Const(name, ty.clone()));
                }
                if let Some(ty) = self.env.get(&name) {
                    return Ok(Term::Var(name, ty.clone()));
                }
                Err(ParseError::UnknownIdentifier(name))
            }
            _ => self.err("expected term"),
        }
    }
}

pub fn parse_type(sig: &Signature, src: &str) -> Result<Type, ParseError> {
    let env = Env::new();
    let mut p = Parser::new(src, sig, &env)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_term(sig: &Signature, src: &str) -> Result<Term, ParseError> {
    parse_term_in(sig, &Env::new(), src)
}

/// Parses a term whose free variables are typed by `env`.
pub fn parse_term_in(sig: &Signature, env: &Env, src: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(src, sig, env)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
