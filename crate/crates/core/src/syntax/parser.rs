//! Recursive descent parser for the concrete formula syntax.
//!
//! ```text
//! formula := iff ; iff := impl ("<->" impl)* ; impl := or ("->" or)* ;
//! or := and ("|" and)* ; and := unary ("&" unary)* ;
//! unary := "!" unary | "[" sp "]" unary | "<" sp ">" unary
//!        | "forall" VAR ["."] unary | "exists" VAR ["."] unary | atom ;
//! atom := NAME "(" term ("," term)* ")" | PRED | term "=" term | term "!=" term
//!       | "true" | "false" | "(" formula ")" ;
//! ```
//!
//! Binary operators associate to the right. Derived connectives are expanded
//! on the fly, so the result only contains the core constructors.

use std::fmt;

use thiserror::Error;

use super::formula::{Formula, Term, Var};
use super::vocab::{Signature, UNIVERSAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolKind {
    Predicate,
    Constant,
    Standpoint,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Predicate => "predicate",
            SymbolKind::Constant => "constant",
            SymbolKind::Standpoint => "standpoint",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: expected {expected}, found `{found}`")]
    Syntax {
        pos: Position,
        expected: String,
        found: String,
    },
    #[error("undeclared {kind} `{symbol}` at {pos}")]
    Undeclared {
        pos: Position,
        kind: SymbolKind,
        symbol: String,
    },
    #[error("arity mismatch at {pos}: `{predicate}` expects {expected} argument(s), found {found}")]
    Arity {
        pos: Position,
        predicate: String,
        expected: usize,
        found: usize,
    },
    #[error("`{keyword}` at {pos} cannot be expressed: the vocabulary declares no predicate")]
    NoTruthConstant { pos: Position, keyword: String },
}

impl ParseError {
    pub fn position(&self) -> Position {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::Undeclared { pos, .. }
            | ParseError::Arity { pos, .. }
            | ParseError::NoTruthConstant { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Ident(String),
    Star,
    LBracket,
    RBracket,
    Lt,
    Gt,
    LParen,
    RParen,
    Comma,
    Dot,
    Bang,
    NotEq,
    Eq,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Var(v) => write!(f, "?{v}"),
            Tok::Ident(s) => f.write_str(s),
            Tok::Star => f.write_str("*"),
            Tok::LBracket => f.write_str("["),
            Tok::RBracket => f.write_str("]"),
            Tok::Lt => f.write_str("<"),
            Tok::Gt => f.write_str(">"),
            Tok::LParen => f.write_str("("),
            Tok::RParen => f.write_str(")"),
            Tok::Comma => f.write_str(","),
            Tok::Dot => f.write_str("."),
            Tok::Bang => f.write_str("!"),
            Tok::NotEq => f.write_str("!="),
            Tok::Eq => f.write_str("="),
            Tok::Amp => f.write_str("&"),
            Tok::Pipe => f.write_str("|"),
            Tok::Arrow => f.write_str("->"),
            Tok::DArrow => f.write_str("<->"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
    line_start: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line: 1,
            line_start: 0,
        }
    }

    fn position(&self) -> Position {
        Position {
            offset: self.pos,
            line: self.line,
            column: self.pos - self.line_start + 1,
        }
    }

    fn skip_whitespace(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'\n' {
                self.line += 1;
                self.line_start = self.pos + 1;
            } else if !b.is_ascii_whitespace() {
                break;
            }
            self.pos += 1;
        }
    }

    fn ident_end(&self, from: usize) -> usize {
        let mut end = from;
        while let Some(&b) = self.bytes.get(end) {
            if b.is_ascii_alphanumeric() || b == b'_' {
                end += 1;
            } else {
                break;
            }
        }
        end
    }

    fn tokenize(mut self) -> Result<Vec<(Tok, Position)>, ParseError> {
        let mut out = Vec::new();
        loop {
            self.skip_whitespace();
            let pos = self.position();
            let Some(&b) = self.bytes.get(self.pos) else {
                out.push((Tok::Eof, pos));
                return Ok(out);
            };
            let rest = &self.src[self.pos..];
            let (tok, len) = match b {
                b'?' => {
                    let end = self.ident_end(self.pos + 1);
                    let name = &self.src[self.pos + 1..end];
                    if !name.starts_with(|c: char| c.is_ascii_lowercase()) {
                        return Err(ParseError::Syntax {
                            pos,
                            expected: "variable name after `?`".into(),
                            found: rest.chars().take(end - self.pos + 1).collect(),
                        });
                    }
                    (Tok::Var(name.to_string()), end - self.pos)
                }
                b if b.is_ascii_alphabetic() => {
                    let end = self.ident_end(self.pos);
                    (Tok::Ident(self.src[self.pos..end].to_string()), end - self.pos)
                }
                b'*' => (Tok::Star, 1),
                b'[' => (Tok::LBracket, 1),
                b']' => (Tok::RBracket, 1),
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b',' => (Tok::Comma, 1),
                b'.' => (Tok::Dot, 1),
                b'&' => (Tok::Amp, 1),
                b'|' => (Tok::Pipe, 1),
                b'=' => (Tok::Eq, 1),
                b'>' => (Tok::Gt, 1),
                b'!' if rest.starts_with("!=") => (Tok::NotEq, 2),
                b'!' => (Tok::Bang, 1),
                b'<' if rest.starts_with("<->") => (Tok::DArrow, 3),
                b'<' => (Tok::Lt, 1),
                b'-' if rest.starts_with("->") => (Tok::Arrow, 2),
                _ => {
                    return Err(ParseError::Syntax {
                        pos,
                        expected: "a token".into(),
                        found: rest.chars().next().unwrap().to_string(),
                    })
                }
            };
            out.push((tok, pos));
            self.pos += len;
        }
    }
}

struct Parser<'s> {
    tokens: Vec<(Tok, Position)>,
    idx: usize,
    sig: &'s dyn Signature,
}

type PResult<T> = Result<T, ParseError>;

impl<'s> Parser<'s> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.idx].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        let i = (self.idx + ahead).min(self.tokens.len() - 1);
        &self.tokens[i].0
    }

    fn pos(&self) -> Position {
        self.tokens[self.idx].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.tokens[self.idx].0.clone();
        if self.idx + 1 < self.tokens.len() {
            self.idx += 1;
        }
        tok
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            expected: expected.to_string(),
            found: self.peek().to_string(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(&format!("`{tok}`"))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        self.iff()
    }

    fn iff(&mut self) -> PResult<Formula> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.iff()?;
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let lhs = self.conjunction()?;
        if *self.peek() == Tok::Pipe {
            self.bump();
            let rhs = self.disjunction()?;
            return Ok(Formula::or(lhs, rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let lhs = self.unary()?;
        if *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.conjunction()?;
            return Ok(Formula::and(lhs, rhs));
        }
        Ok(lhs)
    }

    fn standpoint(&mut self) -> PResult<String> {
        let pos = self.pos();
        match self.bump() {
            Tok::Star => Ok(UNIVERSAL.to_string()),
            Tok::Ident(s) if s.starts_with(|c: char| c.is_ascii_lowercase()) => {
                if self.sig.is_standpoint(&s) {
                    Ok(s)
                } else {
                    Err(ParseError::Undeclared {
                        pos,
                        kind: SymbolKind::Standpoint,
                        symbol: s,
                    })
                }
            }
            other => Err(ParseError::Syntax {
                pos,
                expected: "standpoint name or `*`".into(),
                found: other.to_string(),
            }),
        }
    }

    fn quantified_var(&mut self) -> PResult<Var> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                if *self.peek() == Tok::Dot {
                    self.bump();
                }
                Ok(Var::new(v))
            }
            _ => self.error("variable"),
        }
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let s = self.standpoint()?;
                self.expect(Tok::RBracket)?;
                Ok(Formula::boxed(&s, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let s = self.standpoint()?;
                self.expect(Tok::Gt)?;
                Ok(Formula::diamond(&s, self.unary()?))
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let v = self.quantified_var()?;
                let body = self.unary()?;
                Ok(if kw == "forall" {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn term(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(Var::new(v)))
            }
            Tok::Ident(c) if c.starts_with(|ch: char| ch.is_ascii_lowercase()) => {
                self.bump();
                if self.sig.is_constant(&c) {
                    Ok(Term::Const(c))
                } else {
                    Err(ParseError::Undeclared {
                        pos,
                        kind: SymbolKind::Constant,
                        symbol: c,
                    })
                }
            }
            _ => self.error("term"),
        }
    }

    fn equality_tail(&mut self, lhs: Term) -> PResult<Formula> {
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::equal(lhs, self.term()?))
            }
            Tok::NotEq => {
                self.bump();
                Ok(Formula::not_equal(lhs, self.term()?))
            }
            _ => self.error("`=` or `!=`"),
        }
    }

    fn check_arity(&self, pos: Position, name: &str, found: usize) -> PResult<()> {
        if self.sig.is_open() {
            return Ok(());
        }
        match self.sig.predicate_arity(name) {
            None => Err(ParseError::Undeclared {
                pos,
                kind: SymbolKind::Predicate,
                symbol: name.to_string(),
            }),
            Some(expected) if expected != found => Err(ParseError::Arity {
                pos,
                predicate: name.to_string(),
                expected,
                found,
            }),
            Some(_) => Ok(()),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "true" || kw == "false" => {
                self.bump();
                let f = if kw == "true" {
                    Formula::verum(self.sig)
                } else {
                    Formula::falsum(self.sig)
                };
                f.ok_or(ParseError::NoTruthConstant { pos, keyword: kw })
            }
            Tok::Ident(name) if *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let mut args = vec![self.term()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    args.push(self.term()?);
                }
                self.expect(Tok::RParen)?;
                self.check_arity(pos, &name, args.len())?;
                Ok(Formula::Atom(name, args))
            }
            Tok::Ident(name) if name.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.bump();
                self.check_arity(pos, &name, 0)?;
                Ok(Formula::Atom(name, Vec::new()))
            }
            Tok::Var(_) | Tok::Ident(_) => {
                let lhs = self.term()?;
                self.equality_tail(lhs)
            }
            _ => self.error("formula"),
        }
    }
}

/// Parses `text` against `sig`, expanding every derived connective.
pub fn parse_formula(text: &str, sig: &dyn Signature) -> Result<Formula, ParseError> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser {
        tokens,
        idx: 0,
        sig,
    };
    let f = parser.formula()?;
    if *parser.peek() != Tok::Eof {
        return parser.error("end of input");
    }
    Ok(f)
}
