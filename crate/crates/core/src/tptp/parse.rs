//! Statements and THF-style expressions, shared by the dependent dialect
//! and the TH0 reader. Types and terms share one expression grammar; the
//! callers decide which is which.

use super::lexer::{lex, Spanned, Tok};
use super::ParseError;

const MAX_NESTING: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Quant {
    Forall,
    Exists,
    Lambda,
    Pi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BinOp {
    Iff,
    Xor,
    Implies,
    RevImplies,
    Or,
    And,
    Eq,
    Neq,
    Arrow,
    Psub,
    App,
}

impl BinOp {
    fn of(t: &Tok) -> Option<BinOp> {
        Some(match t {
            Tok::Iff => BinOp::Iff,
            Tok::Xor => BinOp::Xor,
            Tok::Implies => BinOp::Implies,
            Tok::RevImplies => BinOp::RevImplies,
            Tok::Or => BinOp::Or,
            Tok::And => BinOp::And,
            Tok::Eq => BinOp::Eq,
            Tok::Neq => BinOp::Neq,
            Tok::Arrow => BinOp::Arrow,
            Tok::Psub => BinOp::Psub,
            Tok::At => BinOp::App,
            _ => return None,
        })
    }

    /// Binding strength and whether the operator associates to the right.
    fn prec(self) -> (u8, bool) {
        match self {
            BinOp::Iff | BinOp::Xor => (1, false),
            BinOp::Implies | BinOp::RevImplies => (2, true),
            BinOp::Or => (3, false),
            BinOp::And => (4, false),
            BinOp::Eq | BinOp::Neq => (5, false),
            BinOp::Arrow => (6, true),
            BinOp::Psub => (7, false),
            BinOp::App => (8, false),
        }
    }
}

/// Where an expression started, for error messages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub(crate) struct Pos {
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Expr {
    Var(String, Pos),
    Functor(String, Pos),
    Dollar(String, Pos),
    Hole(Pos),
    Not(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Quant(Quant, Vec<(String, Expr)>, Box<Expr>),
}

impl Expr {
    pub(crate) fn pos(&self) -> Pos {
        match self {
            Expr::Var(_, p) | Expr::Functor(_, p) | Expr::Dollar(_, p) | Expr::Hole(p) => *p,
            Expr::Not(e) | Expr::Bin(_, e, _) => e.pos(),
            Expr::Quant(_, bs, body) => bs.first().map(|(_, e)| e.pos()).unwrap_or(body.pos()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Body {
    /// `name : type`
    Typing(String, bool, Expr),
    Formula(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Stmt {
    Thf {
        name: String,
        role: String,
        body: Body,
        pos: Pos,
    },
    Include {
        path: String,
        pos: Pos,
    },
}

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    i: usize,
    depth: usize,
    end: Pos,
}

pub(crate) fn parse_statements(src: &str) -> Result<Vec<Stmt>, ParseError> {
    let toks = lex(src)?;
    let end = end_pos(src);
    let mut p = Parser {
        toks,
        i: 0,
        depth: 0,
        end,
    };
    let mut out = Vec::new();
    while p.peek().is_some() {
        out.push(p.statement()?);
    }
    Ok(out)
}

fn end_pos(src: &str) -> Pos {
    let line = src.lines().count().max(1);
    let col = src.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
    Pos { line, col }
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.toks
            .get(self.i)
            .map(|t| Pos {
                line: t.line,
                col: t.col,
            })
            .unwrap_or(self.end)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let Pos { line, col } = self.pos();
        Err(ParseError {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn found(&self) -> String {
        self.peek()
            .map(Tok::describe)
            .unwrap_or_else(|| "end of input".into())
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", t.describe(), self.found()))
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.peek().cloned();
        self.i += 1;
        t
    }

    /// A statement name: lower word or quoted name.
    fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Lower(s)) | Some(Tok::Quoted(s)) => {
                self.i += 1;
                Ok(s)
            }
            _ => self.error(format!("expected a name, found {}", self.found())),
        }
    }

    fn statement(&mut self) -> Result<Stmt, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Lower(kw)) if kw == "include" => {
                self.i += 1;
                self.expect(Tok::LParen)?;
                let path = match self.bump() {
                    Some(Tok::Quoted(s)) => s,
                    _ => {
                        self.i -= 1;
                        return self.error("expected a quoted file name");
                    }
                };
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Stmt::Include { path, pos })
            }
            Some(Tok::Lower(kw)) if kw == "thf" => {
                self.i += 1;
                self.expect(Tok::LParen)?;
                let name = self.name()?;
                self.expect(Tok::Comma)?;
                let role = match self.bump() {
                    Some(Tok::Lower(r)) => r,
                    _ => {
                        self.i -= 1;
                        return self.error(format!("expected a role, found {}", self.found()));
                    }
                };
                self.expect(Tok::Comma)?;
                let body = if role == "type" {
                    self.typing()?
                } else {
                    Body::Formula(self.expr(0)?)
                };
                if self.peek() == Some(&Tok::Comma) {
                    self.skip_annotations()?;
                }
                self.expect(Tok::RParen)?;
                self.expect(Tok::Dot)?;
                Ok(Stmt::Thf {
                    name,
                    role,
                    body,
                    pos,
                })
            }
            _ => self.error(format!("expected `thf` or `include`, found {}", self.found())),
        }
    }

    fn skip_annotations(&mut self) -> Result<(), ParseError> {
        let mut level = 0usize;
        loop {
            match self.peek() {
                None => return self.error("unterminated annotations"),
                Some(Tok::RParen) if level == 0 => return Ok(()),
                Some(Tok::LParen | Tok::LBrack) => level += 1,
                Some(Tok::RBrack) if level == 0 => return self.error("unbalanced `]`"),
                Some(Tok::RParen | Tok::RBrack) => level -= 1,
                _ => {}
            }
            self.i += 1;
        }
    }

    fn typing(&mut self) -> Result<Body, ParseError> {
        if self.peek() == Some(&Tok::LParen) {
            self.i += 1;
            let b = self.typing()?;
            self.expect(Tok::RParen)?;
            return Ok(b);
        }
        let (name, upper) = match self.peek().cloned() {
            Some(Tok::Lower(s)) | Some(Tok::Quoted(s)) => (s, false),
            Some(Tok::Upper(s)) => (s, true),
            _ => return self.error(format!("expected a symbol to declare, found {}", self.found())),
        };
        self.i += 1;
        self.expect(Tok::Colon)?;
        let ty = self.expr(0)?;
        Ok(Body::Typing(name, upper, ty))
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return self.error("expression nested too deeply");
        }
        Ok(())
    }

    pub(crate) fn expr(&mut self, min: u8) -> Result<Expr, ParseError> {
        self.enter()?;
        let mut lhs = self.prefix()?;
        while let Some(op) = self.peek().and_then(BinOp::of) {
            let (p, right) = op.prec();
            if p < min {
                break;
            }
            self.i += 1;
            let rhs = self.expr(if right { p } else { p + 1 })?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let q = match self.peek() {
            Some(Tok::Bang) => Some(Quant::Forall),
            Some(Tok::Question) => Some(Quant::Exists),
            Some(Tok::Caret) => Some(Quant::Lambda),
            Some(Tok::PiBang) => Some(Quant::Pi),
            _ => None,
        };
        if let Some(q) = q {
            self.i += 1;
            let binders = self.binders()?;
            self.expect(Tok::Colon)?;
            let body = self.expr(0)?;
            return Ok(Expr::Quant(q, binders, Box::new(body)));
        }
        match self.bump() {
            Some(Tok::Not) => {
                let (p, _) = BinOp::App.prec();
                Ok(Expr::Not(Box::new(self.expr(p)?)))
            }
            Some(Tok::LParen) => {
                let e = self.expr(0)?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Upper(x)) => Ok(Expr::Var(x, pos)),
            Some(Tok::Lower(c)) | Some(Tok::Quoted(c)) => Ok(Expr::Functor(c, pos)),
            Some(Tok::Dollar(d)) => Ok(Expr::Dollar(d, pos)),
            Some(Tok::Hole) => Ok(Expr::Hole(pos)),
            _ => {
                self.i -= 1;
                self.error(format!("expected an expression, found {}", self.found()))
            }
        }
    }

    fn binders(&mut self) -> Result<Vec<(String, Expr)>, ParseError> {
        self.expect(Tok::LBrack)?;
        let mut out = Vec::new();
        loop {
            let x = match self.bump() {
                Some(Tok::Upper(x)) => x,
                _ => {
                    self.i -= 1;
                    return self.error(format!("expected a variable, found {}", self.found()));
                }
            };
            if self.peek() != Some(&Tok::Colon) {
                return self.error(format!("variable `{x}` needs a type"));
            }
            self.i += 1;
            let ty = self.expr(0)?;
            out.push((x, ty));
            match self.bump() {
                Some(Tok::Comma) => continue,
                Some(Tok::RBrack) => return Ok(out),
                _ => {
                    self.i -= 1;
                    return self.error(format!("expected `,` or `]`, found {}", self.found()));
                }
            }
        }
    }
}
