//! The dependent dialect: `!>` for Π, `@` for type arguments, `?|` for
//! predicate subtypes. Uppercase type declarations and `hypothesis`
//! statements make up the conjecture's context.

use std::collections::BTreeSet;

use log::debug;

use super::parse::{parse_statements, BinOp, Body, Expr, Pos, Quant, Stmt};
use super::ParseError;
use crate::syntax::{Context, CtxEntry, Decl, Sugar, Term, Theory, Type};

const MAX_INCLUDE_DEPTH: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DholProblem {
    pub theory: Theory,
    pub context: Context,
    pub conjecture: Option<(String, Term)>,
}

/// Parses a problem without `include` directives.
pub fn parse_dhol(text: &str) -> Result<DholProblem, ParseError> {
    parse_dhol_with(text, &mut |path: &str| {
        Err(format!("cannot include `{path}`: no include directory given"))
    })
}

/// Parses a problem, resolving `include('path').` through `resolve`.
pub fn parse_dhol_with(
    text: &str,
    resolve: &mut dyn FnMut(&str) -> Result<String, String>,
) -> Result<DholProblem, ParseError> {
    let mut st = State {
        out: DholProblem::default(),
        names: BTreeSet::new(),
    };
    st.file(text, resolve, 0)?;
    Ok(st.out)
}

struct State {
    out: DholProblem,
    names: BTreeSet<String>,
}

fn err_at<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    })
}

impl State {
    fn file(
        &mut self,
        text: &str,
        resolve: &mut dyn FnMut(&str) -> Result<String, String>,
        depth: usize,
    ) -> Result<(), ParseError> {
        for stmt in parse_statements(text)? {
            match stmt {
                Stmt::Include { path, pos } => {
                    if depth >= MAX_INCLUDE_DEPTH {
                        return err_at(pos, format!("includes nested deeper than {MAX_INCLUDE_DEPTH}"));
                    }
                    let inner = match resolve(&path) {
                        Ok(t) => t,
                        Err(e) => return err_at(pos, e),
                    };
                    debug!("including `{path}`");
                    self.file(&inner, resolve, depth + 1).map_err(|e| ParseError {
                        msg: format!("in `{path}` at {}:{}: {}", e.line, e.col, e.msg),
                        line: pos.line,
                        col: pos.col,
                    })?;
                }
                Stmt::Thf {
                    name,
                    role,
                    body,
                    pos,
                } => {
                    if !self.names.insert(name.clone()) {
                        return err_at(pos, format!("duplicate statement name `{name}`"));
                    }
                    self.statement(name, &role, body, pos)?;
                }
            }
        }
        Ok(())
    }

    fn statement(&mut self, name: String, role: &str, body: Body, pos: Pos) -> Result<(), ParseError> {
        match (role, body) {
            ("type", Body::Typing(sym, upper, e)) => {
                let mut telescope = Vec::new();
                let mut cur = &e;
                while let Expr::Quant(Quant::Pi, bs, b) = cur {
                    for (x, a) in bs {
                        telescope.push((x.clone(), to_type(a)?));
                    }
                    cur = b;
                }
                if matches!(cur, Expr::Dollar(d, _) if d == "tType") {
                    if upper {
                        return err_at(pos, format!("type variables like `{sym}` are not supported"));
                    }
                    self.out.theory.push(Decl::Type {
                        name: sym,
                        telescope,
                    });
                } else if upper {
                    let ty = to_type(&e)?;
                    self.out.context.entries.push(CtxEntry::Var { name: sym, ty });
                } else {
                    let ty = to_type(&e)?;
                    self.out.theory.push(Decl::Const { name: sym, ty });
                }
            }
            ("axiom" | "definition" | "lemma" | "theorem", Body::Formula(e)) => {
                let formula = to_term(&e)?;
                self.out.theory.push(Decl::Axiom { name, formula });
            }
            ("hypothesis", Body::Formula(e)) => {
                let formula = to_term(&e)?;
                self.out.context.entries.push(CtxEntry::Assume { name, formula });
            }
            ("conjecture", Body::Formula(e)) => {
                if let Some((prev, _)) = &self.out.conjecture {
                    return err_at(pos, format!("second conjecture; `{prev}` was already given"));
                }
                self.out.conjecture = Some((name, to_term(&e)?));
            }
            (r, _) => return err_at(pos, format!("unsupported role `{r}`")),
        }
        Ok(())
    }
}

fn spine(e: &Expr) -> (&Expr, Vec<&Expr>) {
    let mut args = Vec::new();
    let mut head = e;
    while let Expr::Bin(BinOp::App, f, a) = head {
        args.push(&**a);
        head = f;
    }
    args.reverse();
    (head, args)
}

pub(crate) fn to_type(e: &Expr) -> Result<Type, ParseError> {
    match e {
        Expr::Dollar(d, _) if d == "o" => Ok(Type::Bool),
        Expr::Functor(a, _) => Ok(Type::atom(a.clone())),
        Expr::Bin(BinOp::App, ..) => {
            let (head, args) = spine(e);
            match head {
                Expr::Functor(a, _) => Ok(Type::base(
                    a.clone(),
                    args.into_iter().map(to_term).collect::<Result<_, _>>()?,
                )),
                other => err_at(other.pos(), "a type application needs a type constructor at its head"),
            }
        }
        Expr::Bin(BinOp::Arrow, a, b) => Ok(Type::arrow(to_type(a)?, to_type(b)?)),
        Expr::Bin(BinOp::Psub, a, p) => Ok(Type::psub(to_type(a)?, to_term(p)?)),
        Expr::Quant(Quant::Pi, bs, body) => {
            let mut ty = to_type(body)?;
            for (x, a) in bs.iter().rev() {
                ty = Type::pi(x.clone(), to_type(a)?, ty);
            }
            Ok(ty)
        }
        Expr::Dollar(d, p) => err_at(*p, format!("`${d}` is not a type here")),
        Expr::Var(x, p) => err_at(*p, format!("type variables like `{x}` are not supported")),
        other => err_at(other.pos(), "expected a type"),
    }
}

pub(crate) fn to_term(e: &Expr) -> Result<Term, ParseError> {
    let bin = |a: &Expr, b: &Expr| -> Result<(Term, Term), ParseError> { Ok((to_term(a)?, to_term(b)?)) };
    match e {
        Expr::Var(x, _) => Ok(Term::var(x.clone())),
        Expr::Functor(c, _) => Ok(Term::cnst(c.clone())),
        Expr::Hole(_) => Ok(Term::Hole),
        Expr::Dollar(d, _) if d == "true" => Ok(Term::truth()),
        Expr::Dollar(d, _) if d == "false" => Ok(Term::falsity()),
        Expr::Dollar(d, p) => err_at(*p, format!("`${d}` is not a term")),
        Expr::Not(f) => Ok(Term::not(to_term(f)?)),
        Expr::Bin(op, a, b) => {
            let (s, t) = bin(a, b)?;
            match op {
                BinOp::App => Ok(Term::app(s, t)),
                BinOp::Eq => Ok(Term::eq_unannotated(s, t)),
                BinOp::Neq => Ok(Term::not(Term::eq_unannotated(s, t))),
                BinOp::Implies => Ok(Term::implies(s, t)),
                BinOp::RevImplies => Ok(Term::implies(t, s)),
                BinOp::And => Ok(Term::and(s, t)),
                BinOp::Or => Ok(Term::or(s, t)),
                BinOp::Iff => Ok(Term::eq(Type::Bool, s, t)),
                BinOp::Xor => Ok(Term::not(Term::eq(Type::Bool, s, t))),
                BinOp::Arrow | BinOp::Psub => err_at(a.pos(), "a type cannot appear as a term"),
            }
        }
        Expr::Quant(q, bs, body) => {
            let mut t = to_term(body)?;
            for (x, a) in bs.iter().rev() {
                let a = to_type(a)?;
                t = match q {
                    Quant::Forall => Term::Sugar(Box::new(Sugar::Forall(x.clone(), a, t))),
                    Quant::Exists => Term::Sugar(Box::new(Sugar::Exists(x.clone(), a, t))),
                    Quant::Lambda => Term::lam(x.clone(), a, t),
                    Quant::Pi => return err_at(e.pos(), "`!>` builds a type, not a term"),
                };
            }
            Ok(t)
        }
    }
}
