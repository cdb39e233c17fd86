use std::collections::HashSet;

use thiserror::Error;

use super::{HolContext, HolDecl, HolEntry, HolProblem, HolTerm, HolTheory, HolType};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum HolError {
    #[error("unbound name `{0}`")]
    Unbound(String),
    #[error("undeclared base type `{0}`")]
    UnknownType(String),
    #[error("`{term}` has type {found}, expected {expected}")]
    Mismatch {
        term: String,
        expected: HolType,
        found: HolType,
    },
    #[error("`{term}` of type {ty} is applied but is not a function")]
    NotAFunction { term: String, ty: HolType },
    #[error("name `{0}` declared twice")]
    Duplicate(String),
    #[error("in `{at}`: {source}")]
    At {
        at: String,
        #[source]
        source: Box<HolError>,
    },
}

impl HolError {
    fn at(self, at: &str) -> HolError {
        HolError::At {
            at: at.to_string(),
            source: Box::new(self),
        }
    }
}

struct Env<'a> {
    thy: &'a HolTheory,
    ctx: &'a HolContext,
    locals: Vec<(String, HolType)>,
}

impl Env<'_> {
    fn wf(&self, a: &HolType) -> Result<(), HolError> {
        match a {
            HolType::Bool => Ok(()),
            HolType::Base(n) if self.thy.has_type(n) => Ok(()),
            HolType::Base(n) => Err(HolError::UnknownType(n.clone())),
            HolType::Arrow(a, b) => {
                self.wf(a)?;
                self.wf(b)
            }
        }
    }

    fn expect(&mut self, t: &HolTerm, want: &HolType) -> Result<(), HolError> {
        let found = self.infer(t)?;
        if &found == want {
            Ok(())
        } else {
            Err(HolError::Mismatch {
                term: t.to_string(),
                expected: want.clone(),
                found,
            })
        }
    }

    fn under<R>(&mut self, x: &str, a: &HolType, f: impl FnOnce(&mut Self) -> R) -> R {
        self.locals.push((x.to_string(), a.clone()));
        let r = f(self);
        self.locals.pop();
        r
    }

    fn infer(&mut self, t: &HolTerm) -> Result<HolType, HolError> {
        match t {
            HolTerm::Var(x) => self
                .locals
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, a)| a.clone())
                .or_else(|| self.ctx.var_type(x).cloned())
                .ok_or_else(|| HolError::Unbound(x.clone())),
            HolTerm::Const(c) => self
                .thy
                .const_type(c)
                .cloned()
                .ok_or_else(|| HolError::Unbound(c.clone())),
            HolTerm::True | HolTerm::False => Ok(HolType::Bool),
            HolTerm::Lam(x, a, b) => {
                self.wf(a)?;
                let cod = self.under(x, a, |env| env.infer(b))?;
                Ok(HolType::arrow(a.clone(), cod))
            }
            HolTerm::Forall(x, a, b) | HolTerm::Exists(x, a, b) => {
                self.wf(a)?;
                self.under(x, a, |env| env.expect(b, &HolType::Bool))?;
                Ok(HolType::Bool)
            }
            HolTerm::App(f, a) => match self.infer(f)? {
                HolType::Arrow(dom, cod) => {
                    self.expect(a, &dom)?;
                    Ok(*cod)
                }
                ty => Err(HolError::NotAFunction {
                    term: f.to_string(),
                    ty,
                }),
            },
            HolTerm::Eq(a, s, u) => {
                self.wf(a)?;
                self.expect(s, a)?;
                self.expect(u, a)?;
                Ok(HolType::Bool)
            }
            HolTerm::Impl(p, q) | HolTerm::And(p, q) | HolTerm::Or(p, q) => {
                self.expect(p, &HolType::Bool)?;
                self.expect(q, &HolType::Bool)?;
                Ok(HolType::Bool)
            }
            HolTerm::Not(p) => {
                self.expect(p, &HolType::Bool)?;
                Ok(HolType::Bool)
            }
        }
    }
}

/// Synthesizes the simple type of `t`. Type equality is syntactic.
pub fn hol_infer(thy: &HolTheory, ctx: &HolContext, t: &HolTerm) -> Result<HolType, HolError> {
    Env {
        thy,
        ctx,
        locals: Vec::new(),
    }
    .infer(t)
}

pub fn hol_check_theory(thy: &HolTheory) -> Result<(), HolError> {
    let mut seen = HashSet::new();
    let empty = HolContext::default();
    for (i, d) in thy.decls.iter().enumerate() {
        if !seen.insert(d.name()) {
            return Err(HolError::Duplicate(d.name().to_string()));
        }
        let prefix = HolTheory {
            decls: thy.decls[..i].to_vec(),
        };
        let env = Env {
            thy: &prefix,
            ctx: &empty,
            locals: Vec::new(),
        };
        let res = match d {
            HolDecl::Type(_) => Ok(()),
            HolDecl::Const(_, a) => env.wf(a),
            HolDecl::Axiom(_, f) => {
                let mut env = env;
                env.expect(f, &HolType::Bool)
            }
        };
        res.map_err(|e| e.at(d.name()))?;
    }
    Ok(())
}

pub fn hol_check_context(thy: &HolTheory, ctx: &HolContext) -> Result<(), HolError> {
    let mut seen = HashSet::new();
    for (i, e) in ctx.entries.iter().enumerate() {
        let prefix = HolContext {
            entries: ctx.entries[..i].to_vec(),
        };
        let mut env = Env {
            thy,
            ctx: &prefix,
            locals: Vec::new(),
        };
        let (name, res) = match e {
            HolEntry::Var(x, a) => (x, env.wf(a)),
            HolEntry::Assume(n, f) => (n, env.expect(f, &HolType::Bool)),
        };
        if !seen.insert(name.as_str()) {
            return Err(HolError::Duplicate(name.clone()));
        }
        res.map_err(|err| err.at(name))?;
    }
    Ok(())
}

pub fn hol_check_problem(p: &HolProblem) -> Result<(), HolError> {
    hol_check_theory(&p.theory)?;
    hol_check_context(&p.theory, &p.context)?;
    let ty = hol_infer(&p.theory, &p.context, &p.conjecture).map_err(|e| e.at("conjecture"))?;
    if ty != HolType::Bool {
        return Err(HolError::Mismatch {
            term: p.conjecture.to_string(),
            expected: HolType::Bool,
            found: ty,
        }
        .at("conjecture"));
    }
    Ok(())
}
