//! Derivations produced by the builtin prover, and the checker that replays
//! them against the HOL rules.
//!
//! The replay checker trusts nothing the prover computed: every step
//! recomputes its conclusion from its premises, and terms introduced by a
//! step (instantiations, reflexivity witnesses) are type-checked.

use thiserror::Error;

use crate::hol::{beta_eta_normalize, hol_infer, HolContext, HolEntry, HolProblem, HolTerm, HolType};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proof {
    /// An axiom of the theory or an assumption of the context, by name.
    Fact(String),
    /// The i-th hypothesis opened by an enclosing [`Proof::ImplIntro`].
    Local(usize),
    Refl(HolTerm),
    Sym(Box<Proof>),
    Trans(Box<Proof>, Box<Proof>),
    /// `f = g` and `a = b` give `f a = g b`.
    CongAppl(Box<Proof>, Box<Proof>),
    /// Restates the premise's conclusion up to beta-eta conversion.
    Conv(HolTerm, Box<Proof>),
    TrueIntro,
    ImplIntro(HolTerm, Box<Proof>),
    ImplElim(Box<Proof>, Box<Proof>),
    /// Generalizes over a fresh eigenvariable.
    ForallIntro(String, HolType, Box<Proof>),
    ForallElim(Box<Proof>, HolTerm),
    AndIntro(Box<Proof>, Box<Proof>),
    AndElimL(Box<Proof>),
    AndElimR(Box<Proof>),
    OrIntroL(Box<Proof>, HolTerm),
    OrIntroR(HolTerm, Box<Proof>),
    /// `F` gives `F =_bool true`.
    EqTrueIntro(Box<Proof>),
    /// `F =_bool true` gives `F`.
    EqTrueElim(Box<Proof>),
    /// `F ⟹ G` and `G ⟹ F` give `F =_bool G`.
    PropExt(Box<Proof>, Box<Proof>),
}

impl Proof {
    /// Number of inference steps.
    pub fn size(&self) -> usize {
        use Proof::*;
        match self {
            Fact(_) | Local(_) | Refl(_) | TrueIntro => 1,
            Sym(p) | Conv(_, p) | ImplIntro(_, p) | ForallIntro(_, _, p) | ForallElim(p, _)
            | AndElimL(p) | AndElimR(p) | OrIntroL(p, _) | OrIntroR(_, p) | EqTrueIntro(p)
            | EqTrueElim(p) => 1 + p.size(),
            Trans(p, q) | CongAppl(p, q) | ImplElim(p, q) | AndIntro(p, q) | PropExt(p, q) => {
                1 + p.size() + q.size()
            }
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{rule}: {msg}")]
pub struct ReplayError {
    pub rule: &'static str,
    pub msg: String,
}

fn bad<T>(rule: &'static str, msg: impl Into<String>) -> Result<T, ReplayError> {
    Err(ReplayError {
        rule,
        msg: msg.into(),
    })
}

/// Equality up to alpha-renaming and beta-eta conversion.
pub fn convertible(a: &HolTerm, b: &HolTerm) -> bool {
    a.alpha_eq(b) || beta_eta_normalize(a).alpha_eq(&beta_eta_normalize(b))
}

/// Replays `proof` in the problem's theory and context and returns what it
/// proves.
pub fn replay(problem: &HolProblem, proof: &Proof) -> Result<HolTerm, ReplayError> {
    let mut r = Replayer {
        problem,
        ctx: problem.context.clone(),
        locals: Vec::new(),
    };
    r.run(proof)
}

/// Replays `proof` and checks that it establishes the conjecture.
pub fn replay_conjecture(problem: &HolProblem, proof: &Proof) -> Result<(), ReplayError> {
    let got = replay(problem, proof)?;
    if convertible(&got, &problem.conjecture) {
        Ok(())
    } else {
        bad("conclusion", format!("proved `{got}`, not `{}`", problem.conjecture))
    }
}

struct Replayer<'a> {
    problem: &'a HolProblem,
    ctx: HolContext,
    locals: Vec<HolTerm>,
}

impl Replayer<'_> {
    fn ty(&self, rule: &'static str, t: &HolTerm) -> Result<HolType, ReplayError> {
        hol_infer(&self.problem.theory, &self.ctx, t).or_else(|e| bad(rule, e.to_string()))
    }

    fn formula(&self, rule: &'static str, t: &HolTerm) -> Result<(), ReplayError> {
        match self.ty(rule, t)? {
            HolType::Bool => Ok(()),
            other => bad(rule, format!("`{t}` has type {other}, not bool")),
        }
    }

    fn fact(&self, name: &str) -> Option<HolTerm> {
        self.ctx
            .entries
            .iter()
            .rev()
            .find_map(|e| match e {
                HolEntry::Assume(n, f) if n == name => Some(f.clone()),
                _ => None,
            })
            .or_else(|| {
                self.problem
                    .theory
                    .axioms()
                    .find(|(n, _)| *n == name)
                    .map(|(_, f)| f.clone())
            })
    }

    fn run(&mut self, p: &Proof) -> Result<HolTerm, ReplayError> {
        use Proof::*;
        match p {
            Fact(n) => match self.fact(n) {
                Some(f) => Ok(f),
                None => bad("fact", format!("no axiom or assumption `{n}`")),
            },
            Local(i) => match self.locals.get(*i) {
                Some(f) => Ok(f.clone()),
                None => bad("local", format!("hypothesis {i} is not in scope")),
            },
            Refl(t) => {
                let a = self.ty("refl", t)?;
                Ok(HolTerm::eq(a, t.clone(), t.clone()))
            }
            Sym(p) => match self.run(p)? {
                HolTerm::Eq(a, s, t) => Ok(HolTerm::Eq(a, t, s)),
                f => bad("sym", format!("`{f}` is not an equation")),
            },
            Trans(p, q) => match (self.run(p)?, self.run(q)?) {
                (HolTerm::Eq(a, s, t), HolTerm::Eq(b, t2, u)) if a == b => {
                    if convertible(&t, &t2) {
                        Ok(HolTerm::Eq(a, s, u))
                    } else {
                        bad("trans", format!("middle terms `{t}` and `{t2}` differ"))
                    }
                }
                (f, g) => bad("trans", format!("cannot chain `{f}` and `{g}`")),
            },
            CongAppl(p, q) => match (self.run(p)?, self.run(q)?) {
                (HolTerm::Eq(HolType::Arrow(d, c), f, g), HolTerm::Eq(d2, a, b)) if *d == d2 => {
                    Ok(HolTerm::eq(*c, HolTerm::App(f, a), HolTerm::App(g, b)))
                }
                (f, g) => bad("congAppl", format!("cannot apply `{f}` to `{g}`")),
            },
            Conv(t, p) => {
                let f = self.run(p)?;
                self.formula("conv", t)?;
                if convertible(t, &f) {
                    Ok(t.clone())
                } else {
                    bad("conv", format!("`{t}` is not convertible to `{f}`"))
                }
            }
            TrueIntro => Ok(HolTerm::True),
            ImplIntro(h, p) => {
                self.formula("implIntro", h)?;
                self.locals.push(h.clone());
                let g = self.run(p);
                self.locals.pop();
                Ok(HolTerm::implies(h.clone(), g?))
            }
            ImplElim(p, q) => match self.run(p)? {
                HolTerm::Impl(f, g) => {
                    let h = self.run(q)?;
                    if convertible(&f, &h) {
                        Ok(*g)
                    } else {
                        bad("implElim", format!("antecedent `{f}` but premise `{h}`"))
                    }
                }
                f => bad("implElim", format!("`{f}` is not an implication")),
            },
            ForallIntro(x, a, p) => {
                if self.ctx.var_type(x).is_some() {
                    return bad("forallIntro", format!("`{x}` is not fresh"));
                }
                if self.locals.iter().any(|h| h.occurs_free(x)) {
                    return bad("forallIntro", format!("`{x}` occurs in a hypothesis"));
                }
                self.ctx.entries.push(HolEntry::Var(x.clone(), a.clone()));
                let f = self.run(p);
                self.ctx.entries.pop();
                Ok(HolTerm::forall(x.clone(), a.clone(), f?))
            }
            ForallElim(p, t) => match self.run(p)? {
                HolTerm::Forall(x, a, f) => {
                    let b = self.ty("forallElim", t)?;
                    if a != b {
                        return bad("forallElim", format!("`{t}` has type {b}, expected {a}"));
                    }
                    Ok(f.subst(&x, t))
                }
                f => bad("forallElim", format!("`{f}` is not universal")),
            },
            AndIntro(p, q) => Ok(HolTerm::and(self.run(p)?, self.run(q)?)),
            AndElimL(p) => match self.run(p)? {
                HolTerm::And(f, _) => Ok(*f),
                f => bad("andElimL", format!("`{f}` is not a conjunction")),
            },
            AndElimR(p) => match self.run(p)? {
                HolTerm::And(_, g) => Ok(*g),
                f => bad("andElimR", format!("`{f}` is not a conjunction")),
            },
            OrIntroL(p, g) => {
                self.formula("orIntroL", g)?;
                Ok(HolTerm::or(self.run(p)?, g.clone()))
            }
            OrIntroR(f, q) => {
                self.formula("orIntroR", f)?;
                Ok(HolTerm::or(f.clone(), self.run(q)?))
            }
            EqTrueIntro(p) => Ok(HolTerm::eq(HolType::Bool, self.run(p)?, HolTerm::True)),
            EqTrueElim(p) => match self.run(p)? {
                HolTerm::Eq(HolType::Bool, f, t) if *t == HolTerm::True => Ok(*f),
                f => bad("eqTrueElim", format!("`{f}` is not of the form F = true")),
            },
            PropExt(p, q) => match (self.run(p)?, self.run(q)?) {
                (HolTerm::Impl(f, g), HolTerm::Impl(g2, f2))
                    if convertible(&f, &f2) && convertible(&g, &g2) =>
                {
                    Ok(HolTerm::eq(HolType::Bool, *f, *g))
                }
                (f, g) => bad("propExt", format!("`{f}` and `{g}` are not converse")),
            },
        }
    }
}
