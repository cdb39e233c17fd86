//! The erasure translation Φ from DHOL into HOL.
//!
//! Types lose their term arguments; what they said is recovered by a
//! partial equivalence relation `A*` per type, built from one PER constant
//! `a_per` per type constructor. Equality at `A` becomes `A*`, and
//! quantifiers are relativized to the PER's domain.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::hol::{HolContext, HolDecl, HolEntry, HolProblem, HolTerm, HolTheory, HolType};
use crate::kernel::Obligation;
use crate::syntax::{fresh_name, Context, CtxEntry, Decl, Sugar, Syntax, Term, Theory, Type};

/// Which axioms characterize each generated PER constant.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum AxiomSet {
    /// Transitivity, symmetry, and agreement with equality on the domain.
    #[default]
    Appendix,
    /// A single axiom: related elements are equal.
    Minimal,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("`{0}` still contains placeholders; run the checker first")]
    Unelaborated(String),
    #[error("generated name `{0}` clashes with another declaration")]
    NameClash(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationOutput {
    pub theory: HolTheory,
    /// Type constructor to its PER constant.
    pub per_names: BTreeMap<String, String>,
    /// HOL declaration to the DHOL declaration it came from.
    pub provenance: BTreeMap<String, String>,
}

pub fn per_name(a: &str) -> String {
    format!("{a}_per")
}

pub fn typing_name(c: &str) -> String {
    format!("{c}_tp")
}

/// Φ(A). Panics on placeholders; callers translating whole theories get an
/// error instead.
pub fn translate_type(a: &Type) -> HolType {
    match a {
        Type::Base(n, _) => HolType::base(n.clone()),
        Type::Pi(_, d, c) => HolType::arrow(translate_type(d), translate_type(c)),
        Type::Bool => HolType::Bool,
        Type::Psub(b, _) => translate_type(b),
        Type::Hole => panic!("translate_type on an unelaborated type"),
    }
}

/// `A*(s, t)`.
pub fn per_of(a: &Type, s: &HolTerm, t: &HolTerm) -> HolTerm {
    match a {
        Type::Base(n, args) => HolTerm::apps(
            HolTerm::cnst(per_name(n)),
            args.iter().map(translate_term).chain([s.clone(), t.clone()]),
        ),
        Type::Bool => HolTerm::eq(HolType::Bool, s.clone(), t.clone()),
        Type::Pi(x, d, c) => {
            let mut avoid: BTreeSet<String> = s.free_vars();
            avoid.extend(t.free_vars());
            avoid.extend(d.free_vars());
            let mut cfv = c.free_vars();
            cfv.remove(x);
            avoid.extend(cfv);
            let base = if x == "_" { "x" } else { x.as_str() };
            let x1 = fresh_name(base, |n| avoid.contains(n));
            let y1 = fresh_name(base, |n| avoid.contains(n) || n == x1);
            let (vx, vy) = (HolTerm::var(&x1), HolTerm::var(&y1));
            let cod = c.subst(x, &Term::var(&x1));
            let dom = translate_type(d);
            HolTerm::forall(
                x1,
                dom.clone(),
                HolTerm::forall(
                    y1,
                    dom,
                    HolTerm::implies(
                        per_of(d, &vx, &vy),
                        per_of(&cod, &HolTerm::app(s.clone(), vx), &HolTerm::app(t.clone(), vy)),
                    ),
                ),
            )
        }
        Type::Psub(b, p) => {
            let p = translate_term(p);
            HolTerm::and(
                per_of(b, s, t),
                HolTerm::and(HolTerm::app(p.clone(), s.clone()), HolTerm::app(p, t.clone())),
            )
        }
        Type::Hole => panic!("per_of on an unelaborated type"),
    }
}

/// Φ(t).
pub fn translate_term(t: &Term) -> HolTerm {
    match t {
        Term::Const(c) => HolTerm::cnst(c.clone()),
        Term::Var(x) => HolTerm::var(x.clone()),
        Term::Lam(x, a, b) => HolTerm::lam(x.clone(), translate_type(a), translate_term(b)),
        Term::App(f, a) => HolTerm::app(translate_term(f), translate_term(a)),
        Term::Eq(a, s, u) => per_of(a, &translate_term(s), &translate_term(u)),
        Term::Impl(f, g) => HolTerm::implies(translate_term(f), translate_term(g)),
        Term::Hole => panic!("translate_term on an unelaborated term"),
        Term::Sugar(s) => match &**s {
            Sugar::Forall(x, a, f) => {
                let vx = HolTerm::var(x.clone());
                HolTerm::forall(
                    x.clone(),
                    translate_type(a),
                    HolTerm::implies(per_of(a, &vx, &vx), translate_term(f)),
                )
            }
            Sugar::Exists(x, a, f) => {
                let vx = HolTerm::var(x.clone());
                HolTerm::exists(
                    x.clone(),
                    translate_type(a),
                    HolTerm::and(per_of(a, &vx, &vx), translate_term(f)),
                )
            }
            Sugar::And(f, g) => HolTerm::and(translate_term(f), translate_term(g)),
            Sugar::Or(f, g) => HolTerm::or(translate_term(f), translate_term(g)),
            Sugar::Not(f) => HolTerm::not(translate_term(f)),
            Sugar::True => HolTerm::True,
            Sugar::False => HolTerm::False,
        },
    }
}

fn per_axioms(
    a: &str,
    telescope: &[(String, Type)],
    set: AxiomSet,
) -> Vec<(String, HolTerm)> {
    let taken: BTreeSet<&str> = telescope.iter().map(|(x, _)| x.as_str()).collect();
    let pick = |base: &str, also: &[&String]| {
        fresh_name(base, |n| taken.contains(n) || also.iter().any(|m| *m == n))
    };
    let u = pick("u", &[]);
    let v = pick("v", &[&u]);
    let w = pick("w", &[&u, &v]);
    let at = HolType::base(a);
    let rel = |l: &str, r: &str| {
        HolTerm::apps(
            HolTerm::cnst(per_name(a)),
            telescope
                .iter()
                .map(|(x, _)| HolTerm::var(x.clone()))
                .chain([HolTerm::var(l), HolTerm::var(r)]),
        )
    };
    let close = |body: HolTerm, vars: &[&String]| {
        let inner = vars
            .iter()
            .rev()
            .fold(body, |acc, x| HolTerm::forall((*x).clone(), at.clone(), acc));
        telescope
            .iter()
            .rev()
            .fold(inner, |acc, (x, ty)| HolTerm::forall(x.clone(), translate_type(ty), acc))
    };
    let eq_a = HolTerm::eq(at.clone(), HolTerm::var(&u), HolTerm::var(&v));
    match set {
        AxiomSet::Appendix => vec![
            (
                format!("{a}_trans"),
                close(
                    HolTerm::implies(rel(&u, &v), HolTerm::implies(rel(&v, &w), rel(&u, &w))),
                    &[&u, &v, &w],
                ),
            ),
            (format!("{a}_sym"), close(HolTerm::implies(rel(&u, &v), rel(&v, &u)), &[&u, &v])),
            (
                format!("{a}_PER"),
                close(
                    HolTerm::implies(rel(&v, &v), HolTerm::eq(HolType::Bool, rel(&u, &v), eq_a)),
                    &[&u, &v],
                ),
            ),
        ],
        AxiomSet::Minimal => {
            vec![(format!("{a}_PER"), close(HolTerm::implies(rel(&u, &v), eq_a), &[&u, &v]))]
        }
    }
}

struct Names {
    used: BTreeSet<String>,
}

impl Names {
    fn claim(&mut self, n: &str) -> Result<(), TranslateError> {
        if self.used.insert(n.to_string()) {
            Ok(())
        } else {
            Err(TranslateError::NameClash(n.to_string()))
        }
    }
}

fn require_elaborated(d: &Decl) -> Result<(), TranslateError> {
    let ok = match d {
        Decl::Type { telescope, .. } => telescope.iter().all(|(_, a)| a.is_elaborated()),
        Decl::Const { ty, .. } => ty.is_elaborated(),
        Decl::Axiom { formula, .. } => formula.is_elaborated(),
    };
    if ok {
        Ok(())
    } else {
        Err(TranslateError::Unelaborated(d.name().to_string()))
    }
}

/// Φ(T), declaration by declaration.
pub fn translate_theory(thy: &Theory, set: AxiomSet) -> Result<TranslationOutput, TranslateError> {
    let mut names = Names { used: thy.decls.iter().map(|d| d.name().to_string()).collect() };
    if names.used.len() != thy.decls.len() {
        let mut seen = BTreeSet::new();
        let dup = thy.decls.iter().find(|d| !seen.insert(d.name())).expect("a duplicate");
        return Err(TranslateError::NameClash(dup.name().to_string()));
    }
    let mut out = TranslationOutput::default();
    for d in &thy.decls {
        require_elaborated(d)?;
        let src = d.name().to_string();
        let emit = |decl: HolDecl, out: &mut TranslationOutput| {
            out.provenance.insert(decl.name().to_string(), src.clone());
            out.theory.decls.push(decl);
        };
        match d {
            Decl::Type { name, telescope } => {
                let per = per_name(name);
                names.claim(&per)?;
                emit(HolDecl::Type(name.clone()), &mut out);
                let per_ty = HolType::arrows(
                    telescope
                        .iter()
                        .map(|(_, a)| translate_type(a))
                        .chain([HolType::base(name), HolType::base(name)]),
                    HolType::Bool,
                );
                emit(HolDecl::Const(per.clone(), per_ty), &mut out);
                out.per_names.insert(name.clone(), per);
                for (n, f) in per_axioms(name, telescope, set) {
                    names.claim(&n)?;
                    emit(HolDecl::Axiom(n, f), &mut out);
                }
            }
            Decl::Const { name, ty } => {
                let tp = typing_name(name);
                names.claim(&tp)?;
                emit(HolDecl::Const(name.clone(), translate_type(ty)), &mut out);
                let c = HolTerm::cnst(name.clone());
                emit(HolDecl::Axiom(tp, per_of(ty, &c, &c)), &mut out);
            }
            Decl::Axiom { name, formula } => {
                emit(HolDecl::Axiom(name.clone(), translate_term(formula)), &mut out);
            }
        }
    }
    Ok(out)
}

/// Φ(Γ). Variables get a typing assumption `x_tp`.
pub fn translate_context(ctx: &Context) -> Result<HolContext, TranslateError> {
    let mut names = Names { used: ctx.entries.iter().map(|e| e.name().to_string()).collect() };
    let mut out = HolContext::default();
    for e in &ctx.entries {
        match e {
            CtxEntry::Var { name, ty } => {
                if !ty.is_elaborated() {
                    return Err(TranslateError::Unelaborated(name.clone()));
                }
                let tp = typing_name(name);
                names.claim(&tp)?;
                let x = HolTerm::var(name.clone());
                out.entries.push(HolEntry::Var(name.clone(), translate_type(ty)));
                out.entries.push(HolEntry::Assume(tp, per_of(ty, &x, &x)));
            }
            CtxEntry::Assume { name, formula } => {
                if !formula.is_elaborated() {
                    return Err(TranslateError::Unelaborated(name.clone()));
                }
                out.entries.push(HolEntry::Assume(name.clone(), translate_term(formula)));
            }
        }
    }
    Ok(out)
}

/// Packages `Φ(T)`, `Φ(Γ)` and `Φ(F)` as one validity problem.
pub fn translate_problem(
    thy: &Theory,
    ctx: &Context,
    formula: &Term,
    set: AxiomSet,
) -> Result<HolProblem, TranslateError> {
    if !formula.is_elaborated() {
        return Err(TranslateError::Unelaborated("conjecture".into()));
    }
    let theory = translate_theory(thy, set)?.theory;
    let context = translate_context(ctx)?;
    Ok(HolProblem { theory, context, conjecture: translate_term(formula) })
}

/// The problem an oracle has to solve to discharge `ob`; `thy` is the
/// theory the obligation was raised against.
pub fn translate_obligation(
    thy: &Theory,
    ob: &Obligation,
    set: AxiomSet,
) -> Result<HolProblem, TranslateError> {
    translate_problem(thy, &ob.context, &ob.formula, set)
}
