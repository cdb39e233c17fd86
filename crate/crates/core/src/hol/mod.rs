//! Simply-typed higher-order logic, the target of the erasure translation.
//!
//! Quantifiers and connectives are native nodes here (unlike the dependent
//! side, where they are sugar) because the emitter and the builtin prover
//! both want them intact.

mod check;
mod normalize;

use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::fresh_name;

pub use check::{hol_check_context, hol_check_problem, hol_check_theory, hol_infer, HolError};
pub use normalize::beta_eta_normalize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HolType {
    Base(String),
    Arrow(Box<HolType>, Box<HolType>),
    Bool,
}

impl HolType {
    pub fn base(name: impl Into<String>) -> HolType {
        HolType::Base(name.into())
    }

    pub fn arrow(dom: HolType, cod: HolType) -> HolType {
        HolType::Arrow(Box::new(dom), Box::new(cod))
    }

    /// `A1 → … → An → cod`
    pub fn arrows(doms: impl IntoIterator<Item = HolType>, cod: HolType) -> HolType {
        let doms: Vec<_> = doms.into_iter().collect();
        doms.into_iter()
            .rev()
            .fold(cod, |acc, d| HolType::arrow(d, acc))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HolTerm {
    Const(String),
    Var(String),
    Lam(String, HolType, Box<HolTerm>),
    App(Box<HolTerm>, Box<HolTerm>),
    Eq(HolType, Box<HolTerm>, Box<HolTerm>),
    Impl(Box<HolTerm>, Box<HolTerm>),
    Forall(String, HolType, Box<HolTerm>),
    Exists(String, HolType, Box<HolTerm>),
    And(Box<HolTerm>, Box<HolTerm>),
    Or(Box<HolTerm>, Box<HolTerm>),
    Not(Box<HolTerm>),
    True,
    False,
}

impl HolTerm {
    pub fn var(x: impl Into<String>) -> HolTerm {
        HolTerm::Var(x.into())
    }

    pub fn cnst(c: impl Into<String>) -> HolTerm {
        HolTerm::Const(c.into())
    }

    pub fn lam(x: impl Into<String>, a: HolType, b: HolTerm) -> HolTerm {
        HolTerm::Lam(x.into(), a, Box::new(b))
    }

    pub fn app(f: HolTerm, a: HolTerm) -> HolTerm {
        HolTerm::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: HolTerm, args: impl IntoIterator<Item = HolTerm>) -> HolTerm {
        args.into_iter().fold(f, HolTerm::app)
    }

    pub fn eq(a: HolType, s: HolTerm, t: HolTerm) -> HolTerm {
        HolTerm::Eq(a, Box::new(s), Box::new(t))
    }

    pub fn implies(f: HolTerm, g: HolTerm) -> HolTerm {
        HolTerm::Impl(Box::new(f), Box::new(g))
    }

    pub fn forall(x: impl Into<String>, a: HolType, f: HolTerm) -> HolTerm {
        HolTerm::Forall(x.into(), a, Box::new(f))
    }

    pub fn exists(x: impl Into<String>, a: HolType, f: HolTerm) -> HolTerm {
        HolTerm::Exists(x.into(), a, Box::new(f))
    }

    pub fn and(f: HolTerm, g: HolTerm) -> HolTerm {
        HolTerm::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: HolTerm, g: HolTerm) -> HolTerm {
        HolTerm::Or(Box::new(f), Box::new(g))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: HolTerm) -> HolTerm {
        HolTerm::Not(Box::new(f))
    }

    pub fn spine(&self) -> (&HolTerm, Vec<&HolTerm>) {
        let mut args = Vec::new();
        let mut head = self;
        while let HolTerm::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            HolTerm::Var(x) => {
                if !bound.contains(x) {
                    out.insert(x.clone());
                }
            }
            HolTerm::Const(_) | HolTerm::True | HolTerm::False => {}
            HolTerm::Lam(x, _, b) | HolTerm::Forall(x, _, b) | HolTerm::Exists(x, _, b) => {
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            HolTerm::App(f, g)
            | HolTerm::Eq(_, f, g)
            | HolTerm::Impl(f, g)
            | HolTerm::And(f, g)
            | HolTerm::Or(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            HolTerm::Not(f) => f.collect_free(bound, out),
        }
    }

    pub fn occurs_free(&self, x: &str) -> bool {
        match self {
            HolTerm::Var(y) => x == y,
            HolTerm::Const(_) | HolTerm::True | HolTerm::False => false,
            HolTerm::Lam(y, _, b) | HolTerm::Forall(y, _, b) | HolTerm::Exists(y, _, b) => {
                y != x && b.occurs_free(x)
            }
            HolTerm::App(f, g)
            | HolTerm::Eq(_, f, g)
            | HolTerm::Impl(f, g)
            | HolTerm::And(f, g)
            | HolTerm::Or(f, g) => f.occurs_free(x) || g.occurs_free(x),
            HolTerm::Not(f) => f.occurs_free(x),
        }
    }

    /// Capture-avoiding substitution, renaming binders with the same suffix
    /// scheme as the dependent side.
    pub fn subst(&self, x: &str, u: &HolTerm) -> HolTerm {
        self.subst_with(x, u, &u.free_vars())
    }

    fn subst_with(&self, x: &str, u: &HolTerm, ufv: &BTreeSet<String>) -> HolTerm {
        let bin = |y: &String, b: &HolTerm, rebuild: &dyn Fn(String, HolTerm) -> HolTerm| {
            if y == x || !b.occurs_free(x) {
                return self.clone();
            }
            if ufv.contains(y) {
                let bfv = b.free_vars();
                let y2 = fresh_name(y, |n| ufv.contains(n) || bfv.contains(n) || n == x);
                let b2 = b.subst(y, &HolTerm::Var(y2.clone()));
                rebuild(y2, b2.subst_with(x, u, ufv))
            } else {
                rebuild(y.clone(), b.subst_with(x, u, ufv))
            }
        };
        match self {
            HolTerm::Var(y) if y == x => u.clone(),
            HolTerm::Var(_) | HolTerm::Const(_) | HolTerm::True | HolTerm::False => self.clone(),
            HolTerm::Lam(y, a, b) => bin(y, b, &|y, b| HolTerm::lam(y, a.clone(), b)),
            HolTerm::Forall(y, a, b) => bin(y, b, &|y, b| HolTerm::forall(y, a.clone(), b)),
            HolTerm::Exists(y, a, b) => bin(y, b, &|y, b| HolTerm::exists(y, a.clone(), b)),
            HolTerm::App(f, g) => HolTerm::app(f.subst_with(x, u, ufv), g.subst_with(x, u, ufv)),
            HolTerm::Eq(a, f, g) => {
                HolTerm::eq(a.clone(), f.subst_with(x, u, ufv), g.subst_with(x, u, ufv))
            }
            HolTerm::Impl(f, g) => {
                HolTerm::implies(f.subst_with(x, u, ufv), g.subst_with(x, u, ufv))
            }
            HolTerm::And(f, g) => HolTerm::and(f.subst_with(x, u, ufv), g.subst_with(x, u, ufv)),
            HolTerm::Or(f, g) => HolTerm::or(f.subst_with(x, u, ufv), g.subst_with(x, u, ufv)),
            HolTerm::Not(f) => HolTerm::not(f.subst_with(x, u, ufv)),
        }
    }

    pub fn alpha_eq(&self, other: &HolTerm) -> bool {
        alpha(self, other, &mut Vec::new())
    }

    /// Constants occurring anywhere in the term.
    pub fn constants(&self, out: &mut BTreeSet<String>) {
        match self {
            HolTerm::Const(c) => {
                out.insert(c.clone());
            }
            HolTerm::Var(_) | HolTerm::True | HolTerm::False => {}
            HolTerm::Lam(_, _, b) | HolTerm::Forall(_, _, b) | HolTerm::Exists(_, _, b) => {
                b.constants(out)
            }
            HolTerm::App(f, g)
            | HolTerm::Eq(_, f, g)
            | HolTerm::Impl(f, g)
            | HolTerm::And(f, g)
            | HolTerm::Or(f, g) => {
                f.constants(out);
                g.constants(out);
            }
            HolTerm::Not(f) => f.constants(out),
        }
    }
}

fn alpha(a: &HolTerm, b: &HolTerm, env: &mut Vec<(String, String)>) -> bool {
    use HolTerm::*;
    let under = |x: &str, y: &str, l: &HolTerm, r: &HolTerm, env: &mut Vec<(String, String)>| {
        env.push((x.to_string(), y.to_string()));
        let ok = alpha(l, r, env);
        env.pop();
        ok
    };
    match (a, b) {
        (Var(x), Var(y)) => {
            let l = env.iter().rposition(|(p, _)| p == x);
            let r = env.iter().rposition(|(_, q)| q == y);
            match (l, r) {
                (None, None) => x == y,
                (Some(i), Some(j)) => i == j,
                _ => false,
            }
        }
        (Const(c), Const(d)) => c == d,
        (True, True) | (False, False) => true,
        (Lam(x, s, l), Lam(y, t, r))
        | (Forall(x, s, l), Forall(y, t, r))
        | (Exists(x, s, l), Exists(y, t, r)) => s == t && under(x, y, l, r, env),
        (App(f, g), App(h, k))
        | (Impl(f, g), Impl(h, k))
        | (And(f, g), And(h, k))
        | (Or(f, g), Or(h, k)) => alpha(f, h, env) && alpha(g, k, env),
        (Eq(s, f, g), Eq(t, h, k)) => s == t && alpha(f, h, env) && alpha(g, k, env),
        (Not(f), Not(g)) => alpha(f, g, env),
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HolDecl {
    Type(String),
    Const(String, HolType),
    Axiom(String, HolTerm),
}

impl HolDecl {
    pub fn name(&self) -> &str {
        match self {
            HolDecl::Type(n) | HolDecl::Const(n, _) | HolDecl::Axiom(n, _) => n,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HolTheory {
    pub decls: Vec<HolDecl>,
}

impl HolTheory {
    pub fn has_type(&self, name: &str) -> bool {
        self.decls
            .iter()
            .any(|d| matches!(d, HolDecl::Type(n) if n == name))
    }

    pub fn const_type(&self, name: &str) -> Option<&HolType> {
        self.decls.iter().find_map(|d| match d {
            HolDecl::Const(n, a) if n == name => Some(a),
            _ => None,
        })
    }

    pub fn axioms(&self) -> impl Iterator<Item = (&str, &HolTerm)> {
        self.decls.iter().filter_map(|d| match d {
            HolDecl::Axiom(n, f) => Some((n.as_str(), f)),
            _ => None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HolEntry {
    Var(String, HolType),
    Assume(String, HolTerm),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HolContext {
    pub entries: Vec<HolEntry>,
}

impl HolContext {
    pub fn var_type(&self, name: &str) -> Option<&HolType> {
        self.entries.iter().rev().find_map(|e| match e {
            HolEntry::Var(n, a) if n == name => Some(a),
            _ => None,
        })
    }

    pub fn assumptions(&self) -> impl Iterator<Item = (&str, &HolTerm)> {
        self.entries.iter().filter_map(|e| match e {
            HolEntry::Assume(n, f) => Some((n.as_str(), f)),
            _ => None,
        })
    }
}

/// A validity question `Γ ⊢ F` over a theory.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolProblem {
    pub theory: HolTheory,
    pub context: HolContext,
    pub conjecture: HolTerm,
}

impl fmt::Display for HolType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolType::Base(a) => f.write_str(a),
            HolType::Bool => f.write_str("bool"),
            HolType::Arrow(a, b) => {
                if matches!(**a, HolType::Arrow(..)) {
                    write!(f, "({a}) → {b}")
                } else {
                    write!(f, "{a} → {b}")
                }
            }
        }
    }
}

fn prec(t: &HolTerm) -> u8 {
    match t {
        HolTerm::Lam(..) | HolTerm::Forall(..) | HolTerm::Exists(..) => 0,
        HolTerm::Impl(..) => 1,
        HolTerm::Or(..) => 2,
        HolTerm::And(..) => 3,
        HolTerm::Eq(..) => 4,
        HolTerm::Not(..) => 5,
        HolTerm::App(..) => 6,
        _ => 7,
    }
}

fn write_hol(f: &mut fmt::Formatter<'_>, t: &HolTerm, ctx: u8) -> fmt::Result {
    let wrap = prec(t) < ctx;
    if wrap {
        f.write_str("(")?;
    }
    match t {
        HolTerm::Const(c) | HolTerm::Var(c) => f.write_str(c)?,
        HolTerm::True => f.write_str("true")?,
        HolTerm::False => f.write_str("false")?,
        HolTerm::Lam(x, a, b) | HolTerm::Forall(x, a, b) | HolTerm::Exists(x, a, b) => {
            let q = match t {
                HolTerm::Lam(..) => "λ",
                HolTerm::Forall(..) => "∀",
                _ => "∃",
            };
            match a {
                HolType::Arrow(..) => write!(f, "{q}{x}:({a}). ")?,
                _ => write!(f, "{q}{x}:{a}. ")?,
            }
            write_hol(f, b, 0)?;
        }
        HolTerm::App(g, a) => {
            write_hol(f, g, 6)?;
            f.write_str(" ")?;
            write_hol(f, a, 7)?;
        }
        HolTerm::Eq(a, s, u) => {
            write_hol(f, s, 5)?;
            match a {
                HolType::Base(n) => write!(f, " =_{n} ")?,
                HolType::Bool => f.write_str(" =_bool ")?,
                _ => write!(f, " =_{{{a}}} ")?,
            }
            write_hol(f, u, 5)?;
        }
        HolTerm::Impl(p, q) => {
            write_hol(f, p, 2)?;
            f.write_str(" ⟹ ")?;
            write_hol(f, q, 1)?;
        }
        HolTerm::Or(p, q) => {
            write_hol(f, p, 3)?;
            f.write_str(" ∨ ")?;
            write_hol(f, q, 2)?;
        }
        HolTerm::And(p, q) => {
            write_hol(f, p, 4)?;
            f.write_str(" ∧ ")?;
            write_hol(f, q, 3)?;
        }
        HolTerm::Not(p) => {
            f.write_str("¬")?;
            write_hol(f, p, 5)?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for HolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_hol(f, self, 0)
    }
}

impl fmt::Display for HolDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HolDecl::Type(a) => write!(f, "{a}: tp"),
            HolDecl::Const(c, a) => write!(f, "{c}: {a}"),
            HolDecl::Axiom(n, p) => write!(f, "{n}: {p}"),
        }
    }
}

impl fmt::Display for HolTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
