//! Random well-formed DHOL signatures, types and terms.
//!
//! Generation is directed by erased types only, so dependent arguments are
//! usually wrong; the kernel turns those into obligations, which an
//! accept-all oracle then waves through. Every base type gets a witness
//! constant so a term of it can always be built.
#![allow(dead_code)]

use dhol::hol::HolType;
use dhol::syntax::{Context, CtxEntry, Decl, Syntax, Term, Theory, Type};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug)]
pub struct GenCfg {
    pub max_tycons: usize,
    pub max_arity: usize,
    pub depth: usize,
    pub psub: bool,
    /// Whether some equations are left for the kernel to annotate.
    pub unannotated: bool,
}

impl Default for GenCfg {
    fn default() -> Self {
        GenCfg { max_tycons: 3, max_arity: 2, depth: 4, psub: true, unannotated: true }
    }
}

/// Erasure computed independently of the translator.
pub fn erase(a: &Type) -> HolType {
    match a {
        Type::Base(n, _) => HolType::base(n.clone()),
        Type::Pi(_, d, c) => HolType::arrow(erase(d), erase(c)),
        Type::Bool => HolType::Bool,
        Type::Psub(b, _) => erase(b),
        Type::Hole => panic!("erase on a placeholder"),
    }
}

fn strip(a: &Type) -> &Type {
    match a {
        Type::Psub(b, _) => strip(b),
        a => a,
    }
}

pub type Scope = Vec<(String, Type)>;

pub struct Gen {
    pub rng: ChaCha8Rng,
    pub cfg: GenCfg,
    pub thy: Theory,
    tycons: Vec<(String, Vec<(String, Type)>)>,
    next: usize,
}

impl Gen {
    pub fn new(seed: u64, cfg: GenCfg) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
            thy: Theory::new(),
            tycons: Vec::new(),
            next: 0,
        }
    }

    /// Continues from a theory built by an earlier generator.
    pub fn resume(seed: u64, cfg: GenCfg, thy: Theory) -> Gen {
        let mut g = Gen::new(seed, cfg);
        for d in &thy.decls {
            if let Decl::Type { name, telescope } = d {
                g.tycons.push((name.clone(), telescope.clone()));
            }
        }
        g.next = 1000;
        g.thy = thy;
        g
    }

    pub fn fresh(&mut self, base: &str) -> String {
        self.next += 1;
        format!("{base}{}", self.next)
    }

    /// Type constructors with witnesses, then a few constants and axioms.
    pub fn signature(&mut self) {
        let n = self.rng.gen_range(1..=self.cfg.max_tycons);
        for i in 0..n {
            let name = format!("a{i}");
            let arity = if i == 0 { 0 } else { self.rng.gen_range(0..=self.cfg.max_arity) };
            let mut tele: Scope = Vec::new();
            for _ in 0..arity {
                let ty = self.base_type(&tele, &self.tycons.clone());
                let x = self.fresh("x");
                tele.push((x, ty));
            }
            self.thy.push(Decl::Type { name: name.clone(), telescope: tele.clone() });
            let args: Vec<Term> = tele.iter().map(|(x, _)| Term::var(x)).collect();
            let wty = tele
                .iter()
                .rev()
                .fold(Type::base(name.clone(), args), |acc, (x, a)| Type::pi(x.clone(), a.clone(), acc));
            self.thy.push(Decl::Const { name: format!("w{i}"), ty: wty });
            self.tycons.push((name, tele));
        }
        for _ in 0..self.rng.gen_range(1..=3) {
            let ty = self.ty(&Vec::new(), 2);
            let c = self.fresh("c");
            self.thy.push(Decl::Const { name: c, ty });
        }
        for _ in 0..self.rng.gen_range(0..=2) {
            let f = self.formula(&Vec::new(), 2);
            let n = self.fresh("ax");
            self.thy.push(Decl::Axiom { name: n, formula: f });
        }
    }

    /// A context of one to three variables, sometimes with an assumption.
    pub fn context(&mut self) -> (Context, Scope) {
        let mut ctx = Context::new();
        let mut scope: Scope = Vec::new();
        for _ in 0..self.rng.gen_range(1..=3) {
            let ty = self.ty(&scope, 1);
            let x = self.fresh("v");
            ctx.entries.push(CtxEntry::Var { name: x.clone(), ty: ty.clone() });
            scope.push((x, ty));
        }
        if self.rng.gen_bool(0.3) {
            let f = self.formula(&scope, 1);
            let n = self.fresh("h");
            ctx.entries.push(CtxEntry::Assume { name: n, formula: f });
        }
        (ctx, scope)
    }

    /// A base type of some existing constructor, arguments built from `scope`.
    fn base_type(&mut self, scope: &Scope, tycons: &[(String, Vec<(String, Type)>)]) -> Type {
        let (name, tele) = tycons.choose(&mut self.rng).cloned().expect("some type constructor");
        let mut args = Vec::new();
        let mut vars = Vec::new();
        for (x, a) in &tele {
            let a = inst(a, &vars, &args);
            let t = self.term(scope, &a, 0);
            vars.push(x.clone());
            args.push(t);
        }
        Type::base(name, args)
    }

    pub fn ty(&mut self, scope: &Scope, depth: usize) -> Type {
        let roll = self.rng.gen_range(0..10);
        let tycons = self.tycons.clone();
        match roll {
            0 | 1 => Type::Bool,
            2 | 3 if depth > 0 => {
                let a = self.ty(scope, depth - 1);
                let x = self.fresh("y");
                let mut s2 = scope.clone();
                s2.push((x.clone(), a.clone()));
                let b = self.ty(&s2, depth - 1);
                Type::pi(x, a, b)
            }
            4 if depth > 0 && self.cfg.psub => {
                let a = self.ty(scope, depth - 1);
                let z = self.fresh("z");
                let mut s2 = scope.clone();
                s2.push((z.clone(), a.clone()));
                let f = self.formula(&s2, 1);
                Type::psub(a.clone(), Term::lam(z, a, f))
            }
            _ => self.base_type(scope, &tycons),
        }
    }

    fn heads(&self, scope: &Scope) -> Vec<(Term, Type)> {
        let mut out: Vec<(Term, Type)> = scope.iter().map(|(x, a)| (Term::var(x), a.clone())).collect();
        for d in &self.thy.decls {
            if let Decl::Const { name, ty } = d {
                out.push((Term::cnst(name), ty.clone()));
            }
        }
        out
    }

    /// Heads that reach `target` after `k` applications, with that `k`.
    fn heads_for(&self, scope: &Scope, target: &HolType) -> Vec<(Term, Type, usize)> {
        let mut out = Vec::new();
        for (h, a) in self.heads(scope) {
            let mut cur = a.clone();
            let mut k = 0;
            loop {
                if erase(&cur) == *target {
                    out.push((h.clone(), a.clone(), k));
                }
                match strip(&cur).clone() {
                    Type::Pi(_, _, c) => {
                        cur = *c;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        out
    }

    fn apply(&mut self, scope: &Scope, head: Term, ty: Type, k: usize, depth: usize) -> Term {
        let mut t = head;
        let mut cur = ty;
        for _ in 0..k {
            let Type::Pi(x, d, c) = strip(&cur).clone() else { unreachable!() };
            let arg = self.term(scope, &d, depth.saturating_sub(1));
            cur = c.subst(&x, &arg);
            t = Term::app(t, arg);
        }
        t
    }

    pub fn term(&mut self, scope: &Scope, ty: &Type, depth: usize) -> Term {
        match strip(ty).clone() {
            Type::Bool => self.formula(scope, depth),
            Type::Pi(x, a, b) => {
                let target = erase(ty);
                let heads = self.heads_for(scope, &target);
                if depth > 0 && !heads.is_empty() && self.rng.gen_bool(0.4) {
                    let (h, hty, k) = heads.choose(&mut self.rng).cloned().unwrap();
                    return self.apply(scope, h, hty, k, depth);
                }
                let y = self.fresh("x");
                let mut s2 = scope.clone();
                s2.push((y.clone(), (*a).clone()));
                let body = self.term(&s2, &b.subst(&x, &Term::var(&y)), depth.saturating_sub(1));
                Term::lam(y, *a, body)
            }
            Type::Base(n, _) => {
                let target = HolType::base(n.clone());
                let mut heads = self.heads_for(scope, &target);
                if depth == 0 {
                    let wit = format!("w{}", &n[1..]);
                    heads.retain(|(h, _, k)| *k == 0 || *h == Term::cnst(&wit));
                }
                let (h, hty, k) = heads.choose(&mut self.rng).cloned().expect("witness exists");
                self.apply(scope, h, hty, k, depth)
            }
            Type::Psub(..) | Type::Hole => unreachable!(),
        }
    }

    pub fn formula(&mut self, scope: &Scope, depth: usize) -> Term {
        let bool_heads = self.heads_for(scope, &HolType::Bool);
        if depth == 0 {
            let atoms: Vec<_> = bool_heads.iter().filter(|(_, _, k)| *k == 0).cloned().collect();
            if !atoms.is_empty() && self.rng.gen_bool(0.5) {
                return atoms.choose(&mut self.rng).unwrap().0.clone();
            }
            return if self.rng.gen_bool(0.5) { Term::truth() } else { Term::falsity() };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 | 1 => {
                let a = self.ty(scope, 1);
                let s = self.term(scope, &a, d);
                let t = self.term(scope, &a, d);
                if self.cfg.unannotated && self.rng.gen_bool(0.25) {
                    Term::eq_unannotated(s, t)
                } else {
                    Term::eq(a, s, t)
                }
            }
            2 => Term::implies(self.formula(scope, d), self.formula(scope, d)),
            3 => Term::and(self.formula(scope, d), self.formula(scope, d)),
            4 => Term::or(self.formula(scope, d), self.formula(scope, d)),
            5 => Term::not(self.formula(scope, d)),
            6 => {
                let a = self.ty(scope, 1);
                let x = self.fresh("q");
                let mut s2 = scope.clone();
                s2.push((x.clone(), a.clone()));
                let f = self.formula(&s2, d);
                if self.rng.gen_bool(0.5) {
                    Term::forall(x, a, f)
                } else {
                    Term::exists(x, a, f)
                }
            }
            7 => {
                let a = self.ty(scope, 1);
                let x = self.fresh("r");
                let mut s2 = scope.clone();
                s2.push((x.clone(), a.clone()));
                let f = self.formula(&s2, d);
                let arg = self.term(scope, &a, d);
                Term::app(Term::lam(x, a, f), arg)
            }
            _ => match bool_heads.choose(&mut self.rng).cloned() {
                Some((h, hty, k)) => self.apply(scope, h, hty, k, depth),
                None => self.formula(scope, 0),
            },
        }
    }
}

/// Simultaneous substitution of telescope variables.
pub fn inst(a: &Type, vars: &[String], args: &[Term]) -> Type {
    let mut out = a.clone();
    for (i, x) in vars.iter().enumerate() {
        out = out.subst(x, &Term::var(format!("?t{i}")));
    }
    for (i, t) in args.iter().enumerate() {
        out = out.subst(&format!("?t{i}"), t);
    }
    out
}

/// An elaborated random theory, context and term with its inferred type.
#[derive(Clone, Debug)]
pub struct Sample {
    pub theory: Theory,
    pub context: Context,
    pub scope: Scope,
    pub term: Term,
    pub ty: Type,
}

/// `None` when the kernel rejects what was generated.
pub fn sample(seed: u64, cfg: GenCfg) -> Option<Sample> {
    use dhol::kernel::{check_problem, AcceptAll, Checker};
    let mut g = Gen::new(seed, cfg);
    g.signature();
    let (ctx, scope) = g.context();
    let a = g.ty(&scope, 2);
    let t = g.term(&scope, &a, cfg.depth);
    let report = check_problem(&g.thy, &ctx, None, &mut AcceptAll);
    if !report.accepted() {
        return None;
    }
    let mut oracle = AcceptAll;
    let mut ck = Checker::with_theory(report.theory.clone(), &mut oracle);
    let mut c = report.context.clone();
    let (term, ty) = ck.infer(&mut c, &t).ok()?;
    Some(Sample { theory: report.theory, context: report.context, scope, term, ty })
}
