use std::collections::{BTreeMap, BTreeSet};

use log::{debug, trace};

use super::psub::{normalize_psub, split_psub, strip_psub};
use super::{CheckReport, KernelError, Obligation, Provenance, ValidityOracle, Verdict};
use crate::oracle::OracleVerdict;
use crate::syntax::{fresh_name, Context, CtxEntry, Decl, Sugar, Syntax, Term, Theory, Type};

type Result<T> = std::result::Result<T, KernelError>;

/// Bidirectional checker. Holds the elaborated theory accepted so far and
/// the obligations emitted, in order.
pub struct Checker<'o> {
    theory: Theory,
    oracle: &'o mut dyn ValidityOracle,
    obligations: Vec<Obligation>,
    discharged: BTreeMap<usize, OracleVerdict>,
    open: bool,
    metas: usize,
}

/// How an argument of a spine with `_` was handled in the first pass.
enum Pending {
    Hole(String),
    Inferred(Term, Type),
    Deferred,
}

fn rename<S: Syntax>(s: &S, x: &str, z: &str) -> S {
    if x == z {
        s.clone()
    } else {
        s.subst(x, &Term::var(z))
    }
}

fn fv_without<S: Syntax>(s: &S, x: &str) -> BTreeSet<String> {
    let mut fv = s.free_vars();
    fv.remove(x);
    fv
}

fn mismatch(found: &Type, expected: &Type) -> KernelError {
    KernelError::Mismatch {
        term: String::new(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

/// Simultaneous substitution of telescope variables. The telescope
/// variables are first renamed to names no user can write so that the
/// replacements cannot interfere with one another.
fn instantiate(ty: &Type, vars: &[String], args: &[Term]) -> Type {
    let mut out = ty.clone();
    for (i, x) in vars.iter().enumerate() {
        out = out.subst(x, &Term::var(format!("?t{i}")));
    }
    for (i, t) in args.iter().enumerate() {
        out = out.subst(&format!("?t{i}"), t);
    }
    out
}

fn spine_has_holes(t: &Term) -> bool {
    matches!(t, Term::App(..)) && t.spine().1.iter().any(|a| matches!(a, Term::Hole))
}

fn match_term(p: &Term, a: &Term, metas: &mut BTreeMap<String, Option<Term>>) {
    match (p, a) {
        (Term::Var(m), _) if metas.contains_key(m) => {
            let slot = metas.get_mut(m).expect("checked");
            if slot.is_none() {
                *slot = Some(a.clone());
            }
        }
        (Term::App(f, x), Term::App(g, y)) => {
            match_term(f, g, metas);
            match_term(x, y, metas);
        }
        _ => {}
    }
}

fn match_type(p: &Type, a: &Type, metas: &mut BTreeMap<String, Option<Term>>) {
    match (strip_psub(p), strip_psub(a)) {
        (Type::Base(n, ps), Type::Base(m, xs)) if n == m && ps.len() == xs.len() => {
            for (p, a) in ps.iter().zip(xs) {
                match_term(p, a, metas);
            }
        }
        (Type::Pi(_, d1, c1), Type::Pi(_, d2, c2)) => {
            match_type(d1, d2, metas);
            match_type(c1, c2, metas);
        }
        _ => {}
    }
}

impl<'o> Checker<'o> {
    pub fn new(oracle: &'o mut dyn ValidityOracle) -> Checker<'o> {
        Checker::with_theory(Theory::new(), oracle)
    }

    /// Starts from a theory that was checked and elaborated before.
    pub fn with_theory(theory: Theory, oracle: &'o mut dyn ValidityOracle) -> Checker<'o> {
        Checker {
            theory,
            oracle,
            obligations: Vec::new(),
            discharged: BTreeMap::new(),
            open: false,
            metas: 0,
        }
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn obligations(&self) -> &[Obligation] {
        &self.obligations
    }

    pub(crate) fn into_report(
        self,
        res: std::result::Result<(Context, Option<Term>), (KernelError, String)>,
    ) -> CheckReport {
        let (verdict, context, formula) = match res {
            Ok((c, f)) if self.open => (Verdict::Inconclusive, c, f),
            Ok((c, f)) => (Verdict::Accepted, c, f),
            Err((e, location)) => {
                debug!("rejected at {location}: {e}");
                (Verdict::Rejected { reason: e.to_string(), location }, Context::new(), None)
            }
        };
        CheckReport {
            verdict,
            obligations: self.obligations,
            discharged: self.discharged,
            theory: self.theory,
            context,
            formula,
        }
    }

    fn emit(&mut self, ctx: &Context, formula: Term, provenance: Provenance) -> Result<()> {
        let ob = Obligation { context: ctx.clone(), formula, provenance, seq: self.obligations.len() };
        debug!("obligation #{}: {}", ob.seq, ob);
        let verdict = self.oracle.decide(&self.theory, &ob);
        trace!("obligation #{} -> {:?}", ob.seq, verdict);
        let seq = ob.seq;
        let refuted = match &verdict {
            OracleVerdict::Proved { .. } => None,
            OracleVerdict::Refuted { by, .. } => Some(KernelError::Refuted {
                seq,
                formula: ob.formula.to_string(),
                by: by.clone(),
            }),
            OracleVerdict::Unknown(_) => {
                self.open = true;
                None
            }
        };
        self.discharged.insert(seq, verdict);
        self.obligations.push(ob);
        refuted.map_or(Ok(()), Err)
    }

    /// Runs `f` with a variable of type `ty` in scope. The name is taken from
    /// `prefs` unless that would clash with the context or with `avoid`.
    /// When `needed` is false nothing refers to the variable and the context
    /// is left untouched.
    fn bind<R>(
        &mut self,
        ctx: &mut Context,
        prefs: &[&str],
        ty: &Type,
        needed: bool,
        avoid: &BTreeSet<String>,
        f: impl FnOnce(&mut Self, &mut Context, &str) -> Result<R>,
    ) -> Result<(String, R)> {
        if !needed {
            let z = prefs[0].to_string();
            let r = f(self, ctx, &z)?;
            return Ok((z, r));
        }
        let taken = |n: &str| ctx.contains(n) || avoid.contains(n);
        let z = match prefs.iter().find(|p| **p != "_" && !taken(p)) {
            Some(p) => p.to_string(),
            None => {
                let base = prefs.iter().find(|p| **p != "_").copied().unwrap_or("x");
                fresh_name(base, taken)
            }
        };
        ctx.entries.push(CtxEntry::Var { name: z.clone(), ty: ty.clone() });
        let r = f(self, ctx, &z);
        ctx.entries.pop();
        Ok((z, r?))
    }

    fn assuming<R>(
        &mut self,
        ctx: &mut Context,
        formula: Term,
        f: impl FnOnce(&mut Self, &mut Context) -> Result<R>,
    ) -> Result<R> {
        let name = fresh_name("ass", |n| ctx.contains(n));
        ctx.entries.push(CtxEntry::Assume { name, formula });
        let r = f(self, ctx);
        ctx.entries.pop();
        r
    }

    /// Checks one declaration against the theory so far and appends it.
    pub fn declare(&mut self, d: &Decl) -> Result<Decl> {
        if self.theory.contains(d.name()) {
            return Err(KernelError::Duplicate(d.name().to_string()));
        }
        let out = match d {
            Decl::Type { name, telescope } => {
                let mut ctx = Context::new();
                let mut tel = Vec::new();
                for (x, a) in telescope {
                    if ctx.contains(x) {
                        return Err(KernelError::Duplicate(x.clone()));
                    }
                    let a = self.wf_type(&mut ctx, a)?;
                    ctx.entries.push(CtxEntry::Var { name: x.clone(), ty: a.clone() });
                    tel.push((x.clone(), a));
                }
                Decl::Type { name: name.clone(), telescope: tel }
            }
            Decl::Const { name, ty } => {
                Decl::Const { name: name.clone(), ty: self.wf_type(&mut Context::new(), ty)? }
            }
            Decl::Axiom { name, formula } => Decl::Axiom {
                name: name.clone(),
                formula: self.check(&mut Context::new(), formula, &Type::Bool)?,
            },
        };
        debug!("declared {}", out.name());
        self.theory.push(out.clone());
        Ok(out)
    }

    /// Checks context entries left to right; each may use the ones before.
    pub fn check_context(&mut self, ctx: &Context) -> Result<Context> {
        let mut out = Context::new();
        for e in &ctx.entries {
            if out.contains(e.name()) {
                return Err(KernelError::Duplicate(e.name().to_string()));
            }
            let entry = match e {
                CtxEntry::Var { name, ty } => {
                    CtxEntry::Var { name: name.clone(), ty: self.wf_type(&mut out, ty)? }
                }
                CtxEntry::Assume { name, formula } => CtxEntry::Assume {
                    name: name.clone(),
                    formula: self.check(&mut out, formula, &Type::Bool)?,
                },
            };
            out.entries.push(entry);
        }
        Ok(out)
    }

    pub fn wf_type(&mut self, ctx: &mut Context, a: &Type) -> Result<Type> {
        match a {
            Type::Bool => Ok(Type::Bool),
            Type::Hole => Err(KernelError::StrayHole),
            Type::Base(name, args) => {
                let tel = self
                    .theory
                    .lookup_type(name)
                    .ok_or_else(|| KernelError::UnknownType(name.clone()))?
                    .to_vec();
                if tel.len() != args.len() {
                    return Err(KernelError::Arity {
                        ty: name.clone(),
                        expected: tel.len(),
                        found: args.len(),
                    });
                }
                let vars: Vec<String> = tel.iter().map(|(x, _)| x.clone()).collect();
                let mut done = Vec::new();
                for ((_, ty), arg) in tel.iter().zip(args) {
                    let expected = instantiate(ty, &vars[..done.len()], &done);
                    done.push(self.check(ctx, arg, &expected)?);
                }
                Ok(Type::Base(name.clone(), done))
            }
            Type::Pi(x, dom, cod) => {
                let dom = self.wf_type(ctx, dom)?;
                let (z, cod) = self.bind(
                    ctx,
                    &[x],
                    &dom,
                    cod.occurs_free(x),
                    &fv_without(&**cod, x),
                    |ck, ctx, z| ck.wf_type(ctx, &rename(&**cod, x, z)),
                )?;
                Ok(Type::pi(z, dom, cod))
            }
            Type::Psub(base, p) => {
                let base = self.wf_type(ctx, base)?;
                let p = self.check(ctx, p, &Type::arrow(base.clone(), Type::Bool))?;
                Ok(Type::psub(base, p))
            }
        }
    }

    pub fn check(&mut self, ctx: &mut Context, t: &Term, a: &Type) -> Result<Term> {
        match (t, a) {
            (Term::Hole, _) => Err(KernelError::StrayHole),
            (Term::Lam(..), Type::Psub(b, p)) => {
                let t = self.check(ctx, t, b)?;
                self.emit(ctx, Term::app((**p).clone(), t.clone()).head_beta(), Provenance::PsubIntro)?;
                Ok(t)
            }
            (Term::Lam(x, dom, body), Type::Pi(y, d2, cod)) => {
                let dom = self.wf_type(ctx, dom)?;
                self.type_equal(ctx, &dom, d2).map_err(|e| with_term(e, t))?;
                let needed = body.occurs_free(x) || cod.occurs_free(y);
                let avoid: BTreeSet<String> =
                    fv_without(&**body, x).union(&fv_without(&**cod, y)).cloned().collect();
                let (z, body) = self.bind(ctx, &[x, y], &dom, needed, &avoid, |ck, ctx, z| {
                    ck.check(ctx, &rename(&**body, x, z), &rename(&**cod, y, z))
                })?;
                Ok(Term::lam(z, dom, body))
            }
            _ => {
                let (t2, found) = if spine_has_holes(t) {
                    self.infer_spine(ctx, t, Some(a))?
                } else {
                    self.infer(ctx, t)?
                };
                self.coerce(ctx, t2, &found, a)
            }
        }
    }

    /// Accepts an elaborated `t : found` where `want` is expected.
    fn coerce(&mut self, ctx: &mut Context, t: Term, found: &Type, want: &Type) -> Result<Term> {
        if found.alpha_eq(want) {
            return Ok(t);
        }
        match want {
            Type::Psub(b, p) => {
                let t = self.coerce(ctx, t, found, b)?;
                self.emit(ctx, Term::app((**p).clone(), t.clone()).head_beta(), Provenance::PsubIntro)?;
                Ok(t)
            }
            _ => {
                self.subtype(ctx, found, want).map_err(|e| with_term(e, &t))?;
                Ok(t)
            }
        }
    }

    pub fn infer(&mut self, ctx: &mut Context, t: &Term) -> Result<(Term, Type)> {
        match t {
            Term::Var(x) => ctx
                .lookup_var(x)
                .map(|a| (t.clone(), a.clone()))
                .ok_or_else(|| KernelError::Unbound(x.clone())),
            Term::Const(c) => self
                .theory
                .lookup_const(c)
                .map(|a| (t.clone(), a.clone()))
                .ok_or_else(|| KernelError::Unbound(c.clone())),
            Term::Hole => Err(KernelError::StrayHole),
            Term::Lam(x, a, body) => {
                let a = self.wf_type(ctx, a)?;
                let (z, (body, bt)) = self.bind(
                    ctx,
                    &[x],
                    &a,
                    body.occurs_free(x),
                    &fv_without(&**body, x),
                    |ck, ctx, z| ck.infer(ctx, &rename(&**body, x, z)),
                )?;
                Ok((Term::lam(z.clone(), a.clone(), body), Type::pi(z, a, bt)))
            }
            Term::App(..) if spine_has_holes(t) => self.infer_spine(ctx, t, None),
            Term::App(f, arg) => {
                let (f2, ft) = self.infer(ctx, f)?;
                match strip_psub(&ft) {
                    Type::Pi(x, d, c) => {
                        let arg = self.check(ctx, arg, d)?;
                        let ty = c.subst(x, &arg);
                        Ok((Term::app(f2, arg), ty))
                    }
                    _ => Err(KernelError::NotAFunction { term: f.to_string(), ty: ft.to_string() }),
                }
            }
            Term::Eq(a, s, u) => {
                let (a, s, u) = if **a == Type::Hole {
                    let (s, st) = self.infer(ctx, s)?;
                    let u = self.check(ctx, u, &st)?;
                    (st, s, u)
                } else {
                    let a = self.wf_type(ctx, a)?;
                    let s = self.check(ctx, s, &a)?;
                    let u = self.check(ctx, u, &a)?;
                    (a, s, u)
                };
                Ok((Term::eq(a, s, u), Type::Bool))
            }
            Term::Impl(f, g) => {
                let f = self.check(ctx, f, &Type::Bool)?;
                let g = self.assuming(ctx, f.clone(), |ck, ctx| ck.check(ctx, g, &Type::Bool))?;
                Ok((Term::implies(f, g), Type::Bool))
            }
            Term::Sugar(s) => Ok((self.infer_sugar(ctx, s)?, Type::Bool)),
        }
    }

    fn infer_sugar(&mut self, ctx: &mut Context, s: &Sugar) -> Result<Term> {
        Ok(match s {
            Sugar::Forall(x, a, f) | Sugar::Exists(x, a, f) => {
                let a = self.wf_type(ctx, a)?;
                let (z, f) = self.bind(ctx, &[x], &a, f.occurs_free(x), &fv_without(f, x), |ck, ctx, z| {
                    ck.check(ctx, &rename(f, x, z), &Type::Bool)
                })?;
                if matches!(s, Sugar::Forall(..)) {
                    Term::forall(z, a, f)
                } else {
                    Term::exists(z, a, f)
                }
            }
            Sugar::And(f, g) => {
                let f = self.check(ctx, f, &Type::Bool)?;
                let g = self.assuming(ctx, f.clone(), |ck, ctx| ck.check(ctx, g, &Type::Bool))?;
                Term::and(f, g)
            }
            Sugar::Or(f, g) => {
                let f = self.check(ctx, f, &Type::Bool)?;
                let g = self.assuming(ctx, Term::not(f.clone()), |ck, ctx| {
                    ck.check(ctx, g, &Type::Bool)
                })?;
                Term::or(f, g)
            }
            Sugar::Not(f) => Term::not(self.check(ctx, f, &Type::Bool)?),
            Sugar::True => Term::truth(),
            Sugar::False => Term::falsity(),
        })
    }

    /// Applications with `_` arguments. The holes are solved by first-order
    /// matching of argument types against the domains, and then of the
    /// result type against `expected`; only afterwards are the arguments
    /// checked, so every obligation is stated about concrete terms.
    fn infer_spine(
        &mut self,
        ctx: &mut Context,
        t: &Term,
        expected: Option<&Type>,
    ) -> Result<(Term, Type)> {
        let (head, args) = t.spine();
        let (head, head_ty) = self.infer(ctx, head)?;
        let mut metas: BTreeMap<String, Option<Term>> = BTreeMap::new();
        let mut required = Vec::new();
        let mut pending = Vec::new();
        let mut ty = head_ty.clone();
        for arg in &args {
            let (x, d, c) = match strip_psub(&ty) {
                Type::Pi(x, d, c) => (x.clone(), (**d).clone(), (**c).clone()),
                _ => return Err(KernelError::NotAFunction { term: t.to_string(), ty: ty.to_string() }),
            };
            let m = format!("?{}", self.metas);
            self.metas += 1;
            metas.insert(m.clone(), None);
            match arg {
                Term::Hole => {
                    required.push(m.clone());
                    ty = c.subst(&x, &Term::var(&m));
                    pending.push(Pending::Hole(m));
                }
                arg if spine_has_holes(arg) => match self.try_infer_spine(ctx, arg)? {
                    Some((a, at)) => {
                        match_type(&d, &at, &mut metas);
                        ty = c.subst(&x, &a);
                        pending.push(Pending::Inferred(a, at));
                    }
                    None => {
                        ty = c.subst(&x, &Term::var(&m));
                        pending.push(Pending::Deferred);
                    }
                },
                arg => {
                    let (a, at) = self.infer(ctx, arg)?;
                    match_type(&d, &at, &mut metas);
                    ty = c.subst(&x, &a);
                    pending.push(Pending::Inferred(a, at));
                }
            }
        }
        if let Some(e) = expected {
            match_type(&ty, e, &mut metas);
        }
        if required.iter().any(|m| metas[m].is_none()) {
            return Err(KernelError::UnsolvedHole(t.to_string()));
        }
        let mut out = head;
        let mut ty = head_ty;
        for (arg, p) in args.iter().zip(pending) {
            let (x, d, c) = match strip_psub(&ty) {
                Type::Pi(x, d, c) => (x.clone(), (**d).clone(), (**c).clone()),
                _ => unreachable!("shape fixed in the first pass"),
            };
            let a = match p {
                Pending::Hole(m) => {
                    let sol = metas[&m].clone().expect("solved");
                    self.check(ctx, &sol, &d)?
                }
                Pending::Inferred(a, at) => self.coerce(ctx, a, &at, &d)?,
                Pending::Deferred => self.check(ctx, arg, &d)?,
            };
            ty = c.subst(&x, &a);
            out = Term::app(out, a);
        }
        Ok((out, ty))
    }

    /// Infers a nested spine on its own if its holes do not depend on the
    /// surrounding expected type. Anything emitted by a failed attempt is
    /// forgotten.
    fn try_infer_spine(&mut self, ctx: &mut Context, t: &Term) -> Result<Option<(Term, Type)>> {
        let (n, open) = (self.obligations.len(), self.open);
        match self.infer_spine(ctx, t, None) {
            Ok(r) => Ok(Some(r)),
            Err(KernelError::UnsolvedHole(_)) => {
                self.obligations.truncate(n);
                self.discharged.retain(|k, _| *k < n);
                self.open = open;
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }

    /// Emits what it takes for `a ≡ b`.
    pub fn type_equal(&mut self, ctx: &mut Context, a: &Type, b: &Type) -> Result<()> {
        if a.alpha_eq(b) {
            return Ok(());
        }
        let (na, nb) = (normalize_psub(a), normalize_psub(b));
        if na.alpha_eq(&nb) {
            return Ok(());
        }
        match (na, nb) {
            (Type::Psub(a0, p), Type::Psub(b0, q)) => {
                self.type_equal(ctx, &a0, &b0)?;
                self.emit_pred_eq(ctx, &a0, Some(&p), Some(&q))
            }
            (Type::Psub(a0, p), b) => {
                self.type_equal(ctx, &a0, &b)?;
                self.emit_pred_eq(ctx, &a0, Some(&p), None)
            }
            (a, Type::Psub(b0, q)) => {
                self.type_equal(ctx, &a, &b0)?;
                self.emit_pred_eq(ctx, &a, None, Some(&q))
            }
            (Type::Bool, Type::Bool) => Ok(()),
            (Type::Base(n, ss), Type::Base(m, ts)) if n == m && ss.len() == ts.len() => {
                let tel = self.theory.lookup_type(&n).ok_or_else(|| KernelError::UnknownType(n.clone()))?;
                let vars: Vec<String> = tel.iter().map(|(x, _)| x.clone()).collect();
                let tys: Vec<Type> = tel.iter().map(|(_, a)| a.clone()).collect();
                for (i, (s, t)) in ss.iter().zip(&ts).enumerate() {
                    if s.alpha_eq(t) {
                        continue;
                    }
                    let at = instantiate(&tys[i], &vars[..i], &ts[..i]);
                    let f = Term::eq(at, s.clone(), t.clone());
                    self.emit(ctx, f, Provenance::BaseArgEq { ty: n.clone(), index: i })?;
                }
                Ok(())
            }
            (Type::Pi(x, a1, b1), Type::Pi(y, a2, b2)) => {
                self.type_equal(ctx, &a1, &a2)?;
                let needed = b1.occurs_free(&x) || b2.occurs_free(&y);
                let avoid = fv_without(&*b1, &x).union(&fv_without(&*b2, &y)).cloned().collect();
                self.bind(ctx, &[&x, &y], &a1, needed, &avoid, |ck, ctx, z| {
                    ck.type_equal(ctx, &rename(&*b1, &x, z), &rename(&*b2, &y, z))
                })?;
                Ok(())
            }
            (a, b) => Err(mismatch(&a, &b)),
        }
    }

    /// `∀z:A0. p z =_bool q z`, a missing side standing for `λz. true`.
    fn emit_pred_eq(&mut self, ctx: &mut Context, a0: &Type, p: Option<&Term>, q: Option<&Term>) -> Result<()> {
        let mut avoid: BTreeSet<String> = ctx.entries.iter().map(|e| e.name().to_string()).collect();
        for t in [p, q].into_iter().flatten() {
            avoid.extend(t.free_vars());
        }
        let z = fresh_name("x", |n| avoid.contains(n));
        let side = |t: Option<&Term>| match t {
            Some(t) => Term::app(t.clone(), Term::var(&z)).head_beta(),
            None => Term::truth(),
        };
        let f = Term::forall(z.clone(), a0.clone(), Term::eq(Type::Bool, side(p), side(q)));
        self.emit(ctx, f, Provenance::TypeEqPred)
    }

    /// Emits what it takes for `a <: b`.
    pub fn subtype(&mut self, ctx: &mut Context, a: &Type, b: &Type) -> Result<()> {
        if a.alpha_eq(b) {
            return Ok(());
        }
        let (na, nb) = (normalize_psub(a), normalize_psub(b));
        if na.alpha_eq(&nb) {
            return Ok(());
        }
        let (ca, pa) = split_psub(na);
        let (cb, pb) = split_psub(nb);
        match (pa, pb) {
            (Some(_), None) => self.subtype(ctx, &ca, &cb),
            (pa, Some(q)) => {
                self.subtype(ctx, &ca, &cb)?;
                let mut avoid = q.free_vars();
                if let Some(p) = &pa {
                    avoid.extend(p.free_vars());
                }
                self.bind(ctx, &["x"], &ca, true, &avoid, |ck, ctx, z| {
                    let qz = Term::app(q.clone(), Term::var(z)).head_beta();
                    let f = match &pa {
                        Some(p) => Term::implies(Term::app(p.clone(), Term::var(z)).head_beta(), qz),
                        None => qz,
                    };
                    ck.emit(ctx, f, Provenance::PsubVariance)
                })?;
                Ok(())
            }
            (None, None) => match (ca, cb) {
                (Type::Pi(x, a1, b1), Type::Pi(y, a2, b2)) => {
                    self.subtype(ctx, &a2, &a1)?;
                    let needed = b1.occurs_free(&x) || b2.occurs_free(&y);
                    let avoid = fv_without(&*b1, &x).union(&fv_without(&*b2, &y)).cloned().collect();
                    self.bind(ctx, &[&y, &x], &a2, needed, &avoid, |ck, ctx, z| {
                        ck.subtype(ctx, &rename(&*b1, &x, z), &rename(&*b2, &y, z))
                    })?;
                    Ok(())
                }
                (ca, cb) => self.type_equal(ctx, &ca, &cb),
            },
        }
    }
}

fn with_term(e: KernelError, t: &Term) -> KernelError {
    match e {
        KernelError::Mismatch { term, expected, found } if term.is_empty() => {
            KernelError::Mismatch { term: t.to_string(), expected, found }
        }
        e => e,
    }
}
