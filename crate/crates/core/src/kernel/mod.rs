//! The DHOL type checker. Validity questions that arise while checking are
//! not decided here: they are packaged as [`Obligation`]s, numbered in the
//! order they are produced, and handed to a [`ValidityOracle`].

mod check;
mod psub;

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use thiserror::Error;

use crate::oracle::{OracleVerdict, UnknownReason};
use crate::syntax::{Context, CtxEntry, Term, Theory, Type};

pub use check::Checker;
pub use psub::normalize_psub;

/// Which rule demanded an obligation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// Argument `index` (zero-based) of two applications of type constructor `ty`.
    BaseArgEq { ty: String, index: usize },
    PsubIntro,
    PsubVariance,
    TypeEqPred,
    Conjecture,
    Other(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::BaseArgEq { ty, index } => write!(f, "BaseArgEq({ty}, {index})"),
            Provenance::PsubIntro => f.write_str("PsubIntro"),
            Provenance::PsubVariance => f.write_str("PsubVariance"),
            Provenance::TypeEqPred => f.write_str("TypeEqPred"),
            Provenance::Conjecture => f.write_str("Conjecture"),
            Provenance::Other(s) => write!(f, "Other({s})"),
        }
    }
}

/// A sequent `Γ ⊢ F` the checker could not settle structurally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obligation {
    pub context: Context,
    pub formula: Term,
    pub provenance: Provenance,
    pub seq: usize,
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self
            .context
            .entries
            .iter()
            .map(|e| match e {
                CtxEntry::Var { name, ty } => format!("{name}:{ty}"),
                CtxEntry::Assume { name, formula } => format!("{name}:{formula}"),
            })
            .collect();
        write!(f, "[{}] {} ⊢ {}", self.provenance, ctx.join(", "), self.formula)
    }
}

/// Decides obligations on behalf of the checker.
pub trait ValidityOracle {
    /// `theory` is the elaborated prefix in scope when the obligation arose.
    fn decide(&mut self, theory: &Theory, ob: &Obligation) -> OracleVerdict;
}

/// Proves everything. Only useful for tests and for exploring what a
/// checker run would demand.
#[derive(Debug, Default, Clone, Copy)]
pub struct AcceptAll;

impl ValidityOracle for AcceptAll {
    fn decide(&mut self, _: &Theory, _: &Obligation) -> OracleVerdict {
        OracleVerdict::Proved { by: "accept-all".into(), elapsed: Duration::ZERO }
    }
}

/// Never attempts anything; every obligation stays open.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoOracle;

impl ValidityOracle for NoOracle {
    fn decide(&mut self, _: &Theory, _: &Obligation) -> OracleVerdict {
        OracleVerdict::Unknown(UnknownReason::NotAttempted)
    }
}

impl<F: FnMut(&Theory, &Obligation) -> OracleVerdict> ValidityOracle for F {
    fn decide(&mut self, theory: &Theory, ob: &Obligation) -> OracleVerdict {
        self(theory, ob)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("unknown type constructor `{0}`")]
    UnknownType(String),
    #[error("name `{0}` is already declared")]
    Duplicate(String),
    #[error("type constructor `{ty}` expects {expected} argument(s), got {found}")]
    Arity { ty: String, expected: usize, found: usize },
    #[error("`{term}` has type {ty}, which is not a function type")]
    NotAFunction { term: String, ty: String },
    #[error("type mismatch: {found} vs {expected} (while checking `{term}`)")]
    Mismatch { term: String, expected: String, found: String },
    #[error("cannot infer `_` in `{0}`")]
    UnsolvedHole(String),
    #[error("`_` is only allowed as an argument of an application")]
    StrayHole,
    #[error("obligation #{seq} was refuted by {by}: {formula}")]
    Refuted { seq: usize, formula: String, by: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accepted,
    Rejected { reason: String, location: String },
    /// Structurally fine, but some obligation is neither proved nor refuted.
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub verdict: Verdict,
    pub obligations: Vec<Obligation>,
    pub discharged: BTreeMap<usize, OracleVerdict>,
    /// The checked input with equality annotations and `_` filled in. Only
    /// the prefix up to a rejection is present.
    pub theory: Theory,
    pub context: Context,
    pub formula: Option<Term>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accepted
    }

    /// Obligations the oracle did not prove.
    pub fn open(&self) -> impl Iterator<Item = &Obligation> {
        self.obligations
            .iter()
            .filter(|o| !matches!(self.discharged.get(&o.seq), Some(OracleVerdict::Proved { .. })))
    }
}

/// Checks a theory declaration by declaration.
pub fn check_theory(thy: &Theory, oracle: &mut dyn ValidityOracle) -> CheckReport {
    check_problem(thy, &Context::new(), None, oracle)
}

/// Checks `ctx` against an already elaborated theory.
pub fn check_context(
    ctx: &Context,
    thy: &Theory,
    oracle: &mut dyn ValidityOracle,
) -> CheckReport {
    let mut ck = Checker::with_theory(thy.clone(), oracle);
    let res = ck.check_context(ctx).map_err(|e| (e, "context".to_string()));
    ck.into_report(res.map(|c| (c, None)))
}

/// Checks `ctx` and then `formula` at `bool` against an already elaborated
/// theory. Only obligations of the context and the formula show up.
pub fn check_conjecture(
    thy: &Theory,
    ctx: &Context,
    formula: &Term,
    oracle: &mut dyn ValidityOracle,
) -> CheckReport {
    let mut ck = Checker::with_theory(thy.clone(), oracle);
    let res = (|| {
        let ctx = ck.check_context(ctx).map_err(|e| (e, "context".to_string()))?;
        let mut c = ctx.clone();
        let f = ck.check(&mut c, formula, &Type::Bool).map_err(|e| (e, "conjecture".to_string()))?;
        Ok((ctx, Some(f)))
    })();
    ck.into_report(res)
}

/// Checks a theory, then a context and an optional conjecture at `bool`.
pub fn check_problem(
    thy: &Theory,
    ctx: &Context,
    conjecture: Option<&Term>,
    oracle: &mut dyn ValidityOracle,
) -> CheckReport {
    let mut ck = Checker::new(oracle);
    let res = (|| {
        for d in &thy.decls {
            ck.declare(d).map_err(|e| (e, format!("declaration `{}`", d.name())))?;
        }
        let ctx = ck.check_context(ctx).map_err(|e| (e, "context".to_string()))?;
        let formula = match conjecture {
            Some(f) => {
                let mut c = ctx.clone();
                Some(ck.check(&mut c, f, &Type::Bool).map_err(|e| (e, "conjecture".to_string()))?)
            }
            None => None,
        };
        Ok((ctx, formula))
    })();
    ck.into_report(res)
}

/// Convenience for building a theory from declarations that are already
/// known to be fine (tests, generated input).
pub fn elaborate_unchecked(thy: &Theory) -> Result<Theory, KernelError> {
    let mut oracle = AcceptAll;
    let mut ck = Checker::new(&mut oracle);
    for d in &thy.decls {
        ck.declare(d)?;
    }
    Ok(ck.theory().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::syntax::Syntax;

    fn cat() -> Theory {
        elaborate_unchecked(&category()).expect("category theory elaborates")
    }

    fn formulas(obs: &[Obligation]) -> Vec<String> {
        obs.iter().map(|o| o.formula.to_string()).collect()
    }

    #[test]
    fn category_theory_has_no_obligations() {
        let r = check_theory(&category(), &mut NoOracle);
        assert_eq!(r.verdict, Verdict::Accepted);
        assert!(r.obligations.is_empty());
    }

    #[test]
    fn empty_theory() {
        let r = check_theory(&Theory::new(), &mut NoOracle);
        assert_eq!(r.verdict, Verdict::Accepted);
        assert!(r.obligations.is_empty());
    }

    #[test]
    fn free_variables_in_axioms_are_rejected() {
        let thy = category().with_axiom(
            "bad",
            Term::eq(mor(v("x"), v("x")), id(v("x")), id(v("y"))),
        );
        let r = check_theory(&thy, &mut AcceptAll);
        match r.verdict {
            Verdict::Rejected { reason, location } => {
                assert!(reason.contains("unbound"), "{reason}");
                assert!(location.contains("bad"));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn contexts() {
        let thy = cat();
        let ok = Context::new().with_var("x", obj()).with_var("y", obj()).with_var("m", mor(v("x"), v("y")));
        assert_eq!(check_context(&ok, &thy, &mut NoOracle).verdict, Verdict::Accepted);
        let bad = Context::new().with_assumption("ass", Term::eq(obj(), v("x"), v("y")));
        assert!(matches!(check_context(&bad, &thy, &mut NoOracle).verdict, Verdict::Rejected { .. }));
        let inter = Context::new()
            .with_var("x", obj())
            .with_assumption("ass", Term::eq(obj(), v("x"), v("x")))
            .with_var("m", mor(v("x"), v("x")));
        assert_eq!(check_context(&inter, &thy, &mut NoOracle).verdict, Verdict::Accepted);
    }

    #[test]
    fn infer_identity_application() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new().with_var("x", obj());
        let (_, ty) = ck.infer(&mut ctx, &id(v("x"))).unwrap();
        assert!(ty.alpha_eq(&mor(v("x"), v("x"))));
        assert!(ck.obligations().is_empty());
    }

    #[test]
    fn composition_of_unaligned_morphisms() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new();
        for x in ["u", "v", "v2", "w"] {
            ctx = ctx.with_var(x, obj());
        }
        let mut ctx = ctx.with_var("f", mor(v("u"), v("v"))).with_var("g", mor(v("v2"), v("w")));
        let t = comp(v("u"), v("v2"), v("w"), v("f"), v("g"));
        let (_, ty) = ck.infer(&mut ctx, &t).unwrap();
        assert!(ty.alpha_eq(&mor(v("u"), v("w"))));
        assert_eq!(formulas(ck.obligations()), ["v =_obj v2"]);
        assert_eq!(ck.obligations()[0].provenance, Provenance::BaseArgEq { ty: "mor".into(), index: 1 });
    }

    #[test]
    fn holes_are_solved_by_matching() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new()
            .with_var("x", obj())
            .with_var("y", obj())
            .with_var("m", mor(v("x"), v("y")));
        let t = comp(Term::Hole, Term::Hole, Term::Hole, id(v("x")), v("m"));
        let (t, ty) = ck.infer(&mut ctx, &t).unwrap();
        assert_eq!(t, comp(v("x"), v("x"), v("y"), id(v("x")), v("m")));
        assert!(ty.alpha_eq(&mor(v("x"), v("y"))));
        assert!(ck.obligations().is_empty());
        let lone = Term::app(Term::cnst("id"), Term::Hole);
        assert!(matches!(ck.infer(&mut ctx, &lone), Err(KernelError::UnsolvedHole(_))));
    }

    #[test]
    fn nested_hole_spines_contribute_their_type() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new()
            .with_var("x", obj())
            .with_var("y", obj())
            .with_var("z", obj())
            .with_var("f", mor(v("x"), v("y")))
            .with_var("g", mor(v("y"), v("z")));
        let h = || Term::Hole;
        let inner = comp(h(), h(), h(), v("f"), v("g"));
        let t = comp(h(), h(), h(), inner, id(v("z")));
        let (t, _) = ck.infer(&mut ctx, &t).unwrap();
        let want = comp(v("x"), v("z"), v("z"), comp(v("x"), v("y"), v("z"), v("f"), v("g")), id(v("z")));
        assert_eq!(t, want);
        assert!(ck.obligations().is_empty());
    }

    #[test]
    fn dependent_implication() {
        let ctx = Context::new().with_var("x", obj()).with_var("y", obj());
        let f = Term::implies(
            Term::eq_unannotated(v("x"), v("y")),
            Term::eq_unannotated(id(v("x")), id(v("y"))),
        );
        let r = check_problem(&category(), &ctx, Some(&f), &mut AcceptAll);
        assert_eq!(r.verdict, Verdict::Accepted);
        assert_eq!(formulas(&r.obligations), ["y =_obj x", "y =_obj x"]);
        assert!(r.obligations.iter().all(|o| o.context.entries.len() == 3));
        let elaborated = r.formula.unwrap();
        assert_eq!(elaborated.to_string(), "x =_obj y ⟹ id x =_{mor x x} id y");
    }

    #[test]
    fn check_against_mismatched_base_type() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new().with_var("x", obj()).with_var("y", obj());
        ck.check(&mut ctx, &id(v("x")), &mor(v("x"), v("y"))).unwrap();
        assert_eq!(formulas(ck.obligations()), ["x =_obj y"]);
    }

    #[test]
    fn lambda_against_pi_needs_nothing() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let t = Term::lam("a", obj(), id(v("a")));
        ck.check(&mut Context::new(), &t, &Type::pi("a", obj(), mor(v("a"), v("a")))).unwrap();
        assert!(ck.obligations().is_empty());
    }

    #[test]
    fn type_equality_and_mismatch() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new()
            .with_var("x", obj())
            .with_var("y", obj())
            .with_assumption("ass", Term::eq(obj(), v("x"), v("y")));
        ck.type_equal(&mut ctx, &mor(v("x"), v("x")), &mor(v("y"), v("y"))).unwrap();
        assert_eq!(formulas(ck.obligations()), ["x =_obj y", "x =_obj y"]);
        ck.type_equal(&mut ctx, &obj(), &obj()).unwrap();
        assert_eq!(ck.obligations().len(), 2);
        assert!(matches!(ck.type_equal(&mut ctx, &Type::Bool, &obj()), Err(KernelError::Mismatch { .. })));
    }

    #[test]
    fn arity_is_checked() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let mut ctx = Context::new().with_var("x", obj());
        let err = ck.wf_type(&mut ctx, &Type::base("mor", vec![v("x")])).unwrap_err();
        assert_eq!(err, KernelError::Arity { ty: "mor".into(), expected: 2, found: 1 });
    }

    fn iso_pred(u: &str) -> Term {
        let muu = mor(v(u), v(u));
        let cmp = |f: Term, g: Term| comp(v(u), v(u), v(u), f, g);
        Term::lam(
            "m",
            muu.clone(),
            Term::exists(
                "i",
                muu.clone(),
                Term::and(
                    Term::eq(muu.clone(), cmp(v("m"), v("i")), id(v(u))),
                    Term::eq(muu, cmp(v("i"), v("m")), id(v(u))),
                ),
            ),
        )
    }

    #[test]
    fn isomorphism_membership() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let iso = Type::psub(mor(v("u"), v("u")), iso_pred("u"));
        let mut ctx = Context::new().with_var("u", obj());
        let iso = ck.wf_type(&mut ctx, &iso).unwrap();
        assert!(ck.obligations().is_empty());
        let mut ctx = ctx.with_var("m", mor(v("u"), v("u")));
        ck.check(&mut ctx, &v("m"), &iso).unwrap();
        assert_eq!(ck.obligations().len(), 1);
        assert_eq!(ck.obligations()[0].provenance, Provenance::PsubIntro);
        assert!(ck.obligations()[0].formula.to_string().starts_with("∃i:mor u u."));
        // a member of the subtype is a morphism without further ado
        let mut ctx = ctx.with_var("n", iso.clone());
        ck.check(&mut ctx, &v("n"), &mor(v("u"), v("u"))).unwrap();
        ck.subtype(&mut ctx, &iso, &mor(v("u"), v("u"))).unwrap();
        assert_eq!(ck.obligations().len(), 1);
    }

    #[test]
    fn subtype_into_trivial_predicate() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let triv = Type::psub(obj(), Term::lam("x", obj(), Term::truth()));
        ck.subtype(&mut Context::new(), &obj(), &triv).unwrap();
        assert_eq!(formulas(ck.obligations()), ["true"]);
        assert_eq!(ck.obligations()[0].provenance, Provenance::PsubVariance);
    }

    #[test]
    fn hoisted_codomain_is_a_subtype_of_its_normal_form() {
        let mut oracle = NoOracle;
        let mut ck = Checker::with_theory(cat(), &mut oracle);
        let p = Term::lam("z", obj(), Term::truth());
        let lhs = Type::pi("x", obj(), Type::psub(obj(), p.clone()));
        let fun = Type::pi("x", obj(), obj());
        let pred = Term::lam(
            "f",
            fun.clone(),
            Term::forall("x", obj(), Term::app(p, Term::app(v("f"), v("x")))),
        );
        ck.subtype(&mut Context::new(), &lhs, &Type::psub(fun, pred)).unwrap();
        assert!(ck.obligations().is_empty());
    }

    #[test]
    fn refutation_rejects() {
        let ctx = Context::new().with_var("x", obj()).with_var("y", obj());
        let f = Term::eq_unannotated(id(v("x")), id(v("y")));
        let mut refuter = |_: &Theory, _: &Obligation| OracleVerdict::Refuted {
            by: "test".into(),
            elapsed: Duration::ZERO,
        };
        let r = check_problem(&category(), &ctx, Some(&f), &mut refuter);
        assert!(matches!(r.verdict, Verdict::Rejected { .. }));
        let r = check_problem(&category(), &ctx, Some(&f), &mut NoOracle);
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn binders_shadowing_context_names_are_renamed() {
        let ctx = Context::new().with_var("x", obj());
        let f = Term::forall("x", obj(), Term::eq_unannotated(id(v("x")), id(v("x"))));
        let r = check_problem(&category(), &ctx, Some(&f), &mut NoOracle);
        assert_eq!(r.verdict, Verdict::Accepted);
        assert_eq!(r.formula.unwrap().to_string(), "∀x1:obj. id x1 =_{mor x1 x1} id x1");
    }
}
