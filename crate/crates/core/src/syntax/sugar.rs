use super::{Sugar, Term, Type};

/// One step of definitional unfolding. Sub-formulas keep their own sugar
/// nodes; see [`desugar`] for the full expansion.
pub fn expand_sugar(form: &Sugar) -> Term {
    match form {
        Sugar::Forall(x, a, f) => Term::eq(
            Type::arrow(a.clone(), Type::Bool),
            Term::lam(x.clone(), a.clone(), f.clone()),
            Term::lam(x.clone(), a.clone(), Term::truth()),
        ),
        Sugar::Exists(x, a, f) => {
            Term::not(Term::forall(x.clone(), a.clone(), Term::not(f.clone())))
        }
        Sugar::And(f, g) => Term::not(Term::implies(f.clone(), Term::not(g.clone()))),
        Sugar::Or(f, g) => Term::implies(Term::not(f.clone()), g.clone()),
        Sugar::Not(f) => Term::implies(f.clone(), Term::falsity()),
        Sugar::True => {
            let id = Term::lam("x", Type::Bool, Term::var("x"));
            Term::eq(Type::arrow(Type::Bool, Type::Bool), id.clone(), id)
        }
        Sugar::False => expand_sugar(&Sugar::Forall("x".into(), Type::Bool, Term::var("x"))),
    }
}

/// Removes every sugar node, including those inside type annotations and
/// predicates.
pub fn desugar(t: &Term) -> Term {
    match t {
        Term::Const(_) | Term::Var(_) | Term::Hole => t.clone(),
        Term::Lam(x, a, b) => Term::lam(x.clone(), desugar_type(a), desugar(b)),
        Term::App(f, a) => Term::app(desugar(f), desugar(a)),
        Term::Eq(a, s, u) => Term::eq(desugar_type(a), desugar(s), desugar(u)),
        Term::Impl(f, g) => Term::implies(desugar(f), desugar(g)),
        Term::Sugar(s) => desugar(&expand_sugar(s)),
    }
}

pub fn desugar_type(a: &Type) -> Type {
    match a {
        Type::Base(n, args) => Type::base(n.clone(), args.iter().map(desugar).collect()),
        Type::Pi(x, a, b) => Type::pi(x.clone(), desugar_type(a), desugar_type(b)),
        Type::Bool | Type::Hole => a.clone(),
        Type::Psub(a, p) => Type::psub(desugar_type(a), desugar(p)),
    }
}
