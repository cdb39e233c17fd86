use std::collections::BTreeSet;

use crate::syntax::{fresh_name, Syntax, Term, Type};

/// Hoists predicate subtypes out of Π-codomains and merges nested ones, so
/// that the result is either psub-free at the top or `Psub(core, p)` with a
/// psub-free `core`. Domains are left alone.
pub fn normalize_psub(a: &Type) -> Type {
    match a {
        Type::Base(..) | Type::Bool | Type::Hole => a.clone(),
        Type::Pi(x, dom, cod) => match normalize_psub(cod) {
            Type::Psub(core, p) => {
                let fun = Type::pi(x.clone(), (**dom).clone(), *core);
                let mut avoid = p.free_vars();
                avoid.insert(x.clone());
                let f = fresh_name("f", |n| avoid.contains(n));
                // an arrow binder cannot be referenced, so pick a usable name
                let (x, p) = if x == "_" {
                    let y = fresh_name("x", |n| avoid.contains(n) || n == f);
                    (y, *p)
                } else {
                    (x.clone(), *p)
                };
                let body = Term::app(p, Term::app(Term::var(f.clone()), Term::var(x.clone())));
                let pred = Term::lam(f, fun.clone(), Term::forall(x, (**dom).clone(), body));
                Type::psub(fun, pred)
            }
            cod => Type::pi(x.clone(), (**dom).clone(), cod),
        },
        Type::Psub(base, q) => match normalize_psub(base) {
            Type::Psub(core, p) => {
                let avoid: BTreeSet<String> = p.free_vars().union(&q.free_vars()).cloned().collect();
                let x = fresh_name("x", |n| avoid.contains(n));
                let conj = Term::and(
                    Term::app(*p, Term::var(x.clone())),
                    Term::app((**q).clone(), Term::var(x.clone())),
                );
                Type::psub((*core).clone(), Term::lam(x, *core, conj))
            }
            core => Type::psub(core, (**q).clone()),
        },
    }
}

/// Splits a normalized type into its core and optional outer predicate.
pub(crate) fn split_psub(a: Type) -> (Type, Option<Term>) {
    match a {
        Type::Psub(core, p) => (*core, Some(*p)),
        a => (a, None),
    }
}

/// Removes outer predicate subtypes: `(A|p)|q` becomes `A`.
pub(crate) fn strip_psub(a: &Type) -> &Type {
    match a {
        Type::Psub(b, _) => strip_psub(b),
        a => a,
    }
}
