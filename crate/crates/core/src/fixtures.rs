//! Small theories shared by unit tests.

use crate::syntax::{Term, Theory, Type};

pub fn v(x: &str) -> Term {
    Term::var(x)
}

pub fn obj() -> Type {
    Type::atom("obj")
}

pub fn mor(a: Term, b: Term) -> Type {
    Type::base("mor", vec![a, b])
}

pub fn id(a: Term) -> Term {
    Term::app(Term::cnst("id"), a)
}

pub fn comp(a: Term, b: Term, c: Term, f: Term, g: Term) -> Term {
    Term::apps(Term::cnst("comp"), [a, b, c, f, g])
}

/// Objects, morphisms, identity, composition and the neutrality axioms.
pub fn category() -> Theory {
    let comp_ty = Type::pi(
        "a",
        obj(),
        Type::pi(
            "b",
            obj(),
            Type::pi(
                "c",
                obj(),
                Type::arrow(mor(v("a"), v("b")), Type::arrow(mor(v("b"), v("c")), mor(v("a"), v("c")))),
            ),
        ),
    );
    let xy = |body: Term| {
        Term::forall("x", obj(), Term::forall("y", obj(), Term::forall("m", mor(v("x"), v("y")), body)))
    };
    let neut_l = xy(Term::eq(
        mor(v("x"), v("y")),
        comp(v("x"), v("x"), v("y"), id(v("x")), v("m")),
        v("m"),
    ));
    let neut_r = xy(Term::eq(
        mor(v("x"), v("y")),
        comp(v("x"), v("y"), v("y"), v("m"), id(v("y"))),
        v("m"),
    ));
    Theory::new()
        .with_type("obj", vec![])
        .with_type("mor", vec![("x", obj()), ("y", obj())])
        .with_const("id", Type::pi("a", obj(), mor(v("a"), v("a"))))
        .with_const("comp", comp_ty)
        .with_axiom("neutL", neut_l)
        .with_axiom("neutR", neut_r)
}
