use std::fmt;

use super::{Sugar, Syntax, Term, Type};

// Precedence levels, loosest first.
const BINDER: u8 = 0;
const IMPL: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const EQ: u8 = 4;
const NOT: u8 = 5;
const APP: u8 = 6;
const ATOM: u8 = 7;

fn paren(
    f: &mut fmt::Formatter<'_>,
    wrap: bool,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if wrap {
        f.write_str("(")?;
    }
    body(f)?;
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

fn write_type(f: &mut fmt::Formatter<'_>, a: &Type, ctx: u8) -> fmt::Result {
    match a {
        Type::Bool => f.write_str("bool"),
        Type::Hole => f.write_str("_"),
        Type::Base(n, args) if args.is_empty() => f.write_str(n),
        Type::Base(n, args) => paren(f, ctx > 2, |f| {
            f.write_str(n)?;
            for t in args {
                f.write_str(" ")?;
                write_term(f, t, ATOM)?;
            }
            Ok(())
        }),
        Type::Pi(x, dom, cod) if x == "_" || !cod.occurs_free(x) => paren(f, ctx > 1, |f| {
            write_type(f, dom, 2)?;
            f.write_str(" → ")?;
            write_type(f, cod, 1)
        }),
        Type::Pi(x, dom, cod) => paren(f, ctx > 0, |f| {
            write!(f, "Π{x}:")?;
            write_type(f, dom, 2)?;
            f.write_str(". ")?;
            write_type(f, cod, 0)
        }),
        Type::Psub(base, p) => paren(f, ctx > 2, |f| {
            write_type(f, base, 3)?;
            f.write_str("|")?;
            write_term(f, p, ATOM)
        }),
    }
}

fn write_eq_annot(f: &mut fmt::Formatter<'_>, a: &Type) -> fmt::Result {
    match a {
        Type::Bool => f.write_str("=_bool"),
        Type::Hole => f.write_str("="),
        Type::Base(n, args) if args.is_empty() => write!(f, "=_{n}"),
        _ => write!(f, "=_{{{a}}}"),
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, ctx: u8) -> fmt::Result {
    match t {
        Term::Const(c) => f.write_str(c),
        Term::Var(x) => f.write_str(x),
        Term::Hole => f.write_str("_"),
        Term::Lam(x, a, b) => paren(f, ctx > BINDER, |f| {
            write!(f, "λ{x}:")?;
            write_type(f, a, 2)?;
            f.write_str(". ")?;
            write_term(f, b, BINDER)
        }),
        Term::App(g, a) => paren(f, ctx > APP, |f| {
            write_term(f, g, APP)?;
            f.write_str(" ")?;
            write_term(f, a, ATOM)
        }),
        Term::Eq(a, s, u) => paren(f, ctx > EQ, |f| {
            write_term(f, s, EQ + 1)?;
            f.write_str(" ")?;
            write_eq_annot(f, a)?;
            f.write_str(" ")?;
            write_term(f, u, EQ + 1)
        }),
        Term::Impl(p, q) => paren(f, ctx > IMPL, |f| {
            write_term(f, p, IMPL + 1)?;
            f.write_str(" ⟹ ")?;
            write_term(f, q, IMPL)
        }),
        Term::Sugar(s) => match &**s {
            Sugar::Forall(x, a, b) | Sugar::Exists(x, a, b) => paren(f, ctx > BINDER, |f| {
                let q = if matches!(**s, Sugar::Forall(..)) {
                    "∀"
                } else {
                    "∃"
                };
                write!(f, "{q}{x}:")?;
                write_type(f, a, 2)?;
                f.write_str(". ")?;
                write_term(f, b, BINDER)
            }),
            Sugar::And(p, q) => paren(f, ctx > AND, |f| {
                write_term(f, p, AND + 1)?;
                f.write_str(" ∧ ")?;
                write_term(f, q, AND)
            }),
            Sugar::Or(p, q) => paren(f, ctx > OR, |f| {
                write_term(f, p, OR + 1)?;
                f.write_str(" ∨ ")?;
                write_term(f, q, OR)
            }),
            Sugar::Not(p) => paren(f, ctx > NOT, |f| {
                f.write_str("¬")?;
                write_term(f, p, NOT)
            }),
            Sugar::True => f.write_str("true"),
            Sugar::False => f.write_str("false"),
        },
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_type(f, self, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}
