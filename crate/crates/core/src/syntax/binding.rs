use std::collections::BTreeSet;

use super::{Sugar, Term, Type};

/// Binding-aware operations shared by types and terms.
pub trait Syntax: Sized + Clone {
    /// Free variables, including those occurring inside type annotations.
    fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>);

    /// Capture-avoiding substitution `self[x/u]`.
    fn subst(&self, x: &str, u: &Term) -> Self;

    /// Equality up to consistent renaming of bound variables.
    fn alpha_eq(&self, other: &Self) -> bool {
        self.alpha_in(other, &mut Vec::new())
    }

    #[doc(hidden)]
    fn alpha_in(&self, other: &Self, env: &mut Vec<(String, String)>) -> bool;

    fn occurs_free(&self, x: &str) -> bool {
        self.free_vars().contains(x)
    }
}

/// Appends the smallest numeric suffix to `base` (after stripping any digits
/// it already ends in) that `taken` rejects. Returns `base` itself if free.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    if !taken(base) && !base.is_empty() {
        return base.to_string();
    }
    let root = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let root = if root.is_empty() { "x" } else { root };
    (1..)
        .map(|i| format!("{root}{i}"))
        .find(|n| !taken(n))
        .expect("unbounded suffix search")
}

/// Substitutes under a binder `y` scoping over `body`, renaming `y` when it
/// would capture a free variable of `u`.
fn subst_under<B: Syntax>(y: &str, body: &B, x: &str, u: &Term) -> (String, B) {
    if y == x {
        return (y.to_string(), body.clone());
    }
    let body_fv = body.free_vars();
    if !body_fv.contains(x) {
        return (y.to_string(), body.clone());
    }
    let u_fv = u.free_vars();
    if u_fv.contains(y) {
        let fresh = fresh_name(y, |n| u_fv.contains(n) || body_fv.contains(n) || n == x);
        let renamed = body.subst(y, &Term::Var(fresh.clone()));
        (fresh, renamed.subst(x, u))
    } else {
        (y.to_string(), body.subst(x, u))
    }
}

fn with_binding<R>(
    env: &mut Vec<(String, String)>,
    a: &str,
    b: &str,
    f: impl FnOnce(&mut Vec<(String, String)>) -> R,
) -> R {
    env.push((a.to_string(), b.to_string()));
    let r = f(env);
    env.pop();
    r
}

fn var_alpha(env: &[(String, String)], a: &str, b: &str) -> bool {
    let left = env.iter().rposition(|(l, _)| l == a);
    let right = env.iter().rposition(|(_, r)| r == b);
    match (left, right) {
        (None, None) => a == b,
        (Some(i), Some(j)) => i == j,
        _ => false,
    }
}

impl Syntax for Type {
    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Type::Base(_, args) => args.iter().for_each(|t| t.collect_free(bound, out)),
            Type::Pi(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Type::Bool | Type::Hole => {}
            Type::Psub(a, p) => {
                a.collect_free(bound, out);
                p.collect_free(bound, out);
            }
        }
    }

    fn subst(&self, x: &str, u: &Term) -> Type {
        match self {
            Type::Base(a, args) => {
                Type::Base(a.clone(), args.iter().map(|t| t.subst(x, u)).collect())
            }
            Type::Pi(y, a, b) => {
                let a = a.subst(x, u);
                let (y, b) = subst_under(y, &**b, x, u);
                Type::pi(y, a, b)
            }
            Type::Bool => Type::Bool,
            Type::Hole => Type::Hole,
            Type::Psub(a, p) => Type::psub(a.subst(x, u), p.subst(x, u)),
        }
    }

    fn alpha_in(&self, other: &Type, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (Type::Base(a, xs), Type::Base(b, ys)) => {
                a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(s, t)| s.alpha_in(t, env))
            }
            (Type::Pi(x, a, b), Type::Pi(y, c, d)) => {
                a.alpha_in(c, env) && with_binding(env, x, y, |env| b.alpha_in(d, env))
            }
            (Type::Bool, Type::Bool) | (Type::Hole, Type::Hole) => true,
            (Type::Psub(a, p), Type::Psub(b, q)) => a.alpha_in(b, env) && p.alpha_in(q, env),
            _ => false,
        }
    }
}

impl Syntax for Term {
    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x.clone());
                }
            }
            Term::Const(_) | Term::Hole => {}
            Term::Lam(x, a, b) => {
                a.collect_free(bound, out);
                bound.push(x.clone());
                b.collect_free(bound, out);
                bound.pop();
            }
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Eq(a, s, t) => {
                a.collect_free(bound, out);
                s.collect_free(bound, out);
                t.collect_free(bound, out);
            }
            Term::Impl(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Term::Sugar(s) => match &**s {
                Sugar::Forall(x, a, f) | Sugar::Exists(x, a, f) => {
                    a.collect_free(bound, out);
                    bound.push(x.clone());
                    f.collect_free(bound, out);
                    bound.pop();
                }
                Sugar::And(f, g) | Sugar::Or(f, g) => {
                    f.collect_free(bound, out);
                    g.collect_free(bound, out);
                }
                Sugar::Not(f) => f.collect_free(bound, out),
                Sugar::True | Sugar::False => {}
            },
        }
    }

    fn subst(&self, x: &str, u: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => u.clone(),
            Term::Var(_) | Term::Const(_) | Term::Hole => self.clone(),
            Term::Lam(y, a, b) => {
                let a = a.subst(x, u);
                let (y, b) = subst_under(y, &**b, x, u);
                Term::lam(y, a, b)
            }
            Term::App(f, a) => Term::app(f.subst(x, u), a.subst(x, u)),
            Term::Eq(a, s, t) => Term::eq(a.subst(x, u), s.subst(x, u), t.subst(x, u)),
            Term::Impl(f, g) => Term::implies(f.subst(x, u), g.subst(x, u)),
            Term::Sugar(s) => Term::Sugar(Box::new(match &**s {
                Sugar::Forall(y, a, f) => {
                    let a = a.subst(x, u);
                    let (y, f) = subst_under(y, f, x, u);
                    Sugar::Forall(y, a, f)
                }
                Sugar::Exists(y, a, f) => {
                    let a = a.subst(x, u);
                    let (y, f) = subst_under(y, f, x, u);
                    Sugar::Exists(y, a, f)
                }
                Sugar::And(f, g) => Sugar::And(f.subst(x, u), g.subst(x, u)),
                Sugar::Or(f, g) => Sugar::Or(f.subst(x, u), g.subst(x, u)),
                Sugar::Not(f) => Sugar::Not(f.subst(x, u)),
                Sugar::True => Sugar::True,
                Sugar::False => Sugar::False,
            })),
        }
    }

    fn alpha_in(&self, other: &Term, env: &mut Vec<(String, String)>) -> bool {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => var_alpha(env, a, b),
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Hole, Term::Hole) => true,
            (Term::Lam(x, a, b), Term::Lam(y, c, d)) => {
                a.alpha_in(c, env) && with_binding(env, x, y, |env| b.alpha_in(d, env))
            }
            (Term::App(f, a), Term::App(g, b)) => f.alpha_in(g, env) && a.alpha_in(b, env),
            (Term::Eq(a, s, t), Term::Eq(b, u, v)) => {
                a.alpha_in(b, env) && s.alpha_in(u, env) && t.alpha_in(v, env)
            }
            (Term::Impl(f, g), Term::Impl(h, k)) => f.alpha_in(h, env) && g.alpha_in(k, env),
            (Term::Sugar(s), Term::Sugar(t)) => match (&**s, &**t) {
                (Sugar::Forall(x, a, f), Sugar::Forall(y, b, g))
                | (Sugar::Exists(x, a, f), Sugar::Exists(y, b, g)) => {
                    a.alpha_in(b, env) && with_binding(env, x, y, |env| f.alpha_in(g, env))
                }
                (Sugar::And(f, g), Sugar::And(h, k)) | (Sugar::Or(f, g), Sugar::Or(h, k)) => {
                    f.alpha_in(h, env) && g.alpha_in(k, env)
                }
                (Sugar::Not(f), Sugar::Not(g)) => f.alpha_in(g, env),
                (Sugar::True, Sugar::True) | (Sugar::False, Sugar::False) => true,
                _ => false,
            },
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj() -> Type {
        Type::atom("obj")
    }

    fn mor(a: Term, b: Term) -> Type {
        Type::base("mor", vec![a, b])
    }

    #[test]
    fn subst_identity_case() {
        assert_eq!(Term::var("x").subst("x", &Term::var("u")), Term::var("u"));
    }

    #[test]
    fn subst_stops_at_shadowing_binder() {
        let t = Term::lam("x", Type::atom("A"), Term::var("x"));
        assert_eq!(t.subst("x", &Term::var("u")), t);
    }

    #[test]
    fn subst_reaches_type_annotations() {
        let t = Term::lam("m", mor(Term::var("x"), Term::var("x")), Term::var("m"));
        let expected = Term::lam("m", mor(Term::var("u"), Term::var("u")), Term::var("m"));
        assert_eq!(t.subst("x", &Term::var("u")), expected);
    }

    #[test]
    fn subst_renames_to_avoid_capture() {
        let t = Term::lam("y", Type::atom("A"), Term::var("x"));
        let got = t.subst("x", &Term::var("y"));
        assert_eq!(got, Term::lam("y1", Type::atom("A"), Term::var("y")));
    }

    #[test]
    fn subst_renames_pi_binder() {
        // Πy:obj. mor x y  [x := y]  ~>  Πy1:obj. mor y y1
        let a = Type::pi("y", obj(), mor(Term::var("x"), Term::var("y")));
        let got = a.subst("x", &Term::var("y"));
        assert_eq!(
            got,
            Type::pi("y1", obj(), mor(Term::var("y"), Term::var("y1")))
        );
    }

    #[test]
    fn alpha_eq_examples() {
        let idx = Term::lam("x", obj(), Term::var("x"));
        let idy = Term::lam("y", obj(), Term::var("y"));
        let kc = Term::lam("x", obj(), Term::cnst("c"));
        assert!(idx.alpha_eq(&idy));
        assert!(!idx.alpha_eq(&kc));
        let p1 = Type::pi("x", obj(), mor(Term::var("x"), Term::var("x")));
        let p2 = Type::pi("y", obj(), mor(Term::var("y"), Term::var("y")));
        assert!(p1.alpha_eq(&p2));
    }

    #[test]
    fn alpha_eq_distinguishes_free_from_bound() {
        // λx. y  vs  λy. y
        let a = Term::lam("x", obj(), Term::var("y"));
        let b = Term::lam("y", obj(), Term::var("y"));
        assert!(!a.alpha_eq(&b));
        // λx.λy. x  vs  λy.λx. y
        let c = Term::lam("x", obj(), Term::lam("y", obj(), Term::var("x")));
        let d = Term::lam("y", obj(), Term::lam("x", obj(), Term::var("y")));
        assert!(c.alpha_eq(&d));
    }

    #[test]
    fn free_vars_examples() {
        let t = Term::lam("x", mor(Term::var("u"), Term::var("u")), Term::var("x"));
        assert_eq!(t.free_vars(), BTreeSet::from(["u".to_string()]));
        let e = Term::eq(obj(), Term::var("x"), Term::var("y"));
        assert_eq!(
            e.free_vars(),
            BTreeSet::from(["x".to_string(), "y".to_string()])
        );
        assert!(Term::cnst("id").free_vars().is_empty());
    }

    #[test]
    fn fresh_name_strips_digits() {
        let taken = ["x", "x1"];
        assert_eq!(fresh_name("x", |n| taken.contains(&n)), "x2");
        assert_eq!(fresh_name("x1", |n| taken.contains(&n)), "x2");
        assert_eq!(fresh_name("z", |n| taken.contains(&n)), "z");
    }
}
