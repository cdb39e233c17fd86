//! Abstract syntax of dependently-typed higher-order logic.
//!
//! Variables are named. Binders are renamed on demand during substitution
//! (see [`binding`]) so that user-facing names survive into error messages
//! and emitted problem files.

mod binding;
mod display;
mod sugar;

pub use binding::{fresh_name, Syntax};
pub use sugar::{desugar, desugar_type, expand_sugar};

/// A DHOL type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    /// A declared type constructor applied to term arguments, `a t1 … tn`.
    Base(String, Vec<Term>),
    /// Dependent function type `Πx:A. B`.
    Pi(String, Box<Type>, Box<Type>),
    Bool,
    /// Predicate subtype `A | p`.
    Psub(Box<Type>, Box<Term>),
    /// Placeholder left by the parser (e.g. the annotation of an unannotated
    /// `=`); resolved by the kernel during elaboration.
    Hole,
}

/// A DHOL term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Const(String),
    Var(String),
    Lam(String, Box<Type>, Box<Term>),
    App(Box<Term>, Box<Term>),
    /// Typed equality `s =_A t`.
    Eq(Box<Type>, Box<Term>, Box<Term>),
    /// Dependent implication: the consequent may rely on the antecedent to be
    /// well-typed.
    Impl(Box<Term>, Box<Term>),
    /// Derived connectives and quantifiers, kept as distinguished nodes.
    Sugar(Box<Sugar>),
    /// An inferable argument `_`, solved by the kernel.
    Hole,
}

/// Derived connectives. Their meaning is fixed by [`expand_sugar`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sugar {
    Forall(String, Type, Term),
    Exists(String, Type, Term),
    And(Term, Term),
    Or(Term, Term),
    Not(Term),
    True,
    False,
}

impl Type {
    pub fn base(name: impl Into<String>, args: Vec<Term>) -> Type {
        Type::Base(name.into(), args)
    }

    pub fn atom(name: impl Into<String>) -> Type {
        Type::Base(name.into(), Vec::new())
    }

    pub fn pi(var: impl Into<String>, dom: Type, cod: Type) -> Type {
        Type::Pi(var.into(), Box::new(dom), Box::new(cod))
    }

    /// Non-dependent function type. The binder is named `_`, which never
    /// occurs as a variable.
    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::pi("_", dom, cod)
    }

    pub fn psub(base: Type, pred: Term) -> Type {
        Type::Psub(Box::new(base), Box::new(pred))
    }

    pub fn is_psub(&self) -> bool {
        matches!(self, Type::Psub(..))
    }

    /// True when no `Hole` occurs anywhere inside.
    pub fn is_elaborated(&self) -> bool {
        match self {
            Type::Base(_, args) => args.iter().all(Term::is_elaborated),
            Type::Pi(_, a, b) => a.is_elaborated() && b.is_elaborated(),
            Type::Bool => true,
            Type::Psub(a, p) => a.is_elaborated() && p.is_elaborated(),
            Type::Hole => false,
        }
    }
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn cnst(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn lam(var: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Lam(var.into(), Box::new(ty), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application `f a1 … an`.
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn eq(ty: Type, lhs: Term, rhs: Term) -> Term {
        Term::Eq(Box::new(ty), Box::new(lhs), Box::new(rhs))
    }

    /// Equality whose annotation is left for the kernel to infer.
    pub fn eq_unannotated(lhs: Term, rhs: Term) -> Term {
        Term::eq(Type::Hole, lhs, rhs)
    }

    pub fn implies(f: Term, g: Term) -> Term {
        Term::Impl(Box::new(f), Box::new(g))
    }

    pub fn forall(var: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Sugar(Box::new(Sugar::Forall(var.into(), ty, body)))
    }

    pub fn exists(var: impl Into<String>, ty: Type, body: Term) -> Term {
        Term::Sugar(Box::new(Sugar::Exists(var.into(), ty, body)))
    }

    pub fn and(f: Term, g: Term) -> Term {
        Term::Sugar(Box::new(Sugar::And(f, g)))
    }

    pub fn or(f: Term, g: Term) -> Term {
        Term::Sugar(Box::new(Sugar::Or(f, g)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Term) -> Term {
        Term::Sugar(Box::new(Sugar::Not(f)))
    }

    pub fn truth() -> Term {
        Term::Sugar(Box::new(Sugar::True))
    }

    pub fn falsity() -> Term {
        Term::Sugar(Box::new(Sugar::False))
    }

    /// Splits `f a1 … an` into the head and its arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let Term::App(f, a) = head {
            args.push(&**a);
            head = f;
        }
        args.reverse();
        (head, args)
    }

    pub fn is_elaborated(&self) -> bool {
        match self {
            Term::Const(_) | Term::Var(_) => true,
            Term::Lam(_, a, b) => a.is_elaborated() && b.is_elaborated(),
            Term::App(f, a) => f.is_elaborated() && a.is_elaborated(),
            Term::Eq(a, s, t) => a.is_elaborated() && s.is_elaborated() && t.is_elaborated(),
            Term::Impl(f, g) => f.is_elaborated() && g.is_elaborated(),
            Term::Sugar(s) => match &**s {
                Sugar::Forall(_, a, f) | Sugar::Exists(_, a, f) => {
                    a.is_elaborated() && f.is_elaborated()
                }
                Sugar::And(f, g) | Sugar::Or(f, g) => f.is_elaborated() && g.is_elaborated(),
                Sugar::Not(f) => f.is_elaborated(),
                Sugar::True | Sugar::False => true,
            },
            Term::Hole => false,
        }
    }

    /// Contracts head beta-redexes `(λx:A. b) a` until none is left at the top.
    pub fn head_beta(self) -> Term {
        match self {
            Term::App(f, a) => match f.head_beta() {
                Term::Lam(x, _, body) => body.subst(&x, &a).head_beta(),
                f => Term::app(f, *a),
            },
            t => t,
        }
    }
}

/// A theory declaration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    /// `a : Πx1:A1 … Πxn:An. tp`
    Type {
        name: String,
        telescope: Vec<(String, Type)>,
    },
    Const {
        name: String,
        ty: Type,
    },
    Axiom {
        name: String,
        formula: Term,
    },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Type { name, .. } | Decl::Const { name, .. } | Decl::Axiom { name, .. } => name,
        }
    }
}

/// An ordered list of declarations; each may refer only to earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub decls: Vec<Decl>,
}

impl Theory {
    pub fn new() -> Theory {
        Theory::default()
    }

    pub fn push(&mut self, decl: Decl) {
        self.decls.push(decl);
    }

    pub fn with_type(mut self, name: &str, telescope: Vec<(&str, Type)>) -> Theory {
        self.push(Decl::Type {
            name: name.into(),
            telescope: telescope
                .into_iter()
                .map(|(x, a)| (x.to_string(), a))
                .collect(),
        });
        self
    }

    pub fn with_const(mut self, name: &str, ty: Type) -> Theory {
        self.push(Decl::Const {
            name: name.into(),
            ty,
        });
        self
    }

    pub fn with_axiom(mut self, name: &str, formula: Term) -> Theory {
        self.push(Decl::Axiom {
            name: name.into(),
            formula,
        });
        self
    }

    pub fn lookup_type(&self, name: &str) -> Option<&[(String, Type)]> {
        self.decls.iter().find_map(|d| match d {
            Decl::Type { name: n, telescope } if n == name => Some(telescope.as_slice()),
            _ => None,
        })
    }

    pub fn lookup_const(&self, name: &str) -> Option<&Type> {
        self.decls.iter().find_map(|d| match d {
            Decl::Const { name: n, ty } if n == name => Some(ty),
            _ => None,
        })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.iter().any(|d| d.name() == name)
    }
}

/// A context entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CtxEntry {
    Var { name: String, ty: Type },
    Assume { name: String, formula: Term },
}

impl CtxEntry {
    pub fn name(&self) -> &str {
        match self {
            CtxEntry::Var { name, .. } | CtxEntry::Assume { name, .. } => name,
        }
    }
}

/// Variables and assumptions in a single ordered list: a variable's type may
/// depend on an earlier assumption.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub entries: Vec<CtxEntry>,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }

    pub fn with_var(mut self, name: &str, ty: Type) -> Context {
        self.entries.push(CtxEntry::Var {
            name: name.into(),
            ty,
        });
        self
    }

    pub fn with_assumption(mut self, name: &str, formula: Term) -> Context {
        self.entries.push(CtxEntry::Assume {
            name: name.into(),
            formula,
        });
        self
    }

    pub fn lookup_var(&self, name: &str) -> Option<&Type> {
        self.entries.iter().rev().find_map(|e| match e {
            CtxEntry::Var { name: n, ty } if n == name => Some(ty),
            _ => None,
        })
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.iter().any(|e| e.name() == name)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
