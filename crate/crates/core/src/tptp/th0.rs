//! TH0 output, and a reader for the subset the emitter produces.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::parse::{parse_statements, BinOp, Body, Expr, Pos, Quant, Stmt};
use super::ParseError;
use crate::hol::{hol_infer, HolContext, HolDecl, HolEntry, HolProblem, HolTerm, HolTheory, HolType};
use crate::syntax::fresh_name;
use crate::translate::TranslationOutput;

pub const HEADER: &str = "\
% TH0 problem written by dhol.
% Symbols outside [a-z][A-Za-z0-9_]* are single-quoted ('\\' escapes ' and \\).
% Variables matching [A-Z][A-Za-z0-9_]* and not starting with Z_ keep their name.
% Any other variable N is written Z_ followed by N, where _ becomes __ and a
% character outside [A-Za-z0-9_] becomes _<hex code point>_.
";

fn plain_functor(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn mangle_functor(s: &str) -> String {
    if plain_functor(s) {
        s.to_string()
    } else {
        let esc = s.replace('\\', "\\\\").replace('\'', "\\'");
        format!("'{esc}'")
    }
}

pub fn mangle_var(x: &str) -> String {
    let mut cs = x.chars();
    let keep = cs.next().is_some_and(|c| c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !x.starts_with("Z_");
    if keep {
        return x.to_string();
    }
    let mut out = String::from("Z_");
    for c in x.chars() {
        match c {
            '_' => out.push_str("__"),
            c if c.is_ascii_alphanumeric() => out.push(c),
            c => {
                let _ = write!(out, "_{:x}_", c as u32);
            }
        }
    }
    out
}

pub fn unmangle_var(x: &str) -> Option<String> {
    let Some(rest) = x.strip_prefix("Z_") else {
        return Some(x.to_string());
    };
    let cs: Vec<char> = rest.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < cs.len() {
        if cs[i] != '_' {
            out.push(cs[i]);
            i += 1;
        } else if cs.get(i + 1) == Some(&'_') {
            out.push('_');
            i += 2;
        } else {
            let end = (i + 1..cs.len()).find(|&j| cs[j] == '_')?;
            let hex: String = cs[i + 1..end].iter().collect();
            out.push(char::from_u32(u32::from_str_radix(&hex, 16).ok()?)?);
            i = end + 1;
        }
    }
    Some(out)
}

fn write_type(out: &mut String, a: &HolType) {
    match a {
        HolType::Base(n) => out.push_str(&mangle_functor(n)),
        HolType::Bool => out.push_str("$o"),
        HolType::Arrow(d, c) => {
            if matches!(**d, HolType::Arrow(..)) {
                out.push('(');
                write_type(out, d);
                out.push(')');
            } else {
                write_type(out, d);
            }
            out.push_str(" > ");
            write_type(out, c);
        }
    }
}

pub fn type_to_th0(a: &HolType) -> String {
    let mut s = String::new();
    write_type(&mut s, a);
    s
}

fn write_term(out: &mut String, t: &HolTerm) {
    match t {
        HolTerm::Const(c) => out.push_str(&mangle_functor(c)),
        HolTerm::Var(x) => out.push_str(&mangle_var(x)),
        HolTerm::True => out.push_str("$true"),
        HolTerm::False => out.push_str("$false"),
        HolTerm::App(..) => {
            let (head, args) = t.spine();
            out.push('(');
            write_term(out, head);
            for a in args {
                out.push_str(" @ ");
                write_term(out, a);
            }
            out.push(')');
        }
        HolTerm::Lam(x, a, b) | HolTerm::Forall(x, a, b) | HolTerm::Exists(x, a, b) => {
            let q = match t {
                HolTerm::Lam(..) => "^",
                HolTerm::Forall(..) => "!",
                _ => "?",
            };
            let _ = write!(out, "({q} [{}: ", mangle_var(x));
            write_type(out, a);
            out.push_str("]: ");
            write_term(out, b);
            out.push(')');
        }
        HolTerm::Eq(_, s, u) => bin(out, s, "=", u),
        HolTerm::Impl(f, g) => bin(out, f, "=>", g),
        HolTerm::And(f, g) => bin(out, f, "&", g),
        HolTerm::Or(f, g) => bin(out, f, "|", g),
        HolTerm::Not(f) => {
            out.push_str("(~ ");
            write_term(out, f);
            out.push(')');
        }
    }
}

fn bin(out: &mut String, l: &HolTerm, op: &str, r: &HolTerm) {
    out.push('(');
    write_term(out, l);
    let _ = write!(out, " {op} ");
    write_term(out, r);
    out.push(')');
}

pub fn term_to_th0(t: &HolTerm) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

pub const CONJECTURE_NAME: &str = "conj";

/// Writes a translated theory and an optional closed conjecture.
pub fn emit_th0(out: &TranslationOutput, conjecture: Option<&HolTerm>) -> String {
    emit_theory(&out.theory, conjecture.map(|c| (CONJECTURE_NAME, c)))
}

pub fn emit_theory(thy: &HolTheory, conjecture: Option<(&str, &HolTerm)>) -> String {
    let mut s = String::from(HEADER);
    for d in &thy.decls {
        match d {
            HolDecl::Type(a) => {
                let _ = writeln!(
                    s,
                    "thf({}, type, {}: $tType).",
                    mangle_functor(&format!("{a}_decl")),
                    mangle_functor(a)
                );
            }
            HolDecl::Const(c, a) => {
                let _ = writeln!(
                    s,
                    "thf({}, type, {}: {}).",
                    mangle_functor(&format!("{c}_decl")),
                    mangle_functor(c),
                    type_to_th0(a)
                );
            }
            HolDecl::Axiom(n, f) => {
                let _ = writeln!(s, "thf({}, axiom, {}).", mangle_functor(n), term_to_th0(f));
            }
        }
    }
    if let Some((n, c)) = conjecture {
        let _ = writeln!(s, "thf({}, conjecture, {}).", mangle_functor(n), term_to_th0(c));
    }
    s
}

/// Folds the context into the theory: variables become constants and
/// assumptions become axioms. Clashing names get a numeric suffix.
pub fn flatten_problem(p: &HolProblem) -> (HolTheory, HolTerm) {
    let mut thy = p.theory.clone();
    let mut taken: BTreeSet<String> = thy.decls.iter().map(|d| d.name().to_string()).collect();
    taken.insert(CONJECTURE_NAME.into());
    let mut renames: Vec<(String, HolTerm)> = Vec::new();
    let close = |t: &HolTerm, renames: &[(String, HolTerm)]| {
        renames.iter().fold(t.clone(), |acc, (x, c)| acc.subst(x, c))
    };
    for e in &p.context.entries {
        match e {
            HolEntry::Var(x, a) => {
                let c = fresh_name(x, |n| taken.contains(n));
                taken.insert(c.clone());
                thy.decls.push(HolDecl::Const(c.clone(), a.clone()));
                renames.retain(|(y, _)| y != x);
                renames.push((x.clone(), HolTerm::Const(c)));
            }
            HolEntry::Assume(n, f) => {
                let n = fresh_name(n, |m| taken.contains(m));
                taken.insert(n.clone());
                thy.decls.push(HolDecl::Axiom(n, close(f, &renames)));
            }
        }
    }
    let conj = close(&p.conjecture, &renames);
    (thy, conj)
}

/// A whole validity problem as a TH0 file.
pub fn emit_problem(p: &HolProblem) -> String {
    let (thy, conj) = flatten_problem(p);
    emit_theory(&thy, Some((CONJECTURE_NAME, &conj)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Th0File {
    pub theory: HolTheory,
    pub conjecture: Option<(String, HolTerm)>,
}

fn err_at<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line: pos.line,
        col: pos.col,
        msg: msg.into(),
    })
}

/// Reads back what [`emit_th0`] writes. Equality types are recovered by
/// type inference against the declarations read so far.
pub fn reparse_th0(text: &str) -> Result<Th0File, ParseError> {
    let mut out = Th0File {
        theory: HolTheory::default(),
        conjecture: None,
    };
    for stmt in parse_statements(text)? {
        let Stmt::Thf {
            name,
            role,
            body,
            pos,
        } = stmt
        else {
            return err_at(Pos::default(), "include is not part of TH0 output");
        };
        match (role.as_str(), body) {
            ("type", Body::Typing(sym, false, Expr::Dollar(d, _))) if d == "tType" => {
                out.theory.decls.push(HolDecl::Type(sym))
            }
            ("type", Body::Typing(sym, false, e)) => {
                let a = hol_type(&e)?;
                out.theory.decls.push(HolDecl::Const(sym, a));
            }
            ("axiom", Body::Formula(e)) => {
                let f = hol_term(&out.theory, &mut Vec::new(), &e)?;
                out.theory.decls.push(HolDecl::Axiom(name, f));
            }
            ("conjecture", Body::Formula(e)) => {
                if out.conjecture.is_some() {
                    return err_at(pos, "second conjecture");
                }
                let f = hol_term(&out.theory, &mut Vec::new(), &e)?;
                out.conjecture = Some((name, f));
            }
            (r, _) => return err_at(pos, format!("unexpected `{r}` statement in TH0")),
        }
    }
    Ok(out)
}

fn hol_type(e: &Expr) -> Result<HolType, ParseError> {
    match e {
        Expr::Dollar(d, _) if d == "o" => Ok(HolType::Bool),
        Expr::Functor(a, _) => Ok(HolType::base(a.clone())),
        Expr::Bin(BinOp::Arrow, a, b) => Ok(HolType::arrow(hol_type(a)?, hol_type(b)?)),
        other => err_at(other.pos(), "not a TH0 type"),
    }
}

fn hol_term(thy: &HolTheory, env: &mut Vec<(String, HolType)>, e: &Expr) -> Result<HolTerm, ParseError> {
    let two = |env: &mut Vec<(String, HolType)>, a: &Expr, b: &Expr| -> Result<(HolTerm, HolTerm), ParseError> {
        Ok((hol_term(thy, env, a)?, hol_term(thy, env, b)?))
    };
    match e {
        Expr::Var(x, p) => match unmangle_var(x) {
            Some(x) => Ok(HolTerm::Var(x)),
            None => err_at(*p, format!("`{x}` is not a valid variable encoding")),
        },
        Expr::Functor(c, _) => Ok(HolTerm::Const(c.clone())),
        Expr::Dollar(d, _) if d == "true" => Ok(HolTerm::True),
        Expr::Dollar(d, _) if d == "false" => Ok(HolTerm::False),
        Expr::Not(f) => Ok(HolTerm::not(hol_term(thy, env, f)?)),
        Expr::Bin(op, a, b) => {
            let (s, t) = two(env, a, b)?;
            match op {
                BinOp::App => Ok(HolTerm::app(s, t)),
                BinOp::Implies => Ok(HolTerm::implies(s, t)),
                BinOp::And => Ok(HolTerm::and(s, t)),
                BinOp::Or => Ok(HolTerm::or(s, t)),
                BinOp::Eq => {
                    let ctx = HolContext {
                        entries: env.iter().map(|(x, a)| HolEntry::Var(x.clone(), a.clone())).collect(),
                    };
                    match hol_infer(thy, &ctx, &s) {
                        Ok(a) => Ok(HolTerm::eq(a, s, t)),
                        Err(err) => err_at(a.pos(), format!("cannot type equation side: {err}")),
                    }
                }
                _ => err_at(a.pos(), "operator outside the emitted TH0 subset"),
            }
        }
        Expr::Quant(q, bs, body) => {
            let mut binders = Vec::new();
            for (x, a) in bs {
                let Some(x) = unmangle_var(x) else {
                    return err_at(a.pos(), format!("`{x}` is not a valid variable encoding"));
                };
                binders.push((x, hol_type(a)?));
            }
            let n = binders.len();
            env.extend(binders.iter().cloned());
            let body = hol_term(thy, env, body);
            env.truncate(env.len() - n);
            let mut t = body?;
            for (x, a) in binders.into_iter().rev() {
                t = match q {
                    Quant::Forall => HolTerm::forall(x, a, t),
                    Quant::Exists => HolTerm::exists(x, a, t),
                    Quant::Lambda => HolTerm::lam(x, a, t),
                    Quant::Pi => return err_at(e.pos(), "`!>` is not TH0"),
                };
            }
            Ok(t)
        }
        other => err_at(other.pos(), "not a TH0 term"),
    }
}
