//! Bounded proof search for translated obligations.
//!
//! Goals are decomposed by introduction rules; atomic goals are closed by
//! lookup, reflexivity, symmetric/transitive chains over ground equations
//! and PER facts, congruence, and backward chaining through universally
//! quantified implications. Every answer carries a [`Proof`] that is
//! replayed before `Proved` is reported.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::time::Instant;

use log::{debug, error, trace};

use super::proof::{replay_conjecture, Proof};
use super::{OracleVerdict, UnknownReason};
use crate::hol::{beta_eta_normalize, hol_infer, HolContext, HolDecl, HolEntry, HolProblem, HolTerm, HolType};
use crate::syntax::fresh_name;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Bounds {
    /// Nesting limit for backward chaining, congruence and extensionality.
    pub depth: usize,
    /// Cap on candidate-term instantiations tried per clause application.
    pub max_instantiations: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            depth: 3,
            max_instantiations: 64,
        }
    }
}

pub const BUILTIN: &str = "builtin";

pub fn builtin_decide(problem: &HolProblem, bounds: Bounds) -> OracleVerdict {
    let start = Instant::now();
    let Some(proof) = builtin_prove(problem, bounds) else {
        debug!("builtin: no proof of `{}`", problem.conjecture);
        return OracleVerdict::Unknown(UnknownReason::GaveUp);
    };
    match replay_conjecture(problem, &proof) {
        Ok(()) => OracleVerdict::Proved {
            by: BUILTIN.into(),
            elapsed: start.elapsed(),
        },
        Err(e) => {
            error!("builtin proof of `{}` failed replay: {e}", problem.conjecture);
            OracleVerdict::Unknown(UnknownReason::GaveUp)
        }
    }
}

/// Searches for a proof without replaying it.
pub fn builtin_prove(problem: &HolProblem, bounds: Bounds) -> Option<Proof> {
    let mut prover = Prover::new(problem, bounds);
    let root = prover.root();
    let goal = beta_eta_normalize(&problem.conjecture);
    prover.prove(&root, &goal, bounds.depth)
}

fn norm(t: &HolTerm) -> HolTerm {
    beta_eta_normalize(t)
}

fn bx(p: Proof) -> Box<Proof> {
    Box::new(p)
}

fn is_pattern(x: &str) -> bool {
    x.starts_with('?')
}

enum Step {
    Var(String, HolType),
    Prem(HolTerm),
}

/// `∀x⃗. P1 ⟹ … ⟹ C` with binders renamed to pattern variables `?n`.
struct Clause {
    steps: Vec<Step>,
    concl: HolTerm,
}

fn clause_of(f: &HolTerm) -> Option<Clause> {
    let mut steps = Vec::new();
    let mut cur = f.clone();
    loop {
        match cur {
            HolTerm::Forall(x, a, b) => {
                let p = format!("?{}", steps.len());
                cur = b.subst(&x, &HolTerm::Var(p.clone()));
                steps.push(Step::Var(p, a));
            }
            HolTerm::Impl(p, q) => {
                steps.push(Step::Prem(*p));
                cur = *q;
            }
            concl => {
                return (!steps.is_empty()).then_some(Clause { steps, concl });
            }
        }
    }
}

fn has_pattern(t: &HolTerm) -> bool {
    t.free_vars().iter().any(|x| is_pattern(x))
}

fn instantiate(t: &HolTerm, sub: &HashMap<String, HolTerm>) -> HolTerm {
    sub.iter().fold(t.clone(), |acc, (x, u)| acc.subst(x, u))
}

/// First-order matching of a pattern against a ground term. Patterns do not
/// descend under binders.
fn pmatch(pat: &HolTerm, t: &HolTerm, sub: &mut HashMap<String, HolTerm>) -> bool {
    use HolTerm::*;
    match (pat, t) {
        (Var(x), _) if is_pattern(x) => match sub.get(x) {
            Some(u) => u.alpha_eq(t),
            None => {
                sub.insert(x.clone(), t.clone());
                true
            }
        },
        (Var(x), Var(y)) | (Const(x), Const(y)) => x == y,
        (True, True) | (False, False) => true,
        (App(f, a), App(g, b))
        | (Impl(f, a), Impl(g, b))
        | (And(f, a), And(g, b))
        | (Or(f, a), Or(g, b)) => pmatch(f, g, sub) && pmatch(a, b, sub),
        (Eq(s, f, a), Eq(u, g, b)) => s == u && pmatch(f, g, sub) && pmatch(a, b, sub),
        (Not(f), Not(g)) => pmatch(f, g, sub),
        (Lam(..) | Forall(..) | Exists(..), _) => !has_pattern(pat) && pat.alpha_eq(t),
        _ => false,
    }
}

#[derive(Clone)]
struct Fact {
    formula: HolTerm,
    /// Concludes exactly `formula`.
    proof: Proof,
}

#[derive(Clone)]
struct Sequent {
    id: usize,
    /// Context and eigenvariables, used for typing candidate terms.
    scope: HolContext,
    facts: Vec<Fact>,
    locals: usize,
}

impl Sequent {
    fn lookup(&self, goal: &HolTerm) -> Option<&Fact> {
        self.facts.iter().find(|f| f.formula.alpha_eq(goal))
    }
}

/// A relation recognized as a PER through its symmetry and transitivity
/// axioms.
#[derive(Clone, Debug)]
struct Per {
    prefix: usize,
    sym: Option<String>,
    trans: Option<String>,
}

struct Prover<'a> {
    problem: &'a HolProblem,
    bounds: Bounds,
    pers: HashMap<String, Per>,
    next_id: usize,
    memo: HashMap<(usize, HolTerm, usize), Option<Proof>>,
}

fn rel_args<'t>(t: &'t HolTerm, name: &str, len: usize) -> Option<Vec<&'t HolTerm>> {
    let (h, args) = t.spine();
    (matches!(h, HolTerm::Const(c) if c == name) && args.len() == len).then_some(args)
}

fn pattern_vars(steps: &[Step]) -> Vec<&str> {
    steps
        .iter()
        .filter_map(|s| match s {
            Step::Var(x, _) => Some(x.as_str()),
            Step::Prem(_) => None,
        })
        .collect()
}

/// True when `args` are exactly the pattern variables at `idx`.
fn vars_at(args: &[&HolTerm], vars: &[&str], idx: &[usize]) -> bool {
    args.len() == idx.len()
        && args
            .iter()
            .zip(idx)
            .all(|(a, &i)| matches!(a, HolTerm::Var(x) if x == vars[i]))
}

/// `∀x⃗ u v. R x⃗ u v ⟹ R x⃗ v u`
fn sym_shape(f: &HolTerm) -> Option<(String, usize)> {
    let cl = clause_of(f)?;
    let vars = pattern_vars(&cl.steps);
    let n = vars.len();
    let [.., Step::Prem(p)] = cl.steps.as_slice() else {
        return None;
    };
    if n < 2 || cl.steps.len() != n + 1 {
        return None;
    }
    let (HolTerm::Const(r), pa) = p.spine() else {
        return None;
    };
    let k = n - 2;
    let straight: Vec<usize> = (0..n).collect();
    let swapped: Vec<usize> = (0..k).chain([k + 1, k]).collect();
    let ca = rel_args(&cl.concl, r, n)?;
    (vars_at(&pa, &vars, &straight) && vars_at(&ca, &vars, &swapped)).then(|| (r.clone(), k))
}

/// `∀x⃗ u v w. R x⃗ u v ⟹ R x⃗ v w ⟹ R x⃗ u w`
fn trans_shape(f: &HolTerm) -> Option<(String, usize)> {
    let cl = clause_of(f)?;
    let vars = pattern_vars(&cl.steps);
    let n = vars.len();
    let [.., Step::Prem(p), Step::Prem(q)] = cl.steps.as_slice() else {
        return None;
    };
    if n < 3 || cl.steps.len() != n + 2 {
        return None;
    }
    let (HolTerm::Const(r), pa) = p.spine() else {
        return None;
    };
    let k = n - 3;
    let idx = |l: usize, r: usize| -> Vec<usize> { (0..k).chain([l, r]).collect() };
    let qa = rel_args(q, r, k + 2)?;
    let ca = rel_args(&cl.concl, r, k + 2)?;
    (vars_at(&pa, &vars, &idx(k, k + 1))
        && vars_at(&qa, &vars, &idx(k + 1, k + 2))
        && vars_at(&ca, &vars, &idx(k, k + 2)))
    .then(|| (r.clone(), k))
}

impl<'a> Prover<'a> {
    fn new(problem: &'a HolProblem, bounds: Bounds) -> Self {
        let mut pers: HashMap<String, Per> = HashMap::new();
        let named = problem
            .theory
            .axioms()
            .chain(problem.context.assumptions());
        for (name, f) in named {
            let f = norm(f);
            if let Some((r, k)) = sym_shape(&f) {
                let e = pers.entry(r).or_insert(Per {
                    prefix: k,
                    sym: None,
                    trans: None,
                });
                if e.prefix == k && e.sym.is_none() {
                    e.sym = Some(name.to_string());
                }
            } else if let Some((r, k)) = trans_shape(&f) {
                let e = pers.entry(r).or_insert(Per {
                    prefix: k,
                    sym: None,
                    trans: None,
                });
                if e.prefix == k && e.trans.is_none() {
                    e.trans = Some(name.to_string());
                }
            }
        }
        trace!("builtin: recognized PERs {pers:?}");
        Prover {
            problem,
            bounds,
            pers,
            next_id: 0,
            memo: HashMap::new(),
        }
    }

    fn fresh_id(&mut self) -> usize {
        self.next_id += 1;
        self.next_id
    }

    fn root(&mut self) -> Sequent {
        let mut facts = Vec::new();
        let named = self
            .problem
            .theory
            .axioms()
            .chain(self.problem.context.assumptions());
        for (name, f) in named {
            let n = norm(f);
            let proof = if n == *f {
                Proof::Fact(name.to_string())
            } else {
                Proof::Conv(n.clone(), bx(Proof::Fact(name.to_string())))
            };
            facts.push(Fact { formula: n, proof });
        }
        let scope = HolContext {
            entries: self
                .problem
                .context
                .entries
                .iter()
                .filter(|e| matches!(e, HolEntry::Var(..)))
                .cloned()
                .collect(),
        };
        let mut seq = Sequent {
            id: self.fresh_id(),
            scope,
            facts: Vec::new(),
            locals: 0,
        };
        for f in facts {
            add_fact(&mut seq.facts, f);
        }
        saturate(&mut seq.facts);
        seq
    }

    fn assume(&mut self, seq: &Sequent, h: &HolTerm) -> Sequent {
        let mut s = seq.clone();
        s.id = self.fresh_id();
        add_fact(
            &mut s.facts,
            Fact {
                formula: h.clone(),
                proof: Proof::Local(seq.locals),
            },
        );
        s.locals += 1;
        saturate(&mut s.facts);
        s
    }

    fn ty(&self, seq: &Sequent, t: &HolTerm) -> Option<HolType> {
        hol_infer(&self.problem.theory, &seq.scope, t).ok()
    }

    fn prove(&mut self, seq: &Sequent, goal: &HolTerm, depth: usize) -> Option<Proof> {
        let key = (seq.id, goal.clone(), depth);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        self.memo.insert(key.clone(), None);
        let r = self.prove_inner(seq, goal, depth);
        trace!("builtin: depth {depth} `{goal}` -> {}", r.is_some());
        self.memo.insert(key, r.clone());
        r
    }

    fn prove_inner(&mut self, seq: &Sequent, goal: &HolTerm, depth: usize) -> Option<Proof> {
        if let Some(f) = seq.lookup(goal) {
            return Some(f.proof.clone());
        }
        match goal {
            HolTerm::True => return Some(Proof::TrueIntro),
            HolTerm::Impl(h, g) => {
                let s2 = self.assume(seq, h);
                let p = self.prove(&s2, g, depth)?;
                return Some(Proof::ImplIntro((**h).clone(), bx(p)));
            }
            HolTerm::Forall(x, a, body) => {
                let taken: BTreeSet<String> = seq
                    .scope
                    .entries
                    .iter()
                    .filter_map(|e| match e {
                        HolEntry::Var(n, _) => Some(n.clone()),
                        HolEntry::Assume(..) => None,
                    })
                    .chain(goal.free_vars())
                    .collect();
                let x2 = fresh_name(x, |n| taken.contains(n));
                let mut s2 = seq.clone();
                s2.id = self.fresh_id();
                s2.scope.entries.push(HolEntry::Var(x2.clone(), a.clone()));
                let body2 = body.subst(x, &HolTerm::Var(x2.clone()));
                let p = self.prove(&s2, &body2, depth)?;
                return Some(Proof::ForallIntro(x2, a.clone(), bx(p)));
            }
            HolTerm::And(f, g) => {
                let p = self.prove(seq, f, depth)?;
                let q = self.prove(seq, g, depth)?;
                return Some(Proof::AndIntro(bx(p), bx(q)));
            }
            HolTerm::Or(f, g) => {
                if let Some(p) = self.prove(seq, f, depth) {
                    return Some(Proof::OrIntroL(bx(p), (**g).clone()));
                }
                if let Some(q) = self.prove(seq, g, depth) {
                    return Some(Proof::OrIntroR((**f).clone(), bx(q)));
                }
            }
            HolTerm::Eq(HolType::Bool, f, t) if **t == HolTerm::True => {
                if let Some(p) = self.prove(seq, f, depth) {
                    return Some(Proof::EqTrueIntro(bx(p)));
                }
            }
            HolTerm::Eq(HolType::Bool, t, f) if **t == HolTerm::True => {
                if let Some(p) = self.prove(seq, f, depth) {
                    return Some(Proof::Sym(bx(Proof::EqTrueIntro(bx(p)))));
                }
            }
            _ => {}
        }
        if let HolTerm::Eq(a, s, t) = goal {
            if s.alpha_eq(t) {
                return Some(Proof::Refl((**s).clone()));
            }
            if let Some(p) = self.eq_path(seq, a, s, t) {
                return Some(p);
            }
        }
        if let Some(p) = self.per_path(seq, goal) {
            return Some(p);
        }
        if depth == 0 {
            return None;
        }
        if let Some(p) = self.backward(seq, goal, depth) {
            return Some(p);
        }
        if let HolTerm::Eq(a, s, t) = goal {
            if let (HolTerm::App(f, x), HolTerm::App(g, y)) = (&**s, &**t) {
                if let Some(d) = self.ty(seq, x) {
                    let fg = HolTerm::eq(HolType::arrow(d.clone(), a.clone()), (**f).clone(), (**g).clone());
                    let xy = HolTerm::eq(d, (**x).clone(), (**y).clone());
                    if let Some(p) = self.prove(seq, &fg, depth - 1) {
                        if let Some(q) = self.prove(seq, &xy, depth - 1) {
                            return Some(Proof::CongAppl(bx(p), bx(q)));
                        }
                    }
                }
            }
            if *a == HolType::Bool {
                let fwd = HolTerm::implies((**s).clone(), (**t).clone());
                let bwd = HolTerm::implies((**t).clone(), (**s).clone());
                if let Some(p) = self.prove(seq, &fwd, depth - 1) {
                    if let Some(q) = self.prove(seq, &bwd, depth - 1) {
                        return Some(Proof::PropExt(bx(p), bx(q)));
                    }
                }
            }
        }
        None
    }

    /// Chains ground equations of type `a` from `s` to `t`.
    fn eq_path(&self, seq: &Sequent, a: &HolType, s: &HolTerm, t: &HolTerm) -> Option<Proof> {
        let edges: Vec<(HolTerm, HolTerm, Proof)> = seq
            .facts
            .iter()
            .filter_map(|f| match &f.formula {
                HolTerm::Eq(b, l, r) if b == a => Some(((**l).clone(), (**r).clone(), f.proof.clone())),
                _ => None,
            })
            .flat_map(|(l, r, p)| {
                let back = Proof::Sym(bx(p.clone()));
                [(l.clone(), r.clone(), p), (r, l, back)]
            })
            .collect();
        let steps = bfs(&edges, s, t)?;
        steps.into_iter().reduce(|acc, p| Proof::Trans(bx(acc), bx(p)))
    }

    /// Chains facts of a recognized PER, using its symmetry and transitivity
    /// axioms.
    fn per_path(&self, seq: &Sequent, goal: &HolTerm) -> Option<Proof> {
        let (HolTerm::Const(r), args) = goal.spine() else {
            return None;
        };
        let per = self.pers.get(r)?;
        if args.len() != per.prefix + 2 {
            return None;
        }
        let prefix: Vec<HolTerm> = args[..per.prefix].iter().map(|a| (*a).clone()).collect();
        let (s, t) = (args[per.prefix], args[per.prefix + 1]);
        let inst = |ax: &str, terms: &[&HolTerm]| {
            prefix
                .iter()
                .chain(terms.iter().copied())
                .fold(Proof::Fact(ax.to_string()), |p, u| Proof::ForallElim(bx(p), u.clone()))
        };
        let mut edges = Vec::new();
        for f in &seq.facts {
            let Some(fa) = rel_args(&f.formula, r, per.prefix + 2) else {
                continue;
            };
            if !fa[..per.prefix].iter().zip(&prefix).all(|(x, y)| x.alpha_eq(y)) {
                continue;
            }
            let (l, rr) = (fa[per.prefix].clone(), fa[per.prefix + 1].clone());
            if let Some(sym) = &per.sym {
                let back = Proof::ImplElim(bx(inst(sym, &[&l, &rr])), bx(f.proof.clone()));
                edges.push((rr.clone(), l.clone(), back));
            }
            edges.push((l, rr, f.proof.clone()));
        }
        let path = bfs_nodes(&edges, s, t)?;
        if path.len() > 1 && per.trans.is_none() {
            return None;
        }
        let mut it = path.into_iter();
        let (_, mut to, mut acc) = it.next()?;
        for (_, next, p) in it {
            let tr = inst(per.trans.as_ref()?, &[s, &to, &next]);
            acc = Proof::ImplElim(bx(Proof::ImplElim(bx(tr), bx(acc))), bx(p));
            to = next;
        }
        Some(acc)
    }

    /// Resolves the goal against the conclusion of a quantified implication.
    fn backward(&mut self, seq: &Sequent, goal: &HolTerm, depth: usize) -> Option<Proof> {
        let clauses: Vec<(Clause, Proof)> = seq
            .facts
            .iter()
            .filter_map(|f| clause_of(&f.formula).map(|c| (c, f.proof.clone())))
            .collect();
        let eq_true = HolTerm::eq(HolType::Bool, goal.clone(), HolTerm::True);
        for (cl, fact) in &clauses {
            if matches!(&cl.concl, HolTerm::Var(x) if is_pattern(x)) {
                continue;
            }
            for (target, via_eq_true) in [(goal, false), (&eq_true, true)] {
                let mut sub = HashMap::new();
                if !pmatch(&cl.concl, target, &mut sub) {
                    continue;
                }
                if let Some(p) = self.discharge(seq, cl, fact, sub, depth) {
                    let p = if via_eq_true { Proof::EqTrueElim(bx(p)) } else { p };
                    return Some(Proof::Conv(goal.clone(), bx(p)));
                }
            }
        }
        None
    }

    fn discharge(
        &mut self,
        seq: &Sequent,
        cl: &Clause,
        fact: &Proof,
        sub: HashMap<String, HolTerm>,
        depth: usize,
    ) -> Option<Proof> {
        let prems: Vec<&HolTerm> = cl
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::Prem(p) => Some(p),
                Step::Var(..) => None,
            })
            .collect();
        let mut from_facts = Vec::new();
        bind_from_facts(seq, &prems, 0, sub.clone(), &mut from_facts);
        // Candidate terms alone, whatever the facts offered.
        if !from_facts.contains(&sub) {
            from_facts.push(sub);
        }
        let vars: Vec<(&str, &HolType)> = cl
            .steps
            .iter()
            .filter_map(|s| match s {
                Step::Var(x, a) => Some((x.as_str(), a)),
                Step::Prem(_) => None,
            })
            .collect();
        let mut candidates: Option<Vec<(HolTerm, HolType)>> = None;
        for partial in from_facts {
            let open: Vec<(&str, &HolType)> =
                vars.iter().copied().filter(|(x, _)| !partial.contains_key(*x)).collect();
            let fills = if open.is_empty() {
                vec![partial]
            } else {
                if candidates.is_none() {
                    candidates = Some(self.candidates(seq, &cl.concl, &partial));
                }
                let cands = candidates.as_ref().unwrap();
                let mut fills = vec![partial];
                for (x, a) in &open {
                    let of_type: Vec<&HolTerm> =
                        cands.iter().filter(|(_, b)| b == *a).map(|(t, _)| t).collect();
                    let mut next = Vec::new();
                    'outer: for f in &fills {
                        for t in &of_type {
                            if next.len() >= self.bounds.max_instantiations {
                                break 'outer;
                            }
                            let mut g = f.clone();
                            g.insert(x.to_string(), (*t).clone());
                            next.push(g);
                        }
                    }
                    fills = next;
                }
                fills
            };
            for sub in fills {
                if let Some(p) = self.apply_clause(seq, cl, fact, &sub, depth) {
                    return Some(p);
                }
            }
        }
        None
    }

    fn apply_clause(
        &mut self,
        seq: &Sequent,
        cl: &Clause,
        fact: &Proof,
        sub: &HashMap<String, HolTerm>,
        depth: usize,
    ) -> Option<Proof> {
        for s in &cl.steps {
            if let Step::Var(x, a) = s {
                let t = sub.get(x)?;
                if has_pattern(t) || self.ty(seq, t).as_ref() != Some(a) {
                    return None;
                }
            }
        }
        let mut acc = fact.clone();
        for s in &cl.steps {
            acc = match s {
                Step::Var(x, _) => Proof::ForallElim(bx(acc), sub[x].clone()),
                Step::Prem(p) => {
                    let goal = norm(&instantiate(p, sub));
                    let q = self.prove(seq, &goal, depth - 1)?;
                    Proof::ImplElim(bx(acc), bx(q))
                }
            };
        }
        Some(acc)
    }

    /// Well-scoped subterms of the goal, variables in scope and nullary
    /// constants, with their types. Hypotheses are deliberately not mined so
    /// that extra assumptions cannot crowd out instantiations.
    fn candidates(
        &self,
        seq: &Sequent,
        concl: &HolTerm,
        sub: &HashMap<String, HolTerm>,
    ) -> Vec<(HolTerm, HolType)> {
        let mut terms: Vec<HolTerm> = Vec::new();
        let goal = instantiate(concl, sub);
        collect_subterms(&goal, &mut Vec::new(), &mut terms);
        for e in &seq.scope.entries {
            if let HolEntry::Var(x, _) = e {
                terms.push(HolTerm::Var(x.clone()));
            }
        }
        for d in &self.problem.theory.decls {
            if let HolDecl::Const(c, a) = d {
                if !matches!(a, HolType::Arrow(..)) {
                    terms.push(HolTerm::Const(c.clone()));
                }
            }
        }
        let mut out: Vec<(HolTerm, HolType)> = Vec::new();
        for t in terms {
            if has_pattern(&t) || out.iter().any(|(u, _)| u.alpha_eq(&t)) {
                continue;
            }
            if let Some(a) = self.ty(seq, &t) {
                out.push((t, a));
            }
        }
        out
    }
}

fn collect_subterms(t: &HolTerm, bound: &mut Vec<String>, out: &mut Vec<HolTerm>) {
    let closed = t.free_vars().iter().all(|x| !bound.contains(x));
    if closed && !matches!(t, HolTerm::True | HolTerm::False) {
        out.push(t.clone());
    }
    match t {
        HolTerm::Lam(x, _, b) | HolTerm::Forall(x, _, b) | HolTerm::Exists(x, _, b) => {
            bound.push(x.clone());
            collect_subterms(b, bound, out);
            bound.pop();
        }
        HolTerm::App(f, g)
        | HolTerm::Eq(_, f, g)
        | HolTerm::Impl(f, g)
        | HolTerm::And(f, g)
        | HolTerm::Or(f, g) => {
            collect_subterms(f, bound, out);
            collect_subterms(g, bound, out);
        }
        HolTerm::Not(f) => collect_subterms(f, bound, out),
        HolTerm::Const(_) | HolTerm::Var(_) | HolTerm::True | HolTerm::False => {}
    }
}

/// Extends `sub` by matching premises that still mention pattern variables
/// against facts. Every consistent combination is produced; a premise with
/// no matching fact leaves its variables open.
fn bind_from_facts(
    seq: &Sequent,
    prems: &[&HolTerm],
    i: usize,
    sub: HashMap<String, HolTerm>,
    out: &mut Vec<HashMap<String, HolTerm>>,
) {
    let Some(p) = prems.get(i) else {
        out.push(sub);
        return;
    };
    let inst = instantiate(p, &sub);
    if !has_pattern(&inst) {
        bind_from_facts(seq, prems, i + 1, sub, out);
        return;
    }
    let before = out.len();
    for f in &seq.facts {
        let mut s2 = sub.clone();
        if pmatch(&inst, &f.formula, &mut s2) {
            bind_from_facts(seq, prems, i + 1, s2, out);
        }
    }
    if out.len() == before {
        bind_from_facts(seq, prems, i + 1, sub, out);
    }
}

fn add_fact(facts: &mut Vec<Fact>, f: Fact) -> bool {
    if f.formula == HolTerm::True || facts.iter().any(|g| g.formula.alpha_eq(&f.formula)) {
        return false;
    }
    facts.push(f);
    true
}

/// Closes the fact set under conjunction elimination, `F = true`
/// elimination and modus ponens on ground implications.
fn saturate(facts: &mut Vec<Fact>) {
    loop {
        let mut new = Vec::new();
        for f in facts.iter() {
            match &f.formula {
                HolTerm::And(l, r) => {
                    new.push(Fact {
                        formula: (**l).clone(),
                        proof: Proof::AndElimL(bx(f.proof.clone())),
                    });
                    new.push(Fact {
                        formula: (**r).clone(),
                        proof: Proof::AndElimR(bx(f.proof.clone())),
                    });
                }
                HolTerm::Eq(HolType::Bool, l, r) if **r == HolTerm::True => new.push(Fact {
                    formula: (**l).clone(),
                    proof: Proof::EqTrueElim(bx(f.proof.clone())),
                }),
                HolTerm::Eq(HolType::Bool, l, r) if **l == HolTerm::True => new.push(Fact {
                    formula: (**r).clone(),
                    proof: Proof::EqTrueElim(bx(Proof::Sym(bx(f.proof.clone())))),
                }),
                HolTerm::Impl(h, c) => {
                    if let Some(hf) = facts.iter().find(|g| g.formula.alpha_eq(h)) {
                        new.push(Fact {
                            formula: (**c).clone(),
                            proof: Proof::ImplElim(bx(f.proof.clone()), bx(hf.proof.clone())),
                        });
                    }
                }
                _ => {}
            }
        }
        let mut changed = false;
        for f in new {
            changed |= add_fact(facts, f);
        }
        if !changed {
            return;
        }
    }
}

/// Shortest path from `s` to `t` with at least one edge; returns the edge
/// proofs in order.
fn bfs(edges: &[(HolTerm, HolTerm, Proof)], s: &HolTerm, t: &HolTerm) -> Option<Vec<Proof>> {
    Some(bfs_nodes(edges, s, t)?.into_iter().map(|(_, _, p)| p).collect())
}

fn bfs_nodes(
    edges: &[(HolTerm, HolTerm, Proof)],
    s: &HolTerm,
    t: &HolTerm,
) -> Option<Vec<(HolTerm, HolTerm, Proof)>> {
    let mut prev: Vec<Option<usize>> = vec![None; edges.len()];
    let mut seen = vec![false; edges.len()];
    let mut queue = VecDeque::new();
    for (i, (l, _, _)) in edges.iter().enumerate() {
        if l.alpha_eq(s) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if edges[i].1.alpha_eq(t) {
            let mut path = vec![i];
            let mut cur = i;
            while let Some(p) = prev[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path.into_iter().map(|k| edges[k].clone()).collect());
        }
        for (j, (l, _, _)) in edges.iter().enumerate() {
            if !seen[j] && l.alpha_eq(&edges[i].1) {
                seen[j] = true;
                prev[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    None
}
