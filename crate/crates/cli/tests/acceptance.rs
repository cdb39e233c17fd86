//! The acceptance suite. Every criterion runs at its stated tolerance and
//! prints one PASS/FAIL/SKIP line; the test fails if any criterion fails.

#[path = "../../core/tests/common/gen.rs"]
mod gen;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use dhol::hol::{hol_check_context, hol_check_problem, hol_check_theory, hol_infer, HolTerm, HolType};
use dhol::kernel::{check_problem, normalize_psub, AcceptAll, CheckReport, Checker, NoOracle, Provenance, Verdict};
use dhol::oracle::{prove_report, ChainOracle, OracleConfig, OracleSpec, ATP_ENV};
use dhol::syntax::{Context, Decl, Syntax, Term, Type};
use dhol::tptp::{emit_problem, emit_th0, flatten_problem, parse_dhol, reparse_th0, DholProblem, CONJECTURE_NAME};
use dhol::translate::{translate_context, translate_problem, translate_term, translate_theory, AxiomSet};
use gen::{erase, sample, Gen, GenCfg};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS: &[&str] = &["category", "dep_impl", "undecidable", "noninj", "isomorphisms", "simple", "trivial", "empty"];

fn core_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests")
}

fn corpus_path(name: &str) -> PathBuf {
    core_dir().join("corpus").join(format!("{name}.p"))
}

fn load(name: &str) -> DholProblem {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_dhol(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn check_with(p: &DholProblem, oracle: &mut dyn dhol::kernel::ValidityOracle) -> CheckReport {
    check_problem(&p.theory, &p.context, p.conjecture.as_ref().map(|c| &c.1), oracle)
}

fn check_builtin(p: &DholProblem) -> CheckReport {
    check_with(p, &mut ChainOracle::new(OracleConfig::default()))
}

fn dhol_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dhol"))
}

enum Outcome {
    Pass(String),
    Skip(String),
}

type Criterion = fn() -> Result<Outcome, String>;

macro_rules! ensure {
    ($c:expr, $($fmt:tt)*) => {
        if !$c {
            return Err(format!($($fmt)*));
        }
    };
}

fn c1_category_corpus() -> Result<Outcome, String> {
    let p = load("category");
    let start = Instant::now();
    let r = check_builtin(&p);
    let took = start.elapsed();
    ensure!(r.verdict == Verdict::Accepted, "category theory: {:?}", r.verdict);
    ensure!(took < Duration::from_secs(1), "category theory took {took:?}");
    let r = check_builtin(&load("dep_impl"));
    ensure!(r.verdict == Verdict::Accepted, "dependent implication: {:?}", r.verdict);
    ensure!(!r.obligations.is_empty(), "dependent implication produced no obligation");
    for o in &r.obligations {
        ensure!(
            matches!(&o.provenance, Provenance::BaseArgEq { ty, .. } if ty == "mor"),
            "unexpected obligation {o}"
        );
        ensure!(r.discharged.get(&o.seq).is_some_and(|v| v.is_proved()), "#{} not discharged", o.seq);
    }
    Ok(Outcome::Pass(format!("category in {took:?}; {} mor obligation(s) discharged", r.obligations.len())))
}

fn c2_translation_golden() -> Result<Outcome, String> {
    let r = check_builtin(&load("category"));
    ensure!(r.accepted(), "category not accepted");
    let obj = || HolType::base("obj");
    let mor = || HolType::base("mor");
    let v = HolTerm::var;
    let c = HolTerm::cnst;
    let orel = |s, t| HolTerm::apps(c("obj_per"), [s, t]);
    let mrel = |x, y, s, t| HolTerm::apps(c("mor_per"), [x, y, s, t]);
    for (set, file) in [(AxiomSet::Appendix, "category.th0"), (AxiomSet::Minimal, "category_minimal.th0")] {
        let out = translate_theory(&r.theory, set).map_err(|e| e.to_string())?;
        let thy = &out.theory;
        hol_check_theory(thy).map_err(|e| format!("{file}: {e}"))?;
        ensure!(thy.has_type("mor") && thy.has_type("obj"), "base types missing");
        ensure!(
            thy.const_type("mor_per") == Some(&HolType::arrows([obj(), obj(), mor(), mor()], HolType::Bool)),
            "mor PER has type {:?}",
            thy.const_type("mor_per")
        );
        let ax = |n: &str| thy.axioms().find(|(m, _)| *m == n).map(|(_, f)| f.clone());
        let id_tp = HolTerm::forall(
            "x",
            obj(),
            HolTerm::forall(
                "y",
                obj(),
                HolTerm::implies(
                    orel(v("x"), v("y")),
                    mrel(v("x"), v("x"), HolTerm::app(c("id"), v("x")), HolTerm::app(c("id"), v("y"))),
                ),
            ),
        );
        ensure!(ax("id_tp").is_some_and(|f| f.alpha_eq(&id_tp)), "id_tp differs: {:?}", ax("id_tp"));
        let neut_l = HolTerm::forall(
            "x",
            obj(),
            HolTerm::implies(
                orel(v("x"), v("x")),
                HolTerm::forall(
                    "y",
                    obj(),
                    HolTerm::implies(
                        orel(v("y"), v("y")),
                        HolTerm::forall(
                            "m",
                            mor(),
                            HolTerm::implies(
                                mrel(v("x"), v("y"), v("m"), v("m")),
                                mrel(
                                    v("x"),
                                    v("y"),
                                    HolTerm::apps(c("comp"), [v("x"), v("x"), v("y"), HolTerm::app(c("id"), v("x")), v("m")]),
                                    v("m"),
                                ),
                            ),
                        ),
                    ),
                ),
            ),
        );
        ensure!(ax("neutL").is_some_and(|f| f.alpha_eq(&neut_l)), "neutL differs: {:?}", ax("neutL"));
        let golden = std::fs::read_to_string(core_dir().join("golden").join(file)).map_err(|e| e.to_string())?;
        ensure!(emit_th0(&out, None) == golden, "{file} is not byte-identical to the golden");
    }
    Ok(Outcome::Pass("id_tp and neutL match; both goldens byte-identical".into()))
}

fn c3_completeness() -> Result<Outcome, String> {
    let start = Instant::now();
    let (mut accepted, mut seed) = (0, 0u64);
    while accepted < 500 {
        ensure!(seed < 5000, "only {accepted} accepted samples in {seed} seeds");
        seed += 1;
        let Some(s) = sample(seed, GenCfg::default()) else { continue };
        accepted += 1;
        let out = translate_theory(&s.theory, AxiomSet::Appendix).map_err(|e| format!("seed {seed}: {e}"))?;
        hol_check_theory(&out.theory).map_err(|e| format!("seed {seed}: theory: {e}"))?;
        let hctx = translate_context(&s.context).map_err(|e| format!("seed {seed}: {e}"))?;
        hol_check_context(&out.theory, &hctx).map_err(|e| format!("seed {seed}: context: {e}"))?;
        let got = hol_infer(&out.theory, &hctx, &translate_term(&s.term));
        ensure!(got == Ok(erase(&s.ty)), "seed {seed}: {} inferred {got:?}, expected {:?}", s.term, erase(&s.ty));
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(30), "took {took:?}");
    Ok(Outcome::Pass(format!("500 accepted samples ({seed} seeds) in {took:?}")))
}

fn c4_substitution() -> Result<Outcome, String> {
    let (mut done, mut seed) = (0, 0u64);
    while done < 1000 {
        ensure!(seed < 10_000, "only {done} triples in {seed} seeds");
        seed += 1;
        let Some(s) = sample(seed, GenCfg::default()) else { continue };
        if s.scope.is_empty() {
            continue;
        }
        let i = s.scope.iter().rposition(|(x, _)| s.term.occurs_free(x)).unwrap_or(s.scope.len() - 1);
        let (x, a) = s.scope[i].clone();
        let mut g = Gen::resume(seed ^ 0x5eed, GenCfg::default(), s.theory.clone());
        let u = g.term(&s.scope[..i].to_vec(), &a, 2);
        let mut ctx = Context::new();
        for e in &s.context.entries {
            if e.name() == x {
                break;
            }
            ctx.entries.push(e.clone());
        }
        let mut oracle = AcceptAll;
        let mut ck = Checker::with_theory(s.theory.clone(), &mut oracle);
        let Ok(u) = ck.check(&mut ctx, &u, &a) else { continue };
        let lhs = translate_term(&s.term.subst(&x, &u));
        let rhs = translate_term(&s.term).subst(&x, &translate_term(&u));
        ensure!(lhs == rhs, "seed {seed}: {lhs} vs {rhs}");
        done += 1;
    }
    Ok(Outcome::Pass(format!("1000 triples identical ({seed} seeds)")))
}

fn c5_soundness_discipline() -> Result<Outcome, String> {
    let out = dhol_bin()
        .args(["prove", "--mock-accept-all", "--json"])
        .arg(corpus_path("noninj"))
        .env_remove(ATP_ENV)
        .output()
        .map_err(|e| e.to_string())?;
    let code = out.status.code();
    ensure!(code == Some(1), "prove exited {code:?}: {}", String::from_utf8_lossy(&out.stdout));
    // The image b of the ill-typed conjecture is an ordinary HOL theorem the
    // mock happily proves.
    let p = load("noninj");
    let r = check_with(&p, &mut AcceptAll);
    let f = r.formula.clone().ok_or("no conjecture")?;
    let hp = translate_problem(&r.theory, &r.context, &f, AxiomSet::Appendix).map_err(|e| e.to_string())?;
    hol_check_problem(&hp).map_err(|e| format!("HOL rejects the image: {e}"))?;
    let cfg = OracleConfig { chain: vec![OracleSpec::AcceptAll], ..OracleConfig::default() };
    ensure!(prove_report(&hp, &cfg).verdict.is_proved(), "mock did not prove the image");
    Ok(Outcome::Pass("prove exits 1; HOL type-checks the image and the mock proves it".into()))
}

fn c6_obligation_ordering() -> Result<Outcome, String> {
    let mut n = 0;
    for name in CORPUS {
        let r = check_builtin(&load(name));
        for o in &r.obligations {
            let again = check_problem(&r.theory, &o.context, Some(&o.formula), &mut AcceptAll);
            ensure!(again.accepted(), "{name} #{}: {:?}", o.seq, again.verdict);
            n += 1;
        }
    }
    ensure!(n > 0, "the corpus produced no obligations");
    Ok(Outcome::Pass(format!("{n}/{n} obligations re-check as formulas")))
}

/// Replaces the annotation of some equation by another base type.
fn break_one(thy: &mut dhol::syntax::Theory, other: &str) -> bool {
    for d in thy.decls.iter_mut().rev() {
        if let Decl::Axiom { formula, .. } = d {
            if let Term::Eq(a, s, t) = formula.clone() {
                if let Type::Base(n, _) = &*a {
                    if n != other {
                        *formula = Term::eq(Type::atom(other), *s, *t);
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn c7_conservativity() -> Result<Outcome, String> {
    let cfg = GenCfg { max_tycons: 3, max_arity: 0, depth: 3, psub: false, unannotated: false };
    let (mut done, mut rejected, mut seed) = (0, 0, 0u64);
    while done < 20 {
        seed += 1;
        let mut g = Gen::new(seed, cfg);
        g.signature();
        for _ in 0..2 {
            let a = g.ty(&Vec::new(), 1);
            let s = g.term(&Vec::new(), &a, 2);
            let t = g.term(&Vec::new(), &a, 2);
            let n = g.fresh("e");
            g.thy.push(Decl::Axiom { name: n, formula: Term::eq(a, s, t) });
        }
        let mut thy = g.thy.clone();
        if seed % 2 == 0 && !break_one(&mut thy, "a0") {
            continue;
        }
        let r = check_problem(&thy, &Context::new(), None, &mut NoOracle);
        ensure!(r.obligations.is_empty(), "seed {seed}: {} obligation(s)", r.obligations.len());
        let hol_ok = translate_theory(&thy, AxiomSet::Appendix).map(|o| hol_check_theory(&o.theory).is_ok());
        ensure!(r.accepted() == (hol_ok == Ok(true)), "seed {seed}: {:?} vs {hol_ok:?}", r.verdict);
        rejected += usize::from(!r.accepted());
        done += 1;
    }
    Ok(Outcome::Pass(format!("20 theories agree ({rejected} rejected by both), no obligations")))
}

fn core_type(g: &mut Gen, scope: &[(String, Type)]) -> Type {
    loop {
        let t = g.ty(&scope.to_vec(), 2);
        if !matches!(normalize_psub(&t), Type::Psub(..)) {
            return t;
        }
    }
}

fn c8_psub() -> Result<Outcome, String> {
    for seed in 0..200u64 {
        let mut g = Gen::new(seed, GenCfg::default());
        g.signature();
        let (_, scope) = g.context();
        let a = core_type(&mut g, &scope);
        let x = g.fresh("x");
        let mut s2 = scope.clone();
        s2.push((x.clone(), a.clone()));
        let b = core_type(&mut g, &s2);
        let y = g.fresh("y");
        let mut s3 = s2.clone();
        s3.push((y.clone(), b.clone()));
        let p = Term::lam(y.clone(), b.clone(), g.formula(&s3, 1));
        let fun = Type::pi(x.clone(), a.clone(), b.clone());
        let lhs = Type::pi(x.clone(), a.clone(), Type::psub(b.clone(), p.clone()));
        let f = g.fresh("f");
        let pred = Term::lam(
            f.clone(),
            fun.clone(),
            Term::forall(x.clone(), a.clone(), Term::app(p, Term::app(Term::var(&f), Term::var(&x)))),
        );
        ensure!(
            normalize_psub(&lhs).alpha_eq(&normalize_psub(&Type::psub(fun, pred))),
            "seed {seed}: Π into a subtype"
        );
        let z = g.fresh("z");
        let mut s4 = scope.clone();
        s4.push((z.clone(), a.clone()));
        let p1 = Term::lam(z.clone(), a.clone(), g.formula(&s4, 1));
        let q1 = Term::lam(z.clone(), a.clone(), g.formula(&s4, 1));
        let nested = Type::psub(Type::psub(a.clone(), p1.clone()), q1.clone());
        let w = g.fresh("w");
        let merged = Type::psub(
            a.clone(),
            Term::lam(w.clone(), a.clone(), Term::and(Term::app(p1, Term::var(&w)), Term::app(q1, Term::var(&w)))),
        );
        ensure!(normalize_psub(&nested).alpha_eq(&normalize_psub(&merged)), "seed {seed}: nested subtype");
    }
    let r = check_builtin(&load("isomorphisms"));
    ensure!(r.obligations.len() == 1, "isomorphisms: {} obligations", r.obligations.len());
    ensure!(r.obligations[0].provenance == Provenance::PsubIntro, "isomorphisms: {}", r.obligations[0]);
    ensure!(check_with(&load("isomorphisms"), &mut AcceptAll).accepted(), "isomorphisms ill-typed");
    Ok(Outcome::Pass("200 types normalize per both equations; isomorphisms gives one PsubIntro".into()))
}

fn c9_round_trip() -> Result<Outcome, String> {
    for name in CORPUS {
        let r = check_with(&load(name), &mut AcceptAll);
        let out = translate_theory(&r.theory, AxiomSet::Appendix).map_err(|e| format!("{name}: {e}"))?;
        let back = reparse_th0(&emit_th0(&out, None)).map_err(|e| format!("{name}: {e}"))?;
        ensure!(back.theory == out.theory, "{name}: theory differs after reparse");
        if let Some(f) = &r.formula {
            let hp = translate_problem(&r.theory, &r.context, f, AxiomSet::Appendix).map_err(|e| e.to_string())?;
            let (thy, conj) = flatten_problem(&hp);
            let back = reparse_th0(&emit_problem(&hp)).map_err(|e| format!("{name}: {e}"))?;
            ensure!(back.theory == thy, "{name}: problem theory differs");
            ensure!(back.conjecture == Some((CONJECTURE_NAME.to_string(), conj)), "{name}: conjecture differs");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let alphabet = b"thf()[]:,.@^!?=&|~<>$_'\"%/* \nabcXY01";
    for i in 0..10_000 {
        let len = rng.gen_range(0..160);
        let bytes: Vec<u8> = (0..len)
            .map(|_| if rng.gen_bool(0.5) { rng.gen() } else { alphabet[rng.gen_range(0..alphabet.len())] })
            .collect();
        let text = String::from_utf8_lossy(&bytes).into_owned();
        ensure!(catch_unwind(|| parse_dhol(&text)).is_ok(), "parser panicked on input {i}: {text:?}");
    }
    Ok(Outcome::Pass(format!("{} corpus files round-trip; 10000 fuzz inputs, no panic", CORPUS.len())))
}

fn c10_external_atp() -> Result<Outcome, String> {
    let Some(template) = std::env::var(ATP_ENV).ok().filter(|t| !t.trim().is_empty()) else {
        return Ok(Outcome::Skip(format!("{ATP_ENV} not set")));
    };
    let r = check_builtin(&load("dep_impl"));
    ensure!(r.accepted(), "dep_impl not accepted");
    let f = r.formula.clone().ok_or("no conjecture")?;
    let hp = translate_problem(&r.theory, &r.context, &f, AxiomSet::Appendix).map_err(|e| e.to_string())?;
    let cfg = OracleConfig {
        chain: vec![OracleSpec::External(template.clone())],
        timeout: Duration::from_secs(60),
        ..OracleConfig::default()
    };
    let pr = prove_report(&hp, &cfg);
    ensure!(pr.verdict.is_proved(), "external prover: {}", pr.verdict);
    let out = dhol_bin()
        .args(["prove", "--timeout", "60", "--oracle", &template])
        .arg(corpus_path("dep_impl"))
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(0), "prove exited {:?}", out.status.code());
    Ok(Outcome::Pass(format!("{}", pr.verdict)))
}

/// Written to the stderr handle directly so the lines show even when the
/// harness captures test output.
fn line(s: String) {
    let _ = writeln!(std::io::stderr(), "{s}");
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Criterion); 10] = [
        ("category corpus", c1_category_corpus),
        ("translation golden", c2_translation_golden),
        ("completeness properties", c3_completeness),
        ("substitution lemma", c4_substitution),
        ("ill-typed conjecture refused", c5_soundness_discipline),
        ("obligation ordering", c6_obligation_ordering),
        ("conservativity", c7_conservativity),
        ("predicate subtype normalization", c8_psub),
        ("TPTP round trip and fuzzing", c9_round_trip),
        ("external ATP end to end", c10_external_atp),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match res {
            Ok(Outcome::Pass(d)) => line(format!("criterion {n:>2} PASS  {name}: {d}")),
            Ok(Outcome::Skip(d)) => line(format!("criterion {n:>2} SKIP  {name}: {d}")),
            Err(d) => {
                line(format!("criterion {n:>2} FAIL  {name}: {d}"));
                failed.push(n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
