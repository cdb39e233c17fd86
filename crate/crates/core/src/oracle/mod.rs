//! Validity oracles: a bounded builtin prover whose answers are replayed
//! by a small proof checker, an external ATP driver, and the chain that
//! ties them to the type checker.

mod builtin;
mod external;
mod proof;

use std::fmt;
use std::path::PathBuf;
use std::time::Duration;

use log::{debug, error, warn};

use crate::hol::{hol_check_problem, HolProblem};
use crate::kernel::{Obligation, ValidityOracle};
use crate::syntax::Theory;
use crate::translate::{translate_obligation, AxiomSet};

pub use builtin::{builtin_decide, builtin_prove, Bounds, BUILTIN};
pub use external::{prover_name, render_command, run_external, szs_verdict, ATP_ENV};
pub use proof::{convertible, replay, replay_conjecture, Proof, ReplayError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnknownReason {
    Timeout,
    GaveUp,
    ParseFailure,
    NotAttempted,
}

impl fmt::Display for UnknownReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnknownReason::Timeout => "timeout",
            UnknownReason::GaveUp => "gave-up",
            UnknownReason::ParseFailure => "parse-failure",
            UnknownReason::NotAttempted => "not-attempted",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Proved { by: String, elapsed: Duration },
    /// Only ever produced from positive evidence (a countermodel report).
    Refuted { by: String, elapsed: Duration },
    Unknown(UnknownReason),
}

impl OracleVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, OracleVerdict::Proved { .. })
    }
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleVerdict::Proved { by, elapsed } => write!(f, "proved by {by} in {elapsed:?}"),
            OracleVerdict::Refuted { by, elapsed } => write!(f, "refuted by {by} in {elapsed:?}"),
            OracleVerdict::Unknown(r) => write!(f, "unknown ({r})"),
        }
    }
}

/// One member of an oracle chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleSpec {
    Builtin,
    /// A prover command template with `{file}` and `{timeout}` placeholders.
    External(String),
    /// Proves every conjecture it is shown. A stand-in for an unsound
    /// prover; the chain never consults it for typing obligations.
    AcceptAll,
}

impl fmt::Display for OracleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleSpec::Builtin => f.write_str(BUILTIN),
            OracleSpec::External(t) => f.write_str(&prover_name(t)),
            OracleSpec::AcceptAll => f.write_str("accept-all"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub chain: Vec<OracleSpec>,
    /// Per call, for external provers.
    pub timeout: Duration,
    pub bounds: Bounds,
    /// Where to keep problem files handed to external provers.
    pub keep_temp: Option<PathBuf>,
    pub axiom_set: AxiomSet,
    /// Run every chain member instead of stopping at the first answer, and
    /// flag disagreement.
    pub cross_check: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            chain: vec![OracleSpec::Builtin],
            timeout: Duration::from_secs(60),
            bounds: Bounds::default(),
            keep_temp: None,
            axiom_set: AxiomSet::default(),
            cross_check: false,
        }
    }
}

impl OracleConfig {
    /// Builtin first, then the prover named by `DHOL_ATP` if it is set.
    pub fn from_env() -> Self {
        let mut cfg = OracleConfig::default();
        if let Ok(t) = std::env::var(ATP_ENV) {
            if !t.trim().is_empty() {
                cfg.chain.push(OracleSpec::External(t));
            }
        }
        cfg
    }

    pub fn has_external(&self) -> bool {
        self.chain.iter().any(|s| !matches!(s, OracleSpec::Builtin))
    }
}

/// What each chain member said about one problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProveReport {
    pub verdict: OracleVerdict,
    pub attempts: Vec<(String, OracleVerdict)>,
    /// Some member proved the problem and another refuted it.
    pub inconsistent: bool,
}

fn run_one(spec: &OracleSpec, problem: &HolProblem, cfg: &OracleConfig) -> OracleVerdict {
    match spec {
        OracleSpec::Builtin => builtin_decide(problem, cfg.bounds),
        OracleSpec::External(t) => run_external(problem, t, cfg.timeout, cfg.keep_temp.as_deref()),
        OracleSpec::AcceptAll => OracleVerdict::Proved {
            by: "accept-all".into(),
            elapsed: Duration::ZERO,
        },
    }
}

/// Runs the chain in order. The first definite answer wins unless
/// `cross_check` is set; if every member is unsure the last reason is
/// reported.
pub fn prove(problem: &HolProblem, cfg: &OracleConfig) -> OracleVerdict {
    prove_report(problem, cfg).verdict
}

pub fn prove_report(problem: &HolProblem, cfg: &OracleConfig) -> ProveReport {
    prove_with(problem, cfg, |_| true)
}

fn prove_with(problem: &HolProblem, cfg: &OracleConfig, allowed: impl Fn(&OracleSpec) -> bool) -> ProveReport {
    let mut report = ProveReport {
        verdict: OracleVerdict::Unknown(UnknownReason::NotAttempted),
        attempts: Vec::new(),
        inconsistent: false,
    };
    if let Err(e) = hol_check_problem(problem) {
        error!("refusing an ill-formed HOL problem: {e}");
        report.verdict = OracleVerdict::Unknown(UnknownReason::GaveUp);
        return report;
    }
    let mut decided: Option<OracleVerdict> = None;
    for spec in cfg.chain.iter().filter(|s| allowed(s)) {
        let v = run_one(spec, problem, cfg);
        debug!("{spec}: {v}");
        report.attempts.push((spec.to_string(), v.clone()));
        match (&decided, &v) {
            (_, OracleVerdict::Unknown(r)) => {
                if decided.is_none() {
                    report.verdict = OracleVerdict::Unknown(*r);
                }
            }
            (None, _) => {
                decided = Some(v);
                if !cfg.cross_check {
                    break;
                }
            }
            (Some(d), _) => {
                if d.is_proved() != v.is_proved() {
                    warn!("oracles disagree on `{}`: {d} vs {v}", problem.conjecture);
                    report.inconsistent = true;
                }
            }
        }
    }
    if let Some(d) = decided {
        report.verdict = d;
    }
    report
}

/// Discharges typing obligations by translating them and running the
/// configured chain. `AcceptAll` members are skipped here.
pub struct ChainOracle {
    pub cfg: OracleConfig,
    pub log: Vec<(usize, ProveReport)>,
}

impl ChainOracle {
    pub fn new(cfg: OracleConfig) -> Self {
        ChainOracle { cfg, log: Vec::new() }
    }
}

impl ValidityOracle for ChainOracle {
    fn decide(&mut self, theory: &Theory, ob: &Obligation) -> OracleVerdict {
        let problem = match translate_obligation(theory, ob, self.cfg.axiom_set) {
            Ok(p) => p,
            Err(e) => {
                error!("cannot translate obligation #{}: {e}", ob.seq);
                return OracleVerdict::Unknown(UnknownReason::GaveUp);
            }
        };
        let r = prove_with(&problem, &self.cfg, |s| !matches!(s, OracleSpec::AcceptAll));
        let v = r.verdict.clone();
        self.log.push((ob.seq, r));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::*;
    use crate::hol::{HolContext, HolTerm, HolTheory};
    use crate::kernel::{check_problem, elaborate_unchecked, Verdict};
    use crate::syntax::{Context, Term};
    use crate::translate::translate_problem;

    fn cat_problem(ctx: &Context, f: &Term) -> HolProblem {
        let thy = elaborate_unchecked(&category()).unwrap();
        translate_problem(&thy, ctx, f, AxiomSet::Appendix).unwrap()
    }

    #[test]
    fn identity_reflexivity_via_typing_axiom() {
        let ctx = Context::new().with_var("x", obj());
        let f = Term::eq(mor(v("x"), v("x")), id(v("x")), id(v("x")));
        let v = prove(&cat_problem(&ctx, &f), &OracleConfig::default());
        assert!(matches!(v, OracleVerdict::Proved { ref by, .. } if by == BUILTIN), "{v}");
    }

    #[test]
    fn unrelated_objects_stay_unknown() {
        let ctx = Context::new().with_var("v", obj()).with_var("v2", obj());
        let f = Term::eq(obj(), v("v"), v("v2"));
        let v = prove(&cat_problem(&ctx, &f), &OracleConfig::default());
        assert!(matches!(v, OracleVerdict::Unknown(_)));
    }

    #[test]
    fn truth_is_proved() {
        let p = HolProblem {
            theory: HolTheory::default(),
            context: HolContext::default(),
            conjecture: HolTerm::True,
        };
        assert!(prove(&p, &OracleConfig::default()).is_proved());
    }

    #[test]
    fn dependent_implication_obligations_by_symmetry() {
        let ctx = Context::new().with_var("x", obj()).with_var("y", obj());
        let f = Term::implies(
            Term::eq_unannotated(v("x"), v("y")),
            Term::eq_unannotated(id(v("x")), id(v("y"))),
        );
        let mut chain = ChainOracle::new(OracleConfig::default());
        let r = check_problem(&category(), &ctx, Some(&f), &mut chain);
        assert_eq!(r.verdict, Verdict::Accepted);
        assert_eq!(r.obligations.len(), 2);
        assert!(r.discharged.values().all(|v| v.is_proved()));
        // and the conjecture itself
        let thy = r.theory.clone();
        let p = translate_problem(&thy, &ctx, &r.formula.unwrap(), AxiomSet::Appendix).unwrap();
        assert!(prove(&p, &OracleConfig::default()).is_proved());
    }

    #[test]
    fn chain_order_and_cross_check() {
        let ctx = Context::new().with_var("v", obj()).with_var("v2", obj());
        let p = cat_problem(&ctx, &Term::eq(obj(), v("v"), v("v2")));
        let cfg = OracleConfig {
            chain: vec![OracleSpec::Builtin, OracleSpec::AcceptAll],
            ..OracleConfig::default()
        };
        let r = prove_report(&p, &cfg);
        assert!(r.verdict.is_proved());
        assert_eq!(r.attempts.len(), 2);
        assert!(!r.inconsistent);
    }

    #[cfg(unix)]
    #[test]
    fn disagreement_is_flagged() {
        let p = HolProblem {
            theory: HolTheory::default(),
            context: HolContext::default(),
            conjecture: HolTerm::True,
        };
        let cfg = OracleConfig {
            chain: vec![
                OracleSpec::Builtin,
                OracleSpec::External("echo 'SZS status CounterSatisfiable' #".into()),
            ],
            cross_check: true,
            ..OracleConfig::default()
        };
        let r = prove_report(&p, &cfg);
        assert!(r.verdict.is_proved());
        assert!(r.inconsistent);
    }

    #[test]
    fn typing_obligations_never_reach_accept_all() {
        let thy = category()
            .with_const("u", obj())
            .with_const("w", obj());
        let ctx = Context::new();
        let f = Term::eq(mor(Term::cnst("u"), Term::cnst("u")), id(Term::cnst("u")), id(Term::cnst("w")));
        let cfg = OracleConfig {
            chain: vec![OracleSpec::Builtin, OracleSpec::AcceptAll],
            ..OracleConfig::default()
        };
        let mut chain = ChainOracle::new(cfg);
        let r = check_problem(&thy, &ctx, Some(&f), &mut chain);
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(chain.log.iter().all(|(_, r)| r.attempts.iter().all(|(n, _)| n != "accept-all")));
    }

    #[test]
    fn ill_formed_problem_is_not_attempted() {
        let p = HolProblem {
            theory: HolTheory::default(),
            context: HolContext::default(),
            conjecture: HolTerm::cnst("nope"),
        };
        assert_eq!(prove(&p, &OracleConfig::default()), OracleVerdict::Unknown(UnknownReason::GaveUp));
    }
}
