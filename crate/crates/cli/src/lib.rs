//! Command-line driver: parse a DHOL problem, check it, translate it to TH0,
//! and hand the translation to the configured provers.

pub mod report;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, bail, Context as _};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use dhol::kernel::{check_conjecture, check_problem, check_theory, AcceptAll, CheckReport, Obligation, ValidityOracle, Verdict};
use dhol::oracle::{prove_report, ChainOracle, OracleConfig, OracleSpec, OracleVerdict};
use dhol::syntax::Theory;
use dhol::tptp::{emit_problem, emit_th0, emit_theory, flatten_problem, parse_dhol_with, DholProblem};
use dhol::translate::{translate_obligation, translate_problem, translate_theory, AxiomSet};

use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "dhol", version, about = "Check, translate and prove DHOL problems written in TPTP syntax")]
pub struct Cli {
    /// More log output (-v info, -vv debug, -vvv trace).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Type-check a theory and, if present, its conjecture.
    Check(Common),
    /// Write the HOL translation as a TH0 problem.
    Translate {
        #[command(flatten)]
        common: Common,
        /// Output file; standard output if absent.
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Translate without type-checking first.
        #[arg(long)]
        skip_check: bool,
    },
    /// Type-check the conjecture, then try to prove its translation.
    Prove {
        #[command(flatten)]
        common: Common,
        /// Appends a prover that claims every conjecture. It is never asked
        /// about typing obligations.
        #[arg(long, hide = true)]
        mock_accept_all: bool,
    },
    /// List the proof obligations type-checking produces.
    Obligations {
        #[command(flatten)]
        common: Common,
        /// Also write one TH0 problem per obligation into this directory.
        #[arg(long, value_name = "DIR")]
        emit_dir: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxiomSetArg {
    Appendix,
    Minimal,
}

impl From<AxiomSetArg> for AxiomSet {
    fn from(a: AxiomSetArg) -> Self {
        match a {
            AxiomSetArg::Appendix => AxiomSet::Appendix,
            AxiomSetArg::Minimal => AxiomSet::Minimal,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Problem file, or `-` for standard input.
    pub input: PathBuf,
    /// External TH0 prover, e.g. `leo3 {file} -t {timeout}`. May be repeated;
    /// provers run after the builtin one, in order.
    #[arg(long, value_name = "CMD-TEMPLATE", env = "DHOL_ATP")]
    pub oracle: Vec<String>,
    /// Per-call time limit for external provers, in seconds.
    #[arg(long, value_name = "SECS", default_value_t = 60)]
    pub timeout: u64,
    #[arg(long, value_enum, default_value_t = AxiomSetArg::Appendix)]
    pub axiom_set: AxiomSetArg,
    /// Keep the problem files given to external provers (in DIR, or the
    /// system temporary directory).
    #[arg(long, value_name = "DIR")]
    pub keep_temp: Option<Option<PathBuf>>,
    /// Ask every prover even after one has answered, and flag disagreement.
    #[arg(long)]
    pub cross_check: bool,
    /// Print a JSON report instead of text.
    #[arg(long)]
    pub json: bool,
    /// Where `include('…')` paths are resolved; defaults to the input's directory.
    #[arg(long, value_name = "DIR")]
    pub include_dir: Option<PathBuf>,
}

impl Common {
    pub fn oracle_config(&self) -> OracleConfig {
        let mut cfg = OracleConfig {
            timeout: Duration::from_secs(self.timeout.max(1)),
            axiom_set: self.axiom_set.into(),
            cross_check: self.cross_check,
            ..OracleConfig::default()
        };
        for t in &self.oracle {
            if !t.trim().is_empty() {
                cfg.chain.push(OracleSpec::External(t.clone()));
            }
        }
        cfg.keep_temp = self
            .keep_temp
            .as_ref()
            .map(|d| d.clone().unwrap_or_else(std::env::temp_dir));
        cfg
    }

    fn input_name(&self) -> String {
        self.input.display().to_string()
    }

    /// Reads and parses the input, resolving includes.
    pub fn load(&self) -> anyhow::Result<DholProblem> {
        let stdin = self.input.as_os_str() == "-";
        let text = if stdin {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
            s
        } else {
            fs::read_to_string(&self.input).with_context(|| format!("reading {}", self.input.display()))?
        };
        let base = match &self.include_dir {
            Some(d) => d.clone(),
            None if stdin => PathBuf::from("."),
            None => self.input.parent().map(Path::to_path_buf).unwrap_or_default(),
        };
        let mut resolve = |p: &str| -> Result<String, String> {
            let path = base.join(p);
            fs::read_to_string(&path).map_err(|e| format!("cannot include {}: {e}", path.display()))
        };
        parse_dhol_with(&text, &mut resolve).map_err(|e| anyhow!("{}:{e}", self.input_name()))
    }
}

/// What a command printed and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub report: Report,
    pub text: String,
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Accepted => EXIT_OK,
        Verdict::Rejected { .. } => EXIT_REJECTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn base_report(command: &str, common: &Common) -> Report {
    Report { command: command.into(), input: common.input_name(), ..Report::default() }
}

fn describe_check(r: &CheckReport, out: &mut String) {
    match &r.verdict {
        Verdict::Accepted => out.push_str("accepted\n"),
        Verdict::Rejected { reason, location } => out.push_str(&format!("rejected at {location}: {reason}\n")),
        Verdict::Inconclusive => {
            let open: Vec<&Obligation> = r.open().collect();
            out.push_str(&format!("inconclusive: {} obligation(s) not proved\n", open.len()));
            for o in open {
                out.push_str(&format!("  #{} {o}\n", o.seq));
            }
        }
    }
}

fn fill_check(rep: &mut Report, r: &CheckReport) {
    rep.verdict = report::verdict_name(&r.verdict).into();
    if let Verdict::Rejected { reason, location } = &r.verdict {
        rep.reason = Some(reason.clone());
        rep.location = Some(location.clone());
    }
    rep.obligations.extend(report::obligations(r));
}

fn run_check(p: &DholProblem, cfg: &OracleConfig) -> CheckReport {
    let mut oracle = ChainOracle::new(cfg.clone());
    check_problem(&p.theory, &p.context, p.conjecture.as_ref().map(|c| &c.1), &mut oracle)
}

pub fn cmd_check(common: &Common) -> anyhow::Result<Outcome> {
    let p = common.load()?;
    let r = run_check(&p, &common.oracle_config());
    let mut rep = base_report("check", common);
    fill_check(&mut rep, &r);
    let mut text = String::new();
    describe_check(&r, &mut text);
    let code = verdict_code(&r.verdict);
    rep.exit_code = code;
    Ok(Outcome { code, report: rep, text })
}

/// The TH0 text for an elaborated problem. Context variables and
/// hypotheses become constants and axioms.
fn th0_text(r: &CheckReport, set: AxiomSet) -> anyhow::Result<String> {
    let out = translate_theory(&r.theory, set)?;
    match &r.formula {
        Some(f) => Ok(emit_problem(&translate_problem(&r.theory, &r.context, f, set)?)),
        None if r.context.is_empty() => Ok(emit_th0(&out, None)),
        None => {
            let hp = translate_problem(&r.theory, &r.context, &dhol::syntax::Term::truth(), set)?;
            let (thy, _) = flatten_problem(&hp);
            Ok(emit_theory(&thy, None))
        }
    }
}

pub fn cmd_translate(common: &Common, output: Option<&Path>, skip_check: bool) -> anyhow::Result<Outcome> {
    let p = common.load()?;
    let mut rep = base_report("translate", common);
    let mut text = String::new();
    let r = if skip_check {
        // Still elaborates `_` and equality annotations; no oracle is asked.
        let mut all = AcceptAll;
        check_problem(&p.theory, &p.context, p.conjecture.as_ref().map(|c| &c.1), &mut all)
    } else {
        run_check(&p, &common.oracle_config())
    };
    fill_check(&mut rep, &r);
    if !r.accepted() {
        describe_check(&r, &mut text);
        let code = verdict_code(&r.verdict);
        rep.exit_code = code;
        return Ok(Outcome { code, report: rep, text });
    }
    let th0 = th0_text(&r, common.axiom_set.into())?;
    match output {
        Some(path) => {
            fs::write(path, &th0).with_context(|| format!("writing {}", path.display()))?;
            info!("wrote {}", path.display());
            rep.output = Some(path.display().to_string());
            text.push_str(&format!("wrote {}\n", path.display()));
        }
        None => text.push_str(&th0),
    }
    rep.verdict = "translated".into();
    Ok(Outcome { code: EXIT_OK, report: rep, text })
}

pub fn cmd_prove(common: &Common, mock_accept_all: bool) -> anyhow::Result<Outcome> {
    let p = common.load()?;
    let Some((name, conj)) = p.conjecture.clone() else {
        bail!("{}: no conjecture to prove", common.input_name());
    };
    let mut cfg = common.oracle_config();
    let mut rep = base_report("prove", common);
    let mut text = String::new();

    let mut oracle = ChainOracle::new(cfg.clone());
    let thy = check_theory(&p.theory, &mut oracle);
    if !thy.accepted() {
        fill_check(&mut rep, &thy);
        text.push_str("theory: ");
        describe_check(&thy, &mut text);
        let code = verdict_code(&thy.verdict);
        rep.exit_code = code;
        return Ok(Outcome { code, report: rep, text });
    }

    let typing = check_conjecture(&thy.theory, &p.context, &conj, &mut oracle);
    if !typing.accepted() {
        // An undischarged typing obligation makes the conjecture ill-typed
        // as far as proving goes: its translation may be a spurious theorem.
        fill_check(&mut rep, &typing);
        rep.verdict = "ill-typed".into();
        text.push_str(&format!("conjecture `{name}` is not well-typed: "));
        describe_check(&typing, &mut text);
        rep.exit_code = EXIT_REJECTED;
        return Ok(Outcome { code: EXIT_REJECTED, report: rep, text });
    }
    rep.obligations.extend(report::obligations(&typing));

    let formula = typing.formula.clone().expect("accepted conjecture");
    let hp = translate_problem(&typing.theory, &typing.context, &formula, cfg.axiom_set)?;
    if mock_accept_all {
        cfg.chain.push(OracleSpec::AcceptAll);
    }
    let pr = prove_report(&hp, &cfg);
    if pr.inconsistent {
        warn!("provers disagree on `{name}`");
    }
    rep.prover = Some(report::prover(&pr));
    let code = match &pr.verdict {
        OracleVerdict::Proved { .. } => EXIT_OK,
        OracleVerdict::Refuted { .. } => EXIT_REJECTED,
        OracleVerdict::Unknown(_) => {
            if !cfg.has_external() {
                warn!("only the builtin prover was tried; configure --oracle or DHOL_ATP for anything harder");
            }
            EXIT_INCONCLUSIVE
        }
    };
    rep.verdict = match code {
        EXIT_OK => "proved",
        EXIT_REJECTED => "refuted",
        _ => "unknown",
    }
    .into();
    text.push_str(&format!("{name}: {}\n", pr.verdict));
    rep.exit_code = code;
    Ok(Outcome { code, report: rep, text })
}

/// Remembers the theory in scope for every obligation it is asked about.
struct Recording<'a> {
    inner: &'a mut dyn ValidityOracle,
    seen: Vec<(Theory, Obligation)>,
}

impl ValidityOracle for Recording<'_> {
    fn decide(&mut self, theory: &Theory, ob: &Obligation) -> OracleVerdict {
        self.seen.push((theory.clone(), ob.clone()));
        self.inner.decide(theory, ob)
    }
}

pub fn cmd_obligations(common: &Common, emit_dir: Option<&Path>) -> anyhow::Result<Outcome> {
    let p = common.load()?;
    let cfg = common.oracle_config();
    let mut chain = ChainOracle::new(cfg.clone());
    let mut rec = Recording { inner: &mut chain, seen: Vec::new() };
    let r = check_problem(&p.theory, &p.context, p.conjecture.as_ref().map(|c| &c.1), &mut rec);
    let seen = rec.seen;
    let mut rep = base_report("obligations", common);
    fill_check(&mut rep, &r);
    if let Some(dir) = emit_dir {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        for ((thy, ob), entry) in seen.iter().zip(rep.obligations.iter_mut()) {
            let hp = translate_obligation(thy, ob, cfg.axiom_set)?;
            let path = dir.join(format!("ob_{}.p", ob.seq));
            fs::write(&path, emit_problem(&hp)).with_context(|| format!("writing {}", path.display()))?;
            entry.file = Some(path.display().to_string());
        }
    }
    let mut text = String::new();
    for o in &rep.obligations {
        let by = o.by.as_deref().map(|b| format!(" by {b}")).unwrap_or_default();
        text.push_str(&format!(
            "#{} [{}] {} ⊢ {}  -- {}{by}\n",
            o.seq,
            o.provenance,
            o.context.join(", "),
            o.formula,
            o.status
        ));
        if let Some(f) = &o.file {
            text.push_str(&format!("    {f}\n"));
        }
    }
    if rep.obligations.is_empty() {
        text.push_str("no obligations\n");
    }
    if let Verdict::Rejected { reason, location } = &r.verdict {
        text.push_str(&format!("rejected at {location}: {reason}\n"));
    }
    let code = verdict_code(&r.verdict);
    rep.exit_code = code;
    Ok(Outcome { code, report: rep, text })
}

fn input_of(c: &Command) -> &Common {
    match c {
        Command::Check(c) => c,
        Command::Translate { common, .. } | Command::Prove { common, .. } | Command::Obligations { common, .. } => {
            common
        }
    }
}

/// Runs a command; operational errors become exit status 2.
pub fn run(cli: &Cli) -> Outcome {
    let common = input_of(&cli.command);
    let res = match &cli.command {
        Command::Check(c) => cmd_check(c),
        Command::Translate { common, output, skip_check } => cmd_translate(common, output.as_deref(), *skip_check),
        Command::Prove { common, mock_accept_all } => cmd_prove(common, *mock_accept_all),
        Command::Obligations { common, emit_dir } => cmd_obligations(common, emit_dir.as_deref()),
    };
    res.unwrap_or_else(|e| {
        let name = match &cli.command {
            Command::Check(_) => "check",
            Command::Translate { .. } => "translate",
            Command::Prove { .. } => "prove",
            Command::Obligations { .. } => "obligations",
        };
        let mut rep = base_report(name, common);
        rep.verdict = "error".into();
        rep.reason = Some(format!("{e:#}"));
        rep.exit_code = EXIT_INCONCLUSIVE;
        Outcome { code: EXIT_INCONCLUSIVE, report: rep, text: format!("error: {e:#}\n") }
    })
}

/// Prints the outcome the way the flags ask for.
pub fn emit(cli: &Cli, out: &Outcome, w: &mut dyn Write) -> io::Result<()> {
    if input_of(&cli.command).json {
        let s = serde_json::to_string_pretty(&out.report).map_err(io::Error::other)?;
        writeln!(w, "{s}")
    } else {
        w.write_all(out.text.as_bytes())
    }
}
