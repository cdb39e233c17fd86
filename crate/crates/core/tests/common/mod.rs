#![allow(dead_code)]

pub mod gen;

use std::path::PathBuf;

use dhol::kernel::{check_problem, CheckReport};
use dhol::oracle::{ChainOracle, OracleConfig};
use dhol::tptp::{parse_dhol, DholProblem};

pub const CORPUS: &[&str] = &[
    "category",
    "dep_impl",
    "undecidable",
    "noninj",
    "isomorphisms",
    "simple",
    "trivial",
    "empty",
];

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(format!("{name}.p"))
}

pub fn load(name: &str) -> DholProblem {
    let text = std::fs::read_to_string(corpus_path(name)).expect("corpus file");
    parse_dhol(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn check_builtin(p: &DholProblem) -> CheckReport {
    let mut oracle = ChainOracle::new(OracleConfig::default());
    check_problem(&p.theory, &p.context, p.conjecture.as_ref().map(|c| &c.1), &mut oracle)
}

/// Compares against `tests/golden/<name>`; `DHOL_BLESS=1` rewrites it.
pub fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("DHOL_BLESS").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with DHOL_BLESS=1 to create)", path.display()));
    assert_eq!(actual, expected, "golden {name} differs");
}
