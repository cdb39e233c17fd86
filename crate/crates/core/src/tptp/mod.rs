//! TPTP concrete syntax: a THF dialect with dependent types for input, and
//! plain TH0 for output.

mod dhol;
mod lexer;
mod parse;
mod th0;

use thiserror::Error;

pub use dhol::{parse_dhol, parse_dhol_with, DholProblem};
pub use th0::{
    emit_problem, emit_th0, emit_theory, flatten_problem, mangle_functor, mangle_var, reparse_th0,
    term_to_th0, type_to_th0, unmangle_var, Th0File, CONJECTURE_NAME, HEADER,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}
