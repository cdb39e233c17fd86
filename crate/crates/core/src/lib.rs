//! Dependently-typed higher-order logic: syntax, a type checker that emits
//! proof obligations, an erasure translation into simple type theory, and
//! TPTP input/output.

pub mod hol;
pub mod syntax;
pub mod translate;
pub mod kernel;
pub mod oracle;
pub mod tptp;

#[cfg(test)]
mod fixtures;
