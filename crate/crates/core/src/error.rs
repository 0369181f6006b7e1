//! Error types shared across the crate.

use thiserror::Error;

use crate::term::{path_display, TermPath};
use crate::types::{Decoration, TypeExpr};

/// Typing failures. `TypeMismatch` carries the two offending types and the
/// path of the offending subterm.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum TypeError {
    #[error("undeclared name `{name}` at {}", path_display(path))]
    UndeclaredName { name: String, path: TermPath },
    #[error("type mismatch at {}: expected {expected}, found {found}", path_display(path))]
    TypeMismatch { expected: TypeExpr, found: TypeExpr, path: TermPath },
}

/// A formation violation: a pair/copair/propagator-composition node (or an
/// effect operation) that the active profile does not admit. Violations
/// are data, not failures; a checked term may carry several.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Violation {
    /// Name of the violated formation rule, e.g. `copair` or `l-pair`.
    pub rule: String,
    pub path: TermPath,
    /// Human-readable account of the actual decorations or the missing
    /// construction.
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at {}: {}", self.rule, path_display(&self.path), self.detail)
    }
}

/// Failures of model construction and evaluation.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ModelError {
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("undeclared type `{name}`")]
    UndeclaredType { name: String },
    #[error("carrier of {ty} has {size} elements, exceeding the cap {cap}")]
    CarrierTooLarge { ty: String, size: usize, cap: usize },
    #[error("state space has {size} elements, exceeding the cap {cap}")]
    StateSpaceTooLarge { size: usize, cap: usize },
    #[error("function-space enumeration of {count} candidates exceeds the cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u128 },
    #[error("operation `{op}`: table misses input {missing}")]
    IncompleteConstTable { op: String, missing: String },
    #[error("operation `{op}`: duplicate row for input {input}")]
    DuplicateConstRow { op: String, input: String },
    #[error("operation `{op}`: {detail}")]
    InvalidConstRow { op: String, detail: String },
    #[error("term is formation-invalid: {0}")]
    Formation(Violation),
    #[error("denotation is not a propagator: {detail}")]
    NotAPropagator { detail: String },
    #[error("illegal lift from decoration {from} to {to}")]
    IllegalLift { from: Decoration, to: Decoration },
    #[error("decoration mismatch: {detail}")]
    DecorationMismatch { detail: String },
    #[error("theory is not {expected}-sided")]
    WrongSide { expected: String },
    #[error("input {input} is not in the carrier of {ty}")]
    InputOutsideCarrier { input: String, ty: String },
}

/// Elaboration failures for the programmer-level constructions.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ElabError {
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error("undeclared exception name `{name}`")]
    UndeclaredException { name: String },
    #[error("try/catch needs at least one handler or a catch-all")]
    EmptyHandlerList,
    #[error("handler for `{name}` has source {found}, expected {expected}")]
    HandlerSourceMismatch { name: String, expected: TypeExpr, found: TypeExpr },
    #[error("handler target {found} differs from body target {expected}")]
    HandlerTargetMismatch { expected: TypeExpr, found: TypeExpr },
    #[error("formation violation in elaborated term: {0}")]
    Formation(Violation),
    #[error("{detail}")]
    Precondition { detail: String },
}

/// Parse diagnostics carry a 1-based source position.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}
