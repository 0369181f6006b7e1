//! Theories: a named logic profile plus declared effect names, base types,
//! operations with their finite tables, assumed axioms, and check/eval
//! statements.

use std::fmt;

use crate::profile::{LogicSide, ProfileName};
use crate::term::{Equation, Term};
use crate::types::{Decoration, TypeExpr};
use crate::value::Value;

/// Whether a theory declares exceptions, locations, or neither.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EffectSide {
    None,
    Exceptions,
    States,
}

impl fmt::Display for EffectSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffectSide::None => write!(f, "none"),
            EffectSide::Exceptions => write!(f, "exceptions"),
            EffectSide::States => write!(f, "states"),
        }
    }
}

/// A state literal as written in source: location/value pairs.
pub type StateLit = Vec<(String, Value)>;

/// Output cell of a declared exception-side operation row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExcRowOut {
    Ok(Value),
    Raise(String, Value),
}

/// Input cell of a decoration-2 exception-side row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExcRowIn {
    Ord(Value),
    Packet(String, Value),
}

/// The finite table of a declared operation, keyed by the theory side and
/// the operation's decoration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OpRows {
    /// `elem => value` (decoration 0, either side).
    Pure(Vec<(Value, Value)>),
    /// `elem => ok v | raise T v` (decoration 1, exception side).
    Exc1(Vec<(Value, ExcRowOut)>),
    /// `ok v => ... | exn T v => ...` (decoration 2, exception side).
    Exc2(Vec<(ExcRowIn, ExcRowOut)>),
    /// `(elem, state) => value` (decoration 1, state side).
    St1(Vec<(Value, StateLit, Value)>),
    /// `(elem, state) => (value, state)` (decoration 2, state side).
    St2(Vec<(Value, StateLit, Value, StateLit)>),
}

/// A declared operation with its decoration and value table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OpDecl {
    pub name: String,
    pub source: TypeExpr,
    pub target: TypeExpr,
    pub deco: Decoration,
    pub rows: OpRows,
}

/// A named equation assumed by the theory; usable as a proof leaf.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomDecl {
    pub name: String,
    pub eq: Equation,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Expectation {
    Holds,
    Fails,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Holds => write!(f, "holds"),
            Expectation::Fails => write!(f, "fails"),
        }
    }
}

/// `check <eq> expect holds|fails`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckStmt {
    pub eq: Equation,
    pub expect: Expectation,
}

/// Input literal of an `eval` statement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum EvalInput {
    /// A bare value, read as an ordinary input.
    Plain(Value),
    /// `ok v`: an ordinary input on the exception side.
    Ord(Value),
    /// `exn T v`: an incoming exception packet.
    Packet(String, Value),
    /// `(v, {..})`: a value/state input on the state side.
    WithState(Value, StateLit),
}

/// `eval <term> on <input>`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EvalStmt {
    pub term: Term,
    pub input: EvalInput,
}

/// A parsed theory. Declaration order is significant: it fixes carrier and
/// packet enumeration order, hence counterexample order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Theory {
    pub name: String,
    pub side: EffectSide,
    pub profile: ProfileName,
    /// Base type name -> atoms.
    pub base_types: Vec<(String, Vec<String>)>,
    /// Exception name or location name -> carrier atoms of `V_T`.
    pub effects: Vec<(String, Vec<String>)>,
    pub ops: Vec<OpDecl>,
    pub axioms: Vec<AxiomDecl>,
    pub checks: Vec<CheckStmt>,
    pub evals: Vec<EvalStmt>,
}

impl Theory {
    pub fn new(name: &str, side: EffectSide, profile: ProfileName) -> Theory {
        Theory {
            name: name.to_string(),
            side,
            profile,
            base_types: Vec::new(),
            effects: Vec::new(),
            ops: Vec::new(),
            axioms: Vec::new(),
            checks: Vec::new(),
            evals: Vec::new(),
        }
    }

    /// Minimal exception-sided theory for tests.
    pub fn exceptions_for_test(name: &str) -> Theory {
        Theory::new(name, EffectSide::Exceptions, ProfileName::ExcPlus)
    }

    /// Minimal state-sided theory for tests.
    pub fn states_for_test(name: &str) -> Theory {
        Theory::new(name, EffectSide::States, ProfileName::StPlus)
    }

    pub fn base_type(&self, name: &str) -> Option<&[String]> {
        self.base_types.iter().find(|(n, _)| n == name).map(|(_, a)| a.as_slice())
    }

    pub fn effect(&self, name: &str) -> Option<&[String]> {
        self.effects.iter().find(|(n, _)| n == name).map(|(_, a)| a.as_slice())
    }

    pub fn effect_names(&self) -> impl Iterator<Item = &str> {
        self.effects.iter().map(|(n, _)| n.as_str())
    }

    pub fn op(&self, name: &str) -> Option<&OpDecl> {
        self.ops.iter().find(|o| o.name == name)
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomDecl> {
        self.axioms.iter().find(|a| a.name == name)
    }

    /// True when the profile's side is consistent with the declared effect
    /// side (`none` theories pair with any profile but cannot declare
    /// effect names).
    pub fn side_consistent(&self) -> bool {
        match self.side {
            EffectSide::None => self.effects.is_empty(),
            EffectSide::Exceptions => self.profile.side() == LogicSide::Monad,
            EffectSide::States => self.profile.side() == LogicSide::Comonad,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups_respect_declaration_order() {
        let mut th = Theory::exceptions_for_test("t");
        th.effects.push(("T".into(), vec!["a".into()]));
        th.effects.push(("R".into(), vec!["c".into()]));
        let names: Vec<&str> = th.effect_names().collect();
        assert_eq!(names, vec!["T", "R"]);
        assert_eq!(th.effect("R"), Some(&["c".to_string()][..]));
        assert!(th.effect("Q").is_none());
        assert!(th.side_consistent());
    }

    #[test]
    fn side_consistency() {
        let th = Theory::new("x", EffectSide::States, ProfileName::Mon);
        assert!(!th.side_consistent());
        let mut th = Theory::new("y", EffectSide::None, ProfileName::Mon);
        assert!(th.side_consistent());
        th.effects.push(("T".into(), vec!["a".into()]));
        assert!(!th.side_consistent());
    }
}
