//! Decorated equational logics for computational effects.
//!
//! The crate implements a family of equational logics whose terms carry
//! effect decorations (0 = pure, 1 = constructor/accessor, 2 = modifier),
//! with strong and weak equations. It provides:
//!
//! - a point-free calculus with typing, decoration inference and
//!   per-profile formation checking ([`calculus`]);
//! - a proof kernel that checks explicit derivation trees against the rule
//!   catalogs of the seven logic profiles ([`kernel`]);
//! - an elaborator for the programmer-level exception constructions
//!   (`throw`, `try/catch`, multi-catch, catch-all) and for conditionals
//!   and sequential pairs ([`elaborate`]);
//! - finite-set models deciding strong/weak equations exhaustively, for
//!   the exception monad `X + E` ([`exc`]) and the state comonad `X * S`
//!   ([`st`]);
//! - a soundness harness validating every inference rule against the
//!   models and exhibiting counterexamples for dropped side conditions
//!   ([`soundness`]);
//! - a text frontend for theory files (`.dth`) and derivation files
//!   (`.dpf`) with a round-tripping pretty-printer ([`syntax`]).

pub mod calculus;
pub mod elaborate;
pub mod error;
pub mod exc;
pub mod kernel;
pub mod profile;
pub mod soundness;
pub mod st;
pub mod syntax;
pub mod term;
pub mod theory;
pub mod types;
pub mod value;

pub use error::{ElabError, ModelError, ParseError, TypeError, Violation};
pub use profile::{LogicSide, ProfileName};
pub use term::{Equation, Strength, Term};
pub use theory::{EffectSide, Theory};
pub use types::{Decoration, PairKind, Pos, TypeExpr};
pub use value::{Packet, Point, Value};

/// Default cap on the size of any single type carrier.
pub const DEFAULT_MAX_CARRIER: usize = 16;

/// Default cap on the size of the state space `S`.
pub const DEFAULT_MAX_STATES: usize = 256;

/// Cap on function-space enumerations used by uniqueness checks.
pub const MAX_FUNCTION_ENUMERATION: u128 = 1_000_000;
