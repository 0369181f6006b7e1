//! Counterexamples showing the decoration side conditions are necessary.
//!
//! Each variant names a deliberately weakened rule; the finder returns a
//! concrete instantiation whose premises hold in the finite model while
//! the conclusion fails, or — for the copair of two catchers — an
//! exhaustive enumeration with no solution.

use thiserror::Error;

use crate::error::ModelError;
use crate::exc::ExcEnv;
use crate::st::StEnv;
use crate::term::{Equation, Term};
use crate::theory::Theory;
use crate::types::TypeExpr;
use crate::{DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES};

pub const WITNESS_VARIANTS: &[&str] = &[
    "w-subs-unrestricted",
    "weak-strong-at-2",
    "copair-of-catchers",
    "w-repl-unrestricted",
];

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Witness {
    pub variant: String,
    pub description: String,
    /// Pretty-printed instantiation, e.g. `f = initial[V_T] . tag[T]`.
    pub bindings: Vec<(String, String)>,
    pub kind: WitnessKind,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum WitnessKind {
    /// Premises re-evaluated true, conclusion re-evaluated false.
    PremiseConclusion {
        premises: Vec<(String, bool)>,
        conclusion: (String, bool),
        counterexample: String,
    },
    /// An exhaustive search over candidate tables found none satisfying
    /// the required laws.
    NoSolution { laws: Vec<String>, candidates_checked: usize },
}

#[derive(Clone, Debug, Error)]
pub enum WitnessError {
    #[error("unknown weakened-rule variant `{0}`")]
    UnknownVariant(String),
    #[error("no witness found: {0}")]
    NoWitnessFound(String),
    #[error("model error: {0}")]
    Model(#[from] ModelError),
}

pub fn find_side_condition_witness(
    variant: &str,
    theory: &Theory,
) -> Result<Witness, WitnessError> {
    match variant {
        "w-subs-unrestricted" => w_subs_unrestricted(theory),
        "weak-strong-at-2" => weak_strong_at_2(theory),
        "copair-of-catchers" => copair_of_catchers(theory),
        "w-repl-unrestricted" => w_repl_unrestricted(theory),
        other => Err(WitnessError::UnknownVariant(other.to_string())),
    }
}

/// Substitution into a weak equation with a non-pure substituted term:
/// `g1 ~ g2` holds but `g1 . f ~ g2 . f` fails when `f` raises, because
/// the left composite propagates the fresh packet while the right one
/// catches it.
fn w_subs_unrestricted(theory: &Theory) -> Result<Witness, WitnessError> {
    let env = ExcEnv::new(theory, DEFAULT_MAX_CARRIER)?;
    for (name, _) in &theory.effects {
        let vt = TypeExpr::effect_val(name);
        // f = throw: always raises; decoration 1, violating the purity bound
        let f = Term::comp(Term::Initial(vt.clone()), Term::Tag(name.clone()));
        let g1 = Term::Id(vt.clone());
        let g2 = Term::comp(Term::Untag(name.clone()), Term::Tag(name.clone()));
        let premise = Equation::weak(g1.clone(), g2.clone());
        let conclusion =
            Equation::weak(Term::comp(g1.clone(), f.clone()), Term::comp(g2.clone(), f.clone()));
        let p = env.decide(&premise)?;
        let c = env.decide(&conclusion)?;
        if p.holds() {
            if let crate::exc::ExcVerdict::Fails(cex) = c {
                return Ok(Witness {
                    variant: "w-subs-unrestricted".to_string(),
                    description: "w-subs without the purity condition is unsound".to_string(),
                    bindings: vec![
                        ("f".to_string(), f.to_string()),
                        ("g1".to_string(), g1.to_string()),
                        ("g2".to_string(), g2.to_string()),
                    ],
                    kind: WitnessKind::PremiseConclusion {
                        premises: vec![(premise.to_string(), true)],
                        conclusion: (conclusion.to_string(), false),
                        counterexample: format!(
                            "input {}: lhs {}, rhs {}",
                            cex.input, cex.lhs, cex.rhs
                        ),
                    },
                });
            }
        }
    }
    Err(WitnessError::NoWitnessFound(
        "needs an exception name with a nonempty carrier".to_string(),
    ))
}

/// Conversion of a weak equation to a strong one at decoration 2:
/// `untag[T] . tag[T] ~ id[V_T]` holds while the strong version fails on
/// every packet of name `T`.
fn weak_strong_at_2(theory: &Theory) -> Result<Witness, WitnessError> {
    let env = ExcEnv::new(theory, DEFAULT_MAX_CARRIER)?;
    for (name, _) in &theory.effects {
        let vt = TypeExpr::effect_val(name);
        let f = Term::comp(Term::Untag(name.clone()), Term::Tag(name.clone()));
        let g = Term::Id(vt.clone());
        let premise = Equation::weak(f.clone(), g.clone());
        let conclusion = Equation::strong(f.clone(), g.clone());
        if env.decide(&premise)?.holds() {
            if let crate::exc::ExcVerdict::Fails(cex) = env.decide(&conclusion)? {
                return Ok(Witness {
                    variant: "weak-strong-at-2".to_string(),
                    description: "weak-to-strong conversion is unsound at decoration 2"
                        .to_string(),
                    bindings: vec![
                        ("f".to_string(), f.to_string()),
                        ("g".to_string(), g.to_string()),
                    ],
                    kind: WitnessKind::PremiseConclusion {
                        premises: vec![(premise.to_string(), true)],
                        conclusion: (conclusion.to_string(), false),
                        counterexample: format!(
                            "input {}: lhs {}, rhs {}",
                            cex.input, cex.lhs, cex.rhs
                        ),
                    },
                });
            }
        }
    }
    Err(WitnessError::NoWitnessFound("needs a declared exception name".to_string()))
}

/// The symmetric copair of two catchers: no level-2 table on `0 + 0`
/// satisfies both strong copair laws against `untag[T]` and the lifted
/// `initial[V_T]`, because the two legs disagree on the `T`-packets.
fn copair_of_catchers(theory: &Theory) -> Result<Witness, WitnessError> {
    let env = ExcEnv::new(theory, DEFAULT_MAX_CARRIER)?;
    let Some((name, _)) = theory.effects.first() else {
        return Err(WitnessError::NoWitnessFound("needs a declared exception name".to_string()));
    };
    let vt = TypeExpr::effect_val(name);
    let f = Term::Untag(name.clone());
    let g = Term::Initial(vt.clone());
    let fd = env.eval(&f)?;
    let gd = env.eval(&g)?;
    let source = TypeExpr::sum(TypeExpr::Empty, TypeExpr::Empty);
    let in1 = env.eval(&Term::Copr(crate::types::Pos::First, TypeExpr::Empty, TypeExpr::Empty))?;
    let in2 =
        env.eval(&Term::Copr(crate::types::Pos::Second, TypeExpr::Empty, TypeExpr::Empty))?;
    let candidates = env.catcher_tables(&source, &vt)?;
    let total = candidates.len();
    for h in &candidates {
        let l1 = env.compose(h, &in1)?;
        let l2 = env.compose(h, &in2)?;
        if l1.strong_eq(&fd) && l2.strong_eq(&gd) {
            return Err(WitnessError::NoWitnessFound(format!(
                "a copair of the two catchers exists after all: {h:?}"
            )));
        }
    }
    Ok(Witness {
        variant: "copair-of-catchers".to_string(),
        description: "no symmetric copair of two catchers satisfies both strong laws"
            .to_string(),
        bindings: vec![("f".to_string(), f.to_string()), ("g".to_string(), g.to_string())],
        kind: WitnessKind::NoSolution {
            laws: vec![
                format!("h . in1[0, 0] == {f}"),
                format!("h . in2[0, 0] == {g}"),
            ],
            candidates_checked: total,
        },
    })
}

/// Replacement into a weak equation with a non-pure replacing term on the
/// state side: `update[X] ~ final[V_X]` holds (both return the unit value)
/// but observing through `lookup[X]` separates them.
fn w_repl_unrestricted(theory: &Theory) -> Result<Witness, WitnessError> {
    let env = StEnv::new(theory, DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES)?;
    for (name, atoms) in &theory.effects {
        if atoms.len() < 2 {
            continue;
        }
        let vt = TypeExpr::effect_val(name);
        let f1 = Term::Update(name.clone());
        let f2 = Term::Final(vt.clone());
        let g = Term::Lookup(name.clone());
        let premise = Equation::weak(f1.clone(), f2.clone());
        let conclusion =
            Equation::weak(Term::comp(g.clone(), f1.clone()), Term::comp(g.clone(), f2.clone()));
        let p = env.decide(&premise)?;
        let c = env.decide(&conclusion)?;
        if p.holds() {
            if let crate::st::StVerdict::Fails(cex) = c {
                return Ok(Witness {
                    variant: "w-repl-unrestricted".to_string(),
                    description: "w-repl without the purity condition is unsound for states"
                        .to_string(),
                    bindings: vec![
                        ("f1".to_string(), f1.to_string()),
                        ("f2".to_string(), f2.to_string()),
                        ("g".to_string(), g.to_string()),
                    ],
                    kind: WitnessKind::PremiseConclusion {
                        premises: vec![(premise.to_string(), true)],
                        conclusion: (conclusion.to_string(), false),
                        counterexample: format!(
                            "input ({}, {}): lhs value {}, rhs value {}",
                            cex.input.0,
                            cex.input.1.display(&env),
                            cex.lhs.0,
                            cex.rhs.0
                        ),
                    },
                });
            }
        }
    }
    Err(WitnessError::NoWitnessFound(
        "needs a location with at least two values".to_string(),
    ))
}
