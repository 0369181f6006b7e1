//! Elaboration of programmer-level constructions into core terms.
//!
//! `throw`, `try/catch` (with handler lists and catch-all), conditionals
//! and sequential pairs are definable from the core grammar; elaboration
//! is purely syntactic and the results carry the smallest decorations that
//! typecheck. In particular every elaborated `try/catch` is a propagator:
//! the `(.)` composition shields the catching stage from exceptions raised
//! before the block runs.

use crate::calculus::{check_formation, infer_decoration, typecheck};
use crate::error::ElabError;
use crate::term::Term;
use crate::theory::Theory;
use crate::types::{Decoration, PairKind, Pos, TypeExpr};

/// One clause of a `try/catch`: either a named handler or a catch-all.
/// Clause order is significant; clauses after a catch-all are dead.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CatchClause {
    /// `T => g` with `g : V_T -> B` of decoration at most 1.
    Named { name: String, body: Term },
    /// `all => g` with `g : 1 -> B` of decoration at most 1.
    All { body: Term },
}

/// A `try(body) catch(...)` specification before elaboration.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TryCatchSpec {
    pub body: Term,
    pub clauses: Vec<CatchClause>,
}

/// `throw[B, T] = initial[B] . tag[T] : V_T -> B`, a propagator that boxes
/// its argument as a `T`-exception coerced into `B`.
pub fn elaborate_throw(target: &TypeExpr, name: &str, theory: &Theory) -> Result<Term, ElabError> {
    if theory.effect(name).is_none() {
        return Err(ElabError::UndeclaredException { name: name.to_string() });
    }
    Ok(Term::comp(Term::Initial(target.clone()), Term::Tag(name.to_string())))
}

/// Builds the catching stage `0 -> B` for a clause list:
/// the last named handler contributes `copair(g | initial[B]) . untag[T]`,
/// earlier ones `lcopair(g | rest) . untag[T]`, and a catch-all
/// contributes `g . untagall`, discarding any remaining clauses.
pub fn elaborate_catch_core(
    clauses: &[CatchClause],
    target: &TypeExpr,
    theory: &Theory,
) -> Result<Term, ElabError> {
    let (head, rest) = clauses.split_first().ok_or(ElabError::EmptyHandlerList)?;
    match head {
        CatchClause::All { body } => {
            check_handler(body, &TypeExpr::Unit, target, "all", theory)?;
            Ok(Term::comp(body.clone(), Term::UntagAll))
        }
        CatchClause::Named { name, body } => {
            if theory.effect(name).is_none() {
                return Err(ElabError::UndeclaredException { name: name.clone() });
            }
            check_handler(body, &TypeExpr::effect_val(name), target, name, theory)?;
            let stage = if rest.is_empty() {
                Term::copair(
                    PairKind::Symmetric,
                    body.clone(),
                    Term::Initial(target.clone()),
                )
            } else {
                Term::copair(
                    PairKind::Left,
                    body.clone(),
                    elaborate_catch_core(rest, target, theory)?,
                )
            };
            Ok(Term::comp(stage, Term::Untag(name.clone())))
        }
    }
}

fn check_handler(
    body: &Term,
    expected_source: &TypeExpr,
    target: &TypeExpr,
    name: &str,
    theory: &Theory,
) -> Result<(), ElabError> {
    let (src, tgt) = typecheck(body, theory)?;
    if &src != expected_source {
        return Err(ElabError::HandlerSourceMismatch {
            name: name.to_string(),
            expected: expected_source.clone(),
            found: src,
        });
    }
    if &tgt != target {
        return Err(ElabError::HandlerTargetMismatch { expected: target.clone(), found: tgt });
    }
    let d = infer_decoration(body, theory)?;
    if d > Decoration::D1 {
        return Err(ElabError::Precondition {
            detail: format!("handler for `{name}` must be a propagator, has decoration {d}"),
        });
    }
    Ok(())
}

/// `try(f) catch(...) = lcopair(id[B] | catch-stage) (.) f : A -> B`, a
/// public propagator.
pub fn elaborate_try_catch(spec: &TryCatchSpec, theory: &Theory) -> Result<Term, ElabError> {
    let (_, target) = typecheck(&spec.body, theory)?;
    let d = infer_decoration(&spec.body, theory)?;
    if d > Decoration::D1 {
        return Err(ElabError::Precondition {
            detail: format!("try body must be a propagator, has decoration {d}"),
        });
    }
    let catcher = elaborate_catch_core(&spec.clauses, &target, theory)?;
    Ok(Term::prop_comp(
        Term::copair(PairKind::Left, Term::Id(target), catcher),
        spec.body.clone(),
    ))
}

/// `if(b, f, g) = copair(f | g) . b` with `b : A -> 1 + 1` and
/// `f, g : 1 -> B` within the profile's symmetric-copair bounds.
pub fn elaborate_conditional(
    b: &Term,
    f: &Term,
    g: &Term,
    theory: &Theory,
) -> Result<Term, ElabError> {
    let (_, bt) = typecheck(b, theory)?;
    let expected = TypeExpr::sum(TypeExpr::Unit, TypeExpr::Unit);
    if bt != expected {
        return Err(ElabError::Precondition {
            detail: format!("condition must target 1 + 1, targets {bt}"),
        });
    }
    let term = Term::comp(Term::copair(PairKind::Symmetric, f.clone(), g.clone()), b.clone());
    typecheck(&term, theory)?;
    let violations = check_formation(&term, theory.profile, theory)?;
    if let Some(v) = violations.into_iter().next() {
        return Err(ElabError::Formation(v));
    }
    Ok(term)
}

/// The sequential pair `lpair(pr1, a2 . pr2) . rpair(a1, id[A])`, fixing
/// "a1 evaluated before a2" for `a1 : A -> A1` and `a2 : A -> A2`.
pub fn elaborate_seq_pair(a1: &Term, a2: &Term, theory: &Theory) -> Result<Term, ElabError> {
    let (sa1, t1) = typecheck(a1, theory)?;
    let (sa2, _) = typecheck(a2, theory)?;
    if sa1 != sa2 {
        return Err(ElabError::Precondition {
            detail: format!("sequential pair components must share a source: {sa1} vs {sa2}"),
        });
    }
    let term = Term::comp(
        Term::pair(
            PairKind::Left,
            Term::Proj(Pos::First, t1.clone(), sa1.clone()),
            Term::comp(a2.clone(), Term::Proj(Pos::Second, t1, sa1.clone())),
        ),
        Term::pair(PairKind::Right, a1.clone(), Term::Id(sa1)),
    );
    typecheck(&term, theory)?;
    let violations = check_formation(&term, theory.profile, theory)?;
    if let Some(v) = violations.into_iter().next() {
        return Err(ElabError::Formation(v));
    }
    Ok(term)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{ExcRowOut, OpDecl, OpRows, Theory};
    use crate::types::Decoration::*;
    use crate::value::Value;

    fn demo() -> Theory {
        let mut th = Theory::exceptions_for_test("demo");
        th.base_types.push(("Bool".into(), vec!["tt".into(), "ff".into()]));
        th.effects.push(("T".into(), vec!["a".into(), "b".into()]));
        th.effects.push(("R".into(), vec!["c".into()]));
        th.ops.push(OpDecl {
            name: "f".into(),
            source: TypeExpr::base("Bool"),
            target: TypeExpr::base("Bool"),
            deco: D1,
            rows: OpRows::Exc1(vec![
                (Value::atom("tt"), ExcRowOut::Ok(Value::atom("ff"))),
                (Value::atom("ff"), ExcRowOut::Raise("T".into(), Value::atom("a"))),
            ]),
        });
        th.ops.push(OpDecl {
            name: "mend".into(),
            source: TypeExpr::effect_val("T"),
            target: TypeExpr::base("Bool"),
            deco: D1,
            rows: OpRows::Exc1(vec![
                (Value::atom("a"), ExcRowOut::Ok(Value::atom("tt"))),
                (Value::atom("b"), ExcRowOut::Ok(Value::atom("ff"))),
            ]),
        });
        th
    }

    #[test]
    fn throw_shape_and_decoration() {
        let th = demo();
        let b = TypeExpr::base("Bool");
        let t = elaborate_throw(&b, "T", &th).unwrap();
        assert_eq!(t, Term::comp(Term::Initial(b.clone()), Term::tag("T")));
        assert_eq!(infer_decoration(&t, &th).unwrap(), D1);
        assert_eq!(
            typecheck(&t, &th).unwrap(),
            (TypeExpr::effect_val("T"), b)
        );
        let u = elaborate_throw(&TypeExpr::Unit, "T", &th).unwrap();
        assert_eq!(
            typecheck(&u, &th).unwrap(),
            (TypeExpr::effect_val("T"), TypeExpr::Unit)
        );
        assert!(matches!(
            elaborate_throw(&TypeExpr::Unit, "Q", &th),
            Err(ElabError::UndeclaredException { .. })
        ));
    }

    #[test]
    fn single_handler_catch_shape() {
        let th = demo();
        let b = TypeExpr::base("Bool");
        let clauses = vec![CatchClause::Named { name: "T".into(), body: Term::constant("mend") }];
        let core = elaborate_catch_core(&clauses, &b, &th).unwrap();
        assert_eq!(
            core,
            Term::comp(
                Term::copair(
                    PairKind::Symmetric,
                    Term::constant("mend"),
                    Term::Initial(b.clone())
                ),
                Term::untag("T")
            )
        );
        assert_eq!(typecheck(&core, &th).unwrap(), (TypeExpr::Empty, b));
        assert_eq!(infer_decoration(&core, &th).unwrap(), D2);
    }

    #[test]
    fn multi_handler_recursion_and_catch_all() {
        let th = demo();
        let b = TypeExpr::base("Bool");
        let g2 = Term::comp(Term::constant("mend"), Term::Id(TypeExpr::effect_val("T")));
        let clauses = vec![
            CatchClause::Named { name: "T".into(), body: Term::constant("mend") },
            CatchClause::Named { name: "T".into(), body: g2.clone() },
        ];
        let core = elaborate_catch_core(&clauses, &b, &th).unwrap();
        let inner = Term::comp(
            Term::copair(PairKind::Symmetric, g2, Term::Initial(b.clone())),
            Term::untag("T"),
        );
        assert_eq!(
            core,
            Term::comp(
                Term::copair(PairKind::Left, Term::constant("mend"), inner),
                Term::untag("T")
            )
        );
        // a catch-all is the final stage, and clauses after it are dropped
        let all = vec![CatchClause::All { body: Term::Final(TypeExpr::Unit) }];
        let core_all = elaborate_catch_core(&all, &TypeExpr::Unit, &th).unwrap();
        assert_eq!(core_all, Term::comp(Term::Final(TypeExpr::Unit), Term::UntagAll));
        let with_dead = vec![
            CatchClause::All { body: Term::Final(TypeExpr::Unit) },
            CatchClause::Named { name: "T".into(), body: Term::Final(TypeExpr::effect_val("T")) },
        ];
        assert_eq!(elaborate_catch_core(&with_dead, &TypeExpr::Unit, &th).unwrap(), core_all);
        assert!(matches!(
            elaborate_catch_core(&[], &b, &th),
            Err(ElabError::EmptyHandlerList)
        ));
    }

    #[test]
    fn try_catch_is_a_propagator() {
        let th = demo();
        let spec = TryCatchSpec {
            body: Term::constant("f"),
            clauses: vec![CatchClause::Named { name: "T".into(), body: Term::constant("mend") }],
        };
        let t = elaborate_try_catch(&spec, &th).unwrap();
        assert_eq!(infer_decoration(&t, &th).unwrap(), D1);
        match &t {
            Term::PropComp(outer, inner) => {
                assert_eq!(**inner, Term::constant("f"));
                match &**outer {
                    Term::Copair(PairKind::Left, id, _) => {
                        assert_eq!(**id, Term::Id(TypeExpr::base("Bool")));
                    }
                    other => panic!("expected a left copair, got {other}"),
                }
            }
            other => panic!("expected a propagator composition, got {other}"),
        }
        assert!(check_formation(&t, th.profile, &th).unwrap().is_empty());
    }

    #[test]
    fn conditional_respects_profile_bounds() {
        let mut th = demo();
        th.ops.push(OpDecl {
            name: "pick".into(),
            source: TypeExpr::Unit,
            target: TypeExpr::effect_val("T"),
            deco: D0,
            rows: OpRows::Pure(vec![(Value::Unit, Value::atom("a"))]),
        });
        // b : V_T -> 1 + 1 via in1 . final
        let b = Term::comp(
            Term::Copr(Pos::First, TypeExpr::Unit, TypeExpr::Unit),
            Term::Final(TypeExpr::effect_val("T")),
        );
        let pick = Term::constant("pick");
        // two branches of decoration at most 1 are fine under EXC_PLUS
        let cond = elaborate_conditional(&b, &pick, &pick, &th).unwrap();
        assert_eq!(
            typecheck(&cond, &th).unwrap(),
            (TypeExpr::effect_val("T"), TypeExpr::effect_val("T"))
        );
        // a catcher branch violates the symmetric copair bound
        let catcher = Term::comp(
            Term::comp(Term::untag("T"), Term::tag("T")),
            pick.clone(),
        );
        assert_eq!(infer_decoration(&catcher, &th).unwrap(), D2);
        match elaborate_conditional(&b, &catcher, &pick, &th) {
            Err(ElabError::Formation(v)) => assert_eq!(v.rule, "copair"),
            other => panic!("expected a formation violation, got {other:?}"),
        }
    }

    #[test]
    fn seq_pair_shape() {
        let th = demo();
        let a1 = Term::constant("f");
        let a2 = Term::constant("f");
        let t = elaborate_seq_pair(&a1, &a2, &th).unwrap();
        let b = TypeExpr::base("Bool");
        assert_eq!(
            typecheck(&t, &th).unwrap(),
            (b.clone(), TypeExpr::prod(b.clone(), b.clone()))
        );
        match &t {
            Term::Comp(outer, inner) => {
                assert!(matches!(**outer, Term::Pair(PairKind::Left, ..)));
                assert!(matches!(**inner, Term::Pair(PairKind::Right, ..)));
            }
            other => panic!("expected a composition, got {other}"),
        }
    }
}
