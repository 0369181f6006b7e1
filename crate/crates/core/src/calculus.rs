//! Typing, decoration inference, and formation checking.
//!
//! Decorations are inferred (minimal level) rather than annotated per
//! node; declared operations fix their own level. A copair whose second
//! leg is sourced at `0` is typed over the first leg's bare source,
//! realizing the coproduct `A = A + 0` without explicit isomorphism terms.

use crate::error::{TypeError, Violation};
use crate::profile::ProfileName;
use crate::term::{Term, TermPath};
use crate::theory::Theory;
use crate::types::{Decoration, Pos, TypeExpr};

/// Returns the unique `(source, target)` of `term` over `theory`.
pub fn typecheck(term: &Term, theory: &Theory) -> Result<(TypeExpr, TypeExpr), TypeError> {
    let mut path = Vec::new();
    tc(term, theory, &mut path)
}

fn tc(
    term: &Term,
    theory: &Theory,
    path: &mut TermPath,
) -> Result<(TypeExpr, TypeExpr), TypeError> {
    match term {
        Term::Id(t) => {
            type_declared(t, theory, path)?;
            Ok((t.clone(), t.clone()))
        }
        Term::Comp(outer, inner) | Term::PropComp(outer, inner) => {
            path.push(0);
            let (mid_expected, target) = tc(outer, theory, path)?;
            path.pop();
            path.push(1);
            let (source, mid_found) = tc(inner, theory, path)?;
            path.pop();
            if mid_found != mid_expected {
                return Err(TypeError::TypeMismatch {
                    expected: mid_expected,
                    found: mid_found,
                    path: path.clone(),
                });
            }
            Ok((source, target))
        }
        Term::Pair(_, first, second) => {
            path.push(0);
            let (a1, b1) = tc(first, theory, path)?;
            path.pop();
            path.push(1);
            let (a2, b2) = tc(second, theory, path)?;
            path.pop();
            if a1 != a2 {
                return Err(TypeError::TypeMismatch {
                    expected: a1,
                    found: a2,
                    path: path.clone(),
                });
            }
            Ok((a1, TypeExpr::prod(b1, b2)))
        }
        Term::Proj(pos, l, r) => {
            type_declared(l, theory, path)?;
            type_declared(r, theory, path)?;
            let target = match pos {
                Pos::First => l.clone(),
                Pos::Second => r.clone(),
            };
            Ok((TypeExpr::prod(l.clone(), r.clone()), target))
        }
        Term::Final(t) => {
            type_declared(t, theory, path)?;
            Ok((t.clone(), TypeExpr::Unit))
        }
        Term::Copair(_, first, second) => {
            path.push(0);
            let (a1, b1) = tc(first, theory, path)?;
            path.pop();
            path.push(1);
            let (a2, b2) = tc(second, theory, path)?;
            path.pop();
            if b1 != b2 {
                return Err(TypeError::TypeMismatch {
                    expected: b1,
                    found: b2,
                    path: path.clone(),
                });
            }
            // second leg sourced at 0: the copair is typed over the bare A1
            let source = if a2 == TypeExpr::Empty { a1 } else { TypeExpr::sum(a1, a2) };
            Ok((source, b1))
        }
        Term::Copr(pos, l, r) => {
            type_declared(l, theory, path)?;
            type_declared(r, theory, path)?;
            let source = match pos {
                Pos::First => l.clone(),
                Pos::Second => r.clone(),
            };
            Ok((source, TypeExpr::sum(l.clone(), r.clone())))
        }
        Term::Initial(t) => {
            type_declared(t, theory, path)?;
            Ok((TypeExpr::Empty, t.clone()))
        }
        Term::Tag(name) => {
            effect_declared(name, theory, path)?;
            Ok((TypeExpr::effect_val(name), TypeExpr::Empty))
        }
        Term::Untag(name) => {
            effect_declared(name, theory, path)?;
            Ok((TypeExpr::Empty, TypeExpr::effect_val(name)))
        }
        Term::UntagAll => Ok((TypeExpr::Empty, TypeExpr::Unit)),
        Term::Lookup(name) => {
            effect_declared(name, theory, path)?;
            Ok((TypeExpr::Unit, TypeExpr::effect_val(name)))
        }
        Term::Update(name) => {
            effect_declared(name, theory, path)?;
            Ok((TypeExpr::effect_val(name), TypeExpr::Unit))
        }
        Term::Const(name) => match theory.op(name) {
            Some(op) => Ok((op.source.clone(), op.target.clone())),
            None => Err(TypeError::UndeclaredName { name: name.clone(), path: path.clone() }),
        },
    }
}

fn type_declared(ty: &TypeExpr, theory: &Theory, path: &TermPath) -> Result<(), TypeError> {
    match ty {
        TypeExpr::Base(n) => {
            if theory.base_type(n).is_none() {
                return Err(TypeError::UndeclaredName { name: n.clone(), path: path.clone() });
            }
            Ok(())
        }
        TypeExpr::EffectVal(n) => {
            if theory.effect(n).is_none() {
                return Err(TypeError::UndeclaredName {
                    name: format!("V_{n}"),
                    path: path.clone(),
                });
            }
            Ok(())
        }
        TypeExpr::Unit | TypeExpr::Empty => Ok(()),
        TypeExpr::Prod(l, r) | TypeExpr::Sum(l, r) => {
            type_declared(l, theory, path)?;
            type_declared(r, theory, path)
        }
    }
}

fn effect_declared(name: &str, theory: &Theory, path: &TermPath) -> Result<(), TypeError> {
    if theory.effect(name).is_none() {
        return Err(TypeError::UndeclaredName { name: name.to_string(), path: path.clone() });
    }
    Ok(())
}

/// Minimal decoration of `term`: structural constants are 0, `tag`/`lookup`
/// are 1, `untag`/`update`/`untagall` are 2, declared operations carry
/// their declared level, compositions and (co)pairs take the maximum, and
/// `k (.) f` yields `max(d(f), min(d(k), 1))`.
pub fn infer_decoration(term: &Term, theory: &Theory) -> Result<Decoration, TypeError> {
    use Decoration::*;
    Ok(match term {
        Term::Id(_)
        | Term::Proj(..)
        | Term::Copr(..)
        | Term::Final(_)
        | Term::Initial(_) => D0,
        Term::Tag(_) | Term::Lookup(_) => D1,
        Term::Untag(_) | Term::Update(_) | Term::UntagAll => D2,
        Term::Const(name) => match theory.op(name) {
            Some(op) => op.deco,
            None => {
                return Err(TypeError::UndeclaredName { name: name.clone(), path: Vec::new() })
            }
        },
        Term::Comp(a, b) | Term::Pair(_, a, b) | Term::Copair(_, a, b) => {
            infer_decoration(a, theory)?.max(infer_decoration(b, theory)?)
        }
        Term::PropComp(outer, inner) => {
            let k = infer_decoration(outer, theory)?;
            let f = infer_decoration(inner, theory)?;
            f.max(k.min(D1))
        }
    })
}

/// Checks every pair/copair/propagator-composition node and every effect
/// operation against the profile's formation table. Returns one violation
/// per offending node, in depth-first preorder.
pub fn check_formation(
    term: &Term,
    profile: ProfileName,
    theory: &Theory,
) -> Result<Vec<Violation>, TypeError> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    walk(term, profile, theory, &mut path, &mut out)?;
    Ok(out)
}

/// Convenience: no violations.
pub fn formation_valid(
    term: &Term,
    profile: ProfileName,
    theory: &Theory,
) -> Result<bool, TypeError> {
    Ok(check_formation(term, profile, theory)?.is_empty())
}

fn walk(
    term: &Term,
    profile: ProfileName,
    theory: &Theory,
    path: &mut TermPath,
    out: &mut Vec<Violation>,
) -> Result<(), TypeError> {
    match term {
        Term::Pair(kind, first, second) => {
            let d1 = infer_decoration(first, theory)?;
            let d2 = infer_decoration(second, theory)?;
            let rule = ProfileName::pair_rule_name(*kind);
            match profile.pair_bounds(*kind) {
                None => out.push(Violation {
                    rule: rule.to_string(),
                    path: path.clone(),
                    detail: format!("{kind} pair is not available in {profile}"),
                }),
                Some((b1, b2)) => {
                    if d1 > b1 || d2 > b2 {
                        out.push(Violation {
                            rule: rule.to_string(),
                            path: path.clone(),
                            detail: format!(
                                "{rule} requires decorations at most ({b1}, {b2}), found ({d1}, {d2})"
                            ),
                        });
                    }
                }
            }
        }
        Term::Copair(kind, first, second) => {
            let d1 = infer_decoration(first, theory)?;
            let d2 = infer_decoration(second, theory)?;
            let rule = ProfileName::copair_rule_name(*kind);
            match profile.copair_bounds(*kind) {
                None => out.push(Violation {
                    rule: rule.to_string(),
                    path: path.clone(),
                    detail: format!("{kind} copair is not available in {profile}"),
                }),
                Some((b1, b2)) => {
                    if d1 > b1 || d2 > b2 {
                        out.push(Violation {
                            rule: rule.to_string(),
                            path: path.clone(),
                            detail: format!(
                                "{rule} requires decorations at most ({b1}, {b2}), found ({d1}, {d2})"
                            ),
                        });
                    }
                }
            }
        }
        Term::PropComp(outer, inner) => {
            match profile.prop_comp_inner_bound() {
                None => out.push(Violation {
                    rule: "prop-comp".to_string(),
                    path: path.clone(),
                    detail: format!("propagator composition is not available in {profile}"),
                }),
                Some(bound) => {
                    let d = infer_decoration(inner, theory)?;
                    if d > bound {
                        out.push(Violation {
                            rule: "prop-comp".to_string(),
                            path: path.clone(),
                            detail: format!(
                                "prop-comp requires an inner factor of decoration at most {bound}, found {d}"
                            ),
                        });
                    }
                }
            }
            let _ = outer;
        }
        Term::Tag(_) | Term::Untag(_) | Term::UntagAll => {
            if !profile.has_exception_ops() {
                out.push(Violation {
                    rule: "exc-grammar".to_string(),
                    path: path.clone(),
                    detail: format!("exception operations are not part of {profile}"),
                });
            }
        }
        Term::Lookup(_) | Term::Update(_) => {
            if !profile.has_state_ops() {
                out.push(Violation {
                    rule: "st-grammar".to_string(),
                    path: path.clone(),
                    detail: format!("state operations are not part of {profile}"),
                });
            }
        }
        Term::Const(name) if profile == ProfileName::Eq => {
            let d = infer_decoration(term, theory)?;
            if d > Decoration::D0 {
                out.push(Violation {
                    rule: "eq-pure".to_string(),
                    path: path.clone(),
                    detail: format!("EQ permits decoration 0 only, `{name}` has {d}"),
                });
            }
        }
        _ => {}
    }
    for (i, child) in term.children().into_iter().enumerate() {
        path.push(i);
        walk(child, profile, theory, path, out)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Term;
    use crate::theory::{EffectSide, OpDecl, OpRows, Theory};
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
            rows: OpRows::Exc1(vec![]),
        });
        th.ops.push(OpDecl {
            name: "v".into(),
            source: TypeExpr::effect_val("T"),
            target: TypeExpr::effect_val("T"),
            deco: D0,
            rows: OpRows::Pure(vec![
                (Value::atom("a"), Value::atom("b")),
                (Value::atom("b"), Value::atom("a")),
            ]),
        });
        th
    }

    #[test]
    fn typing_of_core_operations() {
        let th = demo();
        let bool_t = TypeExpr::base("Bool");
        assert_eq!(
            typecheck(&Term::Id(bool_t.clone()), &th).unwrap(),
            (bool_t.clone(), bool_t)
        );
        assert_eq!(
            typecheck(&Term::tag("T"), &th).unwrap(),
            (TypeExpr::effect_val("T"), TypeExpr::Empty)
        );
        let round = Term::comp(Term::untag("T"), Term::tag("T"));
        assert_eq!(
            typecheck(&round, &th).unwrap(),
            (TypeExpr::effect_val("T"), TypeExpr::effect_val("T"))
        );
    }

    #[test]
    fn typing_rejects_mismatch_with_path() {
        let th = demo();
        let bad = Term::comp(Term::tag("T"), Term::constant("f"));
        match typecheck(&bad, &th) {
            Err(TypeError::TypeMismatch { expected, found, .. }) => {
                assert_eq!(expected, TypeExpr::effect_val("T"));
                assert_eq!(found, TypeExpr::base("Bool"));
            }
            other => panic!("expected mismatch, got {other:?}"),
        }
        let undecl = Term::tag("Q");
        assert!(matches!(
            typecheck(&undecl, &th),
            Err(TypeError::UndeclaredName { .. })
        ));
    }

    #[test]
    fn bare_copair_typing() {
        let th = demo();
        // copair(v | initial[V_T]) : V_T -> V_T, realizing A = A + 0
        let t = Term::copair(
            crate::types::PairKind::Symmetric,
            Term::constant("v"),
            Term::Initial(TypeExpr::effect_val("T")),
        );
        assert_eq!(
            typecheck(&t, &th).unwrap(),
            (TypeExpr::effect_val("T"), TypeExpr::effect_val("T"))
        );
    }

    #[test]
    fn decoration_inference() {
        let th = demo();
        assert_eq!(infer_decoration(&Term::tag("T"), &th).unwrap(), D1);
        let round = Term::comp(Term::untag("T"), Term::tag("T"));
        assert_eq!(infer_decoration(&round, &th).unwrap(), D2);
        // a catcher shielded behind (.) composed over a propagator is a propagator
        let handler = Term::copair(
            crate::types::PairKind::Left,
            Term::Id(TypeExpr::base("Bool")),
            Term::comp(
                Term::copair(
                    crate::types::PairKind::Symmetric,
                    Term::constant("f"),
                    Term::Initial(TypeExpr::base("Bool")),
                ),
                Term::untag("T"),
            ),
        );
        let t = Term::prop_comp(handler, Term::constant("f"));
        assert_eq!(infer_decoration(&t, &th).unwrap(), D1);
    }

    #[test]
    fn formation_examples() {
        let th = demo();
        // copair of two catchers violates the symmetric bound under EXC
        let bad = Term::copair(
            crate::types::PairKind::Symmetric,
            Term::untag("T"),
            Term::untag("R"),
        );
        let vs = check_formation(&bad, ProfileName::Exc, &th).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].rule, "copair");
        assert!(vs[0].detail.contains("(1, 1)"));
        assert!(vs[0].detail.contains("(2, 2)"));

        // ...but the same copair of modifiers is fine under ST_PLUS
        let mut st = Theory::states_for_test("st");
        st.effects.push(("X".into(), vec!["0".into(), "1".into()]));
        let good = Term::copair(
            crate::types::PairKind::Symmetric,
            Term::comp(Term::update("X"), Term::lookup("X")),
            Term::comp(Term::update("X"), Term::lookup("X")),
        );
        assert!(check_formation(&good, ProfileName::StPlus, &st).unwrap().is_empty());

        // pure pair under MON
        let b = TypeExpr::base("Bool");
        let p = Term::pair(
            crate::types::PairKind::Symmetric,
            Term::Id(b.clone()),
            Term::Id(b),
        );
        assert!(check_formation(&p, ProfileName::Mon, &th).unwrap().is_empty());
    }

    #[test]
    fn eq_profile_is_pure_only() {
        let th = demo();
        let vs = check_formation(&Term::constant("f"), ProfileName::Eq, &th).unwrap();
        assert_eq!(vs.len(), 1);
        assert_eq!(vs[0].rule, "eq-pure");
        let vs = check_formation(&Term::constant("v"), ProfileName::Eq, &th).unwrap();
        assert!(vs.is_empty());
        let vs = check_formation(&Term::tag("T"), ProfileName::Eq, &th).unwrap();
        assert_eq!(vs[0].rule, "exc-grammar");
    }

    #[test]
    fn wrong_side_operations_are_flagged() {
        let th = demo();
        let vs = check_formation(&Term::Lookup("T".into()), ProfileName::ExcPlus, &th).unwrap();
        assert_eq!(vs[0].rule, "st-grammar");
        let mut st = Theory::new("s", EffectSide::States, ProfileName::St);
        st.effects.push(("X".into(), vec!["0".into()]));
        let vs = check_formation(&Term::Tag("X".into()), ProfileName::St, &st).unwrap();
        assert_eq!(vs[0].rule, "exc-grammar");
    }
}
