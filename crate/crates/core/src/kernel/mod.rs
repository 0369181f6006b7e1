//! The proof kernel: judgments, derivation trees, and node-by-node
//! checking against the profile rule catalogs.
//!
//! Derivations are explicit trees supplied by the user; the kernel checks,
//! it does not search. Equation premises are supplied as child
//! derivations, term-judgment premises are discharged automatically from
//! typing and decoration inference, and instantiations are recovered by
//! first-order matching (explicit bindings may seed the match).

pub mod pattern;
pub mod rules;

use std::collections::BTreeMap;
use std::fmt;

use crate::calculus::{check_formation, infer_decoration, typecheck};
use crate::profile::ProfileName;
use crate::term::{Equation, Strength, Term};
use crate::theory::Theory;
use crate::types::{Decoration, TypeExpr};

use pattern::{match_term, Bindings, DecoPat, JudgPat};
use rules::{rule_catalog, MetaKind, PremiseSpec, RuleDescriptor, SideCond};

/// A checkable judgment: a decorated term judgment or an equation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Judgment {
    Term { term: Term, source: TypeExpr, target: TypeExpr, deco: Decoration },
    Eq(Equation),
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Judgment::Term { term, source, target, deco } => {
                write!(f, "(term {term} : {source} -> {target} deco {deco})")
            }
            Judgment::Eq(eq) => {
                let strength = match eq.strength {
                    Strength::Strong => "strong",
                    Strength::Weak => "weak",
                    Strength::Order => "order",
                };
                write!(f, "(concl {strength} {} {})", eq.lhs, eq.rhs)
            }
        }
    }
}

/// An explicit instantiation binding attached to a derivation node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BindingValue {
    Term(Term),
    Type(TypeExpr),
    Name(String),
    Deco(Decoration),
}

/// A derivation tree: a rule name, optional explicit bindings, the stated
/// conclusion, and premise subtrees in rule order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub rule: String,
    pub bindings: Vec<(String, BindingValue)>,
    pub conclusion: Judgment,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    pub fn at_path_mut(&mut self, path: &[usize]) -> Option<&mut Derivation> {
        let mut cur = self;
        for &i in path {
            cur = cur.premises.get_mut(i)?;
        }
        Some(cur)
    }
}

/// Result of checking a derivation: accepted, or rejected at the first
/// failing node in depth-first preorder.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Accepted,
    Rejected { path: Vec<usize>, reason: String },
}

impl Verdict {
    pub fn accepted(&self) -> bool {
        matches!(self, Verdict::Accepted)
    }
}

pub fn node_path_display(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("root.{}", parts.join("."))
    }
}

/// Checks a derivation against the theory's profile catalog and declared
/// axioms.
pub fn check_derivation(d: &Derivation, theory: &Theory) -> Verdict {
    let catalog: BTreeMap<&str, RuleDescriptor> =
        rule_catalog(theory.profile).into_iter().map(|r| (r.name, r)).collect();
    let mut path = Vec::new();
    match check_node(d, theory, &catalog, &mut path) {
        Ok(()) => Verdict::Accepted,
        Err((path, reason)) => Verdict::Rejected { path, reason },
    }
}

type NodeError = (Vec<usize>, String);

fn check_node(
    d: &Derivation,
    theory: &Theory,
    catalog: &BTreeMap<&str, RuleDescriptor>,
    path: &mut Vec<usize>,
) -> Result<(), NodeError> {
    let fail = |path: &[usize], reason: String| -> NodeError { (path.to_vec(), reason) };
    validate_judgment(&d.conclusion, theory).map_err(|e| fail(path, e))?;
    match catalog.get(d.rule.as_str()) {
        Some(rule) => {
            apply_rule(rule, d, theory).map_err(|e| fail(path, e))?;
        }
        None => match theory.axiom(&d.rule) {
            Some(ax) => {
                if !d.premises.is_empty() {
                    return Err(fail(path, format!("axiom `{}` takes no premises", d.rule)));
                }
                if d.conclusion != Judgment::Eq(ax.eq.clone()) {
                    return Err(fail(
                        path,
                        format!("conclusion does not match axiom `{}`: expected {}", d.rule, ax.eq),
                    ));
                }
            }
            None => {
                return Err(fail(
                    path,
                    format!("unknown rule `{}` in profile {}", d.rule, theory.profile),
                ))
            }
        },
    }
    for (i, premise) in d.premises.iter().enumerate() {
        path.push(i);
        check_node(premise, theory, catalog, path)?;
        path.pop();
    }
    Ok(())
}

/// Validates the embedded term/equation: it must typecheck, its stated
/// types and decoration must be consistent, and it must be formation-valid
/// in the active profile.
pub fn validate_judgment(j: &Judgment, theory: &Theory) -> Result<(), String> {
    let profile = theory.profile;
    let check_term = |term: &Term| -> Result<(TypeExpr, TypeExpr, Decoration), String> {
        let (s, t) = typecheck(term, theory).map_err(|e| e.to_string())?;
        let d = infer_decoration(term, theory).map_err(|e| e.to_string())?;
        let violations = check_formation(term, profile, theory).map_err(|e| e.to_string())?;
        if let Some(v) = violations.first() {
            return Err(format!("formation violation: {v}"));
        }
        Ok((s, t, d))
    };
    match j {
        Judgment::Term { term, source, target, deco } => {
            let (s, t, d) = check_term(term)?;
            if &s != source || &t != target {
                return Err(format!(
                    "stated type {source} -> {target} differs from inferred {s} -> {t}"
                ));
            }
            if d > *deco {
                return Err(format!("stated decoration {deco} is below the inferred {d}"));
            }
            if profile == ProfileName::Eq && *deco != Decoration::D0 {
                return Err("EQ permits decoration 0 only".to_string());
            }
            Ok(())
        }
        Judgment::Eq(eq) => {
            let (ls, lt, ld) = check_term(&eq.lhs)?;
            let (rs, rt, rd) = check_term(&eq.rhs)?;
            if ls != rs || lt != rt {
                return Err(format!(
                    "equation sides have different types: {ls} -> {lt} vs {rs} -> {rt}"
                ));
            }
            match eq.strength {
                Strength::Strong => Ok(()),
                Strength::Weak => {
                    if profile == ProfileName::Eq {
                        Err("weak equations are not part of EQ".to_string())
                    } else {
                        Ok(())
                    }
                }
                Strength::Order => {
                    if profile != ProfileName::ExcPlus {
                        return Err(format!(
                            "the partial-function order is not part of {profile}"
                        ));
                    }
                    if rd > Decoration::D0 {
                        return Err(format!(
                            "right side of `<<` must be pure, has decoration {rd}"
                        ));
                    }
                    if ld > Decoration::D1 {
                        return Err(format!(
                            "left side of `<<` must be a propagator, has decoration {ld}"
                        ));
                    }
                    Ok(())
                }
            }
        }
    }
}

/// Tries every conclusion alternative of the rule; the most advanced
/// failure is reported when none applies.
fn apply_rule(rule: &RuleDescriptor, d: &Derivation, theory: &Theory) -> Result<(), String> {
    let seed = seed_bindings(rule, d)?;
    let mut best: Option<(u8, String)> = None;
    for concl in &rule.conclusions {
        match try_alternative(rule, concl, d, theory, seed.clone()) {
            Ok(()) => return Ok(()),
            Err((rank, msg)) => {
                if best.as_ref().is_none_or(|(r, _)| rank > *r) {
                    best = Some((rank, msg));
                }
            }
        }
    }
    Err(best.map(|(_, m)| m).unwrap_or_else(|| "rule has no conclusions".to_string()))
}

fn seed_bindings(rule: &RuleDescriptor, d: &Derivation) -> Result<Bindings, String> {
    let mut b = Bindings::default();
    for (name, value) in &d.bindings {
        let decl = rule
            .meta(name)
            .ok_or_else(|| format!("rule `{}` has no metavariable `{name}`", rule.name))?;
        match (&decl.kind, value) {
            (MetaKind::Term { .. }, BindingValue::Term(t)) => {
                b.terms.insert(name.clone(), t.clone());
            }
            (MetaKind::Type, BindingValue::Type(t)) => {
                b.types.insert(name.clone(), t.clone());
            }
            (MetaKind::Name, BindingValue::Name(n)) => {
                b.names.insert(name.clone(), n.clone());
            }
            _ => {
                return Err(format!(
                    "binding for `{name}` does not match the metavariable kind"
                ))
            }
        }
    }
    Ok(b)
}

/// Failure ranks: 0 = conclusion shape mismatch, 1 = premise mismatch,
/// 2 = side-condition failure.
fn try_alternative(
    rule: &RuleDescriptor,
    concl: &JudgPat,
    d: &Derivation,
    theory: &Theory,
    mut b: Bindings,
) -> Result<(), (u8, String)> {
    match (concl, &d.conclusion) {
        (JudgPat::Term { term, deco }, Judgment::Term { term: t, deco: stated, .. }) => {
            if !match_term(term, t, &mut b) {
                return Err((0, format!("conclusion does not match schema {concl}")));
            }
            if let DecoPat::Exact(want) = deco {
                if stated != want {
                    return Err((
                        0,
                        format!("rule `{}` concludes decoration {want}, stated {stated}", rule.name),
                    ));
                }
            }
        }
        (JudgPat::Eq { strength, lhs, rhs }, Judgment::Eq(eq)) => {
            if *strength != eq.strength {
                return Err((
                    0,
                    format!("rule `{}` concludes a `{strength}` equation", rule.name),
                ));
            }
            if !match_term(lhs, &eq.lhs, &mut b) || !match_term(rhs, &eq.rhs, &mut b) {
                return Err((0, format!("conclusion does not match schema {concl}")));
            }
        }
        _ => return Err((0, "conclusion judgment kind does not match the rule".to_string())),
    }
    // expand premise families over the declared effect names
    let mut expected: Vec<JudgPat> = Vec::new();
    for p in &rule.premises {
        match p {
            PremiseSpec::Eq(pat) => expected.push(pat.clone()),
            PremiseSpec::ForEachEffect { binder, pat } => {
                for name in theory.effect_names() {
                    expected.push(pattern::subst_name_in_judg(pat, binder, name));
                }
            }
        }
    }
    if expected.len() != d.premises.len() {
        return Err((
            1,
            format!(
                "rule `{}` expects {} premises, {} given",
                rule.name,
                expected.len(),
                d.premises.len()
            ),
        ));
    }
    for (i, (pat, child)) in expected.iter().zip(&d.premises).enumerate() {
        let matched = match (pat, &child.conclusion) {
            (JudgPat::Eq { strength, lhs, rhs }, Judgment::Eq(eq)) => {
                *strength == eq.strength
                    && match_term(lhs, &eq.lhs, &mut b)
                    && match_term(rhs, &eq.rhs, &mut b)
            }
            _ => false,
        };
        if !matched {
            return Err((
                1,
                format!("premise {} does not match schema {pat}", i + 1),
            ));
        }
    }
    // decoration bounds on the bound term metas
    for m in &rule.metas {
        if let MetaKind::Term { max_deco, .. } = &m.kind {
            if *max_deco < Decoration::D2 {
                let term = b.terms.get(m.name).ok_or((
                    2,
                    format!("cannot determine the instantiation of `{}`", m.name),
                ))?;
                let d = infer_decoration(term, theory).map_err(|e| (2, e.to_string()))?;
                if d > *max_deco {
                    return Err((
                        2,
                        format!(
                            "rule `{}` requires `{}` of decoration at most {max_deco}, found {d}",
                            rule.name, m.name
                        ),
                    ));
                }
            }
        }
    }
    for cond in &rule.side {
        match cond {
            SideCond::NamesDistinct(x, y) => {
                let nx = b.names.get(*x).ok_or((2, format!("name `{x}` not inferred")))?;
                let ny = b.names.get(*y).ok_or((2, format!("name `{y}` not inferred")))?;
                if nx == ny {
                    return Err((
                        2,
                        format!("rule `{}` requires distinct names, both are `{nx}`", rule.name),
                    ));
                }
            }
            SideCond::SourceIsEmpty(m) => {
                let term = b.terms.get(*m).ok_or((2, format!("`{m}` not inferred")))?;
                let (s, _) = typecheck(term, theory).map_err(|e| (2, e.to_string()))?;
                if s != TypeExpr::Empty {
                    return Err((2, format!("`{m}` must be sourced at 0, has source {s}")));
                }
            }
            SideCond::TargetIsUnit(m) => {
                let term = b.terms.get(*m).ok_or((2, format!("`{m}` not inferred")))?;
                let (_, t) = typecheck(term, theory).map_err(|e| (2, e.to_string()))?;
                if t != TypeExpr::Unit {
                    return Err((2, format!("`{m}` must target 1, has target {t}")));
                }
            }
        }
    }
    Ok(())
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
            name: "flip".into(),
            source: TypeExpr::effect_val("T"),
            target: TypeExpr::effect_val("T"),
            deco: D0,
            rows: OpRows::Pure(vec![
                (Value::atom("a"), Value::atom("b")),
                (Value::atom("b"), Value::atom("a")),
            ]),
        });
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
        th
    }

    fn leaf(rule: &str, concl: Judgment) -> Derivation {
        Derivation { rule: rule.into(), bindings: vec![], conclusion: concl, premises: vec![] }
    }

    fn weak(lhs: Term, rhs: Term) -> Judgment {
        Judgment::Eq(Equation::weak(lhs, rhs))
    }

    fn strong(lhs: Term, rhs: Term) -> Judgment {
        Judgment::Eq(Equation::strong(lhs, rhs))
    }

    #[test]
    fn axiom_leaf_is_accepted() {
        let th = demo();
        let round = Term::comp(Term::untag("T"), Term::tag("T"));
        let d = leaf("ax-untag-tag", weak(round, Term::Id(TypeExpr::effect_val("T"))));
        assert!(check_derivation(&d, &th).accepted());
    }

    #[test]
    fn refl_then_sym() {
        let th = demo();
        let id = Term::Id(TypeExpr::base("Bool"));
        let refl = leaf("s-refl", strong(id.clone(), id.clone()));
        let d = Derivation {
            rule: "s-sym".into(),
            bindings: vec![],
            conclusion: strong(id.clone(), id),
            premises: vec![refl],
        };
        assert!(check_derivation(&d, &th).accepted());
    }

    #[test]
    fn w_subs_requires_a_pure_substituted_term() {
        let th = demo();
        let round = Term::comp(Term::untag("T"), Term::tag("T"));
        let idt = Term::Id(TypeExpr::effect_val("T"));
        let ax = leaf("ax-untag-tag", weak(round.clone(), idt.clone()));
        // substituting the pure flip is fine
        let ok = Derivation {
            rule: "w-subs".into(),
            bindings: vec![],
            conclusion: weak(
                Term::comp(round.clone(), Term::constant("flip")),
                Term::comp(idt.clone(), Term::constant("flip")),
            ),
            premises: vec![ax.clone()],
        };
        assert!(check_derivation(&ok, &th).accepted());
        // substituting the propagator f is not: stays within Bool via a
        // different axiom instance
        let axb = leaf(
            "w-refl",
            weak(Term::Id(TypeExpr::base("Bool")), Term::Id(TypeExpr::base("Bool"))),
        );
        let bad = Derivation {
            rule: "w-subs".into(),
            bindings: vec![],
            conclusion: weak(
                Term::comp(Term::Id(TypeExpr::base("Bool")), Term::constant("f")),
                Term::comp(Term::Id(TypeExpr::base("Bool")), Term::constant("f")),
            ),
            premises: vec![axb],
        };
        match check_derivation(&bad, &th) {
            Verdict::Rejected { path, reason } => {
                assert!(path.is_empty());
                assert!(reason.contains("decoration at most 0"), "reason: {reason}");
            }
            Verdict::Accepted => panic!("impure substitution must be rejected"),
        }
    }

    #[test]
    fn weak_strong_conversion_guard() {
        let th = demo();
        let round = Term::comp(Term::untag("T"), Term::tag("T"));
        let idt = Term::Id(TypeExpr::effect_val("T"));
        let ax = leaf("ax-untag-tag", weak(round.clone(), idt.clone()));
        let d = Derivation {
            rule: "weak-strong".into(),
            bindings: vec![],
            conclusion: strong(round, idt),
            premises: vec![ax],
        };
        match check_derivation(&d, &th) {
            Verdict::Rejected { reason, .. } => {
                assert!(reason.contains("decoration at most 1"), "reason: {reason}");
            }
            Verdict::Accepted => panic!("conversion at decoration 2 must be rejected"),
        }
    }

    #[test]
    fn premise_mismatch_paths() {
        let th = demo();
        let id = Term::Id(TypeExpr::base("Bool"));
        let idt = Term::Id(TypeExpr::effect_val("T"));
        let refl = leaf("s-refl", strong(idt.clone(), idt.clone()));
        // s-sym whose premise concludes a different equation
        let d = Derivation {
            rule: "s-sym".into(),
            bindings: vec![],
            conclusion: strong(id.clone(), id.clone()),
            premises: vec![refl.clone()],
        };
        match check_derivation(&d, &th) {
            Verdict::Rejected { path, reason } => {
                assert!(path.is_empty());
                assert!(reason.contains("premise 1"), "reason: {reason}");
            }
            Verdict::Accepted => panic!("mismatched premise accepted"),
        }
        // failure inside a premise is attributed to the premise node: the
        // child's judgment is well-typed but its own refl application is not
        let bad_leaf = leaf("s-refl", strong(Term::constant("flip"), idt.clone()));
        let d = Derivation {
            rule: "s-sym".into(),
            bindings: vec![],
            conclusion: strong(idt, Term::constant("flip")),
            premises: vec![bad_leaf],
        };
        match check_derivation(&d, &th) {
            Verdict::Rejected { path, .. } => assert_eq!(path, vec![0]),
            Verdict::Accepted => panic!("broken premise subtree accepted"),
        }
    }

    #[test]
    fn exc_coprod_u_premise_family() {
        let th = demo();
        let u = Term::untag("T");
        let mk_prem = |name: &str| {
            let u = Term::untag("T");
            leaf(
                "w-refl",
                weak(
                    Term::comp(u.clone(), Term::tag(name)),
                    Term::comp(u, Term::tag(name)),
                ),
            )
        };
        let d = Derivation {
            rule: "exc-coprod-u".into(),
            bindings: vec![],
            conclusion: strong(u.clone(), u.clone()),
            premises: vec![mk_prem("T"), mk_prem("R")],
        };
        assert!(check_derivation(&d, &th).accepted());
        // one premise per declared name is required
        let d = Derivation {
            rule: "exc-coprod-u".into(),
            bindings: vec![],
            conclusion: strong(u.clone(), u),
            premises: vec![mk_prem("T")],
        };
        match check_derivation(&d, &th) {
            Verdict::Rejected { reason, .. } => {
                assert!(reason.contains("expects 2 premises"), "reason: {reason}");
            }
            Verdict::Accepted => panic!("missing premise accepted"),
        }
    }

    #[test]
    fn unknown_rules_and_bad_judgments() {
        let th = demo();
        let id = Term::Id(TypeExpr::base("Bool"));
        let d = leaf("no-such-rule", strong(id.clone(), id.clone()));
        match check_derivation(&d, &th) {
            Verdict::Rejected { reason, .. } => assert!(reason.contains("unknown rule")),
            Verdict::Accepted => panic!(),
        }
        // order judgments need EXC_PLUS and a pure right side
        let d = leaf(
            "w-refl",
            Judgment::Eq(Equation::order(Term::constant("f"), Term::constant("f"))),
        );
        match check_derivation(&d, &th) {
            Verdict::Rejected { reason, .. } => {
                assert!(reason.contains("must be pure"), "reason: {reason}");
            }
            Verdict::Accepted => panic!(),
        }
    }

    #[test]
    fn user_axiom_leaves() {
        let mut th = demo();
        let eq = Equation::strong(
            Term::comp(Term::constant("flip"), Term::constant("flip")),
            Term::Id(TypeExpr::effect_val("T")),
        );
        th.axioms.push(crate::theory::AxiomDecl { name: "flip-inv".into(), eq: eq.clone() });
        let d = leaf("flip-inv", Judgment::Eq(eq.clone()));
        assert!(check_derivation(&d, &th).accepted());
        let other = leaf(
            "flip-inv",
            strong(Term::Id(TypeExpr::effect_val("T")), Term::Id(TypeExpr::effect_val("T"))),
        );
        match check_derivation(&other, &th) {
            Verdict::Rejected { reason, .. } => {
                assert!(reason.contains("does not match axiom"), "reason: {reason}");
            }
            Verdict::Accepted => panic!("axiom leaf with the wrong equation accepted"),
        }
    }

    #[test]
    fn monotonicity_across_profile_extensions() {
        // a MON-checkable derivation stays accepted under EXC and EXC_PLUS
        let mut th = demo();
        th.profile = ProfileName::Mon;
        let flip = Term::constant("flip");
        let d = Derivation {
            rule: "id-target".into(),
            bindings: vec![],
            conclusion: strong(
                Term::comp(Term::Id(TypeExpr::effect_val("T")), flip.clone()),
                flip,
            ),
            premises: vec![],
        };
        assert!(check_derivation(&d, &th).accepted());
        th.profile = ProfileName::Exc;
        assert!(check_derivation(&d, &th).accepted());
        th.profile = ProfileName::ExcPlus;
        assert!(check_derivation(&d, &th).accepted());
    }
}
