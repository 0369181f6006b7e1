//! Semantic validation of the inference rules against the finite models.
//!
//! For every rule, random well-formed instantiations of the premise
//! schemas are generated over the theory signature; instances whose
//! premises hold in the model have their conclusions checked in the model.
//! Sampling is deterministic under a fixed seed. Instantiations are
//! biased toward premise-satisfying shapes (identity wraps, canonical
//! pairings) so uniqueness rules are exercised with true premises.

pub mod generate;
pub mod oracle;
pub mod witness;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::calculus::{check_formation, infer_decoration, typecheck};
use crate::error::ModelError;
use crate::exc::{ExcEnv, ExcVerdict};
use crate::kernel::pattern::{instantiate_term, instantiate_type, subst_name_in_judg, Bindings, DecoPat, JudgPat};
use crate::kernel::rules::{find_rule, MetaKind, PremiseSpec, RuleDescriptor, SideCond};
use crate::profile::ProfileName;
use crate::st::{StEnv, StVerdict};
use crate::term::{Equation, Term};
use crate::theory::{EffectSide, Theory};
use crate::types::{Decoration, PairKind, Pos, TypeExpr};
use crate::{DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES};

use generate::TermGen;

pub use witness::{find_side_condition_witness, Witness, WitnessError, WitnessKind, WITNESS_VARIANTS};

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub samples: usize,
    pub seed: u64,
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget { samples: 500, seed: 42, max_depth: 5 }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SoundnessReport {
    pub rule: String,
    pub profile: ProfileName,
    pub samples: usize,
    pub seed: u64,
    pub instances_tried: usize,
    pub premises_held: usize,
    pub conclusion_failures: Vec<Failure>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Failure {
    pub bindings: Vec<(String, String)>,
    pub conclusion: String,
    pub detail: String,
}

impl SoundnessReport {
    pub fn sound(&self) -> bool {
        self.conclusion_failures.is_empty()
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "rule {:<18} [{}] samples {} seed {}: {} instantiated, {} with true premises, {} conclusion failures",
            self.rule,
            self.profile,
            self.samples,
            self.seed,
            self.instances_tried,
            self.premises_held,
            self.conclusion_failures.len()
        );
        for f in &self.conclusion_failures {
            out.push_str(&format!("\n  FAILED {}: {}", f.conclusion, f.detail));
            for (m, v) in &f.bindings {
                out.push_str(&format!("\n    {m} = {v}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "rule": self.rule,
            "profile": self.profile.to_string(),
            "samples": self.samples,
            "seed": self.seed,
            "instances_tried": self.instances_tried,
            "premises_held": self.premises_held,
            "conclusion_failures": self.conclusion_failures.iter().map(|f| json!({
                "bindings": f.bindings.iter().map(|(m, v)| json!({"meta": m, "value": v})).collect::<Vec<_>>(),
                "conclusion": f.conclusion,
                "detail": f.detail,
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, Error)]
pub enum SoundnessError {
    #[error("unknown rule `{0}` in profile {1}")]
    UnknownRule(String, ProfileName),
    #[error("budget exhausted for rule `{0}`: no instantiation could be generated")]
    BudgetExhausted(String),
    #[error("model error: {0}")]
    Model(#[from] ModelError),
}

/// The model a theory is decided in, by its declared side.
enum Model<'t> {
    Exc(ExcEnv<'t>),
    St(StEnv<'t>),
}

impl<'t> Model<'t> {
    fn new(theory: &'t Theory) -> Result<Model<'t>, ModelError> {
        match theory.side {
            EffectSide::States => {
                Ok(Model::St(StEnv::new(theory, DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES)?))
            }
            _ => Ok(Model::Exc(ExcEnv::new(theory, DEFAULT_MAX_CARRIER)?)),
        }
    }

    /// `Ok(None)` holds, `Ok(Some(detail))` fails with the counterexample.
    fn decide(&self, eq: &Equation) -> Result<Option<String>, ModelError> {
        match self {
            Model::Exc(env) => Ok(match env.decide(eq)? {
                ExcVerdict::Holds => None,
                ExcVerdict::Fails(c) => {
                    Some(format!("input {}: lhs {}, rhs {}", c.input, c.lhs, c.rhs))
                }
            }),
            Model::St(env) => Ok(match env.decide(eq)? {
                StVerdict::Holds => None,
                StVerdict::Fails(c) => Some(format!(
                    "input ({}, {}): lhs ({}, {}), rhs ({}, {})",
                    c.input.0,
                    c.input.1.display(env),
                    c.lhs.0,
                    c.lhs.1.display(env),
                    c.rhs.0,
                    c.rhs.1.display(env)
                )),
            }),
        }
    }

    /// The semantic decoration of a term's denotation.
    fn semantic_deco(&self, term: &Term) -> Result<Decoration, ModelError> {
        match self {
            Model::Exc(env) => Ok(env.eval(term)?.min_deco),
            Model::St(env) => Ok(env.eval(term)?.min_deco),
        }
    }
}

/// Samples instantiations of `rule` and checks every conclusion on the
/// instances whose premises hold in the model.
pub fn check_rule_sound(
    rule_name: &str,
    theory: &Theory,
    budget: &Budget,
) -> Result<SoundnessReport, SoundnessError> {
    let rule = find_rule(theory.profile, rule_name)
        .ok_or_else(|| SoundnessError::UnknownRule(rule_name.to_string(), theory.profile))?;
    let model = Model::new(theory)?;
    let gen = TermGen::new(theory);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ fnv(rule_name));
    let mut report = SoundnessReport {
        rule: rule_name.to_string(),
        profile: theory.profile,
        samples: budget.samples,
        seed: budget.seed,
        instances_tried: 0,
        premises_held: 0,
        conclusion_failures: Vec::new(),
    };
    for _ in 0..budget.samples {
        let Some(b) = sample_instantiation(&rule, theory, &gen, &mut rng, budget.max_depth)
        else {
            continue;
        };
        let Some(premises) = instantiate_premises(&rule, theory, &b) else { continue };
        // discard instances the model cannot evaluate (caps, degenerate types)
        let mut decided = Vec::with_capacity(premises.len());
        let mut evaluable = true;
        for p in &premises {
            match model.decide(p) {
                Ok(v) => decided.push(v),
                Err(_) => {
                    evaluable = false;
                    break;
                }
            }
        }
        if !evaluable {
            continue;
        }
        report.instances_tried += 1;
        if decided.iter().any(Option::is_some) {
            continue;
        }
        report.premises_held += 1;
        for concl in &rule.conclusions {
            if let Some(detail) = check_conclusion(concl, &rule, theory, &model, &b) {
                report.conclusion_failures.push(Failure {
                    bindings: render_bindings(&b),
                    conclusion: render_conclusion(concl, &b),
                    detail,
                });
            }
        }
    }
    if report.instances_tried == 0 {
        return Err(SoundnessError::BudgetExhausted(rule_name.to_string()));
    }
    Ok(report)
}

/// Runs the whole catalog of the theory's profile.
pub fn check_all_rules(
    theory: &Theory,
    budget: &Budget,
) -> Vec<Result<SoundnessReport, SoundnessError>> {
    crate::kernel::rules::rule_catalog(theory.profile)
        .iter()
        .map(|r| check_rule_sound(r.name, theory, budget))
        .collect()
}

fn fnv(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn sample_instantiation(
    rule: &RuleDescriptor,
    theory: &Theory,
    gen: &TermGen<'_>,
    rng: &mut ChaCha8Rng,
    depth: usize,
) -> Option<Bindings> {
    let mut b = Bindings::default();
    let names: Vec<&str> = theory.effect_names().collect();
    // effect-name metavariables first: types may mention them
    for m in &rule.metas {
        if matches!(m.kind, MetaKind::Name) {
            if names.is_empty() {
                return None;
            }
            b.names.insert(m.name.to_string(), names[rng.gen_range(0..names.len())].to_string());
        }
    }
    for cond in &rule.side {
        if let SideCond::NamesDistinct(x, y) = cond {
            if names.len() < 2 {
                return None;
            }
            let nx = b.names[*x].clone();
            if b.names[*y] == nx {
                let others: Vec<&&str> = names.iter().filter(|n| **n != nx).collect();
                b.names
                    .insert(y.to_string(), others[rng.gen_range(0..others.len())].to_string());
            }
        }
    }
    // type metavariables; Empty only arises from literal schema positions
    let meta_pool: Vec<TypeExpr> =
        gen.pool.iter().filter(|t| **t != TypeExpr::Empty).cloned().collect();
    for m in &rule.metas {
        if matches!(m.kind, MetaKind::Type) {
            b.types
                .insert(m.name.to_string(), meta_pool[rng.gen_range(0..meta_pool.len())].clone());
        }
    }
    // term metavariables, in declaration order
    for m in &rule.metas {
        if let MetaKind::Term { source, target, max_deco } = &m.kind {
            let src = instantiate_type(source, &b)?;
            let tgt = instantiate_type(target, &b)?;
            let t = gen.gen_typed(rng, &src, &tgt, *max_deco, depth)?;
            b.terms.insert(m.name.to_string(), t);
        }
    }
    if rng.gen_bool(0.5) {
        apply_bias(rule, theory, gen, rng, &mut b);
    }
    Some(b)
}

/// Rewrites sampled metavariables into premise-satisfying shapes: the
/// second side of an equation premise becomes an identity wrap of the
/// first, and uniqueness rules get their canonical construction.
fn apply_bias(
    rule: &RuleDescriptor,
    theory: &Theory,
    gen: &TermGen<'_>,
    rng: &mut ChaCha8Rng,
    b: &mut Bindings,
) {
    let wrap_pair = |b: &mut Bindings, rng: &mut ChaCha8Rng, x: &str, y: &str| {
        if let Some(t) = b.terms.get(x).cloned() {
            b.terms.insert(y.to_string(), gen.identity_wrap(rng, &t));
        }
    };
    let prj = |pos: Pos, b: &Bindings| {
        Some(TermPatProj { pos, l: b.types.get("B1")?.clone(), r: b.types.get("B2")?.clone() })
    };
    struct TermPatProj {
        pos: Pos,
        l: TypeExpr,
        r: TypeExpr,
    }
    match rule.name {
        "sym" | "s-sym" | "w-sym" | "strong-weak" | "weak-strong" | "effect" | "st-effect-u"
        | "exc-coprod-u" | "st-prod-u" => wrap_pair(b, rng, "f", "g"),
        "trans" | "s-trans" | "w-trans" => {
            wrap_pair(b, rng, "f", "g");
            wrap_pair(b, rng, "g", "h");
        }
        "repl" | "s-repl" | "w-repl" => wrap_pair(b, rng, "f1", "f2"),
        "subs" | "s-subs" | "w-subs" => wrap_pair(b, rng, "g1", "g2"),
        "pair-u" => {
            if let (Some(g), Some(p1), Some(p2)) =
                (b.terms.get("g").cloned(), prj(Pos::First, b), prj(Pos::Second, b))
            {
                b.terms.insert(
                    "f1".to_string(),
                    Term::comp(Term::Proj(p1.pos, p1.l, p1.r), g.clone()),
                );
                b.terms.insert("f2".to_string(), Term::comp(Term::Proj(p2.pos, p2.l, p2.r), g));
            }
        }
        "copair-u" => {
            if let (Some(g), Some(a1), Some(a2)) =
                (b.terms.get("g").cloned(), b.types.get("A1").cloned(), b.types.get("A2").cloned())
            {
                b.terms.insert(
                    "f1".to_string(),
                    Term::comp(g.clone(), Term::Copr(Pos::First, a1.clone(), a2.clone())),
                );
                b.terms
                    .insert("f2".to_string(), Term::comp(g, Term::Copr(Pos::Second, a1, a2)));
            }
        }
        "l-copair-u" | "r-copair-u" => {
            let kind =
                if rule.name.starts_with("l-") { PairKind::Left } else { PairKind::Right };
            if let (Some(f1), Some(f2)) = (b.terms.get("f1").cloned(), b.terms.get("f2").cloned())
            {
                b.terms.insert("g".to_string(), Term::copair(kind, f1, f2));
            }
        }
        "l-pair-u" | "r-pair-u" => {
            let kind =
                if rule.name.starts_with("l-") { PairKind::Left } else { PairKind::Right };
            if let (Some(f1), Some(f2)) = (b.terms.get("f1").cloned(), b.terms.get("f2").cloned())
            {
                b.terms.insert("g".to_string(), Term::pair(kind, f1, f2));
            }
        }
        _ => {}
    }
    let _ = theory;
}

fn instantiate_premises(
    rule: &RuleDescriptor,
    theory: &Theory,
    b: &Bindings,
) -> Option<Vec<Equation>> {
    let mut out = Vec::new();
    for p in &rule.premises {
        match p {
            PremiseSpec::Eq(pat) => out.push(instantiate_eq(pat, b)?),
            PremiseSpec::ForEachEffect { binder, pat } => {
                for name in theory.effect_names() {
                    let expanded = subst_name_in_judg(pat, binder, name);
                    out.push(instantiate_eq(&expanded, b)?);
                }
            }
        }
    }
    Some(out)
}

fn instantiate_eq(pat: &JudgPat, b: &Bindings) -> Option<Equation> {
    match pat {
        JudgPat::Eq { strength, lhs, rhs } => Some(Equation {
            lhs: instantiate_term(lhs, b)?,
            rhs: instantiate_term(rhs, b)?,
            strength: *strength,
        }),
        JudgPat::Term { .. } => None,
    }
}

/// Returns a failure detail when the instantiated conclusion does not hold
/// in the model. Term conclusions are checked for typing, formation under
/// the active profile, and decoration soundness of the denotation.
fn check_conclusion(
    concl: &JudgPat,
    rule: &RuleDescriptor,
    theory: &Theory,
    model: &Model<'_>,
    b: &Bindings,
) -> Option<String> {
    match concl {
        JudgPat::Eq { .. } => {
            let eq = instantiate_eq(concl, b)?;
            match model.decide(&eq) {
                Ok(None) => None,
                Ok(Some(cex)) => Some(cex),
                Err(e) => Some(format!("conclusion not evaluable: {e}")),
            }
        }
        JudgPat::Term { term, deco } => {
            let t = instantiate_term(term, b)?;
            if let Err(e) = typecheck(&t, theory) {
                return Some(format!("conclusion does not typecheck: {e}"));
            }
            match check_formation(&t, theory.profile, theory) {
                Ok(v) if v.is_empty() => {}
                Ok(v) => return Some(format!("formation violation: {}", v[0])),
                Err(e) => return Some(e.to_string()),
            }
            let inferred = match infer_decoration(&t, theory) {
                Ok(d) => d,
                Err(e) => return Some(e.to_string()),
            };
            let semantic = match model.semantic_deco(&t) {
                Ok(d) => d,
                Err(e) => return Some(format!("conclusion not evaluable: {e}")),
            };
            if semantic > inferred {
                return Some(format!(
                    "denotation has decoration {semantic}, above the inferred {inferred}"
                ));
            }
            if let DecoPat::Exact(d) = deco {
                if semantic > *d {
                    return Some(format!(
                        "rule `{}` asserts decoration {d}, denotation has {semantic}",
                        rule.name
                    ));
                }
            }
            None
        }
    }
}

fn render_bindings(b: &Bindings) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for (k, v) in &b.names {
        out.push((k.clone(), v.clone()));
    }
    for (k, v) in &b.types {
        out.push((k.clone(), v.to_string()));
    }
    for (k, v) in &b.terms {
        out.push((k.clone(), v.to_string()));
    }
    out
}

fn render_conclusion(concl: &JudgPat, b: &Bindings) -> String {
    match concl {
        JudgPat::Eq { .. } => match instantiate_eq(concl, b) {
            Some(eq) => eq.to_string(),
            None => concl.to_string(),
        },
        JudgPat::Term { term, .. } => match instantiate_term(term, b) {
            Some(t) => t.to_string(),
            None => concl.to_string(),
        },
    }
}

/// Weak equations in the model are used by tests that need a quick truth
/// value without the full report machinery.
pub fn holds_in_model(eq: &Equation, theory: &Theory) -> Result<bool, ModelError> {
    Ok(Model::new(theory)?.decide(eq)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn demo() -> Theory {
        crate::syntax::parse_theory(
            r#"
theory demo exceptions logic EXC_PLUS
type Bool = {tt, ff}
exception T of {a, b}
exception R of {c}
op f : Bool -> Bool deco 1 { tt => ok ff, ff => raise T a }
op flip : V_T -> V_T deco 0 { a => b, b => a }
op mend : V_T -> Bool deco 1 { a => ok tt, b => ok ff }
"#,
        )
        .unwrap()
    }

    fn fast() -> Budget {
        Budget { samples: 60, seed: 42, max_depth: 3 }
    }

    #[test]
    fn core_rules_report_zero_failures() {
        let th = demo();
        for rule in ["w-subs", "s-trans", "copair", "copair-u", "effect", "ax-untag-tag"] {
            let r = check_rule_sound(rule, &th, &fast()).unwrap();
            assert!(r.sound(), "{}", r.render_text());
            assert!(r.instances_tried > 0, "no instances for {rule}");
        }
    }

    #[test]
    fn premises_do_hold_for_uniqueness_rules() {
        let th = demo();
        for rule in ["copair-u", "l-copair-u", "weak-strong", "exc-coprod-u"] {
            let r = check_rule_sound(rule, &th, &fast()).unwrap();
            assert!(r.premises_held > 0, "{}", r.render_text());
            assert!(r.sound(), "{}", r.render_text());
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let th = demo();
        let a = check_rule_sound("effect", &th, &fast()).unwrap();
        let b = check_rule_sound("effect", &th, &fast()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.render_text(), b.render_text());
    }

    #[test]
    fn unknown_rules_are_reported() {
        let th = demo();
        assert!(matches!(
            check_rule_sound("no-such", &th, &fast()),
            Err(SoundnessError::UnknownRule(..))
        ));
    }

    #[test]
    fn state_rules_sample_too() {
        let th = crate::syntax::parse_theory(
            r#"
theory counter states logic ST_PLUS
location X of {0, 1}
location Y of {u, v}
"#,
        )
        .unwrap();
        for rule in ["w-repl", "l-pair", "st-prod-u", "copair", "ax-lookup-update"] {
            let r = check_rule_sound(rule, &th, &fast()).unwrap();
            assert!(r.sound(), "{}", r.render_text());
            assert!(r.instances_tried > 0, "no instances for {rule}");
        }
    }
}
