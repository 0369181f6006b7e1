//! Rule catalogs of the seven logic profiles.
//!
//! Each descriptor carries metavariable declarations (with typing schemas
//! and decoration bounds), equation premises (supplied as child
//! derivations; term-judgment premises are discharged automatically from
//! the metavariable bounds), one or more conclusion schemas, and extra
//! side conditions. Rules with several conclusions under the same
//! premises are grouped under one name, as in the source rule sets.

use crate::kernel::pattern::{DecoPat, JudgPat, NameSlot, TermPat, TypePat};
use crate::profile::ProfileName;
use crate::term::Strength;
use crate::types::{Decoration, PairKind, Pos};

/// Declared metavariable of a rule schema.
#[derive(Clone, Debug)]
pub struct MetaDecl {
    pub name: &'static str,
    pub kind: MetaKind,
}

#[derive(Clone, Debug)]
pub enum MetaKind {
    /// A term metavariable with its typing schema and decoration bound.
    Term { source: TypePat, target: TypePat, max_deco: Decoration },
    Type,
    Name,
}

/// A premise schema. Equation premises are supplied as child derivations;
/// a `ForEachEffect` premise expands to one equation per declared effect
/// name, in declaration order.
#[derive(Clone, Debug)]
pub enum PremiseSpec {
    Eq(JudgPat),
    ForEachEffect { binder: &'static str, pat: JudgPat },
}

/// Side conditions beyond the decoration bounds of the metavariables.
#[derive(Clone, Debug)]
pub enum SideCond {
    NamesDistinct(&'static str, &'static str),
    SourceIsEmpty(&'static str),
    TargetIsUnit(&'static str),
}

#[derive(Clone, Debug)]
pub struct RuleDescriptor {
    pub name: &'static str,
    pub profiles: Vec<ProfileName>,
    pub metas: Vec<MetaDecl>,
    pub premises: Vec<PremiseSpec>,
    /// A node instantiates the rule by matching one of these.
    pub conclusions: Vec<JudgPat>,
    pub side: Vec<SideCond>,
}

impl RuleDescriptor {
    pub fn meta(&self, name: &str) -> Option<&MetaDecl> {
        self.metas.iter().find(|m| m.name == name)
    }

    /// Human-readable schema: metavariable typings with bounds, premises,
    /// conclusions, and side conditions.
    pub fn render(&self) -> String {
        let mut out = format!("{}:", self.name);
        let mut ctx: Vec<String> = Vec::new();
        for m in &self.metas {
            if let MetaKind::Term { source, target, max_deco } = &m.kind {
                let bound = match max_deco {
                    Decoration::D2 => String::new(),
                    d => format!("  [deco <= {d}]"),
                };
                ctx.push(format!("{} : {source} -> {target}{bound}", m.name));
            }
        }
        if !ctx.is_empty() {
            out.push_str(&format!("\n  over {}", ctx.join(";  ")));
        }
        for p in &self.premises {
            match p {
                PremiseSpec::Eq(pat) => out.push_str(&format!("\n  premise {pat}")),
                PremiseSpec::ForEachEffect { binder, pat } => {
                    out.push_str(&format!("\n  premise for each effect name {binder}: {pat}"))
                }
            }
        }
        for c in &self.conclusions {
            out.push_str(&format!("\n  concludes {c}"));
        }
        for s in &self.side {
            let cond = match s {
                SideCond::NamesDistinct(a, b) => format!("{a} and {b} are distinct names"),
                SideCond::SourceIsEmpty(m) => format!("{m} is sourced at 0"),
                SideCond::TargetIsUnit(m) => format!("{m} targets 1"),
            };
            out.push_str(&format!("\n  requires {cond}"));
        }
        out
    }
}

// -- pattern shorthands -----------------------------------------------------

fn t(n: &str) -> TermPat {
    TermPat::Meta(n.to_string())
}

fn ty(n: &str) -> TypePat {
    TypePat::Meta(n.to_string())
}

fn vt(n: &str) -> TypePat {
    TypePat::EffectVal(NameSlot::Meta(n.to_string()))
}

fn comp(o: TermPat, i: TermPat) -> TermPat {
    TermPat::Comp(Box::new(o), Box::new(i))
}

fn pcomp(o: TermPat, i: TermPat) -> TermPat {
    TermPat::PropComp(Box::new(o), Box::new(i))
}

fn pair(k: PairKind, a: TermPat, b: TermPat) -> TermPat {
    TermPat::Pair(k, Box::new(a), Box::new(b))
}

fn copair(k: PairKind, a: TermPat, b: TermPat) -> TermPat {
    TermPat::Copair(k, Box::new(a), Box::new(b))
}

fn proj(p: Pos, l: TypePat, r: TypePat) -> TermPat {
    TermPat::Proj(p, l, r)
}

fn copr(p: Pos, l: TypePat, r: TypePat) -> TermPat {
    TermPat::Copr(p, l, r)
}

fn tag(n: &str) -> TermPat {
    TermPat::Tag(NameSlot::Meta(n.to_string()))
}

fn untag(n: &str) -> TermPat {
    TermPat::Untag(NameSlot::Meta(n.to_string()))
}

fn lookup(n: &str) -> TermPat {
    TermPat::Lookup(NameSlot::Meta(n.to_string()))
}

fn update(n: &str) -> TermPat {
    TermPat::Update(NameSlot::Meta(n.to_string()))
}

fn eq(strength: Strength, lhs: TermPat, rhs: TermPat) -> JudgPat {
    JudgPat::Eq { strength, lhs, rhs }
}

fn term_concl(term: TermPat, deco: DecoPat) -> JudgPat {
    JudgPat::Term { term, deco }
}

fn tmeta(name: &'static str, source: TypePat, target: TypePat, max_deco: Decoration) -> MetaDecl {
    MetaDecl { name, kind: MetaKind::Term { source, target, max_deco } }
}

fn tymeta(name: &'static str) -> MetaDecl {
    MetaDecl { name, kind: MetaKind::Type }
}

fn nmeta(name: &'static str) -> MetaDecl {
    MetaDecl { name, kind: MetaKind::Name }
}

struct Ctx {
    profiles: Vec<ProfileName>,
}

impl Ctx {
    fn rule(
        &self,
        name: &'static str,
        metas: Vec<MetaDecl>,
        premises: Vec<PremiseSpec>,
        conclusions: Vec<JudgPat>,
        side: Vec<SideCond>,
    ) -> RuleDescriptor {
        RuleDescriptor { name, profiles: self.profiles.clone(), metas, premises, conclusions, side }
    }
}

use Decoration::{D0, D1, D2};
use Strength::{Order, Strong, Weak};

/// The undecorated equational logic with conditionals: every term is pure
/// and every equation is strong.
fn eq_catalog() -> Vec<RuleDescriptor> {
    let c = Ctx { profiles: vec![ProfileName::Eq] };
    let mut rules = Vec::new();
    // equivalence
    rules.push(c.rule(
        "refl",
        vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), D0)],
        vec![],
        vec![eq(Strong, t("f"), t("f"))],
        vec![],
    ));
    rules.push(c.rule(
        "sym",
        vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), D0), tmeta("g", ty("A"), ty("B"), D0)],
        vec![PremiseSpec::Eq(eq(Strong, t("f"), t("g")))],
        vec![eq(Strong, t("g"), t("f"))],
        vec![],
    ));
    rules.push(c.rule(
        "trans",
        vec![
            tymeta("A"),
            tymeta("B"),
            tmeta("f", ty("A"), ty("B"), D0),
            tmeta("g", ty("A"), ty("B"), D0),
            tmeta("h", ty("A"), ty("B"), D0),
        ],
        vec![
            PremiseSpec::Eq(eq(Strong, t("f"), t("g"))),
            PremiseSpec::Eq(eq(Strong, t("g"), t("h"))),
        ],
        vec![eq(Strong, t("f"), t("h"))],
        vec![],
    ));
    rules.extend(categorical_rules(&c, D0, Strong, Strong));
    rules.extend([
        c.rule(
            "repl",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f1", ty("A"), ty("B"), D0),
                tmeta("f2", ty("A"), ty("B"), D0),
                tmeta("g", ty("B"), ty("C"), D0),
            ],
            vec![PremiseSpec::Eq(eq(Strong, t("f1"), t("f2")))],
            vec![eq(Strong, comp(t("g"), t("f1")), comp(t("g"), t("f2")))],
            vec![],
        ),
        c.rule(
            "subs",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f", ty("A"), ty("B"), D0),
                tmeta("g1", ty("B"), ty("C"), D0),
                tmeta("g2", ty("B"), ty("C"), D0),
            ],
            vec![PremiseSpec::Eq(eq(Strong, t("g1"), t("g2")))],
            vec![eq(Strong, comp(t("g1"), t("f")), comp(t("g2"), t("f")))],
            vec![],
        ),
    ]);
    rules.extend(product_rules(&c, D0, D0, Strong, Strong, Strong));
    rules.extend(coproduct_rules(&c, D0, D0, Strong, Strong, Strong));
    rules
}

/// id, comp, id-source, id-target, assoc at the given decoration bound.
fn categorical_rules(
    c: &Ctx,
    max: Decoration,
    unit_strength: Strength,
    assoc_strength: Strength,
) -> Vec<RuleDescriptor> {
    vec![
        c.rule(
            "id",
            vec![tymeta("A")],
            vec![],
            vec![term_concl(TermPat::Id(ty("A")), DecoPat::Exact(D0))],
            vec![],
        ),
        c.rule(
            "comp",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f", ty("A"), ty("B"), max),
                tmeta("g", ty("B"), ty("C"), max),
            ],
            vec![],
            vec![term_concl(comp(t("g"), t("f")), DecoPat::Any)],
            vec![],
        ),
        c.rule(
            "id-source",
            vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), max)],
            vec![],
            vec![eq(unit_strength, comp(t("f"), TermPat::Id(ty("A"))), t("f"))],
            vec![],
        ),
        c.rule(
            "id-target",
            vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), max)],
            vec![],
            vec![eq(unit_strength, comp(TermPat::Id(ty("B")), t("f")), t("f"))],
            vec![],
        ),
        c.rule(
            "assoc",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tymeta("D"),
                tmeta("f", ty("A"), ty("B"), max),
                tmeta("g", ty("B"), ty("C"), max),
                tmeta("h", ty("C"), ty("D"), max),
            ],
            vec![],
            vec![eq(
                assoc_strength,
                comp(t("h"), comp(t("g"), t("f"))),
                comp(comp(t("h"), t("g")), t("f")),
            )],
            vec![],
        ),
    ]
}

/// prod, pair, pair-u, final, final-u with the given leg bounds and
/// law/uniqueness strengths.
fn product_rules(
    c: &Ctx,
    leg_max: Decoration,
    final_u_max: Decoration,
    law_strength: Strength,
    u_strength: Strength,
    final_u_strength: Strength,
) -> Vec<RuleDescriptor> {
    let lpair = |a, b| pair(PairKind::Symmetric, a, b);
    vec![
        c.rule(
            "prod",
            vec![tymeta("B1"), tymeta("B2")],
            vec![],
            vec![
                term_concl(proj(Pos::First, ty("B1"), ty("B2")), DecoPat::Exact(D0)),
                term_concl(proj(Pos::Second, ty("B1"), ty("B2")), DecoPat::Exact(D0)),
            ],
            vec![],
        ),
        c.rule(
            "pair",
            vec![
                tymeta("A"),
                tymeta("B1"),
                tymeta("B2"),
                tmeta("f1", ty("A"), ty("B1"), leg_max),
                tmeta("f2", ty("A"), ty("B2"), leg_max),
            ],
            vec![],
            vec![
                term_concl(lpair(t("f1"), t("f2")), DecoPat::Any),
                eq(
                    law_strength,
                    comp(proj(Pos::First, ty("B1"), ty("B2")), lpair(t("f1"), t("f2"))),
                    t("f1"),
                ),
                eq(
                    law_strength,
                    comp(proj(Pos::Second, ty("B1"), ty("B2")), lpair(t("f1"), t("f2"))),
                    t("f2"),
                ),
            ],
            vec![],
        ),
        c.rule(
            "pair-u",
            vec![
                tymeta("A"),
                tymeta("B1"),
                tymeta("B2"),
                tmeta("f1", ty("A"), ty("B1"), leg_max),
                tmeta("f2", ty("A"), ty("B2"), leg_max),
                tmeta(
                    "g",
                    ty("A"),
                    TypePat::Prod(Box::new(ty("B1")), Box::new(ty("B2"))),
                    leg_max,
                ),
            ],
            vec![
                PremiseSpec::Eq(eq(
                    u_strength,
                    comp(proj(Pos::First, ty("B1"), ty("B2")), t("g")),
                    t("f1"),
                )),
                PremiseSpec::Eq(eq(
                    u_strength,
                    comp(proj(Pos::Second, ty("B1"), ty("B2")), t("g")),
                    t("f2"),
                )),
            ],
            vec![eq(Strong, t("g"), lpair(t("f1"), t("f2")))],
            vec![],
        ),
        c.rule(
            "final",
            vec![tymeta("A")],
            vec![],
            vec![term_concl(TermPat::Final(ty("A")), DecoPat::Exact(D0))],
            vec![],
        ),
        c.rule(
            "final-u",
            vec![tymeta("A"), tmeta("f", ty("A"), TypePat::Unit, final_u_max)],
            vec![],
            vec![eq(final_u_strength, t("f"), TermPat::Final(ty("A")))],
            vec![],
        ),
    ]
}

/// coprod, copair, copair-u, initial, initial-u, mirror-parameterized.
fn coproduct_rules(
    c: &Ctx,
    leg_max: Decoration,
    initial_u_max: Decoration,
    law_strength: Strength,
    u_strength: Strength,
    initial_u_strength: Strength,
) -> Vec<RuleDescriptor> {
    let scopair = |a, b| copair(PairKind::Symmetric, a, b);
    vec![
        c.rule(
            "coprod",
            vec![tymeta("A1"), tymeta("A2")],
            vec![],
            vec![
                term_concl(copr(Pos::First, ty("A1"), ty("A2")), DecoPat::Exact(D0)),
                term_concl(copr(Pos::Second, ty("A1"), ty("A2")), DecoPat::Exact(D0)),
            ],
            vec![],
        ),
        c.rule(
            "copair",
            vec![
                tymeta("A1"),
                tymeta("A2"),
                tymeta("B"),
                tmeta("f1", ty("A1"), ty("B"), leg_max),
                tmeta("f2", ty("A2"), ty("B"), leg_max),
            ],
            vec![],
            vec![
                term_concl(scopair(t("f1"), t("f2")), DecoPat::Any),
                eq(
                    law_strength,
                    comp(scopair(t("f1"), t("f2")), copr(Pos::First, ty("A1"), ty("A2"))),
                    t("f1"),
                ),
                eq(
                    law_strength,
                    comp(scopair(t("f1"), t("f2")), copr(Pos::Second, ty("A1"), ty("A2"))),
                    t("f2"),
                ),
            ],
            vec![],
        ),
        c.rule(
            "copair-u",
            vec![
                tymeta("A1"),
                tymeta("A2"),
                tymeta("B"),
                tmeta("f1", ty("A1"), ty("B"), leg_max),
                tmeta("f2", ty("A2"), ty("B"), leg_max),
                tmeta(
                    "g",
                    TypePat::Sum(Box::new(ty("A1")), Box::new(ty("A2"))),
                    ty("B"),
                    leg_max,
                ),
            ],
            vec![
                PremiseSpec::Eq(eq(
                    u_strength,
                    comp(t("g"), copr(Pos::First, ty("A1"), ty("A2"))),
                    t("f1"),
                )),
                PremiseSpec::Eq(eq(
                    u_strength,
                    comp(t("g"), copr(Pos::Second, ty("A1"), ty("A2"))),
                    t("f2"),
                )),
            ],
            vec![eq(Strong, t("g"), scopair(t("f1"), t("f2")))],
            vec![],
        ),
        c.rule(
            "initial",
            vec![tymeta("B")],
            vec![],
            vec![term_concl(TermPat::Initial(ty("B")), DecoPat::Exact(D0))],
            vec![],
        ),
        c.rule(
            "initial-u",
            vec![tymeta("B"), tmeta("f", TypePat::Empty, ty("B"), initial_u_max)],
            vec![],
            vec![eq(initial_u_strength, t("f"), TermPat::Initial(ty("B")))],
            vec![],
        ),
    ]
}

fn conversion_rules(c: &Ctx) -> Vec<RuleDescriptor> {
    vec![
        c.rule(
            "pure-acc",
            vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), D0)],
            vec![],
            vec![term_concl(t("f"), DecoPat::Exact(D1))],
            vec![],
        ),
        c.rule(
            "acc-mod",
            vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), D1)],
            vec![],
            vec![term_concl(t("f"), DecoPat::Exact(D2))],
            vec![],
        ),
        c.rule(
            "strong-weak",
            vec![
                tymeta("A"),
                tymeta("B"),
                tmeta("f", ty("A"), ty("B"), D2),
                tmeta("g", ty("A"), ty("B"), D2),
            ],
            vec![PremiseSpec::Eq(eq(Strong, t("f"), t("g")))],
            vec![eq(Weak, t("f"), t("g"))],
            vec![],
        ),
        c.rule(
            "weak-strong",
            vec![
                tymeta("A"),
                tymeta("B"),
                tmeta("f", ty("A"), ty("B"), D1),
                tmeta("g", ty("A"), ty("B"), D1),
            ],
            vec![PremiseSpec::Eq(eq(Weak, t("f"), t("g")))],
            vec![eq(Strong, t("f"), t("g"))],
            vec![],
        ),
    ]
}

fn equivalence_rules(c: &Ctx) -> Vec<RuleDescriptor> {
    let mk = |name: &'static str, strength: Strength| -> [RuleDescriptor; 3] {
        let (refl, sym, trans) = match name {
            "s" => ("s-refl", "s-sym", "s-trans"),
            _ => ("w-refl", "w-sym", "w-trans"),
        };
        [
            c.rule(
                refl,
                vec![tymeta("A"), tymeta("B"), tmeta("f", ty("A"), ty("B"), D2)],
                vec![],
                vec![eq(strength, t("f"), t("f"))],
                vec![],
            ),
            c.rule(
                sym,
                vec![
                    tymeta("A"),
                    tymeta("B"),
                    tmeta("f", ty("A"), ty("B"), D2),
                    tmeta("g", ty("A"), ty("B"), D2),
                ],
                vec![PremiseSpec::Eq(eq(strength, t("f"), t("g")))],
                vec![eq(strength, t("g"), t("f"))],
                vec![],
            ),
            c.rule(
                trans,
                vec![
                    tymeta("A"),
                    tymeta("B"),
                    tmeta("f", ty("A"), ty("B"), D2),
                    tmeta("g", ty("A"), ty("B"), D2),
                    tmeta("h", ty("A"), ty("B"), D2),
                ],
                vec![
                    PremiseSpec::Eq(eq(strength, t("f"), t("g"))),
                    PremiseSpec::Eq(eq(strength, t("g"), t("h"))),
                ],
                vec![eq(strength, t("f"), t("h"))],
                vec![],
            ),
        ]
    };
    let mut out = Vec::new();
    out.extend(mk("s", Strong));
    out.extend(mk("w", Weak));
    out
}

/// The congruence block; substitution and replacement carry side
/// conditions that differ between the monad and comonad sides.
fn congruence_rules(c: &Ctx, w_repl_g_max: Decoration, w_subs_f_max: Decoration) -> Vec<RuleDescriptor> {
    vec![
        c.rule(
            "s-repl",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f1", ty("A"), ty("B"), D2),
                tmeta("f2", ty("A"), ty("B"), D2),
                tmeta("g", ty("B"), ty("C"), D2),
            ],
            vec![PremiseSpec::Eq(eq(Strong, t("f1"), t("f2")))],
            vec![eq(Strong, comp(t("g"), t("f1")), comp(t("g"), t("f2")))],
            vec![],
        ),
        c.rule(
            "s-subs",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f", ty("A"), ty("B"), D2),
                tmeta("g1", ty("B"), ty("C"), D2),
                tmeta("g2", ty("B"), ty("C"), D2),
            ],
            vec![PremiseSpec::Eq(eq(Strong, t("g1"), t("g2")))],
            vec![eq(Strong, comp(t("g1"), t("f")), comp(t("g2"), t("f")))],
            vec![],
        ),
        c.rule(
            "w-repl",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f1", ty("A"), ty("B"), D2),
                tmeta("f2", ty("A"), ty("B"), D2),
                tmeta("g", ty("B"), ty("C"), w_repl_g_max),
            ],
            vec![PremiseSpec::Eq(eq(Weak, t("f1"), t("f2")))],
            vec![eq(Weak, comp(t("g"), t("f1")), comp(t("g"), t("f2")))],
            vec![],
        ),
        c.rule(
            "w-subs",
            vec![
                tymeta("A"),
                tymeta("B"),
                tymeta("C"),
                tmeta("f", ty("A"), ty("B"), w_subs_f_max),
                tmeta("g1", ty("B"), ty("C"), D2),
                tmeta("g2", ty("B"), ty("C"), D2),
            ],
            vec![PremiseSpec::Eq(eq(Weak, t("g1"), t("g2")))],
            vec![eq(Weak, comp(t("g1"), t("f")), comp(t("g2"), t("f")))],
            vec![],
        ),
    ]
}

/// The decorated logic for a monad: substitution of weak equations needs a
/// pure substituted term, products are pure-only, copairs take
/// constructors, and the initial map is unique up to weak equality.
fn mon_core(c: &Ctx) -> Vec<RuleDescriptor> {
    let mut rules = Vec::new();
    rules.extend(conversion_rules(c));
    rules.extend(equivalence_rules(c));
    rules.extend(categorical_rules(c, D2, Strong, Strong));
    rules.extend(congruence_rules(c, D2, D0));
    rules.extend(product_rules(c, D0, D0, Strong, Strong, Strong));
    rules.extend(coproduct_rules(c, D1, D2, Strong, Strong, Weak));
    rules
}

/// The decorated logic for a comonad: the mirror image, with replacement
/// restricted to pure terms, pairs taking accessors, copairs pure-only,
/// and the final map unique up to weak equality.
fn comon_core(c: &Ctx, modifier_copairs: bool) -> Vec<RuleDescriptor> {
    let mut rules = Vec::new();
    rules.extend(conversion_rules(c));
    rules.extend(equivalence_rules(c));
    rules.extend(categorical_rules(c, D2, Strong, Strong));
    rules.extend(congruence_rules(c, D0, D2));
    rules.extend(product_rules(c, D1, D2, Strong, Strong, Weak));
    let copair_max = if modifier_copairs { D2 } else { D0 };
    rules.extend(coproduct_rules(c, copair_max, D0, Strong, Strong, Strong));
    rules
}

/// The mixed-decoration copairs, the effect rule, the tag/untag axiom
/// schemas and the coproduct rule specific to exceptions.
fn exc_extra(c: &Ctx) -> Vec<RuleDescriptor> {
    let mut rules = Vec::new();
    for (name, kind, d1, d2, s1, s2) in [
        ("l-copair", PairKind::Left, D1, D2, Weak, Strong),
        ("r-copair", PairKind::Right, D2, D1, Strong, Weak),
    ] {
        let cp = |a, b| copair(kind, a, b);
        rules.push(c.rule(
            name,
            vec![
                tymeta("A1"),
                tymeta("A2"),
                tymeta("B"),
                tmeta("f1", ty("A1"), ty("B"), d1),
                tmeta("f2", ty("A2"), ty("B"), d2),
            ],
            vec![],
            vec![
                term_concl(cp(t("f1"), t("f2")), DecoPat::Any),
                eq(
                    s1,
                    comp(cp(t("f1"), t("f2")), copr(Pos::First, ty("A1"), ty("A2"))),
                    t("f1"),
                ),
                eq(
                    s2,
                    comp(cp(t("f1"), t("f2")), copr(Pos::Second, ty("A1"), ty("A2"))),
                    t("f2"),
                ),
            ],
            vec![],
        ));
        let uname: &'static str = match kind {
            PairKind::Left => "l-copair-u",
            _ => "r-copair-u",
        };
        rules.push(c.rule(
            uname,
            vec![
                tymeta("A1"),
                tymeta("A2"),
                tymeta("B"),
                tmeta("f1", ty("A1"), ty("B"), d1),
                tmeta("f2", ty("A2"), ty("B"), d2),
                tmeta(
                    "g",
                    TypePat::Sum(Box::new(ty("A1")), Box::new(ty("A2"))),
                    ty("B"),
                    D2,
                ),
            ],
            vec![
                PremiseSpec::Eq(eq(
                    s1,
                    comp(t("g"), copr(Pos::First, ty("A1"), ty("A2"))),
                    t("f1"),
                )),
                PremiseSpec::Eq(eq(
                    s2,
                    comp(t("g"), copr(Pos::Second, ty("A1"), ty("A2"))),
                    t("f2"),
                )),
            ],
            vec![eq(Strong, t("g"), cp(t("f1"), t("f2")))],
            vec![],
        ));
    }
    rules.push(c.rule(
        "effect",
        vec![
            tymeta("A"),
            tymeta("B"),
            tmeta("f", ty("A"), ty("B"), D2),
            tmeta("g", ty("A"), ty("B"), D2),
        ],
        vec![
            PremiseSpec::Eq(eq(Weak, t("f"), t("g"))),
            PremiseSpec::Eq(eq(
                Strong,
                comp(t("f"), TermPat::Initial(ty("A"))),
                comp(t("g"), TermPat::Initial(ty("A"))),
            )),
        ],
        vec![eq(Strong, t("f"), t("g"))],
        vec![],
    ));
    rules.push(c.rule(
        "exc-coprod-u",
        vec![
            tymeta("B"),
            tmeta("f", TypePat::Empty, ty("B"), D2),
            tmeta("g", TypePat::Empty, ty("B"), D2),
        ],
        vec![PremiseSpec::ForEachEffect {
            binder: "T",
            pat: eq(
                Weak,
                comp(t("f"), tag("T")),
                comp(t("g"), tag("T")),
            ),
        }],
        vec![eq(Strong, t("f"), t("g"))],
        vec![SideCond::SourceIsEmpty("f")],
    ));
    rules.push(c.rule(
        "ax-untag-tag",
        vec![nmeta("T")],
        vec![],
        vec![eq(
            Weak,
            comp(untag("T"), tag("T")),
            TermPat::Id(vt("T")),
        )],
        vec![],
    ));
    rules.push(c.rule(
        "ax-untag-tag-neq",
        vec![nmeta("T"), nmeta("R")],
        vec![],
        vec![eq(
            Weak,
            comp(untag("T"), tag("R")),
            comp(TermPat::Initial(vt("T")), tag("R")),
        )],
        vec![SideCond::NamesDistinct("T", "R")],
    ));
    rules.push(c.rule(
        "ax-untagall-tag",
        vec![nmeta("T")],
        vec![],
        vec![eq(
            Weak,
            comp(TermPat::UntagAll, tag("T")),
            TermPat::Final(vt("T")),
        )],
        vec![],
    ));
    rules
}

/// The mixed-decoration pairs, the effect rule, the lookup/update axiom
/// schemas and the product rule specific to states.
fn st_extra(c: &Ctx) -> Vec<RuleDescriptor> {
    let mut rules = Vec::new();
    for (name, kind, d1, d2, s1, s2) in [
        ("l-pair", PairKind::Left, D1, D2, Weak, Strong),
        ("r-pair", PairKind::Right, D2, D1, Strong, Weak),
    ] {
        let pr = |a, b| pair(kind, a, b);
        rules.push(c.rule(
            name,
            vec![
                tymeta("A"),
                tymeta("B1"),
                tymeta("B2"),
                tmeta("f1", ty("A"), ty("B1"), d1),
                tmeta("f2", ty("A"), ty("B2"), d2),
            ],
            vec![],
            vec![
                term_concl(pr(t("f1"), t("f2")), DecoPat::Any),
                eq(
                    s1,
                    comp(proj(Pos::First, ty("B1"), ty("B2")), pr(t("f1"), t("f2"))),
                    t("f1"),
                ),
                eq(
                    s2,
                    comp(proj(Pos::Second, ty("B1"), ty("B2")), pr(t("f1"), t("f2"))),
                    t("f2"),
                ),
            ],
            vec![],
        ));
        let uname: &'static str = match kind {
            PairKind::Left => "l-pair-u",
            _ => "r-pair-u",
        };
        rules.push(c.rule(
            uname,
            vec![
                tymeta("A"),
                tymeta("B1"),
                tymeta("B2"),
                tmeta("f1", ty("A"), ty("B1"), d1),
                tmeta("f2", ty("A"), ty("B2"), d2),
                tmeta(
                    "g",
                    ty("A"),
                    TypePat::Prod(Box::new(ty("B1")), Box::new(ty("B2"))),
                    D2,
                ),
            ],
            vec![
                PremiseSpec::Eq(eq(
                    s1,
                    comp(proj(Pos::First, ty("B1"), ty("B2")), t("g")),
                    t("f1"),
                )),
                PremiseSpec::Eq(eq(
                    s2,
                    comp(proj(Pos::Second, ty("B1"), ty("B2")), t("g")),
                    t("f2"),
                )),
            ],
            vec![eq(Strong, t("g"), pr(t("f1"), t("f2")))],
            vec![],
        ));
    }
    rules.push(c.rule(
        "st-effect-u",
        vec![
            tymeta("A"),
            tymeta("B"),
            tmeta("f", ty("A"), ty("B"), D2),
            tmeta("g", ty("A"), ty("B"), D2),
        ],
        vec![
            PremiseSpec::Eq(eq(Weak, t("f"), t("g"))),
            PremiseSpec::Eq(eq(
                Strong,
                comp(TermPat::Final(ty("B")), t("f")),
                comp(TermPat::Final(ty("B")), t("g")),
            )),
        ],
        vec![eq(Strong, t("f"), t("g"))],
        vec![],
    ));
    rules.push(c.rule(
        "st-prod-u",
        vec![
            tymeta("A"),
            tmeta("f", ty("A"), TypePat::Unit, D2),
            tmeta("g", ty("A"), TypePat::Unit, D2),
        ],
        vec![PremiseSpec::ForEachEffect {
            binder: "T",
            pat: eq(
                Weak,
                comp(lookup("T"), t("f")),
                comp(lookup("T"), t("g")),
            ),
        }],
        vec![eq(Strong, t("f"), t("g"))],
        vec![SideCond::TargetIsUnit("f")],
    ));
    rules.push(c.rule(
        "ax-lookup-update",
        vec![nmeta("T")],
        vec![],
        vec![eq(
            Weak,
            comp(lookup("T"), update("T")),
            TermPat::Id(vt("T")),
        )],
        vec![],
    ));
    rules.push(c.rule(
        "ax-lookup-update-neq",
        vec![nmeta("T"), nmeta("R")],
        vec![],
        vec![eq(
            Weak,
            comp(lookup("R"), update("T")),
            comp(lookup("R"), TermPat::Final(vt("T"))),
        )],
        vec![SideCond::NamesDistinct("T", "R")],
    ));
    rules
}

/// The propagator composition and the left/right pairs available for
/// exceptions under extensivity.
fn exc_plus_extra(c: &Ctx) -> Vec<RuleDescriptor> {
    let mut rules = Vec::new();
    rules.push(c.rule(
        "prop-comp",
        vec![
            tymeta("A"),
            tymeta("B"),
            tymeta("C"),
            tmeta("f", ty("A"), ty("B"), D1),
            tmeta("g", ty("B"), ty("C"), D2),
        ],
        vec![],
        vec![
            term_concl(pcomp(t("g"), t("f")), DecoPat::Any),
            eq(Weak, pcomp(t("g"), t("f")), comp(t("g"), t("f"))),
        ],
        vec![],
    ));
    for (name, kind, d1, d2, s1, s2) in [
        ("l-pair", PairKind::Left, D0, D1, Order, Weak),
        ("r-pair", PairKind::Right, D1, D0, Weak, Order),
    ] {
        let pr = |a, b| pair(kind, a, b);
        let law = |strength: Strength, pos: Pos, leg: &str| {
            eq(
                strength,
                comp(proj(pos, ty("B1"), ty("B2")), pr(t("f1"), t("f2"))),
                t(leg),
            )
        };
        rules.push(c.rule(
            name,
            vec![
                tymeta("A"),
                tymeta("B1"),
                tymeta("B2"),
                tmeta("f1", ty("A"), ty("B1"), d1),
                tmeta("f2", ty("A"), ty("B2"), d2),
            ],
            vec![],
            vec![
                term_concl(pr(t("f1"), t("f2")), DecoPat::Any),
                law(s1, Pos::First, "f1"),
                law(s2, Pos::Second, "f2"),
            ],
            vec![],
        ));
        let uname: &'static str = match kind {
            PairKind::Left => "l-pair-u",
            _ => "r-pair-u",
        };
        // uniqueness premises: the order law on the pure leg, a strong
        // equation on the propagator leg
        let (p1, p2) = match kind {
            PairKind::Left => (
                eq(Order, comp(proj(Pos::First, ty("B1"), ty("B2")), t("g")), t("f1")),
                eq(Strong, comp(proj(Pos::Second, ty("B1"), ty("B2")), t("g")), t("f2")),
            ),
            _ => (
                eq(Strong, comp(proj(Pos::First, ty("B1"), ty("B2")), t("g")), t("f1")),
                eq(Order, comp(proj(Pos::Second, ty("B1"), ty("B2")), t("g")), t("f2")),
            ),
        };
        rules.push(c.rule(
            uname,
            vec![
                tymeta("A"),
                tymeta("B1"),
                tymeta("B2"),
                tmeta("f1", ty("A"), ty("B1"), d1),
                tmeta("f2", ty("A"), ty("B2"), d2),
                tmeta(
                    "g",
                    ty("A"),
                    TypePat::Prod(Box::new(ty("B1")), Box::new(ty("B2"))),
                    D1,
                ),
            ],
            vec![PremiseSpec::Eq(p1), PremiseSpec::Eq(p2)],
            vec![eq(Strong, t("g"), pr(t("f1"), t("f2")))],
            vec![],
        ));
    }
    rules
}

/// The exact rule set of a profile, in catalog order.
pub fn rule_catalog(profile: ProfileName) -> Vec<RuleDescriptor> {
    match profile {
        ProfileName::Eq => eq_catalog(),
        ProfileName::Mon => {
            let c = Ctx { profiles: vec![ProfileName::Mon, ProfileName::Exc, ProfileName::ExcPlus] };
            mon_core(&c)
        }
        ProfileName::Comon => {
            let c = Ctx { profiles: vec![ProfileName::Comon, ProfileName::St] };
            comon_core(&c, false)
        }
        ProfileName::Exc => {
            let core = Ctx { profiles: vec![ProfileName::Mon, ProfileName::Exc, ProfileName::ExcPlus] };
            let extra = Ctx { profiles: vec![ProfileName::Exc, ProfileName::ExcPlus] };
            let mut rules = mon_core(&core);
            rules.extend(exc_extra(&extra));
            rules
        }
        ProfileName::ExcPlus => {
            let core = Ctx { profiles: vec![ProfileName::Mon, ProfileName::Exc, ProfileName::ExcPlus] };
            let extra = Ctx { profiles: vec![ProfileName::Exc, ProfileName::ExcPlus] };
            let plus = Ctx { profiles: vec![ProfileName::ExcPlus] };
            let mut rules = mon_core(&core);
            rules.extend(exc_extra(&extra));
            rules.extend(exc_plus_extra(&plus));
            rules
        }
        ProfileName::St => {
            let core = Ctx { profiles: vec![ProfileName::Comon, ProfileName::St] };
            let extra = Ctx { profiles: vec![ProfileName::St, ProfileName::StPlus] };
            let mut rules = comon_core(&core, false);
            rules.extend(st_extra(&extra));
            rules
        }
        ProfileName::StPlus => {
            // the symmetric copair rules widen to modifiers; names stay
            let core = Ctx { profiles: vec![ProfileName::StPlus] };
            let extra = Ctx { profiles: vec![ProfileName::St, ProfileName::StPlus] };
            let mut rules = comon_core(&core, true);
            rules.extend(st_extra(&extra));
            rules
        }
    }
}

/// Looks up a rule by name within a profile catalog.
pub fn find_rule(profile: ProfileName, name: &str) -> Option<RuleDescriptor> {
    rule_catalog(profile).into_iter().find(|r| r.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_cardinalities() {
        assert_eq!(rule_catalog(ProfileName::Eq).len(), 20);
        assert_eq!(rule_catalog(ProfileName::Mon).len(), 29);
        assert_eq!(rule_catalog(ProfileName::Comon).len(), 29);
        assert_eq!(rule_catalog(ProfileName::Exc).len(), 38);
        assert_eq!(rule_catalog(ProfileName::ExcPlus).len(), 43);
        assert_eq!(rule_catalog(ProfileName::St).len(), 37);
        assert_eq!(rule_catalog(ProfileName::StPlus).len(), 37);
    }

    #[test]
    fn names_are_unique_within_each_catalog() {
        for p in crate::profile::ALL_PROFILES {
            let catalog = rule_catalog(p);
            let mut names: Vec<&str> = catalog.iter().map(|r| r.name).collect();
            names.sort();
            let before = names.len();
            names.dedup();
            assert_eq!(before, names.len(), "duplicate rule name in {p}");
        }
    }

    #[test]
    fn side_conditions_differ_across_the_duality() {
        let mon = find_rule(ProfileName::Mon, "w-subs").unwrap();
        let comon = find_rule(ProfileName::Comon, "w-subs").unwrap();
        let bound = |r: &RuleDescriptor, m: &str| match &r.meta(m).unwrap().kind {
            MetaKind::Term { max_deco, .. } => *max_deco,
            _ => panic!("not a term meta"),
        };
        assert_eq!(bound(&mon, "f"), D0);
        assert_eq!(bound(&comon, "f"), D2);
        let mon = find_rule(ProfileName::Mon, "w-repl").unwrap();
        let comon = find_rule(ProfileName::Comon, "w-repl").unwrap();
        assert_eq!(bound(&mon, "g"), D2);
        assert_eq!(bound(&comon, "g"), D0);
    }

    #[test]
    fn st_plus_widens_the_symmetric_copair() {
        let st = find_rule(ProfileName::St, "copair").unwrap();
        let stp = find_rule(ProfileName::StPlus, "copair").unwrap();
        let bound = |r: &RuleDescriptor, m: &str| match &r.meta(m).unwrap().kind {
            MetaKind::Term { max_deco, .. } => *max_deco,
            _ => panic!("not a term meta"),
        };
        assert_eq!(bound(&st, "f1"), D0);
        assert_eq!(bound(&stp, "f1"), D2);
    }

    #[test]
    fn exc_has_the_effect_rule_and_axiom_schemas() {
        for name in ["effect", "exc-coprod-u", "ax-untag-tag", "ax-untag-tag-neq", "ax-untagall-tag", "l-copair", "r-copair-u"] {
            assert!(find_rule(ProfileName::Exc, name).is_some(), "missing {name}");
            assert!(find_rule(ProfileName::Mon, name).is_none(), "{name} leaked into MON");
        }
        for name in ["st-effect-u", "st-prod-u", "ax-lookup-update", "l-pair", "r-pair-u"] {
            assert!(find_rule(ProfileName::St, name).is_some(), "missing {name}");
            assert!(find_rule(ProfileName::Comon, name).is_none(), "{name} leaked into COMON");
        }
        for name in ["prop-comp", "l-pair", "l-pair-u"] {
            assert!(find_rule(ProfileName::ExcPlus, name).is_some(), "missing {name}");
        }
        assert!(find_rule(ProfileName::Exc, "prop-comp").is_none());
    }
}
