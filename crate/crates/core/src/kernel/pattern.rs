//! First-order schemas over terms and types, with syntactic matching.
//!
//! Rule schemas use metavariables over terms, types and effect names.
//! Matching is purely structural: a metavariable binds on first sight and
//! must agree on every later occurrence. There is no unification modulo
//! equations.

use std::collections::BTreeMap;
use std::fmt;

use crate::term::{Strength, Term};
use crate::types::{Decoration, PairKind, Pos, TypeExpr};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NameSlot {
    Meta(String),
    Lit(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TypePat {
    Meta(String),
    Unit,
    Empty,
    Prod(Box<TypePat>, Box<TypePat>),
    Sum(Box<TypePat>, Box<TypePat>),
    EffectVal(NameSlot),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TermPat {
    Meta(String),
    Id(TypePat),
    Comp(Box<TermPat>, Box<TermPat>),
    PropComp(Box<TermPat>, Box<TermPat>),
    Pair(PairKind, Box<TermPat>, Box<TermPat>),
    Proj(Pos, TypePat, TypePat),
    Final(TypePat),
    Copair(PairKind, Box<TermPat>, Box<TermPat>),
    Copr(Pos, TypePat, TypePat),
    Initial(TypePat),
    Tag(NameSlot),
    Untag(NameSlot),
    UntagAll,
    Lookup(NameSlot),
    Update(NameSlot),
}

/// Decoration constraint on a term-judgment conclusion.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DecoPat {
    Any,
    Exact(Decoration),
}

/// A judgment schema: either a term judgment or an equation of fixed
/// strength.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum JudgPat {
    Term { term: TermPat, deco: DecoPat },
    Eq { strength: Strength, lhs: TermPat, rhs: TermPat },
}

/// Metavariable bindings accumulated during matching.
#[derive(Clone, Default, Debug)]
pub struct Bindings {
    pub terms: BTreeMap<String, Term>,
    pub types: BTreeMap<String, TypeExpr>,
    pub names: BTreeMap<String, String>,
}

impl Bindings {
    pub fn bind_term(&mut self, meta: &str, t: &Term) -> bool {
        match self.terms.get(meta) {
            Some(prev) => prev == t,
            None => {
                self.terms.insert(meta.to_string(), t.clone());
                true
            }
        }
    }

    pub fn bind_type(&mut self, meta: &str, t: &TypeExpr) -> bool {
        match self.types.get(meta) {
            Some(prev) => prev == t,
            None => {
                self.types.insert(meta.to_string(), t.clone());
                true
            }
        }
    }

    pub fn bind_name(&mut self, meta: &str, n: &str) -> bool {
        match self.names.get(meta) {
            Some(prev) => prev == n,
            None => {
                self.names.insert(meta.to_string(), n.to_string());
                true
            }
        }
    }
}

pub fn match_name(pat: &NameSlot, name: &str, b: &mut Bindings) -> bool {
    match pat {
        NameSlot::Meta(m) => b.bind_name(m, name),
        NameSlot::Lit(l) => l == name,
    }
}

pub fn match_type(pat: &TypePat, ty: &TypeExpr, b: &mut Bindings) -> bool {
    match (pat, ty) {
        (TypePat::Meta(m), _) => b.bind_type(m, ty),
        (TypePat::Unit, TypeExpr::Unit) => true,
        (TypePat::Empty, TypeExpr::Empty) => true,
        (TypePat::Prod(pl, pr), TypeExpr::Prod(l, r)) => {
            match_type(pl, l, b) && match_type(pr, r, b)
        }
        (TypePat::Sum(pl, pr), TypeExpr::Sum(l, r)) => {
            match_type(pl, l, b) && match_type(pr, r, b)
        }
        (TypePat::EffectVal(slot), TypeExpr::EffectVal(n)) => match_name(slot, n, b),
        _ => false,
    }
}

pub fn match_term(pat: &TermPat, term: &Term, b: &mut Bindings) -> bool {
    match (pat, term) {
        (TermPat::Meta(m), _) => b.bind_term(m, term),
        (TermPat::Id(tp), Term::Id(t)) => match_type(tp, t, b),
        (TermPat::Comp(po, pi), Term::Comp(o, i)) => {
            match_term(po, o, b) && match_term(pi, i, b)
        }
        (TermPat::PropComp(po, pi), Term::PropComp(o, i)) => {
            match_term(po, o, b) && match_term(pi, i, b)
        }
        (TermPat::Pair(pk, p1, p2), Term::Pair(k, a, c)) if pk == k => {
            match_term(p1, a, b) && match_term(p2, c, b)
        }
        (TermPat::Copair(pk, p1, p2), Term::Copair(k, a, c)) if pk == k => {
            match_term(p1, a, b) && match_term(p2, c, b)
        }
        (TermPat::Proj(pp, pl, pr), Term::Proj(p, l, r)) if pp == p => {
            match_type(pl, l, b) && match_type(pr, r, b)
        }
        (TermPat::Copr(pp, pl, pr), Term::Copr(p, l, r)) if pp == p => {
            match_type(pl, l, b) && match_type(pr, r, b)
        }
        (TermPat::Final(tp), Term::Final(t)) => match_type(tp, t, b),
        (TermPat::Initial(tp), Term::Initial(t)) => match_type(tp, t, b),
        (TermPat::Tag(slot), Term::Tag(n)) => match_name(slot, n, b),
        (TermPat::Untag(slot), Term::Untag(n)) => match_name(slot, n, b),
        (TermPat::UntagAll, Term::UntagAll) => true,
        (TermPat::Lookup(slot), Term::Lookup(n)) => match_name(slot, n, b),
        (TermPat::Update(slot), Term::Update(n)) => match_name(slot, n, b),
        _ => false,
    }
}

/// Instantiates a pattern under complete bindings; `None` when a
/// metavariable is unbound.
pub fn instantiate_type(pat: &TypePat, b: &Bindings) -> Option<TypeExpr> {
    Some(match pat {
        TypePat::Meta(m) => b.types.get(m)?.clone(),
        TypePat::Unit => TypeExpr::Unit,
        TypePat::Empty => TypeExpr::Empty,
        TypePat::Prod(l, r) => {
            TypeExpr::prod(instantiate_type(l, b)?, instantiate_type(r, b)?)
        }
        TypePat::Sum(l, r) => TypeExpr::sum(instantiate_type(l, b)?, instantiate_type(r, b)?),
        TypePat::EffectVal(slot) => TypeExpr::EffectVal(instantiate_name(slot, b)?),
    })
}

pub fn instantiate_name(slot: &NameSlot, b: &Bindings) -> Option<String> {
    match slot {
        NameSlot::Meta(m) => b.names.get(m).cloned(),
        NameSlot::Lit(l) => Some(l.clone()),
    }
}

pub fn instantiate_term(pat: &TermPat, b: &Bindings) -> Option<Term> {
    Some(match pat {
        TermPat::Meta(m) => b.terms.get(m)?.clone(),
        TermPat::Id(t) => Term::Id(instantiate_type(t, b)?),
        TermPat::Comp(o, i) => Term::comp(instantiate_term(o, b)?, instantiate_term(i, b)?),
        TermPat::PropComp(o, i) => {
            Term::prop_comp(instantiate_term(o, b)?, instantiate_term(i, b)?)
        }
        TermPat::Pair(k, a, c) => {
            Term::pair(*k, instantiate_term(a, b)?, instantiate_term(c, b)?)
        }
        TermPat::Copair(k, a, c) => {
            Term::copair(*k, instantiate_term(a, b)?, instantiate_term(c, b)?)
        }
        TermPat::Proj(p, l, r) => {
            Term::Proj(*p, instantiate_type(l, b)?, instantiate_type(r, b)?)
        }
        TermPat::Copr(p, l, r) => {
            Term::Copr(*p, instantiate_type(l, b)?, instantiate_type(r, b)?)
        }
        TermPat::Final(t) => Term::Final(instantiate_type(t, b)?),
        TermPat::Initial(t) => Term::Initial(instantiate_type(t, b)?),
        TermPat::Tag(slot) => Term::Tag(instantiate_name(slot, b)?),
        TermPat::Untag(slot) => Term::Untag(instantiate_name(slot, b)?),
        TermPat::UntagAll => Term::UntagAll,
        TermPat::Lookup(slot) => Term::Lookup(instantiate_name(slot, b)?),
        TermPat::Update(slot) => Term::Update(instantiate_name(slot, b)?),
    })
}

/// Substitutes a literal effect name for a name metavariable, used when a
/// premise family is expanded over the declared names.
pub fn subst_name_in_judg(pat: &JudgPat, meta: &str, name: &str) -> JudgPat {
    match pat {
        JudgPat::Term { term, deco } => {
            JudgPat::Term { term: subst_name_in_term(term, meta, name), deco: *deco }
        }
        JudgPat::Eq { strength, lhs, rhs } => JudgPat::Eq {
            strength: *strength,
            lhs: subst_name_in_term(lhs, meta, name),
            rhs: subst_name_in_term(rhs, meta, name),
        },
    }
}

fn subst_slot(slot: &NameSlot, meta: &str, name: &str) -> NameSlot {
    match slot {
        NameSlot::Meta(m) if m == meta => NameSlot::Lit(name.to_string()),
        other => other.clone(),
    }
}

fn subst_name_in_type(pat: &TypePat, meta: &str, name: &str) -> TypePat {
    match pat {
        TypePat::EffectVal(slot) => TypePat::EffectVal(subst_slot(slot, meta, name)),
        TypePat::Prod(l, r) => TypePat::Prod(
            Box::new(subst_name_in_type(l, meta, name)),
            Box::new(subst_name_in_type(r, meta, name)),
        ),
        TypePat::Sum(l, r) => TypePat::Sum(
            Box::new(subst_name_in_type(l, meta, name)),
            Box::new(subst_name_in_type(r, meta, name)),
        ),
        other => other.clone(),
    }
}

fn subst_name_in_term(pat: &TermPat, meta: &str, name: &str) -> TermPat {
    match pat {
        TermPat::Tag(s) => TermPat::Tag(subst_slot(s, meta, name)),
        TermPat::Untag(s) => TermPat::Untag(subst_slot(s, meta, name)),
        TermPat::Lookup(s) => TermPat::Lookup(subst_slot(s, meta, name)),
        TermPat::Update(s) => TermPat::Update(subst_slot(s, meta, name)),
        TermPat::Id(t) => TermPat::Id(subst_name_in_type(t, meta, name)),
        TermPat::Final(t) => TermPat::Final(subst_name_in_type(t, meta, name)),
        TermPat::Initial(t) => TermPat::Initial(subst_name_in_type(t, meta, name)),
        TermPat::Proj(p, l, r) => TermPat::Proj(
            *p,
            subst_name_in_type(l, meta, name),
            subst_name_in_type(r, meta, name),
        ),
        TermPat::Copr(p, l, r) => TermPat::Copr(
            *p,
            subst_name_in_type(l, meta, name),
            subst_name_in_type(r, meta, name),
        ),
        TermPat::Comp(o, i) => TermPat::Comp(
            Box::new(subst_name_in_term(o, meta, name)),
            Box::new(subst_name_in_term(i, meta, name)),
        ),
        TermPat::PropComp(o, i) => TermPat::PropComp(
            Box::new(subst_name_in_term(o, meta, name)),
            Box::new(subst_name_in_term(i, meta, name)),
        ),
        TermPat::Pair(k, a, b) => TermPat::Pair(
            *k,
            Box::new(subst_name_in_term(a, meta, name)),
            Box::new(subst_name_in_term(b, meta, name)),
        ),
        TermPat::Copair(k, a, b) => TermPat::Copair(
            *k,
            Box::new(subst_name_in_term(a, meta, name)),
            Box::new(subst_name_in_term(b, meta, name)),
        ),
        other => other.clone(),
    }
}

impl fmt::Display for TypePat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypePat::Meta(m) => write!(f, "{m}"),
            TypePat::Unit => write!(f, "1"),
            TypePat::Empty => write!(f, "0"),
            TypePat::Prod(l, r) => write!(f, "{l} * {r}"),
            TypePat::Sum(l, r) => write!(f, "{l} + {r}"),
            TypePat::EffectVal(NameSlot::Meta(m)) => write!(f, "V_{m}"),
            TypePat::EffectVal(NameSlot::Lit(l)) => write!(f, "V_{l}"),
        }
    }
}

impl fmt::Display for TermPat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = |s: &NameSlot| match s {
            NameSlot::Meta(m) => m.clone(),
            NameSlot::Lit(l) => l.clone(),
        };
        match self {
            TermPat::Meta(m) => write!(f, "{m}"),
            TermPat::Id(t) => write!(f, "id[{t}]"),
            TermPat::Comp(o, i) => {
                let needs = matches!(**i, TermPat::Comp(..) | TermPat::PropComp(..));
                if needs {
                    write!(f, "{o} . ({i})")
                } else {
                    write!(f, "{o} . {i}")
                }
            }
            TermPat::PropComp(o, i) => write!(f, "{o} (.) {i}"),
            TermPat::Pair(k, a, b) => {
                let head = match k {
                    PairKind::Symmetric => "pair",
                    PairKind::Left => "lpair",
                    PairKind::Right => "rpair",
                };
                write!(f, "{head}({a}, {b})")
            }
            TermPat::Copair(k, a, b) => {
                let head = match k {
                    PairKind::Symmetric => "copair",
                    PairKind::Left => "lcopair",
                    PairKind::Right => "rcopair",
                };
                write!(f, "{head}({a} | {b})")
            }
            TermPat::Proj(p, l, r) => write!(f, "pr{}[{l}, {r}]", p.index()),
            TermPat::Copr(p, l, r) => write!(f, "in{}[{l}, {r}]", p.index()),
            TermPat::Final(t) => write!(f, "final[{t}]"),
            TermPat::Initial(t) => write!(f, "initial[{t}]"),
            TermPat::Tag(s) => write!(f, "tag[{}]", name(s)),
            TermPat::Untag(s) => write!(f, "untag[{}]", name(s)),
            TermPat::UntagAll => write!(f, "untagall"),
            TermPat::Lookup(s) => write!(f, "lookup[{}]", name(s)),
            TermPat::Update(s) => write!(f, "update[{}]", name(s)),
        }
    }
}

impl fmt::Display for JudgPat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JudgPat::Term { term, deco: DecoPat::Exact(d) } => write!(f, "{term} deco {d}"),
            JudgPat::Term { term, deco: DecoPat::Any } => write!(f, "{term}"),
            JudgPat::Eq { strength, lhs, rhs } => write!(f, "{lhs} {strength} {rhs}"),
        }
    }
}
