//! Random term generation over a theory signature.
//!
//! Rule premises need inhabitants, not exhaustive term spaces: the
//! generator draws well-typed terms with a bounded decoration and AST
//! depth from the declared operations plus the structural constants,
//! filtered by the profile's grammar and formation table.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::term::Term;
use crate::theory::Theory;
use crate::types::{Decoration, PairKind, Pos, TypeExpr};

pub struct TermGen<'t> {
    pub theory: &'t Theory,
    pub pool: Vec<TypeExpr>,
}

impl<'t> TermGen<'t> {
    pub fn new(theory: &'t Theory) -> TermGen<'t> {
        let mut pool = vec![TypeExpr::Unit, TypeExpr::Empty];
        for (n, _) in &theory.base_types {
            pool.push(TypeExpr::base(n));
        }
        for (n, _) in &theory.effects {
            pool.push(TypeExpr::effect_val(n));
        }
        TermGen { theory, pool }
    }

    pub fn random_type(&self, rng: &mut ChaCha8Rng) -> TypeExpr {
        self.pool[rng.gen_range(0..self.pool.len())].clone()
    }

    /// A random well-typed term `source -> target` of decoration at most
    /// `max_deco` and depth at most `depth`, if one can be found.
    pub fn gen_typed(
        &self,
        rng: &mut ChaCha8Rng,
        source: &TypeExpr,
        target: &TypeExpr,
        max_deco: Decoration,
        depth: usize,
    ) -> Option<Term> {
        for _ in 0..8 {
            if let Some(t) = self.try_gen(rng, source, target, max_deco, depth) {
                return Some(t);
            }
        }
        None
    }

    fn try_gen(
        &self,
        rng: &mut ChaCha8Rng,
        source: &TypeExpr,
        target: &TypeExpr,
        max_deco: Decoration,
        depth: usize,
    ) -> Option<Term> {
        let profile = self.theory.profile;
        let mut leaves: Vec<Term> = Vec::new();
        if source == target {
            leaves.push(Term::Id(source.clone()));
        }
        if let TypeExpr::Prod(l, r) = source {
            if **l == *target {
                leaves.push(Term::Proj(Pos::First, (**l).clone(), (**r).clone()));
            }
            if **r == *target {
                leaves.push(Term::Proj(Pos::Second, (**l).clone(), (**r).clone()));
            }
        }
        if let TypeExpr::Sum(l, r) = target {
            if **l == *source {
                leaves.push(Term::Copr(Pos::First, (**l).clone(), (**r).clone()));
            }
            if **r == *source {
                leaves.push(Term::Copr(Pos::Second, (**l).clone(), (**r).clone()));
            }
        }
        if *target == TypeExpr::Unit {
            leaves.push(Term::Final(source.clone()));
        }
        if *source == TypeExpr::Empty {
            leaves.push(Term::Initial(target.clone()));
        }
        if profile.has_exception_ops() {
            if let TypeExpr::EffectVal(n) = source {
                if *target == TypeExpr::Empty
                    && max_deco >= Decoration::D1
                    && self.theory.effect(n).is_some()
                {
                    leaves.push(Term::Tag(n.clone()));
                }
            }
            if *source == TypeExpr::Empty && max_deco >= Decoration::D2 {
                if let TypeExpr::EffectVal(n) = target {
                    if self.theory.effect(n).is_some() {
                        leaves.push(Term::Untag(n.clone()));
                    }
                }
                if *target == TypeExpr::Unit && max_deco >= Decoration::D2 {
                    leaves.push(Term::UntagAll);
                }
            }
        }
        if profile.has_state_ops() {
            if *source == TypeExpr::Unit && max_deco >= Decoration::D1 {
                if let TypeExpr::EffectVal(n) = target {
                    if self.theory.effect(n).is_some() {
                        leaves.push(Term::Lookup(n.clone()));
                    }
                }
            }
            if *target == TypeExpr::Unit && max_deco >= Decoration::D2 {
                if let TypeExpr::EffectVal(n) = source {
                    if self.theory.effect(n).is_some() {
                        leaves.push(Term::Update(n.clone()));
                    }
                }
            }
        }
        for op in &self.theory.ops {
            if op.source == *source && op.target == *target && op.deco <= max_deco {
                leaves.push(Term::constant(&op.name));
            }
        }

        // at depth 0, or with a coin flip, settle for a leaf
        if depth == 0 || (!leaves.is_empty() && rng.gen_bool(0.4)) {
            if leaves.is_empty() {
                return None;
            }
            return Some(leaves[rng.gen_range(0..leaves.len())].clone());
        }

        let mut attempts: Vec<u8> = vec![0];
        if matches!(target, TypeExpr::Prod(..)) {
            attempts.push(1);
        }
        if matches!(source, TypeExpr::Sum(..)) {
            attempts.push(2);
        }
        if profile.prop_comp_inner_bound().is_some() && max_deco >= Decoration::D1 {
            attempts.push(3);
        }
        let choice = attempts[rng.gen_range(0..attempts.len())];
        match choice {
            // composition through a random mid type
            0 => {
                let mut mids = self.pool.clone();
                mids.push(source.clone());
                mids.push(target.clone());
                let mid = mids[rng.gen_range(0..mids.len())].clone();
                let inner = self.try_gen(rng, source, &mid, max_deco, depth - 1)?;
                let outer = self.try_gen(rng, &mid, target, max_deco, depth - 1)?;
                Some(Term::comp(outer, inner))
            }
            // a pair of whatever kind the profile admits
            1 => {
                let TypeExpr::Prod(b1, b2) = target else { return None };
                let kinds: Vec<PairKind> = [PairKind::Symmetric, PairKind::Left, PairKind::Right]
                    .into_iter()
                    .filter(|k| profile.pair_bounds(*k).is_some())
                    .collect();
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let (m1, m2) = profile.pair_bounds(kind).unwrap();
                let f1 = self.try_gen(rng, source, b1, m1.min(max_deco), depth - 1)?;
                let f2 = self.try_gen(rng, source, b2, m2.min(max_deco), depth - 1)?;
                Some(Term::pair(kind, f1, f2))
            }
            // a copair of whatever kind the profile admits
            2 => {
                let TypeExpr::Sum(a1, a2) = source else { return None };
                if **a2 == TypeExpr::Empty {
                    // the bare copair would retype over a1; skip
                    return None;
                }
                let kinds: Vec<PairKind> = [PairKind::Symmetric, PairKind::Left, PairKind::Right]
                    .into_iter()
                    .filter(|k| profile.copair_bounds(*k).is_some())
                    .collect();
                let kind = kinds[rng.gen_range(0..kinds.len())];
                let (m1, m2) = profile.copair_bounds(kind).unwrap();
                let f1 = self.try_gen(rng, a1, target, m1.min(max_deco), depth - 1)?;
                let f2 = self.try_gen(rng, a2, target, m2.min(max_deco), depth - 1)?;
                Some(Term::copair(kind, f1, f2))
            }
            // outer (.) inner; the outer factor may be a catcher
            _ => {
                let mut mids = self.pool.clone();
                mids.push(target.clone());
                let mid = mids[rng.gen_range(0..mids.len())].clone();
                let inner = self.try_gen(rng, source, &mid, Decoration::D1, depth - 1)?;
                let outer = self.try_gen(rng, &mid, target, Decoration::D2, depth - 1)?;
                Some(Term::prop_comp(outer, inner))
            }
        }
    }

    /// Wraps a term in a semantics-preserving syntactic variation: compose
    /// with an identity, re-associate, or keep as is.
    pub fn identity_wrap(&self, rng: &mut ChaCha8Rng, t: &Term) -> Term {
        use crate::calculus::typecheck;
        let Ok((src, tgt)) = typecheck(t, self.theory) else { return t.clone() };
        let mut variants = vec![
            Term::comp(t.clone(), Term::Id(src)),
            Term::comp(Term::Id(tgt), t.clone()),
            t.clone(),
        ];
        if let Term::Comp(outer, inner) = t {
            if let Term::Comp(o2, i2) = &**outer {
                variants.push(Term::comp(
                    (**o2).clone(),
                    Term::comp((**i2).clone(), (**inner).clone()),
                ));
            }
            if let Term::Comp(o2, i2) = &**inner {
                variants.push(Term::comp(
                    Term::comp((**outer).clone(), (**o2).clone()),
                    (**i2).clone(),
                ));
            }
        }
        variants[rng.gen_range(0..variants.len())].clone()
    }
}

/// A random abstract syntax tree over the profile's grammar, with no
/// typing discipline: used by the parse/pretty round-trip property.
pub fn gen_syntactic_term(rng: &mut ChaCha8Rng, profile: crate::profile::ProfileName, depth: usize) -> Term {
    let names = ["T", "R"];
    let name = |rng: &mut ChaCha8Rng| names[rng.gen_range(0..names.len())].to_string();
    let ty = |rng: &mut ChaCha8Rng, d: usize| gen_syntactic_type(rng, d);
    let consts = ["f", "g", "h", "k", "v"];
    let mut leaves: Vec<u8> = vec![0, 1, 2, 3, 4, 5];
    if profile.has_exception_ops() {
        leaves.extend([6, 7, 8]);
    }
    if profile.has_state_ops() {
        leaves.extend([9, 10]);
    }
    if depth == 0 || rng.gen_bool(0.35) {
        return match leaves[rng.gen_range(0..leaves.len())] {
            0 => Term::Id(ty(rng, 1)),
            1 => Term::Proj(
                if rng.gen_bool(0.5) { Pos::First } else { Pos::Second },
                ty(rng, 1),
                ty(rng, 1),
            ),
            2 => Term::Copr(
                if rng.gen_bool(0.5) { Pos::First } else { Pos::Second },
                ty(rng, 1),
                ty(rng, 1),
            ),
            3 => Term::Final(ty(rng, 1)),
            4 => Term::Initial(ty(rng, 1)),
            5 => Term::constant(consts[rng.gen_range(0..consts.len())]),
            6 => Term::Tag(name(rng)),
            7 => Term::Untag(name(rng)),
            8 => Term::UntagAll,
            9 => Term::Lookup(name(rng)),
            _ => Term::Update(name(rng)),
        };
    }
    let kinds = [PairKind::Symmetric, PairKind::Left, PairKind::Right];
    let kind = kinds[rng.gen_range(0..kinds.len())];
    let mut nodes: Vec<u8> = vec![0, 1, 2];
    if profile.prop_comp_inner_bound().is_some() {
        nodes.push(3);
    }
    match nodes[rng.gen_range(0..nodes.len())] {
        0 => Term::comp(
            gen_syntactic_term(rng, profile, depth - 1),
            gen_syntactic_term(rng, profile, depth - 1),
        ),
        1 => Term::pair(
            kind,
            gen_syntactic_term(rng, profile, depth - 1),
            gen_syntactic_term(rng, profile, depth - 1),
        ),
        2 => Term::copair(
            kind,
            gen_syntactic_term(rng, profile, depth - 1),
            gen_syntactic_term(rng, profile, depth - 1),
        ),
        _ => Term::prop_comp(
            gen_syntactic_term(rng, profile, depth - 1),
            gen_syntactic_term(rng, profile, depth - 1),
        ),
    }
}

pub fn gen_syntactic_type(rng: &mut ChaCha8Rng, depth: usize) -> TypeExpr {
    if depth == 0 || rng.gen_bool(0.5) {
        return match rng.gen_range(0..4) {
            0 => TypeExpr::Unit,
            1 => TypeExpr::Empty,
            2 => TypeExpr::base(["A", "B", "Bool"][rng.gen_range(0..3)]),
            _ => TypeExpr::effect_val(["T", "R"][rng.gen_range(0..2)]),
        };
    }
    let l = gen_syntactic_type(rng, depth - 1);
    let r = gen_syntactic_type(rng, depth - 1);
    if rng.gen_bool(0.5) {
        TypeExpr::prod(l, r)
    } else {
        TypeExpr::sum(l, r)
    }
}
