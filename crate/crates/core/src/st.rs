//! Finite-set model of the state logics.
//!
//! A term `f : A -> B` is interpreted by a total table over `A * S` into
//! `B * S`, where `S` is the product of all declared location carriers.
//! A state-preserving table is (semantically) an accessor; one whose value
//! component is additionally independent of the state is pure. Strong
//! equations compare values and final states, weak equations compare the
//! value components only.

use std::collections::BTreeMap;

use crate::calculus::{check_formation, typecheck};
use crate::error::ModelError;
use crate::profile::ProfileName;
use crate::term::{Equation, Strength, Term};
use crate::theory::{EffectSide, OpRows, StateLit, Theory};
use crate::types::{Decoration, PairKind, Pos, TypeExpr};
use crate::value::{carrier, value_index, Value};
use crate::MAX_FUNCTION_ENUMERATION;

/// A state: one value per declared location, aligned with the theory's
/// location declaration order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StateVal(pub Vec<Value>);

/// A denotation: a total map `A * S -> B * S`. Input `(a, s)` is indexed
/// as `a * |S| + s`, outputs likewise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StDen {
    pub source: TypeExpr,
    pub target: TypeExpr,
    pub src_ord: usize,
    pub tgt_ord: usize,
    pub states: usize,
    pub table: Vec<usize>,
    pub min_deco: Decoration,
}

impl StDen {
    fn new(
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        states: usize,
        table: Vec<usize>,
    ) -> StDen {
        let state_preserving = (0..src_ord).all(|a| {
            (0..states).all(|s| table[a * states + s] % states == s)
        });
        let state_independent = state_preserving
            && (0..src_ord).all(|a| {
                let v0 = table[a * states] / states;
                (0..states).all(|s| table[a * states + s] / states == v0)
            });
        let min_deco = if state_independent {
            Decoration::D0
        } else if state_preserving {
            Decoration::D1
        } else {
            Decoration::D2
        };
        StDen { source, target, src_ord, tgt_ord, states, table, min_deco }
    }

    /// Builds a denotation from a raw table, computing its minimal
    /// decoration. Used by the table-level enumeration checks.
    pub fn from_table(
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        states: usize,
        table: Vec<usize>,
    ) -> StDen {
        StDen::new(source, target, src_ord, tgt_ord, states, table)
    }

    pub fn strong_eq(&self, other: &StDen) -> bool {
        self.source == other.source && self.target == other.target && self.table == other.table
    }

    /// Equality of the value components over every input.
    pub fn weak_eq(&self, other: &StDen) -> bool {
        self.source == other.source
            && self.target == other.target
            && self
                .table
                .iter()
                .zip(&other.table)
                .all(|(&a, &b)| a / self.states == b / other.states)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum StVerdict {
    Holds,
    Fails(StCounterexample),
}

impl StVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, StVerdict::Holds)
    }
}

/// First differing input `(a, s)` in enumeration order, with both outputs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StCounterexample {
    pub input: (Value, StateVal),
    pub lhs: (Value, StateVal),
    pub rhs: (Value, StateVal),
}

/// The model environment: the materialized state space and denotations of
/// declared operations. Immutable after construction.
#[derive(Debug)]
pub struct StEnv<'t> {
    pub theory: &'t Theory,
    /// Location name and carrier, in declaration order.
    pub locations: Vec<(String, Vec<Value>)>,
    pub states: Vec<StateVal>,
    consts: BTreeMap<String, StDen>,
    pub max_carrier: usize,
}

impl StateVal {
    /// Renders with location names, `{X=0, Y=u}`.
    pub fn display(&self, env: &StEnv<'_>) -> String {
        let cells: Vec<String> = env
            .locations
            .iter()
            .zip(&self.0)
            .map(|((n, _), v)| format!("{n}={v}"))
            .collect();
        format!("{{{}}}", cells.join(", "))
    }
}

impl<'t> StEnv<'t> {
    /// Builds the environment: materializes `S` eagerly and validates
    /// every declared operation table.
    pub fn new(
        theory: &'t Theory,
        max_carrier: usize,
        max_states: usize,
    ) -> Result<StEnv<'t>, ModelError> {
        if theory.side == EffectSide::Exceptions {
            return Err(ModelError::WrongSide { expected: "state".to_string() });
        }
        let mut locations = Vec::new();
        let mut total: usize = 1;
        for (name, atoms) in &theory.effects {
            if atoms.len() > max_carrier {
                return Err(ModelError::CarrierTooLarge {
                    ty: format!("V_{name}"),
                    size: atoms.len(),
                    cap: max_carrier,
                });
            }
            total = total.saturating_mul(atoms.len());
            let car: Vec<Value> = atoms.iter().map(|a| Value::atom(a)).collect();
            locations.push((name.clone(), car));
        }
        if total > max_states {
            return Err(ModelError::StateSpaceTooLarge { size: total, cap: max_states });
        }
        // first declared location is the most significant digit
        let mut states = Vec::with_capacity(total);
        let mut idxs = vec![0usize; locations.len()];
        loop {
            states.push(StateVal(
                locations.iter().zip(&idxs).map(|((_, car), &i)| car[i].clone()).collect(),
            ));
            let mut done = true;
            for (slot, (_, car)) in idxs.iter_mut().zip(&locations).rev() {
                *slot += 1;
                if *slot < car.len() {
                    done = false;
                    break;
                }
                *slot = 0;
            }
            if done {
                break;
            }
        }
        debug_assert_eq!(states.len(), total);
        let mut env =
            StEnv { theory, locations, states, consts: BTreeMap::new(), max_carrier };
        let mut consts = BTreeMap::new();
        for op in &theory.ops {
            consts.insert(op.name.clone(), env.build_const(op)?);
        }
        env.consts = consts;
        Ok(env)
    }

    pub fn carrier(&self, ty: &TypeExpr) -> Result<Vec<Value>, ModelError> {
        carrier(self.theory, ty, self.max_carrier)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    fn location_pos(&self, name: &str) -> Option<usize> {
        self.locations.iter().position(|(n, _)| n == name)
    }

    pub fn state_index(&self, s: &StateVal) -> Option<usize> {
        self.states.iter().position(|x| x == s)
    }

    /// Resolves a source-level state literal to a `StateVal`, requiring
    /// exactly the declared locations.
    pub fn resolve_state(&self, lit: &StateLit) -> Result<StateVal, ModelError> {
        let mut cells: Vec<Option<Value>> = vec![None; self.locations.len()];
        for (name, v) in lit {
            let pos = self.location_pos(name).ok_or_else(|| ModelError::UndeclaredType {
                name: format!("location {name}"),
            })?;
            let (_, car) = &self.locations[pos];
            if !car.contains(v) {
                return Err(ModelError::InputOutsideCarrier {
                    input: v.to_string(),
                    ty: format!("V_{name}"),
                });
            }
            if cells[pos].is_some() {
                return Err(ModelError::InvalidConstRow {
                    op: "state literal".to_string(),
                    detail: format!("location {name} given twice"),
                });
            }
            cells[pos] = Some(v.clone());
        }
        let mut out = Vec::with_capacity(cells.len());
        for (cell, (name, _)) in cells.into_iter().zip(&self.locations) {
            match cell {
                Some(v) => out.push(v),
                None => {
                    return Err(ModelError::IncompleteConstTable {
                        op: "state literal".to_string(),
                        missing: format!("location {name}"),
                    })
                }
            }
        }
        Ok(StateVal(out))
    }

    pub fn apply(
        &self,
        den: &StDen,
        a: &Value,
        s: &StateVal,
    ) -> Result<(Value, StateVal), ModelError> {
        let car = self.carrier(&den.source)?;
        let ai = value_index(&car, a).ok_or_else(|| ModelError::InputOutsideCarrier {
            input: a.to_string(),
            ty: den.source.to_string(),
        })?;
        let si = self.state_index(s).ok_or_else(|| ModelError::InputOutsideCarrier {
            input: "state".to_string(),
            ty: "S".to_string(),
        })?;
        let o = den.table[ai * self.state_count() + si];
        let tgt = self.carrier(&den.target)?;
        Ok((tgt[o / self.state_count()].clone(), self.states[o % self.state_count()].clone()))
    }

    fn build_const(&self, op: &crate::theory::OpDecl) -> Result<StDen, ModelError> {
        let src = self.carrier(&op.source)?;
        let tgt = self.carrier(&op.target)?;
        let ns = self.state_count();
        let name = &op.name;
        let mut table: Vec<Option<usize>> = vec![None; src.len() * ns];
        let mut fill = |i: usize, o: usize| -> Result<(), ModelError> {
            if table[i].is_some() {
                return Err(ModelError::DuplicateConstRow {
                    op: name.clone(),
                    input: i.to_string(),
                });
            }
            table[i] = Some(o);
            Ok(())
        };
        let val_idx = |car: &[Value], v: &Value, what: &str| -> Result<usize, ModelError> {
            value_index(car, v).ok_or_else(|| ModelError::InvalidConstRow {
                op: name.clone(),
                detail: format!("{what} {v} is outside its carrier"),
            })
        };
        match (&op.rows, op.deco) {
            (OpRows::Pure(rows), Decoration::D0) => {
                for (a, b) in rows {
                    let ai = val_idx(&src, a, "input")?;
                    let o = val_idx(&tgt, b, "output")?;
                    for s in 0..ns {
                        fill(ai * ns + s, o * ns + s)?;
                    }
                }
            }
            (OpRows::St1(rows), Decoration::D1) => {
                for (a, slit, b) in rows {
                    let ai = val_idx(&src, a, "input")?;
                    let si = self
                        .state_index(&self.resolve_state(slit)?)
                        .expect("resolved state is enumerated");
                    let o = val_idx(&tgt, b, "output")?;
                    fill(ai * ns + si, o * ns + si)?;
                }
            }
            (OpRows::St2(rows), Decoration::D2) => {
                for (a, slit, b, slit2) in rows {
                    let ai = val_idx(&src, a, "input")?;
                    let si = self
                        .state_index(&self.resolve_state(slit)?)
                        .expect("resolved state is enumerated");
                    let o = val_idx(&tgt, b, "output")?;
                    let so = self
                        .state_index(&self.resolve_state(slit2)?)
                        .expect("resolved state is enumerated");
                    fill(ai * ns + si, o * ns + so)?;
                }
            }
            _ => {
                return Err(ModelError::InvalidConstRow {
                    op: name.clone(),
                    detail: format!(
                        "row shape does not match a state-side operation of decoration {}",
                        op.deco
                    ),
                })
            }
        }
        let mut full = Vec::with_capacity(table.len());
        for (i, slot) in table.into_iter().enumerate() {
            match slot {
                Some(o) => full.push(o),
                None => {
                    let a = &src[i / ns];
                    let s = &self.states[i % ns];
                    return Err(ModelError::IncompleteConstTable {
                        op: name.clone(),
                        missing: format!("({a}, {})", s.display(self)),
                    });
                }
            }
        }
        Ok(StDen::new(op.source.clone(), op.target.clone(), src.len(), tgt.len(), ns, full))
    }

    fn fn_table(
        &self,
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> StDen {
        let ns = self.state_count();
        let mut table = Vec::with_capacity(src_ord * ns);
        for a in 0..src_ord {
            for s in 0..ns {
                table.push(f(a, s));
            }
        }
        StDen::new(source, target, src_ord, tgt_ord, ns, table)
    }

    /// State-preserving table from a value function of `(a, s)`.
    fn accessor(
        &self,
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> StDen {
        let ns = self.state_count();
        self.fn_table(source, target, src_ord, tgt_ord, |a, s| f(a, s) * ns + s)
    }

    pub fn compose(&self, outer: &StDen, inner: &StDen) -> Result<StDen, ModelError> {
        if inner.target != outer.source {
            return Err(ModelError::DecorationMismatch {
                detail: format!(
                    "cannot compose: inner target {} differs from outer source {}",
                    inner.target, outer.source
                ),
            });
        }
        let table = inner.table.iter().map(|&i| outer.table[i]).collect();
        Ok(StDen::new(
            inner.source.clone(),
            outer.target.clone(),
            inner.src_ord,
            outer.tgt_ord,
            self.state_count(),
            table,
        ))
    }

    /// Evaluates a term to its table. The term must typecheck and be
    /// formation-valid under `ST_PLUS`.
    pub fn eval(&self, term: &Term) -> Result<StDen, ModelError> {
        typecheck(term, self.theory)?;
        let violations = check_formation(term, ProfileName::StPlus, self.theory)?;
        if let Some(v) = violations.into_iter().next() {
            return Err(ModelError::Formation(v));
        }
        self.eval_rec(term)
    }

    fn eval_rec(&self, term: &Term) -> Result<StDen, ModelError> {
        match term {
            Term::Id(t) => {
                let n = self.carrier(t)?.len();
                Ok(self.accessor(t.clone(), t.clone(), n, n, |a, _| a))
            }
            Term::Comp(outer, inner) => {
                let dg = self.eval_rec(outer)?;
                let df = self.eval_rec(inner)?;
                self.compose(&dg, &df)
            }
            Term::Pair(kind, first, second) => {
                let d1 = self.eval_rec(first)?;
                let d2 = self.eval_rec(second)?;
                self.interp_pair(*kind, &d1, &d2)
            }
            Term::Proj(pos, l, r) => {
                let nl = self.carrier(l)?.len();
                let nr = self.carrier(r)?.len();
                let src = TypeExpr::prod(l.clone(), r.clone());
                let (tgt, tgt_ord) = match pos {
                    Pos::First => (l.clone(), nl),
                    Pos::Second => (r.clone(), nr),
                };
                Ok(self.accessor(src, tgt, nl * nr, tgt_ord, move |a, _| match pos {
                    Pos::First => a / nr,
                    Pos::Second => a % nr,
                }))
            }
            Term::Final(t) => {
                let n = self.carrier(t)?.len();
                Ok(self.accessor(t.clone(), TypeExpr::Unit, n, 1, |_, _| 0))
            }
            Term::Copair(_, first, second) => {
                let d1 = self.eval_rec(first)?;
                let d2 = self.eval_rec(second)?;
                self.interp_copair(&d1, &d2)
            }
            Term::Copr(pos, l, r) => {
                let nl = self.carrier(l)?.len();
                let nr = self.carrier(r)?.len();
                let tgt = TypeExpr::sum(l.clone(), r.clone());
                let (src, n, offset) = match pos {
                    Pos::First => (l.clone(), nl, 0),
                    Pos::Second => (r.clone(), nr, nl),
                };
                Ok(self.accessor(src, tgt, n, nl + nr, move |a, _| offset + a))
            }
            Term::Initial(t) => {
                let n = self.carrier(t)?.len();
                Ok(self.accessor(TypeExpr::Empty, t.clone(), 0, n, |_, _| unreachable!()))
            }
            Term::Lookup(name) => {
                let pos = self.location_pos(name).expect("typechecked lookup name");
                let (_, car) = &self.locations[pos];
                let nv = car.len();
                let car = car.clone();
                let states = self.states.clone();
                Ok(self.accessor(
                    TypeExpr::Unit,
                    TypeExpr::effect_val(name),
                    1,
                    nv,
                    move |_, s| {
                        value_index(&car, &states[s].0[pos]).expect("state cell in carrier")
                    },
                ))
            }
            Term::Update(name) => {
                let pos = self.location_pos(name).expect("typechecked update name");
                let (_, car) = &self.locations[pos];
                let nv = car.len();
                let car = car.clone();
                let states = self.states.clone();
                let state_index: BTreeMap<Vec<Value>, usize> = self
                    .states
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.0.clone(), i))
                    .collect();
                let _ = nv;
                Ok(self.fn_table(
                    TypeExpr::effect_val(name),
                    TypeExpr::Unit,
                    car.len(),
                    1,
                    move |a, s| {
                        let mut cells = states[s].0.clone();
                        cells[pos] = car[a].clone();
                        state_index[&cells]
                    },
                ))
            }
            Term::Const(name) => Ok(self.consts[name.as_str()].clone()),
            Term::Tag(_) | Term::Untag(_) | Term::UntagAll | Term::PropComp(..) => {
                Err(ModelError::WrongSide { expected: "state".to_string() })
            }
        }
    }

    /// The pairing of two denotations. A symmetric pair has both legs
    /// observe the same incoming state; in a left pair the accessor leg
    /// observes the incoming state while the modifier leg runs and
    /// delivers the final state, and mirrored for right pairs.
    pub fn interp_pair(
        &self,
        kind: PairKind,
        d1: &StDen,
        d2: &StDen,
    ) -> Result<StDen, ModelError> {
        if d1.source != d2.source {
            return Err(ModelError::DecorationMismatch {
                detail: "pair legs must share a source".to_string(),
            });
        }
        let ns = self.state_count();
        let b1 = d1.tgt_ord;
        let b2 = d2.tgt_ord;
        let target = TypeExpr::prod(d1.target.clone(), d2.target.clone());
        match kind {
            PairKind::Symmetric => Ok(self.accessor(
                d1.source.clone(),
                target,
                d1.src_ord,
                b1 * b2,
                |a, s| (d1.table[a * ns + s] / ns) * b2 + d2.table[a * ns + s] / ns,
            )),
            PairKind::Left => {
                Ok(self.fn_table(d1.source.clone(), target, d1.src_ord, b1 * b2, |a, s| {
                    let v1 = d1.table[a * ns + s] / ns;
                    let o2 = d2.table[a * ns + s];
                    (v1 * b2 + o2 / ns) * ns + o2 % ns
                }))
            }
            PairKind::Right => {
                Ok(self.fn_table(d1.source.clone(), target, d1.src_ord, b1 * b2, |a, s| {
                    let o1 = d1.table[a * ns + s];
                    let v2 = d2.table[a * ns + s] / ns;
                    ((o1 / ns) * b2 + v2) * ns + o1 % ns
                }))
            }
        }
    }

    /// The case split over `A1 + A2` (or the bare `A1` when the second
    /// leg is sourced at `0`): route by the sum tag under the shared
    /// state, which is the distributivity split.
    pub fn interp_copair(&self, d1: &StDen, d2: &StDen) -> Result<StDen, ModelError> {
        if d1.target != d2.target {
            return Err(ModelError::DecorationMismatch {
                detail: "copair legs must share a target".to_string(),
            });
        }
        let ns = self.state_count();
        let bare = d2.source == TypeExpr::Empty;
        let (source, n1, n2) = if bare {
            (d1.source.clone(), d1.src_ord, 0)
        } else {
            (TypeExpr::sum(d1.source.clone(), d2.source.clone()), d1.src_ord, d2.src_ord)
        };
        Ok(self.fn_table(source, d1.target.clone(), n1 + n2, d1.tgt_ord, |a, s| {
            if a < n1 {
                d1.table[a * ns + s]
            } else {
                d2.table[(a - n1) * ns + s]
            }
        }))
    }

    /// Decides an equation: strong compares values and final states, weak
    /// compares value components only, over every input `(a, s)`.
    pub fn decide(&self, eq: &Equation) -> Result<StVerdict, ModelError> {
        let (ls, lt) = typecheck(&eq.lhs, self.theory)?;
        let (rs, rt) = typecheck(&eq.rhs, self.theory)?;
        if ls != rs || lt != rt {
            let (expected, found) = if ls != rs { (ls, rs) } else { (lt, rt) };
            return Err(ModelError::Type(crate::error::TypeError::TypeMismatch {
                expected,
                found,
                path: vec![],
            }));
        }
        if eq.strength == Strength::Order {
            return Err(ModelError::DecorationMismatch {
                detail: "the partial-function order is an exception-side judgment".to_string(),
            });
        }
        let dl = self.eval(&eq.lhs)?;
        let dr = self.eval(&eq.rhs)?;
        let ns = self.state_count();
        for i in 0..dl.table.len() {
            let differ = match eq.strength {
                Strength::Strong => dl.table[i] != dr.table[i],
                Strength::Weak => dl.table[i] / ns != dr.table[i] / ns,
                Strength::Order => unreachable!(),
            };
            if differ {
                let src = self.carrier(&dl.source)?;
                let tgt = self.carrier(&dl.target)?;
                let input = (src[i / ns].clone(), self.states[i % ns].clone());
                let lo = dl.table[i];
                let ro = dr.table[i];
                return Ok(StVerdict::Fails(StCounterexample {
                    input,
                    lhs: (tgt[lo / ns].clone(), self.states[lo % ns].clone()),
                    rhs: (tgt[ro / ns].clone(), self.states[ro % ns].clone()),
                }));
            }
        }
        Ok(StVerdict::Holds)
    }

    /// Re-extends a denotation known to live at `from` to level `to`:
    /// `0 -> 1` forgets state-dependence bookkeeping, `1 -> 2` re-extends
    /// state-preservingly.
    pub fn lift(&self, from: Decoration, to: Decoration, den: &StDen) -> Result<StDen, ModelError> {
        if from > to {
            return Err(ModelError::IllegalLift { from, to });
        }
        if den.min_deco > from {
            return Err(ModelError::DecorationMismatch {
                detail: format!(
                    "denotation has minimal decoration {}, not within {from}",
                    den.min_deco
                ),
            });
        }
        if from == Decoration::D2 {
            return Ok(den.clone());
        }
        let ns = self.state_count();
        Ok(self.fn_table(
            den.source.clone(),
            den.target.clone(),
            den.src_ord,
            den.tgt_ord,
            |a, s| (den.table[a * ns + s] / ns) * ns + s,
        ))
    }

    /// All modifier tables `A * S -> B * S`, in lexicographic order.
    pub fn modifier_tables(
        &self,
        source: &TypeExpr,
        target: &TypeExpr,
    ) -> Result<Vec<StDen>, ModelError> {
        let ns = self.state_count();
        let n_in = self.carrier(source)?.len() * ns;
        let n_out = self.carrier(target)?.len() * ns;
        enumeration_size(n_out, n_in)?;
        let src_ord = self.carrier(source)?.len();
        let tgt_ord = self.carrier(target)?.len();
        let mut out = Vec::new();
        let mut rows = vec![0usize; n_in];
        loop {
            out.push(StDen::new(
                source.clone(),
                target.clone(),
                src_ord,
                tgt_ord,
                ns,
                rows.clone(),
            ));
            if !bump(&mut rows, n_out) {
                break;
            }
        }
        Ok(out)
    }

    /// All accessor tables (values of `(a, s)`, state preserved).
    pub fn accessor_tables(
        &self,
        source: &TypeExpr,
        target: &TypeExpr,
    ) -> Result<Vec<StDen>, ModelError> {
        let ns = self.state_count();
        let n_in = self.carrier(source)?.len() * ns;
        let tgt_ord = self.carrier(target)?.len();
        enumeration_size(tgt_ord, n_in)?;
        let src_ord = self.carrier(source)?.len();
        let mut out = Vec::new();
        let mut rows = vec![0usize; n_in];
        loop {
            let table: Vec<usize> =
                rows.iter().enumerate().map(|(i, &v)| v * ns + i % ns).collect();
            out.push(StDen::new(source.clone(), target.clone(), src_ord, tgt_ord, ns, table));
            if !bump(&mut rows, tgt_ord) {
                break;
            }
        }
        Ok(out)
    }
}

fn bump(rows: &mut [usize], radix: usize) -> bool {
    for slot in rows.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

fn enumeration_size(radix: usize, digits: usize) -> Result<u128, ModelError> {
    if digits == 0 {
        return Ok(1);
    }
    let mut n: u128 = 1;
    for _ in 0..digits {
        n = n.saturating_mul(radix.max(1) as u128);
        if n > MAX_FUNCTION_ENUMERATION {
            return Err(ModelError::EnumerationTooLarge {
                count: n,
                cap: MAX_FUNCTION_ENUMERATION,
            });
        }
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::{OpDecl, Theory};
    use crate::types::Decoration::*;
    use crate::{DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES};

    fn counter() -> Theory {
        let mut th = Theory::states_for_test("counter");
        th.effects.push(("X".into(), vec!["0".into(), "1".into()]));
        th.effects.push(("Y".into(), vec!["u".into(), "v".into()]));
        th
    }

    fn env(th: &Theory) -> StEnv<'_> {
        StEnv::new(th, DEFAULT_MAX_CARRIER, DEFAULT_MAX_STATES).unwrap()
    }

    fn state(env: &StEnv<'_>, x: &str, y: &str) -> StateVal {
        env.resolve_state(&vec![
            ("X".to_string(), Value::atom(x)),
            ("Y".to_string(), Value::atom(y)),
        ])
        .unwrap()
    }

    #[test]
    fn lookup_and_update_semantics() {
        let th = counter();
        let e = env(&th);
        assert_eq!(e.state_count(), 4);
        let lk = e.eval(&Term::lookup("X")).unwrap();
        assert_eq!(lk.min_deco, D1);
        let (v, s) = e.apply(&lk, &Value::Unit, &state(&e, "1", "u")).unwrap();
        assert_eq!(v, Value::atom("1"));
        assert_eq!(s, state(&e, "1", "u"));
        let up = e.eval(&Term::update("X")).unwrap();
        assert_eq!(up.min_deco, D2);
        let (v, s) = e.apply(&up, &Value::atom("0"), &state(&e, "1", "u")).unwrap();
        assert_eq!(v, Value::Unit);
        assert_eq!(s, state(&e, "0", "u"));
        // updating X leaves Y observable unchanged
        let ly = e.eval(&Term::lookup("Y")).unwrap();
        let (v, _) = e
            .apply(&ly, &Value::Unit, &state(&e, "0", "v"))
            .unwrap();
        assert_eq!(v, Value::atom("v"));
    }

    #[test]
    fn state_axioms() {
        let th = counter();
        let e = env(&th);
        let round = Term::comp(Term::lookup("X"), Term::update("X"));
        let idx = Term::Id(TypeExpr::effect_val("X"));
        assert!(e.decide(&Equation::weak(round.clone(), idx.clone())).unwrap().holds());
        match e.decide(&Equation::strong(round, idx)).unwrap() {
            StVerdict::Fails(cex) => {
                // first differing input in enumeration order: value 0, state {X=1, Y=u}
                assert_eq!(cex.input.0, Value::atom("0"));
                assert_eq!(cex.input.1, state(&e, "1", "u"));
                assert_eq!(cex.lhs.1, state(&e, "0", "u"));
                assert_eq!(cex.rhs.1, state(&e, "1", "u"));
            }
            StVerdict::Holds => panic!("strong lookup-update round-trip should fail"),
        }
        let lhs = Term::comp(Term::lookup("Y"), Term::update("X"));
        let rhs = Term::comp(Term::lookup("Y"), Term::Final(TypeExpr::effect_val("X")));
        assert!(e.decide(&Equation::weak(lhs, rhs)).unwrap().holds());
    }

    #[test]
    fn composition_threads_state() {
        let th = counter();
        let e = env(&th);
        let t = Term::comp(Term::lookup("X"), Term::update("X"));
        let den = e.eval(&t).unwrap();
        let (v, s) = e.apply(&den, &Value::atom("0"), &state(&e, "1", "u")).unwrap();
        assert_eq!(v, Value::atom("0"));
        assert_eq!(s, state(&e, "0", "u"));
    }

    #[test]
    fn left_pair_threads_the_modifier_state() {
        let th = counter();
        let e = env(&th);
        // lpair(lookup[X], update[Y] . (final; const)) needs matching sources;
        // use lpair(lookup[X], write-v) with both sourced at 1
        let write = Term::comp(
            Term::update("Y"),
            Term::comp(Term::lookup("Y"), Term::Id(TypeExpr::Unit)),
        );
        // write re-writes Y with its own value: a modifier that preserves
        // semantics but exercises the split
        let lp = Term::pair(PairKind::Left, Term::lookup("X"), write);
        let den = e.eval(&lp).unwrap();
        let (v, s) = e.apply(&den, &Value::Unit, &state(&e, "1", "v")).unwrap();
        assert_eq!(v, Value::pair(Value::atom("1"), Value::Unit));
        assert_eq!(s, state(&e, "1", "v"));
    }

    #[test]
    fn pure_ops_extend_to_all_states() {
        let mut th = counter();
        th.base_types.push(("B".into(), vec!["x".into(), "y".into()]));
        th.ops.push(OpDecl {
            name: "swap".into(),
            source: TypeExpr::base("B"),
            target: TypeExpr::base("B"),
            deco: D0,
            rows: OpRows::Pure(vec![
                (Value::atom("x"), Value::atom("y")),
                (Value::atom("y"), Value::atom("x")),
            ]),
        });
        let e = env(&th);
        let den = e.eval(&Term::constant("swap")).unwrap();
        assert_eq!(den.min_deco, D0);
        let (v, s) = e.apply(&den, &Value::atom("x"), &state(&e, "0", "v")).unwrap();
        assert_eq!(v, Value::atom("y"));
        assert_eq!(s, state(&e, "0", "v"));
    }

    #[test]
    fn lift_is_re_extension() {
        let th = counter();
        let e = env(&th);
        let lk = e.eval(&Term::lookup("X")).unwrap();
        let lifted = e.lift(D1, D2, &lk).unwrap();
        assert_eq!(lifted.table, lk.table);
        // the lifted accessor still preserves every state
        let (_, s) = e.apply(&lifted, &Value::Unit, &state(&e, "0", "v")).unwrap();
        assert_eq!(s, state(&e, "0", "v"));
        assert_eq!(e.lift(D2, D2, &lk).unwrap(), lk);
        let up = e.eval(&Term::update("X")).unwrap();
        assert!(matches!(e.lift(D2, D1, &up), Err(ModelError::IllegalLift { .. })));
        assert!(matches!(e.lift(D1, D2, &up), Err(ModelError::DecorationMismatch { .. })));
    }

    #[test]
    fn state_space_cap() {
        let mut th = counter();
        th.effects.push(("Z".into(), (0..16).map(|i| i.to_string()).collect()));
        let err = StEnv::new(&th, DEFAULT_MAX_CARRIER, 32).unwrap_err();
        assert!(matches!(err, ModelError::StateSpaceTooLarge { size: 64, cap: 32 }));
    }
}
