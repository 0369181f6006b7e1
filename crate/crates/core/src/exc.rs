//! Finite-set model of the exception logics.
//!
//! A term `f : A -> B` is interpreted by a total table over `A + E` into
//! `B + E`, where `E` is the disjoint union of all declared exception
//! carriers. Tables are dense arrays indexed by the canonical enumeration:
//! the ordinary values of `A` first, then the packets of `E` in
//! declaration order. A table that fixes every packet is (semantically) a
//! propagator; one that additionally sends ordinaries to ordinaries is
//! pure. Strong equations compare whole tables, weak equations compare
//! only the rows of ordinary inputs.

use std::collections::BTreeMap;

use crate::calculus::{check_formation, typecheck};
use crate::error::ModelError;
use crate::profile::ProfileName;
use crate::term::{Equation, Strength, Term};
use crate::theory::{EffectSide, ExcRowIn, ExcRowOut, OpRows, Theory};
use crate::types::{Decoration, PairKind, Pos, TypeExpr};
use crate::value::{carrier, value_index, Packet, Point, Value};
use crate::MAX_FUNCTION_ENUMERATION;

/// A denotation: a total map `A + E -> B + E` with its recorded minimal
/// decoration. `src_ord`/`tgt_ord` are the numbers of ordinary inputs and
/// outputs; packet rows follow the ordinary ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExcDen {
    pub source: TypeExpr,
    pub target: TypeExpr,
    pub src_ord: usize,
    pub tgt_ord: usize,
    pub table: Vec<usize>,
    pub min_deco: Decoration,
}

impl ExcDen {
    fn new(
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        table: Vec<usize>,
    ) -> ExcDen {
        let npk = table.len() - src_ord;
        let packets_fixed =
            (0..npk).all(|k| table[src_ord + k] == tgt_ord + k);
        let ordinaries_ordinary = table[..src_ord].iter().all(|&o| o < tgt_ord);
        let min_deco = if packets_fixed && ordinaries_ordinary {
            Decoration::D0
        } else if packets_fixed {
            Decoration::D1
        } else {
            Decoration::D2
        };
        ExcDen { source, target, src_ord, tgt_ord, table, min_deco }
    }

    pub fn packet_count(&self) -> usize {
        self.table.len() - self.src_ord
    }

    /// Builds a denotation from a raw table, computing its minimal
    /// decoration. Used by the table-level enumeration checks.
    pub fn from_table(
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        table: Vec<usize>,
    ) -> ExcDen {
        ExcDen::new(source, target, src_ord, tgt_ord, table)
    }

    /// Equality of the full level-2 tables.
    pub fn strong_eq(&self, other: &ExcDen) -> bool {
        self.source == other.source && self.target == other.target && self.table == other.table
    }

    /// Equality on ordinary inputs only.
    pub fn weak_eq(&self, other: &ExcDen) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.table[..self.src_ord] == other.table[..other.src_ord]
    }
}

/// The exceptional part of a propagator: its domain of definition with the
/// normal restriction, and the complementary inputs with the packets they
/// raise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    pub defined: Vec<(Value, Value)>,
    pub abrupt: Vec<(Value, Packet)>,
}

impl Decomposition {
    /// The domain of definition.
    pub fn d_f(&self) -> Vec<&Value> {
        self.defined.iter().map(|(a, _)| a).collect()
    }

    /// The inputs on which the propagator raises.
    pub fn e_f(&self) -> Vec<&Value> {
        self.abrupt.iter().map(|(a, _)| a).collect()
    }
}

/// Outcome of deciding an equation exhaustively.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ExcVerdict {
    Holds,
    Fails(ExcCounterexample),
}

impl ExcVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ExcVerdict::Holds)
    }
}

/// First differing input in enumeration order, with both outputs.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExcCounterexample {
    pub input: Point,
    pub lhs: Point,
    pub rhs: Point,
}

/// The model environment: packet enumeration and denotations of declared
/// operations. Immutable after construction; evaluation is pure.
#[derive(Debug)]
pub struct ExcEnv<'t> {
    pub theory: &'t Theory,
    pub packets: Vec<Packet>,
    consts: BTreeMap<String, ExcDen>,
    pub max_carrier: usize,
}

impl<'t> ExcEnv<'t> {
    /// Builds the environment: enumerates `E`, installs `tag`/`untag`
    /// semantics, and validates every declared operation table.
    pub fn new(theory: &'t Theory, max_carrier: usize) -> Result<ExcEnv<'t>, ModelError> {
        if theory.side == EffectSide::States {
            return Err(ModelError::WrongSide { expected: "exception".to_string() });
        }
        let mut packets = Vec::new();
        for (name, atoms) in &theory.effects {
            if atoms.len() > max_carrier {
                return Err(ModelError::CarrierTooLarge {
                    ty: format!("V_{name}"),
                    size: atoms.len(),
                    cap: max_carrier,
                });
            }
            for a in atoms {
                packets.push(Packet::new(name, Value::atom(a)));
            }
        }
        let mut env = ExcEnv { theory, packets, consts: BTreeMap::new(), max_carrier };
        let mut consts = BTreeMap::new();
        for op in &theory.ops {
            let den = env.build_const(op)?;
            consts.insert(op.name.clone(), den);
        }
        env.consts = consts;
        Ok(env)
    }

    pub fn carrier(&self, ty: &TypeExpr) -> Result<Vec<Value>, ModelError> {
        carrier(self.theory, ty, self.max_carrier)
    }

    /// Offset of the first packet of exception `name` within `E`.
    fn packet_base(&self, name: &str) -> Option<usize> {
        self.packets.iter().position(|p| p.name == name)
    }

    pub fn packet_index(&self, p: &Packet) -> Option<usize> {
        self.packets.iter().position(|q| q == p)
    }

    /// All points of `ty + E` in enumeration order.
    pub fn points(&self, ty: &TypeExpr) -> Result<Vec<Point>, ModelError> {
        let mut out: Vec<Point> =
            self.carrier(ty)?.into_iter().map(Point::Ord).collect();
        out.extend(self.packets.iter().cloned().map(Point::Exc));
        Ok(out)
    }

    pub fn point_index(&self, ty: &TypeExpr, p: &Point) -> Result<usize, ModelError> {
        let car = self.carrier(ty)?;
        match p {
            Point::Ord(v) => value_index(&car, v).ok_or_else(|| ModelError::InputOutsideCarrier {
                input: v.to_string(),
                ty: ty.to_string(),
            }),
            Point::Exc(pk) => self
                .packet_index(pk)
                .map(|k| car.len() + k)
                .ok_or_else(|| ModelError::InputOutsideCarrier {
                    input: pk.to_string(),
                    ty: ty.to_string(),
                }),
        }
    }

    pub fn point_at(&self, ty: &TypeExpr, idx: usize) -> Result<Point, ModelError> {
        let car = self.carrier(ty)?;
        if idx < car.len() {
            Ok(Point::Ord(car[idx].clone()))
        } else {
            Ok(Point::Exc(self.packets[idx - car.len()].clone()))
        }
    }

    /// Applies a denotation to a point.
    pub fn apply(&self, den: &ExcDen, p: &Point) -> Result<Point, ModelError> {
        let i = self.point_index(&den.source, p)?;
        self.point_at(&den.target, den.table[i])
    }

    fn build_const(&self, op: &crate::theory::OpDecl) -> Result<ExcDen, ModelError> {
        let src = self.carrier(&op.source)?;
        let tgt = self.carrier(&op.target)?;
        let npk = self.packets.len();
        let name = &op.name;
        let out_index = |o: &ExcRowOut| -> Result<usize, ModelError> {
            match o {
                ExcRowOut::Ok(v) => value_index(&tgt, v).ok_or_else(|| {
                    ModelError::InvalidConstRow {
                        op: name.clone(),
                        detail: format!("output {v} is not in the carrier of {}", op.target),
                    }
                }),
                ExcRowOut::Raise(t, v) => {
                    let pk = Packet::new(t, v.clone());
                    self.packet_index(&pk)
                        .map(|k| tgt.len() + k)
                        .ok_or_else(|| ModelError::InvalidConstRow {
                            op: name.clone(),
                            detail: format!("raised {pk} is not a declared exception value"),
                        })
                }
            }
        };
        let mut table: Vec<Option<usize>> = vec![None; src.len() + npk];
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
        match (&op.rows, op.deco) {
            (OpRows::Pure(rows), Decoration::D0) => {
                for (a, b) in rows {
                    let i = value_index(&src, a).ok_or_else(|| ModelError::InvalidConstRow {
                        op: name.clone(),
                        detail: format!("input {a} is not in the carrier of {}", op.source),
                    })?;
                    let o = value_index(&tgt, b).ok_or_else(|| ModelError::InvalidConstRow {
                        op: name.clone(),
                        detail: format!("output {b} is not in the carrier of {}", op.target),
                    })?;
                    fill(i, o)?;
                }
                // pure rows extend by eta then packet-fixing
                for k in 0..npk {
                    fill(src.len() + k, tgt.len() + k)?;
                }
            }
            (OpRows::Exc1(rows), Decoration::D1) => {
                for (a, out) in rows {
                    let i = value_index(&src, a).ok_or_else(|| ModelError::InvalidConstRow {
                        op: name.clone(),
                        detail: format!("input {a} is not in the carrier of {}", op.source),
                    })?;
                    fill(i, out_index(out)?)?;
                }
                for k in 0..npk {
                    fill(src.len() + k, tgt.len() + k)?;
                }
            }
            (OpRows::Exc2(rows), Decoration::D2) => {
                for (inp, out) in rows {
                    let i = match inp {
                        ExcRowIn::Ord(a) => {
                            value_index(&src, a).ok_or_else(|| ModelError::InvalidConstRow {
                                op: name.clone(),
                                detail: format!("input {a} is not in the carrier of {}", op.source),
                            })?
                        }
                        ExcRowIn::Packet(t, v) => {
                            let pk = Packet::new(t, v.clone());
                            src.len()
                                + self.packet_index(&pk).ok_or_else(|| {
                                    ModelError::InvalidConstRow {
                                        op: name.clone(),
                                        detail: format!("{pk} is not a declared exception value"),
                                    }
                                })?
                        }
                    };
                    fill(i, out_index(out)?)?;
                }
            }
            _ => {
                return Err(ModelError::InvalidConstRow {
                    op: name.clone(),
                    detail: format!(
                        "row shape does not match an exception-side operation of decoration {}",
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
                    let missing = if i < src.len() {
                        src[i].to_string()
                    } else {
                        self.packets[i - src.len()].to_string()
                    };
                    return Err(ModelError::IncompleteConstTable { op: name.clone(), missing });
                }
            }
        }
        Ok(ExcDen::new(op.source.clone(), op.target.clone(), src.len(), tgt.len(), full))
    }

    /// Identity-on-packets table built from ordinary rows.
    fn rows_table(
        &self,
        source: TypeExpr,
        target: TypeExpr,
        src_ord: usize,
        tgt_ord: usize,
        rows: impl Iterator<Item = usize>,
    ) -> ExcDen {
        let npk = self.packets.len();
        let mut table: Vec<usize> = rows.collect();
        debug_assert_eq!(table.len(), src_ord);
        table.extend((0..npk).map(|k| tgt_ord + k));
        ExcDen::new(source, target, src_ord, tgt_ord, table)
    }

    /// Table composition `outer . inner`.
    pub fn compose(&self, outer: &ExcDen, inner: &ExcDen) -> Result<ExcDen, ModelError> {
        if inner.target != outer.source {
            return Err(ModelError::DecorationMismatch {
                detail: format!(
                    "cannot compose: inner target {} differs from outer source {}",
                    inner.target, outer.source
                ),
            });
        }
        let table = inner.table.iter().map(|&i| outer.table[i]).collect();
        Ok(ExcDen::new(
            inner.source.clone(),
            outer.target.clone(),
            inner.src_ord,
            outer.tgt_ord,
            table,
        ))
    }

    /// Evaluates a term to its level-2 table. The term must typecheck and
    /// be formation-valid under `EXC_PLUS`.
    pub fn eval(&self, term: &Term) -> Result<ExcDen, ModelError> {
        typecheck(term, self.theory)?;
        let violations = check_formation(term, ProfileName::ExcPlus, self.theory)?;
        if let Some(v) = violations.into_iter().next() {
            return Err(ModelError::Formation(v));
        }
        self.eval_rec(term)
    }

    fn eval_rec(&self, term: &Term) -> Result<ExcDen, ModelError> {
        let npk = self.packets.len();
        match term {
            Term::Id(t) => {
                let n = self.carrier(t)?.len();
                Ok(self.rows_table(t.clone(), t.clone(), n, n, 0..n))
            }
            Term::Comp(outer, inner) => {
                let dg = self.eval_rec(outer)?;
                let df = self.eval_rec(inner)?;
                self.compose(&dg, &df)
            }
            Term::PropComp(outer, inner) => {
                // k (.) f: level-1 composite k2 . f1, re-extended by
                // fixing every packet
                let dk = self.eval_rec(outer)?;
                let df = self.eval_rec(inner)?;
                let composed = self.compose(&dk, &df)?;
                Ok(self.rows_table(
                    composed.source.clone(),
                    composed.target.clone(),
                    composed.src_ord,
                    composed.tgt_ord,
                    composed.table[..composed.src_ord].iter().copied(),
                ))
            }
            Term::Pair(kind, first, second) => {
                let d1 = self.eval_rec(first)?;
                let d2 = self.eval_rec(second)?;
                match kind {
                    PairKind::Symmetric => {
                        let b2 = d2.tgt_ord;
                        let rows = (0..d1.src_ord)
                            .map(|i| d1.table[i] * b2 + d2.table[i])
                            .collect::<Vec<_>>();
                        Ok(self.rows_table(
                            d1.source.clone(),
                            TypeExpr::prod(d1.target.clone(), d2.target.clone()),
                            d1.src_ord,
                            d1.tgt_ord * b2,
                            rows.into_iter(),
                        ))
                    }
                    PairKind::Left => self.interp_left_pair(&d1, &d2),
                    PairKind::Right => self.interp_right_pair(&d1, &d2),
                }
            }
            Term::Proj(pos, l, r) => {
                let nl = self.carrier(l)?.len();
                let nr = self.carrier(r)?.len();
                let src = TypeExpr::prod(l.clone(), r.clone());
                let (tgt, tgt_ord) = match pos {
                    Pos::First => (l.clone(), nl),
                    Pos::Second => (r.clone(), nr),
                };
                let rows = (0..nl * nr).map(|i| match pos {
                    Pos::First => i / nr,
                    Pos::Second => i % nr,
                });
                Ok(self.rows_table(src, tgt, nl * nr, tgt_ord, rows))
            }
            Term::Final(t) => {
                let n = self.carrier(t)?.len();
                Ok(self.rows_table(t.clone(), TypeExpr::Unit, n, 1, (0..n).map(|_| 0)))
            }
            Term::Copair(kind, first, second) => {
                let d1 = self.eval_rec(first)?;
                let d2 = self.eval_rec(second)?;
                self.interp_copair(*kind, &d1, &d2)
            }
            Term::Copr(pos, l, r) => {
                let nl = self.carrier(l)?.len();
                let nr = self.carrier(r)?.len();
                let tgt = TypeExpr::sum(l.clone(), r.clone());
                let (src, n) = match pos {
                    Pos::First => (l.clone(), nl),
                    Pos::Second => (r.clone(), nr),
                };
                let offset = match pos {
                    Pos::First => 0,
                    Pos::Second => nl,
                };
                Ok(self.rows_table(src, tgt, n, nl + nr, (0..n).map(|i| offset + i)))
            }
            Term::Initial(t) => {
                let n = self.carrier(t)?.len();
                Ok(self.rows_table(TypeExpr::Empty, t.clone(), 0, n, std::iter::empty()))
            }
            Term::Tag(name) => {
                let base = self.packet_base(name).expect("typechecked tag name");
                let nv = self.carrier(&TypeExpr::effect_val(name))?.len();
                Ok(self.rows_table(
                    TypeExpr::effect_val(name),
                    TypeExpr::Empty,
                    nv,
                    0,
                    (0..nv).map(|i| base + i),
                ))
            }
            Term::Untag(name) => {
                let base = self.packet_base(name).expect("typechecked untag name");
                let nv = self.carrier(&TypeExpr::effect_val(name))?.len();
                let table = (0..npk)
                    .map(|k| {
                        if k >= base && k < base + nv {
                            k - base // open the box
                        } else {
                            nv + k // return it unopened
                        }
                    })
                    .collect();
                Ok(ExcDen::new(
                    TypeExpr::Empty,
                    TypeExpr::effect_val(name),
                    0,
                    nv,
                    table,
                ))
            }
            Term::UntagAll => {
                let table = (0..npk).map(|_| 0).collect();
                Ok(ExcDen::new(TypeExpr::Empty, TypeExpr::Unit, 0, 1, table))
            }
            Term::Const(name) => Ok(self.consts[name.as_str()].clone()),
            Term::Lookup(_) | Term::Update(_) => {
                Err(ModelError::WrongSide { expected: "exception".to_string() })
            }
        }
    }

    /// The case split of two denotations over `A1 + A2` (or over the bare
    /// `A1` when the second leg is sourced at `0`). The first leg of a
    /// left copair and the second of a right copair contribute their
    /// ordinary rows only; packets route through the decoration-2 leg,
    /// and a symmetric copair propagates them.
    pub fn interp_copair(
        &self,
        kind: PairKind,
        d1: &ExcDen,
        d2: &ExcDen,
    ) -> Result<ExcDen, ModelError> {
        if d1.target != d2.target {
            return Err(ModelError::DecorationMismatch {
                detail: "copair legs must share a target".to_string(),
            });
        }
        let npk = self.packets.len();
        let bare = d2.source == TypeExpr::Empty;
        let (source, n1, n2) = if bare {
            (d1.source.clone(), d1.src_ord, 0)
        } else {
            (TypeExpr::sum(d1.source.clone(), d2.source.clone()), d1.src_ord, d2.src_ord)
        };
        let tgt_ord = d1.tgt_ord;
        let mut table = Vec::with_capacity(n1 + n2 + npk);
        table.extend((0..n1).map(|i| d1.table[i]));
        table.extend((0..n2).map(|i| d2.table[i]));
        for k in 0..npk {
            let row = match kind {
                PairKind::Symmetric => tgt_ord + k,
                PairKind::Left => d2.table[d2.src_ord + k],
                PairKind::Right => d1.table[d1.src_ord + k],
            };
            table.push(row);
        }
        Ok(ExcDen::new(source, d1.target.clone(), n1 + n2, tgt_ord, table))
    }

    /// Decides an equation by exhaustive comparison. Strong equations
    /// compare all of `A + E`, weak equations only the ordinary inputs,
    /// and order equations `f << v` check `v` against `f` on the domain
    /// of definition of `f`.
    pub fn decide(&self, eq: &Equation) -> Result<ExcVerdict, ModelError> {
        let (ls, lt) = typecheck(&eq.lhs, self.theory)?;
        let (rs, rt) = typecheck(&eq.rhs, self.theory)?;
        if ls != rs {
            return Err(ModelError::Type(crate::error::TypeError::TypeMismatch {
                expected: ls,
                found: rs,
                path: vec![],
            }));
        }
        if lt != rt {
            return Err(ModelError::Type(crate::error::TypeError::TypeMismatch {
                expected: lt,
                found: rt,
                path: vec![],
            }));
        }
        let dl = self.eval(&eq.lhs)?;
        let dr = self.eval(&eq.rhs)?;
        match eq.strength {
            Strength::Strong => self.compare(&dl, &dr, dl.table.len()),
            Strength::Weak => self.compare(&dl, &dr, dl.src_ord),
            Strength::Order => {
                if !self.geq(&dr, &dl)? {
                    // first point of disagreement on the domain of definition
                    for i in 0..dl.src_ord {
                        let o = dl.table[i];
                        if o < dl.tgt_ord && dr.table[i] != o {
                            return Ok(ExcVerdict::Fails(ExcCounterexample {
                                input: self.point_at(&dl.source, i)?,
                                lhs: self.point_at(&dl.target, o)?,
                                rhs: self.point_at(&dr.target, dr.table[i])?,
                            }));
                        }
                    }
                    unreachable!("geq failed without a differing point");
                }
                Ok(ExcVerdict::Holds)
            }
        }
    }

    fn compare(&self, dl: &ExcDen, dr: &ExcDen, upto: usize) -> Result<ExcVerdict, ModelError> {
        for i in 0..upto {
            if dl.table[i] != dr.table[i] {
                return Ok(ExcVerdict::Fails(ExcCounterexample {
                    input: self.point_at(&dl.source, i)?,
                    lhs: self.point_at(&dl.target, dl.table[i])?,
                    rhs: self.point_at(&dr.target, dr.table[i])?,
                }));
            }
        }
        Ok(ExcVerdict::Holds)
    }

    /// Re-extends a denotation known to live at `from` to level `to`.
    /// `0 -> 1` post-composes with the unit, `1 -> 2` fixes every packet,
    /// `0 -> 2` acts as the pure map on ordinaries and fixes packets.
    pub fn lift(
        &self,
        from: Decoration,
        to: Decoration,
        den: &ExcDen,
    ) -> Result<ExcDen, ModelError> {
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
        // read off the ordinary rows and re-extend by fixing packets
        Ok(self.rows_table(
            den.source.clone(),
            den.target.clone(),
            den.src_ord,
            den.tgt_ord,
            den.table[..den.src_ord].iter().copied(),
        ))
    }

    /// Splits a propagator as a partial function: ordinary inputs with
    /// ordinary outputs against ordinary inputs that raise.
    pub fn decompose(&self, den: &ExcDen) -> Result<Decomposition, ModelError> {
        if den.min_deco > Decoration::D1 {
            return Err(ModelError::NotAPropagator {
                detail: format!("minimal decoration is {}", den.min_deco),
            });
        }
        let src = self.carrier(&den.source)?;
        let tgt = self.carrier(&den.target)?;
        let mut defined = Vec::new();
        let mut abrupt = Vec::new();
        for (i, a) in src.iter().enumerate() {
            let o = den.table[i];
            if o < den.tgt_ord {
                defined.push((a.clone(), tgt[o].clone()));
            } else {
                abrupt.push((a.clone(), self.packets[o - den.tgt_ord].clone()));
            }
        }
        Ok(Decomposition { defined, abrupt })
    }

    /// The partial-function order: true iff the pure `v` agrees with the
    /// propagator `f` on the domain of definition of `f`.
    pub fn geq(&self, v: &ExcDen, f: &ExcDen) -> Result<bool, ModelError> {
        if v.min_deco > Decoration::D0 {
            return Err(ModelError::DecorationMismatch {
                detail: format!("left side of the order must be pure, has {}", v.min_deco),
            });
        }
        if f.min_deco > Decoration::D1 {
            return Err(ModelError::NotAPropagator {
                detail: format!("right side of the order has decoration {}", f.min_deco),
            });
        }
        if v.source != f.source || v.target != f.target {
            return Err(ModelError::DecorationMismatch {
                detail: "order requires identical source and target".to_string(),
            });
        }
        Ok((0..f.src_ord).all(|i| {
            let o = f.table[i];
            o >= f.tgt_ord || v.table[i] == o
        }))
    }

    /// The left pair of a pure `v : A -> B1` and a propagator
    /// `f : A -> B2`: returns `(v(a), b)` when `f(a) = b` is ordinary and
    /// `f`'s packet when `f` raises.
    pub fn interp_left_pair(&self, v: &ExcDen, f: &ExcDen) -> Result<ExcDen, ModelError> {
        if v.min_deco > Decoration::D0 {
            return Err(ModelError::DecorationMismatch {
                detail: format!("first leg of a left pair must be pure, has {}", v.min_deco),
            });
        }
        if f.min_deco > Decoration::D1 {
            return Err(ModelError::NotAPropagator {
                detail: format!("second leg of a left pair has decoration {}", f.min_deco),
            });
        }
        if v.source != f.source {
            return Err(ModelError::DecorationMismatch {
                detail: "left pair requires a shared source".to_string(),
            });
        }
        let b1 = v.tgt_ord;
        let b2 = f.tgt_ord;
        let rows = (0..v.src_ord).map(|i| {
            let o = f.table[i];
            if o < b2 {
                v.table[i] * b2 + o
            } else {
                b1 * b2 + (o - b2)
            }
        });
        let rows: Vec<usize> = rows.collect();
        Ok(self.rows_table(
            v.source.clone(),
            TypeExpr::prod(v.target.clone(), f.target.clone()),
            v.src_ord,
            b1 * b2,
            rows.into_iter(),
        ))
    }

    /// Mirror of [`Self::interp_left_pair`]: the propagator leg first.
    pub fn interp_right_pair(&self, f: &ExcDen, v: &ExcDen) -> Result<ExcDen, ModelError> {
        if v.min_deco > Decoration::D0 {
            return Err(ModelError::DecorationMismatch {
                detail: format!("second leg of a right pair must be pure, has {}", v.min_deco),
            });
        }
        if f.min_deco > Decoration::D1 {
            return Err(ModelError::NotAPropagator {
                detail: format!("first leg of a right pair has decoration {}", f.min_deco),
            });
        }
        if v.source != f.source {
            return Err(ModelError::DecorationMismatch {
                detail: "right pair requires a shared source".to_string(),
            });
        }
        let b1 = f.tgt_ord;
        let b2 = v.tgt_ord;
        let rows: Vec<usize> = (0..v.src_ord)
            .map(|i| {
                let o = f.table[i];
                if o < b1 {
                    o * b2 + v.table[i]
                } else {
                    b1 * b2 + (o - b1)
                }
            })
            .collect();
        Ok(self.rows_table(
            v.source.clone(),
            TypeExpr::prod(f.target.clone(), v.target.clone()),
            v.src_ord,
            b1 * b2,
            rows.into_iter(),
        ))
    }

    /// All packet-fixing tables `A -> B + E`, i.e. the propagator function
    /// space, in lexicographic order. Errors out beyond the enumeration
    /// cap.
    pub fn propagator_tables(
        &self,
        source: &TypeExpr,
        target: &TypeExpr,
    ) -> Result<Vec<ExcDen>, ModelError> {
        let n_in = self.carrier(source)?.len();
        let n_out = self.carrier(target)?.len() + self.packets.len();
        enumeration_size(n_out, n_in)?;
        let mut out = Vec::new();
        let mut rows = vec![0usize; n_in];
        loop {
            out.push(self.rows_table(
                source.clone(),
                target.clone(),
                n_in,
                n_out - self.packets.len(),
                rows.iter().copied(),
            ));
            if !bump(&mut rows, n_out) {
                break;
            }
        }
        Ok(out)
    }

    /// All pure tables `A -> B`, in lexicographic order.
    pub fn pure_tables(
        &self,
        source: &TypeExpr,
        target: &TypeExpr,
    ) -> Result<Vec<ExcDen>, ModelError> {
        let n_in = self.carrier(source)?.len();
        let n_out = self.carrier(target)?.len();
        enumeration_size(n_out, n_in)?;
        let mut out = Vec::new();
        let mut rows = vec![0usize; n_in];
        loop {
            out.push(self.rows_table(
                source.clone(),
                target.clone(),
                n_in,
                n_out,
                rows.iter().copied(),
            ));
            if !bump(&mut rows, n_out) {
                break;
            }
        }
        Ok(out)
    }

    /// All level-2 tables `A + E -> B + E`, in lexicographic order.
    pub fn catcher_tables(
        &self,
        source: &TypeExpr,
        target: &TypeExpr,
    ) -> Result<Vec<ExcDen>, ModelError> {
        let src_ord = self.carrier(source)?.len();
        let tgt_ord = self.carrier(target)?.len();
        let n_in = src_ord + self.packets.len();
        let n_out = tgt_ord + self.packets.len();
        enumeration_size(n_out, n_in)?;
        let mut out = Vec::new();
        let mut rows = vec![0usize; n_in];
        loop {
            out.push(ExcDen::new(
                source.clone(),
                target.clone(),
                src_ord,
                tgt_ord,
                rows.clone(),
            ));
            if !bump(&mut rows, n_out) {
                break;
            }
        }
        Ok(out)
    }
}

/// Next vector in mixed-radix (uniform radix) order; false when exhausted.
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
