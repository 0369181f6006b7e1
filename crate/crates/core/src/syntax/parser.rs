//! Recursive-descent parser for theory files, derivation files, terms,
//! types and value literals.
//!
//! Sugar forms (`throw`, `if`, `try/catch`) are elaborated immediately
//! after parsing; `try/catch` needs the theory for target inference and is
//! therefore available in theory files and term strings but not in
//! derivation files, which use core syntax.

use crate::elaborate::{self, CatchClause, TryCatchSpec};
use crate::error::ParseError;
use crate::kernel::{BindingValue, Derivation, Judgment};
use crate::profile::{LogicSide, ProfileName};
use crate::syntax::lexer::{lex, Spanned, Tok};
use crate::term::{Equation, Strength, Term};
use crate::theory::{
    AxiomDecl, CheckStmt, EffectSide, EvalInput, EvalStmt, ExcRowIn, ExcRowOut, Expectation,
    OpDecl, OpRows, StateLit, Theory,
};
use crate::types::{Decoration, PairKind, Pos, TypeExpr};
use crate::value::Value;

/// Words with fixed meaning in some position; declared names must avoid
/// them.
pub const RESERVED: &[&str] = &[
    "id", "pair", "lpair", "rpair", "copair", "lcopair", "rcopair", "pr1", "pr2", "in1", "in2",
    "final", "initial", "tag", "untag", "untagall", "lookup", "update", "throw", "try", "catch",
    "catchall", "if", "ok", "raise", "exn", "inl", "inr", "all", "rule", "concl", "term", "name",
    "deco", "theory", "exceptions", "states", "none", "logic", "type", "exception", "location",
    "of", "op", "axiom", "check", "expect", "holds", "fails", "eval", "on", "strong", "weak",
    "order",
];

struct P {
    toks: Vec<Spanned>,
    pos: usize,
}

impl P {
    fn new(text: &str) -> Result<P, ParseError> {
        Ok(P { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        let (line, col) = self.here();
        ParseError { line, col, msg: msg.into() }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.bump();
            Ok(())
        } else {
            Err(self.err(format!("expected {tok}, found {}", self.peek())))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(format!("expected an identifier, found {other}"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            other => Err(self.err(format!("expected `{kw}`, found {other}"))),
        }
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    // -- types ---------------------------------------------------------

    fn type_expr(&mut self) -> Result<TypeExpr, ParseError> {
        self.type_prec(0)
    }

    fn type_prec(&mut self, min: u8) -> Result<TypeExpr, ParseError> {
        let mut lhs = self.type_atom()?;
        loop {
            let (prec, is_prod) = match self.peek() {
                Tok::Star => (2, true),
                Tok::Plus => (1, false),
                _ => break,
            };
            if prec < min {
                break;
            }
            self.bump();
            let rhs = self.type_prec(prec + 1)?;
            lhs = if is_prod { TypeExpr::prod(lhs, rhs) } else { TypeExpr::sum(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn type_atom(&mut self) -> Result<TypeExpr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) if n == "1" => {
                self.bump();
                Ok(TypeExpr::Unit)
            }
            Tok::Int(n) if n == "0" => {
                self.bump();
                Ok(TypeExpr::Empty)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(rest) = name.strip_prefix("V_") {
                    if !rest.is_empty() {
                        return Ok(TypeExpr::effect_val(rest));
                    }
                }
                Ok(TypeExpr::Base(name))
            }
            Tok::LParen => {
                self.bump();
                let t = self.type_expr()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.err(format!("expected a type, found {other}"))),
        }
    }

    // -- terms ---------------------------------------------------------

    fn term(&mut self, theory: Option<&Theory>) -> Result<Term, ParseError> {
        self.term_prec(0, theory)
    }

    fn term_prec(&mut self, min: u8, theory: Option<&Theory>) -> Result<Term, ParseError> {
        let mut lhs = self.term_atom(theory)?;
        loop {
            let (prec, is_prop) = match self.peek() {
                Tok::Dot => (2u8, false),
                Tok::PropComp => (1, true),
                _ => break,
            };
            if prec < min {
                break;
            }
            self.bump();
            let rhs = self.term_prec(prec + 1, theory)?;
            // composition is written outer-first: `g . f` applies f first
            lhs = if is_prop { Term::prop_comp(lhs, rhs) } else { Term::comp(lhs, rhs) };
        }
        Ok(lhs)
    }

    fn bracketed_type(&mut self) -> Result<TypeExpr, ParseError> {
        self.expect(Tok::LBracket)?;
        let t = self.type_expr()?;
        self.expect(Tok::RBracket)?;
        Ok(t)
    }

    fn bracketed_type_pair(&mut self) -> Result<(TypeExpr, TypeExpr), ParseError> {
        self.expect(Tok::LBracket)?;
        let l = self.type_expr()?;
        self.expect(Tok::Comma)?;
        let r = self.type_expr()?;
        self.expect(Tok::RBracket)?;
        Ok((l, r))
    }

    fn bracketed_name(&mut self) -> Result<String, ParseError> {
        self.expect(Tok::LBracket)?;
        let n = self.ident()?;
        self.expect(Tok::RBracket)?;
        Ok(n)
    }

    fn paired_terms(
        &mut self,
        sep: Tok,
        theory: Option<&Theory>,
    ) -> Result<(Term, Term), ParseError> {
        self.expect(Tok::LParen)?;
        let a = self.term(theory)?;
        self.expect(sep)?;
        let b = self.term(theory)?;
        self.expect(Tok::RParen)?;
        Ok((a, b))
    }

    fn term_atom(&mut self, theory: Option<&Theory>) -> Result<Term, ParseError> {
        let head = match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term(theory)?;
                self.expect(Tok::RParen)?;
                return Ok(t);
            }
            Tok::Ident(s) => s,
            other => return Err(self.err(format!("expected a term, found {other}"))),
        };
        match head.as_str() {
            "id" => {
                self.bump();
                Ok(Term::Id(self.bracketed_type()?))
            }
            "pr1" | "pr2" => {
                self.bump();
                let (l, r) = self.bracketed_type_pair()?;
                let pos = if head == "pr1" { Pos::First } else { Pos::Second };
                Ok(Term::Proj(pos, l, r))
            }
            "in1" | "in2" => {
                self.bump();
                let (l, r) = self.bracketed_type_pair()?;
                let pos = if head == "in1" { Pos::First } else { Pos::Second };
                Ok(Term::Copr(pos, l, r))
            }
            "final" => {
                self.bump();
                Ok(Term::Final(self.bracketed_type()?))
            }
            "initial" => {
                self.bump();
                Ok(Term::Initial(self.bracketed_type()?))
            }
            "tag" => {
                self.bump();
                Ok(Term::Tag(self.bracketed_name()?))
            }
            "untag" => {
                self.bump();
                Ok(Term::Untag(self.bracketed_name()?))
            }
            "untagall" => {
                self.bump();
                Ok(Term::UntagAll)
            }
            "lookup" => {
                self.bump();
                Ok(Term::Lookup(self.bracketed_name()?))
            }
            "update" => {
                self.bump();
                Ok(Term::Update(self.bracketed_name()?))
            }
            "pair" | "lpair" | "rpair" => {
                self.bump();
                let kind = match head.as_str() {
                    "pair" => PairKind::Symmetric,
                    "lpair" => PairKind::Left,
                    _ => PairKind::Right,
                };
                let (a, b) = self.paired_terms(Tok::Comma, theory)?;
                Ok(Term::pair(kind, a, b))
            }
            "copair" | "lcopair" | "rcopair" => {
                self.bump();
                let kind = match head.as_str() {
                    "copair" => PairKind::Symmetric,
                    "lcopair" => PairKind::Left,
                    _ => PairKind::Right,
                };
                let (a, b) = self.paired_terms(Tok::Pipe, theory)?;
                Ok(Term::copair(kind, a, b))
            }
            "throw" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let target = self.type_expr()?;
                self.expect(Tok::Comma)?;
                let name = self.ident()?;
                self.expect(Tok::RBracket)?;
                Ok(Term::comp(Term::Initial(target), Term::Tag(name)))
            }
            "if" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let b = self.term(theory)?;
                self.expect(Tok::Comma)?;
                let f = self.term(theory)?;
                self.expect(Tok::Comma)?;
                let g = self.term(theory)?;
                self.expect(Tok::RParen)?;
                Ok(Term::comp(Term::copair(PairKind::Symmetric, f, g), b))
            }
            "try" => {
                let (line, col) = self.here();
                self.bump();
                self.expect(Tok::LParen)?;
                let body = self.term(theory)?;
                self.expect(Tok::RParen)?;
                self.keyword("catch")?;
                self.expect(Tok::LParen)?;
                let mut clauses = Vec::new();
                loop {
                    let name = self.ident()?;
                    self.expect(Tok::FatArrow)?;
                    let handler = self.term(theory)?;
                    if name == "all" {
                        clauses.push(CatchClause::All { body: handler });
                    } else {
                        clauses.push(CatchClause::Named { name, body: handler });
                    }
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::RParen)?;
                if self.at_keyword("catchall") {
                    self.bump();
                    self.expect(Tok::LParen)?;
                    let handler = self.term(theory)?;
                    self.expect(Tok::RParen)?;
                    clauses.push(CatchClause::All { body: handler });
                }
                let theory = theory.ok_or(ParseError {
                    line,
                    col,
                    msg: "try/catch needs a theory context; derivation files use core syntax"
                        .to_string(),
                })?;
                elaborate::elaborate_try_catch(&TryCatchSpec { body, clauses }, theory)
                    .map_err(|e| ParseError { line, col, msg: e.to_string() })
            }
            _ => {
                self.bump();
                Ok(Term::Const(head))
            }
        }
    }

    fn strength(&mut self) -> Result<Strength, ParseError> {
        match self.peek() {
            Tok::EqEq => {
                self.bump();
                Ok(Strength::Strong)
            }
            Tok::Tilde => {
                self.bump();
                Ok(Strength::Weak)
            }
            Tok::LtLt => {
                self.bump();
                Ok(Strength::Order)
            }
            other => Err(self.err(format!("expected `==`, `~` or `<<`, found {other}"))),
        }
    }

    // -- values ----------------------------------------------------------

    fn value(&mut self) -> Result<Value, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "inl" || s == "inr" => {
                self.bump();
                let v = self.value()?;
                Ok(if s == "inl" { Value::inl(v) } else { Value::inr(v) })
            }
            Tok::Ident(s) => {
                if RESERVED.contains(&s.as_str()) {
                    return Err(self.err(format!("`{s}` is reserved and not an atom")));
                }
                self.bump();
                Ok(Value::Atom(s))
            }
            Tok::Int(s) => {
                self.bump();
                Ok(Value::Atom(s))
            }
            Tok::LParen => {
                self.bump();
                if self.eat(&Tok::RParen) {
                    return Ok(Value::Unit);
                }
                let a = self.value()?;
                if self.eat(&Tok::RParen) {
                    return Ok(a);
                }
                self.expect(Tok::Comma)?;
                let b = self.value()?;
                self.expect(Tok::RParen)?;
                Ok(Value::pair(a, b))
            }
            other => Err(self.err(format!("expected a value, found {other}"))),
        }
    }

    fn state_lit(&mut self) -> Result<StateLit, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let v = self.value()?;
                out.push((name, v));
                if !self.eat(&Tok::Comma) || self.peek() == &Tok::RBrace {
                    break;
                }
            }
            self.expect(Tok::RBrace)?;
        }
        Ok(out)
    }

    /// `T v` or `(T, v)` after `raise`/`exn`.
    fn name_and_value(&mut self) -> Result<(String, Value), ParseError> {
        if self.eat(&Tok::LParen) {
            let name = self.ident()?;
            self.expect(Tok::Comma)?;
            let v = self.value()?;
            self.expect(Tok::RParen)?;
            Ok((name, v))
        } else {
            let name = self.ident()?;
            let v = self.value()?;
            Ok((name, v))
        }
    }

    fn exc_row_out(&mut self) -> Result<ExcRowOut, ParseError> {
        if self.at_keyword("ok") {
            self.bump();
            Ok(ExcRowOut::Ok(self.value()?))
        } else if self.at_keyword("raise") || self.at_keyword("exn") {
            self.bump();
            let (name, v) = self.name_and_value()?;
            Ok(ExcRowOut::Raise(name, v))
        } else {
            Err(self.err(format!("expected `ok` or `raise`, found {}", self.peek())))
        }
    }

    fn exc_row_in(&mut self) -> Result<ExcRowIn, ParseError> {
        if self.at_keyword("ok") {
            self.bump();
            Ok(ExcRowIn::Ord(self.value()?))
        } else if self.at_keyword("exn") {
            self.bump();
            let (name, v) = self.name_and_value()?;
            Ok(ExcRowIn::Packet(name, v))
        } else {
            Ok(ExcRowIn::Ord(self.value()?))
        }
    }

    fn eval_input(&mut self) -> Result<EvalInput, ParseError> {
        if self.at_keyword("ok") {
            self.bump();
            return Ok(EvalInput::Ord(self.value()?));
        }
        if self.at_keyword("exn") {
            self.bump();
            let (name, v) = self.name_and_value()?;
            return Ok(EvalInput::Packet(name, v));
        }
        if self.peek() == &Tok::LParen {
            // could be `(v, {..})`, a tuple value, `()` or a grouped value
            self.bump();
            if self.eat(&Tok::RParen) {
                return Ok(EvalInput::Plain(Value::Unit));
            }
            let a = self.value()?;
            if self.eat(&Tok::RParen) {
                return Ok(EvalInput::Plain(a));
            }
            self.expect(Tok::Comma)?;
            if self.peek() == &Tok::LBrace {
                let lit = self.state_lit()?;
                self.expect(Tok::RParen)?;
                return Ok(EvalInput::WithState(a, lit));
            }
            let b = self.value()?;
            self.expect(Tok::RParen)?;
            return Ok(EvalInput::Plain(Value::pair(a, b)));
        }
        Ok(EvalInput::Plain(self.value()?))
    }

    // -- theories --------------------------------------------------------

    fn atoms_block(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut out = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                match self.peek().clone() {
                    Tok::Ident(s) => {
                        if RESERVED.contains(&s.as_str()) {
                            return Err(self.err(format!("`{s}` is reserved")));
                        }
                        if out.contains(&s) {
                            return Err(self.err(format!("duplicate atom `{s}`")));
                        }
                        self.bump();
                        out.push(s);
                    }
                    Tok::Int(s) => {
                        if out.contains(&s) {
                            return Err(self.err(format!("duplicate atom `{s}`")));
                        }
                        self.bump();
                        out.push(s);
                    }
                    other => return Err(self.err(format!("expected an atom, found {other}"))),
                }
                if !self.eat(&Tok::Comma) || self.peek() == &Tok::RBrace {
                    break;
                }
            }
            self.expect(Tok::RBrace)?;
        }
        Ok(out)
    }

    fn check_fresh(&self, th: &Theory, name: &str) -> Result<(), ParseError> {
        if RESERVED.contains(&name) {
            return Err(self.err(format!("`{name}` is reserved")));
        }
        if th.base_type(name).is_some()
            || th.effect(name).is_some()
            || th.op(name).is_some()
            || th.axiom(name).is_some()
        {
            return Err(self.err(format!("duplicate name `{name}`")));
        }
        Ok(())
    }

    fn validate_type_names(&self, th: &Theory, ty: &TypeExpr) -> Result<(), ParseError> {
        match ty {
            TypeExpr::Base(n) => {
                if th.base_type(n).is_none() {
                    return Err(self.err(format!("undeclared type `{n}`")));
                }
            }
            TypeExpr::EffectVal(n) => {
                if th.effect(n).is_none() {
                    return Err(self.err(format!(
                        "undeclared effect name `{n}` (no carrier for V_{n})"
                    )));
                }
            }
            TypeExpr::Prod(l, r) | TypeExpr::Sum(l, r) => {
                self.validate_type_names(th, l)?;
                self.validate_type_names(th, r)?;
            }
            TypeExpr::Unit | TypeExpr::Empty => {}
        }
        Ok(())
    }

    fn op_rows(
        &mut self,
        side: EffectSide,
        deco: Decoration,
    ) -> Result<OpRows, ParseError> {
        self.expect(Tok::LBrace)?;
        let mut pure = Vec::new();
        let mut exc1 = Vec::new();
        let mut exc2 = Vec::new();
        let mut st1 = Vec::new();
        let mut st2 = Vec::new();
        if !self.eat(&Tok::RBrace) {
            loop {
                match (side, deco) {
                    (_, Decoration::D0) => {
                        let a = self.value()?;
                        self.expect(Tok::FatArrow)?;
                        let b = self.value()?;
                        pure.push((a, b));
                    }
                    (EffectSide::States, Decoration::D1) => {
                        self.expect(Tok::LParen)?;
                        let a = self.value()?;
                        self.expect(Tok::Comma)?;
                        let s = self.state_lit()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::FatArrow)?;
                        let b = self.value()?;
                        st1.push((a, s, b));
                    }
                    (EffectSide::States, Decoration::D2) => {
                        self.expect(Tok::LParen)?;
                        let a = self.value()?;
                        self.expect(Tok::Comma)?;
                        let s = self.state_lit()?;
                        self.expect(Tok::RParen)?;
                        self.expect(Tok::FatArrow)?;
                        self.expect(Tok::LParen)?;
                        let b = self.value()?;
                        self.expect(Tok::Comma)?;
                        let s2 = self.state_lit()?;
                        self.expect(Tok::RParen)?;
                        st2.push((a, s, b, s2));
                    }
                    (_, Decoration::D1) => {
                        let a = self.value()?;
                        self.expect(Tok::FatArrow)?;
                        exc1.push((a, self.exc_row_out()?));
                    }
                    (_, Decoration::D2) => {
                        let a = self.exc_row_in()?;
                        self.expect(Tok::FatArrow)?;
                        exc2.push((a, self.exc_row_out()?));
                    }
                }
                if !self.eat(&Tok::Comma) || self.peek() == &Tok::RBrace {
                    break;
                }
            }
            self.expect(Tok::RBrace)?;
        }
        Ok(match (side, deco) {
            (_, Decoration::D0) => OpRows::Pure(pure),
            (EffectSide::States, Decoration::D1) => OpRows::St1(st1),
            (EffectSide::States, Decoration::D2) => OpRows::St2(st2),
            (_, Decoration::D1) => OpRows::Exc1(exc1),
            (_, Decoration::D2) => OpRows::Exc2(exc2),
        })
    }

    fn theory(&mut self) -> Result<Theory, ParseError> {
        self.keyword("theory")?;
        let name = self.ident()?;
        let side = match self.ident()?.as_str() {
            "exceptions" => EffectSide::Exceptions,
            "states" => EffectSide::States,
            "none" => EffectSide::None,
            other => {
                return Err(self.err(format!(
                    "expected `exceptions`, `states` or `none`, found `{other}`"
                )))
            }
        };
        self.keyword("logic")?;
        let pname = self.ident()?;
        let profile = ProfileName::parse(&pname)
            .ok_or_else(|| self.err(format!("unknown logic profile `{pname}`")))?;
        let consistent = match side {
            EffectSide::None => true,
            EffectSide::Exceptions => profile.side() == LogicSide::Monad,
            EffectSide::States => profile.side() == LogicSide::Comonad,
        };
        if !consistent {
            return Err(self.err(format!(
                "profile {profile} does not match the `{side}` effect side"
            )));
        }
        let mut th = Theory::new(&name, side, profile);
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Ident(kw) => match kw.as_str() {
                    "type" => {
                        self.bump();
                        let name = self.ident()?;
                        self.check_fresh(&th, &name)?;
                        if name.starts_with("V_") {
                            return Err(
                                self.err("base type names must not use the `V_` prefix")
                            );
                        }
                        self.expect(Tok::Eq)?;
                        let atoms = self.atoms_block()?;
                        th.base_types.push((name, atoms));
                    }
                    "exception" | "location" => {
                        self.bump();
                        let wanted = if kw == "exception" {
                            EffectSide::Exceptions
                        } else {
                            EffectSide::States
                        };
                        if side != wanted {
                            return Err(self.err(format!(
                                "`{kw}` declarations need a `{}` theory",
                                if kw == "exception" { "exceptions" } else { "states" }
                            )));
                        }
                        let name = self.ident()?;
                        self.check_fresh(&th, &name)?;
                        self.keyword("of")?;
                        let atoms = self.atoms_block()?;
                        if atoms.is_empty() {
                            return Err(self.err(format!("carrier of `{name}` is empty")));
                        }
                        th.effects.push((name, atoms));
                    }
                    "op" => {
                        self.bump();
                        let name = self.ident()?;
                        self.check_fresh(&th, &name)?;
                        self.expect(Tok::Colon)?;
                        let source = self.type_expr()?;
                        self.validate_type_names(&th, &source)?;
                        self.expect(Tok::Arrow)?;
                        let target = self.type_expr()?;
                        self.validate_type_names(&th, &target)?;
                        self.keyword("deco")?;
                        let deco = match self.peek().clone() {
                            Tok::Int(d) => {
                                let deco = d
                                    .parse::<u8>()
                                    .ok()
                                    .and_then(Decoration::from_level)
                                    .ok_or_else(|| {
                                        self.err(format!("decoration must be 0, 1 or 2, got {d}"))
                                    })?;
                                self.bump();
                                deco
                            }
                            other => {
                                return Err(
                                    self.err(format!("expected a decoration, found {other}"))
                                )
                            }
                        };
                        let rows = self.op_rows(side, deco)?;
                        th.ops.push(OpDecl { name, source, target, deco, rows });
                    }
                    "axiom" => {
                        self.bump();
                        let name = self.ident()?;
                        self.check_fresh(&th, &name)?;
                        if crate::kernel::rules::find_rule(profile, &name).is_some() {
                            return Err(self.err(format!(
                                "axiom `{name}` collides with a rule of {profile}"
                            )));
                        }
                        self.expect(Tok::Colon)?;
                        let lhs = self.term(Some(&th))?;
                        let strength = self.strength()?;
                        let rhs = self.term(Some(&th))?;
                        th.axioms.push(AxiomDecl { name, eq: Equation { lhs, rhs, strength } });
                    }
                    "check" => {
                        self.bump();
                        let lhs = self.term(Some(&th))?;
                        let strength = self.strength()?;
                        let rhs = self.term(Some(&th))?;
                        self.keyword("expect")?;
                        let expect = if self.at_keyword("holds") {
                            self.bump();
                            Expectation::Holds
                        } else if self.at_keyword("fails") {
                            self.bump();
                            Expectation::Fails
                        } else {
                            return Err(self.err(format!(
                                "expected `holds` or `fails`, found {}",
                                self.peek()
                            )));
                        };
                        th.checks.push(CheckStmt { eq: Equation { lhs, rhs, strength }, expect });
                    }
                    "eval" => {
                        self.bump();
                        let term = self.term(Some(&th))?;
                        self.keyword("on")?;
                        let input = self.eval_input()?;
                        th.evals.push(EvalStmt { term, input });
                    }
                    other => {
                        return Err(self.err(format!("unexpected statement keyword `{other}`")))
                    }
                },
                other => return Err(self.err(format!("expected a statement, found {other}"))),
            }
        }
        Ok(th)
    }

    // -- derivations -----------------------------------------------------

    fn judgment(&mut self) -> Result<Judgment, ParseError> {
        self.expect(Tok::LParen)?;
        if self.at_keyword("concl") {
            self.bump();
            let strength = if self.at_keyword("strong") {
                self.bump();
                Strength::Strong
            } else if self.at_keyword("weak") {
                self.bump();
                Strength::Weak
            } else if self.at_keyword("order") {
                self.bump();
                Strength::Order
            } else {
                return Err(self.err(format!(
                    "expected `strong`, `weak` or `order`, found {}",
                    self.peek()
                )));
            };
            let lhs = self.term(None)?;
            let rhs = self.term(None)?;
            self.expect(Tok::RParen)?;
            Ok(Judgment::Eq(Equation { lhs, rhs, strength }))
        } else if self.at_keyword("term") {
            self.bump();
            let term = self.term(None)?;
            self.expect(Tok::Colon)?;
            let source = self.type_expr()?;
            self.expect(Tok::Arrow)?;
            let target = self.type_expr()?;
            self.keyword("deco")?;
            let deco = match self.peek().clone() {
                Tok::Int(d) => {
                    let deco = d
                        .parse::<u8>()
                        .ok()
                        .and_then(Decoration::from_level)
                        .ok_or_else(|| self.err(format!("bad decoration {d}")))?;
                    self.bump();
                    deco
                }
                other => return Err(self.err(format!("expected a decoration, found {other}"))),
            };
            self.expect(Tok::RParen)?;
            Ok(Judgment::Term { term, source, target, deco })
        } else {
            Err(self.err(format!("expected `concl` or `term`, found {}", self.peek())))
        }
    }

    fn bindings(&mut self) -> Result<Vec<(String, BindingValue)>, ParseError> {
        let mut out = Vec::new();
        if self.eat(&Tok::LBracket) {
            loop {
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let kind = self.ident()?;
                self.expect(Tok::LParen)?;
                let value = match kind.as_str() {
                    "term" => BindingValue::Term(self.term(None)?),
                    "type" => BindingValue::Type(self.type_expr()?),
                    "name" => BindingValue::Name(self.ident()?),
                    "deco" => match self.peek().clone() {
                        Tok::Int(d) => {
                            let deco = d
                                .parse::<u8>()
                                .ok()
                                .and_then(Decoration::from_level)
                                .ok_or_else(|| self.err(format!("bad decoration {d}")))?;
                            self.bump();
                            BindingValue::Deco(deco)
                        }
                        other => {
                            return Err(self.err(format!("expected a decoration, found {other}")))
                        }
                    },
                    other => {
                        return Err(self.err(format!(
                            "expected `term`, `type`, `name` or `deco`, found `{other}`"
                        )))
                    }
                };
                self.expect(Tok::RParen)?;
                out.push((name, value));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(out)
    }

    fn derivation(&mut self) -> Result<Derivation, ParseError> {
        self.expect(Tok::LParen)?;
        self.keyword("rule")?;
        let rule = self.ident()?;
        let bindings = self.bindings()?;
        let conclusion = self.judgment()?;
        let mut premises = Vec::new();
        while self.peek() == &Tok::LParen {
            premises.push(self.derivation()?);
        }
        self.expect(Tok::RParen)?;
        Ok(Derivation { rule, bindings, conclusion, premises })
    }

    fn eof(&mut self) -> Result<(), ParseError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.err(format!("trailing input: {}", self.peek())))
        }
    }
}

/// Parses a theory file. Declarations must precede the statements that use
/// them; parsing is total and deterministic.
pub fn parse_theory(text: &str) -> Result<Theory, ParseError> {
    let mut p = P::new(text)?;
    let th = p.theory()?;
    p.eof()?;
    Ok(th)
}

/// Parses a derivation file: one nested parenthesized node.
pub fn parse_derivation(text: &str) -> Result<Derivation, ParseError> {
    let mut p = P::new(text)?;
    let d = p.derivation()?;
    p.eof()?;
    Ok(d)
}

/// Parses a term over a theory (sugar allowed).
pub fn parse_term_str(text: &str, theory: &Theory) -> Result<Term, ParseError> {
    let mut p = P::new(text)?;
    let t = p.term(Some(theory))?;
    p.eof()?;
    Ok(t)
}

/// Parses a term without a theory context (core syntax only).
pub fn parse_core_term_str(text: &str) -> Result<Term, ParseError> {
    let mut p = P::new(text)?;
    let t = p.term(None)?;
    p.eof()?;
    Ok(t)
}

pub fn parse_type_str(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = P::new(text)?;
    let t = p.type_expr()?;
    p.eof()?;
    Ok(t)
}

pub fn parse_value_str(text: &str) -> Result<Value, ParseError> {
    let mut p = P::new(text)?;
    let v = p.value()?;
    p.eof()?;
    Ok(v)
}

pub fn parse_eval_input_str(text: &str) -> Result<EvalInput, ParseError> {
    let mut p = P::new(text)?;
    let v = p.eval_input()?;
    p.eof()?;
    Ok(v)
}
