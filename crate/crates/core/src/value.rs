//! Finite carriers and their canonical enumeration.
//!
//! Every type denotes a finite set of values. The enumeration order is
//! pinned so counterexamples and golden files are reproducible: atoms in
//! declaration order, tuples lexicographic with the left factor major,
//! sums left injections before right ones, exception packets by
//! exception-name declaration order and then by payload order.

use std::fmt;

use crate::error::ModelError;
use crate::theory::Theory;
use crate::types::TypeExpr;

/// An element of a type carrier.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Value {
    Atom(String),
    Unit,
    Pair(Box<Value>, Box<Value>),
    InL(Box<Value>),
    InR(Box<Value>),
}

impl Value {
    pub fn atom(name: &str) -> Value {
        Value::Atom(name.to_string())
    }

    pub fn pair(a: Value, b: Value) -> Value {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(v: Value) -> Value {
        Value::InL(Box::new(v))
    }

    pub fn inr(v: Value) -> Value {
        Value::InR(Box::new(v))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Atom(n) => write!(f, "{n}"),
            Value::Unit => write!(f, "()"),
            Value::Pair(a, b) => write!(f, "({a}, {b})"),
            Value::InL(v) => write!(f, "inl {}", Wrapped(v)),
            Value::InR(v) => write!(f, "inr {}", Wrapped(v)),
        }
    }
}

/// Helper that parenthesizes prefix-form payloads so `inl inr x` never
/// prints ambiguously.
struct Wrapped<'a>(&'a Value);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::InL(_) | Value::InR(_) => write!(f, "({})", self.0),
            v => write!(f, "{v}"),
        }
    }
}

/// An exception packet: a payload boxed under an exception name.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Packet {
    pub name: String,
    pub payload: Value,
}

impl Packet {
    pub fn new(name: &str, payload: Value) -> Packet {
        Packet { name: name.to_string(), payload }
    }
}

impl fmt::Display for Packet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exn {} {}", self.name, Wrapped(&self.payload))
    }
}

/// An element of `A + E`: either an ordinary value of `A` or a packet.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point {
    Ord(Value),
    Exc(Packet),
}

impl Point {
    pub fn is_packet(&self) -> bool {
        matches!(self, Point::Exc(_))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Ord(v) => write!(f, "ok {}", Wrapped(v)),
            Point::Exc(p) => write!(f, "{p}"),
        }
    }
}

/// Enumerates the carrier of `ty` in canonical order, failing when a name
/// is undeclared or the carrier exceeds `cap`.
pub fn carrier(theory: &Theory, ty: &TypeExpr, cap: usize) -> Result<Vec<Value>, ModelError> {
    let out = match ty {
        TypeExpr::Base(name) => {
            let atoms = theory
                .base_type(name)
                .ok_or_else(|| ModelError::UndeclaredType { name: name.clone() })?;
            atoms.iter().map(|a| Value::atom(a)).collect()
        }
        TypeExpr::EffectVal(name) => {
            let atoms = theory
                .effect(name)
                .ok_or_else(|| ModelError::UndeclaredType { name: format!("V_{name}") })?;
            atoms.iter().map(|a| Value::atom(a)).collect()
        }
        TypeExpr::Unit => vec![Value::Unit],
        TypeExpr::Empty => vec![],
        TypeExpr::Prod(l, r) => {
            let ls = carrier(theory, l, cap)?;
            let rs = carrier(theory, r, cap)?;
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for a in &ls {
                for b in &rs {
                    out.push(Value::pair(a.clone(), b.clone()));
                }
            }
            out
        }
        TypeExpr::Sum(l, r) => {
            let ls = carrier(theory, l, cap)?;
            let rs = carrier(theory, r, cap)?;
            let mut out = Vec::with_capacity(ls.len() + rs.len());
            out.extend(ls.into_iter().map(Value::inl));
            out.extend(rs.into_iter().map(Value::inr));
            out
        }
    };
    if out.len() > cap {
        return Err(ModelError::CarrierTooLarge { ty: ty.to_string(), size: out.len(), cap });
    }
    Ok(out)
}

/// Position of `v` in `car`, if present.
pub fn value_index(car: &[Value], v: &Value) -> Option<usize> {
    car.iter().position(|x| x == v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::Theory;

    fn tiny_theory() -> Theory {
        let mut th = Theory::exceptions_for_test("tiny");
        th.base_types.push(("Bool".into(), vec!["tt".into(), "ff".into()]));
        th.effects.push(("T".into(), vec!["a".into(), "b".into()]));
        th
    }

    #[test]
    fn enumeration_order_is_canonical() {
        let th = tiny_theory();
        let b = TypeExpr::base("Bool");
        assert_eq!(
            carrier(&th, &b, 16).unwrap(),
            vec![Value::atom("tt"), Value::atom("ff")]
        );
        let p = TypeExpr::prod(b.clone(), TypeExpr::effect_val("T"));
        let vals = carrier(&th, &p, 16).unwrap();
        assert_eq!(vals.len(), 4);
        assert_eq!(vals[0], Value::pair(Value::atom("tt"), Value::atom("a")));
        assert_eq!(vals[1], Value::pair(Value::atom("tt"), Value::atom("b")));
        let s = TypeExpr::sum(TypeExpr::Unit, b);
        let vals = carrier(&th, &s, 16).unwrap();
        assert_eq!(vals[0], Value::inl(Value::Unit));
        assert_eq!(vals[1], Value::inr(Value::atom("tt")));
        assert!(carrier(&th, &TypeExpr::Empty, 16).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let th = tiny_theory();
        let b = TypeExpr::base("Bool");
        let big = TypeExpr::prod(
            TypeExpr::prod(b.clone(), b.clone()),
            TypeExpr::prod(b.clone(), b),
        );
        let err = carrier(&th, &big, 8).unwrap_err();
        assert!(matches!(err, ModelError::CarrierTooLarge { size: 16, cap: 8, .. }));
    }

    #[test]
    fn value_display() {
        assert_eq!(Value::pair(Value::atom("a"), Value::Unit).to_string(), "(a, ())");
        assert_eq!(Value::inl(Value::inr(Value::atom("x"))).to_string(), "inl (inr x)");
        assert_eq!(Packet::new("T", Value::atom("a")).to_string(), "exn T a");
        assert_eq!(Point::Ord(Value::atom("a")).to_string(), "ok a");
    }
}
