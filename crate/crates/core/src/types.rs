//! Object-language types and decorations.

use std::fmt;

/// Object-language types: finite base types, unit, empty, binary products
/// and sums, and the effect-parameter types `V_T` attached to declared
/// exception names or locations.
///
/// Equality is structural and is used everywhere types are compared; there
/// is no subtyping and no identification up to isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum TypeExpr {
    Base(String),
    Unit,
    Empty,
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Sum(Box<TypeExpr>, Box<TypeExpr>),
    /// `V_T` for an effect name `T`.
    EffectVal(String),
}

impl TypeExpr {
    pub fn base(name: &str) -> TypeExpr {
        TypeExpr::Base(name.to_string())
    }

    pub fn effect_val(name: &str) -> TypeExpr {
        TypeExpr::EffectVal(name.to_string())
    }

    pub fn prod(left: TypeExpr, right: TypeExpr) -> TypeExpr {
        TypeExpr::Prod(Box::new(left), Box::new(right))
    }

    pub fn sum(left: TypeExpr, right: TypeExpr) -> TypeExpr {
        TypeExpr::Sum(Box::new(left), Box::new(right))
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        // precedence: atoms 3, `*` 2, `+` 1; both operators left-associative
        match self {
            TypeExpr::Base(n) => write!(f, "{n}"),
            TypeExpr::Unit => write!(f, "1"),
            TypeExpr::Empty => write!(f, "0"),
            TypeExpr::EffectVal(n) => write!(f, "V_{n}"),
            TypeExpr::Prod(l, r) => {
                if min > 2 {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 2)?;
                write!(f, " * ")?;
                r.fmt_prec(f, 3)?;
                if min > 2 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            TypeExpr::Sum(l, r) => {
                if min > 1 {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                r.fmt_prec(f, 2)?;
                if min > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Effect decoration of a term.
///
/// Level 0 is pure. Level 1 is a constructor/propagator on the monad side
/// and an accessor on the comonad side. Level 2 is a catcher on the monad
/// side and a modifier on the comonad side. The order `D0 < D1 < D2` is
/// total and conversions only increase the level.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Decoration {
    D0,
    D1,
    D2,
}

impl Decoration {
    pub fn level(self) -> u8 {
        match self {
            Decoration::D0 => 0,
            Decoration::D1 => 1,
            Decoration::D2 => 2,
        }
    }

    pub fn from_level(level: u8) -> Option<Decoration> {
        match level {
            0 => Some(Decoration::D0),
            1 => Some(Decoration::D1),
            2 => Some(Decoration::D2),
            _ => None,
        }
    }
}

impl fmt::Display for Decoration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.level())
    }
}

/// Tupling/cotupling flavour: `Symmetric` is the ordinary pair/copair,
/// `Left`/`Right` are the mixed-decoration constructions whose laws pair
/// one weak and one strong equation.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum PairKind {
    Symmetric,
    Left,
    Right,
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairKind::Symmetric => write!(f, "symmetric"),
            PairKind::Left => write!(f, "left"),
            PairKind::Right => write!(f, "right"),
        }
    }
}

/// Index of a projection or coprojection.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Pos {
    First,
    Second,
}

impl Pos {
    pub fn index(self) -> u8 {
        match self {
            Pos::First => 1,
            Pos::Second => 2,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn type_display_respects_precedence() {
        let t = TypeExpr::sum(
            TypeExpr::prod(TypeExpr::base("A"), TypeExpr::base("B")),
            TypeExpr::Unit,
        );
        assert_eq!(t.to_string(), "A * B + 1");
        let t = TypeExpr::prod(
            TypeExpr::sum(TypeExpr::base("A"), TypeExpr::base("B")),
            TypeExpr::Empty,
        );
        assert_eq!(t.to_string(), "(A + B) * 0");
        let t = TypeExpr::sum(
            TypeExpr::base("A"),
            TypeExpr::sum(TypeExpr::base("B"), TypeExpr::base("C")),
        );
        assert_eq!(t.to_string(), "A + (B + C)");
    }

    #[test]
    fn decoration_order() {
        assert!(Decoration::D0 < Decoration::D1);
        assert!(Decoration::D1 < Decoration::D2);
        assert_eq!(Decoration::from_level(2), Some(Decoration::D2));
        assert_eq!(Decoration::from_level(3), None);
    }
}
