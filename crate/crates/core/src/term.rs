//! Decorated point-free terms and equations.

use std::fmt;

use crate::types::{PairKind, Pos, TypeExpr};

/// A point-free term of the decorated calculus.
///
/// `Comp(outer, inner)` is ordinary composition `outer . inner`;
/// `PropComp(outer, inner)` is the propagator composition `outer (.) inner`
/// which shields `outer` from effects raised before `inner` runs.
/// `Tag`/`Untag`/`UntagAll` are the core exception operations and
/// `Lookup`/`Update` the core state operations; `Const` refers to an
/// operation declared in the enclosing theory.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Term {
    Id(TypeExpr),
    Comp(Box<Term>, Box<Term>),
    PropComp(Box<Term>, Box<Term>),
    Pair(PairKind, Box<Term>, Box<Term>),
    Proj(Pos, TypeExpr, TypeExpr),
    Final(TypeExpr),
    Copair(PairKind, Box<Term>, Box<Term>),
    Copr(Pos, TypeExpr, TypeExpr),
    Initial(TypeExpr),
    Tag(String),
    Untag(String),
    UntagAll,
    Lookup(String),
    Update(String),
    Const(String),
}

impl Term {
    pub fn comp(outer: Term, inner: Term) -> Term {
        Term::Comp(Box::new(outer), Box::new(inner))
    }

    pub fn prop_comp(outer: Term, inner: Term) -> Term {
        Term::PropComp(Box::new(outer), Box::new(inner))
    }

    pub fn pair(kind: PairKind, first: Term, second: Term) -> Term {
        Term::Pair(kind, Box::new(first), Box::new(second))
    }

    pub fn copair(kind: PairKind, first: Term, second: Term) -> Term {
        Term::Copair(kind, Box::new(first), Box::new(second))
    }

    pub fn tag(name: &str) -> Term {
        Term::Tag(name.to_string())
    }

    pub fn untag(name: &str) -> Term {
        Term::Untag(name.to_string())
    }

    pub fn lookup(name: &str) -> Term {
        Term::Lookup(name.to_string())
    }

    pub fn update(name: &str) -> Term {
        Term::Update(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    /// Child subterms, in field order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Comp(a, b) | Term::PropComp(a, b) => vec![a, b],
            Term::Pair(_, a, b) | Term::Copair(_, a, b) => vec![a, b],
            _ => vec![],
        }
    }

    /// The subterm at `path` (a list of child indices), if any.
    pub fn at_path(&self, path: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in path {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// All `(path, subterm)` pairs in depth-first preorder.
    pub fn subterms(&self) -> Vec<(TermPath, &Term)> {
        let mut out = Vec::new();
        let mut stack = vec![(Vec::new(), self)];
        while let Some((path, t)) = stack.pop() {
            for (i, c) in t.children().into_iter().enumerate().rev() {
                let mut p = path.clone();
                p.push(i);
                stack.push((p, c));
            }
            out.push((path, t));
        }
        out
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        // precedence: atoms 3, `.` 2, `(.)` 1; both left-associative
        match self {
            Term::Comp(l, r) => {
                if min > 2 {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 2)?;
                write!(f, " . ")?;
                r.fmt_prec(f, 3)?;
                if min > 2 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::PropComp(l, r) => {
                if min > 1 {
                    write!(f, "(")?;
                }
                l.fmt_prec(f, 1)?;
                write!(f, " (.) ")?;
                r.fmt_prec(f, 2)?;
                if min > 1 {
                    write!(f, ")")?;
                }
                Ok(())
            }
            Term::Id(t) => write!(f, "id[{t}]"),
            Term::Pair(kind, a, b) => {
                let head = match kind {
                    PairKind::Symmetric => "pair",
                    PairKind::Left => "lpair",
                    PairKind::Right => "rpair",
                };
                write!(f, "{head}({a}, {b})")
            }
            Term::Copair(kind, a, b) => {
                let head = match kind {
                    PairKind::Symmetric => "copair",
                    PairKind::Left => "lcopair",
                    PairKind::Right => "rcopair",
                };
                write!(f, "{head}({a} | {b})")
            }
            Term::Proj(p, l, r) => write!(f, "pr{}[{l}, {r}]", p.index()),
            Term::Copr(p, l, r) => write!(f, "in{}[{l}, {r}]", p.index()),
            Term::Final(t) => write!(f, "final[{t}]"),
            Term::Initial(t) => write!(f, "initial[{t}]"),
            Term::Tag(n) => write!(f, "tag[{n}]"),
            Term::Untag(n) => write!(f, "untag[{n}]"),
            Term::UntagAll => write!(f, "untagall"),
            Term::Lookup(n) => write!(f, "lookup[{n}]"),
            Term::Update(n) => write!(f, "update[{n}]"),
            Term::Const(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Path to a subterm: child indices from the root.
pub type TermPath = Vec<usize>;

pub fn path_display(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        let parts: Vec<String> = path.iter().map(|i| i.to_string()).collect();
        format!("root.{}", parts.join("."))
    }
}

/// Strength of an equation: `Strong` compares the whole level-2
/// interpretations, `Weak` only what survives the effect restriction,
/// and `Order` is the partial-function order between a propagator and a
/// pure term (written `<<`, pure term on the right).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Strength {
    Strong,
    Weak,
    Order,
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strength::Strong => write!(f, "=="),
            Strength::Weak => write!(f, "~"),
            Strength::Order => write!(f, "<<"),
        }
    }
}

/// An equation between two terms of identical source and target.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    pub strength: Strength,
}

impl Equation {
    pub fn strong(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs, strength: Strength::Strong }
    }

    pub fn weak(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs, strength: Strength::Weak }
    }

    pub fn order(lhs: Term, rhs: Term) -> Equation {
        Equation { lhs, rhs, strength: Strength::Order }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.strength, self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_surface_syntax() {
        let t = Term::comp(Term::untag("T"), Term::tag("T"));
        assert_eq!(t.to_string(), "untag[T] . tag[T]");
        let t = Term::prop_comp(Term::constant("k"), Term::constant("f"));
        assert_eq!(t.to_string(), "k (.) f");
        let t = Term::copair(PairKind::Left, Term::constant("f"), Term::constant("g"));
        assert_eq!(t.to_string(), "lcopair(f | g)");
    }

    #[test]
    fn display_parenthesizes_non_default_nesting() {
        let a = Term::constant("a");
        let b = Term::constant("b");
        let c = Term::constant("c");
        let left = Term::comp(Term::comp(a.clone(), b.clone()), c.clone());
        assert_eq!(left.to_string(), "a . b . c");
        let right = Term::comp(a.clone(), Term::comp(b.clone(), c.clone()));
        assert_eq!(right.to_string(), "a . (b . c)");
        let mixed = Term::prop_comp(a, Term::prop_comp(b, c));
        assert_eq!(mixed.to_string(), "a (.) (b (.) c)");
    }

    #[test]
    fn paths_address_children() {
        let t = Term::comp(Term::untag("T"), Term::tag("T"));
        assert_eq!(t.at_path(&[0]), Some(&Term::untag("T")));
        assert_eq!(t.at_path(&[1]), Some(&Term::tag("T")));
        assert_eq!(t.at_path(&[2]), None);
        assert_eq!(t.subterms().len(), 3);
    }
}
