//! Logic profiles and their formation tables.
//!
//! A profile fixes which tupling/cotupling constructions exist and the
//! maximal decorations of their components. `EQ` is the pure equational
//! logic; `MON`/`COMON` are the generic decorated logics for a monad and a
//! comonad; `EXC`/`ST` add the core exception/state operations; `EXC_PLUS`
//! adds the propagator composition and left/right pairs (extensivity), and
//! `ST_PLUS` widens symmetric copairs to modifiers (distributivity).

use std::fmt;

use crate::types::{Decoration, PairKind};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ProfileName {
    Eq,
    Mon,
    Comon,
    Exc,
    ExcPlus,
    St,
    StPlus,
}

pub const ALL_PROFILES: [ProfileName; 7] = [
    ProfileName::Eq,
    ProfileName::Mon,
    ProfileName::Comon,
    ProfileName::Exc,
    ProfileName::ExcPlus,
    ProfileName::St,
    ProfileName::StPlus,
];

/// Which effect family the logic talks about.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LogicSide {
    None,
    Monad,
    Comonad,
}

impl ProfileName {
    pub fn parse(s: &str) -> Option<ProfileName> {
        match s {
            "EQ" => Some(ProfileName::Eq),
            "MON" => Some(ProfileName::Mon),
            "COMON" => Some(ProfileName::Comon),
            "EXC" => Some(ProfileName::Exc),
            "EXC_PLUS" => Some(ProfileName::ExcPlus),
            "ST" => Some(ProfileName::St),
            "ST_PLUS" => Some(ProfileName::StPlus),
            _ => None,
        }
    }

    pub fn side(self) -> LogicSide {
        match self {
            ProfileName::Eq => LogicSide::None,
            ProfileName::Mon | ProfileName::Exc | ProfileName::ExcPlus => LogicSide::Monad,
            ProfileName::Comon | ProfileName::St | ProfileName::StPlus => LogicSide::Comonad,
        }
    }

    /// Tag/untag/untagall are grammar only in the exception logics.
    pub fn has_exception_ops(self) -> bool {
        matches!(self, ProfileName::Exc | ProfileName::ExcPlus)
    }

    /// Lookup/update are grammar only in the state logics.
    pub fn has_state_ops(self) -> bool {
        matches!(self, ProfileName::St | ProfileName::StPlus)
    }

    /// Maximal component decorations for a pair of the given kind, or
    /// `None` when the profile has no such construction.
    pub fn pair_bounds(self, kind: PairKind) -> Option<(Decoration, Decoration)> {
        use Decoration::*;
        use PairKind::*;
        match (self, kind) {
            (ProfileName::Eq, Symmetric) => Some((D0, D0)),
            (ProfileName::Mon | ProfileName::Exc, Symmetric) => Some((D0, D0)),
            (ProfileName::ExcPlus, Symmetric) => Some((D0, D0)),
            (ProfileName::ExcPlus, Left) => Some((D0, D1)),
            (ProfileName::ExcPlus, Right) => Some((D1, D0)),
            (ProfileName::Comon, Symmetric) => Some((D1, D1)),
            (ProfileName::St | ProfileName::StPlus, Symmetric) => Some((D1, D1)),
            (ProfileName::St | ProfileName::StPlus, Left) => Some((D1, D2)),
            (ProfileName::St | ProfileName::StPlus, Right) => Some((D2, D1)),
            _ => None,
        }
    }

    /// Maximal component decorations for a copair of the given kind.
    pub fn copair_bounds(self, kind: PairKind) -> Option<(Decoration, Decoration)> {
        use Decoration::*;
        use PairKind::*;
        match (self, kind) {
            (ProfileName::Eq, Symmetric) => Some((D0, D0)),
            (ProfileName::Mon | ProfileName::Exc | ProfileName::ExcPlus, Symmetric) => {
                Some((D1, D1))
            }
            (ProfileName::Exc | ProfileName::ExcPlus, Left) => Some((D1, D2)),
            (ProfileName::Exc | ProfileName::ExcPlus, Right) => Some((D2, D1)),
            (ProfileName::Comon | ProfileName::St, Symmetric) => Some((D0, D0)),
            (ProfileName::StPlus, Symmetric) => Some((D2, D2)),
            _ => None,
        }
    }

    /// Maximal decoration of the inner factor of `(.)`, or `None` when the
    /// propagator composition is not part of the profile.
    pub fn prop_comp_inner_bound(self) -> Option<Decoration> {
        match self {
            ProfileName::ExcPlus => Some(Decoration::D1),
            _ => None,
        }
    }

    /// The formation rule name a pair/copair node is checked against, used
    /// in violation reports.
    pub fn pair_rule_name(kind: PairKind) -> &'static str {
        match kind {
            PairKind::Symmetric => "pair",
            PairKind::Left => "l-pair",
            PairKind::Right => "r-pair",
        }
    }

    pub fn copair_rule_name(kind: PairKind) -> &'static str {
        match kind {
            PairKind::Symmetric => "copair",
            PairKind::Left => "l-copair",
            PairKind::Right => "r-copair",
        }
    }
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProfileName::Eq => "EQ",
            ProfileName::Mon => "MON",
            ProfileName::Comon => "COMON",
            ProfileName::Exc => "EXC",
            ProfileName::ExcPlus => "EXC_PLUS",
            ProfileName::St => "ST",
            ProfileName::StPlus => "ST_PLUS",
        };
        write!(f, "{s}")
    }
}
