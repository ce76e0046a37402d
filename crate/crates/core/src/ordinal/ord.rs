use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// An ordinal below `ω+ω`, or `ω+ω` itself as an exclusive endpoint.
///
/// The derived order is the ordinal order: every `Fin` precedes every
/// `OmegaPlus`, and `OmegaOmega` is the greatest value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ordinal {
    Fin(u64),
    OmegaPlus(u64),
    /// `ω+ω`, only meaningful as an interval's upper bound.
    OmegaOmega,
}

pub const OMEGA: Ordinal = Ordinal::OmegaPlus(0);

impl Ordinal {
    /// `α+1`; `ω+ω` is its own successor here since nothing lies above it.
    pub fn succ(self) -> Ordinal {
        match self {
            Ordinal::Fin(k) => Ordinal::Fin(k + 1),
            Ordinal::OmegaPlus(k) => Ordinal::OmegaPlus(k + 1),
            Ordinal::OmegaOmega => Ordinal::OmegaOmega,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Ordinal::Fin(_))
    }

    pub fn is_limit(self) -> bool {
        matches!(self, Ordinal::Fin(0) | Ordinal::OmegaPlus(0) | Ordinal::OmegaOmega)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ordinal::Fin(k) => write!(f, "{k}"),
            Ordinal::OmegaPlus(0) => f.write_str("w"),
            Ordinal::OmegaPlus(k) => write!(f, "w+{k}"),
            Ordinal::OmegaOmega => f.write_str("w+w"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("not an ordinal below or equal to w+w: `{0}`")]
pub struct OrdinalParseError(pub String);

impl FromStr for Ordinal {
    type Err = OrdinalParseError;

    /// Accepts `3`, `w`, `w+2`, `w+w`, with `ω` allowed for `w`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || OrdinalParseError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().replace('ω', "w");
        if let Ok(k) = t.parse::<u64>() {
            return Ok(Ordinal::Fin(k));
        }
        let rest = t.strip_prefix('w').ok_or_else(err)?;
        if rest.is_empty() {
            return Ok(OMEGA);
        }
        let rest = rest.strip_prefix('+').ok_or_else(err)?;
        if rest == "w" {
            return Ok(Ordinal::OmegaOmega);
        }
        rest.parse::<u64>().map(Ordinal::OmegaPlus).map_err(|_| err())
    }
}
