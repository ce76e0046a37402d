use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use super::ord::{Ordinal, OrdinalParseError};

/// A member of the interval subalgebra of `2^(ω+ω)`: the characteristic
/// function of a finite union of half-open intervals.
///
/// `ones` is kept canonical: nonempty intervals, sorted, pairwise disjoint
/// and non-adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrdinalElement {
    ones: Vec<(Ordinal, Ordinal)>,
}

const START: Ordinal = Ordinal::Fin(0);
const END: Ordinal = Ordinal::OmegaOmega;

impl OrdinalElement {
    /// `0_A`
    pub fn zero() -> Self {
        OrdinalElement { ones: Vec::new() }
    }

    /// `1_A`
    pub fn one() -> Self {
        OrdinalElement { ones: vec![(START, END)] }
    }

    /// `[lo, hi)`, empty when `lo ≥ hi`.
    pub fn interval(lo: Ordinal, hi: Ordinal) -> Self {
        Self::from_intervals([(lo, hi)])
    }

    /// Normalizes an arbitrary list of `[lo, hi)` intervals.
    pub fn from_intervals(intervals: impl IntoIterator<Item = (Ordinal, Ordinal)>) -> Self {
        let mut raw: Vec<(Ordinal, Ordinal)> = intervals.into_iter().filter(|(lo, hi)| lo < hi).collect();
        raw.sort();
        let mut ones: Vec<(Ordinal, Ordinal)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match ones.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => ones.push((lo, hi)),
            }
        }
        OrdinalElement { ones }
    }

    /// The element that is 0 exactly at the given points.
    pub fn zero_at(points: impl IntoIterator<Item = Ordinal>) -> Self {
        OrdinalElement::from_intervals(points.into_iter().map(|p| (p, p.succ()))).complement()
    }

    pub fn intervals(&self) -> &[(Ordinal, Ordinal)] {
        &self.ones
    }

    pub fn is_canonical(&self) -> bool {
        self.ones.iter().all(|(lo, hi)| lo < hi) && self.ones.windows(2).all(|w| w[0].1 < w[1].0)
    }

    pub fn is_zero(&self) -> bool {
        self.ones.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.ones == [(START, END)]
    }

    /// `x(α)`
    pub fn value_at(&self, alpha: Ordinal) -> bool {
        self.ones.iter().any(|&(lo, hi)| lo <= alpha && alpha < hi)
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.ones.len() + 1);
        let mut cursor = START;
        for &(lo, hi) in &self.ones {
            if cursor < lo {
                out.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < END {
            out.push((cursor, END));
        }
        OrdinalElement { ones: out }
    }

    pub fn join(&self, other: &Self) -> Self {
        Self::from_intervals(self.ones.iter().chain(&other.ones).copied())
    }

    pub fn meet(&self, other: &Self) -> Self {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ones.len() && j < other.ones.len() {
            let (a, b) = (self.ones[i], other.ones[j]);
            let lo = a.0.max(b.0);
            let hi = a.1.min(b.1);
            if lo < hi {
                out.push((lo, hi));
            }
            if a.1 < b.1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        OrdinalElement { ones: out }
    }

    /// Pointwise `≤`.
    pub fn le(&self, other: &Self) -> bool {
        self.meet(other) == *self
    }

    /// Runs of constant value covering `[0, ω+ω)` in order.
    pub fn runs(&self) -> Vec<(bool, Ordinal, Ordinal)> {
        let mut out = Vec::new();
        let mut cursor = START;
        for &(lo, hi) in &self.ones {
            if cursor < lo {
                out.push((false, cursor, lo));
            }
            out.push((true, lo, hi));
            cursor = hi;
        }
        if cursor < END {
            out.push((false, cursor, END));
        }
        out
    }

    /// Value table such as `0 on [0,w), 1 on [w,w+w)`.
    pub fn case_table(&self) -> String {
        self.runs()
            .iter()
            .map(|(v, lo, hi)| format!("{} on [{lo},{hi})", u8::from(*v)))
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// A random element whose cut points lie in `{0..span} ∪ {ω..ω+span}`.
    pub fn random(rng: &mut impl Rng, span: u64) -> Self {
        match rng.gen_range(0..12) {
            0 => return Self::one(),
            1 => return Self::zero(),
            _ => {}
        }
        let cuts = rng.gen_range(1..=6);
        let mut points: Vec<Ordinal> = (0..cuts)
            .map(|_| {
                let k = rng.gen_range(0..span);
                if rng.gen_bool(0.5) {
                    Ordinal::Fin(k)
                } else {
                    Ordinal::OmegaPlus(k)
                }
            })
            .collect();
        points.sort();
        points.dedup();
        let mut on = rng.gen_bool(0.5);
        let mut cursor = START;
        let mut ones = Vec::new();
        for p in points.into_iter().chain([END]) {
            if on {
                ones.push((cursor, p));
            }
            cursor = p;
            on = !on;
        }
        Self::from_intervals(ones)
    }
}

impl fmt::Display for OrdinalElement {
    /// `1 on [0,1) ∪ [2,w+w)`, or `1 on ∅` for `0_A`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("1 on ")?;
        if self.ones.is_empty() {
            return f.write_str("∅");
        }
        for (i, (lo, hi)) in self.ones.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "[{lo},{hi})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ElementParseError {
    #[error("expected `1 on` followed by intervals, got `{0}`")]
    Shape(String),
    #[error("malformed interval `{0}`")]
    Interval(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalParseError),
}

impl FromStr for OrdinalElement {
    type Err = ElementParseError;

    /// Parses the [`Display`](fmt::Display) form; `∪` may also be written `U`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix("1 on")
            .ok_or_else(|| ElementParseError::Shape(s.to_string()))?
            .trim();
        if body == "∅" || body.is_empty() {
            return Ok(Self::zero());
        }
        let mut intervals = Vec::new();
        for part in body.split(['∪', 'U']) {
            let part = part.trim();
            let inner = part
                .strip_prefix('[')
                .and_then(|p| p.strip_suffix(')'))
                .ok_or_else(|| ElementParseError::Interval(part.to_string()))?;
            let (lo, hi) = inner
                .split_once(',')
                .ok_or_else(|| ElementParseError::Interval(part.to_string()))?;
            intervals.push((lo.parse()?, hi.parse()?));
        }
        Ok(Self::from_intervals(intervals))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ordinal::OMEGA;
    use rand::SeedableRng;

    fn fin(k: u64) -> Ordinal {
        Ordinal::Fin(k)
    }

    #[test]
    fn boolean_basics() {
        assert_eq!(OrdinalElement::one().complement(), OrdinalElement::zero());
        let a = OrdinalElement::interval(fin(0), OMEGA);
        let b = OrdinalElement::interval(fin(3), END);
        assert_eq!(a.meet(&b), OrdinalElement::interval(fin(3), OMEGA));
        assert_eq!(a.join(&b), OrdinalElement::one());
    }

    #[test]
    fn witness_intervals() {
        let x = OrdinalElement::zero_at([fin(1)]);
        assert_eq!(x.intervals(), &[(fin(0), fin(1)), (fin(2), END)]);
        assert_eq!(x.to_string(), "1 on [0,1) ∪ [2,w+w)");
        assert_eq!(x.case_table(), "1 on [0,1), 0 on [1,2), 1 on [2,w+w)");
        assert_eq!(x.to_string().parse::<OrdinalElement>().unwrap(), x);
    }

    #[test]
    fn adjacent_intervals_merge() {
        let x = OrdinalElement::from_intervals([(OMEGA, END), (fin(0), OMEGA)]);
        assert!(x.is_one());
        assert_eq!(OrdinalElement::zero().to_string(), "1 on ∅");
        assert_eq!("1 on ∅".parse::<OrdinalElement>().unwrap(), OrdinalElement::zero());
    }

    #[test]
    fn random_elements_are_canonical() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let x = OrdinalElement::random(&mut rng, 25);
            let y = OrdinalElement::random(&mut rng, 25);
            assert!(x.is_canonical());
            assert!(x.complement().is_canonical() && x.meet(&y).is_canonical() && x.join(&y).is_canonical());
            assert_eq!(x.complement().complement(), x);
            assert_eq!(x.meet(&y).complement(), x.complement().join(&y.complement()));
            for k in 0..30 {
                for alpha in [fin(k), Ordinal::OmegaPlus(k)] {
                    assert_eq!(x.meet(&y).value_at(alpha), x.value_at(alpha) && y.value_at(alpha));
                    assert_eq!(x.join(&y).value_at(alpha), x.value_at(alpha) || y.value_at(alpha));
                    assert_eq!(x.complement().value_at(alpha), !x.value_at(alpha));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_text() {
        assert!("0 on [0,1)".parse::<OrdinalElement>().is_err());
        assert!("1 on [0,1".parse::<OrdinalElement>().is_err());
        assert!("1 on [0,q)".parse::<OrdinalElement>().is_err());
    }
}
