use std::collections::BTreeSet;

use crate::bits::{Element, Subset};

use super::modal::ModalAlgebra;

/// A subset of a finite powerset algebra's carrier, meant to be a filter.
///
/// Construction does not enforce the filter laws; [`Filter::is_filter`] and
/// [`Filter::is_prime`] check them.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Filter {
    atoms: usize,
    members: BTreeSet<Element>,
}

impl Filter {
    pub fn from_members(atoms: usize, members: impl IntoIterator<Item = Element>) -> Self {
        Filter {
            atoms,
            members: members.into_iter().collect(),
        }
    }

    /// `↑a`
    pub fn principal(atoms: usize, a: Element) -> Self {
        let rest = a.complement(atoms);
        Filter {
            atoms,
            members: rest.subsets().map(|r| r.union(a)).collect(),
        }
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.contains(&x)
    }

    pub fn members(&self) -> &BTreeSet<Element> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Meet of all members; on a finite algebra a filter is `↑` of this.
    pub fn generator(&self) -> Element {
        self.members
            .iter()
            .fold(Subset::full(self.atoms), |acc, x| acc.intersection(*x))
    }

    /// Nonempty, upward closed and closed under binary meets.
    pub fn is_filter(&self) -> bool {
        if self.members.is_empty() {
            return false;
        }
        let top = Subset::full(self.atoms);
        self.members.iter().all(|&x| {
            x.complement(self.atoms)
                .subsets()
                .all(|extra| self.contains(x.union(extra)))
                && x.is_subset(top)
        }) && self
            .members
            .iter()
            .all(|&x| self.members.iter().all(|&y| self.contains(x.intersection(y))))
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(Subset::EMPTY)
    }

    /// A proper filter containing one of `x`, `y` whenever it contains `x ∨ y`.
    pub fn is_prime(&self) -> bool {
        if !self.is_filter() || !self.is_proper() {
            return false;
        }
        let n = self.atoms;
        Subset::all(n).all(|x| {
            Subset::all(n).all(|y| !self.contains(x.union(y)) || self.contains(x) || self.contains(y))
        })
    }
}

/// A finite family `S` of carrier subsets whose meets Q-filters must respect.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MeetFamily(pub Vec<BTreeSet<Element>>);

impl MeetFamily {
    pub fn empty() -> Self {
        MeetFamily(Vec::new())
    }

    pub fn sets(&self) -> &[BTreeSet<Element>] {
        &self.0
    }
}

/// The prime filters of `alg`: exactly `↑{i}` for each atom `i`, in atom order.
pub fn enumerate_prime_filters(alg: &ModalAlgebra) -> Vec<Filter> {
    (0..alg.atoms())
        .map(|i| Filter::principal(alg.atoms(), Subset::singleton(i)))
        .collect()
}

/// `F` is closed under the meets of the members of `S` it contains.
///
/// Primality of `F` is the caller's precondition and is not rechecked.
pub fn is_qfilter(alg: &ModalAlgebra, f: &Filter, s: &MeetFamily) -> bool {
    s.sets()
        .iter()
        .filter(|xs| xs.iter().all(|&x| f.contains(x)))
        .all(|xs| f.contains(alg.meet_all(xs.iter().copied())))
}
