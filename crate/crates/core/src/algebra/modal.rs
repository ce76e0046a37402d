use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::bits::{Element, Subset};
use crate::frames::NeighborhoodFrame;
use crate::syntax::Modality;

/// Atom bound for table-backed algebras; a box table has `2^atoms` entries.
pub const MAX_ATOMS: usize = 16;

/// Complete multiplicativity is checked over every family of elements up to
/// this many atoms, and on sampled families above it.
pub const EXHAUSTIVE_MULTIPLICATIVITY_ATOMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("an algebra needs between 1 and {MAX_ATOMS} atoms, got {0}")]
    AtomCount(usize),
    #[error("box table for `{modality}` has {found} entries, expected {expected}")]
    TableLength {
        modality: Modality,
        expected: usize,
        found: usize,
    },
    #[error("box table for `{modality}` maps element {index} outside the carrier")]
    OutOfCarrier { modality: Modality, index: usize },
    #[error("unknown modality `{0}`")]
    UnknownModality(Modality),
}

/// A finite powerset Boolean algebra over `atoms` atoms with an explicit
/// box table per modality.
///
/// Element `i` is the set of atoms whose bitmask is `i`; the tables need
/// not be monotone or normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModalAlgebra {
    atoms: usize,
    boxes: BTreeMap<Modality, Vec<Element>>,
}

impl ModalAlgebra {
    pub fn new(atoms: usize, boxes: BTreeMap<Modality, Vec<Element>>) -> Result<Self, AlgebraError> {
        if atoms == 0 || atoms > MAX_ATOMS {
            return Err(AlgebraError::AtomCount(atoms));
        }
        let size = 1usize << atoms;
        let top = Subset::full(atoms);
        for (m, table) in &boxes {
            if table.len() != size {
                return Err(AlgebraError::TableLength {
                    modality: m.clone(),
                    expected: size,
                    found: table.len(),
                });
            }
            if let Some(index) = table.iter().position(|t| !t.is_subset(top)) {
                return Err(AlgebraError::OutOfCarrier {
                    modality: m.clone(),
                    index,
                });
            }
        }
        Ok(ModalAlgebra { atoms, boxes })
    }

    /// Builds each table by evaluating `op` on every element.
    pub fn from_fn(
        atoms: usize,
        modalities: &[Modality],
        mut op: impl FnMut(&Modality, Element) -> Element,
    ) -> Result<Self, AlgebraError> {
        if atoms == 0 || atoms > MAX_ATOMS {
            return Err(AlgebraError::AtomCount(atoms));
        }
        let boxes = modalities
            .iter()
            .map(|m| (m.clone(), Subset::all(atoms).map(|x| op(m, x)).collect()))
            .collect();
        Self::new(atoms, boxes)
    }

    /// Uniformly random tables.
    pub fn random(rng: &mut impl Rng, atoms: usize, modalities: &[Modality]) -> Result<Self, AlgebraError> {
        let size = 1u64 << atoms.min(63);
        Self::from_fn(atoms, modalities, |_, _| Subset(rng.gen_range(0..size)))
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    pub fn size(&self) -> usize {
        1 << self.atoms
    }

    pub fn modalities(&self) -> impl Iterator<Item = &Modality> {
        self.boxes.keys()
    }

    pub fn has_modality(&self, m: &Modality) -> bool {
        self.boxes.contains_key(m)
    }

    pub fn table(&self, m: &Modality) -> Option<&[Element]> {
        self.boxes.get(m).map(Vec::as_slice)
    }

    pub fn tables(&self) -> &BTreeMap<Modality, Vec<Element>> {
        &self.boxes
    }

    /// Carrier elements in binary order.
    pub fn elements(&self) -> impl Iterator<Item = Element> {
        Subset::all(self.atoms)
    }

    pub fn top(&self) -> Element {
        Subset::full(self.atoms)
    }

    pub fn bottom(&self) -> Element {
        Subset::EMPTY
    }

    pub fn meet(&self, x: Element, y: Element) -> Element {
        x.intersection(y)
    }

    pub fn join(&self, x: Element, y: Element) -> Element {
        x.union(y)
    }

    pub fn complement(&self, x: Element) -> Element {
        x.complement(self.atoms)
    }

    pub fn le(&self, x: Element, y: Element) -> bool {
        x.is_subset(y)
    }

    /// Panics on an unknown modality.
    pub fn box_of(&self, m: &Modality, x: Element) -> Element {
        self.boxes[m][x.index()]
    }

    /// `◇x = −□−x`
    pub fn diamond(&self, m: &Modality, x: Element) -> Element {
        self.complement(self.box_of(m, self.complement(x)))
    }

    /// Meet of a family; the empty meet is the top element.
    pub fn meet_all(&self, xs: impl IntoIterator<Item = Element>) -> Element {
        xs.into_iter().fold(self.top(), |acc, x| acc.intersection(x))
    }

    fn table_or_empty(&self, m: &Modality) -> &[Element] {
        self.boxes.get(m).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `□(x∧y) ≤ □x∧□y` for all `x`, `y`.
    pub fn check_mt(&self, m: &Modality) -> bool {
        let t = self.table_or_empty(m);
        !t.is_empty()
            && self.elements().all(|x| {
                self.elements()
                    .all(|y| t[x.intersection(y).index()].is_subset(t[x.index()].intersection(t[y.index()])))
            })
    }

    /// `□1 = 1`
    pub fn check_tp(&self, m: &Modality) -> bool {
        self.has_modality(m) && self.box_of(m, self.top()) == self.top()
    }

    /// `□x∧□y ≤ □(x∧y)` for all `x`, `y`.
    pub fn check_cf(&self, m: &Modality) -> bool {
        let t = self.table_or_empty(m);
        !t.is_empty()
            && self.elements().all(|x| {
                self.elements()
                    .all(|y| t[x.index()].intersection(t[y.index()]).is_subset(t[x.intersection(y).index()]))
            })
    }

    /// MT, TP and CF together.
    pub fn is_normal(&self, m: &Modality) -> bool {
        self.check_mt(m) && self.check_tp(m) && self.check_cf(m)
    }

    /// `⋀_{x∈X} □x = □⋀X` for every family `X`, the empty family included.
    ///
    /// Exhaustive up to [`EXHAUSTIVE_MULTIPLICATIVITY_ATOMS`] atoms; above
    /// that, every family of at most two elements is checked plus seeded
    /// random families.
    pub fn check_completely_multiplicative(&self, m: &Modality) -> bool {
        if !self.has_modality(m) {
            return false;
        }
        let holds = |family: &[Element]| {
            let lhs = self.meet_all(family.iter().map(|&x| self.box_of(m, x)));
            lhs == self.box_of(m, self.meet_all(family.iter().copied()))
        };
        if self.atoms <= EXHAUSTIVE_MULTIPLICATIVITY_ATOMS {
            // Families are subsets of the carrier, indexed by a bitmask over it.
            let size = self.size();
            return (0u64..(1u64 << size)).all(|mask| {
                let family: Vec<Element> = Subset(mask).iter().map(|i| Subset(i as u64)).collect();
                holds(&family)
            });
        }
        if !holds(&[]) {
            return false;
        }
        let pairs = self
            .elements()
            .all(|x| self.elements().all(|y| holds(&[x, y])));
        if !pairs {
            return false;
        }
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6d75_6c74);
        let size = self.size() as u64;
        (0..4096).all(|_| {
            let len = rng.gen_range(3..=8);
            let family: Vec<Element> = (0..len).map(|_| Subset(rng.gen_range(0..size))).collect();
            holds(&family)
        })
    }
}

/// `Alg(Z)`: the powerset of the worlds with `□X = {c | X ∈ N(c)}`.
pub fn complex_algebra(frame: &NeighborhoodFrame) -> ModalAlgebra {
    let n = frame.worlds();
    let boxes = frame
        .systems()
        .iter()
        .map(|(m, per_world)| {
            let table = Subset::all(n)
                .map(|x| Subset::from_indices((0..n).filter(|&c| per_world[c].contains(&x))))
                .collect();
            (m.clone(), table)
        })
        .collect();
    ModalAlgebra { atoms: n, boxes }
}
