//! Finite neighborhood frames, accessibility relations, and the frame-class
//! checks MT / TP / CF / Kripke.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bits::{Subset, WorldSet};
use crate::syntax::Modality;

/// Worlds are limited so that every world-set fits a [`Subset`] and the
/// complex algebra's box tables (`2^worlds` entries) stay small.
pub const MAX_WORLDS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("a frame needs at least one world")]
    NoWorlds,
    #[error("{0} worlds exceeds the supported maximum of {MAX_WORLDS}")]
    TooManyWorlds(usize),
    #[error("modality `{modality}` has neighborhood lists for {found} worlds, expected {expected}")]
    WrongLength {
        modality: Modality,
        expected: usize,
        found: usize,
    },
    #[error("world {world} is out of range for a frame with {worlds} worlds")]
    WorldOutOfRange { world: usize, worlds: usize },
    #[error("unknown modality `{0}`")]
    UnknownModality(Modality),
}

/// The family `N_m(c)` of neighborhoods of one world.
pub type Neighborhoods = BTreeSet<WorldSet>;

/// A finite neighborhood frame with one neighborhood system per modality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodFrame {
    worlds: usize,
    systems: BTreeMap<Modality, Vec<Neighborhoods>>,
}

fn check_world_count(worlds: usize) -> Result<(), FrameError> {
    if worlds == 0 {
        Err(FrameError::NoWorlds)
    } else if worlds > MAX_WORLDS {
        Err(FrameError::TooManyWorlds(worlds))
    } else {
        Ok(())
    }
}

impl NeighborhoodFrame {
    pub fn new(
        worlds: usize,
        systems: BTreeMap<Modality, Vec<Neighborhoods>>,
    ) -> Result<Self, FrameError> {
        check_world_count(worlds)?;
        let universe = Subset::full(worlds);
        for (m, per_world) in &systems {
            if per_world.len() != worlds {
                return Err(FrameError::WrongLength {
                    modality: m.clone(),
                    expected: worlds,
                    found: per_world.len(),
                });
            }
            for x in per_world.iter().flatten() {
                if !x.is_subset(universe) {
                    let world = x.difference(universe).iter().next().unwrap_or(worlds);
                    return Err(FrameError::WorldOutOfRange { world, worlds });
                }
            }
        }
        Ok(NeighborhoodFrame { worlds, systems })
    }

    /// A frame with the single default modality.
    pub fn mono(worlds: usize, neighborhoods: Vec<Neighborhoods>) -> Result<Self, FrameError> {
        Self::new(
            worlds,
            BTreeMap::from([(Modality::default_box(), neighborhoods)]),
        )
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn universe(&self) -> WorldSet {
        Subset::full(self.worlds)
    }

    pub fn modalities(&self) -> impl Iterator<Item = &Modality> {
        self.systems.keys()
    }

    pub fn has_modality(&self, m: &Modality) -> bool {
        self.systems.contains_key(m)
    }

    pub fn system(&self, m: &Modality) -> Option<&[Neighborhoods]> {
        self.systems.get(m).map(Vec::as_slice)
    }

    pub fn systems(&self) -> &BTreeMap<Modality, Vec<Neighborhoods>> {
        &self.systems
    }

    /// `N_m(c)`; panics on an unknown modality or world.
    pub fn neighborhoods(&self, m: &Modality, c: usize) -> &Neighborhoods {
        &self.systems[m][c]
    }

    /// `□_m X = {c | X ∈ N_m(c)}`.
    pub fn box_set(&self, m: &Modality, x: WorldSet) -> Option<WorldSet> {
        let sys = self.systems.get(m)?;
        Some(Subset::from_indices(
            (0..self.worlds).filter(|&c| sys[c].contains(&x)),
        ))
    }

    fn per_world(&self, m: &Modality) -> &[Neighborhoods] {
        self.systems.get(m).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Every `N_m(c)` is upward closed.
    pub fn check_mt(&self, m: &Modality) -> bool {
        let universe = self.universe();
        self.per_world(m).iter().all(|nc| {
            nc.iter().all(|&x| {
                x.complement(self.worlds)
                    .subsets()
                    .all(|extra| nc.contains(&x.union(extra).intersection(universe)))
            })
        })
    }

    /// Every `N_m(c)` contains the whole world set.
    pub fn check_tp(&self, m: &Modality) -> bool {
        let universe = self.universe();
        self.per_world(m).iter().all(|nc| nc.contains(&universe))
    }

    /// Every `N_m(c)` is closed under binary intersection.
    pub fn check_cf(&self, m: &Modality) -> bool {
        self.per_world(m).iter().all(|nc| {
            nc.iter()
                .all(|&x| nc.iter().all(|&y| nc.contains(&x.intersection(y))))
        })
    }

    /// `⋂N(c)` with the empty family intersecting to the full universe.
    pub fn core(&self, m: &Modality, c: usize) -> WorldSet {
        self.neighborhoods(m, c)
            .iter()
            .fold(self.universe(), |acc, &x| acc.intersection(x))
    }

    /// MT, and every world's core `⋂N_m(c)` is itself a neighborhood.
    pub fn check_kripke(&self, m: &Modality) -> bool {
        self.has_modality(m)
            && self.check_mt(m)
            && (0..self.worlds).all(|c| self.neighborhoods(m, c).contains(&self.core(m, c)))
    }

    /// `(x, y) ∈ R ⇔ y ∈ ⋂N(x)`, defined only for Kripke systems.
    pub fn kripke_relation(&self, m: &Modality) -> Option<Relation> {
        self.check_kripke(m).then(|| Relation {
            succ: (0..self.worlds).map(|c| self.core(m, c)).collect(),
        })
    }

    /// The per-modality relations, if every modality is Kripke.
    pub fn accessibility(&self) -> Option<AccessibilityRelation> {
        let relations = self
            .systems
            .keys()
            .map(|m| Some((m.clone(), self.kripke_relation(m)?)))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(AccessibilityRelation {
            worlds: self.worlds,
            relations,
        })
    }
}

/// A binary relation on worlds `0..n`, stored as successor sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    succ: Vec<WorldSet>,
}

impl Relation {
    pub fn empty(worlds: usize) -> Self {
        Relation {
            succ: vec![Subset::EMPTY; worlds],
        }
    }

    pub fn from_edges(
        worlds: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, FrameError> {
        check_world_count(worlds)?;
        let mut r = Relation::empty(worlds);
        for (a, b) in edges {
            for w in [a, b] {
                if w >= worlds {
                    return Err(FrameError::WorldOutOfRange { world: w, worlds });
                }
            }
            r.succ[a] = r.succ[a].with(b);
        }
        Ok(r)
    }

    pub fn from_successors(succ: Vec<WorldSet>) -> Self {
        Relation { succ }
    }

    pub fn worlds(&self) -> usize {
        self.succ.len()
    }

    /// `R[c]`
    pub fn successors(&self, c: usize) -> WorldSet {
        self.succ[c]
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.succ[a].contains(b)
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |b| (a, b)))
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().collect()
    }

    pub fn is_transitive(&self) -> bool {
        (0..self.worlds()).all(|a| {
            self.succ[a]
                .iter()
                .all(|b| self.succ[b].is_subset(self.succ[a]))
        })
    }

    /// Relational composition `self ; other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        Relation {
            succ: self
                .succ
                .iter()
                .map(|s| s.iter().fold(Subset::EMPTY, |acc, b| acc.union(other.succ[b])))
                .collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            succ: self
                .succ
                .iter()
                .zip(&other.succ)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }
}

/// Per-modality accessibility relations on a shared world set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessibilityRelation {
    worlds: usize,
    relations: BTreeMap<Modality, Relation>,
}

impl AccessibilityRelation {
    pub fn new(worlds: usize, relations: BTreeMap<Modality, Relation>) -> Result<Self, FrameError> {
        check_world_count(worlds)?;
        for (m, r) in &relations {
            if r.worlds() != worlds {
                return Err(FrameError::WrongLength {
                    modality: m.clone(),
                    expected: worlds,
                    found: r.worlds(),
                });
            }
        }
        Ok(AccessibilityRelation { worlds, relations })
    }

    pub fn mono(r: Relation) -> Self {
        AccessibilityRelation {
            worlds: r.worlds(),
            relations: BTreeMap::from([(Modality::default_box(), r)]),
        }
    }

    pub fn worlds(&self) -> usize {
        self.worlds
    }

    pub fn relation(&self, m: &Modality) -> Option<&Relation> {
        self.relations.get(m)
    }

    pub fn relations(&self) -> &BTreeMap<Modality, Relation> {
        &self.relations
    }
}

/// `N_m(c) = ↑{R_m[c]}` for every modality.
pub fn relation_to_frame(rel: &AccessibilityRelation) -> NeighborhoodFrame {
    let n = rel.worlds;
    let systems = rel
        .relations
        .iter()
        .map(|(m, r)| {
            let per_world = (0..n)
                .map(|c| {
                    let core = r.successors(c);
                    core.complement(n)
                        .subsets()
                        .map(|extra| core.union(extra))
                        .collect()
                })
                .collect();
            (m.clone(), per_world)
        })
        .collect();
    NeighborhoodFrame { worlds: n, systems }
}

/// On a finite relation, converse well-foundedness means no cycles
/// (a self-loop counts as a cycle).
pub fn check_conversely_wellfounded(r: &Relation) -> bool {
    // Repeatedly strip worlds with no successors left among the remaining ones.
    let mut remaining = Subset::full(r.worlds());
    loop {
        let sinks = Subset::from_indices(
            remaining
                .iter()
                .filter(|&c| r.successors(c).intersection(remaining).is_empty()),
        );
        if sinks.is_empty() {
            return remaining.is_empty();
        }
        remaining = remaining.difference(sinks);
    }
}

/// `⋃ R^n` over `n ≥ 1`, or over `n ≥ 0` when `include_identity` is set
/// (which adds the diagonal).
pub fn transitive_closure_union(r: &Relation, include_identity: bool) -> Relation {
    let n = r.worlds();
    let mut succ = r.succ.clone();
    // Warshall
    for k in 0..n {
        for i in 0..n {
            if succ[i].contains(k) {
                succ[i] = succ[i].union(succ[k]);
            }
        }
    }
    if include_identity {
        for (i, s) in succ.iter_mut().enumerate() {
            *s = s.with(i);
        }
    }
    Relation { succ }
}
