use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::bits::{Element, Subset, WorldSet};
use crate::frames::{FrameError, NeighborhoodFrame, Neighborhoods};
use crate::syntax::Modality;

use super::filters::{enumerate_prime_filters, is_qfilter, Filter, MeetFamily};
use super::modal::{complex_algebra, ModalAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexingError {
    #[error("frame has {worlds} worlds but {filters} filters were supplied")]
    Count { worlds: usize, filters: usize },
    #[error("world {0} is not indexed by a Q-filter of the algebra")]
    NotQFilter(usize),
    #[error("frame and algebra disagree on modalities")]
    Modalities,
    #[error(transparent)]
    Frame(#[from] FrameError),
}

/// A neighborhood frame whose world `i` stands for `filters[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFilterFrame {
    frame: NeighborhoodFrame,
    filters: Vec<Filter>,
}

impl QFilterFrame {
    /// Pairs an arbitrary frame with a filter index, as for user-supplied
    /// neighborhood systems.
    pub fn from_parts(frame: NeighborhoodFrame, filters: Vec<Filter>) -> Result<Self, IndexingError> {
        if frame.worlds() != filters.len() {
            return Err(IndexingError::Count {
                worlds: frame.worlds(),
                filters: filters.len(),
            });
        }
        Ok(QFilterFrame { frame, filters })
    }

    pub fn frame(&self) -> &NeighborhoodFrame {
        &self.frame
    }

    pub fn filters(&self) -> &[Filter] {
        &self.filters
    }

    pub fn world_of(&self, f: &Filter) -> Option<usize> {
        self.filters.iter().position(|g| g == f)
    }

    /// Same worlds and index, new neighborhood systems.
    pub fn with_systems(&self, systems: BTreeMap<Modality, Vec<Neighborhoods>>) -> Result<Self, IndexingError> {
        let frame = NeighborhoodFrame::new(self.frame.worlds(), systems)?;
        Ok(QFilterFrame {
            frame,
            filters: self.filters.clone(),
        })
    }

    /// `⟨Q, ↑N⟩`: every system replaced by its upward closure.
    pub fn upward_closed(&self) -> NeighborhoodFrame {
        let universe = self.frame.universe();
        let systems = self
            .frame
            .systems()
            .iter()
            .map(|(m, per_world)| {
                let closed = per_world
                    .iter()
                    .map(|ns| {
                        ns.iter()
                            .flat_map(|x| x.complement(universe.len()).subsets().map(move |e| x.union(e)))
                            .collect()
                    })
                    .collect();
                (m.clone(), closed)
            })
            .collect();
        NeighborhoodFrame::new(self.frame.worlds(), systems).expect("closure stays within the universe")
    }

    /// `{F | x ∈ F}` over this frame's worlds.
    pub fn extension(&self, x: Element) -> WorldSet {
        Subset::from_indices(
            self.filters
                .iter()
                .enumerate()
                .filter(|(_, f)| f.contains(x))
                .map(|(i, _)| i),
        )
    }
}

/// The Q-filters of `alg` for `s`, in atom order.
pub fn qfilters(alg: &ModalAlgebra, s: &MeetFamily) -> Vec<Filter> {
    enumerate_prime_filters(alg)
        .into_iter()
        .filter(|f| is_qfilter(alg, f, s))
        .collect()
}

/// `Frm_S(A)` with `N(F) = {f(x) | □x ∈ F}` for every modality.
pub fn qfilter_frame(alg: &ModalAlgebra, s: &MeetFamily) -> Result<QFilterFrame, IndexingError> {
    let filters = qfilters(alg, s);
    let skeleton = QFilterFrame {
        frame: NeighborhoodFrame::new(filters.len(), BTreeMap::new())?,
        filters,
    };
    let systems = alg
        .modalities()
        .map(|m| {
            let per_world = skeleton
                .filters
                .iter()
                .map(|f| {
                    alg.elements()
                        .filter(|&x| f.contains(alg.box_of(m, x)))
                        .map(|x| skeleton.extension(x))
                        .collect()
                })
                .collect();
            (m.clone(), per_world)
        })
        .collect();
    skeleton.with_systems(systems)
}

/// The map `f(x) = {F ∈ Q_S(A) | x ∈ F}`, tabulated over the carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    table: Vec<WorldSet>,
}

impl Embedding {
    pub fn apply(&self, x: Element) -> WorldSet {
        self.table[x.index()]
    }

    pub fn table(&self) -> &[WorldSet] {
        &self.table
    }
}

pub fn embedding(alg: &ModalAlgebra, s: &MeetFamily) -> Embedding {
    let filters = qfilters(alg, s);
    let table = alg
        .elements()
        .map(|x| {
            Subset::from_indices(
                filters
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.contains(x))
                    .map(|(i, _)| i),
            )
        })
        .collect();
    Embedding { table }
}

/// Which half of the frame condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DfrmClause {
    /// `□⁻¹F ⊆ ⋃_{X∈N(F)} ⋂X`
    BoxInverse,
    /// `◇⁻¹F ⊆ ⋂_{X∈N(F)} ⋃X`
    DiamondInverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DfrmViolation {
    pub world: usize,
    pub modality: Modality,
    pub element: Element,
    pub clause: DfrmClause,
}

/// First violation of the Q-filter frame condition, scanning worlds,
/// then modalities, then elements.
pub fn find_dfrm_violation(
    alg: &ModalAlgebra,
    qf: &QFilterFrame,
    s: &MeetFamily,
) -> Result<Option<DfrmViolation>, IndexingError> {
    let frame = qf.frame();
    for (i, f) in qf.filters().iter().enumerate() {
        if f.atoms() != alg.atoms() || !f.is_prime() || !is_qfilter(alg, f, s) {
            return Err(IndexingError::NotQFilter(i));
        }
    }
    let frame_mods: BTreeSet<&Modality> = frame.modalities().collect();
    let alg_mods: BTreeSet<&Modality> = alg.modalities().collect();
    if frame_mods != alg_mods {
        return Err(IndexingError::Modalities);
    }
    for (c, f) in qf.filters().iter().enumerate() {
        for m in alg.modalities() {
            let ns = frame.neighborhoods(m, c);
            for x in alg.elements() {
                // x ∈ ⋂X iff X ⊆ f(x); x ∈ ⋃X iff X meets f(x).
                let fx = qf.extension(x);
                if f.contains(alg.box_of(m, x)) && !ns.iter().any(|n| n.is_subset(fx)) {
                    return Ok(Some(DfrmViolation {
                        world: c,
                        modality: m.clone(),
                        element: x,
                        clause: DfrmClause::BoxInverse,
                    }));
                }
                if f.contains(alg.diamond(m, x)) && !ns.iter().all(|n| !n.intersection(fx).is_empty()) {
                    return Ok(Some(DfrmViolation {
                        world: c,
                        modality: m.clone(),
                        element: x,
                        clause: DfrmClause::DiamondInverse,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// Both inclusions of the Q-filter frame condition at every filter-world.
pub fn check_dfrm_conditions(alg: &ModalAlgebra, qf: &QFilterFrame, s: &MeetFamily) -> Result<bool, IndexingError> {
    Ok(find_dfrm_violation(alg, qf, s)?.is_none())
}

/// Which homomorphism laws `f` satisfies into `Alg(target)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub zero: bool,
    pub one: bool,
    pub meet: bool,
    pub join: bool,
    pub complement: bool,
    /// `f(⋀X) = ⋂ f[X]` for each `X ∈ S`.
    pub family_meets: bool,
    pub boxes: BTreeMap<Modality, bool>,
}

impl EmbeddingReport {
    pub fn boolean_ok(&self) -> bool {
        self.injective && self.zero && self.one && self.meet && self.join && self.complement && self.family_meets
    }

    pub fn all_ok(&self) -> bool {
        self.boolean_ok() && self.boxes.values().all(|&b| b)
    }
}

/// Checks `f` exhaustively against `Alg(target)`, where `target` has one
/// world per entry of the embedding's codomain.
pub fn verify_embedding(alg: &ModalAlgebra, f: &Embedding, target: &NeighborhoodFrame, s: &MeetFamily) -> EmbeddingReport {
    let n = target.worlds();
    let image = complex_algebra(target);
    let all = || alg.elements();
    let seen: BTreeSet<WorldSet> = all().map(|x| f.apply(x)).collect();
    let pairs = |law: &dyn Fn(Element, Element) -> bool| all().all(|x| all().all(|y| law(x, y)));
    let boxes = alg
        .modalities()
        .map(|m| {
            let ok = image.has_modality(m)
                && all().all(|x| f.apply(alg.box_of(m, x)) == image.box_of(m, f.apply(x)));
            (m.clone(), ok)
        })
        .collect();
    EmbeddingReport {
        injective: seen.len() == alg.size(),
        zero: f.apply(alg.bottom()).is_empty(),
        one: f.apply(alg.top()) == Subset::full(n),
        meet: pairs(&|x, y| f.apply(x.intersection(y)) == f.apply(x).intersection(f.apply(y))),
        join: pairs(&|x, y| f.apply(x.union(y)) == f.apply(x).union(f.apply(y))),
        complement: all().all(|x| f.apply(alg.complement(x)) == f.apply(x).complement(n)),
        family_meets: s.sets().iter().all(|xs| {
            let lhs = f.apply(alg.meet_all(xs.iter().copied()));
            let rhs = xs.iter().fold(Subset::full(n), |acc, &x| acc.intersection(f.apply(x)));
            lhs == rhs
        }),
        boxes,
    }
}
