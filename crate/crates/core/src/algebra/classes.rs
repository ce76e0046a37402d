use std::collections::BTreeSet;

use crate::bits::Element;
use crate::frames::NeighborhoodFrame;
use crate::semantics::{frame_validates, Bounds, ValidityError};
use crate::syntax::{Formula, Modality};

use super::modal::{complex_algebra, ModalAlgebra};

/// Meet of every value in the orbit `x, step(x), step(step(x)), …`.
///
/// Over a finite carrier the orbit is eventually periodic, so iteration
/// stops at the first repeated value.
pub fn orbit_meet(start: Element, mut step: impl FnMut(Element) -> Element) -> Element {
    let mut seen = BTreeSet::new();
    let mut acc = start;
    let mut x = start;
    while seen.insert(x) {
        acc = acc.intersection(x);
        x = step(x);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlReport {
    pub mt: bool,
    pub tp: bool,
    pub cf: bool,
    /// `□X ≤ □□X` for every `X`.
    pub transitive: bool,
    /// `⋂ₙ ◇ⁿ1`
    pub diamond_orbit: Element,
}

impl GlReport {
    pub fn holds(&self) -> bool {
        self.mt && self.tp && self.cf && self.transitive && self.diamond_orbit.is_empty()
    }
}

pub fn check_gl_algebra(alg: &ModalAlgebra, m: &Modality) -> GlReport {
    let has = alg.has_modality(m);
    GlReport {
        mt: alg.check_mt(m),
        tp: alg.check_tp(m),
        cf: alg.check_cf(m),
        transitive: has
            && alg
                .elements()
                .all(|x| alg.box_of(m, x).is_subset(alg.box_of(m, alg.box_of(m, x)))),
        diamond_orbit: if has {
            orbit_meet(alg.top(), |x| alg.diamond(m, x))
        } else {
            alg.top()
        },
    }
}

/// Whether `Alg(frame)` is normal, transitive and has `⋂ₙ◇ⁿC = ∅` for `m`.
pub fn check_gl_frame(frame: &NeighborhoodFrame, m: &Modality) -> bool {
    check_gl_algebra(&complex_algebra(frame), m).holds()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CklReport {
    pub e_normal: bool,
    pub c_normal: bool,
    /// First `x` with `Cx ≠ ⋂ₙ Eⁿx`, if any.
    pub orbit_failure: Option<Element>,
}

impl CklReport {
    pub fn holds(&self) -> bool {
        self.e_normal && self.c_normal && self.orbit_failure.is_none()
    }
}

fn orbit_law_failure(alg: &ModalAlgebra, e: &Modality, c: &Modality) -> Option<Element> {
    alg.elements()
        .find(|&x| alg.box_of(c, x) != orbit_meet(x, |y| alg.box_of(e, y)))
}

/// MT, TP and CF for both modalities and `Cx = ⋂_{n≥0} Eⁿx` for every `x`.
pub fn check_ckl_algebra(alg: &ModalAlgebra, e: &Modality, c: &Modality) -> CklReport {
    let both = alg.has_modality(e) && alg.has_modality(c);
    CklReport {
        e_normal: alg.is_normal(e),
        c_normal: alg.is_normal(c),
        orbit_failure: if both {
            orbit_law_failure(alg, e, c)
        } else {
            Some(alg.top())
        },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CklKripkeReport {
    pub kripke: bool,
    /// `Cp ⊃ Eⁿp` validity for `n = 0..=max_n`.
    pub axioms: Vec<bool>,
    /// `C(p⊃Ep) ⊃ (p⊃Cp)`
    pub mhformula: bool,
    /// `CX = ⋂ₙ EⁿX` on `Alg(Z)`.
    pub orbit_law: bool,
    /// `Z ⊨ Cp ⊃ ECp`
    pub c_implies_ec: bool,
}

impl CklKripkeReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.axioms.iter().all(|&b| b) && self.mhformula
    }

    pub fn conclusions_hold(&self) -> bool {
        self.orbit_law && self.c_implies_ec
    }
}

/// `Cp ⊃ Eⁿp`
pub fn ck_axiom(e: &Modality, c: &Modality, n: usize) -> Formula {
    let p = Formula::prop("p");
    Formula::implies(Formula::boxed(c.clone(), p.clone()), Formula::box_iter(e.clone(), n, p))
}

/// `C(p ⊃ Ep) ⊃ (p ⊃ Cp)`
pub fn mhformula(e: &Modality, c: &Modality) -> Formula {
    let p = Formula::prop("p");
    Formula::implies(
        Formula::boxed(c.clone(), Formula::implies(p.clone(), Formula::boxed(e.clone(), p.clone()))),
        Formula::implies(p.clone(), Formula::boxed(c.clone(), p)),
    )
}

/// `Cp ⊃ ECp`
pub fn c_implies_ec(e: &Modality, c: &Modality) -> Formula {
    let p = Formula::prop("p");
    Formula::implies(
        Formula::boxed(c.clone(), p.clone()),
        Formula::boxed(e.clone(), Formula::boxed(c.clone(), p)),
    )
}

/// Checks the axiom surrogates for the common-knowledge logic on a
/// bi-modal frame, then the two consequences they should force.
///
/// All formulas involved are propositional, so a domain of one element
/// is enough.
pub fn check_ckl_kripke_consequences(
    frame: &NeighborhoodFrame,
    e: &Modality,
    c: &Modality,
    max_n: usize,
) -> Result<CklKripkeReport, ValidityError> {
    let bounds = Bounds::with_domain(1);
    let valid = |f: &Formula| frame_validates(frame, f, &bounds).map(|v| v.is_valid());
    let axioms = (0..=max_n)
        .map(|n| valid(&ck_axiom(e, c, n)))
        .collect::<Result<Vec<_>, _>>()?;
    let alg = complex_algebra(frame);
    Ok(CklKripkeReport {
        kripke: frame.check_kripke(e) && frame.check_kripke(c),
        axioms,
        mhformula: valid(&mhformula(e, c))?,
        orbit_law: alg.has_modality(e) && alg.has_modality(c) && orbit_law_failure(&alg, e, c).is_none(),
        c_implies_ec: valid(&c_implies_ec(e, c))?,
    })
}
