use crate::frames::NeighborhoodFrame;
use crate::semantics::{frame_validates, Bounds, ValidityError};
use crate::syntax::{Formula, Modality, SubstitutionMap};

use super::check::{Justification, PremiseGenerator, Proof};
use super::system::{letters, ProofSystem, GAMMA, PHI};

/// Name of the built-in premise generator behind [`generate_mhformula_proof`].
pub const MHFORMULA_GENERATOR: &str = "mhformula";

fn e() -> Modality {
    Modality::new("E")
}

fn c() -> Modality {
    Modality::new("C")
}

fn p() -> Formula {
    Formula::prop("p")
}

/// `p ⊃ Ep`
fn p_implies_ep() -> Formula {
    Formula::implies(p(), Formula::boxed(e(), p()))
}

/// `p ∧ C(p ⊃ Ep)`
pub fn mh_antecedent() -> Formula {
    Formula::and(p(), Formula::boxed(c(), p_implies_ep()))
}

fn taut() -> Justification {
    Justification::Axiom {
        schema: "taut".into(),
        subst: SubstitutionMap::new(),
        index: None,
    }
}

fn mp(major: usize, minor: usize) -> Justification {
    Justification::ModusPonens { major, minor }
}

fn imp(a: &Formula, b: &Formula) -> Formula {
    Formula::implies(a.clone(), b.clone())
}

fn e_iter(n: usize, f: Formula) -> Formula {
    Formula::box_iter(e(), n, f)
}

/// From `x ⊃ y` (step `i`) and `y ⊃ z` (step `j`) derives `x ⊃ z`.
fn syllogism(proof: &mut Proof, i: usize, j: usize) -> usize {
    let (x, y) = proof.steps[i].formula.as_implies().map(|(a, b)| (a.clone(), b.clone())).unwrap();
    let z = proof.steps[j].formula.as_implies().unwrap().1.clone();
    let t = proof.push(imp(&imp(&x, &y), &imp(&imp(&y, &z), &imp(&x, &z))), taut());
    let s = proof.push(imp(&imp(&y, &z), &imp(&x, &z)), mp(t, i));
    proof.push(imp(&x, &z), mp(s, j))
}

/// `K-E` instance `E(a ⊃ b) ⊃ (Ea ⊃ Eb)`.
fn k_e(proof: &mut Proof, a: &Formula, b: &Formula) -> usize {
    let f = imp(
        &Formula::boxed(e(), imp(a, b)),
        &imp(&Formula::boxed(e(), a.clone()), &Formula::boxed(e(), b.clone())),
    );
    proof.push(
        f,
        Justification::Axiom {
            schema: "K-E".into(),
            subst: letters([("p", a.clone()), ("q", b.clone())]),
            index: None,
        },
    )
}

/// Extends a step proving `Eᵏ(p⊃Ep) ⊃ (Eᵏp ⊃ Eᵏ⁺¹p)` to one proving the
/// same for `k + 1`.
fn lift_lemma(proof: &mut Proof, lemma: usize, k: usize) -> usize {
    let (x, y) = proof.steps[lemma]
        .formula
        .as_implies()
        .map(|(a, b)| (a.clone(), b.clone()))
        .unwrap();
    let nec = proof.push(
        Formula::boxed(e(), proof.steps[lemma].formula.clone()),
        Justification::Necessitation { from: lemma, modality: e() },
    );
    let k1 = k_e(proof, &x, &y);
    let outer = proof.push(
        imp(&Formula::boxed(e(), x.clone()), &Formula::boxed(e(), y.clone())),
        mp(k1, nec),
    );
    let k2 = k_e(proof, &e_iter(k, p()), &e_iter(k + 1, p()));
    syllogism(proof, outer, k2)
}

/// The derivation of `(p ∧ C(p⊃Ep)) ⊃ Eⁿp` in PS_QCKL⁻.
///
/// Base case is a tautology. Step `k → k+1` combines the induction
/// hypothesis, the axiom `C(p⊃Ep) ⊃ Eᵏ(p⊃Ep)` and the lemma
/// `Eᵏ(p⊃Ep) ⊃ (Eᵏp ⊃ Eᵏ⁺¹p)`, itself obtained from `K-E` and
/// necessitation by induction on `k`.
pub fn mhformula_premise_proof(n: usize) -> Proof {
    let a = mh_antecedent();
    let cq = Formula::boxed(c(), p_implies_ep());
    let mut proof = Proof::new();
    let mut ih = proof.push(imp(&a, &p()), taut());
    let mut lemma = None;
    for k in 0..n {
        let l = match lemma {
            None => proof.push(imp(&p_implies_ep(), &p_implies_ep()), taut()),
            Some(prev) => lift_lemma(&mut proof, prev, k - 1),
        };
        lemma = Some(l);
        let ek_q = e_iter(k, p_implies_ep());
        let ax = proof.push(
            imp(&cq, &ek_q),
            Justification::Axiom {
                schema: "CE".into(),
                subst: letters([("p", p_implies_ep())]),
                index: Some(k),
            },
        );
        let goal = imp(&a, &e_iter(k + 1, p()));
        let lemma_f = proof.steps[l].formula.clone();
        let t = proof.push(
            imp(
                &imp(&a, &e_iter(k, p())),
                &imp(&imp(&cq, &ek_q), &imp(&lemma_f, &goal)),
            ),
            taut(),
        );
        let s1 = proof.push(imp(&imp(&cq, &ek_q), &imp(&lemma_f, &goal)), mp(t, ih));
        let s2 = proof.push(imp(&lemma_f, &goal), mp(s1, ax));
        ih = proof.push(goal, mp(s2, l));
    }
    proof
}

/// Sub-proof for premise `n` of a registered generator.
pub fn builtin_premise_proof(name: &str, n: usize) -> Option<Proof> {
    match name {
        MHFORMULA_GENERATOR => Some(mhformula_premise_proof(n)),
        _ => None,
    }
}

/// A PS_QCKL⁻ proof of `C(p⊃Ep) ⊃ (p⊃Cp)`.
///
/// The ω-rule yields `(p ∧ C(p⊃Ep)) ⊃ Cp`; the last two steps repackage
/// it by a tautology and modus ponens.
pub fn generate_mhformula_proof() -> Proof {
    let a = mh_antecedent();
    let cp = Formula::boxed(c(), p());
    let mh = imp(&Formula::boxed(c(), p_implies_ep()), &imp(&p(), &cp));
    let mut proof = Proof::new();
    let omega = proof.push(
        imp(&a, &cp),
        Justification::OmegaRule {
            rule: "ckl-omega".into(),
            generator: PremiseGenerator::Builtin(MHFORMULA_GENERATOR.into()),
            instantiation: letters([(GAMMA, a.clone()), (PHI, p())]),
            prefix: vec![],
        },
    );
    let t = proof.push(imp(&imp(&a, &cp), &mh), taut());
    proof.push(mh, mp(t, omega));
    proof
}

fn collect_formulas(proof: &Proof, bound: usize, out: &mut Vec<Formula>) {
    for step in &proof.steps {
        out.push(step.formula.clone());
        if let Justification::OmegaRule { generator, .. } = &step.justification {
            match generator {
                PremiseGenerator::Steps(_) => {}
                PremiseGenerator::SubProofs(ps) => {
                    for sub in ps.iter().take(bound + 1) {
                        collect_formulas(sub, bound, out);
                    }
                }
                PremiseGenerator::Builtin(name) => {
                    for n in 0..=bound {
                        if let Some(sub) = builtin_premise_proof(name, n) {
                            collect_formulas(&sub, bound, out);
                        }
                    }
                }
            }
        }
    }
}

/// Every formula occurring in the proof, including those of premise
/// sub-proofs for `n = 0..=bound`, deduplicated.
pub fn proof_formulas(proof: &Proof, bound: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    collect_formulas(proof, bound, &mut out);
    let mut seen = std::collections::BTreeSet::new();
    out.retain(|f| seen.insert(f.clone()));
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoundnessViolation {
    pub formula: Formula,
    pub frame: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SoundnessReport {
    pub formulas: usize,
    pub frames: usize,
    pub violations: Vec<SoundnessViolation>,
}

impl SoundnessReport {
    pub fn is_sound(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every formula of the proof, universally closed over free
/// individual variables, for bounded validity on each frame.
///
/// Schematic letters are ordinary predicate letters here, so validity
/// quantifies over all their interpretations.
pub fn soundness_spot_check(
    proof: &Proof,
    omega_bound: usize,
    frames: &[NeighborhoodFrame],
    bounds: &Bounds,
) -> Result<SoundnessReport, ValidityError> {
    let formulas = proof_formulas(proof, omega_bound);
    let mut report = SoundnessReport {
        formulas: formulas.len(),
        frames: frames.len(),
        violations: Vec::new(),
    };
    for f in &formulas {
        let closed = f.free_vars().into_iter().rev().fold(f.clone(), |g, v| Formula::forall(v, g));
        for (i, frame) in frames.iter().enumerate() {
            if !frame_validates(frame, &closed, bounds)?.is_valid() {
                report.violations.push(SoundnessViolation {
                    formula: f.clone(),
                    frame: i,
                });
            }
        }
    }
    Ok(report)
}

/// `C(p⊃Ep) ⊃ (p⊃Cp)` when the system has the common-knowledge ω-rule.
pub fn mhformula_target(system: &ProofSystem) -> Option<Formula> {
    system.omega_rule("ckl-omega")?;
    Some(crate::algebra::mhformula(&e(), &c()))
}
