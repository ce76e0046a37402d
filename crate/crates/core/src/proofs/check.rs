use std::fmt;

use thiserror::Error;

use crate::syntax::{apply_substitution, is_free_for, substitute_var, Formula, Modality, SubstitutionMap};

use super::generate::builtin_premise_proof;
use super::system::{instantiate_axiom, InstantiateError, ProofSystem, SchemaKind};
use super::taut::is_tautology;

/// Where the proofs of an ω-rule's premises come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PremiseGenerator {
    /// A registered recipe producing a sub-proof for every `n`.
    Builtin(String),
    /// `steps[n]` is an earlier step proving the `n`-th premise.
    Steps(Vec<usize>),
    /// `proofs[n]` proves the `n`-th premise.
    SubProofs(Vec<Proof>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    Axiom {
        schema: String,
        subst: SubstitutionMap,
        index: Option<usize>,
    },
    /// From `major = φ ⊃ ψ` and `minor = φ`.
    ModusPonens { major: usize, minor: usize },
    UniformSub { from: usize, subst: SubstitutionMap },
    Necessitation { from: usize, modality: Modality },
    Generalization { from: usize, var: String },
    OmegaRule {
        rule: String,
        generator: PremiseGenerator,
        instantiation: SubstitutionMap,
        prefix: Vec<Modality>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub formula: Formula,
    pub justification: Justification,
}

/// A list of steps, each citing only earlier steps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn new() -> Self {
        Proof::default()
    }

    /// Appends a step and returns its index.
    pub fn push(&mut self, formula: Formula, justification: Justification) -> usize {
        self.steps.push(Step { formula, justification });
        self.steps.len() - 1
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Whether any step, including those of nested sub-proofs, uses an ω-rule.
    pub fn uses_omega(&self) -> bool {
        self.steps
            .iter()
            .any(|s| matches!(s.justification, Justification::OmegaRule { .. }))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("step cites step {cited}, which is not earlier")]
    ForwardReference { cited: usize },
    #[error(transparent)]
    Schema(#[from] InstantiateError),
    #[error("formula is not the cited axiom instance")]
    AxiomMismatch,
    #[error("formula is not a propositional tautology")]
    NotTautology,
    #[error("skeleton too large for a truth table")]
    TautologyTooLarge,
    #[error("formula is not a quantifier instance axiom")]
    NotQuantifierInstance,
    #[error("formula is not a quantifier distribution axiom")]
    NotQuantifierDistribution,
    #[error("major premise is not an implication")]
    NotImplication,
    #[error("minor premise does not match the antecedent")]
    MinorMismatch,
    #[error("formula is not the consequent of the major premise")]
    ConsequentMismatch,
    #[error("substitution: {0}")]
    Substitution(String),
    #[error("formula does not match the substituted step")]
    SubstitutionMismatch,
    #[error("necessitation is not available for modality `{0}`")]
    NoNecessitation(Modality),
    #[error("formula is not the boxed step")]
    NecessitationMismatch,
    #[error("formula is not the generalized step")]
    GeneralizationMismatch,
    #[error("unknown omega rule `{0}`")]
    UnknownRule(String),
    #[error("prefix {0:?} is not allowed by the rule")]
    PrefixNotAllowed(Vec<Modality>),
    #[error("unknown premise generator `{0}`")]
    UnknownGenerator(String),
    #[error("no proof supplied for premise {0}")]
    PremiseMissing(usize),
    #[error("premise {0} proves the wrong formula")]
    PremiseMismatch(usize),
    #[error("sub-proof for premise {n} rejected at its step {step}: {reason}")]
    SubProof { n: usize, step: usize, reason: Box<RejectReason> },
    #[error("formula is not the rule's conclusion")]
    ConclusionMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckStatus {
    FullyChecked,
    /// Accepted with every ω-rule checked for premises `0..=N`.
    CheckedToBound(usize),
    Rejected { step: usize, reason: RejectReason },
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckStatus::FullyChecked => f.write_str("FullyChecked"),
            CheckStatus::CheckedToBound(n) => write!(f, "CheckedToBound({n})"),
            CheckStatus::Rejected { step, reason } => write!(f, "Rejected(step {step}: {reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepVerdict {
    Ok,
    /// An ω-rule step checked up to the bound.
    OkToBound(usize),
    Failed(RejectReason),
    /// After the first failure.
    Unchecked,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub status: CheckStatus,
    pub verdicts: Vec<StepVerdict>,
}

impl CheckReport {
    pub fn accepted(&self) -> bool {
        !matches!(self.status, CheckStatus::Rejected { .. })
    }
}

fn earlier(i: usize, cited: usize) -> Result<(), RejectReason> {
    if cited < i {
        Ok(())
    } else {
        Err(RejectReason::ForwardReference { cited })
    }
}

fn subst(s: &SubstitutionMap, f: &Formula) -> Result<Formula, RejectReason> {
    apply_substitution(s, f).map_err(|e| RejectReason::Substitution(e.to_string()))
}

fn is_quantifier_instance(f: &Formula) -> bool {
    let Some((Formula::Forall(x, body), rhs)) = f.as_implies() else {
        return false;
    };
    let mut candidates = rhs.all_vars();
    candidates.insert(x.clone());
    candidates
        .iter()
        .any(|y| is_free_for(body, x, y) && substitute_var(body, x, y) == *rhs)
}

fn is_quantifier_distribution(f: &Formula) -> bool {
    let Some((Formula::Forall(x, inner), rhs)) = f.as_implies() else {
        return false;
    };
    let (Some((phi, psi)), Some((phi2, Formula::Forall(y, psi2)))) = (inner.as_implies(), rhs.as_implies()) else {
        return false;
    };
    x == y && phi == phi2 && psi == psi2.as_ref() && !phi.free_vars().contains(x)
}

fn check_axiom(
    system: &ProofSystem,
    f: &Formula,
    schema: &str,
    s: &SubstitutionMap,
    index: Option<usize>,
) -> Result<(), RejectReason> {
    let kind = &system
        .schema(schema)
        .ok_or_else(|| InstantiateError::UnknownSchema(schema.to_string()))?
        .kind;
    match kind {
        SchemaKind::Tautology => match is_tautology(f) {
            Ok(true) => Ok(()),
            Ok(false) => Err(RejectReason::NotTautology),
            Err(_) => Err(RejectReason::TautologyTooLarge),
        },
        SchemaKind::QuantifierInstance if is_quantifier_instance(f) => Ok(()),
        SchemaKind::QuantifierInstance => Err(RejectReason::NotQuantifierInstance),
        SchemaKind::QuantifierDistribution if is_quantifier_distribution(f) => Ok(()),
        SchemaKind::QuantifierDistribution => Err(RejectReason::NotQuantifierDistribution),
        SchemaKind::Template(_) | SchemaKind::CkIterate { .. } => {
            let expected = instantiate_axiom(system, schema, s, index)?;
            if expected.alpha_eq(f) {
                Ok(())
            } else {
                Err(RejectReason::AxiomMismatch)
            }
        }
    }
}

struct Checker<'a> {
    system: &'a ProofSystem,
    bound: usize,
}

impl Checker<'_> {
    fn check_step(&self, proof: &Proof, i: usize) -> Result<StepVerdict, RejectReason> {
        let step = &proof.steps[i];
        let f = &step.formula;
        match &step.justification {
            Justification::Axiom { schema, subst, index } => {
                check_axiom(self.system, f, schema, subst, *index)?;
            }
            Justification::ModusPonens { major, minor } => {
                earlier(i, *major)?;
                earlier(i, *minor)?;
                let (ante, cons) = proof.steps[*major]
                    .formula
                    .as_implies()
                    .ok_or(RejectReason::NotImplication)?;
                if !ante.alpha_eq(&proof.steps[*minor].formula) {
                    return Err(RejectReason::MinorMismatch);
                }
                if !cons.alpha_eq(f) {
                    return Err(RejectReason::ConsequentMismatch);
                }
            }
            Justification::UniformSub { from, subst: s } => {
                earlier(i, *from)?;
                if !subst(s, &proof.steps[*from].formula)?.alpha_eq(f) {
                    return Err(RejectReason::SubstitutionMismatch);
                }
            }
            Justification::Necessitation { from, modality } => {
                earlier(i, *from)?;
                if !self.system.has_modality(modality) {
                    return Err(RejectReason::NoNecessitation(modality.clone()));
                }
                let expected = Formula::boxed(modality.clone(), proof.steps[*from].formula.clone());
                if !expected.alpha_eq(f) {
                    return Err(RejectReason::NecessitationMismatch);
                }
            }
            Justification::Generalization { from, var } => {
                earlier(i, *from)?;
                let expected = Formula::forall(var.clone(), proof.steps[*from].formula.clone());
                if !expected.alpha_eq(f) {
                    return Err(RejectReason::GeneralizationMismatch);
                }
            }
            Justification::OmegaRule {
                rule,
                generator,
                instantiation,
                prefix,
            } => {
                self.check_omega(proof, i, rule, generator, instantiation, prefix)?;
                return Ok(StepVerdict::OkToBound(self.bound));
            }
        }
        Ok(StepVerdict::Ok)
    }

    fn check_omega(
        &self,
        proof: &Proof,
        i: usize,
        rule: &str,
        generator: &PremiseGenerator,
        inst: &SubstitutionMap,
        prefix: &[Modality],
    ) -> Result<(), RejectReason> {
        let desc = self
            .system
            .omega_rule(rule)
            .ok_or_else(|| RejectReason::UnknownRule(rule.to_string()))?;
        if !desc.allows_prefix(prefix) {
            return Err(RejectReason::PrefixNotAllowed(prefix.to_vec()));
        }
        if !subst(inst, &desc.conclusion(prefix))?.alpha_eq(&proof.steps[i].formula) {
            return Err(RejectReason::ConclusionMismatch);
        }
        for n in 0..=self.bound {
            let target = subst(inst, &desc.premise(n, prefix))?;
            let proved = match generator {
                PremiseGenerator::Steps(idx) => {
                    let j = *idx.get(n).ok_or(RejectReason::PremiseMissing(n))?;
                    earlier(i, j)?;
                    proof.steps[j].formula.clone()
                }
                PremiseGenerator::SubProofs(ps) => {
                    let sub = ps.get(n).ok_or(RejectReason::PremiseMissing(n))?;
                    self.check_sub(sub, n)?
                }
                PremiseGenerator::Builtin(name) => {
                    let sub = builtin_premise_proof(name, n)
                        .ok_or_else(|| RejectReason::UnknownGenerator(name.clone()))?;
                    self.check_sub(&sub, n)?
                }
            };
            if !proved.alpha_eq(&target) {
                return Err(RejectReason::PremiseMismatch(n));
            }
        }
        Ok(())
    }

    fn check_sub(&self, sub: &Proof, n: usize) -> Result<Formula, RejectReason> {
        let report = self.run(sub);
        if let CheckStatus::Rejected { step, reason } = report.status {
            return Err(RejectReason::SubProof {
                n,
                step,
                reason: Box::new(reason),
            });
        }
        sub.conclusion().cloned().ok_or(RejectReason::PremiseMissing(n))
    }

    fn run(&self, proof: &Proof) -> CheckReport {
        let mut verdicts = Vec::with_capacity(proof.steps.len());
        let mut status = CheckStatus::FullyChecked;
        for i in 0..proof.steps.len() {
            match self.check_step(proof, i) {
                Ok(v) => {
                    if matches!(v, StepVerdict::OkToBound(_)) {
                        status = CheckStatus::CheckedToBound(self.bound);
                    }
                    verdicts.push(v);
                }
                Err(reason) => {
                    verdicts.push(StepVerdict::Failed(reason.clone()));
                    verdicts.resize(proof.steps.len(), StepVerdict::Unchecked);
                    return CheckReport {
                        status: CheckStatus::Rejected { step: i, reason },
                        verdicts,
                    };
                }
            }
        }
        CheckReport { status, verdicts }
    }
}

/// Checks every step; ω-rule steps are checked on premises `0..=omega_bound`.
///
/// Nested sub-proofs are checked with the same bound, and a sub-proof that
/// itself uses an ω-rule is only ever accepted to that bound.
pub fn check_proof(system: &ProofSystem, proof: &Proof, omega_bound: usize) -> CheckReport {
    Checker {
        system,
        bound: omega_bound,
    }
    .run(proof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofs::system::letters;
    use crate::syntax::parse;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn taut() -> Justification {
        Justification::Axiom {
            schema: "taut".into(),
            subst: SubstitutionMap::new(),
            index: None,
        }
    }

    #[test]
    fn tautology_then_generalization() {
        let mut p = Proof::new();
        p.push(f("p -> p"), taut());
        p.push(f("forall x. p -> p"), Justification::Generalization { from: 0, var: "x".into() });
        p.push(f("forall x. forall x. p -> p"), Justification::Generalization { from: 1, var: "x".into() });
        let r = check_proof(&ProofSystem::qgl(), &p, 8);
        assert_eq!(r.status, CheckStatus::FullyChecked);
        assert!(r.verdicts.iter().all(|v| *v == StepVerdict::Ok));
    }

    #[test]
    fn axiom_index_mismatch() {
        let mut p = Proof::new();
        p.push(
            f("[C] p -> [E][E] p"),
            Justification::Axiom {
                schema: "CE".into(),
                subst: letters([("p", Formula::prop("p"))]),
                index: Some(3),
            },
        );
        let r = check_proof(&ProofSystem::qckl_minus(), &p, 8);
        assert_eq!(
            r.status,
            CheckStatus::Rejected {
                step: 0,
                reason: RejectReason::AxiomMismatch
            }
        );
    }

    #[test]
    fn modus_ponens_and_necessitation() {
        let sys = ProofSystem::qgl();
        let mut p = Proof::new();
        p.push(f("q -> q"), taut());
        p.push(f("(q -> q) -> (r -> r)"), taut());
        p.push(f("r -> r"), Justification::ModusPonens { major: 1, minor: 0 });
        p.push(
            f("[] (r -> r)"),
            Justification::Necessitation {
                from: 2,
                modality: Modality::default_box(),
            },
        );
        assert_eq!(check_proof(&sys, &p, 1).status, CheckStatus::FullyChecked);

        let mut bad = p.clone();
        bad.steps[2].justification = Justification::ModusPonens { major: 3, minor: 0 };
        assert_eq!(
            check_proof(&sys, &bad, 1).status,
            CheckStatus::Rejected {
                step: 2,
                reason: RejectReason::ForwardReference { cited: 3 }
            }
        );
        let mut wrong_box = p;
        wrong_box.steps[3].justification = Justification::Necessitation {
            from: 2,
            modality: Modality::new("E"),
        };
        assert!(matches!(
            check_proof(&sys, &wrong_box, 1).status,
            CheckStatus::Rejected {
                reason: RejectReason::NoNecessitation(_),
                ..
            }
        ));
    }

    #[test]
    fn quantifier_axioms() {
        let sys = ProofSystem::qgl();
        let inst = |s: &str| Justification::Axiom {
            schema: s.into(),
            subst: SubstitutionMap::new(),
            index: None,
        };
        let mut p = Proof::new();
        p.push(f("(forall x. R(x, z)) -> R(y, z)"), inst("q-inst"));
        p.push(f("(forall x. q -> P(x)) -> (q -> forall x. P(x))"), inst("q-dist"));
        assert_eq!(check_proof(&sys, &p, 1).status, CheckStatus::FullyChecked);

        let mut capture = Proof::new();
        capture.push(f("(forall x. exists y. R(x, y)) -> exists y. R(y, y)"), inst("q-inst"));
        assert!(!check_proof(&sys, &capture, 1).accepted());
        let mut free = Proof::new();
        free.push(f("(forall x. P(x) -> P(x)) -> (P(x) -> forall x. P(x))"), inst("q-dist"));
        assert!(!check_proof(&sys, &free, 1).accepted());
    }

    #[test]
    fn uniform_substitution_step() {
        let sys = ProofSystem::qgl();
        let mut p = Proof::new();
        p.push(
            f("[] p -> [][] p"),
            Justification::Axiom {
                schema: "4".into(),
                subst: letters([("p", Formula::prop("p"))]),
                index: None,
            },
        );
        p.push(
            f("[] Q(x) -> [][] Q(x)"),
            Justification::UniformSub {
                from: 0,
                subst: letters([("p", Formula::atom("Q", &["x"]))]),
            },
        );
        assert_eq!(check_proof(&sys, &p, 1).status, CheckStatus::FullyChecked);
    }

    #[test]
    fn gl_omega_rule_with_explicit_steps() {
        // ⊥ ⊃ ◇ⁿ⊤ are tautologies, so ⊥ ⊃ ⊥ follows by the rule with p := ⊥.
        let sys = ProofSystem::qgl();
        let bound = 3;
        let mut p = Proof::new();
        for n in 0..=bound {
            p.push(
                Formula::implies(Formula::Bottom, Formula::diamond_iter(Modality::default_box(), n, Formula::Top)),
                taut(),
            );
        }
        let omega = |steps: Vec<usize>| Justification::OmegaRule {
            rule: "gl-omega".into(),
            generator: PremiseGenerator::Steps(steps),
            instantiation: letters([("p", Formula::Bottom)]),
            prefix: vec![],
        };
        p.push(f("F -> F"), omega((0..=bound).collect()));
        assert_eq!(check_proof(&sys, &p, bound).status, CheckStatus::CheckedToBound(bound));
        assert_eq!(check_proof(&sys, &p, 1).status, CheckStatus::CheckedToBound(1));
        assert_eq!(
            check_proof(&sys, &p, bound + 1).status,
            CheckStatus::Rejected {
                step: bound + 1,
                reason: RejectReason::PremiseMissing(bound + 1)
            }
        );
    }
}
