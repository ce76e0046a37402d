use thiserror::Error;

use crate::syntax::{apply_substitution, Formula, Modality, Replacement, SubstArityError, SubstitutionMap};

/// Schematic letter standing for `γ` in the common-knowledge ω-rule.
pub const GAMMA: &str = "gamma";
/// Schematic letter standing for `φ` in the common-knowledge ω-rule.
pub const PHI: &str = "phi";

fn p() -> Formula {
    Formula::prop("p")
}

fn q() -> Formula {
    Formula::prop("q")
}

/// Shape of an axiom schema.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaKind {
    /// A template over schematic predicate letters; instances arise by
    /// uniform substitution.
    Template(Formula),
    /// `C p ⊃ Eⁿp`, one template per `n`.
    CkIterate { e: Modality, c: Modality },
    /// Substitution instances of propositional tautologies.
    Tautology,
    /// `∀xφ ⊃ [y/x]φ` with `y` free for `x` in `φ`.
    QuantifierInstance,
    /// `∀x(φ ⊃ ψ) ⊃ (φ ⊃ ∀xψ)` with `x` not free in `φ`.
    QuantifierDistribution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomSchema {
    pub id: String,
    pub kind: SchemaKind,
}

impl AxiomSchema {
    pub fn is_indexed(&self) -> bool {
        matches!(self.kind, SchemaKind::CkIterate { .. })
    }
}

/// The two ω-rule families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OmegaShape {
    /// `p ⊃ ◇ⁿ⊤ (n∈ω) / p ⊃ ⊥`
    Gl { m: Modality },
    /// `γ ⊃ □₁(φ₁ ⊃ … □ₖ(φₖ ⊃ Eⁿφ)…) (n∈ω) / γ ⊃ □₁(φ₁ ⊃ … □ₖ(φₖ ⊃ Cφ)…)`,
    /// with prefixes of length at most `max_prefix` when set.
    Ck {
        e: Modality,
        c: Modality,
        max_prefix: Option<usize>,
    },
}

/// An ω-rule together with the axiom family `α ⊃ βₙ` it is paired with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaRuleDescriptor {
    pub id: String,
    pub shape: OmegaShape,
    /// Schema id of the paired axioms; `None` when they are tautologies.
    pub paired_axiom: Option<String>,
}

/// Schematic letter for the `i`-th prefix antecedent, counting from 1.
pub fn prefix_letter(i: usize) -> String {
    format!("phi{i}")
}

impl OmegaRuleDescriptor {
    pub fn allows_prefix(&self, prefix: &[Modality]) -> bool {
        match &self.shape {
            OmegaShape::Gl { .. } => prefix.is_empty(),
            OmegaShape::Ck { e, c, max_prefix } => {
                !max_prefix.is_some_and(|k| prefix.len() > k) && prefix.iter().all(|m| m == e || m == c)
            }
        }
    }

    fn wrap(prefix: &[Modality], core: Formula) -> Formula {
        prefix
            .iter()
            .enumerate()
            .rev()
            .fold(core, |acc, (i, m)| {
                Formula::boxed(m.clone(), Formula::implies(Formula::prop(prefix_letter(i + 1)), acc))
            })
    }

    /// `n`-th premise template for the given prefix word.
    pub fn premise(&self, n: usize, prefix: &[Modality]) -> Formula {
        match &self.shape {
            OmegaShape::Gl { m } => Formula::implies(p(), Formula::diamond_iter(m.clone(), n, Formula::Top)),
            OmegaShape::Ck { e, .. } => Formula::implies(
                Formula::prop(GAMMA),
                Self::wrap(prefix, Formula::box_iter(e.clone(), n, Formula::prop(PHI))),
            ),
        }
    }

    pub fn conclusion(&self, prefix: &[Modality]) -> Formula {
        match &self.shape {
            OmegaShape::Gl { .. } => Formula::implies(p(), Formula::Bottom),
            OmegaShape::Ck { c, .. } => Formula::implies(
                Formula::prop(GAMMA),
                Self::wrap(prefix, Formula::boxed(c.clone(), Formula::prop(PHI))),
            ),
        }
    }
}

/// A Hilbert system: axiom schemata, the standard rules and ω-rules.
///
/// Modus ponens, uniform substitution and generalization are always
/// available; necessitation is available for each listed modality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofSystem {
    pub name: String,
    pub modalities: Vec<Modality>,
    pub schemas: Vec<AxiomSchema>,
    pub omega_rules: Vec<OmegaRuleDescriptor>,
}

fn schema(id: &str, kind: SchemaKind) -> AxiomSchema {
    AxiomSchema { id: id.to_string(), kind }
}

fn k_axiom(m: &Modality) -> Formula {
    Formula::implies(
        Formula::boxed(m.clone(), Formula::implies(p(), q())),
        Formula::implies(Formula::boxed(m.clone(), p()), Formula::boxed(m.clone(), q())),
    )
}

fn barcan(m: &Modality) -> Formula {
    let phi = || Formula::atom(PHI, &["x"]);
    Formula::implies(
        Formula::forall("x", Formula::boxed(m.clone(), phi())),
        Formula::boxed(m.clone(), Formula::forall("x", phi())),
    )
}

fn classical() -> Vec<AxiomSchema> {
    vec![
        schema("taut", SchemaKind::Tautology),
        schema("q-inst", SchemaKind::QuantifierInstance),
        schema("q-dist", SchemaKind::QuantifierDistribution),
    ]
}

impl ProofSystem {
    /// Predicate GL over the default modality.
    pub fn qgl() -> Self {
        let m = Modality::default_box();
        let mut schemas = classical();
        schemas.push(schema("K", SchemaKind::Template(k_axiom(&m))));
        schemas.push(schema(
            "4",
            SchemaKind::Template(Formula::implies(
                Formula::boxed(m.clone(), p()),
                Formula::box_iter(m.clone(), 2, p()),
            )),
        ));
        ProofSystem {
            name: "QGL".into(),
            modalities: vec![m.clone()],
            schemas,
            omega_rules: vec![OmegaRuleDescriptor {
                id: "gl-omega".into(),
                shape: OmegaShape::Gl { m },
                paired_axiom: None,
            }],
        }
    }

    /// Common-knowledge logic with the Barcan axioms and prefixed ω-rules.
    pub fn qckl() -> Self {
        Self::ckl("QCKL", true, None)
    }

    /// The weakened system: no Barcan axioms and only the unprefixed ω-rule.
    pub fn qckl_minus() -> Self {
        Self::ckl("QCKL-", false, Some(0))
    }

    fn ckl(name: &str, with_barcan: bool, max_prefix: Option<usize>) -> Self {
        let e = Modality::new("E");
        let c = Modality::new("C");
        let mut schemas = classical();
        schemas.push(schema("K-E", SchemaKind::Template(k_axiom(&e))));
        schemas.push(schema("K-C", SchemaKind::Template(k_axiom(&c))));
        schemas.push(schema(
            "CE",
            SchemaKind::CkIterate {
                e: e.clone(),
                c: c.clone(),
            },
        ));
        if with_barcan {
            schemas.push(schema("barcan-E", SchemaKind::Template(barcan(&e))));
            schemas.push(schema("barcan-C", SchemaKind::Template(barcan(&c))));
        }
        ProofSystem {
            name: name.into(),
            modalities: vec![e.clone(), c.clone()],
            schemas,
            omega_rules: vec![OmegaRuleDescriptor {
                id: "ckl-omega".into(),
                shape: OmegaShape::Ck { e, c, max_prefix },
                paired_axiom: Some("CE".into()),
            }],
        }
    }

    /// Looks up a built-in by name: `QGL`, `QCKL` or `QCKL-`, optionally
    /// prefixed with `PS_`, case-insensitive.
    pub fn by_name(name: &str) -> Option<Self> {
        let upper = name.trim().to_ascii_uppercase();
        let bare = upper.strip_prefix("PS_").unwrap_or(&upper);
        match bare {
            "QGL" => Some(Self::qgl()),
            "QCKL" => Some(Self::qckl()),
            "QCKL-" | "QCKL_MINUS" | "QCKL⁻" => Some(Self::qckl_minus()),
            _ => None,
        }
    }

    pub fn schema(&self, id: &str) -> Option<&AxiomSchema> {
        self.schemas.iter().find(|s| s.id == id)
    }

    pub fn omega_rule(&self, id: &str) -> Option<&OmegaRuleDescriptor> {
        self.omega_rules.iter().find(|r| r.id == id)
    }

    pub fn has_modality(&self, m: &Modality) -> bool {
        self.modalities.contains(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstantiateError {
    #[error("unknown axiom schema `{0}`")]
    UnknownSchema(String),
    #[error("schema `{0}` is an indexed family and needs an index")]
    MissingIndex(String),
    #[error("schema `{0}` takes no index")]
    UnexpectedIndex(String),
    #[error("schema `{0}` is checked by shape and has no template")]
    NoTemplate(String),
    #[error(transparent)]
    Subst(#[from] SubstArityError),
}

/// The template of a schema, before substitution.
pub fn schema_template(system: &ProofSystem, id: &str, index: Option<usize>) -> Result<Formula, InstantiateError> {
    let s = system
        .schema(id)
        .ok_or_else(|| InstantiateError::UnknownSchema(id.to_string()))?;
    match (&s.kind, index) {
        (SchemaKind::CkIterate { e, c }, Some(n)) => Ok(Formula::implies(
            Formula::boxed(c.clone(), p()),
            Formula::box_iter(e.clone(), n, p()),
        )),
        (SchemaKind::CkIterate { .. }, None) => Err(InstantiateError::MissingIndex(id.to_string())),
        (SchemaKind::Template(_), Some(_)) => Err(InstantiateError::UnexpectedIndex(id.to_string())),
        (SchemaKind::Template(t), None) => Ok(t.clone()),
        _ => Err(InstantiateError::NoTemplate(id.to_string())),
    }
}

/// The concrete axiom `s(template)`, with `index` selecting the member of
/// an indexed family.
pub fn instantiate_axiom(
    system: &ProofSystem,
    id: &str,
    subst: &SubstitutionMap,
    index: Option<usize>,
) -> Result<Formula, InstantiateError> {
    let t = schema_template(system, id, index)?;
    Ok(apply_substitution(subst, &t)?)
}

/// `{letter ↦ formula}` for 0-ary schematic letters.
pub fn letters<'a>(pairs: impl IntoIterator<Item = (&'a str, Formula)>) -> SubstitutionMap {
    pairs
        .into_iter()
        .fold(SubstitutionMap::new(), |s, (k, f)| s.with(k, Replacement::constant(f)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    #[test]
    fn ck_iterate_instance() {
        let sys = ProofSystem::qckl_minus();
        let s = letters([("p", Formula::atom("Q", &["x"]))]);
        let f = instantiate_axiom(&sys, "CE", &s, Some(2)).unwrap();
        assert_eq!(f, parse("[C] Q(x) -> [E][E] Q(x)").unwrap());
        assert_eq!(
            instantiate_axiom(&sys, "CE", &s, None),
            Err(InstantiateError::MissingIndex("CE".into()))
        );
    }

    #[test]
    fn four_and_k_instances() {
        let sys = ProofSystem::qgl();
        let id = letters([("p", p())]);
        assert_eq!(instantiate_axiom(&sys, "4", &id, None).unwrap(), parse("[] p -> [][] p").unwrap());
        let s = letters([("p", Formula::Top), ("q", Formula::Bottom)]);
        assert_eq!(
            instantiate_axiom(&sys, "K", &s, None).unwrap(),
            parse("[] (T -> F) -> ([] T -> [] F)").unwrap()
        );
        assert_eq!(
            instantiate_axiom(&sys, "K", &s, Some(1)),
            Err(InstantiateError::UnexpectedIndex("K".into()))
        );
        assert_eq!(
            instantiate_axiom(&sys, "nope", &s, None),
            Err(InstantiateError::UnknownSchema("nope".into()))
        );
        assert!(matches!(
            instantiate_axiom(&sys, "taut", &s, None),
            Err(InstantiateError::NoTemplate(_))
        ));
    }

    #[test]
    fn barcan_only_in_full_system() {
        assert!(ProofSystem::qckl().schema("barcan-E").is_some());
        assert!(ProofSystem::qckl_minus().schema("barcan-E").is_none());
        let s = SubstitutionMap::new().with(PHI, Replacement::new(&["x1"], parse("exists y. R(x1, y)").unwrap()));
        let f = instantiate_axiom(&ProofSystem::qckl(), "barcan-C", &s, None).unwrap();
        assert!(f.alpha_eq(&parse("(forall x. [C] exists y. R(x, y)) -> [C] forall x. exists y. R(x, y)").unwrap()));
    }

    #[test]
    fn omega_templates() {
        let gl = ProofSystem::qgl();
        let r = gl.omega_rule("gl-omega").unwrap();
        assert_eq!(r.premise(2, &[]), parse("p -> <><> T").unwrap());
        assert_eq!(r.conclusion(&[]), parse("p -> F").unwrap());

        let ck = ProofSystem::qckl();
        let r = ck.omega_rule("ckl-omega").unwrap();
        let prefix = [Modality::new("C"), Modality::new("E")];
        assert!(r.allows_prefix(&prefix));
        assert_eq!(
            r.premise(1, &prefix),
            parse("gamma -> [C] (phi1 -> [E] (phi2 -> [E] phi))").unwrap()
        );
        assert_eq!(r.conclusion(&[]), parse("gamma -> [C] phi").unwrap());
        let minus = ProofSystem::qckl_minus();
        assert!(!minus.omega_rule("ckl-omega").unwrap().allows_prefix(&prefix));
        assert!(!r.allows_prefix(&[Modality::default_box()]));
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(ProofSystem::by_name("ps_qckl-").unwrap().name, "QCKL-");
        assert_eq!(ProofSystem::by_name("QGL").unwrap().name, "QGL");
        assert!(ProofSystem::by_name("S5").is_none());
    }
}
