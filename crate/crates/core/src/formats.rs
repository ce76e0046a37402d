//! JSON file formats for frames, relations, models, algebras and proofs,
//! plus the plain-text formula corpus.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, ModalAlgebra};
use crate::bits::Subset;
use crate::frames::{relation_to_frame, AccessibilityRelation, FrameError, NeighborhoodFrame, Relation};
use crate::proofs::{Justification, PremiseGenerator, Proof, Step};
use crate::semantics::{ModelError, NeighborhoodModel};
use crate::syntax::{parse, Formula, Modality, ParseError, Replacement, SubstitutionMap};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("formula `{text}`: {source}")]
    Formula {
        text: String,
        #[source]
        source: ParseError,
    },
    #[error("corpus line {line}: {source}")]
    Corpus {
        line: usize,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("{0}")]
    Invalid(String),
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    std::fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn formula(text: &str) -> Result<Formula, FormatError> {
    parse(text).map_err(|source| FormatError::Formula {
        text: text.to_string(),
        source,
    })
}

/// `{"worlds": n, "modalities": [...], "neighborhoods": {m: [[set, ...], ...]}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameDoc {
    pub worlds: usize,
    #[serde(default)]
    pub modalities: Vec<String>,
    pub neighborhoods: BTreeMap<String, Vec<Vec<Vec<usize>>>>,
}

/// `{"worlds": n, "edges": {m: [[a, b], ...]}}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub worlds: usize,
    pub edges: BTreeMap<String, Vec<[usize; 2]>>,
}

fn set_of(worlds: &[usize], n: usize) -> Result<Subset, FormatError> {
    match worlds.iter().find(|&&w| w >= n) {
        Some(&world) => Err(FrameError::WorldOutOfRange { world, worlds: n }.into()),
        None => Ok(Subset::from_indices(worlds.iter().copied())),
    }
}

impl FrameDoc {
    pub fn to_frame(&self) -> Result<NeighborhoodFrame, FormatError> {
        if let Some(m) = self.modalities.iter().find(|m| !self.neighborhoods.contains_key(*m)) {
            return Err(FormatError::Invalid(format!("modality `{m}` has no neighborhoods")));
        }
        let mut systems = BTreeMap::new();
        for (m, per_world) in &self.neighborhoods {
            let mut lists = Vec::with_capacity(per_world.len());
            for sets in per_world {
                lists.push(sets.iter().map(|s| set_of(s, self.worlds)).collect::<Result<_, _>>()?);
            }
            systems.insert(Modality::new(m.as_str()), lists);
        }
        Ok(NeighborhoodFrame::new(self.worlds, systems)?)
    }

    pub fn from_frame(frame: &NeighborhoodFrame) -> Self {
        let neighborhoods: BTreeMap<String, Vec<Vec<Vec<usize>>>> = frame
            .systems()
            .iter()
            .map(|(m, per_world)| {
                let lists = per_world
                    .iter()
                    .map(|sets| sets.iter().map(|s| s.iter().collect()).collect())
                    .collect();
                (m.name().to_string(), lists)
            })
            .collect();
        FrameDoc {
            worlds: frame.worlds(),
            modalities: neighborhoods.keys().cloned().collect(),
            neighborhoods,
        }
    }
}

impl RelationDoc {
    pub fn to_relation(&self) -> Result<AccessibilityRelation, FormatError> {
        let mut map = BTreeMap::new();
        for (m, edges) in &self.edges {
            let pairs: Vec<(usize, usize)> = edges.iter().map(|e| (e[0], e[1])).collect();
            map.insert(Modality::new(m.as_str()), Relation::from_edges(self.worlds, pairs)?);
        }
        Ok(AccessibilityRelation::new(self.worlds, map)?)
    }

    pub fn from_relation(rel: &AccessibilityRelation) -> Self {
        RelationDoc {
            worlds: rel.worlds(),
            edges: rel
                .relations()
                .iter()
                .map(|(m, r)| (m.name().to_string(), r.edges().map(|(a, b)| [a, b]).collect()))
                .collect(),
        }
    }
}

/// Reads either frame format; relations become their Kripke frames.
pub fn parse_frame(text: &str) -> Result<NeighborhoodFrame, FormatError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("edges").is_some() {
        let doc: RelationDoc = serde_json::from_value(value)?;
        Ok(relation_to_frame(&doc.to_relation()?))
    } else {
        let doc: FrameDoc = serde_json::from_value(value)?;
        doc.to_frame()
    }
}

pub fn frame_to_json(frame: &NeighborhoodFrame) -> String {
    serde_json::to_string_pretty(&FrameDoc::from_frame(frame)).expect("frame documents serialize")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateDoc {
    pub arity: usize,
    /// `[world, [d1, ..., dn]]` for each world and tuple where the atom holds.
    #[serde(default)]
    pub true_at: Vec<(usize, Vec<usize>)>,
}

/// A frame document (either format) extended with a domain and an
/// interpretation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDoc {
    #[serde(flatten)]
    pub frame: serde_json::Value,
    pub domain: usize,
    #[serde(default)]
    pub interpretation: BTreeMap<String, PredicateDoc>,
}

pub fn parse_model(text: &str) -> Result<NeighborhoodModel, FormatError> {
    let doc: ModelDoc = serde_json::from_str(text)?;
    let frame = parse_frame(&doc.frame.to_string())?;
    let facts = doc
        .interpretation
        .into_iter()
        .map(|(p, d)| (p, (d.arity, d.true_at)))
        .collect();
    Ok(NeighborhoodModel::from_facts(frame, doc.domain, &facts)?)
}

pub fn model_to_json(model: &NeighborhoodModel) -> String {
    let d = model.domain();
    let interpretation = model
        .interpretation()
        .iter()
        .map(|(p, t)| {
            let true_at = t
                .values
                .iter()
                .enumerate()
                .flat_map(|(i, worlds)| {
                    let tuple = crate::semantics::tuple_at(d, t.arity, i);
                    worlds.iter().map(move |w| (w, tuple.clone()))
                })
                .collect::<Vec<_>>();
            let mut true_at = true_at;
            true_at.sort();
            (p.clone(), PredicateDoc { arity: t.arity, true_at })
        })
        .collect();
    let doc = ModelDoc {
        frame: serde_json::to_value(FrameDoc::from_frame(model.frame())).expect("frame documents serialize"),
        domain: d,
        interpretation,
    };
    serde_json::to_string_pretty(&doc).expect("model documents serialize")
}

/// `{"atoms": k, "modalities": [...], "box": {m: [t_0, ..., t_{2^k-1}]}}`,
/// element `i` being the subset of atoms with bit pattern `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub atoms: usize,
    #[serde(default)]
    pub modalities: Vec<String>,
    #[serde(rename = "box")]
    pub boxes: BTreeMap<String, Vec<u64>>,
}

impl AlgebraDoc {
    pub fn to_algebra(&self) -> Result<ModalAlgebra, FormatError> {
        if let Some(m) = self.modalities.iter().find(|m| !self.boxes.contains_key(*m)) {
            return Err(FormatError::Invalid(format!("modality `{m}` has no box table")));
        }
        let boxes = self
            .boxes
            .iter()
            .map(|(m, t)| (Modality::new(m.as_str()), t.iter().map(|&i| Subset(i)).collect()))
            .collect();
        Ok(ModalAlgebra::new(self.atoms, boxes)?)
    }

    pub fn from_algebra(alg: &ModalAlgebra) -> Self {
        let boxes: BTreeMap<String, Vec<u64>> = alg
            .tables()
            .iter()
            .map(|(m, t)| (m.name().to_string(), t.iter().map(|e| e.0).collect()))
            .collect();
        AlgebraDoc {
            atoms: alg.atoms(),
            modalities: boxes.keys().cloned().collect(),
            boxes,
        }
    }
}

pub fn parse_algebra(text: &str) -> Result<ModalAlgebra, FormatError> {
    serde_json::from_str::<AlgebraDoc>(text)?.to_algebra()
}

pub fn algebra_to_json(alg: &ModalAlgebra) -> String {
    serde_json::to_string(&AlgebraDoc::from_algebra(alg)).expect("algebra documents serialize")
}

/// One formula per line; blank lines and `#` comments are skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<Formula>, FormatError> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let line = line.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| parse(line).map_err(|source| FormatError::Corpus { line: i + 1, source }))
        })
        .collect()
}

/// A substitution entry: a formula for a propositional letter, or
/// `{"params": [...], "body": "..."}` for a predicate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReplacementDoc {
    Constant(String),
    Lambda { params: Vec<String>, body: String },
}

pub type SubstitutionDoc = BTreeMap<String, ReplacementDoc>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorDoc {
    Builtin { name: String },
    Steps { steps: Vec<usize> },
    /// Premise proofs inline, indexed by `n`.
    Proofs { proofs: Vec<ProofDoc> },
    /// Premise proof files indexed by `n`, relative to the citing file.
    Files { paths: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum JustificationDoc {
    Axiom {
        schema: String,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        subst: SubstitutionDoc,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        index: Option<usize>,
    },
    Mp {
        major: usize,
        minor: usize,
    },
    UniformSub {
        from: usize,
        subst: SubstitutionDoc,
    },
    Necessitation {
        from: usize,
        modality: String,
    },
    Generalization {
        from: usize,
        var: String,
    },
    Omega {
        id: String,
        generator: GeneratorDoc,
        #[serde(default)]
        instantiation: SubstitutionDoc,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        prefix: Vec<String>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub formula: String,
    pub justification: JustificationDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<String>,
    pub steps: Vec<StepDoc>,
}

fn subst_from_doc(doc: &SubstitutionDoc) -> Result<SubstitutionMap, FormatError> {
    let mut s = SubstitutionMap::new();
    for (pred, r) in doc {
        let rep = match r {
            ReplacementDoc::Constant(body) => Replacement::constant(formula(body)?),
            ReplacementDoc::Lambda { params, body } => Replacement {
                params: params.clone(),
                body: formula(body)?,
            },
        };
        s.insert(pred.clone(), rep);
    }
    Ok(s)
}

fn subst_to_doc(s: &SubstitutionMap) -> SubstitutionDoc {
    s.iter()
        .map(|(p, r)| {
            let doc = if r.params.is_empty() {
                ReplacementDoc::Constant(r.body.to_string())
            } else {
                ReplacementDoc::Lambda {
                    params: r.params.clone(),
                    body: r.body.to_string(),
                }
            };
            (p.clone(), doc)
        })
        .collect()
}

impl ProofDoc {
    /// Converts to a [`Proof`]; `base` resolves relative premise file paths.
    pub fn to_proof(&self, base: Option<&Path>) -> Result<Proof, FormatError> {
        let mut proof = Proof::new();
        for step in &self.steps {
            let justification = match &step.justification {
                JustificationDoc::Axiom { schema, subst, index } => Justification::Axiom {
                    schema: schema.clone(),
                    subst: subst_from_doc(subst)?,
                    index: *index,
                },
                JustificationDoc::Mp { major, minor } => Justification::ModusPonens {
                    major: *major,
                    minor: *minor,
                },
                JustificationDoc::UniformSub { from, subst } => Justification::UniformSub {
                    from: *from,
                    subst: subst_from_doc(subst)?,
                },
                JustificationDoc::Necessitation { from, modality } => Justification::Necessitation {
                    from: *from,
                    modality: Modality::new(modality.as_str()),
                },
                JustificationDoc::Generalization { from, var } => Justification::Generalization {
                    from: *from,
                    var: var.clone(),
                },
                JustificationDoc::Omega {
                    id,
                    generator,
                    instantiation,
                    prefix,
                } => Justification::OmegaRule {
                    rule: id.clone(),
                    generator: generator_from_doc(generator, base)?,
                    instantiation: subst_from_doc(instantiation)?,
                    prefix: prefix.iter().map(|m| Modality::new(m.as_str())).collect(),
                },
            };
            proof.steps.push(Step {
                formula: formula(&step.formula)?,
                justification,
            });
        }
        Ok(proof)
    }

    pub fn from_proof(proof: &Proof, system: Option<&str>) -> Self {
        let steps = proof
            .steps
            .iter()
            .map(|s| StepDoc {
                formula: s.formula.to_string(),
                justification: match &s.justification {
                    Justification::Axiom { schema, subst, index } => JustificationDoc::Axiom {
                        schema: schema.clone(),
                        subst: subst_to_doc(subst),
                        index: *index,
                    },
                    Justification::ModusPonens { major, minor } => JustificationDoc::Mp {
                        major: *major,
                        minor: *minor,
                    },
                    Justification::UniformSub { from, subst } => JustificationDoc::UniformSub {
                        from: *from,
                        subst: subst_to_doc(subst),
                    },
                    Justification::Necessitation { from, modality } => JustificationDoc::Necessitation {
                        from: *from,
                        modality: modality.name().to_string(),
                    },
                    Justification::Generalization { from, var } => JustificationDoc::Generalization {
                        from: *from,
                        var: var.clone(),
                    },
                    Justification::OmegaRule {
                        rule,
                        generator,
                        instantiation,
                        prefix,
                    } => JustificationDoc::Omega {
                        id: rule.clone(),
                        generator: match generator {
                            PremiseGenerator::Builtin(name) => GeneratorDoc::Builtin { name: name.clone() },
                            PremiseGenerator::Steps(steps) => GeneratorDoc::Steps { steps: steps.clone() },
                            PremiseGenerator::SubProofs(ps) => GeneratorDoc::Proofs {
                                proofs: ps.iter().map(|p| ProofDoc::from_proof(p, None)).collect(),
                            },
                        },
                        instantiation: subst_to_doc(instantiation),
                        prefix: prefix.iter().map(|m| m.name().to_string()).collect(),
                    },
                },
            })
            .collect();
        ProofDoc {
            system: system.map(str::to_string),
            steps,
        }
    }
}

fn generator_from_doc(doc: &GeneratorDoc, base: Option<&Path>) -> Result<PremiseGenerator, FormatError> {
    Ok(match doc {
        GeneratorDoc::Builtin { name } => PremiseGenerator::Builtin(name.clone()),
        GeneratorDoc::Steps { steps } => PremiseGenerator::Steps(steps.clone()),
        GeneratorDoc::Proofs { proofs } => {
            PremiseGenerator::SubProofs(proofs.iter().map(|p| p.to_proof(base)).collect::<Result<_, _>>()?)
        }
        GeneratorDoc::Files { paths } => {
            let mut proofs = Vec::with_capacity(paths.len());
            for p in paths {
                let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
                proofs.push(load_proof(&path)?.1);
            }
            PremiseGenerator::SubProofs(proofs)
        }
    })
}

/// Parses a proof document; returns the declared system name, if any.
pub fn parse_proof(text: &str, base: Option<&Path>) -> Result<(Option<String>, Proof), FormatError> {
    let doc: ProofDoc = serde_json::from_str(text)?;
    Ok((doc.system.clone(), doc.to_proof(base)?))
}

pub fn load_proof(path: &Path) -> Result<(Option<String>, Proof), FormatError> {
    parse_proof(&read_file(path)?, path.parent())
}

pub fn proof_to_json(proof: &Proof, system: Option<&str>) -> String {
    serde_json::to_string_pretty(&ProofDoc::from_proof(proof, system)).expect("proof documents serialize")
}
