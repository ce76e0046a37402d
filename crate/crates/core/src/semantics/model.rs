use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{complex_algebra, ModalAlgebra};
use crate::bits::{Element, Subset, WorldSet};
use crate::frames::NeighborhoodFrame;
use crate::syntax::{Formula, Modality};

/// Variable assignment into a finite domain `0..d`.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("predicate `{0}` is not interpreted")]
    MissingPredicate(String),
    #[error("predicate `{pred}` is interpreted with arity {expected} but used with {found} arguments")]
    Arity { pred: String, expected: usize, found: usize },
    #[error("variable `{0}` is not assigned")]
    Unassigned(String),
    #[error("variable `{var}` is assigned {value}, outside a domain of size {domain}")]
    OutOfDomain { var: String, value: usize, domain: usize },
    #[error("modality `{0}` is not part of the structure")]
    UnknownModality(Modality),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain must be nonempty")]
    EmptyDomain,
    #[error("predicate `{pred}` needs {expected} entries for arity {arity}, found {found}")]
    TableSize { pred: String, arity: usize, expected: usize, found: usize },
    #[error("predicate `{0}` maps a tuple outside the carrier")]
    OutOfCarrier(String),
    #[error("algebra is not the complex algebra of the given frame")]
    NotComplexAlgebra,
    #[error("tuple {tuple:?} for `{pred}` has an element outside a domain of size {domain}")]
    BadTuple { pred: String, tuple: Vec<usize>, domain: usize },
}

/// Number of `arity`-tuples over a domain of size `domain`, saturating.
pub fn tuple_count(domain: usize, arity: usize) -> usize {
    domain.saturating_pow(arity as u32)
}

/// Lexicographic index of a tuple, first coordinate most significant.
pub fn tuple_index(domain: usize, tuple: &[usize]) -> usize {
    tuple.iter().fold(0, |acc, &d| acc * domain + d)
}

pub fn tuple_at(domain: usize, arity: usize, mut index: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = index % domain;
        index /= domain;
    }
    out
}

/// One predicate's interpretation, stored tuple-major.
///
/// `values[t]` is the carrier element assigned to the `t`-th tuple. In a
/// neighborhood model that is the set of worlds where the tuple satisfies
/// the predicate, so both model kinds share this table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredTable {
    pub arity: usize,
    pub values: Vec<Subset>,
}

impl PredTable {
    pub fn empty(domain: usize, arity: usize) -> Self {
        PredTable {
            arity,
            values: vec![Subset::EMPTY; tuple_count(domain, arity)],
        }
    }

    pub fn value(&self, domain: usize, tuple: &[usize]) -> Subset {
        self.values[tuple_index(domain, tuple)]
    }
}

fn validate_tables(domain: usize, carrier: Subset, interp: &BTreeMap<String, PredTable>) -> Result<(), ModelError> {
    if domain == 0 {
        return Err(ModelError::EmptyDomain);
    }
    for (p, t) in interp {
        let expected = tuple_count(domain, t.arity);
        if t.values.len() != expected {
            return Err(ModelError::TableSize {
                pred: p.clone(),
                arity: t.arity,
                expected,
                found: t.values.len(),
            });
        }
        if t.values.iter().any(|v| !v.is_subset(carrier)) {
            return Err(ModelError::OutOfCarrier(p.clone()));
        }
    }
    Ok(())
}

/// Arity and the `(world, tuple)` pairs where a predicate holds.
pub type Facts = (usize, Vec<(usize, Vec<usize>)>);

/// `⟨C, N, D, I⟩`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodModel {
    frame: NeighborhoodFrame,
    domain: usize,
    pub(crate) interp: BTreeMap<String, PredTable>,
}

impl NeighborhoodModel {
    pub fn new(frame: NeighborhoodFrame, domain: usize, interp: BTreeMap<String, PredTable>) -> Result<Self, ModelError> {
        validate_tables(domain, frame.universe(), &interp)?;
        Ok(NeighborhoodModel { frame, domain, interp })
    }

    /// Builds the tables from `(world, tuple)` facts.
    pub fn from_facts(
        frame: NeighborhoodFrame,
        domain: usize,
        facts: &BTreeMap<String, Facts>,
    ) -> Result<Self, ModelError> {
        if domain == 0 {
            return Err(ModelError::EmptyDomain);
        }
        let mut interp = BTreeMap::new();
        for (p, (arity, rows)) in facts {
            let mut t = PredTable::empty(domain, *arity);
            for (world, tuple) in rows {
                if tuple.len() != *arity || tuple.iter().any(|&d| d >= domain) {
                    return Err(ModelError::BadTuple {
                        pred: p.clone(),
                        tuple: tuple.clone(),
                        domain,
                    });
                }
                if *world >= frame.worlds() {
                    return Err(ModelError::OutOfCarrier(p.clone()));
                }
                let i = tuple_index(domain, tuple);
                t.values[i] = t.values[i].with(*world);
            }
            interp.insert(p.clone(), t);
        }
        Self::new(frame, domain, interp)
    }

    pub fn frame(&self) -> &NeighborhoodFrame {
        &self.frame
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn interpretation(&self) -> &BTreeMap<String, PredTable> {
        &self.interp
    }

    /// `(d₁,…,dₙ) ∈ Pᴵ(c)`
    pub fn holds(&self, pred: &str, world: usize, tuple: &[usize]) -> bool {
        self.interp
            .get(pred)
            .is_some_and(|t| t.value(self.domain, tuple).contains(world))
    }
}

/// `⟨A, D, J⟩`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicModel {
    algebra: ModalAlgebra,
    domain: usize,
    pub(crate) interp: BTreeMap<String, PredTable>,
}

impl AlgebraicModel {
    pub fn new(algebra: ModalAlgebra, domain: usize, interp: BTreeMap<String, PredTable>) -> Result<Self, ModelError> {
        validate_tables(domain, algebra.top(), &interp)?;
        Ok(AlgebraicModel { algebra, domain, interp })
    }

    pub fn algebra(&self) -> &ModalAlgebra {
        &self.algebra
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn interpretation(&self) -> &BTreeMap<String, PredTable> {
        &self.interp
    }

    /// `Pᴶ(d₁,…,dₙ)`
    pub fn value(&self, pred: &str, tuple: &[usize]) -> Option<Element> {
        self.interp.get(pred).map(|t| t.value(self.domain, tuple))
    }
}

/// Translates over `Alg(Z)` with `c ∈ Pᴶ(d⃗) ⇔ d⃗ ∈ Pᴵ(c)`.
pub fn model_to_algebraic(m: &NeighborhoodModel) -> AlgebraicModel {
    AlgebraicModel {
        algebra: complex_algebra(&m.frame),
        domain: m.domain,
        interp: m.interp.clone(),
    }
}

/// Inverse of [`model_to_algebraic`]; `frame` must be the frame whose
/// complex algebra carries `a`.
pub fn algebraic_to_model(a: &AlgebraicModel, frame: &NeighborhoodFrame) -> Result<NeighborhoodModel, ModelError> {
    if complex_algebra(frame) != a.algebra {
        return Err(ModelError::NotComplexAlgebra);
    }
    Ok(NeighborhoodModel {
        frame: frame.clone(),
        domain: a.domain,
        interp: a.interp.clone(),
    })
}

/// What the evaluator needs from either model kind.
pub(crate) trait Structure {
    fn top(&self) -> Subset;
    fn domain(&self) -> usize;
    fn table(&self, pred: &str) -> Option<&PredTable>;
    fn modal(&self, m: &Modality, x: Subset) -> Option<Subset>;
}

impl Structure for NeighborhoodModel {
    fn top(&self) -> Subset {
        self.frame.universe()
    }
    fn domain(&self) -> usize {
        self.domain
    }
    fn table(&self, pred: &str) -> Option<&PredTable> {
        self.interp.get(pred)
    }
    fn modal(&self, m: &Modality, x: Subset) -> Option<Subset> {
        self.frame.box_set(m, x)
    }
}

impl Structure for AlgebraicModel {
    fn top(&self) -> Subset {
        self.algebra.top()
    }
    fn domain(&self) -> usize {
        self.domain
    }
    fn table(&self, pred: &str) -> Option<&PredTable> {
        self.interp.get(pred)
    }
    fn modal(&self, m: &Modality, x: Subset) -> Option<Subset> {
        self.algebra.table(m).map(|t| t[x.index()])
    }
}

pub(crate) fn eval<S: Structure>(s: &S, a: &mut Assignment, f: &Formula) -> Result<Subset, EvalError> {
    Ok(match f {
        Formula::Top => s.top(),
        Formula::Bottom => Subset::EMPTY,
        Formula::Atom { pred, args } => {
            let t = s.table(pred).ok_or_else(|| EvalError::MissingPredicate(pred.clone()))?;
            if t.arity != args.len() {
                return Err(EvalError::Arity {
                    pred: pred.clone(),
                    expected: t.arity,
                    found: args.len(),
                });
            }
            let d = s.domain();
            let mut index = 0;
            for x in args {
                let v = *a.get(x).ok_or_else(|| EvalError::Unassigned(x.clone()))?;
                if v >= d {
                    return Err(EvalError::OutOfDomain {
                        var: x.clone(),
                        value: v,
                        domain: d,
                    });
                }
                index = index * d + v;
            }
            t.values[index]
        }
        Formula::And(l, r) => eval(s, a, l)?.intersection(eval(s, a, r)?),
        Formula::Not(g) => s.top().difference(eval(s, a, g)?),
        Formula::Box(m, g) => {
            let x = eval(s, a, g)?;
            s.modal(m, x).ok_or_else(|| EvalError::UnknownModality(m.clone()))?
        }
        Formula::Forall(x, g) => {
            let saved = a.get(x).copied();
            let mut acc = s.top();
            for d in 0..s.domain() {
                a.insert(x.clone(), d);
                let v = eval(s, a, g);
                match v {
                    Ok(v) => acc = acc.intersection(v),
                    Err(e) => {
                        restore(a, x, saved);
                        return Err(e);
                    }
                }
            }
            restore(a, x, saved);
            acc
        }
    })
}

fn restore(a: &mut Assignment, x: &str, saved: Option<usize>) {
    match saved {
        Some(v) => a.insert(x.to_string(), v),
        None => a.remove(x),
    };
}

/// `v_{I,A}(φ)`
pub fn eval_neighborhood(model: &NeighborhoodModel, assignment: &Assignment, f: &Formula) -> Result<WorldSet, EvalError> {
    eval(model, &mut assignment.clone(), f)
}

/// `u_{J,A}(φ)`
pub fn eval_algebraic(model: &AlgebraicModel, assignment: &Assignment, f: &Formula) -> Result<Element, EvalError> {
    eval(model, &mut assignment.clone(), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use std::collections::BTreeSet;

    fn empty_model(frame: NeighborhoodFrame) -> NeighborhoodModel {
        NeighborhoodModel::new(frame, 1, BTreeMap::new()).unwrap()
    }

    #[test]
    fn box_top() {
        let f = parse("[] T").unwrap();
        let none = empty_model(NeighborhoodFrame::mono(1, vec![BTreeSet::new()]).unwrap());
        assert_eq!(eval_neighborhood(&none, &Assignment::new(), &f).unwrap(), Subset::EMPTY);
        let some = empty_model(NeighborhoodFrame::mono(1, vec![BTreeSet::from([Subset(1)])]).unwrap());
        assert_eq!(eval_neighborhood(&some, &Assignment::new(), &f).unwrap(), Subset(1));
    }

    #[test]
    fn quantifiers_over_two_elements() {
        let frame = NeighborhoodFrame::mono(2, vec![BTreeSet::new(), BTreeSet::new()]).unwrap();
        let facts = BTreeMap::from([("P".to_string(), (1, vec![(0, vec![0])]))]);
        let m = NeighborhoodModel::from_facts(frame, 2, &facts).unwrap();
        let a = Assignment::new();
        assert_eq!(eval_neighborhood(&m, &a, &parse("forall x. P(x)").unwrap()).unwrap(), Subset::EMPTY);
        assert_eq!(eval_neighborhood(&m, &a, &parse("exists x. P(x)").unwrap()).unwrap(), Subset(1));
    }

    #[test]
    fn algebraic_constants_and_identity_box() {
        let alg = ModalAlgebra::from_fn(2, &[Modality::default_box()], |_, x| x).unwrap();
        let interp = BTreeMap::from([("p".to_string(), PredTable { arity: 0, values: vec![Subset(1)] })]);
        let m = AlgebraicModel::new(alg, 1, interp).unwrap();
        let a = Assignment::new();
        assert_eq!(eval_algebraic(&m, &a, &Formula::Top).unwrap(), Subset(3));
        assert_eq!(eval_algebraic(&m, &a, &Formula::Bottom).unwrap(), Subset::EMPTY);
        assert_eq!(eval_algebraic(&m, &a, &parse("[] p").unwrap()).unwrap(), Subset(1));
    }

    #[test]
    fn translation_round_trip() {
        let frame = NeighborhoodFrame::mono(2, vec![BTreeSet::from([Subset(2)]), BTreeSet::new()]).unwrap();
        let facts = BTreeMap::from([("R".to_string(), (2, vec![(0, vec![0, 1]), (1, vec![1, 1])]))]);
        let m = NeighborhoodModel::from_facts(frame.clone(), 2, &facts).unwrap();
        let a = model_to_algebraic(&m);
        assert_eq!(a.value("R", &[0, 1]), Some(Subset(1)));
        assert_eq!(algebraic_to_model(&a, &frame).unwrap(), m);
        let other = NeighborhoodFrame::mono(2, vec![BTreeSet::new(), BTreeSet::new()]).unwrap();
        assert_eq!(algebraic_to_model(&a, &other), Err(ModelError::NotComplexAlgebra));
    }

    #[test]
    fn empty_interpretation_is_zero() {
        let frame = NeighborhoodFrame::mono(2, vec![BTreeSet::new(), BTreeSet::new()]).unwrap();
        let facts = BTreeMap::from([("P".to_string(), (1, vec![]))]);
        let m = NeighborhoodModel::from_facts(frame, 2, &facts).unwrap();
        let a = model_to_algebraic(&m);
        assert!((0..2).all(|d| a.value("P", &[d]) == Some(Subset::EMPTY)));
    }

    #[test]
    fn evaluation_errors() {
        let m = empty_model(NeighborhoodFrame::mono(1, vec![BTreeSet::new()]).unwrap());
        let a = Assignment::new();
        assert_eq!(
            eval_neighborhood(&m, &a, &parse("p").unwrap()),
            Err(EvalError::MissingPredicate("p".into()))
        );
        assert_eq!(
            eval_neighborhood(&m, &a, &parse("[E] T").unwrap()),
            Err(EvalError::UnknownModality(Modality::new("E")))
        );
    }

    #[test]
    fn tuple_indexing() {
        for i in 0..27 {
            assert_eq!(tuple_index(3, &tuple_at(3, 3, i)), i);
        }
        assert_eq!(tuple_at(2, 2, 2), vec![1, 0]);
        assert_eq!(tuple_index(5, &[]), 0);
    }
}
