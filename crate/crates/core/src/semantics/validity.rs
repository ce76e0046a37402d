use std::collections::BTreeMap;

use thiserror::Error;

use crate::algebra::{complex_algebra, ModalAlgebra};
use crate::bits::Subset;
use crate::frames::NeighborhoodFrame;
use crate::syntax::Formula;

use super::model::{eval, tuple_count, AlgebraicModel, Assignment, EvalError, NeighborhoodModel, PredTable, Structure};

/// Default cap on (interpretation, assignment) evaluations per query.
pub const DEFAULT_BUDGET: u64 = 2_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum FreeVarPolicy {
    /// Non-closed formulas are an error.
    #[default]
    Reject,
    /// Free variables range over every assignment, as if universally bound.
    Universal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub max_domain: usize,
    pub budget: u64,
    pub free_vars: FreeVarPolicy,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_domain: 2,
            budget: DEFAULT_BUDGET,
            free_vars: FreeVarPolicy::Reject,
        }
    }
}

impl Bounds {
    pub fn with_domain(max_domain: usize) -> Self {
        Bounds {
            max_domain,
            ..Bounds::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidityError {
    #[error("formula has free variables {0:?}")]
    NotClosed(Vec<String>),
    #[error("{0}")]
    Arity(String),
    #[error("domain bound must be positive")]
    ZeroDomain,
    #[error("enumeration needs {needed} evaluations, budget is {budget}")]
    ResourceLimit { needed: u128, budget: u64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub model: NeighborhoodModel,
    pub assignment: Assignment,
    pub world: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Validity {
    /// No countermodel with domain size up to `max_domain`.
    Valid { max_domain: usize },
    Countermodel(Box<Countermodel>),
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicCountermodel {
    pub model: AlgebraicModel,
    pub assignment: Assignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicValidity {
    Valid { max_domain: usize },
    Countermodel(Box<AlgebraicCountermodel>),
}

impl AlgebraicValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, AlgebraicValidity::Valid { .. })
    }
}

// Predicate layout of the enumeration: per predicate its arity and the
// offset of its first tuple within one world's block of bits.
struct Layout {
    preds: Vec<(String, usize, usize)>,
    stride: usize,
}

impl Layout {
    fn new(preds: &BTreeMap<String, usize>, domain: usize) -> Layout {
        let mut offset = 0;
        let preds = preds
            .iter()
            .map(|(p, &arity)| {
                let entry = (p.clone(), arity, offset);
                offset += tuple_count(domain, arity);
                entry
            })
            .collect();
        Layout { preds, stride: offset }
    }

    fn bits(&self, carrier: usize) -> u128 {
        (self.stride as u128).saturating_mul(carrier as u128)
    }

    // Bit `c * stride + offset + t` of `counter` says whether tuple `t` of the
    // predicate holds at world (or atom) `c`, so the counter runs through
    // interpretations in the lexicographic (world, predicate, tuple) order.
    fn fill(&self, counter: u64, carrier: usize, domain: usize, interp: &mut BTreeMap<String, PredTable>) {
        for (p, arity, offset) in &self.preds {
            let table = interp.get_mut(p).expect("table allocated");
            for t in 0..tuple_count(domain, *arity) {
                let mut v = Subset::EMPTY;
                for c in 0..carrier {
                    if counter >> (c * self.stride + offset + t) & 1 == 1 {
                        v = v.with(c);
                    }
                }
                table.values[t] = v;
            }
        }
    }

    fn empty_tables(&self, domain: usize) -> BTreeMap<String, PredTable> {
        self.preds
            .iter()
            .map(|(p, arity, _)| (p.clone(), PredTable::empty(domain, *arity)))
            .collect()
    }
}

struct Plan {
    preds: BTreeMap<String, usize>,
    vars: Vec<String>,
}

fn plan(f: &Formula, carrier: usize, bounds: &Bounds) -> Result<Plan, ValidityError> {
    if bounds.max_domain == 0 {
        return Err(ValidityError::ZeroDomain);
    }
    let preds = f.predicates().map_err(|e| ValidityError::Arity(e.to_string()))?;
    let vars: Vec<String> = f.free_vars().into_iter().collect();
    if !vars.is_empty() && bounds.free_vars == FreeVarPolicy::Reject {
        return Err(ValidityError::NotClosed(vars));
    }
    let needed = enumeration_size(&preds, vars.len(), carrier, bounds.max_domain);
    if needed > bounds.budget as u128 {
        return Err(ValidityError::ResourceLimit {
            needed,
            budget: bounds.budget,
        });
    }
    Ok(Plan { preds, vars })
}

/// Evaluations a bounded validity query performs for these predicate
/// arities, free-variable count and carrier size; saturates at `u128::MAX`.
pub fn enumeration_size(preds: &BTreeMap<String, usize>, free_vars: usize, carrier: usize, max_domain: usize) -> u128 {
    let mut total: u128 = 0;
    for d in 1..=max_domain {
        let bits = Layout::new(preds, d).bits(carrier);
        let interps = if bits >= 127 { u128::MAX } else { 1u128 << bits };
        let assigns = (d as u128).saturating_pow(free_vars as u32);
        total = total.saturating_add(interps.saturating_mul(assigns));
    }
    total
}

fn assignment_at(vars: &[String], domain: usize, mut index: usize) -> Assignment {
    let mut a = Assignment::new();
    for v in vars.iter().rev() {
        a.insert(v.clone(), index % domain);
        index /= domain;
    }
    a
}

// Runs `f` over every structure and assignment in enumeration order and
// returns the first one where it is not the top element.
fn search<S: Structure>(
    f: &Formula,
    carrier: usize,
    plan: &Plan,
    max_domain: usize,
    mut build: impl FnMut(usize, BTreeMap<String, PredTable>) -> S,
    tables: impl Fn(&mut S) -> &mut BTreeMap<String, PredTable>,
) -> Result<Option<(S, Assignment, Subset)>, ValidityError> {
    for d in 1..=max_domain {
        let layout = Layout::new(&plan.preds, d);
        let bits = layout.bits(carrier) as u32;
        let mut s = build(d, layout.empty_tables(d));
        let assigns = d.pow(plan.vars.len() as u32);
        for counter in 0..(1u64 << bits) {
            layout.fill(counter, carrier, d, tables(&mut s));
            for i in 0..assigns {
                let mut a = assignment_at(&plan.vars, d, i);
                let v = eval(&s, &mut a, f)?;
                if v != s.top() {
                    return Ok(Some((s, a, v)));
                }
            }
        }
    }
    Ok(None)
}

/// Bounded check of `Z ⊨ φ`: every domain of size `1..=max_domain`, every
/// interpretation and every assignment, in a fixed order.
///
/// `Valid` only means no countermodel exists within the bound.
pub fn frame_validates(frame: &NeighborhoodFrame, f: &Formula, bounds: &Bounds) -> Result<Validity, ValidityError> {
    let carrier = frame.worlds();
    let plan = plan(f, carrier, bounds)?;
    let found = search(
        f,
        carrier,
        &plan,
        bounds.max_domain,
        |d, interp| NeighborhoodModel::new(frame.clone(), d, interp).expect("enumerated tables are well formed"),
        |m| &mut m.interp,
    )?;
    Ok(match found {
        None => Validity::Valid {
            max_domain: bounds.max_domain,
        },
        Some((model, assignment, v)) => {
            let world = (0..carrier).find(|&c| !v.contains(c)).expect("value differs from the universe");
            Validity::Countermodel(Box::new(Countermodel {
                model,
                assignment,
                world,
            }))
        }
    })
}

/// Bounded check of `A ⊨ φ`: `u(φ) = 1` under every interpretation into
/// the algebra with domain size up to the bound.
pub fn algebra_validates(alg: &ModalAlgebra, f: &Formula, bounds: &Bounds) -> Result<AlgebraicValidity, ValidityError> {
    let carrier = alg.atoms();
    let plan = plan(f, carrier, bounds)?;
    let found = search(
        f,
        carrier,
        &plan,
        bounds.max_domain,
        |d, interp| AlgebraicModel::new(alg.clone(), d, interp).expect("enumerated tables are well formed"),
        |m| &mut m.interp,
    )?;
    Ok(match found {
        None => AlgebraicValidity::Valid {
            max_domain: bounds.max_domain,
        },
        Some((model, assignment, _)) => AlgebraicValidity::Countermodel(Box::new(AlgebraicCountermodel { model, assignment })),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityEntry {
    pub formula: Formula,
    pub frame_valid: bool,
    pub algebra_valid: bool,
}

impl DualityEntry {
    pub fn agrees(&self) -> bool {
        self.frame_valid == self.algebra_valid
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DualityReport {
    pub entries: Vec<DualityEntry>,
}

impl DualityReport {
    pub fn disagreements(&self) -> impl Iterator<Item = &DualityEntry> {
        self.entries.iter().filter(|e| !e.agrees())
    }

    pub fn all_agree(&self) -> bool {
        self.disagreements().next().is_none()
    }
}

/// Runs [`frame_validates`] on `frame` and [`algebra_validates`] on its
/// complex algebra for each formula.
pub fn check_duality(frame: &NeighborhoodFrame, formulas: &[Formula], bounds: &Bounds) -> Result<DualityReport, ValidityError> {
    let alg = complex_algebra(frame);
    let entries = formulas
        .iter()
        .map(|f| {
            Ok(DualityEntry {
                formula: f.clone(),
                frame_valid: frame_validates(frame, f, bounds)?.is_valid(),
                algebra_valid: algebra_validates(&alg, f, bounds)?.is_valid(),
            })
        })
        .collect::<Result<_, ValidityError>>()?;
    Ok(DualityReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{relation_to_frame, AccessibilityRelation, Relation};
    use crate::semantics::eval_neighborhood;
    use crate::syntax::parse;
    use std::collections::BTreeSet;

    fn full_frame(n: usize) -> NeighborhoodFrame {
        let all: BTreeSet<Subset> = Subset::all(n).collect();
        NeighborhoodFrame::mono(n, vec![all; n]).unwrap()
    }

    #[test]
    fn box_bottom_on_full_frames() {
        let f = parse("[] F").unwrap();
        for n in 1..=3 {
            for d in 1..=3 {
                assert!(frame_validates(&full_frame(n), &f, &Bounds::with_domain(d)).unwrap().is_valid());
            }
        }
    }

    #[test]
    fn reflexive_point_validates_t() {
        let r = Relation::from_edges(1, [(0, 0)]).unwrap();
        let frame = relation_to_frame(&AccessibilityRelation::mono(r));
        let f = parse("[] p -> p").unwrap();
        assert_eq!(frame_validates(&frame, &f, &Bounds::with_domain(1)).unwrap(), Validity::Valid { max_domain: 1 });
        let irreflexive = relation_to_frame(&AccessibilityRelation::mono(Relation::empty(1)));
        match frame_validates(&irreflexive, &f, &Bounds::with_domain(1)).unwrap() {
            Validity::Countermodel(c) => {
                assert_eq!(c.world, 0);
                let v = eval_neighborhood(&c.model, &c.assignment, &f).unwrap();
                assert!(!v.contains(0));
            }
            v => panic!("expected countermodel, got {v:?}"),
        }
    }

    #[test]
    fn non_monotone_frame_refutes_mt_formula() {
        // N(0) = {{0}} is not upward closed in a 2-world universe.
        let frame = NeighborhoodFrame::mono(2, vec![BTreeSet::from([Subset(1)]), BTreeSet::new()]).unwrap();
        let f = parse("[] (p & q) -> [] p & [] q").unwrap();
        assert!(!frame_validates(&frame, &f, &Bounds::with_domain(1)).unwrap().is_valid());
    }

    #[test]
    fn free_variable_policy() {
        let frame = full_frame(1);
        let f = parse("P(x) -> P(x)").unwrap();
        assert_eq!(
            frame_validates(&frame, &f, &Bounds::default()),
            Err(ValidityError::NotClosed(vec!["x".into()]))
        );
        let universal = Bounds {
            free_vars: FreeVarPolicy::Universal,
            ..Bounds::default()
        };
        assert!(frame_validates(&frame, &f, &universal).unwrap().is_valid());
        let g = parse("P(x) -> P(y)").unwrap();
        assert!(!frame_validates(&frame, &g, &universal).unwrap().is_valid());
    }

    #[test]
    fn budget_is_enforced() {
        let frame = full_frame(6);
        let f = parse("forall x. forall y. P(x) & Q(y) -> P(y)").unwrap();
        let tight = Bounds {
            budget: 1000,
            ..Bounds::default()
        };
        assert!(matches!(
            frame_validates(&frame, &f, &tight),
            Err(ValidityError::ResourceLimit { .. })
        ));
    }

    #[test]
    fn duality_report_shapes() {
        let frame = full_frame(2);
        assert!(check_duality(&frame, &[], &Bounds::default()).unwrap().entries.is_empty());
        let r = check_duality(&frame, &[Formula::Top], &Bounds::default()).unwrap();
        assert_eq!(r.entries.len(), 1);
        assert!(r.all_agree() && r.entries[0].frame_valid);
    }

    #[test]
    fn countermodel_order_is_deterministic() {
        let frame = full_frame(2);
        let f = parse("p").unwrap();
        let first = frame_validates(&frame, &f, &Bounds::default()).unwrap();
        assert_eq!(first, frame_validates(&frame, &f, &Bounds::default()).unwrap());
        // The all-false interpretation comes first.
        if let Validity::Countermodel(c) = first {
            assert_eq!(c.model.interpretation()["p"].values, vec![Subset::EMPTY]);
            assert_eq!(c.world, 0);
        } else {
            panic!("p is not valid");
        }
    }
}
