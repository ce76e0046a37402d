//! Variable renaming and uniform substitution of formulas for predicate
//! symbols.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::formula::Formula;

/// `[y/x]f`: replaces the free occurrences of `x` by `y`.
///
/// No renaming is done to avoid capture; callers pass a `y` that is free
/// for `x` in `f` (typically a fresh variable).
pub fn substitute_var(f: &Formula, x: &str, y: &str) -> Formula {
    match f {
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|a| if a == x { y.to_string() } else { a.clone() })
                .collect(),
        },
        Formula::And(l, r) => Formula::and(substitute_var(l, x, y), substitute_var(r, x, y)),
        Formula::Not(g) => Formula::not(substitute_var(g, x, y)),
        Formula::Box(m, g) => Formula::Box(m.clone(), Box::new(substitute_var(g, x, y))),
        Formula::Forall(v, g) if v == x => f.clone(),
        Formula::Forall(v, g) => Formula::forall(v.clone(), substitute_var(g, x, y)),
    }
}

/// Whether `y` can replace the free occurrences of `x` in `f` without any
/// of them landing inside a `∀y`.
pub fn is_free_for(f: &Formula, x: &str, y: &str) -> bool {
    fn go(f: &Formula, x: &str, y: &str, under_y: bool) -> bool {
        match f {
            Formula::Top | Formula::Bottom => true,
            Formula::Atom { args, .. } => !(under_y && args.iter().any(|a| a == x)),
            Formula::And(l, r) => go(l, x, y, under_y) && go(r, x, y, under_y),
            Formula::Not(g) | Formula::Box(_, g) => go(g, x, y, under_y),
            Formula::Forall(v, _) if v == x => true,
            Formula::Forall(v, g) => go(g, x, y, under_y || v == y),
        }
    }
    x == y || go(f, x, y, false)
}

/// A variable not in `avoid`, derived from `base`.
pub fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '_');
    let stem = if stem.is_empty() { "v" } else { stem };
    (1..)
        .map(|i| format!("{stem}_{i}"))
        .find(|cand| !avoid.contains(cand))
        .expect("unbounded supply of names")
}

/// Simultaneous capture-avoiding renaming of free variables.
pub fn rename_free(f: &Formula, map: &BTreeMap<String, String>) -> Formula {
    if map.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Top | Formula::Bottom => f.clone(),
        Formula::Atom { pred, args } => Formula::Atom {
            pred: pred.clone(),
            args: args
                .iter()
                .map(|a| map.get(a).cloned().unwrap_or_else(|| a.clone()))
                .collect(),
        },
        Formula::And(l, r) => Formula::and(rename_free(l, map), rename_free(r, map)),
        Formula::Not(g) => Formula::not(rename_free(g, map)),
        Formula::Box(m, g) => Formula::Box(m.clone(), Box::new(rename_free(g, map))),
        Formula::Forall(v, g) => {
            let free = g.free_vars();
            let mut inner: BTreeMap<String, String> = map
                .iter()
                .filter(|(k, _)| *k != v && free.contains(*k))
                .map(|(k, val)| (k.clone(), val.clone()))
                .collect();
            if inner.values().any(|val| val == v) {
                let mut avoid = g.all_vars();
                avoid.extend(inner.values().cloned());
                avoid.extend(inner.keys().cloned());
                let fresh = fresh_var(v, &avoid);
                inner.insert(v.clone(), fresh.clone());
                Formula::forall(fresh, rename_free(g, &inner))
            } else {
                Formula::forall(v.clone(), rename_free(g, &inner))
            }
        }
    }
}

/// The formula substituted for one predicate symbol: `λ params. body`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Replacement {
    pub params: Vec<String>,
    pub body: Formula,
}

impl Replacement {
    pub fn new(params: &[&str], body: Formula) -> Self {
        Replacement {
            params: params.iter().map(|p| p.to_string()).collect(),
            body,
        }
    }

    /// Replacement for a propositional variable.
    pub fn constant(body: Formula) -> Self {
        Replacement {
            params: Vec::new(),
            body,
        }
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    /// Free variables of the body other than the parameters.
    pub fn globals(&self) -> BTreeSet<String> {
        let mut fv = self.body.free_vars();
        for p in &self.params {
            fv.remove(p);
        }
        fv
    }

    fn instantiate(&self, args: &[String]) -> Formula {
        let map = self
            .params
            .iter()
            .cloned()
            .zip(args.iter().cloned())
            .filter(|(p, a)| p != a)
            .collect();
        rename_free(&self.body, &map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("substitution for `{pred}` has arity {expected}, but `{pred}` is applied to {found} argument(s)")]
pub struct SubstArityError {
    pub pred: String,
    pub expected: usize,
    pub found: usize,
}

/// A uniform substitution of formulas for predicate symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubstitutionMap {
    map: BTreeMap<String, Replacement>,
}

impl SubstitutionMap {
    pub fn new() -> Self {
        Self::default()
    }

    #[must_use]
    pub fn with(mut self, pred: impl Into<String>, r: Replacement) -> Self {
        self.map.insert(pred.into(), r);
        self
    }

    pub fn insert(&mut self, pred: impl Into<String>, r: Replacement) {
        self.map.insert(pred.into(), r);
    }

    pub fn get(&self, pred: &str) -> Option<&Replacement> {
        self.map.get(pred)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Replacement)> {
        self.map.iter()
    }

    /// Applies the substitution, renaming bound variables of `f` wherever
    /// a replacement's global variables would otherwise be captured.
    pub fn apply(&self, f: &Formula) -> Result<Formula, SubstArityError> {
        if self.map.is_empty() {
            return Ok(f.clone());
        }
        match f {
            Formula::Top | Formula::Bottom => Ok(f.clone()),
            Formula::Atom { pred, args } => match self.map.get(pred) {
                None => Ok(f.clone()),
                Some(r) if r.arity() != args.len() => Err(SubstArityError {
                    pred: pred.clone(),
                    expected: r.arity(),
                    found: args.len(),
                }),
                Some(r) => Ok(r.instantiate(args)),
            },
            Formula::And(l, r) => Ok(Formula::and(self.apply(l)?, self.apply(r)?)),
            Formula::Not(g) => Ok(Formula::not(self.apply(g)?)),
            Formula::Box(m, g) => Ok(Formula::Box(m.clone(), Box::new(self.apply(g)?))),
            Formula::Forall(x, g) => {
                let captured = self.globals_used_in(g).contains(x);
                if captured {
                    let mut avoid = g.all_vars();
                    avoid.extend(self.all_globals());
                    let fresh = fresh_var(x, &avoid);
                    let renamed = substitute_var(g, x, &fresh);
                    Ok(Formula::forall(fresh, self.apply(&renamed)?))
                } else {
                    Ok(Formula::forall(x.clone(), self.apply(g)?))
                }
            }
        }
    }

    fn globals_used_in(&self, f: &Formula) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        f.visit(&mut |g| {
            if let Formula::Atom { pred, .. } = g {
                if let Some(r) = self.map.get(pred) {
                    out.extend(r.globals());
                }
            }
        });
        out
    }

    fn all_globals(&self) -> BTreeSet<String> {
        self.map.values().flat_map(|r| r.globals()).collect()
    }
}

/// Free function form of [`SubstitutionMap::apply`].
pub fn apply_substitution(s: &SubstitutionMap, f: &Formula) -> Result<Formula, SubstArityError> {
    s.apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Modality;

    fn atom(p: &str, args: &[&str]) -> Formula {
        Formula::atom(p, args)
    }

    #[test]
    fn substitute_var_examples() {
        assert_eq!(
            substitute_var(&atom("P", &["x", "z"]), "x", "y"),
            atom("P", &["y", "z"])
        );
        let bound = Formula::forall("x", atom("P", &["x"]));
        assert_eq!(substitute_var(&bound, "x", "y"), bound);
        let mixed = Formula::and(atom("P", &["x"]), Formula::forall("x", atom("Q", &["x"])));
        assert_eq!(
            substitute_var(&mixed, "x", "y"),
            Formula::and(atom("P", &["y"]), Formula::forall("x", atom("Q", &["x"])))
        );
    }

    #[test]
    fn zero_ary_substitution() {
        let bx = |f| Formula::boxed(Modality::default_box(), f);
        let f = Formula::implies(bx(Formula::prop("p")), bx(bx(Formula::prop("p"))));
        let s = SubstitutionMap::new().with("p", Replacement::constant(atom("Q", &["x"])));
        let want = Formula::implies(bx(atom("Q", &["x"])), bx(bx(atom("Q", &["x"]))));
        assert_eq!(s.apply(&f).unwrap(), want);
    }

    #[test]
    fn empty_substitution_is_identity() {
        let f = Formula::forall("x", Formula::diamond("E", atom("P", &["x", "y"])));
        assert_eq!(SubstitutionMap::new().apply(&f).unwrap(), f);
    }

    #[test]
    fn unary_substitution_under_quantifier() {
        // Hand expansion: ∀x P(x) with P(x1) := ◇R(x1) becomes ∀x ◇R(x).
        let s = SubstitutionMap::new().with(
            "P",
            Replacement::new(&["x1"], Formula::diamond(Modality::default_box(), atom("R", &["x1"]))),
        );
        let f = Formula::forall("x", atom("P", &["x"]));
        let want = Formula::forall(
            "x",
            Formula::not(Formula::boxed(
                Modality::default_box(),
                Formula::not(atom("R", &["x"])),
            )),
        );
        assert_eq!(s.apply(&f).unwrap(), want);
    }

    #[test]
    fn global_variable_is_not_captured() {
        let s = SubstitutionMap::new().with("p", Replacement::constant(atom("Q", &["x"])));
        let f = Formula::forall("x", Formula::and(Formula::prop("p"), atom("R", &["x"])));
        let out = s.apply(&f).unwrap();
        let Formula::Forall(v, body) = &out else {
            panic!("expected a quantifier, got {out:?}");
        };
        assert_ne!(v, "x");
        assert_eq!(**body, Formula::and(atom("Q", &["x"]), atom("R", &[v])));
        assert_eq!(out.free_vars(), BTreeSet::from(["x".to_string()]));
    }

    #[test]
    fn parameter_instantiation_avoids_inner_binder() {
        // P(x1) := ∀y R(x1, y), applied to P(y): the inner ∀y must be renamed.
        let s = SubstitutionMap::new().with(
            "P",
            Replacement::new(&["x1"], Formula::forall("y", atom("R", &["x1", "y"]))),
        );
        let out = s.apply(&atom("P", &["y"])).unwrap();
        assert_eq!(out.free_vars(), BTreeSet::from(["y".to_string()]));
        let Formula::Forall(v, body) = &out else { panic!() };
        assert_eq!(**body, atom("R", &["y", v]));
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let s = SubstitutionMap::new().with("P", Replacement::new(&["a", "b"], Formula::Top));
        let err = s.apply(&atom("P", &["x"])).unwrap_err();
        assert_eq!((err.expected, err.found), (2, 1));
    }

    #[test]
    fn free_for_check() {
        let f = Formula::forall("y", atom("P", &["x", "y"]));
        assert!(!is_free_for(&f, "x", "y"));
        assert!(is_free_for(&f, "x", "z"));
        assert!(is_free_for(&atom("P", &["x"]), "x", "y"));
    }
}
