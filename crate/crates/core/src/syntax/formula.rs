use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Name of a modal operator. `box` is the default, unnamed modality
/// written `[]`; every other name is written `[name]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modality(String);

impl Modality {
    pub const DEFAULT_NAME: &'static str = "box";

    /// Panics on an empty name.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "modality names are nonempty");
        Modality(name)
    }

    pub fn default_box() -> Self {
        Modality(Self::DEFAULT_NAME.to_string())
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    pub fn is_default(&self) -> bool {
        self.0 == Self::DEFAULT_NAME
    }
}

impl fmt::Debug for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Modality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Modality {
    fn from(s: &str) -> Self {
        Modality::new(s)
    }
}

/// A multi-modal predicate modal formula over the core connectives.
///
/// `Or`, `Implies`, `Iff`, `Exists` and `Diamond` are not variants: the
/// corresponding constructors expand them into the core set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Top,
    Bottom,
    Atom { pred: String, args: Vec<String> },
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Forall(String, Box<Formula>),
    Box(Modality, Box<Formula>),
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: &[&str]) -> Formula {
        Formula::Atom {
            pred: pred.into(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    /// A propositional variable (0-ary predicate).
    pub fn prop(name: impl Into<String>) -> Formula {
        Formula::Atom {
            pred: name.into(),
            args: Vec::new(),
        }
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Forall(var.into(), Box::new(body))
    }

    pub fn boxed(m: impl Into<Modality>, body: Formula) -> Formula {
        Formula::Box(m.into(), Box::new(body))
    }

    /// `¬(¬l ∧ ¬r)`
    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::not(Formula::and(Formula::not(l), Formula::not(r)))
    }

    /// `¬(l ∧ ¬r)`
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::not(Formula::and(l, Formula::not(r)))
    }

    /// `(l ⊃ r) ∧ (r ⊃ l)`
    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::and(
            Formula::implies(l.clone(), r.clone()),
            Formula::implies(r, l),
        )
    }

    /// `¬∀x¬body`
    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::not(Formula::forall(var, Formula::not(body)))
    }

    /// `¬□¬body`
    pub fn diamond(m: impl Into<Modality>, body: Formula) -> Formula {
        Formula::not(Formula::boxed(m, Formula::not(body)))
    }

    /// `m` applied `n` times.
    pub fn box_iter(m: impl Into<Modality>, n: usize, body: Formula) -> Formula {
        let m = m.into();
        (0..n).fold(body, |acc, _| Formula::boxed(m.clone(), acc))
    }

    /// `◇_m` applied `n` times.
    pub fn diamond_iter(m: impl Into<Modality>, n: usize, body: Formula) -> Formula {
        let m = m.into();
        (0..n).fold(body, |acc, _| Formula::diamond(m.clone(), acc))
    }

    pub fn as_not(&self) -> Option<&Formula> {
        match self {
            Formula::Not(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_and(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::And(l, r) => Some((l, r)),
            _ => None,
        }
    }

    pub fn as_implies(&self) -> Option<(&Formula, &Formula)> {
        let (l, r) = self.as_not()?.as_and()?;
        Some((l, r.as_not()?))
    }

    pub fn as_or(&self) -> Option<(&Formula, &Formula)> {
        let (l, r) = self.as_not()?.as_and()?;
        Some((l.as_not()?, r.as_not()?))
    }

    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        let (l, r) = self.as_and()?;
        let (a, b) = l.as_implies()?;
        let (c, d) = r.as_implies()?;
        (a == d && b == c).then_some((a, b))
    }

    pub fn as_exists(&self) -> Option<(&str, &Formula)> {
        match self.as_not()? {
            Formula::Forall(x, body) => Some((x, body.as_not()?)),
            _ => None,
        }
    }

    pub fn as_diamond(&self) -> Option<(&Modality, &Formula)> {
        match self.as_not()? {
            Formula::Box(m, body) => Some((m, body.as_not()?)),
            _ => None,
        }
    }

    /// Free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top | Formula::Bottom => {}
            Formula::Atom { args, .. } => {
                for a in args {
                    if !bound.contains(a) {
                        out.insert(a.clone());
                    }
                }
            }
            Formula::And(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Not(f) | Formula::Box(_, f) => f.collect_free(bound, out),
            Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Forall(x, _) => {
                out.insert(x.clone());
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom { .. } => {}
            Formula::And(l, r) => {
                l.visit(f);
                r.visit(f);
            }
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Box(_, g) => g.visit(f),
        }
    }

    /// Predicate symbols with their arity, or the first symbol used at two
    /// different arities.
    pub fn predicates(&self) -> Result<BTreeMap<String, usize>, ArityClash> {
        let mut out: BTreeMap<String, usize> = BTreeMap::new();
        let mut clash = None;
        self.visit(&mut |f| {
            if let Formula::Atom { pred, args } = f {
                match out.get(pred) {
                    Some(&n) if n != args.len() && clash.is_none() => {
                        clash = Some(ArityClash {
                            pred: pred.clone(),
                            first: n,
                            second: args.len(),
                        });
                    }
                    Some(_) => {}
                    None => {
                        out.insert(pred.clone(), args.len());
                    }
                }
            }
        });
        match clash {
            Some(c) => Err(c),
            None => Ok(out),
        }
    }

    pub fn modalities(&self) -> BTreeSet<Modality> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Box(m, _) = f {
                out.insert(m.clone());
            }
        });
        out
    }

    /// Nesting depth of modal operators and quantifiers combined.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Bottom | Formula::Atom { .. } => 0,
            Formula::And(l, r) => l.depth().max(r.depth()),
            Formula::Not(f) => f.depth(),
            Formula::Forall(_, f) | Formula::Box(_, f) => 1 + f.depth(),
        }
    }

    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Formula) -> bool {
        alpha_eq(self, other, &mut Vec::new())
    }
}

fn alpha_eq<'a>(a: &'a Formula, b: &'a Formula, env: &mut Vec<(&'a str, &'a str)>) -> bool {
    match (a, b) {
        (Formula::Top, Formula::Top) | (Formula::Bottom, Formula::Bottom) => true,
        (Formula::Atom { pred: p, args: xs }, Formula::Atom { pred: q, args: ys }) => {
            p == q
                && xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| {
                    let i = env.iter().rposition(|(l, _)| l == x);
                    let j = env.iter().rposition(|(_, r)| r == y);
                    match (i, j) {
                        (None, None) => x == y,
                        _ => i == j,
                    }
                })
        }
        (Formula::And(l1, r1), Formula::And(l2, r2)) => alpha_eq(l1, l2, env) && alpha_eq(r1, r2, env),
        (Formula::Not(f), Formula::Not(g)) => alpha_eq(f, g, env),
        (Formula::Box(m, f), Formula::Box(n, g)) => m == n && alpha_eq(f, g, env),
        (Formula::Forall(x, f), Formula::Forall(y, g)) => {
            env.push((x, y));
            let eq = alpha_eq(f, g, env);
            env.pop();
            eq
        }
        _ => false,
    }
}

/// A predicate symbol used with two different arities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityClash {
    pub pred: String,
    pub first: usize,
    pub second: usize,
}

impl fmt::Display for ArityClash {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "predicate `{}` used with arity {} and arity {}",
            self.pred, self.first, self.second
        )
    }
}
