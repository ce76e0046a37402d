use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::element::OrdinalElement;
use super::ord::{Ordinal, OMEGA};

/// Shape of `N_x = {α | x(α) = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroSetInfo {
    /// `N_x` is unbounded in `ω+ω`.
    Cofinal,
    /// `N_x` is bounded; carries `n_x = min{α | ∀β≥α, x(β) = 1}`.
    Bounded(Ordinal),
}

impl ZeroSetInfo {
    pub fn cofinal(self) -> bool {
        matches!(self, ZeroSetInfo::Cofinal)
    }

    pub fn n_x(self) -> Option<Ordinal> {
        match self {
            ZeroSetInfo::Cofinal => None,
            ZeroSetInfo::Bounded(n) => Some(n),
        }
    }
}

pub fn zero_set_info(x: &OrdinalElement) -> ZeroSetInfo {
    // The 0-set is bounded iff its last interval stops short of ω+ω, and
    // then n_x is that interval's upper end, limit or not.
    match x.complement().intervals().last() {
        None => ZeroSetInfo::Bounded(Ordinal::Fin(0)),
        Some(&(_, Ordinal::OmegaOmega)) => ZeroSetInfo::Cofinal,
        Some(&(_, hi)) => ZeroSetInfo::Bounded(hi),
    }
}

/// `E`: `1 ↦ 1`; cofinal 0-set `↦ 0`; otherwise 1 exactly above `n_x`.
pub fn op_e(x: &OrdinalElement) -> OrdinalElement {
    if x.is_one() {
        return OrdinalElement::one();
    }
    match zero_set_info(x) {
        ZeroSetInfo::Cofinal => OrdinalElement::zero(),
        ZeroSetInfo::Bounded(n) => OrdinalElement::interval(n.succ(), Ordinal::OmegaOmega),
    }
}

/// `C x = ⋀_{n≥0} Eⁿx` in closed form.
pub fn op_c(x: &OrdinalElement) -> OrdinalElement {
    if x.is_one() {
        return OrdinalElement::one();
    }
    match zero_set_info(x) {
        ZeroSetInfo::Bounded(Ordinal::Fin(_)) => OrdinalElement::interval(OMEGA, Ordinal::OmegaOmega),
        _ => OrdinalElement::zero(),
    }
}

/// `⋀_{n≤N} Eⁿx` by iteration, with `E⁰x = x`.
pub fn truncated_meet_e(x: &OrdinalElement, n: usize) -> OrdinalElement {
    let mut acc = x.clone();
    let mut power = x.clone();
    for _ in 0..n {
        power = op_e(&power);
        acc = acc.meet(&power);
    }
    acc
}

/// `{0..span-1} ∪ {ω..ω+span-1}`
pub fn sample_ordinals(span: u64) -> Vec<Ordinal> {
    (0..span)
        .map(Ordinal::Fin)
        .chain((0..span).map(Ordinal::OmegaPlus))
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CklLawReport {
    pub samples: usize,
    pub pairs: usize,
    /// `E(x∧y) ≠ Ex ∧ Ey`
    pub e_meet: Vec<(OrdinalElement, OrdinalElement)>,
    /// `C(x∧y) ≠ Cx ∧ Cy`
    pub c_meet: Vec<(OrdinalElement, OrdinalElement)>,
    /// `x∧y ≤ y` but `E(x∧y) ≰ Ey`
    pub e_monotone: Vec<(OrdinalElement, OrdinalElement)>,
    pub e_top: bool,
}

impl CklLawReport {
    pub fn violations(&self) -> usize {
        self.e_meet.len() + self.c_meet.len() + self.e_monotone.len() + usize::from(!self.e_top)
    }

    pub fn holds(&self) -> bool {
        self.violations() == 0
    }
}

/// Checks `E(x∧y) = Ex∧Ey`, `C(x∧y) = Cx∧Cy`, monotonicity of `E` and
/// `E1 = 1` over every pair of `samples` seeded random elements.
pub fn verify_ckl_laws(samples: usize, seed: u64) -> CklLawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<OrdinalElement> = (0..samples).map(|_| OrdinalElement::random(&mut rng, 25)).collect();
    let es: Vec<OrdinalElement> = xs.iter().map(op_e).collect();
    let cs: Vec<OrdinalElement> = xs.iter().map(op_c).collect();
    let mut report = CklLawReport {
        samples,
        e_top: op_e(&OrdinalElement::one()).is_one(),
        ..CklLawReport::default()
    };
    for i in 0..samples {
        for j in i..samples {
            report.pairs += 1;
            let m = xs[i].meet(&xs[j]);
            let em = op_e(&m);
            if em != es[i].meet(&es[j]) {
                report.e_meet.push((xs[i].clone(), xs[j].clone()));
            }
            if op_c(&m) != cs[i].meet(&cs[j]) {
                report.c_meet.push((xs[i].clone(), xs[j].clone()));
            }
            if !em.le(&es[j]) {
                report.e_monotone.push((xs[i].clone(), xs[j].clone()));
            }
        }
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IncompletenessDemo {
    pub x: OrdinalElement,
    pub cx: OrdinalElement,
    pub ecx: OrdinalElement,
    /// Least sampled `α` with `Cx(α) = 1` and `ECx(α) = 0`.
    pub witness: Option<Ordinal>,
}

impl IncompletenessDemo {
    /// Whether `Cx ≤ ECx`, i.e. `Cp ⊃ ECp` holds at this valuation.
    pub fn c_le_ec(&self) -> bool {
        self.cx.le(&self.ecx)
    }
}

/// The witness `x` (0 only at `α = 1`) together with `Cx` and `ECx`.
pub fn demo_incompleteness() -> IncompletenessDemo {
    let x = OrdinalElement::zero_at([Ordinal::Fin(1)]);
    let cx = op_c(&x);
    let ecx = op_e(&cx);
    let witness = sample_ordinals(4)
        .into_iter()
        .find(|&a| cx.value_at(a) && !ecx.value_at(a));
    IncompletenessDemo { x, cx, ecx, witness }
}

impl fmt::Display for IncompletenessDemo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x     = {}", self.x.case_table())?;
        writeln!(f, "C x   = {}", self.cx.case_table())?;
        writeln!(f, "E C x = {}", self.ecx.case_table())?;
        match self.witness {
            Some(a) => {
                let alpha = a.to_string().replace('w', "ω");
                writeln!(f, "C x({a}) = 1, E C x({a}) = 0")?;
                write!(f, "Cp ⊃ ECp FAILS at α = {alpha}")
            }
            None => write!(f, "Cp ⊃ ECp holds on the sampled ordinals"),
        }
    }
}
