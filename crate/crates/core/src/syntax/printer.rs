use std::fmt;

use super::formula::{Formula, Modality};

// Binding strength, loosest first. Quantifiers sit below everything so they
// are parenthesized anywhere but the top or a quantifier body.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn modality(f: &mut fmt::Formatter<'_>, open: char, m: &Modality, close: char) -> fmt::Result {
    if m.is_default() {
        write!(f, "{open}{close}")
    } else {
        write!(f, "{open}{m}{close}")
    }
}

fn wrap(
    f: &mut fmt::Formatter<'_>,
    level: u8,
    ctx: u8,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if level < ctx {
        f.write_str("(")?;
        body(f)?;
        f.write_str(")")
    } else {
        body(f)
    }
}

fn print(fm: &Formula, ctx: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some((a, b)) = fm.as_iff() {
        return wrap(f, IFF, ctx, |f| {
            print(a, IFF, f)?;
            f.write_str(" <-> ")?;
            print(b, IMP, f)
        });
    }
    // `¬(¬l ∧ ¬r)` reads both as `l | r` and `¬l -> r`; prefer the
    // implication when the disjunct `¬l` is itself an implication.
    let or = fm
        .as_or()
        .filter(|_| !fm.as_implies().is_some_and(|(a, _)| a.as_implies().is_some()));
    if let Some((a, b)) = or {
        return wrap(f, OR, ctx, |f| {
            print(a, OR, f)?;
            f.write_str(" | ")?;
            print(b, AND, f)
        });
    }
    if let Some((a, b)) = fm.as_implies() {
        return wrap(f, IMP, ctx, |f| {
            print(a, OR, f)?;
            f.write_str(" -> ")?;
            print(b, IMP, f)
        });
    }
    if let Some((x, body)) = fm.as_exists() {
        return wrap(f, QUANT, ctx, |f| {
            write!(f, "exists {x}. ")?;
            print(body, QUANT, f)
        });
    }
    if let Some((m, body)) = fm.as_diamond() {
        modality(f, '<', m, '>')?;
        f.write_str(" ")?;
        return print(body, UNARY, f);
    }
    match fm {
        Formula::Top => f.write_str("T"),
        Formula::Bottom => f.write_str("F"),
        Formula::Atom { pred, args } => {
            f.write_str(pred)?;
            if !args.is_empty() {
                write!(f, "({})", args.join(", "))?;
            }
            Ok(())
        }
        Formula::And(l, r) => wrap(f, AND, ctx, |f| {
            print(l, AND, f)?;
            f.write_str(" & ")?;
            print(r, UNARY, f)
        }),
        Formula::Not(g) => {
            f.write_str("~")?;
            print(g, UNARY, f)
        }
        Formula::Box(m, g) => {
            modality(f, '[', m, ']')?;
            f.write_str(" ")?;
            print(g, UNARY, f)
        }
        Formula::Forall(x, g) => wrap(f, QUANT, ctx, |f| {
            write!(f, "forall {x}. ")?;
            print(g, QUANT, f)
        }),
    }
}

/// Prints in the concrete syntax accepted by [`super::parse`], re-sugaring
/// the derived connectives where the core shape matches.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        print(self, QUANT, f)
    }
}
