use thiserror::Error;

use crate::syntax::Formula;

/// Truth tables beyond this many letters are refused.
pub const MAX_LETTERS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("propositional skeleton has {0} letters, more than {MAX_LETTERS}")]
pub struct TooManyLetters(pub usize);

// Maximal non-Boolean subformulas (atoms, boxes, quantifiers) become
// letters; two occurrences share a letter when alpha-equivalent.
fn collect<'a>(f: &'a Formula, letters: &mut Vec<&'a Formula>) {
    match f {
        Formula::Top | Formula::Bottom => {}
        Formula::And(l, r) => {
            collect(l, letters);
            collect(r, letters);
        }
        Formula::Not(g) => collect(g, letters),
        _ => {
            if !letters.iter().any(|l| l.alpha_eq(f)) {
                letters.push(f);
            }
        }
    }
}

fn eval(f: &Formula, letters: &[&Formula], row: u32) -> bool {
    match f {
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::And(l, r) => eval(l, letters, row) && eval(r, letters, row),
        Formula::Not(g) => !eval(g, letters, row),
        _ => {
            let i = letters.iter().position(|l| l.alpha_eq(f)).expect("letter collected");
            row >> i & 1 == 1
        }
    }
}

/// Whether `f` is a substitution instance of a propositional tautology,
/// judged by the truth table of its propositional skeleton.
pub fn is_tautology(f: &Formula) -> Result<bool, TooManyLetters> {
    let mut letters = Vec::new();
    collect(f, &mut letters);
    if letters.len() > MAX_LETTERS {
        return Err(TooManyLetters(letters.len()));
    }
    Ok((0..1u32 << letters.len()).all(|row| eval(f, &letters, row)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn taut(s: &str) -> bool {
        is_tautology(&parse(s).unwrap()).unwrap()
    }

    #[test]
    fn classics() {
        assert!(taut("p -> p"));
        assert!(taut("p | ~p"));
        assert!(taut("(p -> q) -> ((q -> r) -> (p -> r))"));
        assert!(taut("T"));
        assert!(!taut("p -> q"));
        assert!(!taut("F"));
    }

    #[test]
    fn modal_subformulas_are_opaque() {
        assert!(taut("[] p -> [] p"));
        assert!(!taut("[] p -> p"));
        assert!(taut("(forall x. P(x)) -> (forall y. P(y))"));
        assert!(!taut("[] (p & q) -> [] p"));
    }

    #[test]
    fn letter_limit() {
        let mut f = Formula::Top;
        for i in 0..=MAX_LETTERS {
            f = Formula::and(f, Formula::prop(format!("p{i}")));
        }
        assert_eq!(is_tautology(&f), Err(TooManyLetters(MAX_LETTERS + 1)));
    }
}
