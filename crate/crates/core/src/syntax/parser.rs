//! Recursive descent parser for the concrete formula syntax.
//!
//! Precedence, loosest first: `<->` (left), `->` (right), `|`, `&`, then
//! the unary forms `~`, `[m]`, `<m>`. A quantifier `forall x.` or
//! `exists x.` takes everything to its right as its body.

use std::collections::BTreeMap;

use thiserror::Error;

use super::formula::{Formula, Modality};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: predicate `{pred}` used with arity {found}, earlier with arity {expected}")]
    Arity {
        line: usize,
        column: usize,
        pred: String,
        expected: usize,
        found: usize,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. } | ParseError::Arity { line, column, .. } => {
                (*line, *column)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Not,
    And,
    Or,
    Implies,
    Iff,
    LBracket,
    RBracket,
    Lt,
    Gt,
    /// `□` or `◇` written as a single symbol.
    BoxSym,
    DiamondSym,
    ForallSym,
    ExistsSym,
    TopSym,
    BottomSym,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let mut push = |tok, len: usize, i: &mut usize, column: &mut usize| {
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            *i += len;
            *column += len;
        };
        match c {
            '\n' => {
                line += 1;
                column = 1;
                i += 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                column += 1;
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut column),
            ')' => push(Tok::RParen, 1, &mut i, &mut column),
            ',' => push(Tok::Comma, 1, &mut i, &mut column),
            '.' => push(Tok::Dot, 1, &mut i, &mut column),
            '~' | '¬' => push(Tok::Not, 1, &mut i, &mut column),
            '&' | '∧' => push(Tok::And, 1, &mut i, &mut column),
            '|' | '∨' => push(Tok::Or, 1, &mut i, &mut column),
            '→' | '⊃' => push(Tok::Implies, 1, &mut i, &mut column),
            '↔' | '≡' => push(Tok::Iff, 1, &mut i, &mut column),
            '[' => push(Tok::LBracket, 1, &mut i, &mut column),
            ']' => push(Tok::RBracket, 1, &mut i, &mut column),
            '>' => push(Tok::Gt, 1, &mut i, &mut column),
            '□' => push(Tok::BoxSym, 1, &mut i, &mut column),
            '◇' => push(Tok::DiamondSym, 1, &mut i, &mut column),
            '∀' => push(Tok::ForallSym, 1, &mut i, &mut column),
            '∃' => push(Tok::ExistsSym, 1, &mut i, &mut column),
            '⊤' => push(Tok::TopSym, 1, &mut i, &mut column),
            '⊥' => push(Tok::BottomSym, 1, &mut i, &mut column),
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Implies, 2, &mut i, &mut column),
            '<' if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') => {
                push(Tok::Iff, 3, &mut i, &mut column)
            }
            '<' => push(Tok::Lt, 1, &mut i, &mut column),
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                column += i - start;
                out.push(Token {
                    tok: Tok::Ident(word),
                    line: tl,
                    column: tc,
                });
            }
            other => {
                return Err(ParseError::Syntax {
                    line,
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    arities: BTreeMap<String, usize>,
}

const KEYWORDS: [&str; 2] = ["forall", "exists"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.tokens[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        let (line, column) = self.here();
        Err(ParseError::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", self.peek().describe()))
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.imp()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Implies {
            self.bump();
            let rhs = self.imp()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.and()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn modality_name(&mut self, close: Tok, what: &str) -> Result<Modality, ParseError> {
        let m = match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Modality::new(name)
            }
            _ => Modality::default_box(),
        };
        self.expect(close, what)?;
        Ok(m)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LBracket => {
                self.bump();
                let m = self.modality_name(Tok::RBracket, "`]`")?;
                Ok(Formula::boxed(m, self.unary()?))
            }
            Tok::Lt => {
                self.bump();
                let m = self.modality_name(Tok::Gt, "`>`")?;
                Ok(Formula::diamond(m, self.unary()?))
            }
            Tok::BoxSym => {
                self.bump();
                Ok(Formula::boxed(Modality::default_box(), self.unary()?))
            }
            Tok::DiamondSym => {
                self.bump();
                Ok(Formula::diamond(Modality::default_box(), self.unary()?))
            }
            Tok::ForallSym => {
                self.bump();
                self.quantifier(true)
            }
            Tok::ExistsSym => {
                self.bump();
                self.quantifier(false)
            }
            Tok::Ident(w) if w == "forall" || w == "exists" => {
                self.bump();
                self.quantifier(w == "forall")
            }
            _ => self.atom(),
        }
    }

    fn quantifier(&mut self, universal: bool) -> Result<Formula, ParseError> {
        let var = self.variable()?;
        self.expect(Tok::Dot, "`.` after the quantified variable")?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()) => {
                self.bump();
                Ok(v)
            }
            other => self.error(format!("expected a variable, found {}", other.describe())),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (line, column) = self.here();
        match self.peek().clone() {
            Tok::TopSym => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::BottomSym => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(w) if w == "T" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(w) if w == "F" => {
                self.bump();
                Ok(Formula::Bottom)
            }
            Tok::Ident(pred) => {
                self.bump();
                let mut args = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    args.push(self.variable()?);
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        args.push(self.variable()?);
                    }
                    self.expect(Tok::RParen, "`,` or `)`")?;
                }
                match self.arities.get(&pred) {
                    Some(&n) if n != args.len() => {
                        return Err(ParseError::Arity {
                            line,
                            column,
                            pred,
                            expected: n,
                            found: args.len(),
                        })
                    }
                    _ => {
                        self.arities.insert(pred.clone(), args.len());
                    }
                }
                Ok(Formula::Atom { pred, args })
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            other => self.error(format!("expected a formula, found {}", other.describe())),
        }
    }
}

/// Parses one formula; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        arities: BTreeMap::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after formula", p.peek().describe()));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}
