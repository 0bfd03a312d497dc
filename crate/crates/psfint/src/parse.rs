//! Parser for propositional formulas and sequents.
//!
//! Grammar (ASCII, with `⊥ ∧ ∨ → ¬` accepted as aliases on input):
//!
//! ```text
//! sequent     := formulalist? "=>" formulalist?
//! formulalist := formula ("," formula)*
//! formula     := impl
//! impl        := disj ("->" impl)?
//! disj        := conj ("|" conj)*
//! conj        := neg ("&" neg)*
//! neg         := "~" neg | atom
//! atom        := "false" | IDENT | "(" formula ")"
//! IDENT       := [A-Za-z][A-Za-z0-9_]*
//! ```

use crate::formula::PropFormula;
use crate::sequent::PropSequent;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {column}: {message}")]
pub struct ParseError {
    /// 1-based character position of the offending token.
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    SeqArrow,
    ImpArrow,
    Tilde,
    Amp,
    Pipe,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(name) => format!("'{name}'"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::SeqArrow => "'=>'".into(),
            Tok::ImpArrow => "'->'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Amp => "'&'".into(),
            Tok::Pipe => "'|'".into(),
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, col));
                i += 1;
            }
            ',' => {
                out.push((Tok::Comma, col));
                i += 1;
            }
            '~' | '¬' => {
                out.push((Tok::Tilde, col));
                i += 1;
            }
            '&' | '∧' => {
                out.push((Tok::Amp, col));
                i += 1;
            }
            '|' | '∨' => {
                out.push((Tok::Pipe, col));
                i += 1;
            }
            '→' => {
                out.push((Tok::ImpArrow, col));
                i += 1;
            }
            '⊥' => {
                out.push((Tok::Ident("false".into()), col));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((Tok::ImpArrow, col));
                    i += 2;
                } else {
                    return Err(ParseError {
                        column: col,
                        message: "expected '>' after '-'".into(),
                    });
                }
            }
            '=' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((Tok::SeqArrow, col));
                    i += 2;
                } else {
                    return Err(ParseError {
                        column: col,
                        message: "expected '>' after '='".into(),
                    });
                }
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_alphanumeric() || chars[i] == '_')
                {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                out.push((Tok::Ident(name), start + 1));
            }
            other => {
                return Err(ParseError {
                    column: col,
                    message: format!("unexpected character '{other}'"),
                });
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, usize)>,
    pos: usize,
    end_column: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_column)
    }

    fn bump(&mut self) -> Option<Tok> {
        let tok = self.tokens.get(self.pos).map(|(t, _)| t.clone());
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("expected {}", tok.describe())))
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let found = match self.peek() {
            Some(tok) => format!("found {}", tok.describe()),
            None => "found end of input".into(),
        };
        ParseError {
            column: self.column(),
            message: format!("{expected}, {found}"),
        }
    }

    fn formula(&mut self) -> Result<PropFormula, ParseError> {
        let left = self.disj()?;
        if self.peek() == Some(&Tok::ImpArrow) {
            self.pos += 1;
            let right = self.formula()?;
            Ok(PropFormula::imp(left, right))
        } else {
            Ok(left)
        }
    }

    fn disj(&mut self) -> Result<PropFormula, ParseError> {
        let mut left = self.conj()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            let right = self.conj()?;
            left = PropFormula::or(left, right);
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<PropFormula, ParseError> {
        let mut left = self.neg()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            let right = self.neg()?;
            left = PropFormula::and(left, right);
        }
        Ok(left)
    }

    fn neg(&mut self) -> Result<PropFormula, ParseError> {
        if self.peek() == Some(&Tok::Tilde) {
            self.pos += 1;
            let inner = self.neg()?;
            Ok(PropFormula::neg(inner))
        } else {
            self.atom()
        }
    }

    fn atom(&mut self) -> Result<PropFormula, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(name)) = self.bump() else {
                    unreachable!()
                };
                if name == "false" {
                    Ok(PropFormula::Bottom)
                } else {
                    Ok(PropFormula::Atom(name))
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a formula")),
        }
    }

    fn formula_list(&mut self) -> Result<Vec<PropFormula>, ParseError> {
        let mut out = vec![self.formula()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.formula()?);
        }
        Ok(out)
    }

    fn at_end(&self) -> Result<(), ParseError> {
        if self.pos == self.tokens.len() {
            Ok(())
        } else {
            Err(self.unexpected("expected end of input"))
        }
    }
}

fn parser_for(input: &str) -> Result<Parser, ParseError> {
    Ok(Parser {
        tokens: lex(input)?,
        pos: 0,
        end_column: input.chars().count() + 1,
    })
}

/// Parses a single propositional formula.
pub fn parse_formula(input: &str) -> Result<PropFormula, ParseError> {
    let mut p = parser_for(input)?;
    let f = p.formula()?;
    p.at_end()?;
    Ok(f)
}

/// Parses a two-sided sequent; either side may be empty.
pub fn parse_sequent(input: &str) -> Result<PropSequent, ParseError> {
    let mut p = parser_for(input)?;
    let antecedent = if p.peek() == Some(&Tok::SeqArrow) {
        Vec::new()
    } else {
        p.formula_list()?
    };
    p.expect(Tok::SeqArrow)?;
    let succedent = if p.peek().is_none() {
        Vec::new()
    } else {
        p.formula_list()?
    };
    p.at_end()?;
    Ok(PropSequent::new(antecedent, succedent))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::PropFormula;

    fn p() -> PropFormula {
        PropFormula::atom("p")
    }

    fn q() -> PropFormula {
        PropFormula::atom("q")
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("p -> q -> p").unwrap(),
            PropFormula::imp(p(), PropFormula::imp(q(), p()))
        );
        assert_eq!(
            parse_formula("p & q | p").unwrap(),
            PropFormula::or(PropFormula::and(p(), q()), p())
        );
        assert_eq!(
            parse_formula("~p | q").unwrap(),
            PropFormula::or(PropFormula::neg(p()), q())
        );
        assert_eq!(parse_formula("~~p").unwrap(), PropFormula::neg(PropFormula::neg(p())));
    }

    #[test]
    fn negation_desugars_to_implication() {
        assert_eq!(
            parse_formula("~p").unwrap(),
            PropFormula::imp(p(), PropFormula::Bottom)
        );
    }

    #[test]
    fn unicode_aliases() {
        assert_eq!(
            parse_formula("¬p ∨ (q ∧ ⊥) → p").unwrap(),
            parse_formula("~p | (q & false) -> p").unwrap()
        );
    }

    #[test]
    fn sequents_with_empty_sides() {
        assert_eq!(parse_sequent("=>").unwrap(), PropSequent::new(vec![], vec![]));
        assert_eq!(
            parse_sequent("=> p").unwrap(),
            PropSequent::new(vec![], vec![p()])
        );
        assert_eq!(
            parse_sequent("p, q => ").unwrap(),
            PropSequent::new(vec![p(), q()], vec![])
        );
        assert_eq!(
            parse_sequent("p & q => q & p").unwrap(),
            PropSequent::new(
                vec![PropFormula::and(p(), q())],
                vec![PropFormula::and(q(), p())]
            )
        );
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_formula("p -> ").unwrap_err();
        assert_eq!(err.column, 6);
        let err = parse_formula("p @ q").unwrap_err();
        assert_eq!(err.column, 3);
        let err = parse_sequent("p q => r").unwrap_err();
        assert_eq!(err.column, 3);
        let err = parse_sequent("p = q").unwrap_err();
        assert!(err.message.contains("expected '>'"));
    }

    #[test]
    fn false_is_a_keyword_not_an_atom() {
        assert_eq!(parse_formula("false").unwrap(), PropFormula::Bottom);
        assert_eq!(parse_formula("falsehood").unwrap(), PropFormula::atom("falsehood"));
    }
}
