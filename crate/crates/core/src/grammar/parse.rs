//! Rule-file parser.
//!
//! ```text
//! # comments run to the end of the line
//! alphabet: x, y, z, c      # optional; heads are always in the alphabet
//! x -> x*y*z; y -> y*z^2
//! z -> y^2*z + 2*(x - c)
//! ```
//!
//! Rules are separated by newlines or `;`. Bodies use integer coefficients,
//! `+`, `-`, `*`, `^` with a non-negative integer exponent, and parentheses.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{Grammar, GrammarPolynomial, Letter, Monomial};
use crate::error::{Error, Position, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Star,
    Caret,
    Plus,
    Minus,
    LParen,
    RParen,
    Arrow,
    Colon,
    Comma,
    Sep,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Sep => "end of rule".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax(pos: Position, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, Position)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Position { line, column };
        let mut take = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        match c {
            '\n' | ';' => {
                take(&mut chars);
                out.push((Tok::Sep, pos));
            }
            c if c.is_whitespace() => {
                take(&mut chars);
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    take(&mut chars);
                }
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while chars.peek().is_some_and(char::is_ascii_digit) {
                    s.push(take(&mut chars));
                }
                if matches!(chars.peek(), Some('.') | Some('/')) {
                    return Err(syntax(pos, "coefficients must be integers"));
                }
                out.push((Tok::Int(s.parse().unwrap()), pos));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while chars.peek().is_some_and(|&c| c.is_ascii_alphanumeric() || c == '_') {
                    s.push(take(&mut chars));
                }
                out.push((Tok::Ident(s), pos));
            }
            '-' => {
                take(&mut chars);
                if chars.peek() == Some(&'>') {
                    take(&mut chars);
                    out.push((Tok::Arrow, pos));
                } else {
                    out.push((Tok::Minus, pos));
                }
            }
            '/' | '.' => return Err(syntax(pos, "coefficients must be integers")),
            _ => {
                let tok = match c {
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '+' => Tok::Plus,
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ':' => Tok::Colon,
                    ',' => Tok::Comma,
                    other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
                };
                take(&mut chars);
                out.push((tok, pos));
            }
        }
    }
    out.push((Tok::Eof, Position { line, column }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Position)>,
    at: usize,
    /// Every letter referenced inside an expression, with where it appeared.
    refs: Vec<(Letter, Position)>,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Self {
            toks: tokenize(text)?,
            at: 0,
            refs: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Position {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Position) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Position> {
        let (t, pos) = self.bump();
        if t == want {
            Ok(pos)
        } else {
            Err(syntax(
                pos,
                format!("expected {}, found {}", want.describe(), t.describe()),
            ))
        }
    }

    fn ident(&mut self) -> Result<(Letter, Position)> {
        match self.bump() {
            (Tok::Ident(s), pos) => Ok((Letter::new(s).map_err(|e| syntax(pos, e.to_string()))?, pos)),
            (t, pos) => Err(syntax(pos, format!("expected a letter, found {}", t.describe()))),
        }
    }

    fn expr(&mut self) -> Result<GrammarPolynomial> {
        let mut negate = false;
        match self.peek() {
            Tok::Minus => {
                self.bump();
                negate = true;
            }
            Tok::Plus => {
                self.bump();
            }
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GrammarPolynomial> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GrammarPolynomial> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.bump() {
            (Tok::Int(e), pos) => {
                let e = u32::try_from(e).map_err(|_| syntax(pos, "exponent too large"))?;
                Ok(base.pow(e))
            }
            (t, pos) => Err(syntax(
                pos,
                format!("expected a non-negative integer exponent, found {}", t.describe()),
            )),
        }
    }

    fn atom(&mut self) -> Result<GrammarPolynomial> {
        match self.bump() {
            (Tok::Int(c), _) => Ok(GrammarPolynomial::constant(c)),
            (Tok::Ident(s), pos) => {
                let l = Letter::new(s).map_err(|e| syntax(pos, e.to_string()))?;
                self.refs.push((l.clone(), pos));
                Ok(GrammarPolynomial::term(1, Monomial::from_powers([(l, 1)])))
            }
            (Tok::LParen, _) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            (t, pos) => Err(syntax(pos, format!("expected a term, found {}", t.describe()))),
        }
    }
}

/// Parses a rule file into a [`Grammar`].
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut p = Parser::new(text)?;
    let mut declared: BTreeSet<Letter> = BTreeSet::new();
    let mut rules: BTreeMap<Letter, GrammarPolynomial> = BTreeMap::new();
    loop {
        match p.peek() {
            Tok::Eof => break,
            Tok::Sep => {
                p.bump();
                continue;
            }
            Tok::Ident(s) if s == "alphabet" && *p.peek_at(1) == Tok::Colon => {
                p.bump();
                p.bump();
                loop {
                    let (l, _) = p.ident()?;
                    declared.insert(l);
                    if *p.peek() != Tok::Comma {
                        break;
                    }
                    p.bump();
                }
            }
            _ => {
                let (head, pos) = p.ident()?;
                p.expect(Tok::Arrow)?;
                let body = p.expr()?;
                if rules.insert(head.clone(), body).is_some() {
                    return Err(syntax(pos, format!("duplicate rule for `{head}`")));
                }
            }
        }
        match p.peek() {
            Tok::Sep | Tok::Eof => {}
            t => return Err(syntax(p.pos(), format!("unexpected {}", t.describe()))),
        }
    }
    declared.extend(rules.keys().cloned());
    if let Some((l, pos)) = p.refs.iter().find(|(l, _)| !declared.contains(l)) {
        return Err(Error::UnknownLetter {
            letter: l.to_string(),
            line: pos.line,
            column: pos.column,
        });
    }
    Grammar::new(rules, declared)
}

/// Parses a single polynomial expression such as `x*y^2 - 3*(z + 1)`.
pub fn parse_polynomial(text: &str) -> Result<GrammarPolynomial> {
    let mut p = Parser::new(text)?;
    let out = p.expr()?;
    match p.peek() {
        Tok::Eof => Ok(out),
        t => Err(syntax(p.pos(), format!("unexpected {}", t.describe()))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::letter;

    #[test]
    fn known_grammars_parse() {
        let g = parse_grammar("x -> x*y*z; y -> y*z^2; z -> y^2*z").unwrap();
        assert_eq!(g.rule(&letter("y")).unwrap(), &parse_polynomial("y*z^2").unwrap());
        assert_eq!(g.alphabet().len(), 3);

        let g = parse_grammar("u -> u*v*w; v -> 2*u*w; w -> u*w").unwrap();
        assert_eq!(g.rule(&letter("v")).unwrap().to_string(), "2*u*w");

        let g = parse_grammar("x -> x*z*q; y -> y*z*p; z -> x*y*z; p -> x*y*z; q -> x*y*z").unwrap();
        assert_eq!(g.alphabet().len(), 5);
    }

    #[test]
    fn multiline_with_comments() {
        let text = "# flag grammar\nx -> x*y*z   # first\n\n  y -> y*z^2\nz -> y^2*z\n";
        let g = parse_grammar(text).unwrap();
        assert_eq!(g.rules().count(), 3);
        let again = parse_grammar(&g.to_string()).unwrap();
        assert_eq!(again, g);
    }

    #[test]
    fn expressions() {
        let p = parse_polynomial("-(x + 1)^2 + 2*x").unwrap();
        assert_eq!(p.to_string(), "-1 - x^2");
        assert_eq!(parse_polynomial("x^0").unwrap(), GrammarPolynomial::one());
        assert_eq!(parse_polynomial("  7 ").unwrap(), GrammarPolynomial::constant(7));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_grammar("x -> x*y*z\ny -> y*/z") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
        match parse_grammar("x -> x +") {
            Err(Error::Syntax { line: 1, column: 9, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_grammar("x -> 1/2*x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_grammar("x -> 1.5*x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_grammar("x -> x^y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_grammar("x x"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_grammar("x -> y\nx -> 1"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(parse_grammar("x -> $"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("x y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_polynomial("(x"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_letters() {
        match parse_grammar("x -> x*y") {
            Err(Error::UnknownLetter { letter, line, column }) => {
                assert_eq!((letter.as_str(), line, column), ("y", 1, 8));
            }
            other => panic!("{other:?}"),
        }
        let g = parse_grammar("alphabet: y\nx -> x*y").unwrap();
        assert!(g.rule(&letter("y")).is_none());
        assert!(g.alphabet().contains(&letter("y")));
    }
}
