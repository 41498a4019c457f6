//! Commutative context-free grammars and their formal derivative.
//!
//! A [`Grammar`] maps letters to polynomials; the derivative `D` it induces
//! acts on a letter by substitution, on monomials by the Leibniz rule and on
//! sums by linearity. Coefficients are arbitrary-precision integers.

mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use parse::{parse_grammar, parse_polynomial};

/// A letter of a grammar alphabet; matches `[A-Za-z][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Letter(String);

impl Letter {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        let mut chars = name.chars();
        let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if ok {
            Ok(Self(name))
        } else {
            Err(Error::InvalidLetter(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for Letter {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        Letter::new(s)
    }
}

impl From<Letter> for String {
    fn from(l: Letter) -> String {
        l.0
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Shorthand for tests and fixed grammars; panics on an invalid name.
pub fn letter(name: &str) -> Letter {
    Letter::new(name).expect("invalid letter name")
}

/// A product of letters with positive exponents. The empty monomial is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(BTreeMap<Letter, u32>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn from_powers<I: IntoIterator<Item = (Letter, u32)>>(powers: I) -> Self {
        let mut m = Self::one();
        for (l, e) in powers {
            if e > 0 {
                *m.0.entry(l).or_insert(0) += e;
            }
        }
        m
    }

    pub fn exponent(&self, l: &Letter) -> u32 {
        self.0.get(l).copied().unwrap_or(0)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&Letter, u32)> {
        self.0.iter().map(|(l, &e)| (l, e))
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (l, &e) in &other.0 {
            *out.0.entry(l.clone()).or_insert(0) += e;
        }
        out
    }

    /// Divides out one copy of `l`; the caller guarantees `l` divides `self`.
    fn without_one(&self, l: &Letter) -> Monomial {
        let mut out = self.clone();
        match out.0.get_mut(l) {
            Some(e) if *e > 1 => *e -= 1,
            Some(_) => {
                out.0.remove(l);
            }
            None => unreachable!("letter does not divide monomial"),
        }
        out
    }

    fn without_letters(&self, letters: &[Letter]) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter(|(l, _)| !letters.contains(l))
                .map(|(l, &e)| (l.clone(), e))
                .collect(),
        )
    }
}

/// Canonical order: total degree ascending; within a degree, the monomial
/// with the larger exponent at the alphabetically first differing letter
/// comes first (so `x` precedes `y`, and `x^2*y` precedes `x*y^2`).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let letters: BTreeSet<&Letter> = self.0.keys().chain(other.0.keys()).collect();
            for l in letters {
                match other.exponent(l).cmp(&self.exponent(l)) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, (l, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{l}")?;
            } else {
                write!(f, "{l}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Integer-coefficient polynomial in commuting letters, kept canonical: no
/// zero coefficients, terms ordered by [`Monomial`]'s order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GrammarPolynomial(BTreeMap<Monomial, BigInt>);

impl GrammarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn letter(l: &Letter) -> Self {
        Self::term(1, Monomial::from_powers([(l.clone(), 1)]))
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.0.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.0.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.0.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_terms(self.0.iter().map(|(m, a)| (m.clone(), a * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }
}

impl fmt::Display for GrammarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c.is_negative();
            match (i == 0, neg) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &GrammarPolynomial {
    type Output = GrammarPolynomial;

    fn add(self, rhs: &GrammarPolynomial) -> GrammarPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &GrammarPolynomial {
    type Output = GrammarPolynomial;

    fn sub(self, rhs: &GrammarPolynomial) -> GrammarPolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.0 {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &GrammarPolynomial {
    type Output = GrammarPolynomial;

    fn mul(self, rhs: &GrammarPolynomial) -> GrammarPolynomial {
        let mut out = GrammarPolynomial::zero();
        for (a, ca) in &self.0 {
            for (b, cb) in &rhs.0 {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

impl Neg for &GrammarPolynomial {
    type Output = GrammarPolynomial;

    fn neg(self) -> GrammarPolynomial {
        self.scale(&BigInt::from(-1))
    }
}

impl Add for GrammarPolynomial {
    type Output = GrammarPolynomial;
    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl Sub for GrammarPolynomial {
    type Output = GrammarPolynomial;
    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl Mul for GrammarPolynomial {
    type Output = GrammarPolynomial;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    coeff: String,
    powers: BTreeMap<&'a str, u32>,
}

impl Serialize for GrammarPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .0
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                powers: m.powers().map(|(l, e)| (l.as_str(), e)).collect(),
            })
            .collect();
        terms.serialize(s)
    }
}

// ---------------------------------------------------------------------------

/// Substitution rules over an alphabet. Letters of the alphabet without a
/// rule have derivative 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    alphabet: BTreeSet<Letter>,
    rules: BTreeMap<Letter, GrammarPolynomial>,
}

impl Grammar {
    /// Builds a grammar whose alphabet is `extra` plus every rule head.
    /// Every letter used in a rule body must belong to that alphabet.
    pub fn new<I>(rules: I, extra: impl IntoIterator<Item = Letter>) -> Result<Self>
    where
        I: IntoIterator<Item = (Letter, GrammarPolynomial)>,
    {
        let rules: BTreeMap<_, _> = rules.into_iter().collect();
        let mut alphabet: BTreeSet<Letter> = extra.into_iter().collect();
        alphabet.extend(rules.keys().cloned());
        for body in rules.values() {
            if let Some(l) = body.letters().into_iter().find(|l| !alphabet.contains(l)) {
                return Err(Error::AlphabetMismatch(l.to_string()));
            }
        }
        Ok(Self { alphabet, rules })
    }

    pub fn alphabet(&self) -> &BTreeSet<Letter> {
        &self.alphabet
    }

    pub fn rule(&self, l: &Letter) -> Option<&GrammarPolynomial> {
        self.rules.get(l)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Letter, &GrammarPolynomial)> {
        self.rules.iter()
    }

    fn check(&self, p: &GrammarPolynomial) -> Result<()> {
        match p.letters().into_iter().find(|l| !self.alphabet.contains(l)) {
            Some(l) => Err(Error::AlphabetMismatch(l.to_string())),
            None => Ok(()),
        }
    }

    /// D(p): for each term c·m, adds Σ_{ℓ | m} c·e_ℓ·(m/ℓ)·G(ℓ).
    pub fn derive(&self, p: &GrammarPolynomial) -> Result<GrammarPolynomial> {
        self.check(p)?;
        Ok(self.derive_unchecked(p))
    }

    fn derive_unchecked(&self, p: &GrammarPolynomial) -> GrammarPolynomial {
        let mut out = GrammarPolynomial::zero();
        for (m, c) in p.terms() {
            for (l, e) in m.powers() {
                let Some(rule) = self.rules.get(l) else { continue };
                let rest = m.without_one(l);
                let factor = c * BigInt::from(e);
                for (rm, rc) in rule.terms() {
                    out.add_term(rest.mul(rm), &factor * rc);
                }
            }
        }
        out
    }

    /// Dⁿ(start); D⁰ is the identity.
    pub fn derive_n(&self, start: &GrammarPolynomial, n: usize) -> Result<GrammarPolynomial> {
        self.check(start)?;
        Ok((0..n).fold(start.clone(), |p, _| self.derive_unchecked(&p)))
    }

    /// D⁰(start), D¹(start), …, Dⁿ(start).
    pub fn derive_sequence(&self, start: &GrammarPolynomial, n: usize) -> Result<Vec<GrammarPolynomial>> {
        self.check(start)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(start.clone());
        for k in 0..n {
            let next = self.derive_unchecked(&out[k]);
            out.push(next);
        }
        Ok(out)
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alphabet.iter().any(|l| !self.rules.contains_key(l)) {
            let names: Vec<_> = self.alphabet.iter().map(Letter::as_str).collect();
            writeln!(f, "alphabet: {}", names.join(", "))?;
        }
        for (l, body) in &self.rules {
            writeln!(f, "{l} -> {body}")?;
        }
        Ok(())
    }
}

pub fn derive(p: &GrammarPolynomial, g: &Grammar) -> Result<GrammarPolynomial> {
    g.derive(p)
}

pub fn derive_n(start: &GrammarPolynomial, g: &Grammar, n: usize) -> Result<GrammarPolynomial> {
    g.derive_n(start, n)
}

/// Simultaneous substitution of polynomials for letters; unbound letters stay.
pub fn substitute(p: &GrammarPolynomial, bindings: &BTreeMap<Letter, GrammarPolynomial>) -> GrammarPolynomial {
    let mut powers: BTreeMap<(Letter, u32), GrammarPolynomial> = BTreeMap::new();
    let mut out = GrammarPolynomial::zero();
    for (m, c) in p.terms() {
        let mut acc = GrammarPolynomial::constant(c.clone());
        let mut kept = Vec::new();
        for (l, e) in m.powers() {
            match bindings.get(l) {
                Some(b) => {
                    let pw = powers.entry((l.clone(), e)).or_insert_with(|| b.pow(e)).clone();
                    acc = &acc * &pw;
                }
                None => kept.push((l.clone(), e)),
            }
        }
        let kept = GrammarPolynomial::term(1, Monomial::from_powers(kept));
        out = &out + &(&acc * &kept);
    }
    out
}

/// Groups the terms of `p` by the exponents of `axes`, summing coefficients.
/// Within a group all terms must share the same residual monomial (the part
/// not on the axes); anything else means the extraction is ill-posed.
pub fn coefficient_profile(p: &GrammarPolynomial, axes: &[Letter]) -> Result<BTreeMap<Vec<u32>, BigInt>> {
    let mut groups: BTreeMap<Vec<u32>, (Monomial, BigInt)> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key: Vec<u32> = axes.iter().map(|a| m.exponent(a)).collect();
        let residual = m.without_letters(axes);
        match groups.get_mut(&key) {
            Some((r, total)) => {
                if *r != residual {
                    return Err(Error::NonuniformProfile { group: key });
                }
                *total += c;
            }
            None => {
                groups.insert(key, (residual, c.clone()));
            }
        }
    }
    Ok(groups
        .into_iter()
        .filter(|(_, (_, c))| !c.is_zero())
        .map(|(k, (_, c))| (k, c))
        .collect())
}

/// Grammars used throughout the library.
pub mod known {
    use super::*;

    fn build(text: &str) -> Grammar {
        parse_grammar(text).expect("built-in grammar parses")
    }

    /// {x → xyz, y → yz², z → y²z}: flag descents, ascent-plateaus.
    pub fn flag() -> Grammar {
        build("x -> x*y*z; y -> y*z^2; z -> y^2*z")
    }

    /// {x → xzq, y → yzp, z → xyz, p → xyz, q → xyz}: (lap, dasc, dp).
    pub fn lap_dasc_dp() -> Grammar {
        build("x -> x*z*q; y -> y*z*p; z -> x*y*z; p -> x*y*z; q -> x*y*z")
    }

    /// {u → uvw, v → 2uw, w → uw}: the γ-coefficients.
    pub fn gamma() -> Grammar {
        build("u -> u*v*w; v -> 2*u*w; w -> u*w")
    }
}
