//! The named polynomial families A, B, F, M, N, C, T, G and P, computed from
//! recurrences, closed forms or grammar derivations (never by enumeration).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grammar::{coefficient_profile, known, letter, GrammarPolynomial};
use crate::poly::{rational, QPoly, TriPoly};
use crate::tables::{self, TableCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Eulerian polynomials, Σ x^des over permutations.
    A,
    /// Type-B Eulerian polynomials, Σ x^desB over signed permutations.
    B,
    /// Flag descent polynomials, Σ x^fdes over signed permutations.
    F,
    /// Σ x^ap over Stirling permutations.
    M,
    /// Σ x^lap over Stirling permutations.
    N,
    /// Σ x^asc over Stirling permutations.
    C,
    /// Σ x^fap over Stirling permutations.
    T,
    /// Σ γ x^i y^j.
    G,
    /// Σ x^lap y^dasc z^dp over Stirling permutations.
    P,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::A,
        Family::B,
        Family::F,
        Family::M,
        Family::N,
        Family::C,
        Family::T,
        Family::G,
        Family::P,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::F => "F",
            Family::M => "M",
            Family::N => "N",
            Family::C => "C",
            Family::T => "T",
            Family::G => "G",
            Family::P => "P",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| {
            Error::Invalid(format!(
                "unknown polynomial family `{s}` (expected one of A B F M N C T G P)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FamilyPolynomial {
    Univariate(QPoly),
    Multivariate(TriPoly),
}

impl fmt::Display for FamilyPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyPolynomial::Univariate(p) => p.fmt(f),
            FamilyPolynomial::Multivariate(p) => p.fmt(f),
        }
    }
}

/// Reads Σ c·x^k off a grammar polynomial whose `axis` exponent is
/// `offset + step·k`.
fn read_axis(p: &GrammarPolynomial, axis: &str, offset: u32, step: u32) -> Result<QPoly> {
    let profile = coefficient_profile(p, &[letter(axis)])?;
    let mut coeffs: Vec<BigInt> = Vec::new();
    for (e, c) in profile {
        let e = e[0];
        if e < offset || !(e - offset).is_multiple_of(step) {
            return Err(Error::Invalid(format!("unexpected exponent {axis}^{e}")));
        }
        let k = ((e - offset) / step) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::default());
        }
        coeffs[k] = c;
    }
    Ok(QPoly::from_integers(coeffs))
}

/// M_n read from D^n(y) under the flag grammar.
pub fn m_poly(n: usize) -> Result<QPoly> {
    let d = known::flag().derive_n(&GrammarPolynomial::letter(&letter("y")), n)?;
    read_axis(&d, "y", 1, 2)
}

/// N_n read from D^n(z) under the flag grammar.
pub fn n_poly_grammar(n: usize) -> Result<QPoly> {
    let d = known::flag().derive_n(&GrammarPolynomial::letter(&letter("z")), n)?;
    read_axis(&d, "y", 0, 2)
}

/// F_n = (1 + x)^n A_n(x).
pub fn f_poly(n: usize) -> QPoly {
    &QPoly::from_integers([1, 1]).pow(n as u32) * &tables::eulerian_poly(n)
}

pub fn family_polynomial(family: Family, n: usize) -> Result<FamilyPolynomial> {
    family_polynomial_cached(family, n, None)
}

/// As [`family_polynomial`], memoizing the underlying coefficient tables in
/// `cache` when one is given.
pub fn family_polynomial_cached(family: Family, n: usize, cache: Option<&TableCache>) -> Result<FamilyPolynomial> {
    use FamilyPolynomial::*;
    let table = |name: &str, build: fn(usize) -> tables::CoefficientTable| match cache {
        Some(c) => c.load_or_build(name, n, build),
        None => Ok(build(n)),
    };
    Ok(match family {
        Family::A => Univariate(table("eulerian", tables::eulerian_table)?.polynomial(n)),
        Family::B => Univariate(table("type-b-eulerian", tables::type_b_eulerian_table)?.polynomial(n)),
        Family::F => Univariate(f_poly(n)),
        Family::M => Univariate(m_poly(n)?),
        Family::N => Univariate(tables::cn_nn_tables(n).1.swap_remove(n)),
        Family::C => Univariate(tables::cn_nn_tables(n).0.swap_remove(n)),
        Family::T => Univariate(table("T", tables::t_table)?.polynomial(n)),
        Family::G => Multivariate(table("gamma", tables::gamma_table)?.tri_poly(n)),
        Family::P => Multivariate(table("P", tables::p_table)?.tri_poly(n)),
    })
}

/// Σ_k C(n,k) a_k b_{n−k}.
pub fn binomial_convolution(n: usize, a: impl Fn(usize) -> QPoly, b: impl Fn(usize) -> QPoly) -> QPoly {
    let mut out = QPoly::zero();
    for k in 0..=n {
        let c = rational(num_integer::binomial(BigInt::from(n), BigInt::from(k)));
        out = &out + &(&a(k) * &b(n - k)).scale(&c);
    }
    out
}
