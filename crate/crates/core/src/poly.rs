//! Exact polynomial arithmetic over the rationals and truncated exponential
//! generating functions whose coefficients are polynomials in x.
//!
//! [`QPoly`] is a dense univariate polynomial, [`TriPoly`] a sparse polynomial
//! in x, y, z, and [`TruncatedEgf`] represents Σ aₙ(x) tⁿ/n! for n ≤ N.
//! Nothing in this module touches floating point.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub fn rational(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Invalid(format!("`{s}` is not an exact rational"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(rational(s.trim().parse::<BigInt>().map_err(|_| bad())?)),
    }
}

/// Writes `c·name` the way polynomials are printed here: `x^2`, `-3*x`, `1/2*x^3`.
fn write_term(f: &mut fmt::Formatter<'_>, first: bool, c: &BigRational, mono: &str) -> fmt::Result {
    let negative = c.is_negative();
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
        (true, false) => {}
    }
    let a = c.abs();
    if mono.is_empty() {
        write!(f, "{a}")
    } else if a.is_one() {
        f.write_str(mono)
    } else {
        write!(f, "{a}*{mono}")
    }
}

fn power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{e}"),
    }
}

// ---------------------------------------------------------------------------

/// Dense polynomial in x with exact rational coefficients.
/// Invariant: no trailing zero coefficients (the zero polynomial is empty).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn x() -> Self {
        Self::monomial(BigRational::one(), 1)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        Self::from_coeffs(coeffs.into_iter().map(rational).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Integer coefficients, or `None` if some coefficient is fractional.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + c)
    }

    /// Σ cₖ xᵏ ↦ Σ cₖ x²ᵏ.
    pub fn compose_x_squared(&self) -> Self {
        let mut coeffs = vec![BigRational::zero(); 2 * self.coeffs.len()];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * k] = c.clone();
        }
        Self::from_coeffs(coeffs)
    }

    /// p(x) ↦ p(−x).
    pub fn compose_neg_x(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Substitutes a polynomial for x.
    pub fn compose(&self, inner: &QPoly) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(QPoly::zero(), |acc, c| &(&acc * inner) + &QPoly::constant(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rational(k))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(QPoly::one(), |acc, _| &acc * self)
    }

    pub fn display_in(&self, var: &str) -> String {
        struct D<'a>(&'a QPoly, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.0.is_zero() {
                    return f.write_str("0");
                }
                let mut first = true;
                for (k, c) in self.0.coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        write_term(f, first, c, &power(self.1, k as u32))?;
                        first = false;
                    }
                }
                Ok(())
            }
        }
        D(self, var).to_string()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("x"))
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        QPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident :: $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { $tr::$m(&self, &rhs) }
        }
    )*};
}
forward_owned!(QPoly, Add::add, Sub::sub, Mul::mul);

#[derive(Serialize, Deserialize)]
struct QPolyJson {
    var: String,
    coeffs: Vec<String>,
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QPolyJson {
            var: "x".into(),
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = QPolyJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}

// ---------------------------------------------------------------------------

/// Exponent triple (i, j, k) of xⁱ yʲ zᵏ.
pub type Exponents = [u32; 3];

/// Sparse polynomial in x, y, z with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TriPoly {
    terms: BTreeMap<Exponents, BigRational>,
}

impl TriPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term([0, 0, 0], BigRational::one())
    }

    pub fn var(axis: usize) -> Self {
        let mut e = [0; 3];
        e[axis] = 1;
        Self::term(e, BigRational::one())
    }

    pub fn term(e: Exponents, c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term(e, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, BigRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: Exponents) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a * c)))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(TriPoly::one(), |acc, _| &acc * self)
    }

    /// ∂/∂(axis).
    pub fn partial(&self, axis: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[axis] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[axis] -= 1;
            (e2, c * rational(e[axis]))
        }))
    }

    /// Exchanges the roles of y and z.
    pub fn swap_yz(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| ([e[0], e[2], e[1]], c.clone())))
    }

    /// Evaluates with univariate polynomials substituted for x, y, z.
    pub fn eval_univariate(&self, x: &QPoly, y: &QPoly, z: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (e, c) in &self.terms {
            let t = &(&x.pow(e[0]) * &y.pow(e[1])) * &z.pow(e[2]);
            out = &out + &t.scale(c);
        }
        out
    }
}

impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by_key(|e| (e[0] + e[1] + e[2], std::cmp::Reverse(**e)));
        for (n, e) in keys.into_iter().enumerate() {
            let mono: Vec<String> = ["x", "y", "z"]
                .iter()
                .zip(e)
                .map(|(v, &k)| power(v, k))
                .filter(|s| !s.is_empty())
                .collect();
            write_term(f, n == 0, &self.terms[e], &mono.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &TriPoly {
    type Output = TriPoly;

    fn add(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &TriPoly {
    type Output = TriPoly;

    fn sub(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &TriPoly {
    type Output = TriPoly;

    fn mul(self, rhs: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca * cb);
            }
        }
        out
    }
}

forward_owned!(TriPoly, Add::add, Sub::sub, Mul::mul);

#[derive(Serialize, Deserialize)]
struct TriTermJson {
    e: Exponents,
    c: String,
}

impl Serialize for TriPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(e, c)| TriTermJson {
                e: *e,
                c: c.to_string(),
            })
            .collect();
        terms.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TriPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<TriTermJson>::deserialize(d)?;
        let mut p = TriPoly::zero();
        for t in raw {
            p.add_term(t.e, parse_rational(&t.c).map_err(D::Error::custom)?);
        }
        Ok(p)
    }
}

// ---------------------------------------------------------------------------

pub const DEFAULT_ORDER: usize = 8;

/// Σ_{n ≤ N} aₙ(x) tⁿ/n!, truncated at a fixed order N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedEgf {
    coeffs: Vec<QPoly>,
}

/// Outcome of a coefficient-wise comparison of two series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgfComparison {
    pub equal: bool,
    /// `(n, left aₙ, right aₙ)` at the first differing coefficient.
    pub first_mismatch: Option<(usize, QPoly, QPoly)>,
}

impl TruncatedEgf {
    /// Series whose coefficients are `polys`; the order is `polys.len() - 1`.
    pub fn from_sequence(polys: Vec<QPoly>) -> Result<Self> {
        if polys.is_empty() {
            return Err(Error::Invalid(
                "a truncated series needs at least one coefficient".into(),
            ));
        }
        Ok(Self { coeffs: polys })
    }

    /// The series with a₀ = c and all other coefficients zero.
    pub fn constant(c: QPoly, order: usize) -> Self {
        let mut coeffs = vec![QPoly::zero(); order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// e^{t·c(x)}, i.e. aₙ = c(x)ⁿ.
    pub fn exp_linear(c: &QPoly, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut acc = QPoly::one();
        for _ in 0..=order {
            coeffs.push(acc.clone());
            acc = &acc * c;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &QPoly {
        &self.coeffs[n]
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Product of EGFs: cₙ = Σₖ C(n,k) aₖ b_{n−k}.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut coeffs = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut c = QPoly::zero();
            let mut binom = BigInt::one();
            for k in 0..=n {
                let term = (&self.coeffs[k] * &other.coeffs[n - k]).scale(&rational(binom.clone()));
                c = &c + &term;
                binom = binom * (n - k) / (k + 1);
            }
            coeffs.push(c);
        }
        Ok(Self { coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Multiplies every coefficient by a polynomial in x (a constant in t).
    pub fn scale_poly(&self, p: &QPoly) -> Self {
        self.map_coeffs(|a| a * p)
    }

    pub fn map_coeffs(&self, f: impl Fn(&QPoly) -> QPoly) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// F(x, t) ↦ F(x², t).
    pub fn compose_x_squared(&self) -> Self {
        self.map_coeffs(QPoly::compose_x_squared)
    }

    /// F(x, t) ↦ F(−x, t).
    pub fn compose_neg_x(&self) -> Self {
        self.map_coeffs(QPoly::compose_neg_x)
    }

    pub fn compare(&self, other: &Self) -> Result<EgfComparison> {
        self.check_order(other)?;
        let first_mismatch = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(n, (a, b))| (n, a.clone(), b.clone()));
        Ok(EgfComparison {
            equal: first_mismatch.is_none(),
            first_mismatch,
        })
    }
}

pub fn egf_from_sequence(polys: Vec<QPoly>) -> Result<TruncatedEgf> {
    TruncatedEgf::from_sequence(polys)
}

pub fn egf_mul(f: &TruncatedEgf, g: &TruncatedEgf) -> Result<TruncatedEgf> {
    f.mul(g)
}

pub fn egf_exp_linear(c: &QPoly, order: usize) -> TruncatedEgf {
    TruncatedEgf::exp_linear(c, order)
}

pub fn egf_equal(f: &TruncatedEgf, g: &TruncatedEgf) -> Result<EgfComparison> {
    f.compare(g)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_integers(c.iter().copied())
    }

    #[test]
    fn basic_ops() {
        assert_eq!(q(&[1, 2]).compose_x_squared(), q(&[1, 0, 2]));
        assert_eq!(&q(&[0, 1, 1, 1]) * &QPoly::one(), q(&[0, 1, 1, 1]));
        assert_eq!(q(&[0, 1, 1, 1]).to_string(), "x + x^2 + x^3");
        assert_eq!(q(&[-1, 0, 3]).to_string(), "-1 + 3*x^2");
        assert_eq!(QPoly::zero().to_string(), "0");
        assert_eq!(q(&[1, 1]).pow(3), q(&[1, 3, 3, 1]));
        assert_eq!(q(&[5, 1, 1, 1]).derivative(), q(&[1, 2, 3]));
        assert_eq!(q(&[0, 1, 2]).compose_neg_x(), q(&[0, -1, 2]));
        assert_eq!(q(&[1, 2, 3]).eval(&rational(2)), rational(17));
        assert_eq!(q(&[0, 0, 1]).compose(&q(&[1, 1])), q(&[1, 2, 1]));
        assert_eq!(&q(&[1, 2]) - &q(&[1, 2]), QPoly::zero());
    }

    #[test]
    fn tripoly_eval_p2() {
        // xy + xz + x²
        let p2 = TriPoly::from_terms([
            ([1, 1, 0], rational(1)),
            ([1, 0, 1], rational(1)),
            ([2, 0, 0], rational(1)),
        ]);
        let x = QPoly::x();
        assert_eq!(p2.eval_univariate(&x, &x, &QPoly::one()), q(&[0, 1, 2]));
        assert_eq!(p2.swap_yz(), p2);
        assert_eq!(
            p2.partial(0),
            TriPoly::from_terms([
                ([0, 1, 0], rational(1)),
                ([0, 0, 1], rational(1)),
                ([1, 0, 0], rational(2)),
            ])
        );
        assert_eq!(p2.to_string(), "x^2 + x*y + x*z");
    }

    #[test]
    fn json_schema() {
        let p = QPoly::from_coeffs(vec![rational(1), BigRational::new(1.into(), 2.into())]);
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v, serde_json::json!({"var": "x", "coeffs": ["1", "1/2"]}));
        let back: QPoly = serde_json::from_value(v).unwrap();
        assert_eq!(back, p);

        let t = TriPoly::term([1, 2, 0], rational(4));
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v, serde_json::json!([{"e": [1, 2, 0], "c": "4"}]));
        assert_eq!(serde_json::from_value::<TriPoly>(v).unwrap(), t);
        assert!(serde_json::from_value::<QPoly>(serde_json::json!({"var":"x","coeffs":["1/0"]})).is_err());
    }

    #[test]
    fn egf_basics() {
        let one = TruncatedEgf::constant(QPoly::one(), 0);
        assert_eq!(one.order(), 0);
        let t = egf_from_sequence(vec![QPoly::one(), QPoly::x(), q(&[0, 1, 1, 1])]).unwrap();
        let unit = TruncatedEgf::constant(QPoly::one(), 2);
        assert_eq!(egf_mul(&t, &unit).unwrap(), t);
        assert_eq!(egf_mul(&t, &t).unwrap().coeff(0), &QPoly::one());
        assert!(egf_from_sequence(vec![]).is_err());
        assert!(matches!(
            egf_mul(&t, &one),
            Err(Error::OrderMismatch { left: 2, right: 0 })
        ));

        let e = egf_exp_linear(&QPoly::zero(), 4);
        assert_eq!(e, TruncatedEgf::constant(QPoly::one(), 4));
        let e = egf_exp_linear(&q(&[-2, 2]), 3);
        assert_eq!(e.coeff(1), &q(&[-2, 2]));
        let e = egf_exp_linear(&q(&[-1, 0, 1]), 3);
        assert_eq!(e.coeff(2), &q(&[-1, 0, 1]).pow(2));

        let cmp = egf_equal(&t, &t).unwrap();
        assert!(cmp.equal);
        let other = egf_from_sequence(vec![QPoly::one(), QPoly::x(), q(&[0, 1])]).unwrap();
        let cmp = egf_equal(&t, &other).unwrap();
        assert!(!cmp.equal);
        assert_eq!(cmp.first_mismatch.unwrap().0, 2);
    }

    #[test]
    fn egf_mul_flag_example() {
        // T up to order 2, M(x²) up to order 2: M₀=1, M₁=1, M₂=1+2x.
        let t = egf_from_sequence(vec![QPoly::one(), QPoly::x(), q(&[0, 1, 1, 1])]).unwrap();
        let m = egf_from_sequence(vec![QPoly::one(), QPoly::one(), q(&[1, 2])]).unwrap();
        let f = egf_mul(&t, &m.compose_x_squared()).unwrap();
        // F₂ = (1+x)²(1+x) = 1+3x+3x²+x³
        assert_eq!(f.coeff(2), &q(&[1, 3, 3, 1]));
    }

    /// Ordinary product of Σ aₙ/n! tⁿ and Σ bₙ/n! tⁿ, rescaled by n!.
    fn egf_mul_via_ordinary(a: &[QPoly], b: &[QPoly]) -> Vec<QPoly> {
        let fact = |k: usize| rational((1..=k as u64).product::<u64>());
        (0..a.len())
            .map(|n| {
                let mut c = QPoly::zero();
                for k in 0..=n {
                    let w = BigRational::one() / (fact(k) * fact(n - k));
                    c = &c + &(&a[k] * &b[n - k]).scale(&w);
                }
                c.scale(&fact(n))
            })
            .collect()
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec(-4i64..5, 0..4).prop_map(|c| q(&c))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &QPoly::zero(), a.clone());
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
        }

        #[test]
        fn egf_mul_matches_ordinary_convolution(
            a in prop::collection::vec(small_poly(), 5),
            b in prop::collection::vec(small_poly(), 5),
        ) {
            let fa = egf_from_sequence(a.clone()).unwrap();
            let fb = egf_from_sequence(b.clone()).unwrap();
            let got = egf_mul(&fa, &fb).unwrap();
            prop_assert_eq!(got.coeffs().to_vec(), egf_mul_via_ordinary(&a, &b));
        }

        #[test]
        fn tripoly_product_rule(
            a in prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..4),
            b in prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..4),
        ) {
            let mk = |v: &Vec<((u32, u32, u32), i64)>| {
                TriPoly::from_terms(v.iter().map(|&((i, j, k), c)| ([i, j, k], rational(c))))
            };
            let (p, r) = (mk(&a), mk(&b));
            for axis in 0..3 {
                let lhs = (&p * &r).partial(axis);
                let rhs = &(&p.partial(axis) * &r) + &(&p * &r.partial(axis));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
