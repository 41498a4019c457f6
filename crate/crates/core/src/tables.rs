//! Coefficient families computed from recurrences and closed forms.
//!
//! Each table stores entries keyed by an index tuple whose first component is
//! n; entries outside the stored range read as zero.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{rational, QPoly, TriPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientTable {
    family: String,
    /// Number of indices after n.
    arity: usize,
    bound: usize,
    entries: BTreeMap<Vec<usize>, BigInt>,
}

impl CoefficientTable {
    fn new(family: &str, arity: usize, bound: usize) -> Self {
        Self {
            family: family.to_string(),
            arity,
            bound,
            entries: BTreeMap::new(),
        }
    }

    fn set(&mut self, idx: Vec<usize>, val: BigInt) {
        debug_assert_eq!(idx.len(), self.arity + 1);
        if !val.is_zero() {
            self.entries.insert(idx, val);
        }
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &BigInt)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn get(&self, idx: &[usize]) -> BigInt {
        self.entries.get(idx).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Signed lookup; any negative index reads as zero.
    fn at(&self, idx: &[i64]) -> BigInt {
        if idx.iter().any(|&i| i < 0) {
            return BigInt::zero();
        }
        let idx: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
        self.get(&idx)
    }

    fn row(&self, n: usize) -> impl Iterator<Item = (&[usize], &BigInt)> {
        self.entries.range(vec![n]..vec![n + 1]).map(|(k, v)| (&k[1..], v))
    }

    /// Σₖ T(n, k) xᵏ for a single-index family.
    pub fn polynomial(&self, n: usize) -> QPoly {
        assert_eq!(self.arity, 1, "{} is not a univariate family", self.family);
        let mut coeffs = Vec::new();
        for (k, v) in self.row(n) {
            if coeffs.len() <= k[0] {
                coeffs.resize(k[0] + 1, BigInt::zero());
            }
            coeffs[k[0]] = v.clone();
        }
        QPoly::from_integers(coeffs)
    }

    /// Row n as a polynomial in x, y, z (two-index families use x, y).
    pub fn tri_poly(&self, n: usize) -> TriPoly {
        assert!(
            self.arity == 2 || self.arity == 3,
            "{} is not multivariate",
            self.family
        );
        TriPoly::from_terms(self.row(n).map(|(k, v)| {
            let mut e = [0u32; 3];
            for (slot, &i) in e.iter_mut().zip(k) {
                *slot = i as u32;
            }
            (e, rational(v.clone()))
        }))
    }
}

// ---------------------------------------------------------------------------

/// ⟨n,k⟩ for n ≤ n_max via ⟨n+1,k⟩ = (k+1)⟨n,k⟩ + (n+1−k)⟨n,k−1⟩, ⟨0,0⟩ = 1.
pub fn eulerian_table(n_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::new("eulerian", 1, n_max);
    t.set(vec![0, 0], BigInt::one());
    for n in 0..n_max {
        let (ni, nn) = (n as i64, n + 1);
        for k in 0..nn {
            let ki = k as i64;
            let v = t.at(&[ni, ki]) * (ki + 1) + t.at(&[ni, ki - 1]) * (ni + 1 - ki);
            t.set(vec![nn, k], v);
        }
    }
    t
}

pub fn eulerian(n: usize, k: usize) -> BigInt {
    eulerian_table(n).get(&[n, k])
}

/// A_n(x) = Σₖ ⟨n,k⟩ xᵏ.
pub fn eulerian_poly(n: usize) -> QPoly {
    eulerian_table(n).polynomial(n)
}

/// Type-B Eulerian numbers B(n,k) = (2k+1)B(n−1,k) + (2n−2k+1)B(n−1,k−1).
pub fn type_b_eulerian_table(n_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::new("type-b-eulerian", 1, n_max);
    t.set(vec![0, 0], BigInt::one());
    for n in 1..=n_max {
        let ni = n as i64;
        for k in 0..=n {
            let ki = k as i64;
            let v = t.at(&[ni - 1, ki]) * (2 * ki + 1) + t.at(&[ni - 1, ki - 1]) * (2 * ni - 2 * ki + 1);
            t.set(vec![n, k], v);
        }
    }
    t
}

/// Stirling numbers of the second kind via S(n,k) = k·S(n−1,k) + S(n−1,k−1).
pub fn stirling2_table(n_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::new("stirling2", 1, n_max);
    t.set(vec![0, 0], BigInt::one());
    for n in 1..=n_max {
        let ni = n as i64;
        for k in 1..=n {
            let ki = k as i64;
            let v = t.at(&[ni - 1, ki]) * ki + t.at(&[ni - 1, ki - 1]);
            t.set(vec![n, k], v);
        }
    }
    t
}

pub fn stirling2(n: usize, k: usize) -> BigInt {
    stirling2_table(n).get(&[n, k])
}

/// Flag ascent-plateau numbers:
/// T(n+1,k) = k·T(n,k) + T(n,k−1) + (2n−k+2)·T(n,k−2), T(0,0) = 1.
pub fn t_table(n_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::new("T", 1, n_max);
    t.set(vec![0, 0], BigInt::one());
    for n in 0..n_max {
        let ni = n as i64;
        for k in 0..=2 * n + 1 {
            let ki = k as i64;
            let v = t.at(&[ni, ki]) * ki + t.at(&[ni, ki - 1]) + t.at(&[ni, ki - 2]) * (2 * ni - ki + 2);
            t.set(vec![n + 1, k], v);
        }
    }
    t
}

/// P_n(i,j,k), the joint counts of (lap, dasc, dp), from the five-term
/// recurrence
/// P_{n+1}(i,j,k) = i·P_n(i,j−1,k) + i·P_n(i,j,k−1) + (j+1)·P_n(i−1,j+1,k)
///               + (k+1)·P_n(i−1,j,k+1) + (2n+3−2i−j−k)·P_n(i−1,j,k).
pub fn p_table(n_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::new("P", 3, n_max);
    t.set(vec![0, 0, 0, 0], BigInt::one());
    for n in 0..n_max {
        let ni = n as i64;
        for i in 0..=n + 1 {
            for j in 0..=n {
                for k in 0..=n {
                    let (ii, ji, ki) = (i as i64, j as i64, k as i64);
                    let v = t.at(&[ni, ii, ji - 1, ki]) * ii
                        + t.at(&[ni, ii, ji, ki - 1]) * ii
                        + t.at(&[ni, ii - 1, ji + 1, ki]) * (ji + 1)
                        + t.at(&[ni, ii - 1, ji, ki + 1]) * (ki + 1)
                        + t.at(&[ni, ii - 1, ji, ki]) * (2 * ni + 3 - 2 * ii - ji - ki);
                    t.set(vec![n + 1, i, j, k], v);
                }
            }
        }
    }
    t
}

/// P_0..P_{n_max} from the differential form
/// P_{n+1} = (2n+1)x·P + (xy + xz − 2x²)∂ₓP + x(1−y)∂ᵧP + x(1−z)∂_zP.
pub fn p_polys_differential(n_max: usize) -> Vec<TriPoly> {
    let x = TriPoly::var(0);
    let y = TriPoly::var(1);
    let z = TriPoly::var(2);
    let one = TriPoly::one();
    let cx = &(&(&x * &y) + &(&x * &z)) - &(&x * &x).scale(&rational(2));
    let cy = &x * &(&one - &y);
    let cz = &x * &(&one - &z);
    let mut out = vec![TriPoly::one()];
    for n in 0..n_max {
        let p = &out[n];
        let next = &(&(&(&x * p).scale(&rational(2 * n + 1)) + &(&cx * &p.partial(0))) + &(&cy * &p.partial(1)))
            + &(&cz * &p.partial(2));
        out.push(next);
    }
    out
}

/// γ_{n,i,j} from
/// γ_{n+1,i,j} = i·γ_{n,i,j−1} + 2(j+1)·γ_{n,i−1,j+1} + (2n+3−2i−j)·γ_{n,i−1,j},
/// seeded with γ_{0,0,0} = 1 (which gives γ_{1,1,0} = 1).
pub fn gamma_table(n_max: usize) -> CoefficientTable {
    let mut t = CoefficientTable::new("gamma", 2, n_max);
    t.set(vec![0, 0, 0], BigInt::one());
    for n in 0..n_max {
        let ni = n as i64;
        for i in 0..=n + 1 {
            for j in 0..=n {
                let (ii, ji) = (i as i64, j as i64);
                let v = t.at(&[ni, ii, ji - 1]) * ii
                    + t.at(&[ni, ii - 1, ji + 1]) * (2 * (ji + 1))
                    + t.at(&[ni, ii - 1, ji]) * (2 * ni + 3 - 2 * ii - ji);
                t.set(vec![n + 1, i, j], v);
            }
        }
    }
    t
}

/// G_0..G_{n_max} (as polynomials in x, y) from
/// G_{n+1} = (2n+1)x·G + (xy − 2x²)∂ₓG + (2x − xy)∂ᵧG.
pub fn g_polys_differential(n_max: usize) -> Vec<TriPoly> {
    let x = TriPoly::var(0);
    let y = TriPoly::var(1);
    let xy = &x * &y;
    let cx = &xy - &(&x * &x).scale(&rational(2));
    let cy = &x.scale(&rational(2)) - &xy;
    let mut out = vec![TriPoly::one()];
    for n in 0..n_max {
        let g = &out[n];
        let next = &(&(&x * g).scale(&rational(2 * n + 1)) + &(&cx * &g.partial(0))) + &(&cy * &g.partial(1));
        out.push(next);
    }
    out
}

/// C_n and N_n for n ≤ n_max. The differential recurrences
/// C_{n+1} = (2n+1)x·C + x(1−x)C′ and N_{n+1} = (2n+1)x·N + 2x(1−x)N′
/// read coefficient-wise as
/// [xᵏ]C_{n+1} = k·cₖ + (2n+2−k)·c_{k−1},
/// [xᵏ]N_{n+1} = 2k·cₖ + (2n+3−2k)·c_{k−1}.
pub fn cn_nn_tables(n_max: usize) -> (Vec<QPoly>, Vec<QPoly>) {
    let step = |prev: &[BigInt], n: i64, a: i64, b: i64| -> Vec<BigInt> {
        let get = |k: i64| {
            if k < 0 {
                BigInt::zero()
            } else {
                prev.get(k as usize).cloned().unwrap_or_default()
            }
        };
        (0..=prev.len() as i64)
            .map(|k| get(k) * (a * k) + get(k - 1) * (2 * n + b - a * k))
            .collect()
    };
    let mut c = vec![vec![BigInt::one()]];
    let mut nn = vec![vec![BigInt::one()]];
    for n in 0..n_max as i64 {
        let next_c = step(c.last().unwrap(), n, 1, 2);
        let next_n = step(nn.last().unwrap(), n, 2, 3);
        c.push(next_c);
        nn.push(next_n);
    }
    (
        c.into_iter().map(QPoly::from_integers).collect(),
        nn.into_iter().map(QPoly::from_integers).collect(),
    )
}

fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        rational(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// N_n(x) = Σₖ 2^{n−2k} C(2k,k) k! S(n,k) xᵏ (1−x)^{n−k}, expanded exactly.
pub fn n_poly_closed(n: usize) -> QPoly {
    let s2 = stirling2_table(n);
    let one_minus_x = QPoly::from_integers([1, -1]);
    let mut out = QPoly::zero();
    for k in 0..=n {
        let c = pow2(n as i64 - 2 * k as i64)
            * rational(binomial(BigInt::from(2 * k), BigInt::from(k)) * factorial(k) * s2.get(&[n, k]));
        if c.is_zero() {
            continue;
        }
        let term = &QPoly::monomial(c, k) * &one_minus_x.pow((n - k) as u32);
        out = &out + &term;
    }
    out
}

/// N(n,k), the coefficient of xᵏ in the closed form.
pub fn n_closed(n: usize, k: usize) -> BigInt {
    let c = n_poly_closed(n).coeff(k);
    debug_assert!(c.is_integer());
    c.to_integer()
}

/// Σ_j 2ʲ γ_{n,i,j} and Σ_{j=1}^{i} (−1)^{i−j} 2^{n−2j} C(2j,j) C(n−j,i−j) j! S(n,j)
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedSum {
    pub weighted: BigInt,
    pub alternating: BigInt,
}

/// Evaluates both sides and fails with an identity violation if they differ.
pub fn gamma_weighted_sum(n: usize, i: usize, gamma: &CoefficientTable) -> Result<WeightedSum> {
    if i == 0 || i > n {
        return Err(Error::Invalid(format!("need 1 ≤ i ≤ n, got i = {i}, n = {n}")));
    }
    if gamma.bound() < n {
        return Err(Error::Invalid(format!(
            "gamma table only reaches n = {}",
            gamma.bound()
        )));
    }
    let weighted: BigInt = (0..n).map(|j| gamma.get(&[n, i, j]) << j).sum();
    let s2 = stirling2_table(n);
    let mut alt = BigRational::zero();
    for j in 1..=i {
        let term = pow2(n as i64 - 2 * j as i64)
            * rational(
                binomial(BigInt::from(2 * j), BigInt::from(j))
                    * binomial(BigInt::from(n - j), BigInt::from(i - j))
                    * factorial(j)
                    * s2.get(&[n, j]),
            );
        if (i - j) % 2 == 1 {
            alt -= term;
        } else {
            alt += term;
        }
    }
    if !alt.is_integer() {
        return Err(Error::IdentityViolation(format!(
            "alternating sum for n={n}, i={i} is {alt}"
        )));
    }
    let alternating = alt.to_integer();
    if weighted != alternating {
        return Err(Error::IdentityViolation(format!(
            "n={n}, i={i}: Σ 2^j γ = {weighted} but alternating sum = {alternating}"
        )));
    }
    Ok(WeightedSum { weighted, alternating })
}

// ---------------------------------------------------------------------------
// Disk cache

#[derive(Serialize, Deserialize)]
struct EntryJson {
    idx: Vec<usize>,
    val: String,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    family: String,
    bound: usize,
    entries: Vec<EntryJson>,
}

impl CoefficientTable {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(TableJson {
            family: self.family.clone(),
            bound: self.bound,
            entries: self
                .entries
                .iter()
                .map(|(k, v)| EntryJson {
                    idx: k.clone(),
                    val: v.to_string(),
                })
                .collect(),
        })
        .expect("table serializes")
    }

    pub fn from_json(v: serde_json::Value) -> Result<Self> {
        let raw: TableJson = serde_json::from_value(v)?;
        let arity = raw.entries.first().map_or(0, |e| e.idx.len().saturating_sub(1));
        let mut t = CoefficientTable::new(&raw.family, arity, raw.bound);
        for e in raw.entries {
            if e.idx.len() != arity + 1 {
                return Err(Error::Invalid(format!("ragged index in cached table {}", raw.family)));
            }
            let val: BigInt = e
                .val
                .parse()
                .map_err(|_| Error::Invalid(format!("bad cached value `{}`", e.val)))?;
            t.set(e.idx, val);
        }
        Ok(t)
    }
}

/// Memoizes tables as JSON files keyed by family, bound and library version.
#[derive(Debug, Clone)]
pub struct TableCache {
    dir: PathBuf,
}

impl TableCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, family: &str, bound: usize) -> PathBuf {
        self.dir
            .join(format!("{family}-{bound}-v{}.json", env!("CARGO_PKG_VERSION")))
    }

    /// Loads the cached table, or builds and stores it. A missing or
    /// unreadable cache file is rebuilt rather than reported.
    pub fn load_or_build(
        &self,
        family: &str,
        bound: usize,
        build: impl FnOnce(usize) -> CoefficientTable,
    ) -> Result<CoefficientTable> {
        let path = self.path_for(family, bound);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(t) = serde_json::from_str(&text)
                .map_err(Error::from)
                .and_then(CoefficientTable::from_json)
            {
                if t.family == family && t.bound == bound {
                    return Ok(t);
                }
            }
        }
        let t = build(bound);
        fs::create_dir_all(&self.dir)?;
        fs::write(&path, serde_json::to_string(&t.to_json())?)?;
        Ok(t)
    }
}

/// True when no coefficient of `p` is negative.
pub fn nonnegative(t: &CoefficientTable) -> bool {
    t.entries.values().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        QPoly::from_integers(c.iter().copied())
    }

    #[test]
    fn eulerian_values() {
        assert_eq!(eulerian(1, 0), BigInt::one());
        assert_eq!(eulerian(3, 1), BigInt::from(4));
        assert_eq!(eulerian(4, 4), BigInt::zero());
        assert_eq!(eulerian(5, 7), BigInt::zero());
        assert_eq!(eulerian_poly(4), q(&[1, 11, 11, 1]));
        assert_eq!(type_b_eulerian_table(2).polynomial(2), q(&[1, 6, 1]));
    }

    #[test]
    fn stirling2_values() {
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        for n in 0..8 {
            assert_eq!(stirling2(n, n), BigInt::one());
        }
    }

    /// Set partitions of [n] into k blocks, counted by restricted growth strings.
    fn brute_stirling2(n: usize, k: usize) -> u64 {
        fn go(pos: usize, n: usize, k: usize, max: usize) -> u64 {
            if pos == n {
                return u64::from(max == k);
            }
            (0..=max.min(k - 1)).map(|b| go(pos + 1, n, k, max.max(b + 1))).sum()
        }
        if k == 0 {
            return u64::from(n == 0);
        }
        go(0, n, k, 0)
    }

    #[test]
    fn stirling2_against_partitions() {
        for n in 0..=8 {
            for k in 0..=n {
                assert_eq!(stirling2(n, k), BigInt::from(brute_stirling2(n, k)), "S({n},{k})");
            }
        }
    }

    #[test]
    fn t_polys() {
        let t = t_table(3);
        assert_eq!(t.polynomial(0), QPoly::one());
        assert_eq!(t.polynomial(1), QPoly::x());
        assert_eq!(t.polynomial(2), q(&[0, 1, 1, 1]));
    }

    #[test]
    fn p_polys() {
        let t = p_table(3);
        let tri = |terms: &[([u32; 3], i64)]| TriPoly::from_terms(terms.iter().map(|&(e, c)| (e, rational(c))));
        assert_eq!(t.tri_poly(1), tri(&[([1, 0, 0], 1)]));
        assert_eq!(t.tri_poly(2), tri(&[([1, 1, 0], 1), ([1, 0, 1], 1), ([2, 0, 0], 1)]));
        let p3 = tri(&[
            ([1, 2, 0], 1),
            ([1, 0, 2], 1),
            ([2, 1, 0], 4),
            ([2, 0, 1], 4),
            ([1, 1, 1], 2),
            ([2, 0, 0], 2),
            ([3, 0, 0], 1),
        ]);
        assert_eq!(t.tri_poly(3), p3);
        let diff = p_polys_differential(7);
        let table = p_table(7);
        for n in 0..=7 {
            assert_eq!(diff[n], table.tri_poly(n), "n = {n}");
        }
    }

    #[test]
    fn gamma_polys() {
        let t = gamma_table(10);
        let tri = |terms: &[([u32; 3], i64)]| TriPoly::from_terms(terms.iter().map(|&(e, c)| (e, rational(c))));
        assert_eq!(t.tri_poly(0), TriPoly::one());
        assert_eq!(t.tri_poly(1), tri(&[([1, 0, 0], 1)]));
        assert_eq!(t.tri_poly(2), tri(&[([1, 1, 0], 1), ([2, 0, 0], 1)]));
        assert_eq!(
            t.tri_poly(3),
            tri(&[([1, 2, 0], 1), ([2, 1, 0], 4), ([2, 0, 0], 2), ([3, 0, 0], 1)])
        );
        let diff = g_polys_differential(10);
        for n in 0..=10 {
            assert_eq!(diff[n], t.tri_poly(n), "n = {n}");
        }
        for ((idx, _), _) in t.entries().zip(0..) {
            assert!(idx[1] + idx[2] <= idx[0], "{idx:?}");
        }
        assert!(nonnegative(&t));
    }

    #[test]
    fn gamma_eulerian() {
        let g = gamma_table(8);
        let e = eulerian_table(8);
        for n in 1..=8 {
            for k in 0..n {
                assert_eq!(g.get(&[n, n - k, k]), e.get(&[n, k]));
            }
        }
    }

    #[test]
    fn c_and_n() {
        let (c, n) = cn_nn_tables(3);
        assert_eq!(c[0], QPoly::one());
        assert_eq!(n[0], QPoly::one());
        assert_eq!(c[3], q(&[0, 1, 8, 6]));
        assert_eq!(n[2], q(&[0, 2, 1]));
    }

    #[test]
    fn n_closed_form() {
        assert_eq!(n_poly_closed(2), q(&[0, 2, 1]));
        assert_eq!(n_poly_closed(1), QPoly::x());
        assert_eq!(n_closed(2, 1), BigInt::from(2));
        let (_, nn) = cn_nn_tables(8);
        for n in 1..=8 {
            assert_eq!(n_poly_closed(n), nn[n], "n = {n}");
        }
    }

    #[test]
    fn weighted_sums() {
        let g = gamma_table(8);
        let w = gamma_weighted_sum(2, 1, &g).unwrap();
        assert_eq!(w.weighted, BigInt::from(2));
        let w = gamma_weighted_sum(2, 2, &g).unwrap();
        assert_eq!(w.alternating, BigInt::one());
        let (_, nn) = cn_nn_tables(8);
        for n in 1..=8 {
            for i in 1..=n {
                let w = gamma_weighted_sum(n, i, &g).unwrap();
                assert_eq!(rational(w.weighted), nn[n].coeff(i));
            }
        }
        assert!(gamma_weighted_sum(2, 3, &g).is_err());
    }

    #[test]
    fn weighted_sum_mismatch_is_reported() {
        let mut g = gamma_table(3);
        g.set(vec![3, 2, 1], BigInt::from(5));
        assert!(matches!(gamma_weighted_sum(3, 2, &g), Err(Error::IdentityViolation(_))));
    }

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = TableCache::new(dir.path().join("nested"));
        let a = cache.load_or_build("gamma", 6, gamma_table).unwrap();
        assert!(cache.path_for("gamma", 6).exists());
        let b = cache
            .load_or_build("gamma", 6, |_| panic!("should hit the cache"))
            .unwrap();
        assert_eq!(a, b);
        let text = std::fs::read_to_string(cache.path_for("gamma", 6)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["family"], "gamma");
        assert_eq!(v["bound"], 6);
        assert!(v["entries"][0]["idx"].is_array());
        assert!(v["entries"][0]["val"].is_string());

        std::fs::write(cache.path_for("T", 3), "not json").unwrap();
        let t = cache.load_or_build("T", 3, t_table).unwrap();
        assert_eq!(t, t_table(3));
    }
}
