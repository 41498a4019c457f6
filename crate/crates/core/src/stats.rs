//! Permutation, signed-permutation and matching statistics, and exact joint
//! distribution tables over whole object classes.
//!
//! Stirling statistics read the word with sentinels σ₀ = σ₂ₙ₊₁ = 0, so index 1
//! is always an ascent and index 2n always a descent.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objects::{
    ObjectClass, PerfectMatching, PerfectMatchings, Permutation, Permutations, SignedPermutation, SignedPermutations,
    StirlingPermutation, StirlingPermutations,
};
use crate::poly::{rational, QPoly, TriPoly};

/// Largest order the enumerating operations accept unless configured otherwise.
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StirlingStatRecord {
    pub asc: u32,
    pub des: u32,
    pub plat: u32,
    pub ap: u32,
    pub lap: u32,
    pub fap: u32,
    pub dasc: u32,
    pub dp: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedStatRecord {
    pub des_a: u32,
    pub des_b: u32,
    pub fdes: u32,
    pub fasc: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MatchingStatRecord {
    pub el: u32,
    pub ol: u32,
}

pub fn stirling_stats(sigma: &StirlingPermutation) -> StirlingStatRecord {
    let p = sigma.padded();
    let m = p.len() - 2; // 2n
    let mut r = StirlingStatRecord {
        asc: 0,
        des: 0,
        plat: 0,
        ap: 0,
        lap: 0,
        fap: 0,
        dasc: 0,
        dp: 0,
    };
    for i in 0..m {
        if p[i] < p[i + 1] {
            r.asc += 1;
        }
    }
    for i in 1..=m {
        let (prev, cur, next) = (p[i - 1], p[i], p[i + 1]);
        if cur > next {
            r.des += 1;
        }
        if cur == next {
            // i = 2n never qualifies: the right sentinel is 0.
            r.plat += 1;
            if prev < cur {
                r.lap += 1;
                if i >= 2 {
                    r.ap += 1;
                }
            } else if prev > cur {
                r.dp += 1;
            }
        }
        if prev < cur && cur < next {
            r.dasc += 1;
        }
    }
    let starts_with_plateau = m >= 2 && p[1] == p[2];
    r.fap = 2 * r.ap + u32::from(starts_with_plateau);
    r
}

pub fn signed_stats(pi: &SignedPermutation) -> SignedStatRecord {
    let v = pi.values();
    let n = v.len() as u32;
    let des_a = v.windows(2).filter(|w| w[0] > w[1]).count() as u32;
    let first_negative = v.first().is_some_and(|&a| a < 0);
    let fdes = 2 * des_a + u32::from(first_negative);
    SignedStatRecord {
        des_a,
        des_b: des_a + u32::from(first_negative),
        fdes,
        fasc: (2 * n).saturating_sub(1) - fdes,
    }
}

pub fn perm_des(pi: &Permutation) -> u32 {
    pi.values().windows(2).filter(|w| w[0] > w[1]).count() as u32
}

pub fn matching_stats(m: &PerfectMatching) -> MatchingStatRecord {
    let even = m.blocks().iter().filter(|(_, hi)| hi % 2 == 0).count() as u32;
    MatchingStatRecord {
        el: even,
        ol: m.order() as u32 - even,
    }
}

// ---------------------------------------------------------------------------

/// Statistic identifiers. Names are stable: they appear in CLI flags, CSV
/// headers and JSON output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stat {
    Asc,
    Des,
    Plat,
    Ap,
    Lap,
    Fap,
    Dasc,
    Dp,
    DesA,
    DesB,
    Fdes,
    Fasc,
    El,
    Ol,
}

impl Stat {
    pub const ALL: [Stat; 14] = [
        Stat::Asc,
        Stat::Des,
        Stat::Plat,
        Stat::Ap,
        Stat::Lap,
        Stat::Fap,
        Stat::Dasc,
        Stat::Dp,
        Stat::DesA,
        Stat::DesB,
        Stat::Fdes,
        Stat::Fasc,
        Stat::El,
        Stat::Ol,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stat::Asc => "asc",
            Stat::Des => "des",
            Stat::Plat => "plat",
            Stat::Ap => "ap",
            Stat::Lap => "lap",
            Stat::Fap => "fap",
            Stat::Dasc => "dasc",
            Stat::Dp => "dp",
            Stat::DesA => "desA",
            Stat::DesB => "desB",
            Stat::Fdes => "fdes",
            Stat::Fasc => "fasc",
            Stat::El => "el",
            Stat::Ol => "ol",
        }
    }

    pub fn applies_to(self, class: ObjectClass) -> bool {
        use Stat::*;
        match class {
            ObjectClass::Stirling => matches!(self, Asc | Des | Plat | Ap | Lap | Fap | Dasc | Dp),
            ObjectClass::Signed => matches!(self, DesA | DesB | Fdes | Fasc),
            ObjectClass::Matching => matches!(self, El | Ol),
            ObjectClass::Permutation => self == Des,
        }
    }

    /// Every statistic defined on `class`, in canonical order.
    pub fn for_class(class: ObjectClass) -> Vec<Stat> {
        Stat::ALL.into_iter().filter(|s| s.applies_to(class)).collect()
    }

    pub fn parse_list(s: &str) -> Result<Vec<Stat>> {
        s.split(',').map(|t| t.trim().parse()).collect()
    }
}

impl fmt::Display for Stat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Stat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stat::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::UnknownStatistic(s.to_string()))
    }
}

impl StirlingStatRecord {
    pub fn get(&self, stat: Stat) -> Option<u32> {
        Some(match stat {
            Stat::Asc => self.asc,
            Stat::Des => self.des,
            Stat::Plat => self.plat,
            Stat::Ap => self.ap,
            Stat::Lap => self.lap,
            Stat::Fap => self.fap,
            Stat::Dasc => self.dasc,
            Stat::Dp => self.dp,
            _ => return None,
        })
    }
}

impl SignedStatRecord {
    pub fn get(&self, stat: Stat) -> Option<u32> {
        Some(match stat {
            Stat::DesA => self.des_a,
            Stat::DesB => self.des_b,
            Stat::Fdes => self.fdes,
            Stat::Fasc => self.fasc,
            _ => return None,
        })
    }
}

impl MatchingStatRecord {
    pub fn get(&self, stat: Stat) -> Option<u32> {
        match stat {
            Stat::El => Some(self.el),
            Stat::Ol => Some(self.ol),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------

/// Exact joint distribution of a list of statistics over one object class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionTable {
    class: ObjectClass,
    n: usize,
    stats: Vec<Stat>,
    counts: BTreeMap<Vec<u32>, BigUint>,
}

impl DistributionTable {
    pub fn class(&self) -> ObjectClass {
        self.class
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stats(&self) -> &[Stat] {
        &self.stats
    }

    /// Rows in lexicographic order of the value tuples.
    pub fn rows(&self) -> impl Iterator<Item = (&[u32], &BigUint)> {
        self.counts.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn count(&self, values: &[u32]) -> BigUint {
        self.counts.get(values).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    /// Sums out every statistic not listed in `keep` (which may reorder them).
    pub fn marginal(&self, keep: &[Stat]) -> Result<DistributionTable> {
        let idx: Vec<usize> = keep
            .iter()
            .map(|s| {
                self.stats
                    .iter()
                    .position(|t| t == s)
                    .ok_or_else(|| Error::Invalid(format!("statistic `{s}` is not part of this table")))
            })
            .collect::<Result<_>>()?;
        let mut counts = BTreeMap::new();
        for (k, v) in &self.counts {
            let key: Vec<u32> = idx.iter().map(|&i| k[i]).collect();
            *counts.entry(key).or_insert_with(BigUint::zero) += v;
        }
        Ok(DistributionTable {
            class: self.class,
            n: self.n,
            stats: keep.to_vec(),
            counts,
        })
    }

    /// Σ x^{stat} over the class.
    pub fn polynomial(&self, stat: Stat) -> Result<QPoly> {
        let m = self.marginal(&[stat])?;
        let mut coeffs = Vec::new();
        for (k, v) in &m.counts {
            let e = k[0] as usize;
            if coeffs.len() <= e {
                coeffs.resize(e + 1, num_bigint::BigInt::zero());
            }
            coeffs[e] = v.clone().into();
        }
        Ok(QPoly::from_integers(coeffs))
    }

    /// Σ x^{s₀} y^{s₁} z^{s₂} for up to three statistics; missing axes get
    /// exponent 0.
    pub fn tri_poly(&self, stats: &[Stat]) -> Result<TriPoly> {
        if stats.is_empty() || stats.len() > 3 {
            return Err(Error::Invalid("tri_poly takes one to three statistics".into()));
        }
        let m = self.marginal(stats)?;
        Ok(TriPoly::from_terms(m.counts.iter().map(|(k, v)| {
            let mut e = [0u32; 3];
            e[..k.len()].copy_from_slice(k);
            (e, rational(num_bigint::BigInt::from(v.clone())))
        })))
    }
}

#[derive(Serialize, Deserialize)]
struct RowJson {
    values: Vec<u32>,
    count: String,
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    class: ObjectClass,
    n: usize,
    stats: Vec<String>,
    rows: Vec<RowJson>,
}

impl Serialize for DistributionTable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableJson {
            class: self.class,
            n: self.n,
            stats: self.stats.iter().map(|s| s.name().to_string()).collect(),
            rows: self
                .counts
                .iter()
                .map(|(k, v)| RowJson {
                    values: k.clone(),
                    count: v.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

fn values_for(class: ObjectClass, n: usize, ranks: std::ops::Range<u64>, stats: &[Stat]) -> HashMap<Vec<u32>, u64> {
    let mut acc: HashMap<Vec<u32>, u64> = HashMap::new();
    let mut bump = |key: Vec<u32>| *acc.entry(key).or_insert(0) += 1;
    match class {
        ObjectClass::Stirling => {
            for s in StirlingPermutations::range(n, ranks) {
                let r = stirling_stats(&s);
                bump(stats.iter().map(|&st| r.get(st).unwrap()).collect());
            }
        }
        ObjectClass::Signed => {
            for p in SignedPermutations::range(n, ranks) {
                let r = signed_stats(&p);
                bump(stats.iter().map(|&st| r.get(st).unwrap()).collect());
            }
        }
        ObjectClass::Matching => {
            for m in PerfectMatchings::range(n, ranks) {
                let r = matching_stats(&m);
                bump(stats.iter().map(|&st| r.get(st).unwrap()).collect());
            }
        }
        ObjectClass::Permutation => {
            for p in Permutations::range(n, ranks) {
                let d = perm_des(&p);
                bump(stats.iter().map(|_| d).collect());
            }
        }
    }
    acc
}

/// Joint distribution with the default enumeration bound.
pub fn distribution(class: ObjectClass, n: usize, stats: &[Stat]) -> Result<DistributionTable> {
    distribution_bounded(class, n, stats, DEFAULT_ENUMERATION_BOUND)
}

/// Joint distribution of `stats` over all objects of order `n`. The stream is
/// split into rank ranges folded in parallel and merged.
pub fn distribution_bounded(class: ObjectClass, n: usize, stats: &[Stat], bound: usize) -> Result<DistributionTable> {
    if n > bound {
        return Err(Error::BoundExceeded {
            what: format!("{class} enumeration"),
            n,
            bound,
        });
    }
    for &s in stats {
        if !s.applies_to(class) {
            return Err(Error::StatisticNotApplicable {
                stat: s.name().to_string(),
                class,
            });
        }
    }
    let total = u64::try_from(class.cardinality(n)).map_err(|_| Error::Invalid("enumeration too large".into()))?;
    let chunk = (total / 64).max(4096);
    let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
    let merged = starts
        .into_par_iter()
        .map(|s| values_for(class, n, s..(s + chunk).min(total), stats))
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });
    Ok(DistributionTable {
        class,
        n,
        stats: stats.to_vec(),
        counts: merged.into_iter().map(|(k, v)| (k, BigUint::from(v))).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objects::{enumerate_signed, enumerate_stirling};

    fn st(s: &str) -> StirlingStatRecord {
        stirling_stats(&s.parse().unwrap())
    }

    #[test]
    fn worked_examples() {
        let r = st("442332115665");
        assert_eq!((r.ap, r.lap), (2, 3));
        let r = st("244332115665");
        assert_eq!((r.dasc, r.dp), (2, 2));
        let r = st("2211");
        assert_eq!(
            r,
            StirlingStatRecord {
                asc: 1,
                des: 2,
                plat: 2,
                ap: 0,
                lap: 1,
                fap: 1,
                dasc: 0,
                dp: 1
            }
        );
        assert_eq!(st("11").fap, 1);
    }

    #[test]
    fn signed_examples() {
        let r = signed_stats(&SignedPermutation::new(vec![4, -3, 1, 5, 2]).unwrap());
        assert_eq!((r.des_a, r.fdes, r.fasc), (2, 4, 5));
        let r = signed_stats(&SignedPermutation::new(vec![1]).unwrap());
        assert_eq!((r.fdes, r.fasc), (0, 1));
        let r = signed_stats(&SignedPermutation::new(vec![-1]).unwrap());
        assert_eq!((r.fdes, r.fasc, r.des_b), (1, 0, 1));
    }

    #[test]
    fn perm_and_matching_examples() {
        assert_eq!(perm_des(&"123".parse().unwrap()), 0);
        assert_eq!(perm_des(&"321".parse().unwrap()), 2);
        assert_eq!(perm_des(&"435621".parse().unwrap()), 3);
        let m = PerfectMatching::new(vec![(1, 2)]).unwrap();
        assert_eq!(matching_stats(&m), MatchingStatRecord { el: 1, ol: 0 });
        let m = PerfectMatching::new(vec![(1, 3), (2, 4)]).unwrap();
        assert_eq!(matching_stats(&m), MatchingStatRecord { el: 1, ol: 1 });
    }

    #[test]
    fn matching_polynomials_n2() {
        let d = distribution(ObjectClass::Matching, 2, &[Stat::Ol, Stat::El]).unwrap();
        assert_eq!(d.polynomial(Stat::Ol).unwrap(), QPoly::from_integers([1, 2]));
        assert_eq!(d.polynomial(Stat::El).unwrap(), QPoly::from_integers([0, 2, 1]));
    }

    #[test]
    fn record_invariants() {
        for n in 0..=7 {
            for s in enumerate_stirling(n) {
                let r = stirling_stats(&s);
                let w = s.word();
                let head = u32::from(n > 0 && w[0] == w[1]);
                assert_eq!(r.asc, r.lap + r.dasc, "{s}");
                assert_eq!(r.plat, r.lap + r.dp, "{s}");
                assert_eq!(r.fap, r.ap + r.lap, "{s}");
                assert_eq!(r.lap, r.ap + head, "{s}");
                if n > 0 {
                    assert_eq!(r.asc + r.des + r.plat, 2 * n as u32 + 1, "{s}");
                }
            }
        }
        for n in 1..=6 {
            for p in enumerate_signed(n) {
                let r = signed_stats(&p);
                let neg = u32::from(p.values()[0] < 0);
                assert_eq!(r.fdes + r.fasc, 2 * n as u32 - 1);
                assert_eq!(r.fdes, 2 * r.des_a + neg);
                assert_eq!(r.des_b, r.des_a + neg);
            }
        }
    }

    #[test]
    fn bona_equidistribution() {
        for n in 0..=7 {
            let d = distribution(ObjectClass::Stirling, n, &[Stat::Asc, Stat::Des, Stat::Plat]).unwrap();
            let a = d.polynomial(Stat::Asc).unwrap();
            assert_eq!(a, d.polynomial(Stat::Des).unwrap());
            assert_eq!(a, d.polynomial(Stat::Plat).unwrap());
        }
    }

    #[test]
    fn matchings_against_stirling() {
        for n in 0..=6 {
            let m = distribution(ObjectClass::Matching, n, &[Stat::Ol, Stat::El]).unwrap();
            let q = distribution(ObjectClass::Stirling, n, &[Stat::Ap, Stat::Lap]).unwrap();
            assert_eq!(m.polynomial(Stat::Ol).unwrap(), q.polynomial(Stat::Ap).unwrap());
            assert_eq!(m.polynomial(Stat::El).unwrap(), q.polynomial(Stat::Lap).unwrap());
        }
    }

    #[test]
    fn distribution_examples() {
        let d = distribution(ObjectClass::Stirling, 2, &[Stat::Fap]).unwrap();
        let rows: Vec<_> = d.rows().map(|(k, v)| (k[0], v.to_string())).collect();
        assert_eq!(rows, vec![(1, "1".into()), (2, "1".into()), (3, "1".into())]);

        let d = distribution(ObjectClass::Signed, 1, &[Stat::Fdes]).unwrap();
        assert_eq!(d.polynomial(Stat::Fdes).unwrap(), QPoly::from_integers([1, 1]));

        // P₃ = x(y²+z²) + 4x²(y+z) + 2xyz + 2x² + x³
        let d = distribution(ObjectClass::Stirling, 3, &[Stat::Lap, Stat::Dasc, Stat::Dp]).unwrap();
        let expect = [
            ([1, 2, 0], 1),
            ([1, 0, 2], 1),
            ([2, 1, 0], 4),
            ([2, 0, 1], 4),
            ([1, 1, 1], 2),
            ([2, 0, 0], 2),
            ([3, 0, 0], 1),
        ];
        let p3 = TriPoly::from_terms(expect.iter().map(|&(e, c)| (e, rational(c))));
        assert_eq!(d.tri_poly(&[Stat::Lap, Stat::Dasc, Stat::Dp]).unwrap(), p3);
        assert_eq!(d.total(), BigUint::from(15u32));
    }

    #[test]
    fn distribution_errors() {
        assert!(matches!(
            distribution(ObjectClass::Stirling, 9, &[Stat::Asc]),
            Err(Error::BoundExceeded { n: 9, bound: 8, .. })
        ));
        assert!(matches!(
            distribution(ObjectClass::Matching, 2, &[Stat::Asc]),
            Err(Error::StatisticNotApplicable { .. })
        ));
        assert!(matches!("nope".parse::<Stat>(), Err(Error::UnknownStatistic(_))));
        assert_eq!(
            Stat::parse_list("lap, dasc,dp").unwrap(),
            vec![Stat::Lap, Stat::Dasc, Stat::Dp]
        );
    }

    #[test]
    fn totals_match_cardinality() {
        for class in ObjectClass::ALL {
            for n in 0..=5 {
                let d = distribution(class, n, &Stat::for_class(class)).unwrap();
                assert_eq!(d.total(), class.cardinality(n), "{class} {n}");
            }
        }
    }
}
