//! Carrier types (Stirling permutations, signed permutations, perfect
//! matchings, ordinary permutations) and exhaustive enumerators for each.
//!
//! Every enumerator is indexed by a rank in `0..cardinality(n)` so that a
//! stream can be split into disjoint ranges and folded in parallel. Iterating
//! a full range visits the objects in the documented recursion order.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four object classes the library enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectClass {
    Stirling,
    Signed,
    Matching,
    Permutation,
}

impl ObjectClass {
    pub const ALL: [ObjectClass; 4] = [
        ObjectClass::Stirling,
        ObjectClass::Signed,
        ObjectClass::Matching,
        ObjectClass::Permutation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ObjectClass::Stirling => "stirling",
            ObjectClass::Signed => "signed",
            ObjectClass::Matching => "matching",
            ObjectClass::Permutation => "permutation",
        }
    }

    /// Number of objects of order `n` in this class.
    pub fn cardinality(self, n: usize) -> BigUint {
        match self {
            ObjectClass::Stirling | ObjectClass::Matching => double_factorial_odd(n),
            ObjectClass::Signed => factorial(n) << n,
            ObjectClass::Permutation => factorial(n),
        }
    }
}

impl fmt::Display for ObjectClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ObjectClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ObjectClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown object class `{s}`")))
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * k)
}

/// (2n-1)!! = 1·3·5···(2n-1), with (−1)!! = 1.
pub fn double_factorial_odd(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::from(1u32), |acc, k| acc * (2 * k - 1))
}

fn small_cardinality(class: ObjectClass, n: usize) -> u64 {
    u64::try_from(class.cardinality(n)).expect("enumeration size exceeds u64")
}

fn write_word<T: fmt::Display + Copy>(f: &mut fmt::Formatter<'_>, values: &[T], compact: bool) -> fmt::Result {
    for (i, v) in values.iter().enumerate() {
        if i > 0 && !compact {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

/// Splits a word written either as single digits ("1221", "4-3152") or as
/// separated integers ("10 10 1 1", "4,-3,1").
fn parse_word(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    let separated = s.contains(|c: char| c.is_whitespace() || c == ',');
    let bad = |tok: &str| Error::Invalid(format!("cannot parse `{tok}` as a word entry"));
    if separated {
        s.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<i64>().map_err(|_| bad(t)))
            .collect()
    } else {
        let mut out = Vec::new();
        let mut negative = false;
        for c in s.chars() {
            match c {
                '-' if !negative => negative = true,
                d if d.is_ascii_digit() => {
                    let v = i64::from(d.to_digit(10).unwrap());
                    out.push(if negative { -v } else { v });
                    negative = false;
                }
                _ => return Err(bad(s)),
            }
        }
        if negative {
            return Err(bad(s));
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Stirling permutations

/// True iff `word` is a Stirling permutation of some order n: every value in
/// `1..=n` occurs exactly twice and everything between the two copies of `v`
/// is larger than `v`. The empty word is the unique element of order 0.
pub fn is_stirling(word: &[u32]) -> bool {
    if !word.len().is_multiple_of(2) {
        return false;
    }
    let n = word.len() / 2;
    let mut first = vec![usize::MAX; n + 1];
    let mut seen = vec![0u8; n + 1];
    for (pos, &v) in word.iter().enumerate() {
        let v = v as usize;
        if v == 0 || v > n {
            return false;
        }
        seen[v] += 1;
        match seen[v] {
            1 => first[v] = pos,
            2 => {
                if word[first[v] + 1..pos].iter().any(|&u| u as usize <= v) {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// A word on the multiset {1,1,2,2,…,n,n} with the Stirling property.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StirlingPermutation {
    word: Vec<u32>,
}

impl StirlingPermutation {
    pub fn new(word: Vec<u32>) -> Result<Self> {
        if is_stirling(&word) {
            Ok(Self { word })
        } else {
            Err(Error::InvalidObject {
                kind: "Stirling permutation",
                detail: format!("{word:?}"),
            })
        }
    }

    pub(crate) fn from_word_unchecked(word: Vec<u32>) -> Self {
        debug_assert!(is_stirling(&word), "not a Stirling permutation: {word:?}");
        Self { word }
    }

    pub fn order(&self) -> usize {
        self.word.len() / 2
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn into_word(self) -> Vec<u32> {
        self.word
    }

    /// The word with the sentinels σ₀ = σ₂ₙ₊₁ = 0 attached.
    pub fn padded(&self) -> Vec<u32> {
        let mut p = Vec::with_capacity(self.word.len() + 2);
        p.push(0);
        p.extend_from_slice(&self.word);
        p.push(0);
        p
    }
}

impl fmt::Display for StirlingPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.word, self.order() < 10)
    }
}

impl FromStr for StirlingPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = parse_word(s)?
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| Error::Invalid(format!("negative entry in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(word)
    }
}

/// Enumerates Q_n by pair insertion. The pair `kk` is inserted into each of
/// the 2k−1 gaps of every element of Q_{k−1}; gaps are visited from the
/// rightmost (after the last letter) to the leftmost (the front), and the
/// largest pair varies fastest. For n = 2 this yields 1122, 1221, 2211.
#[derive(Debug, Clone)]
pub struct StirlingPermutations {
    n: usize,
    digits: Vec<u32>,
    levels: Vec<Vec<u32>>,
    remaining: u64,
}

impl StirlingPermutations {
    pub fn new(n: usize) -> Self {
        Self::range(n, 0..small_cardinality(ObjectClass::Stirling, n))
    }

    /// The objects with ranks in `ranks`, in enumeration order.
    pub fn range(n: usize, ranks: Range<u64>) -> Self {
        let total = small_cardinality(ObjectClass::Stirling, n);
        let end = ranks.end.min(total);
        let start = ranks.start.min(end);
        let mut digits = vec![0u32; n];
        let mut r = start;
        for k in (0..n).rev() {
            let radix = 2 * k as u64 + 1;
            digits[k] = (r % radix) as u32;
            r /= radix;
        }
        let mut it = Self {
            n,
            digits,
            levels: vec![Vec::new(); n + 1],
            remaining: end - start,
        };
        it.rebuild_from(0);
        it
    }

    fn rebuild_from(&mut self, k0: usize) {
        for k in k0..self.n {
            let gap = 2 * k - self.digits[k] as usize;
            let mut next = Vec::with_capacity(2 * k + 2);
            next.extend_from_slice(&self.levels[k][..gap]);
            next.push(k as u32 + 1);
            next.push(k as u32 + 1);
            next.extend_from_slice(&self.levels[k][gap..]);
            self.levels[k + 1] = next;
        }
    }

    fn advance(&mut self) {
        for k in (0..self.n).rev() {
            if self.digits[k] < 2 * k as u32 {
                self.digits[k] += 1;
                for d in &mut self.digits[k + 1..] {
                    *d = 0;
                }
                self.rebuild_from(k);
                return;
            }
        }
    }
}

impl Iterator for StirlingPermutations {
    type Item = StirlingPermutation;

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        let out = StirlingPermutation::from_word_unchecked(self.levels[self.n].clone());
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn enumerate_stirling(n: usize) -> StirlingPermutations {
    StirlingPermutations::new(n)
}

// ---------------------------------------------------------------------------
// Permutations

/// A permutation of [n] in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<u32>,
}

impl Permutation {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let v = v as usize;
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidObject {
                    kind: "permutation",
                    detail: format!("{values:?}"),
                });
            }
            seen[v] = true;
        }
        Ok(Self { values })
    }

    pub(crate) fn from_values_unchecked(values: Vec<u32>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.values, self.len() < 10)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = parse_word(s)?
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| Error::Invalid(format!("negative entry in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// Lexicographic successor in place; false when `v` was the last permutation.
fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// The permutation of rank `r` in lexicographic order (Lehmer code).
fn unrank_permutation(n: usize, mut r: u64) -> Vec<u32> {
    let mut pool: Vec<u32> = (1..=n as u32).collect();
    let mut fact = vec![1u64; n + 1];
    for k in 1..=n {
        fact[k] = fact[k - 1] * k as u64;
    }
    let mut out = Vec::with_capacity(n);
    for k in (0..n).rev() {
        let idx = (r / fact[k]) as usize;
        r %= fact[k];
        out.push(pool.remove(idx));
    }
    out
}

/// All n! permutations in lexicographic order.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Vec<u32>,
    remaining: u64,
}

impl Permutations {
    pub fn new(n: usize) -> Self {
        Self::range(n, 0..small_cardinality(ObjectClass::Permutation, n))
    }

    pub fn range(n: usize, ranks: Range<u64>) -> Self {
        let total = small_cardinality(ObjectClass::Permutation, n);
        let end = ranks.end.min(total);
        let start = ranks.start.min(end);
        Self {
            current: unrank_permutation(n, start),
            remaining: end - start,
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        let out = Permutation::from_values_unchecked(self.current.clone());
        self.remaining -= 1;
        next_permutation(&mut self.current);
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn enumerate_permutations(n: usize) -> Permutations {
    Permutations::new(n)
}

// ---------------------------------------------------------------------------
// Signed permutations

/// An element of the hyperoctahedral group B_n, written π(1)…π(n) with the
/// signs carried by the entries. π(0) = 0 is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPermutation {
    values: Vec<i32>,
}

impl SignedPermutation {
    pub fn new(values: Vec<i32>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(Error::InvalidObject {
                    kind: "signed permutation",
                    detail: format!("{values:?}"),
                });
            }
            seen[a] = true;
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_word(f, &self.values, self.len() < 10)
    }
}

impl FromStr for SignedPermutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = parse_word(s)?
            .into_iter()
            .map(|v| i32::try_from(v).map_err(|_| Error::Invalid(format!("entry out of range in `{s}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// All 2^n·n! signed permutations: for each permutation in lexicographic
/// order, the 2^n sign patterns in binary order (bit i negates entry i+1).
#[derive(Debug, Clone)]
pub struct SignedPermutations {
    n: usize,
    perm: Vec<u32>,
    mask: u64,
    remaining: u64,
}

impl SignedPermutations {
    pub fn new(n: usize) -> Self {
        Self::range(n, 0..small_cardinality(ObjectClass::Signed, n))
    }

    pub fn range(n: usize, ranks: Range<u64>) -> Self {
        let total = small_cardinality(ObjectClass::Signed, n);
        let end = ranks.end.min(total);
        let start = ranks.start.min(end);
        Self {
            n,
            perm: unrank_permutation(n, start >> n),
            mask: start & ((1u64 << n) - 1),
            remaining: end - start,
        }
    }
}

impl Iterator for SignedPermutations {
    type Item = SignedPermutation;

    fn next(&mut self) -> Option<SignedPermutation> {
        if self.remaining == 0 {
            return None;
        }
        let values = self
            .perm
            .iter()
            .enumerate()
            .map(|(i, &v)| if self.mask >> i & 1 == 1 { -(v as i32) } else { v as i32 })
            .collect();
        self.remaining -= 1;
        self.mask += 1;
        if self.mask == 1u64 << self.n {
            self.mask = 0;
            next_permutation(&mut self.perm);
        }
        Some(SignedPermutation { values })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn enumerate_signed(n: usize) -> SignedPermutations {
    SignedPermutations::new(n)
}

// ---------------------------------------------------------------------------
// Perfect matchings

/// A partition of [2n] into n blocks of size two. Blocks are stored as
/// `(smaller, larger)` sorted by their smaller element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerfectMatching {
    blocks: Vec<(u32, u32)>,
}

impl PerfectMatching {
    pub fn new(blocks: Vec<(u32, u32)>) -> Result<Self> {
        let n = blocks.len();
        let mut seen = vec![false; 2 * n + 1];
        let mut normalized = Vec::with_capacity(n);
        for &(a, b) in &blocks {
            let (lo, hi) = (a.min(b), a.max(b));
            for v in [lo, hi] {
                let v = v as usize;
                if v == 0 || v > 2 * n || seen[v] {
                    return Err(Error::InvalidObject {
                        kind: "perfect matching",
                        detail: format!("{blocks:?}"),
                    });
                }
                seen[v] = true;
            }
            normalized.push((lo, hi));
        }
        normalized.sort_unstable();
        Ok(Self { blocks: normalized })
    }

    pub fn order(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[(u32, u32)] {
        &self.blocks
    }
}

impl fmt::Display for PerfectMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.blocks {
            write!(f, "({a},{b})")?;
        }
        Ok(())
    }
}

/// All (2n−1)!! matchings: the smallest unmatched element is paired with each
/// remaining element in increasing order, then the rest is matched
/// recursively. For n = 2: {12,34}, {13,24}, {14,23}.
#[derive(Debug, Clone)]
pub struct PerfectMatchings {
    n: usize,
    digits: Vec<u32>,
    remaining: u64,
}

impl PerfectMatchings {
    pub fn new(n: usize) -> Self {
        Self::range(n, 0..small_cardinality(ObjectClass::Matching, n))
    }

    pub fn range(n: usize, ranks: Range<u64>) -> Self {
        let total = small_cardinality(ObjectClass::Matching, n);
        let end = ranks.end.min(total);
        let start = ranks.start.min(end);
        let mut digits = vec![0u32; n];
        let mut r = start;
        for k in (0..n).rev() {
            let radix = 2 * (n - k) as u64 - 1;
            digits[k] = (r % radix) as u32;
            r /= radix;
        }
        Self {
            n,
            digits,
            remaining: end - start,
        }
    }

    fn decode(&self) -> PerfectMatching {
        let mut pool: Vec<u32> = (1..=2 * self.n as u32).collect();
        let mut blocks = Vec::with_capacity(self.n);
        for &d in &self.digits {
            let a = pool.remove(0);
            let b = pool.remove(d as usize);
            blocks.push((a, b));
        }
        PerfectMatching { blocks }
    }

    fn advance(&mut self) {
        for k in (0..self.n).rev() {
            let radix = 2 * (self.n - k) as u32 - 1;
            if self.digits[k] + 1 < radix {
                self.digits[k] += 1;
                return;
            }
            self.digits[k] = 0;
        }
    }
}

impl Iterator for PerfectMatchings {
    type Item = PerfectMatching;

    fn next(&mut self) -> Option<PerfectMatching> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.decode();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

pub fn enumerate_matchings(n: usize) -> PerfectMatchings {
    PerfectMatchings::new(n)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn words(n: usize) -> Vec<String> {
        enumerate_stirling(n).map(|s| s.to_string()).collect()
    }

    #[test]
    fn stirling_property() {
        assert!(is_stirling(&[1, 2, 2, 1]));
        assert!(!is_stirling(&[1, 2, 1, 2]));
        assert!(is_stirling(&[1, 2, 2, 1, 3, 3]));
        assert!(is_stirling(&[]));
        assert!(!is_stirling(&[1, 1, 1, 1]));
        assert!(!is_stirling(&[1, 3, 3, 1]));
        assert!(!is_stirling(&[0, 0]));
        assert!(!is_stirling(&[1]));
    }

    #[test]
    fn small_stirling_lists() {
        assert_eq!(words(0), vec![""]);
        assert_eq!(words(1), vec!["11"]);
        assert_eq!(words(2), vec!["1122", "1221", "2211"]);
        assert_eq!(enumerate_stirling(5).count(), 945);
    }

    #[test]
    fn stirling_counts_and_validity() {
        for n in 0..=7 {
            let all: Vec<_> = enumerate_stirling(n).collect();
            assert_eq!(BigUint::from(all.len()), double_factorial_odd(n));
            assert!(all.iter().all(|s| is_stirling(s.word())));
            let set: HashSet<_> = all.iter().collect();
            assert_eq!(set.len(), all.len());
        }
    }

    #[test]
    fn stirling_count_n8() {
        assert_eq!(enumerate_stirling(8).count(), 2_027_025);
    }

    #[test]
    fn ranges_partition_the_stream() {
        let full: Vec<_> = enumerate_stirling(5).collect();
        let mut glued = Vec::new();
        for chunk in [0..100, 100..101, 101..700, 700..945, 945..2000] {
            glued.extend(StirlingPermutations::range(5, chunk));
        }
        assert_eq!(full, glued);

        let full: Vec<_> = enumerate_signed(4).collect();
        let glued: Vec<_> = SignedPermutations::range(4, 0..77)
            .chain(SignedPermutations::range(4, 77..384))
            .collect();
        assert_eq!(full, glued);

        let full: Vec<_> = enumerate_matchings(4).collect();
        let glued: Vec<_> = PerfectMatchings::range(4, 0..50)
            .chain(PerfectMatchings::range(4, 50..105))
            .collect();
        assert_eq!(full, glued);

        let full: Vec<_> = enumerate_permutations(5).collect();
        let glued: Vec<_> = Permutations::range(5, 0..33)
            .chain(Permutations::range(5, 33..120))
            .collect();
        assert_eq!(full, glued);
    }

    #[test]
    fn signed_enumeration() {
        let one: Vec<_> = enumerate_signed(1).map(|p| p.values().to_vec()).collect();
        assert_eq!(one, vec![vec![1], vec![-1]]);
        assert_eq!(enumerate_signed(2).count(), 8);
        assert_eq!(enumerate_signed(3).count(), 48);
        let all: HashSet<_> = enumerate_signed(4).collect();
        assert_eq!(all.len(), 384);
        assert_eq!(enumerate_signed(0).count(), 1);
    }

    #[test]
    fn matching_enumeration() {
        let one: Vec<_> = enumerate_matchings(1).map(|m| m.blocks().to_vec()).collect();
        assert_eq!(one, vec![vec![(1, 2)]]);
        let two: Vec<_> = enumerate_matchings(2).map(|m| m.to_string()).collect();
        assert_eq!(two, vec!["(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"]);
        assert_eq!(enumerate_matchings(4).count(), 105);
        let all: HashSet<_> = enumerate_matchings(5).collect();
        assert_eq!(all.len(), 945);
    }

    #[test]
    fn permutation_enumeration() {
        let zero: Vec<_> = enumerate_permutations(0).collect();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].is_empty());
        assert_eq!(enumerate_permutations(3).count(), 6);
        assert_eq!(enumerate_permutations(4).count(), 24);
        let three: Vec<_> = enumerate_permutations(3).map(|p| p.to_string()).collect();
        assert_eq!(three, vec!["123", "132", "213", "231", "312", "321"]);
    }

    #[test]
    fn parsing_words() {
        let s: StirlingPermutation = "442332115665".parse().unwrap();
        assert_eq!(s.order(), 6);
        assert!("1212".parse::<StirlingPermutation>().is_err());
        let big: StirlingPermutation = "10 10 1 2 3 4 5 6 7 8 9 9 8 7 6 5 4 3 2 1".parse().unwrap();
        assert_eq!(big.order(), 10);
        assert_eq!(big.to_string(), "10 10 1 2 3 4 5 6 7 8 9 9 8 7 6 5 4 3 2 1");
        let p: SignedPermutation = "4-3152".parse().unwrap();
        assert_eq!(p.values(), &[4, -3, 1, 5, 2]);
        assert_eq!(p.to_string(), "4-3152");
        assert!("1-1".parse::<SignedPermutation>().is_err());
        assert!("132".parse::<Permutation>().is_ok());
        assert!("133".parse::<Permutation>().is_err());
        assert!(PerfectMatching::new(vec![(1, 2), (2, 3)]).is_err());
    }
}
