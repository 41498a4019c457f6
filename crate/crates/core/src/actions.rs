//! Foata–Strehl style involutions on Stirling permutations, the β-moves and
//! the map α onto ordinary permutations.
//!
//! Indices are 1-based and read against the padded word σ₀ σ₁ … σ₂ₙ σ₂ₙ₊₁
//! with σ₀ = σ₂ₙ₊₁ = 0.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::objects::{Permutation, StirlingPermutation};

/// Double ascents, descent-plateaus and left ascent-plateaus of a word.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexSets {
    pub dasc: BTreeSet<usize>,
    pub dp: BTreeSet<usize>,
    pub lap: BTreeSet<usize>,
}

pub fn index_sets(sigma: &StirlingPermutation) -> IndexSets {
    let p = sigma.padded();
    let mut out = IndexSets::default();
    for i in 1..p.len() - 1 {
        let (prev, cur, next) = (p[i - 1], p[i], p[i + 1]);
        if prev < cur && cur < next {
            out.dasc.insert(i);
        } else if cur == next && prev > cur {
            out.dp.insert(i);
        } else if cur == next && prev < cur {
            out.lap.insert(i);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    DoubleAscent,
    DescentPlateau,
}

fn kind_at(p: &[u32], i: usize) -> Option<Kind> {
    let (prev, cur, next) = (p[i - 1], p[i], p[i + 1]);
    if prev < cur && cur < next {
        Some(Kind::DoubleAscent)
    } else if prev > cur && cur == next {
        Some(Kind::DescentPlateau)
    } else {
        None
    }
}

/// Removes the letter at 1-based index `from` and reinserts it directly after
/// 1-based index `after` of the original word (0 means the front).
fn relocate(word: &[u32], from: usize, after: usize) -> Vec<u32> {
    let v = word[from - 1];
    let mut out = Vec::with_capacity(word.len());
    if after == 0 {
        out.push(v);
    }
    for (j, &w) in word.iter().enumerate() {
        let idx = j + 1;
        if idx != from {
            out.push(w);
        }
        if idx == after && after != 0 {
            out.push(v);
        }
    }
    out
}

/// Index of the last letter left of `i` that is smaller than `value`, or 0.
fn last_smaller_before(word: &[u32], i: usize, value: u32) -> usize {
    (1..i).rev().find(|&j| word[j - 1] < value).unwrap_or(0)
}

fn move_at(sigma: &StirlingPermutation, i: usize, kind: Kind) -> StirlingPermutation {
    let w = sigma.word();
    let v = w[i - 1];
    let target = match kind {
        Kind::DoubleAscent => {
            // The other copy of v lies to the right.
            (i + 1..=w.len()).find(|&j| w[j - 1] == v).expect("second occurrence")
        }
        Kind::DescentPlateau => last_smaller_before(w, i, v),
    };
    StirlingPermutation::from_word_unchecked(relocate(w, i, target))
}

/// The move at index i, defined when i is a double ascent or a
/// descent-plateau.
pub fn fs_move(sigma: &StirlingPermutation, i: usize) -> Result<StirlingPermutation> {
    let p = sigma.padded();
    if i == 0 || i >= p.len() - 1 {
        return Err(Error::Precondition(format!("index {i} is outside 1..={}", p.len() - 2)));
    }
    match kind_at(&p, i) {
        Some(kind) => Ok(move_at(sigma, i, kind)),
        None => Err(Error::Precondition(format!(
            "index {i} of {sigma} is neither a double ascent nor a descent-plateau"
        ))),
    }
}

/// The involution attached to a value: if the first copy of `value` sits at a
/// double ascent or a descent-plateau it is moved, otherwise σ is returned.
pub fn fs_toggle(sigma: &StirlingPermutation, value: u32) -> StirlingPermutation {
    let w = sigma.word();
    let Some(i) = w.iter().position(|&x| x == value).map(|j| j + 1) else {
        return sigma.clone();
    };
    match kind_at(&sigma.padded(), i) {
        Some(kind) => move_at(sigma, i, kind),
        None => sigma.clone(),
    }
}

/// Applies the involutions selected by the index set S. Each index that is a
/// double ascent or descent-plateau of σ names the value sitting there; the
/// involutions of those values are then applied. Other indices act trivially.
pub fn fs_action(sigma: &StirlingPermutation, s: &BTreeSet<usize>) -> StirlingPermutation {
    let p = sigma.padded();
    let values: Vec<u32> = s
        .iter()
        .filter(|&&i| i >= 1 && i < p.len() - 1 && kind_at(&p, i).is_some())
        .map(|&i| p[i])
        .collect();
    values.into_iter().fold(sigma.clone(), |acc, v| fs_toggle(&acc, v))
}

/// An orbit under the involutions: its dp-free representative and the
/// double ascents of that representative, which index the members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDescriptor {
    pub representative: StirlingPermutation,
    pub free: BTreeSet<usize>,
}

impl OrbitDescriptor {
    pub fn size(&self) -> u64 {
        1u64 << self.free.len()
    }
}

pub fn orbit(sigma: &StirlingPermutation) -> OrbitDescriptor {
    let sets = index_sets(sigma);
    let representative = fs_action(sigma, &sets.dp);
    let free = index_sets(&representative).dasc;
    OrbitDescriptor { representative, free }
}

/// All members of an orbit, one per subset of the free indices, in the order
/// of the subset bitmask.
pub fn orbit_members(desc: &OrbitDescriptor) -> impl Iterator<Item = StirlingPermutation> + '_ {
    let free: Vec<usize> = desc.free.iter().copied().collect();
    (0..desc.size()).map(move |mask| {
        let s: BTreeSet<usize> = free
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        fs_action(&desc.representative, &s)
    })
}

/// Moves the first copy of `x` directly after the last smaller letter to its
/// left (the front when there is none).
pub fn beta_move(sigma: &StirlingPermutation, x: u32) -> StirlingPermutation {
    let w = sigma.word();
    let Some(i) = w.iter().position(|&v| v == x).map(|j| j + 1) else {
        return sigma.clone();
    };
    let k = last_smaller_before(w, i, x);
    StirlingPermutation::from_word_unchecked(relocate(w, i, k))
}

/// Applies β_x for x ∈ S in increasing order of x. The moves do not commute in
/// general (331221 under x = 1, 2), and the increasing order is the one that
/// sends every word into the dp-free set.
pub fn beta_set(sigma: &StirlingPermutation, s: &BTreeSet<u32>) -> StirlingPermutation {
    s.iter().fold(sigma.clone(), |acc, &x| beta_move(&acc, x))
}

/// Keeps the second copy of every value.
pub fn alpha(sigma: &StirlingPermutation) -> Permutation {
    let mut seen = vec![false; sigma.order() + 1];
    let mut out = Vec::with_capacity(sigma.order());
    for &v in sigma.word() {
        if seen[v as usize] {
            out.push(v);
        } else {
            seen[v as usize] = true;
        }
    }
    Permutation::from_values_unchecked(out)
}

/// Values at the descent bottoms of π.
pub fn descent_bottoms(pi: &Permutation) -> BTreeSet<u32> {
    pi.values().windows(2).filter(|w| w[0] > w[1]).map(|w| w[1]).collect()
}

/// π(1)π(1)π(2)π(2)…π(n)π(n).
pub fn doubled(pi: &Permutation) -> StirlingPermutation {
    StirlingPermutation::from_word_unchecked(pi.values().iter().flat_map(|&v| [v, v]).collect())
}

pub fn alpha_inverse(pi: &Permutation) -> StirlingPermutation {
    beta_set(&doubled(pi), &descent_bottoms(pi))
}

/// Membership in the set where dp = 0 and lap + dasc = n.
pub fn is_in_d_n(sigma: &StirlingPermutation) -> bool {
    let sets = index_sets(sigma);
    sets.dp.is_empty() && sets.lap.len() + sets.dasc.len() == sigma.order()
}

fn format_set(s: &BTreeSet<u32>) -> String {
    if s.is_empty() {
        return "∅".to_string();
    }
    let parts: Vec<String> = s.iter().map(u32::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// One line of the bijection table, e.g.
/// `132 ↔ 113322 (S={2}) ↔ β_S(113322)=112332`.
pub fn bijection_trace(pi: &Permutation) -> String {
    let d = doubled(pi);
    let s = descent_bottoms(pi);
    let image = beta_set(&d, &s);
    let mut line = String::new();
    write!(line, "{pi} ↔ {d} (S={}) ↔ β_S({d})={image}", format_set(&s)).unwrap();
    line
}
