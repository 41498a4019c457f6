//! Registry of machine-checked identities. Each check scans n over a range
//! and stops at the first failure, which it reports as the witness.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use rayon::prelude::*;
use serde::Serialize;

use crate::actions::{
    alpha, alpha_inverse, beta_set, bijection_trace, fs_action, fs_toggle, index_sets, is_in_d_n, orbit, orbit_members,
};
use crate::error::{Error, Result};
use crate::families::{binomial_convolution, f_poly, m_poly};
use crate::grammar::{known, letter, parse_polynomial, substitute, GrammarPolynomial, Monomial};
use crate::objects::{
    double_factorial_odd, factorial, ObjectClass, Permutation, Permutations, StirlingPermutation, StirlingPermutations,
};
use crate::poly::{rational, QPoly, TriPoly, TruncatedEgf};
use crate::stats::{distribution_bounded, perm_des, stirling_stats, DistributionTable, Stat};
use crate::tables;

/// What an identity enumerates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    /// Stirling permutations (and possibly ordinary permutations) only.
    Stirling,
    /// Also signed permutations or perfect matchings.
    Mixed,
    /// Tables, recurrences and grammars; no enumeration.
    Tables,
}

impl std::str::FromStr for Scope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stirling" => Ok(Scope::Stirling),
            "mixed" => Ok(Scope::Mixed),
            "tables" => Ok(Scope::Tables),
            _ => Err(Error::Invalid(format!("unknown scope `{s}`"))),
        }
    }
}

/// Caller-supplied overrides of an identity's default range.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Bounds {
    pub max_n: Option<usize>,
    pub series_order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Params {
    pub min_n: usize,
    pub max_n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub n: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub params: Params,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub millis: u128,
}

type Outcome = Result<Option<Witness>>;
/// Start word, joint distribution, statistic and weight of each value.
type GrammarCase = (&'static str, Arc<DistributionTable>, Stat, Box<dyn Fn(u32) -> Monomial>);
type CheckFn = fn(&Context, &Params) -> Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Range {
    /// n runs over min_n..=max_n.
    Orders,
    /// The range is a series order.
    Series,
    /// n runs over orders; a second series order is also used.
    OrdersWithSeries(usize),
}

pub struct IdentityCheck {
    pub name: &'static str,
    pub description: &'static str,
    pub scope: Scope,
    pub min_n: usize,
    pub default_max_n: usize,
    /// Largest max_n accepted.
    pub limit: usize,
    range: Range,
    run: CheckFn,
}

impl IdentityCheck {
    pub fn params(&self, bounds: Bounds) -> Result<Params> {
        let (max_n, order) = match self.range {
            Range::Orders => (bounds.max_n.unwrap_or(self.default_max_n), None),
            Range::Series => {
                let o = bounds.series_order.or(bounds.max_n).unwrap_or(self.default_max_n);
                (o, Some(o))
            }
            Range::OrdersWithSeries(d) => (
                bounds.max_n.unwrap_or(self.default_max_n),
                Some(bounds.series_order.unwrap_or(d)),
            ),
        };
        if max_n > self.limit {
            return Err(Error::BoundExceeded {
                what: format!("`{}`", self.name),
                n: max_n,
                bound: self.limit,
            });
        }
        if let Some(o) = order {
            if o > SERIES_LIMIT {
                return Err(Error::BoundExceeded {
                    what: "series order".into(),
                    n: o,
                    bound: SERIES_LIMIT,
                });
            }
        }
        Ok(Params {
            min_n: self.min_n,
            max_n,
            order,
        })
    }
}

const STIRLING_LIMIT: usize = 8;
const SIGNED_LIMIT: usize = 7;
const GRAMMAR_LIMIT: usize = 12;
const TABLE_LIMIT: usize = 40;
const SERIES_LIMIT: usize = 16;

/// Shared memo of joint distributions, keyed by class and order.
#[derive(Default)]
pub struct Context {
    joint: Mutex<HashMap<(ObjectClass, usize), Arc<DistributionTable>>>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    /// Joint distribution of every statistic of `class` over objects of order n.
    pub fn joint(&self, class: ObjectClass, n: usize) -> Result<Arc<DistributionTable>> {
        if let Some(t) = self.joint.lock().unwrap().get(&(class, n)) {
            return Ok(t.clone());
        }
        let t = Arc::new(distribution_bounded(class, n, &Stat::for_class(class), STIRLING_LIMIT)?);
        self.joint.lock().unwrap().insert((class, n), t.clone());
        Ok(t)
    }

    fn poly(&self, class: ObjectClass, n: usize, stat: Stat) -> Result<QPoly> {
        self.joint(class, n)?.polynomial(stat)
    }

    fn tri(&self, class: ObjectClass, n: usize, stats: &[Stat]) -> Result<TriPoly> {
        self.joint(class, n)?.tri_poly(stats)
    }
}

// ---------------------------------------------------------------------------
// helpers

fn scan(p: &Params, mut f: impl FnMut(usize) -> Result<Option<String>>) -> Outcome {
    for n in p.min_n..=p.max_n {
        if let Some(detail) = f(n)? {
            return Ok(Some(Witness { n, detail }));
        }
    }
    Ok(None)
}

fn differ<T: PartialEq + std::fmt::Display>(what: &str, lhs: &T, rhs: &T) -> Option<String> {
    (lhs != rhs).then(|| format!("{what}: {lhs} ≠ {rhs}"))
}

fn q(c: &[i64]) -> QPoly {
    QPoly::from_integers(c.iter().copied())
}

fn big(n: &BigUint) -> BigInt {
    BigInt::from(n.clone())
}

const CHUNK: u64 = 2048;

/// First Stirling permutation (in enumeration order) on which `f` reports a
/// problem.
fn first_stirling_failure(n: usize, f: impl Fn(&StirlingPermutation) -> Option<String> + Sync) -> Option<String> {
    let total = u64::try_from(double_factorial_odd(n)).expect("order within bound");
    let chunks = total.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|c| {
        StirlingPermutations::range(n, c * CHUNK..((c + 1) * CHUNK).min(total))
            .find_map(|s| f(&s).map(|d| format!("{s}: {d}")))
    })
}

fn first_permutation_failure(n: usize, f: impl Fn(&Permutation) -> Option<String> + Sync) -> Option<String> {
    let total = u64::try_from(factorial(n)).expect("order within bound");
    let chunks = total.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|c| {
        Permutations::range(n, c * CHUNK..((c + 1) * CHUNK).min(total)).find_map(|p| f(&p).map(|d| format!("{p}: {d}")))
    })
}

fn xyz(powers: &[(&str, u32)]) -> Monomial {
    Monomial::from_powers(powers.iter().filter(|(_, e)| *e > 0).map(|&(l, e)| (letter(l), e)))
}

/// Σ over rows of count · monomial(row value).
fn weighted_sum(table: &DistributionTable, stat: Stat, mono: impl Fn(u32) -> Monomial) -> Result<GrammarPolynomial> {
    let m = table.marginal(&[stat])?;
    Ok(GrammarPolynomial::from_terms(
        m.rows().map(|(v, c)| (mono(v[0]), big(c))),
    ))
}

fn start(text: &str) -> GrammarPolynomial {
    parse_polynomial(text).expect("built-in start expression")
}

/// Coefficients of x^0..x^len of 1/(1 − x)^m.
fn negative_binomial(m: usize, len: usize) -> QPoly {
    QPoly::from_integers((0..=len).map(|j| binomial(BigInt::from(m + j - 1), BigInt::from(j))))
}

fn truncate(p: &QPoly, deg: usize) -> QPoly {
    QPoly::from_coeffs(p.coeffs().iter().take(deg + 1).cloned().collect())
}

fn egf_witness(order: usize, lhs: &TruncatedEgf, rhs: &TruncatedEgf) -> Outcome {
    let cmp = lhs.compare(rhs)?;
    debug_assert_eq!(lhs.order(), order);
    Ok(cmp.first_mismatch.map(|(k, a, b)| Witness {
        n: k,
        detail: format!("coefficient of t^{k}/{k}!: {a} ≠ {b}"),
    }))
}

fn gamma_brute(ctx: &Context, n: usize) -> Result<BTreeMap<(u32, u32), BigInt>> {
    let m = ctx
        .joint(ObjectClass::Stirling, n)?
        .marginal(&[Stat::Lap, Stat::Dasc, Stat::Dp])?;
    Ok(m.rows()
        .filter(|(v, _)| v[2] == 0)
        .map(|(v, c)| ((v[0], v[1]), big(c)))
        .collect())
}

fn gamma_row(t: &tables::CoefficientTable, n: usize) -> BTreeMap<(u32, u32), BigInt> {
    t.entries()
        .filter(|(k, _)| k[0] == n)
        .map(|(k, v)| ((k[1] as u32, k[2] as u32), v.clone()))
        .collect()
}

fn fmt_map(m: &BTreeMap<(u32, u32), BigInt>) -> String {
    let parts: Vec<String> = m.iter().map(|((i, j), c)| format!("({i},{j}):{c}")).collect();
    format!("{{{}}}", parts.join(","))
}

// ---------------------------------------------------------------------------
// checks

fn gessel_stanley(ctx: &Context, p: &Params) -> Outcome {
    let big_n = p.order.expect("series order");
    let s2 = tables::stirling2_table(big_n + p.max_n);
    scan(p, |k| {
        let lhs = QPoly::from_integers((0..=big_n).map(|n| s2.get(&[n + k, n])));
        let des = ctx.poly(ObjectClass::Stirling, k, Stat::Des)?;
        let rhs = truncate(&(&des * &negative_binomial(2 * k + 1, big_n)), big_n);
        Ok(differ("Σ S(n+k,n) x^n vs C_k/(1−x)^(2k+1)", &lhs, &rhs))
    })
}

fn bona(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let des = ctx.poly(ObjectClass::Stirling, n, Stat::Des)?;
        let asc = ctx.poly(ObjectClass::Stirling, n, Stat::Asc)?;
        let plat = ctx.poly(ObjectClass::Stirling, n, Stat::Plat)?;
        Ok(differ("des vs asc", &des, &asc).or_else(|| differ("des vs plat", &des, &plat)))
    })
}

fn matching_m(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let lhs = ctx.poly(ObjectClass::Matching, n, Stat::Ol)?;
        let rhs = ctx.poly(ObjectClass::Stirling, n, Stat::Ap)?;
        Ok(differ("Σ x^ol vs Σ x^ap", &lhs, &rhs))
    })
}

fn matching_n(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let lhs = ctx.poly(ObjectClass::Matching, n, Stat::El)?;
        let rhs = ctx.poly(ObjectClass::Stirling, n, Stat::Lap)?;
        Ok(differ("Σ x^el vs Σ x^lap", &lhs, &rhs))
    })
}

fn egf_m_squared(_: &Context, p: &Params) -> Outcome {
    let order = p.order.expect("series order");
    let m = TruncatedEgf::from_sequence((0..=order).map(m_poly).collect::<Result<_>>()?)?;
    let e = TruncatedEgf::exp_linear(&q(&[-2, 2]), order);
    let lhs = m.mul(&m)?.mul(&TruncatedEgf::constant(QPoly::x(), order).sub(&e)?)?;
    let rhs = TruncatedEgf::constant(q(&[-1, 1]), order);
    egf_witness(order, &lhs, &rhs)
}

fn egf_n_squared(_: &Context, p: &Params) -> Outcome {
    let order = p.order.expect("series order");
    let (_, nn) = tables::cn_nn_tables(order);
    let n = TruncatedEgf::from_sequence(nn)?;
    let xe = TruncatedEgf::exp_linear(&q(&[2, -2]), order).scale_poly(&QPoly::x());
    let lhs = n.mul(&n)?.mul(&TruncatedEgf::constant(QPoly::one(), order).sub(&xe)?)?;
    let rhs = TruncatedEgf::constant(q(&[1, -1]), order);
    egf_witness(order, &lhs, &rhs)
}

fn signed_des_2n_a(ctx: &Context, p: &Params) -> Outcome {
    let eul = tables::eulerian_table(p.max_n);
    scan(p, |n| {
        let lhs = ctx.poly(ObjectClass::Signed, n, Stat::DesA)?;
        let a = ctx.poly(ObjectClass::Permutation, n, Stat::Des)?;
        let two_n = rational(BigInt::from(1) << n);
        Ok(differ("A_n by enumeration vs table", &a, &eul.polynomial(n))
            .or_else(|| differ("Σ x^desA vs 2^n A_n", &lhs, &a.scale(&two_n))))
    })
}

fn nn_aa_convolutions(ctx: &Context, p: &Params) -> Outcome {
    let eul = tables::eulerian_table(p.max_n);
    let type_b = tables::type_b_eulerian_table(p.max_n);
    let st = |n, s| ctx.poly(ObjectClass::Stirling, n, s);
    scan(p, |n| {
        let nk: Vec<QPoly> = (0..=n).map(|k| st(k, Stat::Lap)).collect::<Result<_>>()?;
        let mk: Vec<QPoly> = (0..=n).map(|k| st(k, Stat::Ap)).collect::<Result<_>>()?;
        let lhs = (&QPoly::x() * &eul.polynomial(n)).scale(&rational(BigInt::from(1) << n));
        let rhs = binomial_convolution(n, |k| nk[k].clone(), |k| nk[k].clone());
        if let Some(d) = differ("2^n x A_n vs Σ C(n,k) N_k N_{n−k}", &lhs, &rhs) {
            return Ok(Some(d));
        }
        let b = if n <= 6 {
            ctx.poly(ObjectClass::Signed, n, Stat::DesB)?
        } else {
            type_b.polynomial(n)
        };
        let rhs = binomial_convolution(n, |k| nk[k].clone(), |k| mk[k].clone());
        Ok(differ("B_n vs Σ C(n,k) N_k M_{n−k}", &b, &rhs))
    })
}

fn flag_adin(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let f = ctx.poly(ObjectClass::Signed, n, Stat::Fdes)?;
        let a = ctx.poly(ObjectClass::Permutation, n, Stat::Des)?;
        let rhs = &q(&[1, 1]).pow(n as u32) * &a;
        Ok(differ("F_n vs (1+x)^n A_n", &f, &rhs))
    })
}

fn grammar_prop_all(ctx: &Context, p: &Params) -> Outcome {
    let g = known::flag();
    let n2 = |n: usize, v: u32, a: u32| 2 * n as u32 - a * v;
    scan(p, |n| {
        let signed = ctx.joint(ObjectClass::Signed, n)?;
        let stirling = ctx.joint(ObjectClass::Stirling, n)?;
        let cases: [GrammarCase; 5] = [
            (
                "x*y",
                signed.clone(),
                Stat::Fdes,
                Box::new(move |v| xyz(&[("x", 1), ("y", 1 + v), ("z", n2(n, v, 1))])),
            ),
            (
                "y^2",
                signed.clone(),
                Stat::DesA,
                Box::new(move |v| xyz(&[("y", 2 + 2 * v), ("z", n2(n, v, 2))])),
            ),
            (
                "y*z",
                signed.clone(),
                Stat::DesB,
                Box::new(move |v| xyz(&[("y", 1 + 2 * v), ("z", 1 + n2(n, v, 2))])),
            ),
            (
                "y",
                stirling.clone(),
                Stat::Ap,
                Box::new(move |v| xyz(&[("y", 1 + 2 * v), ("z", n2(n, v, 2))])),
            ),
            (
                "z",
                stirling.clone(),
                Stat::Lap,
                Box::new(move |v| xyz(&[("y", 2 * v), ("z", 1 + n2(n, v, 2))])),
            ),
        ];
        for (s, table, stat, mono) in cases {
            let lhs = g.derive_n(&start(s), n)?;
            let rhs = weighted_sum(&table, stat, mono)?;
            if let Some(d) = differ(&format!("D^n({s})"), &lhs, &rhs) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    })
}

fn flag_ap_grammar(ctx: &Context, p: &Params) -> Outcome {
    let g = known::flag();
    scan(p, |n| {
        let lhs = g.derive_n(&start("x"), n)?;
        let t = ctx.joint(ObjectClass::Stirling, n)?;
        let rhs = weighted_sum(&t, Stat::Fap, |v| xyz(&[("x", 1), ("y", v), ("z", 2 * n as u32 - v)]))?;
        Ok(differ("D^n(x)", &lhs, &rhs))
    })
}

fn flag_convolution(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let f = ctx.poly(ObjectClass::Signed, n, Stat::Fdes)?;
        let t: Vec<QPoly> = (0..=n)
            .map(|k| ctx.poly(ObjectClass::Stirling, k, Stat::Fap))
            .collect::<Result<_>>()?;
        let m: Vec<QPoly> = (0..=n)
            .map(|k| ctx.poly(ObjectClass::Stirling, k, Stat::Ap))
            .collect::<Result<_>>()?;
        let rhs = binomial_convolution(n, |k| t[k].clone(), |k| m[k].compose_x_squared());
        Ok(differ("F_n vs Σ C(n,k) T_k M_{n−k}(x²)", &f, &rhs))
    })
}

fn flag_dual(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let lhs = &QPoly::x() * &ctx.poly(ObjectClass::Signed, n, Stat::Fdes)?;
        let t: Vec<QPoly> = (0..=n)
            .map(|k| ctx.poly(ObjectClass::Stirling, k, Stat::Fap))
            .collect::<Result<_>>()?;
        let nn: Vec<QPoly> = (0..=n)
            .map(|k| ctx.poly(ObjectClass::Stirling, k, Stat::Lap))
            .collect::<Result<_>>()?;
        let rhs = binomial_convolution(n, |k| t[k].clone(), |k| nn[k].compose_x_squared());
        Ok(differ("Σ x^(fdes+1) vs Σ C(n,k) T_k N_{n−k}(x²)", &lhs, &rhs))
    })
}

fn t_recurrence(ctx: &Context, p: &Params) -> Outcome {
    let t = tables::t_table(p.max_n);
    scan(p, |n| {
        let brute = ctx.poly(ObjectClass::Stirling, n, Stat::Fap)?;
        Ok(differ("T_n recurrence vs enumeration", &t.polynomial(n), &brute))
    })
}

fn t_self_inverse(_: &Context, p: &Params) -> Outcome {
    let t = tables::t_table(p.max_n);
    scan(p, |n| {
        let lhs = binomial_convolution(n, |k| t.polynomial(k), |k| t.polynomial(k).compose_neg_x());
        let rhs = if n == 0 { QPoly::one() } else { QPoly::zero() };
        Ok(differ("Σ C(n,k) T_k(x) T_{n−k}(−x)", &lhs, &rhs))
    })
}

fn t_egf_product(_: &Context, p: &Params) -> Outcome {
    let order = p.order.expect("series order");
    let t = tables::t_table(order);
    let tt = TruncatedEgf::from_sequence((0..=order).map(|n| t.polynomial(n)).collect())?;
    let m = TruncatedEgf::from_sequence((0..=order).map(m_poly).collect::<Result<_>>()?)?;
    let product = tt.mul(&m.compose_x_squared())?;
    let f = TruncatedEgf::from_sequence((0..=order).map(f_poly).collect())?;
    if let Some(w) = egf_witness(order, &product, &f)? {
        return Ok(Some(w));
    }
    // F itself in cleared form: F·(x − e^{t(x²−1)}) = x − 1.
    let e = TruncatedEgf::exp_linear(&q(&[-1, 0, 1]), order);
    let lhs = product.mul(&TruncatedEgf::constant(QPoly::x(), order).sub(&e)?)?;
    egf_witness(order, &lhs, &TruncatedEgf::constant(q(&[-1, 1]), order))
}

fn asc_plat(_: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        Ok(first_stirling_failure(n, |s| {
            let r = stirling_stats(s);
            if r.asc != r.lap + r.dasc {
                Some(format!("asc = {} but lap + dasc = {}", r.asc, r.lap + r.dasc))
            } else if r.plat != r.lap + r.dp {
                Some(format!("plat = {} but lap + dp = {}", r.plat, r.lap + r.dp))
            } else {
                None
            }
        }))
    })
}

fn p_expected(ctx: &Context, n: usize) -> Result<GrammarPolynomial> {
    let m = ctx
        .joint(ObjectClass::Stirling, n)?
        .marginal(&[Stat::Lap, Stat::Dasc, Stat::Dp])?;
    Ok(GrammarPolynomial::from_terms(m.rows().map(|(v, c)| {
        let (i, j, k) = (v[0], v[1], v[2]);
        let mono = xyz(&[
            ("x", i),
            ("y", i),
            ("q", j),
            ("p", k),
            ("z", 2 * n as u32 + 1 - 2 * i - j - k),
        ]);
        (mono, big(c))
    })))
}

fn p_grammar(ctx: &Context, p: &Params) -> Outcome {
    let g = known::lap_dasc_dp();
    scan(p, |n| {
        let lhs = g.derive_n(&start("z"), n)?;
        Ok(differ("D^n(z)", &lhs, &p_expected(ctx, n)?))
    })
}

const LDD: [Stat; 3] = [Stat::Lap, Stat::Dasc, Stat::Dp];

fn p_recurrences(ctx: &Context, p: &Params) -> Outcome {
    let diff = tables::p_polys_differential(p.max_n);
    let table = tables::p_table(p.max_n);
    scan(p, |n| {
        let brute = ctx.tri(ObjectClass::Stirling, n, &LDD)?;
        Ok(differ("differential recurrence vs enumeration", &diff[n], &brute)
            .or_else(|| differ("coefficient recurrence vs enumeration", &table.tri_poly(n), &brute)))
    })
}

fn p_specializations(ctx: &Context, p: &Params) -> Outcome {
    let table = tables::p_table(p.max_n);
    let (x, one) = (QPoly::x(), QPoly::one());
    scan(p, |n| {
        let pn = table.tri_poly(n);
        let c = ctx.poly(ObjectClass::Stirling, n, Stat::Asc)?;
        let nn = ctx.poly(ObjectClass::Stirling, n, Stat::Lap)?;
        Ok(differ("P_n(x,x,1) vs C_n", &pn.eval_univariate(&x, &x, &one), &c)
            .or_else(|| differ("P_n(x,1,x) vs C_n", &pn.eval_univariate(&x, &one, &x), &c))
            .or_else(|| differ("P_n(x,1,1) vs N_n", &pn.eval_univariate(&x, &one, &one), &nn)))
    })
}

fn cn_nn_recurrences(ctx: &Context, p: &Params) -> Outcome {
    let (c, nn) = tables::cn_nn_tables(p.max_n);
    scan(p, |n| {
        let bc = ctx.poly(ObjectClass::Stirling, n, Stat::Asc)?;
        let bn = ctx.poly(ObjectClass::Stirling, n, Stat::Lap)?;
        Ok(differ("C_n recurrence vs enumeration", &c[n], &bc)
            .or_else(|| differ("N_n recurrence vs enumeration", &nn[n], &bn)))
    })
}

fn fs_symmetry(ctx: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let by_action = first_stirling_failure(n, |s| {
            let sets = index_sets(s);
            let all: BTreeSet<usize> = sets.dasc.union(&sets.dp).copied().collect();
            let image = fs_action(s, &all);
            let (a, b) = (stirling_stats(s), stirling_stats(&image));
            if (b.lap, b.dasc, b.dp) != (a.lap, a.dp, a.dasc) {
                return Some(format!(
                    "image {image} has (lap,dasc,dp) = ({},{},{})",
                    b.lap, b.dasc, b.dp
                ));
            }
            let back_sets = index_sets(&image);
            let back_all: BTreeSet<usize> = back_sets.dasc.union(&back_sets.dp).copied().collect();
            (fs_action(&image, &back_all) != *s).then(|| format!("action on {image} does not return"))
        });
        if by_action.is_some() {
            return Ok(by_action);
        }
        let pn = ctx.tri(ObjectClass::Stirling, n, &LDD)?;
        if let Some(d) = differ("P_n(x,y,z) vs P_n(x,z,y)", &pn, &pn.swap_yz()) {
            return Ok(Some(d));
        }
        let asc = ctx.tri(ObjectClass::Stirling, n, &[Stat::Lap, Stat::Asc])?;
        let plat = ctx.tri(ObjectClass::Stirling, n, &[Stat::Lap, Stat::Plat])?;
        Ok(differ("Σ x^lap y^asc vs Σ x^lap y^plat", &asc, &plat))
    })
}

fn fs_orbits(_: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        let values = 1..=n as u32;
        let per_word = first_stirling_failure(n, |s| {
            for v in values.clone() {
                let t = fs_toggle(s, v);
                if fs_toggle(&t, v) != *s {
                    return Some(format!("toggle of {v} is not an involution"));
                }
                for u in v + 1..=n as u32 {
                    if fs_toggle(&fs_toggle(s, u), v) != fs_toggle(&t, u) {
                        return Some(format!("toggles of {u} and {v} do not commute"));
                    }
                }
            }
            let o = orbit(s);
            let rep = stirling_stats(&o.representative);
            if rep.dp != 0 {
                return Some(format!("representative {} has dp = {}", o.representative, rep.dp));
            }
            let mut found = false;
            for (mask, m) in orbit_members(&o).enumerate() {
                let st = stirling_stats(&m);
                let k = mask.count_ones();
                if st.lap != rep.lap || st.dp != k || st.dasc + k != rep.dasc {
                    return Some(format!("orbit member {m} has wrong statistics"));
                }
                found |= m == *s;
            }
            (!found).then(|| format!("not a member of the orbit of {}", o.representative))
        });
        if per_word.is_some() {
            return Ok(per_word);
        }
        let total: u64 = StirlingPermutations::new(n)
            .par_bridge()
            .map(|s| {
                let r = stirling_stats(&s);
                if r.dp == 0 {
                    1u64 << r.dasc
                } else {
                    0
                }
            })
            .sum();
        let expected = u64::try_from(double_factorial_odd(n)).unwrap();
        Ok((total != expected).then(|| format!("orbit sizes sum to {total}, expected {expected}")))
    })
}

fn gamma_expansion(ctx: &Context, p: &Params) -> Outcome {
    let table = tables::gamma_table(p.max_n);
    scan(p, |n| {
        let brute = gamma_brute(ctx, n)?;
        let rec = gamma_row(&table, n);
        if brute != rec {
            return Ok(Some(format!(
                "γ by count {} ≠ γ by recurrence {}",
                fmt_map(&brute),
                fmt_map(&rec)
            )));
        }
        let y_plus_z = &TriPoly::var(1) + &TriPoly::var(2);
        let mut expansion = TriPoly::zero();
        for ((i, j), c) in &brute {
            let term = &TriPoly::term([*i, 0, 0], rational(c.clone())) * &y_plus_z.pow(*j);
            expansion = &expansion + &term;
        }
        let pn = ctx.tri(ObjectClass::Stirling, n, &LDD)?;
        Ok(differ("P_n vs Σ γ x^i (y+z)^j", &pn, &expansion))
    })
}

fn gamma_grammar(_: &Context, p: &Params) -> Outcome {
    let g = known::gamma();
    let big_g = known::lap_dasc_dp();
    let table = tables::gamma_table(p.max_n);
    let bindings: BTreeMap<_, _> = [
        (letter("u"), start("x*y")),
        (letter("v"), start("p + q")),
        (letter("w"), start("z")),
    ]
    .into();
    scan(p, |n| {
        let lhs = g.derive_n(&start("w"), n)?;
        let rhs = GrammarPolynomial::from_terms(
            gamma_row(&table, n)
                .into_iter()
                .map(|((i, j), c)| (xyz(&[("u", i), ("v", j), ("w", 2 * n as u32 + 1 - 2 * i - j)]), c)),
        );
        if let Some(d) = differ("D^n(w) vs γ table", &lhs, &rhs) {
            return Ok(Some(d));
        }
        let reduced = substitute(&lhs, &bindings);
        Ok(differ(
            "D^n(w) at u=xy, v=p+q, w=z vs D^n(z)",
            &reduced,
            &big_g.derive_n(&start("z"), n)?,
        ))
    })
}

fn gamma_recurrence(ctx: &Context, p: &Params) -> Outcome {
    let table = tables::gamma_table(p.max_n);
    scan(p, |n| {
        let brute = gamma_brute(ctx, n)?;
        let rec = gamma_row(&table, n);
        Ok((brute != rec).then(|| format!("γ by count {} ≠ γ by recurrence {}", fmt_map(&brute), fmt_map(&rec))))
    })
}

fn gamma_vanishing(_: &Context, p: &Params) -> Outcome {
    let table = tables::gamma_table(p.max_n);
    let g = known::gamma();
    let (u, v) = (letter("u"), letter("v"));
    scan(p, |n| {
        if let Some(((i, j), _)) = gamma_row(&table, n)
            .into_iter()
            .find(|((i, j), _)| (i + j) as usize > n)
        {
            return Ok(Some(format!("γ_{{{n},{i},{j}}} ≠ 0 in the recurrence table")));
        }
        let d = g.derive_n(&start("w"), n)?;
        let offending = d
            .terms()
            .find(|(m, _)| (m.exponent(&u) + m.exponent(&v)) as usize > n)
            .map(|(m, _)| format!("D^n(w) contains {m}"));
        Ok(offending)
    })
}

fn g_recurrence(_: &Context, p: &Params) -> Outcome {
    let table = tables::gamma_table(p.max_n);
    let diff = tables::g_polys_differential(p.max_n);
    scan(p, |n| {
        Ok(differ(
            "G_n differential vs triple recurrence",
            &diff[n],
            &table.tri_poly(n),
        ))
    })
}

fn n_closed_form(ctx: &Context, p: &Params) -> Outcome {
    let (_, nn) = tables::cn_nn_tables(p.max_n);
    scan(p, |n| {
        let closed = tables::n_poly_closed(n);
        let brute = ctx.poly(ObjectClass::Stirling, n, Stat::Lap)?;
        Ok(differ("closed form vs enumeration", &closed, &brute)
            .or_else(|| differ("closed form vs recurrence", &closed, &nn[n])))
    })
}

fn gamma_weighted_sums(ctx: &Context, p: &Params) -> Outcome {
    let table = tables::gamma_table(p.max_n);
    scan(p, |n| {
        let nn = ctx.poly(ObjectClass::Stirling, n, Stat::Lap)?;
        for i in 1..=n {
            let w = match tables::gamma_weighted_sum(n, i, &table) {
                Ok(w) => w,
                Err(Error::IdentityViolation(d)) => return Ok(Some(d)),
                Err(e) => return Err(e),
            };
            if rational(w.weighted.clone()) != nn.coeff(i) {
                return Ok(Some(format!(
                    "i = {i}: Σ 2^j γ = {} but [x^i] N_n = {}",
                    w.weighted,
                    nn.coeff(i)
                )));
            }
        }
        Ok(None)
    })
}

fn gamma_eulerian(ctx: &Context, p: &Params) -> Outcome {
    let table = tables::gamma_table(p.max_n);
    scan(p, |n| {
        let a = ctx.poly(ObjectClass::Permutation, n, Stat::Des)?;
        for k in 0..n {
            let g = rational(table.get(&[n, n - k, k]));
            if g != a.coeff(k) {
                return Ok(Some(format!(
                    "γ_{{{n},{},{k}}} = {g} but ⟨{n},{k}⟩ = {}",
                    n - k,
                    a.coeff(k)
                )));
            }
        }
        Ok(None)
    })
}

const BIJECTION_TABLE: [&str; 6] = [
    "123 ↔ 112233 (S=∅) ↔ β_S(112233)=112233",
    "132 ↔ 113322 (S={2}) ↔ β_S(113322)=112332",
    "213 ↔ 221133 (S={1}) ↔ β_S(221133)=122133",
    "231 ↔ 223311 (S={1}) ↔ β_S(223311)=122331",
    "312 ↔ 331122 (S={1}) ↔ β_S(331122)=133122",
    "321 ↔ 332211 (S={1,2}) ↔ β_S(332211)=123321",
];

/// The six lines of the S_3 bijection table.
pub fn bijection_table_s3() -> Vec<String> {
    Permutations::new(3).map(|p| bijection_trace(&p)).collect()
}

fn alpha_bijection(_: &Context, p: &Params) -> Outcome {
    scan(p, |n| {
        if n == 3 {
            let lines = bijection_table_s3();
            if let Some((got, want)) = lines.iter().zip(BIJECTION_TABLE).find(|(g, w)| g != w) {
                return Ok(Some(format!("table line `{got}` should read `{want}`")));
            }
        }
        let inverse = first_permutation_failure(n, |pi| {
            let s = alpha_inverse(pi);
            let st = stirling_stats(&s);
            if !is_in_d_n(&s) {
                Some(format!("image {s} is not in D_n"))
            } else if alpha(&s) != *pi {
                Some(format!("α({s}) = {}", alpha(&s)))
            } else if st.dasc != perm_des(pi) {
                Some(format!("dasc({s}) = {} but des = {}", st.dasc, perm_des(pi)))
            } else {
                None
            }
        });
        if inverse.is_some() {
            return Ok(inverse);
        }
        let all: BTreeSet<u32> = (1..=n as u32).collect();
        let beta = first_stirling_failure(n, |s| {
            let b = beta_set(s, &all);
            if !is_in_d_n(&b) {
                Some(format!("β_[n] gives {b}, not in D_n"))
            } else if alpha(&b) != alpha(s) {
                Some(format!("α changes under β_[n] ({b})"))
            } else if is_in_d_n(s) && b != *s {
                Some(format!("β_[n] moves an element of D_n to {b}"))
            } else {
                None
            }
        });
        if beta.is_some() {
            return Ok(beta);
        }
        let d_n = StirlingPermutations::new(n).par_bridge().filter(is_in_d_n).count();
        let n_fact = factorial(n);
        Ok((BigUint::from(d_n) != n_fact).then(|| format!("|D_n| = {d_n} but n! = {n_fact}")))
    })
}

// ---------------------------------------------------------------------------

macro_rules! check {
    ($name:literal, $desc:literal, $scope:ident, $min:literal..=$max:literal, $limit:expr, $range:expr, $run:ident) => {
        IdentityCheck {
            name: $name,
            description: $desc,
            scope: Scope::$scope,
            min_n: $min,
            default_max_n: $max,
            limit: $limit,
            range: $range,
            run: $run,
        }
    };
}

use Range::{Orders, Series};

pub static REGISTRY: &[IdentityCheck] = &[
    check!(
        "gessel-stanley",
        "(1−x)^(2k+1) Σ S(n+k,n) x^n equals the descent polynomial of Q_k, as a truncated series; table vs enumeration",
        Stirling,
        0..=4,
        STIRLING_LIMIT,
        Range::OrdersWithSeries(10),
        gessel_stanley
    ),
    check!(
        "bona-equidistribution",
        "des, asc and plat are equidistributed over Q_n",
        Stirling,
        1..=6,
        STIRLING_LIMIT,
        Orders,
        bona
    ),
    check!(
        "matching-M",
        "Σ x^ol over perfect matchings equals Σ x^ap over Q_n",
        Mixed,
        0..=6,
        STIRLING_LIMIT,
        Orders,
        matching_m
    ),
    check!(
        "matching-N",
        "Σ x^el over perfect matchings equals Σ x^lap over Q_n",
        Mixed,
        0..=6,
        STIRLING_LIMIT,
        Orders,
        matching_n
    ),
    check!(
        "egf-M-squared",
        "M(x,t)^2 (x − e^{2t(x−1)}) = x − 1 with M_n from the flag grammar",
        Tables,
        0..=8,
        SERIES_LIMIT,
        Series,
        egf_m_squared
    ),
    check!(
        "egf-N-squared",
        "N(x,t)^2 (1 − x e^{2t(1−x)}) = 1 − x with N_n from its recurrence",
        Tables,
        0..=8,
        SERIES_LIMIT,
        Series,
        egf_n_squared
    ),
    check!(
        "signed-des-2nA",
        "Σ x^desA over B_n equals 2^n A_n(x)",
        Mixed,
        0..=6,
        SIGNED_LIMIT,
        Orders,
        signed_des_2n_a
    ),
    check!(
        "nn-aa-convolutions",
        "2^n x A_n = Σ C(n,k) N_k N_{n−k} and B_n = Σ C(n,k) N_k M_{n−k}",
        Mixed,
        1..=7,
        STIRLING_LIMIT,
        Orders,
        nn_aa_convolutions
    ),
    check!(
        "flag-adin",
        "F_n(x) = (1+x)^n A_n(x) with F_n by enumeration",
        Mixed,
        0..=6,
        SIGNED_LIMIT,
        Orders,
        flag_adin
    ),
    check!(
        "grammar-prop-all",
        "D^n of xy, y^2, yz, y and z under the flag grammar vs enumeration",
        Mixed,
        0..=5,
        SIGNED_LIMIT,
        Orders,
        grammar_prop_all
    ),
    check!(
        "flag-ap-grammar",
        "D^n(x) = x Σ y^fap z^(2n−fap) under the flag grammar",
        Stirling,
        0..=6,
        STIRLING_LIMIT,
        Orders,
        flag_ap_grammar
    ),
    check!(
        "flag-convolution",
        "F_n(x) = Σ C(n,k) T_k(x) M_{n−k}(x^2), all by enumeration",
        Mixed,
        0..=6,
        SIGNED_LIMIT,
        Orders,
        flag_convolution
    ),
    check!(
        "flag-dual",
        "Σ x^(fdes+1) = Σ C(n,k) T_k(x) N_{n−k}(x^2) for n ≥ 1",
        Mixed,
        1..=6,
        SIGNED_LIMIT,
        Orders,
        flag_dual
    ),
    check!(
        "t-recurrence",
        "the T(n,k) recurrence vs enumeration of fap",
        Stirling,
        0..=6,
        STIRLING_LIMIT,
        Orders,
        t_recurrence
    ),
    check!(
        "t-self-inverse",
        "Σ C(n,k) T_k(x) T_{n−k}(−x) = δ_{0,n} (single path: recurrence table)",
        Tables,
        0..=10,
        TABLE_LIMIT,
        Orders,
        t_self_inverse
    ),
    check!(
        "t-egf-product",
        "T(x,t) M(x^2,t) = F(x,t) and F (x − e^{t(x^2−1)}) = x − 1",
        Tables,
        0..=6,
        SERIES_LIMIT,
        Series,
        t_egf_product
    ),
    check!(
        "asc-plat-decomposition",
        "asc = lap + dasc and plat = lap + dp on every word (single path)",
        Stirling,
        1..=6,
        STIRLING_LIMIT,
        Orders,
        asc_plat
    ),
    check!(
        "p-grammar",
        "D^n(z) under the (lap, dasc, dp) grammar vs enumeration",
        Stirling,
        0..=5,
        STIRLING_LIMIT,
        Orders,
        p_grammar
    ),
    check!(
        "p-recurrences",
        "differential and coefficient recurrences for P_n vs enumeration",
        Stirling,
        0..=6,
        STIRLING_LIMIT,
        Orders,
        p_recurrences
    ),
    check!(
        "p-specializations",
        "P_n(x,x,1) = P_n(x,1,x) = C_n(x) and P_n(x,1,1) = N_n(x)",
        Stirling,
        0..=7,
        STIRLING_LIMIT,
        Orders,
        p_specializations
    ),
    check!(
        "cn-nn-recurrences",
        "recurrences for C_n and N_n vs enumeration",
        Stirling,
        0..=6,
        STIRLING_LIMIT,
        Orders,
        cn_nn_recurrences
    ),
    check!(
        "fs-symmetry",
        "P_n(x,y,z) = P_n(x,z,y) and (lap, asc) ~ (lap, plat), by the action and by counting",
        Stirling,
        1..=6,
        STIRLING_LIMIT,
        Orders,
        fs_symmetry
    ),
    check!(
        "fs-orbits",
        "value-indexed involutions commute; orbits partition Q_n with lap constant",
        Stirling,
        1..=5,
        STIRLING_LIMIT,
        Orders,
        fs_orbits
    ),
    check!(
        "gamma-expansion",
        "P_n = Σ γ_{n,i,j} x^i (y+z)^j; γ by counting vs recurrence",
        Stirling,
        1..=7,
        STIRLING_LIMIT,
        Orders,
        gamma_expansion
    ),
    check!(
        "gamma-grammar",
        "D^n(w) under {u→uvw, v→2uw, w→uw} vs the γ table and vs D^n(z)",
        Tables,
        0..=8,
        GRAMMAR_LIMIT,
        Orders,
        gamma_grammar
    ),
    check!(
        "gamma-recurrence",
        "γ recurrence vs counting dp-free words",
        Stirling,
        1..=8,
        STIRLING_LIMIT,
        Orders,
        gamma_recurrence
    ),
    check!(
        "gamma-vanishing",
        "γ_{n,i,j} = 0 for i + j > n, in the table and in D^n(w)",
        Tables,
        0..=8,
        GRAMMAR_LIMIT,
        Orders,
        gamma_vanishing
    ),
    check!(
        "g-recurrence",
        "the G_n(x,y) differential recurrence vs the γ triple recurrence",
        Tables,
        0..=10,
        TABLE_LIMIT,
        Orders,
        g_recurrence
    ),
    check!(
        "n-closed-form",
        "closed form of N_n vs enumeration and recurrence",
        Stirling,
        0..=8,
        STIRLING_LIMIT,
        Orders,
        n_closed_form
    ),
    check!(
        "gamma-weighted-sums",
        "Σ 2^j γ_{n,i,j} equals [x^i] N_n and the alternating Stirling sum",
        Stirling,
        1..=8,
        STIRLING_LIMIT,
        Orders,
        gamma_weighted_sums
    ),
    check!(
        "gamma-eulerian",
        "γ_{n,n−k,k} = ⟨n,k⟩ with Eulerian numbers by enumeration",
        Stirling,
        1..=8,
        STIRLING_LIMIT,
        Orders,
        gamma_eulerian
    ),
    check!(
        "alpha-bijection",
        "α restricted to D_n is a bijection onto S_n with dasc ↦ des; β_[n] lands in D_n; the S_3 table",
        Stirling,
        1..=6,
        STIRLING_LIMIT,
        Orders,
        alpha_bijection
    ),
];

pub fn lookup(name: &str) -> Result<&'static IdentityCheck> {
    REGISTRY
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::UnknownIdentity(name.to_string()))
}

fn run_with(ctx: &Context, check: &IdentityCheck, params: Params) -> Result<IdentityResult> {
    let started = Instant::now();
    let witness = (check.run)(ctx, &params)?;
    Ok(IdentityResult {
        name: check.name.to_string(),
        params,
        pass: witness.is_none(),
        witness,
        millis: started.elapsed().as_millis(),
    })
}

pub fn run_identity(name: &str, bounds: Bounds) -> Result<IdentityResult> {
    let check = lookup(name)?;
    let params = check.params(bounds)?;
    run_with(&Context::new(), check, params)
}

/// Runs every registered identity (optionally only one scope) in registry
/// order. All bounds are validated before anything runs. Identities share one
/// distribution cache, so they run one after another while each parallelizes
/// internally.
pub fn run_all(bounds: Bounds, scope: Option<Scope>) -> Result<Vec<IdentityResult>> {
    let selected: Vec<(&IdentityCheck, Params)> = REGISTRY
        .iter()
        .filter(|c| scope.is_none_or(|s| c.scope == s))
        .map(|c| Ok((c, c.params(bounds)?)))
        .collect::<Result<_>>()?;
    let ctx = Context::new();
    selected.into_iter().map(|(c, p)| run_with(&ctx, c, p)).collect()
}
