use std::collections::BTreeSet;

use stirlab::actions::{alpha, alpha_inverse, beta_move, beta_set, fs_move, index_sets};
use stirlab::families::{family_polynomial, Family};
use stirlab::grammar::{known, parse_polynomial};
use stirlab::poly::rational;
use stirlab::stats::{distribution, signed_stats, stirling_stats, Stat};
use stirlab::tables::{gamma_table, p_table, t_table};
use stirlab::{ObjectClass, Permutation, QPoly, SignedPermutation, StirlingPermutation, TriPoly};

fn tri(terms: &[([u32; 3], i64)]) -> TriPoly {
    TriPoly::from_terms(terms.iter().map(|&(e, c)| (e, rational(c))))
}

fn sp(s: &str) -> StirlingPermutation {
    s.parse().unwrap()
}

fn poly(s: &str) -> stirlab::GrammarPolynomial {
    parse_polynomial(s).unwrap()
}

fn p_golden() -> Vec<TriPoly> {
    vec![
        TriPoly::one(),
        tri(&[([1, 0, 0], 1)]),
        tri(&[([1, 1, 0], 1), ([1, 0, 1], 1), ([2, 0, 0], 1)]),
        // x(y²+z²) + 4x²(y+z) + 2xyz + 2x² + x³
        tri(&[
            ([1, 2, 0], 1),
            ([1, 0, 2], 1),
            ([2, 1, 0], 4),
            ([2, 0, 1], 4),
            ([1, 1, 1], 2),
            ([2, 0, 0], 2),
            ([3, 0, 0], 1),
        ]),
    ]
}

#[test]
fn p_polynomials() {
    let table = p_table(3);
    for (n, want) in p_golden().into_iter().enumerate() {
        assert_eq!(table.tri_poly(n), want, "recurrence, n = {n}");
        if n > 0 {
            let d = distribution(ObjectClass::Stirling, n, &[Stat::Lap, Stat::Dasc, Stat::Dp]).unwrap();
            assert_eq!(
                d.tri_poly(&[Stat::Lap, Stat::Dasc, Stat::Dp]).unwrap(),
                want,
                "enumeration, n = {n}"
            );
        }
    }
}

#[test]
fn g_polynomials() {
    let g = gamma_table(3);
    assert_eq!(g.tri_poly(0), TriPoly::one());
    assert_eq!(g.tri_poly(1), tri(&[([1, 0, 0], 1)]));
    assert_eq!(g.tri_poly(2), tri(&[([1, 1, 0], 1), ([2, 0, 0], 1)]));
    assert_eq!(
        g.tri_poly(3),
        tri(&[([1, 2, 0], 1), ([2, 1, 0], 4), ([2, 0, 0], 2), ([3, 0, 0], 1)])
    );
}

#[test]
fn t2_and_fap_sets() {
    let want = QPoly::from_integers([0, 1, 1, 1]);
    assert_eq!(t_table(2).polynomial(2), want);
    let d = distribution(ObjectClass::Stirling, 2, &[Stat::Fap]).unwrap();
    assert_eq!(d.polynomial(Stat::Fap).unwrap(), want);
    // One word per fap value: 2211 → 1, 1221 → 2, 1122 → 3.
    assert_eq!(stirling_stats(&sp("2211")).fap, 1);
    assert_eq!(stirling_stats(&sp("1221")).fap, 2);
    assert_eq!(stirling_stats(&sp("1122")).fap, 3);
}

#[test]
fn grammar_displays() {
    let flag = known::flag();
    assert_eq!(flag.derive(&poly("x*y")).unwrap(), poly("x*y*z^2 + x*y^2*z"));
    assert_eq!(flag.derive(&poly("x")).unwrap(), poly("x*y*z"));
    assert_eq!(flag.derive_n(&poly("x"), 2).unwrap(), poly("x*y*z*(y^2 + y*z + z^2)"));

    let g = known::lap_dasc_dp();
    assert_eq!(g.derive(&poly("z")).unwrap(), poly("x*y*z"));
    assert_eq!(
        g.derive_n(&poly("z"), 2).unwrap(),
        poly("z*(x*y*q*z + x*y*p*z + x^2*y^2)")
    );
    assert_eq!(g.derive(&poly("x*y")).unwrap(), poly("x*y*z*(p + q)"));
    assert_eq!(g.derive(&poly("p + q")).unwrap(), poly("2*x*y*z"));
}

#[test]
fn named_polynomials() {
    let show = |f, n| family_polynomial(f, n).unwrap().to_string();
    assert_eq!(show(Family::T, 2), "x + x^2 + x^3");
    assert_eq!(show(Family::N, 0), "1");
    assert_eq!(show(Family::C, 0), "1");
    assert_eq!(show(Family::C, 3), "x + 8*x^2 + 6*x^3");
    assert_eq!(show(Family::N, 2), "2*x + x^2");
    assert_eq!(show(Family::A, 3), "1 + 4*x + x^2");
    assert_eq!(show(Family::B, 2), "1 + 6*x + x^2");
    assert_eq!(show(Family::F, 1), "1 + x");
    assert_eq!(show(Family::M, 2), "1 + 2*x");
}

#[test]
fn micro_examples() {
    let s = stirling_stats(&sp("442332115665"));
    assert_eq!((s.ap, s.lap), (2, 3));
    let s = stirling_stats(&sp("244332115665"));
    assert_eq!((s.dasc, s.dp), (2, 2));

    let w = sp("2447887332115665");
    assert_eq!(fs_move(&w, 1).unwrap().to_string(), "4478873322115665");
    assert_eq!(fs_move(&w, 4).unwrap().to_string(), "2448877332115665");
    assert_eq!(fs_move(&fs_move(&w, 1).unwrap(), 9).unwrap(), w);
    assert_eq!(fs_move(&fs_move(&w, 4).unwrap(), 6).unwrap(), w);

    let b = sp("3443578876652211");
    assert_eq!(beta_move(&b, 1).to_string(), "1344357887665221");
    assert_eq!(beta_move(&b, 2).to_string(), "2344357887665211");
    assert_eq!(beta_move(&b, 6).to_string(), "3443567887652211");

    assert_eq!(alpha(&sp("344355661221")).to_string(), "435621");

    let pi: SignedPermutation = "4 -3 1 5 2".parse().unwrap();
    let r = signed_stats(&pi);
    assert_eq!((r.fdes, r.fasc), (4, 5));
}

#[test]
fn index_sets_by_hand() {
    let set = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>();
    let s = index_sets(&sp("2211"));
    assert_eq!((s.dasc, s.dp, s.lap), (set(&[]), set(&[3]), set(&[1])));
    let s = index_sets(&sp("1221"));
    assert_eq!((s.dasc, s.dp, s.lap), (set(&[1]), set(&[]), set(&[2])));
}

#[test]
fn bijection_examples() {
    let p = |s: &str| s.parse::<Permutation>().unwrap();
    assert_eq!(alpha_inverse(&p("123")).to_string(), "112233");
    assert_eq!(alpha_inverse(&p("132")).to_string(), "112332");
    assert_eq!(alpha_inverse(&p("213")).to_string(), "122133");
    assert_eq!(alpha_inverse(&p("231")).to_string(), "122331");
    assert_eq!(alpha_inverse(&p("312")).to_string(), "133122");
    assert_eq!(alpha_inverse(&p("321")).to_string(), "123321");
    assert_eq!(beta_set(&sp("332211"), &[1, 2].into()).to_string(), "123321");
}

#[test]
fn cli_style_distributions() {
    let d = distribution(ObjectClass::Signed, 1, &[Stat::Fdes]).unwrap();
    let rows: Vec<_> = d.rows().map(|(v, c)| (v[0], c.to_string())).collect();
    assert_eq!(rows, [(0, "1".to_string()), (1, "1".to_string())]);
}
