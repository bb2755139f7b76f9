use bipartid::algebra::{parse_poly, BiSeries, PochhammerSpec};
use bipartid::cylindric::*;
use std::collections::BTreeMap;

fn p(s: &str) -> Profile {
    s.parse().unwrap()
}

fn poly(s: &str) -> bipartid::algebra::LaurentPoly {
    parse_poly(s, &["x", "q"]).unwrap()
}

fn family(n: usize) -> BTreeMap<Profile, BiSeries> {
    cw_family(3, 3, n).unwrap()
}

/// `Σ coeff · G(x q^shift)`.
fn combo(terms: &[(&str, &BiSeries, usize)]) -> BiSeries {
    let n = terms[0].1.qorder();
    terms.iter().fold(BiSeries::zero(n), |acc, (c, g, k)| acc.add(&g.apply_xshift(*k).mul_poly(&poly(c)).unwrap()))
}

#[test]
fn recursion_agrees_with_enumeration_for_all_profiles() {
    let n = 20;
    for (profile, g) in family(n) {
        let direct = enumerate_cylindric(&profile, n as u32 - 1);
        assert_eq!(g_to_f(&g, n), direct, "profile {profile}");
        assert_eq!(g.slice(0), bipartid::algebra::QSeries::one(n));
    }
}

#[test]
fn printed_example_recursions() {
    let f = family(30);
    let g = |s: &str| &f[&p(s)];
    assert_eq!(*g("3,0,0"), combo(&[("1", g("2,1,0"), 1)]));
    assert_eq!(*g("2,1,0"), combo(&[("2", g("2,0,1"), 1), ("-(1-xq)", g("1,1,1"), 2)]));
    assert_eq!(*g("2,0,1"), combo(&[("1", g("3,0,0"), 1), ("1", g("1,1,1"), 1), ("-(1-xq)", g("2,1,0"), 2)]));
    assert_eq!(
        *g("1,1,1"),
        combo(&[("3", g("2,1,0"), 1), ("-3(1-xq)", g("2,0,1"), 2), ("(1-xq)(1-xq^2)", g("1,1,1"), 3)])
    );
}

#[test]
fn first_order_relations_and_two_by_two_system() {
    let f = family(30);
    let g = |s: &str| &f[&p(s)];
    assert_eq!(*g("2,0,1"), combo(&[("1", g("1,1,1"), 1), ("xq", g("3,0,0"), 1)]));
    assert_eq!(*g("2,1,0"), combo(&[("1+xq", g("1,1,1"), 2), ("2xq^2", g("3,0,0"), 2)]));
    assert_eq!(*g("3,0,0"), combo(&[("1+xq^2", g("1,1,1"), 3), ("2xq^3", g("3,0,0"), 3)]));
    assert_eq!(*g("1,1,1"), combo(&[("3xq^3(1+xq)", g("3,0,0"), 3), ("1+2xq+2xq^2+x^2q^3", g("1,1,1"), 3)]));
}

#[test]
fn specializations_give_level_three_products() {
    let n = 30;
    let f = family(n);
    let at_one = |s: &str| f[&p(s)].at_x_one();
    assert_eq!(at_one("1,1,1"), PochhammerSpec::bir().expand(n).unwrap());
    assert_eq!(at_one("3,0,0"), PochhammerSpec::birp().expand(n).unwrap());
}
