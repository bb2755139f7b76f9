//! Algebraic and structural laws checked over every element of small,
//! fixed families; nothing here is sampled.

use bipartid::algebra::{parse_poly, BiSeries, LaurentPoly, QSeries, RationalFunction};
use bipartid::automata::{bir_forbidden_words, build_avoidance_dfa, decode, encode, Dfa};
use bipartid::partitions::{enumerate_2colored, Conditions};
use num_bigint::BigInt;

const VARS: [&str; 2] = ["x", "q"];

/// Every polynomial with coefficients in {-1, 0, 1} on the support
/// `1, x, q^-1, xq^2`.
fn polys() -> Vec<LaurentPoly> {
    let support = [[0, 0], [1, 0], [0, -1], [1, 2]];
    (0..81)
        .map(|mut code: usize| {
            let mut p = LaurentPoly::zero(&VARS);
            for e in support {
                p.add_term(e.to_vec(), BigInt::from(code as i64 % 3 - 1));
                code /= 3;
            }
            p
        })
        .collect()
}

#[test]
fn polynomial_ring_laws() {
    let ps = polys();
    let one = LaurentPoly::one(&VARS);
    for a in &ps {
        assert_eq!(a * &one, *a);
        assert!((a + &(-a)).is_zero());
        for b in &ps {
            assert_eq!(a + b, b + a);
            assert_eq!(a * b, b * a);
            if !a.is_zero() && !b.is_zero() {
                assert!(!(a * b).is_zero(), "zero divisor {a} * {b}");
            }
        }
    }
    // triples over a thinner slice keep this under a second
    for a in ps.iter().step_by(4) {
        for b in ps.iter().step_by(3) {
            for c in ps.iter().step_by(5) {
                assert_eq!(&(a * b) * c, a * &(b * c));
                assert_eq!(a * &(b + c), &(a * b) + &(a * c));
                assert_eq!(&(a + b) + c, a + &(b + c));
            }
        }
    }
}

#[test]
fn exact_division_inverts_multiplication() {
    let ps = polys();
    for a in ps.iter().step_by(2) {
        for b in ps.iter().filter(|p| !p.is_zero()).step_by(3) {
            assert_eq!((a * b).div_exact(b), Some(a.clone()), "({a} * {b}) / {b}");
        }
    }
}

#[test]
fn display_parses_back() {
    for p in polys() {
        assert_eq!(parse_poly(&p.to_string(), &VARS).unwrap(), p, "{p}");
    }
}

#[test]
fn rational_function_field_laws() {
    let ps: Vec<_> = polys().into_iter().step_by(7).filter(|p| !p.is_zero()).collect();
    let one = RationalFunction::from_poly(LaurentPoly::one(&VARS));
    for a in &ps {
        for b in &ps {
            let r = RationalFunction::new(a.clone(), b.clone()).unwrap();
            let inv = RationalFunction::new(b.clone(), a.clone()).unwrap();
            assert!(r.mul(&inv).unwrap().equals(&one));
            assert!(r.sub(&r).unwrap().is_zero());
            assert!(r.normalize().unwrap().equals(&r));
            for c in &ps {
                let s = RationalFunction::from_poly(c.clone());
                assert!(r.add(&s).unwrap().sub(&s).unwrap().equals(&r));
                assert!(r.div(&s).unwrap().mul(&s).unwrap().equals(&r));
            }
        }
    }
}

#[test]
fn series_inverse_laws() {
    let order = 9;
    for code in 0..243usize {
        let mut cs = vec![1i64];
        let mut k = code;
        for _ in 0..5 {
            cs.push((k % 3) as i64 - 1);
            k /= 3;
        }
        let s = QSeries::from_i64s(&cs, order);
        let inv = s.invert().unwrap();
        assert_eq!(s.mul(&inv), QSeries::one(order));
        assert_eq!(inv.invert().unwrap(), s);
    }
    assert!(QSeries::from_i64s(&[0, 1], order).invert().is_err());
}

#[test]
fn xshift_composes_and_commutes_with_products() {
    let n = 14;
    let mut s = BiSeries::zero(n);
    let mut t = BiSeries::zero(n);
    for m in 0..4u32 {
        for e in 0..n {
            s.add_term(m, e, &BigInt::from((m as i64 + 2 * e as i64) % 5 - 2));
            t.add_term(m, e, &BigInt::from((3 * m as i64 + e as i64) % 4 - 1));
        }
    }
    for a in 0..5 {
        assert_eq!(s.apply_xshift(a).mul(&t.apply_xshift(a)), s.mul(&t).apply_xshift(a));
        for b in 0..5 {
            assert_eq!(s.apply_xshift(a).apply_xshift(b), s.apply_xshift(a + b));
        }
    }
}

#[test]
fn minimization_is_a_fixed_point() {
    let words = bir_forbidden_words();
    for k in 1..=words.len() {
        let d = build_avoidance_dfa(&words[..k]).unwrap();
        assert_eq!(d.minimize(), d, "first {k} words");
        assert_eq!(d.canonical(), d);
    }
    // a redundant copy of every state minimizes back to the same machine
    let d = build_avoidance_dfa(&words).unwrap();
    let n = d.num_states();
    let doubled: Vec<[usize; 13]> = (0..2 * n)
        .map(|s| {
            let mut row = [0; 13];
            for (i, l) in bipartid::automata::Letter::all().enumerate() {
                row[i] = d.step(s % n, l) + if s < n { n } else { 0 };
            }
            row
        })
        .collect();
    let accepts = (0..2 * n).map(|s| d.is_accepting(s % n)).collect();
    let big = Dfa::new(doubled, d.start(), accepts).unwrap();
    assert_eq!(big.minimize(), d);
}

#[test]
fn encoding_round_trips_on_bir() {
    for lambda in enumerate_2colored(16, Conditions::BIR) {
        assert_eq!(decode(&encode(&lambda).unwrap()), lambda);
    }
}
