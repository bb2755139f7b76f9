use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<i32>;

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
///
/// The variable list is part of the value: two polynomials only combine when
/// their lists agree exactly. Use [`LaurentPoly::embed`] to move a polynomial
/// into a larger ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    vars: Arc<[String]>,
    terms: BTreeMap<Exponents, BigInt>,
}

/// Graded lexicographic comparison: total degree first, then earlier
/// variables dominate.
pub fn grlex_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&e| e as i64).sum();
    let db: i64 = b.iter().map(|&e| e as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

fn add_exps(a: &[i32], b: &[i32]) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl LaurentPoly {
    pub fn zero<S: AsRef<str>>(vars: &[S]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.as_ref().to_string()).collect();
        LaurentPoly { vars: vars.into(), terms: BTreeMap::new() }
    }

    pub fn one<S: AsRef<str>>(vars: &[S]) -> Self {
        Self::zero(vars).constant_like(BigInt::one())
    }

    /// Single term `coeff * x^exps`.
    pub fn monomial<S: AsRef<str>>(vars: &[S], exps: Exponents, coeff: BigInt) -> Self {
        Self::zero(vars).monomial_like(exps, coeff)
    }

    /// The variable `name` in the ring over `vars`.
    pub fn var<S: AsRef<str>>(vars: &[S], name: &str) -> Result<Self> {
        Self::zero(vars).var_like(name)
    }

    pub fn from_terms<S, I>(vars: &[S], terms: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let mut p = Self::zero(vars);
        let n = p.vars.len();
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::Structural(format!(
                    "exponent vector of length {} in a ring with {} variables",
                    e.len(),
                    n
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub fn zero_like(&self) -> Self {
        LaurentPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one_like(&self) -> Self {
        self.constant_like(BigInt::one())
    }

    pub fn constant_like(&self, c: BigInt) -> Self {
        self.monomial_like(vec![0; self.vars.len()], c)
    }

    pub fn monomial_like(&self, exps: Exponents, coeff: BigInt) -> Self {
        assert_eq!(exps.len(), self.vars.len(), "exponent vector length");
        let mut p = self.zero_like();
        p.add_term(exps, coeff);
        p
    }

    pub fn var_like(&self, name: &str) -> Result<Self> {
        let i = self.var_index(name).ok_or_else(|| {
            Error::Structural(format!("unknown variable {name} in {:?}", self.vars))
        })?;
        let mut e = vec![0; self.vars.len()];
        e[i] = 1;
        Ok(self.monomial_like(e, BigInt::one()))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The coefficient of `x^exps` (zero if absent).
    pub fn coeff(&self, exps: &[i32]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Add `c * x^e` in place.
    pub fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VarMismatch { left: self.vars.to_vec(), right: other.vars.to_vec() })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c);
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut acc: BTreeMap<Exponents, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = add_exps(e1, e2);
                *acc.entry(e).or_default() += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(LaurentPoly { vars: self.vars.clone(), terms: acc })
    }

    /// In-place `self += a * b`, avoiding the intermediate product.
    pub fn add_product(&mut self, a: &Self, b: &Self) {
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                self.add_term(add_exps(e1, e2), c1 * c2);
            }
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiply by the monomial `c * x^e`.
    pub fn mul_monomial(&self, e: &[i32], c: &BigInt) -> Self {
        if c.is_zero() {
            return self.zero_like();
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, x)| (add_exps(k, e), x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = self.one_like();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Substitute each variable `x_i` by the monomial `x^{images[i]}`.
    ///
    /// Shift operators act this way, e.g. `v -> v q^{-1}` is the image
    /// vector with a `-1` in the `q` slot and a `1` in the `v` slot.
    pub fn substitute_monomials(&self, images: &[Exponents]) -> Self {
        assert_eq!(images.len(), self.vars.len());
        let n = self.vars.len();
        let mut r = self.zero_like();
        for (e, c) in &self.terms {
            let mut ne = vec![0; n];
            for (i, &ei) in e.iter().enumerate() {
                if ei != 0 {
                    for (j, &m) in images[i].iter().enumerate() {
                        ne[j] += ei * m;
                    }
                }
            }
            r.add_term(ne, c.clone());
        }
        r
    }

    /// Re-express in a ring whose variable list contains every variable that
    /// actually occurs here.
    pub fn embed<S: AsRef<str>>(&self, new_vars: &[S]) -> Result<Self> {
        let target = Self::zero(new_vars);
        let mut map = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            map.push(target.var_index(v));
        }
        let mut r = target;
        for (e, c) in &self.terms {
            let mut ne = vec![0; r.vars.len()];
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => ne[j] = ei,
                    None => {
                        return Err(Error::Structural(format!(
                            "variable {} missing from target ring {:?}",
                            self.vars[i],
                            r.vars
                        )))
                    }
                }
            }
            r.add_term(ne, c.clone());
        }
        Ok(r)
    }

    /// Evaluate at rational points, one value per variable.
    pub fn eval(&self, values: &[BigRational]) -> Result<BigRational> {
        assert_eq!(values.len(), self.vars.len());
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                if values[i].is_zero() && ei < 0 {
                    return Err(Error::Domain(format!("{} = 0 raised to {}", self.vars[i], ei)));
                }
                t *= num_traits::pow::Pow::pow(&values[i], ei);
            }
            total += t;
        }
        Ok(total)
    }

    /// Componentwise minimum of exponents; zeros for the zero polynomial.
    pub fn min_exponents(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.min(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.vars.len()])
    }

    pub fn max_exponents(&self) -> Exponents {
        let mut m: Option<Exponents> = None;
        for e in self.terms.keys() {
            m = Some(match m {
                None => e.clone(),
                Some(m) => m.iter().zip(e).map(|(a, b)| *a.max(b)).collect(),
            });
        }
        m.unwrap_or_else(|| vec![0; self.vars.len()])
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    pub fn degree_in(&self, i: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Leading term under graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.leading_term().map(|t| t.1.clone()).unwrap_or_default()
    }

    /// Nonnegative gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the integer content and make the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x / &c)).collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if self.check_vars(d).is_err() || d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.zero_like());
        }
        if d.is_monomial() {
            let (e, c) = d.terms.iter().next().unwrap();
            let neg: Exponents = e.iter().map(|x| -x).collect();
            let mut terms = BTreeMap::new();
            for (k, x) in &self.terms {
                let (qt, r) = x.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(add_exps(k, &neg), qt);
            }
            return Some(LaurentPoly { vars: self.vars.clone(), terms });
        }
        let sa = self.min_exponents();
        let sd = d.min_exponents();
        let one = BigInt::one();
        let a = self.mul_monomial(&sa.iter().map(|x| -x).collect::<Vec<_>>(), &one);
        let dd = d.mul_monomial(&sd.iter().map(|x| -x).collect::<Vec<_>>(), &one);
        let (lte, ltc) = {
            let (e, c) = dd.leading_term().unwrap();
            (e.clone(), c.clone())
        };
        let mut r = a;
        let mut q = self.zero_like();
        while let Some((re, rc)) = r.leading_term() {
            let e: Exponents = re.iter().zip(&lte).map(|(x, y)| x - y).collect();
            if e.iter().any(|&x| x < 0) {
                return None;
            }
            let (c, rem) = rc.div_rem(&ltc);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &dd.mul_monomial(&e, &c);
            q.add_term(e, c);
        }
        let shift: Exponents = sa.iter().zip(&sd).map(|(x, y)| x - y).collect();
        Some(q.mul_monomial(&shift, &one))
    }

    /// Split off a monomial so that the remaining factor is a polynomial with
    /// no monomial divisor. Returns `(shift, poly)` with `self = x^shift * poly`.
    pub fn split_monomial(&self) -> (Exponents, Self) {
        let m = self.min_exponents();
        let neg: Exponents = m.iter().map(|x| -x).collect();
        (m, self.mul_monomial(&neg, &BigInt::one()))
    }

    /// Greatest common divisor, normalized to positive leading coefficient.
    ///
    /// Laurent inputs are first stripped of monomial factors, so the result is
    /// a polynomial with no monomial divisor (monomials are units here).
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let (_, a) = self.split_monomial();
        let (_, b) = other.split_monomial();
        Ok(gcd_poly(&a, &b).primitive_sign())
    }

    fn primitive_sign(&self) -> Self {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Coefficients with respect to variable `k`, keyed by exponent of `k`.
    fn coeffs_in(&self, k: usize) -> BTreeMap<i32, LaurentPoly> {
        let mut out: BTreeMap<i32, LaurentPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[k] = 0;
            out.entry(e[k]).or_insert_with(|| self.zero_like()).add_term(e2, c.clone());
        }
        out
    }

    fn content_in(&self, k: usize) -> LaurentPoly {
        let mut g = self.zero_like();
        for c in self.coeffs_in(k).values() {
            g = gcd_poly(&g, c);
            if g.as_constant().is_some_and(|c| c.abs().is_one()) {
                break;
            }
        }
        g
    }
}

/// Polynomial gcd by recursive primitive pseudo-remainder sequences.
/// Inputs must have nonnegative exponents.
fn gcd_poly(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return b.primitive_sign();
    }
    if b.is_zero() {
        return a.primitive_sign();
    }
    let n = a.nvars();
    let main = (0..n).find(|&k| {
        a.degree_in(k).unwrap_or(0) > 0 || b.degree_in(k).unwrap_or(0) > 0
    });
    let Some(k) = main else {
        let g = a.as_constant().unwrap().gcd(&b.as_constant().unwrap());
        return a.constant_like(g);
    };
    let ca = a.content_in(k);
    let cb = b.content_in(k);
    let mut pa = a.div_exact(&ca).expect("content divides");
    let mut pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_poly(&ca, &cb);
    if pa.degree_in(k) < pb.degree_in(k) {
        std::mem::swap(&mut pa, &mut pb);
    }
    while !pb.is_zero() {
        let r = prem(&pa, &pb, k);
        pa = pb;
        pb = if r.is_zero() { r } else { r.div_exact(&r.content_in(k)).expect("content divides") };
    }
    let g = pa.div_exact(&pa.content_in(k)).expect("content divides");
    &c * &g
}

/// Pseudo-remainder of `a` by `b` with respect to variable `k`.
fn prem(a: &LaurentPoly, b: &LaurentPoly, k: usize) -> LaurentPoly {
    let db = b.degree_in(k).unwrap_or(0);
    let bc = b.coeffs_in(k);
    let lcb = bc.get(&db).unwrap().clone();
    let mut r = a.clone();
    let mut e = a.degree_in(k).unwrap_or(0) - db + 1;
    let one = BigInt::one();
    while !r.is_zero() {
        let dr = r.degree_in(k).unwrap();
        if dr < db {
            break;
        }
        let lr = r.coeffs_in(k).remove(&dr).unwrap();
        let mut shift = vec![0; r.nvars()];
        shift[k] = dr - db;
        r = &(&r * &lcb) - &(&b.mul_monomial(&shift, &one) * &lr);
        e -= 1;
    }
    if e > 0 {
        r = &r * &lcb.pow(e as u32);
    }
    r
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            /// Panics when the variable lists differ; use the `checked_*`
            /// form to get an error instead.
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in decreasing graded lexicographic order, e.g. `2*q^3*u - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (idx, (e, c)) in ts.iter().enumerate() {
            let neg = c.is_negative();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (i, &ei) in e.iter().enumerate() {
                match ei {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], ei)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly[{}]({})", self.vars.join(","), self)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    vars: Vec<String>,
    terms: Vec<(Exponents, String)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson {
            vars: self.vars.to_vec(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = PolyJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(j.terms.len());
        for (e, c) in j.terms {
            let c: BigInt = c.parse().map_err(|_| D::Error::custom(format!("bad coefficient {c:?}")))?;
            terms.push((e, c));
        }
        LaurentPoly::from_terms(&j.vars, terms).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qv() -> LaurentPoly {
        LaurentPoly::var(&["q"], "q").unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let q = qv();
        let one = q.one_like();
        let p = &(&one + &q) * &(&one - &q);
        assert_eq!(p, &one - &q.pow(2));
    }

    #[test]
    fn laurent_inverse_monomial() {
        let u = LaurentPoly::var(&["u"], "u").unwrap();
        let inv = LaurentPoly::monomial(&["u"], vec![-1], BigInt::one());
        assert!((&u * &inv).is_one());
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let q = qv();
        let x = LaurentPoly::var(&["x"], "x").unwrap();
        assert!(matches!(q.checked_add(&x), Err(Error::VarMismatch { .. })));
    }

    #[test]
    fn exact_division_and_failure() {
        let vars = ["q", "u"];
        let q = LaurentPoly::var(&vars, "q").unwrap();
        let u = LaurentPoly::var(&vars, "u").unwrap();
        let a = &(&q + &u) * &(&q - &u.pow(2));
        assert_eq!(a.div_exact(&(&q + &u)).unwrap(), &q - &u.pow(2));
        assert!(a.div_exact(&(&q + &q.one_like())).is_none());
    }

    #[test]
    fn gcd_multivariate() {
        let vars = ["q", "u", "v"];
        let q = LaurentPoly::var(&vars, "q").unwrap();
        let u = LaurentPoly::var(&vars, "u").unwrap();
        let v = LaurentPoly::var(&vars, "v").unwrap();
        let common = &(&u - &v) * &(&q + &q.one_like());
        let a = &common * &(&u + &v.pow(3));
        let b = &common * &(&q.pow(2) - &v);
        assert_eq!(a.gcd(&b).unwrap(), common.primitive());
        let g = a.scale(&BigInt::from(4)).gcd(&b.scale(&BigInt::from(6))).unwrap();
        assert_eq!(g, common.primitive().scale(&BigInt::from(2)));
    }

    #[test]
    fn json_round_trip() {
        let vars = ["x", "q"];
        let p = LaurentPoly::from_terms(&vars, [(vec![1, -2], BigInt::from(-7)), (vec![0, 0], BigInt::from(3))]).unwrap();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"vars":["x","q"],"terms":[[[0,0],"3"],[[1,-2],"-7"]]}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
