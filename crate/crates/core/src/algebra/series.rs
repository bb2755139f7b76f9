use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Power series in `q` known modulo `q^order`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![BigInt::zero(); order] }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, BigInt::one())
    }

    /// `c q^e` truncated (vanishes when `e >= order`).
    pub fn monomial(order: usize, e: usize, c: BigInt) -> Self {
        let mut s = Self::zero(order);
        if e < order {
            s.coeffs[e] = c;
        }
        s
    }

    /// Truncate or zero-pad a coefficient list to `order`.
    pub fn from_coeffs(mut coeffs: Vec<BigInt>, order: usize) -> Self {
        coeffs.resize(order, BigInt::zero());
        QSeries { coeffs }
    }

    pub fn from_i64s(cs: &[i64], order: usize) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| BigInt::from(c)).collect(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> BigInt {
        self.coeffs.get(e).cloned().unwrap_or_default()
    }

    pub fn coeff_mut(&mut self, e: usize) -> &mut BigInt {
        &mut self.coeffs[e]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise truncation order");
        QSeries { coeffs: self.coeffs[..order].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries { coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        QSeries { coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect() }
    }

    pub fn neg(&self) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries { coeffs: out }
    }

    /// Multiply by `q^k`, dropping what falls beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![BigInt::zero(); n];
        if k < n {
            out[k..].clone_from_slice(&self.coeffs[..n - k]);
        }
        QSeries { coeffs: out }
    }

    /// Multiply by `1 - c q^k` in place.
    pub fn mul_binomial(&mut self, c: &BigInt, k: usize) {
        for i in (k..self.order()).rev() {
            let t = &self.coeffs[i - k] * c;
            self.coeffs[i] -= t;
        }
    }

    /// Divide by `1 - q^k` in place (`k >= 1`).
    pub fn div_one_minus(&mut self, k: usize) {
        assert!(k >= 1);
        for i in k..self.order() {
            let t = self.coeffs[i - k].clone();
            self.coeffs[i] += t;
        }
    }

    /// Multiplicative inverse modulo `q^order`; needs constant term `±1`.
    pub fn invert(&self) -> Result<Self> {
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let c0 = &self.coeffs[0];
        if !c0.abs().is_one() {
            return Err(Error::Domain(format!("constant term {c0} is not a unit")));
        }
        let mut inv = vec![BigInt::zero(); n];
        inv[0] = c0.clone();
        for k in 1..n {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc += &self.coeffs[j] * &inv[k - j];
                }
            }
            inv[k] = -(acc * c0);
        }
        Ok(QSeries { coeffs: inv })
    }

    /// Truncated series of a univariate polynomial in `q`; negative
    /// exponents are rejected.
    pub fn from_poly(p: &LaurentPoly, order: usize) -> Result<Self> {
        if p.nvars() != 1 {
            return Err(Error::Structural(format!("expected a polynomial in one variable, got {:?}", p.vars())));
        }
        let mut s = Self::zero(order);
        for (e, c) in p.terms() {
            if e[0] < 0 {
                return Err(Error::Domain("negative q-exponent in series conversion".into()));
            }
            if (e[0] as usize) < order {
                s.coeffs[e[0] as usize] += c;
            }
        }
        Ok(s)
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{a}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{a}q^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson { order: self.order(), coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = QSeriesJson::deserialize(d)?;
        if j.coeffs.len() != j.order {
            return Err(D::Error::custom("coefficient count differs from order"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(|_| D::Error::custom(format!("bad coefficient {c:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(QSeries { coeffs })
    }
}

/// Series in `x` and `q`: polynomial in `x`, truncated modulo `q^qorder`.
///
/// Slices that vanish modulo `q^qorder` are not stored.
#[derive(Clone, PartialEq, Eq)]
pub struct BiSeries {
    qorder: usize,
    slices: BTreeMap<u32, QSeries>,
}

impl BiSeries {
    pub fn zero(qorder: usize) -> Self {
        BiSeries { qorder, slices: BTreeMap::new() }
    }

    pub fn one(qorder: usize) -> Self {
        let mut s = Self::zero(qorder);
        s.set_slice(0, QSeries::one(qorder));
        s
    }

    pub fn qorder(&self) -> usize {
        self.qorder
    }

    pub fn slices(&self) -> &BTreeMap<u32, QSeries> {
        &self.slices
    }

    pub fn slice(&self, m: u32) -> QSeries {
        self.slices.get(&m).cloned().unwrap_or_else(|| QSeries::zero(self.qorder))
    }

    pub fn set_slice(&mut self, m: u32, s: QSeries) {
        let s = if s.order() > self.qorder { s.truncate(self.qorder) } else { s };
        assert_eq!(s.order(), self.qorder, "slice order must match");
        if s.is_zero() {
            self.slices.remove(&m);
        } else {
            self.slices.insert(m, s);
        }
    }

    pub fn coeff(&self, m: u32, e: usize) -> BigInt {
        self.slices.get(&m).map(|s| s.coeff(e)).unwrap_or_default()
    }

    /// Add `c x^m q^e` in place.
    pub fn add_term(&mut self, m: u32, e: usize, c: &BigInt) {
        if e >= self.qorder {
            return;
        }
        let n = self.qorder;
        let s = self.slices.entry(m).or_insert_with(|| QSeries::zero(n));
        *s.coeff_mut(e) += c;
        if s.is_zero() {
            self.slices.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn truncate(&self, qorder: usize) -> Self {
        let mut r = Self::zero(qorder);
        for (&m, s) in &self.slices {
            r.set_slice(m, s.truncate(qorder));
        }
        r
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.qorder.min(other.qorder);
        let mut r = self.truncate(n);
        for (&m, s) in &other.slices {
            let cur = r.slice(m);
            r.set_slice(m, cur.add(&s.truncate(n)));
        }
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BiSeries { qorder: self.qorder, slices: self.slices.iter().map(|(&m, s)| (m, s.neg())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut r = Self::zero(self.qorder);
        for (&m, s) in &self.slices {
            r.set_slice(m, s.scale(c));
        }
        r
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.qorder.min(other.qorder);
        let mut r = Self::zero(n);
        for (&m1, s1) in &self.slices {
            for (&m2, s2) in &other.slices {
                let cur = r.slice(m1 + m2);
                r.set_slice(m1 + m2, cur.add(&s1.truncate(n).mul(&s2.truncate(n))));
            }
        }
        r
    }

    /// Multiply by a polynomial in `(x, q)` with nonnegative exponents.
    pub fn mul_poly(&self, p: &LaurentPoly) -> Result<Self> {
        let (ix, iq) = xq_indices(p)?;
        let mut r = Self::zero(self.qorder);
        for (e, c) in p.terms() {
            let ex = ix.map_or(0, |i| e[i]);
            let eq = iq.map_or(0, |i| e[i]);
            if ex < 0 || eq < 0 {
                return Err(Error::Domain(format!("negative exponent in multiplier {p}")));
            }
            for (&m, s) in &self.slices {
                let cur = r.slice(m + ex as u32);
                r.set_slice(m + ex as u32, cur.add(&s.shift(eq as usize).scale(c)));
            }
        }
        Ok(r)
    }

    /// Substitute `x -> x q^k`: slice `m` gets multiplied by `q^{km}`.
    pub fn apply_xshift(&self, k: usize) -> Self {
        let mut r = Self::zero(self.qorder);
        for (&m, s) in &self.slices {
            r.set_slice(m, s.shift(k * m as usize));
        }
        r
    }

    /// Specialize `x = 1`.
    pub fn at_x_one(&self) -> QSeries {
        self.slices.values().fold(QSeries::zero(self.qorder), |acc, s| acc.add(s))
    }

    /// The exact polynomial in `(x, q)` represented by the stored coefficients.
    pub fn to_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero(&["x", "q"]);
        for (&m, s) in &self.slices {
            for (e, c) in s.coeffs().iter().enumerate() {
                p.add_term(vec![m as i32, e as i32], c.clone());
            }
        }
        p
    }

    /// Truncated series of a polynomial in `(x, q)`.
    pub fn from_poly(p: &LaurentPoly, qorder: usize) -> Result<Self> {
        BiSeries::one(qorder).mul_poly(p)
    }

    /// First `(x, q)` exponent pair where the two series differ, scanning
    /// slices and then q-exponents in increasing order.
    pub fn first_difference(&self, other: &Self) -> Option<(u32, usize, BigInt, BigInt)> {
        let n = self.qorder.min(other.qorder);
        let mut ms: Vec<u32> = self.slices.keys().chain(other.slices.keys()).copied().collect();
        ms.sort_unstable();
        ms.dedup();
        for m in ms {
            for e in 0..n {
                let a = self.coeff(m, e);
                let b = other.coeff(m, e);
                if a != b {
                    return Some((m, e, a, b));
                }
            }
        }
        None
    }
}

/// Positions of `x` and `q` in a polynomial's variable list; any other
/// variable with a nonzero exponent is rejected by the callers through
/// `Structural`.
fn xq_indices(p: &LaurentPoly) -> Result<(Option<usize>, Option<usize>)> {
    for v in p.vars() {
        if v != "x" && v != "q" {
            return Err(Error::Structural(format!("series multiplier must be in (x, q), found variable {v}")));
        }
    }
    Ok((p.var_index("x"), p.var_index("q")))
}

impl fmt::Debug for BiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BiSeries(qorder={})", self.qorder)?;
        for (m, s) in &self.slices {
            writeln!(f, "  x^{m}: {s}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct BiSeriesJson {
    qorder: usize,
    slices: BTreeMap<String, QSeries>,
}

impl Serialize for BiSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Slice keys go out in numeric order ("2" before "10").
        use serde::ser::SerializeStruct;
        struct Slices<'a>(&'a BTreeMap<u32, QSeries>);
        impl Serialize for Slices<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_map(self.0.iter().map(|(m, q)| (m.to_string(), q)))
            }
        }
        let mut st = s.serialize_struct("BiSeries", 2)?;
        st.serialize_field("qorder", &self.qorder)?;
        st.serialize_field("slices", &Slices(&self.slices))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for BiSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = BiSeriesJson::deserialize(d)?;
        let mut r = BiSeries::zero(j.qorder);
        for (k, s) in j.slices {
            let m: u32 = k.parse().map_err(|_| D::Error::custom(format!("bad slice key {k:?}")))?;
            if s.order() != j.qorder {
                return Err(D::Error::custom("slice order differs from qorder"));
            }
            r.set_slice(m, s);
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_inverse() {
        let s = QSeries::from_i64s(&[1, -1], 6);
        assert_eq!(s.invert().unwrap(), QSeries::from_i64s(&[1, 1, 1, 1, 1, 1], 6));
    }

    #[test]
    fn non_unit_constant_rejected() {
        assert!(QSeries::from_i64s(&[2, 1], 4).invert().is_err());
    }

    #[test]
    fn xshift_of_monomial() {
        let mut s = BiSeries::zero(10);
        s.add_term(1, 1, &BigInt::one());
        let t = s.apply_xshift(3);
        assert_eq!(t.coeff(1, 4), BigInt::one());
        assert_eq!(t.slices().len(), 1);
        assert_eq!(s.apply_xshift(0), s);
    }

    #[test]
    fn json_keys_are_numeric_order() {
        let mut s = BiSeries::zero(2);
        s.add_term(10, 1, &BigInt::one());
        s.add_term(2, 0, &BigInt::one());
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(
            j,
            r#"{"qorder":2,"slices":{"2":{"order":2,"coeffs":["1","0"]},"10":{"order":2,"coeffs":["0","1"]}}}"#
        );
        let back: BiSeries = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
