use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::laurent::LaurentPoly;
use crate::error::{Error, Result};

/// Quotient of two Laurent polynomials over the same variable list.
///
/// Arithmetic does not normalize; call [`RationalFunction::normalize`] for the
/// canonical form. Equality testing via [`RationalFunction::equals`] is
/// cross-multiplication and never needs a gcd.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if num.vars() != den.vars() {
            return Err(Error::VarMismatch { left: num.vars().to_vec(), right: den.vars().to_vec() });
        }
        Ok(RationalFunction { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        let den = p.one_like();
        RationalFunction { num: p, den }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn into_parts(self) -> (LaurentPoly, LaurentPoly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Canonical form.
    ///
    /// Numerator and denominator are coprime polynomials (all common integer
    /// content included), jointly stripped of any monomial factor, and the
    /// denominator has positive leading coefficient in graded lex order.
    /// Zero normalizes to `0/1`.
    pub fn normalize(&self) -> Result<Self> {
        if self.den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        if self.num.is_zero() {
            return Ok(RationalFunction { num: self.num.zero_like(), den: self.num.one_like() });
        }
        let mn = self.num.min_exponents();
        let md = self.den.min_exponents();
        let shift: Vec<i32> = mn.iter().zip(&md).map(|(a, b)| -(*a.min(b))).collect();
        let one = BigInt::one();
        let mut num = self.num.mul_monomial(&shift, &one);
        let mut den = self.den.mul_monomial(&shift, &one);
        let g = num.gcd(&den)?;
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        if den.leading_coeff().is_negative() {
            num = -num;
            den = -den;
        }
        Ok(RationalFunction { num, den })
    }

    /// Exact equality as rational functions: `a/b == c/d` iff `ad - bc = 0`.
    pub fn equals(&self, other: &Self) -> bool {
        (&self.num * &other.den) == (&other.num * &self.den)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.den == other.den {
            return RationalFunction::new(self.num.checked_add(&other.num)?, self.den.clone());
        }
        RationalFunction::new(
            (&self.num * &other.den).checked_add(&(&other.num * &self.den))?,
            self.den.checked_mul(&other.den)?,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        RationalFunction::new(self.num.checked_mul(&other.num)?, self.den.checked_mul(&other.den)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.num.is_zero() {
            return Err(Error::Domain("division by zero rational function".into()));
        }
        RationalFunction::new(self.num.checked_mul(&other.den)?, self.den.checked_mul(&other.num)?)
    }

    pub fn neg(&self) -> Self {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }

    /// Evaluate at a rational point; fails if the denominator vanishes there.
    pub fn eval(&self, values: &[BigRational]) -> Result<BigRational> {
        let d = self.den.eval(values)?;
        if num_traits::Zero::is_zero(&d) {
            return Err(Error::Domain("denominator vanishes at evaluation point".into()));
        }
        Ok(self.num.eval(values)? / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction[{}]({})", self.num.vars().join(","), self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(vars: &[&str]) -> Vec<LaurentPoly> {
        vars.iter().map(|v| LaurentPoly::var(vars, v).unwrap()).collect()
    }

    #[test]
    fn cancels_common_factor() {
        let q = &ring(&["q"])[0];
        let one = q.one_like();
        let r = RationalFunction::new(&q.pow(2) - &one, q - &one).unwrap().normalize().unwrap();
        assert_eq!(r.num(), &(q + &one));
        assert!(r.den().is_one());
    }

    #[test]
    fn zero_normalizes_to_zero_over_one() {
        let q = &ring(&["q"])[0];
        let r = RationalFunction::new(q.zero_like(), q.pow(3)).unwrap().normalize().unwrap();
        assert!(r.num().is_zero() && r.den().is_one());
    }

    #[test]
    fn multivariate_cancellation_keeps_monomial_denominator() {
        let v = ring(&["q", "u", "v"]);
        let (q, u, w) = (&v[0], &v[1], &v[2]);
        let num = &(u - w) * &(u + w);
        let den = &(u - w) * q;
        let r = RationalFunction::new(num, den).unwrap().normalize().unwrap();
        assert_eq!(r.num(), &(u + w));
        assert_eq!(r.den(), q);
    }

    #[test]
    fn zero_denominator_is_a_domain_error() {
        let q = &ring(&["q"])[0];
        assert!(matches!(RationalFunction::new(q.clone(), q.zero_like()), Err(Error::Domain(_))));
    }

    #[test]
    fn sign_and_integer_content() {
        let q = &ring(&["q"])[0];
        let two = BigInt::from(2);
        let r = RationalFunction::new(q.scale(&BigInt::from(4)), (q - &q.one_like()).scale(&BigInt::from(-6)))
            .unwrap()
            .normalize()
            .unwrap();
        assert_eq!(r.num(), &-q.scale(&two));
        assert_eq!(r.den(), &(q - &q.one_like()).scale(&BigInt::from(3)));
    }
}
