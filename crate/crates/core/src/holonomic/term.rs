use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{LaurentPoly, RationalFunction};
use crate::error::{Error, Result};

/// `coeffs · (n, k_1, ..., k_r) + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
    pub constant: i64,
}

impl LinearForm {
    pub fn eval(&self, z: &[i64]) -> i64 {
        self.coeffs.iter().zip(z).map(|(a, b)| a * b).sum::<i64>() + self.constant
    }

    fn linear_part(&self, d: &[i64]) -> i64 {
        self.coeffs.iter().zip(d).map(|(a, b)| a * b).sum()
    }
}

/// `1/(q^base; q^base)_{L}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Denominator {
    pub form: LinearForm,
    pub base: u32,
}

/// A proper q-hypergeometric term
/// `F(n,k) = x^{E(n,k)} q^{Q(n,k)} / Π (q^b;q^b)_{L(n,k)}`, zero when any
/// `L < 0`. The exponent is `Q(z) = ½ zᵀMz + linear·z + constant` with
/// `z = (n, k_1, ..., k_r)`; `M` is symmetric with even diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypTerm {
    /// Names of the summation variables `k_1..k_r`.
    pub vars: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub linear: Vec<i64>,
    pub constant: i64,
    pub denominators: Vec<Denominator>,
    pub x_exponent: LinearForm,
}

/// A shift quotient `F(z - d)/F(z)` in factored form over
/// `(q, u, v_1, ..., v_r)`: a monomial times products of binomials
/// `1 - m` for monomials `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioFactors {
    pub monomial: Vec<i32>,
    pub numerator: Vec<Vec<i32>>,
    pub denominator: Vec<Vec<i32>>,
}

impl HypTerm {
    pub fn validate(&self) -> Result<()> {
        let dim = self.vars.len() + 1;
        let bad = |m: &str| Err(Error::Structural(m.to_string()));
        if self.matrix.len() != dim || self.matrix.iter().any(|r| r.len() != dim) || self.linear.len() != dim {
            return bad("quadratic form has the wrong dimension");
        }
        for i in 0..dim {
            if self.matrix[i][i] % 2 != 0 {
                return bad("quadratic form needs an even diagonal");
            }
            for j in 0..dim {
                if self.matrix[i][j] != self.matrix[j][i] {
                    return bad("quadratic form matrix is not symmetric");
                }
            }
        }
        if self.denominators.iter().any(|d| d.form.coeffs.len() != dim || d.base == 0)
            || self.x_exponent.coeffs.len() != dim
        {
            return bad("linear form has the wrong dimension");
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.vars.len() + 1
    }

    /// Variable names of the coefficient ring: `q`, `u = q^n`, `v1..vr`.
    pub fn ring_vars(&self) -> Vec<String> {
        let mut v = vec!["q".to_string(), "u".to_string()];
        v.extend((1..=self.vars.len()).map(|i| format!("v{i}")));
        v
    }

    pub fn exponent(&self, z: &[i64]) -> i64 {
        let d = self.dim();
        let mut twice = 0;
        for i in 0..d {
            for j in 0..d {
                twice += z[i] * self.matrix[i][j] * z[j];
            }
        }
        twice / 2 + self.linear.iter().zip(z).map(|(a, b)| a * b).sum::<i64>() + self.constant
    }

    /// `F(z - d)/F(z)` in factored form.
    pub fn ratio_factors(&self, d: &[i64]) -> RatioFactors {
        let dim = self.dim();
        // Q(z-d) - Q(z) = -(Md)·z + ½dᵀMd - linear·d
        let md: Vec<i64> = (0..dim).map(|i| (0..dim).map(|j| self.matrix[i][j] * d[j]).sum()).collect();
        let half_dmd: i64 = md.iter().zip(d).map(|(a, b)| a * b).sum::<i64>() / 2;
        let lin: i64 = self.linear.iter().zip(d).map(|(a, b)| a * b).sum();
        let mut monomial = vec![(half_dmd - lin) as i32];
        monomial.extend(md.iter().map(|m| -*m as i32));
        let mut numerator = Vec::new();
        let mut denominator = Vec::new();
        for den in &self.denominators {
            let b = den.base as i64;
            let delta = den.form.linear_part(d);
            // q^{b(L + t)} as an exponent vector
            let power = |t: i64| {
                let mut e = vec![(b * (den.form.constant + t)) as i32];
                e.extend(den.form.coeffs.iter().map(|c| (b * c) as i32));
                e
            };
            if delta > 0 {
                numerator.extend((0..delta).map(|t| power(-t)));
            } else {
                denominator.extend((1..=-delta).map(power));
            }
        }
        RatioFactors { monomial, numerator, denominator }
    }

    /// `F(n - i, k - j)/F(n, k)` as a rational function in `(q, u, v...)`.
    pub fn term_ratio(&self, shift: &[i64]) -> Result<RationalFunction> {
        let f = self.ratio_factors(shift);
        let vars = self.ring_vars();
        let one = LaurentPoly::one(&vars);
        let binom = |e: &Vec<i32>| &one - &LaurentPoly::monomial(&vars, e.clone(), BigInt::one());
        let num = f.numerator.iter().fold(LaurentPoly::monomial(&vars, f.monomial.clone(), BigInt::one()), |acc, e| acc * binom(e));
        let den = f.denominator.iter().fold(one.clone(), |acc, e| acc * binom(e));
        RationalFunction::new(num, den)
    }

    /// `F(z)` at a rational `q`, zero outside the support.
    pub fn eval(&self, z: &[i64], q: &BigRational) -> BigRational {
        let mut denom = BigRational::one();
        for den in &self.denominators {
            let l = den.form.eval(z);
            if l < 0 {
                return BigRational::zero();
            }
            let qb = pow(q, den.base as i64);
            let mut qbi = BigRational::one();
            for _ in 0..l {
                qbi = &qbi * &qb;
                denom *= BigRational::one() - &qbi;
            }
        }
        pow(q, self.exponent(z)) / denom
    }

    /// `f_n = Σ_k F(n, k)` over `0 <= k_i <= bound`.
    pub fn sum_over_support(&self, n: i64, bound: i64, q: &BigRational) -> BigRational {
        let r = self.vars.len();
        let mut z = vec![0i64; r + 1];
        z[0] = n;
        let mut total = BigRational::zero();
        loop {
            total += self.eval(&z, q);
            let mut i = 1;
            while i <= r {
                if z[i] < bound {
                    z[i] += 1;
                    break;
                }
                z[i] = 0;
                i += 1;
            }
            if i > r {
                return total;
            }
        }
    }
}

pub(crate) fn pow(q: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(q.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}
