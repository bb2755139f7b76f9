use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::{parse_poly, BiSeries, LaurentPoly};
use crate::error::{Error, Result};

const XQ: [&str; 2] = ["x", "q"];

/// `Σ_i c_i(x, q) f(x q^{unit·s_i})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QDiffOperator {
    pub unit: u32,
    pub terms: Vec<(LaurentPoly, u32)>,
}

impl QDiffOperator {
    /// Coefficients are re-embedded into `(x, q)`; terms with equal shift are
    /// merged and zero terms dropped, sorted by shift.
    pub fn new(unit: u32, terms: Vec<(LaurentPoly, u32)>) -> Result<Self> {
        if unit == 0 {
            return Err(Error::Domain("shift unit must be positive".into()));
        }
        let mut merged: std::collections::BTreeMap<u32, LaurentPoly> = Default::default();
        for (c, s) in terms {
            let c = c.embed(&XQ)?;
            let slot = merged.entry(s).or_insert_with(|| LaurentPoly::zero(&XQ));
            *slot = &*slot + &c;
        }
        let terms = merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(s, c)| (c, s)).collect();
        Ok(QDiffOperator { unit, terms })
    }

    pub fn identity(unit: u32) -> Self {
        QDiffOperator { unit, terms: vec![(LaurentPoly::one(&XQ), 0)] }
    }

    /// Coefficients given as strings in `x` and `q`, indexed by shift.
    pub fn from_strs(unit: u32, coeffs: &[&str]) -> Result<Self> {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(s, c)| Ok((parse_poly(c, &XQ)?, s as u32)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(unit, terms)
    }

    pub fn order(&self) -> u32 {
        self.terms.iter().map(|t| t.1).max().unwrap_or(0)
    }

    pub fn coeff(&self, shift: u32) -> LaurentPoly {
        self.terms.iter().find(|t| t.1 == shift).map_or_else(|| LaurentPoly::zero(&XQ), |t| t.0.clone())
    }

    pub fn neg(&self) -> Self {
        QDiffOperator { unit: self.unit, terms: self.terms.iter().map(|(c, s)| (-c, *s)).collect() }
    }

    /// Every coefficient multiplied by the same polynomial.
    pub fn scale(&self, p: &LaurentPoly) -> Result<Self> {
        let p = p.embed(&XQ)?;
        Self::new(self.unit, self.terms.iter().map(|(c, s)| (c * &p, *s)).collect())
    }

    /// The same annihilator with common integer content, common monomial
    /// factor removed, signed so that the lowest-shift coefficient has a
    /// positive leading coefficient in graded lex order.
    pub fn primitive(&self) -> Result<Self> {
        let mut g = LaurentPoly::zero(&XQ);
        for (c, _) in &self.terms {
            g = g.gcd(c)?;
        }
        if g.is_zero() {
            return Ok(self.clone());
        }
        let mut terms: Vec<_> = self
            .terms
            .iter()
            .map(|(c, s)| Ok((c.div_exact(&g).ok_or_else(|| Error::Structural("gcd does not divide".into()))?, *s)))
            .collect::<Result<_>>()?;
        let lo: Vec<i32> = (0..2).map(|i| terms.iter().flat_map(|(c, _)| c.terms().map(move |(e, _)| e[i])).min().unwrap_or(0)).collect();
        let shift = vec![-lo[0], -lo[1]];
        let flip = terms.first().is_some_and(|(c, _): &(LaurentPoly, u32)| c.leading_coeff() < BigInt::from(0));
        let sign = BigInt::from(if flip { -1 } else { 1 });
        for t in terms.iter_mut() {
            t.0 = t.0.mul_monomial(&shift, &sign);
        }
        Self::new(self.unit, terms)
    }

    /// The recurrence on `g_n = [x^n] G` implied by `op G = 0`: entry `m` is
    /// the coefficient of `g_{n-m}` as a polynomial in `(q, u = q^n)`.
    pub fn recurrence(&self) -> Vec<LaurentPoly> {
        let qu = ["q", "u"];
        let depth = self.terms.iter().flat_map(|(c, _)| c.terms().map(|(e, _)| e[0])).max().unwrap_or(0).max(0) as usize;
        let mut out = vec![LaurentPoly::zero(&qu); depth + 1];
        for (c, s) in &self.terms {
            let k = (self.unit * s) as i32;
            for (e, coef) in c.terms() {
                let m = e[0];
                if m < 0 {
                    continue;
                }
                // [x^m] c · q^{k(n - m)} g_{n-m}
                out[m as usize].add_term(vec![e[1] - k * m, k], coef.clone());
            }
        }
        out
    }

    /// `Σ c_i(x,q) s(x q^{unit·s_i})`, truncated at the order of `s`.
    pub fn apply(&self, s: &BiSeries) -> Result<BiSeries> {
        let mut out = BiSeries::zero(s.qorder());
        for (c, sh) in &self.terms {
            out = out.add(&s.apply_xshift((self.unit * sh) as usize).mul_poly(c)?);
        }
        Ok(out)
    }
}

/// Apply a q-difference operator to a bigraded series.
pub fn apply_qdiff(op: &QDiffOperator, s: &BiSeries) -> Result<BiSeries> {
    op.apply(s)
}

fn rhs_form(unit: u32, lhs: &str, rhs: &[&str]) -> QDiffOperator {
    let mut terms = vec![(parse_poly(lhs, &XQ).expect("built-in operator"), 0)];
    for (i, c) in rhs.iter().enumerate() {
        terms.push((-parse_poly(c, &XQ).expect("built-in operator"), i as u32 + 1));
    }
    QDiffOperator::new(unit, terms).expect("built-in operator")
}

const BIR_RHS: [&str; 3] = [
    "2+4xq+4xq^2+4xq^3+3xq^4+xq^6+4x^2q^3+6x^2q^4+6x^2q^5+8x^2q^6+2x^2q^7+2x^2q^8+2x^2q^9+6x^3q^7+2x^3q^9+3x^3q^10+x^3q^12",
    "-x^2q^7(2+2q+3xq+4xq^2+xq^3+4xq^4-xq^5+4xq^6+xq^7+2x^2q^5+6x^2q^7+6x^2q^8+2x^2q^9+2x^2q^10+4x^2q^11+3x^3q^9+x^3q^11+6x^3q^12+2x^3q^14)",
    "x^4q^21(1-xq^6)^2(2+3xq+xq^3)",
];

/// Third-order operator annihilating the BIR generating function.
pub fn bir_operator() -> QDiffOperator {
    rhs_form(3, "2+3xq^4+xq^6", &BIR_RHS)
}

const BIRP_LHS: &str = "1+xq^5+xq^7";
const BIRP_RHS: [&str; 3] = [
    "1+xq^2+2xq^3+2xq^4+2xq^5+xq^7+3x^2q^6+2x^2q^7+3x^2q^8+3x^2q^9+2x^2q^10+x^2q^11+x^2q^12+2x^3q^11+2x^3q^13+x^3q^14+x^3q^16",
    "-x^2q^10(1+q+xq^2+xq^3+2xq^4+2xq^6+xq^7+xq^8-x^2q^7+2x^2q^8+x^2q^9+2x^2q^10+3x^2q^11+x^2q^12+x^2q^13+2x^2q^14+x^3q^13+x^3q^15+2x^3q^16+2x^3q^18)",
    "x^4q^27(1-xq^6)(1-xq^9)(1+xq^2+xq^4)",
];

/// Third-order operator annihilating the BIRP generating function, read
/// as `lhs f(x) = Σ rhs_i f(x q^{3i})` like its BIR counterpart.
pub fn birp_operator() -> QDiffOperator {
    rhs_form(3, BIRP_LHS, &BIRP_RHS)
}

/// The BIRP operator with the first coupling read as a plus sign, i.e.
/// `lhs f(x) + rhs_1 f(xq^3) - ... = 0`; kept to show that this reading fails.
pub fn birp_operator_plus_reading() -> QDiffOperator {
    let mut op = birp_operator();
    for t in op.terms.iter_mut().filter(|t| t.1 > 0) {
        t.0 = -&t.0;
    }
    op
}

/// Second-order operator for the `(3,0,0)` cylindric series.
pub fn g300_operator() -> QDiffOperator {
    rhs_form(
        3,
        "1+xq^5",
        &[
            "1+xq^2+2xq^3+2xq^4+2xq^5+2x^2q^6+2x^2q^7+2x^2q^8+x^2q^9+x^3q^11",
            "xq^6(1+xq^2)(1-xq^4)(1-xq^5)",
        ],
    )
}

/// Second-order operator for the `(1,1,1)` cylindric series.
pub fn g111_operator() -> QDiffOperator {
    rhs_form(
        3,
        "1+xq^4",
        &[
            "1+2xq+2xq^2+2xq^3+xq^4+x^2q^3+2x^2q^4+2x^2q^5+2x^2q^6+x^3q^7",
            "xq^3(1+xq)(1-xq^4)(1-xq^5)",
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::QSeries;

    #[test]
    fn identity_is_identity() {
        let mut s = BiSeries::zero(6);
        s.set_slice(2, QSeries::from_i64s(&[0, 1, 3], 6));
        assert_eq!(apply_qdiff(&QDiffOperator::identity(3), &s).unwrap(), s);
    }

    #[test]
    fn recurrence_of_first_order_operator() {
        // G(x) - x G(xq): g_n = q^{n-1} g_{n-1}
        let op = QDiffOperator::from_strs(1, &["1", "-x"]).unwrap();
        let r = op.recurrence();
        assert_eq!(r[0], LaurentPoly::one(&["q", "u"]));
        assert_eq!(r[1], LaurentPoly::monomial(&["q", "u"], vec![-1, 1], BigInt::from(-1)));
    }

    #[test]
    fn merging_and_order() {
        let op = QDiffOperator::new(3, vec![(parse_poly("x", &XQ).unwrap(), 2), (parse_poly("-x", &XQ).unwrap(), 2)]).unwrap();
        assert!(op.terms.is_empty());
        assert_eq!(bir_operator().order(), 3);
    }
}
