use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::term::{Denominator, HypTerm, LinearForm};
use crate::algebra::{inverse_qfactorials, parse_poly, BiSeries, QSeries};
use crate::error::{Error, Result};

/// `Σ_{y ≥ 0} x^{w·y} q^{½yᵀMy + L·y} / Π_i (q^{b_i};q^{b_i})_{y_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgSumSpec {
    pub vars: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    pub linear: Vec<i64>,
    pub x_exponent: Vec<i64>,
    pub bases: Vec<u32>,
}

impl AgSumSpec {
    /// Build from a quadratic exponent and an x-exponent written in the
    /// summation variables, e.g. `a(a+1)+b^2+2ab` and `a+b+2c+2d`.
    pub fn from_strings(vars: &[&str], exponent: &str, x_exponent: &str, bases: &[u32]) -> Result<Self> {
        let n = vars.len();
        if bases.len() != n {
            return Err(Error::Structural("one base per summation variable".into()));
        }
        let q = parse_poly(exponent, vars)?;
        let mut matrix = vec![vec![0i64; n]; n];
        let mut linear = vec![0i64; n];
        for (e, c) in q.terms() {
            let c = c.to_i64().ok_or_else(|| Error::Domain("coefficient too large".into()))?;
            let deg: i32 = e.iter().sum();
            let idx: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, e[i].max(0) as usize)).collect();
            match (deg, idx.as_slice()) {
                (1, [i]) => linear[*i] += c,
                (2, [i, j]) if i == j => matrix[*i][*i] += 2 * c,
                (2, [i, j]) => {
                    matrix[*i][*j] += c;
                    matrix[*j][*i] += c;
                }
                _ => return Err(Error::Domain(format!("exponent {exponent} is not a quadratic form without constant"))),
            }
        }
        let x = parse_poly(x_exponent, vars)?;
        let mut x_exp = vec![0i64; n];
        for (e, c) in x.terms() {
            match e.iter().position(|&k| k == 1) {
                Some(i) if e.iter().sum::<i32>() == 1 => x_exp[i] += c.to_i64().unwrap_or(0),
                _ => return Err(Error::Domain(format!("x-exponent {x_exponent} is not linear"))),
            }
        }
        Ok(AgSumSpec {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            matrix,
            linear,
            x_exponent: x_exp,
            bases: bases.to_vec(),
        })
    }

    fn exponent(&self, y: &[i64]) -> i64 {
        let n = y.len();
        let mut twice = 0;
        for i in 0..n {
            for j in 0..n {
                twice += y[i] * self.matrix[i][j] * y[j];
            }
        }
        twice / 2 + self.linear.iter().zip(y).map(|(a, b)| a * b).sum::<i64>()
    }

    /// Rewrite as a term in `(n, remaining variables)` by solving
    /// `x-exponent = n` for `eliminate`, whose x-weight must be 1.
    pub fn to_hypterm(&self, eliminate: &str) -> Result<HypTerm> {
        let m = self.vars.len();
        let e = self
            .vars
            .iter()
            .position(|v| v == eliminate)
            .ok_or_else(|| Error::Domain(format!("no summation variable {eliminate}")))?;
        if self.x_exponent[e] != 1 {
            return Err(Error::Domain(format!("{eliminate} does not have x-weight 1")));
        }
        let rest: Vec<usize> = (0..m).filter(|&i| i != e).collect();
        // y = T z with z = (n, rest...)
        let mut t = vec![vec![0i64; m]; m];
        t[e][0] = 1;
        for (col, &i) in rest.iter().enumerate() {
            t[i][col + 1] = 1;
            t[e][col + 1] = -self.x_exponent[i];
        }
        let mut matrix = vec![vec![0i64; m]; m];
        for a in 0..m {
            for b in 0..m {
                matrix[a][b] = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| t[i][a] * self.matrix[i][j] * t[j][b]).sum();
            }
        }
        let linear = (0..m).map(|a| (0..m).map(|i| t[i][a] * self.linear[i]).sum()).collect();
        let denominators = (0..m)
            .map(|i| Denominator { form: LinearForm { coeffs: t[i].clone(), constant: 0 }, base: self.bases[i] })
            .collect();
        let mut xc = vec![0i64; m];
        xc[0] = 1;
        let term = HypTerm {
            vars: rest.iter().map(|&i| self.vars[i].clone()).collect(),
            matrix,
            linear,
            constant: 0,
            denominators,
            x_exponent: LinearForm { coeffs: xc, constant: 0 },
        };
        term.validate()?;
        Ok(term)
    }
}

/// Upper bound on lattice points visited by [`evaluate_ag_sum`].
pub const AG_POINT_LIMIT: usize = 5_000_000;

/// Exact truncated sum. Every quadratic and linear coefficient must be
/// nonnegative so that the exponent grows in each variable, which bounds the
/// loops.
pub fn evaluate_ag_sum(spec: &AgSumSpec, qorder: usize) -> Result<BiSeries> {
    if qorder == 0 {
        return Err(Error::Domain("q-order must be at least 1".into()));
    }
    let n = spec.vars.len();
    if spec.matrix.iter().flatten().chain(&spec.linear).any(|&c| c < 0)
        || (0..n).any(|i| spec.matrix[i][i] + spec.linear[i] <= 0)
        || spec.x_exponent.iter().any(|&c| c < 0)
    {
        return Err(Error::Config("AG sum needs nonnegative coefficients growing in every variable".into()));
    }
    let tables: Vec<Vec<QSeries>> = spec.bases.iter().map(|&b| inverse_qfactorials(b, qorder, qorder)).collect();
    let mut walk = Walk { spec, tables: &tables, qorder, out: BiSeries::zero(qorder), y: vec![0; n], visited: 0 };
    walk.descend(0)?;
    Ok(walk.out)
}

struct Walk<'a> {
    spec: &'a AgSumSpec,
    tables: &'a [Vec<QSeries>],
    qorder: usize,
    out: BiSeries,
    y: Vec<i64>,
    visited: usize,
}

impl Walk<'_> {
    /// Coordinates past `depth` are zero, so the exponent at the current
    /// point bounds every point below it; the loop stops once it reaches
    /// the order.
    fn descend(&mut self, depth: usize) -> Result<()> {
        if depth == self.y.len() {
            return self.add_point();
        }
        loop {
            let e = self.spec.exponent(&self.y);
            if e >= self.qorder as i64 {
                break;
            }
            self.descend(depth + 1)?;
            self.y[depth] += 1;
        }
        self.y[depth] = 0;
        Ok(())
    }

    fn add_point(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > AG_POINT_LIMIT {
            return Err(Error::Config("AG sum lattice bound exceeded".into()));
        }
        let e = self.spec.exponent(&self.y) as usize;
        let mut s = QSeries::monomial(self.qorder, e, BigInt::from(1));
        for (i, &yi) in self.y.iter().enumerate() {
            s = s.mul(&self.tables[i][yi as usize]);
        }
        let m: i64 = self.spec.x_exponent.iter().zip(&self.y).map(|(a, b)| a * b).sum();
        let cur = self.out.slice(m as u32);
        self.out.set_slice(m as u32, cur.add(&s));
        Ok(())
    }
}

/// `Σ q^{a²+b²+3c²+3d²+2ab+3ac+3ad+3bc+3bd+6cd} x^{a+b+2c+2d}/(q)_a(q)_b(q³;q³)_c(q³;q³)_d`.
pub fn bir_sum() -> AgSumSpec {
    ag("a^2+b^2+3c^2+3d^2+2ab+3ac+3ad+3bc+3bd+6cd", "a+b+2c+2d")
}

pub fn birp_sum() -> AgSumSpec {
    ag("a(a+1)+b(b+2)+3c(c+1)+3d(d+1)+2ab+3ac+3ad+3bc+3bd+6cd", "a+b+2c+2d")
}

/// The same exponent as [`bir_sum`] graded by `x^{a+b+c+2d}`.
pub fn g111_sum() -> AgSumSpec {
    ag("a^2+b^2+3c^2+3d^2+2ab+3ac+3ad+3bc+3bd+6cd", "a+b+c+2d")
}

/// The same exponent as [`birp_sum`] graded by `x^{a+b+c+2d}`.
pub fn g300_sum() -> AgSumSpec {
    ag("a(a+1)+b(b+2)+3c(c+1)+3d(d+1)+2ab+3ac+3ad+3bc+3bd+6cd", "a+b+c+2d")
}

/// Equals `1/(q,q^2;q^3)_inf` at `x = 1`; graded here by `x^{a+b+2c+2d}`.
pub fn auxiliary_sum() -> AgSumSpec {
    ag("a^2+b(b+1)+3c^2+c+3d^2+2d+2ab+3ac+3ad+3bc+3bd+6cd", "a+b+2c+2d")
}

fn ag(exponent: &str, x: &str) -> AgSumSpec {
    AgSumSpec::from_strings(&["a", "b", "c", "d"], exponent, x, &[1, 1, 3, 3]).expect("built-in sum is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::PochhammerSpec;

    #[test]
    fn quadratic_form_reading() {
        let s = birp_sum();
        assert_eq!(s.matrix[0], vec![2, 2, 3, 3]);
        assert_eq!(s.linear, vec![1, 2, 3, 3]);
        assert_eq!(s.exponent(&[1, 1, 0, 0]), 2 + 3 + 2);
    }

    #[test]
    fn bir_sum_first_coefficients() {
        let s = evaluate_ag_sum(&bir_sum(), 4).unwrap().at_x_one();
        assert_eq!(s, QSeries::from_i64s(&[1, 2, 2, 4], 4));
    }

    #[test]
    fn single_variable_rogers_ramanujan() {
        let spec = AgSumSpec::from_strings(&["a"], "a^2", "a", &[1]).unwrap();
        let s = evaluate_ag_sum(&spec, 20).unwrap().at_x_one();
        let rr = PochhammerSpec::new().over(&[1, 4], 5).expand(20).unwrap();
        assert_eq!(s, rr);
    }

    #[test]
    fn negative_coefficients_rejected() {
        let spec = AgSumSpec::from_strings(&["a", "b"], "a^2+b^2-ab", "a+b", &[1, 1]).unwrap();
        assert!(matches!(evaluate_ag_sum(&spec, 5), Err(Error::Config(_))));
    }

    #[test]
    fn elimination_matches_direct_exponent() {
        let t = g111_sum().to_hypterm("a").unwrap();
        // n = a + b + c + 2d with (a,b,c,d) = (1,2,0,1)
        let (a, b, c, d) = (1i64, 2, 0, 1);
        let n = a + b + c + 2 * d;
        assert_eq!(t.exponent(&[n, b, c, d]), g111_sum().exponent(&[a, b, c, d]));
        assert_eq!(t.denominators[0].form.eval(&[n, b, c, d]), a);
    }
}
