//! Scalar equations for one component of a first-order system
//! `F(x) = A(x) F(x q^unit)`.
//!
//! Row `k` expresses `F_c(x q^{unit·k})` through `F(x q^{unit·m})` after `m`
//! substitutions. Rows are kept polynomial by tracking each row's
//! denominator separately. As soon as the rows become linearly dependent
//! the dependency, computed from signed maximal minors, is the operator.

use num_rational::BigRational;
use num_traits::Zero;

use super::qdiff::QDiffOperator;
use crate::algebra::{LaurentPoly, RationalFunction};
use crate::error::{Error, Result};

const XQ: [&str; 2] = ["x", "q"];

/// Points at which rank is probed; dependency must show at both.
fn probe_points() -> [[BigRational; 2]; 2] {
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    [[r(3, 7), r(2, 5)], [r(-5, 11), r(7, 3)]]
}

/// Annihilator of component `component` for a system with polynomial
/// entries in `(x, q)`.
pub fn uncouple_polynomial_system(a: &[Vec<LaurentPoly>], unit: u32, component: usize) -> Result<QDiffOperator> {
    let rf: Vec<Vec<RationalFunction>> =
        a.iter().map(|row| row.iter().map(|p| RationalFunction::from_poly(p.clone())).collect()).collect();
    uncouple_system(&rf, unit, component)
}

/// Annihilator of component `component` for `F(x) = A(x) F(x q^unit)` with
/// rational entries in `(x, q)`, cleared to polynomial coefficients.
pub fn uncouple_system(a: &[Vec<RationalFunction>], unit: u32, component: usize) -> Result<QDiffOperator> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(Error::Structural("system matrix must be square and nonempty".into()));
    }
    if component >= n {
        return Err(Error::Domain(format!("component {component} out of range for a {n}x{n} system")));
    }
    if unit == 0 {
        return Err(Error::Domain("shift unit must be positive".into()));
    }
    let (num, den) = clear_denominators(a)?;
    let unit_vec = |i: usize| -> Vec<LaurentPoly> {
        (0..n).map(|j| if i == j { LaurentPoly::one(&XQ) } else { LaurentPoly::zero(&XQ) }).collect()
    };
    let mut rows = vec![unit_vec(component)];
    let mut dens = vec![LaurentPoly::one(&XQ)];
    for m in 0..n {
        let am: Vec<Vec<LaurentPoly>> = num.iter().map(|r| r.iter().map(|p| xshift(p, unit * m as u32)).collect()).collect();
        let dm = xshift(&den, unit * m as u32);
        for (row, d) in rows.iter_mut().zip(dens.iter_mut()) {
            *row = (0..n).map(|j| (0..n).fold(LaurentPoly::zero(&XQ), |acc, i| acc + &row[i] * &am[i][j])).collect();
            *d = &*d * &dm;
        }
        rows.push(unit_vec(component));
        dens.push(LaurentPoly::one(&XQ));
        let step = m + 1;
        let mut ranks = Vec::new();
        let mut pivots = Vec::new();
        for pt in probe_points() {
            let (rank, piv) = numeric_rank(&rows, &pt)?;
            ranks.push(rank);
            pivots.push(piv);
        }
        // a point can only lower the rank, so the generic rank is the largest seen
        let k = rows.len();
        let best = (0..ranks.len()).max_by_key(|&i| ranks[i]).unwrap();
        if ranks[best] == k {
            continue;
        }
        if ranks[best] + 1 < k {
            return Err(Error::Degenerate { step, msg: format!("rank dropped below {} among {k} rows", k - 1) });
        }
        let cols = &pivots[best];
        let mu: Vec<LaurentPoly> = (0..k)
            .map(|skip| {
                let minor: Vec<Vec<LaurentPoly>> =
                    rows.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, r)| cols.iter().map(|&c| r[c].clone()).collect()).collect();
                let d = det(&minor);
                if skip % 2 == 0 {
                    d
                } else {
                    -d
                }
            })
            .collect();
        for j in 0..n {
            let s = mu.iter().zip(&rows).fold(LaurentPoly::zero(&XQ), |acc, (m, r)| acc + m * &r[j]);
            if !s.is_zero() {
                return Err(Error::Degenerate { step, msg: format!("minors do not annihilate column {j}") });
            }
        }
        let terms = mu.iter().zip(&dens).enumerate().map(|(s, (m, d))| (m * d, s as u32)).collect();
        let op = QDiffOperator::new(unit, terms)?;
        if op.terms.is_empty() {
            return Err(Error::Degenerate { step, msg: "dependency has zero coefficients".into() });
        }
        return op.primitive();
    }
    Err(Error::Degenerate { step: n, msg: "no dependency among n+1 rows".into() })
}

/// `A = N / d` with a single polynomial `d`, the lcm of the entry denominators.
fn clear_denominators(a: &[Vec<RationalFunction>]) -> Result<(Vec<Vec<LaurentPoly>>, LaurentPoly)> {
    let mut lcm = LaurentPoly::one(&XQ);
    for e in a.iter().flatten() {
        let d = e.den().embed(&XQ)?;
        let g = lcm.gcd(&d)?;
        let part = d.div_exact(&g).ok_or_else(|| Error::Structural("gcd does not divide".into()))?;
        lcm = &lcm * &part;
    }
    let num = a
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| {
                    let scale = lcm.div_exact(&e.den().embed(&XQ)?).ok_or_else(|| Error::Structural("lcm is not a multiple".into()))?;
                    Ok(&e.num().embed(&XQ)? * &scale)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((num, lcm))
}

/// `p(x q^k, q)`.
fn xshift(p: &LaurentPoly, k: u32) -> LaurentPoly {
    p.substitute_monomials(&[vec![1, k as i32], vec![0, 1]])
}

/// Rank of the rows at a point, with the pivot columns found.
fn numeric_rank(rows: &[Vec<LaurentPoly>], pt: &[BigRational; 2]) -> Result<(usize, Vec<usize>)> {
    let mut m: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|p| p.eval(pt)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                let pivot_row = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    Ok((rank, pivots))
}

/// Laplace expansion along the first row; the matrices here are at most 6x6.
fn det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    match m.len() {
        0 => LaurentPoly::one(&XQ),
        1 => m[0][0].clone(),
        n => {
            let mut acc = LaurentPoly::zero(&XQ);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<LaurentPoly>> =
                    m[1..].iter().map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
                let t = &m[0][j] * &det(&minor);
                acc = if j % 2 == 0 { acc + t } else { acc - t };
            }
            acc
        }
    }
}
