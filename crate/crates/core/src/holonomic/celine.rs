//! Certificate search with a fixed ansatz.
//!
//! Each unknown is one monomial of one family (`p_j` or a telescoper
//! `C_{i,j}`). Applying the ansatz to the term and clearing denominators
//! makes every unknown a column of integer coefficients indexed by the
//! monomials of `(q, u, v..)`; a certificate is a kernel vector with
//! `p_0 ≠ 0`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cert::{operator_vars, ore_mul, verify_certificate, CertificateSet, CertificateSource, ClearedShifts};
use super::term::HypTerm;
use crate::algebra::LaurentPoly;
use crate::error::{Error, Result};

/// Which coefficient an unknown belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `p_j`.
    P(usize),
    /// `C_{i,j}`, the telescoper of summation variable `i` at `N^j`.
    Telescoper(usize, usize),
}

/// The monomials allowed in each family, as exponent vectors over
/// [`operator_vars`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CelineTemplate {
    pub nvars: usize,
    pub order: usize,
    pub unknowns: BTreeSet<(Family, Vec<i32>)>,
}

impl CelineTemplate {
    /// The support of a known certificate, each monomial widened by
    /// `q^{-window}..q^{window}`.
    pub fn from_certificate(cert: &CertificateSet, window: i32) -> Self {
        let mut unknowns = BTreeSet::new();
        let mut add = |fam: Family, p: &LaurentPoly| {
            for (e, _) in p.terms() {
                for w in -window..=window {
                    let mut e = e.clone();
                    e[0] += w;
                    unknowns.insert((fam, e));
                }
            }
        };
        for (j, p) in cert.p.iter().enumerate() {
            add(Family::P(j), p);
        }
        for (i, fam) in cert.telescopers.iter().enumerate() {
            for (j, c) in fam.iter().enumerate() {
                add(Family::Telescoper(i, j), c);
            }
        }
        CelineTemplate { nvars: cert.nvars(), order: cert.order, unknowns }
    }

    /// Every `p_j` ranges over `q^a u^b` and every telescoper over
    /// `q^a u^b v^c K^s` with `a` in `qrange`, total degree in `u, v` at
    /// most `deg` and total degree in the shift letters at most `kdeg`.
    pub fn boxed(nvars: usize, order: usize, deg: u32, qrange: (i32, i32), kdeg: u32) -> Self {
        let mut uv = Vec::new();
        monomials_up_to(1 + nvars, deg as i32, &mut vec![], &mut uv);
        let mut ks = Vec::new();
        monomials_up_to(nvars, kdeg as i32, &mut vec![], &mut ks);
        let mut unknowns = BTreeSet::new();
        for a in qrange.0..=qrange.1 {
            for m in &uv {
                for k in &ks {
                    let mut e = vec![a];
                    e.extend(m);
                    e.extend(k);
                    let plain = k.iter().all(|&x| x == 0);
                    for j in 0..=order {
                        if plain && m[1..].iter().all(|&x| x == 0) {
                            unknowns.insert((Family::P(j), e.clone()));
                        }
                        for i in 0..nvars {
                            unknowns.insert((Family::Telescoper(i, j), e.clone()));
                        }
                    }
                }
            }
        }
        CelineTemplate { nvars, order, unknowns }
    }

    pub fn len(&self) -> usize {
        self.unknowns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unknowns.is_empty()
    }
}

fn monomials_up_to(n: usize, deg: i32, prefix: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if prefix.len() == n {
        out.push(prefix.clone());
        return;
    }
    let used: i32 = prefix.iter().sum();
    for d in 0..=deg - used {
        prefix.push(d);
        monomials_up_to(n, deg, prefix, out);
        prefix.pop();
    }
}

type Sparse<K> = BTreeMap<K, BigInt>;

/// Search the template for a certificate of `term`.
///
/// Columns are processed telescopers first, then `p_j` for `j ≥ 1`, then
/// `p_0`, each group by total degree and then lexicographically. The first
/// `p_0` monomial that depends on the columns before it determines the
/// answer, which therefore has `p_0 ≠ 0` and support confined to the
/// earliest possible columns. The result is a primitive integer vector with
/// the leading coefficient of `p_0` positive, and is verified before it is
/// returned.
pub fn celine_solve(term: &HypTerm, template: &CelineTemplate) -> Result<Option<CertificateSet>> {
    term.validate()?;
    let r = template.nvars;
    if r != term.vars.len() {
        return Err(Error::Structural(format!("template has {r} summation variables, term has {}", term.vars.len())));
    }
    if template.unknowns.iter().any(|(f, e)| {
        e.len() != 2 + 2 * r
            || match *f {
                Family::P(j) => j > template.order || e[2..].iter().any(|&x| x != 0),
                Family::Telescoper(i, j) => i >= r || j > template.order,
            }
    }) {
        return Err(Error::Structural("template unknown does not fit the ansatz".into()));
    }
    let mut columns: Vec<&(Family, Vec<i32>)> = template.unknowns.iter().collect();
    let group = |f: &Family| match f {
        Family::Telescoper(..) => 0,
        Family::P(0) => 2,
        Family::P(_) => 1,
    };
    columns.sort_by_key(|(f, e)| (group(f), e.iter().map(|x| x.abs()).sum::<i32>(), *f, e.clone()));

    let full = operator_vars(r);
    // each unknown as an expanded operator: list of ((shift, j), ring monomial, coeff)
    let expanded: Vec<Vec<((Vec<i32>, usize), Vec<i32>, BigInt)>> = columns
        .iter()
        .map(|(f, e)| {
            let mono = LaurentPoly::monomial(&full, e.clone(), BigInt::one());
            let (j, op) = match *f {
                Family::P(j) => (j, mono),
                Family::Telescoper(i, j) => {
                    let mut k = vec![0; 2 + 2 * r];
                    k[2 + r + i] = 1;
                    let ki = LaurentPoly::monomial(&full, k, BigInt::one());
                    (j, &mono - &ore_mul(&ki, &mono, r))
                }
            };
            op.terms().map(|(e, c)| ((e[2 + r..].to_vec(), j), e[..2 + r].to_vec(), c.clone())).collect()
        })
        .collect();
    let keys: BTreeSet<(Vec<i32>, usize)> = expanded.iter().flatten().map(|t| t.0.clone()).collect();
    let table = ClearedShifts::new(term, &keys);

    let mut pivots: BTreeMap<Vec<i32>, (Sparse<Vec<i32>>, Sparse<usize>)> = BTreeMap::new();
    for (ci, parts) in expanded.iter().enumerate() {
        let mut v: Sparse<Vec<i32>> = BTreeMap::new();
        for (key, e, c) in parts {
            for (m, a) in table.apply_monomial(key, e, c).terms() {
                *v.entry(m.clone()).or_insert_with(BigInt::zero) += a;
            }
        }
        v.retain(|_, c| !c.is_zero());
        let mut combo: Sparse<usize> = BTreeMap::from([(ci, BigInt::one())]);
        let dependent = loop {
            let Some(lead) = v.keys().next_back().cloned() else { break true };
            let Some((pv, pc)) = pivots.get(&lead) else {
                pivots.insert(lead, (std::mem::take(&mut v), std::mem::take(&mut combo)));
                break false;
            };
            // v <- a v - b pv with a, b chosen to cancel the lead
            let (a, b) = cancel_factors(&pv[&lead], &v[&lead]);
            combine(&mut v, &a, pv, &b);
            combine(&mut combo, &a, pc, &b);
            remove_content(&mut v, &mut combo);
        };
        if dependent && matches!(columns[ci].0, Family::P(0)) {
            let cert = assemble(template, &columns, &combo, &term.vars);
            if !verify_certificate(term, &cert)?.holds {
                return Err(Error::Structural("kernel vector does not verify".into()));
            }
            return Ok(Some(cert));
        }
    }
    Ok(None)
}

/// `(a, b)` with `a·y - b·x = 0` and `a > 0`, for pivot `x` and target `y`.
fn cancel_factors(x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
    let g = x.gcd(y);
    let (a, b) = (x / &g, y / &g);
    if a.is_negative() {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// `v <- a v - b w`.
fn combine<K: Ord + Clone>(v: &mut Sparse<K>, a: &BigInt, w: &Sparse<K>, b: &BigInt) {
    if !a.is_one() {
        for c in v.values_mut() {
            *c *= a;
        }
    }
    for (k, c) in w {
        *v.entry(k.clone()).or_insert_with(BigInt::zero) -= b * c;
    }
    v.retain(|_, c| !c.is_zero());
}

fn remove_content(v: &mut Sparse<Vec<i32>>, combo: &mut Sparse<usize>) {
    let mut g = BigInt::zero();
    for c in v.values().chain(combo.values()) {
        g = g.gcd(c);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for c in v.values_mut().chain(combo.values_mut()) {
            *c /= &g;
        }
    }
}

fn assemble(template: &CelineTemplate, columns: &[&(Family, Vec<i32>)], combo: &Sparse<usize>, vars: &[String]) -> CertificateSet {
    let r = vars.len();
    let full = operator_vars(r);
    let zero = LaurentPoly::zero(&full);
    let mut p = vec![zero.clone(); template.order + 1];
    let mut tele = vec![vec![zero; template.order + 1]; r];
    for (&ci, c) in combo {
        let (f, e) = columns[ci];
        let slot = match *f {
            Family::P(j) => &mut p[j],
            Family::Telescoper(i, j) => &mut tele[i][j],
        };
        slot.add_term(e.clone(), c.clone());
    }
    if p[0].leading_coeff().is_negative() {
        p = p.iter().map(|x| -x).collect();
        tele = tele.iter().map(|f| f.iter().map(|x| -x).collect()).collect();
    }
    CertificateSet { vars: vars.to_vec(), order: template.order, p, telescopers: tele }
}

/// How a transcribed certificate was brought to a verified state.
#[derive(Clone, Debug)]
pub enum CertifyOutcome {
    Verbatim(CertificateSet),
    Emended(CertificateSet),
    /// Found by [`celine_solve`] on the support of the transcription;
    /// `changed` lists the coefficients `(family, j)` that differ from it.
    Regenerated { cert: CertificateSet, changed: Vec<(Family, usize)> },
    Failed,
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&CertificateSet> {
        match self {
            CertifyOutcome::Verbatim(c) | CertifyOutcome::Emended(c) | CertifyOutcome::Regenerated { cert: c, .. } => Some(c),
            CertifyOutcome::Failed => None,
        }
    }
}

/// Try the transcription as printed, then with its emendations, then a
/// search over its support widened by `q^{±window}`.
pub fn certify_with_fallback(term: &HypTerm, src: &CertificateSource, window: i32) -> Result<CertifyOutcome> {
    let verbatim = src.compile();
    if let Ok(c) = &verbatim {
        if verify_certificate(term, c)?.holds {
            return Ok(CertifyOutcome::Verbatim(c.clone()));
        }
    }
    let emended = src.emended().and_then(|s| s.compile());
    if let Ok(c) = &emended {
        if !src.emendations.is_empty() && verify_certificate(term, c)?.holds {
            return Ok(CertifyOutcome::Emended(c.clone()));
        }
    }
    let Some(base) = emended.ok().or(verbatim.ok()) else {
        return Ok(CertifyOutcome::Failed);
    };
    let Some(cert) = celine_solve(term, &CelineTemplate::from_certificate(&base, window))? else {
        return Ok(CertifyOutcome::Failed);
    };
    let mut changed = Vec::new();
    for j in 0..=cert.order {
        if cert.p[j] != base.p[j] {
            changed.push((Family::P(j), j));
        }
        for i in 0..cert.nvars() {
            if cert.telescopers[i][j] != base.telescopers[i][j] {
                changed.push((Family::Telescoper(i, j), j));
            }
        }
    }
    Ok(CertifyOutcome::Regenerated { cert, changed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_poly;
    use crate::holonomic::term::{Denominator, LinearForm};

    fn rr_term() -> HypTerm {
        HypTerm {
            vars: vec![],
            matrix: vec![vec![2]],
            linear: vec![0],
            constant: 0,
            denominators: vec![Denominator { form: LinearForm { coeffs: vec![1], constant: 0 }, base: 1 }],
            x_exponent: LinearForm { coeffs: vec![1], constant: 0 },
        }
    }

    #[test]
    fn two_term_relation_for_single_sum() {
        let cert = celine_solve(&rr_term(), &CelineTemplate::boxed(0, 1, 2, (-2, 2), 0)).unwrap().unwrap();
        let qu = ["q", "u"];
        let rec = cert.recurrence().unwrap();
        assert_eq!(rec[0], parse_poly("u-1", &qu).unwrap());
        assert_eq!(rec[1], LaurentPoly::monomial(&qu, vec![-1, 2], BigInt::one()));
    }

    #[test]
    fn order_zero_has_no_solution() {
        assert!(celine_solve(&rr_term(), &CelineTemplate::boxed(0, 0, 3, (-3, 3), 0)).unwrap().is_none());
    }

    #[test]
    fn box_shape() {
        let t = CelineTemplate::boxed(1, 1, 1, (0, 0), 0);
        // p_j: 1, u; telescopers: 1, u, v  for j = 0, 1
        assert_eq!(t.len(), 2 * 2 + 2 * 3);
        // the telescopers also get K times each of 1, u, v
        assert_eq!(CelineTemplate::boxed(1, 1, 1, (0, 0), 1).len(), 2 * 2 + 2 * 6);
    }
}
