//! Cylindric partitions of a cyclic profile, their direct enumeration and the
//! Corteel-Welsh functional recursion for `G_c(x) = (xq;q)_inf F_c(x)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::algebra::{inverse_qfactorials, BiSeries, LaurentPoly};
use crate::error::{Error, Result};

/// Cyclic profile `(c_0, ..., c_{r-1})`; the level is the sum.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Profile(Vec<u32>);

impl Profile {
    pub fn new(c: Vec<u32>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::Domain("a profile needs at least one entry".into()));
        }
        Ok(Profile(c))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn level(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Every profile with `rank` entries summing to `level`, in
    /// lexicographically decreasing order.
    pub fn all(rank: usize, level: u32) -> Vec<Profile> {
        fn go(rank: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Profile>) {
            if cur.len() + 1 == rank {
                cur.push(left);
                out.push(Profile(cur.clone()));
                cur.pop();
                return;
            }
            for v in (0..=left).rev() {
                cur.push(v);
                go(rank, left - v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if rank > 0 {
            go(rank, level, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        let c = body
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse { pos: 0, msg: format!("profile entry {t:?}: {e}") }))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(c)
    }
}

fn part(row: &[u32], j: usize) -> u32 {
    row.get(j).copied().unwrap_or(0)
}

/// `λ^{(i)}_j ≥ λ^{(i+1)}_{j+c_{i+1}}` for every cyclic `i` and `j ≥ 1`;
/// rows are weakly decreasing lists without trailing zeros.
pub fn is_cylindric(rows: &[Vec<u32>], profile: &Profile) -> Result<bool> {
    let r = profile.rank();
    if rows.len() != r {
        return Err(Error::Structural(format!("{} rows for a profile of rank {r}", rows.len())));
    }
    Ok((0..r).all(|i| pair_ok(&rows[i], &rows[(i + 1) % r], profile.0[(i + 1) % r] as usize)))
}

fn pair_ok(upper: &[u32], lower: &[u32], offset: usize) -> bool {
    (0..lower.len().saturating_sub(offset)).all(|j| part(upper, j) >= lower[j + offset])
}

/// All ordinary partitions of each size `0..=n`, parts in decreasing order.
fn partitions_by_size(n: u32) -> Vec<Vec<Vec<u32>>> {
    fn go(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            go(left - p, p, cur, out);
            cur.pop();
        }
    }
    (0..=n)
        .map(|k| {
            let mut out = Vec::new();
            go(k, k, &mut Vec::new(), &mut out);
            out
        })
        .collect()
}

/// `Σ x^{max(λ)} q^{|λ|}` over cylindric partitions of total size at most
/// `n`, with q-order `n + 1`.
pub fn enumerate_cylindric(profile: &Profile, n: u32) -> BiSeries {
    let by_size = partitions_by_size(n);
    let r = profile.rank();
    let c = profile.entries();
    let mut out = BiSeries::zero(n as usize + 1);
    let one = BigInt::one();
    let mut rows: Vec<&[u32]> = Vec::with_capacity(r);
    fn go<'a>(
        by_size: &'a [Vec<Vec<u32>>],
        c: &[u32],
        left: u32,
        rows: &mut Vec<&'a [u32]>,
        out: &mut BiSeries,
        one: &BigInt,
    ) {
        let r = c.len();
        let i = rows.len();
        if i == r {
            if pair_ok(rows[r - 1], rows[0], c[0] as usize) {
                let size: u32 = rows.iter().flat_map(|row| row.iter()).sum();
                let max = rows.iter().filter_map(|row| row.first()).max().copied().unwrap_or(0);
                out.add_term(max, size as usize, one);
            }
            return;
        }
        for (k, parts) in by_size.iter().enumerate().take(left as usize + 1) {
            for row in parts {
                if i > 0 && !pair_ok(rows[i - 1], row, c[i] as usize) {
                    continue;
                }
                rows.push(row);
                go(by_size, c, left - k as u32, rows, out, one);
                rows.pop();
            }
        }
    }
    go(&by_size, c, n, &mut rows, &mut out, &one);
    out
}

/// One term `(-1)^{|J|-1} (xq;q)_{|J|-1} G_{c(J)}(x q^{|J|})` of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwChild {
    pub subset: Vec<usize>,
    pub sign: i32,
    /// `|J| - 1`, the length of the finite product `(xq;q)`.
    pub poch_degree: usize,
    pub child: Profile,
}

impl CwChild {
    pub fn shift(&self) -> usize {
        self.subset.len()
    }
}

pub fn cw_children(profile: &Profile) -> Result<Vec<CwChild>> {
    if profile.level() == 0 {
        return Err(Error::Domain("the zero profile has no recursion".into()));
    }
    let r = profile.rank();
    let c = profile.entries();
    let support: Vec<usize> = (0..r).filter(|&i| c[i] > 0).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << support.len()) {
        let subset: Vec<usize> = support.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i).collect();
        let in_j = |i: usize| subset.contains(&i);
        let child = (0..r)
            .map(|i| {
                let prev = (i + r - 1) % r;
                match (in_j(i), in_j(prev)) {
                    (true, false) => c[i] - 1,
                    (false, true) => c[i] + 1,
                    _ => c[i],
                }
            })
            .collect();
        let k = subset.len();
        out.push(CwChild { subset, sign: if k % 2 == 1 { 1 } else { -1 }, poch_degree: k - 1, child: Profile(child) });
    }
    Ok(out)
}

/// `(xq;q)_k` as a polynomial in `(x, q)`.
pub fn finite_xpoch(k: usize) -> LaurentPoly {
    let vars = ["x", "q"];
    (1..=k as i32).fold(LaurentPoly::one(&vars), |acc, i| {
        acc * (LaurentPoly::one(&vars) - LaurentPoly::monomial(&vars, vec![1, i], BigInt::one()))
    })
}

/// `G_c mod q^qorder` for every profile of the same rank and level, as the
/// joint fixed point of the recursion started from the constant family 1.
pub fn cw_family(rank: usize, level: u32, qorder: usize) -> Result<BTreeMap<Profile, BiSeries>> {
    let profiles = Profile::all(rank, level);
    let children: Vec<Vec<(CwChild, LaurentPoly)>> = profiles
        .iter()
        .map(|p| {
            Ok(cw_children(p)?
                .into_iter()
                .map(|ch| {
                    let coeff = finite_xpoch(ch.poch_degree).scale(&BigInt::from(ch.sign));
                    (ch, coeff)
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let index: BTreeMap<&Profile, usize> = profiles.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut family = vec![BiSeries::one(qorder); profiles.len()];
    for _ in 0..=qorder + 1 {
        let mut next = Vec::with_capacity(family.len());
        for terms in &children {
            let mut acc = BiSeries::zero(qorder);
            for (ch, coeff) in terms {
                let g = family[index[&ch.child]].apply_xshift(ch.shift());
                acc = acc.add(&g.mul_poly(coeff)?);
            }
            next.push(acc);
        }
        if next == family {
            return Ok(profiles.into_iter().zip(family).collect());
        }
        family = next;
    }
    Err(Error::NonConvergence("cylindric recursion did not settle".into()))
}

pub fn cw_fixed_point(profile: &Profile, qorder: usize) -> Result<BiSeries> {
    if qorder == 0 {
        return Err(Error::Domain("q-order must be at least 1".into()));
    }
    let mut family = cw_family(profile.rank(), profile.level(), qorder)?;
    family.remove(profile).ok_or_else(|| Error::Domain(format!("unknown profile {profile}")))
}

/// `1/(xq;q)_inf = Σ_m x^m q^m / (q;q)_m` modulo `q^qorder`.
pub fn inverse_xpoch_infinite(qorder: usize) -> BiSeries {
    let mut out = BiSeries::zero(qorder);
    for (m, s) in inverse_qfactorials(1, qorder, qorder).into_iter().enumerate() {
        if m < qorder {
            out.set_slice(m as u32, s.shift(m));
        }
    }
    out
}

/// `(xq;q)_inf` modulo `q^qorder`.
pub fn xpoch_infinite(qorder: usize) -> Result<BiSeries> {
    BiSeries::from_poly(&finite_xpoch(qorder.saturating_sub(1)), qorder)
}

/// `F = G / (xq;q)_inf` modulo `q^qorder`.
pub fn g_to_f(g: &BiSeries, qorder: usize) -> BiSeries {
    g.truncate(qorder).mul(&inverse_xpoch_infinite(qorder))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Profile {
        s.parse().unwrap()
    }

    #[test]
    fn cylindric_examples() {
        assert!(is_cylindric(&[vec![], vec![], vec![]], &p("3,0,0")).unwrap());
        assert!(is_cylindric(&[vec![1], vec![], vec![]], &p("1,1,1")).unwrap());
        assert!(!is_cylindric(&[vec![], vec![], vec![1]], &p("3,0,0")).unwrap());
        assert!(is_cylindric(&[vec![]], &p("3,0,0")).is_err());
    }

    #[test]
    fn small_enumerations() {
        let f = enumerate_cylindric(&p("1,1,1"), 1);
        assert_eq!(f.coeff(1, 1), BigInt::from(3));
        let f = enumerate_cylindric(&p("3,0,0"), 1);
        assert_eq!(f.coeff(1, 1), BigInt::from(1));
        assert_eq!(enumerate_cylindric(&p("2,1,0"), 0), BiSeries::one(1));
    }

    #[test]
    fn ten_level_three_profiles() {
        assert_eq!(Profile::all(3, 3).len(), 10);
    }

    #[test]
    fn children_of_300_and_111() {
        let ch = cw_children(&p("3,0,0")).unwrap();
        assert_eq!(ch.len(), 1);
        assert_eq!((ch[0].child.clone(), ch[0].shift(), ch[0].sign), (p("2,1,0"), 1, 1));
        let ch = cw_children(&p("1,1,1")).unwrap();
        assert_eq!(ch.len(), 7);
        let full = ch.iter().find(|c| c.subset.len() == 3).unwrap();
        assert_eq!((full.child.clone(), full.poch_degree, full.sign), (p("1,1,1"), 2, 1));
        assert!(cw_children(&p("0,0,0")).is_err());
    }

    #[test]
    fn euler_product_inverse() {
        let n = 12;
        let prod = xpoch_infinite(n).unwrap().mul(&inverse_xpoch_infinite(n));
        assert_eq!(prod, BiSeries::one(n));
    }
}
