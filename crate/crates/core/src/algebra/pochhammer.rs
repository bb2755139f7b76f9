use serde::{Deserialize, Serialize};

use super::series::QSeries;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Numerator,
    Denominator,
}

/// One factor `(q^residue; q^modulus)_inf` raised to `±multiplicity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PochFactor {
    pub residue: u32,
    pub modulus: u32,
    pub side: Side,
    pub multiplicity: u32,
}

/// A finite product of infinite q-Pochhammer symbols and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PochhammerSpec {
    pub factors: Vec<PochFactor>,
}

impl PochhammerSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append `(q^r1, q^r2, ...; q^m)_inf` on the given side, one factor per
    /// listed residue (repeats are allowed and count as multiplicity).
    pub fn with(mut self, side: Side, residues: &[u32], modulus: u32) -> Self {
        for &r in residues {
            self.factors.push(PochFactor { residue: r, modulus, side, multiplicity: 1 });
        }
        self
    }

    pub fn over(self, residues: &[u32], modulus: u32) -> Self {
        self.with(Side::Denominator, residues, modulus)
    }

    pub fn times(self, residues: &[u32], modulus: u32) -> Self {
        self.with(Side::Numerator, residues, modulus)
    }

    /// `(q^2,q^4;q^6)_inf / (q,q,q^3,q^3,q^5,q^5;q^6)_inf`.
    pub fn bir() -> Self {
        Self::new().times(&[2, 4], 6).over(&[1, 1, 3, 3, 5, 5], 6)
    }

    /// `1 / (q^2,q^3,q^3,q^4;q^6)_inf`.
    pub fn birp() -> Self {
        Self::new().over(&[2, 3, 3, 4], 6)
    }

    /// `1 / (q,q^2;q^3)_inf`.
    pub fn auxiliary() -> Self {
        Self::new().over(&[1, 2], 3)
    }

    /// `(q;q)_inf`.
    pub fn euler() -> Self {
        Self::new().times(&[1], 1)
    }

    pub fn validate(&self) -> Result<()> {
        for f in &self.factors {
            if f.modulus == 0 {
                return Err(Error::Domain("Pochhammer modulus must be at least 1".into()));
            }
            if f.side == Side::Denominator && f.residue == 0 {
                return Err(Error::Domain("denominator factor (1; q^m) is not invertible".into()));
            }
        }
        Ok(())
    }

    /// Exact expansion modulo `q^order`.
    pub fn expand(&self, order: usize) -> Result<QSeries> {
        self.validate()?;
        let one = num_bigint::BigInt::from(1);
        let mut num = QSeries::one(order);
        let mut den = QSeries::one(order);
        for f in &self.factors {
            let target = if f.side == Side::Numerator { &mut num } else { &mut den };
            for _ in 0..f.multiplicity {
                let mut e = f.residue as usize;
                while e < order {
                    target.mul_binomial(&one, e);
                    e += f.modulus as usize;
                }
            }
        }
        Ok(num.mul(&den.invert()?))
    }
}

/// Expand `(q^residue; q^modulus)_count`, a finite product.
pub fn finite_poch(residue: u32, modulus: u32, count: usize, order: usize) -> QSeries {
    let one = num_bigint::BigInt::from(1);
    let mut s = QSeries::one(order);
    for j in 0..count {
        let e = residue as usize + j * modulus as usize;
        if e >= order {
            break;
        }
        s.mul_binomial(&one, e);
    }
    s
}

/// `1/(q^base; q^base)_k` for `k = 0..=kmax`, each modulo `q^order`.
pub fn inverse_qfactorials(base: u32, kmax: usize, order: usize) -> Vec<QSeries> {
    let mut out = Vec::with_capacity(kmax + 1);
    let mut cur = QSeries::one(order);
    out.push(cur.clone());
    for k in 1..=kmax {
        let e = base as usize * k;
        if e < order {
            cur.div_one_minus(e);
        }
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_product_is_one() {
        assert_eq!(PochhammerSpec::new().expand(5).unwrap(), QSeries::one(5));
    }

    #[test]
    fn euler_inverse_gives_partition_numbers() {
        let s = PochhammerSpec::new().over(&[1], 1).expand(6).unwrap();
        assert_eq!(s, QSeries::from_i64s(&[1, 1, 2, 3, 5, 7], 6));
    }

    #[test]
    fn residue_zero_denominator_rejected() {
        assert!(PochhammerSpec::new().over(&[0], 3).expand(5).is_err());
    }

    #[test]
    fn numerator_residue_zero_is_zero() {
        assert!(PochhammerSpec::new().times(&[0], 2).expand(5).unwrap().is_zero());
    }
}
