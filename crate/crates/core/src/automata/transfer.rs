use num_bigint::BigInt;
use num_traits::One;

use super::alphabet::Letter;
use super::dfa::Dfa;
use crate::algebra::{parse_poly, BiSeries, LaurentPoly};
use crate::error::{Error, Result};

/// Block width: one letter moves the `x`-argument from `x` to `x q^3`.
pub const BLOCK_SHIFT: usize = 3;

/// `F_u(x) = Σ_v M[u,v] F_v(x q^3)` over the non-accepting states `u, v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferSystem {
    /// Automaton state numbers of the rows/columns, in increasing order.
    pub states: Vec<usize>,
    /// Entries are polynomials in `(x, q)`.
    pub matrix: Vec<Vec<LaurentPoly>>,
    pub shift: usize,
}

/// `x^{ℓ(π(a))} q^{|π(a)|}`.
pub fn letter_weight(l: Letter) -> LaurentPoly {
    let (len, size) = l.weight();
    LaurentPoly::monomial(&["x", "q"], vec![len as i32, size as i32], BigInt::one())
}

pub fn derive_transfer_system(dfa: &Dfa) -> TransferSystem {
    let states: Vec<usize> = (0..dfa.num_states()).filter(|&s| !dfa.is_accepting(s)).collect();
    if dfa.is_accepting(dfa.start()) {
        return TransferSystem { states: Vec::new(), matrix: Vec::new(), shift: BLOCK_SHIFT };
    }
    let zero = LaurentPoly::zero(&["x", "q"]);
    let mut matrix = vec![vec![zero; states.len()]; states.len()];
    for (i, &u) in states.iter().enumerate() {
        for l in Letter::all() {
            let v = dfa.step(u, l);
            if let Some(j) = states.iter().position(|&s| s == v) {
                matrix[i][j] = &matrix[i][j] + &letter_weight(l);
            }
        }
    }
    TransferSystem { states, matrix, shift: BLOCK_SHIFT }
}

impl TransferSystem {
    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    fn row_of(&self, state: usize) -> Result<usize> {
        self.states
            .iter()
            .position(|&s| s == state)
            .ok_or_else(|| Error::Domain(format!("state q{state} is accepting or unknown")))
    }

    /// One application of the right-hand side to a family of series.
    pub fn apply(&self, family: &[BiSeries]) -> Result<Vec<BiSeries>> {
        let shifted: Vec<BiSeries> = family.iter().map(|f| f.apply_xshift(self.shift)).collect();
        self.matrix
            .iter()
            .map(|row| {
                let mut acc = BiSeries::zero(family[0].qorder());
                for (entry, f) in row.iter().zip(&shifted) {
                    if !entry.is_zero() {
                        acc = acc.add(&f.mul_poly(entry)?);
                    }
                }
                Ok(acc)
            })
            .collect()
    }

    /// The series of every state, as the fixed point of [`TransferSystem::apply`]
    /// started from the constant family 1.
    pub fn solve(&self, qorder: usize) -> Result<Vec<BiSeries>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        for row in &self.matrix {
            for entry in row {
                for (e, _) in entry.terms() {
                    if e[0] > 0 && e[1] <= 0 {
                        return Err(Error::Domain(format!("weight {entry} has an x-term without positive q-power")));
                    }
                }
            }
        }
        let mut family = vec![BiSeries::one(qorder); self.states.len()];
        // Each pass fixes at least one more q-degree, so qorder + 1 passes suffice.
        for _ in 0..=qorder + 1 {
            let next = self.apply(&family)?;
            if next == family {
                return Ok(family);
            }
            family = next;
        }
        Err(Error::NonConvergence("transfer-system fixed point did not settle".into()))
    }

    /// The first state whose series is not reproduced by one application of
    /// the system, if any.
    pub fn residual(&self, family: &[BiSeries]) -> Result<Option<usize>> {
        let next = self.apply(family)?;
        Ok(next.iter().zip(family).position(|(a, b)| a != b).map(|i| self.states[i]))
    }
}

/// Read a matrix table: `#` comments, a `states:` line naming the rows, then
/// one row per line with entries separated by `|`.
pub fn parse_system_table(text: &str) -> Result<(Vec<String>, Vec<Vec<LaurentPoly>>)> {
    let mut names = None;
    let mut rows = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if let Some(rest) = line.strip_prefix("states:") {
            names = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            continue;
        }
        rows.push(line.split('|').map(|e| parse_poly(e, &["x", "q"])).collect::<Result<Vec<_>>>()?);
    }
    let names = names.ok_or_else(|| Error::Structural("missing states: line".into()))?;
    if rows.len() != names.len() || rows.iter().any(|r| r.len() != names.len()) {
        return Err(Error::Structural("matrix table is not square over its states".into()));
    }
    Ok((names, rows))
}

/// Generating series `Σ x^{ℓ} q^{|λ|}` of the words leading from `state` into
/// no accepting state, modulo `q^qorder`.
pub fn language_series(sys: &TransferSystem, state: usize, qorder: usize) -> Result<BiSeries> {
    if qorder == 0 {
        return Err(Error::Domain("q-order must be at least 1".into()));
    }
    let row = sys.row_of(state)?;
    Ok(sys.solve(qorder)?.swap_remove(row))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::dfa::build_avoidance_dfa;

    #[test]
    fn one_state_matrix_sums_all_weights() {
        let d = Dfa::new(vec![[0; 13]], 0, vec![false]).unwrap();
        let sys = derive_transfer_system(&d);
        // h, i weigh x^2q^3 and j, k, l weigh x^2q^4.
        let expect = parse_poly("1+2xq+2xq^2+2xq^3+2x^2q^3+3x^2q^4+x^2q^6", &["x", "q"]).unwrap();
        assert_eq!(sys.matrix, vec![vec![expect]]);
    }

    #[test]
    fn accepting_start_gives_empty_system() {
        let d = Dfa::new(vec![[0; 13]], 0, vec![true]).unwrap();
        assert!(derive_transfer_system(&d).is_empty());
    }

    #[test]
    fn order_one_is_constant() {
        let d = build_avoidance_dfa(&["b".parse().unwrap()]).unwrap();
        let sys = derive_transfer_system(&d);
        assert_eq!(language_series(&sys, 0, 1).unwrap(), BiSeries::one(1));
    }
}
