use std::collections::BTreeMap;
use std::time::Duration;

use bipartid::algebra::{BiSeries, QSeries};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// The first place two results disagree. Series mismatches carry the
/// exponents of the offending coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_exp: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_exp: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub actual: Option<String>,
}

impl Witness {
    pub fn note(detail: impl Into<String>) -> Self {
        Witness { detail: detail.into(), x_exp: None, q_exp: None, expected: None, actual: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub task: String,
    pub criterion: u32,
    pub inputs: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    /// Dropped from serialized output unless timings are requested, so
    /// that repeated runs print identical bytes.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Outcome of a single check inside a task.
pub type Check = Result<(), Witness>;

pub fn compare_bi(what: &str, expected: &BiSeries, actual: &BiSeries) -> Check {
    match expected.first_difference(actual) {
        None => Ok(()),
        Some((m, e, a, b)) => Err(Witness {
            detail: format!("{what}: coefficient of x^{m} q^{e} differs"),
            x_exp: Some(m),
            q_exp: Some(e),
            expected: Some(a.to_string()),
            actual: Some(b.to_string()),
        }),
    }
}

pub fn compare_q(what: &str, expected: &QSeries, actual: &QSeries) -> Check {
    let n = expected.order().min(actual.order());
    match (0..n).find(|&e| expected.coeff(e) != actual.coeff(e)) {
        None if expected.order() == actual.order() => Ok(()),
        None => Err(Witness::note(format!("{what}: orders {} and {} differ", expected.order(), actual.order()))),
        Some(e) => Err(Witness {
            detail: format!("{what}: coefficient of q^{e} differs"),
            x_exp: None,
            q_exp: Some(e),
            expected: Some(expected.coeff(e).to_string()),
            actual: Some(actual.coeff(e).to_string()),
        }),
    }
}

/// A series that should vanish, e.g. an operator applied to its solution.
pub fn expect_zero(what: &str, s: &BiSeries) -> Check {
    compare_bi(what, &BiSeries::zero(s.qorder()), s)
}

pub fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(Witness::note(detail()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn series_mismatch_names_the_coefficient() {
        let a = BiSeries::one(5);
        let mut b = BiSeries::one(5);
        b.add_term(2, 3, &BigInt::from(7));
        let w = compare_bi("test", &a, &b).unwrap_err();
        assert_eq!((w.x_exp, w.q_exp), (Some(2), Some(3)));
        assert_eq!((w.expected.as_deref(), w.actual.as_deref()), (Some("0"), Some("7")));
        assert!(compare_bi("test", &a, &a).is_ok());
    }

    #[test]
    fn univariate_mismatch_and_order_mismatch() {
        let w = compare_q("t", &QSeries::from_i64s(&[1, 2], 4), &QSeries::from_i64s(&[1, 3], 4)).unwrap_err();
        assert_eq!(w.q_exp, Some(1));
        assert!(compare_q("t", &QSeries::one(4), &QSeries::one(5)).is_err());
    }

    #[test]
    fn failing_reports_serialize_their_witness() {
        let r = RunReport {
            task: "t".into(),
            criterion: 1,
            inputs: BTreeMap::new(),
            status: Status::Fail,
            witness: Some(Witness::note("broken")),
            wall_ms: None,
            elapsed: Duration::from_millis(3),
        };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["status"], "fail");
        assert_eq!(v["witness"]["detail"], "broken");
        assert!(v.get("wall_ms").is_none() && v.get("elapsed").is_none());
    }
}
