//! Deterministic renderings of series, tables and operators.

use std::fmt::Write as _;
use std::str::FromStr;

use bipartid::algebra::{BiSeries, LaurentPoly, QSeries};
use bipartid::automata::{bir_forbidden_words, build_avoidance_dfa, derive_transfer_system, Dfa, Letter, TransferSystem};
use bipartid::cylindric::{cw_fixed_point, Profile};
use bipartid::holonomic::{bir_operator, birp_operator, g111_operator, g300_operator, QDiffOperator};
use bipartid::partitions::{enumerate_2colored, gen_fun, Conditions};
use bipartid::{data, Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "dot" => Ok(Format::Dot),
            _ => Err(Error::Config(format!("unknown format {s:?}; expected json, csv or dot"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    /// Enumerated generating function of a class of 2-colored partitions.
    Partitions(Conditions),
    Cylindric(Profile),
    Dfa,
    System,
    Operator(String),
    Certificate(String),
    /// The summand a shipped certificate belongs to.
    Term(String),
}

impl Target {
    /// `bir`, `birp`, `partitions:D1,D3`, `cylindric:3,0,0`, `dfa`, `system`,
    /// `operator:<bir|birp|g300|g111>`, `certificate:<name>` or `term:<name>`.
    pub fn parse(s: &str) -> Result<Self> {
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        match (head, arg) {
            ("bir", "") => Ok(Target::Partitions(Conditions::BIR)),
            ("birp", "") => Ok(Target::Partitions(Conditions::BIRP)),
            ("partitions", c) => Ok(Target::Partitions(c.parse()?)),
            ("cylindric", p) => Ok(Target::Cylindric(p.parse()?)),
            ("dfa", "") => Ok(Target::Dfa),
            ("system", "") => Ok(Target::System),
            ("operator", name) => {
                named_operator(name)?;
                Ok(Target::Operator(name.to_string()))
            }
            ("certificate", name) => {
                data::certificate_term(name)?;
                Ok(Target::Certificate(name.to_string()))
            }
            ("term", name) => {
                data::certificate_term(name)?;
                Ok(Target::Term(name.to_string()))
            }
            _ => Err(Error::Config(format!("unknown target {s:?}"))),
        }
    }
}

pub fn named_operator(name: &str) -> Result<QDiffOperator> {
    match name {
        "bir" => Ok(bir_operator()),
        "birp" => Ok(birp_operator()),
        "g300" => Ok(g300_operator()),
        "g111" => Ok(g111_operator()),
        _ => Err(Error::Config(format!("unknown operator {name:?}"))),
    }
}

pub fn built_dfa() -> Result<Dfa> {
    build_avoidance_dfa(&bir_forbidden_words())
}

/// Transfer system of the minimal automaton, in the file form read by
/// `uncouple`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SystemJson {
    pub unit: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<String>,
    pub matrix: Vec<Vec<PolyEntry>>,
}

/// A matrix entry, either full polynomial JSON or a string in `x` and `q`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyEntry {
    Text(String),
    Poly(LaurentPoly),
}

impl PolyEntry {
    pub fn to_poly(&self) -> Result<LaurentPoly> {
        match self {
            PolyEntry::Text(s) => bipartid::algebra::parse_poly(s, &["x", "q"]),
            PolyEntry::Poly(p) => p.embed(&["x", "q"]),
        }
    }
}

impl SystemJson {
    pub fn from_system(sys: &TransferSystem) -> Self {
        SystemJson {
            unit: sys.shift as u32,
            states: sys.states.iter().map(|&s| Dfa::state_name(s)).collect(),
            matrix: sys.matrix.iter().map(|r| r.iter().map(|p| PolyEntry::Poly(p.clone())).collect()).collect(),
        }
    }

    pub fn polynomial_matrix(&self) -> Result<Vec<Vec<LaurentPoly>>> {
        self.matrix.iter().map(|r| r.iter().map(PolyEntry::to_poly).collect()).collect()
    }
}

pub fn render(target: &Target, format: Format, qorder: usize) -> Result<String> {
    if qorder == 0 {
        return Err(Error::Domain("q-order must be at least 1".into()));
    }
    match (target, format) {
        (Target::Partitions(c), Format::Json | Format::Csv) => {
            let s = gen_fun(&enumerate_2colored(qorder as u32 - 1, *c), qorder)?;
            series(&s, format)
        }
        (Target::Cylindric(p), Format::Json | Format::Csv) => series(&cw_fixed_point(p, qorder)?, format),
        (Target::Dfa, Format::Json) => json(&built_dfa()?.to_json()),
        (Target::Dfa, Format::Dot) => Ok(built_dfa()?.to_dot()),
        (Target::Dfa, Format::Csv) => Ok(dfa_csv(&built_dfa()?)),
        (Target::System, _) => {
            let sys = derive_transfer_system(&built_dfa()?);
            match format {
                Format::Json => json(&SystemJson::from_system(&sys)),
                Format::Csv => Ok(system_csv(&sys)),
                Format::Dot => Ok(system_dot(&sys)),
            }
        }
        (Target::Operator(name), Format::Json) => json(&named_operator(name)?),
        (Target::Operator(name), Format::Csv) => Ok(operator_csv(&named_operator(name)?)),
        (Target::Certificate(name), Format::Json) => {
            let cert = data::certificate_source(name)?.emended()?.compile()?;
            json(&cert.to_json())
        }
        (Target::Term(name), Format::Json) => json(&data::certificate_term(name)?),
        _ => Err(Error::Config(format!("target {target:?} has no {format:?} rendering"))),
    }
}

pub fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Structural(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn series(s: &BiSeries, format: Format) -> Result<String> {
    match format {
        Format::Json => json(s),
        Format::Csv => Ok(series_csv(s)),
        Format::Dot => Err(Error::Config("series have no dot rendering".into())),
    }
}

/// Rows `x_exp,q_exp,coeff` for the nonzero coefficients, by `x` then `q`.
pub fn series_csv(s: &BiSeries) -> String {
    let mut out = String::from("x_exp,q_exp,coeff\n");
    for (m, slice) in s.slices() {
        for (e, c) in slice.coeffs().iter().enumerate() {
            if c.sign() != num_bigint::Sign::NoSign {
                writeln!(out, "{m},{e},{c}").unwrap();
            }
        }
    }
    out
}

pub fn qseries_csv(s: &QSeries) -> String {
    let mut out = String::from("q_exp,coeff\n");
    for (e, c) in s.coeffs().iter().enumerate() {
        if c.sign() != num_bigint::Sign::NoSign {
            writeln!(out, "{e},{c}").unwrap();
        }
    }
    out
}

fn dfa_csv(d: &Dfa) -> String {
    let mut out = String::from("state,letter,target,accepting\n");
    for s in 0..d.num_states() {
        for l in Letter::all() {
            writeln!(out, "{},{},{},{}", Dfa::state_name(s), l.as_char(), Dfa::state_name(d.step(s, l)), d.is_accepting(s)).unwrap();
        }
    }
    out
}

fn poly_rows(p: &LaurentPoly) -> Vec<(i32, i32, String)> {
    let mut rows: Vec<_> = p.terms().map(|(e, c)| (e[0], e[1], c.to_string())).collect();
    rows.sort();
    rows
}

fn system_csv(sys: &TransferSystem) -> String {
    let mut out = String::from("row,col,x_exp,q_exp,coeff\n");
    for (i, r) in sys.matrix.iter().enumerate() {
        for (j, p) in r.iter().enumerate() {
            for (a, b, c) in poly_rows(p) {
                writeln!(out, "{},{},{a},{b},{c}", Dfa::state_name(sys.states[i]), Dfa::state_name(sys.states[j])).unwrap();
            }
        }
    }
    out
}

fn system_dot(sys: &TransferSystem) -> String {
    let mut out = String::from("digraph system {\n  rankdir=LR;\n");
    for &s in &sys.states {
        writeln!(out, "  {};", Dfa::state_name(s)).unwrap();
    }
    for (i, r) in sys.matrix.iter().enumerate() {
        for (j, p) in r.iter().enumerate() {
            if !p.is_zero() {
                writeln!(out, "  {} -> {} [label=\"{p}\"];", Dfa::state_name(sys.states[i]), Dfa::state_name(sys.states[j])).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

fn operator_csv(op: &QDiffOperator) -> String {
    let mut out = String::from("shift,x_exp,q_exp,coeff\n");
    for (c, s) in &op.terms {
        for (a, b, k) in poly_rows(c) {
            writeln!(out, "{},{a},{b},{k}", op.unit * s).unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let out = render(&Target::parse("bir").unwrap(), Format::Csv, 3).unwrap();
        assert_eq!(out, "x_exp,q_exp,coeff\n0,0,1\n1,1,2\n1,2,2\n");
    }

    #[test]
    fn unsupported_pairs_are_errors() {
        assert!(render(&Target::parse("bir").unwrap(), Format::Dot, 5).is_err());
        assert!(Target::parse("nonsense").is_err());
        assert!(Target::parse("operator:none").is_err());
        assert!("xml".parse::<Format>().is_err());
    }

    #[test]
    fn system_entries_accept_text() {
        let j: SystemJson = serde_json::from_str(r#"{"unit":3,"matrix":[["1+xq"]]}"#).unwrap();
        assert_eq!(j.polynomial_matrix().unwrap()[0][0].to_string(), bipartid::algebra::parse_poly("1+xq", &["x", "q"]).unwrap().to_string());
    }
}
