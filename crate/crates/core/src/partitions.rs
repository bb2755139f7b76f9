//! 2-colored partitions, the local conditions D1-D4, the forbidden-pattern
//! families, and exhaustive enumeration.
//!
//! Parts are ordered `... > 3 > 3' > 2 > 2' > 1 > 1'`, where a primed part is
//! the minus-colored copy (written with an overbar in the literature). The
//! forbidden patterns are stored in positive form; the negative-integer
//! convention of the vertex-operator setting maps over by `λ ↦ -λ`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::algebra::BiSeries;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColoredPart {
    pub magnitude: u32,
    pub color: Color,
}

impl ColoredPart {
    pub const fn plus(m: u32) -> Self {
        ColoredPart { magnitude: m, color: Color::Plus }
    }

    pub const fn minus(m: u32) -> Self {
        ColoredPart { magnitude: m, color: Color::Minus }
    }

    /// Position in the total order: `1' < 1 < 2' < 2 < ...`.
    pub fn rank(self) -> u32 {
        2 * self.magnitude + u32::from(self.color == Color::Plus)
    }

    pub fn from_rank(r: u32) -> Self {
        let color = if r % 2 == 1 { Color::Plus } else { Color::Minus };
        ColoredPart { magnitude: r / 2, color }
    }

    /// Shift the magnitude, keeping the color.
    pub fn shifted(self, by: u32) -> Self {
        ColoredPart { magnitude: self.magnitude + by, color: self.color }
    }
}

impl Ord for ColoredPart {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for ColoredPart {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ColoredPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.color {
            Color::Plus => write!(f, "{}", self.magnitude),
            Color::Minus => write!(f, "{}\u{304}", self.magnitude),
        }
    }
}

/// A weakly decreasing sequence of colored parts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwoColoredPartition {
    parts: Vec<ColoredPart>,
}

impl TwoColoredPartition {
    pub fn new(parts: Vec<ColoredPart>) -> Result<Self> {
        if parts.iter().any(|p| p.magnitude == 0) {
            return Err(Error::Structural("parts must have magnitude at least 1".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Structural("parts are not weakly decreasing".into()));
        }
        Ok(TwoColoredPartition { parts })
    }

    /// Sort arbitrary parts into a partition.
    pub fn from_unsorted(mut parts: Vec<ColoredPart>) -> Result<Self> {
        parts.sort_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[ColoredPart] {
        &self.parts
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().map(|p| p.magnitude).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Canonical order: size, then length, then parts compared left to right.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.parts.cmp(&other.parts))
    }
}

impl fmt::Display for TwoColoredPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for TwoColoredPartition {
    type Err = Error;

    /// Accepts `(3,3',1')` where a trailing `'` (or a combining overline or
    /// macron) marks the minus color. Parentheses are optional.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if body.is_empty() {
            return Ok(Self::empty());
        }
        let mut parts = Vec::new();
        for item in body.split(',') {
            let item = item.trim();
            let digits: String = item.chars().take_while(|c| c.is_ascii_digit()).collect();
            let rest = item[digits.len()..].trim();
            let color = match rest {
                "" => Color::Plus,
                "'" | "\u{304}" | "\u{305}" => Color::Minus,
                _ => return Err(Error::Parse { pos: 0, msg: format!("bad part {item:?}") }),
            };
            let magnitude = digits.parse().map_err(|_| Error::Parse { pos: 0, msg: format!("bad part {item:?}") })?;
            parts.push(ColoredPart { magnitude, color });
        }
        Self::new(parts)
    }
}

impl Serialize for ColoredPart {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = if self.color == Color::Plus { "+" } else { "-" };
        (c, self.magnitude).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColoredPart {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (c, m): (String, u32) = Deserialize::deserialize(d)?;
        let color = match c.as_str() {
            "+" => Color::Plus,
            "-" => Color::Minus,
            _ => return Err(D::Error::custom(format!("bad color {c:?}"))),
        };
        Ok(ColoredPart { magnitude: m, color })
    }
}

impl Serialize for TwoColoredPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TwoColoredPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<ColoredPart>::deserialize(d)?;
        TwoColoredPartition::new(parts).map_err(D::Error::custom)
    }
}

/// A subset of the conditions D1..D4.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Conditions(u8);

impl Conditions {
    pub const NONE: Conditions = Conditions(0);
    pub const D1: Conditions = Conditions(1);
    pub const D2: Conditions = Conditions(2);
    pub const D3: Conditions = Conditions(4);
    pub const D4: Conditions = Conditions(8);
    /// D1-D3, defining the class BIR.
    pub const BIR: Conditions = Conditions(7);
    /// D1-D4, defining the class BIRP.
    pub const BIRP: Conditions = Conditions(15);

    pub fn contains(self, other: Conditions) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn union(self, other: Conditions) -> Conditions {
        Conditions(self.0 | other.0)
    }
}

impl std::ops::BitOr for Conditions {
    type Output = Conditions;
    fn bitor(self, rhs: Conditions) -> Conditions {
        self.union(rhs)
    }
}

impl FromStr for Conditions {
    type Err = Error;

    /// `"D1,D3"`, `"bir"`, `"birp"` or `"none"`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bir" => return Ok(Conditions::BIR),
            "birp" => return Ok(Conditions::BIRP),
            "none" | "" => return Ok(Conditions::NONE),
            _ => {}
        }
        let mut c = Conditions::NONE;
        for item in s.split(',') {
            c = c | match item.trim().to_ascii_uppercase().as_str() {
                "D1" => Conditions::D1,
                "D2" => Conditions::D2,
                "D3" => Conditions::D3,
                "D4" => Conditions::D4,
                other => return Err(Error::Parse { pos: 0, msg: format!("unknown condition {other:?}") }),
            };
        }
        Ok(c)
    }
}

fn d1_pair_ok(a: ColoredPart, b: ColoredPart) -> bool {
    if a.magnitude - b.magnitude <= 1 {
        (a.magnitude + b.magnitude) % 3 == 0 && a.color != b.color
    } else {
        true
    }
}

fn d2_pair_ok(a: ColoredPart, b: ColoredPart) -> bool {
    if a.magnitude - b.magnitude == 2 && (a.magnitude + b.magnitude) % 3 != 0 {
        !(a.color == Color::Minus && b.color == Color::Plus)
    } else {
        true
    }
}

/// Whether a window is one of the three D3 configurations
/// `(3k, 3k', (3k-2)')`, `(3k+2, 3k, 3k')`, `((3k+2)', 3k+1, 3k-1, (3k-2)')`.
fn d3_window_bad(w: &[ColoredPart]) -> bool {
    use Color::{Minus as M, Plus as P};
    let m: Vec<u32> = w.iter().map(|p| p.magnitude).collect();
    let c: Vec<Color> = w.iter().map(|p| p.color).collect();
    match w.len() {
        3 => {
            let first = m[0] % 3 == 0
                && m[0] >= 3
                && m[1] == m[0]
                && m[2] + 2 == m[0]
                && c[..] == [P, M, M];
            let second = m[1] % 3 == 0 && m[1] >= 3 && m[0] == m[1] + 2 && m[2] == m[1] && c[..] == [P, P, M];
            first || second
        }
        4 => {
            m[1] % 3 == 1
                && m[1] >= 4
                && m[0] == m[1] + 1
                && m[2] + 2 == m[1]
                && m[3] + 3 == m[1]
                && c[..] == [M, P, P, M]
        }
        _ => false,
    }
}

fn d4_part_ok(p: ColoredPart) -> bool {
    !(p.magnitude == 1 || (p.magnitude == 2 && p.color == Color::Minus))
}

/// Check the conditions that involve the last part of `parts`, assuming the
/// prefix without it is already valid.
fn last_part_ok(parts: &[ColoredPart], which: Conditions) -> bool {
    let n = parts.len();
    let last = parts[n - 1];
    if which.contains(Conditions::D4) && !d4_part_ok(last) {
        return false;
    }
    if n >= 2 {
        let prev = parts[n - 2];
        if which.contains(Conditions::D1) && !d1_pair_ok(prev, last) {
            return false;
        }
        if which.contains(Conditions::D2) && !d2_pair_ok(prev, last) {
            return false;
        }
    }
    if which.contains(Conditions::D3) {
        if n >= 3 && d3_window_bad(&parts[n - 3..]) {
            return false;
        }
        if n >= 4 && d3_window_bad(&parts[n - 4..]) {
            return false;
        }
    }
    true
}

/// True iff every selected condition holds.
pub fn check_condition(lambda: &TwoColoredPartition, which: Conditions) -> bool {
    (1..=lambda.parts.len()).all(|n| last_part_ok(&lambda.parts[..n], which))
}

/// A nonempty contiguous factor to look for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    parts: Vec<ColoredPart>,
}

impl Pattern {
    pub fn new(parts: Vec<ColoredPart>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Structural("patterns must be nonempty".into()));
        }
        Ok(Pattern { parts })
    }

    pub fn parts(&self) -> &[ColoredPart] {
        &self.parts
    }
}

pub fn contains_pattern(lambda: &TwoColoredPartition, p: &Pattern) -> bool {
    lambda.parts.windows(p.parts.len()).any(|w| w == p.parts.as_slice())
}

/// A pattern family `k ↦ (a_1 k + b_1, ..., a_r k + b_r)` with fixed colors,
/// instantiated for every integer `k` that keeps all magnitudes positive.
#[derive(Clone, Copy, Debug)]
pub struct PatternFamily {
    pub label: &'static str,
    terms: &'static [(i64, i64, Color)],
}

impl PatternFamily {
    pub fn instance(&self, k: i64) -> Option<Pattern> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for &(a, b, color) in self.terms {
            let m = a * k + b;
            if m < 1 {
                return None;
            }
            parts.push(ColoredPart { magnitude: m as u32, color });
        }
        Some(Pattern { parts })
    }

    /// All instances whose magnitudes stay within `1..=max_magnitude`.
    pub fn instances_up_to(&self, max_magnitude: u32) -> Vec<Pattern> {
        let a = self.terms[0].0;
        let kmin = self.terms.iter().map(|&(a, b, _)| (1 - b + a - 1).div_euclid(a)).max().unwrap();
        let kmax = (max_magnitude as i64) / a + 1;
        (kmin..=kmax)
            .filter_map(|k| self.instance(k))
            .filter(|p| p.parts.iter().all(|q| q.magnitude <= max_magnitude))
            .collect()
    }
}

const P: Color = Color::Plus;
const M: Color = Color::Minus;

/// The seven forbidden-pattern groups (labels `1a`..`7`), in positive form.
pub const FORBIDDEN_FAMILIES: [PatternFamily; 15] = [
    PatternFamily { label: "1a", terms: &[(1, 0, P), (1, 0, P)] },
    PatternFamily { label: "1b", terms: &[(1, 0, M), (1, 0, M)] },
    PatternFamily { label: "1c", terms: &[(1, 1, P), (1, 0, P)] },
    PatternFamily { label: "1d", terms: &[(1, 1, M), (1, 0, M)] },
    PatternFamily { label: "2a", terms: &[(3, 1, M), (3, 0, P)] },
    PatternFamily { label: "2b", terms: &[(3, 1, P), (3, 0, M)] },
    PatternFamily { label: "3a", terms: &[(3, 1, P), (3, 1, M)] },
    PatternFamily { label: "3b", terms: &[(3, 2, M), (3, 0, P)] },
    PatternFamily { label: "4a", terms: &[(3, 2, P), (3, 2, M)] },
    PatternFamily { label: "4b", terms: &[(3, 3, M), (3, 1, P)] },
    PatternFamily { label: "5a", terms: &[(3, 3, M), (3, 2, P)] },
    PatternFamily { label: "5b", terms: &[(3, 3, P), (3, 2, M)] },
    PatternFamily { label: "6a", terms: &[(3, 3, P), (3, 3, M), (3, 1, M)] },
    PatternFamily { label: "6b", terms: &[(3, 5, P), (3, 3, P), (3, 3, M)] },
    PatternFamily { label: "7", terms: &[(3, 5, M), (3, 4, P), (3, 2, P), (3, 1, M)] },
];

/// True iff `lambda` contains an instance of some forbidden family.
pub fn violates_theorem36(lambda: &TwoColoredPartition) -> bool {
    let Some(max) = lambda.parts.first().map(|p| p.magnitude) else {
        return false;
    };
    FORBIDDEN_FAMILIES
        .iter()
        .any(|fam| fam.instances_up_to(max).iter().any(|p| contains_pattern(lambda, p)))
}

/// All 2-colored partitions of size at most `max_size` satisfying `cond`,
/// in canonical order.
pub fn enumerate_2colored(max_size: u32, cond: Conditions) -> Vec<TwoColoredPartition> {
    fn go(
        parts: &mut Vec<ColoredPart>,
        remaining: u32,
        max_rank: u32,
        cond: Conditions,
        out: &mut Vec<TwoColoredPartition>,
    ) {
        out.push(TwoColoredPartition { parts: parts.clone() });
        let top = max_rank.min(2 * remaining + 1);
        for r in (2..=top).rev() {
            let p = ColoredPart::from_rank(r);
            parts.push(p);
            if last_part_ok(parts, cond) {
                go(parts, remaining - p.magnitude, r, cond, out);
            }
            parts.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), max_size, 2 * max_size + 1, cond, &mut out);
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

/// `Σ x^{ℓ(λ)} q^{|λ|}` truncated at `q^qorder`.
pub fn gen_fun(partitions: &[TwoColoredPartition], qorder: usize) -> Result<BiSeries> {
    let mut s = BiSeries::zero(qorder);
    let one = BigInt::one();
    for p in partitions {
        let size = p.size() as usize;
        if size >= qorder {
            return Err(Error::Truncation(format!("partition {p} of size {size} does not fit below q^{qorder}")));
        }
        s.add_term(p.len() as u32, size, &one);
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> TwoColoredPartition {
        s.parse().unwrap()
    }

    #[test]
    fn order_puts_plus_above_minus() {
        assert!(ColoredPart::plus(2) > ColoredPart::minus(2));
        assert!(ColoredPart::minus(2) > ColoredPart::plus(1));
        assert!(TwoColoredPartition::new(vec![ColoredPart::minus(2), ColoredPart::plus(2)]).is_err());
    }

    #[test]
    fn condition_examples() {
        assert!(check_condition(&lam("(2,1')"), Conditions::BIR));
        assert!(!check_condition(&lam("(1,1)"), Conditions::D1));
        assert!(!check_condition(&lam("(3',1)"), Conditions::D2));
        assert!(check_condition(&lam("(4,2)"), Conditions::BIRP));
        assert!(!check_condition(&lam("(3,3',1')"), Conditions::D3));
        assert!(!check_condition(&lam("(5,3,3')"), Conditions::D3));
        assert!(!check_condition(&lam("(5',4,2,1')"), Conditions::D3));
    }

    #[test]
    fn pattern_examples() {
        let p = Pattern::new(lam("(3,3',1')").parts().to_vec()).unwrap();
        assert!(contains_pattern(&lam("(3,3',1')"), &p));
        assert!(!contains_pattern(&lam("(5,3,3')"), &p));
        assert!(Pattern::new(vec![]).is_err());
    }

    #[test]
    fn forbidden_examples() {
        assert!(violates_theorem36(&lam("(2,2)")));
        assert!(violates_theorem36(&lam("(5,3,3')")));
        assert!(!violates_theorem36(&lam("(4,2)")));
        assert!(!violates_theorem36(&lam("()")));
    }

    #[test]
    fn small_counts() {
        let bir = enumerate_2colored(3, Conditions::BIR);
        let counts: Vec<usize> = (0..=3).map(|n| bir.iter().filter(|p| p.size() == n).count()).collect();
        assert_eq!(counts, vec![1, 2, 2, 4]);
        assert_eq!(enumerate_2colored(0, Conditions::BIRP), vec![TwoColoredPartition::empty()]);
    }

    #[test]
    fn display_and_json() {
        let l = lam("(11',10,8',3,3')");
        assert_eq!(l.to_string(), "(11\u{304},10,8\u{304},3,3\u{304})");
        assert_eq!(serde_json::to_string(&lam("(4,2')")).unwrap(), r#"[["+",4],["-",2]]"#);
    }

    #[test]
    fn gen_fun_rejects_oversized() {
        assert!(matches!(gen_fun(&[lam("(4)")], 4), Err(Error::Truncation(_))));
        assert!(gen_fun(&[], 4).unwrap().is_zero());
    }
}
