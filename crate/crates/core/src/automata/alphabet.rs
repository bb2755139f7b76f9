use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partitions::{ColoredPart, TwoColoredPartition};

/// One of the thirteen block letters `a..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u8);

pub const ALPHABET_SIZE: usize = 13;

const P: fn(u32) -> ColoredPart = ColoredPart::plus;
const M: fn(u32) -> ColoredPart = ColoredPart::minus;

impl Letter {
    pub fn new(index: usize) -> Result<Self> {
        if index < ALPHABET_SIZE {
            Ok(Letter(index as u8))
        } else {
            Err(Error::Structural(format!("letter index {index} out of range")))
        }
    }

    pub fn all() -> impl Iterator<Item = Letter> {
        (0..ALPHABET_SIZE as u8).map(Letter)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn as_char(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a'..='m' => Ok(Letter(c as u8 - b'a')),
            _ => Err(Error::Parse { pos: 0, msg: format!("{c:?} is not a letter of a..m") }),
        }
    }

    /// The block partition `π(letter)`, parts of magnitude at most 3.
    pub fn block(self) -> Vec<ColoredPart> {
        match self.0 {
            0 => vec![],
            1 => vec![P(1)],
            2 => vec![M(1)],
            3 => vec![P(2)],
            4 => vec![M(2)],
            5 => vec![P(3)],
            6 => vec![M(3)],
            7 => vec![P(2), M(1)],
            8 => vec![M(2), P(1)],
            9 => vec![P(3), P(1)],
            10 => vec![P(3), M(1)],
            11 => vec![M(3), M(1)],
            12 => vec![P(3), M(3)],
            _ => unreachable!(),
        }
    }

    /// `(ℓ(π(a)), |π(a)|)`.
    pub fn weight(self) -> (u32, u32) {
        let b = self.block();
        (b.len() as u32, b.iter().map(|p| p.magnitude).sum())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A word over `a..m`; the infinite tail of `a`s is implicit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    /// Drop trailing `a`s so that equal infinite words compare equal.
    pub fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|l| l.0 == 0) {
            self.0.pop();
        }
        self
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.trim().chars().map(Letter::from_char).collect::<Result<Vec<_>>>().map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Concatenate the blocks, block `k` (from 1) shifted up by `3k-3`.
pub fn decode(word: &Word) -> TwoColoredPartition {
    let mut parts = Vec::new();
    for (k, l) in word.0.iter().enumerate() {
        parts.extend(l.block().into_iter().map(|p| p.shifted(3 * k as u32)));
    }
    TwoColoredPartition::from_unsorted(parts).expect("blocks occupy disjoint ranges")
}

/// Inverse of [`decode`] on partitions whose parts, grouped by the block
/// `3k-2..=3k`, each form some block image.
pub fn encode(lambda: &TwoColoredPartition) -> Result<Word> {
    let Some(max) = lambda.parts().first().map(|p| p.magnitude) else {
        return Ok(Word::default());
    };
    let nblocks = max.div_ceil(3) as usize;
    let mut groups: Vec<Vec<ColoredPart>> = vec![Vec::new(); nblocks];
    for p in lambda.parts() {
        let k = (p.magnitude - 1) / 3;
        groups[k as usize].push(ColoredPart { magnitude: p.magnitude - 3 * k, color: p.color });
    }
    let mut word = Vec::with_capacity(nblocks);
    for (k, g) in groups.iter().enumerate() {
        let l = Letter::all().find(|l| l.block() == *g).ok_or_else(|| {
            let shown: Vec<String> = g.iter().map(|p| p.shifted(3 * k as u32).to_string()).collect();
            Error::NotEncodable(format!("block {} holds ({}), which is no block image", k + 1, shown.join(",")))
        })?;
        word.push(l);
    }
    Ok(Word(word).trimmed())
}

/// The 48 forbidden length-two words for the class BIR.
pub const BIR_FORBIDDEN_WORDS: [&str; 48] = [
    "fb", "gb", "jb", "kb", "lb", "mb", "lc", "mc", "jc", "kc", "fc", "gc", "md", "fe", "je", "ke", "me", "hi",
    "fi", "gi", "ji", "ki", "li", "mi", "fh", "gh", "jh", "kh", "lh", "mh", "fj", "gj", "jj", "kj", "lj", "mj",
    "fk", "gk", "jk", "kk", "lk", "mk", "fl", "gl", "jl", "kl", "ll", "ml",
];

pub fn bir_forbidden_words() -> Vec<Word> {
    BIR_FORBIDDEN_WORDS.iter().map(|w| w.parse().unwrap()).collect()
}

/// Whether `word` has some element of `forbidden` as a factor.
pub fn contains_factor(word: &Word, forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| !f.0.is_empty() && word.0.windows(f.0.len()).any(|w| w == f.0.as_slice()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_worked_example() {
        let w: Word = "maeiaa".parse().unwrap();
        assert_eq!(decode(&w).to_string(), "(11\u{304},10,8\u{304},3,3\u{304})");
    }

    #[test]
    fn all_a_is_empty() {
        assert!(decode(&"aaaa".parse().unwrap()).is_empty());
    }

    #[test]
    fn encode_by_blocks() {
        let l: TwoColoredPartition = "(4,2)".parse().unwrap();
        assert_eq!(encode(&l).unwrap().to_string(), "db");
        let bad: TwoColoredPartition = "(2,2)".parse().unwrap();
        assert!(matches!(encode(&bad), Err(Error::NotEncodable(_))));
    }

    #[test]
    fn weights_cover_the_alphabet() {
        let total: Vec<(u32, u32)> = Letter::all().map(|l| l.weight()).collect();
        assert_eq!(total[0], (0, 0));
        assert_eq!(total[12], (2, 6));
        assert!(Letter::all().all(|l| l.block().iter().all(|p| p.magnitude <= 3)));
    }
}
