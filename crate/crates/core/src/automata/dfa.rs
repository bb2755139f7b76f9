use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::alphabet::{Letter, Word, ALPHABET_SIZE};
use crate::error::{Error, Result};

/// Complete deterministic automaton over `a..m`. States are `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dfa {
    delta: Vec<[usize; ALPHABET_SIZE]>,
    start: usize,
    accepts: Vec<bool>,
}

impl Dfa {
    pub fn new(delta: Vec<[usize; ALPHABET_SIZE]>, start: usize, accepts: Vec<bool>) -> Result<Self> {
        let n = delta.len();
        if n == 0 || start >= n || accepts.len() != n {
            return Err(Error::Structural("inconsistent automaton shape".into()));
        }
        if delta.iter().flatten().any(|&t| t >= n) {
            return Err(Error::Structural("transition to a nonexistent state".into()));
        }
        Ok(Dfa { delta, start, accepts })
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, s: usize) -> bool {
        self.accepts[s]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&s| self.accepts[s]).collect()
    }

    pub fn step(&self, s: usize, l: Letter) -> usize {
        self.delta[s][l.index()]
    }

    pub fn run(&self, w: &Word) -> usize {
        w.letters().iter().fold(self.start, |s, &l| self.step(s, l))
    }

    pub fn accepts_word(&self, w: &Word) -> bool {
        self.accepts[self.run(w)]
    }

    /// Rename states in breadth-first order from the start, exploring letters
    /// `a..m`; unreachable states are dropped.
    pub fn canonical(&self) -> Dfa {
        let n = self.num_states();
        let mut order = vec![usize::MAX; n];
        let mut seq = Vec::new();
        let mut queue = VecDeque::from([self.start]);
        order[self.start] = 0;
        seq.push(self.start);
        while let Some(s) = queue.pop_front() {
            for t in self.delta[s] {
                if order[t] == usize::MAX {
                    order[t] = seq.len();
                    seq.push(t);
                    queue.push_back(t);
                }
            }
        }
        let delta = seq.iter().map(|&s| self.delta[s].map(|t| order[t])).collect();
        let accepts = seq.iter().map(|&s| self.accepts[s]).collect();
        Dfa { delta, start: 0, accepts }
    }

    /// Hopcroft partition refinement followed by canonical renaming.
    pub fn minimize(&self) -> Dfa {
        let reach = self.canonical();
        let n = reach.num_states();
        let mut inverse: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; ALPHABET_SIZE];
        for s in 0..n {
            for a in 0..ALPHABET_SIZE {
                inverse[a][reach.delta[s][a]].push(s);
            }
        }
        let acc: BTreeSet<usize> = (0..n).filter(|&s| reach.accepts[s]).collect();
        let rej: BTreeSet<usize> = (0..n).filter(|&s| !reach.accepts[s]).collect();
        let mut blocks: Vec<BTreeSet<usize>> = [acc, rej].into_iter().filter(|b| !b.is_empty()).collect();
        let mut work: Vec<BTreeSet<usize>> = blocks.clone();
        while let Some(splitter) = work.pop() {
            for a in 0..ALPHABET_SIZE {
                let pre: BTreeSet<usize> = splitter.iter().flat_map(|&t| inverse[a][t].iter().copied()).collect();
                if pre.is_empty() {
                    continue;
                }
                let mut next = Vec::with_capacity(blocks.len());
                for b in blocks.drain(..) {
                    let inside: BTreeSet<usize> = b.intersection(&pre).copied().collect();
                    if inside.is_empty() || inside.len() == b.len() {
                        next.push(b);
                        continue;
                    }
                    let outside: BTreeSet<usize> = b.difference(&pre).copied().collect();
                    if let Some(pos) = work.iter().position(|w| *w == b) {
                        work.swap_remove(pos);
                        work.push(inside.clone());
                        work.push(outside.clone());
                    } else if inside.len() <= outside.len() {
                        work.push(inside.clone());
                    } else {
                        work.push(outside.clone());
                    }
                    next.push(inside);
                    next.push(outside);
                }
                blocks = next;
            }
        }
        let mut block_of = vec![0; n];
        for (i, b) in blocks.iter().enumerate() {
            for &s in b {
                block_of[s] = i;
            }
        }
        let delta = blocks
            .iter()
            .map(|b| {
                let rep = *b.iter().next().unwrap();
                reach.delta[rep].map(|t| block_of[t])
            })
            .collect();
        let accepts = blocks.iter().map(|b| reach.accepts[*b.iter().next().unwrap()]).collect();
        Dfa { delta, start: block_of[reach.start], accepts }.canonical()
    }

    /// Pairs of distinct states with identical future behaviour, found by the
    /// table-filling method. Empty for a minimal automaton.
    pub fn equivalent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.num_states();
        let mut dist = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                dist[i][j] = self.accepts[i] != self.accepts[j];
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                for j in (i + 1)..n {
                    if dist[i][j] {
                        continue;
                    }
                    if (0..ALPHABET_SIZE).any(|a| {
                        let (x, y) = (self.delta[i][a], self.delta[j][a]);
                        dist[x][y]
                    }) {
                        dist[i][j] = true;
                        dist[j][i] = true;
                        changed = true;
                    }
                }
            }
        }
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if !dist[i][j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// A state bijection `f` with `f(start) = other.start` commuting with
    /// every transition and preserving acceptance, when one exists. Both
    /// automata must have all states reachable.
    pub fn isomorphism(&self, other: &Dfa) -> Option<Vec<usize>> {
        if self.num_states() != other.num_states() {
            return None;
        }
        let mut map = vec![usize::MAX; self.num_states()];
        let mut used = vec![false; other.num_states()];
        let mut queue = VecDeque::from([(self.start, other.start)]);
        map[self.start] = other.start;
        used[other.start] = true;
        while let Some((s, t)) = queue.pop_front() {
            if self.accepts[s] != other.accepts[t] {
                return None;
            }
            for a in 0..ALPHABET_SIZE {
                let (s2, t2) = (self.delta[s][a], other.delta[t][a]);
                if map[s2] == usize::MAX {
                    if used[t2] {
                        return None;
                    }
                    map[s2] = t2;
                    used[t2] = true;
                    queue.push_back((s2, t2));
                } else if map[s2] != t2 {
                    return None;
                }
            }
        }
        map.iter().all(|&t| t != usize::MAX).then_some(map)
    }

    pub fn state_name(s: usize) -> String {
        format!("q{s}")
    }

    pub fn to_json(&self) -> DfaJson {
        let name = Dfa::state_name;
        DfaJson {
            states: (0..self.num_states()).map(name).collect(),
            start: name(self.start),
            accepts: self.accepting_states().into_iter().map(name).collect(),
            delta: (0..self.num_states())
                .map(|s| {
                    let row = Letter::all().map(|l| (l.to_string(), name(self.step(s, l)))).collect();
                    (name(s), row)
                })
                .collect(),
        }
    }

    pub fn from_json(j: &DfaJson) -> Result<Self> {
        let index: BTreeMap<&str, usize> = j.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let look = |s: &str| index.get(s).copied().ok_or_else(|| Error::Structural(format!("unknown state {s}")));
        let mut delta = vec![[0; ALPHABET_SIZE]; j.states.len()];
        for (s, row) in &j.delta {
            let si = look(s)?;
            if row.len() != ALPHABET_SIZE {
                return Err(Error::Structural(format!("state {s} has {} transitions", row.len())));
            }
            for (l, t) in row {
                let c = l.chars().next().ok_or_else(|| Error::Structural("empty letter".into()))?;
                delta[si][Letter::from_char(c)?.index()] = look(t)?;
            }
        }
        let mut accepts = vec![false; j.states.len()];
        for a in &j.accepts {
            accepts[look(a)?] = true;
        }
        Dfa::new(delta, look(&j.start)?, accepts)
    }

    /// Graphviz rendering; parallel edges are merged into one labelled edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        for s in 0..self.num_states() {
            let shape = if self.accepts[s] { "doublecircle" } else { "circle" };
            writeln!(out, "  q{s} [shape={shape}];").unwrap();
        }
        writeln!(out, "  __start -> q{};", self.start).unwrap();
        for s in 0..self.num_states() {
            let mut by_target: BTreeMap<usize, String> = BTreeMap::new();
            for l in Letter::all() {
                by_target.entry(self.step(s, l)).or_default().push(l.as_char());
            }
            for (t, label) in by_target {
                writeln!(out, "  q{s} -> q{t} [label=\"{label}\"];").unwrap();
            }
        }
        out.push_str("}\n");
        out
    }
}

/// JSON shape `{"states":[...],"start":..,"accepts":[...],"delta":{state:{letter:state}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DfaJson {
    pub states: Vec<String>,
    pub start: String,
    pub accepts: Vec<String>,
    pub delta: BTreeMap<String, BTreeMap<String, String>>,
}

/// Minimal complete automaton accepting the words that contain some word of
/// `forbidden` as a factor.
///
/// Built as an Aho-Corasick trie with failure links, with every node that
/// completes a match collapsed into one absorbing accept state, then
/// minimized.
pub fn build_avoidance_dfa(forbidden: &[Word]) -> Result<Dfa> {
    if forbidden.is_empty() || forbidden.iter().any(|w| w.letters().is_empty()) {
        return Err(Error::Domain("forbidden set must be nonempty and contain no empty word".into()));
    }
    let mut goto: Vec<[Option<usize>; ALPHABET_SIZE]> = vec![[None; ALPHABET_SIZE]];
    let mut terminal = vec![false];
    for w in forbidden {
        let mut s = 0;
        for &l in w.letters() {
            s = match goto[s][l.index()] {
                Some(t) => t,
                None => {
                    goto.push([None; ALPHABET_SIZE]);
                    terminal.push(false);
                    let t = goto.len() - 1;
                    goto[s][l.index()] = Some(t);
                    t
                }
            };
        }
        terminal[s] = true;
    }
    let n = goto.len();
    let mut fail = vec![0; n];
    let mut delta = vec![[0; ALPHABET_SIZE]; n];
    let mut queue = VecDeque::new();
    for a in 0..ALPHABET_SIZE {
        match goto[0][a] {
            Some(t) => {
                delta[0][a] = t;
                queue.push_back(t);
            }
            None => delta[0][a] = 0,
        }
    }
    while let Some(s) = queue.pop_front() {
        terminal[s] |= terminal[fail[s]];
        for a in 0..ALPHABET_SIZE {
            match goto[s][a] {
                Some(t) => {
                    fail[t] = if s == 0 { 0 } else { delta[fail[s]][a] };
                    delta[s][a] = t;
                    queue.push_back(t);
                }
                None => delta[s][a] = delta[fail[s]][a],
            }
        }
    }
    // Once a factor has been seen the word is accepted whatever follows.
    for s in 0..n {
        if terminal[s] {
            delta[s] = [s; ALPHABET_SIZE];
        }
    }
    Ok(Dfa { delta, start: 0, accepts: terminal }.minimize())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::alphabet::bir_forbidden_words;

    fn words(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| w.parse().unwrap()).collect()
    }

    #[test]
    fn single_letter_gives_two_states() {
        let d = build_avoidance_dfa(&words(&["b"])).unwrap();
        assert_eq!(d.num_states(), 2);
    }

    #[test]
    fn single_pair_gives_three_states() {
        let d = build_avoidance_dfa(&words(&["fb"])).unwrap();
        assert_eq!(d.num_states(), 3);
        assert!(d.accepts_word(&"affb".parse().unwrap()));
        assert!(!d.accepts_word(&"fabf".parse().unwrap()));
    }

    #[test]
    fn failure_links_matter() {
        // "ab" inside "aab" needs the failure transition from the "aa" prefix.
        let d = build_avoidance_dfa(&words(&["aab", "ab"])).unwrap();
        assert!(d.accepts_word(&"cab".parse().unwrap()));
        assert!(d.equivalent_pairs().is_empty());
    }

    #[test]
    fn bir_automaton_is_minimal_and_stable() {
        let d = build_avoidance_dfa(&bir_forbidden_words()).unwrap();
        assert_eq!(d.num_states(), 6);
        assert!(d.equivalent_pairs().is_empty());
        assert_eq!(d.minimize(), d);
        assert_eq!(Dfa::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn dot_has_one_node_per_state() {
        let d = build_avoidance_dfa(&bir_forbidden_words()).unwrap();
        let dot = d.to_dot();
        assert_eq!(dot.matches("shape=circle").count() + dot.matches("shape=doublecircle").count(), 6);
    }
}
