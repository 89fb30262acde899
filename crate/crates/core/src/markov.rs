//! Symbolic dynamics of the Markov partition: the alphabet of rectangles, the
//! 0/1 transition structure with an integer homology label on every allowed
//! transition, periodic strings, and minimal loops.
//!
//! A periodic string is a cyclic word all of whose consecutive pairs (including
//! the wrap-around pair) are allowed transitions. Its class is the sum of the
//! labels it traverses. A period is minimal exactly when no letter repeats, so
//! the minimal loops are the elementary circuits of the transition digraph.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::SystemDocument;

/// Default cap on the number of periodic strings an enumeration may produce.
pub const DEFAULT_ENUM_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("duplicate letter `{0}`")]
    DuplicateLetter(String),
    #[error("invalid letter name `{0}`")]
    InvalidLetterName(String),
    #[error("system has no letters")]
    EmptyAlphabet,
    #[error("bad rank: {0}")]
    BadRank(String),
    #[error("transition {from}->{to} references an unknown letter")]
    DanglingTransition { from: String, to: String },
    #[error("transition {from}->{to} is listed twice")]
    DuplicateTransition { from: String, to: String },
    #[error("elementary circuit {word} has zero homology class")]
    ZeroClassLoop { word: String },
    #[error("empty word")]
    EmptyWord,
    #[error("letter index {0} out of range")]
    UnknownLetter(usize),
    #[error("transition {from}->{to} is not allowed")]
    IllegalTransition { from: String, to: String },
    #[error("enumeration exceeds the budget of {cap} periodic strings")]
    BudgetExceeded { cap: usize },
    #[error("maximum length must be at least 1")]
    ZeroLength,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub name: String,
    pub index: usize,
}

/// Integer homology class in the rank-`d` model of the compact nucleus.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass(pub Vec<i64>);

impl HomologyClass {
    pub fn zero(rank: usize) -> Self {
        HomologyClass(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add_assign(&mut self, other: &HomologyClass) {
        debug_assert_eq!(self.rank(), other.rank());
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = a.checked_add(*b).expect("homology class coordinate overflow");
        }
    }

    pub fn scaled(&self, m: i64) -> HomologyClass {
        HomologyClass(
            self.0
                .iter()
                .map(|c| c.checked_mul(m).expect("homology class coordinate overflow"))
                .collect(),
        )
    }

    pub fn sub(&self, other: &HomologyClass) -> HomologyClass {
        HomologyClass(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn to_int_vec(&self) -> crate::arith::IntVec {
        crate::arith::int_vec(&self.0)
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A cyclic admissible word, stored as letter indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PeriodicString {
    word: Vec<usize>,
}

impl PeriodicString {
    pub fn new(system: &MarkovSystem, word: Vec<usize>) -> Result<Self, MarkovError> {
        system.check_cyclic_word(&word)?;
        Ok(PeriodicString { word })
    }

    pub fn from_names(system: &MarkovSystem, names: &[&str]) -> Result<Self, MarkovError> {
        let word = names
            .iter()
            .map(|n| {
                system
                    .letter_index(n)
                    .ok_or_else(|| MarkovError::InvalidLetterName(n.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(system, word)
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Rotation by `k` places to the left.
    pub fn rotated(&self, k: usize) -> PeriodicString {
        let mut word = self.word.clone();
        let n = word.len();
        word.rotate_left(k % n);
        PeriodicString { word }
    }

    /// The same cyclic word traversed `m` times.
    pub fn repeated(&self, m: usize) -> PeriodicString {
        PeriodicString {
            word: self.word.repeat(m),
        }
    }
}

/// An elementary circuit of the transition digraph together with its class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinimalLoop {
    pub word: Vec<usize>,
    pub class: HomologyClass,
}

/// A validated Markov system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovSystem {
    name: String,
    rank: usize,
    letters: Vec<Letter>,
    transitions: BTreeMap<(usize, usize), HomologyClass>,
    successors: Vec<Vec<usize>>,
    loops: Vec<MinimalLoop>,
}

/// Checks a raw system description and builds the validated system.
///
/// Rejects duplicate letters, labels of the wrong length, transitions naming
/// unknown letters, and any elementary circuit whose class is zero. Systems
/// with no cycles at all are accepted and reported as product-type.
pub fn validate_system(raw: &SystemDocument) -> Result<MarkovSystem, MarkovError> {
    if raw.rank < 1 {
        return Err(MarkovError::BadRank(format!("rank {} < 1", raw.rank)));
    }
    let rank = raw.rank as usize;
    if raw.letters.is_empty() {
        return Err(MarkovError::EmptyAlphabet);
    }
    let mut index = BTreeMap::new();
    let mut letters = Vec::with_capacity(raw.letters.len());
    for (i, name) in raw.letters.iter().enumerate() {
        if name.trim().is_empty() || name.chars().any(char::is_whitespace) {
            return Err(MarkovError::InvalidLetterName(name.clone()));
        }
        if index.insert(name.clone(), i).is_some() {
            return Err(MarkovError::DuplicateLetter(name.clone()));
        }
        letters.push(Letter {
            name: name.clone(),
            index: i,
        });
    }

    let mut transitions = BTreeMap::new();
    for t in &raw.transitions {
        let (Some(&from), Some(&to)) = (index.get(&t.from), index.get(&t.to)) else {
            return Err(MarkovError::DanglingTransition {
                from: t.from.clone(),
                to: t.to.clone(),
            });
        };
        if t.class.len() != rank {
            return Err(MarkovError::BadRank(format!(
                "label of {}->{} has length {}, expected {rank}",
                t.from,
                t.to,
                t.class.len()
            )));
        }
        if transitions
            .insert((from, to), HomologyClass(t.class.clone()))
            .is_some()
        {
            return Err(MarkovError::DuplicateTransition {
                from: t.from.clone(),
                to: t.to.clone(),
            });
        }
    }

    let mut successors = vec![Vec::new(); letters.len()];
    for &(i, j) in transitions.keys() {
        successors[i].push(j);
    }

    let mut system = MarkovSystem {
        name: raw.name.clone().unwrap_or_else(|| "system".to_string()),
        rank,
        letters,
        transitions,
        successors,
        loops: Vec::new(),
    };

    let mut loops = Vec::new();
    for word in elementary_circuits(&system.successors) {
        let class = system.sum_labels(&word);
        if class.is_zero() {
            return Err(MarkovError::ZeroClassLoop {
                word: system.format_word(&word),
            });
        }
        loops.push(MinimalLoop { word, class });
    }
    loops.sort();
    system.loops = loops;
    Ok(system)
}

impl MarkovSystem {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.name == name)
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, usize), HomologyClass> {
        &self.transitions
    }

    pub fn label(&self, from: usize, to: usize) -> Option<&HomologyClass> {
        self.transitions.get(&(from, to))
    }

    pub fn successors(&self, letter: usize) -> &[usize] {
        &self.successors[letter]
    }

    /// True when the transition digraph has no cycles.
    pub fn is_product_type(&self) -> bool {
        self.loops.is_empty()
    }

    /// The 0/1 transition matrix.
    pub fn transition_matrix(&self) -> Vec<Vec<u8>> {
        let n = self.letters.len();
        let mut a = vec![vec![0u8; n]; n];
        for &(i, j) in self.transitions.keys() {
            a[i][j] = 1;
        }
        a
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        let names: Vec<&str> = word
            .iter()
            .map(|&i| self.letters.get(i).map_or("?", |l| l.name.as_str()))
            .collect();
        format!("({})", names.join(","))
    }

    fn sum_labels(&self, word: &[usize]) -> HomologyClass {
        let mut total = HomologyClass::zero(self.rank);
        for k in 0..word.len() {
            let next = word[(k + 1) % word.len()];
            total.add_assign(&self.transitions[&(word[k], next)]);
        }
        total
    }

    fn check_cyclic_word(&self, word: &[usize]) -> Result<(), MarkovError> {
        if word.is_empty() {
            return Err(MarkovError::EmptyWord);
        }
        if let Some(&bad) = word.iter().find(|&&i| i >= self.letters.len()) {
            return Err(MarkovError::UnknownLetter(bad));
        }
        for k in 0..word.len() {
            let (i, j) = (word[k], word[(k + 1) % word.len()]);
            if !self.transitions.contains_key(&(i, j)) {
                return Err(MarkovError::IllegalTransition {
                    from: self.letters[i].name.clone(),
                    to: self.letters[j].name.clone(),
                });
            }
        }
        Ok(())
    }
}

/// Lexicographically least rotation of a word, letters ordered by index.
pub fn canonical_rotation(word: &[usize]) -> Result<Vec<usize>, MarkovError> {
    if word.is_empty() {
        return Err(MarkovError::EmptyWord);
    }
    let n = word.len();
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|k| word[(a + k) % n].cmp(&word[(b + k) % n]))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .unwrap_or(0);
    let mut out = word.to_vec();
    out.rotate_left(best);
    Ok(out)
}

/// Class of the closed orbit carrying the periodic string: the sum of the
/// labels over its `q` wrap-around transitions.
pub fn class_of(system: &MarkovSystem, p: &PeriodicString) -> Result<HomologyClass, MarkovError> {
    system.check_cyclic_word(p.word())?;
    Ok(system.sum_labels(p.word()))
}

/// All minimal loops, canonically rotated and sorted.
pub fn minimal_loops(system: &MarkovSystem) -> Vec<MinimalLoop> {
    system.loops.clone()
}

/// Every admissible periodic string of length at most `max_len`, one
/// canonical rotation per cyclic word, sorted.
pub fn enumerate_periodic_strings(
    system: &MarkovSystem,
    max_len: usize,
    cap: usize,
) -> Result<Vec<PeriodicString>, MarkovError> {
    if max_len == 0 {
        return Err(MarkovError::ZeroLength);
    }
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(max_len);
    for start in 0..system.letters.len() {
        word.clear();
        word.push(start);
        extend_walks(system, start, max_len, cap, &mut word, &mut out)?;
    }
    out.sort();
    Ok(out)
}

fn extend_walks(
    system: &MarkovSystem,
    start: usize,
    max_len: usize,
    cap: usize,
    word: &mut Vec<usize>,
    out: &mut Vec<PeriodicString>,
) -> Result<(), MarkovError> {
    let last = *word.last().expect("walk is nonempty");
    // the least letter of a canonical rotation comes first
    if system.transitions.contains_key(&(last, start)) && is_least_rotation(word) {
        if out.len() >= cap {
            return Err(MarkovError::BudgetExceeded { cap });
        }
        out.push(PeriodicString { word: word.clone() });
    }
    if word.len() == max_len {
        return Ok(());
    }
    for &next in &system.successors[last] {
        if next < start {
            continue;
        }
        word.push(next);
        extend_walks(system, start, max_len, cap, word, out)?;
        word.pop();
    }
    Ok(())
}

fn is_least_rotation(word: &[usize]) -> bool {
    let n = word.len();
    (1..n).all(|r| {
        (0..n)
            .map(|k| word[k].cmp(&word[(r + k) % n]))
            .find(|o| o.is_ne())
            .is_none_or(|o| o.is_lt())
    })
}

/// Splits a periodic string into minimal loops by repeatedly cutting out the
/// circuit closed by the first repeated letter along the walk.
///
/// Returns `(loop, multiplicity)` pairs sorted by word. The classes summed with
/// multiplicity equal the class of `p`, and the word lengths sum to `p.len()`.
pub fn decompose_into_minimal_loops(
    system: &MarkovSystem,
    p: &PeriodicString,
) -> Result<Vec<(MinimalLoop, usize)>, MarkovError> {
    system.check_cyclic_word(p.word())?;
    let word = p.word();
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut stack = vec![word[0]];
    let mut on_stack = vec![None; system.letters.len()];
    on_stack[word[0]] = Some(0usize);
    for &letter in word[1..].iter().chain(std::iter::once(&word[0])) {
        match on_stack[letter] {
            Some(pos) => {
                let circuit: Vec<usize> = stack.drain(pos..).collect();
                for &c in &circuit {
                    on_stack[c] = None;
                }
                let canonical = canonical_rotation(&circuit)?;
                *counts.entry(canonical).or_default() += 1;
                stack.push(letter);
                on_stack[letter] = Some(pos);
            }
            None => {
                on_stack[letter] = Some(stack.len());
                stack.push(letter);
            }
        }
    }
    Ok(counts
        .into_iter()
        .map(|(word, m)| {
            let class = system.sum_labels(&word);
            (MinimalLoop { word, class }, m)
        })
        .collect())
}

/// Johnson's algorithm on the digraph given by sorted successor lists. Each
/// circuit is reported starting at its least vertex, which is its least
/// rotation because the vertices are distinct.
pub(crate) fn elementary_circuits(successors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = successors.len();
    let mut circuits = Vec::new();
    for s in 0..n {
        let component = strong_component_from(successors, s);
        if !successors[s].iter().any(|&w| component[w]) {
            continue;
        }
        let mut search = CircuitSearch {
            successors,
            component: &component,
            start: s,
            blocked: vec![false; n],
            blocked_by: vec![Vec::new(); n],
            stack: Vec::new(),
            out: &mut circuits,
        };
        search.circuit(s);
    }
    circuits.sort();
    circuits
}

/// Vertices `>= s` lying in the strong component of `s` within the subgraph
/// induced on `{s, s+1, ..}`.
fn strong_component_from(successors: &[Vec<usize>], s: usize) -> Vec<bool> {
    let n = successors.len();
    let forward = reach(n, s, |v| successors[v].iter().copied().filter(|&w| w >= s).collect());
    let mut predecessors = vec![Vec::new(); n];
    for (v, succ) in successors.iter().enumerate() {
        for &w in succ {
            if v >= s && w >= s {
                predecessors[w].push(v);
            }
        }
    }
    let backward = reach(n, s, |v| predecessors[v].clone());
    (0..n).map(|v| forward[v] && backward[v]).collect()
}

fn reach(n: usize, s: usize, next: impl Fn(usize) -> Vec<usize>) -> Vec<bool> {
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([s]);
    seen[s] = true;
    while let Some(v) = queue.pop_front() {
        for w in next(v) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

struct CircuitSearch<'a> {
    successors: &'a [Vec<usize>],
    component: &'a [bool],
    start: usize,
    blocked: Vec<bool>,
    blocked_by: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: &'a mut Vec<Vec<usize>>,
}

impl CircuitSearch<'_> {
    fn circuit(&mut self, v: usize) -> bool {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for &w in &self.successors[v] {
            if !self.component[w] {
                continue;
            }
            if w == self.start {
                self.out.push(self.stack.clone());
                found = true;
            } else if !self.blocked[w] && self.circuit(w) {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for &w in &self.successors[v] {
                if self.component[w] && !self.blocked_by[w].contains(&v) {
                    self.blocked_by[w].push(v);
                }
            }
        }
        self.stack.pop();
        found
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        while let Some(w) = self.blocked_by[u].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}
