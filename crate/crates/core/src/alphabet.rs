// SPDX-License-Identifier: Apache-2.0

//! Distributed alphabets, the independence relation they induce, trace
//! equivalence over finite words, and the I-diamond check for deterministic
//! automata.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// Longest word [`DistributedAlphabet::trace_class`] accepts by default.
pub const TRACE_CLASS_DEFAULT_BOUND: usize = 8;

/// Hard limit on letters (and channels) so that sets fit in one machine word.
pub const MAX_LETTERS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProcessId(pub u16);

impl ProcessId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u16);

impl Letter {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Channels of a CTS and letters of an automaton share one index space.
pub type Channel = Letter;

pub type Word = Vec<Letter>;

/// A set of letters stored as a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LetterSet(u64);

impl LetterSet {
    pub const fn empty() -> Self {
        LetterSet(0)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_LETTERS);
        if n == 64 {
            LetterSet(u64::MAX)
        } else {
            LetterSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(l: Letter) -> Self {
        LetterSet(1u64 << l.0)
    }

    pub fn from_bits(bits: u64) -> Self {
        LetterSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, l: Letter) -> bool {
        l.index() < 64 && self.0 & (1u64 << l.0) != 0
    }

    pub fn insert(&mut self, l: Letter) {
        self.0 |= 1u64 << l.0;
    }

    pub fn remove(&mut self, l: Letter) {
        self.0 &= !(1u64 << l.0);
    }

    pub fn with(mut self, l: Letter) -> Self {
        self.insert(l);
        self
    }

    pub fn without(mut self, l: Letter) -> Self {
        self.remove(l);
        self
    }

    pub fn union(self, other: Self) -> Self {
        LetterSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        LetterSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        LetterSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn min(self) -> Option<Letter> {
        (self.0 != 0).then(|| Letter(self.0.trailing_zeros() as u16))
    }

    pub fn max(self) -> Option<Letter> {
        (self.0 != 0).then(|| Letter(63 - self.0.leading_zeros() as u16))
    }

    /// Members in ascending index order.
    pub fn iter(self) -> impl Iterator<Item = Letter> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(Letter(i as u16))
        })
    }
}

impl FromIterator<Letter> for LetterSet {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        let mut s = LetterSet::empty();
        for l in iter {
            s.insert(l);
        }
        s
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|l| l.0)).finish()
    }
}

/// A finite alphabet together with the set of processes taking part in each
/// letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistributedAlphabet {
    processes: Vec<String>,
    letters: Vec<String>,
    dom: Vec<Vec<ProcessId>>,
    dom_inv: Vec<LetterSet>,
}

impl DistributedAlphabet {
    /// Builds an alphabet from process names and `(letter name, domain)`
    /// pairs. Domains are sorted and deduplicated; empty domains are allowed
    /// here (automata reject them).
    pub fn new(processes: Vec<String>, letters: Vec<(String, Vec<ProcessId>)>) -> Result<Self> {
        if letters.len() > MAX_LETTERS {
            return Err(Error::input(format!(
                "{} letters given, at most {MAX_LETTERS} are supported",
                letters.len()
            )));
        }
        if processes.len() > u16::MAX as usize {
            return Err(Error::input("too many processes"));
        }
        check_unique("process", &processes)?;
        let names: Vec<String> = letters.iter().map(|(n, _)| n.clone()).collect();
        check_unique("letter", &names)?;

        let mut dom = Vec::with_capacity(letters.len());
        let mut dom_inv = vec![LetterSet::empty(); processes.len()];
        for (i, (name, d)) in letters.into_iter().enumerate() {
            let mut d = d;
            d.sort();
            d.dedup();
            for p in &d {
                if p.index() >= processes.len() {
                    return Err(Error::input(format!(
                        "letter '{name}' names unknown process index {}",
                        p.0
                    )));
                }
                dom_inv[p.index()].insert(Letter(i as u16));
            }
            dom.push(d);
        }
        Ok(DistributedAlphabet {
            processes,
            letters: names,
            dom,
            dom_inv,
        })
    }

    /// Every letter is shared by every process.
    pub fn complete(processes: Vec<String>, letters: Vec<String>) -> Result<Self> {
        let all: Vec<ProcessId> = (0..processes.len()).map(|i| ProcessId(i as u16)).collect();
        Self::new(
            processes,
            letters.into_iter().map(|l| (l, all.clone())).collect(),
        )
    }

    pub fn process_count(&self) -> usize {
        self.processes.len()
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn processes(&self) -> impl Iterator<Item = ProcessId> {
        (0..self.processes.len()).map(|i| ProcessId(i as u16))
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        (0..self.letters.len()).map(|i| Letter(i as u16))
    }

    pub fn all_letters(&self) -> LetterSet {
        LetterSet::full(self.letters.len())
    }

    pub fn process_names(&self) -> &[String] {
        &self.processes
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    pub fn process_name(&self, p: ProcessId) -> &str {
        &self.processes[p.index()]
    }

    pub fn letter_name(&self, a: Letter) -> &str {
        &self.letters[a.index()]
    }

    pub fn letter_by_name(&self, name: &str) -> Option<Letter> {
        self.letters
            .iter()
            .position(|l| l == name)
            .map(|i| Letter(i as u16))
    }

    pub fn process_by_name(&self, name: &str) -> Option<ProcessId> {
        self.processes
            .iter()
            .position(|p| p == name)
            .map(|i| ProcessId(i as u16))
    }

    pub fn check_letter(&self, a: Letter) -> Result<()> {
        if a.index() < self.letters.len() {
            Ok(())
        } else {
            Err(Error::input(format!("unknown letter index {}", a.0)))
        }
    }

    pub fn check_process(&self, p: ProcessId) -> Result<()> {
        if p.index() < self.processes.len() {
            Ok(())
        } else {
            Err(Error::input(format!("unknown process index {}", p.0)))
        }
    }

    /// Processes taking part in `a`, in ascending order.
    pub fn dom(&self, a: Letter) -> &[ProcessId] {
        &self.dom[a.index()]
    }

    /// Letters that `p` takes part in.
    pub fn dom_inv(&self, p: ProcessId) -> LetterSet {
        self.dom_inv[p.index()]
    }

    pub fn independent(&self, a: Letter, b: Letter) -> Result<bool> {
        self.check_letter(a)?;
        self.check_letter(b)?;
        Ok(self.independent_unchecked(a, b))
    }

    pub(crate) fn independent_unchecked(&self, a: Letter, b: Letter) -> bool {
        let (da, db) = (&self.dom[a.index()], &self.dom[b.index()]);
        !da.iter().any(|p| db.binary_search(p).is_ok())
    }

    pub fn check_word(&self, w: &[Letter]) -> Result<()> {
        w.iter().try_for_each(|&a| self.check_letter(a))
    }

    /// Lexicographic normal form: the smallest word (by letter index) of the
    /// trace of `w`.
    pub fn lex_normal_form(&self, w: &[Letter]) -> Result<Word> {
        self.check_word(w)?;
        let mut rest: Vec<Letter> = w.to_vec();
        let mut out = Vec::with_capacity(w.len());
        while !rest.is_empty() {
            // A position is minimal when no earlier letter depends on it.
            let mut best: Option<usize> = None;
            for i in 0..rest.len() {
                let minimal = rest[..i]
                    .iter()
                    .all(|&b| self.independent_unchecked(b, rest[i]));
                if minimal && best.is_none_or(|j| rest[i] < rest[j]) {
                    best = Some(i);
                }
            }
            let i = best.expect("the first position is always minimal");
            out.push(rest.remove(i));
        }
        Ok(out)
    }

    pub fn trace_equivalent(&self, u: &[Letter], v: &[Letter]) -> Result<bool> {
        if u.len() != v.len() {
            self.check_word(u)?;
            self.check_word(v)?;
            return Ok(false);
        }
        Ok(self.lex_normal_form(u)? == self.lex_normal_form(v)?)
    }

    /// All words reachable from `u` by swapping adjacent independent letters.
    pub fn trace_class(&self, u: &[Letter], bound: usize) -> Result<BTreeSet<Word>> {
        self.check_word(u)?;
        if u.len() > bound {
            return Err(Error::resource(
                format!("trace class of a word of length {}", u.len()),
                bound,
            ));
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(u.to_vec());
        queue.push_back(u.to_vec());
        while let Some(w) = queue.pop_front() {
            for i in 0..w.len().saturating_sub(1) {
                if w[i] != w[i + 1] && self.independent_unchecked(w[i], w[i + 1]) {
                    let mut next = w.clone();
                    next.swap(i, i + 1);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        Ok(seen)
    }

    /// Space-separated letter names, `ε` for the empty word.
    pub fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        w.iter()
            .map(|&a| self.letter_name(a))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses letter names separated by whitespace or commas. `ε` or the
    /// empty string is the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        parse_word_with(s, |tok| self.letter_by_name(tok))
    }
}

pub(crate) fn parse_word_with(
    s: &str,
    lookup: impl Fn(&str) -> Option<Letter>,
) -> Result<Word> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty() && *t != "ε")
        .map(|tok| lookup(tok).ok_or_else(|| Error::input(format!("unknown letter '{tok}'"))))
        .collect()
}

pub(crate) fn check_unique(what: &str, names: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for (i, n) in names.iter().enumerate() {
        if let Some(j) = seen.insert(n.as_str(), i) {
            return Err(Error::input(format!(
                "duplicate {what} name '{n}' (positions {j} and {i})"
            )));
        }
    }
    Ok(())
}

/// A deterministic automaton with a partial transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    alphabet: DistributedAlphabet,
    states: Vec<String>,
    initial: usize,
    delta: BTreeMap<(usize, Letter), usize>,
    accepting: BTreeSet<usize>,
}

/// Witness that a DFA is not I-diamond: from `state`, reading `first` then
/// `second` and reading them the other way round disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiamondViolation {
    pub state: usize,
    pub first: Letter,
    pub second: Letter,
    pub after_first_second: Option<usize>,
    pub after_second_first: Option<usize>,
}

impl DiamondViolation {
    /// Re-runs both orders on `dfa` and confirms they really disagree.
    pub fn replay(&self, dfa: &Dfa) -> bool {
        let ab = dfa.run_from(self.state, &[self.first, self.second]);
        let ba = dfa.run_from(self.state, &[self.second, self.first]);
        dfa.alphabet
            .independent_unchecked(self.first, self.second)
            && ab == self.after_first_second
            && ba == self.after_second_first
            && ab != ba
    }
}

impl Dfa {
    pub fn new(
        alphabet: DistributedAlphabet,
        states: Vec<String>,
        initial: usize,
        transitions: impl IntoIterator<Item = (usize, Letter, usize)>,
        accepting: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        check_unique("state", &states)?;
        if initial >= states.len() {
            return Err(Error::input("initial state out of range"));
        }
        let mut delta = BTreeMap::new();
        for (q, a, r) in transitions {
            if q >= states.len() || r >= states.len() {
                return Err(Error::input(format!("transition ({q}, {}, {r}) leaves the state set", a.0)));
            }
            alphabet.check_letter(a)?;
            if let Some(old) = delta.insert((q, a), r) {
                if old != r {
                    return Err(Error::input(format!(
                        "state '{}' has two successors on '{}'",
                        states[q],
                        alphabet.letter_name(a)
                    )));
                }
            }
        }
        let accepting: BTreeSet<usize> = accepting.into_iter().collect();
        if accepting.iter().any(|&q| q >= states.len()) {
            return Err(Error::input("accepting state out of range"));
        }
        Ok(Dfa {
            alphabet,
            states,
            initial,
            delta,
            accepting,
        })
    }

    pub fn alphabet(&self) -> &DistributedAlphabet {
        &self.alphabet
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Letter, usize)> + '_ {
        self.delta.iter().map(|(&(q, a), &r)| (q, a, r))
    }

    pub fn step(&self, q: usize, a: Letter) -> Option<usize> {
        self.delta.get(&(q, a)).copied()
    }

    pub fn run_from(&self, q: usize, w: &[Letter]) -> Option<usize> {
        w.iter().try_fold(q, |q, &a| self.step(q, a))
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.run_from(self.initial, w)
            .is_some_and(|q| self.accepting.contains(&q))
    }

    /// First `(state, a, b)` with `a`, `b` independent where `ab` and `ba`
    /// disagree (including one side being undefined).
    pub fn diamond_violation(&self) -> Option<DiamondViolation> {
        let letters: Vec<Letter> = self.alphabet.letters().collect();
        for q in 0..self.states.len() {
            for (i, &a) in letters.iter().enumerate() {
                for &b in &letters[i + 1..] {
                    if !self.alphabet.independent_unchecked(a, b) {
                        continue;
                    }
                    let ab = self.run_from(q, &[a, b]);
                    let ba = self.run_from(q, &[b, a]);
                    if ab != ba {
                        return Some(DiamondViolation {
                            state: q,
                            first: a,
                            second: b,
                            after_first_second: ab,
                            after_second_first: ba,
                        });
                    }
                }
            }
        }
        None
    }

    pub fn is_i_diamond(&self) -> bool {
        self.diamond_violation().is_none()
    }
}
