// SPDX-License-Identifier: Apache-2.0

//! Explicit-state exploration shared by every machine kind: bounded language
//! enumeration, word runs and the reachable configuration graph.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use crate::alphabet::{Letter, Word};
use crate::error::{Error, Result};

/// Environment variable overriding [`Limits::max_states`].
pub const STATE_CAP_ENV: &str = "AACTS_STATE_CAP";

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of configurations (or word/configuration pairs in one
    /// BFS level) an operation may hold.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_states: DEFAULT_STATE_CAP,
        }
    }
}

impl Limits {
    pub fn new(max_states: usize) -> Self {
        Limits { max_states }
    }

    /// Default limits, with the cap taken from `AACTS_STATE_CAP` when set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(STATE_CAP_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map(Limits::new)
                .map_err(|_| Error::input(format!("{STATE_CAP_ENV}='{v}' is not a number"))),
            Err(_) => Ok(Limits::default()),
        }
    }
}

/// Anything with an initial state and letter-labelled successors.
pub trait TransitionSystem {
    type State: Clone + Eq + Ord + Hash + Debug;

    fn letter_names(&self) -> &[String];

    fn initial_state(&self) -> Self::State;

    /// All successors of `s` on `a`; empty when `a` is refused.
    fn successors(&self, s: &Self::State, a: Letter) -> Vec<Self::State>;

    fn letters(&self) -> Box<dyn Iterator<Item = Letter> + '_> {
        Box::new((0..self.letter_names().len()).map(|i| Letter(i as u16)))
    }

    fn format_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "ε".to_string();
        }
        let names = self.letter_names();
        w.iter()
            .map(|a| names[a.index()].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome<S> {
    /// The word ran to completion; all states it may end in.
    Completed(BTreeSet<S>),
    /// No run survives position `index` of the word.
    Blocked { index: usize },
}

impl<S> RunOutcome<S> {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunOutcome::Completed(_))
    }
}

pub fn run_word<M: TransitionSystem>(m: &M, w: &[Letter]) -> RunOutcome<M::State> {
    run_word_from(m, BTreeSet::from([m.initial_state()]), w)
}

pub fn run_word_from<M: TransitionSystem>(
    m: &M,
    start: BTreeSet<M::State>,
    w: &[Letter],
) -> RunOutcome<M::State> {
    let mut current = start;
    for (i, &a) in w.iter().enumerate() {
        let next: BTreeSet<M::State> = current.iter().flat_map(|s| m.successors(s, a)).collect();
        if next.is_empty() {
            return RunOutcome::Blocked { index: i };
        }
        current = next;
    }
    RunOutcome::Completed(current)
}

/// Every word of length at most `k` labelling a run from the initial state.
pub fn language_upto<M: TransitionSystem>(m: &M, k: usize, limits: Limits) -> Result<BTreeSet<Word>> {
    let mut levels = language_levels(m, k, limits)?;
    let mut out = BTreeSet::new();
    for level in levels.drain(..) {
        out.extend(level);
    }
    Ok(out)
}

/// Like [`language_upto`], split by word length (`result[i]` holds length `i`).
pub fn language_levels<M: TransitionSystem>(
    m: &M,
    k: usize,
    limits: Limits,
) -> Result<Vec<BTreeSet<Word>>> {
    let mut frontier: BTreeMap<Word, BTreeSet<M::State>> =
        BTreeMap::from([(Vec::new(), BTreeSet::from([m.initial_state()]))]);
    let mut levels = vec![BTreeSet::from([Vec::new()])];
    let letters: Vec<Letter> = m.letters().collect();
    for _ in 0..k {
        let mut next: BTreeMap<Word, BTreeSet<M::State>> = BTreeMap::new();
        let mut pairs = 0usize;
        for (w, states) in &frontier {
            for &a in &letters {
                let succ: BTreeSet<M::State> =
                    states.iter().flat_map(|s| m.successors(s, a)).collect();
                if succ.is_empty() {
                    continue;
                }
                pairs += succ.len();
                if pairs > limits.max_states {
                    return Err(Error::resource("bounded language frontier", limits.max_states));
                }
                let mut w2 = w.clone();
                w2.push(a);
                next.insert(w2, succ);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next.keys().cloned().collect());
        frontier = next;
    }
    Ok(levels)
}

/// Reachable configurations with BFS parent pointers, in discovery order.
#[derive(Clone, Debug)]
pub struct ReachableGraph<S> {
    pub states: Vec<S>,
    pub index: HashMap<S, usize>,
    /// `edges[i]` lists `(letter, target)` in letter order.
    pub edges: Vec<Vec<(Letter, usize)>>,
    parent: Vec<Option<(usize, Letter)>>,
}

impl<S: Clone + Eq + Hash> ReachableGraph<S> {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// A shortest word leading from the initial state to state `i`.
    pub fn path_to(&self, mut i: usize) -> Word {
        let mut w = Vec::new();
        while let Some((p, a)) = self.parent[i] {
            w.push(a);
            i = p;
        }
        w.reverse();
        w
    }
}

pub fn reachable<M: TransitionSystem>(m: &M, limits: Limits) -> Result<ReachableGraph<M::State>> {
    let init = m.initial_state();
    let mut g = ReachableGraph {
        states: vec![init.clone()],
        index: HashMap::from([(init, 0)]),
        edges: Vec::new(),
        parent: vec![None],
    };
    let letters: Vec<Letter> = m.letters().collect();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut out = Vec::new();
        for &a in &letters {
            for t in m.successors(&g.states[i], a) {
                let j = match g.index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if g.states.len() >= limits.max_states {
                            return Err(Error::resource("reachable configurations", limits.max_states));
                        }
                        let j = g.states.len();
                        g.states.push(t.clone());
                        g.index.insert(t, j);
                        g.parent.push(Some((i, a)));
                        queue.push_back(j);
                        j
                    }
                };
                out.push((a, j));
            }
        }
        out.sort();
        out.dedup();
        // Edges are filled in BFS order, which is index order.
        debug_assert_eq!(g.edges.len(), i);
        g.edges.push(out);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counter modulo 3 over letters {inc, reset}; `inc` refused at 2.
    struct Counter(Vec<String>);

    impl TransitionSystem for Counter {
        type State = u8;
        fn letter_names(&self) -> &[String] {
            &self.0
        }
        fn initial_state(&self) -> u8 {
            0
        }
        fn successors(&self, s: &u8, a: Letter) -> Vec<u8> {
            match (a.0, *s) {
                (0, 2) => vec![],
                (0, s) => vec![s + 1],
                _ => vec![0],
            }
        }
    }

    fn counter() -> Counter {
        Counter(vec!["inc".into(), "reset".into()])
    }

    #[test]
    fn language_levels_and_blocking() {
        let m = counter();
        let lang = language_upto(&m, 3, Limits::default()).unwrap();
        assert!(lang.contains(&vec![Letter(0), Letter(0)]));
        assert!(!lang.contains(&vec![Letter(0), Letter(0), Letter(0)]));
        assert_eq!(language_upto(&m, 0, Limits::default()).unwrap().len(), 1);
        assert_eq!(
            run_word(&m, &[Letter(0), Letter(0), Letter(0)]),
            RunOutcome::Blocked { index: 2 }
        );
    }

    #[test]
    fn reachable_graph_paths() {
        let m = counter();
        let g = reachable(&m, Limits::default()).unwrap();
        assert_eq!(g.len(), 3);
        let i = g.index[&2];
        assert_eq!(g.path_to(i), vec![Letter(0), Letter(0)]);
        assert!(reachable(&m, Limits::new(2)).unwrap_err().is_resource());
    }

    #[test]
    fn frontier_cap() {
        let err = language_upto(&counter(), 5, Limits::new(1)).unwrap_err();
        assert!(err.is_resource());
    }
}
