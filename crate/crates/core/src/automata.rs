// SPDX-License-Identifier: Apache-2.0

//! Global and local asynchronous automata.
//!
//! Transition functions are partial: a letter whose transition is undefined
//! at the current configuration is refused. Every runnable word is accepted,
//! so languages are prefix-closed.

use std::collections::BTreeMap;

use crate::alphabet::{DistributedAlphabet, Letter, LetterSet, ProcessId};
use crate::error::{Error, Result};
use crate::explore::TransitionSystem;

pub type StateId = u32;

/// One local state per process.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobalConfig(pub Vec<StateId>);

impl GlobalConfig {
    pub fn get(&self, p: ProcessId) -> StateId {
        self.0[p.index()]
    }

    /// The coordinates of the processes in `dom`, in order.
    pub fn project(&self, dom: &[ProcessId]) -> Vec<StateId> {
        dom.iter().map(|&p| self.get(p)).collect()
    }
}

/// State space of a single process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStates {
    pub names: Vec<String>,
    pub initial: StateId,
}

impl LocalStates {
    pub fn new(names: Vec<String>, initial: StateId) -> Self {
        LocalStates { names, initial }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<StateId> {
        self.names.iter().position(|n| n == name).map(|i| i as StateId)
    }
}

fn check_locals(alphabet: &DistributedAlphabet, local: &[LocalStates]) -> Result<()> {
    if local.len() != alphabet.process_count() {
        return Err(Error::input(format!(
            "{} local state spaces for {} processes",
            local.len(),
            alphabet.process_count()
        )));
    }
    for (p, ls) in local.iter().enumerate() {
        let name = &alphabet.process_names()[p];
        if ls.names.is_empty() {
            return Err(Error::input(format!("process '{name}' has no states")));
        }
        if ls.initial as usize >= ls.names.len() {
            return Err(Error::input(format!("process '{name}' has an out-of-range initial state")));
        }
        crate::alphabet::check_unique(&format!("state of process '{name}'"), &ls.names)?;
    }
    for a in alphabet.letters() {
        if alphabet.dom(a).is_empty() {
            return Err(Error::input(format!(
                "letter '{}' has an empty domain",
                alphabet.letter_name(a)
            )));
        }
    }
    Ok(())
}

/// Common surface of global and local asynchronous automata.
pub trait AsyncAutomaton: TransitionSystem<State = GlobalConfig> {
    fn alphabet(&self) -> &DistributedAlphabet;

    fn local_states(&self, p: ProcessId) -> &LocalStates;

    fn initial_config(&self) -> GlobalConfig {
        GlobalConfig(
            self.alphabet()
                .processes()
                .map(|p| self.local_states(p).initial)
                .collect(),
        )
    }

    /// One step on `a`; `None` when `a` is refused. `a` must be valid.
    fn step_unchecked(&self, cfg: &GlobalConfig, a: Letter) -> Option<GlobalConfig>;

    fn step(&self, cfg: &GlobalConfig, a: Letter) -> Result<Option<GlobalConfig>> {
        self.alphabet().check_letter(a)?;
        if cfg.0.len() != self.alphabet().process_count() {
            return Err(Error::input("configuration has the wrong number of coordinates"));
        }
        Ok(self.step_unchecked(cfg, a))
    }

    /// Folds [`AsyncAutomaton::step`] over `w` from the initial
    /// configuration. `Err(i)` is the first refused position.
    fn run(&self, w: &[Letter]) -> Result<std::result::Result<GlobalConfig, usize>> {
        self.alphabet().check_word(w)?;
        let mut cfg = self.initial_config();
        for (i, &a) in w.iter().enumerate() {
            match self.step_unchecked(&cfg, a) {
                Some(next) => cfg = next,
                None => return Ok(Err(i)),
            }
        }
        Ok(Ok(cfg))
    }

    fn format_config(&self, cfg: &GlobalConfig) -> String {
        let parts: Vec<String> = self
            .alphabet()
            .processes()
            .map(|p| self.local_states(p).names[cfg.get(p) as usize].clone())
            .collect();
        format!("({})", parts.join(", "))
    }

    fn is_fully_listening(&self, p: ProcessId) -> bool {
        self.alphabet().dom_inv(p) == self.alphabet().all_letters()
    }
}

/// Asynchronous automaton whose letter transitions read and write the joint
/// state of the letter's domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalAA {
    alphabet: DistributedAlphabet,
    local: Vec<LocalStates>,
    /// Per letter: domain projection before -> after.
    delta: Vec<BTreeMap<Vec<StateId>, Vec<StateId>>>,
}

impl GlobalAA {
    /// `transitions` are `(letter, before, after)` with tuples over the
    /// letter's domain in ascending process order.
    pub fn new(
        alphabet: DistributedAlphabet,
        local: Vec<LocalStates>,
        transitions: impl IntoIterator<Item = (Letter, Vec<StateId>, Vec<StateId>)>,
    ) -> Result<Self> {
        check_locals(&alphabet, &local)?;
        let mut delta = vec![BTreeMap::new(); alphabet.letter_count()];
        for (a, from, to) in transitions {
            alphabet.check_letter(a)?;
            let dom = alphabet.dom(a);
            if from.len() != dom.len() || to.len() != dom.len() {
                return Err(Error::input(format!(
                    "transition on '{}' must have {} coordinates",
                    alphabet.letter_name(a),
                    dom.len()
                )));
            }
            for (i, &p) in dom.iter().enumerate() {
                let n = local[p.index()].len() as StateId;
                if from[i] >= n || to[i] >= n {
                    return Err(Error::input(format!(
                        "transition on '{}' uses an undeclared state of '{}'",
                        alphabet.letter_name(a),
                        alphabet.process_name(p)
                    )));
                }
            }
            let map: &mut BTreeMap<_, _> = &mut delta[a.index()];
            if let Some(prev) = map.get(&from) {
                if *prev != to {
                    return Err(Error::Nondeterminism(format!(
                        "two transitions on '{}' from the same domain state",
                        alphabet.letter_name(a)
                    )));
                }
            }
            map.insert(from, to);
        }
        Ok(GlobalAA {
            alphabet,
            local,
            delta,
        })
    }

    /// The global automaton simulating a local one letter by letter.
    pub fn from_local(laa: &LocalAA) -> Self {
        let alphabet = laa.alphabet.clone();
        let mut delta = vec![BTreeMap::new(); alphabet.letter_count()];
        for a in alphabet.letters() {
            let dom = alphabet.dom(a);
            let mut tuples: Vec<Vec<StateId>> = vec![Vec::new()];
            for &p in dom {
                let mut next = Vec::new();
                for t in &tuples {
                    for s in 0..laa.local[p.index()].len() as StateId {
                        let mut t = t.clone();
                        t.push(s);
                        next.push(t);
                    }
                }
                tuples = next;
            }
            for from in tuples {
                let to: Option<Vec<StateId>> = dom
                    .iter()
                    .zip(&from)
                    .map(|(&p, &s)| laa.local_step(p, s, a))
                    .collect();
                if let Some(to) = to {
                    delta[a.index()].insert(from, to);
                }
            }
        }
        GlobalAA {
            alphabet,
            local: laa.local.clone(),
            delta,
        }
    }

    pub fn locals(&self) -> &[LocalStates] {
        &self.local
    }

    /// Defined transitions of `a`, keyed by the domain projection.
    pub fn transitions(&self, a: Letter) -> &BTreeMap<Vec<StateId>, Vec<StateId>> {
        &self.delta[a.index()]
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(BTreeMap::len).sum()
    }

    /// Drops one transition; returns whether it existed.
    pub fn remove_transition(&mut self, a: Letter, from: &[StateId]) -> bool {
        self.delta[a.index()].remove(from).is_some()
    }

    /// Adds or replaces one transition (no validation beyond arity).
    pub fn set_transition(&mut self, a: Letter, from: Vec<StateId>, to: Vec<StateId>) -> Result<()> {
        let n = self.alphabet.dom(a).len();
        if from.len() != n || to.len() != n {
            return Err(Error::input("transition arity does not match the letter's domain"));
        }
        self.delta[a.index()].insert(from, to);
        Ok(())
    }
}

impl AsyncAutomaton for GlobalAA {
    fn alphabet(&self) -> &DistributedAlphabet {
        &self.alphabet
    }

    fn local_states(&self, p: ProcessId) -> &LocalStates {
        &self.local[p.index()]
    }

    fn step_unchecked(&self, cfg: &GlobalConfig, a: Letter) -> Option<GlobalConfig> {
        let dom = self.alphabet.dom(a);
        let to = self.delta[a.index()].get(&cfg.project(dom))?;
        let mut next = cfg.clone();
        for (&p, &s) in dom.iter().zip(to) {
            next.0[p.index()] = s;
        }
        Some(next)
    }
}

/// Asynchronous automaton where each process moves on its own.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalAA {
    alphabet: DistributedAlphabet,
    local: Vec<LocalStates>,
    delta: Vec<BTreeMap<(StateId, Letter), StateId>>,
}

impl LocalAA {
    /// `transitions` are `(process, state, letter, target)`.
    pub fn new(
        alphabet: DistributedAlphabet,
        local: Vec<LocalStates>,
        transitions: impl IntoIterator<Item = (ProcessId, StateId, Letter, StateId)>,
    ) -> Result<Self> {
        check_locals(&alphabet, &local)?;
        let mut delta = vec![BTreeMap::new(); alphabet.process_count()];
        for (p, s, a, t) in transitions {
            alphabet.check_process(p)?;
            alphabet.check_letter(a)?;
            if !alphabet.dom_inv(p).contains(a) {
                return Err(Error::input(format!(
                    "process '{}' has a move on '{}' outside its domain",
                    alphabet.process_name(p),
                    alphabet.letter_name(a)
                )));
            }
            let n = local[p.index()].len() as StateId;
            if s >= n || t >= n {
                return Err(Error::input(format!(
                    "process '{}' has a move between undeclared states",
                    alphabet.process_name(p)
                )));
            }
            let map: &mut BTreeMap<_, _> = &mut delta[p.index()];
            if let Some(&prev) = map.get(&(s, a)) {
                if prev != t {
                    return Err(Error::Nondeterminism(format!(
                        "process '{}' has two moves on '{}' from one state",
                        alphabet.process_name(p),
                        alphabet.letter_name(a)
                    )));
                }
            }
            map.insert((s, a), t);
        }
        Ok(LocalAA {
            alphabet,
            local,
            delta,
        })
    }

    pub fn locals(&self) -> &[LocalStates] {
        &self.local
    }

    pub fn local_step(&self, p: ProcessId, s: StateId, a: Letter) -> Option<StateId> {
        self.delta[p.index()].get(&(s, a)).copied()
    }

    /// `(state, letter, target)` moves of `p`.
    pub fn local_transitions(&self, p: ProcessId) -> impl Iterator<Item = (StateId, Letter, StateId)> + '_ {
        self.delta[p.index()].iter().map(|(&(s, a), &t)| (s, a, t))
    }

    /// Letters `p` can take from `s`.
    pub fn enabled_locally(&self, p: ProcessId, s: StateId) -> LetterSet {
        self.delta[p.index()]
            .range((s, Letter(0))..=(s, Letter(u16::MAX)))
            .map(|(&(_, a), _)| a)
            .collect()
    }

    pub fn remove_transition(&mut self, p: ProcessId, s: StateId, a: Letter) -> bool {
        self.delta[p.index()].remove(&(s, a)).is_some()
    }

    pub fn set_transition(&mut self, p: ProcessId, s: StateId, a: Letter, t: StateId) -> Result<()> {
        if !self.alphabet.dom_inv(p).contains(a) {
            return Err(Error::input("move outside the process's domain"));
        }
        self.delta[p.index()].insert((s, a), t);
        Ok(())
    }
}

impl AsyncAutomaton for LocalAA {
    fn alphabet(&self) -> &DistributedAlphabet {
        &self.alphabet
    }

    fn local_states(&self, p: ProcessId) -> &LocalStates {
        &self.local[p.index()]
    }

    fn step_unchecked(&self, cfg: &GlobalConfig, a: Letter) -> Option<GlobalConfig> {
        let mut next = cfg.clone();
        for &p in self.alphabet.dom(a) {
            next.0[p.index()] = self.local_step(p, cfg.get(p), a)?;
        }
        Some(next)
    }
}

macro_rules! impl_transition_system {
    ($ty:ty) => {
        impl TransitionSystem for $ty {
            type State = GlobalConfig;

            fn letter_names(&self) -> &[String] {
                self.alphabet.letter_names()
            }

            fn initial_state(&self) -> GlobalConfig {
                self.initial_config()
            }

            fn successors(&self, s: &GlobalConfig, a: Letter) -> Vec<GlobalConfig> {
                self.step_unchecked(s, a).into_iter().collect()
            }
        }
    };
}

impl_transition_system!(GlobalAA);
impl_transition_system!(LocalAA);

/// Either kind of asynchronous automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Automaton {
    Global(GlobalAA),
    Local(LocalAA),
}

impl Automaton {
    pub fn as_dyn(&self) -> &dyn AsyncAutomaton<State = GlobalConfig> {
        match self {
            Automaton::Global(g) => g,
            Automaton::Local(l) => l,
        }
    }

    pub fn to_global(&self) -> GlobalAA {
        match self {
            Automaton::Global(g) => g.clone(),
            Automaton::Local(l) => GlobalAA::from_local(l),
        }
    }
}

impl TransitionSystem for Automaton {
    type State = GlobalConfig;

    fn letter_names(&self) -> &[String] {
        self.as_dyn().letter_names()
    }

    fn initial_state(&self) -> GlobalConfig {
        self.as_dyn().initial_config()
    }

    fn successors(&self, s: &GlobalConfig, a: Letter) -> Vec<GlobalConfig> {
        self.as_dyn().successors(s, a)
    }
}

impl AsyncAutomaton for Automaton {
    fn alphabet(&self) -> &DistributedAlphabet {
        self.as_dyn().alphabet()
    }

    fn local_states(&self, p: ProcessId) -> &LocalStates {
        match self {
            Automaton::Global(g) => g.local_states(p),
            Automaton::Local(l) => l.local_states(p),
        }
    }

    fn step_unchecked(&self, cfg: &GlobalConfig, a: Letter) -> Option<GlobalConfig> {
        self.as_dyn().step_unchecked(cfg, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explore::{language_upto, Limits};

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn two_procs() -> DistributedAlphabet {
        DistributedAlphabet::new(
            vec!["p1".into(), "p2".into()],
            vec![
                ("a".into(), vec![ProcessId(0)]),
                ("b".into(), vec![ProcessId(0), ProcessId(1)]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn self_loop_step() {
        let al = DistributedAlphabet::new(vec!["p".into()], vec![("a".into(), vec![ProcessId(0)])]).unwrap();
        let aa = GlobalAA::new(al, vec![LocalStates::new(names("q", 1), 0)], [(Letter(0), vec![0], vec![0])]).unwrap();
        let c = aa.initial_config();
        assert_eq!(aa.step(&c, Letter(0)).unwrap(), Some(c.clone()));
        assert!(aa.step(&c, Letter(3)).is_err());
        let lang = language_upto(&aa, 3, Limits::default()).unwrap();
        assert_eq!(lang.len(), 4);
        assert_eq!(aa.run(&[Letter(0); 5]).unwrap(), Ok(c));
    }

    #[test]
    fn frame_condition_and_blocking() {
        let al = two_procs();
        let aa = GlobalAA::new(
            al,
            vec![LocalStates::new(names("x", 2), 0), LocalStates::new(names("y", 2), 1)],
            [(Letter(0), vec![0], vec![1])],
        )
        .unwrap();
        let c = aa.initial_config();
        let n = aa.step(&c, Letter(0)).unwrap().unwrap();
        assert_eq!(n.0, vec![1, 1]);
        assert_eq!(aa.step(&c, Letter(1)).unwrap(), None);
        assert_eq!(aa.run(&[Letter(0), Letter(0)]).unwrap(), Err(1));
        assert_eq!(aa.run(&[]).unwrap(), Ok(c));
    }

    #[test]
    fn local_veto() {
        let al = two_procs();
        let laa = LocalAA::new(
            al,
            vec![LocalStates::new(names("x", 1), 0), LocalStates::new(names("y", 1), 0)],
            [(ProcessId(0), 0, Letter(0), 0), (ProcessId(0), 0, Letter(1), 0)],
        )
        .unwrap();
        let c = laa.initial_config();
        assert!(laa.step(&c, Letter(0)).unwrap().is_some());
        // p2 has no move on b.
        assert_eq!(laa.step(&c, Letter(1)).unwrap(), None);
    }

    #[test]
    fn empty_domain_rejected() {
        let al = DistributedAlphabet::new(vec!["p".into()], vec![("a".into(), vec![])]).unwrap();
        assert!(GlobalAA::new(al.clone(), vec![LocalStates::new(names("q", 1), 0)], []).is_err());
        assert!(LocalAA::new(al, vec![LocalStates::new(names("q", 1), 0)], []).is_err());
    }

    #[test]
    fn move_outside_domain_rejected() {
        let al = two_procs();
        let r = LocalAA::new(
            al,
            vec![LocalStates::new(names("x", 1), 0), LocalStates::new(names("y", 1), 0)],
            [(ProcessId(1), 0, Letter(0), 0)],
        );
        assert!(r.is_err());
    }

    #[test]
    fn global_from_local_matches() {
        let al = two_procs();
        let laa = LocalAA::new(
            al,
            vec![LocalStates::new(names("x", 2), 0), LocalStates::new(names("y", 2), 0)],
            [
                (ProcessId(0), 0, Letter(0), 1),
                (ProcessId(0), 1, Letter(1), 0),
                (ProcessId(1), 0, Letter(1), 1),
                (ProcessId(1), 1, Letter(1), 0),
            ],
        )
        .unwrap();
        let g = GlobalAA::from_local(&laa);
        assert_eq!(
            language_upto(&laa, 5, Limits::default()).unwrap(),
            language_upto(&g, 5, Limits::default()).unwrap()
        );
    }
}
