// SPDX-License-Identifier: Apache-2.0

//! Channeled transition systems and their parallel composition.
//!
//! A component listening to a channel without offering a matching
//! transition blocks that channel for everyone.

use std::collections::{BTreeSet, HashMap};

use crate::alphabet::{check_unique, Channel, Letter, LetterSet, MAX_LETTERS};
use crate::automata::{GlobalConfig, StateId};
use crate::error::{Error, Result};
use crate::explore::TransitionSystem;

pub type ContentId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CtsTransition {
    pub from: StateId,
    pub content: ContentId,
    pub channel: Channel,
    pub to: StateId,
}

/// One component: states with listening sets and a `(content, channel)`
/// labelled transition relation.
#[derive(Clone, Debug)]
pub struct Cts {
    name: String,
    channels: Vec<String>,
    contents: Vec<String>,
    states: Vec<String>,
    initial: StateId,
    listen: Vec<LetterSet>,
    transitions: Vec<CtsTransition>,
    moves: HashMap<(StateId, Channel), Vec<(ContentId, StateId)>>,
}

impl PartialEq for Cts {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.channels == other.channels
            && self.contents == other.contents
            && self.states == other.states
            && self.initial == other.initial
            && self.listen == other.listen
            && self.transitions == other.transitions
    }
}

impl Eq for Cts {}

impl Cts {
    pub fn new(
        name: impl Into<String>,
        channels: Vec<String>,
        contents: Vec<String>,
        states: Vec<String>,
        initial: StateId,
        listen: Vec<LetterSet>,
        transitions: impl IntoIterator<Item = CtsTransition>,
    ) -> Result<Self> {
        let name = name.into();
        if channels.len() > MAX_LETTERS {
            return Err(Error::input(format!("at most {MAX_LETTERS} channels are supported")));
        }
        check_unique("channel", &channels)?;
        check_unique("content", &contents)?;
        check_unique("state", &states)?;
        if contents.is_empty() {
            return Err(Error::input(format!("component '{name}' declares no message contents")));
        }
        if initial as usize >= states.len() {
            return Err(Error::input(format!("component '{name}' has an out-of-range initial state")));
        }
        if listen.len() != states.len() {
            return Err(Error::input(format!(
                "component '{name}' has {} listening sets for {} states",
                listen.len(),
                states.len()
            )));
        }
        let all = LetterSet::full(channels.len());
        if let Some(i) = listen.iter().position(|l| !l.is_subset(all)) {
            return Err(Error::input(format!(
                "state '{}' of '{name}' listens to an undeclared channel",
                states[i]
            )));
        }
        let mut ts: Vec<CtsTransition> = transitions.into_iter().collect();
        ts.sort();
        ts.dedup();
        for t in &ts {
            if t.from as usize >= states.len() || t.to as usize >= states.len() {
                return Err(Error::input(format!("component '{name}' has a transition between undeclared states")));
            }
            if t.content as usize >= contents.len() {
                return Err(Error::input(format!("component '{name}' uses an undeclared content")));
            }
            if t.channel.index() >= channels.len() {
                return Err(Error::input(format!("component '{name}' uses an undeclared channel")));
            }
            if !listen[t.from as usize].contains(t.channel) {
                return Err(Error::input(format!(
                    "state '{}' of '{name}' has a transition on channel '{}' but does not listen to it",
                    states[t.from as usize], channels[t.channel.index()]
                )));
            }
        }
        let mut moves: HashMap<(StateId, Channel), Vec<(ContentId, StateId)>> = HashMap::new();
        for t in &ts {
            moves.entry((t.from, t.channel)).or_default().push((t.content, t.to));
        }
        Ok(Cts {
            name,
            channels,
            contents,
            states,
            initial,
            listen,
            transitions: ts,
            moves,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn channels(&self) -> &[String] {
        &self.channels
    }

    pub fn contents(&self) -> &[String] {
        &self.contents
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn listen(&self, s: StateId) -> LetterSet {
        self.listen[s as usize]
    }

    pub fn transitions(&self) -> &[CtsTransition] {
        &self.transitions
    }

    /// `(content, target)` pairs leaving `s` on `c`.
    pub fn moves(&self, s: StateId, c: Channel) -> &[(ContentId, StateId)] {
        self.moves.get(&(s, c)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All successors of `s` on message `(content, c)`.
    pub fn step(&self, s: StateId, content: ContentId, c: Channel) -> BTreeSet<StateId> {
        self.moves(s, c)
            .iter()
            .filter(|(t, _)| *t == content)
            .map(|&(_, to)| to)
            .collect()
    }

    pub fn state_index(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(|i| i as StateId)
    }

    /// Re-checks the listening constraint on every transition.
    pub fn check_well_formed(&self) -> Result<()> {
        match self
            .transitions
            .iter()
            .find(|t| !self.listen[t.from as usize].contains(t.channel))
        {
            Some(t) => Err(Error::input(format!(
                "state '{}' of '{}' moves on '{}' without listening to it",
                self.states[t.from as usize], self.name, self.channels[t.channel.index()]
            ))),
            None => Ok(()),
        }
    }

    /// Copy without one transition.
    pub fn without_transition(&self, t: &CtsTransition) -> Result<Cts> {
        Cts::new(
            self.name.clone(),
            self.channels.clone(),
            self.contents.clone(),
            self.states.clone(),
            self.initial,
            self.listen.clone(),
            self.transitions.iter().copied().filter(|x| x != t),
        )
    }

    /// True when each `(state, channel)` has at most one successor.
    pub fn is_deterministic(&self) -> bool {
        self.moves.values().all(|v| v.len() <= 1)
    }
}

impl TransitionSystem for Cts {
    type State = StateId;

    fn letter_names(&self) -> &[String] {
        &self.channels
    }

    fn initial_state(&self) -> StateId {
        self.initial
    }

    fn successors(&self, s: &StateId, c: Letter) -> Vec<StateId> {
        let mut v: Vec<StateId> = self.moves(*s, c).iter().map(|&(_, t)| t).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Parallel composition of one component per process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComposedCts {
    processes: Vec<String>,
    components: Vec<Cts>,
}

/// Builds the parallel composition. All components must share the channel
/// and content sets; component names become process names.
pub fn compose(components: Vec<Cts>) -> Result<ComposedCts> {
    let first = components
        .first()
        .ok_or_else(|| Error::input("cannot compose an empty list of components"))?;
    for c in &components[1..] {
        if c.channels != first.channels {
            return Err(Error::input(format!(
                "component '{}' has a different channel set from '{}'",
                c.name, first.name
            )));
        }
        if c.contents != first.contents {
            return Err(Error::input(format!(
                "component '{}' has a different content set from '{}'",
                c.name, first.name
            )));
        }
    }
    let processes: Vec<String> = components.iter().map(|c| c.name.clone()).collect();
    check_unique("component", &processes)?;
    Ok(ComposedCts {
        processes,
        components,
    })
}

impl ComposedCts {
    pub fn processes(&self) -> &[String] {
        &self.processes
    }

    pub fn components(&self) -> &[Cts] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Cts> {
        self.components
    }

    pub fn component(&self, p: usize) -> &Cts {
        &self.components[p]
    }

    pub fn channels(&self) -> &[String] {
        &self.components[0].channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels().len()
    }

    pub fn all_channels(&self) -> LetterSet {
        LetterSet::full(self.channel_count())
    }

    pub fn contents(&self) -> &[String] {
        &self.components[0].contents
    }

    pub fn channel_by_name(&self, name: &str) -> Option<Channel> {
        self.channels()
            .iter()
            .position(|c| c == name)
            .map(|i| Letter(i as u16))
    }

    pub fn process_by_name(&self, name: &str) -> Option<usize> {
        self.processes.iter().position(|p| p == name)
    }

    pub fn initial_config(&self) -> GlobalConfig {
        GlobalConfig(self.components.iter().map(|c| c.initial).collect())
    }

    /// Union of the components' listening sets.
    pub fn listen(&self, g: &GlobalConfig) -> LetterSet {
        self.components
            .iter()
            .zip(&g.0)
            .fold(LetterSet::empty(), |acc, (c, &s)| acc.union(c.listen(s)))
    }

    /// Every `(content, successor)` for a message on `c` from `g`: some
    /// component listens, every listener moves on the same content, every
    /// non-listener stays put.
    pub fn successors_on(&self, g: &GlobalConfig, c: Channel) -> Vec<(ContentId, GlobalConfig)> {
        let listeners: Vec<usize> = (0..self.components.len())
            .filter(|&p| self.components[p].listen(g.0[p]).contains(c))
            .collect();
        if listeners.is_empty() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for t in 0..self.contents().len() as ContentId {
            let mut partial = vec![g.clone()];
            for &p in &listeners {
                let targets: Vec<StateId> = self.components[p]
                    .moves(g.0[p], c)
                    .iter()
                    .filter(|(ct, _)| *ct == t)
                    .map(|&(_, to)| to)
                    .collect();
                if targets.is_empty() {
                    partial.clear();
                    break;
                }
                partial = partial
                    .into_iter()
                    .flat_map(|cfg| {
                        targets.iter().map(move |&to| {
                            let mut cfg = cfg.clone();
                            cfg.0[p] = to;
                            cfg
                        })
                    })
                    .collect();
            }
            out.extend(partial.into_iter().map(|cfg| (t, cfg)));
        }
        out.sort();
        out.dedup();
        out
    }

    /// Channels on which some message can be exchanged at `g`.
    pub fn enabled_channels(&self, g: &GlobalConfig) -> LetterSet {
        (0..self.channel_count())
            .map(|i| Letter(i as u16))
            .filter(|&c| !self.successors_on(g, c).is_empty())
            .collect()
    }

    /// The unique successor on `c`, `None` if `c` is blocked, an error if
    /// several successors exist.
    pub fn step_deterministic(&self, g: &GlobalConfig, c: Channel) -> Result<Option<GlobalConfig>> {
        let succ: BTreeSet<GlobalConfig> = self.successors_on(g, c).into_iter().map(|(_, s)| s).collect();
        match succ.len() {
            0 => Ok(None),
            1 => Ok(succ.into_iter().next()),
            n => Err(Error::Nondeterminism(format!(
                "{n} successors on channel '{}'",
                self.channels()[c.index()]
            ))),
        }
    }

    pub fn format_config(&self, g: &GlobalConfig) -> String {
        let parts: Vec<&str> = self
            .components
            .iter()
            .zip(&g.0)
            .map(|(c, &s)| c.states[s as usize].as_str())
            .collect();
        format!("[{}]", parts.join(" | "))
    }

    pub fn format_channels(&self, set: LetterSet) -> String {
        let names: Vec<&str> = set.iter().map(|c| self.channels()[c.index()].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn check_well_formed(&self) -> Result<()> {
        self.components.iter().try_for_each(Cts::check_well_formed)
    }

    /// Copy with component `p` replaced.
    pub fn with_component(&self, p: usize, c: Cts) -> Result<ComposedCts> {
        let mut comps = self.components.clone();
        comps[p] = c;
        compose(comps)
    }

    /// True when every content set is a singleton.
    pub fn has_singleton_content(&self) -> bool {
        self.contents().len() == 1
    }
}

impl TransitionSystem for ComposedCts {
    type State = GlobalConfig;

    fn letter_names(&self) -> &[String] {
        self.channels()
    }

    fn initial_state(&self) -> GlobalConfig {
        self.initial_config()
    }

    fn successors(&self, g: &GlobalConfig, c: Letter) -> Vec<GlobalConfig> {
        let mut v: Vec<GlobalConfig> = self.successors_on(g, c).into_iter().map(|(_, s)| s).collect();
        v.sort();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chans(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    fn tr(from: StateId, content: ContentId, c: u16, to: StateId) -> CtsTransition {
        CtsTransition {
            from,
            content,
            channel: Letter(c),
            to,
        }
    }

    fn single(name: &str, listen: LetterSet, ts: Vec<CtsTransition>, states: usize) -> Cts {
        Cts::new(
            name,
            chans(2),
            vec!["t".into()],
            (0..states).map(|i| format!("s{i}")).collect(),
            0,
            vec![listen; states],
            ts,
        )
        .unwrap()
    }

    #[test]
    fn step_is_a_relation() {
        let c = single("p", LetterSet::singleton(Letter(0)), vec![tr(0, 0, 0, 1), tr(0, 0, 0, 2)], 3);
        assert_eq!(c.step(0, 0, Letter(0)), BTreeSet::from([1, 2]));
        assert!(c.step(0, 0, Letter(1)).is_empty());
        let loop_ = single("p", LetterSet::singleton(Letter(0)), vec![tr(0, 0, 0, 0)], 1);
        assert_eq!(loop_.step(0, 0, Letter(0)), BTreeSet::from([0]));
    }

    #[test]
    fn transition_without_listening_rejected() {
        let r = Cts::new(
            "p",
            chans(2),
            vec!["t".into()],
            vec!["s".into()],
            0,
            vec![LetterSet::empty()],
            [tr(0, 0, 0, 0)],
        );
        assert!(r.is_err());
    }

    #[test]
    fn composition_conditions() {
        let l0 = LetterSet::singleton(Letter(0));
        let a = single("p1", l0, vec![tr(0, 0, 0, 0)], 1);
        let b = single("p2", l0, vec![tr(0, 0, 0, 0)], 1);
        let sys = compose(vec![a.clone(), b]).unwrap();
        let g = sys.initial_config();
        assert_eq!(sys.successors(&g, Letter(0)), vec![g.clone()]);
        // Nobody listens to channel 2.
        assert!(sys.successors(&g, Letter(1)).is_empty());
        assert_eq!(sys.enabled_channels(&g), l0);

        // p2 listens to channel 1 but has no move: veto.
        let mute = single("p2", l0, vec![], 1);
        let sys = compose(vec![a, mute]).unwrap();
        assert!(sys.enabled_channels(&sys.initial_config()).is_empty());
    }

    #[test]
    fn non_listeners_stay_put() {
        let a = single("p1", LetterSet::singleton(Letter(0)), vec![tr(0, 0, 0, 1), tr(1, 0, 0, 0)], 2);
        let b = single("p2", LetterSet::singleton(Letter(1)), vec![tr(0, 0, 1, 1), tr(1, 0, 1, 0)], 2);
        let sys = compose(vec![a, b]).unwrap();
        let g = sys.initial_config();
        assert_eq!(sys.successors(&g, Letter(0)), vec![GlobalConfig(vec![1, 0])]);
    }

    #[test]
    fn content_must_agree() {
        let contents = vec!["x".to_string(), "y".to_string()];
        let l0 = vec![LetterSet::singleton(Letter(0))];
        let mk = |name: &str, t: ContentId| {
            Cts::new(name, chans(1), contents.clone(), vec!["s".into()], 0, l0.clone(), [tr(0, t, 0, 0)]).unwrap()
        };
        let sys = compose(vec![mk("p1", 0), mk("p2", 1)]).unwrap();
        assert!(sys.enabled_channels(&sys.initial_config()).is_empty());
        let sys = compose(vec![mk("p1", 1), mk("p2", 1)]).unwrap();
        assert_eq!(sys.successors_on(&sys.initial_config(), Letter(0)).len(), 1);
    }

    #[test]
    fn mismatched_channels_rejected() {
        let a = single("p1", LetterSet::empty(), vec![], 1);
        let b = Cts::new("p2", chans(3), vec!["t".into()], vec!["s".into()], 0, vec![LetterSet::empty()], []).unwrap();
        assert!(compose(vec![a, b]).is_err());
        assert!(compose(vec![]).is_err());
    }
}
