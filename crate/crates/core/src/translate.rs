// SPDX-License-Identifier: Apache-2.0

//! Language-preserving translations between asynchronous automata and
//! composed channeled transition systems.
//!
//! Automaton to CTS: every process listens to its letters forever and the
//! message content carries the joint state of the letter's domain (or
//! nothing, for local automata). CTS to automaton: every process takes part
//! in every letter and stutters on channels it does not listen to, or a
//! single executor simulates the whole composition while everybody else
//! accepts whatever it hears.

use std::collections::{BTreeMap, HashMap};

use crate::alphabet::{DistributedAlphabet, Letter, LetterSet, ProcessId};
use crate::automata::{AsyncAutomaton, GlobalAA, GlobalConfig, LocalAA, LocalStates, StateId};
use crate::cts::{ComposedCts, ContentId, Cts, CtsTransition};
use crate::error::{Error, Result};
use crate::explore::{reachable, Limits};

/// Name of the only message content of content-free machines.
pub const SINGLETON_CONTENT: &str = "t";

/// Name of the only local state of a non-executor process.
pub const IDLE_STATE: &str = "idle";

/// How [`cts_to_aa`] treats a channel with several possible successors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NondeterminismPolicy {
    /// Fail with a diagnostic naming the configuration and channel.
    #[default]
    Reject,
    /// Keep the smallest `(content, successor)` choice. Not language
    /// preserving in general.
    LexMin,
}

/// Which process simulates the composition, and what the others listen to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutorChoice {
    pub executor: ProcessId,
    /// Listening sets of non-executors; missing entries mean "nothing".
    pub listen_sets: BTreeMap<ProcessId, LetterSet>,
}

impl ExecutorChoice {
    pub fn new(executor: ProcessId) -> Self {
        ExecutorChoice {
            executor,
            listen_sets: BTreeMap::new(),
        }
    }

    pub fn with_listen_set(mut self, p: ProcessId, set: LetterSet) -> Self {
        self.listen_sets.insert(p, set);
        self
    }
}

fn content_label(aa: &GlobalAA, a: Letter, tuple: &[StateId]) -> String {
    let al = aa.alphabet();
    let parts: Vec<String> = al
        .dom(a)
        .iter()
        .zip(tuple)
        .map(|(&p, &s)| format!("{}:{}", al.process_name(p), aa.local_states(p).names[s as usize]))
        .collect();
    format!("({})", parts.join(","))
}

/// One component per process; contents are the joint domain states that
/// the letter's transition reads.
pub fn aa_to_cts(aa: &GlobalAA) -> Result<Vec<Cts>> {
    let al = aa.alphabet();
    let mut contents: Vec<String> = Vec::new();
    let mut content_ids: HashMap<String, ContentId> = HashMap::new();
    let mut per_process: Vec<Vec<CtsTransition>> = vec![Vec::new(); al.process_count()];
    for a in al.letters() {
        for (from, to) in aa.transitions(a) {
            let label = content_label(aa, a, from);
            let t = *content_ids.entry(label.clone()).or_insert_with(|| {
                contents.push(label);
                (contents.len() - 1) as ContentId
            });
            for (i, &p) in al.dom(a).iter().enumerate() {
                per_process[p.index()].push(CtsTransition {
                    from: from[i],
                    content: t,
                    channel: a,
                    to: to[i],
                });
            }
        }
    }
    if contents.is_empty() {
        contents.push(SINGLETON_CONTENT.to_string());
    }
    build_components(al, aa.locals(), contents, per_process)
}

/// As [`aa_to_cts`] for local automata, with a single message content.
pub fn laa_to_cts(laa: &LocalAA) -> Result<Vec<Cts>> {
    let al = laa.alphabet();
    let per_process = al
        .processes()
        .map(|p| {
            laa.local_transitions(p)
                .map(|(s, a, t)| CtsTransition {
                    from: s,
                    content: 0,
                    channel: a,
                    to: t,
                })
                .collect()
        })
        .collect();
    build_components(al, laa.locals(), vec![SINGLETON_CONTENT.to_string()], per_process)
}

fn build_components(
    al: &DistributedAlphabet,
    locals: &[LocalStates],
    contents: Vec<String>,
    per_process: Vec<Vec<CtsTransition>>,
) -> Result<Vec<Cts>> {
    al.processes()
        .zip(per_process)
        .map(|(p, ts)| {
            let ls = &locals[p.index()];
            Cts::new(
                al.process_name(p),
                al.letter_names().to_vec(),
                contents.clone(),
                ls.names.clone(),
                ls.initial,
                vec![al.dom_inv(p); ls.len()],
                ts,
            )
        })
        .collect()
}

fn pick_successor(
    sys: &ComposedCts,
    g: &GlobalConfig,
    c: Letter,
    policy: NondeterminismPolicy,
) -> Result<Option<GlobalConfig>> {
    let succ = sys.successors_on(g, c);
    let Some((_, first)) = succ.first() else {
        return Ok(None);
    };
    if succ.iter().all(|(_, s)| s == first) || policy == NondeterminismPolicy::LexMin {
        return Ok(Some(first.clone()));
    }
    Err(Error::Nondeterminism(format!(
        "configuration {} has {} distinct successors on channel '{}'; pass the lex-min policy to select one",
        sys.format_config(g),
        succ.len(),
        sys.channels()[c.index()]
    )))
}

/// Automaton over the channels with the complete domain function: every
/// process sees every letter, listeners move, the others stutter.
///
/// Transitions are tabulated over the configurations reachable in the
/// composition, which determines the language.
pub fn cts_to_aa(sys: &ComposedCts, policy: NondeterminismPolicy, limits: Limits) -> Result<GlobalAA> {
    let al = DistributedAlphabet::complete(sys.processes().to_vec(), sys.channels().to_vec())?;
    let graph = reachable(sys, limits)?;
    let mut transitions = Vec::new();
    for g in &graph.states {
        for c in al.letters() {
            if let Some(next) = pick_successor(sys, g, c, policy)? {
                transitions.push((c, g.0.clone(), next.0));
            }
        }
    }
    GlobalAA::new(al, component_locals(sys), transitions)
}

fn component_locals(sys: &ComposedCts) -> Vec<LocalStates> {
    sys.components()
        .iter()
        .map(|c| LocalStates::new(c.states().to_vec(), c.initial()))
        .collect()
}

/// Local automaton with the complete domain function for single-content,
/// deterministic components. A listener without a move refuses the letter;
/// a non-listener stutters.
///
/// Fails when some reachable configuration has a channel nobody listens
/// to: the composition refuses it there while every local process would
/// stutter through it.
pub fn cts_to_laa(sys: &ComposedCts, limits: Limits) -> Result<LocalAA> {
    if !sys.has_singleton_content() {
        return Err(Error::input(format!(
            "a local automaton needs a single message content, the system declares {}",
            sys.contents().len()
        )));
    }
    let al = DistributedAlphabet::complete(sys.processes().to_vec(), sys.channels().to_vec())?;
    let mut transitions = Vec::new();
    for (p, comp) in sys.components().iter().enumerate() {
        let pid = ProcessId(p as u16);
        for s in 0..comp.state_count() as StateId {
            for c in al.letters() {
                if !comp.listen(s).contains(c) {
                    transitions.push((pid, s, c, s));
                    continue;
                }
                match comp.moves(s, c) {
                    [] => {}
                    [(_, t)] => transitions.push((pid, s, c, *t)),
                    _ => {
                        return Err(Error::Nondeterminism(format!(
                            "state '{}' of '{}' has several moves on channel '{}'",
                            comp.states()[s as usize],
                            comp.name(),
                            sys.channels()[c.index()]
                        )))
                    }
                }
            }
        }
    }
    let graph = reachable(sys, limits)?;
    let all = sys.all_channels();
    for g in &graph.states {
        let unheard = all.difference(sys.listen(g));
        if let Some(c) = unheard.min() {
            return Err(Error::input(format!(
                "channel '{}' has no listener at reachable configuration {}",
                sys.channels()[c.index()],
                sys.format_config(g)
            )));
        }
    }
    LocalAA::new(al, component_locals(sys), transitions)
}

/// Automaton in which `choice.executor` hears every channel and tracks the
/// whole composed configuration, while each other process has one state
/// and accepts every letter it listens to.
pub fn cts_to_aa_executor(
    sys: &ComposedCts,
    choice: &ExecutorChoice,
    policy: NondeterminismPolicy,
    limits: Limits,
) -> Result<GlobalAA> {
    let n = sys.processes().len();
    let exec = choice.executor;
    if exec.index() >= n {
        return Err(Error::input(format!("executor index {} out of range", exec.0)));
    }
    let all = sys.all_channels();
    for (p, set) in &choice.listen_sets {
        if p.index() >= n {
            return Err(Error::input(format!("listening set given for unknown process {}", p.0)));
        }
        if !set.is_subset(all) {
            return Err(Error::input("listening set names an undeclared channel"));
        }
    }
    let listen_of = |p: ProcessId| -> LetterSet {
        if p == exec {
            all
        } else {
            choice.listen_sets.get(&p).copied().unwrap_or_default()
        }
    };
    let letters = sys
        .channels()
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let c = Letter(i as u16);
            let dom = (0..n)
                .map(|p| ProcessId(p as u16))
                .filter(|&p| listen_of(p).contains(c))
                .collect();
            (name.clone(), dom)
        })
        .collect();
    let al = DistributedAlphabet::new(sys.processes().to_vec(), letters)?;

    let graph = reachable(sys, limits)?;
    let locals = (0..n)
        .map(|p| {
            if p == exec.index() {
                LocalStates::new(graph.states.iter().map(|g| sys.format_config(g)).collect(), 0)
            } else {
                LocalStates::new(vec![IDLE_STATE.to_string()], 0)
            }
        })
        .collect();
    let mut transitions = Vec::new();
    for (i, g) in graph.states.iter().enumerate() {
        for c in al.letters() {
            let Some(next) = pick_successor(sys, g, c, policy)? else {
                continue;
            };
            let j = graph.index[&next] as StateId;
            let dom = al.dom(c);
            let from = dom.iter().map(|&p| if p == exec { i as StateId } else { 0 }).collect();
            let to = dom.iter().map(|&p| if p == exec { j } else { 0 }).collect();
            transitions.push((c, from, to));
        }
    }
    GlobalAA::new(al, locals, transitions)
}
