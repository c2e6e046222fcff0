// SPDX-License-Identifier: Apache-2.0

//! Process classification (fully-listening / trivializable), bounded
//! language equivalence and the continuation driver used against the
//! single-switching reference systems.
//!
//! A process is trivializable when, from every reachable configuration,
//! some run takes it into a bottom strongly connected component of its
//! local behaviour in which every letter it takes part in stays available.
//! Local behaviour means the moves the process actually makes in the
//! reachable global graph, so blocking caused by partners is accounted for.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::alphabet::{Letter, LetterSet, ProcessId};
use crate::automata::{AsyncAutomaton, GlobalConfig};
use crate::document::Document;
use crate::error::{Error, Result};
use crate::explore::{language_levels, reachable, ReachableGraph, TransitionSystem, Limits};
use crate::graph::{component_index, strongly_connected_components};
use crate::switching::SingleSwitching;

/// How many sample path witnesses a trivializable verdict carries.
const WITNESS_SAMPLES: usize = 4;

/// Attached to every report: these verdicts concern one machine only.
pub const ANALYSIS_SCOPE: &str = "verdicts describe this automaton only; they do not decide \
whether some other automaton for the same language escapes the dichotomy";

pub fn fully_listening<A: AsyncAutomaton + ?Sized>(a: &A, p: ProcessId) -> bool {
    a.is_fully_listening(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    FullyListening,
    Trivializable,
    NeitherDetected,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::FullyListening => "fully-listening",
            Verdict::Trivializable => "trivializable",
            Verdict::NeitherDetected => "neither-detected",
        }
    }
}

/// A reachable configuration and a run from it into a complete bottom SCC.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathWitness {
    pub config: String,
    /// Shortest word reaching `config` from the initial configuration.
    pub access: Vec<String>,
    /// Continuation after which the process sits in `scc`.
    pub continuation: Vec<String>,
    pub local_state: String,
    pub scc: Vec<String>,
}

/// A reachable configuration from which no complete bottom SCC is reachable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StuckWitness {
    pub config: String,
    pub access: Vec<String>,
    pub local_state: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessReport {
    pub process: String,
    pub verdict: Verdict,
    /// Letters the process takes part in.
    pub listens: Vec<String>,
    /// Complete bottom SCCs of the local behaviour (empty when fully-listening).
    pub complete_bottom_sccs: Vec<Vec<String>>,
    pub witnesses: Vec<PathWitness>,
    pub stuck: Option<StuckWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub reachable_configs: usize,
    pub processes: Vec<ProcessReport>,
    pub scope: String,
}

impl AnalysisReport {
    pub fn all_classified(&self) -> bool {
        self.processes.iter().all(|p| p.verdict != Verdict::NeitherDetected)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("reachable configurations: {}\n", self.reachable_configs);
        for p in &self.processes {
            out.push_str(&format!("{}: {}\n", p.process, p.verdict.as_str()));
            for scc in &p.complete_bottom_sccs {
                out.push_str(&format!("  complete bottom SCC {{{}}}\n", scc.join(", ")));
            }
            for w in &p.witnesses {
                out.push_str(&format!(
                    "  from {} (after {}) via {} into {}\n",
                    w.config,
                    join_word(&w.access),
                    join_word(&w.continuation),
                    w.local_state
                ));
            }
            if let Some(s) = &p.stuck {
                out.push_str(&format!(
                    "  stuck at {} (after {}), local state {}\n",
                    s.config,
                    join_word(&s.access),
                    s.local_state
                ));
            }
        }
        out.push_str(&format!("note: {}\n", self.scope));
        out
    }
}

pub fn join_word(w: &[String]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        w.join(" ")
    }
}

fn names_of<M: TransitionSystem + ?Sized>(m: &M, w: &[Letter]) -> Vec<String> {
    let names = m.letter_names();
    w.iter().map(|a| names[a.index()].clone()).collect()
}

/// Classifies every process of `a` (or only those in `only`).
pub fn analyze<A: AsyncAutomaton>(a: &A, only: Option<&[ProcessId]>, limits: Limits) -> Result<AnalysisReport> {
    let al = a.alphabet();
    let targets: Vec<ProcessId> = match only {
        Some(ps) => {
            for &p in ps {
                al.check_process(p)?;
            }
            ps.to_vec()
        }
        None => al.processes().collect(),
    };
    let graph = reachable(a, limits)?;
    let processes = targets.iter().map(|&p| classify(a, &graph, p)).collect();
    Ok(AnalysisReport {
        reachable_configs: graph.len(),
        processes,
        scope: ANALYSIS_SCOPE.to_string(),
    })
}

/// Whether `p` is trivializable, with the per-process report.
pub fn trivializable<A: AsyncAutomaton>(a: &A, p: ProcessId, limits: Limits) -> Result<(bool, ProcessReport)> {
    a.alphabet().check_process(p)?;
    let graph = reachable(a, limits)?;
    let report = trivializable_in(a, &graph, p);
    Ok((report.verdict == Verdict::Trivializable, report))
}

fn classify<A: AsyncAutomaton>(a: &A, graph: &ReachableGraph<GlobalConfig>, p: ProcessId) -> ProcessReport {
    if a.is_fully_listening(p) {
        let al = a.alphabet();
        return ProcessReport {
            process: al.process_name(p).to_string(),
            verdict: Verdict::FullyListening,
            listens: al.dom_inv(p).iter().map(|l| al.letter_name(l).to_string()).collect(),
            complete_bottom_sccs: Vec::new(),
            witnesses: Vec::new(),
            stuck: None,
        };
    }
    trivializable_in(a, graph, p)
}

fn trivializable_in<A: AsyncAutomaton>(a: &A, graph: &ReachableGraph<GlobalConfig>, p: ProcessId) -> ProcessReport {
    let al = a.alphabet();
    let listens = al.dom_inv(p);
    let local_names = &a.local_states(p).names;
    let n_local = local_names.len();

    // Local behaviour of p: s -a-> t whenever some reachable configuration
    // with p in s fires a ∈ dom⁻¹(p) and leaves p in t.
    let mut moves: Vec<BTreeSet<(Letter, usize)>> = vec![BTreeSet::new(); n_local];
    let mut present = vec![false; n_local];
    for (i, g) in graph.states.iter().enumerate() {
        let s = g.get(p) as usize;
        present[s] = true;
        for &(l, j) in &graph.edges[i] {
            if listens.contains(l) {
                moves[s].insert((l, graph.states[j].get(p) as usize));
            }
        }
    }
    let succ: Vec<Vec<usize>> = moves
        .iter()
        .enumerate()
        .map(|(s, m)| if present[s] { m.iter().map(|&(_, t)| t).collect() } else { Vec::new() })
        .collect();
    let sccs = strongly_connected_components(&succ);
    let comp = component_index(n_local, &sccs);
    let mut complete = vec![false; sccs.len()];
    for (ci, scc) in sccs.iter().enumerate() {
        if !present[scc[0]] {
            continue;
        }
        let bottom = scc.iter().all(|&s| succ[s].iter().all(|&t| comp[t] == ci));
        let total = scc.iter().all(|&s| {
            let offered: LetterSet = moves[s].iter().map(|&(l, _)| l).collect();
            offered == listens
        });
        complete[ci] = bottom && total;
    }

    // Backward search over the reachable graph from configurations whose
    // p-state lies in a complete bottom SCC. `next[i]` is the first step
    // of a shortest run from i into that target set.
    let n = graph.len();
    let mut preds: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); n];
    for (i, out) in graph.edges.iter().enumerate() {
        for &(l, j) in out {
            preds[j].push((l, i));
        }
    }
    let mut good = vec![false; n];
    let mut next: Vec<Option<(Letter, usize)>> = vec![None; n];
    let mut queue = VecDeque::new();
    for (i, g) in graph.states.iter().enumerate() {
        if complete[comp[g.get(p) as usize]] {
            good[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(j) = queue.pop_front() {
        for &(l, i) in &preds[j] {
            if !good[i] {
                good[i] = true;
                next[i] = Some((l, j));
                queue.push_back(i);
            }
        }
    }

    let letter_names = a.letter_names();
    let word_names = |w: &[Letter]| -> Vec<String> { w.iter().map(|l| letter_names[l.index()].clone()).collect() };
    let scc_names = |ci: usize| -> Vec<String> { sccs[ci].iter().map(|&s| local_names[s].clone()).collect() };

    let complete_bottom_sccs = (0..sccs.len()).filter(|&ci| complete[ci]).map(scc_names).collect();
    let stuck = (0..n).find(|&i| !good[i]).map(|i| StuckWitness {
        config: a.format_config(&graph.states[i]),
        access: word_names(&graph.path_to(i)),
        local_state: local_names[graph.states[i].get(p) as usize].clone(),
    });
    let witnesses = if stuck.is_some() {
        Vec::new()
    } else {
        let step = (n / WITNESS_SAMPLES).max(1);
        (0..n)
            .step_by(step)
            .take(WITNESS_SAMPLES)
            .map(|i| {
                let mut cont = Vec::new();
                let mut j = i;
                while let Some((l, k)) = next[j] {
                    cont.push(l);
                    j = k;
                }
                let s = graph.states[j].get(p) as usize;
                PathWitness {
                    config: a.format_config(&graph.states[i]),
                    access: word_names(&graph.path_to(i)),
                    continuation: word_names(&cont),
                    local_state: local_names[s].clone(),
                    scc: scc_names(comp[s]),
                }
            })
            .collect()
    };
    ProcessReport {
        process: al.process_name(p).to_string(),
        verdict: if stuck.is_none() {
            Verdict::Trivializable
        } else {
            Verdict::NeitherDetected
        },
        listens: listens.iter().map(|l| al.letter_name(l).to_string()).collect(),
        complete_bottom_sccs,
        witnesses,
        stuck,
    }
}

/// Bounded language split by length, with letters replaced by their names.
pub fn named_language<M: TransitionSystem>(m: &M, k: usize, limits: Limits) -> Result<Vec<BTreeSet<Vec<String>>>> {
    Ok(language_levels(m, k, limits)?
        .into_iter()
        .map(|level| level.iter().map(|w| names_of(m, w)).collect())
        .collect())
}

/// [`named_language`] of any runnable document.
pub fn document_language(doc: &Document, k: usize, limits: Limits) -> Result<Vec<BTreeSet<Vec<String>>>> {
    match doc {
        Document::GlobalAa(m) => named_language(m, k, limits),
        Document::LocalAa(m) => named_language(m, k, limits),
        Document::Cts(m) => named_language(m, k, limits),
        Document::CtsSystem(m) => named_language(m, k, limits),
        other => Err(Error::input(format!("a '{}' document has no language", other.kind()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Equivalence {
    Equal,
    Differs {
        /// Shortest, then lexicographically least, word in exactly one language.
        word: Vec<String>,
        /// Whether the first machine accepts `word`.
        in_first: bool,
    },
}

impl Equivalence {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equivalence::Equal)
    }
}

/// Compares bounded languages by letter name. A letter one machine does not
/// declare simply never occurs in its language.
pub fn equiv_upto<X: TransitionSystem, Y: TransitionSystem>(x: &X, y: &Y, k: usize, limits: Limits) -> Result<Equivalence> {
    let lx = named_language(x, k, limits)?;
    let ly = named_language(y, k, limits)?;
    Ok(compare_levels(&lx, &ly))
}

pub fn compare_levels(lx: &[BTreeSet<Vec<String>>], ly: &[BTreeSet<Vec<String>>]) -> Equivalence {
    let empty = BTreeSet::new();
    for len in 0..lx.len().max(ly.len()) {
        let a = lx.get(len).unwrap_or(&empty);
        let b = ly.get(len).unwrap_or(&empty);
        if let Some(w) = a.symmetric_difference(b).next() {
            return Equivalence::Differs {
                word: w.clone(),
                in_first: a.contains(w),
            };
        }
    }
    Equivalence::Equal
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessOptions {
    /// Longest extension `w''` checked after `w·w'`.
    pub ext_len: usize,
    /// Bound of the language-equality precondition; `None` skips it.
    pub equiv_len: Option<usize>,
}

impl Default for WitnessOptions {
    fn default() -> Self {
        WitnessOptions {
            ext_len: 4,
            equiv_len: Some(5),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessStatus {
    Success,
    PreconditionFailed,
    ExtensionBlocked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub process: String,
    pub status: WitnessStatus,
    pub message: String,
    pub word: Vec<String>,
    /// Channel outside the process's letters that was made switching.
    pub chosen_channel: Option<String>,
    /// Switching communications appended to `word`.
    pub continuation: Vec<String>,
    /// `w·w'·w''` that the automaton refuses.
    pub blocked_word: Option<Vec<String>>,
    /// Word separating the automaton from the reference system.
    pub distinguishing_word: Option<Vec<String>>,
    pub extensions_checked: usize,
    pub reference_extensions_checked: usize,
}

impl WitnessReport {
    fn new(process: &str, w: &[String]) -> Self {
        WitnessReport {
            process: process.to_string(),
            status: WitnessStatus::Success,
            message: String::new(),
            word: w.to_vec(),
            chosen_channel: None,
            continuation: Vec::new(),
            blocked_word: None,
            distinguishing_word: None,
            extensions_checked: 0,
            reference_extensions_checked: 0,
        }
    }

    fn fail(mut self, status: WitnessStatus, message: impl Into<String>) -> Self {
        self.status = status;
        self.message = message.into();
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{}: {}\n",
            self.process,
            match self.status {
                WitnessStatus::Success => "success",
                WitnessStatus::PreconditionFailed => "precondition failed",
                WitnessStatus::ExtensionBlocked => "extension blocked",
            }
        );
        if !self.message.is_empty() {
            out.push_str(&format!("  {}\n", self.message));
        }
        out.push_str(&format!("  w = {}\n", join_word(&self.word)));
        if let Some(c) = &self.chosen_channel {
            out.push_str(&format!("  channel {c}, w' = {}\n", join_word(&self.continuation)));
        }
        out.push_str(&format!(
            "  extensions checked: {} in the automaton, {} in the reference\n",
            self.extensions_checked, self.reference_extensions_checked
        ));
        if let Some(b) = &self.blocked_word {
            out.push_str(&format!("  blocked: {}\n", join_word(b)));
        }
        if let Some(d) = &self.distinguishing_word {
            out.push_str(&format!("  distinguishing word: {}\n", join_word(d)));
        }
        out
    }
}

fn to_letters(names: &[String], w: &[String]) -> Option<Vec<Letter>> {
    w.iter()
        .map(|x| names.iter().position(|n| n == x).map(|i| Letter(i as u16)))
        .collect()
}

/// Runs the continuation argument for process `p` of `b` against the
/// single-switching system `reference`: make a channel `p` never hears the
/// switching channel with empty dependent set, then check that every word
/// over `p`'s letters stays runnable in `b`.
pub fn lemma_witness_drive<A: AsyncAutomaton>(
    b: &A,
    p: ProcessId,
    reference: &SingleSwitching,
    w: &[String],
    opts: WitnessOptions,
    limits: Limits,
) -> Result<WitnessReport> {
    let al = b.alphabet();
    al.check_process(p)?;
    let report = WitnessReport::new(al.process_name(p), w);
    let sys = reference.system();
    let b_names = b.letter_names();
    let r_names = sys.channels();

    if b.is_fully_listening(p) {
        return Ok(report.fail(WitnessStatus::PreconditionFailed, "process is fully-listening"));
    }
    if let Some(k) = opts.equiv_len {
        if let Equivalence::Differs { word, in_first } = equiv_upto(b, sys, k, limits)? {
            let mut r = report.fail(
                WitnessStatus::PreconditionFailed,
                format!(
                    "languages differ up to length {k}: {} is accepted only by the {}",
                    join_word(&word),
                    if in_first { "automaton" } else { "reference" }
                ),
            );
            r.distinguishing_word = Some(word);
            return Ok(r);
        }
    }
    let (Some(wb), Some(wr)) = (to_letters(b_names, w), to_letters(r_names, w)) else {
        return Ok(report.fail(WitnessStatus::PreconditionFailed, "word uses an unknown letter"));
    };
    let Ok(mut gb) = b.run(&wb)? else {
        return Ok(report.fail(WitnessStatus::PreconditionFailed, "word is refused by the automaton"));
    };
    let mut gr = sys.initial_config();
    for &c in &wr {
        match sys.step_deterministic(&gr, c)? {
            Some(next) => gr = next,
            None => {
                return Ok(report.fail(WitnessStatus::PreconditionFailed, "word is refused by the reference"));
            }
        }
    }

    // A channel p does not hear, which the reference also has.
    let silent = al.all_letters().difference(al.dom_inv(p));
    let Some((chosen_b, chosen_r)) = silent
        .iter()
        .find_map(|l| r_names.iter().position(|n| *n == b_names[l.index()]).map(|i| (l, Letter(i as u16))))
    else {
        return Ok(report.fail(
            WitnessStatus::PreconditionFailed,
            "every letter the process ignores is missing from the reference",
        ));
    };
    let mut report = report;
    report.chosen_channel = Some(b_names[chosen_b.index()].clone());

    // Drive the reference until the chosen channel switches with D = ∅.
    let n = sys.processes().len();
    let max_steps = (n + 1) * ((1usize << n.min(20)) + 1);
    let mut cont = Vec::new();
    loop {
        let v = reference.view(&gr)?;
        if v.sc == chosen_r && v.dep.is_empty() {
            break;
        }
        if cont.len() > max_steps {
            return Err(Error::input("reference never makes the chosen channel switching"));
        }
        gr = reference.switch(&gr)?;
        cont.push(v.sc);
    }
    report.continuation = cont.iter().map(|c| r_names[c.index()].clone()).collect();

    // In the reference, no word avoiding the chosen channel changes sc or D.
    let target = reference.view(&gr)?;
    let others: Vec<Letter> = sys.all_channels().without(chosen_r).iter().collect();
    let mut stack = vec![(gr.clone(), 0usize)];
    while let Some((g, depth)) = stack.pop() {
        report.reference_extensions_checked += 1;
        let v = reference.view(&g)?;
        if (v.sc, v.dep) != (target.sc, target.dep) {
            return Err(Error::input("reference left the driven switching state on an unrelated channel"));
        }
        if depth == opts.ext_len {
            continue;
        }
        for &c in &others {
            match sys.step_deterministic(&g, c)? {
                Some(next) => stack.push((next, depth + 1)),
                None => {
                    return Err(Error::input(format!(
                        "reference refuses channel {} after the continuation",
                        r_names[c.index()]
                    )))
                }
            }
        }
    }

    // Replay w' in b, then every extension over p's letters.
    let Some(cont_b) = to_letters(b_names, &report.continuation) else {
        return Ok(report.fail(WitnessStatus::PreconditionFailed, "continuation uses a letter the automaton lacks"));
    };
    let mut prefix: Vec<String> = w.to_vec();
    for &l in &cont_b {
        prefix.push(b_names[l.index()].clone());
        match b.step_unchecked(&gb, l) {
            Some(next) => gb = next,
            None => {
                report.blocked_word = Some(prefix);
                return Ok(report.fail(WitnessStatus::ExtensionBlocked, "the automaton refuses the continuation"));
            }
        }
    }
    let letters: Vec<Letter> = al.dom_inv(p).iter().collect();
    let mut level: Vec<(GlobalConfig, Vec<Letter>)> = vec![(gb, Vec::new())];
    report.extensions_checked = 1;
    for _ in 0..opts.ext_len {
        let mut next_level = Vec::new();
        for (g, ext) in &level {
            for &l in &letters {
                let mut e = ext.clone();
                e.push(l);
                match b.step_unchecked(g, l) {
                    Some(g2) => {
                        report.extensions_checked += 1;
                        if report.extensions_checked > limits.max_states {
                            return Err(Error::resource("witness extensions", limits.max_states));
                        }
                        next_level.push((g2, e));
                    }
                    None => {
                        let mut blocked = prefix.clone();
                        blocked.extend(names_of(b, &e));
                        report.blocked_word = Some(blocked);
                        return Ok(report.fail(
                            WitnessStatus::ExtensionBlocked,
                            "the automaton refuses an extension over the process's letters",
                        ));
                    }
                }
            }
        }
        level = next_level;
    }
    report.message = format!(
        "every word of length at most {} over the process's letters stays runnable",
        opts.ext_len
    );
    Ok(report)
}
