// SPDX-License-Identifier: Apache-2.0

//! Seeded generators for automata, channeled systems and DFAs. Every
//! generator is a pure function of its seed.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Dfa, DistributedAlphabet, Letter, LetterSet, ProcessId};
use crate::automata::{GlobalAA, LocalAA, LocalStates, StateId};
use crate::cts::{compose, ComposedCts, Cts, CtsTransition};
use crate::error::Result;
use crate::translate::SINGLETON_CONTENT;

/// Size bounds for [`random_global_aa`] and [`random_local_aa`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AaShape {
    pub max_processes: usize,
    pub max_states: usize,
    pub max_letters: usize,
    /// Probability that a transition is defined.
    pub density: f64,
}

impl Default for AaShape {
    fn default() -> Self {
        AaShape {
            max_processes: 3,
            max_states: 3,
            max_letters: 4,
            density: 0.6,
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// A nonempty random subset of `0..n`, sorted.
fn nonempty_subset(r: &mut ChaCha8Rng, n: usize) -> Vec<u16> {
    loop {
        let v: Vec<u16> = (0..n as u16).filter(|_| r.gen_bool(0.5)).collect();
        if !v.is_empty() {
            return v;
        }
    }
}

fn random_frame(r: &mut ChaCha8Rng, shape: &AaShape) -> Result<(DistributedAlphabet, Vec<LocalStates>)> {
    let np = r.gen_range(1..=shape.max_processes);
    let nl = r.gen_range(1..=shape.max_letters);
    let letters = (0..nl)
        .map(|i| {
            let dom = nonempty_subset(r, np).into_iter().map(ProcessId).collect();
            (((b'a' + i as u8) as char).to_string(), dom)
        })
        .collect();
    let al = DistributedAlphabet::new(names("p", np), letters)?;
    let locals = (0..np)
        .map(|_| LocalStates::new(names("s", r.gen_range(1..=shape.max_states)), 0))
        .collect();
    Ok((al, locals))
}

/// Every tuple of local states over the given sizes.
fn tuples(sizes: &[usize]) -> Vec<Vec<StateId>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n as StateId).map(move |s| {
                    let mut t2 = t.clone();
                    t2.push(s);
                    t2
                })
            })
            .collect();
    }
    out
}

pub fn random_global_aa(seed: u64, shape: &AaShape) -> Result<GlobalAA> {
    let mut r = rng(seed);
    let (al, locals) = random_frame(&mut r, shape)?;
    let mut delta = Vec::new();
    for a in al.letters() {
        let sizes: Vec<usize> = al.dom(a).iter().map(|p| locals[p.index()].len()).collect();
        for from in tuples(&sizes) {
            if r.gen_bool(shape.density) {
                let to = sizes.iter().map(|&n| r.gen_range(0..n) as StateId).collect();
                delta.push((a, from, to));
            }
        }
    }
    GlobalAA::new(al, locals, delta)
}

pub fn random_local_aa(seed: u64, shape: &AaShape) -> Result<LocalAA> {
    let mut r = rng(seed);
    let (al, locals) = random_frame(&mut r, shape)?;
    let mut delta = Vec::new();
    for p in al.processes() {
        let n = locals[p.index()].len();
        for s in 0..n as StateId {
            for a in al.dom_inv(p).iter() {
                if r.gen_bool(shape.density) {
                    delta.push((p, s, a, r.gen_range(0..n) as StateId));
                }
            }
        }
    }
    LocalAA::new(al, locals, delta)
}

/// Size bounds for [`random_cts_system`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CtsShape {
    pub max_components: usize,
    pub max_channels: usize,
    pub max_states: usize,
    /// Probability that a listened channel has a transition.
    pub density: f64,
}

impl Default for CtsShape {
    fn default() -> Self {
        CtsShape {
            max_components: 3,
            max_channels: 4,
            max_states: 3,
            density: 0.75,
        }
    }
}

/// A composed system of deterministic singleton-content components.
pub fn random_cts_system(seed: u64, shape: &CtsShape) -> Result<ComposedCts> {
    let mut r = rng(seed);
    let nc = r.gen_range(1..=shape.max_components);
    let nch = r.gen_range(1..=shape.max_channels);
    let channels: Vec<String> = (1..=nch).map(|i| format!("c{i}")).collect();
    let mut components = Vec::with_capacity(nc);
    for k in 0..nc {
        let ns = r.gen_range(1..=shape.max_states);
        let listen: Vec<LetterSet> = (0..ns)
            .map(|_| (0..nch as u16).filter(|_| r.gen_bool(0.5)).map(Letter).collect())
            .collect();
        let mut transitions = Vec::new();
        for (s, set) in listen.iter().enumerate() {
            for c in set.iter() {
                if r.gen_bool(shape.density) {
                    transitions.push(CtsTransition {
                        from: s as StateId,
                        content: 0,
                        channel: c,
                        to: r.gen_range(0..ns) as StateId,
                    });
                }
            }
        }
        components.push(Cts::new(
            format!("p{}", k + 1),
            channels.clone(),
            vec![SINGLETON_CONTENT.to_string()],
            names("s", ns),
            0,
            listen,
            transitions,
        )?);
    }
    compose(components)
}

/// Letters of a component, its state count, delta and accepting states.
type ProductPart = (Vec<Letter>, usize, BTreeMap<(usize, Letter), usize>, Vec<bool>);

/// A deterministic automaton built as the product of components over
/// disjoint process groups. Letters of one component all share its first
/// process, so independence holds exactly across components and the
/// product commutes independent letters.
pub fn random_product_dfa(seed: u64) -> Result<Dfa> {
    let mut r = rng(seed);
    let ncomp = r.gen_range(2..=3);
    let mut processes = Vec::new();
    let mut letters = Vec::new();
    let mut comps: Vec<ProductPart> = Vec::new();
    for j in 0..ncomp {
        let base = processes.len() as u16;
        let np = r.gen_range(1..=2u16);
        for i in 0..np {
            processes.push(format!("q{j}_{i}"));
        }
        let nl = r.gen_range(1..=2);
        let mut own = Vec::new();
        for i in 0..nl {
            let mut dom = vec![ProcessId(base)];
            if np == 2 && r.gen_bool(0.5) {
                dom.push(ProcessId(base + 1));
            }
            own.push(Letter(letters.len() as u16));
            letters.push((format!("{}{i}", (b'a' + j as u8) as char), dom));
        }
        let ns = r.gen_range(1..=3);
        let mut delta = BTreeMap::new();
        for q in 0..ns {
            for &a in &own {
                if r.gen_bool(0.8) {
                    delta.insert((q, a), r.gen_range(0..ns));
                }
            }
        }
        let accepting = (0..ns).map(|_| r.gen_bool(0.6)).collect();
        comps.push((own, ns, delta, accepting));
    }
    let al = DistributedAlphabet::new(processes, letters)?;
    let sizes: Vec<usize> = comps.iter().map(|c| c.1).collect();
    let states = tuples(&sizes);
    let index: BTreeMap<Vec<StateId>, usize> = states.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let mut transitions = Vec::new();
    for (i, t) in states.iter().enumerate() {
        for (j, (own, _, delta, _)) in comps.iter().enumerate() {
            for &a in own {
                if let Some(&to) = delta.get(&(t[j] as usize, a)) {
                    let mut t2 = t.clone();
                    t2[j] = to as StateId;
                    transitions.push((i, a, index[&t2]));
                }
            }
        }
    }
    let accepting = states
        .iter()
        .enumerate()
        .filter(|(_, t)| t.iter().enumerate().all(|(j, &s)| comps[j].3[s as usize]))
        .map(|(i, _)| i);
    let labels = states
        .iter()
        .map(|t| t.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("."))
        .collect();
    Dfa::new(al, labels, 0, transitions, accepting)
}

/// A product automaton with random transitions redirected or removed until
/// two independent letters fail to commute somewhere.
pub fn random_diamond_violation(seed: u64) -> Result<Dfa> {
    let mut r = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut attempt = 0u64;
    loop {
        let base = random_product_dfa(seed.wrapping_add(attempt << 32))?;
        attempt += 1;
        let n = base.states().len();
        let letters: Vec<Letter> = base.alphabet().letters().collect();
        let mut delta: BTreeMap<(usize, Letter), usize> = base.transitions().map(|(q, a, t)| ((q, a), t)).collect();
        for _ in 0..16 {
            let q = r.gen_range(0..n);
            let a = *letters.choose(&mut r).expect("nonempty alphabet");
            if r.gen_bool(0.3) {
                delta.remove(&(q, a));
            } else {
                delta.insert((q, a), r.gen_range(0..n));
            }
            let dfa = Dfa::new(
                base.alphabet().clone(),
                base.states().to_vec(),
                base.initial(),
                delta.iter().map(|(&(q, a), &t)| (q, a, t)),
                base.accepting().iter().copied(),
            )?;
            if !dfa.is_i_diamond() {
                return Ok(dfa);
            }
        }
    }
}
