// SPDX-License-Identifier: Apache-2.0

//! Reference semantics written directly from the definitions, sharing no
//! code with the library beyond its data accessors. Languages are sets of
//! words spelled with letter names.

#![allow(dead_code)]

use std::collections::BTreeSet;

use aacts::analysis::named_language;
use aacts::{AsyncAutomaton, ComposedCts, GlobalAA, LocalAA, Limits, StateId, TransitionSystem};

pub type NamedWord = Vec<String>;
pub type Language = BTreeSet<NamedWord>;

pub fn lib_language<M: TransitionSystem>(m: &M, k: usize) -> Language {
    named_language(m, k, Limits::default())
        .expect("bounded language")
        .into_iter()
        .flatten()
        .collect()
}

/// Depth-first enumeration of every run of length at most `k`.
fn enumerate<S: Clone>(
    init: S,
    k: usize,
    letters: &[String],
    succ: &dyn Fn(&S, usize) -> Vec<S>,
) -> Language {
    fn go<S: Clone>(
        s: &S,
        k: usize,
        letters: &[String],
        succ: &dyn Fn(&S, usize) -> Vec<S>,
        word: &mut NamedWord,
        out: &mut Language,
    ) {
        out.insert(word.clone());
        if word.len() == k {
            return;
        }
        for (a, name) in letters.iter().enumerate() {
            for t in succ(s, a) {
                word.push(name.clone());
                go(&t, k, letters, succ, word, out);
                word.pop();
            }
        }
    }
    let mut out = Language::new();
    go(&init, k, letters, succ, &mut Vec::new(), &mut out);
    out
}

/// Global automaton: a letter reads and rewrites the coordinates of its
/// domain through the tabulated joint transition.
pub fn aa_oracle(aa: &GlobalAA, k: usize) -> Language {
    let al = aa.alphabet();
    let init: Vec<StateId> = aa.locals().iter().map(|l| l.initial).collect();
    let letters = al.letter_names().to_vec();
    let succ = |g: &Vec<StateId>, a: usize| -> Vec<Vec<StateId>> {
        let letter = al.letters().nth(a).unwrap();
        let dom = al.dom(letter);
        let key: Vec<StateId> = dom.iter().map(|p| g[p.0 as usize]).collect();
        match aa.transitions(letter).get(&key) {
            Some(to) => {
                let mut h = g.clone();
                for (p, &t) in dom.iter().zip(to) {
                    h[p.0 as usize] = t;
                }
                vec![h]
            }
            None => vec![],
        }
    };
    enumerate(init, k, &letters, &succ)
}

/// Local automaton: every process of the domain moves on its own.
pub fn laa_oracle(laa: &LocalAA, k: usize) -> Language {
    let al = laa.alphabet();
    let init: Vec<StateId> = laa.locals().iter().map(|l| l.initial).collect();
    let letters = al.letter_names().to_vec();
    let succ = |g: &Vec<StateId>, a: usize| -> Vec<Vec<StateId>> {
        let letter = al.letters().nth(a).unwrap();
        let mut h = g.clone();
        for &p in al.dom(letter) {
            match laa.local_step(p, g[p.0 as usize], letter) {
                Some(t) => h[p.0 as usize] = t,
                None => return vec![],
            }
        }
        vec![h]
    };
    enumerate(init, k, &letters, &succ)
}

/// Moves of component `i` from `s` on `(content, channel)`, read off the raw
/// transition list.
fn raw_moves(sys: &ComposedCts, i: usize, s: StateId, content: u32, channel: usize) -> Vec<StateId> {
    sys.component(i)
        .transitions()
        .iter()
        .filter(|t| t.from == s && t.content == content && t.channel.index() == channel)
        .map(|t| t.to)
        .collect()
}

fn listens(sys: &ComposedCts, i: usize, s: StateId, channel: usize) -> bool {
    sys.component(i).listen(s).iter().any(|c| c.index() == channel)
}

/// Composition: a channel fires when somebody listens, every listener
/// moves on one common content and everybody else stays put. Each listener
/// chooses independently among its moves.
pub fn cts_successors(sys: &ComposedCts, g: &[StateId], channel: usize) -> BTreeSet<Vec<StateId>> {
    let n = g.len();
    let listeners: Vec<usize> = (0..n).filter(|&i| listens(sys, i, g[i], channel)).collect();
    let mut out = BTreeSet::new();
    if listeners.is_empty() {
        return out;
    }
    for content in 0..sys.contents().len() as u32 {
        let mut partial = vec![g.to_vec()];
        for &i in &listeners {
            let moves = raw_moves(sys, i, g[i], content, channel);
            partial = partial
                .into_iter()
                .flat_map(|h| {
                    moves.iter().map(move |&t| {
                        let mut h2 = h.clone();
                        h2[i] = t;
                        h2
                    })
                })
                .collect();
        }
        out.extend(partial);
    }
    out
}

/// Same relation, found by testing every tuple of the product against the
/// three conditions. Only usable on small systems.
pub fn cts_successors_naive(sys: &ComposedCts, g: &[StateId], channel: usize) -> BTreeSet<Vec<StateId>> {
    let sizes: Vec<usize> = sys.components().iter().map(|c| c.state_count()).collect();
    let mut tuples = vec![Vec::new()];
    for &m in &sizes {
        tuples = tuples
            .into_iter()
            .flat_map(|t: Vec<StateId>| {
                (0..m as StateId).map(move |s| {
                    let mut t2 = t.clone();
                    t2.push(s);
                    t2
                })
            })
            .collect();
    }
    let mut out = BTreeSet::new();
    for h in tuples {
        for content in 0..sys.contents().len() as u32 {
            let mut some_listener = false;
            let mut ok = true;
            for i in 0..g.len() {
                if listens(sys, i, g[i], channel) {
                    some_listener = true;
                    ok &= raw_moves(sys, i, g[i], content, channel).contains(&h[i]);
                } else {
                    ok &= h[i] == g[i];
                }
            }
            if ok && some_listener {
                out.insert(h.clone());
            }
        }
    }
    out
}

pub fn cts_oracle(sys: &ComposedCts, k: usize) -> Language {
    let init: Vec<StateId> = sys.components().iter().map(|c| c.initial()).collect();
    let letters = sys.channels().to_vec();
    let succ = |g: &Vec<StateId>, c: usize| cts_successors(sys, g, c).into_iter().collect();
    enumerate(init, k, &letters, &succ)
}

/// Word lengths at most `k` over `letters`, in length-then-index order.
pub fn all_words(letters: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &frontier {
            for a in 0..letters {
                let mut w2: Vec<usize> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Single-switching rules over plain channel numbers `1..=n+1`, with the
/// size-then-lexicographic subset order and ascending cycles.
pub mod rules {
    use super::*;

    pub type Set = BTreeSet<u8>;

    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
    pub struct S {
        pub c: u8,
        pub sc: u8,
        pub dep: Set,
        pub d: u8,
    }

    pub fn next(dep: &Set, d: u8) -> u8 {
        if !dep.contains(&d) {
            return d;
        }
        dep.range(d + 1..).next().or_else(|| dep.iter().next()).copied().unwrap()
    }

    pub fn prev(dep: &Set, d: u8) -> u8 {
        if !dep.contains(&d) {
            return d;
        }
        dep.range(..d).next_back().or_else(|| dep.iter().next_back()).copied().unwrap()
    }

    /// Subsets of `1..=m` without `sc`, ordered by size then lexicographically.
    pub fn order(m: u8, sc: u8) -> Vec<Set> {
        let rest: Vec<u8> = (1..=m).filter(|&x| x != sc).collect();
        let mut subsets: Vec<Vec<u8>> = (0..1u32 << rest.len())
            .map(|bits| rest.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, &x)| x).collect())
            .collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        subsets.into_iter().map(|v| v.into_iter().collect()).collect()
    }

    pub fn inc(m: u8, sc: u8, dep: &Set) -> Option<Set> {
        let o = order(m, sc);
        let i = o.iter().position(|x| x == dep).expect("subset of C without sc");
        o.get(i + 1).cloned()
    }

    pub fn listen(s: &S) -> Set {
        let mut l: Set = [s.sc, s.c].into();
        if s.dep.contains(&s.c) {
            l.insert(prev(&s.dep, s.c));
        }
        l
    }

    /// The six transition sets, applied to one local state.
    pub fn moves(m: u8, s: &S, ch: u8) -> Vec<S> {
        let mut out = Vec::new();
        let p = prev(&s.dep, s.c);
        if ch == s.c && s.d == s.c {
            out.push(S { d: p, ..s.clone() });
        }
        if ch == p && s.d == p {
            out.push(S { d: s.c, ..s.clone() });
        }
        if ch == s.sc {
            match inc(m, s.sc, &s.dep) {
                Some(d2) => {
                    let first = *d2.iter().next().unwrap();
                    let d = if s.c == first { s.c } else { prev(&d2, s.c) };
                    out.push(S {
                        c: s.c,
                        sc: s.sc,
                        dep: d2,
                        d,
                    });
                }
                None => {
                    let all: Set = (1..=m).collect();
                    let nsc = next(&all, s.sc);
                    let c = if s.c == nsc { s.sc } else { s.c };
                    out.push(S {
                        c,
                        sc: nsc,
                        dep: Set::new(),
                        d: c,
                    });
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn initial(n: u8) -> Vec<S> {
        (1..=n)
            .map(|k| S {
                c: k,
                sc: n + 1,
                dep: Set::new(),
                d: k,
            })
            .collect()
    }

    /// Composition of the per-process rules.
    pub fn step(m: u8, g: &[S], ch: u8) -> BTreeSet<Vec<S>> {
        let mut partial = vec![g.to_vec()];
        let mut heard = false;
        for (i, s) in g.iter().enumerate() {
            if !listen(s).contains(&ch) {
                continue;
            }
            heard = true;
            let ms = moves(m, s, ch);
            partial = partial
                .into_iter()
                .flat_map(|h| {
                    ms.iter().map(move |t| {
                        let mut h2 = h.clone();
                        h2[i] = t.clone();
                        h2
                    })
                })
                .collect();
        }
        if heard {
            partial.into_iter().collect()
        } else {
            BTreeSet::new()
        }
    }

    pub fn language(n: u8, k: usize) -> Language {
        let m = n + 1;
        let letters: Vec<String> = (1..=m).map(|c| c.to_string()).collect();
        let succ = |g: &Vec<S>, c: usize| step(m, g, c as u8 + 1).into_iter().collect();
        enumerate(initial(n), k, &letters, &succ)
    }
}

/// Converts library channel sets (letter `i` is channel `i + 1`).
pub fn plain_set(set: aacts::LetterSet) -> rules::Set {
    set.iter().map(|l| l.0 as u8 + 1).collect()
}

pub fn plain_state(s: &aacts::switching::SwitchState) -> rules::S {
    rules::S {
        c: s.c.0 as u8 + 1,
        sc: s.sc.0 as u8 + 1,
        dep: plain_set(s.dep),
        d: s.d.0 as u8 + 1,
    }
}

/// Letter names of a word.
pub fn word(names: &[&str]) -> NamedWord {
    names.iter().map(|s| s.to_string()).collect()
}

