// SPDX-License-Identifier: Apache-2.0

//! Generators for the switching-channel families.
//!
//! In the single construction there are `n` processes and `n + 1` channels.
//! One channel is the switching channel; every message on it moves the
//! shared dependent set `D` one step along a fixed order of the subsets of
//! the other channels. Channels outside `D` are always available, channels
//! inside `D` must be used in cyclic order. Once the order is exhausted the
//! next channel becomes the switching channel and its owner takes over the
//! old one.
//!
//! The double construction has `n + 2` channels: a toggling channel adds the
//! highlighted channel to `D` and a highlighting channel moves the highlight.

use std::collections::{BTreeSet, HashMap};
use std::str::FromStr;

use crate::alphabet::{Channel, Letter, LetterSet, MAX_LETTERS};
use crate::automata::{GlobalConfig, StateId};
use crate::cts::{compose, ComposedCts, Cts, CtsTransition};
use crate::error::{Error, Result};
use crate::explore::{reachable, Limits};
use crate::translate::SINGLETON_CONTENT;

/// Total order over the subsets of the non-switching channels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderPolicy {
    /// By size, then lexicographically on the sorted members.
    #[default]
    SizeLex,
    /// By the subset's bitmask read as a binary number.
    Binary,
}

/// Cyclic successor used inside a set of channels.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CyclePolicy {
    /// Ascending channel index, wrapping around.
    #[default]
    Ascending,
    /// Descending channel index, wrapping around.
    Descending,
}

/// How the toggling and highlighting channels move on once the highlight
/// has visited every non-switching channel.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RotationPolicy {
    /// Both advance to their cyclic successor in the full channel set.
    #[default]
    Verbatim,
    /// Both move to the next two channels that are not currently switching
    /// channels, so the processes taking over always own distinct channels.
    Disjoint,
}

impl FromStr for OrderPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "size-lex" => Ok(OrderPolicy::SizeLex),
            "binary" => Ok(OrderPolicy::Binary),
            _ => Err(Error::input(format!("unknown order '{s}' (expected size-lex or binary)"))),
        }
    }
}

impl FromStr for CyclePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "index" => Ok(CyclePolicy::Ascending),
            "reverse" => Ok(CyclePolicy::Descending),
            _ => Err(Error::input(format!("unknown cycle '{s}' (expected index or reverse)"))),
        }
    }
}

impl FromStr for RotationPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "index" => Ok(RotationPolicy::Verbatim),
            "disjoint" => Ok(RotationPolicy::Disjoint),
            _ => Err(Error::input(format!("unknown cycle '{s}' (expected index or disjoint)"))),
        }
    }
}

impl CyclePolicy {
    /// Cyclic successor of `d` within `set`; identity when `d ∉ set`.
    pub fn next(self, set: LetterSet, d: Channel) -> Channel {
        if !set.contains(d) {
            return d;
        }
        let members: Vec<Channel> = set.iter().collect();
        let i = members.iter().position(|&x| x == d).expect("member");
        let k = members.len();
        match self {
            CyclePolicy::Ascending => members[(i + 1) % k],
            CyclePolicy::Descending => members[(i + k - 1) % k],
        }
    }

    /// Inverse of [`CyclePolicy::next`]; identity when `d ∉ set`.
    pub fn prev_or_same(self, set: LetterSet, d: Channel) -> Channel {
        match self {
            CyclePolicy::Ascending => CyclePolicy::Descending.next(set, d),
            CyclePolicy::Descending => CyclePolicy::Ascending.next(set, d),
        }
    }
}

/// Ascending cyclic successor of `d` in `set` (identity off `set`).
pub fn next_cyclic(set: LetterSet, d: Channel) -> Channel {
    CyclePolicy::Ascending.next(set, d)
}

/// Ascending cyclic predecessor of `d`, which must belong to `set`.
pub fn prev_cyclic(set: LetterSet, d: Channel) -> Result<Channel> {
    if !set.contains(d) {
        return Err(Error::input(format!("channel index {} is not in the set", d.0)));
    }
    Ok(CyclePolicy::Ascending.prev_or_same(set, d))
}

/// Every subset of `C ∖ {sc}`, in order, starting with ∅.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetOrder {
    sc: Channel,
    universe: LetterSet,
    subsets: Vec<LetterSet>,
    position: HashMap<LetterSet, usize>,
}

impl SubsetOrder {
    pub fn new(channels: LetterSet, sc: Channel, policy: OrderPolicy) -> Self {
        let universe = channels.without(sc);
        let members: Vec<Channel> = universe.iter().collect();
        let mut subsets: Vec<LetterSet> = (0u64..1 << members.len())
            .map(|mask| {
                members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &c)| c)
                    .collect()
            })
            .collect();
        match policy {
            OrderPolicy::SizeLex => subsets.sort_by_key(|s| (s.len(), s.iter().collect::<Vec<_>>())),
            OrderPolicy::Binary => subsets.sort_by_key(|s| s.bits()),
        }
        let position = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        SubsetOrder {
            sc,
            universe,
            subsets,
            position,
        }
    }

    pub fn switching_channel(&self) -> Channel {
        self.sc
    }

    pub fn subsets(&self) -> &[LetterSet] {
        &self.subsets
    }

    /// The subset after `d`, or `None` at the maximum.
    pub fn inc(&self, d: LetterSet) -> Result<Option<LetterSet>> {
        if d.contains(self.sc) {
            return Err(Error::input("dependent set contains the switching channel"));
        }
        if !d.is_subset(self.universe) {
            return Err(Error::input("dependent set names an undeclared channel"));
        }
        let i = self.position[&d];
        Ok(self.subsets.get(i + 1).copied())
    }
}

fn channel_names(count: usize) -> Vec<String> {
    (1..=count).map(|i| i.to_string()).collect()
}

fn format_set(names: &[String], set: LetterSet) -> String {
    let v: Vec<&str> = set.iter().map(|c| names[c.index()].as_str()).collect();
    format!("{{{}}}", v.join(","))
}

fn lookup(names: &[String], tok: &str) -> Result<Channel> {
    names
        .iter()
        .position(|n| n == tok.trim())
        .map(|i| Letter(i as u16))
        .ok_or_else(|| Error::input(format!("unknown channel '{}' in state label", tok.trim())))
}

/// Splits `(a,b,{x,y},d)` into top-level fields.
fn split_label(label: &str) -> Result<Vec<String>> {
    let inner = label
        .trim()
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::input(format!("state label '{label}' is not parenthesised")))?;
    let mut fields = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                fields.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    fields.push(cur);
    Ok(fields)
}

fn parse_set(names: &[String], field: &str) -> Result<LetterSet> {
    let inner = field
        .trim()
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| Error::input(format!("'{field}' is not a channel set")))?;
    inner
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| lookup(names, t))
        .collect()
}

/// Local state `(c, sc, D, d)` of the single construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SwitchState {
    /// Channel owned by the process.
    pub c: Channel,
    /// Current switching channel.
    pub sc: Channel,
    /// Dependent set.
    pub dep: LetterSet,
    /// Channel the process expects next.
    pub d: Channel,
}

impl SwitchState {
    pub fn label(&self, names: &[String]) -> String {
        format!(
            "({},{},{},{})",
            names[self.c.index()],
            names[self.sc.index()],
            format_set(names, self.dep),
            names[self.d.index()]
        )
    }

    pub fn parse(label: &str, names: &[String]) -> Result<Self> {
        let f = split_label(label)?;
        if f.len() != 4 {
            return Err(Error::input(format!("'{label}' is not a (c,sc,D,d) state")));
        }
        Ok(SwitchState {
            c: lookup(names, &f[0])?,
            sc: lookup(names, &f[1])?,
            dep: parse_set(names, &f[2])?,
            d: lookup(names, &f[3])?,
        })
    }

    pub fn listen(&self, cycle: CyclePolicy) -> LetterSet {
        let base = LetterSet::singleton(self.sc).with(self.c);
        if self.dep.contains(self.c) {
            base.with(cycle.prev_or_same(self.dep, self.c))
        } else {
            base
        }
    }
}

/// Parameters of a single-switching system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SingleParams {
    pub n: usize,
    pub order: OrderPolicy,
    pub cycle: CyclePolicy,
}

impl SingleParams {
    pub fn new(n: usize) -> Self {
        SingleParams {
            n,
            order: OrderPolicy::default(),
            cycle: CyclePolicy::default(),
        }
    }
}

struct SingleRules {
    all: LetterSet,
    cycle: CyclePolicy,
    orders: Vec<SubsetOrder>,
}

impl SingleRules {
    fn new(p: &SingleParams) -> Self {
        let all = LetterSet::full(p.n + 1);
        let orders = all.iter().map(|sc| SubsetOrder::new(all, sc, p.order)).collect();
        SingleRules {
            all,
            cycle: p.cycle,
            orders,
        }
    }

    fn moves(&self, s: &SwitchState) -> Vec<(Channel, SwitchState)> {
        let mut out = Vec::new();
        let prev = self.cycle.prev_or_same(s.dep, s.c);
        if s.d == s.c {
            out.push((s.c, SwitchState { d: prev, ..*s }));
        }
        if s.d == prev {
            out.push((prev, SwitchState { d: s.c, ..*s }));
        }
        let inc = self.orders[s.sc.index()]
            .inc(s.dep)
            .expect("dependent sets never contain the switching channel");
        let on_switch = match inc {
            Some(next) => {
                let lead = next.min().expect("only ∅ is empty and it is minimal");
                let d = if s.c == lead { s.c } else { self.cycle.prev_or_same(next, s.c) };
                SwitchState { dep: next, d, ..*s }
            }
            None => {
                let next_sc = self.cycle.next(self.all, s.sc);
                let c = if s.c == next_sc { s.sc } else { s.c };
                SwitchState {
                    c,
                    sc: next_sc,
                    dep: LetterSet::empty(),
                    d: c,
                }
            }
        };
        out.push((s.sc, on_switch));
        out.sort();
        out.dedup();
        out
    }
}

/// Enumerates every local state reachable from `init` under `moves`, with
/// `init` first.
fn local_closure<S, F>(init: S, moves: F) -> (Vec<S>, Vec<(usize, Channel, usize)>)
where
    S: Copy + Eq + std::hash::Hash,
    F: Fn(&S) -> Vec<(Channel, S)>,
{
    let mut states = vec![init];
    let mut index = HashMap::from([(init, 0usize)]);
    let mut edges = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let s = states[i];
        for (c, t) in moves(&s) {
            let j = *index.entry(t).or_insert_with(|| {
                states.push(t);
                states.len() - 1
            });
            edges.push((i, c, j));
        }
        i += 1;
    }
    (states, edges)
}

/// A generated single-switching system together with the structured state
/// behind every component state.
#[derive(Clone, Debug)]
pub struct SingleSwitching {
    system: ComposedCts,
    states: Vec<Vec<SwitchState>>,
    cycle: Option<CyclePolicy>,
}

pub fn gen_single(params: SingleParams) -> Result<SingleSwitching> {
    let n = params.n;
    if n == 0 {
        return Err(Error::input("the single construction needs at least one process"));
    }
    if n + 1 > MAX_LETTERS || n > 16 {
        return Err(Error::input(format!("n = {n} is too large for explicit generation")));
    }
    let rules = SingleRules::new(&params);
    let names = channel_names(n + 1);
    let sc0 = Letter(n as u16);
    let mut components = Vec::with_capacity(n);
    let mut all_states = Vec::with_capacity(n);
    for k in 0..n {
        let ck = Letter(k as u16);
        let init = SwitchState {
            c: ck,
            sc: sc0,
            dep: LetterSet::empty(),
            d: ck,
        };
        let (states, edges) = local_closure(init, |s| rules.moves(s));
        let cts = Cts::new(
            format!("p{}", k + 1),
            names.clone(),
            vec![SINGLETON_CONTENT.to_string()],
            states.iter().map(|s| s.label(&names)).collect(),
            0,
            states.iter().map(|s| s.listen(params.cycle)).collect(),
            edges.iter().map(|&(i, c, j)| CtsTransition {
                from: i as StateId,
                content: 0,
                channel: c,
                to: j as StateId,
            }),
        )?;
        components.push(cts);
        all_states.push(states);
    }
    Ok(SingleSwitching {
        system: compose(components)?,
        states: all_states,
        cycle: Some(params.cycle),
    })
}

/// What all processes of a single-switching configuration agree on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingleView {
    pub sc: Channel,
    pub dep: LetterSet,
    pub states: Vec<SwitchState>,
}

impl SingleSwitching {
    /// Recovers the structured states of a system read back from a file by
    /// parsing its state labels.
    pub fn from_system(system: ComposedCts) -> Result<Self> {
        let names = system.channels().to_vec();
        let states = system
            .components()
            .iter()
            .map(|c| c.states().iter().map(|l| SwitchState::parse(l, &names)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(SingleSwitching {
            system,
            states,
            cycle: None,
        })
    }

    pub fn system(&self) -> &ComposedCts {
        &self.system
    }

    pub fn into_system(self) -> ComposedCts {
        self.system
    }

    pub fn n(&self) -> usize {
        self.system.processes().len()
    }

    pub fn cycle(&self) -> Option<CyclePolicy> {
        self.cycle
    }

    pub fn local_states(&self, p: usize) -> &[SwitchState] {
        &self.states[p]
    }

    pub fn state(&self, p: usize, s: StateId) -> SwitchState {
        self.states[p][s as usize]
    }

    /// Structured view of `g`; fails if processes disagree on `(sc, D)`.
    pub fn view(&self, g: &GlobalConfig) -> Result<SingleView> {
        let states: Vec<SwitchState> = g.0.iter().enumerate().map(|(p, &s)| self.state(p, s)).collect();
        let first = states[0];
        if let Some(p) = states.iter().position(|s| (s.sc, s.dep) != (first.sc, first.dep)) {
            return Err(Error::input(format!(
                "processes p1 and p{} disagree on the switching channel or dependent set at {}",
                p + 1,
                self.system.format_config(g)
            )));
        }
        Ok(SingleView {
            sc: first.sc,
            dep: first.dep,
            states,
        })
    }

    /// Fires the current switching channel once.
    pub fn switch(&self, g: &GlobalConfig) -> Result<GlobalConfig> {
        let sc = self.view(g)?.sc;
        self.system
            .step_deterministic(g, sc)?
            .ok_or_else(|| Error::input(format!("switching channel blocked at {}", self.system.format_config(g))))
    }

    pub fn format_snapshot(&self, sc: Channel, dep: LetterSet) -> String {
        let names = self.system.channels();
        format!("sc={} D={}", names[sc.index()], format_set(names, dep))
    }
}

/// `(sc, D)` before any switch and after each of `steps` switches.
pub fn switching_schedule(sys: &SingleSwitching, steps: usize) -> Result<Vec<(Channel, LetterSet)>> {
    let mut g = sys.system.initial_config();
    let v = sys.view(&g)?;
    let mut out = vec![(v.sc, v.dep)];
    for _ in 0..steps {
        g = sys.switch(&g)?;
        let v = sys.view(&g)?;
        out.push((v.sc, v.dep));
    }
    Ok(out)
}

/// Local state `(c, tg, hl, h, D, d)` of the double construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TwoSwitchState {
    pub c: Channel,
    pub tg: Channel,
    pub hl: Channel,
    pub h: Channel,
    pub dep: LetterSet,
    pub d: Channel,
}

impl TwoSwitchState {
    pub fn label(&self, names: &[String]) -> String {
        format!(
            "({},{},{},{},{},{})",
            names[self.c.index()],
            names[self.tg.index()],
            names[self.hl.index()],
            names[self.h.index()],
            format_set(names, self.dep),
            names[self.d.index()]
        )
    }

    pub fn parse(label: &str, names: &[String]) -> Result<Self> {
        let f = split_label(label)?;
        if f.len() != 6 {
            return Err(Error::input(format!("'{label}' is not a (c,tg,hl,h,D,d) state")));
        }
        Ok(TwoSwitchState {
            c: lookup(names, &f[0])?,
            tg: lookup(names, &f[1])?,
            hl: lookup(names, &f[2])?,
            h: lookup(names, &f[3])?,
            dep: parse_set(names, &f[4])?,
            d: lookup(names, &f[5])?,
        })
    }

    pub fn listen(&self) -> LetterSet {
        let base = LetterSet::singleton(self.tg).with(self.hl).with(self.c);
        if self.dep.contains(self.c) {
            base.with(CyclePolicy::Ascending.prev_or_same(self.dep, self.c))
        } else {
            base
        }
    }
}

/// The non-switching channels `C ∖ {tg, hl}`.
pub fn non_switching(all: LetterSet, tg: Channel, hl: Channel) -> LetterSet {
    all.without(tg).without(hl)
}

struct DoubleRules {
    all: LetterSet,
    rotation: RotationPolicy,
}

impl DoubleRules {
    fn rotate(&self, tg: Channel, hl: Channel) -> (Channel, Channel) {
        let next = |x| CyclePolicy::Ascending.next(self.all, x);
        match self.rotation {
            RotationPolicy::Verbatim => (next(tg), next(hl)),
            RotationPolicy::Disjoint => {
                let skip = |mut x: Channel| {
                    x = next(x);
                    while x == tg || x == hl {
                        x = next(x);
                    }
                    x
                };
                let new_tg = skip(hl);
                (new_tg, skip(new_tg))
            }
        }
    }

    fn moves(&self, s: &TwoSwitchState) -> Vec<(Channel, TwoSwitchState)> {
        let cyc = CyclePolicy::Ascending;
        let mut out = Vec::new();
        let prev = cyc.prev_or_same(s.dep, s.c);
        if s.d == s.c {
            out.push((s.c, TwoSwitchState { d: prev, ..*s }));
        }
        if s.d == prev {
            out.push((prev, TwoSwitchState { d: s.c, ..*s }));
        }
        // Toggle: add the highlighted channel to D.
        let e = s.dep.with(s.h);
        let toggled = if s.c != s.h {
            TwoSwitchState {
                dep: e,
                d: cyc.prev_or_same(e, s.c),
                ..*s
            }
        } else {
            TwoSwitchState { dep: e, d: s.h, ..*s }
        };
        out.push((s.tg, toggled));
        // Highlight: advance h, or rotate the switching channels.
        let cstar = non_switching(self.all, s.tg, s.hl);
        let highlighted = if Some(s.h) != cstar.max() {
            TwoSwitchState {
                h: cyc.next(cstar, s.h),
                ..*s
            }
        } else {
            let (tg2, hl2) = self.rotate(s.tg, s.hl);
            let min2 = non_switching(self.all, tg2, hl2).min().unwrap_or(tg2);
            let c = if s.c == tg2 {
                s.tg
            } else if s.c == hl2 {
                s.hl
            } else {
                s.c
            };
            TwoSwitchState {
                c,
                tg: tg2,
                hl: hl2,
                h: min2,
                dep: LetterSet::empty(),
                d: c,
            }
        };
        out.push((s.hl, highlighted));
        out.sort();
        out.dedup();
        out
    }
}

/// Parameters of a double-switching system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleParams {
    pub n: usize,
    pub rotation: RotationPolicy,
}

impl DoubleParams {
    pub fn new(n: usize) -> Self {
        DoubleParams {
            n,
            rotation: RotationPolicy::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DoubleSwitching {
    system: ComposedCts,
    states: Vec<Vec<TwoSwitchState>>,
}

pub fn gen_double(params: DoubleParams) -> Result<DoubleSwitching> {
    let n = params.n;
    if n == 0 {
        return Err(Error::input("the double construction needs at least one process"));
    }
    if n > 16 {
        return Err(Error::input(format!("n = {n} is too large for explicit generation")));
    }
    if params.rotation == RotationPolicy::Disjoint && n < 2 {
        return Err(Error::input("the disjoint rotation needs at least two processes"));
    }
    let all = LetterSet::full(n + 2);
    let rules = DoubleRules {
        all,
        rotation: params.rotation,
    };
    let names = channel_names(n + 2);
    let (tg, hl) = (Letter(n as u16), Letter(n as u16 + 1));
    let minstar = non_switching(all, tg, hl).min().expect("n ≥ 1");
    let mut components = Vec::with_capacity(n);
    let mut all_states = Vec::with_capacity(n);
    for k in 0..n {
        let ck = Letter(k as u16);
        let init = TwoSwitchState {
            c: ck,
            tg,
            hl,
            h: minstar,
            dep: LetterSet::empty(),
            d: ck,
        };
        let (states, edges) = local_closure(init, |s| rules.moves(s));
        components.push(Cts::new(
            format!("p{}", k + 1),
            names.clone(),
            vec![SINGLETON_CONTENT.to_string()],
            states.iter().map(|s| s.label(&names)).collect(),
            0,
            states.iter().map(TwoSwitchState::listen).collect(),
            edges.iter().map(|&(i, c, j)| CtsTransition {
                from: i as StateId,
                content: 0,
                channel: c,
                to: j as StateId,
            }),
        )?);
        all_states.push(states);
    }
    Ok(DoubleSwitching {
        system: compose(components)?,
        states: all_states,
    })
}

/// Shared part `(tg, hl, h, D)` of a double-switching configuration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DoubleShared {
    pub tg: Channel,
    pub hl: Channel,
    pub h: Channel,
    pub dep: LetterSet,
}

/// A process owning a channel that currently plays a switching role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleCollision {
    pub config: String,
    pub process: String,
    pub channel: String,
}

impl DoubleSwitching {
    pub fn from_system(system: ComposedCts) -> Result<Self> {
        let names = system.channels().to_vec();
        let states = system
            .components()
            .iter()
            .map(|c| c.states().iter().map(|l| TwoSwitchState::parse(l, &names)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        Ok(DoubleSwitching { system, states })
    }

    pub fn system(&self) -> &ComposedCts {
        &self.system
    }

    pub fn into_system(self) -> ComposedCts {
        self.system
    }

    pub fn local_states(&self, p: usize) -> &[TwoSwitchState] {
        &self.states[p]
    }

    pub fn state(&self, p: usize, s: StateId) -> TwoSwitchState {
        self.states[p][s as usize]
    }

    /// Shared part of `g`; fails if processes disagree on it.
    pub fn shared(&self, g: &GlobalConfig) -> Result<DoubleShared> {
        let parts: BTreeSet<DoubleShared> = g
            .0
            .iter()
            .enumerate()
            .map(|(p, &s)| {
                let st = self.state(p, s);
                DoubleShared {
                    tg: st.tg,
                    hl: st.hl,
                    h: st.h,
                    dep: st.dep,
                }
            })
            .collect();
        if parts.len() != 1 {
            return Err(Error::input(format!(
                "processes disagree on (tg, hl, h, D) at {}",
                self.system.format_config(g)
            )));
        }
        Ok(parts.into_iter().next().expect("one element"))
    }

    /// Reachable configurations in which some process owns a current
    /// switching channel.
    pub fn role_collisions(&self, limits: Limits) -> Result<Vec<RoleCollision>> {
        let graph = reachable(&self.system, limits)?;
        let names = self.system.channels();
        let mut out = Vec::new();
        for g in &graph.states {
            for (p, &s) in g.0.iter().enumerate() {
                let st = self.state(p, s);
                if st.c == st.tg || st.c == st.hl {
                    out.push(RoleCollision {
                        config: self.system.format_config(g),
                        process: self.system.processes()[p].clone(),
                        channel: names[st.c.index()].clone(),
                    });
                }
            }
        }
        Ok(out)
    }
}
