// SPDX-License-Identifier: Apache-2.0

//! JSON interchange. Every file is `{"kind", "version", "body"}`; names are
//! used everywhere so documents stay editable by hand. Writing is canonical:
//! transitions come out sorted, so parse-then-write is a fixed point.

use serde::de::IgnoredAny;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::alphabet::{Dfa, DistributedAlphabet, Letter, LetterSet, ProcessId};
use crate::automata::{AsyncAutomaton, GlobalAA, LocalAA, LocalStates, StateId};
use crate::cts::{compose, ComposedCts, Cts, CtsTransition};
use crate::error::{Error, Result};

pub const SCHEMA_VERSION: &str = "1";

pub const KINDS: [&str; 7] = [
    "distributed-alphabet",
    "dfa",
    "global-aa",
    "local-aa",
    "cts",
    "cts-system",
    "report",
];

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Alphabet(DistributedAlphabet),
    Dfa(Dfa),
    GlobalAa(GlobalAA),
    LocalAa(LocalAA),
    Cts(Cts),
    CtsSystem(ComposedCts),
    Report(Value),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphabetBody {
    processes: Vec<String>,
    letters: Vec<LetterBody>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LetterBody {
    name: String,
    dom: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaBody {
    alphabet: AlphabetBody,
    states: Vec<String>,
    initial: String,
    transitions: Vec<DfaTransitionBody>,
    accepting: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DfaTransitionBody {
    from: String,
    letter: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalStatesBody {
    process: String,
    states: Vec<String>,
    initial: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalAaBody {
    alphabet: AlphabetBody,
    local_states: Vec<LocalStatesBody>,
    transitions: Vec<GlobalTransitionBody>,
    /// Reserved. Every configuration accepts, so the field is read and
    /// ignored, and never written.
    #[serde(default, skip_serializing, rename = "accepting")]
    _accepting: IgnoredAny,
}

/// `from`/`to` list the local states of the letter's domain in process order.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalTransitionBody {
    letter: String,
    from: Vec<String>,
    to: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalAaBody {
    alphabet: AlphabetBody,
    local_states: Vec<LocalStatesBody>,
    transitions: Vec<LocalTransitionBody>,
    /// Reserved. Every configuration accepts, so the field is read and
    /// ignored, and never written.
    #[serde(default, skip_serializing, rename = "accepting")]
    _accepting: IgnoredAny,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LocalTransitionBody {
    process: String,
    from: String,
    letter: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CtsBody {
    process: String,
    channels: Vec<String>,
    contents: Vec<String>,
    states: Vec<CtsStateBody>,
    initial: String,
    transitions: Vec<CtsTransitionBody>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CtsStateBody {
    name: String,
    listen: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CtsTransitionBody {
    from: String,
    content: String,
    channel: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CtsSystemBody {
    channels: Vec<String>,
    contents: Vec<String>,
    components: Vec<ComponentBody>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentBody {
    process: String,
    states: Vec<CtsStateBody>,
    initial: String,
    transitions: Vec<CtsTransitionBody>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn integrity(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Integrity {
        path: path.into(),
        message: message.into(),
    }
}

/// Re-labels constructor errors as integrity errors located at `path`.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Input(m) | Error::Nondeterminism(m) => integrity(path, m),
        other => other,
    })
}

fn resolve(names: &[String], what: &str, name: &str, path: String) -> Result<usize> {
    names
        .iter()
        .position(|n| n == name)
        .ok_or_else(|| integrity(path, format!("unknown {what} '{name}'")))
}

fn pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::from("/body");
    for seg in path.iter() {
        match seg {
            Segment::Seq { index } => out.push_str(&format!("/{index}")),
            Segment::Map { key } => out.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1"))),
            Segment::Enum { variant } => out.push_str(&format!("/{variant}")),
            Segment::Unknown => out.push_str("/?"),
        }
    }
    out
}

fn body<T: for<'de> Deserialize<'de>>(v: Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = pointer(e.path());
        schema(path, e.into_inner().to_string())
    })
}

pub fn parse_document(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("", format!("not JSON: {e}")))?;
    let Value::Object(mut obj) = v else {
        return Err(schema("", "a document must be a JSON object"));
    };
    let kind = match obj.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(schema("/kind", "kind must be a string")),
        None => return Err(schema("/kind", "missing kind")),
    };
    match obj.get("version") {
        Some(Value::String(v)) if v == SCHEMA_VERSION => {}
        Some(Value::String(v)) => {
            return Err(schema("/version", format!("unsupported version '{v}' (expected '{SCHEMA_VERSION}')")))
        }
        Some(_) => return Err(schema("/version", "version must be a string")),
        None => return Err(schema("/version", "missing version")),
    }
    if let Some(extra) = obj.keys().find(|k| !["kind", "version", "body"].contains(&k.as_str())) {
        return Err(schema(format!("/{extra}"), "unknown field"));
    }
    let b = obj.remove("body").ok_or_else(|| schema("/body", "missing body"))?;
    match kind.as_str() {
        "distributed-alphabet" => Ok(Document::Alphabet(alphabet_from(body(b)?, "/body")?)),
        "dfa" => Ok(Document::Dfa(dfa_from(body(b)?)?)),
        "global-aa" => Ok(Document::GlobalAa(global_from(body(b)?)?)),
        "local-aa" => Ok(Document::LocalAa(local_from(body(b)?)?)),
        "cts" => Ok(Document::Cts(cts_from(body(b)?)?)),
        "cts-system" => Ok(Document::CtsSystem(system_from(body(b)?)?)),
        "report" => Ok(Document::Report(b)),
        other => Err(schema("/kind", format!("unknown kind '{other}' (expected one of {})", KINDS.join(", ")))),
    }
}

fn alphabet_from(b: AlphabetBody, base: &str) -> Result<DistributedAlphabet> {
    let mut letters = Vec::with_capacity(b.letters.len());
    for (i, l) in b.letters.into_iter().enumerate() {
        let dom = l
            .dom
            .iter()
            .enumerate()
            .map(|(j, p)| {
                resolve(&b.processes, "process", p, format!("{base}/letters/{i}/dom/{j}")).map(|k| ProcessId(k as u16))
            })
            .collect::<Result<Vec<_>>>()?;
        letters.push((l.name, dom));
    }
    at(base, DistributedAlphabet::new(b.processes, letters))
}

fn letter_at(al: &DistributedAlphabet, name: &str, path: String) -> Result<Letter> {
    resolve(al.letter_names(), "letter", name, path).map(|i| Letter(i as u16))
}

fn dfa_from(b: DfaBody) -> Result<Dfa> {
    let al = alphabet_from(b.alphabet, "/body/alphabet")?;
    let initial = resolve(&b.states, "state", &b.initial, "/body/initial".into())?;
    let mut ts = Vec::with_capacity(b.transitions.len());
    for (i, t) in b.transitions.iter().enumerate() {
        let p = |f: &str| format!("/body/transitions/{i}/{f}");
        ts.push((
            resolve(&b.states, "state", &t.from, p("from"))?,
            letter_at(&al, &t.letter, p("letter"))?,
            resolve(&b.states, "state", &t.to, p("to"))?,
        ));
    }
    let acc = b
        .accepting
        .iter()
        .enumerate()
        .map(|(i, s)| resolve(&b.states, "state", s, format!("/body/accepting/{i}")))
        .collect::<Result<Vec<_>>>()?;
    at("/body", Dfa::new(al, b.states, initial, ts, acc))
}

fn locals_from(al: &DistributedAlphabet, ls: Vec<LocalStatesBody>) -> Result<Vec<LocalStates>> {
    if ls.len() != al.process_count() {
        return Err(integrity(
            "/body/local_states",
            format!("{} entries for {} processes", ls.len(), al.process_count()),
        ));
    }
    ls.into_iter()
        .enumerate()
        .map(|(i, l)| {
            if l.process != al.process_names()[i] {
                return Err(integrity(
                    format!("/body/local_states/{i}/process"),
                    format!("expected process '{}' at this position", al.process_names()[i]),
                ));
            }
            let init = resolve(&l.states, "state", &l.initial, format!("/body/local_states/{i}/initial"))?;
            Ok(LocalStates::new(l.states, init as StateId))
        })
        .collect()
}

fn global_from(b: GlobalAaBody) -> Result<GlobalAA> {
    let al = alphabet_from(b.alphabet, "/body/alphabet")?;
    let locals = locals_from(&al, b.local_states)?;
    let mut ts = Vec::with_capacity(b.transitions.len());
    for (i, t) in b.transitions.iter().enumerate() {
        let a = letter_at(&al, &t.letter, format!("/body/transitions/{i}/letter"))?;
        let dom = al.dom(a);
        let tuple = |field: &str, xs: &[String]| -> Result<Vec<StateId>> {
            if xs.len() != dom.len() {
                return Err(integrity(
                    format!("/body/transitions/{i}/{field}"),
                    format!("'{}' has {} processes in its domain", t.letter, dom.len()),
                ));
            }
            dom.iter()
                .zip(xs)
                .enumerate()
                .map(|(j, (p, s))| {
                    resolve(&locals[p.index()].names, "state", s, format!("/body/transitions/{i}/{field}/{j}"))
                        .map(|k| k as StateId)
                })
                .collect()
        };
        ts.push((a, tuple("from", &t.from)?, tuple("to", &t.to)?));
    }
    at("/body/transitions", GlobalAA::new(al, locals, ts))
}

fn local_from(b: LocalAaBody) -> Result<LocalAA> {
    let al = alphabet_from(b.alphabet, "/body/alphabet")?;
    let locals = locals_from(&al, b.local_states)?;
    let mut ts = Vec::with_capacity(b.transitions.len());
    for (i, t) in b.transitions.iter().enumerate() {
        let p = |f: &str| format!("/body/transitions/{i}/{f}");
        let proc = resolve(al.process_names(), "process", &t.process, p("process"))?;
        let names = &locals[proc].names;
        let a = letter_at(&al, &t.letter, p("letter"))?;
        if !al.dom_inv(ProcessId(proc as u16)).contains(a) {
            return Err(integrity(
                p("letter"),
                format!("'{}' does not take part in '{}'", t.process, t.letter),
            ));
        }
        ts.push((
            ProcessId(proc as u16),
            resolve(names, "state", &t.from, p("from"))? as StateId,
            a,
            resolve(names, "state", &t.to, p("to"))? as StateId,
        ));
    }
    at("/body/transitions", LocalAA::new(al, locals, ts))
}

fn component_from(
    base: &str,
    process: String,
    channels: &[String],
    contents: &[String],
    states: Vec<CtsStateBody>,
    initial: &str,
    transitions: &[CtsTransitionBody],
) -> Result<Cts> {
    let names: Vec<String> = states.iter().map(|s| s.name.clone()).collect();
    let mut listen = Vec::with_capacity(states.len());
    for (i, s) in states.iter().enumerate() {
        let mut set = LetterSet::empty();
        for (j, c) in s.listen.iter().enumerate() {
            set.insert(Letter(resolve(channels, "channel", c, format!("{base}/states/{i}/listen/{j}"))? as u16));
        }
        listen.push(set);
    }
    let init = resolve(&names, "state", initial, format!("{base}/initial"))?;
    let mut ts = Vec::with_capacity(transitions.len());
    for (i, t) in transitions.iter().enumerate() {
        let p = |f: &str| format!("{base}/transitions/{i}/{f}");
        let from = resolve(&names, "state", &t.from, p("from"))?;
        let channel = Letter(resolve(channels, "channel", &t.channel, p("channel"))? as u16);
        if !listen[from].contains(channel) {
            return Err(integrity(
                p("channel"),
                format!(
                    "state '{}' does not listen to channel '{}', so it cannot move on it",
                    t.from, t.channel
                ),
            ));
        }
        ts.push(CtsTransition {
            from: from as StateId,
            content: resolve(contents, "content", &t.content, p("content"))? as u32,
            channel,
            to: resolve(&names, "state", &t.to, p("to"))? as StateId,
        });
    }
    at(
        base,
        Cts::new(process, channels.to_vec(), contents.to_vec(), names, init as StateId, listen, ts),
    )
}

fn cts_from(b: CtsBody) -> Result<Cts> {
    component_from(
        "/body",
        b.process,
        &b.channels,
        &b.contents,
        b.states,
        &b.initial,
        &b.transitions,
    )
}

fn system_from(b: CtsSystemBody) -> Result<ComposedCts> {
    let mut comps = Vec::with_capacity(b.components.len());
    for (k, c) in b.components.into_iter().enumerate() {
        comps.push(component_from(
            &format!("/body/components/{k}"),
            c.process,
            &b.channels,
            &b.contents,
            c.states,
            &c.initial,
            &c.transitions,
        )?);
    }
    at("/body/components", compose(comps))
}

fn alphabet_body(al: &DistributedAlphabet) -> AlphabetBody {
    AlphabetBody {
        processes: al.process_names().to_vec(),
        letters: al
            .letters()
            .map(|a| LetterBody {
                name: al.letter_name(a).to_string(),
                dom: al.dom(a).iter().map(|&p| al.process_name(p).to_string()).collect(),
            })
            .collect(),
    }
}

fn locals_body<A: AsyncAutomaton>(aa: &A) -> Vec<LocalStatesBody> {
    let al = aa.alphabet();
    al.processes()
        .map(|p| {
            let l = aa.local_states(p);
            LocalStatesBody {
                process: al.process_name(p).to_string(),
                states: l.names.clone(),
                initial: l.names[l.initial as usize].clone(),
            }
        })
        .collect()
}

fn component_parts(c: &Cts) -> (Vec<CtsStateBody>, Vec<CtsTransitionBody>) {
    let ch = c.channels();
    let states = c
        .states()
        .iter()
        .enumerate()
        .map(|(i, s)| CtsStateBody {
            name: s.clone(),
            listen: c.listen(i as StateId).iter().map(|l| ch[l.index()].clone()).collect(),
        })
        .collect();
    let transitions = c
        .transitions()
        .iter()
        .map(|t| CtsTransitionBody {
            from: c.states()[t.from as usize].clone(),
            content: c.contents()[t.content as usize].clone(),
            channel: ch[t.channel.index()].clone(),
            to: c.states()[t.to as usize].clone(),
        })
        .collect();
    (states, transitions)
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Alphabet(_) => "distributed-alphabet",
            Document::Dfa(_) => "dfa",
            Document::GlobalAa(_) => "global-aa",
            Document::LocalAa(_) => "local-aa",
            Document::Cts(_) => "cts",
            Document::CtsSystem(_) => "cts-system",
            Document::Report(_) => "report",
        }
    }

    fn body_value(&self) -> Value {
        let v = match self {
            Document::Alphabet(al) => serde_json::to_value(alphabet_body(al)),
            Document::Dfa(d) => {
                let s = d.states();
                serde_json::to_value(DfaBody {
                    alphabet: alphabet_body(d.alphabet()),
                    states: s.to_vec(),
                    initial: s[d.initial()].clone(),
                    transitions: d
                        .transitions()
                        .map(|(q, a, r)| DfaTransitionBody {
                            from: s[q].clone(),
                            letter: d.alphabet().letter_name(a).to_string(),
                            to: s[r].clone(),
                        })
                        .collect(),
                    accepting: d.accepting().iter().map(|&q| s[q].clone()).collect(),
                })
            }
            Document::GlobalAa(aa) => {
                let al = aa.alphabet();
                let mut transitions = Vec::new();
                for a in al.letters() {
                    let dom = al.dom(a);
                    let name = |t: &[StateId]| -> Vec<String> {
                        dom.iter()
                            .zip(t)
                            .map(|(p, &s)| aa.locals()[p.index()].names[s as usize].clone())
                            .collect()
                    };
                    for (from, to) in aa.transitions(a) {
                        transitions.push(GlobalTransitionBody {
                            letter: al.letter_name(a).to_string(),
                            from: name(from),
                            to: name(to),
                        });
                    }
                }
                serde_json::to_value(GlobalAaBody {
                    alphabet: alphabet_body(al),
                    local_states: locals_body(aa),
                    transitions,
                    _accepting: IgnoredAny,
                })
            }
            Document::LocalAa(laa) => {
                let al = laa.alphabet();
                let mut transitions = Vec::new();
                for p in al.processes() {
                    let names = &laa.locals()[p.index()].names;
                    for (s, a, t) in laa.local_transitions(p) {
                        transitions.push(LocalTransitionBody {
                            process: al.process_name(p).to_string(),
                            from: names[s as usize].clone(),
                            letter: al.letter_name(a).to_string(),
                            to: names[t as usize].clone(),
                        });
                    }
                }
                serde_json::to_value(LocalAaBody {
                    alphabet: alphabet_body(al),
                    local_states: locals_body(laa),
                    transitions,
                    _accepting: IgnoredAny,
                })
            }
            Document::Cts(c) => {
                let (states, transitions) = component_parts(c);
                serde_json::to_value(CtsBody {
                    process: c.name().to_string(),
                    channels: c.channels().to_vec(),
                    contents: c.contents().to_vec(),
                    states,
                    initial: c.states()[c.initial() as usize].clone(),
                    transitions,
                })
            }
            Document::CtsSystem(sys) => serde_json::to_value(CtsSystemBody {
                channels: sys.channels().to_vec(),
                contents: sys.contents().to_vec(),
                components: sys
                    .components()
                    .iter()
                    .map(|c| {
                        let (states, transitions) = component_parts(c);
                        ComponentBody {
                            process: c.name().to_string(),
                            states,
                            initial: c.states()[c.initial() as usize].clone(),
                            transitions,
                        }
                    })
                    .collect(),
            }),
            Document::Report(v) => Ok(v.clone()),
        };
        v.expect("document bodies serialize")
    }

    /// Canonical pretty-printed JSON, newline-terminated.
    pub fn to_json(&self) -> String {
        let doc = serde_json::json!({
            "kind": self.kind(),
            "version": SCHEMA_VERSION,
            "body": self.body_value(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        s.push('\n');
        s
    }

    /// Wraps any serializable report.
    pub fn report<T: Serialize>(r: &T) -> Result<Document> {
        serde_json::to_value(r)
            .map(Document::Report)
            .map_err(|e| Error::input(format!("report does not serialize: {e}")))
    }
}
