// SPDX-License-Identifier: Apache-2.0

//! Graphviz export. Nodes and edges are emitted in index order so output
//! is byte-identical across runs.

use std::fmt::Write;

use crate::alphabet::Dfa;
use crate::automata::{AsyncAutomaton, LocalAA, StateId};
use crate::cts::{ComposedCts, Cts};
use crate::document::Document;
use crate::error::{Error, Result};
use crate::explore::{reachable, Limits};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DotView {
    /// One graph per component or process.
    #[default]
    Component,
    /// The reachable configurations of the whole machine.
    Composed,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn component_body(out: &mut String, c: &Cts, prefix: &str, indent: &str) {
    let ch = c.channels();
    let _ = writeln!(out, "{indent}{prefix}init [shape=point];");
    for (i, s) in c.states().iter().enumerate() {
        let listen: Vec<&str> = c.listen(i as StateId).iter().map(|l| ch[l.index()].as_str()).collect();
        let label = format!("{s}\\nlisten {{{}}}", listen.join(","));
        let _ = writeln!(out, "{indent}{prefix}{i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    let _ = writeln!(out, "{indent}{prefix}init -> {prefix}{};", c.initial());
    for t in c.transitions() {
        let label = if c.contents().len() == 1 {
            ch[t.channel.index()].clone()
        } else {
            format!("{}/{}", ch[t.channel.index()], c.contents()[t.content as usize])
        };
        let _ = writeln!(out, "{indent}{prefix}{} -> {prefix}{} [label={}];", t.from, t.to, quote(&label));
    }
}

pub fn cts_component(c: &Cts) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n  node [shape=box];\n", quote(c.name()));
    component_body(&mut out, c, "n", "  ");
    out.push_str("}\n");
    out
}

pub fn system_components(sys: &ComposedCts) -> String {
    let mut out = String::from("digraph system {\n  rankdir=LR;\n  node [shape=box];\n");
    for (k, c) in sys.components().iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{k} {{\n    label={};", quote(c.name()));
        component_body(&mut out, c, &format!("c{k}_"), "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

pub fn system_composed(sys: &ComposedCts, limits: Limits) -> Result<String> {
    let g = reachable(sys, limits)?;
    let ch = sys.channels();
    let mut out = String::from("digraph composed {\n  rankdir=LR;\n  node [shape=box];\n  init [shape=point];\n");
    for (i, cfg) in g.states.iter().enumerate() {
        let label = format!(
            "{}\\nenabled {}",
            sys.format_config(cfg),
            sys.format_channels(sys.enabled_channels(cfg))
        );
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", label.replace('"', "\\\""));
    }
    out.push_str("  init -> n0;\n");
    for (i, edges) in g.edges.iter().enumerate() {
        for &(c, j) in edges {
            let _ = writeln!(out, "  n{i} -> n{j} [label={}];", quote(&ch[c.index()]));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn automaton_composed<A: AsyncAutomaton>(a: &A, limits: Limits) -> Result<String> {
    let g = reachable(a, limits)?;
    let names = a.letter_names();
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=box];\n  init [shape=point];\n");
    for (i, cfg) in g.states.iter().enumerate() {
        let _ = writeln!(out, "  n{i} [label={}];", quote(&a.format_config(cfg)));
    }
    out.push_str("  init -> n0;\n");
    for (i, edges) in g.edges.iter().enumerate() {
        for &(l, j) in edges {
            let _ = writeln!(out, "  n{i} -> n{j} [label={}];", quote(&names[l.index()]));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn local_components(laa: &LocalAA) -> String {
    let al = laa.alphabet();
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    for p in al.processes() {
        let k = p.index();
        let ls = &laa.locals()[k];
        let _ = writeln!(out, "  subgraph cluster_{k} {{\n    label={};", quote(al.process_name(p)));
        let _ = writeln!(out, "    p{k}_init [shape=point];");
        for (i, s) in ls.names.iter().enumerate() {
            let _ = writeln!(out, "    p{k}_{i} [label={}];", quote(s));
        }
        let _ = writeln!(out, "    p{k}_init -> p{k}_{};", ls.initial);
        for (s, a, t) in laa.local_transitions(p) {
            let _ = writeln!(out, "    p{k}_{s} -> p{k}_{t} [label={}];", quote(al.letter_name(a)));
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}

pub fn dfa(d: &Dfa) -> String {
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
    for (i, s) in d.states().iter().enumerate() {
        let shape = if d.accepting().contains(&i) { "doublecircle" } else { "circle" };
        let _ = writeln!(out, "  n{i} [label={}, shape={shape}];", quote(s));
    }
    let _ = writeln!(out, "  init -> n{};", d.initial());
    for (q, a, r) in d.transitions() {
        let _ = writeln!(out, "  n{q} -> n{r} [label={}];", quote(d.alphabet().letter_name(a)));
    }
    out.push_str("}\n");
    out
}

pub fn export_dot(doc: &Document, view: DotView, limits: Limits) -> Result<String> {
    match (doc, view) {
        (Document::Cts(c), _) => Ok(cts_component(c)),
        (Document::CtsSystem(s), DotView::Component) => Ok(system_components(s)),
        (Document::CtsSystem(s), DotView::Composed) => system_composed(s, limits),
        (Document::LocalAa(l), DotView::Component) => Ok(local_components(l)),
        (Document::LocalAa(l), DotView::Composed) => automaton_composed(l, limits),
        (Document::GlobalAa(g), _) => automaton_composed(g, limits),
        (Document::Dfa(d), _) => Ok(dfa(d)),
        (other, _) => Err(Error::input(format!("cannot draw a '{}' document", other.kind()))),
    }
}
