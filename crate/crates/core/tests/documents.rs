// SPDX-License-Identifier: Apache-2.0

mod common;

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use serde_json::json;

use aacts::document::{parse_document, Document};
use aacts::dot::{export_dot, system_components, DotView};
use aacts::random::{random_cts_system, random_global_aa, random_local_aa, random_product_dfa, AaShape, CtsShape};
use aacts::switching::SingleParams;
use aacts::{gen_single, AsyncAutomaton, Error, Limits};

use common::{lib_language, rules};

fn fix1_doc() -> Document {
    Document::CtsSystem(gen_single(SingleParams::new(3)).unwrap().into_system())
}

fn canonical(d: &Document) -> Result<(), TestCaseError> {
    let text = d.to_json();
    let back = parse_document(&text).unwrap();
    prop_assert_eq!(&back, d);
    prop_assert_eq!(back.to_json(), text);
    Ok(())
}

fn one_state_loop() -> serde_json::Value {
    json!({
        "kind": "local-aa",
        "version": "1",
        "body": {
            "alphabet": {"processes": ["p"], "letters": [{"name": "a", "dom": ["p"]}]},
            "local_states": [{"process": "p", "states": ["s"], "initial": "s"}],
            "transitions": [{"process": "p", "from": "s", "letter": "a", "to": "s"}]
        }
    })
}

#[test]
fn fix1_round_trips() {
    let d = fix1_doc();
    let text = d.to_json();
    let Document::CtsSystem(back) = parse_document(&text).unwrap() else {
        panic!("kind changed");
    };
    let Document::CtsSystem(sys) = &d else { unreachable!() };
    assert_eq!(lib_language(&back, 3), lib_language(sys, 3));
    assert_eq!(Document::CtsSystem(back).to_json(), text);
}

#[test]
fn listening_is_checked_with_a_location() {
    let mut v: serde_json::Value = serde_json::from_str(&fix1_doc().to_json()).unwrap();
    // p1 no longer listens to anything in its initial state.
    v["body"]["components"][0]["states"][0]["listen"] = json!([]);
    match parse_document(&v.to_string()).unwrap_err() {
        Error::Integrity { path, .. } => assert!(path.starts_with("/body/components/0/transitions/"), "{path}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_kinds_and_fields() {
    let mut v = one_state_loop();
    v["kind"] = json!("petri-net");
    assert!(matches!(parse_document(&v.to_string()), Err(Error::Schema { path, .. }) if path == "/kind"));

    let mut v = one_state_loop();
    v["body"]["colour"] = json!("red");
    let e = parse_document(&v.to_string()).unwrap_err();
    assert!(matches!(&e, Error::Schema { .. }), "{e}");
    assert!(e.to_string().contains("colour"), "{e}");

    let mut v = one_state_loop();
    v["extra"] = json!(1);
    assert!(matches!(parse_document(&v.to_string()), Err(Error::Schema { path, .. }) if path == "/extra"));

    let mut v = one_state_loop();
    v["body"]["local_states"][0]["states"] = json!([7]);
    let e = parse_document(&v.to_string()).unwrap_err();
    assert!(matches!(e, Error::Schema { path, .. } if path == "/body/local_states/0/states/0"));
}

#[test]
fn accepting_is_read_and_ignored() {
    let plain = parse_document(&one_state_loop().to_string()).unwrap();
    let mut v = one_state_loop();
    v["body"]["accepting"] = json!(["whatever", 3]);
    let with = parse_document(&v.to_string()).unwrap();
    assert_eq!(with, plain);
    assert!(!with.to_json().contains("accepting"));
}

#[test]
fn dot_is_deterministic() {
    let d = fix1_doc();
    let lim = Limits::default();
    for view in [DotView::Component, DotView::Composed] {
        assert_eq!(export_dot(&d, view, lim).unwrap(), export_dot(&fix1_doc(), view, lim).unwrap());
    }
    let alphabet = Document::Alphabet(random_product_dfa(1).unwrap().alphabet().clone());
    assert!(export_dot(&alphabet, DotView::Component, lim).is_err());
}

#[test]
fn dot_nodes_are_the_local_closure() {
    // States p1 can reach by its own moves on any channel.
    let m = 4;
    let start = rules::initial(3)[0].clone();
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        for ch in 1..=m {
            for t in rules::moves(m, &s, ch) {
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
    }
    let Document::CtsSystem(sys) = fix1_doc() else { unreachable!() };
    let dot = system_components(&sys);
    let nodes = dot
        .lines()
        .filter(|l| l.trim_start().starts_with("c0_") && l.contains("[label=") && !l.contains("->"))
        .count();
    assert_eq!(nodes, seen.len());
}

#[test]
fn one_state_loop_draws_one_node_and_one_edge() {
    let d = parse_document(&one_state_loop().to_string()).unwrap();
    for view in [DotView::Component, DotView::Composed] {
        let dot = export_dot(&d, view, Limits::default()).unwrap();
        let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
        let edges = dot.lines().filter(|l| l.contains("->") && !l.contains("init")).count();
        assert_eq!((nodes, edges), (1, 1), "{dot}");
    }
}

proptest! {
    #[test]
    fn documents_are_canonical(seed in 0u64..5_000) {
        let dfa = random_product_dfa(seed).unwrap();
        canonical(&Document::Alphabet(dfa.alphabet().clone()))?;
        canonical(&Document::Dfa(dfa))?;
        let aa = random_global_aa(seed, &AaShape::default()).unwrap();
        prop_assert!(aa.alphabet().letter_count() > 0);
        canonical(&Document::GlobalAa(aa))?;
        canonical(&Document::LocalAa(random_local_aa(seed, &AaShape::default()).unwrap()))?;
        let sys = random_cts_system(seed, &CtsShape::default()).unwrap();
        canonical(&Document::Cts(sys.components()[0].clone()))?;
        canonical(&Document::CtsSystem(sys))?;
        canonical(&Document::Report(json!({"seed": seed, "words": [["a"], []]})))?;
    }
}
