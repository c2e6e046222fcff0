// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;

use aacts::random::{random_cts_system, random_global_aa, random_local_aa, AaShape, CtsShape};
use aacts::switching::SingleParams;
use aacts::{
    aa_to_cts, compose, cts_to_aa, cts_to_aa_executor, cts_to_laa, gen_single, laa_to_cts, AsyncAutomaton, Cts,
    CtsTransition, DistributedAlphabet, Error, ExecutorChoice, GlobalAA, Letter, LetterSet, Limits, LocalAA,
    LocalStates, NondeterminismPolicy, ProcessId,
};

use common::{aa_oracle, cts_oracle, laa_oracle, lib_language};

fn lim() -> Limits {
    Limits::default()
}

fn joint_letter() -> GlobalAA {
    let al = DistributedAlphabet::new(
        vec!["p".into(), "q".into()],
        vec![("a".into(), vec![ProcessId(0), ProcessId(1)])],
    )
    .unwrap();
    let locals = vec![
        LocalStates::new(vec!["x".into(), "x2".into()], 0),
        LocalStates::new(vec!["y".into(), "y2".into()], 0),
    ];
    GlobalAA::new(al, locals, [(Letter(0), vec![0, 0], vec![1, 1])]).unwrap()
}

#[test]
fn joint_letters_exchange_states_as_content() {
    let comps = aa_to_cts(&joint_letter()).unwrap();
    for c in &comps {
        assert_eq!(c.transitions().len(), 1);
        let t = c.transitions()[0];
        assert!(c.contents()[t.content as usize].contains('x'));
        assert!(c.contents()[t.content as usize].contains('y'));
        // Listening never depends on the state.
        for s in 0..c.state_count() as u32 {
            assert_eq!(c.listen(s), LetterSet::singleton(Letter(0)));
        }
    }
    let sys = compose(comps).unwrap();
    assert_eq!(lib_language(&sys, 3), aa_oracle(&joint_letter(), 3));
}

#[test]
fn local_joint_letter_needs_both_moves() {
    let al = DistributedAlphabet::new(
        vec!["p".into(), "q".into()],
        vec![("a".into(), vec![ProcessId(0), ProcessId(1)])],
    )
    .unwrap();
    let locals = vec![LocalStates::new(vec!["s".into()], 0), LocalStates::new(vec!["t".into()], 0)];
    let both = LocalAA::new(al.clone(), locals.clone(), [(ProcessId(0), 0, Letter(0), 0), (ProcessId(1), 0, Letter(0), 0)]).unwrap();
    let one = LocalAA::new(al, locals, [(ProcessId(0), 0, Letter(0), 0)]).unwrap();
    let sys = compose(laa_to_cts(&both).unwrap()).unwrap();
    assert_eq!(lib_language(&sys, 2).len(), 3);
    let sys = compose(laa_to_cts(&one).unwrap()).unwrap();
    assert_eq!(lib_language(&sys, 2).len(), 1);
}

#[test]
fn complete_domain_and_stuttering() {
    // Only p1 ever listens to channel "c"; p2 keeps its state.
    let p1 = Cts::new(
        "p1",
        vec!["c".into()],
        vec!["t".into()],
        vec!["a".into(), "b".into()],
        0,
        vec![LetterSet::singleton(Letter(0)); 2],
        [CtsTransition { from: 0, content: 0, channel: Letter(0), to: 1 }],
    )
    .unwrap();
    let p2 = Cts::new("p2", vec!["c".into()], vec!["t".into()], vec!["z".into()], 0, vec![LetterSet::empty()], []).unwrap();
    let sys = compose(vec![p1, p2]).unwrap();
    let aa = cts_to_aa(&sys, NondeterminismPolicy::Reject, lim()).unwrap();
    assert_eq!(aa.alphabet().dom(Letter(0)), &[ProcessId(0), ProcessId(1)]);
    assert_eq!(aa.transitions(Letter(0)).get(&vec![0, 0]), Some(&vec![1, 0]));
    let laa = cts_to_laa(&sys, lim()).unwrap();
    // p1 listens in "b" without a move, so the letter is refused there.
    assert_eq!(laa.local_step(ProcessId(0), 1, Letter(0)), None);
    assert_eq!(laa.local_step(ProcessId(1), 0, Letter(0)), Some(0));
    assert_eq!(laa_oracle(&laa, 3), cts_oracle(&sys, 3));
}

#[test]
fn several_moves_are_not_a_local_transition() {
    let fork = Cts::new(
        "p",
        vec!["c".into()],
        vec!["t".into()],
        vec!["a".into(), "b".into()],
        0,
        vec![LetterSet::singleton(Letter(0)); 2],
        [
            CtsTransition { from: 0, content: 0, channel: Letter(0), to: 0 },
            CtsTransition { from: 0, content: 0, channel: Letter(0), to: 1 },
        ],
    )
    .unwrap();
    let sys = compose(vec![fork]).unwrap();
    assert!(matches!(cts_to_laa(&sys, lim()), Err(Error::Nondeterminism(_))));
    assert!(matches!(cts_to_aa(&sys, NondeterminismPolicy::Reject, lim()), Err(Error::Nondeterminism(_))));
    let picked = cts_to_aa(&sys, NondeterminismPolicy::LexMin, lim()).unwrap();
    assert_eq!(aa_oracle(&picked, 3), cts_oracle(&sys, 3));
}

#[test]
fn fix1_translations_keep_the_language() {
    let fix1 = gen_single(SingleParams::new(3)).unwrap();
    let sys = fix1.system();
    let expected = cts_oracle(sys, 5);
    let aa = cts_to_aa(sys, NondeterminismPolicy::Reject, lim()).unwrap();
    assert_eq!(lib_language(&aa, 5), expected);
    assert_eq!(aa_oracle(&aa, 5), expected);
    let laa = cts_to_laa(sys, lim()).unwrap();
    assert_eq!(laa_oracle(&laa, 5), expected);

    let all = sys.all_channels();
    let loud = ExecutorChoice::new(ProcessId(0))
        .with_listen_set(ProcessId(1), all)
        .with_listen_set(ProcessId(2), all);
    for choice in [ExecutorChoice::new(ProcessId(0)), loud] {
        let b = cts_to_aa_executor(sys, &choice, NondeterminismPolicy::Reject, lim()).unwrap();
        assert_eq!(aa_oracle(&b, 5), expected);
        // Non-executors take every letter they hear, from their one state.
        for p in [ProcessId(1), ProcessId(2)] {
            assert_eq!(b.local_states(p).len(), 1);
            let slot = |a: Letter| b.alphabet().dom(a).iter().position(|&q| q == p);
            for a in b.alphabet().dom_inv(p).iter() {
                let i = slot(a).unwrap();
                assert!(b.transitions(a).keys().all(|from| from[i] == 0));
            }
        }
    }
}

#[test]
fn lone_executor() {
    let sys = random_cts_system(3, &CtsShape { max_components: 1, ..CtsShape::default() }).unwrap();
    let b = cts_to_aa_executor(&sys, &ExecutorChoice::new(ProcessId(0)), NondeterminismPolicy::Reject, lim()).unwrap();
    assert_eq!(aa_oracle(&b, 5), cts_oracle(&sys, 5));
}

#[test]
fn executor_choice_is_checked() {
    let sys = random_cts_system(1, &CtsShape::default()).unwrap();
    let n = sys.processes().len() as u16;
    let bad = ExecutorChoice::new(ProcessId(n));
    assert!(cts_to_aa_executor(&sys, &bad, NondeterminismPolicy::Reject, lim()).is_err());
}

proptest! {
    #[test]
    fn translations_round_trip(seed in 0u64..5_000, k in 1usize..=6) {
        let aa = random_global_aa(seed, &AaShape::default()).unwrap();
        let sys = compose(aa_to_cts(&aa).unwrap()).unwrap();
        prop_assert_eq!(cts_oracle(&sys, k), aa_oracle(&aa, k));
        for (p, c) in sys.components().iter().enumerate() {
            let dom_inv = aa.alphabet().dom_inv(ProcessId(p as u16));
            for s in 0..c.state_count() as u32 {
                prop_assert_eq!(c.listen(s), dom_inv);
            }
        }

        let laa = random_local_aa(seed, &AaShape::default()).unwrap();
        let sys = compose(laa_to_cts(&laa).unwrap()).unwrap();
        let expected = laa_oracle(&laa, k);
        prop_assert_eq!(cts_oracle(&sys, k), expected.clone());
        prop_assert_eq!(laa_oracle(&cts_to_laa(&sys, lim()).unwrap(), k), expected);
    }

    #[test]
    fn reverse_translation_has_complete_domain(seed in 0u64..5_000) {
        let sys = random_cts_system(seed, &CtsShape::default()).unwrap();
        let aa = cts_to_aa(&sys, NondeterminismPolicy::Reject, lim()).unwrap();
        for a in aa.alphabet().letters() {
            prop_assert_eq!(aa.alphabet().dom(a).len(), sys.processes().len());
        }
        for p in aa.alphabet().processes() {
            prop_assert!(aa.is_fully_listening(p));
        }
        prop_assert_eq!(aa_oracle(&aa, 5), cts_oracle(&sys, 5));
    }
}
