// SPDX-License-Identifier: Apache-2.0

mod common;

use proptest::prelude::*;

use aacts::analysis::{
    analyze, equiv_upto, lemma_witness_drive, trivializable, Equivalence, Verdict, WitnessOptions, WitnessStatus,
};
use aacts::explore::run_word;
use aacts::random::{random_global_aa, AaShape};
use aacts::switching::SingleParams;
use aacts::{
    cts_to_aa, cts_to_aa_executor, gen_single, AsyncAutomaton, DistributedAlphabet, ExecutorChoice, GlobalAA,
    Letter, LetterSet, Limits, LocalStates, NondeterminismPolicy, ProcessId,
};

use common::{aa_oracle, cts_oracle};

fn lim() -> Limits {
    Limits::default()
}

fn loop_aa(extra: bool) -> GlobalAA {
    let mut letters = vec![("a".to_string(), vec![ProcessId(0)])];
    if extra {
        letters.push(("z".into(), vec![ProcessId(0)]));
    }
    let al = DistributedAlphabet::new(vec!["p".into()], letters).unwrap();
    GlobalAA::new(al, vec![LocalStates::new(vec!["s".into()], 0)], [(Letter(0), vec![0], vec![0])]).unwrap()
}

/// p owns `a`, q owns `c`, and `b` is shared. p loops on `a` and `b` from s0.
fn shared_loop() -> GlobalAA {
    let (p, q) = (ProcessId(0), ProcessId(1));
    let al = DistributedAlphabet::new(
        vec!["p".into(), "q".into()],
        vec![("a".into(), vec![p]), ("b".into(), vec![p, q]), ("c".into(), vec![q])],
    )
    .unwrap();
    let locals = vec![
        LocalStates::new(vec!["s0".into(), "s1".into()], 0),
        LocalStates::new(vec!["t0".into(), "t1".into()], 0),
    ];
    GlobalAA::new(
        al,
        locals,
        [
            (Letter(0), vec![0], vec![0]),
            (Letter(1), vec![0, 0], vec![0, 0]),
            (Letter(2), vec![0], vec![1]),
        ],
    )
    .unwrap()
}

#[test]
fn translation_is_equivalent() {
    let fix1 = gen_single(SingleParams::new(3)).unwrap();
    let aa = cts_to_aa(fix1.system(), NondeterminismPolicy::Reject, lim()).unwrap();
    assert_eq!(equiv_upto(fix1.system(), &aa, 4, lim()).unwrap(), Equivalence::Equal);
}

#[test]
fn unused_letters_do_not_matter() {
    assert!(equiv_upto(&loop_aa(false), &loop_aa(true), 4, lim()).unwrap().is_equal());
}

#[test]
fn a_deleted_transition_is_found() {
    let fix1 = gen_single(SingleParams::new(3)).unwrap();
    let mut aa = cts_to_aa(fix1.system(), NondeterminismPolicy::Reject, lim()).unwrap();
    let from = aa.transitions(Letter(1)).keys().next().unwrap().clone();
    assert!(aa.remove_transition(Letter(1), &from));

    let k = 4;
    let (x, y) = (cts_oracle(fix1.system(), k), aa_oracle(&aa, k));
    let expect = x.symmetric_difference(&y).min_by(|u, v| u.len().cmp(&v.len()).then(u.cmp(v))).unwrap().clone();
    match equiv_upto(fix1.system(), &aa, k, lim()).unwrap() {
        Equivalence::Differs { word, in_first } => {
            assert_eq!(word, expect);
            assert!(in_first);
        }
        Equivalence::Equal => panic!("deletion not detected"),
    }
}

/// p1 executes; p2 and p3 hear only their own channels.
fn own_channels() -> ExecutorChoice {
    ExecutorChoice::new(ProcessId(0))
        .with_listen_set(ProcessId(1), LetterSet::singleton(Letter(1)))
        .with_listen_set(ProcessId(2), LetterSet::singleton(Letter(2)))
}

#[test]
fn executor_images_pass_the_witness() {
    let fix1 = gen_single(SingleParams::new(3)).unwrap();
    let mut drives = 0;
    for choice in [ExecutorChoice::new(ProcessId(0)), own_channels()] {
        let b = cts_to_aa_executor(fix1.system(), &choice, NondeterminismPolicy::Reject, lim()).unwrap();
        for p in b.alphabet().processes() {
            if b.is_fully_listening(p) {
                continue;
            }
            let r = lemma_witness_drive(&b, p, &fix1, &[], WitnessOptions::default(), lim()).unwrap();
            assert_eq!(r.status, WitnessStatus::Success, "{}", r.to_text());
            drives += 1;
        }
    }
    assert_eq!(drives, 4);
}

#[test]
fn fully_listening_machines_fail_the_precondition() {
    let fix1 = gen_single(SingleParams::new(3)).unwrap();
    let aa = cts_to_aa(fix1.system(), NondeterminismPolicy::Reject, lim()).unwrap();
    let r = lemma_witness_drive(&aa, ProcessId(1), &fix1, &[], WitnessOptions::default(), lim()).unwrap();
    assert_eq!(r.status, WitnessStatus::PreconditionFailed);
    let report = analyze(&aa, None, lim()).unwrap();
    assert!(report.processes.iter().all(|p| p.verdict == Verdict::FullyListening));
}

#[test]
fn a_broken_image_is_blocked() {
    let fix1 = gen_single(SingleParams::new(3)).unwrap();
    let mut b = cts_to_aa_executor(fix1.system(), &own_channels(), NondeterminismPolicy::Reject, lim()).unwrap();
    let p2 = ProcessId(1);
    assert!(!b.is_fully_listening(p2));
    // Channel 2 belongs to p2; refuse it everywhere.
    let two = b.alphabet().letter_by_name("2").unwrap();
    let keys: Vec<_> = b.transitions(two).keys().cloned().collect();
    for k in keys {
        b.remove_transition(two, &k);
    }
    let opts = WitnessOptions { ext_len: 4, equiv_len: None };
    let r = lemma_witness_drive(&b, p2, &fix1, &[], opts, lim()).unwrap();
    assert_eq!(r.status, WitnessStatus::ExtensionBlocked, "{}", r.to_text());
    let blocked = r.blocked_word.unwrap();
    let letters = b.alphabet().parse_word(&blocked.join(" ")).unwrap();
    assert!(!run_word(&b, &letters).is_completed());
}

#[test]
fn trivializable_and_stuck_processes() {
    let aa = shared_loop();
    let (yes, report) = trivializable(&aa, ProcessId(0), lim()).unwrap();
    assert!(yes);
    assert_eq!(report.complete_bottom_sccs, vec![vec!["s0".to_string()]]);
    assert!(!report.witnesses.is_empty());

    // One more transition sends p to s1, where it refuses everything, so s0
    // is no longer bottom and nothing is complete.
    let mut blocker = shared_loop();
    blocker.set_transition(Letter(1), vec![0, 1], vec![1, 1]).unwrap();
    let (yes, report) = trivializable(&blocker, ProcessId(0), lim()).unwrap();
    assert!(!yes);
    assert_eq!(report.verdict, Verdict::NeitherDetected);
    assert!(report.complete_bottom_sccs.is_empty());
    let stuck = report.stuck.unwrap();
    assert_eq!((stuck.local_state.as_str(), stuck.access.len()), ("s0", 0));
}

#[test]
fn reports_render() {
    let report = analyze(&shared_loop(), None, lim()).unwrap();
    assert_eq!(report.reachable_configs, 2);
    // q ends in t1 with no move at all.
    let verdicts: Vec<Verdict> = report.processes.iter().map(|p| p.verdict).collect();
    assert_eq!(verdicts, vec![Verdict::Trivializable, Verdict::NeitherDetected]);
    assert!(!report.all_classified());
    let text = report.to_text();
    assert!(text.contains("trivializable"), "{text}");
}

proptest! {
    /// Self-loops on letters only p reads keep every reachable
    /// configuration and can only make p's bottom components complete.
    #[test]
    fn private_self_loops_keep_trivializability(seed in 0u64..5_000) {
        let aa = random_global_aa(seed, &AaShape::default()).unwrap();
        let al = aa.alphabet().clone();
        for p in al.processes() {
            let (before, _) = trivializable(&aa, p, lim()).unwrap();
            let mut grown = aa.clone();
            for a in al.letters().filter(|&a| al.dom(a) == [p]) {
                for s in 0..aa.local_states(p).len() as u32 {
                    if !aa.transitions(a).contains_key(&vec![s]) {
                        grown.set_transition(a, vec![s], vec![s]).unwrap();
                    }
                }
            }
            let (after, _) = trivializable(&grown, p, lim()).unwrap();
            prop_assert!(!before || after);
        }
    }
}
