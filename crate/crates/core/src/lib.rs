// SPDX-License-Identifier: Apache-2.0

//! Zielonka asynchronous automata over distributed alphabets, channeled
//! transition systems with per-state listening sets, language-preserving
//! translations between the two, generators for the switching-channel
//! families and the analyses used to classify processes of fixed-topology
//! automata.

pub mod alphabet;
pub mod analysis;
pub mod automata;
pub mod cts;
pub mod document;
pub mod dot;
pub mod error;
pub mod explore;
pub mod graph;
pub mod random;
pub mod switching;
pub mod translate;

pub use alphabet::{Channel, DistributedAlphabet, Letter, LetterSet, ProcessId, Word};
pub use automata::{AsyncAutomaton, Automaton, GlobalAA, GlobalConfig, LocalAA, LocalStates, StateId};
pub use cts::{compose, ComposedCts, Cts, CtsTransition};
pub use error::{Error, Result};
pub use explore::{language_upto, Limits, TransitionSystem};
pub use switching::{gen_double, gen_single, switching_schedule, DoubleSwitching, SingleSwitching};
pub use translate::{aa_to_cts, cts_to_aa, cts_to_aa_executor, cts_to_laa, laa_to_cts, ExecutorChoice, NondeterminismPolicy};
