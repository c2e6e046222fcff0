// SPDX-License-Identifier: Apache-2.0

use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aacts::analysis::{self, join_word, Equivalence, Verdict, WitnessOptions, WitnessStatus};
use aacts::document::{parse_document, Document};
use aacts::dot::{export_dot, DotView};
use aacts::explore::{language_upto, run_word, RunOutcome, TransitionSystem};
use aacts::random;
use aacts::switching::{
    gen_double, gen_single, switching_schedule, CyclePolicy, DoubleParams, DoubleSwitching, OrderPolicy,
    RotationPolicy, SingleParams, SingleSwitching,
};
use aacts::translate::{self, ExecutorChoice, NondeterminismPolicy};
use aacts::{compose, AsyncAutomaton, Error, GlobalAA, LetterSet, Limits, ProcessId};

#[derive(Parser)]
#[command(name = "aacts", version, about = "Asynchronous automata and channeled transition systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a machine and print it as a JSON document.
    #[command(subcommand)]
    Gen(Gen),
    /// Compose cts documents into one cts-system document.
    Compose { inputs: Vec<String> },
    /// Translate between automata and channeled systems.
    Translate(TranslateArgs),
    /// Run a word; exits 1 if it is refused.
    Run {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// List every word of length at most --max-len.
    Lang {
        input: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Compare bounded languages; exits 1 with a distinguishing word.
    Equiv {
        first: String,
        second: String,
        #[arg(long)]
        max_len: usize,
    },
    /// Classify processes as fully-listening or trivializable.
    Analyze {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long = "process")]
        processes: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Drive a single-switching reference system and check a process's extensions.
    Witness {
        input: String,
        #[arg(long)]
        process: String,
        #[arg(long = "ref")]
        reference: String,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value_t = 4)]
        ext_len: usize,
        /// Bound of the language-equality precondition (0 skips it).
        #[arg(long, default_value_t = 5)]
        equiv_len: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the (sc, D) table of a single-switching system.
    Schedule {
        #[arg(long, conflicts_with = "input")]
        n: Option<usize>,
        #[arg(long)]
        input: Option<String>,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Order::SizeLex)]
        order: Order,
        #[arg(long, value_enum, default_value_t = SingleCycle::Index)]
        cycle: SingleCycle,
    },
    /// Graphviz rendering.
    Export {
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value_t = View::Component)]
        view: View,
    },
    /// Parse and check a document.
    Validate {
        #[arg(default_value = "-")]
        input: String,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Single switching channel, n processes and n+1 channels.
    Single {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Order::SizeLex)]
        order: Order,
        #[arg(long, value_enum, default_value_t = SingleCycle::Index)]
        cycle: SingleCycle,
    },
    /// Toggling and highlighting channels, n processes and n+2 channels.
    Double {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = DoubleCycle::Index)]
        cycle: DoubleCycle,
    },
    RandomAa {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    RandomLaa {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    RandomCts {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Product DFA over independent components.
    RandomDfa {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb it until independent letters stop commuting.
        #[arg(long)]
        violation: bool,
    },
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(value_enum)]
    mode: Mode,
    #[arg(default_value = "-")]
    input: String,
    #[arg(long)]
    executor: Option<String>,
    /// Listening set of a non-executor, as `process=ch,ch`.
    #[arg(long = "listen")]
    listen: Vec<String>,
    #[arg(long, value_enum, default_value_t = Nondet::Reject)]
    nondeterminism: Nondet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    AaToCts,
    LaaToCts,
    CtsToAa,
    CtsToLaa,
    CtsToAaExecutor,
}

#[derive(Clone, Copy, ValueEnum)]
enum Nondet {
    Reject,
    LexMin,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    SizeLex,
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum SingleCycle {
    Index,
    Reverse,
}

#[derive(Clone, Copy, ValueEnum)]
enum DoubleCycle {
    Index,
    Disjoint,
}

#[derive(Clone, Copy, ValueEnum)]
enum View {
    Component,
    Composed,
}

/// Exit 1: the question was answered negatively.
struct Negative;

enum Failure {
    Error(Error),
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<Negative> for Failure {
    fn from(_: Negative) -> Self {
        Failure::Negative
    }
}

type Outcome = Result<(), Failure>;

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::input(format!("cannot read standard input: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::input(format!("cannot read '{path}': {e}")))
    }
}

fn load(path: &str) -> Result<Document, Error> {
    parse_document(&read_input(path)?)
}

fn emit(doc: &Document) {
    print!("{}", doc.to_json());
}

fn limits() -> Result<Limits, Error> {
    Limits::from_env()
}

fn single_params(n: usize, order: Order, cycle: SingleCycle) -> SingleParams {
    SingleParams {
        n,
        order: match order {
            Order::SizeLex => OrderPolicy::SizeLex,
            Order::Binary => OrderPolicy::Binary,
        },
        cycle: match cycle {
            SingleCycle::Index => CyclePolicy::Ascending,
            SingleCycle::Reverse => CyclePolicy::Descending,
        },
    }
}

fn warn_collisions(d: &DoubleSwitching) -> Result<(), Error> {
    let found = d.role_collisions(limits()?)?;
    if let Some(first) = found.first() {
        eprintln!(
            "warning: {} reachable configurations let a process own a current switching channel \
             (first: {} owns {} at {})",
            found.len(),
            first.process,
            first.channel,
            first.config
        );
    }
    Ok(())
}

fn gen(g: Gen) -> Outcome {
    let doc = match g {
        Gen::Single { n, order, cycle } => Document::CtsSystem(gen_single(single_params(n, order, cycle))?.into_system()),
        Gen::Double { n, cycle } => {
            let rotation = match cycle {
                DoubleCycle::Index => RotationPolicy::Verbatim,
                DoubleCycle::Disjoint => RotationPolicy::Disjoint,
            };
            let d = gen_double(DoubleParams { n, rotation })?;
            warn_collisions(&d)?;
            Document::CtsSystem(d.into_system())
        }
        Gen::RandomAa { seed } => Document::GlobalAa(random::random_global_aa(seed, &Default::default())?),
        Gen::RandomLaa { seed } => Document::LocalAa(random::random_local_aa(seed, &Default::default())?),
        Gen::RandomCts { seed } => Document::CtsSystem(random::random_cts_system(seed, &Default::default())?),
        Gen::RandomDfa { seed, violation } => Document::Dfa(if violation {
            random::random_diamond_violation(seed)?
        } else {
            random::random_product_dfa(seed)?
        }),
    };
    emit(&doc);
    Ok(())
}

fn system_of(doc: Document) -> Result<aacts::ComposedCts, Error> {
    match doc {
        Document::CtsSystem(s) => Ok(s),
        Document::Cts(c) => compose(vec![c]),
        other => Err(Error::input(format!("expected a cts-system document, got '{}'", other.kind()))),
    }
}

fn translate_cmd(a: TranslateArgs) -> Outcome {
    let doc = load(&a.input)?;
    let policy = match a.nondeterminism {
        Nondet::Reject => NondeterminismPolicy::Reject,
        Nondet::LexMin => NondeterminismPolicy::LexMin,
    };
    let out = match a.mode {
        Mode::AaToCts => match doc {
            Document::GlobalAa(aa) => Document::CtsSystem(compose(translate::aa_to_cts(&aa)?)?),
            other => return Err(Error::input(format!("aa-to-cts needs a global-aa document, got '{}'", other.kind())).into()),
        },
        Mode::LaaToCts => match doc {
            Document::LocalAa(l) => Document::CtsSystem(compose(translate::laa_to_cts(&l)?)?),
            other => return Err(Error::input(format!("laa-to-cts needs a local-aa document, got '{}'", other.kind())).into()),
        },
        Mode::CtsToAa => Document::GlobalAa(translate::cts_to_aa(&system_of(doc)?, policy, limits()?)?),
        Mode::CtsToLaa => Document::LocalAa(translate::cts_to_laa(&system_of(doc)?, limits()?)?),
        Mode::CtsToAaExecutor => {
            let sys = system_of(doc)?;
            let name = a
                .executor
                .ok_or_else(|| Error::input("cts-to-aa-executor needs --executor"))?;
            let proc = |n: &str| {
                sys.process_by_name(n)
                    .map(|i| ProcessId(i as u16))
                    .ok_or_else(|| Error::input(format!("unknown process '{n}'")))
            };
            let mut choice = ExecutorChoice::new(proc(&name)?);
            for spec in &a.listen {
                let (p, chans) = spec
                    .split_once('=')
                    .ok_or_else(|| Error::input(format!("--listen '{spec}' is not process=ch,ch")))?;
                let mut set = LetterSet::empty();
                for c in chans.split(',').filter(|c| !c.is_empty()) {
                    set.insert(
                        sys.channel_by_name(c)
                            .ok_or_else(|| Error::input(format!("unknown channel '{c}'")))?,
                    );
                }
                choice = choice.with_listen_set(proc(p)?, set);
            }
            Document::GlobalAa(translate::cts_to_aa_executor(&sys, &choice, policy, limits()?)?)
        }
    };
    emit(&out);
    Ok(())
}

/// Applies `$body` to the document's machine, bound to `$m`.
macro_rules! with_machine {
    ($doc:expr, $m:ident => $body:expr) => {
        match $doc {
            Document::GlobalAa($m) => $body,
            Document::LocalAa($m) => $body,
            Document::Cts($m) => $body,
            Document::CtsSystem($m) => $body,
            other => {
                return Err(Error::input(format!("a '{}' document cannot be run", other.kind())).into())
            }
        }
    };
}

fn parse_word<M: TransitionSystem>(m: &M, s: &str) -> Result<Vec<aacts::Letter>, Error> {
    let names = m.letter_names();
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            names
                .iter()
                .position(|n| n == t)
                .map(|i| aacts::Letter(i as u16))
                .ok_or_else(|| Error::input(format!("unknown letter '{t}'")))
        })
        .collect()
}

fn run_cmd(input: &str, word: &str) -> Outcome {
    let doc = load(input)?;
    with_machine!(doc, m => {
        let w = parse_word(&m, word)?;
        match run_word(&m, &w) {
            RunOutcome::Completed(states) => {
                println!("accepted {} ({} configuration(s))", m.format_word(&w), states.len());
                Ok(())
            }
            RunOutcome::Blocked { index } => {
                println!("blocked at position {index} ({})", m.letter_names()[w[index].index()]);
                Err(Negative.into())
            }
        }
    })
}

fn lang_cmd(input: &str, k: usize) -> Outcome {
    let doc = load(input)?;
    let lim = limits()?;
    with_machine!(doc, m => {
        let mut words: Vec<_> = language_upto(&m, k, lim)?.into_iter().collect();
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        for w in words {
            println!("{}", m.format_word(&w));
        }
        Ok(())
    })
}

fn equiv_cmd(a: &str, b: &str, k: usize) -> Outcome {
    let lim = limits()?;
    let la = analysis::document_language(&load(a)?, k, lim)?;
    let lb = analysis::document_language(&load(b)?, k, lim)?;
    match analysis::compare_levels(&la, &lb) {
        Equivalence::Equal => {
            println!("equal up to length {k}");
            Ok(())
        }
        Equivalence::Differs { word, in_first } => {
            println!(
                "differ: {} is accepted only by {}",
                join_word(&word),
                if in_first { a } else { b }
            );
            Err(Negative.into())
        }
    }
}

fn automaton(doc: Document) -> Result<GlobalAA, Error> {
    match doc {
        Document::GlobalAa(g) => Ok(g),
        Document::LocalAa(l) => Ok(GlobalAA::from_local(&l)),
        other => Err(Error::input(format!("expected an automaton document, got '{}'", other.kind()))),
    }
}

fn process_id<A: AsyncAutomaton>(a: &A, name: &str) -> Result<ProcessId, Error> {
    a.alphabet()
        .process_by_name(name)
        .ok_or_else(|| Error::input(format!("unknown process '{name}'")))
}

fn analyze_cmd(input: &str, processes: &[String], format: Format) -> Outcome {
    let aa = automaton(load(input)?)?;
    let only = processes
        .iter()
        .map(|p| process_id(&aa, p))
        .collect::<Result<Vec<_>, _>>()?;
    let report = analysis::analyze(&aa, (!only.is_empty()).then_some(only.as_slice()), limits()?)?;
    match format {
        Format::Json => emit(&Document::report(&report)?),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.processes.iter().any(|p| p.verdict == Verdict::NeitherDetected) {
        return Err(Negative.into());
    }
    Ok(())
}

fn witness_cmd(
    input: &str,
    process: &str,
    reference: &str,
    word: &str,
    ext_len: usize,
    equiv_len: usize,
    format: Format,
) -> Outcome {
    let aa = automaton(load(input)?)?;
    let p = process_id(&aa, process)?;
    let reference = SingleSwitching::from_system(system_of(load(reference)?)?)?;
    let w: Vec<String> = word
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(str::to_string)
        .collect();
    let opts = WitnessOptions {
        ext_len,
        equiv_len: (equiv_len > 0).then_some(equiv_len),
    };
    let report = analysis::lemma_witness_drive(&aa, p, &reference, &w, opts, limits()?)?;
    match format {
        Format::Json => emit(&Document::report(&report)?),
        Format::Text => print!("{}", report.to_text()),
    }
    if report.status != WitnessStatus::Success {
        return Err(Negative.into());
    }
    Ok(())
}

fn schedule_cmd(n: Option<usize>, input: Option<String>, steps: usize, order: Order, cycle: SingleCycle) -> Outcome {
    let sys = match (n, input) {
        (_, Some(path)) => SingleSwitching::from_system(system_of(load(&path)?)?)?,
        (n, None) => gen_single(single_params(n.unwrap_or(3), order, cycle))?,
    };
    let names = sys.system().channels();
    println!("step\tsc\tD");
    for (i, (sc, d)) in switching_schedule(&sys, steps)?.into_iter().enumerate() {
        let members: Vec<&str> = d.iter().map(|c| names[c.index()].as_str()).collect();
        println!("{i}\t{}\t{{{}}}", names[sc.index()], members.join(","));
    }
    Ok(())
}

fn validate_cmd(input: &str) -> Outcome {
    let doc = load(input)?;
    if let Document::CtsSystem(sys) = &doc {
        if let Ok(d) = DoubleSwitching::from_system(sys.clone()) {
            warn_collisions(&d)?;
        }
    }
    println!("valid {}", doc.kind());
    Ok(())
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Gen(g) => gen(g),
        Command::Compose { inputs } => {
            if inputs.is_empty() {
                return Err(Error::input("compose needs at least one cts document").into());
            }
            let mut comps = Vec::new();
            for path in &inputs {
                match load(path)? {
                    Document::Cts(c) => comps.push(c),
                    Document::CtsSystem(s) => comps.extend(s.into_components()),
                    other => {
                        return Err(Error::input(format!("'{path}' is a '{}' document, not cts", other.kind())).into())
                    }
                }
            }
            emit(&Document::CtsSystem(compose(comps)?));
            Ok(())
        }
        Command::Translate(a) => translate_cmd(a),
        Command::Run { input, word } => run_cmd(&input, &word),
        Command::Lang { input, max_len } => lang_cmd(&input, max_len),
        Command::Equiv { first, second, max_len } => equiv_cmd(&first, &second, max_len),
        Command::Analyze { input, processes, format } => analyze_cmd(&input, &processes, format),
        Command::Witness {
            input,
            process,
            reference,
            word,
            ext_len,
            equiv_len,
            format,
        } => witness_cmd(&input, &process, &reference, &word, ext_len, equiv_len, format),
        Command::Schedule {
            n,
            input,
            steps,
            order,
            cycle,
        } => schedule_cmd(n, input, steps, order, cycle),
        Command::Export { input, view } => {
            let view = match view {
                View::Component => DotView::Component,
                View::Composed => DotView::Composed,
            };
            print!("{}", export_dot(&load(&input)?, view, limits()?)?);
            Ok(())
        }
        Command::Validate { input } => validate_cmd(&input),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource() { 3 } else { 2 })
        }
    }
}
