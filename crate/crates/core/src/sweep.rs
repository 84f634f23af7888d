//! Parallel, resumable execution of verification suites.
//!
//! Tasks are split into contiguous blocks, one per worker. Workers own their
//! scratch buffers and send finished records over a channel; the calling
//! thread is the single point that writes to the sink.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::Instant;

use crate::casework::PairCounter;
use crate::discriminator::InjectivityScanner;
use crate::error::Result;
use crate::report::{completed_keys, record_key, Expectation, Params, RecordSink, VerificationRecord};

/// Result of evaluating one task.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub computed: String,
    pub expected: String,
    pub pass: bool,
}

impl Outcome {
    /// Exact comparison of two rendered values.
    pub fn exact(computed: impl ToString, expected: impl ToString) -> Self {
        let (computed, expected) = (computed.to_string(), expected.to_string());
        let pass = computed == expected;
        Outcome { computed, expected, pass }
    }

    /// An inequality check; the rendered strings describe it.
    pub fn holds(holds: bool) -> Self {
        Outcome {
            computed: if holds { "holds" } else { "fails" }.into(),
            expected: "holds".into(),
            pass: holds,
        }
    }

    pub fn with_values(computed: String, expected: String, pass: bool) -> Self {
        Outcome { computed, expected, pass }
    }
}

/// Per-worker reusable buffers.
#[derive(Default)]
pub struct Scratch {
    pub scanner: InjectivityScanner,
    pub pairs: PairCounter,
}

pub trait Suite: Sync {
    /// Value of the `suite` field in emitted records.
    fn id(&self) -> &str;

    fn tasks(&self) -> Vec<Params>;

    fn evaluate(&self, params: &Params, scratch: &mut Scratch) -> Outcome;

    fn expectation(&self, _params: &Params) -> Expectation {
        Expectation::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Failures the suite anticipates at its boundary.
    pub expected_failures: usize,
    /// Records contradicting their suite's expectation.
    pub nonconforming: usize,
    /// Records taken from a previous log instead of recomputed.
    pub resumed: usize,
}

impl RunSummary {
    pub fn all_conforming(&self) -> bool {
        self.nonconforming == 0
    }

    fn absorb(&mut self, expectation: Expectation, pass: bool) {
        self.total += 1;
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
            if expectation != Expectation::Pass && expectation.conforms(false) {
                self.expected_failures += 1;
            }
        }
        if !expectation.conforms(pass) {
            self.nonconforming += 1;
        }
    }
}

/// Runs `suites` over `workers` threads, skipping any task already present in
/// `prior`. Prior records of these suites count toward the summary, so a
/// resumed run reports the same totals as an uninterrupted one.
pub fn run_suites(
    suites: &[&dyn Suite],
    workers: usize,
    prior: &[VerificationRecord],
    sink: &mut dyn RecordSink,
) -> Result<RunSummary> {
    let workers = workers.max(1);
    let done = completed_keys(prior);
    let by_id: HashMap<&str, &dyn Suite> = suites.iter().map(|s| (s.id(), *s)).collect();

    let mut summary = RunSummary::default();
    let mut seen = std::collections::HashSet::new();
    for record in prior {
        if let Some(suite) = by_id.get(record.suite.as_str()) {
            if seen.insert(record.key()) {
                summary.absorb(suite.expectation(&record.params), record.pass);
                summary.resumed += 1;
            }
        }
    }

    let mut tasks: Vec<(usize, Params)> = Vec::new();
    for (idx, suite) in suites.iter().enumerate() {
        for p in suite.tasks() {
            let key = record_key(suite.id(), &p);
            if !done.contains(&key) && seen.insert(key) {
                tasks.push((idx, p));
            }
        }
    }

    let evaluate = |idx: usize, p: &Params, scratch: &mut Scratch, worker: u32| {
        let suite = suites[idx];
        let start = Instant::now();
        let outcome = suite.evaluate(p, scratch);
        VerificationRecord {
            suite: suite.id().to_string(),
            params: p.clone(),
            computed: outcome.computed,
            expected: outcome.expected,
            pass: outcome.pass,
            elapsed_us: start.elapsed().as_micros() as u64,
            worker,
        }
    };

    if workers == 1 || tasks.len() < 2 {
        let mut scratch = Scratch::default();
        for (idx, p) in &tasks {
            let record = evaluate(*idx, p, &mut scratch, 0);
            sink.emit(&record)?;
            summary.absorb(suites[*idx].expectation(p), record.pass);
        }
        return Ok(summary);
    }

    let block = tasks.len().div_ceil(workers);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::sync_channel::<(usize, VerificationRecord)>(4096);
    let mut failure = None;
    thread::scope(|scope| {
        for (worker, chunk) in tasks.chunks(block).enumerate() {
            let tx = tx.clone();
            let stop = &stop;
            let evaluate = &evaluate;
            scope.spawn(move || {
                let mut scratch = Scratch::default();
                for (idx, p) in chunk {
                    if stop.load(Ordering::Relaxed) {
                        break;
                    }
                    let record = evaluate(*idx, p, &mut scratch, worker as u32);
                    if tx.send((*idx, record)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(tx);
        for (idx, record) in rx {
            if failure.is_some() {
                continue;
            }
            if let Err(e) = sink.emit(&record) {
                stop.store(true, Ordering::Relaxed);
                failure = Some(e);
                continue;
            }
            summary.absorb(suites[idx].expectation(&record.params), record.pass);
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(summary),
    }
}
