//! Acceptance criteria 1 through 10, one PASS/FAIL line each.
//!
//! Run a subset with `cargo test --test acceptance -- 2 9`.
//!
//! A criterion listed in `KNOWN_RED` may fail without failing the run, but
//! only with exactly the recorded deviation; any other failure exits 1.

use std::collections::BTreeSet;
use std::time::Instant;

use discrim::casework::exceptional::{pair_collisions, Ell7Suite};
use discrim::casework::{InequalityId, InequalitySuite};
use discrim::discriminator::{verify_range, InjectivityScanner};
use discrim::report::{MemorySink, VerificationRecord};
use discrim::suites::{
    partition_point, ApAtZero, ApIdentity, Decomposition, EllBound, GaussNorm, HalfSum, LowerBoundCheck, NStar,
    Partition, Profile, TjClosedForm, WeilBound,
};
use discrim::sweep::{run_suites, Suite};

struct Verdict {
    pass: bool,
    detail: String,
    /// Set when the failure is exactly the documented deviation.
    known_red: bool,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into(), known_red: false }
    }
}

type Check = fn(usize) -> discrim::Result<Verdict>;

const CRITERIA: [(u8, &str, Check); 10] = [
    (1, "brute-force Δ(n) equals the closed form for n <= 3000", delta_replication),
    (2, "A_p direct and Kloosterman forms agree exactly, A_p(δ,0) = -1, p <= 199", ap_identity),
    (3, "Weil bound on A_p and Gauss-sum norm, p <= 199", weil_and_gauss),
    (4, "half sum equals -1 for 5 <= p <= 499", half_sums),
    (5, "ℓ_p(δ) <= L_p and residue profile closed form, 5 <= p <= 997", ell_and_profile),
    (6, "inequality suites to 10^6 with their stated exceptions", inequality_suites),
    (7, "T_j closed form, exact decomposition, 𝒩 lower bound, p^t <= 3000", counting_sums),
    (8, "𝒩* > 0 for δ <= 3, p^t <= 10^5", n_star_positive),
    (9, "partition and construction for n <= 2000, no collision mod 567 at n = 244, 245", partition),
    (10, "ℓ_7(3^r) follows 2, 3, 1 by r mod 3 for r <= 17", ell7_pattern),
];

const KNOWN_RED: [u8; 1] = [6];

fn run(suites: &[&dyn Suite], workers: usize) -> discrim::Result<Vec<VerificationRecord>> {
    let mut sink = MemorySink::default();
    run_suites(suites, workers, &[], &mut sink)?;
    Ok(sink.records)
}

fn tally(records: &[VerificationRecord]) -> Verdict {
    let bad: Vec<_> = records.iter().filter(|r| !r.pass).take(3).map(|r| r.key()).collect();
    let failed = records.iter().filter(|r| !r.pass).count();
    Verdict::new(failed == 0 && !records.is_empty(), format!("{} records, {failed} failing {bad:?}", records.len()))
}

fn delta_replication(workers: usize) -> discrim::Result<Verdict> {
    let mut sink = MemorySink::default();
    verify_range(1, 3000, workers, &[], &mut sink)?;
    let at = |n: u64| sink.records.iter().find(|r| r.params["n"] == n).map(|r| r.computed.clone());
    let mut v = tally(&sink.records);
    let special = at(244).as_deref() == Some("567") && at(245).as_deref() == Some("567");
    v.pass &= special && sink.records.len() == 3000;
    v.detail += &format!(", Δ(244) = {:?}, Δ(245) = {:?}", at(244).unwrap_or_default(), at(245).unwrap_or_default());
    Ok(v)
}

fn ap_identity(workers: usize) -> discrim::Result<Verdict> {
    Ok(tally(&run(&[&ApIdentity { limit: 199 }, &ApAtZero { limit: 199 }], workers)?))
}

fn weil_and_gauss(workers: usize) -> discrim::Result<Verdict> {
    Ok(tally(&run(&[&WeilBound { limit: 199 }, &GaussNorm { limit: 199 }], workers)?))
}

fn half_sums(workers: usize) -> discrim::Result<Verdict> {
    Ok(tally(&run(&[&HalfSum { limit: 499 }], workers)?))
}

fn ell_and_profile(workers: usize) -> discrim::Result<Verdict> {
    Ok(tally(&run(&[&EllBound { limit: 997 }, &Profile { limit: 997 }], workers)?))
}

fn failing_primes(records: &[VerificationRecord], suite: &str) -> Vec<u64> {
    records.iter().filter(|r| r.suite == suite && !r.pass).map(|r| r.params["p"]).collect()
}

fn inequality_suites(workers: usize) -> discrim::Result<Verdict> {
    let limit = 1_000_000;
    let suites = [
        InequalitySuite { id: InequalityId::L34, limit },
        InequalitySuite { id: InequalityId::L35, limit },
        InequalitySuite { id: InequalityId::C1, limit },
        InequalitySuite { id: InequalityId::L48G, limit: 20_000 },
    ];
    let refs: Vec<&dyn Suite> = suites.iter().map(|s| s as &dyn Suite).collect();
    let records = run(&refs, workers)?;
    let l34 = failing_primes(&records, "L34");
    let l35 = failing_primes(&records, "L35");
    let c1 = failing_primes(&records, "C1");
    let g = records.iter().filter(|r| r.suite == "L48_g").all(|r| r.pass);
    let l35_ok = l35.iter().all(|&p| p < 165);
    let c1_ok = c1.iter().all(|&p| p < 4000);
    let pass = l34 == [7] && l35_ok && c1_ok && g;
    let detail = format!(
        "L34 failing at {l34:?}; L35 largest failure {:?}; C1 largest failure {:?}; g(20000) > 0: {g}",
        l35.iter().max(),
        c1.iter().max()
    );
    let known_red = !pass && l34 == [7, 19] && l35_ok && c1_ok && g;
    Ok(Verdict { pass, detail, known_red })
}

fn counting_sums(workers: usize) -> discrim::Result<Verdict> {
    let records = run(&[&TjClosedForm, &Decomposition { limit: 3000 }, &LowerBoundCheck { limit: 3000 }], workers)?;
    let suites: BTreeSet<_> = records.iter().map(|r| r.suite.as_str()).collect();
    let mut v = tally(&records);
    v.pass &= suites.len() == 3;
    Ok(v)
}

fn n_star_positive(workers: usize) -> discrim::Result<Verdict> {
    Ok(tally(&run(&[&NStar { limit: 100_000 }], workers)?))
}

fn partition(workers: usize) -> discrim::Result<Verdict> {
    let mut v = tally(&run(&[&Partition { limit: 2000 }], workers)?);
    let mut scanner = InjectivityScanner::new();
    for n in [244, 245] {
        let point = partition_point(&mut scanner, n, 567)?.expect("567 is not a power of 3");
        let pairs = pair_collisions(n, 567);
        let absent = point.construction.is_none() && point.oracle.is_none() && pairs == 0;
        v.pass &= absent;
        v.detail += &format!(", n = {n} mod 567: {} colliding pairs", pairs);
    }
    Ok(v)
}

fn ell7_pattern(workers: usize) -> discrim::Result<Verdict> {
    let records = run(&[&Ell7Suite { r_max: 17 }], workers)?;
    let mut v = tally(&records);
    v.pass &= records.len() == 18;
    Ok(v)
}

fn main() {
    let selected: BTreeSet<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut unexpected = 0;
    for (id, title, check) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let verdict = check(workers).unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
        let status = if verdict.pass { "PASS" } else { "FAIL" };
        let note = if !verdict.pass && verdict.known_red && KNOWN_RED.contains(&id) {
            " [known deviation]"
        } else {
            ""
        };
        println!(
            "criterion {id:>2}: {status}{note}  {title} ({:.1}s)\n              {}",
            start.elapsed().as_secs_f64(),
            verdict.detail
        );
        if !verdict.pass && note.is_empty() {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        std::process::exit(1);
    }
}
