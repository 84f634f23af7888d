//! The discriminator of `f(x) = x^3 + x`.
//!
//! [`InjectivityScanner`] is the hot loop: it walks `f(1), f(2), ...` mod `m`
//! by finite differences (the third difference of `a^3` is the constant 6)
//! and marks residues in a generation-stamped buffer that is reused across
//! calls without clearing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{add_mod, ceil_log3, cube_plus_mod, mul_mod, pow3};
use crate::report::{params, Params, RecordSink, VerificationRecord};
use crate::sweep::{run_suites, Outcome, RunSummary, Scratch, Suite};

/// Largest `n` whose `3^⌈log₃ n⌉` still fits below 2^63.
pub const MAX_N: u64 = 4_052_555_153_018_976_267; // 3^39

// Beyond this many slots, the scanner sorts residues instead of stamping.
const BUFFER_LIMIT: u64 = 1 << 27;

/// `f(a) mod m` for `a = 1, 2, ...`, by finite differences.
#[derive(Clone, Debug)]
pub struct CubePlusResidues {
    m: u64,
    f: u64,
    d1: u64,
    d2: u64,
    d3: u64,
}

impl CubePlusResidues {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1);
        CubePlusResidues { m, f: 2 % m, d1: 8 % m, d2: 12 % m, d3: 6 % m }
    }
}

impl Iterator for CubePlusResidues {
    type Item = u64;

    #[inline]
    fn next(&mut self) -> Option<u64> {
        let m = self.m;
        let out = self.f;
        let step = |x: u64, y: u64| {
            let s = x + y;
            if s >= m {
                s - m
            } else {
                s
            }
        };
        self.f = step(self.f, self.d1);
        self.d1 = step(self.d1, self.d2);
        self.d2 = step(self.d2, self.d3);
        Some(out)
    }
}

/// A pair `1 <= a < b` with `b^3 + b = a^3 + a (mod m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CollisionWitness {
    pub a: u64,
    pub b: u64,
    pub m: u64,
}

impl CollisionWitness {
    /// Re-checks the congruence by direct reduction of both cubes.
    pub fn verify(&self) -> bool {
        self.a >= 1 && self.a < self.b && cube_plus_mod(self.a, self.m) == cube_plus_mod(self.b, self.m)
    }

    /// Re-checks through `(b - a)(a^2 + ab + b^2 + 1) = 0 (mod m)`.
    pub fn verify_factored(&self) -> bool {
        let m = self.m;
        let (a, b) = (self.a % m, self.b % m);
        let diff = (self.b - self.a) % m;
        let quad = add_mod(
            add_mod(mul_mod(a, a, m), mul_mod(a, b, m), m),
            add_mod(mul_mod(b, b, m), 1 % m, m),
            m,
        );
        self.a < self.b && mul_mod(diff, quad, m) == 0
    }

    pub fn within(&self, n: u64) -> bool {
        self.b <= n
    }
}

/// Reusable injectivity tester.
#[derive(Default)]
pub struct InjectivityScanner {
    stamp: Vec<u32>,
    first: Vec<u32>,
    generation: u32,
}

impl InjectivityScanner {
    pub fn new() -> Self {
        Self::default()
    }

    fn prepare(&mut self, m: u64) {
        let m = m as usize;
        if self.stamp.len() < m {
            self.stamp.resize(m, 0);
            self.first.resize(m, 0);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
    }

    /// True iff `f(1), ..., f(n)` are pairwise distinct mod `m`.
    pub fn is_injective(&mut self, n: u64, m: u64) -> bool {
        assert!(n >= 1 && m >= 1);
        if n > m {
            return false;
        }
        self.first_repeat(n, m).is_none()
    }

    /// The collision with the smallest `b`, found by an early-exit scan.
    pub fn first_repeat(&mut self, n: u64, m: u64) -> Option<CollisionWitness> {
        assert!(n >= 1 && m >= 1);
        assert!(n <= u32::MAX as u64, "n must fit in u32");
        if m > BUFFER_LIMIT {
            return sorted_collisions(n, m).into_iter().min_by_key(|w| (w.b, w.a));
        }
        self.prepare(m);
        let gen = self.generation;
        for (a, r) in (1..=n).zip(CubePlusResidues::new(m)) {
            let slot = r as usize;
            if self.stamp[slot] == gen {
                return Some(CollisionWitness { a: self.first[slot] as u64, b: a, m });
            }
            self.stamp[slot] = gen;
            self.first[slot] = a as u32;
        }
        None
    }

    /// The lexicographically smallest collision `(a, b)` with `b <= n`.
    pub fn find_collision(&mut self, n: u64, m: u64) -> Option<CollisionWitness> {
        assert!(n >= 1 && m >= 1);
        assert!(n <= u32::MAX as u64, "n must fit in u32");
        if m > BUFFER_LIMIT {
            return sorted_collisions(n, m).into_iter().min();
        }
        self.prepare(m);
        let gen = self.generation;
        let mut best: Option<CollisionWitness> = None;
        for (b, r) in (1..=n).zip(CubePlusResidues::new(m)) {
            let slot = r as usize;
            if self.stamp[slot] == gen {
                // Marked `first` with the high bit once the class has its partner.
                let a = self.first[slot];
                if a & (1 << 31) == 0 {
                    let w = CollisionWitness { a: a as u64, b, m };
                    if best.is_none_or(|cur| w < cur) {
                        best = Some(w);
                    }
                    self.first[slot] = a | (1 << 31);
                }
            } else {
                self.stamp[slot] = gen;
                self.first[slot] = b as u32;
            }
        }
        best
    }
}

/// For each residue class with two or more members: its two smallest members.
fn sorted_collisions(n: u64, m: u64) -> Vec<CollisionWitness> {
    let mut residues: Vec<(u64, u64)> = (1..=n).map(|a| (cube_plus_mod(a, m), a)).collect();
    residues.sort_unstable();
    residues
        .windows(2)
        .enumerate()
        .filter(|(i, w)| w[0].0 == w[1].0 && (*i == 0 || residues[i - 1].0 != w[0].0))
        .map(|(_, w)| CollisionWitness { a: w[0].1, b: w[1].1, m })
        .collect()
}

pub fn is_injective(n: u64, m: u64) -> bool {
    InjectivityScanner::new().is_injective(n, m)
}

pub fn find_collision(n: u64, m: u64) -> Option<CollisionWitness> {
    InjectivityScanner::new().find_collision(n, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminatorResult {
    pub n: u64,
    pub k: u32,
    /// `s` when `n` is `3^(6s+5) + 1` or `3^(6s+5) + 2`.
    pub exceptional: Option<u32>,
    pub delta_value: u64,
}

impl DiscriminatorResult {
    /// `n <= Δ(n) <= 3^k`.
    pub fn within_bounds(&self) -> bool {
        self.n <= self.delta_value && self.delta_value <= pow3(self.k)
    }
}

/// Returns `s` when `n - 1` or `n - 2` equals `3^(6s+5)`.
pub fn exceptional_s(n: u64) -> Option<u32> {
    let mut s = 0u32;
    loop {
        let e = 6 * s + 5;
        let power = 3u64.checked_pow(e)?;
        if power >= n {
            return None;
        }
        if n - power == 1 || n - power == 2 {
            return Some(s);
        }
        s += 1;
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::OutOfRange(format!("n = {n} must lie in [1, 3^39]")));
    }
    Ok(())
}

/// `Δ(n)` from the two-branch closed form.
pub fn delta_closed_form(n: u64) -> Result<DiscriminatorResult> {
    check_n(n)?;
    let k = ceil_log3(n);
    let exceptional = exceptional_s(n);
    let delta_value = match exceptional {
        Some(s) => 7 * pow3(6 * s + 4),
        None => pow3(k),
    };
    Ok(DiscriminatorResult { n, k, exceptional, delta_value })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForce {
    pub result: DiscriminatorResult,
    /// One witness per rejected modulus, when requested.
    pub witnesses: Vec<CollisionWitness>,
}

/// `Δ(n)` by scanning `m = n, n+1, ...` up to `3^k`, where injectivity is
/// unconditional. Does not consult the closed form.
pub fn delta_bruteforce(n: u64, record_witnesses: bool) -> Result<BruteForce> {
    delta_bruteforce_with(&mut InjectivityScanner::new(), n, record_witnesses)
}

pub fn delta_bruteforce_with(
    scanner: &mut InjectivityScanner,
    n: u64,
    record_witnesses: bool,
) -> Result<BruteForce> {
    check_n(n)?;
    let k = ceil_log3(n);
    let cap = pow3(k);
    let mut witnesses = Vec::new();
    let mut found = None;
    for m in n..=cap {
        match scanner.first_repeat(n, m) {
            None => {
                found = Some(m);
                break;
            }
            Some(w) if record_witnesses => witnesses.push(w),
            Some(_) => {}
        }
    }
    let delta_value = found.ok_or_else(|| {
        Error::OutOfRange(format!("no injective modulus up to 3^{k} for n = {n}"))
    })?;
    let result = DiscriminatorResult { n, k, exceptional: exceptional_s(n), delta_value };
    Ok(BruteForce { result, witnesses })
}

/// Compares brute force and closed form for each `n` in a range.
pub struct DeltaVerifySuite {
    pub n_from: u64,
    pub n_to: u64,
}

impl Suite for DeltaVerifySuite {
    fn id(&self) -> &str {
        "delta_verify"
    }

    fn tasks(&self) -> Vec<Params> {
        (self.n_from..=self.n_to).map(|n| params([("n", n)])).collect()
    }

    fn evaluate(&self, p: &Params, scratch: &mut Scratch) -> Outcome {
        let n = p["n"];
        let brute = delta_bruteforce_with(&mut scratch.scanner, n, false);
        let closed = delta_closed_form(n);
        match (brute, closed) {
            (Ok(b), Ok(c)) => Outcome::with_values(
                b.result.delta_value.to_string(),
                c.delta_value.to_string(),
                b.result.delta_value == c.delta_value && b.result.within_bounds(),
            ),
            (b, c) => Outcome::with_values(
                b.map_or_else(|e| e.to_string(), |b| b.result.delta_value.to_string()),
                c.map_or_else(|e| e.to_string(), |c| c.delta_value.to_string()),
                false,
            ),
        }
    }
}

/// Emits one `delta_verify` record per `n` in `[n_from, n_to]`, skipping any
/// `n` already present in `prior`.
pub fn verify_range(
    n_from: u64,
    n_to: u64,
    workers: usize,
    prior: &[VerificationRecord],
    sink: &mut dyn RecordSink,
) -> Result<RunSummary> {
    if n_from == 0 || n_from > n_to {
        return Err(Error::OutOfRange(format!("bad range [{n_from}, {n_to}]")));
    }
    run_suites(&[&DeltaVerifySuite { n_from, n_to }], workers, prior, sink)
}
