use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::charsum::CyclotomicInt;
use crate::discriminator::{CollisionWitness, CubePlusResidues};
use crate::error::{Error, Result};
use crate::modarith::{ceil_log3, checked_pow, cube_plus_mod, is_prime, jacobi, mobius_prime_power, mul_mod, pow3, QuadraticCongruence};

/// Default cap on pair operations for the quadratic-time enumerations.
pub const DEFAULT_BUDGET: u128 = 10_000_000_000;

// Beyond this many slots, pair counting sorts residues instead of stamping.
const COUNTER_LIMIT: u64 = 1 << 27;

/// The counts attached to one `(p, t, δ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingRecord {
    pub p: u64,
    pub t: u32,
    pub delta: u64,
    /// `⌊p/3⌋ p^(t-1)`.
    pub x: u64,
    pub n: Option<u64>,
    pub n_ne: Option<u64>,
    pub n_star: Option<u64>,
    #[serde(serialize_with = "as_strings")]
    pub t_values: Vec<CyclotomicInt>,
}

fn as_strings<S: Serializer>(values: &[CyclotomicInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(values.iter().map(ToString::to_string))
}

impl CountingRecord {
    fn empty(p: u64, t: u32, delta: u64) -> Result<Self> {
        let x = side_length(p, t)?;
        Ok(CountingRecord { p, t, delta, x, n: None, n_ne: None, n_star: None, t_values: Vec::new() })
    }
}

fn check_instance(p: u64, t: u32, delta: u64) -> Result<u64> {
    if p < 5 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if !(1..=3).contains(&delta) || t == 0 {
        return Err(Error::OutOfRange(format!("need t >= 1 and 1 <= delta <= 3, got t = {t}, delta = {delta}")));
    }
    checked_pow(p, t)
        .filter(|&q| q.checked_mul(delta).is_some_and(|m| m < 1 << 63))
        .ok_or_else(|| Error::OutOfRange(format!("{delta}*{p}^{t} exceeds 2^63")))
}

/// `X = ⌊p/3⌋ p^(t-1)`.
pub fn side_length(p: u64, t: u32) -> Result<u64> {
    if t == 0 {
        return Err(Error::OutOfRange("t must be >= 1".into()));
    }
    checked_pow(p, t - 1)
        .and_then(|q| q.checked_mul(p / 3))
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{t} too large")))
}

/// `δ²(a² + ab + b²) + 1 mod q`.
fn norm_plus_one(delta: u64, a: u64, b: u64, q: u64) -> u64 {
    let (a, b) = (a % q, b % q);
    let s = (mul_mod(a, a, q) as u128 + mul_mod(a, b, q) as u128 + mul_mod(b, b, q) as u128) % q as u128;
    ((mul_mod(delta * delta % q, s as u64, q) as u128 + 1) % q as u128) as u64
}

/// `𝒩` and `𝒩^≠` by visiting every pair; the oracle for [`count_n`].
pub fn count_n_naive(p: u64, t: u32, delta: u64, budget: u128) -> Result<CountingRecord> {
    let q = check_instance(p, t, delta)?;
    let mut rec = CountingRecord::empty(p, t, delta)?;
    let needed = rec.x as u128 * rec.x as u128;
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let (mut n, mut diag) = (0u64, 0u64);
    for a in 1..=rec.x {
        for b in 1..=rec.x {
            if norm_plus_one(delta, a, b, q) == 0 {
                n += 1;
                diag += (a == b) as u64;
            }
        }
    }
    rec.n = Some(n);
    rec.n_ne = Some(n - diag);
    Ok(rec)
}

/// `𝒩` and `𝒩^≠`, solving the quadratic in `b` for each `a`.
pub fn count_n(p: u64, t: u32, delta: u64) -> Result<CountingRecord> {
    let q = check_instance(p, t, delta)?;
    let mut rec = CountingRecord::empty(p, t, delta)?;
    let d2 = (delta * delta) as i128;
    let (mut n, mut diag) = (0u64, 0u64);
    for a in 1..=rec.x {
        let a_q = (a % q) as i128;
        let c = mul_mod((d2 as u64 * (a % q)) % q, a % q, q) as i128 + 1;
        for b in QuadraticCongruence::new(d2, d2 * a_q, c, p, t)?.solutions()? {
            if (1..=rec.x).contains(&b) {
                n += 1;
                diag += (a == b) as u64;
            }
        }
    }
    rec.n = Some(n);
    rec.n_ne = Some(n - diag);
    Ok(rec)
}

/// Counts equal-residue pairs of `f(x) = x³ + x` among `1..=bound`.
#[derive(Default)]
pub struct PairCounter {
    stamp: Vec<u32>,
    count: Vec<u32>,
    first: Vec<u32>,
    generation: u32,
}

impl PairCounter {
    /// Number of pairs `a < b <= bound` with `f(a) = f(b) (mod m)`, and the
    /// pair with the smallest `b`.
    pub fn count_pairs(&mut self, bound: u64, m: u64) -> (u64, Option<CollisionWitness>) {
        assert!(m >= 1 && bound <= u32::MAX as u64);
        if m > COUNTER_LIMIT {
            return sorted_pairs(bound, m);
        }
        let slots = m as usize;
        if self.stamp.len() < slots {
            self.stamp.resize(slots, 0);
            self.count.resize(slots, 0);
            self.first.resize(slots, 0);
        }
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.generation = 1;
        }
        let gen = self.generation;
        let mut pairs = 0u64;
        let mut witness = None;
        for (b, r) in (1..=bound).zip(CubePlusResidues::new(m)) {
            let r = r as usize;
            if self.stamp[r] == gen {
                pairs += self.count[r] as u64;
                self.count[r] += 1;
                witness.get_or_insert(CollisionWitness { a: self.first[r] as u64, b, m });
            } else {
                self.stamp[r] = gen;
                self.count[r] = 1;
                self.first[r] = b as u32;
            }
        }
        (pairs, witness)
    }
}

fn sorted_pairs(bound: u64, m: u64) -> (u64, Option<CollisionWitness>) {
    let mut residues: Vec<(u64, u64)> = (1..=bound).map(|a| (cube_plus_mod(a, m), a)).collect();
    residues.sort_unstable();
    let mut pairs = 0u64;
    let mut witness: Option<CollisionWitness> = None;
    for run in residues.chunk_by(|x, y| x.0 == y.0) {
        let len = run.len() as u64;
        pairs += len * (len - 1) / 2;
        if len >= 2 {
            let w = CollisionWitness { a: run[0].1, b: run[1].1, m };
            if witness.is_none_or(|cur| w.b < cur.b) {
                witness = Some(w);
            }
        }
    }
    (pairs, witness)
}

/// `𝒩*`: colliding pairs `a < b <= 1 + 3^(k-1)` modulo `δp^t`, where
/// `3^(k-1) < δp^t < 3^k`.
pub fn count_n_star(p: u64, t: u32, delta: u64) -> Result<CountingRecord> {
    count_n_star_with(&mut PairCounter::default(), p, t, delta)
}

pub fn count_n_star_with(counter: &mut PairCounter, p: u64, t: u32, delta: u64) -> Result<CountingRecord> {
    let q = check_instance(p, t, delta)?;
    let m = delta * q;
    let k = ceil_log3(m);
    if k == 0 || pow3(k - 1) >= m || m > u32::MAX as u64 * 3 {
        return Err(Error::OutOfRange(format!("m = {m} has no window 3^(k-1) < m < 3^k")));
    }
    let mut rec = CountingRecord::empty(p, t, delta)?;
    rec.n_star = Some(counter.count_pairs(1 + pow3(k - 1), m).0);
    Ok(rec)
}

/// One `T_j` with the comparison it is held to.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TjReport {
    pub j: u32,
    #[serde(serialize_with = "as_string")]
    pub value: CyclotomicInt,
    /// `X² p^(-j) (-3/p)^j μ(p^j)`, for `j < t`.
    pub closed_form: Option<i64>,
    /// `2 p^(3t/2) (2 + ln p^t)²`, for `j = t`.
    pub bound: Option<f64>,
    pub consistent: bool,
}

fn as_string<S: Serializer>(value: &CyclotomicInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(value)
}

/// Histogram of `δ²(a² + ab + b²) mod p^t` over `1 <= a, b <= X`.
fn norm_histogram(p: u64, t: u32, delta: u64, budget: u128) -> Result<(u64, Vec<u64>)> {
    let q = check_instance(p, t, delta)?;
    let x = side_length(p, t)?;
    let needed = (x as u128 * x as u128).max(q as u128 * q as u128);
    if needed > budget || q > 1 << 24 {
        return Err(Error::BudgetExceeded { needed, budget: budget.min(1 << 48) });
    }
    let d2 = delta * delta % q;
    let mut hist = vec![0u64; q as usize];
    for a in 1..=x {
        let a = a % q;
        // f(a, b+1) - f(a, b) = δ²(a + 2b + 1)
        let mut v = d2 * ((a * a + a + 1) % q) % q;
        let mut step = d2 * ((a + 3) % q) % q;
        let step2 = 2 * d2 % q;
        for _ in 1..=x {
            hist[v as usize] += 1;
            v += step;
            if v >= q {
                v -= q;
            }
            step += step2;
            if step >= q {
                step -= q;
            }
        }
    }
    Ok((x, hist))
}

/// `Σ_c Σ_{a,b} e(c (f(a,b) + 1) / p^j)` from a histogram of `f mod p^j`.
fn t_from_histogram(p: u64, j: u32, hist: &[u64]) -> Result<CyclotomicInt> {
    let q = hist.len() as u64;
    let mut raw = vec![0i64; q as usize];
    for (f, &h) in hist.iter().enumerate().filter(|(_, &h)| h != 0) {
        let g = (f as u64 + 1) % q;
        let mut idx = 0u64;
        for c in 1..q {
            idx += g;
            if idx >= q {
                idx -= q;
            }
            if c % p != 0 {
                raw[idx as usize] += h as i64;
            }
        }
    }
    CyclotomicInt::from_raw(p, j, raw)
}

fn fold(hist: &[u64], q: u64) -> Vec<u64> {
    let mut out = vec![0u64; q as usize];
    for (i, &h) in hist.iter().enumerate() {
        out[i % q as usize] += h;
    }
    out
}

fn tj_report(p: u64, t: u32, j: u32, x: u64, value: CyclotomicInt) -> TjReport {
    if j < t {
        let expected = closed_form_tj(p, j, x);
        let consistent = value.rational_value() == Some(expected);
        TjReport { j, value, closed_form: Some(expected), bound: None, consistent }
    } else {
        let pt = (p as f64).powi(t as i32);
        let bound = 2.0 * pt.powf(1.5) * (2.0 + pt.ln()).powi(2);
        let consistent = value.abs() <= bound * (1.0 + 1e-9);
        TjReport { j, value, closed_form: None, bound: Some(bound), consistent }
    }
}

fn closed_form_tj(p: u64, j: u32, x: u64) -> i64 {
    let mu = mobius_prime_power(p, j) as i64;
    if mu == 0 {
        return 0;
    }
    let chi = jacobi(p - 3, p) as i64;
    let x2 = x as i128 * x as i128;
    (x2 / p as i128) as i64 * chi * mu
}

/// Enumerates `T_j` exactly and compares it with its closed form (`j < t`)
/// or its magnitude bound (`j = t`).
pub fn compute_tj(p: u64, t: u32, delta: u64, j: u32) -> Result<TjReport> {
    compute_tj_with_budget(p, t, delta, j, DEFAULT_BUDGET)
}

pub fn compute_tj_with_budget(p: u64, t: u32, delta: u64, j: u32, budget: u128) -> Result<TjReport> {
    if j == 0 || j > t {
        return Err(Error::OutOfRange(format!("need 1 <= j <= t, got j = {j}, t = {t}")));
    }
    let (x, hist) = norm_histogram(p, t, delta, budget)?;
    let hist = fold(&hist, p.pow(j));
    Ok(tj_report(p, t, j, x, t_from_histogram(p, j, &hist)?))
}

/// Every `T_1, ..., T_t` from one histogram.
pub fn compute_all_tj(p: u64, t: u32, delta: u64, budget: u128) -> Result<Vec<TjReport>> {
    let (x, hist) = norm_histogram(p, t, delta, budget)?;
    (1..=t)
        .map(|j| {
            let folded = fold(&hist, p.pow(j));
            Ok(tj_report(p, t, j, x, t_from_histogram(p, j, &folded)?))
        })
        .collect()
}

/// `p^t 𝒩` against `X² + Σ_j T_j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub record: CountingRecord,
    pub reports: Vec<TjReport>,
    pub lhs: i128,
    /// `None` when some `T_j` is not a rational integer.
    pub rhs: Option<i128>,
}

impl Decomposition {
    pub fn holds(&self) -> bool {
        self.rhs == Some(self.lhs)
    }
}

pub fn decomposition(p: u64, t: u32, delta: u64, budget: u128) -> Result<Decomposition> {
    let mut record = count_n(p, t, delta)?;
    let reports = compute_all_tj(p, t, delta, budget)?;
    let q = p.pow(t) as i128;
    let lhs = q * record.n.unwrap_or(0) as i128;
    let x2 = record.x as i128 * record.x as i128;
    let rhs = reports
        .iter()
        .map(|r| r.value.rational_value().map(i128::from))
        .sum::<Option<i128>>()
        .map(|s| x2 + s);
    record.t_values = reports.iter().map(|r| r.value.clone()).collect();
    Ok(Decomposition { record, reports, lhs, rhs })
}

/// A lower bound for `𝒩`: an exact rational part minus a logarithmic term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    #[serde(serialize_with = "ratio_string")]
    pub rational: Ratio<i128>,
    pub log_term: f64,
}

fn ratio_string<S: Serializer>(r: &Ratio<i128>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

impl LowerBound {
    pub fn value(&self) -> f64 {
        *self.rational.numer() as f64 / *self.rational.denom() as f64 - self.log_term
    }

    /// Whether an integer count meets the bound.
    pub fn admits(&self, count: u64) -> bool {
        count as f64 >= self.value() - 1e-9 * self.log_term.max(1.0)
    }
}

/// `X²/p^t - (-3/p) X²/p^(t+1) - 2p^(t/2)(2 + ln p^t)²`; for `t = 1` the
/// middle term is absent.
pub fn n_lower_bound(p: u64, t: u32) -> Result<LowerBound> {
    if p < 5 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let x = side_length(p, t)? as i128;
    let pt = (p as i128)
        .checked_pow(t + 1)
        .map(|_| (p as i128).pow(t))
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{t} too large")))?;
    let mut rational = Ratio::new(x * x, pt);
    if t >= 2 {
        let chi = jacobi(p - 3, p) as i128;
        rational -= Ratio::new(chi * x * x, pt * p as i128);
    }
    let ptf = (p as f64).powi(t as i32);
    let log_term = 2.0 * ptf.sqrt() * (2.0 + ptf.ln()).powi(2);
    Ok(LowerBound { rational, log_term })
}
