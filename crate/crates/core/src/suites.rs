//! Named verification suites, grouped under the identifiers accepted by
//! `lemma verify --id`.

use crate::casework::counting::{count_n_star_with, decomposition, DEFAULT_BUDGET};
use crate::casework::exceptional::{Ell7Suite, ExceptionalSuite};
use crate::casework::{
    classify, compute_tj, construct_collision, count_n, count_n_naive, n_lower_bound, window, CaseTag,
    Construction, InequalityId, InequalitySuite,
};
use crate::charsum::{
    ap_direct_with, ap_kloosterman, ell_p_with, gauss_sum, half_sum_with, l_p, residue_profile_with,
    QuadraticCharacter, ResidueProfile,
};
use crate::discriminator::{exceptional_s, CollisionWitness, InjectivityScanner};
use crate::error::{Error, Result};
use crate::modarith::{checked_pow, factorize, pow3, primes_in};
use crate::report::{params, Params};
use crate::sweep::{Outcome, Scratch, Suite};

/// Identifiers accepted by [`lemma_suites`].
pub const LEMMA_IDS: [&str; 13] =
    ["3.1", "3.2", "3.4", "3.5", "3.6", "4.6", "4.7", "4.9", "5.1", "5.5", "C1", "L48", "partition"];

/// The limit used when none is given.
pub fn default_limit(id: &str) -> u64 {
    match id {
        "3.1" => 199,
        "3.2" => 997,
        "3.6" => 20_000,
        "4.6" | "4.7" => 3000,
        "4.9" => 100_000,
        "5.1" => 17,
        "5.5" => 5,
        "partition" => 2000,
        _ => 1_000_000,
    }
}

/// The largest limit accepted without the long-run flag.
pub fn desk_limit(id: &str) -> u64 {
    match id {
        "3.1" => 1000,
        "3.2" | "3.6" => 100_000,
        "4.6" | "4.7" | "4.9" => 100_000,
        "5.5" => 5,
        "partition" => 3000,
        _ => 10_000_000,
    }
}

/// Suites checked by `id`, over parameters up to `limit`.
pub fn lemma_suites(id: &str, limit: u64) -> Result<Vec<Box<dyn Suite>>> {
    let ineq = |i: InequalityId| Box::new(InequalitySuite::new(i, limit)) as Box<dyn Suite>;
    Ok(match id {
        "3.1" => vec![
            Box::new(ApIdentity { limit }),
            Box::new(ApAtZero { limit }),
            Box::new(WeilBound { limit }),
            Box::new(GaussNorm { limit }),
        ],
        "3.2" => vec![
            Box::new(HalfSum { limit }),
            Box::new(Profile { limit }),
            Box::new(EllBound { limit }),
            ineq(InequalityId::LpThird),
        ],
        "3.4" => vec![ineq(InequalityId::L34)],
        "3.5" => vec![ineq(InequalityId::L35)],
        "3.6" => vec![ineq(InequalityId::EllSixth), ineq(InequalityId::IncompleteSum), ineq(InequalityId::C1)],
        "4.6" => vec![Box::new(TjClosedForm), Box::new(Decomposition { limit })],
        "4.7" => vec![Box::new(LowerBoundCheck { limit })],
        "4.9" => vec![Box::new(NStar { limit })],
        "5.1" => vec![Box::new(Ell7Suite { r_max: limit })],
        "5.5" => vec![Box::new(ExceptionalSuite { s_max: limit })],
        "C1" => vec![ineq(InequalityId::C1)],
        "L48" => vec![ineq(InequalityId::L48G), ineq(InequalityId::L48), ineq(InequalityId::L48Density)],
        "partition" => vec![Box::new(Partition { limit })],
        other => match other.parse::<InequalityId>() {
            Ok(i) => vec![ineq(i)],
            Err(_) => return Err(Error::UnknownSuite(other.to_string())),
        },
    })
}

fn prime_delta_tasks(from: u64, limit: u64) -> Vec<Params> {
    primes_in(from, limit)
        .into_iter()
        .flat_map(|p| (1..p).map(move |d| params([("delta", d), ("p", p)])))
        .collect()
}

fn failed(e: Error) -> Outcome {
    Outcome::with_values(e.to_string(), String::new(), false)
}

/// `(p, t, δ)` with `p >= 5`, `p^t <= limit`, `1 <= δ <= 3`.
fn prime_power_tasks(limit: u64) -> Vec<Params> {
    let mut out = Vec::new();
    for p in primes_in(5, limit) {
        let mut t = 1u32;
        while checked_pow(p, t).is_some_and(|q| q <= limit) {
            for delta in 1..=3 {
                out.push(params([("delta", delta), ("p", p), ("t", t as u64)]));
            }
            t += 1;
        }
    }
    out
}

/// Direct and Kloosterman forms agree for every `u` in `[0, p)`.
pub struct ApIdentity {
    pub limit: u64,
}

impl Suite for ApIdentity {
    fn id(&self) -> &str {
        "ap_identity"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_delta_tasks(5, self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let (prime, delta) = (p["p"], p["delta"]);
        let run = || -> Result<usize> {
            let chi = QuadraticCharacter::new(prime)?;
            let mut mismatches = 0;
            for u in 0..prime as i64 {
                if ap_direct_with(&chi, delta, u)? != ap_kloosterman(prime, delta, u)? {
                    mismatches += 1;
                }
            }
            Ok(mismatches)
        };
        run().map_or_else(failed, |bad| Outcome::exact(bad, 0))
    }
}

/// `A_p(δ, 0) = -1`.
pub struct ApAtZero {
    pub limit: u64,
}

impl Suite for ApAtZero {
    fn id(&self) -> &str {
        "ap_zero"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_delta_tasks(5, self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let run = || -> Result<String> {
            let chi = QuadraticCharacter::new(p["p"])?;
            Ok(ap_direct_with(&chi, p["delta"], 0)?.to_string())
        };
        run().map_or_else(failed, |v| Outcome::exact(v, -1))
    }
}

/// `max_u |A_p(δ, u)| <= 2√p`.
pub struct WeilBound {
    pub limit: u64,
}

impl Suite for WeilBound {
    fn id(&self) -> &str {
        "weil"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_delta_tasks(5, self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let (prime, delta) = (p["p"], p["delta"]);
        let run = || -> Result<f64> {
            let chi = QuadraticCharacter::new(prime)?;
            let mut worst = 0f64;
            for u in 0..prime as i64 {
                worst = worst.max(ap_direct_with(&chi, delta, u)?.abs());
            }
            Ok(worst)
        };
        let bound = 2.0 * (prime as f64).sqrt();
        run().map_or_else(failed, |worst| {
            Outcome::with_values(format!("{worst:.9}"), format!("<= {bound:.9}"), worst <= bound + 1e-6)
        })
    }
}

/// `τ_p · conj(τ_p) = p`.
pub struct GaussNorm {
    pub limit: u64,
}

impl Suite for GaussNorm {
    fn id(&self) -> &str {
        "gauss_norm"
    }
    fn tasks(&self) -> Vec<Params> {
        primes_in(3, self.limit).into_iter().map(|p| params([("p", p)])).collect()
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        gauss_sum(p["p"]).map_or_else(failed, |tau| Outcome::exact(&tau * &tau.conj(), p["p"]))
    }
}

/// `Σ_{x=1}^{(p-1)/2} ((δ²x² + 4)/p) = -1`.
pub struct HalfSum {
    pub limit: u64,
}

impl Suite for HalfSum {
    fn id(&self) -> &str {
        "half_sum"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_delta_tasks(5, self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        QuadraticCharacter::new(p["p"])
            .and_then(|chi| half_sum_with(&chi, p["delta"]))
            .map_or_else(failed, |v| Outcome::exact(v, -1))
    }
}

/// Counts of `+1, -1, 0` values match their closed forms.
pub struct Profile {
    pub limit: u64,
}

impl Suite for Profile {
    fn id(&self) -> &str {
        "residue_profile"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_delta_tasks(5, self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let (zero, plus, minus) = ResidueProfile::closed_form(p["p"]);
        QuadraticCharacter::new(p["p"])
            .and_then(|chi| residue_profile_with(&chi, p["delta"]))
            .map_or_else(failed, |r| {
                Outcome::exact(format!("{},{},{}", r.n_zero, r.n_plus, r.n_minus), format!("{zero},{plus},{minus}"))
            })
    }
}

/// `ℓ_p(δ) <= L_p`.
pub struct EllBound {
    pub limit: u64,
}

impl Suite for EllBound {
    fn id(&self) -> &str {
        "ell_bound"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_delta_tasks(5, self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let run = || -> Result<(u64, u64)> {
            let chi = QuadraticCharacter::new(p["p"])?;
            Ok((ell_p_with(&chi, p["delta"])?, l_p(p["p"])?))
        };
        run().map_or_else(failed, |(ell, bound)| {
            Outcome::with_values(ell.to_string(), format!("<= {bound}"), ell <= bound)
        })
    }
}

/// `T_j` against its closed form for `p ∈ {5, 7, 11, 13}`, `t ∈ {2, 3}`, `j < t`.
pub struct TjClosedForm;

impl Suite for TjClosedForm {
    fn id(&self) -> &str {
        "tj_closed_form"
    }
    fn tasks(&self) -> Vec<Params> {
        let mut out = Vec::new();
        for p in [5, 7, 11, 13] {
            for t in 2..=3 {
                for delta in 1..=3 {
                    for j in 1..t {
                        out.push(params([("delta", delta), ("j", j), ("p", p), ("t", t)]));
                    }
                }
            }
        }
        out
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        compute_tj(p["p"], p["t"] as u32, p["delta"], p["j"] as u32).map_or_else(failed, |r| {
            let expected = r.closed_form.map_or_else(String::new, |v| v.to_string());
            Outcome::with_values(r.value.to_string(), expected, r.consistent)
        })
    }
}

/// `p^t 𝒩 = X² + Σ T_j`, with `|T_t|` within its bound.
pub struct Decomposition {
    pub limit: u64,
}

impl Suite for Decomposition {
    fn id(&self) -> &str {
        "decomposition"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_power_tasks(self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        decomposition(p["p"], p["t"] as u32, p["delta"], DEFAULT_BUDGET).map_or_else(failed, |d| {
            let rhs = d.rhs.map_or_else(|| "irrational".to_string(), |v| v.to_string());
            let pass = d.holds() && d.reports.iter().all(|r| r.consistent);
            Outcome::with_values(d.lhs.to_string(), rhs, pass)
        })
    }
}

/// `𝒩` meets its lower bound; `𝒩^≠ >= 𝒩 - 2`; the sieve agrees with the
/// pair-by-pair count where the latter is cheap.
pub struct LowerBoundCheck {
    pub limit: u64,
}

const NAIVE_SIDE: u64 = 2000;

impl Suite for LowerBoundCheck {
    fn id(&self) -> &str {
        "lower_bound"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_power_tasks(self.limit)
    }
    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        let (prime, t, delta) = (p["p"], p["t"] as u32, p["delta"]);
        let run = || -> Result<Outcome> {
            let rec = count_n(prime, t, delta)?;
            let bound = n_lower_bound(prime, t)?;
            let (n, n_ne) = (rec.n.unwrap_or(0), rec.n_ne.unwrap_or(0));
            let mut pass = bound.admits(n) && n_ne + 2 >= n;
            if rec.x <= NAIVE_SIDE {
                let slow = count_n_naive(prime, t, delta, DEFAULT_BUDGET)?;
                pass &= slow.n == rec.n && slow.n_ne == rec.n_ne;
            }
            Ok(Outcome::with_values(n.to_string(), format!(">= {:.6}", bound.value()), pass))
        };
        run().unwrap_or_else(failed)
    }
}

/// `𝒩* > 0`.
pub struct NStar {
    pub limit: u64,
}

impl Suite for NStar {
    fn id(&self) -> &str {
        "n_star"
    }
    fn tasks(&self) -> Vec<Params> {
        prime_power_tasks(self.limit)
    }
    fn evaluate(&self, p: &Params, scratch: &mut Scratch) -> Outcome {
        count_n_star_with(&mut scratch.pairs, p["p"], p["t"] as u32, p["delta"]).map_or_else(failed, |r| {
            let count = r.n_star.unwrap_or(0);
            Outcome::with_values(count.to_string(), "> 0".into(), count > 0)
        })
    }
}

/// What the casework and the direct scan say about one `(n, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPoint {
    pub n: u64,
    pub m: u64,
    pub tag: CaseTag,
    pub construction: Option<Construction>,
    pub oracle: Option<CollisionWitness>,
}

impl PartitionPoint {
    /// The witness (if any) is valid, both paths agree on existence, and a
    /// witness is absent exactly where the theorem says it must be.
    pub fn conforms(&self) -> bool {
        let present = self.construction.is_some();
        let valid = self.construction.is_none_or(|c| c.witness.verify() && c.witness.within(self.n));
        let required = match exceptional_s(self.n) {
            None => Some(true),
            Some(s) => {
                let delta = 7 * pow3(6 * s + 4);
                (self.m <= delta).then_some(self.m < delta)
            }
        };
        valid && present == self.oracle.is_some() && required.is_none_or(|r| r == present)
    }
}

/// Classifies, constructs and cross-checks one modulus; `None` for powers of 3.
pub fn partition_point(scanner: &mut InjectivityScanner, n: u64, m: u64) -> Result<Option<PartitionPoint>> {
    let tag = classify(&factorize(m), n)?;
    if let CaseTag::PowerOfThree { .. } = tag {
        return Ok(None);
    }
    let construction = construct_collision(m, n, &tag)?;
    let oracle = scanner.find_collision(n, m);
    Ok(Some(PartitionPoint { n, m, tag, construction, oracle }))
}

/// Every window modulus of every `n <= limit` gets a case and a witness.
pub struct Partition {
    pub limit: u64,
}

impl Suite for Partition {
    fn id(&self) -> &str {
        "partition"
    }
    fn tasks(&self) -> Vec<Params> {
        (1..=self.limit).map(|n| params([("n", n)])).collect()
    }
    fn evaluate(&self, p: &Params, scratch: &mut Scratch) -> Outcome {
        let n = p["n"];
        let (lo, hi) = window(n);
        let (mut checked, mut good) = (0u64, 0u64);
        for m in lo..hi {
            match partition_point(&mut scratch.scanner, n, m) {
                Ok(Some(point)) => {
                    checked += 1;
                    good += point.conforms() as u64;
                }
                Ok(None) => {}
                Err(_) => checked += 1,
            }
        }
        Outcome::exact(good, checked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::{MemorySink, VerificationRecord};
    use crate::sweep::{run_suites, RunSummary};

    fn run(id: &str, limit: u64) -> (RunSummary, Vec<VerificationRecord>) {
        let suites = lemma_suites(id, limit).unwrap();
        let refs: Vec<&dyn Suite> = suites.iter().map(|s| s.as_ref()).collect();
        let mut sink = MemorySink::default();
        let summary = run_suites(&refs, 2, &[], &mut sink).unwrap();
        (summary, sink.records)
    }

    #[test]
    fn every_id_resolves() {
        for id in LEMMA_IDS {
            assert!(!lemma_suites(id, 10).unwrap().is_empty(), "{id}");
        }
        assert!(lemma_suites("L34", 10).is_ok());
        assert!(matches!(lemma_suites("9.9", 10), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn small_sweeps_pass() {
        for (id, limit) in [("3.1", 23), ("3.2", 61), ("4.6", 200), ("4.7", 300), ("4.9", 2000), ("5.1", 17)] {
            let (summary, records) = run(id, limit);
            assert!(!records.is_empty());
            assert!(summary.all_conforming(), "{id}: {summary:?}");
            assert_eq!(summary.failed, summary.expected_failures, "{id}");
        }
    }

    #[test]
    fn exceptional_window_agrees() {
        let mut scanner = InjectivityScanner::new();
        for n in [244, 245] {
            let point = partition_point(&mut scanner, n, 567).unwrap().unwrap();
            assert!(point.construction.is_none() && point.oracle.is_none());
            assert!(point.conforms());
        }
        let (_, records) = run("partition", 300);
        assert!(records.iter().all(|r| r.pass));
    }
}
