use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::charsum::{ell_p_with, incomplete_sum_a_with, incomplete_sum_bound, l_p, QuadraticCharacter};
use crate::error::{Error, Result};
use crate::modarith::{jacobi, pow3, primes_in};
use crate::report::{params, Expectation, MemorySink, Params, VerificationRecord};
use crate::sweep::{run_suites, Outcome, Scratch, Suite};

/// The explicit numeric inequalities the casework relies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InequalityId {
    /// `p/39 + L_p <= p/3` for `p != 7`.
    L34,
    /// `p/13 + L_p <= p/3` for `p >= 165`.
    L35,
    /// `2√p(2 + ln p) < p/3 - 5` for `p >= 4000`.
    C1,
    /// `(p^(r-1) - 3/2)(δ - 3) >= 9/2` for `δ >= 4`, `r >= 2`, except `(δ, p, r) = (4, 5, 2)`.
    L41,
    /// `p^r + δ(p-1)/2 <= δp^r/3` at `(δ, p, r) = (4, 5, 2)`.
    L41Direct,
    /// `(2^r - 3)(t - 3) >= 9` except `r = 2, t <= 11`.
    L43,
    /// `q > (500/3)(1 + ln q)² + 30` for `q >= 20000`.
    L48,
    /// `g(20000) > 0` with `g(x) = √(x-30) - √(500/3)(1 + ln x)`.
    L48G,
    /// `⌊p/3⌋² p^-2 (1 - (-3/p)/p) >= 6/125`.
    L48Density,
    /// `7 + 2·3^(r+1) < 3^(r+2)` for `r >= 1`.
    C45,
    /// `L_p < p/3` except at `p = 7`.
    LpThird,
    /// `ℓ_p(δ) <= p/6` for `p >= 4000`.
    EllSixth,
    /// `|A| <= 2√p(2 + ln p)` and `|A| < 2Y - 3` for `p >= 4000`.
    IncompleteSum,
}

impl InequalityId {
    pub const ALL: [InequalityId; 13] = [
        InequalityId::L34,
        InequalityId::L35,
        InequalityId::C1,
        InequalityId::L41,
        InequalityId::L41Direct,
        InequalityId::L43,
        InequalityId::L48,
        InequalityId::L48G,
        InequalityId::L48Density,
        InequalityId::C45,
        InequalityId::LpThird,
        InequalityId::EllSixth,
        InequalityId::IncompleteSum,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::L34 => "L34",
            InequalityId::L35 => "L35",
            InequalityId::C1 => "C1",
            InequalityId::L41 => "L41",
            InequalityId::L41Direct => "L41_direct",
            InequalityId::L43 => "L43",
            InequalityId::L48 => "L48",
            InequalityId::L48G => "L48_g",
            InequalityId::L48Density => "L48_density",
            InequalityId::C45 => "C45",
            InequalityId::LpThird => "Lp_third",
            InequalityId::EllSixth => "L36_ell",
            InequalityId::IncompleteSum => "L36_sum",
        }
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InequalityId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// One inequality checked over every parameter point up to `limit`.
pub struct InequalitySuite {
    pub id: InequalityId,
    pub limit: u64,
}

const L43_T_CAP: u64 = 10_001;
const L43_R_MAX: u64 = 16;
const L48_SAMPLES: u64 = 1000;
const SUM_DELTAS: u64 = 24;

impl InequalitySuite {
    pub fn new(id: InequalityId, limit: u64) -> Self {
        InequalitySuite { id, limit }
    }

    fn primes(&self, from: u64) -> Vec<Params> {
        primes_in(from, self.limit).into_iter().map(|p| params([("p", p)])).collect()
    }
}

impl Suite for InequalitySuite {
    fn id(&self) -> &str {
        self.id.as_str()
    }

    fn tasks(&self) -> Vec<Params> {
        use InequalityId::*;
        match self.id {
            L34 | L35 | C1 | L48Density | LpThird => self.primes(5),
            EllSixth | IncompleteSum => self.primes(4000),
            L41 => {
                let mut out = Vec::new();
                for p in primes_in(5, self.limit) {
                    for r in 2..=4u32 {
                        if p.checked_pow(r).is_none_or(|q| q > 1 << 62) {
                            continue;
                        }
                        for delta in 4..=12 {
                            out.push(params([("delta", delta), ("p", p), ("r", r as u64)]));
                        }
                    }
                }
                out
            }
            L41Direct => vec![params([("delta", 4), ("p", 5), ("r", 2)])],
            L43 => {
                let t_max = self.limit.min(L43_T_CAP);
                (2..=L43_R_MAX)
                    .flat_map(|r| (5..=t_max).step_by(2).map(move |t| params([("r", r), ("t", t)])))
                    .collect()
            }
            L48 => {
                let hi = self.limit.max(20_000);
                let step = ((hi - 20_000) / L48_SAMPLES).max(1);
                let mut qs: Vec<u64> = (20_000..=hi).step_by(step as usize).collect();
                if qs.last() != Some(&hi) {
                    qs.push(hi);
                }
                qs.into_iter().map(|q| params([("q", q)])).collect()
            }
            L48G => vec![params([("q", 20_000)])],
            C45 => (1..=self.limit.min(38)).map(|r| params([("r", r)])).collect(),
        }
    }

    fn evaluate(&self, p: &Params, _: &mut Scratch) -> Outcome {
        match check(self.id, p) {
            Ok(outcome) => outcome,
            Err(e) => Outcome::with_values(e.to_string(), "holds".into(), false),
        }
    }

    fn expectation(&self, p: &Params) -> Expectation {
        use InequalityId::*;
        let get = |k: &str| p.get(k).copied().unwrap_or(0);
        match self.id {
            L34 | LpThird if get("p") == 7 => Expectation::Fail,
            L35 if get("p") < 165 => Expectation::Either,
            C1 if get("p") < 4000 => Expectation::Either,
            L41 if get("delta") == 4 && get("p") == 5 && get("r") == 2 => Expectation::Fail,
            L43 if get("r") == 2 && get("t") <= 11 => Expectation::Fail,
            _ => Expectation::Pass,
        }
    }
}

fn ratio(n: i128, d: i128) -> Ratio<i128> {
    Ratio::new(n, d)
}

fn compare(lhs: Ratio<i128>, rhs: Ratio<i128>, holds: bool) -> Outcome {
    Outcome::with_values(format!("{lhs} vs {rhs}"), "holds".into(), holds)
}

fn check(id: InequalityId, params: &Params) -> Result<Outcome> {
    use InequalityId::*;
    let get = |k: &str| params.get(k).copied().ok_or_else(|| Error::Config(format!("missing parameter {k}")));
    Ok(match id {
        L34 | L35 => {
            let p = get("p")?;
            let denom = if id == L34 { 39 } else { 13 };
            let lhs = ratio(p as i128, denom) + ratio(l_p(p)? as i128, 1);
            let rhs = ratio(p as i128, 3);
            compare(lhs, rhs, lhs <= rhs)
        }
        LpThird => {
            let p = get("p")?;
            let (lhs, rhs) = (ratio(l_p(p)? as i128, 1), ratio(p as i128, 3));
            compare(lhs, rhs, lhs < rhs)
        }
        C1 => {
            let p = get("p")?;
            let (lhs, rhs) = (incomplete_sum_bound(p), p as f64 / 3.0 - 5.0);
            Outcome::with_values(format!("{lhs:.6} vs {rhs:.6}"), "holds".into(), lhs < rhs)
        }
        L41 => {
            let (delta, p, r) = (get("delta")? as i128, get("p")? as i128, get("r")? as u32);
            let lhs = (ratio(p.pow(r - 1), 1) - ratio(3, 2)) * ratio(delta - 3, 1);
            compare(lhs, ratio(9, 2), lhs >= ratio(9, 2))
        }
        L41Direct => {
            let (delta, p, r) = (get("delta")? as i128, get("p")? as i128, get("r")? as u32);
            let lhs = ratio(p.pow(r) + delta * (p - 1) / 2, 1);
            let rhs = ratio(delta * p.pow(r), 3);
            compare(lhs, rhs, lhs <= rhs)
        }
        L43 => {
            let (r, t) = (get("r")? as u32, get("t")? as i128);
            let lhs = ((1i128 << r) - 3) * (t - 3);
            Outcome::with_values(format!("{lhs} vs 9"), "holds".into(), lhs >= 9)
        }
        L48 => {
            let q = get("q")? as f64;
            let rhs = 500.0 / 3.0 * (1.0 + q.ln()).powi(2) + 30.0;
            Outcome::with_values(format!("{q} vs {rhs:.6}"), "holds".into(), q > rhs)
        }
        L48G => {
            let x = get("q")? as f64;
            let g = (x - 30.0).sqrt() - (500.0f64 / 3.0).sqrt() * (1.0 + x.ln());
            Outcome::with_values(format!("{g:.9}"), "> 0".into(), g > 0.0)
        }
        L48Density => {
            let p = get("p")? as i128;
            let chi = jacobi(p as u64 - 3, p as u64) as i128;
            let lhs = ratio((p / 3).pow(2) * (p - chi), p.pow(3));
            let rhs = ratio(6, 125);
            compare(lhs, rhs, lhs >= rhs)
        }
        C45 => {
            let r = get("r")? as u32;
            let (lhs, rhs) = (7 + 2 * pow3(r + 1) as u128, pow3(r + 2) as u128);
            Outcome::with_values(format!("{lhs} vs {rhs}"), "holds".into(), lhs < rhs)
        }
        EllSixth => {
            let p = get("p")?;
            let chi = QuadraticCharacter::new(p)?;
            let mut worst = 0;
            for delta in 1..=(p - 1) / 2 {
                worst = worst.max(ell_p_with(&chi, delta)?);
            }
            Outcome::with_values(worst.to_string(), format!("<= {}", p / 6), 6 * worst <= p)
        }
        IncompleteSum => {
            let p = get("p")?;
            let chi = QuadraticCharacter::new(p)?;
            let bound = incomplete_sum_bound(p);
            let y = ((p - 1) / 6) as i64;
            let mut worst = 0i64;
            for delta in 1..=SUM_DELTAS.min(p - 1) {
                worst = worst.max(incomplete_sum_a_with(&chi, delta)?.abs());
            }
            let holds = worst as f64 <= bound && worst < 2 * y - 3;
            Outcome::with_values(worst.to_string(), format!("<= {bound:.6}"), holds)
        }
    })
}

/// Runs one inequality over every parameter point up to `limit`.
pub fn verify_inequality(id: InequalityId, limit: u64) -> Result<Vec<VerificationRecord>> {
    let mut sink = MemorySink::default();
    run_suites(&[&InequalitySuite::new(id, limit)], 1, &[], &mut sink)?;
    Ok(sink.records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn failing(id: InequalityId, limit: u64) -> Vec<Params> {
        verify_inequality(id, limit).unwrap().into_iter().filter(|r| !r.pass).map(|r| r.params).collect()
    }

    #[test]
    fn ids_round_trip() {
        for id in InequalityId::ALL {
            assert_eq!(id.as_str().parse::<InequalityId>().unwrap(), id);
        }
        assert!("L99".parse::<InequalityId>().is_err());
    }

    #[test]
    fn boundary_behaviour() {
        assert_eq!(failing(InequalityId::LpThird, 2000), vec![params([("p", 7)])]);
        let l35: Vec<u64> = failing(InequalityId::L35, 2000).iter().map(|p| p["p"]).collect();
        assert_eq!(l35.iter().max(), Some(&163));
        let l43: Vec<(u64, u64)> = failing(InequalityId::L43, 51).iter().map(|p| (p["r"], p["t"])).collect();
        assert_eq!(l43, vec![(2, 5), (2, 7), (2, 9), (2, 11)]);
        let l41 = failing(InequalityId::L41, 200);
        assert_eq!(l41, vec![params([("delta", 4), ("p", 5), ("r", 2)])]);
        assert!(failing(InequalityId::L41Direct, 0).is_empty());
        assert!(failing(InequalityId::C45, 40).is_empty());
        assert!(failing(InequalityId::L48G, 0).is_empty());
        assert!(failing(InequalityId::L48, 100_000).is_empty());
        assert!(failing(InequalityId::L48Density, 5000).is_empty());
    }

    #[test]
    fn l34_counterexamples_below_a_thousand() {
        // p = 19: L_19 = 6 and 19/39 + 6 exceeds 19/3.
        let bad: Vec<u64> = failing(InequalityId::L34, 1000).iter().map(|p| p["p"]).collect();
        assert_eq!(bad, vec![7, 19]);
        let lhs = ratio(19, 39) + ratio(6, 1);
        assert!(lhs > ratio(19, 3));
    }

    #[test]
    fn expectation_marks_boundaries() {
        let s = InequalitySuite::new(InequalityId::L34, 100);
        assert_eq!(s.expectation(&params([("p", 7)])), Expectation::Fail);
        assert_eq!(s.expectation(&params([("p", 19)])), Expectation::Pass);
        let s = InequalitySuite::new(InequalityId::C1, 100);
        assert_eq!(s.expectation(&params([("p", 3989)])), Expectation::Either);
    }

    #[test]
    fn c1_boundary() {
        let records = verify_inequality(InequalityId::C1, 5000).unwrap();
        let largest_failure = records.iter().filter(|r| !r.pass).map(|r| r.params["p"]).max().unwrap();
        assert!(largest_failure < 4000);
        assert!(records.iter().filter(|r| r.params["p"] >= 4000).all(|r| r.pass));
    }
}
