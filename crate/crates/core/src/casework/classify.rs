use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{ceil_log3, log3_exact, pow3, FactoredModulus};

/// Which of the eight shapes a modulus takes, with the decomposition that
/// witnesses it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "case")]
pub enum CaseTag {
    /// `m = 3^j`.
    PowerOfThree { j: u32 },
    /// `m = δp`, `δ >= 6`, prime `p >= 5`, `p != 7`, `p ∤ δ`.
    CaseI { delta: u64, p: u64 },
    /// `m = δp^r`, `δ >= 4`, prime `p >= 5`, `r >= 2`, `p ∤ δ`.
    CaseII { delta: u64, p: u64, r: u32 },
    /// `m = 2^r`.
    CaseIII { r: u32 },
    /// `m = 2^r t`, `r >= 2`, odd `t >= 5`.
    CaseIV { r: u32, t: u64 },
    /// `m = 2^r 3^s`, `r, s >= 1`.
    CaseV { r: u32, s: u32 },
    /// `m = 14 · 3^r`.
    CaseVI { r: u32 },
    /// `m = δp^t`, `1 <= δ <= 3`, prime `p >= 5`.
    CaseVII { delta: u64, p: u64, t: u32 },
    /// `m = 7 · 3^r`.
    CaseVIII { r: u32 },
}

impl CaseTag {
    /// Rebuilds `m` from the decomposition.
    pub fn modulus(&self) -> u64 {
        match *self {
            CaseTag::PowerOfThree { j } => pow3(j),
            CaseTag::CaseI { delta, p } => delta * p,
            CaseTag::CaseII { delta, p, r } => delta * p.pow(r),
            CaseTag::CaseIII { r } => 1 << r,
            CaseTag::CaseIV { r, t } => (1 << r) * t,
            CaseTag::CaseV { r, s } => (1 << r) * pow3(s),
            CaseTag::CaseVI { r } => 14 * pow3(r),
            CaseTag::CaseVII { delta, p, t } => delta * p.pow(t),
            CaseTag::CaseVIII { r } => 7 * pow3(r),
        }
    }

    /// 0 for a power of three, otherwise the case number 1..=8.
    pub fn index(&self) -> u64 {
        match self {
            CaseTag::PowerOfThree { .. } => 0,
            CaseTag::CaseI { .. } => 1,
            CaseTag::CaseII { .. } => 2,
            CaseTag::CaseIII { .. } => 3,
            CaseTag::CaseIV { .. } => 4,
            CaseTag::CaseV { .. } => 5,
            CaseTag::CaseVI { .. } => 6,
            CaseTag::CaseVII { .. } => 7,
            CaseTag::CaseVIII { .. } => 8,
        }
    }

    /// Checks the side conditions each shape demands.
    pub fn is_well_formed(&self) -> bool {
        use crate::modarith::is_prime;
        match *self {
            CaseTag::PowerOfThree { .. } => true,
            CaseTag::CaseI { delta, p } => delta >= 6 && p >= 5 && p != 7 && is_prime(p) && delta % p != 0,
            CaseTag::CaseII { delta, p, r } => delta >= 4 && p >= 5 && is_prime(p) && r >= 2 && delta % p != 0,
            CaseTag::CaseIII { r } => r >= 1,
            CaseTag::CaseIV { r, t } => r >= 2 && t >= 5 && t % 2 == 1,
            CaseTag::CaseV { r, s } => r >= 1 && s >= 1,
            CaseTag::CaseVI { .. } | CaseTag::CaseVIII { .. } => true,
            CaseTag::CaseVII { delta, p, t } => (1..=3).contains(&delta) && p >= 5 && is_prime(p) && t >= 1,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CaseTag::PowerOfThree { j } => write!(f, "3^{j}"),
            CaseTag::CaseI { delta, p } => write!(f, "(i) {delta}*{p}"),
            CaseTag::CaseII { delta, p, r } => write!(f, "(ii) {delta}*{p}^{r}"),
            CaseTag::CaseIII { r } => write!(f, "(iii) 2^{r}"),
            CaseTag::CaseIV { r, t } => write!(f, "(iv) 2^{r}*{t}"),
            CaseTag::CaseV { r, s } => write!(f, "(v) 2^{r}*3^{s}"),
            CaseTag::CaseVI { r } => write!(f, "(vi) 3^{r}*14"),
            CaseTag::CaseVII { delta, p, t } => write!(f, "(vii) {delta}*{p}^{t}"),
            CaseTag::CaseVIII { r } => write!(f, "(viii) 3^{r}*7"),
        }
    }
}

/// The window `[n, 3^⌈log₃ n⌉)` of moduli that must be ruled out for `n`.
pub fn window(n: u64) -> (u64, u64) {
    (n, pow3(ceil_log3(n)))
}

/// Classifies `m` inside the window of `n`.
pub fn classify(m: &FactoredModulus, n: u64) -> Result<CaseTag> {
    let (lo, hi) = window(n);
    if m.value() < lo || m.value() >= hi {
        return Err(Error::OutOfWindow { n, m: m.value(), upper: hi });
    }
    classify_modulus(m)
}

/// Deterministic classification of any modulus.
///
/// Precedence: power of three; only primes 2 and 3; two or more primes above
/// 3 (split off one prime other than 7); exactly one prime above 3, routed by
/// the exponents of 2 and 3.
pub fn classify_modulus(m: &FactoredModulus) -> Result<CaseTag> {
    let value = m.value();
    if value == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    if let Some(j) = log3_exact(value) {
        return Ok(CaseTag::PowerOfThree { j });
    }
    let i = m.exponent_of(2);
    let j = m.exponent_of(3);
    let large: Vec<(u64, u32)> = m.large_primes().collect();

    match large.len() {
        0 => Ok(if j == 0 { CaseTag::CaseIII { r: i } } else { CaseTag::CaseV { r: i, s: j } }),
        1 => {
            let (p, r) = large[0];
            let two_three = (1u64 << i) * pow3(j);
            Ok(match (i, j, r, p) {
                (i, ..) if i >= 2 => CaseTag::CaseIV { r: i, t: value >> i },
                (1, 0, ..) | (0, 0..=1, ..) => CaseTag::CaseVII { delta: two_three, p, t: r },
                (_, _, r, p) if r >= 2 => CaseTag::CaseII { delta: two_three, p, r },
                (1, j, 1, 7) => CaseTag::CaseVI { r: j },
                (0, j, 1, 7) => CaseTag::CaseVIII { r: j },
                (_, _, _, p) => CaseTag::CaseI { delta: two_three, p },
            })
        }
        _ => {
            // Smallest large prime other than 7; every other large prime is then >= 7.
            let &(p, r) = large.iter().find(|&&(q, _)| q != 7).expect("two distinct large primes");
            let delta = value / p.pow(r);
            Ok(if r == 1 { CaseTag::CaseI { delta, p } } else { CaseTag::CaseII { delta, p, r } })
        }
    }
}
