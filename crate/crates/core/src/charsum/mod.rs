//! Character sums modulo a prime, evaluated exactly.
//!
//! Exponential sums land in [`CyclotomicInt`], so identities between them are
//! checked by comparing integer vectors rather than floating-point values.

mod cyclotomic;

pub use cyclotomic::CyclotomicInt;

use crate::error::{Error, Result};
use crate::modarith::{is_prime, mod_inverse, mul_mod, reduce};

/// Lookup table of `(a/p)` for `a` in `[0, p)`.
#[derive(Clone, Debug)]
pub struct QuadraticCharacter {
    p: u64,
    table: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn new(p: u64) -> Result<Self> {
        if p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotOddPrime(p));
        }
        let mut table = vec![-1i8; p as usize];
        table[0] = 0;
        for x in 1..=(p - 1) / 2 {
            table[mul_mod(x, x, p) as usize] = 1;
        }
        Ok(QuadraticCharacter { p, table })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn of(&self, a: u64) -> i8 {
        self.table[(a % self.p) as usize]
    }

    #[inline]
    pub fn of_signed(&self, a: i128) -> i8 {
        self.table[reduce(a, self.p) as usize]
    }
}

fn check_delta(p: u64, delta: u64) -> Result<()> {
    if delta % p == 0 {
        Err(Error::PrimeDividesDelta { p, delta })
    } else {
        Ok(())
    }
}

fn require_at_least_five(p: u64) -> Result<()> {
    if p < 5 || !is_prime(p) {
        Err(Error::OutOfRange(format!("{p} must be a prime >= 5")))
    } else {
        Ok(())
    }
}

/// `δ^2 x^2 + 4 mod p` for a centred `x`.
#[inline]
fn shifted_square(delta_sq: u64, x: i64, p: u64) -> u64 {
    let x = reduce(x as i128, p);
    (mul_mod(delta_sq, mul_mod(x, x, p), p) + 4) % p
}

/// `A_p(δ,u) = Σ_{|x| ≤ (p-1)/2} ((δ²x²+4)/p) e(ux/p)`, term by term.
pub fn ap_direct(p: u64, delta: u64, u: i64) -> Result<CyclotomicInt> {
    let chi = QuadraticCharacter::new(p)?;
    ap_direct_with(&chi, delta, u)
}

pub fn ap_direct_with(chi: &QuadraticCharacter, delta: u64, u: i64) -> Result<CyclotomicInt> {
    let p = chi.prime();
    check_delta(p, delta)?;
    let d2 = mul_mod(delta % p, delta % p, p);
    let u = reduce(u as i128, p);
    let half = ((p - 1) / 2) as i64;
    let mut raw = vec![0i64; p as usize];
    for x in -half..=half {
        let idx = mul_mod(u, reduce(x as i128, p), p) as usize;
        raw[idx] += chi.of(shifted_square(d2, x, p)) as i64;
    }
    CyclotomicInt::from_raw(p, 1, raw)
}

/// The same sum rewritten as a Kloosterman sum:
/// `Σ_{c=1}^{p-1} e((-(4δ²c)^{-1} u² + 4c)/p)`.
pub fn ap_kloosterman(p: u64, delta: u64, u: i64) -> Result<CyclotomicInt> {
    if p % 2 == 0 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    check_delta(p, delta)?;
    let d2 = mul_mod(delta % p, delta % p, p);
    let u = reduce(u as i128, p);
    let u2 = mul_mod(u, u, p);
    let four_d2 = mul_mod(4, d2, p);
    let mut raw = vec![0i64; p as usize];
    for c in 1..p {
        let inv = mod_inverse(mul_mod(four_d2, c, p) as i128, p)?;
        let phase = (p - mul_mod(inv, u2, p) + mul_mod(4, c, p)) % p;
        raw[phase as usize] += 1;
    }
    CyclotomicInt::from_raw(p, 1, raw)
}

/// `τ_p = Σ_{c=1}^{p-1} (c/p) e(c/p)`.
pub fn gauss_sum(p: u64) -> Result<CyclotomicInt> {
    let chi = QuadraticCharacter::new(p)?;
    let raw = (0..p).map(|c| chi.of(c) as i64).collect();
    CyclotomicInt::from_raw(p, 1, raw)
}

/// `Σ_{x=1}^{(p-1)/2} ((δ²x²+4)/p)`.
pub fn half_sum(p: u64, delta: u64) -> Result<i64> {
    require_at_least_five(p)?;
    half_sum_with(&QuadraticCharacter::new(p)?, delta)
}

pub fn half_sum_with(chi: &QuadraticCharacter, delta: u64) -> Result<i64> {
    let p = chi.prime();
    check_delta(p, delta)?;
    let d2 = mul_mod(delta % p, delta % p, p);
    Ok((1..=((p - 1) / 2) as i64).map(|x| chi.of(shifted_square(d2, x, p)) as i64).sum())
}

/// Counts of `x` in `[1, (p-1)/2]` by the value of `((δ²x²+4)/p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResidueProfile {
    pub p: u64,
    pub delta: u64,
    pub n_plus: u64,
    pub n_minus: u64,
    pub n_zero: u64,
}

impl ResidueProfile {
    /// `(n_zero, n_plus, n_minus)` predicted from `p mod 4` alone.
    pub fn closed_form(p: u64) -> (u64, u64, u64) {
        if p % 4 == 1 {
            (1, (p - 5) / 4, (p - 1) / 4)
        } else {
            (0, (p - 3) / 4, (p + 1) / 4)
        }
    }

    pub fn matches_closed_form(&self) -> bool {
        (self.n_zero, self.n_plus, self.n_minus) == Self::closed_form(self.p)
    }
}

pub fn residue_profile(p: u64, delta: u64) -> Result<ResidueProfile> {
    require_at_least_five(p)?;
    residue_profile_with(&QuadraticCharacter::new(p)?, delta)
}

pub fn residue_profile_with(chi: &QuadraticCharacter, delta: u64) -> Result<ResidueProfile> {
    let p = chi.prime();
    check_delta(p, delta)?;
    let d2 = mul_mod(delta % p, delta % p, p);
    let mut profile = ResidueProfile { p, delta, n_plus: 0, n_minus: 0, n_zero: 0 };
    for x in 1..=((p - 1) / 2) as i64 {
        match chi.of(shifted_square(d2, x, p)) {
            1 => profile.n_plus += 1,
            -1 => profile.n_minus += 1,
            _ => profile.n_zero += 1,
        }
    }
    Ok(profile)
}

/// Smallest `x >= 1` with `((-3δ²x²-12)/p)` in `{0, 1}`.
pub fn ell_p(p: u64, delta: u64) -> Result<u64> {
    require_at_least_five(p)?;
    ell_p_with(&QuadraticCharacter::new(p)?, delta)
}

pub fn ell_p_with(chi: &QuadraticCharacter, delta: u64) -> Result<u64> {
    let p = chi.prime();
    check_delta(p, delta)?;
    let three_d2 = mul_mod(3, mul_mod(delta % p, delta % p, p), p);
    for x in 1..p {
        let v = (mul_mod(three_d2, mul_mod(x, x, p), p) + 12) % p;
        if chi.of((p - v) % p) >= 0 {
            return Ok(x);
        }
    }
    Err(Error::OutOfRange(format!("no admissible x below {p} for delta = {delta}")))
}

/// The bound `L_p` on `ℓ_p(δ)`, by `p mod 12`.
pub fn l_p(p: u64) -> Result<u64> {
    require_at_least_five(p)?;
    Ok(match p % 12 {
        1 => (p + 3) / 4,
        5 => (p - 1) / 4,
        7 => (p + 5) / 4,
        _ => (p + 1) / 4,
    })
}

/// `A = Σ_{-Y ≤ x ≤ Y} ((δ²x²+4)/p)` with `Y = ⌊(p-1)/6⌋`.
pub fn incomplete_sum_a(p: u64, delta: u64) -> Result<i64> {
    require_at_least_five(p)?;
    incomplete_sum_a_with(&QuadraticCharacter::new(p)?, delta)
}

pub fn incomplete_sum_a_with(chi: &QuadraticCharacter, delta: u64) -> Result<i64> {
    let p = chi.prime();
    check_delta(p, delta)?;
    let d2 = mul_mod(delta % p, delta % p, p);
    let y = ((p - 1) / 6) as i64;
    Ok((-y..=y).map(|x| chi.of(shifted_square(d2, x, p)) as i64).sum())
}

/// `2√p (2 + ln p)`, the bound the incomplete sum must respect.
pub fn incomplete_sum_bound(p: u64) -> f64 {
    let pf = p as f64;
    2.0 * pf.sqrt() * (2.0 + pf.ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::{legendre, primes_in};

    fn e(p: u64, idx: usize, coeff: i64) -> Vec<i64> {
        let mut v = vec![0; p as usize];
        v[idx] = coeff;
        v
    }

    #[test]
    fn ap_direct_examples() {
        assert_eq!(ap_direct(5, 1, 0).unwrap().rational_value(), Some(-1));
        assert_eq!(ap_direct(7, 1, 0).unwrap().rational_value(), Some(-1));
        // 1 - e(2/5) - e(-2/5), assembled from hand-evaluated terms.
        let mut raw = e(5, 0, 1);
        raw[2] -= 1;
        raw[3] -= 1;
        let expected = CyclotomicInt::from_raw(5, 1, raw).unwrap();
        assert_eq!(ap_direct(5, 1, 1).unwrap(), expected);
        assert!(matches!(ap_direct(5, 10, 1), Err(Error::PrimeDividesDelta { .. })));
    }

    #[test]
    fn kloosterman_form_examples() {
        assert_eq!(ap_kloosterman(5, 1, 0).unwrap().rational_value(), Some(-1));
        assert_eq!(ap_kloosterman(5, 1, 1).unwrap(), ap_direct(5, 1, 1).unwrap());
        assert_eq!(ap_kloosterman(7, 2, 3).unwrap(), ap_direct(7, 2, 3).unwrap());
        assert_eq!(ap_kloosterman(7, 2, -3).unwrap(), ap_direct(7, 2, 4).unwrap());
    }

    #[test]
    fn gauss_sum_examples() {
        let tau3 = gauss_sum(3).unwrap();
        let mut raw = vec![0, 1, -1];
        raw[0] = 0;
        assert_eq!(tau3, CyclotomicInt::from_raw(3, 1, raw).unwrap());
        for p in [3u64, 5, 7, 11] {
            let tau = gauss_sum(p).unwrap();
            assert_eq!((&tau * &tau.conj()).rational_value(), Some(p as i64));
        }
    }

    #[test]
    fn half_sum_examples() {
        assert_eq!(half_sum(5, 1).unwrap(), -1);
        assert_eq!(half_sum(13, 3).unwrap(), -1);
        assert_eq!(half_sum(7, 1).unwrap(), -1);
        assert!(half_sum(7, 14).is_err());
    }

    #[test]
    fn profile_examples() {
        let prof = |p, d| {
            let r = residue_profile(p, d).unwrap();
            (r.n_zero, r.n_plus, r.n_minus)
        };
        assert_eq!(prof(5, 1), (1, 0, 1));
        assert_eq!(prof(7, 1), (0, 1, 2));
        // Hand enumeration: 4x^2+4 mod 11 for x = 1..5 is 8, 9, 7, 2, 1.
        let oracle: Vec<i8> = [8, 9, 7, 2, 1].iter().map(|&v| legendre(v, 11).unwrap()).collect();
        let plus = oracle.iter().filter(|&&s| s == 1).count() as u64;
        let minus = oracle.iter().filter(|&&s| s == -1).count() as u64;
        assert_eq!(prof(11, 2), (0, plus, minus));
        assert_eq!(prof(11, 2), (0, 2, 3));
    }

    #[test]
    fn ell_and_l_examples() {
        assert_eq!(ell_p(7, 1).unwrap(), 2);
        assert_eq!(ell_p(7, 9).unwrap(), 1);
        assert_eq!(ell_p(7, 3).unwrap(), 3);
        assert_eq!(l_p(7).unwrap(), 3);
        assert_eq!(l_p(5).unwrap(), 1);
        assert_eq!(l_p(13).unwrap(), 4);
        assert!(l_p(3).is_err());
    }

    #[test]
    fn incomplete_sum_examples() {
        assert_eq!(incomplete_sum_a(7, 1).unwrap(), -1);
        assert_eq!(incomplete_sum_a(5, 1).unwrap(), 1);
        let y = (4003 - 1) / 6;
        let oracle: i64 = (-(y as i128)..=y as i128)
            .map(|x| legendre(4 * x * x + 4, 4003).unwrap() as i64)
            .sum();
        let a = incomplete_sum_a(4003, 2).unwrap();
        assert_eq!(a, oracle);
        assert!((a.abs() as f64) < incomplete_sum_bound(4003));
    }

    #[test]
    fn identity_and_weil_on_small_primes() {
        for p in primes_in(5, 31) {
            let chi = QuadraticCharacter::new(p).unwrap();
            for delta in 1..p {
                for u in 0..p as i64 {
                    let direct = ap_direct_with(&chi, delta, u).unwrap();
                    assert_eq!(direct, ap_kloosterman(p, delta, u).unwrap());
                    if u == 0 {
                        assert_eq!(direct.rational_value(), Some(-1));
                    } else {
                        assert!(direct.abs() <= 2.0 * (p as f64).sqrt() + 1e-6);
                    }
                }
            }
        }
    }
}
