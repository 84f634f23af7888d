//! Primality, factorization and small integer helpers.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus any kernel in this crate accepts.
pub const MAX_MODULUS: u64 = 1 << 63;

const TRIAL_DIVISION_LIMIT: u64 = 1_000_000;

// Deterministic for every n < 3.3e24, which covers all of u64.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed value into `[0, m)`.
#[inline]
pub fn reduce(value: i128, m: u64) -> u64 {
    value.rem_euclid(m as i128) as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// `base^exp` or `None` on overflow.
pub fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// `3^e`; panics past `3^40`.
pub fn pow3(e: u32) -> u64 {
    3u64.checked_pow(e).expect("power of three overflows u64")
}

/// Smallest `k` with `3^k >= n`, by integer powering only.
pub fn ceil_log3(n: u64) -> u32 {
    assert!(n >= 1, "ceil_log3 needs n >= 1");
    let mut k = 0u32;
    let mut power: u128 = 1;
    while power < n as u128 {
        power *= 3;
        k += 1;
    }
    k
}

/// Returns `Some(j)` when `m = 3^j`.
pub fn log3_exact(mut m: u64) -> Option<u32> {
    if m == 0 {
        return None;
    }
    let mut j = 0;
    while m % 3 == 0 {
        m /= 3;
        j += 1;
    }
    (m == 1).then_some(j)
}

/// μ(p^j) for a prime p.
pub fn mobius_prime_power(_p: u64, j: u32) -> i8 {
    assert!(j >= 1, "exponent must be positive");
    if j == 1 {
        -1
    } else {
        0
    }
}

/// Deterministic Miller–Rabin, exact for every u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes in `[lo, hi]`, by a plain sieve of Eratosthenes.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut composite = vec![false; hi_us + 1];
    let mut out = Vec::new();
    for i in 2..=hi_us {
        if composite[i] {
            continue;
        }
        if i as u64 >= lo {
            out.push(i as u64);
        }
        let mut j = i.saturating_mul(i);
        while j <= hi_us {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// A positive integer together with its prime factorization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredModulus {
    m: u64,
    factors: Vec<(u64, u32)>,
}

impl FactoredModulus {
    /// Checks every invariant: primes strictly increasing, exponents positive, exact product.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut m: u64 = 1;
        let mut last = 1u64;
        for &(p, e) in &factors {
            if p <= last || e == 0 || !is_prime(p) {
                return Err(Error::OutOfRange(format!("bad factor {p}^{e}")));
            }
            last = p;
            let pe = checked_pow(p, e)
                .ok_or_else(|| Error::OutOfRange(format!("{p}^{e} overflows")))?;
            m = m
                .checked_mul(pe)
                .ok_or_else(|| Error::OutOfRange("product overflows".into()))?;
        }
        Ok(FactoredModulus { m, factors })
    }

    pub fn value(&self) -> u64 {
        self.m
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Primes of the factorization greater than 3, with exponents.
    pub fn large_primes(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().copied().filter(|&(p, _)| p > 3)
    }
}

impl fmt::Display for FactoredModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Complete factorization: trial division to 10^6, then Pollard–Brent rho
/// with fixed seeds.
pub fn factorize(m: u64) -> FactoredModulus {
    assert!(m >= 1, "factorize needs m >= 1");
    let mut primes = Vec::new();
    let mut rest = m;
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_LIMIT && d * d <= rest {
        while rest % d == 0 {
            primes.push(d);
            rest /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        split_large(rest, &mut primes);
    }
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    FactoredModulus { m, factors }
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

fn pollard_brent(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c, n);
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = 128.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_is_prime(n: u64) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn primality_examples() {
        assert!(is_prime(7));
        assert!(!is_prime(1));
        assert_eq!(is_prime(3_999_971), trial_division_is_prime(3_999_971));
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division_is_prime(n), "n = {n}");
        }
        // Strong pseudoprimes to small bases.
        assert!(!is_prime(3_215_031_751));
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn factorization_examples() {
        assert_eq!(factorize(567).factors(), &[(3, 4), (7, 1)]);
        assert!(factorize(1).factors().is_empty());
        assert_eq!(factorize(48000).factors(), &[(2, 7), (3, 1), (5, 3)]);
        let big = 1_000_003u64 * 998_244_353;
        assert_eq!(factorize(big).factors(), &[(1_000_003, 1), (998_244_353, 1)]);
        let sq = 4_294_967_291u64 * 4_294_967_291;
        assert_eq!(factorize(sq).factors(), &[(4_294_967_291, 2)]);
    }

    #[test]
    fn factorization_reconstructs_up_to_a_million() {
        for m in 1..=1_000_000u64 {
            let f = factorize(m);
            let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(product, m);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn ceil_log3_examples_and_sandwich() {
        assert_eq!(ceil_log3(1), 0);
        assert_eq!(ceil_log3(243), 5);
        // 3^5 = 243 < 244, so the next power is needed.
        assert_eq!(ceil_log3(244), 6);
        for n in 2..=10_000_000u64 {
            let k = ceil_log3(n);
            assert!(3u64.pow(k - 1) < n && n <= 3u64.pow(k), "n = {n}");
        }
    }

    #[test]
    fn mobius_on_prime_powers() {
        assert_eq!(mobius_prime_power(5, 1), -1);
        assert_eq!(mobius_prime_power(5, 2), 0);
        assert_eq!(mobius_prime_power(7, 3), 0);
    }

    #[test]
    fn sieve_matches_miller_rabin() {
        let sieved = primes_in(5, 5000);
        let mr: Vec<u64> = (5..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieved, mr);
    }

    #[test]
    fn factored_modulus_rejects_bad_input() {
        assert!(FactoredModulus::from_factors(vec![(3, 1), (2, 1)]).is_err());
        assert!(FactoredModulus::from_factors(vec![(4, 1)]).is_err());
        assert!(FactoredModulus::from_factors(vec![(2, 0)]).is_err());
        let f = FactoredModulus::from_factors(vec![(3, 4), (7, 1)]).unwrap();
        assert_eq!(f.value(), 567);
        assert_eq!(f.to_string(), "3^4*7");
    }
}
