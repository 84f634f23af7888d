//! Quadratic characters, square roots, Hensel lifting and quadratic congruences.

use crate::error::{Error, Result};

use super::primes::{is_prime, mul_mod, pow_mod, reduce, MAX_MODULUS};

fn require_odd_prime(p: u64) -> Result<()> {
    if p % 2 == 1 && is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(p))
    }
}

/// Jacobi symbol `(a/n)` for odd `n`; no primality check.
pub fn jacobi(a: u64, n: u64) -> i8 {
    debug_assert!(n % 2 == 1);
    let mut a = a % n;
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Legendre symbol `(a/p)`; `p` must be an odd prime.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(jacobi(reduce(a, p), p))
}

/// `(a/p)` via Euler's criterion. Used as an independent route in tests.
pub fn euler_criterion(a: i128, p: u64) -> i8 {
    let v = pow_mod(reduce(a, p), (p - 1) / 2, p);
    match v {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Smallest `x` in `[0, p)` with `x^2 = a (mod p)`, or `None` for a non-residue.
pub fn sqrt_mod_prime(a: i128, p: u64) -> Result<Option<u64>> {
    require_odd_prime(p)?;
    Ok(tonelli_shanks(reduce(a, p), p))
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if jacobi(a, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(a, (p + 1) / 4, p)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q % 2 == 0 {
            q /= 2;
            s += 1;
        }
        let z = (2..p).find(|&z| jacobi(z, p) == -1).expect("non-residue exists");
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(a, q, p);
        let mut r = pow_mod(a, (q + 1) / 2, p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1u64 << (m - i - 1), p);
            m = i;
            c = mul_mod(b, b, p);
            t = mul_mod(t, c, p);
            r = mul_mod(r, b, p);
        }
        r
    };
    Some(root.min(p - root))
}

/// Inverse of `d` modulo `q`, in `[1, q-1]`.
pub fn mod_inverse(d: i128, q: u64) -> Result<u64> {
    if q == 1 {
        return Ok(0);
    }
    let (mut old_r, mut r) = (reduce(d, q) as i128, q as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { value: d, modulus: q });
    }
    Ok(reduce(old_s, q))
}

fn prime_power(p: u64, r: u32) -> Result<u64> {
    p.checked_pow(r)
        .filter(|&q| q <= MAX_MODULUS)
        .ok_or_else(|| Error::OutOfRange(format!("{p}^{r} exceeds 2^63")))
}

/// Lifts a simple root `x0` of `x^2 = a (mod p)` to the unique root modulo
/// `p^r` congruent to `x0`.
pub fn lift_root_prime_power(x0: u64, a: i128, p: u64, r: u32) -> Result<u64> {
    require_odd_prime(p)?;
    if r == 0 {
        return Err(Error::OutOfRange("exponent must be >= 1".into()));
    }
    let q = prime_power(p, r)?;
    let x0 = x0 % p;
    if mul_mod(x0, x0, p) != reduce(a, p) {
        return Err(Error::OutOfRange(format!("{x0} is not a square root of {a} mod {p}")));
    }
    if x0 == 0 {
        // Singular: only the trivial lift is attempted.
        return if reduce(a, q) == 0 {
            Ok(0)
        } else {
            Err(Error::NonLiftable { root: x0, value: a, prime: p })
        };
    }
    let mut x = x0;
    let mut modulus = p;
    for _ in 1..r {
        modulus *= p;
        let target = reduce(a, modulus);
        let fx = reduce(mul_mod(x, x, modulus) as i128 - target as i128, modulus);
        let inv = mod_inverse(2 * x as i128, modulus)?;
        x = reduce(x as i128 - mul_mod(fx, inv, modulus) as i128, modulus);
    }
    Ok(x)
}

/// Every `y` in `[0, p^r)` with `y^2 = a (mod p^r)`, sorted.
///
/// Units go through Tonelli–Shanks and Hensel lifting; multiples of `p`
/// are split by valuation so the lifted part is always a unit.
pub fn sqrt_mod_prime_power_all(a: i128, p: u64, r: u32) -> Result<Vec<u64>> {
    require_odd_prime(p)?;
    let q = prime_power(p, r)?;
    let a = reduce(a, q);
    if a == 0 {
        let step = p.pow(r.div_ceil(2));
        return Ok((0..q / step).map(|i| i * step).collect());
    }
    let mut v = 0u32;
    let mut unit = a;
    while unit % p == 0 {
        unit /= p;
        v += 1;
    }
    if v % 2 == 1 {
        return Ok(Vec::new());
    }
    let Some(z0) = tonelli_shanks(unit % p, p) else {
        return Ok(Vec::new());
    };
    let inner = p.pow(r - v);
    let z = lift_root_prime_power(z0, unit as i128, p, r - v)?;
    let scale = p.pow(v / 2);
    let mut roots = Vec::with_capacity(2 * scale as usize);
    for w0 in [z, inner - z] {
        for i in 0..scale {
            let w = w0 + i * inner;
            roots.push(mul_mod(scale, w, q));
        }
    }
    roots.sort_unstable();
    roots.dedup();
    Ok(roots)
}

/// The congruence `a x^2 + b x + c = 0 (mod p^r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticCongruence {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub p: u64,
    pub r: u32,
}

impl QuadraticCongruence {
    pub fn new(a: i128, b: i128, c: i128, p: u64, r: u32) -> Result<Self> {
        require_odd_prime(p)?;
        prime_power(p, r)?;
        if r == 0 {
            return Err(Error::OutOfRange("exponent must be >= 1".into()));
        }
        if reduce(a, p) == 0 {
            return Err(Error::OutOfRange(format!("leading coefficient divisible by {p}")));
        }
        Ok(QuadraticCongruence { a, b, c, p, r })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.r)
    }

    pub fn is_solution(&self, x: u64) -> bool {
        let q = self.modulus();
        let x = x % q;
        let (a, b, c) = (reduce(self.a, q), reduce(self.b, q), reduce(self.c, q));
        let v = mul_mod(mul_mod(a, x, q), x, q) as u128 + mul_mod(b, x, q) as u128 + c as u128;
        v % q as u128 == 0
    }

    /// All solutions in `[0, p^r)`, sorted, found by completing the square:
    /// `(2a x + b)^2 = b^2 - 4ac`.
    pub fn solutions(&self) -> Result<Vec<u64>> {
        let q = self.modulus();
        let (a, b, c) = (reduce(self.a, q), reduce(self.b, q), reduce(self.c, q));
        let disc = reduce(
            mul_mod(b, b, q) as i128 - mul_mod(mul_mod(4 % q, a, q), c, q) as i128,
            q,
        );
        let inv_2a = mod_inverse(2 * a as i128, q)?;
        let mut xs: Vec<u64> = sqrt_mod_prime_power_all(disc as i128, self.p, self.r)?
            .into_iter()
            .map(|y| mul_mod(reduce(y as i128 - b as i128, q), inv_2a, q))
            .collect();
        xs.sort_unstable();
        xs.dedup();
        Ok(xs)
    }
}

/// A root `x` of `3x^2 + 5 = 0 (mod 2^r)` with `3 <= x < 2^r`: the smallest
/// such root, reached by 2-adic lifting.
pub fn solve_quadratic_mod_2r(r: u32) -> Result<u64> {
    if !(3..=63).contains(&r) {
        return Err(Error::OutOfRange(format!("r = {r} must lie in [3, 63]")));
    }
    let value = |x: u64| 3 * (x as u128) * (x as u128) + 5;
    // Every odd x solves it modulo 8; each step fixes one more bit.
    let mut x = 1u64;
    for k in 3..r {
        if value(x) % (1u128 << (k + 1)) != 0 {
            x += 1 << (k - 1);
        }
    }
    let modulus = 1u128 << r;
    let half = 1u128 << (r - 1);
    let x = x as u128;
    let candidates = [x, modulus - x, (x + half) % modulus, (modulus - x + half) % modulus];
    let best = candidates
        .into_iter()
        .filter(|&c| c >= 3 && value(c as u64) % modulus == 0)
        .min()
        .expect("four odd roots, at most one below 3");
    Ok(best as u64)
}
