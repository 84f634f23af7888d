//! Exact integer and modular arithmetic on 64-bit moduli.
//!
//! Residue products go through 128-bit intermediates, so every modulus up
//! to 2^63 is safe.

mod primes;
mod roots;

pub use primes::{
    add_mod, ceil_log3, checked_pow, factorize, gcd, is_prime, log3_exact, mobius_prime_power,
    mul_mod, pow3, pow_mod, primes_in, reduce, FactoredModulus, MAX_MODULUS,
};
pub use roots::{
    euler_criterion, jacobi, legendre, lift_root_prime_power, mod_inverse, solve_quadratic_mod_2r,
    sqrt_mod_prime, sqrt_mod_prime_power_all, QuadraticCongruence,
};

/// `a^3 + a mod m`, reduced step by step.
#[inline]
pub fn cube_plus_mod(a: u64, m: u64) -> u64 {
    let a = a % m;
    add_mod(mul_mod(mul_mod(a, a, m), a, m), a, m)
}
