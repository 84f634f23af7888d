//! The arithmetic kernel: primality, factoring, Legendre symbols, Tonelli-Shanks
//! and Hensel lifting to prime powers.
//!
//! ```bash
//! cargo run -p discrim --example modular_kernel
//! ```

use discrim::modarith::{factorize, is_prime, legendre, lift_root_prime_power, sqrt_mod_prime, sqrt_mod_prime_power_all};

fn main() -> discrim::Result<()> {
    for m in [567u64, 1_000_000_007, 3 * 7 * 7 * 4096, 4_052_555_153_018_976_267] {
        println!("{m} = {}  prime: {}", factorize(m), is_prime(m));
    }
    let p = 10_007;
    for a in [-3i128, 2, 5] {
        let root = sqrt_mod_prime(a, p)?;
        println!("({a}/{p}) = {:>2}  sqrt = {root:?}", legendre(a, p)?);
        if let Some(x) = root {
            let lifted = lift_root_prime_power(x, a, p, 3)?;
            println!("    lifted to {p}^3: {lifted}");
        }
    }
    println!("square roots of -3 mod 7^4: {:?}", sqrt_mod_prime_power_all(-3, 7, 4)?);
    Ok(())
}
