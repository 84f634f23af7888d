//! The case partition of every modulus in the window of `n`, with the route
//! each construction takes.
//!
//! ```bash
//! cargo run -p discrim --example casework -- 245
//! ```

use std::collections::BTreeMap;

use discrim::casework::{classify, construct_collision, window};
use discrim::modarith::factorize;

fn main() -> discrim::Result<()> {
    let n: u64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(245);
    let (lo, hi) = window(n);
    let mut routes: BTreeMap<String, usize> = BTreeMap::new();
    let mut missing = Vec::new();
    for m in lo..hi {
        let tag = classify(&factorize(m), n)?;
        match construct_collision(m, n, &tag)? {
            Some(c) => *routes.entry(format!("{:?}", c.route)).or_default() += 1,
            None => missing.push(format!("{m} {tag}")),
        }
    }
    println!("window [{lo}, {hi}) for n = {n}");
    for (route, count) in &routes {
        println!("  {route:<20} {count}");
    }
    println!("moduli without a collision: {missing:?}");
    Ok(())
}
