//! Colliding pairs `f(a) ≡ f(b) (mod m)` for `f(x) = x^3 + x`, found by the
//! scanner and by the case constructions.
//!
//! ```bash
//! cargo run -p discrim --example collisions
//! ```

use discrim::casework::{classify, construct_collision};
use discrim::discriminator::InjectivityScanner;
use discrim::modarith::factorize;

fn main() -> discrim::Result<()> {
    let mut scanner = InjectivityScanner::new();
    let n = 244;
    for m in [250, 252, 260, 320, 500, 567, 700] {
        let tag = classify(&factorize(m), n)?;
        let built = construct_collision(m, n, &tag)?;
        let scanned = scanner.find_collision(n, m);
        let show = |w: Option<discrim::discriminator::CollisionWitness>| {
            w.map_or("none".to_string(), |w| format!("({}, {})", w.a, w.b))
        };
        println!(
            "m = {m:>3}  {tag:<18} construction {:<12} via {:<20} scan {}",
            show(built.map(|c| c.witness)),
            built.map_or("-".to_string(), |c| format!("{:?}", c.route)),
            show(scanned),
        );
    }
    Ok(())
}
