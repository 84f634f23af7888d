//! Exact character sums in `ℤ[ζ_p]`: the two forms of `A_p(δ, u)`, the Gauss
//! sum and the Weil bound.
//!
//! ```bash
//! cargo run -p discrim --example character_sums
//! ```

use discrim::charsum::{ap_direct, ap_kloosterman, gauss_sum};

fn main() -> discrim::Result<()> {
    for p in [5u64, 7, 11, 13] {
        let g = gauss_sum(p)?;
        println!("p = {p:>2}  |G_p|^2 = {:.6}", g.abs() * g.abs());
        for u in 0..p as i64 {
            let direct = ap_direct(p, 1, u)?;
            let kloosterman = ap_kloosterman(p, 1, u)?;
            assert_eq!(direct, kloosterman);
            println!(
                "    u = {u:>2}  |A| = {:>7.4}  2√p = {:.4}  {direct}",
                direct.abs(),
                2.0 * (p as f64).sqrt()
            );
        }
    }
    Ok(())
}
