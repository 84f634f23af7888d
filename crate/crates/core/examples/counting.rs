//! The counting sums for `m = δp^t`: `𝒩`, `𝒩*`, the `T_j`, the exact
//! decomposition `p^t 𝒩 = X² + Σ T_j`, and the lower bound on `𝒩`.
//!
//! ```bash
//! cargo run -p discrim --example counting
//! ```

use discrim::casework::counting::DEFAULT_BUDGET;
use discrim::casework::{count_n_star, decomposition, n_lower_bound};

fn main() -> discrim::Result<()> {
    for (p, t, delta) in [(5, 2, 1), (7, 2, 2), (11, 2, 1), (13, 1, 2), (5, 3, 1)] {
        let d = decomposition(p, t, delta, DEFAULT_BUDGET)?;
        let star = count_n_star(p, t, delta)?;
        let bound = n_lower_bound(p, t)?;
        println!(
            "p = {p:>2} t = {t} δ = {delta}  X = {:>4}  N = {:>5}  N* = {:>5}  bound = {:>9.2}  decomposition {}",
            d.record.x,
            d.record.n.unwrap_or(0),
            star.n_star.unwrap_or(0),
            bound.value(),
            if d.holds() { "holds" } else { "FAILS" },
        );
        for r in &d.reports {
            println!("    T_{} = {}", r.j, r.value);
        }
    }
    Ok(())
}
