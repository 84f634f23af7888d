//! Legendre-symbol statistics of `δ²x² + 4` over half the residues mod `p`,
//! and the worst `ℓ_p(δ)` over all `δ` against its bound `L_p`.
//!
//! ```bash
//! cargo run -p discrim --example residues
//! ```

use discrim::charsum::{ell_p, half_sum, l_p, residue_profile};
use discrim::modarith::primes_in;

fn main() -> discrim::Result<()> {
    println!("{:>4} {:>6} {:>6} {:>6} {:>5} {:>5} {:>6}", "p", "n+", "n-", "n0", "ell", "L_p", "half");
    for p in primes_in(5, 60) {
        let profile = residue_profile(p, 1)?;
        assert!(profile.matches_closed_form());
        let ell = (1..p).map(|d| ell_p(p, d)).collect::<discrim::Result<Vec<_>>>()?;
        let worst = ell.into_iter().max().unwrap_or(0);
        println!(
            "{p:>4} {:>6} {:>6} {:>6} {worst:>5} {:>5} {:>6}",
            profile.n_plus,
            profile.n_minus,
            profile.n_zero,
            l_p(p)?,
            half_sum(p, 1)?
        );
    }
    Ok(())
}
