//! Δ(n) by exhaustive search next to the closed form, including the first
//! exceptional pair `n = 244, 245`.
//!
//! ```bash
//! cargo run -p discrim --example discriminator
//! ```

use discrim::discriminator::{delta_bruteforce, delta_closed_form, exceptional_s};

fn main() -> discrim::Result<()> {
    println!("{:>6} {:>8} {:>8}  exceptional", "n", "brute", "closed");
    for n in [1, 2, 3, 4, 9, 10, 28, 82, 243, 244, 245, 246, 729, 730] {
        let brute = delta_bruteforce(n, false)?.result;
        let closed = delta_closed_form(n)?;
        assert_eq!(brute.delta_value, closed.delta_value);
        let tag = exceptional_s(n).map_or(String::new(), |s| format!("s = {s}"));
        println!("{n:>6} {:>8} {:>8}  {tag}", brute.delta_value, closed.delta_value);
    }
    Ok(())
}
