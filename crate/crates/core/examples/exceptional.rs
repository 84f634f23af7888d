//! Why `n = 3^(6s+5) + 1, + 2` admit the smaller modulus `7 · 3^(6s+4)`.
//!
//! ```bash
//! cargo run -p discrim --example exceptional
//! ```

use discrim::casework::{ell7_pattern, exceptional_no_collision};

fn main() -> discrim::Result<()> {
    for row in ell7_pattern(11)? {
        println!("ℓ_7(3^{:<2}) = {}  (predicted {})", row.r, row.ell, row.predicted);
    }
    for record in exceptional_no_collision(2)? {
        println!("{:<12} {:?} {} {}", record.suite, record.params, record.computed, if record.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
