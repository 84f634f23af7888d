//! The explicit inequalities over their stated ranges. Some have small known
//! exceptions; those are marked as expected failures and counted separately.
//!
//! ```bash
//! cargo run -p discrim --example inequalities
//! ```

use discrim::casework::{verify_inequality, InequalityId};

fn main() -> discrim::Result<()> {
    for id in InequalityId::ALL {
        let limit = match id {
            InequalityId::EllSixth | InequalityId::IncompleteSum => 4300,
            InequalityId::L48 | InequalityId::L48G | InequalityId::L48Density => 100_000,
            _ => 2000,
        };
        let records = verify_inequality(id, limit)?;
        let failures: Vec<_> = records.iter().filter(|r| !r.pass).map(|r| r.params.clone()).collect();
        let shown: Vec<_> = failures.iter().rev().take(4).rev().collect();
        println!("{:<12} checked {:>5}  failing {:>4}  largest {:?}", id.to_string(), records.len(), failures.len(), shown);
    }
    Ok(())
}
