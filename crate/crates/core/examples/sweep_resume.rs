//! A resumable sweep: verify part of a range into a JSONL log, then resume and
//! finish without recomputing completed records.
//!
//! ```bash
//! cargo run -p discrim --example sweep_resume
//! ```

use discrim::discriminator::verify_range;
use discrim::report::{load_log, JsonlSink};

fn main() -> discrim::Result<()> {
    let dir = std::env::temp_dir().join(format!("discrim-sweep-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let log = dir.join("delta.jsonl");

    let mut sink = JsonlSink::append(&log)?;
    let first = verify_range(1, 400, 4, &[], &mut sink)?;
    drop(sink);
    println!("first pass: {} records", first.total);

    let prior = load_log(&log)?;
    let mut sink = JsonlSink::append(&log)?;
    let second = verify_range(1, 1000, 4, &prior, &mut sink)?;
    drop(sink);
    println!("resumed: {} skipped, {} new, all conforming = {}", second.resumed, second.total - second.resumed, second.all_conforming());
    println!("log now holds {} records at {}", load_log(&log)?.len(), log.display());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
