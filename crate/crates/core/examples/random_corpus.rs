//! Running the property batteries over a seeded random corpus.
//!
//! ```bash
//! cargo run --release --example random_corpus -- 200 7
//! ```

use relcalc::corpus::{corpus, FieldMode};
use relcalc::stability::{all_hold, verify_algebra, verify_contraction, verify_equivalences, verify_spectral};

fn main() -> relcalc::Result<()> {
    let mut args = std::env::args().skip(1);
    let count = args.next().and_then(|a| a.parse().ok()).unwrap_or(100);
    let seed = args.next().and_then(|a| a.parse().ok()).unwrap_or(0);
    let mut failing = 0;
    for (i, t) in corpus(count, seed, 8, FieldMode::Both).iter().enumerate() {
        let mut verdicts = verify_algebra(t, None)?;
        verdicts.extend(verify_equivalences(t)?);
        verdicts.extend(verify_contraction(t)?);
        verdicts.extend(verify_spectral(t)?);
        if !all_hold(&verdicts) {
            failing += 1;
            for (id, v) in verdicts.iter().filter(|(_, v)| !v.holds) {
                println!("item {i}: {id} fails ({})", v.detail);
            }
        }
    }
    println!("{count} relations, {failing} with a failing check");
    Ok(())
}
