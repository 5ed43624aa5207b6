//! The reduced minimum modulus, the Hyers-Ulam constant `M_T = ‖T†‖`, and a
//! sampling check that no pair of range points needs a larger constant.
//!
//! ```bash
//! cargo run --example hus_constant
//! ```

use relcalc::decomposition::{gamma, hus_constant, moore_penrose};
use relcalc::linalg::fmt_sci;
use relcalc::stability::{certify_hus_with, hus_oracle};
use relcalc::LinearRelation;

fn main() -> relcalc::Result<()> {
    let t = LinearRelation::from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, 0.5, 0.0], &[0.0, 0.0, 0.0]])?;
    println!("gamma(T) = {}", fmt_sci(gamma(&t)));
    println!("M_T      = {}", fmt_sci(hus_constant(&t)));
    println!("T† is {}x{}", moore_penrose(&t).full_matrix().nrows(), moore_penrose(&t).full_matrix().ncols());

    let oracle = hus_oracle(&t, 1000, 7)?;
    println!(
        "oracle: sup ratio {} (random samples alone reach {})",
        fmt_sci(oracle.sup_ratio),
        fmt_sci(oracle.max_sampled_ratio)
    );

    let report = certify_hus_with(&t, t.tol(), 1000, 7)?;
    for (id, v) in &report.verdicts {
        println!("{:<24} {} (value {}, threshold {})", id, if v.holds { "holds" } else { "FAILS" }, fmt_sci(v.value), fmt_sci(v.threshold));
    }
    Ok(())
}
