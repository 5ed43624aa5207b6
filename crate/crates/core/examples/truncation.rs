//! Probing a family of finite truncations for a range that degenerates.
//!
//! ```bash
//! cargo run --example truncation
//! ```

use relcalc::linalg::fmt_sci;
use relcalc::probe::{truncation_probe, FamilySpec};

fn main() -> relcalc::Result<()> {
    let families = [
        r#"{"kind": "diagonal", "entry": "1/i", "n_range": [2, 64]}"#,
        r#"{"kind": "diagonal", "entry": "1 + 1/i", "n_range": [2, 64]}"#,
        r#"{"kind": "banded", "entry": "2", "bands": [{"offset": 1, "entry": "-1"}, {"offset": -1, "entry": "-1"}], "n_range": [2, 40]}"#,
        r#"{"kind": "graph_sequence", "entry": "1/i", "mul_dim": 2, "n_range": [4, 40]}"#,
    ];
    for text in families {
        let family = FamilySpec::from_json(text)?;
        let r = truncation_probe(&family)?;
        let last = r.rows.last().expect("nonempty range");
        println!(
            "{:<13} slope {:>8.4}  R^2 {:.4}  gamma_{} = {}  -> {}",
            format!("{:?}", family.kind).split_whitespace().next().unwrap_or(""),
            r.slope,
            r.r_squared,
            last.n,
            fmt_sci(last.gamma),
            r.trend.as_str()
        );
    }
    Ok(())
}
