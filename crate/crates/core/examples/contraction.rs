//! `C_T = (I + T*T)⁻¹` by two independent routes, and `Z_T = T C_T^{1/2}`.
//!
//! ```bash
//! cargo run --example contraction
//! ```

use relcalc::corpus::{item_rng, random_relation};
use relcalc::decomposition::{resolvent_contraction_routes, z_transform_checked};
use relcalc::linalg::fmt_sci;
use relcalc::Field;

fn main() -> relcalc::Result<()> {
    for i in 0..5 {
        let t = random_relation(&mut item_rng(2024, i), 5, Field::Complex);
        let routes = resolvent_contraction_routes(&t)?;
        let z = z_transform_checked(&t)?;
        println!(
            "{}->{}  route gap {}  ||Z_T|| {}  (Z_T)_op vs Z_(T_op) gap {}",
            t.dim_h(),
            t.dim_k(),
            fmt_sci(routes.max_gap()),
            fmt_sci(z.norm),
            fmt_sci(z.route_gap)
        );
    }
    Ok(())
}
