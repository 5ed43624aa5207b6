//! Stability under perturbation: a relatively bounded sum, a Cartesian
//! product and a diagonally dominated block relation.
//!
//! ```bash
//! cargo run --example perturbation
//! ```

use relcalc::linalg::fmt_sci;
use relcalc::stability::{block_matrix, check_product_stability, check_sum_stability};
use relcalc::LinearRelation;

fn opt(x: Option<f64>) -> String {
    x.map_or("-".into(), fmt_sci)
}

fn main() -> relcalc::Result<()> {
    let two = LinearRelation::from_real_rows(&[&[2.0, 0.0], &[0.0, 2.0]])?;
    let one = LinearRelation::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0]])?;
    let sum = check_sum_stability(&two, &one, 200, 1)?;
    println!("sum: b* = {}  M_T = {}  M_(S+T) = {}", opt(sum.b_star), fmt_sci(sum.m_t), opt(sum.m_sum));
    for (id, v) in &sum.verdicts {
        println!("  {id}: {}", v.holds);
    }

    let half = LinearRelation::from_real_rows(&[&[0.5]])?;
    let four = LinearRelation::from_real_rows(&[&[4.0]])?;
    let product = check_product_stability(&half, &four)?;
    println!("product: M = max({}, {}) = {}", fmt_sci(product.m_t), fmt_sci(product.m_s), fmt_sci(product.m_product));

    let a = LinearRelation::from_real_rows(&[&[2.0]])?;
    let b = LinearRelation::from_real_rows(&[&[1.0]])?;
    let block = block_matrix(&a, &b, &b, &a)?;
    println!("block [[2, 1], [1, 2]]: d = {}  gamma = {}  certified = {}", opt(block.d), fmt_sci(block.gamma), block.certified);
    Ok(())
}
