//! Eigenvalues of a square relation, and the nonzero spectrum of `T*T`
//! against its compression to `N(T)⊥`.
//!
//! ```bash
//! cargo run --example spectrum
//! ```

use relcalc::linalg::{c, fmt_sci};
use relcalc::spectral::{point_spectrum, verify_spectral_identity};
use relcalc::{Field, LinearRelation, Matrix, DEFAULT_TOL};

fn main() -> relcalc::Result<()> {
    // e1 -> 2 e1, e2 -> e1 + 3 e2, with e3 as multivalued part.
    let q = Matrix::from_column_slice(3, 2, &[c(1.0), c(0.0), c(0.0), c(0.0), c(1.0), c(0.0)]);
    let op = Matrix::from_column_slice(3, 2, &[c(2.0), c(0.0), c(0.0), c(1.0), c(3.0), c(0.0)]);
    let mul = Matrix::from_column_slice(3, 1, &[c(0.0), c(0.0), c(1.0)]);
    let t = LinearRelation::from_parts(&q, &op, &mul, Field::Real, DEFAULT_TOL)?;

    let s = point_spectrum(&t)?;
    for e in &s.eigenvalues {
        println!("eigenvalue {} + {}i  (multiplicity {})", fmt_sci(e.value.re), fmt_sci(e.value.im), e.multiplicity);
    }
    println!("directions at infinity: {}", s.multivalued_dim);
    println!("resolvent set empty: {}", s.resolvent_empty);

    let gram = verify_spectral_identity(&t)?;
    let id = gram.identity.expect("T*T is compared with its compression");
    println!(
        "nonzero spectra of T*T and its compression agree: {} (gap {})",
        id.holds,
        fmt_sci(id.max_distance)
    );

    // A relation whose graph is too large: every point is an eigenvalue.
    let full = LinearRelation::from_generator_matrix(&Matrix::identity(2, 2), 1, 1, Field::Real, DEFAULT_TOL)?;
    let s = point_spectrum(&full)?;
    println!("H x K: every point an eigenvalue = {}", s.every_point_eigenvalue);
    Ok(())
}
