//! Building relations and doing arithmetic with them.
//!
//! ```bash
//! cargo run --example relations
//! ```

use relcalc::decomposition::regular_part;
use relcalc::linalg::c;
use relcalc::subspace::real_vector;
use relcalc::{Field, LinearRelation, Matrix, Subspace, DEFAULT_TOL};

fn show(name: &str, t: &LinearRelation) {
    let (d, r, n, m) = t.part_dims();
    println!("{name:<24} {}->{}  dim D={d} R={r} N={n} M={m}", t.dim_h(), t.dim_k());
}

fn main() -> relcalc::Result<()> {
    // Graph of a matrix.
    let a = LinearRelation::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]])?;
    show("graph(diag(2, 0))", &a);

    // A multivalued relation: e1 -> 3 e1, plus the whole line through e2.
    let q = Matrix::from_column_slice(2, 1, &[c(1.0), c(0.0)]);
    let op = Matrix::from_column_slice(2, 1, &[c(3.0), c(0.0)]);
    let mul = Matrix::from_column_slice(2, 1, &[c(0.0), c(1.0)]);
    let t = LinearRelation::from_parts(&q, &op, &mul, Field::Real, DEFAULT_TOL)?;
    show("T", &t);
    show("T*", &t.adjoint());
    show("T^-1", &t.inverse());
    show("T + graph(diag(2,0))", &t.sum(&a)?);
    show("T graph(diag(2,0))", &t.compose(&a)?);
    show("graph minkowski sum", &t.minkowski_sum(&a)?);

    // T x is a coset of M(T).
    let tx = t.image_of(&real_vector(&[1.0, 0.0]))?;
    let p: Vec<String> = tx.particular.iter().map(|z| format!("{:.3}", z.re)).collect();
    println!("T e1 = [{}] + M(T), dim M(T) = {}", p.join(", "), tx.direction.rank());

    // T = T_op ∔ ({0} × M(T)).
    let top = regular_part(&t);
    let rebuilt = top.as_relation.minkowski_sum(&LinearRelation::pure_multivalued(2, &t.mulpart())?)?;
    println!("T = T_op + ({{0}} x M(T)): {}", rebuilt.equals(&t, 1e-10)?);
    println!("(T*)* = T: {}", t.adjoint().adjoint().equals(&t, 1e-10)?);

    // Adjoint of {0} × K has domain {0}.
    let everything = LinearRelation::pure_multivalued(2, &Subspace::full(2, Field::Real))?;
    show("({0} x K)*", &everything.adjoint());
    Ok(())
}
