//! Dense kernels shared by every module.
//!
//! All matrices carry `Complex<f64>` entries. When the field is real the
//! decompositions run on the real parts so that real inputs produce exactly
//! real outputs.

use faer::{Mat, MatRef, Side};
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type Vector = DVector<C64>;
pub type Matrix = DMatrix<C64>;

/// Default relative rank tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Scalar field of the underlying Hilbert spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn of_scalar(c: C64) -> Field {
        if c.im == 0.0 {
            Field::Real
        } else {
            Field::Complex
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

pub fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Inner product, linear in the first argument and conjugate-linear in the second.
pub fn inner(a: &Vector, b: &Vector) -> C64 {
    b.dotc(a)
}

fn to_faer_real(m: &Matrix) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)].re)
}

fn to_faer(m: &Matrix) -> Mat<C64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer_real(m: MatRef<'_, f64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| c(m[(i, j)]))
}

fn from_faer(m: MatRef<'_, C64>) -> Matrix {
    Matrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Thin singular value decomposition with singular values sorted descending.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    /// Right singular vectors as columns (`a = u * diag(s) * v^H`).
    pub v: Matrix,
}

pub fn svd(m: &Matrix, field: Field) -> Svd {
    let (rows, cols) = m.shape();
    if rows.min(cols) == 0 {
        return Svd {
            u: Matrix::zeros(rows, 0),
            s: Vec::new(),
            v: Matrix::zeros(cols, 0),
        };
    }
    match field {
        Field::Real => {
            let d = to_faer_real(m).thin_svd().expect("SVD converges");
            Svd {
                u: from_faer_real(d.U()),
                s: d.S().column_vector().iter().copied().collect(),
                v: from_faer_real(d.V()),
            }
        }
        Field::Complex => {
            let d = to_faer(m).thin_svd().expect("SVD converges");
            Svd {
                u: from_faer(d.U()),
                s: d.S().column_vector().iter().map(|z| z.re).collect(),
                v: from_faer(d.V()),
            }
        }
    }
}

pub fn singular_values(m: &Matrix, field: Field) -> Vec<f64> {
    if m.nrows().min(m.ncols()) == 0 {
        return Vec::new();
    }
    match field {
        Field::Real => to_faer_real(m).singular_values().expect("SVD converges"),
        Field::Complex => to_faer(m).singular_values().expect("SVD converges"),
    }
}

/// Spectral norm; zero for empty matrices.
pub fn norm2(m: &Matrix) -> f64 {
    singular_values(m, Field::Complex).first().copied().unwrap_or(0.0)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &Matrix, field: Field) -> (Vec<f64>, Matrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }
    let sym = (m + m.adjoint()).scale(0.5);
    match field {
        Field::Real => {
            let e = to_faer_real(&sym).self_adjoint_eigen(Side::Lower).expect("eigensolver converges");
            (e.S().column_vector().iter().copied().collect(), from_faer_real(e.U()))
        }
        Field::Complex => {
            let e = to_faer(&sym).self_adjoint_eigen(Side::Lower).expect("eigensolver converges");
            (e.S().column_vector().iter().map(|z| z.re).collect(), from_faer(e.U()))
        }
    }
}

/// Principal square root of a Hermitian positive semidefinite matrix.
///
/// Eigenvalues at or below `zero` count as exact zeros; anything below
/// `-clamp` is reported through `Err` with the offending eigenvalue.
pub fn hermitian_sqrt(m: &Matrix, field: Field, clamp: f64, zero: f64) -> Result<Matrix, f64> {
    let (vals, vecs) = hermitian_eigen(m, field);
    let mut roots = Vec::with_capacity(vals.len());
    for &v in &vals {
        if v < -clamp {
            return Err(v);
        }
        roots.push(if v <= zero { 0.0 } else { v.sqrt() });
    }
    let d = Matrix::from_diagonal(&Vector::from_iterator(roots.len(), roots.into_iter().map(c)));
    Ok(&vecs * d * vecs.adjoint())
}

/// Eigenvalues of a general square matrix.
pub fn eigenvalues(m: &Matrix) -> Vec<C64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)]],
        _ => to_faer(m).eigenvalues().expect("eigensolver converges"),
    }
}

/// Number of singular values above `tol * max(s_max, floor)`.
pub fn numerical_rank(s: &[f64], tol: f64, floor: f64) -> usize {
    let smax = s.first().copied().unwrap_or(0.0);
    let threshold = tol * smax.max(floor);
    s.iter().filter(|&&x| x > threshold).count()
}

/// Orthonormal basis of the column space.
///
/// The rank threshold is `tol * max(s_max, floor)`: `floor = 0` gives a purely
/// relative decision, `floor = 1` treats inputs as if they were unit-scaled so
/// that all-roundoff matrices collapse to rank zero.
pub fn column_space(m: &Matrix, field: Field, tol: f64, floor: f64) -> Matrix {
    let d = svd(m, field);
    let r = numerical_rank(&d.s, tol, floor);
    d.u.columns(0, r).into_owned()
}

/// Orthonormal basis of the orthogonal complement of the span of the
/// orthonormal columns of `basis`.
pub fn complement_of_orthonormal(basis: &Matrix, field: Field) -> Matrix {
    let n = basis.nrows();
    let r = basis.ncols();
    if r == 0 {
        return Matrix::identity(n, n);
    }
    if r >= n {
        return Matrix::zeros(n, 0);
    }
    let proj = Matrix::identity(n, n) - basis * basis.adjoint();
    let (_vals, vecs) = hermitian_eigen(&proj, field);
    // Eigenvalues are ~0 (r of them) then ~1 (n - r of them).
    vecs.columns(r, n - r).into_owned()
}

/// Orthonormal basis of the null space of `m` (as columns, `m.ncols()` rows).
pub fn null_space(m: &Matrix, field: Field, tol: f64, floor: f64) -> Matrix {
    let rowspace = column_space(&m.adjoint(), field, tol, floor);
    complement_of_orthonormal(&rowspace, field)
}

/// Moore-Penrose pseudoinverse with rank threshold `tol * max(s_max, floor)`.
pub fn pinv(m: &Matrix, field: Field, tol: f64, floor: f64) -> Matrix {
    let (rows, cols) = m.shape();
    let d = svd(m, field);
    let r = numerical_rank(&d.s, tol, floor);
    let mut out = Matrix::zeros(cols, rows);
    for i in 0..r {
        let vi = d.v.column(i);
        let ui = d.u.column(i);
        out += (vi * ui.adjoint()).scale(1.0 / d.s[i]);
    }
    out
}

/// Stacks column blocks vertically: `[top; bottom]`.
pub fn vstack(top: &Matrix, bottom: &Matrix) -> Matrix {
    assert_eq!(top.ncols(), bottom.ncols());
    let mut out = Matrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.rows_mut(0, top.nrows()).copy_from(top);
    out.rows_mut(top.nrows(), bottom.nrows()).copy_from(bottom);
    out
}

/// Concatenates matrices side by side: `[left, right]`.
pub fn hstack(left: &Matrix, right: &Matrix) -> Matrix {
    assert_eq!(left.nrows(), right.nrows());
    let mut out = Matrix::zeros(left.nrows(), left.ncols() + right.ncols());
    out.columns_mut(0, left.ncols()).copy_from(left);
    out.columns_mut(left.ncols(), right.ncols()).copy_from(right);
    out
}

/// Largest entrywise modulus of the difference.
pub fn max_abs_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Relative difference `|a - b| / max(|a|, |b|, 1e-300)`; equal infinities compare as 0.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a.is_infinite() || b.is_infinite() {
        return f64::INFINITY;
    }
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// C-style `%.12e` rendering, e.g. `5.000000000000e-01`.
pub fn fmt_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}
