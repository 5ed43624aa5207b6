//! Linear subspaces of a finite-dimensional real or complex inner-product space.
//!
//! A [`Subspace`] stores an orthonormal basis as the columns of a matrix. The
//! zero subspace has a basis with zero columns. Equality is decided by
//! principal angles, never by comparing bases.

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Matrix, Vector, C64, DEFAULT_TOL};

#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Matrix,
    tol: f64,
    field: Field,
}

impl Subspace {
    /// Builds a subspace from a matrix whose columns are already orthonormal.
    pub(crate) fn from_orthonormal(basis: Matrix, field: Field, tol: f64) -> Self {
        Subspace { basis, tol, field }
    }

    pub fn zero(ambient_dim: usize, field: Field) -> Self {
        Subspace::from_orthonormal(Matrix::zeros(ambient_dim, 0), field, DEFAULT_TOL)
    }

    pub fn full(ambient_dim: usize, field: Field) -> Self {
        Subspace::from_orthonormal(Matrix::identity(ambient_dim, ambient_dim), field, DEFAULT_TOL)
    }

    /// Span of the given vectors.
    ///
    /// The rank is the number of singular values of the stacked input above
    /// `tol * s_max`.
    pub fn orthonormalize(vectors: &[Vector], ambient_dim: usize, field: Field, tol: f64) -> Result<Self> {
        if ambient_dim == 0 {
            return Err(Error::EmptyAmbient);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient_dim}",
                v.len()
            )));
        }
        let mut m = Matrix::zeros(ambient_dim, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            m.set_column(j, v);
        }
        Ok(Subspace::span_columns(&m, field, tol))
    }

    /// Span of the columns of `m`, with a purely relative rank decision.
    pub fn span_columns(m: &Matrix, field: Field, tol: f64) -> Self {
        Subspace::from_orthonormal(linalg::column_space(m, field, tol, 0.0), field, tol)
    }

    /// Span of the columns of `m`, treating the input as unit-scaled: columns
    /// whose weight is below `tol` in absolute terms are discarded.
    pub(crate) fn span_unit_scaled(m: &Matrix, field: Field, tol: f64) -> Self {
        Subspace::from_orthonormal(linalg::column_space(m, field, tol, 1.0), field, tol)
    }

    /// Span of a standard-basis selection `e_i` for `i` in `indices`.
    pub fn coordinate(ambient_dim: usize, indices: &[usize], field: Field) -> Self {
        let mut m = Matrix::zeros(ambient_dim, indices.len());
        for (j, &i) in indices.iter().enumerate() {
            m[(i, j)] = linalg::c(1.0);
        }
        Subspace::from_orthonormal(m, field, DEFAULT_TOL)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vector> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {}",
                self.ambient_dim(),
                other.ambient_dim()
            )));
        }
        Ok(())
    }

    fn check_vector(&self, v: &Vector) -> Result<()> {
        if v.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim()
            )));
        }
        Ok(())
    }

    pub fn complement(&self) -> Subspace {
        let basis = linalg::complement_of_orthonormal(&self.basis, self.field);
        Subspace::from_orthonormal(basis, self.field, self.tol)
    }

    /// Orthogonal projector onto the subspace as a dense matrix.
    pub fn projector(&self) -> Matrix {
        &self.basis * self.basis.adjoint()
    }

    pub fn project(&self, v: &Vector) -> Result<Vector> {
        self.check_vector(v)?;
        Ok(&self.basis * (self.basis.adjoint() * v))
    }

    /// Component of `v` orthogonal to the subspace.
    pub fn reject(&self, v: &Vector) -> Result<Vector> {
        Ok(v - self.project(v)?)
    }

    /// `‖v − Pv‖ ≤ tol · max(‖v‖, 1)`.
    pub fn member(&self, v: &Vector, tol: f64) -> Result<bool> {
        let r = self.reject(v)?.norm();
        Ok(r <= tol * v.norm().max(1.0))
    }

    /// Sum `S1 + S2` and intersection `S1 ∩ S2` from a single rank decision,
    /// so that `dim S1 + dim S2 = dim(S1 + S2) + dim(S1 ∩ S2)` holds exactly.
    pub fn sum_and_intersection(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        self.check_ambient(other)?;
        let field = self.field.join(other.field);
        let tol = self.tol.max(other.tol);
        let r1 = self.rank();
        let stacked = linalg::hstack(&self.basis, &other.basis);
        // Null vectors (a, b) of [B1 B2] give B1 a = B2 (-b) in the intersection.
        let d = linalg::svd(&stacked.adjoint(), field);
        let rank = linalg::numerical_rank(&d.s, tol, 1.0);
        let row_space = d.u.columns(0, rank).into_owned();
        let null = linalg::complement_of_orthonormal(&row_space, field);
        let sum_basis = {
            // Left singular vectors of [B1 B2] are the right ones of its adjoint.
            d.v.columns(0, rank).into_owned()
        };
        let images = &self.basis * null.rows(0, r1);
        let inter_basis = orthonormal_full(&images, field);
        Ok((
            Subspace::from_orthonormal(sum_basis, field, tol),
            Subspace::from_orthonormal(inter_basis, field, tol),
        ))
    }

    pub fn sum_span(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.sum_and_intersection(other)?.0)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.sum_and_intersection(other)?.1)
    }

    /// Sines of the principal angles between `self` and `other`, descending.
    ///
    /// Defined for subspaces of equal rank; when ranks differ the largest angle
    /// is reported as π/2 (sine 1).
    pub fn principal_angle_sines(&self, other: &Subspace) -> Result<Vec<f64>> {
        self.check_ambient(other)?;
        if self.rank() != other.rank() {
            return Ok(vec![1.0]);
        }
        let residual = &other.basis - self.projector() * &other.basis;
        Ok(linalg::singular_values(&residual, self.field.join(other.field)))
    }

    /// Largest principal angle in radians (π/2 when ranks differ).
    pub fn max_principal_angle(&self, other: &Subspace) -> Result<f64> {
        let sines = self.principal_angle_sines(other)?;
        let s = sines.first().copied().unwrap_or(0.0).min(1.0);
        Ok(s.asin())
    }

    /// `S2 ⊆ S1` when every unit vector of `S2` is within `tol` of `S1`.
    pub fn contains(&self, other: &Subspace, tol: f64) -> Result<bool> {
        self.check_ambient(other)?;
        if other.rank() > self.rank() {
            return Ok(false);
        }
        let residual = &other.basis - self.projector() * &other.basis;
        Ok(linalg::norm2(&residual) <= tol)
    }

    /// Equality up to a largest principal angle below `tol`.
    pub fn equals(&self, other: &Subspace, tol: f64) -> Result<bool> {
        Ok(self.rank() == other.rank() && self.max_principal_angle(other)? < tol)
    }
}

/// Orthonormal basis for the columns of a matrix known to have full column rank.
pub(crate) fn orthonormal_full(m: &Matrix, field: Field) -> Matrix {
    let k = m.ncols();
    if k == 0 {
        return Matrix::zeros(m.nrows(), 0);
    }
    linalg::svd(m, field).u.columns(0, k).into_owned()
}

/// Distance between the parallel cosets `v1 + N` and `v2 + N`.
pub fn coset_distance(v1: &Vector, v2: &Vector, n: &Subspace) -> Result<f64> {
    if v1.len() != v2.len() {
        return Err(Error::DimensionMismatch(format!("vectors of length {} and {}", v1.len(), v2.len())));
    }
    Ok(n.reject(&(v1 - v2))?.norm())
}

/// Convenience constructor for real vectors.
pub fn real_vector(xs: &[f64]) -> Vector {
    Vector::from_iterator(xs.len(), xs.iter().map(|&x| linalg::c(x)))
}

/// Convenience constructor for complex vectors from `(re, im)` pairs.
pub fn complex_vector(xs: &[(f64, f64)]) -> Vector {
    Vector::from_iterator(xs.len(), xs.iter().map(|&(re, im)| C64::new(re, im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn span(vs: &[&[f64]], n: usize) -> Subspace {
        let vecs: Vec<Vector> = vs.iter().map(|v| real_vector(v)).collect();
        Subspace::orthonormalize(&vecs, n, Field::Real, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn collinear_input_has_rank_one() {
        let s = span(&[&[1.0, 0.0], &[2.0, 0.0]], 2);
        assert_eq!(s.rank(), 1);
        assert!(s.equals(&span(&[&[1.0, 0.0]], 2), 1e-12).unwrap());
    }

    #[test]
    fn empty_input_is_zero_subspace() {
        let s = Subspace::orthonormalize(&[], 3, Field::Real, DEFAULT_TOL).unwrap();
        assert_eq!(s.rank(), 0);
        assert_eq!(s.ambient_dim(), 3);
        assert_eq!(s.basis().ncols(), 0);
    }

    #[test]
    fn near_collinear_input_collapses() {
        // The 2x2 stack has s2/s1 ≈ 3.5e-16 < 1e-10.
        let s = span(&[&[1.0, 1.0], &[1.0, 1.0 + 1e-15]], 2);
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn orthonormalize_rejects_bad_dims() {
        let v = vec![real_vector(&[1.0, 0.0]), real_vector(&[1.0])];
        assert!(matches!(
            Subspace::orthonormalize(&v, 2, Field::Real, DEFAULT_TOL),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(Subspace::orthonormalize(&[], 0, Field::Real, DEFAULT_TOL).unwrap_err(), Error::EmptyAmbient);
    }

    #[test]
    fn complements() {
        let s = span(&[&[1.0, 0.0]], 2);
        assert!(s.complement().equals(&span(&[&[0.0, 1.0]], 2), 1e-12).unwrap());
        let z = Subspace::zero(3, Field::Real);
        assert!(z.complement().is_full());
        let d = span(&[&[1.0, 1.0]], 2);
        assert!(d.complement().equals(&span(&[&[1.0, -1.0]], 2), 1e-12).unwrap());
    }

    #[test]
    fn plane_intersection() {
        let xy = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], 3);
        let yz = span(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]], 3);
        let (sum, inter) = xy.sum_and_intersection(&yz).unwrap();
        assert!(sum.is_full());
        assert!(inter.equals(&span(&[&[0.0, 1.0, 0.0]], 3), 1e-12).unwrap());
        assert!(xy.intersect(&xy).unwrap().equals(&xy, 1e-12).unwrap());
    }

    #[test]
    fn projection_examples() {
        let s = span(&[&[1.0, 0.0]], 2);
        let p = s.project(&real_vector(&[3.0, 4.0])).unwrap();
        assert!((p - real_vector(&[3.0, 0.0])).norm() < 1e-15);
        assert!(s.member(&real_vector(&[0.0, 0.0]), 1e-12).unwrap());
        assert!(s.equals(&span(&[&[2.0, 0.0]], 2), 1e-12).unwrap());
        assert!(s.project(&real_vector(&[1.0])).is_err());
    }

    #[test]
    fn coset_distance_examples() {
        let n = span(&[&[1.0, 1.0]], 2);
        let v1 = real_vector(&[1.0, 0.0]);
        let v2 = real_vector(&[0.0, 0.0]);
        // Least-squares oracle: min over t of |(1,0) - t(1,1)| at t = 1/2.
        let oracle = (real_vector(&[1.0, 0.0]) - real_vector(&[0.5, 0.5])).norm();
        assert!((coset_distance(&v1, &v2, &n).unwrap() - oracle).abs() < 1e-15);
        assert!((oracle - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(coset_distance(&v1, &v1, &n).unwrap(), 0.0);
        let zero = Subspace::zero(2, Field::Real);
        assert!((coset_distance(&v1, &v2, &zero).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn containment() {
        let xy = span(&[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]], 3);
        let x = span(&[&[1.0, 0.0, 0.0]], 3);
        assert!(xy.contains(&x, 1e-12).unwrap());
        assert!(!x.contains(&xy, 1e-12).unwrap());
    }

    #[test]
    fn complex_span_is_not_real_span() {
        let v = complex_vector(&[(1.0, 0.0), (0.0, 1.0)]);
        let s = Subspace::orthonormalize(std::slice::from_ref(&v), 2, Field::Complex, DEFAULT_TOL).unwrap();
        let w = &v * C64::new(0.0, 1.0);
        assert!(s.member(&w, 1e-12).unwrap());
        assert!(!s.member(&complex_vector(&[(1.0, 0.0), (0.0, -1.0)]), 1e-6).unwrap());
    }
}
